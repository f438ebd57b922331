"""Fixed-N bosonic Fock basis organised by a mode bipartition.

A basis vector is labelled by ``(k, sigma, sigma_r)``: ``k`` bosons sit in the
first ``m`` modes (left party), ``sigma`` enumerates how they fill those modes
and ``sigma_r`` enumerates how the remaining ``N - k`` bosons fill the other
``M - m`` modes.  Within a party, occupations are listed in descending
lexicographic order, so "everything in the party's first mode" has index 0.

Global ordering: sectors by ascending ``k``; inside a sector the left index
varies slowest, i.e. ``offset[k] + sigma * d2 + sigma_r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

# Dimensions drive dense allocations; anything past this is a user error.
MAX_DIMENSION = 2**31 - 1


class BasisError(ValueError):
    """Invalid bipartition, particle count, or occupation vector."""


def count_states(n: int, modes: int) -> int:
    """Number of ways to place ``n`` identical bosons in ``modes`` modes."""
    if n < 0 or modes < 0:
        raise BasisError(f"negative argument: n={n}, modes={modes}")
    if n == 0:
        return 1
    if modes == 0:
        return 0
    value = math.comb(n + modes - 1, n)
    if value > MAX_DIMENSION:
        raise BasisError(f"dimension C({n + modes - 1}, {n}) = {value} exceeds {MAX_DIMENSION}")
    return value


@lru_cache(maxsize=None)
def party_occupations(n: int, modes: int) -> tuple[tuple[int, ...], ...]:
    """All occupations of ``modes`` modes by ``n`` bosons, descending lex order."""
    if modes == 0:
        return ((),) if n == 0 else ()
    if modes == 1:
        return ((n,),)
    out = []
    for first in range(n, -1, -1):
        for rest in party_occupations(n - first, modes - 1):
            out.append((first,) + rest)
    return tuple(out)


@dataclass(frozen=True)
class ModeBipartition:
    M: int
    m: int

    def __post_init__(self):
        if not isinstance(self.M, (int, np.integer)) or not isinstance(self.m, (int, np.integer)):
            raise BasisError("mode counts must be integers")
        if self.M < 1:
            raise BasisError(f"need at least one mode, got M={self.M}")
        if not 0 <= self.m <= self.M:
            raise BasisError(f"left-party mode count must satisfy 0 <= m <= M, got m={self.m}, M={self.M}")

    @property
    def m_right(self) -> int:
        return self.M - self.m


@dataclass(frozen=True)
class SectorShape:
    k: int
    d1: int
    d2: int

    @property
    def size(self) -> int:
        return self.d1 * self.d2


def sector_dims(N: int, bip: ModeBipartition, k: int) -> tuple[int, int]:
    """``(d1, d2)`` for the sector with ``k`` bosons on the left party."""
    if N < 0:
        raise BasisError(f"particle count must be non-negative, got N={N}")
    if not 0 <= k <= N:
        raise BasisError(f"sector index k={k} outside 0..{N}")
    return count_states(k, bip.m), count_states(N - k, bip.m_right)


@dataclass(frozen=True, eq=False)
class FockBasis:
    """Immutable enumerated basis; build with :func:`build_basis`."""

    N: int
    bipartition: ModeBipartition
    sectors: tuple[SectorShape, ...]
    offsets: tuple[int, ...]
    _lookup: dict = field(repr=False)

    @property
    def M(self) -> int:
        return self.bipartition.M

    @property
    def m(self) -> int:
        return self.bipartition.m

    @property
    def dim(self) -> int:
        return self.offsets[-1] + self.sectors[-1].size

    def sector(self, k: int) -> SectorShape:
        if not 0 <= k <= self.N:
            raise BasisError(f"sector index k={k} outside 0..{self.N}")
        return self.sectors[k]

    def sector_slice(self, k: int) -> slice:
        start = self.offsets[k]
        return slice(start, start + self.sectors[k].size)

    def nonempty_sectors(self) -> list[int]:
        return [s.k for s in self.sectors if s.size > 0]

    def left_occupations(self, k: int) -> tuple[tuple[int, ...], ...]:
        return party_occupations(k, self.m)

    def right_occupations(self, k: int) -> tuple[tuple[int, ...], ...]:
        return party_occupations(self.N - k, self.bipartition.m_right)

    def index_of(self, occ: Sequence[int]) -> tuple[int, int, int]:
        occ = self._check_occupation(occ)
        return self._lookup[occ]

    def occupation_of(self, k: int, sigma: int, sigma_r: int) -> tuple[int, ...]:
        shape = self.sector(k)
        if not (0 <= sigma < shape.d1 and 0 <= sigma_r < shape.d2):
            raise BasisError(f"labels ({k}, {sigma}, {sigma_r}) outside sector shape {shape}")
        return self.left_occupations(k)[sigma] + self.right_occupations(k)[sigma_r]

    def flat_index(self, k: int, sigma: int, sigma_r: int) -> int:
        return self.offsets[k] + sigma * self.sectors[k].d2 + sigma_r

    def labels_of_flat(self, i: int) -> tuple[int, int, int]:
        if not 0 <= i < self.dim:
            raise BasisError(f"flat index {i} outside 0..{self.dim - 1}")
        k = int(np.searchsorted(self.offsets, i, side="right")) - 1
        while self.sectors[k].size == 0:
            k -= 1
        sigma, sigma_r = divmod(i - self.offsets[k], self.sectors[k].d2)
        return k, sigma, sigma_r

    def occupations(self) -> Iterator[tuple[int, ...]]:
        """Every basis occupation vector in global order."""
        for shape in self.sectors:
            for left in self.left_occupations(shape.k):
                for right in self.right_occupations(shape.k):
                    yield left + right

    def occupation_array(self) -> np.ndarray:
        return np.array(list(self.occupations()), dtype=int).reshape(self.dim, self.M)

    def _check_occupation(self, occ) -> tuple[int, ...]:
        occ = tuple(int(x) for x in occ)
        if len(occ) != self.M:
            raise BasisError(f"occupation {list(occ)} has length {len(occ)}, expected M={self.M}")
        if any(x < 0 for x in occ):
            raise BasisError(f"occupation {list(occ)} has negative entries")
        if sum(occ) != self.N:
            raise BasisError(f"occupation {list(occ)} sums to {sum(occ)}, expected N={self.N}")
        return occ

    def __eq__(self, other):
        if not isinstance(other, FockBasis):
            return NotImplemented
        return self.N == other.N and self.bipartition == other.bipartition

    def __hash__(self):
        return hash((self.N, self.bipartition))


def build_basis(N: int, bip: ModeBipartition) -> FockBasis:
    if not isinstance(bip, ModeBipartition):
        raise BasisError("bip must be a ModeBipartition")
    if N < 0:
        raise BasisError(f"particle count must be non-negative, got N={N}")
    sectors = []
    offsets = []
    total = 0
    for k in range(N + 1):
        d1, d2 = sector_dims(N, bip, k)
        sectors.append(SectorShape(k, d1, d2))
        offsets.append(total)
        total += d1 * d2
    if total > MAX_DIMENSION:
        raise BasisError(f"basis dimension {total} exceeds {MAX_DIMENSION}")
    lookup = {}
    for k in range(N + 1):
        lefts = party_occupations(k, bip.m)
        rights = party_occupations(N - k, bip.M - bip.m)
        for s, left in enumerate(lefts):
            for r, right in enumerate(rights):
                lookup[left + right] = (k, s, r)
    return FockBasis(N, bip, tuple(sectors), tuple(offsets), lookup)


def basis(N: int, M: int, m: int) -> FockBasis:
    """Shorthand for ``build_basis(N, ModeBipartition(M, m))``."""
    return build_basis(N, ModeBipartition(M, m))


@dataclass(frozen=True, eq=False)
class ExtendedSpace:
    """Both parties' Fock spaces with 0..N bosons each, the arena of the partial transpose.

    Left states are ordered by particle count ``a`` then by the party order used in
    :class:`FockBasis`; likewise on the right.  Composite index is
    ``left * D2 + right``.
    """

    N: int
    bipartition: ModeBipartition
    left_offsets: tuple[int, ...]
    right_offsets: tuple[int, ...]
    D1: int
    D2: int

    @property
    def dim(self) -> int:
        return self.D1 * self.D2

    def left_index(self, a: int, sigma: int) -> int:
        return self.left_offsets[a] + sigma

    def right_index(self, b: int, sigma_r: int) -> int:
        return self.right_offsets[b] + sigma_r

    def sector_indices(self, a: int, b: int) -> np.ndarray:
        """Composite indices of the (a left, b right) product block, left slowest."""
        nl = count_states(a, self.bipartition.m)
        nr = count_states(b, self.bipartition.m_right)
        left = self.left_offsets[a] + np.arange(nl)
        right = self.right_offsets[b] + np.arange(nr)
        return (left[:, None] * self.D2 + right[None, :]).ravel()


def extended_space(fb: FockBasis) -> ExtendedSpace:
    m, mr = fb.m, fb.bipartition.m_right
    lo, ro = [], []
    d1 = d2 = 0
    for a in range(fb.N + 1):
        lo.append(d1)
        ro.append(d2)
        d1 += count_states(a, m)
        d2 += count_states(a, mr)
    # closed forms C(N+m, N) and C(N+M-m, N)
    assert d1 == math.comb(fb.N + m, fb.N) and d2 == math.comb(fb.N + mr, fb.N)
    return ExtendedSpace(fb.N, fb.bipartition, tuple(lo), tuple(ro), d1, d2)
