"""Partial transposition on the left party.

Two independent routes:

* :func:`realign_block` rearranges one sector block ``(k, l)`` into the operator
  it becomes after transposition, mapping the ``(k, N-l)`` product space into
  ``(l, N-k)``.  No extended-space matrix is ever built.
* :func:`extended_partial_transpose` embeds the state in the full product of the
  two parties' 0..N boson spaces and transposes the left tensor factor of the
  dense matrix.  It is meant as a brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock_space import ExtendedSpace, FockBasis, extended_space
from .states import DensityMatrix, StateError

DEFAULT_EXTENDED_CAP = 4096


class ExtendedCapError(RuntimeError):
    """Dense extended-space construction refused because it is too large."""

    def __init__(self, D1: int, D2: int, cap: int):
        self.D1, self.D2, self.cap = D1, D2, cap
        super().__init__(f"extended space D1*D2 = {D1}*{D2} = {D1 * D2} exceeds cap {cap}")


def realign_block(rho: DensityMatrix, k: int, l: int) -> np.ndarray:
    """Block ``(k, l)`` after partial transposition.

    Entry at row ``(tau, sigma_r)``, column ``(sigma, tau_r)`` equals
    ``rho[k sigma sigma_r, l tau tau_r]``; shape ``(d1(l) d2(k), d1(k) d2(l))``.
    For ``k == l`` this is the ordinary partial transpose of the minor.
    """
    fb = rho.basis
    try:
        sk, sl = fb.sector(k), fb.sector(l)
    except ValueError as exc:
        raise StateError(str(exc)) from exc
    b = rho.block(k, l).reshape(sk.d1, sk.d2, sl.d1, sl.d2)
    # (sigma, sigma_r, tau, tau_r) -> (tau, sigma_r, sigma, tau_r)
    return b.transpose(2, 1, 0, 3).reshape(sl.d1 * sk.d2, sk.d1 * sl.d2)


def partial_transpose_dense(matrix: np.ndarray, d1: int, d2: int) -> np.ndarray:
    """Transpose the first tensor factor of a ``(d1 d2) x (d1 d2)`` matrix."""
    matrix = np.asarray(matrix)
    if matrix.shape != (d1 * d2, d1 * d2):
        raise ValueError(f"matrix shape {matrix.shape} incompatible with {d1}x{d2}")
    return matrix.reshape(d1, d2, d1, d2).transpose(2, 1, 0, 3).reshape(d1 * d2, d1 * d2)


def partial_transpose_second_dense(matrix: np.ndarray, d1: int, d2: int) -> np.ndarray:
    """Transpose the second tensor factor."""
    return matrix.reshape(d1, d2, d1, d2).transpose(0, 3, 2, 1).reshape(d1 * d2, d1 * d2)


@dataclass(frozen=True, eq=False)
class ExtendedOperator:
    space: ExtendedSpace
    matrix: np.ndarray
    embedding: np.ndarray  # fixed-N basis index -> extended index

    def sector_block(self, a_row: int, b_row: int, a_col: int, b_col: int) -> np.ndarray:
        rows = self.space.sector_indices(a_row, b_row)
        cols = self.space.sector_indices(a_col, b_col)
        return self.matrix[np.ix_(rows, cols)]


def embedding_indices(fb: FockBasis, space: ExtendedSpace | None = None) -> np.ndarray:
    """Extended-space index of each fixed-N basis vector, in global basis order."""
    space = space or extended_space(fb)
    idx = np.empty(fb.dim, dtype=np.int64)
    for s in fb.sectors:
        if s.size == 0:
            continue
        idx[fb.sector_slice(s.k)] = space.sector_indices(s.k, fb.N - s.k)
    return idx


def _check_cap(space: ExtendedSpace, cap: int):
    if space.dim > cap:
        raise ExtendedCapError(space.D1, space.D2, cap)


def embed(rho: DensityMatrix, cap: int = DEFAULT_EXTENDED_CAP) -> ExtendedOperator:
    """The state itself as a dense operator on the extended space."""
    fb = rho.basis
    space = extended_space(fb)
    _check_cap(space, cap)
    idx = embedding_indices(fb, space)
    out = np.zeros((space.dim, space.dim), dtype=complex)
    out[np.ix_(idx, idx)] = rho.to_dense()
    return ExtendedOperator(space, out, idx)


def extended_partial_transpose(rho: DensityMatrix, cap: int = DEFAULT_EXTENDED_CAP) -> ExtendedOperator:
    emb = embed(rho, cap)
    sp = emb.space
    return ExtendedOperator(sp, partial_transpose_dense(emb.matrix, sp.D1, sp.D2), emb.embedding)


def transpose_first_party(op: ExtendedOperator) -> ExtendedOperator:
    sp = op.space
    return ExtendedOperator(sp, partial_transpose_dense(op.matrix, sp.D1, sp.D2), op.embedding)


def extended_partial_transpose_second(rho: DensityMatrix, cap: int = DEFAULT_EXTENDED_CAP) -> ExtendedOperator:
    emb = embed(rho, cap)
    sp = emb.space
    return ExtendedOperator(sp, partial_transpose_second_dense(emb.matrix, sp.D1, sp.D2), emb.embedding)
