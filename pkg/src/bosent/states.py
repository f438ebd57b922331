"""Pure states, sector-block density matrices and the special constructions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .fock_space import BasisError, FockBasis, count_states, party_occupations
from .numerics import DEFAULT_TOLERANCE, TolerancePolicy, hermiticity_deviation, eigvalsh


class StateError(ValueError):
    """A state or constructor argument violates its invariants."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.shape != (self.basis.dim,):
            raise StateError(f"expected {self.basis.dim} amplitudes, got {amps.shape[0]}")
        if not np.all(np.isfinite(amps)):
            raise StateError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def validate(self, tol: TolerancePolicy | None = None) -> "PureState":
        tol = tol or DEFAULT_TOLERANCE
        if abs(self.norm() ** 2 - 1.0) >= tol.reconstruction_tol:
            raise StateError(f"pure state is not normalised (norm^2 = {self.norm() ** 2!r})")
        return self

    def coefficient_matrix(self, k: int) -> np.ndarray:
        """The ``d1 x d2`` coefficients of sector ``k``."""
        shape = self.basis.sector(k)
        return self.amplitudes[self.basis.sector_slice(k)].reshape(shape.d1, shape.d2)

    def amplitude(self, occ: Sequence[int]) -> complex:
        return complex(self.amplitudes[self.basis.flat_index(*self.basis.index_of(occ))])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Density operator stored as sector blocks ``(k, l) -> rho_{k.., l..}``.

    Missing blocks are zero.  Rows of block ``(k, l)`` run over ``(sigma, sigma_r)``
    of sector ``k``, columns over ``(tau, tau_r)`` of sector ``l``.
    """

    basis: FockBasis
    blocks: Mapping[tuple[int, int], np.ndarray]

    def __post_init__(self):
        fb = self.basis
        clean = {}
        for (k, l), b in self.blocks.items():
            sk, sl = fb.sector(k), fb.sector(l)
            b = _frozen(b)
            if b.shape != (sk.size, sl.size):
                raise StateError(f"block ({k}, {l}) has shape {b.shape}, expected {(sk.size, sl.size)}")
            if not np.all(np.isfinite(b)):
                raise StateError(f"block ({k}, {l}) has non-finite entries")
            if b.size and np.any(b):
                clean[(int(k), int(l))] = b
        object.__setattr__(self, "blocks", clean)

    @classmethod
    def from_dense(cls, basis: FockBasis, matrix, tol: TolerancePolicy | None = None,
                   validate: bool = True) -> "DensityMatrix":
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (basis.dim, basis.dim):
            raise StateError(f"dense matrix has shape {matrix.shape}, expected {(basis.dim, basis.dim)}")
        blocks = {}
        ks = basis.nonempty_sectors()
        for k in ks:
            for l in ks:
                blocks[(k, l)] = matrix[basis.sector_slice(k), basis.sector_slice(l)]
        rho = cls(basis, blocks)
        return rho.validate(tol) if validate else rho

    def block(self, k: int, l: int) -> np.ndarray:
        b = self.blocks.get((k, l))
        if b is None:
            return np.zeros((self.basis.sector(k).size, self.basis.sector(l).size), dtype=complex)
        return b

    def minor(self, k: int) -> np.ndarray:
        return self.block(k, k)

    def is_block_diagonal(self) -> bool:
        return all(k == l for k, l in self.blocks)

    def to_dense(self) -> np.ndarray:
        fb = self.basis
        out = np.zeros((fb.dim, fb.dim), dtype=complex)
        for (k, l), b in self.blocks.items():
            out[fb.sector_slice(k), fb.sector_slice(l)] = b
        return out

    def trace(self) -> float:
        return float(sum(np.real(np.trace(b)) for (k, l), b in self.blocks.items() if k == l))

    def scaled_blocks(self, factors: Mapping[tuple[int, int], float]) -> "DensityMatrix":
        return DensityMatrix(self.basis, {kl: b * factors.get(kl, 1.0) for kl, b in self.blocks.items()})

    def hermiticity_deviation(self) -> float:
        dev = 0.0
        for (k, l), b in self.blocks.items():
            other = self.block(l, k)
            if b.size:
                dev = max(dev, float(np.max(np.abs(b - other.conj().T))))
        return dev

    def min_eigenvalue(self) -> float:
        return float(eigvalsh(self.to_dense(), TolerancePolicy.uniform(1e-6))[0])

    def validate(self, tol: TolerancePolicy | None = None) -> "DensityMatrix":
        tol = tol or DEFAULT_TOLERANCE
        dev = self.hermiticity_deviation()
        if dev >= tol.hermiticity_tol:
            raise StateError(f"density matrix is not Hermitian (deviation {dev:.3e})")
        tr = self.trace()
        if abs(tr - 1.0) >= tol.trace_tol:
            raise StateError(f"density matrix trace is {tr!r}, expected 1")
        lam = self.min_eigenvalue()
        if lam < -tol.psd_floor * tr:
            raise StateError(f"density matrix is not positive semidefinite (min eigenvalue {lam:.3e})")
        return self


@dataclass(frozen=True)
class PolynomialSpec:
    """Polynomial in one party's creation operators.

    ``terms`` is a sequence of ``(coefficient, degrees)`` where ``degrees[i]`` is
    the power of the creation operator of that party's i-th mode.
    """

    terms: tuple[tuple[complex, tuple[int, ...]], ...]

    def __post_init__(self):
        terms = tuple((complex(c), tuple(int(d) for d in deg)) for c, deg in self.terms)
        if not terms:
            raise StateError("polynomial must have at least one term")
        for _, deg in terms:
            if any(d < 0 for d in deg):
                raise StateError(f"negative degree in monomial {deg}")
        if len({len(deg) for _, deg in terms}) != 1:
            raise StateError("all monomials must cover the same number of modes")
        object.__setattr__(self, "terms", terms)

    @property
    def n_modes(self) -> int:
        return len(self.terms[0][1])

    def degree(self) -> int:
        """Common total degree; raises if the polynomial is not homogeneous."""
        degrees = {sum(deg) for _, deg in self.terms}
        if len(degrees) != 1:
            raise StateError(f"polynomial is not homogeneous (degrees {sorted(degrees)})")
        return degrees.pop()

    def apply_to_vacuum(self) -> np.ndarray:
        """Unnormalised party vector ``P(a^dagger)|0>`` in that party's sector order."""
        n = self.degree()
        occs = party_occupations(n, self.n_modes)
        index = {o: i for i, o in enumerate(occs)}
        vec = np.zeros(len(occs), dtype=complex)
        for c, deg in self.terms:
            # (a^dagger)^n |0> = sqrt(n!) |n>
            vec[index[deg]] += c * math.sqrt(math.prod(math.factorial(d) for d in deg))
        return vec


@dataclass(frozen=True)
class NumberSectorMixture:
    components: tuple[tuple[float, DensityMatrix], ...]

    def __post_init__(self):
        comps = tuple((float(w), rho) for w, rho in self.components)
        if not comps:
            raise StateError("mixture needs at least one component")
        weights = np.array([w for w, _ in comps])
        if np.any(weights < 0):
            raise StateError("mixture weights must be non-negative")
        if abs(weights.sum() - 1.0) >= DEFAULT_TOLERANCE.trace_tol * max(1, len(comps)):
            raise StateError(f"mixture weights sum to {weights.sum()!r}, expected 1")
        if len({rho.basis.N for _, rho in comps}) != len(comps):
            raise StateError("each particle number may appear only once in a mixture")
        for _, rho in comps:
            if not isinstance(rho, DensityMatrix):
                raise StateError("mixture components must be DensityMatrix instances")
        object.__setattr__(self, "components", comps)


# ---------------------------------------------------------------- constructors


def from_fock_occupation(basis: FockBasis, occ: Sequence[int]) -> PureState:
    try:
        labels = basis.index_of(occ)
    except BasisError as exc:
        raise StateError(str(exc)) from exc
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.flat_index(*labels)] = 1.0
    return PureState(basis, amps)


def from_local_polynomials(basis: FockBasis, P: PolynomialSpec, Q: PolynomialSpec) -> PureState:
    """Normalised ``P(a^dagger_left) Q(a^dagger_right) |0>``."""
    if P.n_modes != basis.m or Q.n_modes != basis.bipartition.m_right:
        raise StateError(
            f"polynomials act on {P.n_modes} and {Q.n_modes} modes, "
            f"bipartition has {basis.m} and {basis.bipartition.m_right}")
    k = P.degree()
    if k + Q.degree() != basis.N:
        raise StateError(f"degrees {k} + {Q.degree()} do not add up to N={basis.N}")
    coeffs = np.outer(P.apply_to_vacuum(), Q.apply_to_vacuum())
    norm = np.linalg.norm(coeffs)
    if norm == 0:
        raise StateError("polynomial product annihilates to the zero vector")
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.sector_slice(k)] = (coeffs / norm).ravel()
    return PureState(basis, amps)


def pure_state(basis: FockBasis, amplitudes, normalize: bool = False) -> PureState:
    amps = np.asarray(amplitudes, dtype=complex)
    if normalize:
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise StateError("cannot normalise the zero vector")
        amps = amps / norm
    return PureState(basis, amps).validate()


def pure_to_density(psi: PureState, tol: TolerancePolicy | None = None) -> DensityMatrix:
    psi.validate(tol)
    fb = psi.basis
    blocks = {}
    for k in fb.nonempty_sectors():
        ck = psi.amplitudes[fb.sector_slice(k)]
        if not np.any(ck):
            continue
        for l in fb.nonempty_sectors():
            cl = psi.amplitudes[fb.sector_slice(l)]
            if np.any(cl):
                blocks[(k, l)] = np.outer(ck, cl.conj())
    return DensityMatrix(fb, blocks).validate(tol)


def mix(weights: Sequence[float], states: Sequence[PureState | DensityMatrix],
        tol: TolerancePolicy | None = None) -> DensityMatrix:
    weights = np.asarray(weights, dtype=float)
    if len(weights) != len(states) or len(states) == 0:
        raise StateError("need one weight per state and at least one state")
    if np.any(weights < 0):
        raise StateError("mixture weights must be non-negative")
    if abs(weights.sum() - 1.0) >= (tol or DEFAULT_TOLERANCE).trace_tol * max(1, len(weights)):
        raise StateError(f"mixture weights sum to {weights.sum()!r}, expected 1")
    fb = states[0].basis
    blocks: dict[tuple[int, int], np.ndarray] = {}
    for w, s in zip(weights, states):
        if s.basis != fb:
            raise StateError("all mixed states must share one basis")
        rho = pure_to_density(s, tol) if isinstance(s, PureState) else s
        for kl, b in rho.blocks.items():
            blocks[kl] = blocks.get(kl, 0) + w * b
    return DensityMatrix(fb, blocks).validate(tol)


def random_density(basis: FockBasis, rank: int, seed: int | None = None,
                   tol: TolerancePolicy | None = None) -> DensityMatrix:
    """Ginibre-induced random state: ``G G^dagger / Tr`` with ``G`` of shape ``dim x rank``."""
    if not 1 <= rank <= basis.dim:
        raise StateError(f"rank must lie in 1..{basis.dim}, got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((basis.dim, rank)) + 1j * rng.standard_normal((basis.dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.real(np.trace(rho))
    return DensityMatrix.from_dense(basis, rho, tol)


def random_pure(basis: FockBasis, seed: int | None = None) -> PureState:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
    return PureState(basis, v / np.linalg.norm(v))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def block_diagonal_project(rho: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(rho.basis, {(k, l): b for (k, l), b in rho.blocks.items() if k == l})


def apply_local_unitaries(rho: DensityMatrix, left: Mapping[int, np.ndarray],
                          right: Mapping[int, np.ndarray]) -> DensityMatrix:
    """Conjugate by ``U (+) V`` with ``left[a]`` acting on the a-boson left sector
    and ``right[b]`` on the b-boson right sector.  Missing entries mean identity."""
    fb = rho.basis

    def local(k):
        s = fb.sector(k)
        u = left.get(k, np.eye(s.d1))
        v = right.get(fb.N - k, np.eye(s.d2))
        if u.shape != (s.d1, s.d1) or v.shape != (s.d2, s.d2):
            raise StateError(f"local unitary shapes do not match sector {k}")
        return np.kron(u, v)

    w = {k: local(k) for k in fb.nonempty_sectors()}
    return DensityMatrix(fb, {(k, l): w[k] @ b @ w[l].conj().T for (k, l), b in rho.blocks.items()})


def horodecki_qutrit_state(a: float) -> np.ndarray:
    """The one-parameter two-qutrit PPT entangled family, ``0 <= a <= 1``.

    Written in the standard product basis ``|i j>`` with index ``3 i + j``.
    PPT for every ``a`` in [0, 1]; entangled for ``0 < a < 1``.
    """
    if not 0.0 <= a <= 1.0:
        raise StateError(f"parameter a must lie in [0, 1], got {a}")
    s = np.zeros((9, 9))
    for i in (0, 4, 8):
        for j in (0, 4, 8):
            s[i, j] = a
    for i in (1, 2, 3, 5, 7):
        s[i, i] = a
    s[6, 6] = (1 + a) / 2
    s[8, 8] = (1 + a) / 2
    s[6, 8] = s[8, 6] = math.sqrt(1 - a * a) / 2
    return s / (8 * a + 1)


def embed_qutrit_block(basis: FockBasis, sigma9, weights: Sequence[float] | None = None,
                       fillers: Mapping[int, np.ndarray] | None = None,
                       tol: TolerancePolicy | None = None) -> DensityMatrix:
    """Block-diagonal N=4, (2, 2)-mode state whose k=2 minor is ``weights[2] * sigma9``.

    The k=2 Fock vectors ``|sigma; sigma_r>`` (sigma, sigma_r in 0..2, basis order)
    are identified with the qutrit product basis ``|sigma> (x) |sigma_r>``.
    Other sectors get ``fillers[k]`` (unit trace) or, by default, the normalised
    identity.  Default weights are proportional to the sector sizes 5, 8, 9, 8, 5.
    """
    tol = tol or DEFAULT_TOLERANCE
    if (basis.N, basis.M, basis.m) != (4, 4, 2):
        raise StateError("embed_qutrit_block needs the N=4, M=4, m=2 basis")
    sigma9 = np.asarray(sigma9, dtype=complex)
    if sigma9.shape != (9, 9):
        raise StateError(f"embedded block must be 9x9, got {sigma9.shape}")
    if hermiticity_deviation(sigma9) >= tol.hermiticity_tol:
        raise StateError("embedded block is not Hermitian")
    if abs(np.real(np.trace(sigma9)) - 1) >= tol.trace_tol:
        raise StateError("embedded block must have unit trace")
    if eigvalsh(sigma9)[0] < -tol.psd_floor:
        raise StateError("embedded block is not positive semidefinite")
    if weights is None:
        sizes = np.array([s.size for s in basis.sectors], dtype=float)
        weights = sizes / sizes.sum()
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (5,) or np.any(weights < 0) or abs(weights.sum() - 1) >= tol.trace_tol:
        raise StateError("weights must be 5 non-negative numbers summing to 1")
    fillers = dict(fillers or {})
    blocks = {}
    for k in range(5):
        size = basis.sector(k).size
        if k == 2:
            blk = sigma9
        else:
            blk = np.asarray(fillers.get(k, np.eye(size) / size), dtype=complex)
            if blk.shape != (size, size) or abs(np.trace(blk) - 1) >= tol.trace_tol:
                raise StateError(f"filler for sector {k} must be a unit-trace {size}x{size} matrix")
        blocks[(k, k)] = weights[k] * blk
    return DensityMatrix(basis, blocks).validate(tol)


def perturb_offdiagonal(rho: DensityMatrix, eps: float, seed: int | None = None,
                        tol: TolerancePolicy | None = None) -> DensityMatrix:
    """``(1 - eps) rho + eps |tau><tau|`` with ``tau`` a random pure state spread over all sectors."""
    if eps < 0 or eps > 1:
        raise StateError(f"eps must lie in [0, 1], got {eps}")
    if eps == 0:
        return rho
    fb = rho.basis
    if len(fb.nonempty_sectors()) < 2:
        raise StateError("perturbation needs at least two non-empty sectors")
    tau = pure_to_density(random_pure(fb, seed), tol)
    keys = set(rho.blocks) | set(tau.blocks)
    blocks = {kl: (1 - eps) * rho.block(*kl) + eps * tau.block(*kl) for kl in keys}
    return DensityMatrix(fb, blocks).validate(tol)


def sector_product_state(basis: FockBasis, k: int, left, right) -> PureState:
    """``left (x) right`` placed in sector ``k`` and normalised."""
    s = basis.sector(k)
    left = np.asarray(left, dtype=complex)
    right = np.asarray(right, dtype=complex)
    if left.shape != (s.d1,) or right.shape != (s.d2,):
        raise StateError(f"factor shapes {left.shape}, {right.shape} do not match sector {s}")
    v = np.kron(left, right)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise StateError("product vector is zero")
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.sector_slice(k)] = v / norm
    return PureState(basis, amps)


def random_separable(basis: FockBasis, n_terms: int, seed: int | None = None) -> DensityMatrix:
    """Convex mixture of random sector-local product states."""
    rng = np.random.default_rng(seed)
    ks = basis.nonempty_sectors()
    states = []
    for _ in range(n_terms):
        k = int(rng.choice(ks))
        s = basis.sector(k)
        left = rng.standard_normal(s.d1) + 1j * rng.standard_normal(s.d1)
        right = rng.standard_normal(s.d2) + 1j * rng.standard_normal(s.d2)
        states.append(sector_product_state(basis, k, left, right))
    w = rng.random(n_terms)
    w /= w.sum()
    # renormalising keeps the weights summing to 1 within rounding
    w[-1] = 1.0 - w[:-1].sum()
    return mix(w, states)


def number_sector_mixture(components: Iterable[tuple[float, DensityMatrix]]) -> NumberSectorMixture:
    return NumberSectorMixture(tuple(components))
