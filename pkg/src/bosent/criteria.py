"""Separability and PPT deciders for fixed-N bosonic states."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .negativity import NegativityReport, negativity_general
from .numerics import DEFAULT_TOLERANCE, TolerancePolicy, eigh, min_eigenvalue, singular_values, trace_norm
from .partial_transpose import realign_block
from .states import DensityMatrix, PureState, StateError


class Verdict(str, enum.Enum):
    SEPARABLE_CERTIFIED = "SeparableCertified"
    ENTANGLED_NPT = "EntangledNPT"
    PPT_UNDECIDED = "PPTUndecided"


# ------------------------------------------------------------------ pure states


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficient_matrices: dict  # k -> d1 x d2 array
    singular_values: np.ndarray  # across the whole bipartition, non-increasing
    schmidt_rank: int
    support: tuple[int, ...]  # sectors carrying nonzero weight

    @property
    def is_product(self) -> bool:
        return self.schmidt_rank == 1


def schmidt_decompose(psi: PureState, tol: TolerancePolicy | None = None) -> SchmidtDecomposition:
    """Singular values of the full cross-party coefficient matrix.

    That matrix pairs left states with ``k`` bosons against right states with
    ``N - k``, so it is block-structured and its spectrum is the union of the
    per-sector coefficient-matrix spectra.  A fixed-N pure state is a product
    exactly when the rank is 1, which forces the support into a single sector.
    """
    tol = tol or DEFAULT_TOLERANCE
    try:
        psi.validate(tol)
    except StateError as exc:
        raise StateError(f"schmidt_decompose needs a normalised state: {exc}") from exc
    fb = psi.basis
    mats, svals, support = {}, [], []
    for k in fb.nonempty_sectors():
        c = psi.coefficient_matrix(k)
        mats[k] = c
        s = singular_values(c)
        svals.append(s)
        if np.any(s > tol.zero_threshold):
            support.append(k)
    sv = np.sort(np.concatenate(svals))[::-1]
    rank = int(np.sum(sv > tol.zero_threshold))
    return SchmidtDecomposition(mats, sv, rank, tuple(support))


# ------------------------------------------------------------------ certificates


@dataclass(frozen=True)
class ProductTerm:
    weight: float
    k: int
    left: np.ndarray
    right: np.ndarray


@dataclass(frozen=True)
class SeparableCertificate:
    terms: tuple[ProductTerm, ...]

    def reconstruct(self, rho_like: DensityMatrix) -> DensityMatrix:
        fb = rho_like.basis
        blocks: dict[tuple[int, int], np.ndarray] = {}
        for t in self.terms:
            v = np.kron(t.left, t.right)
            blocks[(t.k, t.k)] = blocks.get((t.k, t.k), 0) + t.weight * np.outer(v, v.conj())
        return DensityMatrix(fb, blocks)

    def residual(self, rho: DensityMatrix) -> float:
        """Frobenius distance between ``rho`` and the certified mixture."""
        diff = rho.to_dense() - self.reconstruct(rho).to_dense()
        return float(np.linalg.norm(diff))

    def to_json(self) -> list:
        def cvec(v):
            return [[float(z.real), float(z.imag)] for z in v]
        return [{"weight": t.weight, "k": t.k, "left": cvec(t.left), "right": cvec(t.right)}
                for t in self.terms]


@dataclass(frozen=True)
class ClassificationVerdict:
    verdict: Verdict
    negativity: float
    certificate: SeparableCertificate | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value, "negativity": self.negativity}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out


def _certificate_from_minors(rho: DensityMatrix, factors: dict) -> SeparableCertificate:
    """``factors[k]`` is a list of ``(eigenvalue, left, right)`` spanning minor k."""
    terms = []
    for k, items in sorted(factors.items()):
        for lam, left, right in items:
            if lam > 0:
                terms.append(ProductTerm(float(lam), k, left, right))
    return SeparableCertificate(tuple(terms))


# ------------------------------------------------------------------ one vs rest


def decide_one_vs_rest(rho: DensityMatrix, tol: TolerancePolicy | None = None,
                       report: NegativityReport | None = None) -> ClassificationVerdict:
    """Decisive classifier when one party is a single mode."""
    tol = tol or DEFAULT_TOLERANCE
    fb = rho.basis
    if not (fb.m == 1 or fb.bipartition.m_right == 1):
        raise StateError(f"one-vs-rest needs m=1 or M-m=1; got M={fb.M}, m={fb.m}")
    report = report or negativity_general(rho, tol)
    if report.total > tol.zero_threshold:
        return ClassificationVerdict(Verdict.ENTANGLED_NPT, report.total,
                                     diagnostics=_npt_diagnostics(report, tol))
    # Zero negativity forces every off-sector block to vanish; each minor then
    # lives on C^1 (x) C^d (or C^d (x) C^1) and its eigenvectors are products.
    factors = {}
    for k in fb.nonempty_sectors():
        s = fb.sector(k)
        lam, vecs = eigh(rho.minor(k), tol)
        items = []
        for j in range(len(lam)):
            v = vecs[:, j]
            if s.d1 == 1:
                items.append((lam[j], np.ones(1, dtype=complex), v))
            else:
                items.append((lam[j], v, np.ones(1, dtype=complex)))
        factors[k] = items
    cert = _certificate_from_minors(rho, factors)
    resid = cert.residual(rho)
    if resid >= tol.reconstruction_tol:
        return ClassificationVerdict(Verdict.PPT_UNDECIDED, report.total,
                                     diagnostics={"certificate_residual": resid})
    return ClassificationVerdict(Verdict.SEPARABLE_CERTIFIED, report.total, cert,
                                 {"certificate_residual": resid})


def _npt_diagnostics(report: NegativityReport, tol: TolerancePolicy) -> dict:
    return {
        "npt_minors": [k for k, v in enumerate(report.per_minor) if v > tol.zero_threshold],
        "nonzero_off_diagonal": [[k, l] for (k, l), v in sorted(report.off_diagonal.items())
                                 if v > tol.zero_threshold],
    }


# ------------------------------------------------------------------ PPT


@dataclass(frozen=True)
class PPTDiagnostics:
    offending_blocks: list  # [(k, l, frobenius)]
    minor_min_eigenvalues: dict  # k -> min eig of PT(rho_k)

    @property
    def min_pt_eigenvalue(self) -> float:
        vals = list(self.minor_min_eigenvalues.values())
        return min(vals) if vals else 0.0

    def to_json(self) -> dict:
        return {
            "offending_blocks": [{"k": k, "l": l, "frobenius": f} for k, l, f in self.offending_blocks],
            "minor_min_pt_eigenvalues": {str(k): v for k, v in sorted(self.minor_min_eigenvalues.items())},
        }


def is_ppt(rho: DensityMatrix, tol: TolerancePolicy | None = None) -> tuple[bool, PPTDiagnostics]:
    """Block diagonal across sectors and every minor PPT."""
    tol = tol or DEFAULT_TOLERANCE
    fb = rho.basis
    offending = []
    for (k, l), b in sorted(rho.blocks.items()):
        if k < l:
            f = float(np.linalg.norm(b))
            if f >= tol.zero_threshold:
                offending.append((k, l, f))
    mins = {}
    for k in fb.nonempty_sectors():
        mins[k] = min_eigenvalue(realign_block(rho, k, k), tol)
    ok = not offending and all(v >= -tol.psd_floor for v in mins.values())
    return ok, PPTDiagnostics(offending, mins)


# ------------------------------------------------------------------ diagonal minors


def _rank_one_factors(vec: np.ndarray, d1: int, d2: int, tol: TolerancePolicy):
    """``(left, right)`` if ``vec`` is a product vector, else ``None``."""
    c = vec.reshape(d1, d2)
    u, s, vh = np.linalg.svd(c)
    if s.size > 1 and s[1] > tol.zero_threshold * max(1.0, s[0]) * 1e2:
        return None
    return u[:, 0] * s[0], vh[0]


def _product_basis_2d(v1: np.ndarray, v2: np.ndarray, d1: int, d2: int, tol: TolerancePolicy):
    """Orthonormal product basis of span{v1, v2}, or ``None``.

    Product vectors in the pencil ``A + t B`` are roots of all 2x2 minors, each
    a quadratic in ``t``; ``t = inf`` stands for ``B`` itself.
    """
    a, b = v1.reshape(d1, d2), v2.reshape(d1, d2)
    polys = []
    for i in range(d1):
        for j in range(i + 1, d1):
            for p in range(d2):
                for q in range(p + 1, d2):
                    c0 = a[i, p] * a[j, q] - a[i, q] * a[j, p]
                    c1 = (a[i, p] * b[j, q] + b[i, p] * a[j, q]
                          - a[i, q] * b[j, p] - b[i, q] * a[j, p])
                    c2 = b[i, p] * b[j, q] - b[i, q] * b[j, p]
                    polys.append((c2, c1, c0))
    polys = np.array(polys, dtype=complex).reshape(-1, 3)
    scale = tol.zero_threshold * 1e2
    if polys.size == 0 or np.max(np.abs(polys)) < scale:
        # every vector in the span is a product
        return [v1, v2]
    c2, c1, c0 = polys[np.argmax(np.max(np.abs(polys), axis=1))]
    candidates = []
    if abs(c2) >= scale:
        roots = np.roots([c2, c1, c0])
    else:
        candidates.append(v2)  # degree drop: root at infinity
        roots = [-c0 / c1] if abs(c1) >= scale else []
    for t in roots:
        w = v1 + t * v2
        candidates.append(w / np.linalg.norm(w))
    products = [w for w in candidates if _rank_one_factors(w, d1, d2, tol) is not None]
    for i in range(len(products)):
        for j in range(i + 1, len(products)):
            if abs(np.vdot(products[i], products[j])) < tol.reconstruction_tol:
                return [products[i], products[j]]
    return None


def _minor_product_eigenbasis(minor: np.ndarray, d1: int, d2: int, tol: TolerancePolicy):
    """Spectral decomposition of a minor into product vectors, or ``None``.

    Candidates, tried in order: the Fock basis, the product of the local
    reduced-state eigenbases, then the eigenvectors themselves (eigenspaces of
    dimension <= 2 are searched for a product basis).
    """
    if d1 == 1 or d2 == 1:
        lam, vecs = eigh(minor, tol)
        return [(lam[j],) + _rank_one_factors(vecs[:, j], d1, d2, tol) for j in range(len(lam))]
    scale = tol.zero_threshold

    off = minor - np.diag(np.diag(minor))
    if np.max(np.abs(off)) < scale:
        out = []
        for i, lam in enumerate(np.real(np.diag(minor))):
            left = np.zeros(d1, dtype=complex)
            right = np.zeros(d2, dtype=complex)
            left[i // d2] = 1
            right[i % d2] = 1
            out.append((lam, left, right))
        return out

    t = minor.reshape(d1, d2, d1, d2)
    _, u1 = np.linalg.eigh(np.einsum("ijkj->ik", t))
    _, u2 = np.linalg.eigh(np.einsum("ijil->jl", t))
    w = np.kron(u1, u2)
    rotated = w.conj().T @ minor @ w
    if np.max(np.abs(rotated - np.diag(np.diag(rotated)))) < scale:
        return [(float(np.real(rotated[i, i])), u1[:, i // d2], u2[:, i % d2]) for i in range(d1 * d2)]

    lam, vecs = eigh(minor, tol)
    out = []
    i = 0
    while i < len(lam):
        j = i + 1
        while j < len(lam) and abs(lam[j] - lam[i]) < 1e3 * scale:
            j += 1
        group = [vecs[:, c] for c in range(i, j)]
        if len(group) == 1:
            basis = group
        elif len(group) == 2:
            basis = _product_basis_2d(group[0], group[1], d1, d2, tol)
        else:
            basis = None
        if basis is None:
            return None
        for v in basis:
            f = _rank_one_factors(v, d1, d2, tol)
            if f is None:
                return None
            out.append((float(np.mean(lam[i:j])),) + f)
        i = j
    return out


@dataclass(frozen=True)
class AdaptedBasis:
    """Per sector, ``(eigenvalue, left, right)`` product spectral decomposition."""

    factors: dict
    failed_sectors: tuple[int, ...] = ()


def diagonal_minor_class_check(rho: DensityMatrix, tol: TolerancePolicy | None = None) -> tuple[bool, AdaptedBasis]:
    """Whether every minor is diagonal in a basis of product vectors."""
    tol = tol or DEFAULT_TOLERANCE
    fb = rho.basis
    factors, failed = {}, []
    for k in fb.nonempty_sectors():
        s = fb.sector(k)
        found = _minor_product_eigenbasis(rho.minor(k), s.d1, s.d2, tol)
        if found is None:
            failed.append(k)
        else:
            factors[k] = found
    return not failed, AdaptedBasis(factors, tuple(failed))


# ------------------------------------------------------------------ realignment


def realignment_norm(minor: np.ndarray, d1: int, d2: int) -> float:
    """Computable-cross-norm value of the trace-normalised minor (``> 1`` means entangled)."""
    tr = float(np.real(np.trace(minor)))
    if tr <= 0:
        return 0.0
    r = (minor / tr).reshape(d1, d2, d1, d2).transpose(0, 2, 1, 3).reshape(d1 * d1, d2 * d2)
    return trace_norm(r)


# ------------------------------------------------------------------ classifier


def classify(rho: DensityMatrix, tol: TolerancePolicy | None = None) -> ClassificationVerdict:
    tol = tol or DEFAULT_TOLERANCE
    fb = rho.basis
    report = negativity_general(rho, tol)
    if report.total > tol.zero_threshold:
        return ClassificationVerdict(Verdict.ENTANGLED_NPT, report.total,
                                     diagnostics=_npt_diagnostics(report, tol))
    if fb.m == 1 or fb.bipartition.m_right == 1 or fb.m == 0 or fb.m == fb.M:
        if fb.m in (0, fb.M):
            # a trivial party: every state is a mixture of products with a vacuum factor
            return _certify_from_adapted(rho, _trivial_party_factors(rho, tol), report, tol)
        return decide_one_vs_rest(rho, tol, report)
    ok, adapted = diagonal_minor_class_check(rho, tol)
    if ok:
        verdict = _certify_from_adapted(rho, adapted.factors, report, tol)
        if verdict.verdict is Verdict.SEPARABLE_CERTIFIED:
            return verdict
    ppt, diag = is_ppt(rho, tol)
    realign = {}
    for k in fb.nonempty_sectors():
        s = fb.sector(k)
        realign[str(k)] = realignment_norm(rho.minor(k), s.d1, s.d2)
    return ClassificationVerdict(Verdict.PPT_UNDECIDED, report.total, diagnostics={
        "is_ppt": ppt,
        "ppt": diag.to_json(),
        "minor_realignment_norms": realign,
        "realignment_entangled_minors": [int(k) for k, v in realign.items()
                                         if v > 1 + tol.zero_threshold],
        "non_product_minors": list(adapted.failed_sectors),
    })


def _trivial_party_factors(rho: DensityMatrix, tol: TolerancePolicy) -> dict:
    fb = rho.basis
    out = {}
    for k in fb.nonempty_sectors():
        s = fb.sector(k)
        lam, vecs = eigh(rho.minor(k), tol)
        out[k] = [(lam[j],) + _rank_one_factors(vecs[:, j], s.d1, s.d2, tol) for j in range(len(lam))]
    return out


def _certify_from_adapted(rho, factors, report, tol) -> ClassificationVerdict:
    cert = _certificate_from_minors(rho, factors)
    resid = cert.residual(rho)
    if resid >= tol.reconstruction_tol:
        return ClassificationVerdict(Verdict.PPT_UNDECIDED, report.total,
                                     diagnostics={"certificate_residual": resid})
    return ClassificationVerdict(Verdict.SEPARABLE_CERTIFIED, report.total, cert,
                                 {"certificate_residual": resid})
