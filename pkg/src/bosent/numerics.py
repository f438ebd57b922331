"""Dense linear-algebra kernels and the shared tolerance policy.

All numerical thresholds used anywhere in the package live on
:class:`TolerancePolicy`; modules accept an optional ``tol`` argument and fall
back to :data:`DEFAULT_TOLERANCE`.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

import numpy as np


class NumericsError(ValueError):
    """Raised when a kernel receives input outside its contract."""


@dataclass(frozen=True)
class TolerancePolicy:
    psd_floor: float = 1e-10
    zero_threshold: float = 1e-10
    reconstruction_tol: float = 1e-10
    oracle_agreement_tol: float = 1e-10
    hermiticity_tol: float = 1e-12
    trace_tol: float = 1e-12

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                raise NumericsError(f"tolerance {f.name} must be positive, got {value!r}")

    @classmethod
    def uniform(cls, value: float) -> "TolerancePolicy":
        """Policy with every threshold set to ``value`` (used by ``--tolerance``)."""
        return cls(**{f.name: value for f in fields(cls)})

    def with_(self, **changes) -> "TolerancePolicy":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_TOLERANCE = TolerancePolicy()


def _resolve(tol: TolerancePolicy | None) -> TolerancePolicy:
    return DEFAULT_TOLERANCE if tol is None else tol


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2:
        raise NumericsError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericsError("matrix has non-finite entries")
    return a


def hermiticity_deviation(h) -> float:
    """Largest entrywise modulus of ``H - H^dagger``."""
    h = _as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise NumericsError(f"expected a square matrix, got shape {h.shape}")
    if h.size == 0:
        return 0.0
    return float(np.max(np.abs(h - h.conj().T)))


def eigh(h, tol: TolerancePolicy | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    The Hermiticity check is scale aware: the deviation must stay below
    ``hermiticity_tol * max(1, max|H|)``.
    """
    tol = _resolve(tol)
    h = _as_matrix(h)
    dev = hermiticity_deviation(h)
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    if dev >= tol.hermiticity_tol * scale:
        raise NumericsError(f"matrix is not Hermitian (deviation {dev:.3e})")
    if h.size == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=h.dtype)
    return np.linalg.eigh(h)


def eigvalsh(h, tol: TolerancePolicy | None = None) -> np.ndarray:
    return eigh(h, tol)[0]


def singular_values(b) -> np.ndarray:
    """Singular values in non-increasing order."""
    b = _as_matrix(b)
    if b.size == 0:
        return np.zeros(0)
    return np.linalg.svd(b, compute_uv=False)


def trace_norm(b) -> float:
    """Schatten-1 norm: the sum of singular values."""
    return float(np.sum(singular_values(b)))


def min_eigenvalue(h, tol: TolerancePolicy | None = None) -> float:
    vals = eigvalsh(h, tol)
    return float(vals[0]) if vals.size else 0.0


def is_psd(h, tol: TolerancePolicy | None = None) -> bool:
    """PSD up to ``psd_floor`` scaled by the trace (floor of 1 for traceless input)."""
    tol = _resolve(tol)
    h = _as_matrix(h)
    scale = max(abs(float(np.real(np.trace(h)))), 1.0) if h.size else 1.0
    return min_eigenvalue(h, tol) >= -tol.psd_floor * scale


def hermitian_part(a) -> np.ndarray:
    a = np.asarray(a)
    return 0.5 * (a + a.conj().T)
