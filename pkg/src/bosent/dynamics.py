"""Dephasing generated by the relative number operator between the two parties.

Two evolution paths are provided on purpose: the sector-wise closed form and a
dense fixed-step RK4 integration of the master equation, which shares no code
with the former and serves as its oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .negativity import negativity_general
from .numerics import DEFAULT_TOLERANCE, TolerancePolicy
from .states import DensityMatrix, StateError
from .fock_space import FockBasis


@dataclass(frozen=True)
class DephasingParams:
    gamma: float
    t: float

    def __post_init__(self):
        if not (self.gamma >= 0 and np.isfinite(self.gamma)):
            raise StateError(f"gamma must be finite and >= 0, got {self.gamma}")
        if not (self.t >= 0 and np.isfinite(self.t)):
            raise StateError(f"t must be finite and >= 0, got {self.t}")


def v_eigenvalue(N: int, k: int) -> int:
    if not 0 <= k <= N:
        raise StateError(f"sector index k={k} outside 0..{N}")
    return 2 * k - N


def dephase_closed_form(rho: DensityMatrix, params: DephasingParams) -> DensityMatrix:
    """Scale block ``(k, l)`` by ``exp(-gamma t (k - l)^2)``."""
    gt = params.gamma * params.t
    return rho.scaled_blocks({(k, l): np.exp(-gt * (k - l) ** 2) for k, l in rho.blocks})


def v_operator(basis: FockBasis) -> np.ndarray:
    """Dense diagonal of ``V``: left-party bosons minus right-party bosons, per basis vector."""
    occ = basis.occupation_array()
    return (occ[:, : basis.m].sum(axis=1) - occ[:, basis.m:].sum(axis=1)).astype(float)


def lindblad_rhs(basis: FockBasis, rho: np.ndarray, gamma: float) -> np.ndarray:
    """``(gamma / 2) (V rho V - {V^2, rho} / 2)`` on a dense matrix."""
    return _rhs(np.diag(v_operator(basis)), rho, gamma)


def _rhs(v: np.ndarray, rho: np.ndarray, gamma: float) -> np.ndarray:
    v2 = v @ v
    return 0.5 * gamma * (v @ rho @ v - 0.5 * (v2 @ rho + rho @ v2))


def integrate_oracle(rho: DensityMatrix, params: DephasingParams, steps: int = 1000) -> DensityMatrix:
    """Classical fixed-step RK4 on the dense density matrix."""
    if steps < 1:
        raise StateError(f"steps must be >= 1, got {steps}")
    fb = rho.basis
    v = np.diag(v_operator(fb))
    x = rho.to_dense()
    h = params.t / steps
    g = params.gamma
    for _ in range(steps):
        k1 = _rhs(v, x, g)
        k2 = _rhs(v, x + 0.5 * h * k1, g)
        k3 = _rhs(v, x + 0.5 * h * k2, g)
        k4 = _rhs(v, x + h * k3, g)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return DensityMatrix.from_dense(fb, x)


def negativity_trajectory(rho: DensityMatrix, gamma: float, t_grid: Sequence[float],
                          tol: TolerancePolicy | None = None,
                          verify: bool = True) -> list[tuple[float, float]]:
    """Negativity along the dephasing trajectory.

    Uses the sector decomposition once: minor negativities are constant and
    every off-sector trace norm decays with its own exponential.  With
    ``verify`` each point is recomputed from the evolved state and the two
    values must agree to ``oracle_agreement_tol``.
    """
    tol = tol or DEFAULT_TOLERANCE
    base = negativity_general(rho, tol)
    minors = sum(base.per_minor)
    out = []
    for t in t_grid:
        params = DephasingParams(gamma, float(t))
        value = minors + sum(np.exp(-gamma * t * (k - l) ** 2) * v for (k, l), v in base.off_diagonal.items())
        if verify:
            direct = negativity_general(dephase_closed_form(rho, params), tol).total
            if abs(direct - value) >= tol.oracle_agreement_tol:
                raise RuntimeError(f"trajectory mismatch at t={t}: {value!r} vs {direct!r}")
        out.append((float(t), float(value)))
    return out
