"""Negativity by sector decomposition, two-mode closed form, and dense oracle."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .numerics import DEFAULT_TOLERANCE, TolerancePolicy, eigvalsh, trace_norm
from .partial_transpose import DEFAULT_EXTENDED_CAP, extended_partial_transpose, realign_block
from .states import DensityMatrix, NumberSectorMixture, StateError


class NegativityMethod(str, enum.Enum):
    SECTOR_DECOMPOSITION = "SectorDecomposition"
    TWO_MODE_CLOSED_FORM = "TwoModeClosedForm"
    BRUTE_FORCE_ORACLE = "BruteForceOracle"


@dataclass(frozen=True)
class NegativityReport:
    total: float
    method: NegativityMethod
    per_minor: tuple[float, ...] = ()
    off_diagonal: dict = field(default_factory=dict)  # (k, l) with k < l -> trace norm

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "method": self.method.value,
            "per_minor": list(self.per_minor),
            "off_diagonal": [
                {"k": k, "l": l, "trace_norm": v} for (k, l), v in sorted(self.off_diagonal.items())
            ],
        }


def minor_negativity(rho: DensityMatrix, k: int) -> float:
    """``(||PT(rho_k)||_1 - Tr rho_k) / 2`` for the unnormalised minor."""
    if rho.basis.sector(k).size == 0:
        return 0.0
    tr = float(np.real(np.trace(rho.minor(k))))
    return max(0.0, 0.5 * (trace_norm(realign_block(rho, k, k)) - tr))


def negativity_general(rho: DensityMatrix, tol: TolerancePolicy | None = None) -> NegativityReport:
    rho.validate(tol)
    fb = rho.basis
    ks = fb.nonempty_sectors()
    per_minor = [minor_negativity(rho, k) if k in ks else 0.0 for k in range(fb.N + 1)]
    off = {}
    for k, l in rho.blocks:
        if k < l:
            off[(k, l)] = trace_norm(realign_block(rho, k, l))
    # block (l, k) realigns to the adjoint of block (k, l): same trace norm
    total = sum(per_minor) + sum(off.values())
    return NegativityReport(total, NegativityMethod.SECTOR_DECOMPOSITION, tuple(per_minor), off)


def negativity_two_mode(rho: DensityMatrix, tol: TolerancePolicy | None = None) -> NegativityReport:
    """Closed form for M = 2, m = 1: half the sum of off-diagonal moduli."""
    fb = rho.basis
    if (fb.M, fb.m) != (2, 1):
        raise StateError(f"two-mode closed form needs M=2, m=1; got M={fb.M}, m={fb.m}")
    rho.validate(tol)
    off = {}
    for (k, l), b in rho.blocks.items():
        if k < l:
            off[(k, l)] = float(abs(b[0, 0]))
    total = sum(off.values())
    return NegativityReport(total, NegativityMethod.TWO_MODE_CLOSED_FORM, (0.0,) * (fb.N + 1), off)


def negativity_oracle(rho: DensityMatrix, cap: int = DEFAULT_EXTENDED_CAP,
                      tol: TolerancePolicy | None = None) -> NegativityReport:
    """Dense eigendecomposition of the extended partial transpose."""
    rho.validate(tol)
    op = extended_partial_transpose(rho, cap)
    lam = eigvalsh(op.matrix, tol)
    total = max(0.0, 0.5 * (float(np.sum(np.abs(lam))) - rho.trace()))
    return NegativityReport(total, NegativityMethod.BRUTE_FORCE_ORACLE)


def negativity(rho: DensityMatrix, method: str | NegativityMethod = NegativityMethod.SECTOR_DECOMPOSITION,
               tol: TolerancePolicy | None = None, cap: int = DEFAULT_EXTENDED_CAP) -> NegativityReport:
    method = NegativityMethod(method)
    if method is NegativityMethod.SECTOR_DECOMPOSITION:
        return negativity_general(rho, tol)
    if method is NegativityMethod.TWO_MODE_CLOSED_FORM:
        return negativity_two_mode(rho, tol)
    return negativity_oracle(rho, cap, tol)


def weighted_negativity(mixture: NumberSectorMixture, tol: TolerancePolicy | None = None) -> float:
    return float(sum(w * negativity_general(rho, tol).total for w, rho in mixture.components if w > 0))


def is_entangled_by_negativity(total: float, tol: TolerancePolicy | None = None) -> bool:
    return total > (tol or DEFAULT_TOLERANCE).zero_threshold
