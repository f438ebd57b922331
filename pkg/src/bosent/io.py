"""JSON state files.

Schema::

    {"N": int, "M": int, "m": int, "kind": "pure" | "density",
     "entries": [{"row": [int x M], "col": [int x M], "re": float, "im": float}, ...]}

Entries are sparse (missing elements are zero); ``col`` is absent for pure
states.  Writers emit entries in basis order and skip exact zeros, which makes
the output canonical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .fock_space import BasisError, ModeBipartition, build_basis
from .numerics import TolerancePolicy
from .states import DensityMatrix, PureState, StateError, pure_to_density


class StateFileError(ValueError):
    """The document does not follow the state-file schema."""


def _int(doc, key):
    v = doc.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise StateFileError(f"field {key!r} must be an integer, got {v!r}")
    return v


def _occupation(entry, key, M):
    occ = entry.get(key)
    if not isinstance(occ, list) or len(occ) != M or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in occ):
        raise StateFileError(f"entry field {key!r} must be a list of {M} integers, got {occ!r}")
    return tuple(occ)


def _number(entry, key):
    v = entry.get(key, 0.0)
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
        raise StateFileError(f"entry field {key!r} must be a finite number, got {v!r}")
    return float(v)


def _relabel(occ: tuple, order: Sequence[int] | None) -> tuple:
    return occ if order is None else tuple(occ[i] for i in order)


def mode_order(M: int, left_modes: Sequence[int]) -> list[int]:
    """Permutation putting ``left_modes`` (0-based) first, others after, both in original order."""
    left = list(left_modes)
    if len(set(left)) != len(left) or any(not 0 <= i < M for i in left):
        raise StateFileError(f"left modes {left} must be distinct indices in 0..{M - 1}")
    return left + [i for i in range(M) if i not in left]


def state_from_document(doc: dict, tol: TolerancePolicy | None = None,
                        left_modes: Sequence[int] | None = None) -> PureState | DensityMatrix:
    """Parse and validate a state document.

    ``left_modes`` relabels modes so the listed ones form the left party; the
    document's ``m`` is then replaced by ``len(left_modes)``.
    """
    if not isinstance(doc, dict):
        raise StateFileError("state document must be a JSON object")
    N, M, m = _int(doc, "N"), _int(doc, "M"), _int(doc, "m")
    kind = doc.get("kind")
    if kind not in ("pure", "density"):
        raise StateFileError(f"field 'kind' must be 'pure' or 'density', got {kind!r}")
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise StateFileError("field 'entries' must be a list")
    order = None
    if left_modes is not None:
        order = mode_order(M, left_modes)
        m = len(left_modes)
    try:
        fb = build_basis(N, ModeBipartition(M, m))
    except BasisError as exc:
        raise StateFileError(str(exc)) from exc

    def flat(occ):
        try:
            return fb.flat_index(*fb.index_of(_relabel(occ, order)))
        except BasisError as exc:
            raise StateFileError(str(exc)) from exc

    seen = set()
    if kind == "pure":
        amps = np.zeros(fb.dim, dtype=complex)
        for e in entries:
            if not isinstance(e, dict):
                raise StateFileError("entries must be objects")
            if "col" in e:
                raise StateFileError("pure-state entries must not carry 'col'")
            i = flat(_occupation(e, "row", M))
            if i in seen:
                raise StateFileError(f"duplicate entry for row {e['row']}")
            seen.add(i)
            amps[i] = complex(_number(e, "re"), _number(e, "im"))
        try:
            return PureState(fb, amps).validate(tol)
        except StateError as exc:
            raise StateFileError(str(exc)) from exc
    mat = np.zeros((fb.dim, fb.dim), dtype=complex)
    for e in entries:
        if not isinstance(e, dict):
            raise StateFileError("entries must be objects")
        i = flat(_occupation(e, "row", M))
        j = flat(_occupation(e, "col", M))
        if (i, j) in seen:
            raise StateFileError(f"duplicate entry for row {e['row']}, col {e['col']}")
        seen.add((i, j))
        mat[i, j] = complex(_number(e, "re"), _number(e, "im"))
    try:
        return DensityMatrix.from_dense(fb, mat, tol)
    except StateError as exc:
        raise StateFileError(str(exc)) from exc


def state_to_document(state: PureState | DensityMatrix) -> dict:
    fb = state.basis
    occs = [list(o) for o in fb.occupations()]
    entries = []
    if isinstance(state, PureState):
        for i, z in enumerate(state.amplitudes):
            if z != 0:
                entries.append({"row": occs[i], "re": float(z.real), "im": float(z.imag)})
        kind = "pure"
    else:
        mat = state.to_dense()
        for i, j in zip(*np.nonzero(mat)):
            z = mat[i, j]
            entries.append({"row": occs[i], "col": occs[j], "re": float(z.real), "im": float(z.imag)})
        kind = "density"
    return {"N": fb.N, "M": fb.M, "m": fb.m, "kind": kind, "entries": entries}


def dumps_state(state: PureState | DensityMatrix) -> str:
    # float repr is the shortest string that round-trips exactly
    return json.dumps(state_to_document(state), indent=1) + "\n"


def save_state(state: PureState | DensityMatrix, path: str | Path) -> None:
    Path(path).write_text(dumps_state(state))


def load_state(path: str | Path, tol: TolerancePolicy | None = None,
               left_modes: Sequence[int] | None = None) -> PureState | DensityMatrix:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: not valid JSON ({exc})") from exc
    return state_from_document(doc, tol, left_modes)


def as_density(state: PureState | DensityMatrix, tol: TolerancePolicy | None = None) -> DensityMatrix:
    return pure_to_density(state, tol) if isinstance(state, PureState) else state

