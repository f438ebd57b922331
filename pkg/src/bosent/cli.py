"""Command-line entry point: ``bosent <command> ...``.

Exit codes: 0 success, 2 input error, 3 oracle size cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .criteria import classify, is_ppt
from .dynamics import DephasingParams, dephase_closed_form, negativity_trajectory
from .fock_space import BasisError, ModeBipartition, build_basis
from .negativity import NegativityMethod, negativity
from .numerics import DEFAULT_TOLERANCE, NumericsError, TolerancePolicy
from .partial_transpose import DEFAULT_EXTENDED_CAP, ExtendedCapError
from .states import (StateError, embed_qutrit_block, horodecki_qutrit_state, pure_state,
                     random_density)

# Parameter of the embedded two-qutrit PPT entangled block used when --a is omitted;
# chosen by scanning a in (0, 1) (see tests/test_states.py).
DEFAULT_HORODECKI_A = 0.25

EXIT_INPUT = 2
EXIT_CAP = 3

METHODS = {
    "sector": NegativityMethod.SECTOR_DECOMPOSITION,
    "two-mode": NegativityMethod.TWO_MODE_CLOSED_FORM,
    "oracle": NegativityMethod.BRUTE_FORCE_ORACLE,
}


class InputError(Exception):
    pass


def _left_modes(text):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--left-modes must be a comma-separated list of integers, got {text!r}")


def _load(args, tol):
    path = Path(args.state)
    if not path.is_file():
        raise InputError(f"state file {path} not found")
    return io.load_state(path, tol, _left_modes(getattr(args, "left_modes", None)))


def _digest(path) -> str | None:
    if path is None:
        return None
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _emit(payload: dict):
    sys.stdout.write(json.dumps(payload, indent=1) + "\n")


def cmd_basis(args, tol):
    try:
        fb = build_basis(args.N, ModeBipartition(args.M, args.m))
    except BasisError as exc:
        raise InputError(str(exc))
    rows = [f"{'k':>4} {'d1':>8} {'d2':>8} {'d1*d2':>10}"]
    for s in fb.sectors:
        rows.append(f"{s.k:>4} {s.d1:>8} {s.d2:>8} {s.size:>10}")
    rows.append(f"total {fb.dim}")
    sys.stdout.write("\n".join(rows) + "\n")
    return {"sectors": [[s.k, s.d1, s.d2] for s in fb.sectors], "total": fb.dim}


def cmd_negativity(args, tol):
    rho = io.as_density(_load(args, tol), tol)
    report = negativity(rho, METHODS[args.method], tol, args.oracle_cap).to_json()
    _emit(report)
    return report


def cmd_classify(args, tol):
    rho = io.as_density(_load(args, tol), tol)
    verdict = classify(rho, tol).to_json()
    verdict.setdefault("diagnostics", {})["is_ppt"] = bool(is_ppt(rho, tol)[0])
    _emit(verdict)
    return verdict


def cmd_evolve(args, tol):
    if args.steps < 1:
        raise InputError("--steps must be >= 1")
    rho = io.as_density(_load(args, tol), tol)
    grid = np.linspace(0.0, args.t_max, args.steps + 1)
    traj = negativity_trajectory(rho, args.gamma, grid, tol)
    lines = ["t,negativity"] + [f"{t:.17g},{n:.17g}" for t, n in traj]
    Path(args.out).write_text("\n".join(lines) + "\n")
    final_path = args.final or str(Path(args.out).with_suffix(".final.json"))
    io.save_state(dephase_closed_form(rho, DephasingParams(args.gamma, args.t_max)), final_path)
    return {"csv": args.out, "final_state": final_path, "points": len(traj)}


def cmd_construct(args, tol):
    if args.kind == "noon":
        if args.N is None or args.N < 1:
            raise InputError("--kind noon needs --N >= 1")
        fb = build_basis(args.N, ModeBipartition(2, 1))
        amps = np.zeros(fb.dim, dtype=complex)
        amps[fb.flat_index(*fb.index_of((args.N, 0)))] = 1
        amps[fb.flat_index(*fb.index_of((0, args.N)))] = 1
        state = pure_state(fb, amps, normalize=True)
    else:
        a = DEFAULT_HORODECKI_A if args.a is None else args.a
        weights = None
        if args.weights:
            try:
                weights = [float(x) for x in args.weights.split(",")]
            except ValueError:
                raise InputError(f"--weights must be comma-separated numbers, got {args.weights!r}")
        fb = build_basis(4, ModeBipartition(4, 2))
        state = embed_qutrit_block(fb, horodecki_qutrit_state(a), weights, tol=tol)
    io.save_state(state, args.out)
    return {"out": args.out, "kind": args.kind}


def cmd_random(args, tol):
    try:
        fb = build_basis(args.N, ModeBipartition(args.M, args.m))
    except BasisError as exc:
        raise InputError(str(exc))
    rank = fb.dim if args.rank is None else args.rank
    io.save_state(random_density(fb, rank, args.seed, tol), args.out)
    return {"out": args.out, "dim": fb.dim, "rank": rank}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bosent", description=__doc__.splitlines()[0])
    p.add_argument("--tolerance", type=float, default=None,
                   help="override every threshold of the tolerance policy")
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_EXTENDED_CAP,
                   help="largest extended-space dimension for the dense oracle (default %(default)s)")
    p.add_argument("--report", default=None, help="write a JSON run report to this file")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("basis", help="sector table of the Fock basis")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=cmd_basis)

    s = sub.add_parser("negativity", help="negativity report of a state file")
    s.add_argument("--state", required=True)
    s.add_argument("--method", choices=sorted(METHODS), default="sector")
    s.add_argument("--left-modes", default=None, help="comma-separated 0-based modes forming the left party")
    s.set_defaults(func=cmd_negativity)

    s = sub.add_parser("classify", help="separability / PPT verdict")
    s.add_argument("--state", required=True)
    s.add_argument("--left-modes", default=None)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("evolve", help="dephasing trajectory")
    s.add_argument("--state", required=True)
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--t-max", type=float, required=True)
    s.add_argument("--steps", type=int, required=True, help="number of grid intervals")
    s.add_argument("--out", required=True, help="trajectory CSV")
    s.add_argument("--final", default=None, help="final state file (default: <out>.final.json)")
    s.set_defaults(func=cmd_evolve)

    s = sub.add_parser("construct", help="write a special state")
    s.add_argument("--kind", choices=["horodecki-embed", "noon"], required=True)
    s.add_argument("--a", type=float, default=None)
    s.add_argument("--weights", default=None, help="five sector weights for horodecki-embed")
    s.add_argument("--N", type=int, default=None)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("random", help="write a seeded random density matrix")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--rank", type=int, default=None)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        tol = DEFAULT_TOLERANCE if args.tolerance is None else TolerancePolicy.uniform(args.tolerance)
        payload = args.func(args, tol)
    except ExtendedCapError as exc:
        print(f"bosent: error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, io.StateFileError, StateError, BasisError, NumericsError, OSError) as exc:
        print(f"bosent: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.report:
        report = {
            "command": ["bosent"] + list(sys.argv[1:] if argv is None else argv),
            "input_sha256": _digest(getattr(args, "state", None)),
            "tolerance": tol.as_dict(),
            "payload": payload,
            "duration_s": time.perf_counter() - start,
        }
        Path(args.report).write_text(json.dumps(report, indent=1) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
