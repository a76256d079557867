"""Command-line entry point: ``entsuper {measure,sweep,verify,oracle}``.

Exit codes: 0 all checks passed, 1 a bound or certification check failed,
2 bad input or configuration.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .harness import (
    SweepConfig,
    fmt,
    ratio_range,
    rows_to_csv,
    sweep_rows,
    verify,
    write_sweep,
)
from .measures import measures_of
from .oracle import DecompositionSearch, optimize_avg
from .states import FIXTURE_NAMES, MODES, StateError, load_fixture, read_state

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
ORACLE_TOL = 1e-3
FORBIDDEN_TOL = 1e-9


class InputError(Exception):
    pass


def load_state_arg(spec: str):
    """A state file path, or ``fixture:NAME`` for a built-in fixture."""
    if spec.startswith("fixture:"):
        name = spec.split(":", 1)[1]
        if name not in FIXTURE_NAMES:
            raise InputError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}")
        return load_fixture(name)
    path = Path(spec)
    if not path.is_file():
        raise InputError(f"{spec}: no such file")
    try:
        return read_state(path)
    except (StateError, ValueError) as exc:
        raise InputError(f"{spec}: {exc}") from exc


def _require_qubit_pair(state, spec):
    if state.dims[:2] != (2, 2):
        raise InputError(f"{spec}: need dA = dB = 2, got dims {state.dims}")


def _search(args) -> DecompositionSearch:
    restarts, sweeps = args.budget
    if restarts < 1 or sweeps < 1:
        raise InputError("--budget needs two positive integers")
    return DecompositionSearch(restarts=restarts, step_budget=sweeps)


def cmd_measure(args) -> int:
    state = load_state_arg(args.state)
    _require_qubit_pair(state, args.state)
    m = measures_of(state)
    sys.stdout.write(f"C: {fmt(m.concurrence_C)}\nCa: {fmt(m.coa_Ca)}\nE: {fmt(m.entropy_E)}\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    a = load_state_arg(args.state_a)
    b = load_state_arg(args.state_b)
    _require_qubit_pair(a, args.state_a)
    if a.dims != b.dims:
        raise InputError(f"dimension mismatch: {a.dims} vs {b.dims}")
    if args.grid < 2:
        raise InputError("--grid must be at least 2")
    config = SweepConfig(grid_points=args.grid, phase_alpha=args.phase_alpha,
                         phase_beta=args.phase_beta, seed=args.seed, output_path=args.out)
    rows = sweep_rows(a.normalize(), b.normalize(), config)
    bad = sum(1 for r in rows
              if r.C_upper_best < r.norm_sq_gamma * r.C_actual - 1e-9
              or r.Ca_upper < r.norm_sq_gamma * r.Ca_actual - 1e-9
              or r.C_lower > r.norm_sq_gamma * r.C_actual + 1e-9)
    if args.out:
        csv_path, gp_path = write_sweep(rows, args.out)
        sys.stderr.write(f"wrote {csv_path} and {gp_path}\n")
    else:
        sys.stdout.write(rows_to_csv(rows))
    rr = ratio_range(rows)
    if rr is not None:
        sys.stderr.write(f"bound/actual ratio where C > 0.1: {fmt(rr[0])} .. {fmt(rr[1])}\n")
    if bad:
        sys.stderr.write(f"{bad} rows violate a bound\n")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.pairs < 1:
        raise InputError("--pairs must be at least 1")
    if not 0.0 <= args.thm1_fraction <= 1.0:
        raise InputError("--thm1-fraction must lie in [0, 1]")
    if min(args.dims) < 1:
        raise InputError("--dims must be positive")
    if tuple(args.dims[:2]) != (2, 2):
        raise InputError("--dims must start with 2 2")
    summary = verify(n_pairs=args.pairs, dims=tuple(args.dims), seed=args.seed,
                     alpha_mode=args.alpha_mode, mode=args.mode, n_triples=args.triples,
                     thm1_fraction=args.thm1_fraction, search=_search(args))
    sys.stdout.write(summary.format())
    if args.out:
        Path(args.out).write_text(summary.to_json() + "\n", encoding="utf-8")
    return EXIT_VIOLATION if summary.total_violations else EXIT_OK


def cmd_oracle(args) -> int:
    state = load_state_arg(args.state)
    _require_qubit_pair(state, args.state)
    m = measures_of(state)
    g = state.normalize()
    rho = g.reduced_ab()
    search = _search(args)
    mx = optimize_avg(rho, "concurrence", "max", search, args.seed).value
    mn = optimize_avg(rho, "concurrence", "min", search, args.seed).value
    gap_max = m.coa_Ca - mx
    gap_min = mn - m.concurrence_C
    sys.stdout.write(
        f"C: {fmt(m.concurrence_C)}\nCa: {fmt(m.coa_Ca)}\n"
        f"oracle_min: {fmt(mn)}\noracle_max: {fmt(mx)}\n"
        f"gap_min: {fmt(gap_min)}\ngap_max: {fmt(gap_max)}\n"
    )
    ok = (-FORBIDDEN_TOL <= gap_max <= ORACLE_TOL) and (-FORBIDDEN_TOL <= gap_min <= ORACLE_TOL)
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entsuper", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def budget(sp):
        sp.add_argument("--budget", nargs=2, type=int, metavar=("RESTARTS", "SWEEPS"),
                        default=[32, 500], help="oracle search budget (default 32 500)")

    sp = sub.add_parser("measure", help="C, Ca and E of a 2x2xn state")
    sp.add_argument("state", help="state file or fixture:NAME")
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("sweep", help="bounds vs actual values over |alpha|, as CSV")
    sp.add_argument("state_a")
    sp.add_argument("state_b")
    sp.add_argument("--grid", type=int, default=101)
    sp.add_argument("--phase-alpha", type=float, default=0.0)
    sp.add_argument("--phase-beta", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="CSV path; a gnuplot script is written next to it")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="Monte-Carlo check of every bound")
    sp.add_argument("--pairs", type=int, default=10_000)
    sp.add_argument("--dims", nargs=3, type=int, default=[2, 2, 4], metavar=("DA", "DB", "DC"))
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--alpha-mode", choices=("grid", "random"), default="random")
    sp.add_argument("--mode", choices=MODES, default="complex-gaussian")
    sp.add_argument("--triples", type=int, default=None,
                    help="random three-term superpositions (default pairs/10)")
    sp.add_argument("--thm1-fraction", type=float, default=0.01,
                    help="fraction of pairs given the oracle-based entropy check")
    sp.add_argument("--out", help="also write the summary as JSON")
    budget(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("oracle", help="certify closed forms against decomposition search")
    sp.add_argument("state")
    sp.add_argument("--seed", type=int, default=0)
    budget(sp)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
