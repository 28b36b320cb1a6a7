"""Command-line front end: ``gtlab gen|simulate|decode|check|rates``.

Exit codes: 0 success, 1 check found a bad configuration, 2 usage or parse
error, 3 capacity error (an enumeration would be too large).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from pathlib import Path

from gtlab import rates
from gtlab.certify import is_good_code
from gtlab.decoder import DEFAULT_EDGE_CAP, candidate_edges
from gtlab.design import gen_matrix, load_matrix, recommended_weight
from gtlab.errors import CapacityError, DomainError, ParameterError
from gtlab.experiment import ExperimentConfig, default_weight, run_experiment
from gtlab.pooling import OutcomeVector


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.12g}"


def _parse_auto_weight(spec: str) -> tuple[int, str]:
    try:
        s, mode = spec.split(",")
        return int(s), mode.strip()
    except ValueError as exc:
        raise UsageError(f"--auto-weight expects 's,mode', got {spec!r}") from exc


def _parse_range(spec: str) -> list[int]:
    try:
        lo, hi = (int(p) for p in spec.split(".."))
    except ValueError as exc:
        raise UsageError(f"--s-range expects 'a..b', got {spec!r}") from exc
    if lo < 2 or hi < lo:
        raise UsageError(f"bad --s-range {spec!r}")
    return list(range(lo, hi + 1))


def _parse_int_list(spec: str) -> list[int]:
    try:
        return [int(p) for p in spec.split(",") if p.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {spec!r}") from exc


def cmd_gen(args) -> int:
    if args.weight is None and args.auto_weight is None:
        raise UsageError("one of --weight or --auto-weight is required")
    if args.weight is not None:
        w = args.weight
    else:
        s, mode = _parse_auto_weight(args.auto_weight)
        w = recommended_weight(s, mode)
    X = gen_matrix(args.n, args.t, w, args.seed)
    X.save(args.out)
    return 0


def cmd_simulate(args) -> int:
    if (args.n is None) == (args.rate is None):
        raise UsageError("exactly one of --n or --rate is required")
    w = args.weight if args.weight is not None else default_weight(args.s, args.mode)
    common = dict(w=w, mode=args.mode, trials=args.trials, seed=args.seed,
                  exhaustive=args.exhaustive, max_edges=args.max_edges)
    if args.rate is not None:
        config = ExperimentConfig.from_rate(args.t, args.s, args.rate, **common)
    else:
        config = ExperimentConfig(t=args.t, s=args.s, N=args.n, **common)
    X = load_matrix(args.matrix) if args.matrix else None
    report = run_experiment(config, X)
    _emit(json.dumps(report.to_dict(args.deterministic), indent=2) + "\n", args.out)
    return 0


def cmd_decode(args) -> int:
    X = load_matrix(args.matrix)
    y = OutcomeVector.from_string(args.outcome)
    H = candidate_edges(X, args.s, y, max_edges=args.max_edges)
    _emit(H.to_json() + "\n", args.out)
    return 0


def cmd_check(args) -> int:
    X = load_matrix(args.matrix)
    report = is_good_code(X, args.s, args.L, _parse_int_list(args.k_set))
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    return 0 if report.is_good else 1


def cmd_rates(args) -> int:
    s_values = _parse_range(args.s_range)
    buf = io.StringIO()
    buf.write("s,value,w_star,k,R1_k,R2_k\n")
    values = {}
    for s in s_values:
        fn = rates.theorem2_bound if args.mode == "full" else rates.partial_bound
        res = fn(s, w_grid=args.grid, q_grid=args.grid, tol=args.tol)
        values[s] = res.value
        for k, (r1, r2) in sorted(res.per_k.items()):
            buf.write(f"{s},{_fmt(res.value)},{_fmt(res.w_star)},{k},{_fmt(r1)},{_fmt(r2)}\n")
    if args.compare_table1:
        cols = [s for s in sorted(rates.TABLE1_NEW)]
        buf.write("\n")
        buf.write("table1," + ",".join(f"s={s}" for s in cols) + "\n")
        buf.write("old," + ",".join(f"{rates.TABLE1_OLD[s]:g}" for s in cols) + "\n")
        buf.write("new_published," + ",".join(f"{rates.TABLE1_NEW[s]:g}" for s in cols) + "\n")
        buf.write("new_computed," + ",".join(
            f"{values[s]:.4f}" if s in values else "" for s in cols) + "\n")
    _emit(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gtlab", description="Two-stage group testing lab")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a constant-weight pooling matrix")
    g.add_argument("--n", type=int, required=True, help="number of tests (rows)")
    g.add_argument("--t", type=int, required=True, help="number of items (columns)")
    g.add_argument("--weight", type=float, help="relative column weight in (0, 1)")
    g.add_argument("--auto-weight", metavar="S,MODE", help="recommended weight, e.g. 2,full")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("simulate", help="run recovery trials")
    m.add_argument("--t", type=int, required=True)
    m.add_argument("--s", type=int, required=True)
    m.add_argument("--n", type=int)
    m.add_argument("--rate", type=float, help="design rate; N = ceil(log2 t / rate)")
    m.add_argument("--weight", type=float)
    m.add_argument("--matrix", help="use this matrix file instead of generating one")
    m.add_argument("--trials", type=int, default=1000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--mode", choices=["full", "partial"], default="full")
    m.add_argument("--exhaustive", action="store_true", help="iterate all C(t, s) hidden sets")
    m.add_argument("--max-edges", type=int, default=DEFAULT_EDGE_CAP)
    m.add_argument("--deterministic", action="store_true", help="omit wall time")
    m.add_argument("--out")
    m.set_defaults(func=cmd_simulate)

    d = sub.add_parser("decode", help="candidate hypergraph for an outcome string")
    d.add_argument("--matrix", required=True)
    d.add_argument("--outcome", required=True)
    d.add_argument("--s", type=int, required=True)
    d.add_argument("--max-edges", type=int, default=DEFAULT_EDGE_CAP)
    d.add_argument("--out")
    d.set_defaults(func=cmd_decode)

    c = sub.add_parser("check", help="certify an (s, L, K)-good code")
    c.add_argument("--matrix", required=True)
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--L", type=int, required=True)
    c.add_argument("--k-set", required=True, help="comma-separated k values")
    c.add_argument("--out")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("rates", help="numeric rate lower bounds")
    r.add_argument("--s-range", default="2..6")
    r.add_argument("--mode", choices=["full", "partial"], default="full")
    r.add_argument("--grid", type=int, default=200)
    r.add_argument("--tol", type=float, default=1e-6)
    r.add_argument("--compare-table1", action="store_true")
    r.add_argument("--out")
    r.set_defaults(func=cmd_rates)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"gtlab: capacity error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ParameterError, DomainError, OSError) as exc:
        print(f"gtlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
