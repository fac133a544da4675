"""Command-line front end.

Subcommands:
    measure  entanglement measures (and optionally robustness) of one state
    convert  conversion probability/fidelity queries with the universal bound
    sweep    figure-style data sweeps written as CSV or JSON
    verify   seeded verification suites

Exit codes: 0 success, 1 domain or usage error, 2 solver refusal,
3 verification failure.  The env var QCONV_SEED supplies the default seed.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import conversion, measures, robustness, verify
from .errors import DomainError, SolverError, UsageError
from .states import PureState, parse_state_spec, werner


def _fmt(x):
    """Full-precision decimal rendering for CSV cells."""
    return f"{x:.17g}"


def _default_seed():
    try:
        return int(os.environ.get("QCONV_SEED", "0"))
    except ValueError:
        raise UsageError(f"QCONV_SEED = {os.environ['QCONV_SEED']!r} is not an integer")


def cmd_measure(args):
    state = parse_state_spec(args.state)
    report = measures.measure_report(state)
    rob = None
    if args.robustness:
        rob = robustness.generalized_robustness(state, tol=args.tol)
    if args.json:
        doc = report.to_json()
        if rob is not None:
            doc["robustness"] = rob.to_json()
        print(json.dumps(doc, indent=1))
    else:
        print(f"geometric      G   = {report.geometric:.9f}")
        print(f"concurrence    C   = {report.concurrence:.9f}")
        print(f"formation      E_F = {report.eof:.9f}")
        if rob is not None:
            print(f"robustness     R   = {rob.value:.9f}  (gap {rob.gap:.2e}, "
                  f"{rob.iterations} iterations)")
    return 0


def cmd_convert(args):
    initial = parse_state_spec(args.initial)
    if not isinstance(initial, PureState):
        raise DomainError(
            f"initial state {args.initial!r} is mixed; the closed-form optima "
            "cover pure initial states only"
        )
    target = parse_state_spec(args.target)
    rob = None
    if not args.no_bound:
        rob = robustness.generalized_robustness(initial.density())

    if args.prob is not None:
        report = conversion.f_p(initial, target, args.prob, robustness=rob,
                                initial=args.initial, target=args.target)
    elif args.fid is not None:
        report = conversion.p_f(initial, target, args.fid, robustness=rob,
                                initial=args.initial, target=args.target)
    else:
        f1, f2 = args.fid2
        report = conversion.p_f1_f2(initial, target, f1, f2, robustness=rob,
                                    initial=args.initial, target=args.target)

    if args.json:
        print(json.dumps(report.to_json(), indent=1))
    else:
        print(f"query  {report.query}")
        print(f"exact  {report.exact_value:.9f}")
        if report.thm1_bound is not None:
            print(f"bound  {report.thm1_bound:.9f}")
            print(f"gap    {report.gap:.9f}")
    return 0


_FIGURES = {
    # figure: (initial, target, axis, start, stop, points)
    "fig1a": ("pure:0.01", "werner:0.9", "p", 0.001, 1.0, 200),
    "fig1b": ("pure:0.01", "werner:{x}", "r", 0.0, 1.0, 200),
    "fig2": ("pure:0.2", "bell:phi+", "p", 0.001, 1.0, 200),
}


def _sweep_value(initial, target, axis, x, fixed_p):
    if axis == "p":
        return conversion.f_p(initial, target, x)
    if axis == "f":
        return conversion.p_f(initial, target, x)
    # axis == "r": fidelity at fixed probability against werner(x)
    return conversion.f_p(initial, werner(x), fixed_p)


def cmd_sweep(args):
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)

    def pick(flag, key, default=None):
        return flag if flag is not None else cfg.get(key, default)

    figure = args.figure
    if figure != "custom":
        d_initial, _, d_axis, d_start, d_stop, d_points = _FIGURES[figure]
        initial_spec = pick(args.initial, "initial", d_initial)
        target_spec = pick(args.target, "target",
                           None if d_axis == "r" else _FIGURES[figure][1])
        axis = d_axis
        rng_args = pick(args.range, "range", [d_start, d_stop, d_points])
    else:
        initial_spec = pick(args.initial, "initial")
        target_spec = pick(args.target, "target")
        axis = pick(args.axis, "axis")
        rng_args = pick(args.range, "range")
        if initial_spec is None or axis is None or rng_args is None:
            raise UsageError("custom sweeps need --initial, --axis, and --range")
        if axis != "r" and target_spec is None:
            raise UsageError("custom sweeps over p or f need --target")

    start, stop, points = float(rng_args[0]), float(rng_args[1]), int(rng_args[2])
    if not start < stop:
        raise UsageError(f"range start {start} must be below stop {stop}")
    if points < 2:
        raise UsageError(f"points must be >= 2, got {points}")
    if axis not in ("p", "r", "f"):
        raise UsageError(f"axis must be p, r, or f, got {axis!r}")

    initial = parse_state_spec(initial_spec)
    if not isinstance(initial, PureState):
        raise DomainError(f"initial state {initial_spec!r} must be pure")
    target = parse_state_spec(target_spec) if axis != "r" else None
    fixed_p = pick(args.prob, "prob", 0.75)

    bound_r = None
    if args.bound or cfg.get("bound", False):
        try:
            bound_r = robustness.generalized_robustness(initial.density())
        except SolverError as exc:
            print(f"warning: bound column left empty ({exc})", file=sys.stderr)

    xs = np.linspace(start, stop, points)
    rows = []
    for x in xs:
        x = float(x)
        rep = _sweep_value(initial, target, axis, x, fixed_p)
        bound = ""
        if bound_r is not None:
            tgt = werner(x) if axis == "r" else target
            denom = x if axis in ("p", "f") else fixed_p
            bound = _fmt(conversion.thm1_fidelity_bound(
                bound_r, measures.geometric_entanglement(tgt), denom))
        rows.append((x, rep.exact_value, bound))

    fmt = pick(args.format, "format", "csv")
    path = pick(args.out, "out", None)
    if fmt == "json":
        doc = [{"x": x, "exact": e, "bound": (None if b == "" else float(b))}
               for x, e, b in rows]
        text = json.dumps(doc, indent=1)
    else:
        lines = ["x,exact,bound"]
        lines += [f"{_fmt(x)},{_fmt(e)},{b}" for x, e, b in rows]
        text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args):
    report = verify.run_suite(args.suite, samples=args.samples, seed=args.seed)
    if args.json:
        print(json.dumps(report.to_json(), indent=1))
    else:
        tag = "PASS" if report.passed else "FAIL"
        print(f"{tag} {report.suite}: {report.cases} cases, "
              f"{len(report.failures)} failures, {report.wall_time:.2f}s")
        for fl in report.failures:
            print(f"  seed={fl['seed']} inputs={fl['inputs']} "
                  f"expected={fl['expected']} got={fl['got']} tol={fl['tolerance']}")
    return 0 if report.passed else 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qconv",
        description="Exact two-qubit stochastic approximate entanglement conversion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="entanglement measures of one state")
    p.add_argument("state", help="state spec, e.g. werner:0.9 or pure:0.2")
    p.add_argument("--robustness", action="store_true",
                   help="also solve the robustness SDP")
    p.add_argument("--tol", type=float, default=robustness.DEFAULT_TOL)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("convert", help="conversion probability/fidelity query")
    p.add_argument("initial", help="pure initial state spec")
    p.add_argument("target", help="target state spec")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--prob", type=float, metavar="P",
                   help="fidelity achievable at probability >= P")
    g.add_argument("--fid", type=float, metavar="F",
                   help="probability achievable at fidelity >= F")
    g.add_argument("--fid2", type=float, nargs=2, metavar=("F1", "F2"),
                   help="probability with errors on both ends")
    p.add_argument("--no-bound", action="store_true",
                   help="skip the robustness SDP and the universal bound")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("sweep", help="figure-style data sweep to CSV/JSON")
    p.add_argument("figure", choices=["fig1a", "fig1b", "fig2", "custom"])
    p.add_argument("--initial")
    p.add_argument("--target")
    p.add_argument("--axis", choices=["p", "r", "f"])
    p.add_argument("--range", type=float, nargs=3, metavar=("START", "STOP", "POINTS"))
    p.add_argument("--prob", type=float, help="fixed probability for r-sweeps")
    p.add_argument("--bound", action="store_true",
                   help="add the robustness bound column (runs the SDP)")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--config", help="JSON config mirroring the flags")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run a seeded verification suite")
    p.add_argument("suite", choices=list(verify.SUITES))
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def entry(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify" and args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except (DomainError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver refusal: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(entry())
