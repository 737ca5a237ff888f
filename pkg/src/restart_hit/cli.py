"""``restart-hit`` command-line interface.

Exit codes: 0 success / finite verdict, 1 usage or input error,
2 infinite hitting time or infeasible target. Reports are JSON documents
carrying ``schema_version``; curves and tables are CSV. Numbers are written
with 12 significant digits and infinity as the string ``"inf"``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import examples as ex
from .errors import InfeasibleTarget, RestartHitError
from .hitting import classify, hitting_time
from .optimize import golden_section, minimize_p, v_curve
from .simulate import sample_expline_hitting, sample_hitting_time, sample_lattice_hitting
from .specfile import SpecError, load_spec
from .stationary import invariant_stationary

REPORT_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_INFINITE = 0, 1, 2

EXPLINE_DEFAULTS = dict(mu=1.0, a=0.0, b=1.0, r=-2.0, p=0.29289, x0=2.0)
LATTICE_DEFAULTS = dict(r=3, p=0.2, k=3)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(x: float) -> str:
    return "inf" if x == math.inf else format(float(x), ".12g")


def num(x):
    """JSON value for a number: rounded to 12 significant digits, ``inf`` as a string."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(format(x, ".12g"))


def emit_report(doc: dict, out) -> None:
    out.write(json.dumps({"schema_version": REPORT_VERSION, **doc}, indent=2) + "\n")


def emit_csv(header, rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def _objective(spec, args):
    if args.objective == "state":
        if args.state is None:
            raise UsageError("--state is required with --objective state")
        return spec.index(args.state)
    return args.objective


def cmd_solve(args, out) -> int:
    spec = load_spec(args.spec)
    chain = spec.chain()
    sol = hitting_time(chain, spec.H)
    q = invariant_stationary(chain)
    c = classify(chain, spec.H, q)
    if args.format == "csv":
        emit_csv(
            ["state", "in_target", "v1", "v", "q"],
            [
                [s, int(i in spec.H), float(sol.v1[i]), float(sol.v[i]), float(q.q[i])]
                for i, s in enumerate(spec.states)
            ],
            out,
        )
    else:
        emit_report(
            {
                "command": "solve",
                "states": list(spec.states),
                "target": [spec.states[i] for i in spec.H.indices],
                "p": num(spec.p),
                "v1": [num(v) for v in sol.v1],
                "denom": num(sol.denom),
                "v": [num(v) for v in sol.v],
                "q": [num(v) for v in q.q],
                "q_target": num(c.q_mass),
                "verdict": "finite" if c.finite else "infinite",
                "criteria": {
                    "q_positive": c.q_positive,
                    "all_finite": c.all_finite,
                    "finite_q_ae": c.finite_q_ae,
                    "bounded": c.bounded,
                },
            },
            out,
        )
    return EXIT_OK if c.finite else EXIT_INFINITE


def cmd_curve(args, out) -> int:
    spec = load_spec(args.spec)
    x = _objective(spec, args)
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    curve = v_curve(spec.kernel, spec.nu, spec.H, x, np.linspace(0.0, 1.0, args.grid))
    if args.format == "report":
        emit_report(
            {
                "command": "curve",
                "objective": spec.states[x] if isinstance(x, int) else x,
                "rows": [{"p": num(p), "v": num(v)} for p, v in zip(curve.p, curve.values)],
            },
            out,
        )
    else:
        emit_csv(["p", "V"], zip(curve.p, curve.values), out)
    return EXIT_OK


def cmd_optimize(args, out) -> int:
    spec = load_spec(args.spec)
    x = _objective(spec, args)
    try:
        res = minimize_p(spec.kernel, spec.nu, spec.H, x, grid=args.grid)
    except InfeasibleTarget as e:
        print(f"infeasible: {e}; the hitting time is infinite for every p in (0, 1)", file=sys.stderr)
        return EXIT_INFINITE
    if args.format == "csv":
        emit_csv(["p_opt", "value", "bracket", "evaluations"], [[res.p_opt, res.value, res.bracket, res.evaluations]], out)
    else:
        emit_report(
            {
                "command": "optimize",
                "objective": spec.states[x] if isinstance(x, int) else x,
                "p_opt": num(res.p_opt),
                "value": num(res.value),
                "bracket": num(res.bracket),
                "evaluations": res.evaluations,
            },
            out,
        )
    return EXIT_OK


def _pick(args, name, defaults):
    v = getattr(args, name)
    return defaults[name] if v is None else v


def cmd_simulate(args, out) -> int:
    common = dict(n=args.replicas, cap=args.cap, seed=args.seed)
    if args.example == "expline":
        prm = {k: float(_pick(args, k, EXPLINE_DEFAULTS)) for k in EXPLINE_DEFAULTS}
        stats = sample_expline_hitting(prm["mu"], prm["a"], prm["b"], prm["r"], prm["p"], prm["x0"], **common)
        analytic = ex.expline_v(ex.ExpLineParams(prm["mu"], prm["a"], prm["b"], prm["r"], prm["p"]), prm["x0"])
        model = "expline"
    elif args.example == "lattice":
        prm = {k: _pick(args, k, LATTICE_DEFAULTS) for k in LATTICE_DEFAULTS}
        prm["r"], prm["k"], prm["p"] = int(prm["r"]), int(prm["k"]), float(prm["p"])
        stats = sample_lattice_hitting(prm["r"], prm["p"], prm["k"], **common)
        analytic = ex.lattice_v(ex.LatticeParams(prm["r"], prm["p"]), prm["k"])
        model = "lattice"
    else:
        if args.spec is None or args.state is None:
            raise UsageError("simulate needs --spec and --state, or --example")
        spec = load_spec(args.spec)
        p = spec.p if args.p is None else args.p
        chain = spec.chain(p)
        x = spec.index(args.state)
        stats = sample_hitting_time(chain, spec.H, x, **common)
        analytic = float(hitting_time(chain, spec.H).v[x])
        prm = {"state": spec.states[x], "p": p}
        model = "chain"
    finite = math.isfinite(analytic)
    z = stats.zscore(analytic) if finite else None
    if args.format == "csv":
        emit_csv(
            ["n", "mean", "stderr", "ci95_lo", "ci95_hi", "truncated", "analytic", "zscore"],
            [[stats.n, stats.mean, stats.stderr, stats.ci95[0], stats.ci95[1], stats.truncated,
              analytic, "" if z is None else z]],
            out,
        )
    else:
        emit_report(
            {
                "command": "simulate",
                "model": model,
                "params": {k: (num(v) if isinstance(v, float) else v) for k, v in prm.items()},
                "seed": args.seed,
                "replicas": args.replicas,
                "cap": args.cap,
                "n": stats.n,
                "mean": num(stats.mean),
                "stderr": num(stats.stderr),
                "ci95": [num(stats.ci95[0]), num(stats.ci95[1])],
                "truncated": stats.truncated,
                "analytic": num(analytic),
                "zscore": None if z is None else num(z),
            },
            out,
        )
    return EXIT_OK if finite else EXIT_INFINITE


def _expline_numeric_popt(mu: float, gap: float) -> float:
    # r must sit strictly left of a; a zero gap is taken as its limit
    r = -max(gap, 1e-300)
    return golden_section(lambda p: ex.expline_v(ex.ExpLineParams(mu, 0.0, 1.0, r, p), 2.0), 1e-9, 1 - 1e-9, 1e-12)[0]


def _lattice_numeric_popt(r: int) -> float:
    return golden_section(lambda p: 1.0 / (p * ex.lattice_alpha1(p) ** r), 1e-12, 1 - 1e-12, 1e-12)[0]


def cmd_example(args, out) -> int:
    fmt_out = args.format or ("report" if args.sub == "popt" else "csv")
    if args.name == "expline":
        mu = float(_pick(args, "mu", EXPLINE_DEFAULTS))
        if args.sub == "popt":
            gap = 2.0 if args.gap is None else float(args.gap)
            exact = ex.expline_p_opt(mu, gap)
            numeric = _expline_numeric_popt(mu, gap)
            row = dict(mu=mu, gap=gap, p_opt=exact, p_opt_asymptotic=ex.expline_p_opt_asymptotic(mu, gap),
                       p_opt_numeric=numeric, delta_numeric=abs(exact - numeric))
            return _emit_row("expline", row, fmt_out, out)
        if args.sub == "curve":
            a, b = float(_pick(args, "a", EXPLINE_DEFAULTS)), float(_pick(args, "b", EXPLINE_DEFAULTS))
            r, x0 = float(_pick(args, "r", EXPLINE_DEFAULTS)), float(_pick(args, "x0", EXPLINE_DEFAULTS))
            ps = np.linspace(0, 1, args.grid + 2)[1:-1]
            rows = [[p, ex.expline_v1(ex.ExpLineParams(mu, a, b, r, p), x0),
                     ex.expline_v(ex.ExpLineParams(mu, a, b, r, p), x0)] for p in ps]
            return _emit_table("expline", ["p", "V1", "V"], rows, fmt_out, out)
        gaps = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0]
        rows = [[g, ex.expline_p_opt(1.0, g), ex.expline_p_opt_asymptotic(1.0, g)] for g in gaps]
        return _emit_table("expline", ["mu_gap", "p_opt", "p_opt_asymptotic"], rows, fmt_out, out)

    if args.sub == "popt":
        r = int(_pick(args, "r", LATTICE_DEFAULTS))
        exact = ex.lattice_p_opt(r)
        series = ex.lattice_p_opt_series(r)
        numeric = _lattice_numeric_popt(r)
        row = dict(r=r, p_opt=exact, p_opt_series=series, delta_series=abs(exact - series),
                   p_opt_numeric=numeric, delta_numeric=abs(exact - numeric))
        return _emit_row("lattice", row, fmt_out, out)
    if args.sub == "curve":
        r, k = int(_pick(args, "r", LATTICE_DEFAULTS)), int(_pick(args, "k", LATTICE_DEFAULTS))
        ps = np.linspace(0, 1, args.grid + 2)[1:-1]
        rows = [[p, ex.lattice_v(ex.LatticeParams(r, p), k), ex.lattice_v_far(ex.LatticeParams(r, p))] for p in ps]
        return _emit_table("lattice", ["p", "V", "V_far"], rows, fmt_out, out)
    rs = [1, 2, 3, 5, 10, 20, 30, 50, 100]
    rows = [[r, ex.lattice_p_opt(r), ex.lattice_p_opt_series(r), abs(ex.lattice_p_opt(r) - ex.lattice_p_opt_series(r))]
            for r in rs]
    return _emit_table("lattice", ["r", "p_opt", "p_opt_series", "delta"], rows, fmt_out, out)


def _emit_row(name, row, fmt_out, out) -> int:
    if fmt_out == "csv":
        emit_csv(list(row), [[float(v) if isinstance(v, float) else v for v in row.values()]], out)
    else:
        emit_report({"command": "example", "name": name,
                     **{k: (num(v) if isinstance(v, float) else v) for k, v in row.items()}}, out)
    return EXIT_OK


def _emit_table(name, header, rows, fmt_out, out) -> int:
    if fmt_out == "report":
        emit_report({"command": "example", "name": name,
                     "rows": [{h: num(v) for h, v in zip(header, row)} for row in rows]}, out)
    else:
        emit_csv(header, [[float(v) for v in row] for row in rows], out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="restart-hit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    fmt_choices = ("csv", "report")

    s = sub.add_parser("solve", help="hitting times, invariant law and finiteness verdict")
    s.add_argument("--spec", required=True)
    s.add_argument("--format", choices=fmt_choices, default="report")
    s.set_defaults(func=cmd_solve)

    objectives = ("state", "max", "nu-avg")
    c = sub.add_parser("curve", help="V as a function of p on a uniform grid over [0, 1]")
    c.add_argument("--spec", required=True)
    c.add_argument("--state")
    c.add_argument("--objective", choices=objectives, default="state")
    c.add_argument("--grid", type=int, default=11)
    c.add_argument("--format", choices=fmt_choices, default="csv")
    c.set_defaults(func=cmd_curve)

    o = sub.add_parser("optimize", help="minimize V over the restart probability")
    o.add_argument("--spec", required=True)
    o.add_argument("--state")
    o.add_argument("--objective", choices=objectives, default="state")
    o.add_argument("--grid", type=int, default=64)
    o.add_argument("--format", choices=fmt_choices, default="report")
    o.set_defaults(func=cmd_optimize)

    m = sub.add_parser("simulate", help="Monte Carlo estimate of the hitting time")
    m.add_argument("--spec")
    m.add_argument("--state")
    m.add_argument("--example", choices=("expline", "lattice"))
    for name, typ in (("mu", float), ("a", float), ("b", float), ("r", float), ("x0", float), ("k", int), ("p", float)):
        m.add_argument(f"--{name}", type=typ)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--replicas", type=int, default=100_000)
    m.add_argument("--cap", type=int, default=10_000_000)
    m.add_argument("--format", choices=fmt_choices, default="report")
    m.set_defaults(func=cmd_simulate)

    e = sub.add_parser("example", help="closed forms for the exponential line and lattice walks")
    e.add_argument("name", choices=("expline", "lattice"))
    e.add_argument("sub", choices=("popt", "curve", "table"))
    for name, typ in (("mu", float), ("gap", float), ("a", float), ("b", float), ("r", float), ("x0", float), ("k", int)):
        e.add_argument(f"--{name}", type=typ)
    e.add_argument("--grid", type=int, default=99)
    e.add_argument("--format", choices=fmt_choices)
    e.set_defaults(func=cmd_example)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if not 0 <= getattr(args, "seed", 0) < 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        return args.func(args, out)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
    except (SpecError, RestartHitError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
