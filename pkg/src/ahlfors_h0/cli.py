"""Command line front end: ``ahlfors-h0 {h0,q3,scan,verify}``.

Exit codes: 0 ok, 1 bad configuration or arguments, 2 numeric failure,
3 a property suite failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Sequence

import numpy as np

from . import lens_lune as ll
from .extremal_search import NoFeasibleCurvature, SearchOptions, WrongQ, compute_H0, q3_closed_form
from .functionals import FOUR_PI, Configuration, ConfigurationError
from .properties import SUITES, run_suite
from .sphere_geom import GeometryError, QuadratureFailure, SpherePoint, stereographic

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_PROPERTY = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# ------------------------------------------------------------------ input


def parse_point(item: Any) -> SpherePoint:
    """"0.5+0.25i", "inf", a bare number, or a unit vector [x, y, z]."""
    if isinstance(item, bool):
        raise ConfigurationError(f"cannot read a point from {item!r}")
    if isinstance(item, (int, float)):
        return stereographic(complex(item))
    if isinstance(item, str):
        text = item.strip().lower().replace(" ", "")
        if text in ("inf", "infinity", "oo"):
            return stereographic("inf")
        try:
            z = complex(text.replace("i", "j"))
        except ValueError:
            raise ConfigurationError(f"cannot read a point from {item!r}") from None
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ConfigurationError(f"non-finite point {item!r}; use \"inf\"")
        return stereographic(z)
    if isinstance(item, (list, tuple)) and len(item) == 3:
        v = np.asarray(item, dtype=float)
        n = float(np.linalg.norm(v))
        if not np.all(np.isfinite(v)) or abs(n - 1.0) > 1e-6:
            raise ConfigurationError(f"{item!r} is not a unit vector")
        return SpherePoint.from_vector(v)
    raise ConfigurationError(f"cannot read a point from {item!r}")


def load_config(path: str) -> Configuration:
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot open {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path} is not valid JSON: {exc}") from None
    if isinstance(data, dict):
        data = data.get("points")
    if not isinstance(data, list):
        raise ConfigurationError("expected {\"points\": [...]} or a bare list of points")
    return Configuration(tuple(parse_point(p) for p in data))


# ------------------------------------------------------------------ output


def fmt(x: float) -> str:
    if isinstance(x, float) and not math.isfinite(x):
        return "null"
    return format(float(x), ".17g")


def to_json(obj: Any, indent: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(float(obj))
    return json.dumps(str(obj))


def to_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ commands


def _candidate_dict(c) -> dict:
    return {
        "tuple": list(c.labels),
        "Q": c.Q,
        "k": c.k,
        "theta": list(c.thetas),
        "value": c.value,
        "L": c.stats.L,
        "A": c.stats.A,
        "nbar": c.stats.nbar,
        "R": c.stats.R,
        "degmax": c.degmax,
        "attained": c.attained,
    }


def cmd_h0(args) -> int:
    config = load_config(args.config)
    opts = SearchOptions(
        qprime_min=args.qprime_min,
        qprime_max=args.qprime_max,
        allow_degenerate=args.allow_degenerate,
        rel_tol=args.tol,
        seed=args.seed,
    )
    rep = compute_H0(config, opts)
    diag = {k: v for k, v in rep.diagnostics.items() if k != "seconds"}
    for msg in diag["anomalies"]:
        print(f"warning: {msg}", file=sys.stderr)
    if args.format == "csv":
        cols = ["tuple", "Q", "k", "value", "L", "A", "nbar", "R", "degmax", "attained"]
        rows = []
        for c in rep.winners:
            d = _candidate_dict(c)
            d["tuple"] = " ".join(map(str, d["tuple"]))
            rows.append([d[k] for k in cols])
        emit(to_csv(cols, rows), args.out)
        return EXIT_OK
    report = {
        "q": config.q,
        "H0": rep.H0,
        "winners": [_candidate_dict(c) for c in rep.winners],
        "simplest": _candidate_dict(rep.simplest),
        "simplest_ties": [list(c.labels) for c in rep.simplest_ties],
        "diagnostics": diag,
    }
    emit(to_json(report) + "\n", args.out)
    return EXIT_OK


def cmd_q3(args) -> int:
    config = load_config(args.config)
    r = q3_closed_form(config)
    report = {"H0": r.H0, "theta_star": r.theta_star, "pair": list(r.pair), "label": r.label}
    if args.format == "csv":
        emit(to_csv(["H0", "theta_star", "pair", "label"], [[r.H0, r.theta_star, f"{r.pair[0]} {r.pair[1]}", r.label]]), args.out)
    else:
        emit(to_json(report) + "\n", args.out)
    return EXIT_OK


def scan_rows(family: str, grid: int, delta: float, A0: float, q: int, nbar: int, lo: float | None, hi: float | None):
    if family == "theta":
        lo = 0.0 if lo is None else lo
        hi = ll.HALF_PI if hi is None else hi
        for t in np.linspace(lo, hi, grid):
            t = float(t)
            yield [t, ll.L_lens(delta, t), ll.A_lens(delta, t), ll.h_family(A0, q, delta, t)]
    elif family == "disk":
        lo = 1e-3 if lo is None else lo
        hi = math.pi - 1e-3 if hi is None else hi
        for d in np.linspace(lo, hi, grid):
            d = float(d)
            L = 2 * math.pi * math.sin(d / 2)
            yield [d, L, 2 * math.pi * (1 - math.cos(d / 2)), ll.h_disk(q, nbar, d)]
    else:
        raise UsageError(f"unknown scan family {family!r}; choose theta or disk")


def cmd_scan(args) -> int:
    if args.family not in ("theta", "disk"):
        raise UsageError(f"unknown scan family {args.family!r}; choose theta or disk")
    rows = list(scan_rows(args.family, args.grid, args.delta, args.A0, args.q, args.nbar, args.lo, args.hi))
    header = ["parameter", "L", "A", "h"]
    if args.format == "json":
        emit(to_json({"family": args.family, "columns": header, "rows": rows}) + "\n", args.out)
    else:
        emit(to_csv(header, rows), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if any(n not in SUITES for n in names):
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    results = [run_suite(n, seed=args.seed, trials=args.trials) for n in names]
    if args.format == "csv":
        cols = ["suite", "trials", "checks", "failures", "worst", "skipped", "passed"]
        emit(to_csv(cols, [[r.as_dict()[c] for c in cols] for r in results]), args.out)
    else:
        emit(to_json({"seed": args.seed, "suites": [r.as_dict() for r in results]}) + "\n", args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY


# ------------------------------------------------------------------ parser


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _grid(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ahlfors-h0", description="H0 of a finite point set on the Riemann sphere")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default):
        sp.add_argument("--format", choices=("json", "csv"), default=fmt_default)
        sp.add_argument("--out", metavar="PATH")

    h = sub.add_parser("h0", help="full search for H0 and its simplest extremal surfaces")
    h.add_argument("config", help="JSON file with {\"points\": [...]}, or - for stdin")
    h.add_argument("--qprime-min", type=int, default=2)
    h.add_argument("--qprime-max", type=int, default=None)
    h.add_argument("--allow-degenerate", action="store_true")
    h.add_argument("--tol", type=_positive_float, default=1e-9, help="relative tolerance for ties")
    h.add_argument("--seed", type=int, default=0, help="seed for the degree estimate")
    common(h, "json")
    h.set_defaults(func=cmd_h0)

    q = sub.add_parser("q3", help="closest-pair lens value for three points")
    q.add_argument("config")
    common(q, "json")
    q.set_defaults(func=cmd_q3)

    s = sub.add_parser("scan", help="tabulate the lens family in theta or the disk family in delta")
    s.add_argument("family", help="theta or disk")
    s.add_argument("--grid", type=_grid, default=101)
    s.add_argument("--delta", type=float, default=math.pi / 2, help="chord length for the theta family")
    s.add_argument("--A0", type=float, default=FOUR_PI)
    s.add_argument("--q", type=int, default=3)
    s.add_argument("--nbar", type=int, default=0)
    s.add_argument("--lo", type=float, default=None)
    s.add_argument("--hi", type=float, default=None)
    common(s, "csv")
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("verify", help="run a randomised property suite")
    v.add_argument("suite", help="all or one of: " + ", ".join(SUITES))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=None)
    common(v, "json")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    if getattr(args, "trials", None) is not None and args.trials < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigurationError, GeometryError, UsageError, WrongQ, ll.DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NoFeasibleCurvature, QuadratureFailure, ArithmeticError) as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
