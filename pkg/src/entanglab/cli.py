"""Command-line front end.

Usage:
    entanglab entropy --lambda 10 --format json
    entanglab scan --lambda-min 100 --lambda-max 1000 --points 10 --spacing log
    entanglab spectrum --lambda 10 --region B --nodes 200
    entanglab bound --lambda 30
    entanglab physical --m electron --E 13.6eV --R 1
    entanglab physical --gamma 1 --R-over-lp 10
    entanglab selftest --level full

Exit codes: 0 success, 1 numerical failure, 2 usage error. Data goes to
standard output (or ``--out``); nothing time-dependent is ever written to it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import __version__, selftest
from .entropy import BOUND_VARIANTS, bound, entropy_report, spectral_entropy
from .errors import DomainError, SpectrumError
from .model import ModelParams, normalization
from .physics import (
    ELECTRON_MASS,
    ELECTRON_VOLT,
    ConstantsFileError,
    build_scenario,
    holographic_report,
    load_constants,
    scenario_from_gamma,
)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2


def fmt(v) -> str:
    """17 significant digits, enough for a lossless float round trip."""
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _unit_interval(text: str) -> float:
    v = _positive(text)
    if v > 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1], got {text}")
    return v


def _nodes(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 2:
        raise argparse.ArgumentTypeError("need at least 2 nodes")
    return v


_ENERGY_RE = re.compile(r"^\s*([0-9.eE+-]+)\s*(eV|keV|MeV|J)\s*$")
_ENERGY_UNITS = {"eV": ELECTRON_VOLT, "keV": 1e3 * ELECTRON_VOLT, "MeV": 1e6 * ELECTRON_VOLT, "J": 1.0}


def parse_energy(text: str) -> float:
    """'13.6eV' -> joules. The unit suffix is mandatory."""
    m = _ENERGY_RE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(
            f"energy needs a unit suffix (eV, keV, MeV or J), got {text!r}"
        )
    return _positive(m.group(1)) * _ENERGY_UNITS[m.group(2)]


def parse_mass(text: str) -> float:
    if text.strip().lower() == "electron":
        return ELECTRON_MASS
    return _positive(text)


def _write(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _common(p: argparse.ArgumentParser, lam: bool = True) -> None:
    if lam:
        p.add_argument("--lambda", dest="lam", type=_positive, required=True, help="coupling lambda > 0")
    p.add_argument("--x0", type=_unit_interval, default=1.0, help="observer location in (0, 1]")
    p.add_argument("--mode", choices=["exact", "asym"], default="exact")
    p.add_argument("--tol", type=_positive, default=1e-10)
    p.add_argument("--nodes", type=_nodes, default=200, help="Nystrom nodes")
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--out", help="write data here instead of standard output")


def _mode(args) -> str:
    return "asymptotic" if args.mode == "asym" else "exact"


def _flatten(prefix: str, obj, out: list) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else k, obj[k], out)
    elif isinstance(obj, list):
        out.append((prefix, "; ".join(str(x) for x in obj)))
    else:
        out.append((prefix, fmt(obj)))


def _csv_pairs(d: dict) -> str:
    rows: list = []
    _flatten("", d, rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    w.writerows(rows)
    return buf.getvalue()


def cmd_entropy(args) -> int:
    params = ModelParams(args.lam, args.x0)
    rep = entropy_report(params, _mode(args), args.nodes, args.tol)
    d = rep.to_dict()
    if args.format == "json":
        _write(args, _dump_json({"schema_version": SCHEMA_VERSION, "report": d}))
    else:
        _write(args, _csv_pairs(d))
    for err in rep.errors:
        print(f"error: {err}", file=sys.stderr)
    return EXIT_NUMERICAL if rep.errors else EXIT_OK


@dataclass
class ScanRow:
    lam: float
    S_diag_A: float | None
    S_diag_B: float | None
    S_spec_A: float | None
    S_spec_B: float | None
    bound_leading: float
    bound_subleading: float
    bound_intermediate: float
    trace_err_A: float | None
    trace_err_B: float | None
    flags: str


SCAN_HEADER = ["lambda"] + [f.name for f in fields(ScanRow)][1:]


def scan_row(lam: float, x0: float, mode: str, n_nodes: int, tol: float) -> ScanRow:
    rep = entropy_report(ModelParams(lam, x0), mode, n_nodes, tol)
    failed = [k for k, v in rep.checks.items() if v is False]
    flags = ";".join(failed + [f"error:{e.split(':', 1)[0]}" for e in rep.errors]) or "ok"
    if not rep.in_regime:
        flags = "out_of_regime" if flags == "ok" else f"out_of_regime;{flags}"

    def err(t):
        return None if t is None else t - 1.0

    return ScanRow(
        lam, rep.S_diag_A, rep.S_diag_B, rep.S_spec_A, rep.S_spec_B,
        rep.bounds["leading"], rep.bounds["subleading"], rep.bounds["intermediate"],
        err(rep.trace_A), err(rep.trace_B), flags,
    )


def _scan_row_star(job):
    return scan_row(*job)


def loglog_slope(lams, values) -> float:
    slope, _ = np.polyfit(np.log(lams), np.log(values), 1)
    return float(slope)


def scan_fit(rows: list[ScanRow]) -> dict:
    lams = np.array([r.lam for r in rows])
    lead = np.array([r.bound_leading for r in rows])
    sub = np.array([r.bound_subleading for r in rows])
    top = lams >= lams.max() / 10.0
    fit = {"leading_slope": loglog_slope(lams, lead), "subleading_slope": None,
           "subleading_fit_range": [float(lams[top].min()), float(lams[top].max())]}
    if top.sum() >= 2 and np.all(sub[top] > 0):
        fit["subleading_slope"] = loglog_slope(lams[top], sub[top])
    return fit


def lambda_grid(lam_min: float, lam_max: float, points: int, spacing: str) -> list[float]:
    if spacing == "log":
        grid = np.geomspace(lam_min, lam_max, points)
    else:
        grid = np.linspace(lam_min, lam_max, points)
    return [float(v) for v in grid]


def run_scan(grid, x0, mode, n_nodes, tol, jobs: int = 1) -> list[ScanRow]:
    job_list = [(lam, x0, mode, n_nodes, tol) for lam in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_scan_row_star, job_list))
    else:
        rows = [_scan_row_star(j) for j in job_list]
    return sorted(rows, key=lambda r: r.lam)


def cmd_scan(args) -> int:
    if not args.lambda_min < args.lambda_max:
        print("error: need --lambda-min < --lambda-max", file=sys.stderr)
        return EXIT_USAGE
    grid = lambda_grid(args.lambda_min, args.lambda_max, args.points, args.spacing)
    rows = run_scan(grid, args.x0, _mode(args), args.nodes, args.tol, args.jobs)
    fit = scan_fit(rows)
    if args.format == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "parameters": {"x0": args.x0, "mode": _mode(args), "nodes": args.nodes,
                           "tol": args.tol, "spacing": args.spacing},
            "rows": [dict(zip(SCAN_HEADER, (getattr(r, f.name) for f in fields(r)))) for r in rows],
            "fit": fit,
        }
        _write(args, _dump_json(payload))
    else:
        buf = io.StringIO()
        buf.write(f"# entanglab {__version__} scan\n")
        buf.write(f"# x0={fmt(args.x0)} mode={_mode(args)} nodes={args.nodes} "
                  f"tol={fmt(args.tol)} spacing={args.spacing}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SCAN_HEADER)
        for r in rows:
            w.writerow([fmt(getattr(r, f.name)) for f in fields(r)])
        for k in sorted(fit):
            v = fit[k]
            buf.write(f"# fit {k}={'..'.join(fmt(x) for x in v) if isinstance(v, list) else fmt(v)}\n")
        _write(args, buf.getvalue())
    return EXIT_OK


def cmd_spectrum(args) -> int:
    params = ModelParams(args.lam, args.x0)
    norm = normalization(params, "exact")
    try:
        res = spectral_entropy(args.region, params, norm, args.nodes, solver=args.solver)
    except SpectrumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    total = math.fsum(res.eigenvalues)
    if args.format == "json":
        _write(args, _dump_json({
            "schema_version": SCHEMA_VERSION, "lambda": args.lam, "x0": args.x0,
            "region": args.region, "nodes": args.nodes,
            "eigenvalues": [float(v) for v in res.eigenvalues],
            "sum": total, "entropy": res.entropy,
            "discarded_negative_mass": res.discarded_negative_mass,
        }))
    else:
        buf = io.StringIO()
        buf.write(f"# lambda={fmt(args.lam)} x0={fmt(args.x0)} region={args.region} nodes={args.nodes}\n")
        buf.write("index,eigenvalue\n")
        for i, v in enumerate(res.eigenvalues):
            buf.write(f"{i},{fmt(v)}\n")
        buf.write(f"# sum,{fmt(total)}\n# entropy,{fmt(res.entropy)}\n")
        _write(args, buf.getvalue())
    return EXIT_OK


def cmd_bound(args) -> int:
    params = ModelParams(args.lam, args.x0)
    norm = normalization(params, _mode(args))
    d = {"lambda": args.lam, "x0": args.x0, "lambda_eff": params.lam_eff, "mode": _mode(args)}
    for v in BOUND_VARIANTS:
        d[v] = bound(v, params, norm).value
    if args.format == "json":
        _write(args, _dump_json({"schema_version": SCHEMA_VERSION, **d}))
    else:
        _write(args, _csv_pairs(d))
    return EXIT_OK


def cmd_physical(args) -> int:
    try:
        constants = load_constants(args.constants)
    except ConstantsFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot read constants file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.gamma is not None or args.R_over_lp is not None:
        if args.gamma is None or args.R_over_lp is None:
            print("error: --gamma and --R-over-lp go together", file=sys.stderr)
            return EXIT_USAGE
        scenario = scenario_from_gamma(args.gamma, args.R_over_lp, args.x0, constants)
    else:
        if args.m is None or args.E is None or args.R is None:
            print("error: need --m, --E and --R (or --gamma with --R-over-lp)", file=sys.stderr)
            return EXIT_USAGE
        scenario = build_scenario(args.m, args.E, args.R, args.x0, constants)
    d = {"scenario": scenario.as_dict(), "holographic": holographic_report(scenario)}
    if args.format == "json":
        _write(args, _dump_json({"schema_version": SCHEMA_VERSION, **d}))
    else:
        _write(args, _csv_pairs(d))
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = selftest.run(args.level)
    width = max(len(name) for name, _, _ in results)
    passed = 0
    for name, ok, detail in results:
        passed += ok
        line = f"{name:<{width}}  {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f"  ({detail})"
        print(line)
    n = len(results)
    print(f"PASS {passed}/{n}" if passed == n else f"FAIL {passed}/{n}")
    return EXIT_OK if passed == n else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entanglab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="entropies, bounds and checks at one lambda")
    _common(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("scan", help="lambda grid with area-law fits")
    _common(p, lam=False)
    p.add_argument("--lambda-min", type=_positive, required=True)
    p.add_argument("--lambda-max", type=_positive, required=True)
    p.add_argument("--points", type=_nodes, default=10)
    p.add_argument("--spacing", choices=["linear", "log"], default="log")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_scan, format="csv")

    p = sub.add_parser("spectrum", help="Nystrom eigenvalues of one reduced density matrix")
    _common(p)
    p.add_argument("--region", choices=["A", "B"], default="A")
    p.add_argument("--solver", choices=["lapack", "jacobi"], default="lapack")
    p.set_defaults(func=cmd_spectrum, format="csv")

    p = sub.add_parser("bound", help="the three analytic entropy bounds")
    _common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("physical", help="map (m, |E|, R) to lambda, eta and the holographic bound")
    p.add_argument("--m", type=parse_mass, help="mass in kg, or 'electron'")
    p.add_argument("--E", type=parse_energy, help="binding energy |E| with unit, e.g. 13.6eV")
    p.add_argument("--R", type=_positive, help="boundary radius in metres")
    p.add_argument("--gamma", type=_positive, help="dimensionless kappa * l_P")
    p.add_argument("--R-over-lp", dest="R_over_lp", type=_positive, help="R in Planck lengths")
    p.add_argument("--x0", type=_unit_interval, default=1.0)
    p.add_argument("--constants", help="key=value file overriding hbar, G, c")
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_physical)

    p = sub.add_parser("selftest", help="run the invariant batteries")
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
