"""Command-line front end.

    qcurv circle --n 256 --state fourier:k=3
    qcurv alpha-scan --alphas 0.1:0.9:9 --state gauss:center=0,width=0.4
    qcurv report --chart torus --state fourier:k=1 --format table
    qcurv selftest

Exit status: 0 when every check passes, 3 when a check fails, 2 on usage
errors, 1 on I/O failure.
"""

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .geometry import (AlphaChart, CurveChart, SphereChart, StereoChartN, TorusChart,
                       WrappedChart)
from .scenarios import SCENARIOS, ScenarioConfig, ScenarioResult, run
from .state import make_grid, make_state
from .uncertainty import UncertaintyReport, fmt, report

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_FAILED = 0, 1, 2, 3
SEED_ENV = "QCURV_SEED"

REPORT_CHARTS = ("circle", "curve", "alpha", "sphere-stereo", "sphere-wrapped", "sphere-n", "torus")


class UsageError(Exception):
    pass


def parse_alphas(text):
    """``a:b:k`` -> k evenly spaced values from a to b inclusive."""
    try:
        a, b, k = text.split(":")
        a, b, k = float(a), float(b), int(k)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b:k, got {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError("alpha count must be positive")
    return tuple(float(x) for x in np.linspace(a, b, k)) if k > 1 else (a,)


def _dims(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected e.g. 1,2,3, got {text!r}") from None


def _common(p):
    p.add_argument("--n", type=int, dest="resolution", help="grid resolution per axis")
    p.add_argument("--state", action="append", dest="states", metavar="DESCRIPTOR",
                   help="state descriptor, repeatable (e.g. fourier:k=3, gauss:width=0.4)")
    p.add_argument("--hbar", type=float)
    p.add_argument("--radius", type=float)
    p.add_argument("--battery", type=int, help="number of random states")
    p.add_argument("--config", help="ScenarioConfig JSON file")
    p.add_argument("--format", choices=("json", "csv", "table"), default="json")
    p.add_argument("--output", "-o", help="write here instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="qcurv", description="Coordinate and momentum operators on closed curved manifolds.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    for name in SCENARIOS + ("selftest",):
        p = sub.add_parser(name, help=f"run the {name} scenario")
        _common(p)
        if name == "alpha-scan":
            p.add_argument("--alphas", type=parse_alphas, help="a:b:k sweep")
        if name in ("sphere-n", "sphere-stereo"):
            p.add_argument("--dims", type=_dims, help="sphere dimensions, e.g. 1,3")
    p = sub.add_parser("report", help="uncertainty report for a single state")
    _common(p)
    p.add_argument("--chart", choices=REPORT_CHARTS, default="circle")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--dim", type=int, default=2, help="sphere dimension for --chart sphere-n")
    p.add_argument("--axis", type=int, default=0)
    p.add_argument("--export-state", metavar="CSV", help="write the state as node,re,im rows")
    return parser


def load_config(args, scenario):
    base = {}
    if args.config:
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except OSError as e:
            raise IOError(f"cannot read config: {e}") from e
        except json.JSONDecodeError as e:
            raise UsageError(f"config is not valid JSON: {e}") from e
        if not isinstance(base, dict):
            raise UsageError("config must be a JSON object")
        base.setdefault("scenario", scenario)
        if base["scenario"] != scenario:
            raise UsageError(f"config is for {base['scenario']!r}, not {scenario!r}")
    base["scenario"] = scenario
    for key in ("resolution", "hbar", "radius", "battery", "alphas", "dims"):
        v = getattr(args, key, None)
        if v is not None:
            base[key] = v
    if args.states:
        base["states"] = args.states
    seed = os.environ.get(SEED_ENV)
    if seed is not None and seed.strip():
        try:
            base["seed"] = int(seed)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {seed!r}") from None
    try:
        return ScenarioConfig.from_dict(base)
    except (TypeError, ValueError) as e:
        raise UsageError(str(e)) from e


def _report_chart(args, radius):
    c = args.chart
    if c == "circle":
        return CurveChart.circle(radius)
    if c == "curve":
        return CurveChart(radius=radius, eps=0.3)
    if c == "alpha":
        return AlphaChart(radius, args.alpha)
    if c == "sphere-stereo":
        return SphereChart(radius)
    if c == "sphere-wrapped":
        return WrappedChart(radius)
    if c == "sphere-n":
        return StereoChartN(args.dim, radius)
    return TorusChart()


def run_report(args, cfg):
    try:
        chart = _report_chart(args, cfg.radius)
        grid = make_grid(chart, cfg.resolution)
        descs = cfg.states or ("gauss:width=0.5",)
        res = ScenarioResult("report", cfg)
        for d in descs:
            psi = make_state(d, grid)
            res.reports.append(report(grid, args.axis, psi, cfg.hbar,
                                      1e-6 if isinstance(chart, (WrappedChart, SphereChart)) else 1e-7))
    except (TypeError, ValueError) as e:
        raise UsageError(str(e)) from e
    if args.export_state:
        try:
            psi.to_csv(args.export_state)
        except OSError as e:
            raise IOError(f"cannot write state: {e}") from e
    return res


# ---------------------------------------------------------------------------
# emitters


def _round(o):
    """12 significant digits; non-finite floats become strings."""
    if isinstance(o, dict):
        return {k: _round(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_round(v) for v in o]
    if isinstance(o, (bool, np.bool_)):
        return bool(o)
    if isinstance(o, (int, np.integer)):
        return int(o)
    if isinstance(o, (float, np.floating)):
        o = float(o)
        if not math.isfinite(o):
            return str(o)
        return float(f"{o:.12g}")
    return o


def to_json(result):
    return json.dumps(_round(result.to_dict()), indent=2, sort_keys=False) + "\n"


def to_csv(result):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(UncertaintyReport.CSV_COLUMNS + ("config_hash",))
    h = result.config.config_hash()
    for r in result.reports:
        w.writerow(r.csv_row() + [h])
    return buf.getvalue()


TABLE_COLUMNS = (("chart", 15), ("state", 36), ("axis", 4), ("delta_x", 14), ("delta_p", 14),
                 ("product", 14), ("bound", 14), ("boundary_analytic", 18), ("pass", 5))


def to_table(result):
    lines = [" ".join(name.rjust(w) for name, w in TABLE_COLUMNS)]
    for r in result.reports:
        d = r.to_dict()
        cells = []
        for name, w in TABLE_COLUMNS:
            v = d[name]
            text = f"{v:.6g}" if isinstance(v, float) else fmt(v)
            cells.append(text[-w:].rjust(w))
        lines.append(" ".join(cells))
    if result.checks:
        lines.append("")
        width = max(len(c.name) for c in result.checks)
        for c in result.checks:
            lines.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name.ljust(width)}  "
                         f"{c.value:>14.6g}  (tol {c.tolerance:g})")
    s = result.summary()
    lines.append("")
    lines.append(f"{result.scenario}: {'PASS' if s['pass'] else 'FAIL'}  "
                 f"{s['n_reports']} reports, {len(result.checks)} checks, "
                 f"{s['timing_s']:.2f} s, config {s['config_hash']}")
    return "\n".join(lines) + "\n"


EMITTERS = {"json": to_json, "csv": to_csv, "table": to_table}


def emit(result, fmt_name, path=None):
    text = EMITTERS[fmt_name](result)
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise IOError(f"cannot write {path}: {e}") from e


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    try:
        cfg = load_config(args, "report" if args.command == "report" else args.command)
        if args.command == "report":
            result = run_report(args, cfg)
        else:
            try:
                result = run(cfg)
            except (TypeError, ValueError) as e:
                raise UsageError(str(e)) from e
        emit(result, args.format, args.output)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"qcurv: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except IOError as e:
        print(f"qcurv: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if result.passed else EXIT_FAILED
