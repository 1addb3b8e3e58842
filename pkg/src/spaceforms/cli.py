"""Command-line front end: ``classify``, ``verify``, ``catalog``, ``plotdata``.

Exit codes: 0 success, 1 usage/IO/parse error, 2 condition failure or
catalog mismatch, 3 numerical tolerance failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import catalog as cat
from . import foliation as fo
from . import numerics as nm
from .groups import DEFAULT_BUDGET, EnumerationBudget
from .specfile import SpecFileError, load

EXIT_OK, EXIT_USAGE, EXIT_CONDITION, EXIT_TOLERANCE = 0, 1, 2, 3
PLOT_HEADER = ["x1", "x2", "x3", "lambda", "conf_defect", "harm_residual"]


def _budget(args) -> EnumerationBudget:
    return EnumerationBudget(args.budget_word_length, args.budget_radius, DEFAULT_BUDGET.max_elements)


def _tolerances(args) -> nm.Tolerances:
    return nm.Tolerances(args.tol_conformality, args.tol_harmonicity, args.tol_geodesy)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --- classify -------------------------------------------------------------------------

def classify_text(rep: fo.VerificationReport) -> str:
    lines = [f"group: {rep.label or '(unlabelled)'}  ambient: {rep.ambient}  foliation: {rep.foliation}"]
    for name in ("free", "discrete", "a", "b1", "b2"):
        v = getattr(rep, name)
        if v is None:
            lines.append(f"  {name:8s} not reached")
            continue
        status = "holds" if v.holds else "FAILS"
        lines.append(f"  {name:8s} {status}" + (f"  ({v.note})" if v.note else ""))
    if rep.h_types:
        lines.append(f"  H1 = {rep.h_types[0]}, H2 = {rep.h_types[1]}")
    if rep.leaf:
        lines.append("leaf group generators:")
        lines.extend(f"  {d}" for d in rep.leaf.describe() or ["trivial"])
    if rep.orbifold is not None:
        lines.append(f"L^M = {rep.orbifold}")
    msg = rep.failure_message()
    if msg:
        lines.append(msg)
    lines.extend(f"note: {n}" for n in rep.notes)
    return "\n".join(lines) + "\n"


def cmd_classify(args) -> int:
    try:
        spec = load(args.path).to_group_spec()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpecFileError as exc:
        print(f"error: {args.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = fo.run_pipeline(spec, _budget(args))
    text = _dump_json(rep.as_dict()) if args.format == "json" else classify_text(rep)
    _emit(text, args.out)
    return EXIT_OK if rep.accepted else EXIT_CONDITION


# --- verify ---------------------------------------------------------------------------

def verify_report(summary: nm.VerifySummary, decay: nm.DecayProfile | None) -> dict:
    rows = []
    for r in summary.rows:
        rows.append({
            "point": list(r.point),
            "lambda": r.dilation,
            "expected_lambda": r.expected_dilation,
            "conf_defect": r.conf_defect,
            "harm_residual": max(r.harm_residuals.values(), default=0.0),
            "geodesic_defect": r.geodesic_defect,
        })
    out = {
        "map": summary.map_name,
        "seed": summary.seed,
        "samples": len(summary.rows),
        "tolerances": vars(summary.tolerances),
        "max_conf_defect": summary.max("conf_defect"),
        "max_dilation_error": summary.max_dilation_error(),
        "max_harm_residual": summary.max_harm(),
        "max_geodesic_defect": summary.max("geodesic_defect"),
        "min_order": summary.min_order(),
        "ok": summary.ok,
        "failures": summary.failures,
        "rows": rows,
    }
    if decay is not None:
        out["decay_exponent"] = decay.exponent
        out["expected_decay_exponent"] = decay.expected
    return out


def verify_text(d: dict) -> str:
    lines = [f"map {d['map']}  seed {d['seed']}  samples {d['samples']}"]
    lines.append(f"{'x':>40s} {'lambda':>14s} {'conf_defect':>12s} {'harm_resid':>12s} {'geod_defect':>12s}")
    for r in d["rows"]:
        pt = "(" + ", ".join(f"{v:.4f}" for v in r["point"]) + ")"
        lines.append(f"{pt:>40s} {r['lambda']:14.9f} {r['conf_defect']:12.3e} "
                     f"{r['harm_residual']:12.3e} {r['geodesic_defect']:12.3e}")
    lines.append(f"max conformality defect {d['max_conf_defect']:.3e}")
    lines.append(f"max dilation error {d['max_dilation_error']:.3e}")
    lines.append(f"max harmonicity residual {d['max_harm_residual']:.3e}")
    lines.append(f"max fibre geodesic defect {d['max_geodesic_defect']:.3e}")
    if d["min_order"] is not None:
        lines.append(f"min convergence order {d['min_order']:.3f}")
    if "decay_exponent" in d:
        lines.append(f"dilation decay exponent near the axis {d['decay_exponent']:.6f} "
                     f"(expected {d['expected_decay_exponent']:g})")
    lines.extend(f"FAIL {f}" for f in d["failures"])
    lines.append("all residuals within tolerance" if d["ok"] else f"{len(d['failures'])} tolerance failures")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    try:
        m = nm.make_map(args.map)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    tol = _tolerances(args)
    summary = nm.verify_map(m, samples=args.samples, seed=args.seed, tol=tol)
    decay = None
    q = m.notes.get("q")
    if q is not None and q > 1:
        decay = nm.check_critical_dilation(q)
    d = verify_report(summary, decay)
    ok = summary.ok and (decay is None or abs(decay.exponent - decay.expected) <= 1e-2)
    d["ok"] = ok
    _emit(_dump_json(d) if args.format == "json" else verify_text(d), args.out)
    return EXIT_OK if ok else EXIT_TOLERANCE


# --- catalog --------------------------------------------------------------------------

def cmd_catalog(args) -> int:
    cases = cat.select(args.filter)
    if not cases:
        print(f"error: no catalog case matches {args.filter!r}", file=sys.stderr)
        return EXIT_USAGE
    report = cat.run_catalog(_budget(args), args.filter, args.seed)
    outdir = Path(args.out or ".")
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "report.txt").write_text(report.to_text(), encoding="utf-8")
        (outdir / "report.json").write_text(_dump_json(report.as_dict()), encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(_dump_json(report.as_dict()) if args.format == "json" else report.to_text())
    return EXIT_OK if report.ok else EXIT_CONDITION


# --- plotdata -------------------------------------------------------------------------

def parse_grid(text: str) -> list[np.ndarray]:
    """``"a:b:n,a:b:n,a:b:n"``; a single value ``"c"`` is a one-point axis."""
    axes = []
    for part in text.split(","):
        bits = part.strip().split(":")
        if len(bits) == 1:
            axes.append(np.array([float(bits[0])]))
        elif len(bits) == 3:
            n = int(bits[2])
            if n < 1:
                raise ValueError("grid counts must be positive")
            axes.append(np.linspace(float(bits[0]), float(bits[1]), n))
        else:
            raise ValueError(f"bad grid axis {part!r}")
    if len(axes) != 3:
        raise ValueError("grid needs three axes")
    return axes


DEFAULT_GRIDS = {
    "euclidean3": "-1:1:10,-1:1:10,0",
    "hyperbolic3": "0,0,0.5:2:16",
    "sphere3": "0.1:1.4:5,0:6:5,0:6:2",
}


def plot_rows(m: nm.ChartedMap, coords: list[np.ndarray]) -> list[list[float]]:
    """One row per point; for the Hopf map the coordinates are (eta, xi1, xi2)."""
    rows = []
    tests = nm.builtin_tests()
    for c in coords:
        x = nm.hopf_point(*c) if m.domain == "sphere3" else np.asarray(c, dtype=float)
        lam = defect = harm = math.nan
        try:
            lam = nm.dilation(m, x)
            d = nm.check_horizontal_conformality(m, x)
            lam, defect = d.value, d.defect
            vals = []
            for f in tests:
                try:
                    vals.append(nm.check_harmonicity(m, f, x))
                except nm.CriticalPointError:
                    pass
            harm = max(vals) if vals else math.nan
        except nm.CriticalPointError:
            pass
        rows.append([float(v) for v in (*c, lam, defect, harm)])
    return rows


def cmd_plotdata(args) -> int:
    try:
        m = nm.make_map(args.map)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.samples:
        rng = np.random.default_rng(args.seed)
        pts = nm.sample_points(m, args.samples, rng)
        if m.domain == "sphere3":
            coords = [_hopf_coords(p) for p in pts]
        else:
            coords = [tuple(p) for p in pts]
    else:
        try:
            axes = parse_grid(args.grid or DEFAULT_GRIDS[m.domain])
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        coords = [(a, b, c) for a in axes[0] for b in axes[1] for c in axes[2]]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PLOT_HEADER)
    for row in plot_rows(m, coords):
        w.writerow([repr(v) for v in row])
    try:
        _emit(buf.getvalue(), args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def _hopf_coords(x: np.ndarray) -> tuple:
    eta = math.atan2(math.hypot(x[2], x[3]), math.hypot(x[0], x[1]))
    return (eta, math.atan2(x[1], x[0]), math.atan2(x[3], x[2]))


# --- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spaceforms", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-word-length", type=int, default=DEFAULT_BUDGET.max_word_length)
    common.add_argument("--budget-radius", type=float, default=DEFAULT_BUDGET.ball_radius)
    common.add_argument("--tol-conformality", type=float, default=nm.Tolerances.conformality)
    common.add_argument("--tol-harmonicity", type=float, default=nm.Tolerances.harmonicity)
    common.add_argument("--tol-geodesy", type=float, default=nm.Tolerances.geodesy)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="output file (catalog: output directory)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="run the pipeline on a group spec file")
    c.add_argument("path")
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", parents=[common], help="check a standard harmonic morphism numerically")
    v.add_argument("map", help="pi1, hopf, pi4 or screw:q")
    v.add_argument("--samples", type=int, default=100)
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("catalog", parents=[common], help="run the catalogue of standard quotients")
    k.add_argument("--filter", default=None, help="comma separated id globs, e.g. 'euclid-*'")
    k.set_defaults(func=cmd_catalog)

    d = sub.add_parser("plotdata", parents=[common], help="write dilation and residuals on a grid as CSV")
    d.add_argument("map")
    d.add_argument("--grid", default=None, help="three axes a:b:n or single values; write --grid=-1:1:10,... for negative starts")
    d.add_argument("--samples", type=int, default=0, help="use seeded random points instead of a grid")
    d.set_defaults(func=cmd_plotdata)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
