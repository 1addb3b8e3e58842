"""Acceptance criteria 1-8, one test each.

Each test records a one-line verdict that ``conftest.py`` prints in the
terminal summary (and each line is also printed when run with ``-s``).
"""

from __future__ import annotations

import json
import math
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from spaceforms import catalog as cat
from spaceforms import foliation as fo
from spaceforms import groups as gr
from spaceforms import motions as mo
from spaceforms import numerics as nm
from spaceforms import quaternions as qt
from spaceforms.cli import EXIT_CONDITION, EXIT_OK, main
from spaceforms.groups import GroupSpec
from spaceforms.motions import Angle

pytestmark = pytest.mark.slow

FIXTURES = Path(__file__).parent / "fixtures"
RESULTS: dict[int, str] = {}
SAMPLES = 100
SEED = 20261016


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


# --- 1-3: catalogue reproduction --------------------------------------------------------

def _run(pattern: str):
    t0 = time.perf_counter()
    rep = cat.run_catalog(pattern=pattern, seed=SEED, residuals=False)
    return rep, time.perf_counter() - t0


def test_criterion_1_euclidean_families():
    rep, secs = _run("euclid-*")
    bad = [f"{r.case}: got {r.report.orbifold or r.report.failed_condition}, want {r.expected}"
           for r in rep.results if not r.match]
    not_free = [r.case for r in rep.results if not (r.report.free.holds and r.report.discrete.holds)]
    ok = not bad and not not_free and len(rep.results) == 20 and secs < 60
    record(1, ok, f"{len(rep.results) - len(bad)}/{len(rep.results)} Euclidean sub-cases match "
                  f"in {secs:.1f}s (limit 60s){'; ' + '; '.join(bad) if bad else ''}")


def test_criterion_2_spherical_rows():
    rep, secs = _run("sphere-*")
    bad = [r.case for r in rep.results if not r.match]
    finite = []
    for r in rep.results:
        spec = cat.CASES[r.case].build()
        enum = gr.enumerate_group(spec)
        finite.append(enum.complete and r.report.free.holds)
    ok = not bad and all(finite) and len(rep.results) == 6 and secs < 60
    got = ", ".join(f"{r.case}={r.report.orbifold}" for r in rep.results)
    record(2, ok, f"{len(rep.results) - len(bad)}/6 rows match, all free and finite: {all(finite)}; "
                  f"{got}; {secs:.1f}s")


def test_criterion_3_negative_controls():
    rep, _ = _run("neg-*")
    reasons = {r.case: r.report.failed_condition for r in rep.results}
    named = all((r.report.failure_message() or "").startswith(f"{r.expect_reject} violated")
                for r in rep.results)
    ok = reasons == {"neg-example1": "b1", "neg-example2-irrational": "b2", "neg-tilted-screw": "a"} and named
    record(3, ok, f"rejections {reasons}, messages name the condition: {named}")


# --- 4-6: numerical harmonic morphisms --------------------------------------------------

def _summary(name: str):
    return nm.verify_map(nm.make_map(name), samples=SAMPLES, seed=SEED)


def _harm_count_ok(summary, need: int = 3) -> bool:
    return all(len(r.harm_residuals) >= need for r in summary.rows)


def _orders_ok(summary) -> bool:
    mo_ = summary.min_order()
    return mo_ is None or mo_ >= 1.8


def test_criterion_4_numerical_suite():
    details, ok = [], True
    expect = {"pi1": 1e-8, "hopf": 1e-5, "pi4": 1e-5}
    for name, tol in expect.items():
        s = _summary(name)
        dil = max(abs(r.dilation - r.expected_dilation) / (1 if name != "pi4" else max(1, r.expected_dilation))
                  for r in s.rows)
        harm = s.max_harm()
        geo = s.max("geodesic_defect")
        good = (len(s.rows) >= 100 and dil < tol and harm < 1e-4 and _harm_count_ok(s)
                and _orders_ok(s) and s.max("conf_defect") < 1e-5)
        if name == "hopf":
            good = good and geo < 1e-8
        ok = ok and good
        order = s.min_order()
        details.append(f"{name}: dilation err {dil:.1e}, harm {harm:.1e}, geodesic {geo:.1e}, "
                       f"min order {'floor' if order is None else f'{order:.2f}'}")
    record(4, ok, "; ".join(details))


def test_criterion_5_critical_profile():
    profs = [nm.check_critical_dilation(q) for q in (2, 3, 4)]
    ok = all(abs(p.exponent - (p.q - 1)) < 1e-2 for p in profs)
    record(5, ok, ", ".join(f"q={p.q}: exponent {p.exponent:.6f}" for p in profs))


def _random_moebius(rng, planar: bool):
    while True:
        a, b, c, d = (complex(*rng.normal(size=2)) for _ in range(4))
        if planar:
            # keep the pole -d/c well outside the sampled box |w| <= 2 sqrt 2
            c *= 0.1
            if abs(c) > 1e-3 and abs(d / c) < 6:
                continue
        if abs(a * d - b * c) > 0.1:
            return a, b, c, d


def _moebius_dilation_factor(coeffs, w: complex, planar: bool) -> float:
    a, b, c, d = coeffs
    deriv = abs((a * d - b * c) / (c * w + d) ** 2)
    if planar:
        return deriv
    mw = (a * w + b) / (c * w + d)
    return deriv * (1 + abs(w) ** 2) / (1 + abs(mw) ** 2)


def test_criterion_6_conformal_invariance():
    rng = np.random.default_rng(SEED)
    worst = {"conf": 0.0, "dil": 0.0, "harm": 0.0, "geo": 0.0}
    orders_ok = True
    for base in ("hopf", "pi1"):
        m0 = nm.make_map(base)
        planar = m0.target == "plane"
        for _ in range(10):
            coeffs = _random_moebius(rng, planar)
            m = nm.compose_moebius(m0, coeffs)
            pts = nm.sample_points(m0, SAMPLES, rng)
            for x in pts:
                try:
                    r = nm.evaluate_point(m, x, orders=False)
                except nm.CriticalPointError:
                    continue
                w = m0.value(x, 0) if abs(m0.pair(x)[1]) > 1e-9 else None
                if w is not None and abs(w) < 1e6:
                    lam0 = m0.expected_dilation(x)
                    want = lam0 * _moebius_dilation_factor(coeffs, w, planar)
                    worst["dil"] = max(worst["dil"], abs(r.dilation - want) / max(1.0, want))
                worst["conf"] = max(worst["conf"], r.conf_defect)
                worst["harm"] = max(worst["harm"], max(r.harm_residuals.values(), default=0.0))
                worst["geo"] = max(worst["geo"], r.geodesic_defect)
            for x in pts[:5]:
                o = nm.conformality_order(m, x)
                orders_ok = orders_ok and (o is None or o >= 1.8)
    ok = worst["conf"] < 1e-5 and worst["dil"] < 1e-5 and worst["harm"] < 1e-4 and worst["geo"] < 1e-6 and orders_ok
    record(6, ok, f"20 Moebius postcompositions: conformality {worst['conf']:.1e}, dilation vs |M'| "
                  f"{worst['dil']:.1e}, harm {worst['harm']:.1e}, geodesic {worst['geo']:.1e}, orders ok {orders_ok}")


# --- 7: structural invariants ---------------------------------------------------------

def _float_isometry(g: mo.Isometry) -> mo.Isometry:
    return mo.Isometry(tuple(tuple(float(x) for x in row) for row in g.linear),
                       tuple(float(x) for x in g.translation))


def _random_element(gens, rng, max_len: int = 5):
    g = gens[0].identity_like()
    for _ in range(int(rng.integers(0, max_len + 1))):
        h = gens[int(rng.integers(len(gens)))]
        g = g @ (h if rng.random() < 0.5 else h.inverse())
    return g


def _structural_defects(case: cat.CatalogCase, rng, pairs: int = 1000) -> tuple[float, float]:
    spec = case.build()
    if not spec.generators:
        return 0.0, 0.0
    fol = fo.FOLIATION_OF[spec.ambient]
    hom = equi = 0.0
    if fol == fo.F1:
        gens = [_float_isometry(g) for g in spec.generators]
        for _ in range(pairs):
            g, h = _random_element(gens, rng), _random_element(gens, rng)
            lhs, rhs = fo.leaf_image(g @ h, fol), fo.leaf_image(g, fol) @ fo.leaf_image(h, fol)
            hom = max(hom, float(np.abs(lhs.linear_array() - rhs.linear_array()).max()),
                      float(np.abs(lhs.translation_array() - rhs.translation_array()).max()))
            x = tuple(rng.uniform(-3, 3, size=3))
            img = np.array(fo.leaf_projection(g(x), fol), dtype=float)
            want = np.array(fo.leaf_image(g, fol)(fo.leaf_projection(x, fol)), dtype=float)
            equi = max(equi, float(np.abs(img - want).max()))
    else:
        gens = list(spec.generators)
        for _ in range(pairs):
            g, h = _random_element(gens, rng), _random_element(gens, rng)
            hom = max(hom, float(np.abs(fo.leaf_image(g @ h, fol) - fo.leaf_image(g, fol) @ fo.leaf_image(h, fol)).max()))
            v = rng.normal(size=4)
            x = qt.Quaternion.from_array(v / np.linalg.norm(v))
            img = fo.leaf_projection(g(x), fol)
            equi = max(equi, float(np.abs(img - fo.leaf_image(g, fol) @ fo.leaf_projection(x, fol)).max()))
    return hom, equi


def _euclid_conjugator(rng) -> mo.Isometry:
    c = mo.translation(tuple(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for _ in range(3)))
    c = c @ cat.random_pythagorean_rotation(rng)
    if rng.random() < 0.5:
        c = c @ mo.rotation((1, 0, 0), Angle.rational(1, 2))  # flips the leaves' orientation
    return c


def _sphere_conjugator(rng, gamma2: bool) -> qt.SO4Element:
    q1 = qt.Quaternion.exp_i(rng.uniform(0, 2 * math.pi))
    if gamma2:
        q2 = qt.Quaternion.exp_i(rng.uniform(0, 2 * math.pi))
    else:
        v = rng.normal(size=4)
        q2 = qt.Quaternion.from_array(v / np.linalg.norm(v))
    return qt.phi_cover(q1, q2)


def test_criterion_7_structural_invariants():
    rng = np.random.default_rng(SEED)
    accepted = [c for c in cat.CASES.values() if c.expect_reject is None]
    worst_hom = worst_equi = 0.0
    changed = []
    for case in accepted:
        hom, equi = _structural_defects(case, rng)
        worst_hom, worst_equi = max(worst_hom, hom), max(worst_equi, equi)
        spec = case.build(**(case.fallback or {}))
        expected = case.expected_orbifold(**(case.fallback or {}))
        if not spec.generators:
            continue
        if spec.ambient == "euclidean3":
            c = _euclid_conjugator(rng)
            variants = {"conjugate": cat.conjugate(spec, c), "homothety": cat.homothety(spec, Fraction(5, 3))}
        else:
            gamma2 = case.id == "sphere-Dm-Zq"
            variants = {"conjugate": cat.conjugate(spec, _sphere_conjugator(rng, gamma2))}
        for kind, v in variants.items():
            got = fo.run_pipeline(v).orbifold
            if got != expected:
                changed.append(f"{case.id} {kind}: {got}")
    ok = worst_hom < 1e-9 and worst_equi < 1e-9 and not changed
    record(7, ok, f"{len(accepted)} cases x 1000 pairs: homomorphism {worst_hom:.1e}, equivariance "
                  f"{worst_equi:.1e}; classification changed under conjugation/homothety: {changed or 'none'}")


# --- 8: CLI contract -----------------------------------------------------------------

EXIT_TABLE = {
    "accept_identity.json": EXIT_OK,
    "accept_lens.json": EXIT_OK,
    "accept_screw_quarter_turn.json": EXIT_OK,
    "reject_glide.json": EXIT_CONDITION,
    "reject_irrational_screw.json": EXIT_CONDITION,
    "reject_tilted_screw.json": EXIT_CONDITION,
}


def test_criterion_8_cli_contract(tmp_path, capsys):
    outs = []
    for run in ("a", "b"):
        d = tmp_path / run
        code = main(["catalog", "--seed", str(SEED), "--out", str(d)])
        outs.append((code, (d / "report.json").read_bytes()))
    capsys.readouterr()
    same = outs[0][1] == outs[1][1]
    report = json.loads(outs[0][1])
    schema = all({"case", "verdicts", "orbifold", "residuals"} <= set(c) for c in report["cases"])
    codes = {}
    for name in sorted(EXIT_TABLE):
        codes[name] = main(["classify", str(FIXTURES / name)])
    capsys.readouterr()
    table_ok = codes == EXIT_TABLE
    ok = same and schema and table_ok and report["seed"] == SEED and outs[0][0] == EXIT_OK
    record(8, ok, f"report.json byte-identical across runs: {same}; schema ok: {schema}; "
                  f"exit codes {codes}")
