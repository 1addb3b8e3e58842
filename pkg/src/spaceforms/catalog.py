"""Catalogue of standard quotients of R^3 and S^3.

Euclidean cases ``euclid-<family><choice>`` cover the ten orientable flat
families and their parameter choices; spherical cases ``sphere-<H1>-<H2>``
cover the six (H1, H2) rows.  ``neg-*`` cases are groups that must be
rejected, each by a named condition.

Every builder asserts its family's constraints exactly and raises
:class:`ConstraintError` naming the violated clause.
"""

from __future__ import annotations

import fnmatch
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import foliation as fo
from . import motions as mo
from . import numerics as nm
from . import quaternions as qt
from .exact import SQRT3, dot, is_exact
from .foliation import Orbifold2
from .groups import DEFAULT_BUDGET, EnumerationBudget, GroupSpec
from .motions import Angle

GOLDEN_FRACTION = (math.sqrt(5) - 1) / 2
E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
HALF = Fraction(1, 2)


class ConstraintError(ValueError):
    pass


# --- vector helpers ----------------------------------------------------------------

def _scale(v, k):
    return tuple(k * x for x in v)


def _add(*vs):
    return tuple(sum(c) for c in zip(*vs))


def _cross3(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _is_zero_vec(v) -> bool:
    return all(x == 0 if is_exact(x) else abs(x) < 1e-12 for x in v)


def _independent(*vs) -> bool:
    if len(vs) == 2:
        return not _is_zero_vec(_cross3(vs[0], vs[1]))
    return not _is_zero_vec((dot(_cross3(vs[0], vs[1]), vs[2]),))


def _parallel_e3(v) -> bool:
    return _is_zero_vec(v[:2]) and not _is_zero_vec(v)


def _in_e3_perp(v) -> bool:
    return _is_zero_vec((v[2],))


def _require(cond: bool, case: str, clause: str) -> None:
    if not cond:
        raise ConstraintError(f"{case}: constraint violated: {clause}")


def _pi(v):
    return (v[0], v[1])


def _prep(params: dict, names: tuple) -> list:
    k = params.get("scale", 1)
    return [_scale(tuple(mo.exact(x) for x in params[n]), mo.exact(k)) for n in names]


# --- Euclidean families -------------------------------------------------------------

def _fam2(case: str, p: dict) -> GroupSpec:
    (v,) = _prep(p, ("v",))
    theta: Angle = p["theta"]
    _require(not _is_zero_vec(v), case, "v is non-zero")
    choice = case[-1]
    if choice in "abc":
        _require(_parallel_e3(v), case, "v parallel to e3")
    if choice == "a":
        _require(theta == Angle.zero(), case, "theta = 0")
    if choice == "b":
        _require(theta == Angle.rational(1, 2), case, "theta = pi")
    if choice == "c":
        _require(theta.is_rational and theta.q not in (1, 2), case,
                 "theta = 2 pi p/q with theta != 0, pi")
    if choice == "d":
        _require(not _parallel_e3(v), case, "v not parallel to e3")
        _require(theta == Angle.zero(), case, "theta = 0")
    if choice == "e":
        _require(_in_e3_perp(v), case, "v in e3-perp")
        _require(theta == Angle.rational(1, 2), case, "theta = pi")
    return GroupSpec("euclidean3", [mo.screw(v, theta, 1)], label=case)


def _fam3(case: str, p: dict) -> GroupSpec:
    v1, v2 = _prep(p, ("v1", "v2"))
    _require(_independent(v1, v2), case, "v1, v2 linearly independent")
    # e3 lies in span{v1, v2} exactly when the normal v1 x v2 is horizontal
    e3_in_span = _is_zero_vec((_cross3(v1, v2)[2],))
    if case.endswith("a"):
        _require(not e3_in_span, case, "e3 not in span{v1, v2}")
    else:
        _require(e3_in_span, case, "e3 in span{v1, v2}")
        _require(mo.rationally_related([_pi(v1), _pi(v2)]).related, case,
                 "pi(v1), pi(v2) rationally related")
    return GroupSpec("euclidean3", [mo.translation(v1), mo.translation(v2)], label=case)


def _fam4(case: str, p: dict) -> GroupSpec:
    v1, v2 = _prep(p, ("v1", "v2"))
    _require(_independent(v1, v2), case, "v1, v2 linearly independent")
    choice = case[-1]
    if choice == "a":
        _require(not _parallel_e3(v1), case, "v1 not parallel to e3")
        _require(_in_e3_perp(v2), case, "v2 in e3-perp")
    if choice == "b":
        _require(_parallel_e3(v1), case, "v1 parallel to e3")
        _require(_in_e3_perp(v2), case, "v2 in e3-perp")
    if choice == "c":
        _require(_parallel_e3(v2), case, "v2 parallel to e3")
    return GroupSpec("euclidean3", [mo.translation(v1), mo.screw(v2, Angle.rational(1, 2), 1)], label=case)


def _three(case: str, p: dict):
    v1, v2, v3 = _prep(p, ("v1", "v2", "v3"))
    _require(_independent(v1, v2, v3), case, "v1, v2, v3 linearly independent")
    return v1, v2, v3


def _fam5(case: str, p: dict) -> GroupSpec:
    v1, v2, v3 = _three(case, p)
    _require(mo.rationally_related([_pi(v1), _pi(v2), _pi(v3)]).related, case,
             "pi(v1), pi(v2), pi(v3) rationally related")
    return GroupSpec("euclidean3", [mo.translation(v) for v in (v1, v2, v3)], label=case)


def _perp_to_span(case, v1, v2, v3):
    _require(dot(v1, v2) == 0 and dot(v1, v3) == 0, case, "v1 perpendicular to span{v2, v3}")


def _screw_family(case: str, p: dict, turns: Fraction, angle23: Angle | None, orthogonal: bool) -> GroupSpec:
    v1, v2, v3 = _three(case, p)
    _perp_to_span(case, v1, v2, v3)
    if orthogonal:
        _require(dot(v2, v3) == 0, case, "v1, v2, v3 mutually orthogonal")
    _require(dot(v2, v2) == dot(v3, v3), case, "|v2| = |v3|")
    if angle23 is not None:
        c, _ = angle23.cos_sin()
        _require(dot(v2, v3) == c * dot(v2, v2), case, f"angle(v2, v3) = 2 pi {angle23.p}/{angle23.q}")
    _require(_parallel_e3(v1), case, "v1 parallel to e3")
    rot = Angle.rational(turns.numerator, turns.denominator)
    gens = [mo.screw(v1, rot, turns), mo.translation(v1), mo.translation(v2), mo.translation(v3)]
    return GroupSpec("euclidean3", gens, label=case)


def _fam6(case: str, p: dict) -> GroupSpec:
    v1, v2, v3 = _three(case, p)
    _perp_to_span(case, v1, v2, v3)
    if case.endswith("a"):
        _require(_in_e3_perp(v1), case, "v1 in e3-perp")
        _require(mo.rationally_related([_pi(v2), _pi(v3)]).related, case,
                 "pi(v2), pi(v3) rationally related")
    else:
        _require(_parallel_e3(v1), case, "v1 parallel to e3")
    gens = [mo.screw(v1, Angle.rational(1, 2), HALF), mo.translation(v1), mo.translation(v2), mo.translation(v3)]
    return GroupSpec("euclidean3", gens, label=case)


def _fam9(case: str, p: dict) -> GroupSpec:
    """``convention="printed"`` rotates through pi/6 with angle(v2, v3) = pi/6;
    ``"hexagonal"`` uses 2 pi/6 for both, which gives a discrete group."""
    convention = p.get("convention", "printed")
    _require(convention in ("printed", "hexagonal"), case, "convention is printed or hexagonal")
    angle = Angle.rational(1, 12) if convention == "printed" else Angle.rational(1, 6)
    v1, v2, v3 = _three(case, p)
    _perp_to_span(case, v1, v2, v3)
    _require(dot(v2, v2) == dot(v3, v3), case, "|v2| = |v3|")
    c, _ = angle.cos_sin()
    _require(dot(v2, v3) == c * dot(v2, v2), case, f"angle(v2, v3) = 2 pi {angle.p}/{angle.q}")
    _require(_parallel_e3(v1), case, "v1 parallel to e3")
    gens = [mo.screw(v1, angle, Fraction(1, 6)), mo.translation(v1), mo.translation(v2), mo.translation(v3)]
    return GroupSpec("euclidean3", gens, label=case)


def _fam10(case: str, p: dict) -> GroupSpec:
    v1, v2, v3 = _three(case, p)
    _require(dot(v1, v2) == 0 and dot(v1, v3) == 0 and dot(v2, v3) == 0, case,
             "v1, v2, v3 mutually orthogonal")
    axis = {"a": v1, "b": v2, "c": v3}[case[-1]]
    _require(_parallel_e3(axis), case, f"v{'abc'.index(case[-1]) + 1} parallel to e3")
    pi = Angle.rational(1, 2)
    gens = [
        mo.Isometry(mo.rotation_matrix(v1, pi), _scale(v1, HALF)),
        mo.Isometry(mo.rotation_matrix(v2, pi), _scale(_add(v2, v3), HALF)),
        mo.Isometry(mo.rotation_matrix(v3, pi), _scale(_add(v1, v2, v3), HALF)),
        mo.translation(v1), mo.translation(v2), mo.translation(v3),
    ]
    return GroupSpec("euclidean3", gens, label=case)


# --- spherical rows ------------------------------------------------------------------

E = qt.Quaternion.exp_i


def _lens(case: str, p: dict) -> GroupSpec:
    pp, q, s = p["p"], p["q"], p["s"]
    _require(math.gcd(s, q) == 1, case, "gcd(s, q) = 1 so that H2 = Z_q")
    return GroupSpec("sphere3", [qt.phi_cover(E(math.pi / pp), E(math.pi * s / q))], label=case)


def _prism_zd(case: str, p: dict) -> GroupSpec:
    pp, m = p["p"], p["m"]
    _require(m >= 2, case, "m >= 2")
    gens = [qt.phi_cover(E(math.pi / pp), qt.ONE), qt.phi_cover(qt.ONE, E(math.pi / m)), qt.phi_cover(qt.ONE, qt.J)]
    return GroupSpec("sphere3", gens, label=case)


def _prism_dz(case: str, p: dict) -> GroupSpec:
    m, q = p["m"], p["q"]
    _require(m >= 2, case, "m >= 2")
    gens = [qt.phi_cover(E(2 * math.pi / m), qt.ONE), qt.phi_cover(qt.J, E(math.pi / q))]
    return GroupSpec("sphere3", gens, label=case)


def _polyhedral(kind: str):
    def build(case: str, p: dict) -> GroupSpec:
        pp = p["p"]
        _require(math.gcd(pp, 30 if kind == "Icosahedral" else 6) == 1, case,
                 "p coprime to the order of the binary group")
        gens = [qt.phi_cover(E(math.pi / pp), qt.ONE)]
        gens += [qt.phi_cover(qt.ONE, b) for b in qt.binary_generators(kind)]
        return GroupSpec("sphere3", gens, label=case)
    return build


def _neg_glide(case: str, p: dict) -> GroupSpec:
    return GroupSpec("euclidean3", [mo.glide((1, 0, 0), (0, 0, 1))], label=case)


def _neg_irrational(case: str, p: dict) -> GroupSpec:
    return GroupSpec("euclidean3", [mo.screw(E3, Angle.radians(p["theta"]), 1)], label=case)


def _neg_tilted(case: str, p: dict) -> GroupSpec:
    return GroupSpec("euclidean3", [mo.screw(p["axis"], Angle.rational(1, 4), 1)], label=case)


# --- case table ----------------------------------------------------------------------

@dataclass
class CatalogCase:
    id: str
    family: str
    builder: Callable[[str, dict], GroupSpec]
    defaults: dict
    expected: Callable[[dict], Orbifold2] | None = None
    expected_leaf: str = ""
    expect_reject: str | None = None
    fallback: dict | None = None
    check_map: str | None = None

    def build(self, **overrides) -> GroupSpec:
        params = dict(self.defaults)
        params.update(overrides)
        return self.builder(self.id, params)

    def expected_orbifold(self, **overrides) -> Orbifold2 | None:
        if self.expected is None:
            return None
        params = dict(self.defaults)
        params.update(overrides)
        return self.expected(params)


def _fixed(text: str):
    orb = Orbifold2.parse(text)
    return lambda p: orb


S3 = (-HALF, SQRT3 / 2, 0)
S6 = (HALF, SQRT3 / 2, 0)
S12 = (SQRT3 / 2, HALF, 0)


def _euclid_cases() -> list[CatalogCase]:
    R = Angle.rational
    c = [
        CatalogCase("euclid-1a", "R^3", lambda case, p: GroupSpec("euclidean3", [], label=case, identity=True),
                    {}, _fixed("Plane"), "{e}", check_map="pi1"),
        CatalogCase("euclid-2a", "S^1 x R^2", _fam2, {"v": E3, "theta": R(0, 1)}, _fixed("Plane"), "{e}"),
        CatalogCase("euclid-2b", "S^1 x R^2", _fam2, {"v": E3, "theta": R(1, 2)}, _fixed("Plane(2)"), "<R_pi>",
                    check_map="screw:2"),
        CatalogCase("euclid-2c", "S^1 x R^2", _fam2, {"v": E3, "theta": R(1, 3)},
                    lambda p: Orbifold2("Plane", (p["theta"].q,)), "<R_theta>", check_map="screw:3"),
        CatalogCase("euclid-2d", "S^1 x R^2", _fam2, {"v": E1, "theta": R(0, 1)}, _fixed("Cylinder"), "<t_pi(v)>"),
        CatalogCase("euclid-2e", "S^1 x R^2", _fam2, {"v": E1, "theta": R(1, 2)}, _fixed("MoebiusBand"), "<(S_v, t_v)>"),
        CatalogCase("euclid-3a", "T^2 x R", _fam3, {"v1": E1, "v2": E2}, _fixed("Torus"),
                    "<t_pi(v1), t_pi(v2)>"),
        CatalogCase("euclid-3b", "T^2 x R", _fam3, {"v1": (1, 0, 1), "v2": (HALF, 0, -1)}, _fixed("Cylinder"), "<t_w>"),
        CatalogCase("euclid-4a", "K^2 x R", _fam4, {"v1": E2, "v2": E1}, _fixed("KleinBottle"),
                    "<t_pi(v1), (S_v2, t_v2)>"),
        CatalogCase("euclid-4b", "K^2 x R", _fam4, {"v1": E3, "v2": E1}, _fixed("MoebiusBand"), "<(S_v2, t_v2)>"),
        CatalogCase("euclid-4c", "K^2 x R", _fam4, {"v1": E1, "v2": E3}, _fixed("D2(2,2)"), "<t_pi(v1), R_pi>"),
        CatalogCase("euclid-5a", "3-torus", _fam5, {"v1": E1, "v2": E2, "v3": E3}, _fixed("Torus"),
                    "<t_w1, t_w2>"),
        CatalogCase("euclid-6a", "half-turn space", _fam6, {"v1": E1, "v2": E2, "v3": E3}, _fixed("KleinBottle"),
                    "<(S_v1, t_v1/2), t_w>"),
        CatalogCase("euclid-6b", "half-turn space", _fam6, {"v1": E3, "v2": E1, "v3": E2},
                    _fixed("S2(2,2,2,2)"), "<R_pi, t_v2, t_v3>"),
        CatalogCase("euclid-7a", "third-turn space",
                    lambda case, p: _screw_family(case, p, Fraction(1, 3), R(1, 3), False),
                    {"v1": E3, "v2": E1, "v3": S3}, _fixed("S2(3,3,3)"), "<R_2pi/3, t_v2, t_v3>"),
        CatalogCase("euclid-8a", "quarter-turn space",
                    lambda case, p: _screw_family(case, p, Fraction(1, 4), None, True),
                    {"v1": E3, "v2": E1, "v3": E2}, _fixed("S2(2,4,4)"), "<R_pi/2, t_v2, t_v3>"),
        CatalogCase("euclid-9a", "sixth-turn space", _fam9,
                    {"v1": E3, "v2": E1, "v3": S12, "convention": "printed"}, _fixed("S2(2,3,6)"),
                    "<R_2pi/6, t_v2, t_v3>", fallback={"v3": S6, "convention": "hexagonal"}),
    ]
    for x in "abc":
        c.append(CatalogCase(f"euclid-10{x}", "Hantzsche-Wendt space", _fam10,
                             {"v1": E3 if x == "a" else E1, "v2": E3 if x == "b" else (E1 if x == "a" else E2),
                              "v3": E3 if x == "c" else E2},
                             _fixed("P2(2,2)"), "glide-rotation group"))
    return c


def _sphere_cases() -> list[CatalogCase]:
    return [
        CatalogCase("sphere-Zp-Zq", "lens space", _lens, {"p": 5, "q": 3, "s": 1},
                    lambda p: Orbifold2("Sphere", (p["q"], p["q"])), "Z_q", check_map="hopf"),
        CatalogCase("sphere-Zp-Dm", "prism space", _prism_zd, {"p": 5, "m": 3},
                    lambda p: Orbifold2("Sphere", (2, 2, p["m"])), "D_m"),
        CatalogCase("sphere-Dm-Zq", "prism space", _prism_dz, {"m": 5, "q": 3},
                    lambda p: Orbifold2("ProjectivePlane", (p["q"],)), "Z_q x {+-1}"),
        CatalogCase("sphere-Zp-T", "tetrahedral space", _polyhedral("Tetrahedral"), {"p": 5},
                    _fixed("S2(2,3,3)"), "T"),
        CatalogCase("sphere-Zp-O", "octahedral space", _polyhedral("Octahedral"), {"p": 5},
                    _fixed("S2(2,3,4)"), "O"),
        CatalogCase("sphere-Zp-I", "icosahedral space", _polyhedral("Icosahedral"), {"p": 7},
                    _fixed("S2(2,3,5)"), "I"),
    ]


def _negative_cases() -> list[CatalogCase]:
    return [
        CatalogCase("neg-example1", "glide reflection", _neg_glide, {}, None, "<S_e1>", expect_reject="b1"),
        CatalogCase("neg-example2-irrational", "irrational screw", _neg_irrational,
                    {"theta": 2 * math.pi * GOLDEN_FRACTION}, None, "<R_theta>", expect_reject="b2"),
        CatalogCase("neg-tilted-screw", "tilted screw", _neg_tilted, {"axis": (3, 0, 4)}, None, "",
                    expect_reject="a"),
    ]


CASES: dict[str, CatalogCase] = {c.id: c for c in _euclid_cases() + _sphere_cases() + _negative_cases()}


def select(pattern: str | None) -> list[CatalogCase]:
    if not pattern:
        return list(CASES.values())
    pats = [p.strip() for p in pattern.split(",") if p.strip()]
    return [c for c in CASES.values() if any(fnmatch.fnmatchcase(c.id, p) for p in pats)]


def build_euclidean_case(case_id: str, **params) -> GroupSpec:
    case = CASES.get(case_id)
    if case is None or not case_id.startswith("euclid-"):
        raise KeyError(f"unknown Euclidean case {case_id!r}")
    return case.build(**params)


_SPHERE_ROWS = {
    ("Cyclic", "Cyclic"): "sphere-Zp-Zq",
    ("Cyclic", "Dihedral"): "sphere-Zp-Dm",
    ("Dihedral", "Cyclic"): "sphere-Dm-Zq",
    ("Cyclic", "Tetrahedral"): "sphere-Zp-T",
    ("Cyclic", "Octahedral"): "sphere-Zp-O",
    ("Cyclic", "Icosahedral"): "sphere-Zp-I",
}


def build_spherical_case(h1: str, h2: str, **extra) -> GroupSpec:
    """Group with H1 of type ``h1`` and H2 of type ``h2`` (e.g. "Cyclic", "Dihedral")."""
    key = _SPHERE_ROWS.get((h1, h2))
    if key is None:
        raise KeyError(f"(H1, H2) = ({h1}, {h2}) is not a row of the spherical table")
    return CASES[key].build(**extra)


# --- running ---------------------------------------------------------------------------

@dataclass
class CaseResult:
    case: str
    report: fo.VerificationReport
    expected: Orbifold2 | None
    expect_reject: str | None
    match: bool
    residuals: dict
    notes: list = field(default_factory=list)
    seconds: float = 0.0

    def as_dict(self) -> dict:
        r = self.report
        return {
            "case": self.case,
            "verdicts": r.verdicts(),
            "failed_condition": r.failed_condition,
            "orbifold": r.orbifold.as_dict() if r.orbifold else None,
            "expected": (self.expected.as_dict() if self.expected else {"reject": self.expect_reject}),
            "match": self.match,
            "leaf_group": r.leaf.describe() if r.leaf else None,
            "residuals": self.residuals,
            "notes": list(self.notes) + list(r.notes),
        }


def spot_residuals(map_name: str, seed: int, samples: int = 5) -> dict:
    m = nm.make_map(map_name)
    s = nm.verify_map(m, samples=samples, seed=seed, orders=False)
    return {
        "map": map_name,
        "samples": samples,
        "max_conf_defect": float(s.max("conf_defect")),
        "max_dilation_error": float(s.max_dilation_error()),
        "max_harm_residual": float(s.max_harm()),
        "max_geodesic_defect": float(s.max("geodesic_defect")),
    }


def run_case(case: CatalogCase, budget: EnumerationBudget = DEFAULT_BUDGET, seed: int = 0,
             residuals: bool = True) -> CaseResult:
    import time

    t0 = time.perf_counter()
    notes = []
    params = dict(case.defaults)
    spec = case.builder(case.id, params)
    rep = fo.run_pipeline(spec, budget)
    if case.fallback and rep.failed_condition in ("free", "discrete"):
        v = getattr(rep, rep.failed_condition)
        notes.append(f"printed parameters rejected ({rep.failed_condition}: {v.note}); "
                     f"rebuilt with {case.fallback.get('convention', 'fallback')} parameters")
        params.update(case.fallback)
        spec = case.builder(case.id, params)
        rep = fo.run_pipeline(spec, budget)
    expected = case.expected(params) if case.expected else None
    if case.expect_reject:
        match = rep.failed_condition == case.expect_reject
    else:
        match = rep.accepted and rep.orbifold == expected
    res = {}
    if residuals:
        map_name = case.check_map or ("hopf" if spec.ambient == "sphere3" else "pi1")
        res = spot_residuals(map_name, seed)
    return CaseResult(case.id, rep, expected, case.expect_reject, match, res, notes,
                      time.perf_counter() - t0)


@dataclass
class CatalogReport:
    seed: int
    budget: EnumerationBudget
    results: list

    @property
    def ok(self) -> bool:
        return all(r.match for r in self.results)

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "budget": self.budget.as_dict(),
            "cases": [r.as_dict() for r in self.results],
            "summary": {
                "selected": len(self.results),
                "matched": sum(r.match for r in self.results),
                "mismatched": [r.case for r in self.results if not r.match],
            },
        }

    def to_text(self) -> str:
        lines = [f"seed {self.seed}  budget {self.budget.as_dict()}", ""]
        for r in self.results:
            rep = r.report
            got = str(rep.orbifold) if rep.orbifold else f"reject ({rep.failed_condition})"
            want = str(r.expected) if r.expected else f"reject ({r.expect_reject})"
            flag = "MATCH" if r.match else "MISMATCH"
            lines.append(f"{r.case:26s} {flag:8s} L^M = {got:16s} expected {want}")
            if rep.leaf:
                lines.append(f"    leaf group: {'; '.join(rep.leaf.describe()) or 'trivial'}")
            msg = rep.failure_message()
            if msg:
                lines.append(f"    {msg}")
            for n in r.notes + rep.notes:
                lines.append(f"    note: {n}")
        lines.append("")
        n_ok = sum(r.match for r in self.results)
        lines.append(f"{n_ok}/{len(self.results)} cases matched")
        return "\n".join(lines) + "\n"


def case_sort_key(case_id: str) -> tuple:
    """Order ids with embedded numbers numerically (euclid-9a before euclid-10a)."""
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", case_id))


def run_catalog(budget: EnumerationBudget = DEFAULT_BUDGET, pattern: str | None = None, seed: int = 0,
                residuals: bool = True) -> CatalogReport:
    results = [run_case(c, budget, seed, residuals) for c in select(pattern)]
    results.sort(key=lambda r: case_sort_key(r.case))
    return CatalogReport(seed, budget, results)


def conjugate(spec: GroupSpec, c) -> GroupSpec:
    """Group ``c Gamma c^{-1}``."""
    ci = c.inverse()
    return GroupSpec(spec.ambient, [c @ g @ ci for g in spec.generators], spec.label, spec.identity)


def homothety(spec: GroupSpec, k) -> GroupSpec:
    """Conjugate a Euclidean group by x -> k x (translation parts scale by k)."""
    k = mo.exact(k)
    gens = [mo.Isometry(g.linear, tuple(k * t for t in g.translation)) for g in spec.generators]
    return GroupSpec(spec.ambient, gens, spec.label, spec.identity)


def random_pythagorean_rotation(rng: np.random.Generator) -> mo.Isometry:
    """Exact rotation about e3 with cos, sin from a primitive Pythagorean triple."""
    m = int(rng.integers(2, 9))
    n = int(rng.integers(1, m))
    a, b, c = m * m - n * n, 2 * m * n, m * m + n * n
    co, si = Fraction(a, c), Fraction(b, c)
    if rng.random() < 0.5:
        si = -si
    lin = ((co, -si, 0), (si, co, 0), (0, 0, 1))
    shift = tuple(Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5))) for _ in range(3))
    return mo.from_matrix(lin, shift)
