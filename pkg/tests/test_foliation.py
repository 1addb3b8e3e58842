from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spaceforms import foliation as fo
from spaceforms import motions as mo
from spaceforms import quaternions as qt
from spaceforms.foliation import Orbifold2
from spaceforms.groups import GroupSpec
from spaceforms.motions import Angle

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
E = qt.Quaternion.exp_i


def euclid(*gens):
    return GroupSpec("euclidean3", list(gens))


def sphere(*gens):
    return GroupSpec("sphere3", list(gens))


# --- condition (a) -------------------------------------------------------------------

def test_screw_preserves_vertical_foliation():
    assert fo.preserves_foliation(euclid(mo.screw(E3, Angle.rational(1, 4), 1))).holds


def test_tilted_rotation_breaks_vertical_foliation():
    g = mo.rotation(E1, Angle.rational(1, 6)) @ mo.translation(E1)
    v = fo.preserves_foliation(euclid(g))
    assert not v.holds and "vertical" in v.note


def test_lens_group_preserves_hopf_foliation():
    spec = sphere(qt.phi_cover(E(2 * math.pi / 5), E(2 * math.pi / 3)))
    v = fo.preserves_foliation(spec)
    assert v.holds and v.extra["case"] == "gamma1"


def test_generic_so4_element_breaks_hopf_foliation():
    q = qt.Quaternion(0.6, 0.0, 0.8, 0.0)
    v = fo.preserves_foliation(sphere(qt.phi_cover(q, qt.ONE)))
    assert not v.holds


# --- leaf group ----------------------------------------------------------------------

def test_leaf_of_screw_is_rotation_about_origin():
    leaf = fo.induce_leaf_action(euclid(mo.screw(E3, Angle.rational(2, 7), 1)))
    assert leaf.generators == [mo.plane_rotation(Angle.rational(2, 7))]


def test_leaf_of_glide_is_reflection():
    leaf = fo.induce_leaf_action(euclid(mo.glide(E1, E3)))
    (h,) = leaf.generators
    assert h((1, 5)) == (-1, 5)
    assert h == mo.plane_reflection((0, 1))  # mirror line along e2


def test_leaf_of_gamma1_element_is_psi_q2():
    q2 = qt.Quaternion(0.5, 0.5, 0.5, 0.5)
    leaf = fo.induce_leaf_action(sphere(qt.phi_cover(E(0.9), q2)))
    assert np.allclose(leaf.generators[0], qt.psi(q2))


def test_induce_requires_condition_a():
    with pytest.raises(fo.ConditionError):
        fo.induce_leaf_action(euclid(mo.rotation(E1, Angle.rational(1, 4))))


# --- (b1), (b2) ----------------------------------------------------------------------

def test_b1_examples():
    v = fo.check_b1(fo.induce_leaf_action(euclid(mo.glide(E1, E3))))
    assert not v.holds and v.note.startswith("reflection in leaf stabilizer")
    assert fo.check_b1(fo.induce_leaf_action(euclid(mo.screw(E3, Angle.rational(1, 5), 1)))).holds
    case4a = euclid(mo.translation(E2), mo.screw(E1, Angle.rational(1, 2), 1))
    assert fo.check_b1(fo.induce_leaf_action(case4a)).holds


def test_b2_examples():
    theta = 2 * math.pi * (math.sqrt(5) - 1) / 2
    leaf = fo.induce_leaf_action(euclid(mo.screw(E3, Angle.radians(theta), 1)))
    assert not fo.check_b2(leaf).holds
    assert fo.check_b2(fo.induce_leaf_action(euclid(mo.screw(E3, Angle.rational(1, 6), 1)))).holds
    leaf = fo.induce_leaf_action(euclid(mo.translation(E1), mo.translation((math.sqrt(2), 0, 1))))
    assert not fo.check_b2(leaf).holds


# --- classification ------------------------------------------------------------------

def _classify(spec):
    rep = fo.run_pipeline(spec)
    assert rep.accepted, rep.failure_message()
    return rep.orbifold


def test_half_turn_gives_cone_of_order_two():
    assert _classify(euclid(mo.screw(E3, Angle.rational(1, 2), 1))) == Orbifold2("Plane", (2,))


@pytest.mark.parametrize("p,q", [(1, 2), (1, 3), (1, 4), (2, 5), (1, 6), (3, 7), (5, 12)])
def test_rational_screw_gives_cone_of_order_q(p, q):
    assert _classify(euclid(mo.screw(E3, Angle.rational(p, q), 1))) == Orbifold2("Plane", (q,))


def test_two_independent_translations_give_torus():
    spec = euclid(mo.translation((1, 0, Fraction(1, 3))), mo.translation((Fraction(1, 2), 2, 0)))
    assert _classify(spec) == Orbifold2("Torus")


def test_icosahedral_h2_gives_235():
    gens = [qt.phi_cover(E(math.pi / 7), qt.ONE)] + [qt.phi_cover(qt.ONE, b) for b in qt.binary_generators("Icosahedral")]
    assert _classify(sphere(*gens)) == Orbifold2.parse("S2(2,3,5)")


def test_gamma2_even_order_note():
    # H2 of order 4 on the Gamma_2 branch: the geometric count gives P2(2)
    spec = sphere(qt.phi_cover(E(2 * math.pi / 5), qt.ONE), qt.phi_cover(qt.J, E(math.pi / 4)))
    rep = fo.run_pipeline(spec)
    assert rep.orbifold == Orbifold2.parse("P2(2)")
    assert any("table" in n for n in rep.notes)


def test_orbifold_text_round_trip():
    for text in ("Plane", "Plane(4)", "S2(2,3,5)", "P2(2,2)", "D2(2,2)", "Torus", "KleinBottle",
                 "MoebiusBand", "Cylinder", "S2(2,2,2,2)"):
        assert str(Orbifold2.parse(text)) == text
    assert Orbifold2("Sphere", (5, 3, 2)).as_dict() == {"surface": "Sphere", "cones": [2, 3, 5]}
    with pytest.raises(ValueError):
        Orbifold2("Sphere", (1,))


def test_pipeline_reports_first_failure():
    rep = fo.run_pipeline(euclid(mo.glide(E1, E3)))
    assert rep.verdicts() == {"free": True, "discrete": True, "a": True, "b1": False, "b2": None}
    assert rep.failure_message().startswith("b1 violated: reflection in leaf stabilizer")
    rep = fo.run_pipeline(euclid(mo.rotation(E3, Angle.rational(1, 3))))
    assert rep.failed_condition == "free"


# --- structural properties -----------------------------------------------------------

@given(st.integers(0, 2**31))
def test_leaf_map_is_homomorphism_and_equivariant_f1(seed):
    rng = np.random.default_rng(seed)
    gens = [mo.screw(E3, Angle.rational(1, 4), 1), mo.translation(E1), mo.translation(E2),
            mo.screw(E1, Angle.rational(1, 2), Fraction(1, 2))]
    g = h = mo.identity(3)
    for _ in range(4):
        g = g @ gens[int(rng.integers(len(gens)))]
        h = h @ gens[int(rng.integers(len(gens)))].inverse()
    assert fo.leaf_image(g @ h, "F1") == fo.leaf_image(g, "F1") @ fo.leaf_image(h, "F1")
    x = tuple(Fraction(int(v), 7) for v in rng.integers(-20, 20, size=3))
    assert fo.leaf_projection(g(x), "F1") == fo.leaf_image(g, "F1")(fo.leaf_projection(x, "F1"))


@given(st.integers(0, 2**31))
def test_leaf_map_is_homomorphism_and_equivariant_f2(seed):
    rng = np.random.default_rng(seed)

    def rand_elem():
        v = rng.normal(size=4)
        q2 = qt.Quaternion.from_array(v / np.linalg.norm(v))
        q1 = E(rng.uniform(0, 2 * math.pi))
        if rng.random() < 0.5:
            q1 = q1 * qt.J
        return qt.phi_cover(q1, q2)

    g, h = rand_elem(), rand_elem()
    assert np.allclose(fo.leaf_image(g @ h, "F2"), fo.leaf_image(g, "F2") @ fo.leaf_image(h, "F2"), atol=1e-9)
    v = rng.normal(size=4)
    x = qt.Quaternion.from_array(v / np.linalg.norm(v))
    assert np.allclose(fo.leaf_projection(g(x), "F2"), fo.leaf_image(g, "F2") @ fo.leaf_projection(x, "F2"), atol=1e-9)
