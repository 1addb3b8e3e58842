from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from spaceforms import groups as gr
from spaceforms import motions as mo
from spaceforms import quaternions as qt
from spaceforms.groups import EnumerationBudget, GroupSpec
from spaceforms.motions import Angle

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
E = qt.Quaternion.exp_i


def test_enumerate_infinite_cyclic():
    spec = GroupSpec("euclidean3", [mo.translation(E3)])
    enum = gr.enumerate_group(spec, EnumerationBudget(max_word_length=3))
    assert {g for g in enum.elements} == {mo.translation((0, 0, k)) for k in range(-3, 4)}
    assert not enum.complete


def test_enumerate_finite_sphere_group():
    spec = GroupSpec("sphere3", [qt.phi_cover(E(math.pi / 2), qt.ONE)])
    enum = gr.enumerate_group(spec)
    assert len(enum) == 4 and enum.complete


def test_enumerate_lattice_matches_ball_count():
    spec = GroupSpec("euclidean3", [mo.translation(v) for v in (E1, E2, E3)])
    budget = EnumerationBudget(max_word_length=20, ball_radius=6.0)
    enum = gr.enumerate_group(spec, budget)
    oracle = sum(1 for p in itertools.product(range(-6, 7), repeat=3) if sum(c * c for c in p) <= 36)
    assert len(enum) == oracle
    assert not enum.complete
    # at the default word length 8 the L1 bound also applies
    enum8 = gr.enumerate_group(spec, EnumerationBudget(max_word_length=8, ball_radius=6.0))
    oracle8 = sum(1 for p in itertools.product(range(-6, 7), repeat=3)
                  if sum(c * c for c in p) <= 36 and sum(abs(c) for c in p) <= 8)
    assert len(enum8) == oracle8


def test_budget_exceeded_is_reported():
    spec = GroupSpec("euclidean3", [mo.translation(v) for v in (E1, E2, E3)])
    with pytest.raises(gr.BudgetExceeded):
        gr.enumerate_group(spec, EnumerationBudget(max_elements=50))
    enum = gr.enumerate_group(spec, EnumerationBudget(max_elements=50), strict=False)
    assert enum.truncated


def test_words_reproduce_elements():
    spec = GroupSpec("euclidean3", [mo.screw(E3, Angle.rational(1, 4), 1), mo.translation(E1)])
    enum = gr.enumerate_group(spec, EnumerationBudget(max_word_length=4))
    for g, w in zip(enum.elements, enum.words):
        assert gr.element_from_word(spec, w) == g


def test_acts_freely_examples():
    glide = GroupSpec("euclidean3", [mo.glide(E1, E3)])
    assert gr.acts_freely(glide).holds
    rot = GroupSpec("euclidean3", [mo.rotation(E3, Angle.rational(1, 2))])
    v = gr.acts_freely(rot)
    assert not v.holds and v.witness == mo.rotation(E3, Angle.rational(1, 2))
    p, qq = 5, 2
    lens = GroupSpec("sphere3", [qt.phi_cover(E(2 * math.pi / p), E(2 * math.pi * qq / p))])
    assert gr.acts_freely(lens).holds


def test_non_free_lens_lift_detected():
    # phi(e^{2 pi i/5}, e^{2 pi i/5}) fixes 1
    spec = GroupSpec("sphere3", [qt.phi_cover(E(2 * math.pi / 5), E(2 * math.pi / 5))])
    assert not gr.acts_freely(spec).holds


def test_is_discrete_examples():
    assert gr.is_discrete(GroupSpec("euclidean3", [mo.translation(E3)])).holds
    theta = 2 * math.pi * (math.sqrt(5) - 1) / 2
    plane = GroupSpec("plane", [mo.plane_rotation(Angle.radians(theta))])
    v = gr.is_discrete(plane)
    assert not v.holds
    assert gr._near_identity(v.witness)


def test_is_discrete_incommensurable_translations():
    spec = GroupSpec("euclidean3", [mo.translation(E1), mo.translation((math.sqrt(2), 0, 0))])
    v = gr.is_discrete(spec)
    assert not v.holds
    assert v.witness.displacement() < gr.NEAR_IDENTITY_EPS
    c = v.extra["coefficients"]
    basis = [gr.element_from_word(spec, w).translation[0] for w in v.extra["basis_words"]]
    assert abs(sum(ci * float(b) for ci, b in zip(c, basis))) < gr.NEAR_IDENTITY_EPS
    assert max(abs(x) for x in c) > 100


def test_is_discrete_irrational_sphere_rotation():
    spec = GroupSpec("sphere3", [qt.phi_cover(E(1.0), qt.ONE)])
    v = gr.is_discrete(spec, EnumerationBudget(max_elements=2000))
    assert not v.holds


def test_group_spec_validation():
    with pytest.raises(ValueError):
        GroupSpec("euclidean3", [])
    with pytest.raises(ValueError):
        GroupSpec("sphere3", [mo.translation(E1)])
    assert GroupSpec("euclidean3", [], identity=True).identity_element().is_identity()


def test_format_word():
    assert gr.format_word(()) == "e"
    assert gr.format_word((1, -2)) == "g1 g2^-1"


def test_sphere_enumeration_elements_orthogonal():
    spec = GroupSpec("sphere3", [qt.phi_cover(qt.ONE, b) for b in qt.binary_generators("Octahedral")])
    enum = gr.enumerate_group(spec)
    assert len(enum) == 48
    for g in enum.elements:
        M = g.matrix()
        assert np.allclose(M.T @ M, np.eye(4))


def test_enumeration_size_invariant_under_far_conjugation():
    from spaceforms import catalog as cat

    spec = cat.CASES["euclid-7a"].build()
    far = mo.translation((Fraction(-40, 3), Fraction(25), Fraction(7, 2)))
    n0 = len(gr.enumerate_group(spec, strict=False).elements)
    n1 = len(gr.enumerate_group(cat.conjugate(spec, far), strict=False).elements)
    assert n0 == n1
    base = cat.conjugate(spec, far).base_point()
    assert np.allclose(base[:2], np.array([float(x) for x in far.translation[:2]]) + spec.base_point()[:2])
