from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spaceforms import quaternions as qt
from spaceforms.quaternions import I, J, K, ONE, Quaternion

E = Quaternion.exp_i


def _rot_x(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])


def _conjugation_oracle(q: Quaternion) -> np.ndarray:
    """Columns are q a q^-1 for a = i, j, k, computed by hand multiplication."""
    cols = []
    for a in (I, J, K):
        b = q * a * q.conj()
        cols.append([b.x, b.y, b.z])
    return np.array(cols).T


def _random_unit(rng) -> Quaternion:
    v = rng.normal(size=4)
    return Quaternion.from_array(v / np.linalg.norm(v))


units = st.integers(0, 2**32 - 1).map(lambda s: _random_unit(np.random.default_rng(s)))


def test_psi_examples():
    assert np.allclose(qt.psi(ONE), np.eye(3))
    assert np.allclose(qt.psi(I), np.diag([1, -1, -1]))
    for theta in (0.3, 1.1, 2.9):
        assert np.allclose(qt.psi(E(theta / 2)), _rot_x(theta))


def test_psi_rejects_non_unit():
    with pytest.raises(ValueError):
        qt.psi(Quaternion(1.0, 0.01, 0, 0))


def test_phi_examples():
    assert qt.phi_cover(ONE, ONE).is_identity()
    g = qt.phi_cover(E(0.7), E(0.7))
    assert g(ONE).close_to(ONE)
    # phi(e^{ia}, 1) keeps the Hopf fibre through (1, 0)
    x = Quaternion.from_complex(1, 0)
    y = qt.phi_cover(E(0.4), ONE)(x)
    assert np.allclose(qt.hopf_leaf(y), qt.hopf_leaf(x))


def test_p_examples():
    a, b = qt.p_homomorphism(qt.SO4_IDENTITY)
    assert np.allclose(a, np.eye(3)) and np.allclose(b, np.eye(3))
    a, b = qt.p_homomorphism(qt.phi_cover(I, ONE))
    assert np.allclose(a, qt.psi(I)) and np.allclose(b, np.eye(3))
    minus = qt.phi_cover(-ONE, ONE)
    assert np.allclose(minus.matrix(), -np.eye(4))
    a, b = qt.p_homomorphism(minus)
    assert np.allclose(a, np.eye(3)) and np.allclose(b, np.eye(3))


def test_gamma_membership():
    assert qt.in_gamma1(qt.phi_cover(E(math.pi / 5), _random_unit(np.random.default_rng(1))))
    assert not qt.in_gamma1(qt.phi_cover(J, ONE))
    assert qt.in_gamma1(qt.SO4_IDENTITY)
    assert qt.in_gamma2(qt.phi_cover(J, E(0.3)))


def test_classify_examples():
    assert str(qt.classify_so3_subgroup([np.eye(3)])) == "Cyclic(1)"
    for q in (2, 3, 5, 7):
        els = qt.close_matrices([qt.psi(E(math.pi / q))])
        assert qt.classify_so3_subgroup(els) == qt.SO3Class("Cyclic", q)
    # rotations of the regular tetrahedron with vertices (1,1,1), (1,-1,-1), ...
    tet = [np.diag(d) for d in ([1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1])]
    cyc = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    els = [a @ np.linalg.matrix_power(cyc, k) for a in tet for k in range(3)]
    assert qt.order_census(els) == {1: 1, 2: 3, 3: 8}
    assert qt.classify_so3_subgroup(els).kind == "Tetrahedral"


def test_classify_dihedral_and_polyhedral():
    els = qt.close_matrices([qt.psi(g) for g in qt.binary_dihedral_generators(4)])
    assert qt.classify_so3_subgroup(els) == qt.SO3Class("Dihedral", 4)
    for kind, order in (("Tetrahedral", 12), ("Octahedral", 24), ("Icosahedral", 60)):
        els = qt.close_matrices([qt.psi(g) for g in qt.binary_generators(kind)])
        assert len(els) == order
        assert qt.classify_so3_subgroup(els).kind == kind


def test_classify_rejects_non_group():
    with pytest.raises(ValueError):
        qt.classify_so3_subgroup([np.eye(3), qt.psi(E(math.pi / 3))])


def test_psi_homomorphism_thousand_pairs():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        a, b = _random_unit(rng), _random_unit(rng)
        worst = max(worst, np.abs(qt.psi(a * b) - qt.psi(a) @ qt.psi(b)).max())
    assert worst < 1e-12


@given(units)
def test_psi_matches_conjugation_oracle(q):
    assert np.allclose(qt.psi(q), _conjugation_oracle(q), atol=1e-12)


@given(units, units)
def test_phi_is_orthogonal_and_p_phi_is_psi_pair(a, b):
    g = qt.phi_cover(a, b)
    M = g.matrix()
    assert np.allclose(M.T @ M, np.eye(4), atol=1e-12)
    assert abs(np.linalg.det(M) - 1) < 1e-12
    pa, pb = qt.p_homomorphism(g)
    assert np.allclose(pa, qt.psi(a), atol=1e-12) and np.allclose(pb, qt.psi(b), atol=1e-12)


@given(units, units, units, units)
def test_phi_is_homomorphism(a, b, c, d):
    lhs = qt.phi_cover(a, b) @ qt.phi_cover(c, d)
    assert np.allclose(lhs.matrix(), qt.phi_cover(a, b).matrix() @ qt.phi_cover(c, d).matrix(), atol=1e-12)


@given(units, st.floats(-math.pi, math.pi), units)
def test_gamma1_maps_fibres_to_fibres(q2, alpha, x):
    g = qt.phi_cover(E(alpha), q2)
    img = qt.hopf_leaf(g(x))
    assert np.allclose(img, qt.leaf_action(g) @ qt.hopf_leaf(x), atol=1e-10)
    img_t = qt.hopf_leaf(g(qt.hopf_fibre(x, 0.8)))
    assert np.allclose(img, img_t, atol=1e-10)


@given(units, units)
def test_normaliser_leaf_action_is_negated(q2, x):
    g = qt.phi_cover(J, q2)
    assert np.allclose(qt.hopf_leaf(g(x)), qt.leaf_action(g) @ qt.hopf_leaf(x), atol=1e-10)


def test_leaf_action_requires_normaliser():
    with pytest.raises(ValueError):
        qt.leaf_action(qt.phi_cover(Quaternion(0.6, 0, 0.8, 0), ONE))


def test_sign_canonicalisation():
    a, b = qt.phi_cover(-I, -J), qt.phi_cover(I, J)
    assert a == b and hash(a) == hash(b)
    assert a.q1.close_to(I)
