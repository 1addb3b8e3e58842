from __future__ import annotations

from fractions import Fraction

import math
import pytest
from hypothesis import given, strategies as st

from spaceforms.exact import (
    SQRT3,
    QuadSurd,
    exact_sqrt,
    format_scalar,
    nullspace,
    parse_scalar,
    rank,
    solve_affine,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=40)
surds = st.builds(QuadSurd.make, fractions, fractions)


def test_sqrt3_squares_to_three():
    assert SQRT3 * SQRT3 == 3
    assert isinstance(SQRT3 * SQRT3, Fraction)


def test_surd_sign_is_exact():
    # 7 - 4 sqrt3 = 0.0717... is positive, 26 - 15 sqrt3 = 0.019... too
    assert QuadSurd.make(7, -4) > 0
    assert QuadSurd.make(26, -15) > 0
    assert QuadSurd.make(-26, 15) < 0


def test_exact_sqrt_of_surd():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact_sqrt(Fraction(3, 4)) == SQRT3 / 2
    assert exact_sqrt(Fraction(2)) is None


@pytest.mark.parametrize("text,value", [
    ("3/6", Fraction(1, 2)),
    ("-2", Fraction(-2)),
    ("1/2*sqrt3", QuadSurd.make(0, Fraction(1, 2))),
    ("1-sqrt3", QuadSurd.make(1, -1)),
])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_scalar("one half")


@given(surds)
def test_format_parse_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(surds, surds, surds)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if a != 0:
        assert a * (1 / a) == 1


@given(surds)
def test_float_agrees(a):
    if isinstance(a, QuadSurd):
        assert math.isclose(float(a), float(a.a) + float(a.b) * math.sqrt(3), abs_tol=1e-9)


def test_nullspace_and_rank():
    rows = [[1, 0, Fraction(1, 2)], [0, 1, Fraction(1, 3)]]
    null = nullspace(rows, 3)
    assert len(null) == 1
    v = null[0]
    assert all(sum(r[j] * v[j] for j in range(3)) == 0 for r in rows)
    assert rank(rows) == 2


def test_solve_affine_inconsistent():
    assert solve_affine([[0, 0], [0, 0]], [1, 0]) is None
    x, null = solve_affine([[1, 0], [0, 0]], [2, 0])
    assert x[0] == 2 and len(null) == 1
