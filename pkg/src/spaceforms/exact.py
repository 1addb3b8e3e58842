"""Exact scalars for isometry data.

Rational data is carried as :class:`fractions.Fraction`.  Rotations through
multiples of 30 degrees and hexagonal lattices need ``sqrt(3)``, so numbers of
the form ``a + b*sqrt(3)`` with rational ``a, b`` are carried as
:class:`QuadSurd`.  Any operation with a ``float`` operand degrades to float.

A :class:`QuadSurd` whose surd part vanishes is always returned as a plain
``Fraction``; this keeps equality and hashing consistent between the two.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction, "QuadSurd", float]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class QuadSurd:
    """Element ``a + b*sqrt(3)`` of the field Q(sqrt 3), with ``b != 0``."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = _frac(a)
        self.b = _frac(b)

    @staticmethod
    def make(a, b) -> Fraction | QuadSurd:
        b = _frac(b)
        if b == 0:
            return _frac(a)
        return QuadSurd(a, b)

    # conversions
    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(3.0)

    def __repr__(self) -> str:
        return f"QuadSurd({self.a}, {self.b})"

    def __str__(self) -> str:
        return format_scalar(self)

    def __hash__(self) -> int:
        return hash(("Q(sqrt3)", self.a, self.b))

    def __bool__(self) -> bool:
        return True  # b != 0 by construction

    # arithmetic
    @staticmethod
    def _split(x):
        if isinstance(x, QuadSurd):
            return x.a, x.b
        if isinstance(x, (int, Fraction)):
            return Fraction(x), Fraction(0)
        return None

    def __add__(self, other):
        s = self._split(other)
        if s is None:
            return float(self) + other if isinstance(other, float) else NotImplemented
        return QuadSurd.make(self.a + s[0], self.b + s[1])

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b)

    def __pos__(self):
        return self

    def __sub__(self, other):
        s = self._split(other)
        if s is None:
            return float(self) - other if isinstance(other, float) else NotImplemented
        return QuadSurd.make(self.a - s[0], self.b - s[1])

    def __rsub__(self, other):
        s = self._split(other)
        if s is None:
            return other - float(self) if isinstance(other, float) else NotImplemented
        return QuadSurd.make(s[0] - self.a, s[1] - self.b)

    def __mul__(self, other):
        s = self._split(other)
        if s is None:
            return float(self) * other if isinstance(other, float) else NotImplemented
        c, d = s
        return QuadSurd.make(self.a * c + 3 * self.b * d, self.a * d + self.b * c)

    __rmul__ = __mul__

    def _inverse(self) -> QuadSurd:
        n = self.a * self.a - 3 * self.b * self.b  # never 0: sqrt(3) is irrational
        return QuadSurd(self.a / n, -self.b / n)

    def __truediv__(self, other):
        if isinstance(other, float):
            return float(self) / other
        if isinstance(other, QuadSurd):
            return self * other._inverse()
        if isinstance(other, (int, Fraction)):
            return QuadSurd.make(self.a / other, self.b / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, float):
            return other / float(self)
        if isinstance(other, (int, Fraction)):
            return Fraction(other) * self._inverse()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return float(self) ** n
        result: Fraction | QuadSurd = Fraction(1)
        base = self if n >= 0 else self._inverse()
        for _ in range(abs(n)):
            result = result * base
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # comparisons
    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with 3 b^2
        return sa if self.a * self.a > 3 * self.b * self.b else sb

    def __eq__(self, other):
        if isinstance(other, QuadSurd):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return False
        if isinstance(other, float):
            return float(self) == other
        return NotImplemented

    def _cmp(self, other) -> int:
        if isinstance(other, float):
            x = float(self)
            return (x > other) - (x < other)
        return sign(self - other)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __floor__(self) -> int:
        n = math.floor(float(self))
        while self - n < 0:
            n -= 1
        while self - (n + 1) >= 0:
            n += 1
        return n


SQRT3 = QuadSurd(0, 1)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadSurd))


def all_exact(xs: Iterable) -> bool:
    return all(is_exact(x) for x in xs)


def exact(x):
    """Promote ints to Fraction; leave other scalars untouched."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    return x


def sign(x) -> int:
    if isinstance(x, QuadSurd):
        return x.sign()
    return (x > 0) - (x < 0)


def is_zero(x, tol: float = 1e-9) -> bool:
    if is_exact(x):
        return x == 0
    return abs(x) <= tol


def exact_sqrt(x) -> Fraction | QuadSurd | None:
    """Exact square root of a nonnegative rational inside Q(sqrt 3), if any."""
    if not isinstance(x, (int, Fraction)):
        return None
    x = Fraction(x)
    if x < 0:
        return None
    r = _rational_sqrt(x)
    if r is not None:
        return r
    r = _rational_sqrt(x / 3)
    if r is not None:
        return QuadSurd(0, r)
    return None


def _rational_sqrt(x: Fraction) -> Fraction | None:
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def rational_parts(x) -> tuple[Fraction, Fraction]:
    """Coordinates of an exact scalar over the Q-basis (1, sqrt 3)."""
    if isinstance(x, QuadSurd):
        return x.a, x.b
    return Fraction(x), Fraction(0)


def scalar_floor(x) -> int:
    return math.floor(x)


# --- text format -----------------------------------------------------------

_SURD = r"(?:(?P<b>\d+(?:/\d+)?)\s*\*\s*)?sqrt\(?3\)?"
# "a", "a +- [b*]sqrt3" or "[+-][b*]sqrt3": a sign must separate the two parts
_SCALAR_RE = re.compile(
    r"^\s*(?:(?P<a>[+-]?\d+(?:/\d+)?)(?:\s*(?P<sgn>[+-])\s*" + _SURD + r")?"
    r"|(?P<sgn2>[+-])?\s*" + _SURD.replace("P<b>", "P<b2>") + r")\s*$"
)


def parse_scalar(text) -> Fraction | QuadSurd | float:
    """Parse ``"p/q"``, ``"p/q+r/s*sqrt3"``, ints (exact) or floats (inexact)."""
    if isinstance(text, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return text
    if not isinstance(text, str):
        raise ValueError(f"not a scalar: {text!r}")
    m = _SCALAR_RE.match(text)
    if not m or (m.group("a") is None and "sqrt" not in text):
        try:
            return float(text)
        except ValueError:
            raise ValueError(f"cannot parse scalar {text!r}") from None
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    if "sqrt" not in text:
        return a
    bt = m.group("b") or m.group("b2")
    b = Fraction(bt) if bt else Fraction(1)
    if (m.group("sgn") or m.group("sgn2")) == "-":
        b = -b
    return QuadSurd.make(a, b)


def format_scalar(x) -> str | float:
    if isinstance(x, float):
        return x
    if isinstance(x, QuadSurd):
        head = "" if x.a == 0 else str(x.a)
        mag = abs(x.b)
        body = "sqrt3" if mag == 1 else f"{mag}*sqrt3"
        if x.b < 0:
            return f"{head}-{body}"
        return f"{head}+{body}" if head else body
    return str(Fraction(x))


# --- exact linear algebra --------------------------------------------------

def _pivot_ok(x, tol: float) -> bool:
    return not is_zero(x, tol)


def row_reduce(rows: Sequence[Sequence], tol: float = 1e-12):
    """Reduced row echelon form over the field of the entries.

    Returns ``(rref_rows, pivot_columns)``.  Exact entries are reduced
    exactly; floats use partial pivoting with an absolute tolerance.
    """
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= len(m):
            break
        if all_exact(row[c] for row in m[r:]):
            best = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        else:
            cand = [(abs(float(m[i][c])), i) for i in range(r, len(m))]
            mag, best = max(cand)
            if mag <= tol:
                best = None
        if best is None:
            continue
        m[r], m[best] = m[best], m[r]
        p = m[r][c]
        m[r] = [v / p for v in m[r]]
        for i in range(len(m)):
            if i != r and _pivot_ok(m[i][c], 0.0):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence], tol: float = 1e-9) -> int:
    return len(row_reduce(rows, tol)[1])


def nullspace(rows: Sequence[Sequence], ncols: int, tol: float = 1e-12) -> list[list]:
    """Basis of {x : rows . x = 0}."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, piv = row_reduce(rows, tol)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis


def solve_affine(matrix: Sequence[Sequence], rhs: Sequence, tol: float = 1e-12):
    """Solve ``matrix . x = rhs``.

    Returns ``None`` when inconsistent, else ``(particular, nullspace_basis)``.
    """
    n = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, piv = row_reduce(aug, tol)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, pc in enumerate(piv):
        x[pc] = red[i][n]
    return x, nullspace(matrix, n, tol)


def dot(u: Sequence, v: Sequence):
    total = Fraction(0)
    for a, b in zip(u, v):
        if a and b:
            total = total + a * b
    return total


def integer_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for i in ints:
        g = math.gcd(g, i)
    g = g or 1
    ints = [i // g for i in ints]
    first = next((i for i in ints if i), 0)
    if first < 0:
        ints = [-i for i in ints]
    return tuple(ints)
