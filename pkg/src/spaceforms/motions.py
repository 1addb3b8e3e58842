"""Rigid motions of R^3 and of the leaf plane R^2.

An :class:`Isometry` is a pair ``(linear, translation)`` acting as
``x -> linear @ x + translation``; ``(A, t)`` means "A followed by t".
Entries are exact (``Fraction`` / :class:`~spaceforms.exact.QuadSurd`)
whenever the constructor data allows it and floats otherwise.

Named constructors follow the usual notation: ``translation(v)`` is t_v,
``rotation(v, angle)`` is R_theta(v) about the line through the origin
spanned by ``v``, ``screw(v, angle, pitch)`` is (R_theta(v), t_{pitch*v}),
``plane_reflection(v)`` is S_v (mirror along ``v``) and
``plane_glide(v, w)`` is (S_v, t_w).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .exact import (
    QuadSurd,
    SQRT3,
    all_exact,
    dot,
    exact,
    exact_sqrt,
    integer_vector,
    is_exact,
    is_zero,
    nullspace,
    rank,
    rational_parts,
    solve_affine,
)

TWO_PI = 2.0 * math.pi
ORTHO_TOL = 1e-12
FIXED_TOL = 1e-9
KEY_SCALE = 1e8
DEFAULT_DENOMINATOR_BOUND = 10**6


class Angle:
    """Angle stored as a fraction of a full turn when rational.

    ``Angle.rational(p, q)`` is ``2*pi*p/q`` normalised to lowest terms with
    ``0 <= p < q``; ``Angle.radians(x)`` keeps a float in ``[0, 2*pi)``.
    """

    __slots__ = ("p", "q", "value")

    def __init__(self, p: int | None, q: int | None, value: float | None):
        self.p, self.q, self.value = p, q, value

    @classmethod
    def rational(cls, p: int, q: int) -> Angle:
        if q == 0:
            raise ValueError("angle denominator must be nonzero")
        f = Fraction(p, q) % 1
        return cls(f.numerator, f.denominator, None)

    @classmethod
    def radians(cls, x: float) -> Angle:
        v = float(x) % TWO_PI
        # tiny negative inputs round up to exactly 2 pi
        return cls(None, None, 0.0 if v >= TWO_PI else v)

    @classmethod
    def zero(cls) -> Angle:
        return cls.rational(0, 1)

    @property
    def is_rational(self) -> bool:
        return self.q is not None

    @property
    def turns(self) -> Fraction | float:
        if self.is_rational:
            return Fraction(self.p, self.q)
        return self.value / TWO_PI

    def to_radians(self) -> float:
        if self.is_rational:
            return TWO_PI * self.p / self.q
        return self.value

    def __add__(self, other: Angle) -> Angle:
        if self.is_rational and other.is_rational:
            return Angle.rational(*_as_pq(Fraction(self.p, self.q) + Fraction(other.p, other.q)))
        return Angle.radians(self.to_radians() + other.to_radians())

    def __neg__(self) -> Angle:
        if self.is_rational:
            return Angle.rational(-self.p, self.q)
        return Angle.radians(-self.value)

    def __mul__(self, k: int) -> Angle:
        if self.is_rational:
            return Angle.rational(self.p * k, self.q)
        return Angle.radians(self.value * k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Angle):
            return NotImplemented
        return (self.p, self.q, self.value) == (other.p, other.q, other.value)

    def __hash__(self) -> int:
        return hash((self.p, self.q, self.value))

    def __repr__(self) -> str:
        if self.is_rational:
            return f"Angle(2pi*{self.p}/{self.q})"
        return f"Angle({self.value!r} rad)"

    def cos_sin(self):
        """Exact (cos, sin) when the turn is a multiple of 1/12, else floats."""
        if self.is_rational and 12 % self.q == 0:
            return _TWELFTHS[(12 // self.q) * self.p % 12]
        x = self.to_radians()
        return math.cos(x), math.sin(x)


def _as_pq(f: Fraction) -> tuple[int, int]:
    return f.numerator, f.denominator


_H = Fraction(1, 2)
_TWELFTHS = [
    (Fraction(1), Fraction(0)),
    (SQRT3 / 2, _H),
    (_H, SQRT3 / 2),
    (Fraction(0), Fraction(1)),
    (-_H, SQRT3 / 2),
    (-SQRT3 / 2, _H),
    (Fraction(-1), Fraction(0)),
    (-SQRT3 / 2, -_H),
    (-_H, -SQRT3 / 2),
    (Fraction(0), Fraction(-1)),
    (_H, -SQRT3 / 2),
    (SQRT3 / 2, -_H),
]


class FixedSet(NamedTuple):
    """Solution set of g(x) = x: a point plus the span of ``directions``."""

    kind: str  # empty | point | line | plane | all
    point: tuple | None
    directions: tuple

    @property
    def empty(self) -> bool:
        return self.kind == "empty"


_KIND_BY_DIM = {0: "point", 1: "line", 2: "plane"}


@dataclass(frozen=True, eq=False)
class Isometry:
    linear: tuple
    translation: tuple
    tag: str | None = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.translation)
        if len(self.linear) != n or any(len(r) != n for r in self.linear):
            raise ValueError("linear part and translation disagree in dimension")
        if "_lin_id" not in self.__dict__:
            ident = _IDENTITY_BY_DIM.get(n)
            object.__setattr__(self, "_lin_id", ident is not None and self.linear == ident)

    # basic structure
    @property
    def dim(self) -> int:
        return len(self.translation)

    @property
    def is_exact(self) -> bool:
        return all_exact(self.translation) and all(all_exact(r) for r in self.linear)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.linear == other.linear and self.translation == other.translation

    def __hash__(self) -> int:
        return hash((self.linear, self.translation))

    def __repr__(self) -> str:
        tag = f" {self.tag}" if self.tag else ""
        return f"<Isometry{tag} dim={self.dim} exact={self.is_exact}>"

    def __call__(self, x: Sequence):
        return apply(self, x)

    def __matmul__(self, other: Isometry) -> Isometry:
        return compose(self, other)

    def inverse(self) -> Isometry:
        return invert(self)

    def identity_like(self) -> Isometry:
        return identity(self.dim)

    # numeric views
    def linear_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.linear])

    def translation_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.translation])

    def det(self):
        return _det(self.linear)

    @property
    def orientation_preserving(self) -> bool:
        return float(self.det()) > 0

    def is_identity(self, tol: float = 1e-12) -> bool:
        n = self.dim
        if self.is_exact:
            return self == identity(n)
        return (
            np.abs(self.linear_array() - np.eye(n)).max() <= tol
            and np.abs(self.translation_array()).max() <= tol
        )

    def is_translation(self, tol: float = 1e-12) -> bool:
        n = self.dim
        if self.is_exact:
            return self._lin_id
        return np.abs(self.linear_array() - np.eye(n)).max() <= tol

    def key(self, exact_mode: bool = True):
        """Hashable dedup key: exact data, or coordinates rounded to 1e-8."""
        if exact_mode:
            k = self.__dict__.get("_key")
            if k is None:
                k = tuple(_int_key(v) for row in self.linear for v in row)
                k += tuple(_int_key(v) for v in self.translation)
                object.__setattr__(self, "_key", k)
            return k
        flat = [v for row in self.linear for v in row] + list(self.translation)
        return tuple(int(round(float(v) * KEY_SCALE)) for v in flat)

    def displacement(self, point: Sequence | None = None) -> float:
        """Euclidean distance moved by ``point`` (default: the origin)."""
        if point is None:
            return math.sqrt(sum(float(v) ** 2 for v in self.translation))
        image = apply(self, point)
        return math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(image, point)))


_IDENTITY_BY_DIM = {
    n: tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)) for n in (2, 3)
}


def _int_key(v):
    if isinstance(v, QuadSurd):
        return (v.a.numerator, v.a.denominator, v.b.numerator, v.b.denominator)
    if isinstance(v, Fraction):
        return (v.numerator, v.denominator)
    return (v,)


def identity(dim: int = 3) -> Isometry:
    one, zero = Fraction(1), Fraction(0)
    lin = tuple(tuple(one if i == j else zero for j in range(dim)) for i in range(dim))
    return Isometry(lin, tuple(zero for _ in range(dim)), "identity")


def _vec(v: Sequence) -> tuple:
    return tuple(exact(x) for x in v)


def _matvec(A: tuple, x: Sequence) -> list:
    out = []
    for row in A:
        s = Fraction(0)
        for a, b in zip(row, x):
            if a and b:
                s = s + a * b
        out.append(s)
    return out


def _matmul(A: tuple, B: tuple) -> tuple:
    n = len(A)
    cols = list(zip(*B))
    return tuple(tuple(dot(A[i], cols[j]) for j in range(n)) for i in range(n))


def _det(A: tuple):
    n = len(A)
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    if n == 3:
        return (
            A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0])
        )
    return float(np.linalg.det(np.array(A, dtype=float)))


def _transpose(A: tuple) -> tuple:
    return tuple(zip(*A))


def from_matrix(linear: Sequence[Sequence], translation: Sequence, tag: str | None = None) -> Isometry:
    """Build an isometry from raw data, certifying orthogonality."""
    lin = tuple(_vec(row) for row in linear)
    tr = _vec(translation)
    g = Isometry(lin, tr, tag)
    check_orthogonal(lin)
    return g


def check_orthogonal(lin: tuple) -> None:
    n = len(lin)
    if all(all_exact(r) for r in lin):
        prod = _matmul(_transpose(lin), lin)
        if prod != identity(n).linear:
            raise ValueError("linear part is not orthogonal")
    else:
        a = np.array([[float(v) for v in r] for r in lin])
        if np.abs(a.T @ a - np.eye(n)).max() > ORTHO_TOL:
            raise ValueError("linear part is not orthogonal within 1e-12")


def compose(a: Isometry, b: Isometry) -> Isometry:
    """``(a o b)(x) = a(b(x))``."""
    if a.dim != b.dim:
        raise ValueError(f"cannot compose isometries of dimension {a.dim} and {b.dim}")
    a_id = a._lin_id
    if b._lin_id:
        lin = a.linear
    elif a_id:
        lin = b.linear
    else:
        lin = _matmul(a.linear, b.linear)
    if a_id:
        moved = b.translation
    else:
        moved = _matvec(a.linear, b.translation)
    tr = tuple(x + y for x, y in zip(moved, a.translation))
    g = Isometry.__new__(Isometry)
    object.__setattr__(g, "linear", lin)
    object.__setattr__(g, "translation", tr)
    object.__setattr__(g, "tag", None)
    if a_id or b._lin_id:
        object.__setattr__(g, "_lin_id", a_id and b._lin_id)
    g.__post_init__()
    return g


def invert(g: Isometry) -> Isometry:
    lt = _transpose(g.linear)
    tr = tuple(-x for x in _matvec(lt, g.translation))
    return Isometry(lt, tr)


def apply(g: Isometry, x: Sequence) -> tuple:
    if len(x) != g.dim:
        raise ValueError("point dimension mismatch")
    return tuple(u + v for u, v in zip(_matvec(g.linear, [exact(c) for c in x]), g.translation))


def power(g: Isometry, k: int) -> Isometry:
    result = identity(g.dim)
    base = g if k >= 0 else invert(g)
    k = abs(k)
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


# --- named constructors -----------------------------------------------------

def translation(v: Sequence) -> Isometry:
    g = identity(len(v))
    return Isometry(g.linear, _vec(v), "translation")


def _norm_exact(v: tuple):
    n2 = dot(v, v)
    if isinstance(n2, (int, Fraction)):
        return n2, exact_sqrt(n2)
    return n2, None


def rotation_matrix(axis: Sequence, angle: Angle) -> tuple:
    """3x3 matrix of R_theta(axis) (Rodrigues), exact when possible."""
    v = _vec(axis)
    if len(v) != 3:
        raise ValueError("rotation axis must be a 3-vector")
    c, s = angle.cos_sin()
    n2, n = _norm_exact(v)
    if not all_exact(v) or is_zero(n2, 0.0):
        if is_zero(n2, 0.0):
            raise ValueError("rotation axis must be nonzero")
    exact_ok = all_exact(v) and is_exact(c) and (s == 0 or n is not None)
    if not exact_ok:
        u = np.array([float(x) for x in v])
        u = u / np.linalg.norm(u)
        cf, sf = float(c), float(s)
        K = np.array([[0, -u[2], u[1]], [u[2], 0, -u[0]], [-u[1], u[0], 0]])
        R = cf * np.eye(3) + sf * K + (1 - cf) * np.outer(u, u)
        return tuple(tuple(float(x) for x in row) for row in R)
    one_minus_c = 1 - c
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            val = one_minus_c * v[i] * v[j] / n2
            if i == j:
                val = val + c
            if s != 0:
                k = 3 - i - j
                if i != j:
                    sgn = 1 if (i, j) in ((2, 1), (0, 2), (1, 0)) else -1
                    val = val + sgn * s * v[k] / n
            row.append(exact(val))
        rows.append(tuple(row))
    return tuple(rows)


def rotation(axis: Sequence, angle: Angle) -> Isometry:
    """R_theta(v): rotation through ``angle`` about the line R*v."""
    return Isometry(rotation_matrix(axis, angle), _vec((0, 0, 0)), f"rotation({angle!r})")


def screw(axis: Sequence, angle: Angle, pitch=1) -> Isometry:
    """(R_theta(v), t_{pitch*v}): rotate about ``v`` then translate along it."""
    v = _vec(axis)
    p = exact(pitch)
    return Isometry(rotation_matrix(v, angle), tuple(p * x for x in v), f"screw({angle!r})")


def reflection(normal: Sequence) -> Isometry:
    """Reflection in the hyperplane through the origin orthogonal to ``normal``."""
    nrm = _vec(normal)
    n2 = dot(nrm, nrm)
    if is_zero(n2, 0.0):
        raise ValueError("reflection normal must be nonzero")
    dim = len(nrm)
    lin = tuple(
        tuple(exact((1 if i == j else 0) - 2 * nrm[i] * nrm[j] / n2) for j in range(dim))
        for i in range(dim)
    )
    return Isometry(lin, _vec([0] * dim), "reflection")


def glide(normal: Sequence, vector: Sequence) -> Isometry:
    """Reflection in the hyperplane ``normal^perp`` followed by t_vector.

    ``vector`` must lie in the mirror, otherwise the result has fixed points.
    """
    r = reflection(normal)
    if not is_zero(dot(_vec(normal), _vec(vector)), FIXED_TOL):
        raise ValueError("glide vector must be parallel to the mirror")
    return Isometry(r.linear, _vec(vector), "glide")


def plane_rotation(angle: Angle, center: Sequence = (0, 0)) -> Isometry:
    """R_theta about ``center`` (the origin by default)."""
    c, s = angle.cos_sin()
    lin = ((exact(c), exact(-s)), (exact(s), exact(c)))
    ctr = _vec(center)
    tr = tuple(ctr[i] - (lin[i][0] * ctr[0] + lin[i][1] * ctr[1]) for i in range(2))
    return Isometry(lin, tuple(exact(x) for x in tr), f"R({angle!r})")


def plane_reflection(v: Sequence) -> Isometry:
    """S_v: reflection of R^2 whose mirror is the line R*v."""
    w = _vec(v)
    return Isometry(reflection((-w[1], w[0])).linear, _vec((0, 0)), "S")


def plane_glide(v: Sequence, w: Sequence) -> Isometry:
    """(S_v, t_w)."""
    return Isometry(plane_reflection(v).linear, _vec(w), "glide")


# --- fixed points -----------------------------------------------------------

def fixed_points(g: Isometry) -> FixedSet:
    """Classify the solution set of ``(linear - I) x = -translation``."""
    n = g.dim
    if g.is_exact:
        M = [[g.linear[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
        rhs = [-t for t in g.translation]
        sol = solve_affine(M, rhs)
        if sol is None:
            return FixedSet("empty", None, ())
        point, null = sol
        dirs = tuple(tuple(exact(x) for x in d) for d in null)
        return FixedSet(_kind(len(dirs), n), tuple(exact(x) for x in point), dirs)
    M = g.linear_array() - np.eye(n)
    rhs = -g.translation_array()
    U, S, Vt = np.linalg.svd(M)
    r = int((S > FIXED_TOL).sum())
    x, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    if np.linalg.norm(M @ x - rhs) > FIXED_TOL * max(1.0, np.linalg.norm(rhs)):
        return FixedSet("empty", None, ())
    dirs = tuple(tuple(float(c) for c in Vt[i]) for i in range(r, n))
    return FixedSet(_kind(len(dirs), n), tuple(float(c) for c in x), dirs)


def _kind(nullity: int, n: int) -> str:
    if nullity == n:
        return "all"
    return _KIND_BY_DIM[nullity]


# --- rational relations -----------------------------------------------------

class Relation(NamedTuple):
    related: bool
    coefficients: tuple[int, ...] | None
    exact: bool
    note: str = ""


def rationally_related(
    vectors: Sequence[Sequence], bound: int = DEFAULT_DENOMINATOR_BOUND
) -> Relation:
    """Decide Q-linear dependence of ``vectors``.

    Exact data (rationals and Q(sqrt 3)) is decided exactly by splitting each
    coordinate over the basis (1, sqrt 3).  Floats get a bounded integer
    relation search (LLL); "not related" then only means no relation with
    coefficients up to ``bound``.
    """
    vs = [tuple(exact(x) for x in v) for v in vectors]
    if not vs:
        return Relation(False, None, True)
    if all(all_exact(v) for v in vs):
        cols = [[c for x in v for c in rational_parts(x)] for v in vs]
        rows = [list(r) for r in zip(*cols)]
        null = nullspace(rows, len(vs))
        if not null:
            return Relation(False, None, True)
        return Relation(True, integer_vector(null[0]), True)
    return _float_relation([[float(x) for x in v] for v in vs], bound)


def _float_relation(vs: list[list[float]], bound: int) -> Relation:
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix

    k, d = len(vs), len(vs[0])
    scale = max(1.0, max(abs(x) for v in vs for x in v))
    for i, v in enumerate(vs):
        if max(abs(x) for x in v) <= 1e-15 * scale:
            c = tuple(int(i == j) for j in range(k))
            return Relation(True, c, False, "zero vector")
    W = 2**50 / scale
    rows = [[ZZ(int(i == j)) for j in range(k)] + [ZZ(int(round(W * x))) for x in v] for i, v in enumerate(vs)]
    red = DomainMatrix(rows, (k, k + d), ZZ).lll().to_Matrix().tolist()
    for row in red:
        c = [int(x) for x in row[:k]]
        if not any(c):
            continue
        cmax = max(abs(x) for x in c)
        if cmax > bound:
            continue
        resid = max(abs(sum(ci * v[j] for ci, v in zip(c, vs))) for j in range(d))
        if resid <= 1e-14 * cmax * scale * k:
            if next(x for x in c if x) < 0:
                c = [-x for x in c]
            return Relation(True, tuple(c), False)
    return Relation(False, None, False, f"not related (bounded search, |c| <= {bound})")


def near_zero_combination(vectors: Sequence[Sequence], eps: float, bound: int = DEFAULT_DENOMINATOR_BOUND):
    """Integer combination with 0 < |sum c_i v_i| < eps, if LLL finds one."""
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix

    vs = [[float(x) for x in v] for v in vectors]
    k, d = len(vs), len(vs[0])
    if k < 2:
        return None
    scale = max(1.0, max(abs(x) for v in vs for x in v))
    for W in (1e4 / eps, 1e7 / eps, 2**40):
        rows = [[ZZ(int(i == j)) for j in range(k)] + [ZZ(int(round(W * x))) for x in v] for i, v in enumerate(vs)]
        red = DomainMatrix(rows, (k, k + d), ZZ).lll().to_Matrix().tolist()
        for row in red:
            c = [int(x) for x in row[:k]]
            if not any(c) or max(abs(x) for x in c) > bound:
                continue
            resid = math.sqrt(sum(sum(ci * v[j] for ci, v in zip(c, vs)) ** 2 for j in range(d)))
            if 1e-12 * scale * max(abs(x) for x in c) < resid < eps:
                return tuple(c)
    return None


def q_rank(vectors: Sequence[Sequence]) -> int:
    """Rank over Q of exact vectors (coordinates split over (1, sqrt 3))."""
    cols = [[c for x in v for c in rational_parts(exact(x))] for v in vectors]
    if not cols:
        return 0
    return rank([list(r) for r in zip(*cols)])


def real_rank(vectors: Sequence[Sequence], tol: float = 1e-9) -> int:
    vs = [list(v) for v in vectors]
    if not vs:
        return 0
    return rank([list(r) for r in zip(*vs)], tol)


def project_to_plane(v: Sequence) -> tuple:
    """pi: R^3 -> e_3^perp, (x1, x2, x3) -> (x1, x2)."""
    return (v[0], v[1])
