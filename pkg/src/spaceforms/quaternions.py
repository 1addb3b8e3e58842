"""Quaternion model of S^3, SO(3) and SO(4).

R^4 is identified with the quaternions through
``(w, x, y, z) <-> w + x i + y j + z k`` and with C^2 through
``z1 + z2 j <-> (Re z1, Im z1, Re z2, Im z2)``.  With this convention the
Hopf fibres ``(e^{it} z1, e^{it} z2)`` are the orbits of left multiplication
by the circle ``S^1 = {cos t + i sin t}``.

``psi(q)`` is ``a -> q a q^{-1}`` on imaginary quaternions and
``phi(q1, q2)`` is ``x -> q1 x q2^{-1}`` on R^4.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

UNIT_TOL = 1e-12
INPUT_UNIT_TOL = 1e-6
CIRCLE_TOL = 1e-9
KEY_SCALE = 1e8


@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a: Sequence[float]) -> Quaternion:
        return cls(*(float(c) for c in a))

    @classmethod
    def from_complex(cls, z1: complex, z2: complex) -> Quaternion:
        return cls(z1.real, z1.imag, z2.real, z2.imag)

    @classmethod
    def exp_i(cls, angle: float) -> Quaternion:
        """``e^{i angle} = cos(angle) + i sin(angle)``."""
        return cls(math.cos(angle), math.sin(angle), 0.0, 0.0)

    def to_complex(self) -> tuple[complex, complex]:
        return complex(self.w, self.x), complex(self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __mul__(self, o: Quaternion) -> Quaternion:
        if isinstance(o, (int, float)):
            return Quaternion(self.w * o, self.x * o, self.y * o, self.z * o)
        a1, b1, c1, d1 = self.w, self.x, self.y, self.z
        a2, b2, c2, d2 = o.w, o.x, o.y, o.z
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    __rmul__ = __mul__

    def __add__(self, o: Quaternion) -> Quaternion:
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o: Quaternion) -> Quaternion:
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return math.sqrt(self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2)

    def normalized(self) -> Quaternion:
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero quaternion")
        return Quaternion(self.w / n, self.x / n, self.y / n, self.z / n)

    def inverse(self) -> Quaternion:
        n2 = self.norm() ** 2
        c = self.conj()
        return Quaternion(c.w / n2, c.x / n2, c.y / n2, c.z / n2)

    def is_unit(self, tol: float = UNIT_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def close_to(self, o: Quaternion, tol: float = 1e-9) -> bool:
        return float(np.abs(self.as_array() - o.as_array()).max()) <= tol


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def _require_unit(q: Quaternion, tol: float = INPUT_UNIT_TOL) -> Quaternion:
    if not q.is_unit(tol):
        raise ValueError(f"quaternion {q} is not a unit quaternion (|q| = {q.norm():.3g})")
    return q.normalized()


def left_matrix(q: Quaternion) -> np.ndarray:
    """Matrix of x -> q x on R^4."""
    a, b, c, d = q.w, q.x, q.y, q.z
    return np.array([[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]])


def right_matrix(q: Quaternion) -> np.ndarray:
    """Matrix of x -> x q on R^4."""
    a, b, c, d = q.w, q.x, q.y, q.z
    return np.array([[a, -b, -c, -d], [b, a, d, -c], [c, -d, a, b], [d, c, -b, a]])


def psi(q: Quaternion) -> np.ndarray:
    """Rotation a -> q a q^{-1} of the imaginary quaternions, in the basis i, j, k."""
    q = _require_unit(q)
    M = left_matrix(q) @ right_matrix(q.conj())
    return M[1:, 1:].copy()


@dataclass(frozen=True, eq=False)
class SO4Element:
    """``x -> q1 x q2^{-1}``, stored with a canonical sign for the pair."""

    q1: Quaternion
    q2: Quaternion
    tag: str | None = None

    def __post_init__(self):
        q1, q2 = _require_unit(self.q1), _require_unit(self.q2)
        a = q1.as_array()
        lead = next((v for v in a if abs(v) > CIRCLE_TOL), 1.0)
        if lead < 0:
            q1, q2 = -q1, -q2
        object.__setattr__(self, "q1", q1)
        object.__setattr__(self, "q2", q2)

    dim = 4

    def __matmul__(self, o: SO4Element) -> SO4Element:
        return SO4Element((self.q1 * o.q1).normalized(), (self.q2 * o.q2).normalized())

    def inverse(self) -> SO4Element:
        return SO4Element(self.q1.conj(), self.q2.conj())

    def identity_like(self) -> SO4Element:
        return SO4_IDENTITY

    def __call__(self, x) -> Quaternion:
        return apply(self, x)

    def matrix(self) -> np.ndarray:
        return left_matrix(self.q1) @ right_matrix(self.q2.conj())

    def key(self, exact_mode: bool = False):
        return tuple(int(round(v * KEY_SCALE)) for v in self.matrix().ravel())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SO4Element):
            return NotImplemented
        return np.abs(self.matrix() - other.matrix()).max() <= 1e-9

    def __hash__(self) -> int:
        return hash(self.key())

    def is_identity(self, tol: float = 1e-9) -> bool:
        return float(np.abs(self.matrix() - np.eye(4)).max()) <= tol

    @property
    def is_exact(self) -> bool:
        return False

    def __repr__(self) -> str:
        a, b = self.q1.as_array().round(6), self.q2.as_array().round(6)
        return f"phi({a.tolist()}, {b.tolist()})"


SO4_IDENTITY = SO4Element(ONE, ONE, "identity")


def phi_cover(q1: Quaternion, q2: Quaternion) -> SO4Element:
    return SO4Element(q1, q2)


def apply(g: SO4Element, x) -> Quaternion:
    if not isinstance(x, Quaternion):
        x = Quaternion.from_array(x)
    return g.q1 * x * g.q2.conj()


def p_homomorphism(g: SO4Element) -> tuple[np.ndarray, np.ndarray]:
    """``p(phi(q1, q2)) = (psi(q1), psi(q2))``."""
    return psi(g.q1), psi(g.q2)


# --- Hopf structure ----------------------------------------------------------

def in_circle(q: Quaternion, tol: float = CIRCLE_TOL) -> bool:
    """q in S^1 = span{1, i}."""
    return abs(q.y) <= tol and abs(q.z) <= tol


def in_circle_j(q: Quaternion, tol: float = CIRCLE_TOL) -> bool:
    """q in S^1 j = span{j, k}."""
    return abs(q.w) <= tol and abs(q.x) <= tol


def in_gamma1(g: SO4Element, tol: float = CIRCLE_TOL) -> bool:
    return in_circle(g.q1, tol)


def in_gamma2(g: SO4Element, tol: float = CIRCLE_TOL) -> bool:
    return in_circle(g.q2, tol)


def normalizes_fibres(g: SO4Element, tol: float = CIRCLE_TOL) -> bool:
    """q1 lies in the normaliser S^1 u S^1 j of the fibre circle."""
    return in_circle(g.q1, tol) or in_circle_j(g.q1, tol)


def hopf_leaf(x: Quaternion) -> np.ndarray:
    """Leaf of x as a point of the unit S^2: ``conj(x) i x``."""
    h = x.conj() * I * x
    return np.array([h.x, h.y, h.z])


def leaf_action(g: SO4Element, tol: float = CIRCLE_TOL) -> np.ndarray:
    """Induced action on S^2: psi(q2), negated when q1 lies in S^1 j."""
    R = psi(g.q2)
    if in_circle(g.q1, tol):
        return R
    if in_circle_j(g.q1, tol):
        return -R
    raise ValueError("element does not preserve the Hopf foliation")


def hopf_fibre(x: Quaternion, t: float) -> Quaternion:
    return Quaternion.exp_i(t) * x


# --- finite subgroups of SO(3) ----------------------------------------------

def _mkey(M: np.ndarray) -> tuple:
    return tuple(int(round(v * KEY_SCALE)) for v in np.asarray(M).ravel())


def matrix_order(M: np.ndarray, max_order: int = 240, tol: float = 1e-7) -> int | None:
    P = np.eye(M.shape[0])
    for k in range(1, max_order + 1):
        P = P @ M
        if np.abs(P - np.eye(M.shape[0])).max() <= tol:
            return k
    return None


def close_matrices(gens: Iterable[np.ndarray], max_elements: int = 20000) -> list[np.ndarray]:
    """Finite group generated by ``gens`` (orthogonal matrices)."""
    gens = [np.asarray(g, dtype=float) for g in gens]
    n = gens[0].shape[0] if gens else 3
    elems = {_mkey(np.eye(n)): np.eye(n)}
    frontier = [np.eye(n)]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a @ g
                k = _mkey(b)
                if k not in elems:
                    elems[k] = b
                    nxt.append(b)
                    if len(elems) > max_elements:
                        raise RuntimeError("group exceeds element budget")
        frontier = nxt
    return list(elems.values())


def dedup_matrices(ms: Iterable[np.ndarray]) -> list[np.ndarray]:
    out: dict = {}
    for m in ms:
        out.setdefault(_mkey(m), np.asarray(m))
    return list(out.values())


@dataclass(frozen=True)
class SO3Class:
    kind: str  # Cyclic | Dihedral | Tetrahedral | Octahedral | Icosahedral
    n: int = 0

    def __str__(self) -> str:
        if self.kind in ("Cyclic", "Dihedral"):
            return f"{self.kind}({self.n})"
        return self.kind

    @property
    def order(self) -> int:
        return {"Cyclic": self.n, "Dihedral": 2 * self.n, "Tetrahedral": 12,
                "Octahedral": 24, "Icosahedral": 60}[self.kind]


_POLY_CENSUS = {
    12: ("Tetrahedral", {1: 1, 2: 3, 3: 8}),
    24: ("Octahedral", {1: 1, 2: 9, 3: 8, 4: 6}),
    60: ("Icosahedral", {1: 1, 2: 15, 3: 20, 5: 24}),
}


def order_census(elements: Sequence[np.ndarray]) -> dict[int, int]:
    return dict(Counter(matrix_order(m, max_order=len(elements) + 1) for m in elements))


def check_closed(elements: Sequence[np.ndarray]) -> None:
    keys = {_mkey(m) for m in elements}
    if len(keys) != len(elements):
        raise ValueError("element list contains duplicates")
    for a in elements:
        if _mkey(a.T) not in keys:
            raise ValueError("set is not closed under inverses")
        for b in elements:
            if _mkey(a @ b) not in keys:
                raise ValueError("set is not closed under multiplication")


def classify_so3_subgroup(elements: Sequence[np.ndarray], check: bool = True) -> SO3Class:
    """Type of a finite rotation group from its order and element orders."""
    els = [np.asarray(m, dtype=float) for m in elements]
    for m in els:
        if abs(np.linalg.det(m) - 1.0) > 1e-8:
            raise ValueError("element is not a rotation")
    if check:
        check_closed(els)
    n = len(els)
    census = order_census(els)
    if None in census:
        raise ValueError("element of infinite order in a finite set")
    if n in census:
        return SO3Class("Cyclic", n)
    top = max(census)
    if n % 2 == 0 and top == n // 2 and census.get(2, 0) >= n // 2:
        return SO3Class("Dihedral", n // 2)
    if n == 4 and census == {1: 1, 2: 3}:
        return SO3Class("Dihedral", 2)
    if n in _POLY_CENSUS and census == _POLY_CENSUS[n][1]:
        return SO3Class(_POLY_CENSUS[n][0])
    raise ValueError(f"order {n} with census {census} is not a finite rotation group")


# --- binary polyhedral generators -----------------------------------------

GOLDEN = (1 + math.sqrt(5)) / 2


def binary_generators(kind: str) -> list[Quaternion]:
    """Unit quaternions generating the binary lift of T, O or I."""
    h = 0.5
    if kind == "Tetrahedral":
        return [I, Quaternion(h, h, h, h)]
    if kind == "Octahedral":
        s = 1 / math.sqrt(2)
        return [Quaternion(s, s, 0, 0), Quaternion(h, h, h, h)]
    if kind == "Icosahedral":
        return [Quaternion(h, h, h, h), Quaternion(GOLDEN / 2, 1 / (2 * GOLDEN), h, 0.0)]
    raise ValueError(f"unknown polyhedral type {kind!r}")


def binary_dihedral_generators(m: int) -> list[Quaternion]:
    return [Quaternion.exp_i(math.pi / m), J]
