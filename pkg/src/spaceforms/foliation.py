"""Descent of the standard foliations and classification of leaf orbifolds.

``F1`` is the foliation of R^3 by vertical lines (leaf space R^2 through
``(x1, x2, x3) -> (x1, x2)``); ``F2`` is the Hopf foliation of S^3 by great
circles (leaf space S^2 through ``x -> conj(x) i x``).

A group Gamma gives a standard quotient map when it (a) maps leaves to leaves,
(b1) induces a leaf group Gamma' without reflections in point stabilisers and
(b2) induces a leaf group acting discontinuously.  The leaf orbifold is then
``R^2 / Gamma'`` or ``S^2 / Gamma'``, with cone points only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import groups as gr
from . import motions as mo
from . import quaternions as qt
from .exact import QuadSurd, format_scalar, is_exact, is_zero, solve_affine
from .groups import EnumerationBudget, GroupSpec, Verdict

F1 = "F1"
F2 = "F2"
FOLIATION_OF = {"euclidean3": F1, "sphere3": F2}

SURFACES = (
    "Plane", "Sphere", "Disc", "Cylinder", "Torus", "MoebiusBand", "KleinBottle", "ProjectivePlane",
)
_SHORT = {"Sphere": "S2", "Disc": "D2", "ProjectivePlane": "P2"}


class ConditionError(ValueError):
    """A pipeline stage was called on input that failed an earlier condition."""


class Unclassified(RuntimeError):
    pass


@dataclass(frozen=True)
class Orbifold2:
    underlying: str
    cone_orders: tuple = ()
    has_reflector: bool = False

    def __post_init__(self):
        if self.underlying not in SURFACES:
            raise ValueError(f"unknown surface {self.underlying!r}")
        cones = tuple(sorted(int(c) for c in self.cone_orders))
        if any(c < 2 for c in cones):
            raise ValueError("cone orders must be at least 2")
        object.__setattr__(self, "cone_orders", cones)

    def __str__(self) -> str:
        name = _SHORT.get(self.underlying, self.underlying)
        if not self.cone_orders:
            return name
        return f"{name}({','.join(str(c) for c in self.cone_orders)})"

    def as_dict(self) -> dict:
        return {"surface": self.underlying, "cones": list(self.cone_orders)}

    @classmethod
    def parse(cls, text: str) -> Orbifold2:
        """Inverse of ``str``: ``"S2(2,3,5)"``, ``"Plane"``, ``"P2(2,2)"``..."""
        text = text.strip()
        name, _, rest = text.partition("(")
        longname = {v: k for k, v in _SHORT.items()}.get(name, name)
        cones = tuple(int(c) for c in rest.rstrip(")").split(",")) if rest else ()
        return cls(longname, cones)


# --- condition (a) -----------------------------------------------------------

def _preserves_vertical(g: mo.Isometry) -> bool:
    col = [g.linear[i][2] for i in range(3)]
    return is_zero(col[0], 1e-12) and is_zero(col[1], 1e-12)


def _hopf_image_is_leaf(g: qt.SO4Element, x: qt.Quaternion, samples: int = 7) -> bool:
    base = qt.hopf_leaf(qt.apply(g, x))
    for t in np.linspace(0.3, 2 * math.pi, samples):
        y = qt.apply(g, qt.hopf_fibre(x, float(t)))
        if np.abs(qt.hopf_leaf(y) - base).max() > 1e-9:
            return False
    return True


def preserves_foliation(
    spec: GroupSpec, fol: str | None = None, budget: EnumerationBudget = gr.DEFAULT_BUDGET
) -> Verdict:
    """Condition (a): every generator maps leaves to leaves."""
    fol = fol or FOLIATION_OF[spec.ambient]
    if FOLIATION_OF.get(spec.ambient) != fol:
        raise ValueError(f"foliation {fol} does not live on {spec.ambient}")
    if fol == F1:
        for i, g in enumerate(spec.generators):
            if not _preserves_vertical(g):
                image = tuple(float(g.linear[r][2]) for r in range(3))
                note = (f"g{i + 1} maps the vertical leaf through the origin to a line "
                        f"with direction {tuple(round(c, 6) for c in image)}")
                return Verdict(False, g, (i + 1,), note, budget)
        return Verdict(True, None, None, "all generators preserve the vertical direction", budget)
    gens = spec.generators
    if all(qt.in_gamma1(g) for g in gens):
        return Verdict(True, None, None, "group lies in Gamma_1", budget, {"case": "gamma1"})
    for i, g in enumerate(gens):
        if not qt.normalizes_fibres(g):
            x = qt.ONE
            note = f"g{i + 1} maps the Hopf fibre through 1 off every fibre"
            if _hopf_image_is_leaf(g, x):
                x = qt.Quaternion(0.5, 0.5, 0.5, 0.5)
                note = f"g{i + 1} maps the Hopf fibre through (1+i+j+k)/2 off every fibre"
            return Verdict(False, g, (i + 1,), note, budget)
    # every q1 normalises the circle; apply the Gamma_2 case test
    enum = gr.enumerate_group(spec, budget)
    in_g2 = all(qt.in_gamma2(g) for g in enum.elements)
    h2 = qt.dedup_matrices(qt.psi(g.q2) for g in enum.elements)
    h2_class = qt.classify_so3_subgroup(h2, check=False)
    if in_g2 and h2_class.kind == "Cyclic":
        return Verdict(True, None, None, "group lies in Gamma_2 with H1 dihedral over psi(S^1) and H2 cyclic",
                       budget, {"case": "gamma2"})
    note = "group normalises the Hopf circle but lies neither in Gamma_1 nor in the Gamma_2 case"
    return Verdict(False, None, None, note, budget)


# --- leaf group ---------------------------------------------------------------

@dataclass
class LeafGroup:
    ambient: str  # plane | sphere2
    generators: list
    derivation: list  # (Gamma generator index, description)
    spec: GroupSpec | None = None
    elements: list | None = None  # closed finite list for sphere2
    gamma_case: str | None = None

    @property
    def order(self) -> int | None:
        return len(self.elements) if self.elements is not None else None

    def describe(self) -> list[str]:
        return [d for _, d in self.derivation]


def leaf_image(g, fol: str):
    """Action induced on the leaf space by a single foliation-preserving element."""
    if fol == F1:
        lin = tuple(tuple(g.linear[i][j] for j in range(2)) for i in range(2))
        return mo.Isometry(lin, (g.translation[0], g.translation[1]))
    return qt.leaf_action(g)


def leaf_projection(x, fol: str):
    if fol == F1:
        return (x[0], x[1])
    if not isinstance(x, qt.Quaternion):
        x = qt.Quaternion.from_array(x)
    return qt.hopf_leaf(x)


def describe_plane_isometry(h: mo.Isometry) -> str:
    A = h.linear_array()
    t = tuple(format_scalar(v) if is_exact(v) else round(float(v), 9) for v in h.translation)
    if h.is_identity():
        return "e"
    if np.linalg.det(A) < 0:
        return f"(S_{tuple(np.round(_mirror_direction(A), 9).tolist())}, t_{t})"
    theta = math.atan2(A[1, 0], A[0, 0])
    if abs(theta) < 1e-12:
        return f"t_{t}"
    turns = Fraction(theta / (2 * math.pi)).limit_denominator(1000)
    rot = f"R_2pi*{turns}" if abs(float(turns) * 2 * math.pi - theta) < 1e-12 else f"R_{theta:.12g}"
    if all(is_zero(v, 1e-15) for v in h.translation):
        return rot
    return f"({rot}, t_{t})"


def _mirror_direction(A: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((A + A.T) / 2)
    d = v[:, int(np.argmax(w))]
    if d[np.argmax(np.abs(d))] < 0:
        d = -d
    return d


def induce_leaf_action(
    spec: GroupSpec, fol: str | None = None, budget: EnumerationBudget = gr.DEFAULT_BUDGET,
    a_verdict: Verdict | None = None,
) -> LeafGroup:
    fol = fol or FOLIATION_OF[spec.ambient]
    a_verdict = a_verdict or preserves_foliation(spec, fol, budget)
    if not a_verdict.holds:
        raise ConditionError(f"condition (a) fails: {a_verdict.note}")
    if fol == F1:
        gens, deriv = [], []
        for i, g in enumerate(spec.generators):
            h = leaf_image(g, fol)
            deriv.append((i, f"g{i + 1} -> {describe_plane_isometry(h)}"))
            if not h.is_identity():
                gens.append(h)
        pspec = GroupSpec("plane", gens, label=f"{spec.label}'", identity=not gens)
        return LeafGroup("plane", gens, deriv, spec=pspec)
    gens, deriv = [], []
    for i, g in enumerate(spec.generators):
        M = leaf_image(g, fol)
        gens.append(M)
        sign = "-" if np.linalg.det(M) < 0 else ""
        deriv.append((i, f"g{i + 1} -> {sign}psi(q2) = {np.round(M, 9).tolist()}"))
    elements = qt.close_matrices(gens, budget.max_elements) if gens else [np.eye(3)]
    return LeafGroup("sphere2", gens, deriv, elements=elements,
                     gamma_case=a_verdict.extra.get("case"))


# --- conditions (b1), (b2) ------------------------------------------------------

def check_b1(leaf: LeafGroup, budget: EnumerationBudget = gr.DEFAULT_BUDGET,
             enum: gr.Enumeration | None = None) -> Verdict:
    """No orientation-reversing element of Gamma' fixes a point."""
    if leaf.ambient == "sphere2":
        for M in leaf.elements:
            if np.linalg.det(M) < 0:
                if np.linalg.svd(M - np.eye(3), compute_uv=False).min() < 1e-8:
                    return Verdict(False, M, None, "reflection in leaf stabilizer", budget)
        return Verdict(True, None, None, "no reflections in the finite leaf group", budget)
    enum = enum or gr.enumerate_group(leaf.spec, budget, strict=False)
    for h, w in enum.non_identity():
        if float(h.det()) < 0 and not mo.fixed_points(h).empty:
            fs = mo.fixed_points(h)
            note = (f"reflection in leaf stabilizer: {gr.format_word(w)} = "
                    f"{describe_plane_isometry(h)} fixes a {fs.kind}")
            return Verdict(False, h, w, note, budget)
    return Verdict(True, None, None, "no reflections within budget", budget)


def check_b2(leaf: LeafGroup, budget: EnumerationBudget = gr.DEFAULT_BUDGET,
             enum: gr.Enumeration | None = None) -> Verdict:
    if leaf.ambient == "sphere2":
        return Verdict(True, None, None, f"finite leaf group of order {len(leaf.elements)}", budget)
    v = gr.is_discrete(leaf.spec, budget, enum)
    if not v.holds:
        v.note = f"leaf group not discontinuous: {v.note}"
    return v


# --- orbifold classification: plane ---------------------------------------------

def _vnorm2(v) -> float:
    return sum(float(x) ** 2 for x in v)


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


class _Lattice:
    def __init__(self, basis: list):
        self.basis = basis

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords(self, v):
        """Coordinates of v in the basis, or None if v is outside its span."""
        if not self.basis:
            return [] if all(is_zero(x, 1e-9) for x in v) else None
        M = [[b[i] for b in self.basis] for i in range(2)]
        sol = solve_affine(M, list(v), 1e-12)
        if sol is None:
            return None
        return sol[0]

    def contains(self, v) -> bool:
        c = self.coords(v)
        if c is None:
            return False
        for x in c:
            if isinstance(x, QuadSurd):
                return False
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    return False
            elif abs(x - round(x)) > 1e-8:
                return False
        return True

    def reduce(self, p):
        """Representative of p modulo the lattice (coordinates in [0, 1))."""
        if not self.basis:
            return tuple(p)
        if self.rank == 2:
            c = self.coords(p)
            shift = [math.floor(float(x) + 1e-9) for x in c]
        else:
            b = self.basis[0]
            s = sum(float(x) * float(y) for x, y in zip(p, b)) / _vnorm2(b)
            shift = [math.floor(s + 1e-9)]
        out = list(p)
        for k, b in zip(shift, self.basis):
            out = [x - k * y for x, y in zip(out, b)]
        return tuple(out)


def translation_lattice(enum: gr.Enumeration) -> _Lattice:
    trans = []
    seen = set()
    for h, _ in enum.non_identity():
        if h.is_translation():
            k = h.key(enum.exact)
            if k not in seen:
                seen.add(k)
                trans.append(h.translation)
    trans.sort(key=_vnorm2)
    basis = []
    if trans:
        basis.append(trans[0])
        for v in trans[1:]:
            if not is_zero(_cross(basis[0], v), 1e-9):
                basis.append(v)
                break
    lat = _Lattice(basis)
    for v in trans:
        if not lat.contains(v):
            raise Unclassified("translations do not form a lattice within budget")
    return lat


def _coset_reps(enum: gr.Enumeration) -> list:
    reps: dict = {}
    for h in enum.elements:
        lk = mo.Isometry(h.linear, (0, 0)).key(enum.exact)
        if lk not in reps or _vnorm2(h.translation) < _vnorm2(reps[lk].translation):
            reps[lk] = h
    return list(reps.values())


def _rotation_order(A: np.ndarray) -> int:
    theta = abs(math.atan2(A[1, 0], A[0, 0]))
    if theta < 1e-12:
        return 1
    n = 2 * math.pi / theta
    if abs(n - round(n)) > 1e-6:
        # rotation through 2*pi*p/q: order q
        return Fraction(theta / (2 * math.pi)).limit_denominator(1000).denominator
    return int(round(n))


@dataclass
class ClassificationResult:
    orbifold: Orbifold2
    method: str
    details: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


def _plane_tree(rank: int, rot_orders: list[int], n_reversing: int, point_order: int) -> Orbifold2:
    """Decision tree over (lattice rank, point group) for reflection-free groups."""
    top = max(rot_orders) if rot_orders else 1
    if rank == 0:
        if n_reversing:
            raise Unclassified("finite group with orientation-reversing elements has a mirror")
        return Orbifold2("Plane", (top,) if top > 1 else ())
    if rank == 1:
        if point_order == 1:
            return Orbifold2("Cylinder")
        if point_order == 2 and not n_reversing:
            return Orbifold2("Disc", (2, 2))
        if point_order == 2 and n_reversing:
            return Orbifold2("MoebiusBand")
        raise Unclassified(f"rank-1 lattice with point group of order {point_order}")
    if n_reversing == 0:
        table = {1: (), 2: (2, 2, 2, 2), 3: (3, 3, 3), 4: (2, 4, 4), 6: (2, 3, 6)}
        if top not in table:
            raise Unclassified(f"rotation of order {top} with a rank-2 lattice")
        return Orbifold2("Torus" if top == 1 else "Sphere", table[top])
    if point_order == 2:
        return Orbifold2("KleinBottle")
    if point_order == 4 and top == 2:
        return Orbifold2("ProjectivePlane", (2, 2))
    raise Unclassified(f"non-orientable point group of order {point_order} without mirrors")


def _plane_cones(enum: gr.Enumeration, lat: _Lattice, reps: list) -> list[int]:
    """Cone orders from rotation centres, grouped into orbits."""
    rot_reps = [g for g in reps if float(g.det()) > 0 and not g.is_translation()]
    if not rot_reps:
        return []
    rng = range(-3, 4)
    if lat.rank == 2:
        shifts = [(a, b) for a in rng for b in rng]
    elif lat.rank == 1:
        shifts = [(a,) for a in rng]
    else:
        shifts = [()]
    centres = []
    keyset = set()
    for g in rot_reps:
        for s in shifts:
            lam = [sum((k * b[i] for k, b in zip(s, lat.basis)), Fraction(0)) for i in range(2)]
            h = mo.compose(mo.translation(lam), g)
            fs = mo.fixed_points(h)
            if fs.kind != "point":
                continue
            c = lat.reduce(fs.point)
            key = tuple(round(float(x), 7) for x in c)
            if key not in keyset:
                keyset.add(key)
                centres.append(c)

    def equivalent(p, q) -> bool:
        return any(lat.contains([a - b for a, b in zip(g(p), q)]) for g in reps)

    def stabiliser(p) -> int:
        return sum(1 for g in reps if float(g.det()) > 0 and lat.contains([a - b for a, b in zip(g(p), p)]))

    orbit_reps: list = []
    for c in centres:
        if not any(equivalent(c, r) for r in orbit_reps):
            orbit_reps.append(c)
    return sorted(stabiliser(r) for r in orbit_reps)


def classify_plane(leaf: LeafGroup, budget: EnumerationBudget, enum: gr.Enumeration | None = None) -> ClassificationResult:
    enum = enum or gr.enumerate_group(leaf.spec, budget)
    lat = translation_lattice(enum)
    reps = _coset_reps(enum)
    linear = [g.linear_array() for g in reps]
    reversing = [A for A in linear if np.linalg.det(A) < 0]
    rot_orders = [_rotation_order(A) for A in linear if np.linalg.det(A) > 0]
    if lat.rank == 0 and not enum.complete:
        raise Unclassified("no translations found but the group was not fully enumerated")
    tree = _plane_tree(lat.rank, rot_orders, len(reversing), len(linear))
    cones = _plane_cones(enum, lat, reps)
    details = {
        "lattice_rank": lat.rank,
        "lattice_basis": [[format_scalar(x) if is_exact(x) else float(x) for x in b] for b in lat.basis],
        "point_group_order": len(linear),
        "orientation_reversing": len(reversing),
        "geometric_cones": cones,
    }
    if tuple(cones) != tree.cone_orders:
        raise Unclassified(
            f"cone census {cones} disagrees with the lattice/point-group signature {tree}"
        )
    return ClassificationResult(tree, "lattice and point group", details)


# --- orbifold classification: sphere --------------------------------------------

_SPHERE_TABLE = {
    "Tetrahedral": (2, 3, 3),
    "Octahedral": (2, 3, 4),
    "Icosahedral": (2, 3, 5),
}


def sphere_table_lookup(h2: qt.SO3Class, gamma_case: str | None) -> Orbifold2:
    """Leaf orbifold predicted from the type of H2."""
    if gamma_case == "gamma2":
        if h2.kind != "Cyclic":
            raise Unclassified("Gamma_2 case requires cyclic H2")
        return Orbifold2("ProjectivePlane", (h2.n,) if h2.n > 1 else ())
    if h2.kind == "Cyclic":
        return Orbifold2("Sphere", (h2.n, h2.n) if h2.n > 1 else ())
    if h2.kind == "Dihedral":
        return Orbifold2("Sphere", (2, 2, h2.n))
    return Orbifold2("Sphere", _SPHERE_TABLE[h2.kind])


def _sphere_cones(elements: list[np.ndarray]) -> list[int]:
    rots = [M for M in elements if np.linalg.det(M) > 0]
    points = []
    for M in rots:
        if np.abs(M - np.eye(3)).max() < 1e-9:
            continue
        w, v = np.linalg.eig(M)
        u = np.real(v[:, int(np.argmin(np.abs(w - 1)))])
        u = u / np.linalg.norm(u)
        for p in (u, -u):
            if not any(np.abs(p - q).max() < 1e-7 for q in points):
                points.append(p)
    reps: list = []
    for p in points:
        if not any(np.abs(M @ p - r).max() < 1e-7 for r in reps for M in elements):
            reps.append(p)
    return sorted(sum(1 for M in rots if np.abs(M @ r - r).max() < 1e-7) for r in reps)


def classify_sphere(leaf: LeafGroup, h2: qt.SO3Class | None = None) -> ClassificationResult:
    elements = leaf.elements
    reversing = any(np.linalg.det(M) < 0 for M in elements)
    cones = _sphere_cones(elements)
    geometric = Orbifold2("ProjectivePlane" if reversing else "Sphere", cones)
    details = {"leaf_group_order": len(elements), "geometric_cones": cones}
    notes = []
    if h2 is not None:
        table = sphere_table_lookup(h2, leaf.gamma_case)
        details["H2"] = str(h2)
        details["table_value"] = str(table)
        if table != geometric:
            notes.append(f"table lookup gives {table}; the quotient computed from the leaf group is {geometric}")
    return ClassificationResult(geometric, "rotation axes and orbits", details, notes)


def classify_orbifold(leaf: LeafGroup, budget: EnumerationBudget = gr.DEFAULT_BUDGET,
                      enum: gr.Enumeration | None = None, h2: qt.SO3Class | None = None) -> ClassificationResult:
    if leaf.ambient == "plane":
        return classify_plane(leaf, budget, enum)
    return classify_sphere(leaf, h2)


def h_subgroups(enum: gr.Enumeration) -> tuple[qt.SO3Class, qt.SO3Class]:
    """Types of H1 and H2, the projections of p(Gamma) onto the two SO(3) factors."""
    h1 = qt.dedup_matrices(qt.psi(g.q1) for g in enum.elements)
    h2 = qt.dedup_matrices(qt.psi(g.q2) for g in enum.elements)
    return qt.classify_so3_subgroup(h1), qt.classify_so3_subgroup(h2)


# --- the full pipeline ------------------------------------------------------------

@dataclass
class VerificationReport:
    label: str
    ambient: str
    foliation: str
    budget: EnumerationBudget
    free: Verdict | None = None
    discrete: Verdict | None = None
    a: Verdict | None = None
    b1: Verdict | None = None
    b2: Verdict | None = None
    leaf: LeafGroup | None = None
    orbifold: Orbifold2 | None = None
    classification: ClassificationResult | None = None
    failed_condition: str | None = None
    notes: list = field(default_factory=list)
    h_types: tuple | None = None

    @property
    def accepted(self) -> bool:
        return self.failed_condition is None and self.orbifold is not None

    def verdicts(self) -> dict:
        out = {}
        for name in ("free", "discrete", "a", "b1", "b2"):
            v = getattr(self, name)
            out[name] = None if v is None else bool(v.holds)
        return out

    def failure_message(self) -> str | None:
        if self.failed_condition is None:
            return None
        v = getattr(self, self.failed_condition, None)
        note = v.note if isinstance(v, Verdict) else "; ".join(self.notes)
        return f"{self.failed_condition} violated: {note}"

    def as_dict(self) -> dict:
        d = {
            "label": self.label,
            "ambient": self.ambient,
            "foliation": self.foliation,
            "budget": self.budget.as_dict(),
            "verdicts": self.verdicts(),
            "witnesses": {
                name: getattr(self, name).note
                for name in ("free", "discrete", "a", "b1", "b2")
                if getattr(self, name) is not None
            },
            "failed_condition": self.failed_condition,
            "leaf_group": self.leaf.describe() if self.leaf else None,
            "orbifold": self.orbifold.as_dict() if self.orbifold else None,
            "orbifold_name": str(self.orbifold) if self.orbifold else None,
            "notes": list(self.notes),
        }
        if self.h_types:
            d["H1"], d["H2"] = (str(h) for h in self.h_types)
        if self.classification:
            d["classification"] = _jsonable(self.classification.details)
        return d


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def run_pipeline(spec: GroupSpec, budget: EnumerationBudget = gr.DEFAULT_BUDGET) -> VerificationReport:
    """Check freeness, discreteness, (a), (b1), (b2) in order, then classify."""
    fol = FOLIATION_OF[spec.ambient]
    rep = VerificationReport(spec.label, spec.ambient, fol, budget)
    enum = gr.enumerate_group(spec, budget, strict=spec.ambient == "sphere3")
    rep.free = gr.acts_freely(spec, budget, enum)
    if not rep.free.holds:
        rep.failed_condition = "free"
        return rep
    rep.discrete = gr.is_discrete(spec, budget, None if enum.truncated else enum)
    if not rep.discrete.holds:
        rep.failed_condition = "discrete"
        return rep
    rep.a = preserves_foliation(spec, fol, budget)
    if not rep.a.holds:
        rep.failed_condition = "a"
        return rep
    rep.leaf = induce_leaf_action(spec, fol, budget, rep.a)
    h2 = None
    if fol == F2:
        rep.h_types = h_subgroups(enum)
        h2 = rep.h_types[1]
        leaf_enum = None
    else:
        leaf_enum = gr.enumerate_group(rep.leaf.spec, budget, strict=False)
    rep.b1 = check_b1(rep.leaf, budget, leaf_enum)
    if not rep.b1.holds:
        rep.failed_condition = "b1"
        return rep
    rep.b2 = check_b2(rep.leaf, budget, None if leaf_enum is None or leaf_enum.truncated else leaf_enum)
    if not rep.b2.holds:
        rep.failed_condition = "b2"
        return rep
    try:
        res = classify_orbifold(rep.leaf, budget, leaf_enum, h2)
    except Unclassified as exc:
        rep.failed_condition = "unclassified"
        rep.notes.append(f"unclassified within budget: {exc}")
        return rep
    rep.classification = res
    rep.orbifold = res.orbifold
    rep.notes.extend(res.notes)
    return rep
