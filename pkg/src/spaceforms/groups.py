"""Bounded enumeration of finitely generated isometry groups.

Verdicts here are falsifiers: "free" and "discrete" mean that no witness to
the contrary was found inside the enumeration budget.  Non-discreteness is
additionally certified by two arguments that reach beyond the budget:
powers of an infinite-order rotation that return close to the identity, and
translation vectors whose rank over Q exceeds their rank over R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import motions as mo
from .motions import Isometry
from .quaternions import SO4_IDENTITY, SO4Element

AMBIENTS = ("euclidean3", "sphere3", "plane")
NEAR_IDENTITY_EPS = 1e-3
SPHERE_FREE_TOL = 1e-8
MAX_POWER = 10**6


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EnumerationBudget:
    max_word_length: int = 8
    ball_radius: float = 6.0
    max_elements: int = 20000

    def __post_init__(self):
        if self.max_word_length <= 0 or self.ball_radius <= 0 or self.max_elements <= 0:
            raise ValueError("budget entries must be positive")

    def as_dict(self) -> dict:
        return {
            "max_word_length": self.max_word_length,
            "ball_radius": self.ball_radius,
            "max_elements": self.max_elements,
        }


DEFAULT_BUDGET = EnumerationBudget()


@dataclass
class GroupSpec:
    """Generators of a group acting on ``ambient``.

    The trivial group is an empty generator list with ``identity=True``.
    """

    ambient: str
    generators: tuple = ()
    label: str = ""
    identity: bool = False

    def __post_init__(self):
        if self.ambient not in AMBIENTS:
            raise ValueError(f"unknown ambient {self.ambient!r}")
        self.generators = tuple(self.generators)
        if not self.generators and not self.identity:
            raise ValueError("empty generator list needs the identity flag")
        want = _element_type(self.ambient)
        for g in self.generators:
            if not isinstance(g, want[0]) or getattr(g, "dim", None) != want[1]:
                raise ValueError(f"generator {g!r} does not act on {self.ambient}")

    @property
    def is_exact(self) -> bool:
        return all(g.is_exact for g in self.generators)

    def base_point(self) -> np.ndarray | None:
        """Centre of the enumeration ball for Euclidean and plane groups.

        The least-squares minimiser of the generators' squared displacements
        (minimum-norm when not unique).  It moves along with any isometric
        conjugation, so the enumeration does not depend on where the group
        sits relative to the origin.
        """
        if self.ambient == "sphere3" or not self.generators:
            return None
        rows, rhs = [], []
        for g in self.generators:
            a = g.linear_array()
            rows.append(a - np.eye(len(a)))
            rhs.append(-g.translation_array())
        x, *_ = np.linalg.lstsq(np.vstack(rows), np.concatenate(rhs), rcond=None)
        return x

    def identity_element(self):
        if self.ambient == "sphere3":
            return SO4_IDENTITY
        return mo.identity(3 if self.ambient == "euclidean3" else 2)


def _element_type(ambient: str):
    return {
        "euclidean3": (Isometry, 3),
        "plane": (Isometry, 2),
        "sphere3": (SO4Element, 4),
    }[ambient]


Word = tuple


def format_word(word: Word, names: Sequence[str] | None = None) -> str:
    if not word:
        return "e"
    parts = []
    for w in word:
        name = names[abs(w) - 1] if names else f"g{abs(w)}"
        parts.append(name if w > 0 else f"{name}^-1")
    return " ".join(parts)


@dataclass
class Enumeration:
    elements: list
    words: list
    complete: bool
    pruned: bool
    exact: bool
    budget: EnumerationBudget
    ambient: str
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.elements)

    def non_identity(self):
        for g, w in zip(self.elements, self.words):
            if w:
                yield g, w

    def keys(self) -> dict:
        return {g.key(self.exact): i for i, g in enumerate(self.elements)}


def _letters(spec: GroupSpec, exact_mode: bool):
    out = []
    for i, g in enumerate(spec.generators):
        out.append((g, (i + 1,)))
        inv = g.inverse()
        if inv.key(exact_mode) != g.key(exact_mode):
            out.append((inv, (-(i + 1),)))
    return out


def enumerate_group(
    spec: GroupSpec, budget: EnumerationBudget = DEFAULT_BUDGET, strict: bool = True
) -> Enumeration:
    """Breadth-first enumeration by word length.

    Euclidean and plane groups stop at ``max_word_length`` and drop every
    element moving the base point (:meth:`GroupSpec.base_point`) farther than
    ``ball_radius``.  Sphere groups are
    finite when discrete, so they are closed up completely regardless of
    word length, bounded only by ``max_elements``.

    Exceeding ``max_elements`` raises :class:`BudgetExceeded`, or with
    ``strict=False`` returns the partial enumeration flagged ``truncated``.
    """
    exact_mode = spec.is_exact
    e = spec.identity_element()
    letters = _letters(spec, exact_mode)
    seen = {e.key(exact_mode): 0}
    elements, words = [e], [()]
    frontier = [0]
    sphere = spec.ambient == "sphere3"
    base = spec.base_point()
    pruned = False
    length = 0
    while frontier and (sphere or length < budget.max_word_length):
        length += 1
        nxt = []
        for idx in frontier:
            a, wa = elements[idx], words[idx]
            for g, wg in letters:
                if wa and wa[-1] == -wg[0]:
                    continue
                b = a @ g
                if not sphere and _moves(b, base) > budget.ball_radius:
                    pruned = True
                    continue
                k = b.key(exact_mode)
                if k in seen:
                    continue
                seen[k] = len(elements)
                elements.append(b)
                words.append(wa + wg)
                nxt.append(len(elements) - 1)
                if len(elements) >= budget.max_elements:
                    if strict:
                        raise BudgetExceeded(
                            f"more than {budget.max_elements} elements at word length {length}"
                        )
                    return Enumeration(elements, words, False, True, exact_mode, budget,
                                       spec.ambient, truncated=True)
        frontier = nxt
    complete = not frontier and not pruned
    return Enumeration(elements, words, complete, pruned, exact_mode, budget, spec.ambient)


def _moves(g: Isometry, base: np.ndarray | None) -> float:
    if base is None:
        return g.displacement()
    return float(np.linalg.norm(g.linear_array() @ base + g.translation_array() - base))


def element_from_word(spec: GroupSpec, word: Word):
    g = spec.identity_element()
    for w in word:
        h = spec.generators[abs(w) - 1]
        g = g @ (h if w > 0 else h.inverse())
    return g


# --- verdicts ----------------------------------------------------------------

@dataclass
class Verdict:
    holds: bool
    witness: object = None
    word: Word | None = None
    note: str = ""
    budget: EnumerationBudget | None = None
    extra: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.holds)


def _has_fixed_point(g) -> bool:
    if isinstance(g, SO4Element):
        s = np.linalg.svd(g.matrix() - np.eye(4), compute_uv=False)
        return s.min() <= SPHERE_FREE_TOL
    return not mo.fixed_points(g).empty


def acts_freely(
    spec: GroupSpec, budget: EnumerationBudget = DEFAULT_BUDGET, enum: Enumeration | None = None
) -> Verdict:
    enum = enum or enumerate_group(spec, budget)
    for g, w in enum.non_identity():
        if _has_fixed_point(g):
            return Verdict(False, g, w, f"{format_word(w)} has a fixed point", budget)
    scope = "free (finite group, all elements checked)" if enum.complete else "free within budget"
    return Verdict(True, None, None, scope, budget)


def _near_identity(g, eps: float = NEAR_IDENTITY_EPS) -> bool:
    if isinstance(g, SO4Element):
        M = g.matrix()
        return float(np.abs(M - np.eye(4)).max()) < eps
    n = g.dim
    lin_ok = float(np.abs(g.linear_array() - np.eye(n)).max()) < eps
    return lin_ok and g.displacement() < eps


def is_discrete(
    spec: GroupSpec, budget: EnumerationBudget = DEFAULT_BUDGET, enum: Enumeration | None = None
) -> Verdict:
    """Discreteness falsifier with near-identity witnesses."""
    if spec.ambient == "sphere3":
        try:
            enum = enum or enumerate_group(spec, budget)
        except BudgetExceeded as exc:
            return _sphere_power_witness(spec, budget, str(exc))
        return Verdict(True, None, None, f"finite group of order {len(enum)}", budget)
    if enum is None:
        if budget.max_word_length > 4:
            # a short pass usually exposes non-discrete groups cheaply
            small = EnumerationBudget(4, budget.ball_radius, budget.max_elements)
            quick = is_discrete(spec, small)
            if not quick.holds and quick.witness is not None:
                quick.budget = budget
                return quick
        enum = enumerate_group(spec, budget, strict=False)
    for g, w in enum.non_identity():
        if _near_identity(g):
            return Verdict(False, g, w, f"{format_word(w)} lies within {NEAR_IDENTITY_EPS} of the identity", budget)
    v = _rotation_power_witness(spec, enum)
    if v is not None:
        v.budget = budget
        return v
    v = _translation_rank_witness(enum)
    if v is not None:
        v.budget = budget
        return v
    if enum.truncated:
        return Verdict(False, None, None, f"more than {budget.max_elements} elements inside the ball", budget)
    scope = "finite group" if enum.complete else "discrete within budget"
    return Verdict(True, None, None, scope, budget)


def rotation_angle(linear) -> float | None:
    """Rotation angle in [0, pi] of an orientation-preserving linear part."""
    A = np.asarray(linear, dtype=float)
    if np.linalg.det(A) < 0:
        return None
    if A.shape == (2, 2):
        return abs(math.atan2(A[1, 0], A[0, 0]))
    c = (np.trace(A) - 1) / 2
    return math.acos(max(-1.0, min(1.0, c)))


def _near_returns(theta: float, kmax: int = MAX_POWER, eps: float = NEAR_IDENTITY_EPS):
    """Denominators k of continued-fraction convergents of theta/2pi, k <= kmax."""
    x = theta / (2 * math.pi)
    h0, h1, k0, k1 = 0, 1, 1, 0
    y = x
    out = []
    for _ in range(64):
        a = math.floor(y)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > kmax:
            break
        if k1 > 0:
            out.append(k1)
        frac = y - a
        if frac < 1e-15:
            break
        y = 1 / frac
    return out


def _finite_order(A: np.ndarray, max_order: int = 10**4, tol: float = 1e-10) -> bool:
    theta = rotation_angle(A)
    if theta is None:
        theta = rotation_angle(-A if A.shape[0] == 3 else A @ A)
        if theta is None:
            return True
    if theta < tol:
        return True
    turns = theta / (2 * math.pi)
    for k in _near_returns(theta, kmax=max_order):
        if abs(k * turns - round(k * turns)) < tol:
            return True
    return False


def _rotation_power_witness(spec: GroupSpec, enum: Enumeration) -> Verdict | None:
    """Powers g^k of an infinite-order element that come back near the identity."""
    candidates = list(zip(spec.generators, ((i + 1,) for i in range(len(spec.generators)))))
    candidates += [(g, w) for g, w in enum.non_identity() if len(w) <= 2]
    tried = set()
    for g, w in candidates:
        if g.is_exact:
            continue  # exact linear parts have finite order
        A = g.linear_array()
        if np.linalg.det(A) < 0 or _finite_order(A):
            continue
        key = g.key(False)
        if key in tried:
            continue
        tried.add(key)
        theta = rotation_angle(A)
        for k in _near_returns(theta):
            gk = mo.power(g, k)
            if _near_identity(gk):
                note = f"({format_word(w)})^{k} lies within {NEAR_IDENTITY_EPS} of the identity"
                return Verdict(False, gk, w * k if k <= 64 else None, note, extra={"power": k, "base_word": w})
    return None


def _translation_rank_witness(enum: Enumeration) -> Verdict | None:
    """Translation vectors of Q-rank larger than R-rank: the group is not discrete."""
    trans = []
    seen = set()
    for g, w in enum.non_identity():
        if g.is_translation():
            k = g.key(enum.exact)
            if k not in seen:
                seen.add(k)
                trans.append((g.translation, w))
    if len(trans) < 2:
        return None
    trans.sort(key=lambda t: sum(float(x) ** 2 for x in t[0]))
    basis: list = []
    for v, w in trans[:64]:
        cand = basis + [(v, w)]
        rel = mo.rationally_related([c[0] for c in cand])
        if not rel.related:
            basis = cand
    vecs = [b[0] for b in basis]
    r_rank = mo.real_rank([[float(x) for x in v] for v in vecs])
    if len(vecs) <= r_rank:
        return None
    combo = mo.near_zero_combination(vecs, NEAR_IDENTITY_EPS)
    note = f"translations of rank {len(vecs)} over Q span only dimension {r_rank}"
    extra = {"q_rank": len(vecs), "r_rank": r_rank, "basis_words": [b[1] for b in basis]}
    if combo is None:
        return Verdict(False, None, None, note + " (no short combination found)", extra=extra)
    dim = len(vecs[0])
    total = [Fraction(0) if all(mo.is_exact(x) for v in vecs for x in v) else 0.0] * dim
    for c, v in zip(combo, vecs):
        total = [t + c * x for t, x in zip(total, v)]
    witness = mo.translation(total)
    extra["coefficients"] = combo
    words = " + ".join(f"{c}*[{format_word(b[1])}]" for c, b in zip(combo, basis) if c)
    return Verdict(False, witness, None, f"{note}; translation {words} is near the identity", extra=extra)


def _sphere_power_witness(spec: GroupSpec, budget: EnumerationBudget, msg: str) -> Verdict:
    for i, g in enumerate(spec.generators):
        M = g.matrix()
        angles = np.angle(np.linalg.eigvals(M))
        ks = np.arange(1, MAX_POWER + 1)
        err = np.zeros(len(ks))
        for a in angles:
            phase = ks * a / (2 * math.pi)
            err = np.maximum(err, np.abs(phase - np.round(phase)))
        hits = np.nonzero(err * 2 * math.pi < NEAR_IDENTITY_EPS / 4)[0]
        for k in hits[:5]:
            gk = SO4_IDENTITY
            base, n = g, int(ks[k])
            while n:
                if n & 1:
                    gk = gk @ base
                base, n = base @ base, n >> 1
            if not gk.is_identity(1e-9) and _near_identity(gk):
                return Verdict(False, gk, None, f"g{i + 1}^{int(ks[k])} is near the identity", budget)
    return Verdict(False, None, None, f"closure not reached: {msg}", budget)
