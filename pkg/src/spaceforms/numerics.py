"""Finite-difference verification of harmonic morphisms into surfaces.

A map is checked through the two defining properties: horizontal weak
conformality (the differential restricted to the complement of its kernel is
a multiple ``lambda`` of an isometry) and harmonicity, tested by pulling back
harmonic functions of the target and applying the Laplace-Beltrami operator
of the domain.  Fibres of the standard maps are also checked to be geodesics.

Domain points are numpy arrays: R^3 and the upper half-space use
``(x1, x2, x3)``; S^3 uses ``(Re z1, Im z1, Re z2, Im z2)``.  Map values are
homogeneous pairs ``(num, den)`` of complex numbers; plane targets always
have ``den == 1`` while sphere targets switch between the charts ``num/den``
and ``den/num`` at ``|w| = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

H_FIRST = 1e-5
H_LAPLACE = 1e-3
H_ORDER = 2e-2
ORDER_FLOOR = 1e-9
RANK_TOL = 1e-8


class CriticalPointError(ValueError):
    pass


# --- the standard maps ----------------------------------------------------------

def eval_pi1(x: Sequence[float]) -> tuple[float, float]:
    return (x[0], x[1])


def eval_hopf(z1: complex, z2: complex, tol: float = 1e-9) -> complex:
    """``z1 / z2`` with ``inf`` on the fibre z2 = 0."""
    r = abs(z1) ** 2 + abs(z2) ** 2
    if abs(r - 1) > tol:
        raise ValueError(f"point is off the unit sphere (|z|^2 = {r})")
    if z2 == 0:
        return complex(math.inf, 0)
    return z1 / z2


def eval_pi4(x: Sequence[float]) -> complex:
    if x[2] <= 0:
        raise ValueError("pi4 is defined on the upper half-space x3 > 0")
    return complex(x[0], x[1])


def eval_quotient_hm(spec, x: Sequence[float]) -> complex:
    """``[(z, t)] -> z^q`` for a group generated by one screw motion along e3."""
    q = screw_order(spec)
    return complex(x[0], x[1]) ** q


def screw_order(spec) -> int:
    """q for a group generated by a screw motion along e3 through 2*pi*p/q."""
    if spec.ambient != "euclidean3" or len(spec.generators) != 1:
        raise ValueError("expected a group generated by one screw motion")
    g = spec.generators[0]
    A = g.linear_array()
    if np.abs(A[:, 2] - [0, 0, 1]).max() > 1e-12 or np.linalg.det(A) < 0:
        raise ValueError("generator is not a screw motion along e3")
    if abs(float(g.translation[0])) > 1e-12 or abs(float(g.translation[1])) > 1e-12:
        raise ValueError("screw axis must be the x3-axis")
    theta = math.atan2(A[1, 0], A[0, 0]) % (2 * math.pi)
    for q in range(1, 10**4):
        k = theta * q / (2 * math.pi)
        if abs(k - round(k)) < 1e-9:
            return q
    raise ValueError("screw angle is not a rational multiple of 2*pi")


# --- charted maps ---------------------------------------------------------------

@dataclass
class ChartedMap:
    name: str
    domain: str  # euclidean3 | sphere3 | hyperbolic3
    target: str  # plane | sphere
    pair: Callable[[np.ndarray], tuple[complex, complex]]
    radius: float = 1.0
    critical_distance: Callable[[np.ndarray], float] | None = None
    fibre: Callable[[np.ndarray, float], np.ndarray] | None = None
    expected_dilation: Callable[[np.ndarray], float] | None = None
    notes: dict = field(default_factory=dict)

    def chart(self, x: np.ndarray) -> int:
        if self.target == "plane":
            return 0
        n, d = self.pair(x)
        return 0 if abs(n) <= abs(d) else 1

    def value(self, x: np.ndarray, chart: int = 0) -> complex:
        n, d = self.pair(x)
        if chart == 0:
            return n / d
        return d / n

    def metric_factor(self, w: complex) -> float:
        """Conformal factor of the target metric in the chart coordinate."""
        if self.target == "plane":
            return 1.0
        return 2 * self.radius / (1 + abs(w) ** 2)

    def sphere_point(self, x: np.ndarray) -> np.ndarray:
        """Target point on the unit S^2 (chart independent)."""
        n, d = self.pair(x)
        if self.target == "plane":
            w = n / d
            return np.array([w.real, w.imag, 0.0])
        s = abs(n) ** 2 + abs(d) ** 2
        p = n * np.conj(d)
        return np.array([2 * p.real, 2 * p.imag, abs(n) ** 2 - abs(d) ** 2]) / s

    def check_regular(self, x: np.ndarray, margin: float = 0.0) -> None:
        if self.critical_distance is not None and self.critical_distance(x) <= margin:
            raise CriticalPointError(
                f"{self.name}: point within {margin:g} of the critical set"
            )


def _hopf_pair(x):
    return complex(x[0], x[1]), complex(x[2], x[3])


def _hopf_fibre(x, t):
    z1, z2 = complex(x[0], x[1]), complex(x[2], x[3])
    e = complex(math.cos(t), math.sin(t))
    a, b = e * z1, e * z2
    return np.array([a.real, a.imag, b.real, b.imag])


def _vertical_fibre(x, t):
    return np.array([x[0], x[1], x[2] + t])


def _hyperbolic_fibre(x, s):
    """Unit-speed vertical geodesic of the upper half-space."""
    return np.array([x[0], x[1], x[2] * math.exp(s)])


def make_map(name: str, radius: float = 1.0) -> ChartedMap:
    """Built-in maps: ``pi1``, ``hopf``, ``pi4`` and ``screw:q``."""
    if name == "pi1":
        return ChartedMap(
            "pi1", "euclidean3", "plane", lambda x: (complex(x[0], x[1]), 1.0),
            fibre=_vertical_fibre, expected_dilation=lambda x: 1.0,
        )
    if name == "hopf":
        return ChartedMap(
            "hopf", "sphere3", "sphere", _hopf_pair, radius=radius,
            fibre=_hopf_fibre, expected_dilation=lambda x: 2.0 * radius,
        )
    if name == "pi4":
        return ChartedMap(
            "pi4", "hyperbolic3", "plane", lambda x: (eval_pi4(x), 1.0),
            critical_distance=lambda x: x[2], fibre=_hyperbolic_fibre,
            expected_dilation=lambda x: float(x[2]),
        )
    if name.startswith("screw:"):
        try:
            q = int(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad screw order in {name!r}") from None
        if q < 1:
            raise ValueError("screw order must be positive")
        crit = (lambda x: math.hypot(x[0], x[1])) if q > 1 else None
        return ChartedMap(
            name, "euclidean3", "plane", lambda x: (complex(x[0], x[1]) ** q, 1.0),
            critical_distance=crit, fibre=_vertical_fibre,
            expected_dilation=lambda x: q * math.hypot(x[0], x[1]) ** (q - 1),
            notes={"q": q},
        )
    raise ValueError(f"unknown map {name!r}; expected pi1, hopf, pi4 or screw:q")


MAP_NAMES = ("pi1", "hopf", "pi4", "screw:q")


def compose_moebius(m: ChartedMap, coeffs: Sequence[complex]) -> ChartedMap:
    """Postcompose with ``w -> (a w + b) / (c w + d)``."""
    a, b, c, d = (complex(v) for v in coeffs)
    if abs(a * d - b * c) < 1e-12:
        raise ValueError("Moebius coefficients must satisfy ad - bc != 0")
    if m.target == "sphere":
        def pair(x):
            n, e = m.pair(x)
            return a * n + b * e, c * n + d * e
    else:
        def pair(x):
            n, e = m.pair(x)
            w = n / e
            den = c * w + d
            if abs(den) < 1e-9:
                raise CriticalPointError("pole of the Moebius map")
            return (a * w + b) / den, 1.0
    return ChartedMap(
        f"moebius({m.name})", m.domain, m.target, pair, m.radius,
        m.critical_distance, m.fibre, None, dict(m.notes),
    )


# --- tangent frames and curves ----------------------------------------------------

def tangent_frame(domain: str, x: np.ndarray) -> np.ndarray:
    """Rows form an orthonormal basis of T_x M for the domain metric."""
    if domain == "euclidean3":
        return np.eye(3)
    if domain == "hyperbolic3":
        return np.eye(3) * x[2]
    if domain == "sphere3":
        M = np.column_stack([x, np.eye(4)])
        Q, _ = np.linalg.qr(M)
        return Q[:, 1:4].T
    raise ValueError(f"unknown domain {domain!r}")


def _move(domain: str, x: np.ndarray, v: np.ndarray, s: float) -> np.ndarray:
    if domain == "sphere3":
        return math.cos(s) * x + math.sin(s) * v
    return x + s * v


# --- conformality ---------------------------------------------------------------

@dataclass
class Dilation:
    value: float
    point: np.ndarray
    defect: float
    full_norm_value: float
    singular_values: tuple
    step: float


def differential(m: ChartedMap, x: np.ndarray, h: float = H_FIRST, chart: int | None = None) -> np.ndarray:
    """2 x 3 matrix of the differential in an orthonormal frame, in target-metric units."""
    chart = m.chart(x) if chart is None else chart
    w0 = m.value(x, chart)
    frame = tangent_frame(m.domain, x)
    cols = []
    for v in frame:
        dw = (m.value(_move(m.domain, x, v, h), chart) - m.value(_move(m.domain, x, v, -h), chart)) / (2 * h)
        cols.append([dw.real, dw.imag])
    return m.metric_factor(w0) * np.array(cols).T


def check_horizontal_conformality(m: ChartedMap, x: Sequence[float], h: float = H_FIRST) -> Dilation:
    x = np.asarray(x, dtype=float)
    m.check_regular(x)
    J = differential(m, x, h)
    _, S, Vt = np.linalg.svd(J)
    H = Vt[:2].T  # orthonormal basis of the horizontal space
    JH = J @ H
    G = JH.T @ JH
    lam2 = np.trace(G) / 2
    if lam2 <= 0 or S[1] <= RANK_TOL * max(S[0], 1.0):
        raise CriticalPointError(f"{m.name}: differential has rank < 2 at a regular point")
    defect = float(np.linalg.norm(G - lam2 * np.eye(2)) / lam2)
    full = math.sqrt(float(np.sum(J * J)) / 2)
    return Dilation(math.sqrt(lam2), x, defect, full, tuple(float(s) for s in S), h)


def dilation(m: ChartedMap, x: Sequence[float], h: float = H_FIRST) -> float:
    """Dilation from the full differential norm; valid at critical points too."""
    J = differential(m, np.asarray(x, dtype=float), h)
    return math.sqrt(float(np.sum(J * J)) / 2)


# --- harmonicity ------------------------------------------------------------------

@dataclass(frozen=True)
class HarmonicTest:
    name: str
    f: Callable[[complex], float]
    singularity: complex | None = None


def builtin_tests() -> list[HarmonicTest]:
    c = complex(2.5, -1.5)
    return [
        HarmonicTest("Re(w)", lambda w: w.real),
        HarmonicTest("Im(w^2)", lambda w: (w * w).imag),
        HarmonicTest("Re(w^3)", lambda w: (w ** 3).real),
        HarmonicTest("log|w-c|", lambda w: math.log(abs(w - c)), c),
    ]


def _composite(m: ChartedMap, f: HarmonicTest, chart: int):
    if m.domain == "sphere3":
        def u(y):
            return f.f(m.value(y / np.linalg.norm(y), chart))
    else:
        def u(y):
            return f.f(m.value(y, chart))
    return u


def _laplacian_plain(u, x: np.ndarray, h: float) -> tuple[float, np.ndarray]:
    n = len(x)
    u0 = u(x)
    E = np.eye(n)
    second = np.array([(u(x + h * E[i]) + u(x - h * E[i]) - 2 * u0) / (h * h) for i in range(n)])
    return float(second.sum()), second


def _hessian_norm(u, x: np.ndarray, h: float, diag: np.ndarray) -> float:
    n = len(x)
    E = np.eye(n)
    total = float(np.sum(diag ** 2))
    for i in range(n):
        for j in range(i + 1, n):
            mixed = (u(x + h * (E[i] + E[j])) - u(x + h * (E[i] - E[j]))
                     - u(x - h * (E[i] - E[j])) + u(x - h * (E[i] + E[j]))) / (4 * h * h)
            total += 2 * mixed ** 2
    return math.sqrt(total)


def _first(u, x: np.ndarray, i: int, h: float) -> float:
    e = np.zeros(len(x))
    e[i] = 1.0
    return (u(x + h * e) - u(x - h * e)) / (2 * h)


def laplace_beltrami(m: ChartedMap, f: HarmonicTest, x: np.ndarray, h: float = H_LAPLACE,
                     richardson: bool = True) -> tuple[float, float]:
    """``(Delta_M (f o m)(x), Hessian scale)`` by central differences."""
    chart = m.chart(x)
    u = _composite(m, f, chart)

    def lap(step):
        L, diag = _laplacian_plain(u, x, step)
        if m.domain == "hyperbolic3":
            L = x[2] ** 2 * L - x[2] * _first(u, x, 2, step)
        return L, diag

    L1, diag = lap(h)
    if richardson:
        L2, _ = lap(h / 2)
        L = (4 * L2 - L1) / 3
    else:
        L = L1
    scale = _hessian_norm(u, x, h, diag)
    if m.domain == "hyperbolic3":
        scale *= x[2] ** 2
    return L, scale


def check_harmonicity(m: ChartedMap, f: HarmonicTest, x: Sequence[float], h: float = H_LAPLACE,
                      richardson: bool = True) -> float:
    """Relative residual ``|Delta(f o m)| / max(1, |Hess|)``."""
    x = np.asarray(x, dtype=float)
    m.check_regular(x, margin=10 * h)
    if f.singularity is not None:
        w = m.value(x, m.chart(x))
        if abs(w - f.singularity) < 10 * h * (1 + abs(w)) or abs(w - f.singularity) < 0.1:
            raise CriticalPointError(f"test function {f.name} is singular near the image point")
    L, scale = laplace_beltrami(m, f, x, h, richardson)
    return abs(L) / max(1.0, scale)


def convergence_order(values: tuple[float, float], floor: float = ORDER_FLOOR) -> float | None:
    """Observed order log2(r(h) / r(h/2)); ``None`` when both are at the noise floor."""
    a, b = values
    if a < floor and b < floor:
        return None
    if b <= 0:
        return math.inf
    return math.log2(a / b)


def harmonicity_order(m: ChartedMap, f: HarmonicTest, x: Sequence[float], h: float = H_ORDER) -> float | None:
    r1 = check_harmonicity(m, f, x, h, richardson=False)
    r2 = check_harmonicity(m, f, x, h / 2, richardson=False)
    return convergence_order((r1, r2))


def conformality_order(m: ChartedMap, x: Sequence[float], h: float = H_ORDER) -> float | None:
    """Order of the error in the dilation (or the defect when no exact value is known)."""
    x = np.asarray(x, dtype=float)
    def err(step):
        d = check_horizontal_conformality(m, x, step)
        if m.expected_dilation is not None:
            return abs(d.value - m.expected_dilation(x)) + d.defect
        return d.defect
    return convergence_order((err(h), err(h / 2)))


# --- fibres -----------------------------------------------------------------------

def _second_derivative(curve, t: float, h: float) -> np.ndarray:
    def d2(step):
        return (curve(t + step) + curve(t - step) - 2 * curve(t)) / (step * step)
    return (4 * d2(h / 2) - d2(h)) / 3


def hyperbolic_distance(p: np.ndarray, q: np.ndarray) -> float:
    return math.acosh(1 + float(np.sum((p - q) ** 2)) / (2 * p[2] * q[2]))


def check_fiber_geodesic(m: ChartedMap, x: Sequence[float], samples: int = 5, h: float = 1e-3) -> float:
    """Largest deviation of the fibre through x from the geodesic equation."""
    x = np.asarray(x, dtype=float)
    if m.fibre is None:
        raise ValueError(f"{m.name} has no declared fibres")
    curve = lambda t: m.fibre(x, t)  # noqa: E731
    ts = np.linspace(-0.5, 0.5, samples)
    worst = 0.0
    for t in ts:
        acc = _second_derivative(curve, float(t), h)
        if m.domain == "euclidean3":
            d = float(np.linalg.norm(acc))
        elif m.domain == "sphere3":
            d = float(np.linalg.norm(acc + curve(float(t))))
        else:
            p = curve(float(t))
            d1 = lambda k: (curve(t + k) - curve(t - k)) / (2 * k)  # noqa: E731
            vel = (4 * d1(h / 2) - d1(h)) / 3
            d = abs(acc[2] - vel[2] ** 2 / p[2]) / p[2]
            d = max(d, abs(acc[0]), abs(acc[1]))
        worst = max(worst, d)
    if m.domain == "hyperbolic3":
        p, mid, q = curve(-0.5), curve(0.0), curve(0.5)
        gap = hyperbolic_distance(p, mid) + hyperbolic_distance(mid, q) - hyperbolic_distance(p, q)
        worst = max(worst, abs(gap))
    return worst


def fibre_constancy(m: ChartedMap, x: Sequence[float], ts: Sequence[float] = (0.7, 1.9, -2.3)) -> float:
    """Largest chordal distance on S^2 between target points along one fibre."""
    x = np.asarray(x, dtype=float)
    base = m.sphere_point(x)
    return max(float(np.linalg.norm(m.sphere_point(m.fibre(x, t)) - base)) for t in ts)


# --- critical points --------------------------------------------------------------

@dataclass
class DecayProfile:
    q: int
    radii: tuple
    dilations: tuple
    exponent: float
    expected: float


def check_critical_dilation(q: int, radii: Sequence[float] = (0.1, 0.05, 0.025),
                            direction: Sequence[float] = (1.0, 0.0), height: float = 0.0) -> DecayProfile:
    """Fit ``lambda ~ C r^e`` along a ray approaching the axis of ``z -> z^q``."""
    m = make_map(f"screw:{q}")
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    lams = []
    for r in radii:
        x = np.array([r * d[0], r * d[1], height])
        lams.append(dilation(m, x, h=min(H_FIRST, r * 1e-4)))
    slope = np.polyfit(np.log(radii), np.log(lams), 1)[0]
    return DecayProfile(q, tuple(radii), tuple(lams), float(slope), float(q - 1))


# --- sampling and batch verification --------------------------------------------------

def sample_points(m: ChartedMap, n: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Seeded random regular points of the map's domain."""
    pts = []
    while len(pts) < n:
        if m.domain == "sphere3":
            v = rng.normal(size=4)
            x = v / np.linalg.norm(v)
        elif m.domain == "hyperbolic3":
            x = np.array([rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.5, 3.0)])
        else:
            x = rng.uniform(-2, 2, size=3)
        if m.critical_distance is not None and m.critical_distance(x) < 0.2:
            continue
        pts.append(x)
    return pts


@dataclass
class PointResidual:
    point: tuple
    dilation: float
    expected_dilation: float | None
    conf_defect: float
    harm_residuals: dict
    geodesic_defect: float
    conf_order: float | None
    harm_orders: dict


@dataclass
class Tolerances:
    conformality: float = 1e-5
    harmonicity: float = 1e-4
    geodesy: float = 1e-6
    min_order: float = 1.8


def evaluate_point(m: ChartedMap, x: np.ndarray, tests: list[HarmonicTest] | None = None,
                   orders: bool = True) -> PointResidual:
    tests = tests or builtin_tests()
    d = check_horizontal_conformality(m, x)
    harm, horders = {}, {}
    for f in tests:
        try:
            harm[f.name] = check_harmonicity(m, f, x)
            if orders:
                horders[f.name] = harmonicity_order(m, f, x)
        except CriticalPointError:
            continue
    geo = check_fiber_geodesic(m, x) if m.fibre is not None else 0.0
    exp = m.expected_dilation(x) if m.expected_dilation is not None else None
    corder = conformality_order(m, x) if orders else None
    return PointResidual(tuple(float(v) for v in x), d.value, exp, d.defect, harm, geo, corder, horders)


@dataclass
class VerifySummary:
    map_name: str
    seed: int
    rows: list
    tolerances: Tolerances
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def max(self, attr: str) -> float:
        vals = [getattr(r, attr) for r in self.rows]
        return max(vals) if vals else 0.0

    def max_harm(self) -> float:
        return max((v for r in self.rows for v in r.harm_residuals.values()), default=0.0)

    def max_dilation_error(self) -> float:
        return max((abs(r.dilation - r.expected_dilation) for r in self.rows
                    if r.expected_dilation is not None), default=0.0)

    def min_order(self) -> float | None:
        vals = [o for r in self.rows for o in [r.conf_order, *r.harm_orders.values()] if o is not None]
        return min(vals) if vals else None


def verify_map(m: ChartedMap, samples: int = 100, seed: int = 0, tol: Tolerances | None = None,
               orders: bool = True) -> VerifySummary:
    tol = tol or Tolerances()
    rng = np.random.default_rng(seed)
    rows, failures = [], []
    for x in sample_points(m, samples, rng):
        r = evaluate_point(m, x, orders=orders)
        rows.append(r)
        where = f"at {np.round(x, 6).tolist()}"
        if r.conf_defect > tol.conformality:
            failures.append(f"conformality defect {r.conf_defect:.3g} {where}")
        if r.expected_dilation is not None and abs(r.dilation - r.expected_dilation) > tol.conformality * max(1.0, r.expected_dilation):
            failures.append(f"dilation {r.dilation:.12g} != {r.expected_dilation:.12g} {where}")
        for name, v in r.harm_residuals.items():
            if v > tol.harmonicity:
                failures.append(f"harmonicity residual {v:.3g} for {name} {where}")
        if r.geodesic_defect > tol.geodesy:
            failures.append(f"fibre geodesic defect {r.geodesic_defect:.3g} {where}")
        for name, o in [("conformality", r.conf_order), *r.harm_orders.items()]:
            if o is not None and o < tol.min_order:
                failures.append(f"convergence order {o:.3g} for {name} {where}")
    return VerifySummary(m.name, seed, rows, tol, failures)


# --- plot data ------------------------------------------------------------------------

def hopf_point(eta: float, xi1: float, xi2: float) -> np.ndarray:
    """Point of S^3 in Hopf coordinates: (cos eta e^{i xi1}, sin eta e^{i xi2})."""
    return np.array([math.cos(eta) * math.cos(xi1), math.cos(eta) * math.sin(xi1),
                     math.sin(eta) * math.cos(xi2), math.sin(eta) * math.sin(xi2)])
