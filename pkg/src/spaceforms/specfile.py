"""JSON group-spec files.

Euclidean generators::

    {"kind": "translation", "vector": [..]}
    {"kind": "rotation", "axis": [..], "angle": A}
    {"kind": "screw", "axis": [..], "angle": A, "pitch": r}      # pitch defaults to 1
    {"kind": "glide", "normal": [..], "vector": [..]}
    {"kind": "reflection", "normal": [..]}
    {"kind": "affine", "linear": [[..], [..], [..]], "translation": [..]}

with ``A = {"rational": [p, q]}`` (the angle 2 pi p/q) or ``{"radians": x}``.
Scalars are ints, floats or strings ``"p/q"`` / ``"a+b*sqrt3"``; strings and
ints stay exact.  Spherical generators are ``{"q1": [w,x,y,z], "q2": [..]}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import motions as mo
from . import quaternions as qt
from .exact import format_scalar, is_exact, parse_scalar
from .groups import GroupSpec
from .motions import Angle

UNIT_TOL = 1e-6
TOP_KEYS = {"ambient", "generators", "label", "identity"}
EUCLID_KINDS = {
    "translation": ({"vector"}, set()),
    "rotation": ({"axis", "angle"}, set()),
    "screw": ({"axis", "angle"}, {"pitch"}),
    "glide": ({"normal", "vector"}, set()),
    "reflection": ({"normal"}, set()),
    "affine": ({"linear", "translation"}, set()),
}

_KEY_ORDER = ["kind", "vector", "axis", "normal", "angle", "pitch", "linear", "translation", "q1", "q2"]


class SpecFileError(ValueError):
    """Malformed spec file; ``field`` is a path such as ``generators[1].angle``."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field {field}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.field = field
        self.line = line


def _scalar(x, path: str):
    try:
        return parse_scalar(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecFileError(str(exc), path) from None


def _vector(x, path: str, n: int = 3) -> tuple:
    if not isinstance(x, list) or len(x) != n:
        raise SpecFileError(f"expected a list of {n} scalars", path)
    return tuple(_scalar(v, f"{path}[{i}]") for i, v in enumerate(x))


def _angle(x, path: str) -> Angle:
    if not isinstance(x, dict) or len(x) != 1:
        raise SpecFileError('expected {"rational": [p, q]} or {"radians": x}', path)
    (key, val), = x.items()
    if key == "rational":
        if (not isinstance(val, list) or len(val) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in val)):
            raise SpecFileError("expected two integers [p, q]", f"{path}.rational")
        if val[1] == 0:
            raise SpecFileError("zero denominator", f"{path}.rational")
        return Angle.rational(val[0], val[1])
    if key == "radians":
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise SpecFileError("expected a number", f"{path}.radians")
        return Angle.radians(float(val))
    raise SpecFileError(f"unknown key {key!r}", f"{path}.{key}")


def _dump_angle(a: Angle) -> dict:
    if a.is_rational:
        return {"rational": [a.p, a.q]}
    return {"radians": a.value}


def _dump_vec(v) -> list:
    return [format_scalar(x) for x in v]


def _check_keys(obj: dict, required: set, optional: set, path: str) -> None:
    for k in obj:
        if k not in required | optional:
            raise SpecFileError(f"unknown key {k!r}", f"{path}.{k}" if path else k)
    for k in sorted(required - obj.keys()):
        raise SpecFileError("missing key", f"{path}.{k}" if path else k)


def _parse_euclid(g, path: str) -> dict:
    if not isinstance(g, dict):
        raise SpecFileError("expected an object", path)
    kind = g.get("kind")
    if kind not in EUCLID_KINDS:
        raise SpecFileError(f"unknown kind {kind!r}", f"{path}.kind")
    req, opt = EUCLID_KINDS[kind]
    _check_keys(g, req | {"kind"}, opt, path)
    out = {"kind": kind}
    for k in ("vector", "axis", "normal", "translation"):
        if k in g:
            out[k] = _vector(g[k], f"{path}.{k}")
    if "angle" in g:
        out["angle"] = _angle(g["angle"], f"{path}.angle")
    if kind == "screw":
        out["pitch"] = _scalar(g.get("pitch", 1), f"{path}.pitch")
    if kind == "affine":
        rows = g["linear"]
        if not isinstance(rows, list) or len(rows) != 3:
            raise SpecFileError("expected a 3x3 matrix", f"{path}.linear")
        out["linear"] = tuple(_vector(r, f"{path}.linear[{i}]") for i, r in enumerate(rows))
    for k in ("axis", "normal"):
        if k in out and all(
            (x == 0) if is_exact(x) else abs(x) < 1e-12 for x in out[k]
        ):
            raise SpecFileError("zero vector", f"{path}.{k}")
    try:
        _build_euclid(out)
    except (ValueError, ArithmeticError) as exc:
        raise SpecFileError(str(exc), path) from None
    return out


def _build_euclid(g: dict) -> mo.Isometry:
    kind = g["kind"]
    if kind == "translation":
        return mo.translation(g["vector"])
    if kind == "rotation":
        return mo.rotation(g["axis"], g["angle"])
    if kind == "screw":
        return mo.screw(g["axis"], g["angle"], g["pitch"])
    if kind == "glide":
        return mo.glide(g["normal"], g["vector"])
    if kind == "reflection":
        return mo.reflection(g["normal"])
    return mo.from_matrix(g["linear"], g["translation"])


def _parse_sphere(g, path: str) -> dict:
    if not isinstance(g, dict):
        raise SpecFileError("expected an object", path)
    _check_keys(g, {"q1", "q2"}, set(), path)
    out = {}
    for k in ("q1", "q2"):
        v = _vector(g[k], f"{path}.{k}", 4)
        n = float(np.linalg.norm([float(x) for x in v]))
        if abs(n - 1) > UNIT_TOL:
            raise SpecFileError(f"quaternion is not a unit quaternion (norm {n:.9g})", f"{path}.{k}")
        out[k] = v
    return out


def _quat(v) -> qt.Quaternion:
    return qt.Quaternion.from_array([float(x) for x in v]).normalized()


def _build_sphere(g: dict) -> qt.SO4Element:
    return qt.phi_cover(_quat(g["q1"]), _quat(g["q2"]))


@dataclass(frozen=True)
class GroupSpecFile:
    ambient: str
    generators: tuple
    label: str = ""
    identity: bool = False

    def to_group_spec(self) -> GroupSpec:
        build = _build_sphere if self.ambient == "sphere3" else _build_euclid
        return GroupSpec(self.ambient, [build(g) for g in self.generators], self.label,
                         self.identity or not self.generators)

    def to_dict(self) -> dict:
        gens = []
        for g in self.generators:
            d = {}
            for k in sorted(g, key=_KEY_ORDER.index):
                v = g[k]
                if k == "kind":
                    d[k] = v
                elif k == "angle":
                    d[k] = _dump_angle(v)
                elif k == "pitch":
                    d[k] = format_scalar(v)
                elif k == "linear":
                    d[k] = [_dump_vec(r) for r in v]
                else:
                    d[k] = _dump_vec(v)
            gens.append(d)
        out = {"ambient": self.ambient, "generators": gens}
        if self.label:
            out["label"] = self.label
        if self.identity:
            out["identity"] = True
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def parse_dict(doc) -> GroupSpecFile:
    if not isinstance(doc, dict):
        raise SpecFileError("top level must be an object")
    _check_keys(doc, {"ambient", "generators"}, TOP_KEYS - {"ambient", "generators"}, "")
    ambient = doc["ambient"]
    if ambient not in ("euclidean3", "sphere3"):
        raise SpecFileError(f"unknown ambient {ambient!r}", "ambient")
    gens = doc["generators"]
    if not isinstance(gens, list):
        raise SpecFileError("expected a list", "generators")
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise SpecFileError("expected a string", "label")
    identity = doc.get("identity", False)
    if not isinstance(identity, bool):
        raise SpecFileError("expected true or false", "identity")
    if not gens and not identity:
        raise SpecFileError("empty generator list needs \"identity\": true", "generators")
    parse = _parse_sphere if ambient == "sphere3" else _parse_euclid
    parsed = tuple(parse(g, f"generators[{i}]") for i, g in enumerate(gens))
    return GroupSpecFile(ambient, parsed, label, identity)


def loads(text: str) -> GroupSpecFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(exc.msg, line=exc.lineno) from None
    return parse_dict(doc)


def load(path) -> GroupSpecFile:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def from_group_spec(spec: GroupSpec) -> GroupSpecFile:
    """Serialise any GroupSpec; Euclidean generators become ``affine`` entries."""
    gens = []
    for g in spec.generators:
        if spec.ambient == "sphere3":
            gens.append({"q1": tuple(float(x) for x in g.q1.as_array()),
                         "q2": tuple(float(x) for x in g.q2.as_array())})
        elif spec.ambient == "euclidean3":
            gens.append({"kind": "affine", "linear": tuple(tuple(r) for r in g.linear),
                         "translation": tuple(g.translation)})
        else:
            raise SpecFileError(f"ambient {spec.ambient!r} has no file form", "ambient")
    return GroupSpecFile(spec.ambient, tuple(gens), spec.label, spec.identity)

