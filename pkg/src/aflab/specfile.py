"""Shape-spec documents: strict JSON descriptions of shapes.

Families and their fields (``family`` is always required)::

    ball              dim (1|2, default 2), radius, center, representation
                      (support | radial | parametric, default support)
    ellipse           a, b, center, representation (parametric | radial | support)
    support_harmonic  dim, radius (base value, default 1), coefficients, center
    radial_harmonic   dim, radius (base value, default 1), coefficients, center
    parametric_curve  x, y (expressions in t), center

``coefficients`` is a list of ``{"degree": l, "order": m, "amplitude": a}``
objects in the orthonormal real spherical-harmonic basis (on S^1 the
orders are +-l: cos(l t)/sqrt(pi) for +l, sin(l t)/sqrt(pi) for -l).
Unknown fields are rejected.  Convexity and star-shapedness are checked
when the shape is sampled, not here.
"""

import json
import math
from dataclasses import dataclass, field

from .errors import ConfigurationError, UsageError
from .expr import parse_expression
from .geometry.harmonics import HarmonicField
from .geometry.shapes import ParametricCurve, RadialGraph, SupportBody, ball, ellipse

FIELDS = {
    "ball": {"family", "dim", "radius", "center", "representation"},
    "ellipse": {"family", "dim", "a", "b", "center", "representation"},
    "support_harmonic": {"family", "dim", "radius", "coefficients", "center"},
    "radial_harmonic": {"family", "dim", "radius", "coefficients", "center"},
    "parametric_curve": {"family", "dim", "x", "y", "center"},
}
FAMILIES = tuple(FIELDS)


class SpecError(UsageError):
    """Invalid shape-spec document."""


@dataclass(frozen=True)
class ShapeSpecFile:
    family: str
    dim: int
    params: dict = field(default_factory=dict)

    def to_shape(self):
        return build_shape(self)


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise SpecError(f"duplicate field {key!r}")
        out[key] = value
    return out


def _reject_constant(name):
    raise SpecError(f"non-finite number {name} is not allowed")


def _load(document):
    try:
        return json.loads(document, object_pairs_hook=_no_duplicates, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON at offset {exc.pos}: {exc.msg}") from None


def _number(doc, key, default=None):
    if key not in doc:
        if default is None:
            raise SpecError(f"missing field {key!r}")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise SpecError(f"field {key!r} must be a finite number")
    return float(v)


def _positive(doc, key, default=None):
    v = _number(doc, key, default)
    if not v > 0:
        raise SpecError(f"{key} must be positive")
    return v


def _dim(doc, default):
    v = doc.get("dim", default)
    if isinstance(v, bool) or v not in (1, 2):
        raise SpecError(f"dim must be 1 or 2, got {v!r}")
    return int(v)


def _center(doc, dim):
    if "center" not in doc:
        return None
    c = doc["center"]
    if not isinstance(c, list) or len(c) != dim + 1:
        raise SpecError(f"center must be a list of {dim + 1} numbers")
    return [_number({"center": x}, "center") for x in c]


def _coefficients(doc, dim):
    terms = []
    for i, item in enumerate(doc.get("coefficients", [])):
        if not isinstance(item, dict):
            raise SpecError(f"coefficient {i} must be an object")
        extra = sorted(set(item) - {"degree", "order", "amplitude"})
        if extra:
            raise SpecError(f"unknown fields in coefficient {i}: {', '.join(extra)}")
        l, m = item.get("degree"), item.get("order")
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (l, m)):
            raise SpecError(f"coefficient {i}: degree and order must be integers")
        terms.append((l, m, _number(item, "amplitude")))
    try:
        HarmonicField(dim, 1.0, tuple(terms))
    except ConfigurationError as exc:
        raise SpecError(str(exc)) from None
    return tuple(terms)


def _expression(doc, key):
    if not isinstance(doc.get(key), str):
        raise SpecError(f"field {key!r} must be an expression string")
    return parse_expression(doc[key])


def parse_shape_spec(document):
    """Parse and validate a shape-spec JSON document."""
    doc = _load(document) if isinstance(document, (str, bytes)) else document
    if not isinstance(doc, dict):
        raise SpecError("a shape spec must be a JSON object")
    family = doc.get("family")
    if family is None:
        raise SpecError("missing field 'family'")
    if family not in FIELDS:
        raise SpecError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    extra = sorted(set(doc) - FIELDS[family])
    if extra:
        raise SpecError(f"unknown fields for {family}: {', '.join(extra)}")

    if family == "ball":
        dim = _dim(doc, 2)
        rep = doc.get("representation", "support")
        if rep not in ("support", "radial", "parametric") or (rep == "parametric" and dim != 1):
            raise SpecError(f"bad representation {rep!r} for a dim-{dim} ball")
        params = {"radius": _positive(doc, "radius"), "representation": rep}
    elif family == "ellipse":
        dim = _dim(doc, 1)
        if dim != 1:
            raise SpecError("ellipse needs dim 1")
        rep = doc.get("representation", "parametric")
        if rep not in ("support", "radial", "parametric"):
            raise SpecError(f"bad representation {rep!r}")
        params = {"a": _positive(doc, "a"), "b": _positive(doc, "b"), "representation": rep}
    elif family == "parametric_curve":
        dim = _dim(doc, 1)
        if dim != 1:
            raise SpecError("parametric_curve needs dim 1")
        params = {"x": _expression(doc, "x"), "y": _expression(doc, "y")}
    else:
        dim = _dim(doc, 2)
        params = {"radius": _positive(doc, "radius", 1.0), "coefficients": _coefficients(doc, dim)}
    params["center"] = _center(doc, dim)
    return ShapeSpecFile(family, dim, params)


def build_shape(spec):
    p = spec.params
    if spec.family == "ball":
        return ball(p["radius"], p["center"], spec.dim, p["representation"])
    if spec.family == "ellipse":
        return ellipse(p["a"], p["b"], p["center"], p["representation"])
    if spec.family == "parametric_curve":
        return ParametricCurve(p["x"], p["y"], p["center"], name="parametric_curve")
    fieldv = HarmonicField(spec.dim, p["radius"], p["coefficients"])
    if spec.family == "support_harmonic":
        return SupportBody(fieldv, p["center"], name="support_harmonic")
    return RadialGraph(fieldv, p["center"], name="radial_harmonic")


def load_shape(path):
    """Read a spec file and build its shape."""
    with open(path, "rb") as fh:
        return parse_shape_spec(fh.read()).to_shape()
