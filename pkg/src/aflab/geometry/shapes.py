"""Shape descriptions: support bodies, radial graphs and parametric curves.

Every shape carries a ``center`` offset; sampling builds the surface about
its own center and then translates by it.  For a support body this is the
same as replacing h by h + <center, xi>.
"""

from dataclasses import dataclass, replace

import numpy as np

from ..errors import ConfigurationError, ConvexityError, UsageError
from ..expr import parse_expression
from .harmonics import HarmonicField, degree_one_field


@dataclass(frozen=True, eq=False)
class FunctionField:
    """A scalar field given as a callable of unit vectors, shape (N, n+1) -> (N,)."""

    dim: int
    fn: object
    name: str = "function"

    def grid_values(self, grid):
        return np.asarray(self.fn(grid.nodes), dtype=float)


@dataclass(frozen=True, eq=False)
class GridField:
    """Raw node values tied to one grid."""

    dim: int
    values: np.ndarray
    grid: object

    def grid_values(self, grid):
        if not grid.same_as(self.grid):
            raise UsageError(f"grid field lives on {self.grid.label}, asked for {grid.label}")
        return np.asarray(self.values, dtype=float)


def field_values(f, grid):
    """Node values of any supported field type on ``grid``."""
    if isinstance(f, HarmonicField):
        return f.values(grid.angles)
    return f.grid_values(grid)


def field_is_analytic(f):
    return isinstance(f, HarmonicField)


def _vec(center, dim):
    if center is None:
        return np.zeros(dim + 1)
    c = np.asarray(center, dtype=float).reshape(-1)
    if c.size != dim + 1:
        raise ConfigurationError(f"center must have {dim + 1} components, got {c.size}")
    return c


@dataclass(frozen=True, eq=False)
class SupportBody:
    """Convex body with support function h on S^dim (about ``center``)."""

    h: object
    center: np.ndarray = None
    name: str = "support_body"

    def __post_init__(self):
        object.__setattr__(self, "center", _vec(self.center, self.h.dim))

    @property
    def dim(self):
        return self.h.dim

    def support_values(self, grid):
        """h(xi) + <center, xi> at the grid nodes."""
        return field_values(self.h, grid) + grid.nodes @ self.center


@dataclass(frozen=True, eq=False)
class RadialGraph:
    """Star-shaped surface {center + r(xi) xi}."""

    r: object
    center: np.ndarray = None
    name: str = "radial_graph"

    def __post_init__(self):
        object.__setattr__(self, "center", _vec(self.center, self.r.dim))

    @property
    def dim(self):
        return self.r.dim


@dataclass(frozen=True, eq=False)
class ParametricCurve:
    """Closed plane curve t -> (x(t), y(t)), t in [0, 2 pi).

    ``x`` and ``y`` are callables of a numpy array of parameters; expression
    objects from :mod:`aflab.expr` also provide symbolic derivatives.
    """

    x: object
    y: object
    center: np.ndarray = None
    name: str = "parametric_curve"

    def __post_init__(self):
        object.__setattr__(self, "center", _vec(self.center, 1))

    @property
    def dim(self):
        return 1


def translate(shape, v):
    """Rigid translation by ``v``."""
    v = np.asarray(v, dtype=float)
    return replace(shape, center=shape.center + v)


def ball(radius, center=None, dim=2, representation="support"):
    if radius <= 0:
        raise ConfigurationError("radius must be positive")
    if representation == "support":
        return SupportBody(HarmonicField(dim, float(radius)), center, name="ball")
    if representation == "radial":
        return RadialGraph(HarmonicField(dim, float(radius)), center, name="ball")
    if representation == "parametric":
        if dim != 1:
            raise ConfigurationError("parametric balls exist only for dim=1")
        R = float(radius)
        return ParametricCurve(parse_expression(f"{R!r}*cos(t)"), parse_expression(f"{R!r}*sin(t)"),
                               center, name="ball")
    raise ConfigurationError(f"unknown representation {representation!r}")


def ellipse(a, b, center=None, representation="parametric"):
    """Ellipse with semi-axes a (x) and b (y)."""
    a, b = float(a), float(b)
    if a <= 0 or b <= 0:
        raise ConfigurationError("semi-axes must be positive")
    if representation == "parametric":
        return ParametricCurve(parse_expression(f"{a!r}*cos(t)"), parse_expression(f"{b!r}*sin(t)"),
                               center, name="ellipse")
    if representation == "radial":
        def r(xi):
            return a * b / np.sqrt(b * b * xi[:, 0] ** 2 + a * a * xi[:, 1] ** 2)
        return RadialGraph(FunctionField(1, r, "ellipse_polar"), center, name="ellipse")
    if representation == "support":
        def h(xi):
            return np.sqrt(a * a * xi[:, 0] ** 2 + b * b * xi[:, 1] ** 2)
        return SupportBody(FunctionField(1, h, "ellipse_support"), center, name="ellipse")
    raise ConfigurationError(f"unknown representation {representation!r}")


def support_with_translation(shape):
    """HarmonicField of a harmonic support body with its center folded in."""
    if not isinstance(shape, SupportBody) or not isinstance(shape.h, HarmonicField):
        raise UsageError("only harmonic support bodies can fold their center")
    lin = degree_one_field(shape.center, shape.dim)
    return HarmonicField(shape.dim, shape.h.base, shape.h.terms + lin.terms)


def _harmonic_modes(dim, max_degree):
    modes = []
    for l in range(2, max_degree + 1):
        orders = (l, -l) if dim == 1 else range(-l, l + 1)
        modes.extend((l, m) for m in orders)
    return modes


def random_harmonic_terms(rng, dim, max_degree=4, amplitude=0.15):
    """Random perturbation terms of degrees 2..max_degree.

    The coefficient vector is drawn with a 1/l^2 spectral decay and scaled so
    that the sup-norm of the perturbation bound ``sum |a| max|Y|`` is at most
    ``amplitude``.
    """
    modes = _harmonic_modes(dim, max_degree)
    coef = rng.standard_normal(len(modes)) / np.array([l * l for l, _ in modes], dtype=float)
    ymax = np.array([1.0 / np.sqrt(np.pi) if dim == 1 else np.sqrt((2 * l + 1) / (4 * np.pi))
                     for l, _ in modes])
    bound = np.sum(np.abs(coef) * ymax)
    coef *= amplitude * rng.uniform(0.3, 1.0) / bound
    return tuple((l, m, float(a)) for (l, m), a in zip(modes, coef))


def random_support_body(rng, dim, max_degree=4, amplitude=0.15, max_offset=0.3, grid=None):
    """Random convex harmonic body of unit base radius, rejection-sampled for convexity."""
    from .sampling import sample_support_body
    from .grids import default_grid

    grid = grid or default_grid(dim)
    for _ in range(200):
        terms = random_harmonic_terms(rng, dim, max_degree, amplitude)
        offset = rng.standard_normal(dim + 1)
        offset *= max_offset * rng.uniform(0.0, 1.0) / np.linalg.norm(offset)
        body = SupportBody(HarmonicField(dim, 1.0, terms), offset, name="random_support")
        try:
            sample_support_body(body, grid)
        except ConvexityError:
            continue
        return body
    raise ConfigurationError("could not draw a convex body; lower the amplitude")


def random_radial_graph(rng, dim, max_degree=4, amplitude=0.2, max_offset=0.3):
    """Random star-shaped radial graph r = 1 + perturbation (r > 0 guaranteed for amplitude < 1)."""
    terms = random_harmonic_terms(rng, dim, max_degree, amplitude)
    offset = rng.standard_normal(dim + 1)
    offset *= max_offset * rng.uniform(0.0, 1.0) / np.linalg.norm(offset)
    return RadialGraph(HarmonicField(dim, 1.0, terms), offset, name="random_radial")
