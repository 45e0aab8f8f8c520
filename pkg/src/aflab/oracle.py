"""Independent reference values.

Two kinds of second opinion for the spectral main path:

* closed forms (ellipse perimeter by the arithmetic-geometric mean, all
  curvature integrals of an off-center ball), and
* a dense cross-check that recomputes a quantity from analytic derivatives
  with adaptive quadrature (n = 1) or composite Gauss-Legendre panels in
  colatitude (n = 2), at many times the default node count.
"""

import re
import warnings
from dataclasses import asdict, dataclass
from math import comb, pi, sqrt

import numpy as np
from scipy import integrate

from .errors import DomainError, UsageError
from .geometry.grids import SphereGrid, default_grid
from .geometry.harmonics import HarmonicField, sphere_points, tangent_frame
from .geometry.sampling import (
    curve_from_derivatives,
    sample,
    sample_radial_from_jet,
    sample_support_from_jet,
)
from .geometry.shapes import ParametricCurve, RadialGraph, SupportBody
from .measures import ball_volume, body_constants, newton_integrand


@dataclass(frozen=True)
class OracleReport:
    quantity: str
    oracle_value: float
    main_value: float
    rel_error: float

    def to_dict(self):
        return asdict(self)


# -- ellipse --------------------------------------------------------------------


def elliptic_e(m):
    """Complete elliptic integral of the second kind E(m), m = k^2 < 1, by AGM."""
    if not 0.0 <= m < 1.0:
        raise DomainError(f"elliptic parameter must be in [0, 1), got {m}")
    a, g = 1.0, sqrt(1.0 - m)
    total, power = 0.5 * m, 0.5
    for _ in range(64):
        if abs(a - g) <= 1e-16 * a:
            break
        c = 0.5 * (a - g)
        a, g = 0.5 * (a + g), sqrt(a * g)
        power *= 2.0
        total += power * c * c
    K = pi / (2.0 * a)
    return K * (1.0 - total)


def ellipse_reference(a, b):
    """Perimeter, area and curvature extremes of the ellipse with semi-axes a >= b > 0.

    ``L_quad`` is the arclength integral by adaptive quadrature, an independent
    route to ``L``.
    """
    a, b = float(a), float(b)
    if not a >= b > 0:
        raise DomainError(f"need a >= b > 0, got a={a}, b={b}")
    L = 4.0 * a * elliptic_e(1.0 - (b / a) ** 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        L_quad = 4.0 * integrate.quad(lambda t: np.hypot(a * np.sin(t), b * np.cos(t)), 0.0, pi / 2,
                                      epsabs=1e-15, epsrel=1e-14, limit=200)[0]
    return {"L": L, "L_quad": L_quad, "A": pi * a * b, "kappa_min": b / a**2, "kappa_max": a / b**2}


# -- off-center ball --------------------------------------------------------------


def offcenter_ball_reference(R, c, n):
    """Closed-form quantities of the sphere of radius R centered at c in R^{n+1}.

    ``c`` is a vector or a scalar offset along the first axis.  Keys:
    ``I<k>`` (k = -1..n), ``hx2_<k>`` (integral of H_k |X|^2), ``delta2_<k>``
    (squared H_k-weighted distance to B_0(R)), ``newton_<k>``,
    ``af_identity_<k>``, ``thm1``, ``hn_x2_slack``, ``steiner_point``,
    ``mean_width``, ``circumradius``, ``volume``, ``area``,
    ``isoperimetric_deficit``.
    """
    if n not in (1, 2):
        raise DomainError(f"n must be 1 or 2, got {n}")
    R = float(R)
    cv = np.atleast_1d(np.asarray(c, dtype=float))
    if cv.size == 1:
        cv = np.concatenate([cv, np.zeros(n)])
    if cv.size != n + 1:
        raise DomainError(f"center needs {n + 1} components, got {cv.size}")
    c2 = float(cv @ cv)
    if not R > 0 or sqrt(c2) >= R:
        raise DomainError(f"need |c| < R with R > 0, got |c|={sqrt(c2)}, R={R}")
    w = body_constants(n).omega_n
    out = {}
    for k in range(-1, n + 1):
        out[f"I{k}"] = w * R ** (n - k)
    for k in range(0, n + 1):
        out[f"hx2_{k}"] = w * R ** (n - k) * (R * R + c2)
        out[f"delta2_{k}"] = c2 * w * R ** (n - k) / (n + 1)
    for k in range(1, n + 1):
        # umbilic: T_{k-1} o A = C(n-1,k-1) R^{-k} Id and the mean of |X^T|^2 is n|c|^2/(n+1)
        out[f"newton_{k}"] = c2 * w * R ** (n - k) / (n + 1)
        out[f"af_identity_{k}"] = out[f"newton_{k}"]
    out["thm1"] = w * c2
    out["hn_x2_slack"] = out[f"delta2_{n}"]
    out["steiner_point"] = cv.copy()
    out["mean_width"] = 2.0 * R
    out["circumradius"] = R
    out["volume"] = ball_volume(n + 1) * R ** (n + 1)
    out["area"] = w * R**n
    out["isoperimetric_deficit"] = 0.0
    return out


# -- dense cross-check ------------------------------------------------------------

_QUANTITY = re.compile(r"^(I|hx2_|delta2_|newton_)(-?\d+)$")


def _parse_quantity(qid, n):
    m = _QUANTITY.match(qid)
    if not m:
        raise UsageError(f"unknown quantity {qid!r}; expected I<k>, hx2_<k>, delta2_<k> or newton_<k>")
    kind, k = m.group(1).rstrip("_"), int(m.group(2))
    lo = {"I": -1, "newton": 1}.get(kind, 0)
    if not lo <= k <= n:
        raise UsageError(f"{qid}: index must be in {lo}..{n}")
    return kind, k


def _integrand(s, kind, k, ubar=None):
    """Pointwise density (per unit grid weight) of a quantity."""
    if kind == "I":
        f = s.u if k == -1 else s.H(k)
    elif kind == "hx2":
        f = s.H(k) * s.r2
    elif kind == "delta2":
        f = (s.u - ubar) ** 2 * s.H(k)
    else:
        f = newton_integrand(s, k) / (k * comb(s.dim, k))
    return f * s.jac


def _point_grid(angles, weights=None):
    angles = np.asarray(angles, dtype=float)
    dim = angles.shape[1]
    if weights is None:
        weights = np.ones(angles.shape[0])
    return SphereGrid(dim, (angles.shape[0],), angles, sphere_points(angles, dim), weights,
                      tangent_frame(angles, dim))


def _analytic_sampler(shape):
    """A function angles -> SurfaceSamples built from exact derivatives."""
    if isinstance(shape, (SupportBody, RadialGraph)):
        field = shape.h if isinstance(shape, SupportBody) else shape.r
        if not isinstance(field, HarmonicField):
            raise UsageError("dense cross-check needs an analytic (harmonic) field")
        build = sample_support_from_jet if isinstance(shape, SupportBody) else sample_radial_from_jet

        def at(angles, weights=None):
            grid = _point_grid(angles, weights)
            return build(field.jet(grid.angles), grid, shape, shape.center)
        return at
    if isinstance(shape, ParametricCurve):
        if not (hasattr(shape.x, "diff") and hasattr(shape.y, "diff")):
            raise UsageError("dense cross-check needs expression coordinates")
        x, y = shape.x, shape.y
        x1, y1 = x.diff(), y.diff()
        x2, y2 = x1.diff(), y1.diff()
        sign = _orientation(x, y, x1, y1)

        def at(angles, weights=None):
            grid = _point_grid(angles, weights)
            t = sign * grid.angles[:, 0]
            out = curve_from_derivatives(x(t), y(t), sign * x1(t), sign * y1(t), x2(t), y2(t),
                                         grid, shape)
            return out.translated(shape.center) if np.any(shape.center) else out
        return at
    raise UsageError(f"cannot cross-check {type(shape).__name__}")


def _orientation(x, y, x1, y1):
    area = integrate.quad(lambda t: float(x(t) * y1(t) - y(t) * x1(t)), 0.0, 2 * pi, limit=200)[0]
    return 1.0 if area >= 0 else -1.0


def _quad_s1(at, kind, k, ubar=None):
    def f(t):
        return float(_integrand(at(np.array([[t]])), kind, k, ubar)[0])

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(f, 0.0, 2 * pi, epsabs=1e-15, epsrel=1e-14, limit=500)[0]


def _panel_grid(panels, order, nlon):
    """Composite Gauss-Legendre in colatitude (``panels`` x ``order`` nodes) times ``nlon`` longitudes."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, pi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    theta = (mid[:, None] + half[:, None] * x).ravel()
    wt = (half[:, None] * w).ravel() * np.sin(theta)
    lam = 2 * pi * np.arange(nlon) / nlon
    T, L = np.meshgrid(theta, lam, indexing="ij")
    weights = np.outer(wt, np.full(nlon, 2 * pi / nlon)).ravel()
    return np.stack([T.ravel(), L.ravel()], -1), weights


def _panels_s2(at, kind, k, ubar=None, panels=16, order=12, nlon=384):
    angles, weights = _panel_grid(panels, order, nlon)
    s = at(angles, weights)
    return float(np.dot(_integrand(s, kind, k, ubar), s.weights))


def _dense(shape, kind, k, **kw):
    at = _analytic_sampler(shape)
    rule = _quad_s1 if shape.dim == 1 else _panels_s2
    ubar = None
    if kind == "delta2":
        ubar = rule(at, "I", k - 1, **kw) / rule(at, "I", k, **kw)
    return rule(at, kind, k, ubar, **kw)


def _main(shape, kind, k, grid):
    s = sample(shape, grid)
    ubar = None
    if kind == "delta2":
        wts = s.weights
        ubar = np.dot(_integrand(s, "I", k - 1), wts) / np.dot(_integrand(s, "I", k), wts)
    return float(np.dot(_integrand(s, kind, k, ubar), s.weights))


def dense_quadrature_crosscheck(shape, quantity, grid=None):
    """Compare a quantity on the spectral grid with a dense independent rule.

    Quantities: ``I<k>``, ``hx2_<k>``, ``delta2_<k>`` (about B_0(I_{k-1}/I_k))
    and ``newton_<k>``.  The shape must be analytic: a harmonic support body or
    radial graph, or a parametric curve with expression coordinates.
    """
    kind, k = _parse_quantity(quantity, shape.dim)
    grid = grid or default_grid(shape.dim)
    main = _main(shape, kind, k, grid)
    ref = _dense(shape, kind, k)
    rel = abs(main - ref) / max(abs(ref), 1e-300)
    return OracleReport(quantity, ref, main, rel)
