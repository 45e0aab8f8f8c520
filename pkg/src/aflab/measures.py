"""Integral quantities of sampled hypersurfaces and convex bodies.

Everything reduces to one weighted sum over the quadrature nodes of a
:class:`~aflab.geometry.sampling.SurfaceSamples`; node order is fixed by
the grid so sums are reproducible run to run.
"""

from dataclasses import dataclass
from math import comb, gamma, pi

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, HypothesisError, UsageError
from .symfun import newton_shape_quadratic


def ball_volume(d):
    """Volume of the unit ball in R^d."""
    return pi ** (d / 2) / gamma(d / 2 + 1)


@dataclass(frozen=True)
class BodyConstants:
    n: int
    omega_n: float  # |S^n|
    unit_ball_vol: float  # |B^{n+1}|
    eta_n: float
    c_n: float


def body_constants(n):
    vol = ball_volume(n + 1)
    return BodyConstants(
        n=n,
        omega_n=(n + 1) * vol,
        unit_ball_vol=vol,
        eta_n=(n + 2) / (n * vol**n),
        c_n=2.0 * ball_volume(n) / ((n + 1) * (n + 2)),
    )


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if not self.radius >= 0:
            raise DomainError(f"ball radius must be nonnegative, got {self.radius}")


def _nodewise(values, size, what):
    values = np.broadcast_to(np.asarray(values, dtype=float), (size,))
    bad = ~np.isfinite(values)
    if np.any(bad):
        j = int(np.flatnonzero(bad)[0])
        raise DomainError(f"{what} is not finite", node=j)
    return values


def quermass(samples, k):
    """I_k = integral of H_k; I_{-1} = integral of u = (n+1)|Omega|."""
    n = samples.dim
    if k == -1:
        return float(np.dot(samples.u, samples.mu))
    if not 0 <= k <= n:
        raise DomainError(f"quermassintegral index must be in -1..{n}, got {k}")
    return float(np.dot(samples.H(k), samples.mu))


def volume(samples):
    return quermass(samples, -1) / (samples.dim + 1)


def area(samples):
    return quermass(samples, 0)


def _weight_values(samples, weight, what="weight"):
    if callable(weight):
        with np.errstate(divide="ignore", invalid="ignore"):
            weight = weight(samples.u, samples.r2)
    return _nodewise(weight, len(samples), what)


def weighted_curvature_integral(samples, k, weight):
    """Integral of H_k * weight.

    ``weight`` is an array of node values or a callable ``f(u, r2)`` with
    r2 = |X|^2.  Non-finite weights raise a DomainError naming the node.
    """
    if not 0 <= k <= samples.dim:
        raise DomainError(f"curvature index must be in 0..{samples.dim}, got {k}")
    w = _weight_values(samples, weight)
    return float(np.dot(samples.H(k) * w, samples.mu))


def newton_integrand(samples, k):
    """Pointwise T_{k-1} o A (X^T, X^T)."""
    return newton_shape_quadratic(samples.kappa, k, samples.comps)


def newton_form_integral(samples, k, psi=None):
    """(1/(k C(n,k))) * integral of T_{k-1} o A (X^T, X^T) psi(u).

    ``psi`` is a callable of u, an array of node values, or None for psi = 1.
    """
    n = samples.dim
    if not 1 <= k <= n:
        raise DomainError(f"Newton-form index must be in 1..{n}, got {k}")
    q = newton_integrand(samples, k)
    if psi is not None:
        if callable(psi):
            with np.errstate(divide="ignore", invalid="ignore"):
                psi = psi(samples.u)
        q = q * _nodewise(psi, len(samples), "psi(u)")
    return float(np.dot(q, samples.mu)) / (k * comb(n, k))


def weighted_L2_distance_sq(samples, k, ball):
    """delta_{2,k}(Omega, ball)^2 = integral of (u - r)^2 H_k.

    A ball off the origin is handled by measuring support values about its
    center.  Raises HypothesisError where H_k < 0.
    """
    Hk = samples.H(k) if k >= 0 else None
    if Hk is None or not 0 <= k <= samples.dim:
        raise DomainError(f"curvature index must be in 0..{samples.dim}, got {k}")
    scale = max(float(np.max(np.abs(samples.kappa))) ** k, 1e-300)
    neg = Hk < -1e-10 * scale
    if np.any(neg):
        j = int(np.argmin(Hk))
        raise HypothesisError(f"H_{k} = {Hk[j]:.6g} < 0 at node {j}")
    u = samples.u - samples.nu @ ball.center
    return float(np.dot((u - ball.radius) ** 2 * Hk, samples.mu))


def weighted_L2_distance(samples, k, ball):
    return float(np.sqrt(weighted_L2_distance_sq(samples, k, ball)))


def _pair(hK, hL):
    hK = np.asarray(hK, dtype=float)
    hL = np.asarray(hL, dtype=float)
    if hK.shape != hL.shape:
        raise UsageError(f"support fields live on different grids ({hK.shape} vs {hL.shape})")
    return hK, hL


def l2_distance_support(hK, hL, grid):
    """delta_2(K, L): L^2 distance of support functions over the sphere."""
    hK, hL = _pair(hK, hL)
    grid.check_field(hK)
    return float(np.sqrt(grid.integrate((hK - hL) ** 2)))


def hausdorff_support(hK, hL):
    """Grid maximum of |hK - hL| (a lower bound converging to the Hausdorff distance)."""
    hK, hL = _pair(hK, hL)
    return float(np.max(np.abs(hK - hL)))


def steiner_point(h, grid):
    """z = (1/|B^{n+1}|) integral of h(xi) xi over the sphere."""
    h = grid.check_field(h)
    return grid.weights * h @ grid.nodes / ball_volume(grid.dim + 1)


def mean_width(h, grid):
    h = grid.check_field(h)
    return 2.0 * grid.integrate(h) / body_constants(grid.dim).omega_n


def steiner_point_from_samples(samples):
    """Steiner point of a convex sample set, using H_n dmu = d(theta) and u = h(nu)."""
    w = samples.H(samples.dim) * samples.mu
    return (w * samples.u) @ samples.nu / ball_volume(samples.dim + 1)


def mean_width_from_samples(samples):
    return 2.0 * quermass(samples, samples.dim - 1) / body_constants(samples.dim).omega_n


def steiner_ball(samples):
    """Ball at the Steiner point with diameter equal to the mean width."""
    return Ball(steiner_point_from_samples(samples), 0.5 * mean_width_from_samples(samples))


def isoperimetric_deficit(samples):
    """(|boundary|/|S^n|)^{n+1} - (|Omega|/|B^{n+1}|)^n."""
    n = samples.dim
    c = body_constants(n)
    return (area(samples) / c.omega_n) ** (n + 1) - (volume(samples) / c.unit_ball_vol) ** n


# -- smallest enclosing ball -------------------------------------------------


def _ball_through(P):
    """Smallest ball with every row of P on its boundary (circumscribed ball)."""
    p0 = P[0]
    if len(P) == 1:
        return p0.copy(), 0.0
    A = P[1:] - p0
    G = A @ A.T
    rhs = 0.5 * np.einsum("ij,ij->i", A, A)
    lam = np.linalg.lstsq(G, rhs, rcond=None)[0]
    c = p0 + lam @ A
    return c, float(np.max(np.linalg.norm(P - c, axis=1)))


def _first_outside(points, idx, start, stop, center, radius):
    if start >= stop:
        return -1
    d = np.linalg.norm(points[idx[start:stop]] - center, axis=1)
    out = np.flatnonzero(d > radius * (1 + 1e-12) + 1e-15)
    return start + int(out[0]) if out.size else -1


def _mtf(points, idx, stop, boundary, dmax):
    """Move-to-front Welzl over idx[:stop] with the points in ``boundary`` fixed."""
    if boundary:
        center, radius = _ball_through(points[boundary])
    else:
        center, radius = points[idx[0]].copy(), 0.0
    if len(boundary) == dmax:
        return center, radius
    start = 0
    while True:
        j = _first_outside(points, idx, start, stop, center, radius)
        if j < 0:
            return center, radius
        p = idx[j]
        center, radius = _mtf(points, idx, j, boundary + [p], dmax)
        # move the offending point to the front; idx[:j+1] is now enclosed
        idx[1 : j + 1] = idx[0:j].copy()
        idx[0] = p
        start = j + 1


def min_enclosing_ball(points, seed=0):
    """Exact smallest enclosing ball of a point set in R^d (d = 2 or 3).

    Randomized move-to-front recursion with support sets of at most d+1
    points; the shuffle is seeded so the result is reproducible.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise UsageError("min_enclosing_ball needs at least one point")
    order = np.random.default_rng(seed).permutation(pts.shape[0])
    # core set: solve on a subset, add the worst violators, repeat.  A ball
    # that is smallest for a subset and encloses everything is the answer.
    core = np.unique(np.concatenate([order[:64], np.argmax(pts, 0), np.argmin(pts, 0)]))
    while True:
        idx = core[np.random.default_rng(seed).permutation(core.size)]
        center, radius = _mtf(pts, idx, idx.size, [], pts.shape[1] + 1)
        d = np.linalg.norm(pts - center, axis=1)
        out = np.flatnonzero(d > radius * (1 + 1e-12) + 1e-15)
        if out.size == 0:
            return Ball(center, radius)
        worst = out[np.argsort(d[out])[::-1][:32]]
        core = np.union1d(core, worst)


def circumradius(samples, center):
    return float(np.sqrt(np.max(np.sum((samples.X - center) ** 2, axis=1))))


def diameter(points):
    """Largest distance between two points of the set (exact).

    With c, R the enclosing ball and L a known pair distance, a pair p, q at
    distance > L must satisfy <e_p, e_q> < (r_p^2 + R^2 - L^2)/(2 r_p R),
    where e, r are direction and distance from c.  Candidates are found by a
    KD-tree query around -e_p on the unit directions.
    """
    P = np.asarray(points, dtype=float)
    if len(P) < 2:
        return 0.0
    ball = min_enclosing_ball(P)
    rel = P - ball.center
    r = np.linalg.norm(rel, axis=1)
    R = ball.radius
    # lower bound: farthest point from the point farthest out
    i = int(np.argmax(r))
    L = float(np.max(np.linalg.norm(P - P[i], axis=1)))
    if 2.0 * R - L <= 1e-12 * R:
        return L
    live = np.flatnonzero(r > max(L - R, 0.0))
    e = rel[live] / r[live, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        tau = (r[live] ** 2 + R * R - L * L) / (2.0 * r[live] * R)
    reach = np.sqrt(np.clip(2.0 + 2.0 * tau, 0.0, 4.0)) * (1 + 1e-9) + 1e-12
    tree = cKDTree(e)
    for a, nbrs in enumerate(tree.query_ball_point(-e, reach)):
        if nbrs:
            d = np.linalg.norm(P[live[nbrs]] - P[live[a]], axis=1)
            L = max(L, float(np.max(d)))
    return L
