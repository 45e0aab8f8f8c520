"""Turn shapes into per-node surface data.

A :class:`SurfaceSamples` is a struct of arrays: one row per quadrature
node, carrying position, outward normal, support value, principal
curvatures, principal directions, the principal-frame components of the
tangential position X^T, and the area Jacobian.  The area element at node
j is ``jac[j] * weights[j]``.
"""

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from ..errors import ConvexityError, RegularityError, StarShapedError, UsageError
from ..symfun import elem_sym_all
from .harmonics import HarmonicField
from .shapes import ParametricCurve, RadialGraph, SupportBody, field_values


class SurfaceSample(NamedTuple):
    X: np.ndarray
    nu: np.ndarray
    u: float
    kappa: np.ndarray
    tangential_comps: np.ndarray
    jac: float


@dataclass(frozen=True, eq=False)
class SurfaceSamples:
    dim: int
    X: np.ndarray  # (N, n+1)
    nu: np.ndarray  # (N, n+1)
    u: np.ndarray  # (N,)
    kappa: np.ndarray  # (N, n)
    directions: np.ndarray  # (N, n, n+1) principal directions
    comps: np.ndarray  # (N, n)
    jac: np.ndarray  # (N,)
    weights: np.ndarray  # (N,)
    grid: object = None
    source: object = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return self.u.size

    def __getitem__(self, i):
        return SurfaceSample(self.X[i], self.nu[i], float(self.u[i]), self.kappa[i],
                             self.comps[i], float(self.jac[i]))

    @property
    def mu(self):
        """Area weight of every node."""
        return self.jac * self.weights

    def sigma(self, k):
        if "sigma" not in self._cache:
            self._cache["sigma"] = elem_sym_all(self.kappa)
        return self._cache["sigma"][k]

    def H(self, k):
        from math import comb

        return self.sigma(k) / comb(self.dim, k)

    @property
    def r2(self):
        return np.einsum("ij,ij->i", self.X, self.X)

    def translated(self, v):
        """The same surface moved by ``v``; curvature data is unchanged."""
        v = np.asarray(v, dtype=float)
        X = self.X + v
        return replace(self, X=X, u=self.u + self.nu @ v,
                       comps=np.einsum("inj,ij->in", self.directions, X), _cache={})


def _finish(dim, X, nu, kappa, directions, jac, grid, source):
    u = np.einsum("ij,ij->i", X, nu)
    comps = np.einsum("inj,ij->in", directions, X)
    return SurfaceSamples(dim, X, nu, u, kappa, directions, comps, jac, grid.weights.copy(),
                          grid, source)


def _sym2_eigh(a, b, c):
    """Eigen-decomposition of stacked 2x2 symmetric matrices [[a, b], [b, c]].

    Returns ascending eigenvalues (N, 2) and unit eigenvectors as columns
    (N, 2, 2).  Where the gap is below 1e-12 of the scale the node is
    umbilic and the identity basis is returned.
    """
    mean = 0.5 * (a + c)
    half = 0.5 * (a - c)
    rad = np.hypot(half, b)
    lo, hi = mean - rad, mean + rad
    # eigenvector of hi: (b, hi - a) or (hi - c, b); pick the better-conditioned
    v1 = np.stack([b, hi - a], -1)
    v2 = np.stack([hi - c, b], -1)
    use2 = np.linalg.norm(v2, axis=-1) > np.linalg.norm(v1, axis=-1)
    vh = np.where(use2[:, None], v2, v1)
    nrm = np.linalg.norm(vh, axis=-1)
    umb = rad <= 1e-12 * np.maximum(np.abs(mean), 1e-300)
    vh = np.where(umb[:, None], np.array([0.0, 1.0]), vh / np.where(nrm > 0, nrm, 1.0)[:, None])
    vl = np.stack([vh[:, 1], -vh[:, 0]], -1)
    vecs = np.stack([vl, vh], axis=-1)
    return np.stack([lo, hi], -1), vecs


def sample_support_from_jet(jet, grid, source=None, center=None):
    """Samples of the convex surface with support function given by ``jet`` on ``grid``."""
    n = grid.dim
    h = jet.value
    xi = grid.nodes
    frame = grid.frame
    W = jet.hess + h[:, None, None] * np.eye(n)
    if n == 1:
        rho = W[:, 0, 0][:, None]
        vecs = np.ones((h.size, 1, 1))
        bad = rho[:, 0] <= 1e-10 * np.max(np.abs(rho))
    else:
        rho, vecs = _sym2_eigh(W[:, 0, 0], W[:, 0, 1], W[:, 1, 1])
        bad = rho[:, 0] <= 1e-10 * np.abs(rho[:, 0] + rho[:, 1])
    if np.any(bad):
        j = int(np.flatnonzero(bad)[0])
        raise ConvexityError(f"reverse Weingarten map not positive definite, eigenvalues {rho[j]}", node=j)
    grad_vec = np.einsum("in,inj->ij", jet.grad, frame)
    X = h[:, None] * xi + grad_vec
    directions = np.einsum("ina,inj->iaj", vecs, frame)
    jac = np.prod(rho, axis=-1)
    out = _finish(n, X, xi.copy(), 1.0 / rho, directions, jac, grid, source)
    if center is not None and np.any(center):
        out = out.translated(center)
    return out


def sample_radial_from_jet(jet, grid, source=None, center=None):
    """Samples of the radial graph X = r(xi) xi with ``jet`` the jet of r."""
    n = grid.dim
    r = jet.value
    if np.any(r <= 0):
        j = int(np.flatnonzero(r <= 0)[0])
        raise StarShapedError(f"radius {r[j]} is not positive", node=j)
    xi, frame = grid.nodes, grid.frame
    dr = jet.grad
    q = np.sqrt(r * r + np.einsum("in,in->i", dr, dr))
    eye = np.eye(n)
    g = r[:, None, None] ** 2 * eye + dr[:, :, None] * dr[:, None, :]
    b = ((r[:, None, None] ** 2) * eye + 2.0 * dr[:, :, None] * dr[:, None, :]
         - r[:, None, None] * jet.hess) / q[:, None, None]
    Lc = np.linalg.cholesky(g)
    Linv = np.linalg.inv(Lc)
    M = Linv @ b @ np.swapaxes(Linv, 1, 2)
    if n == 1:
        kappa = M[:, :, 0]
        Y = np.ones((r.size, 1, 1))
    else:
        kappa, Y = _sym2_eigh(M[:, 0, 0], M[:, 0, 1], M[:, 1, 1])
    V = np.swapaxes(Linv, 1, 2) @ Y  # g-orthonormal eigenvectors, columns
    tangents = dr[:, :, None] * xi[:, None, :] + r[:, None, None] * frame  # dX(e_i)
    directions = np.einsum("ina,inj->iaj", V, tangents)
    X = r[:, None] * xi
    grad_vec = np.einsum("in,inj->ij", dr, frame)
    nu = (r[:, None] * xi - grad_vec) / q[:, None]
    jac = r ** (n - 1) * q
    out = _finish(n, X, nu, kappa, directions, jac, grid, source)
    if center is not None and np.any(center):
        out = out.translated(center)
    return out


def sample_support_body(shape, grid):
    if shape.dim != grid.dim:
        raise UsageError(f"shape dim {shape.dim} does not match grid dim {grid.dim}")
    if isinstance(shape.h, HarmonicField):
        jet = grid.jet(shape.h.values(grid.angles))
    else:
        jet = grid.jet(field_values(shape.h, grid))
    return sample_support_from_jet(jet, grid, shape, shape.center)


def sample_radial_graph(shape, grid):
    if shape.dim != grid.dim:
        raise UsageError(f"shape dim {shape.dim} does not match grid dim {grid.dim}")
    jet = grid.jet(field_values(shape.r, grid))
    return sample_radial_from_jet(jet, grid, shape, shape.center)


def curve_from_derivatives(x, y, x1, y1, x2, y2, grid, source=None):
    """Samples of a counterclockwise plane curve from its parameter derivatives."""
    speed = np.hypot(x1, y1)
    if np.any(speed < 1e-10):
        j = int(np.argmin(speed))
        raise RegularityError(f"curve speed {speed[j]:.3e} below 1e-10", node=j)
    X = np.stack([x, y], -1)
    nu = np.stack([y1, -x1], -1) / speed[:, None]
    kappa = ((x1 * y2 - y1 * x2) / speed**3)[:, None]
    tau = np.stack([x1, y1], -1) / speed[:, None]
    return _finish(1, X, nu, kappa, tau[:, None, :], speed, grid, source)


def sample_parametric_curve(curve, grid):
    if grid.dim != 1:
        raise UsageError("parametric curves need an S^1 grid")
    t = grid.angles[:, 0]
    x = np.asarray(curve.x(t), dtype=float) * np.ones_like(t)
    y = np.asarray(curve.y(t), dtype=float) * np.ones_like(t)
    x1, y1 = grid.derivative(x), grid.derivative(y)
    if grid.integrate(x * y1 - y * x1) < 0:
        # reverse orientation: t -> -t keeps the node set
        idx = (-np.arange(t.size)) % t.size
        x, y = x[idx], y[idx]
        x1, y1 = grid.derivative(x), grid.derivative(y)
    x2, y2 = grid.derivative(x, 2), grid.derivative(y, 2)
    out = curve_from_derivatives(x, y, x1, y1, x2, y2, grid, curve)
    if np.any(curve.center):
        out = out.translated(curve.center)
    return out


def sample(shape, grid):
    """Dispatch on shape type."""
    if isinstance(shape, SupportBody):
        return sample_support_body(shape, grid)
    if isinstance(shape, RadialGraph):
        return sample_radial_graph(shape, grid)
    if isinstance(shape, ParametricCurve):
        return sample_parametric_curve(shape, grid)
    raise UsageError(f"cannot sample {type(shape).__name__}")
