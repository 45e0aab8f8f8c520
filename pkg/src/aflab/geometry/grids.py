"""Quadrature grids on S^1 and S^2 with spectral tangential derivatives.

S^1 uses N equispaced angles and the trapezoid rule; derivatives come from
trigonometric interpolation (FFT, Nyquist mode dropped).

S^2 uses Gauss-Legendre nodes in cos(colatitude) times uniform longitudes,
so no node sits on a pole.  Derivatives are spectral: an FFT in longitude,
then for each zonal wavenumber m a projection onto the normalized Legendre
functions P_lm, l <= Nlat-1, differentiated analytically in colatitude.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import ConfigurationError, UsageError
from .harmonics import FieldJet, coordinate_jet_s2, legendre_table, sphere_points, tangent_frame


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Nodes, weights and differentiation data for S^1 or S^2."""

    dim: int
    shape: tuple
    angles: np.ndarray  # (N, dim)
    nodes: np.ndarray  # (N, dim+1)
    weights: np.ndarray  # (N,)
    frame: np.ndarray  # (N, dim, dim+1)
    _ops: dict = field(repr=False, default_factory=dict)

    @property
    def size(self):
        return self.nodes.shape[0]

    @property
    def label(self):
        return "x".join(str(s) for s in self.shape)

    def integrate(self, values):
        return float(np.dot(self.weights, values))

    def refined(self):
        """The grid with every dimension doubled."""
        if self.dim == 1:
            return grid_s1(2 * self.shape[0])
        return grid_s2(2 * self.shape[0], 2 * self.shape[1])

    def same_as(self, other):
        return self.dim == other.dim and self.shape == other.shape

    def check_field(self, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (self.size,):
            raise UsageError(f"field has shape {values.shape}, grid {self.label} has {self.size} nodes")
        return values

    def derivative(self, values, order=1):
        """d/dtheta (S^1 only), spectral."""
        if self.dim != 1:
            raise UsageError("derivative() is defined on S^1 grids; use jet() on S^2")
        return _s1_derivative(self.check_field(values), order)

    def jet(self, values):
        """Value, frame gradient and covariant Hessian of a node-sampled field."""
        values = self.check_field(values)
        if self.dim == 1:
            d1 = _s1_derivative(values, 1)
            d2 = _s1_derivative(values, 2)
            return FieldJet(values, d1[:, None], d2[:, None, None])
        return _s2_jet(self, values)


def _s1_derivative(values, order):
    n = values.size
    k = np.fft.rfftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k[-1] = 0.0
    spec = np.fft.rfft(values) * (1j * k) ** order
    return np.fft.irfft(spec, n=n)


@lru_cache(maxsize=32)
def grid_s1(N):
    """N equispaced nodes on the unit circle with trapezoid weights 2 pi / N."""
    N = int(N)
    if N < 8:
        raise ConfigurationError(f"S^1 grid needs N >= 8, got {N}")
    theta = 2.0 * np.pi * np.arange(N) / N
    angles = theta[:, None]
    return SphereGrid(1, (N,), angles, sphere_points(angles, 1),
                      np.full(N, 2.0 * np.pi / N), tangent_frame(angles, 1))


@lru_cache(maxsize=32)
def grid_s2(Nlat, Nlon):
    """Gauss-Legendre (in cos colatitude) x uniform longitude grid on S^2."""
    Nlat, Nlon = int(Nlat), int(Nlon)
    if Nlat < 8 or Nlon < 16:
        raise ConfigurationError(f"S^2 grid needs Nlat >= 8 and Nlon >= 16, got {Nlat}x{Nlon}")
    z, wz = np.polynomial.legendre.leggauss(Nlat)
    z, wz = z[::-1], wz[::-1]
    theta = np.arccos(z)
    lam = 2.0 * np.pi * np.arange(Nlon) / Nlon
    T, Lm = np.meshgrid(theta, lam, indexing="ij")
    angles = np.stack([T.ravel(), Lm.ravel()], axis=-1)
    weights = np.outer(wz, np.full(Nlon, 2.0 * np.pi / Nlon)).ravel()
    grid = SphereGrid(2, (Nlat, Nlon), angles, sphere_points(angles, 2), weights,
                      tangent_frame(angles, 2))
    lmax = Nlat - 1
    mmax = min(lmax, Nlon // 2 - 1)
    P, dP, d2P = legendre_table(lmax, theta)
    proj, d1, d2 = [], [], []
    for m in range(mmax + 1):
        A = P[m:, m].T  # (Nlat, nl)
        analysis = 2.0 * np.pi * A.T * wz[None, :]  # coefficients of P_lm
        proj.append(A @ analysis)
        d1.append(dP[m:, m].T @ analysis)
        d2.append(d2P[m:, m].T @ analysis)
    grid._ops.update(theta=theta, mmax=mmax, proj=np.array(proj), d1=np.array(d1), d2=np.array(d2))
    return grid


def _s2_jet(grid, values):
    Nlat, Nlon = grid.shape
    ops = grid._ops
    mmax = ops["mmax"]
    F = np.fft.rfft(values.reshape(Nlat, Nlon), axis=1)[:, : mmax + 1].T  # (M, Nlat)
    m = np.arange(mmax + 1)[:, None]
    Fp = np.einsum("mij,mj->mi", ops["proj"], F)
    Ft = np.einsum("mij,mj->mi", ops["d1"], F)
    Ftt = np.einsum("mij,mj->mi", ops["d2"], F)

    def back(spec):
        full = np.zeros((Nlat, Nlon // 2 + 1), dtype=complex)
        full[:, : mmax + 1] = spec.T
        return np.fft.irfft(full, n=Nlon, axis=1).ravel()

    f_t = back(Ft)
    f_l = back(1j * m * Fp)
    f_tt = back(Ftt)
    f_tl = back(1j * m * Ft)
    f_ll = back(-(m**2) * Fp)
    return coordinate_jet_s2(grid.angles[:, 0], values, f_t, f_l, f_tt, f_tl, f_ll)


def parse_grid(text, dim):
    """Parse ``"N"`` or ``"NlatxNlon"`` into a grid of the given dimension."""
    text = str(text).strip().lower()
    try:
        parts = [int(p) for p in text.split("x")]
    except ValueError:
        raise UsageError(f"bad grid size {text!r}; expected N or NlatxNlon") from None
    if dim == 1:
        if len(parts) != 1:
            raise UsageError(f"S^1 grid takes a single size, got {text!r}")
        return grid_s1(parts[0])
    if len(parts) == 1:
        return grid_s2(parts[0], 2 * parts[0])
    if len(parts) != 2:
        raise UsageError(f"bad grid size {text!r}")
    return grid_s2(*parts)


DEFAULT_GRID = {1: (128,), 2: (48, 96)}


def default_grid(dim):
    return grid_s1(*DEFAULT_GRID[1]) if dim == 1 else grid_s2(*DEFAULT_GRID[2])
