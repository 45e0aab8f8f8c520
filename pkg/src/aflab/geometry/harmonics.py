"""Real orthonormal harmonics on S^1 and S^2, with analytic derivatives.

Conventions
-----------
S^1: angle theta, xi = (cos theta, sin theta).  Degree 0 is the constant
1/sqrt(2 pi); degree k > 0 has order +k -> cos(k theta)/sqrt(pi) and order
-k -> sin(k theta)/sqrt(pi).

S^2: colatitude theta, longitude lam, xi = (sin theta cos lam,
sin theta sin lam, cos theta).  Y_l0 = P_l0(theta), Y_lm = sqrt(2) P_lm cos(m lam)
and Y_l,-m = sqrt(2) P_lm sin(m lam) for m > 0, where P_lm are the fully
normalized associated Legendre functions without the Condon-Shortley phase,
so that every Y_lm has unit L^2 norm on the sphere.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError


def legendre_table(lmax, theta):
    """Normalized P_lm(cos theta) and its first two theta-derivatives.

    Returns three arrays of shape ``(lmax+1, lmax+1, len(theta))`` indexed
    ``[l, m]``; entries with m > l are zero.  ``theta`` must avoid the poles.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    c, s = np.cos(theta), np.sin(theta)
    L = int(lmax)
    P = np.zeros((L + 1, L + 1, theta.size))
    dP = np.zeros_like(P)
    P[0, 0] = 1.0 / np.sqrt(4.0 * np.pi)
    for m in range(1, L + 1):
        P[m, m] = np.sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * P[m - 1, m - 1]
    for m in range(0, L):
        P[m + 1, m] = np.sqrt(2.0 * m + 3.0) * c * P[m, m]
    for m in range(0, L + 1):
        for l in range(m + 2, L + 1):
            a = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = np.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            P[l, m] = a * (c * P[l - 1, m] - b * P[l - 2, m])
    for m in range(0, L + 1):
        for l in range(m, L + 1):
            lower = P[l - 1, m] if l > m else 0.0
            f = np.sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) * (l * l - m * m)) if l > m else 0.0
            dP[l, m] = (l * c * P[l, m] - f * lower) / s
    ll = np.arange(L + 1)[:, None, None]
    mm = np.arange(L + 1)[None, :, None]
    # associated Legendre ODE in theta
    d2P = np.where(mm > ll, 0.0, -(c / s) * dP - (ll * (ll + 1.0) - mm**2 / s**2) * P)
    return P, dP, d2P


def real_sh_s1(degree, order, theta):
    """Value, first and second derivative of a real S^1 harmonic."""
    theta = np.asarray(theta, dtype=float)
    k = int(degree)
    if k == 0:
        if order != 0:
            raise ConfigurationError("degree 0 on S^1 requires order 0")
        v = np.full_like(theta, 1.0 / np.sqrt(2.0 * np.pi))
        return v, np.zeros_like(theta), np.zeros_like(theta)
    if order not in (k, -k):
        raise ConfigurationError(f"order on S^1 must be +-degree, got degree={k} order={order}")
    norm = 1.0 / np.sqrt(np.pi)
    if order > 0:
        return (norm * np.cos(k * theta), -k * norm * np.sin(k * theta),
                -k * k * norm * np.cos(k * theta))
    return (norm * np.sin(k * theta), k * norm * np.cos(k * theta),
            -k * k * norm * np.sin(k * theta))


@dataclass(frozen=True)
class FieldJet:
    """Value, gradient and covariant Hessian of a scalar field on S^n.

    ``grad`` and ``hess`` are components in the orthonormal tangent frame of
    the points the jet was evaluated at (see :func:`tangent_frame`).
    """

    value: np.ndarray  # (N,)
    grad: np.ndarray  # (N, n)
    hess: np.ndarray  # (N, n, n)


def sphere_points(angles, dim):
    """Unit vectors for angle arrays: (theta,) on S^1, (theta, lam) on S^2."""
    angles = np.asarray(angles, dtype=float)
    if dim == 1:
        th = angles.reshape(-1)
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    th, lam = angles[:, 0], angles[:, 1]
    s = np.sin(th)
    return np.stack([s * np.cos(lam), s * np.sin(lam), np.cos(th)], axis=-1)


def tangent_frame(angles, dim):
    """Orthonormal tangent frame, shape (N, n, n+1): e_theta (and e_lam on S^2)."""
    angles = np.asarray(angles, dtype=float)
    if dim == 1:
        th = angles.reshape(-1)
        return np.stack([-np.sin(th), np.cos(th)], axis=-1)[:, None, :]
    th, lam = angles[:, 0], angles[:, 1]
    e_th = np.stack([np.cos(th) * np.cos(lam), np.cos(th) * np.sin(lam), -np.sin(th)], axis=-1)
    e_lam = np.stack([-np.sin(lam), np.cos(lam), np.zeros_like(lam)], axis=-1)
    return np.stack([e_th, e_lam], axis=1)


def coordinate_jet_s2(theta, f, f_t, f_l, f_tt, f_tl, f_ll):
    """Assemble a frame jet on S^2 from coordinate derivatives in (theta, lam)."""
    c, s = np.cos(theta), np.sin(theta)
    grad = np.stack([f_t, f_l / s], axis=-1)
    h11 = f_tt
    h12 = (f_tl - (c / s) * f_l) / s
    h22 = (f_ll + s * c * f_t) / s**2
    hess = np.stack([np.stack([h11, h12], -1), np.stack([h12, h22], -1)], axis=-2)
    return FieldJet(np.asarray(f, dtype=float), grad, hess)


@dataclass(frozen=True)
class HarmonicField:
    """``base + sum(amplitude * Y_{degree, order})`` on S^dim."""

    dim: int
    base: float = 0.0
    terms: tuple = ()  # ((degree, order, amplitude), ...)

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ConfigurationError(f"dim must be 1 or 2, got {self.dim}")
        for l, m, _ in self.terms:
            if l < 0 or abs(m) > l:
                raise ConfigurationError(f"invalid harmonic (degree={l}, order={m})")
            if self.dim == 1 and l > 0 and abs(m) != l:
                raise ConfigurationError(f"S^1 harmonic needs order = +-degree, got ({l}, {m})")

    @property
    def max_degree(self):
        return max((l for l, _, _ in self.terms), default=0)

    def shifted(self, delta):
        return HarmonicField(self.dim, self.base + delta, self.terms)

    def scaled(self, factor):
        return HarmonicField(self.dim, self.base * factor,
                             tuple((l, m, a * factor) for l, m, a in self.terms))

    def values(self, angles):
        return self.jet(angles).value

    def jet(self, angles):
        angles = np.asarray(angles, dtype=float)
        if self.dim == 1:
            th = angles.reshape(-1)
            f = np.full_like(th, self.base)
            f1 = np.zeros_like(th)
            f2 = np.zeros_like(th)
            for l, m, a in self.terms:
                v, d1, d2 = real_sh_s1(l, m, th)
                f += a * v
                f1 += a * d1
                f2 += a * d2
            return FieldJet(f, f1[:, None], f2[:, None, None])
        th, lam = angles[:, 0], angles[:, 1]
        zero = np.zeros_like(th)
        f, ft, fl, ftt, ftl, fll = (np.full_like(th, self.base), zero.copy(), zero.copy(),
                                    zero.copy(), zero.copy(), zero.copy())
        if self.terms:
            P, dP, d2P = legendre_table(self.max_degree, th)
            for l, m, a in self.terms:
                am = abs(m)
                if m == 0:
                    g, g1, g2 = np.ones_like(lam), zero, zero
                    scale = 1.0
                elif m > 0:
                    g, g1, g2 = np.cos(am * lam), -am * np.sin(am * lam), -am * am * np.cos(am * lam)
                    scale = np.sqrt(2.0)
                else:
                    g, g1, g2 = np.sin(am * lam), am * np.cos(am * lam), -am * am * np.sin(am * lam)
                    scale = np.sqrt(2.0)
                p, p1, p2 = scale * a * P[l, am], scale * a * dP[l, am], scale * a * d2P[l, am]
                f = f + p * g
                ft = ft + p1 * g
                fl = fl + p * g1
                ftt = ftt + p2 * g
                ftl = ftl + p1 * g1
                fll = fll + p * g2
        return coordinate_jet_s2(th, f, ft, fl, ftt, ftl, fll)


def degree_one_field(v, dim):
    """HarmonicField equal to <v, xi>."""
    v = np.asarray(v, dtype=float)
    if dim == 1:
        k = np.sqrt(np.pi)
        return HarmonicField(1, 0.0, ((1, 1, k * v[0]), (1, -1, k * v[1])))
    k = np.sqrt(4.0 * np.pi / 3.0)
    return HarmonicField(2, 0.0, ((1, 1, k * v[0]), (1, -1, k * v[1]), (1, 0, k * v[2])))
