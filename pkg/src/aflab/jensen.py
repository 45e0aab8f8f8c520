"""Weight functions phi and the Jensen / Taylor deficit.

The deficit of a weight phi against the probability-like measure H_k dmu is
written through Taylor's theorem with integral remainder,

    phi(u) = phi(ubar) + phi'(ubar)(u - ubar) + int_ubar^u phi''(t)(u - t) dt,

and the linear term integrates away by the Minkowski formula when
ubar = I_{k-1}/I_k.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import inf

import numpy as np
from scipy import integrate

from .errors import ConfigurationError, DomainError, HypothesisError, PhiDomainError
from .measures import quermass


@dataclass(frozen=True)
class Domain:
    lo: float = -inf
    hi: float = inf
    lo_open: bool = False

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        above = x > self.lo if self.lo_open else x >= self.lo
        return above & (x <= self.hi) & np.isfinite(x)

    def __str__(self):
        return f"{'(' if self.lo_open else '['}{self.lo}, {self.hi})"


REAL_LINE = Domain()
POSITIVE = Domain(0.0, inf, lo_open=True)
NONNEGATIVE = Domain(0.0, inf, lo_open=False)


@dataclass(frozen=True, eq=False)
class PhiSpec:
    id: str
    m: float
    value: object
    d1: object
    d2: object
    domain: Domain
    # d2 is monotone on the domain, so its extremes sit at interval ends
    monotone_d2: bool = True

    @property
    def label(self):
        return self.id if self.m is None else f"{self.id}{self.m:g}"

    def require(self, x, what="argument"):
        x = np.asarray(x, dtype=float)
        ok = self.domain.contains(x)
        if not np.all(ok):
            j = int(np.flatnonzero(~np.ravel(ok))[0])
            raise PhiDomainError(f"{what} {np.ravel(x)[j]:.6g} outside the domain {self.domain} of "
                              f"{self.label}", node=j)
        return x

    def psi(self, t):
        """t * phi(t)."""
        return t * self.value(t)


FAMILIES = ("identity", "square", "reciprocal", "power", "neg_power", "log", "inv_one_plus_pow")


def _inv_one_plus_pow_values(m):
    def d1(x):
        return 1.0 / (1.0 + np.asarray(x, dtype=float) ** m)

    def value(x):
        return _cumulative_integral(d1, np.asarray(x, dtype=float))

    def d2(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return -m * x ** (m - 1) / (1.0 + x**m) ** 2

    return value, d1, d2


_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


def _cumulative_integral(f, x):
    """int_0^x f for every entry of x >= 0.

    Sorted points are joined by increments: adaptive quadrature from 0 (which
    copes with the t^m kink there) and on long steps, 20-point Gauss-Legendre
    on the short ones.
    """
    flat = np.ravel(x)
    order = np.argsort(flat, kind="stable")
    b = flat[order]
    a = np.concatenate([[0.0], b[:-1]])
    long = (a <= 0.0) | (b - a > 0.25 * a)
    inc = np.zeros_like(b)
    short = ~long & (b > a)
    if np.any(short):
        mid, half = 0.5 * (a[short] + b[short]), 0.5 * (b[short] - a[short])
        inc[short] = half * (f(mid[:, None] + half[:, None] * _GL_X) @ _GL_W)
    for i in np.flatnonzero(long & (b > a)):
        inc[i] = integrate.quad(f, a[i], b[i], epsabs=1e-15, epsrel=1e-13, limit=200)[0]
    res = np.empty_like(b)
    res[order] = np.cumsum(inc)
    return res.reshape(np.shape(x))


@lru_cache(maxsize=64)
def phi_catalog(family, m=None):
    """The PhiSpec of a catalog family.

    Parameter ranges: power and neg_power take m > 0; inv_one_plus_pow takes
    0 < m <= 2 and is normalized by phi(0) = 0.
    """
    if family in ("identity", "square", "reciprocal", "log"):
        if m is not None:
            raise ConfigurationError(f"{family} takes no parameter")
    elif family in ("power", "neg_power", "inv_one_plus_pow"):
        if m is None:
            raise ConfigurationError(f"{family} needs a parameter m")
        m = float(m)
        if not m > 0 or (family == "inv_one_plus_pow" and m > 2):
            rng = "0 < m <= 2" if family == "inv_one_plus_pow" else "m > 0"
            raise ConfigurationError(f"{family} needs {rng}, got m={m}")
    else:
        raise ConfigurationError(f"unknown phi family {family!r}; expected one of {FAMILIES}")

    if family == "identity":
        return PhiSpec(family, None, lambda x: np.asarray(x, dtype=float) * 1.0,
                       lambda x: np.ones_like(np.asarray(x, dtype=float)),
                       lambda x: np.zeros_like(np.asarray(x, dtype=float)), REAL_LINE)
    if family == "square":
        return PhiSpec(family, None, lambda x: np.asarray(x, dtype=float) ** 2,
                       lambda x: 2.0 * np.asarray(x, dtype=float),
                       lambda x: np.full_like(np.asarray(x, dtype=float), 2.0), REAL_LINE)
    if family == "reciprocal":
        return PhiSpec(family, None, lambda x: 1.0 / np.asarray(x, dtype=float),
                       lambda x: -1.0 / np.asarray(x, dtype=float) ** 2,
                       lambda x: 2.0 / np.asarray(x, dtype=float) ** 3, POSITIVE)
    if family == "log":
        return PhiSpec(family, None, lambda x: np.log(np.asarray(x, dtype=float)),
                       lambda x: 1.0 / np.asarray(x, dtype=float),
                       lambda x: -1.0 / np.asarray(x, dtype=float) ** 2, POSITIVE)
    if family == "power":
        return PhiSpec(family, m, lambda x: np.asarray(x, dtype=float) ** m,
                       lambda x: m * np.asarray(x, dtype=float) ** (m - 1),
                       lambda x: m * (m - 1) * np.asarray(x, dtype=float) ** (m - 2), POSITIVE)
    if family == "neg_power":
        return PhiSpec(family, m, lambda x: np.asarray(x, dtype=float) ** -m,
                       lambda x: -m * np.asarray(x, dtype=float) ** (-m - 1),
                       lambda x: m * (m + 1) * np.asarray(x, dtype=float) ** (-m - 2), POSITIVE)
    value, d1, d2 = _inv_one_plus_pow_values(m)
    # phi'' = -m x^{m-1}/(1+x^m)^2 rises then falls for m > 1
    return PhiSpec(family, m, value, d1, d2, NONNEGATIVE if m >= 1 else POSITIVE,
                   monotone_d2=m <= 1)


def parse_phi(text):
    """``"square"``, ``"power0.5"``, ``"inv_one_plus_pow2"`` -> PhiSpec."""
    for family in sorted(FAMILIES, key=len, reverse=True):
        if text.startswith(family):
            rest = text[len(family):]
            if not rest:
                return phi_catalog(family)
            try:
                return phi_catalog(family, float(rest))
            except ValueError:
                break
    raise ConfigurationError(f"cannot parse phi id {text!r}")


@dataclass(frozen=True)
class RangeInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def of(cls, values):
        values = np.asarray(values, dtype=float)
        return cls(float(values.min()), float(values.max()))


def taylor_remainder(phi, u, ubar):
    """phi(u) - phi(ubar) - phi'(ubar) (u - ubar), vectorized over u."""
    u = phi.require(u, "u")
    phi.require(ubar, "ubar")
    vals = phi.value(np.append(np.ravel(u), ubar))
    fu, fbar = vals[:-1].reshape(u.shape), vals[-1]
    return fu - fbar - phi.d1(ubar) * (u - ubar)


_REM_X, _REM_W = np.polynomial.legendre.leggauss(40)


def integral_remainder(phi, u, ubar):
    """int_ubar^u phi''(t) (u - t) dt by 40-point Gauss-Legendre per node."""
    u = np.atleast_1d(phi.require(u, "u"))
    phi.require(ubar, "ubar")
    half = 0.5 * (u - ubar)
    t = ubar + half[:, None] * (1.0 + _REM_X[None, :])
    vals = phi.d2(t) * (u[:, None] - t)
    return half * (vals @ _REM_W)


def _deficit_setup(samples, k, phi):
    Hk = samples.H(k)
    scale = max(float(np.max(np.abs(samples.kappa))) ** k, 1e-300)
    if np.any(Hk < -1e-10 * scale):
        j = int(np.argmin(Hk))
        raise HypothesisError(f"H_{k} = {Hk[j]:.6g} < 0 at node {j}")
    Ik = quermass(samples, k)
    if not Ik > 0:
        raise HypothesisError(f"I_{k} = {Ik:.6g} is not positive")
    ubar = quermass(samples, k - 1) / Ik
    phi.require(samples.u, "support value")
    return Hk, Ik, ubar


def jensen_deficit(samples, k, phi):
    """Integral of H_k times the Taylor remainder of phi about I_{k-1}/I_k."""
    Hk, _, ubar = _deficit_setup(samples, k, phi)
    return float(np.dot(Hk * taylor_remainder(phi, samples.u, ubar), samples.mu))


def jensen_deficit_direct(samples, k, phi):
    """Integral of H_k phi(u) minus I_k phi(I_{k-1}/I_k)."""
    Hk, Ik, ubar = _deficit_setup(samples, k, phi)
    vals = phi.value(np.append(samples.u, ubar))
    return float(np.dot(Hk * vals[:-1], samples.mu)) - Ik * float(vals[-1])


def second_derivative_bounds(phi, interval):
    """(min, max) of phi'' over the interval: endpoints plus a 1024-point scan."""
    phi.require([interval.lo, interval.hi], "interval end")
    pts = np.concatenate([[interval.lo, interval.hi], np.linspace(interval.lo, interval.hi, 1024)])
    vals = phi.d2(pts)
    if not phi.monotone_d2 and phi.id == "inv_one_plus_pow":
        # interior extremum of -m x^{m-1}/(1+x^m)^2 at x^m = (m-1)/(m+1)
        m = phi.m
        xs = ((m - 1) / (m + 1)) ** (1 / m)
        if interval.lo < xs < interval.hi:
            vals = np.append(vals, phi.d2(xs))
    return float(np.min(vals)), float(np.max(vals))
