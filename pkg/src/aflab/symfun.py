"""Elementary symmetric functions and Newton-tensor eigenvalues.

Everything here works in the principal frame: a curvature tuple is the
last axis of an array, so a whole sample set of shape ``(N, n)`` is
processed in one call.  Leading axes broadcast.
"""

from math import comb

import numpy as np

from .errors import DomainError

__all__ = [
    "elem_sym",
    "elem_sym_all",
    "normalized_mean_curv",
    "newton_eigen",
    "newton_shape_quadratic",
]


def _as_kappa(kappa):
    kappa = np.asarray(kappa, dtype=float)
    if kappa.ndim == 0:
        kappa = kappa[None]
    if kappa.shape[-1] < 1:
        raise DomainError("curvature tuple must have at least one entry")
    return kappa


def elem_sym_all(kappa):
    """Return ``[sigma_0, ..., sigma_n]`` stacked on a new leading axis."""
    kappa = _as_kappa(kappa)
    n = kappa.shape[-1]
    out = np.zeros((n + 1,) + kappa.shape[:-1])
    out[0] = 1.0
    for i in range(n):
        ki = kappa[..., i]
        # descending j so each kappa_i enters a given sigma_j once
        for j in range(i + 1, 0, -1):
            out[j] = out[j] + ki * out[j - 1]
    return out


def elem_sym(kappa, k):
    """k-th elementary symmetric polynomial of the curvature tuple."""
    kappa = _as_kappa(kappa)
    n = kappa.shape[-1]
    if not 0 <= k <= n:
        raise DomainError(f"k={k} outside 0..{n}")
    return elem_sym_all(kappa)[k][()]


def normalized_mean_curv(kappa, k):
    """H_k = sigma_k / C(n, k)."""
    kappa = _as_kappa(kappa)
    n = kappa.shape[-1]
    if not 0 <= k <= n:
        raise DomainError(f"k={k} outside 0..{n}")
    return elem_sym_all(kappa)[k][()] / comb(n, k)


def newton_eigen(kappa, k):
    """Eigenvalues t_k(i) of the k-th Newton tensor, i = 1..n.

    t_k(i) is sigma_k of the tuple with kappa_i removed.  It is computed
    from the reduced tuple directly; the recursion
    t_k(i) = sigma_k - kappa_i t_{k-1}(i) loses digits to cancellation.
    """
    kappa = _as_kappa(kappa)
    n = kappa.shape[-1]
    if not 0 <= k <= n - 1:
        raise DomainError(f"k={k} outside 0..{n - 1}")
    if k == 0:
        return np.ones_like(kappa)
    keep = ~np.eye(n, dtype=bool)
    reduced = np.broadcast_to(kappa[..., None, :], kappa.shape + (n,))[..., keep]
    reduced = reduced.reshape(kappa.shape + (n - 1,))
    return elem_sym_all(reduced)[k]


def newton_shape_quadratic(kappa, k, comps):
    """Pointwise T_{k-1} o A (v, v) for v with principal-frame components ``comps``."""
    kappa = _as_kappa(kappa)
    comps = np.asarray(comps, dtype=float)
    n = kappa.shape[-1]
    if comps.shape[-1:] != (n,):
        raise DomainError(f"comps has length {comps.shape[-1:]} but n={n}")
    if not 1 <= k <= n:
        raise DomainError(f"k={k} outside 1..{n}")
    t = newton_eigen(kappa, k - 1)
    return np.sum(kappa * t * comps**2, axis=-1)[()]
