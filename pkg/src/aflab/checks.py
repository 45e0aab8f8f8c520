"""Registry of identity and inequality checks with hypothesis gating.

Each check evaluates two sides on the requested grid and again on the grid
refined by a factor of two.  Identities report the residual |lhs - rhs|,
inequalities (lhs <= rhs) report the slack rhs - lhs.  The tolerance is

    tol = max(1e-9 * scale, 4 * |value(N) - value(2N)|),

where scale is the largest of |lhs|, |rhs| and the magnitude of the
individual terms entering the sides (so exact equality cases, where both
sides vanish, still get a meaningful tolerance).
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb, log

import numpy as np

from .errors import AflabError, DomainError, HypothesisError, PhiDomainError, UsageError
from .geometry.hypotheses import check_hypotheses
from .geometry.sampling import sample
from .jensen import (
    RangeInterval,
    integral_remainder,
    parse_phi,
    second_derivative_bounds,
    taylor_remainder,
)
from .measures import (
    Ball,
    body_constants,
    diameter,
    isoperimetric_deficit,
    min_enclosing_ball,
    newton_form_integral,
    quermass,
    steiner_point_from_samples,
    volume,
    weighted_curvature_integral,
    weighted_L2_distance_sq,
)
from .symfun import elem_sym

ORIGIN_POLICIES = ("as-given", "circumcenter", "steiner-point")
PHI_IDS = ("identity", "square", "reciprocal", "log", "power0.5", "neg_power0.5",
           "inv_one_plus_pow0.5", "inv_one_plus_pow1", "inv_one_plus_pow2")
TAN_M = (0.5, 1.0, 1.5, 2.0)
UM_I_M = (0.0, 0.25, 0.5, 0.75)
UM_II_M = (0.0, 0.5, 1.0)
REL_TOL = 1e-9
STEINER_TRIALS = 50


@dataclass(frozen=True)
class CheckSpec:
    id: str
    kind: str  # identity | inequality
    k: int
    evaluate: object = field(repr=False)
    params: dict = field(default_factory=dict)
    hypotheses: tuple = ()  # (level, k) pairs
    origin_policy: str = "as-given"
    exploratory: bool = False


@dataclass
class CheckResult:
    id: str
    kind: str
    lhs: float
    rhs: float
    residual_or_slack: float
    tol: float
    verdict: str
    hypothesis_status: str
    grid: dict
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict == "pass"


@dataclass
class Outcome:
    lhs: float
    rhs: float
    term_scale: float = 0.0
    details: dict = field(default_factory=dict)


class Quantities:
    """Cached integral quantities of one (already re-centered) sample set."""

    def __init__(self, samples, radius=None):
        self.samples = samples
        self.n = samples.dim
        self.consts = body_constants(self.n)
        self.radius = radius
        self._I = {}

    def I(self, k):
        if k not in self._I:
            self._I[k] = quermass(self.samples, k)
        return self._I[k]

    def d2(self, k, r, center=None):
        c = np.zeros(self.n + 1) if center is None else center
        return weighted_L2_distance_sq(self.samples, k, Ball(c, r))

    def N(self, k, psi=None):
        return newton_form_integral(self.samples, k, psi)

    def hx2(self, k, center=None):
        X = self.samples.X if center is None else self.samples.X - center
        return weighted_curvature_integral(self.samples, k, np.einsum("ij,ij->i", X, X))

    @property
    def circumradius(self):
        if self.radius is None:
            self.radius = float(np.sqrt(np.max(self.samples.r2)))
        return self.radius

    def deficit(self, k):
        return self.I(k - 1) ** 2 - self.I(k) * self.I(k - 2)

    def thm1_lhs(self, center=None):
        n, w = self.n, self.consts.omega_n
        return self.hx2(n, center) - (n + 1) / w * self.I(n - 1) ** 2 + n * self.I(n - 2)


# -- evaluators -------------------------------------------------------------


def _minkowski(q, k, p):
    return Outcome(q.I(k - 1), weighted_curvature_integral(q.samples, k, q.samples.u))


def _af_identity(q, k, p):
    r = q.I(k - 1) / q.I(k)
    dterm = q.deficit(k) / q.I(k)
    dist = q.d2(k, r)
    rhs = q.N(k)
    return Outcome(dterm + dist, rhs, max(abs(dterm), dist, q.I(k - 1) ** 2 / q.I(k)),
                   {"deficit_term": dterm, "distance_term": dist})


def _phi_values(q, phi):
    """phi at every u (cached per sample set)."""
    key = ("phi", phi.label)
    cache = q.samples._cache
    if key not in cache:
        cache[key] = phi.value(phi.require(q.samples.u, "support value"))
    return cache[key]


def _weighted_minkowski(q, k, p):
    phi = p["phi"]
    s = q.samples
    fu = _phi_values(q, phi)
    lhs = float(np.dot(fu * (s.H(k - 1) - s.H(k) * s.u), s.mu))
    rhs = -q.N(k, phi.d1)
    scale = float(np.dot(np.abs(fu) * (np.abs(s.H(k - 1)) + np.abs(s.H(k) * s.u)), s.mu))
    # |T_{k-1}(X^T, X^T)| <= sigma_{k-1}(|kappa|) |X|^2
    with np.errstate(divide="ignore", invalid="ignore"):
        d1 = np.abs(phi.d1(s.u))
    bound = elem_sym(np.abs(s.kappa), k - 1) * s.r2 * d1
    scale += float(np.dot(bound, s.mu)) / (k * comb(s.dim, k))
    return Outcome(lhs, rhs, scale)


def _ubar(q, k):
    Ik = q.I(k)
    if not Ik > 0:
        raise HypothesisError(f"I_{k} = {Ik:.6g} is not positive")
    return q.I(k - 1) / Ik


def _phi_scale(q, k, phi, ubar):
    """Size of I_k phi near ubar: value, slope and curvature terms."""
    f0, f1, f2 = (abs(float(np.ravel(g(np.array([ubar])))[0])) for g in (phi.value, phi.d1, phi.d2))
    return q.I(k) * (f0 + f1 * ubar + f2 * ubar * ubar)


def _supp_identity(q, k, p):
    phi = p["phi"]
    s = q.samples
    ubar = _ubar(q, k)
    phi.require(ubar, "ubar")
    Hk = s.H(k)
    fu = _phi_values(q, phi)
    lhs = float(np.dot(Hk * fu, s.mu))
    fbar = float(phi.value(np.array([ubar]))[0])
    rem = float(np.dot(Hk * integral_remainder(phi, s.u, ubar), s.mu))
    rhs = q.I(k) * fbar + rem
    taylor = float(np.dot(Hk * (fu - fbar - phi.d1(ubar) * (s.u - ubar)), s.mu))
    scale = max(float(np.dot(np.abs(Hk * fu), s.mu)), abs(rem), _phi_scale(q, k, phi, ubar))
    return Outcome(lhs, rhs, scale, {"remainder_quadrature": rem, "remainder_taylor": taylor})


def _supp_jensen_bounds(q, k, p):
    phi = p["phi"]
    s = q.samples
    ubar = _ubar(q, k)
    dist = q.d2(k, ubar)
    lo_d2, hi_d2 = second_derivative_bounds(phi, RangeInterval.of(s.u))
    deficit = float(np.dot(s.H(k) * taylor_remainder(phi, s.u, ubar), s.mu))
    lower, upper = 0.5 * lo_d2 * dist, 0.5 * hi_d2 * dist
    details = {"lower": lower, "deficit": deficit, "upper": upper}
    scale = max(abs(lower), abs(upper), _phi_scale(q, k, phi, ubar))
    if deficit - lower <= upper - deficit:
        return Outcome(lower, deficit, scale, details)
    return Outcome(deficit, upper, scale, details)


def _hn_x2(q, k, p):
    n, w = q.n, q.consts.omega_n
    dist = q.d2(n, q.I(n - 1) / w)
    hx2 = q.hx2(n)
    rhs = hx2 - ((n + 1) * q.I(n - 1) ** 2 - n * w * q.I(n - 2)) / w
    return Outcome(n * dist, rhs, hx2, {"delta2_sq": dist})


def _thm1(q, k, p):
    n, w = q.n, q.consts.omega_n
    r = q.I(n - 1) / w
    dist = q.d2(n, r)
    lhs = q.thm1_lhs()
    return Outcome(lhs, (n + 1) * dist, q.hx2(n), {"radius": r, "delta2_sq": dist})


def _circumradius(q, k, p):
    return Outcome(q.I(k - 1) / q.I(k), q.circumradius, q.circumradius)


def _rn_inv_u(q, k, p):
    r = q.circumradius
    D = q.deficit(k)
    dist = q.d2(k - 1, q.I(k - 2) / q.I(k - 1))
    first = D / q.I(k - 2)
    lhs = first + dist / r**3
    return Outcome(lhs, q.N(k, lambda u: 1.0 / u**2), q.I(k - 1) ** 2 / q.I(k - 2),
                   {"deficit_term": first})


def _rn_log(q, k, p):
    r = q.circumradius
    a, b, c = q.I(k - 1), q.I(k), q.I(k - 2)
    first = a * log(a * a / (b * c))
    dk = q.d2(k, a / b)
    dk1 = q.d2(k - 1, c / a)
    lhs = first + dk / (2 * r) + dk1 / (2 * r * r)
    return Outcome(lhs, q.N(k, lambda u: 1.0 / u), a, {"deficit_term": first})


def _tan_rn(q, k, p):
    m = p["m"]
    r = q.circumradius
    a, b = q.I(k - 1), q.I(k)
    first = b ** (m - 1) * q.deficit(k) / (b**m + a**m)
    lhs = first + (2 + (2 - m) * r**m) / (2 * (1 + r**m) ** 2) * q.d2(k, a / b)
    if m <= 1:
        lhs += m / (2 * (1 + r**m) ** 2 * r ** (1 - m)) * q.d2(k - 1, q.I(k - 2) / a)
    scale = b ** (m - 1) * a * a / (b**m + a**m)
    return Outcome(lhs, q.N(k, lambda u: 1.0 / (1.0 + u**m)), scale, {"deficit_term": first})


def _um_rn_i(q, k, p):
    m = p["m"]
    r = q.circumradius
    a, b = q.I(k - 1), q.I(k)
    first = (b / a) ** (1 - m) * q.deficit(k) / b
    lhs = (first + (m + 1) / (2 * r ** (1 - m)) * q.d2(k, a / b)
           + (1 - m) / (2 * r ** (2 - m)) * q.d2(k - 1, q.I(k - 2) / a))
    scale = (b / a) ** (1 - m) * a * a / b
    return Outcome(lhs, q.N(k, lambda u: u ** (m - 1)), scale, {"deficit_term": first})


def _um_rn_ii(q, k, p):
    m = p["m"]
    r = q.circumradius
    a, b, c = q.I(k - 1), q.I(k), q.I(k - 2)
    first = (c / a) ** (1 - m) * q.deficit(k) / c
    lhs = (first + (1 - m) / (2 * r ** (m + 1)) * q.d2(k, a / b)
           + (m + 1) / (2 * r ** (m + 2)) * q.d2(k - 1, c / a))
    scale = (c / a) ** (1 - m) * a * a / c
    return Outcome(lhs, q.N(k, lambda u: u ** (-(m + 1))), scale, {"deficit_term": first})


def _af_classical(q, k, p):
    return Outcome(q.I(k) * q.I(k - 2), q.I(k - 1) ** 2)


def _km_weight(q, k, p):
    return Outcome(q.I(-1), q.hx2(1))


def _girao_weight(q, k, p):
    n, w = q.n, q.consts.omega_n
    return Outcome(w * (q.I(0) / w) ** ((n + 1) / n), q.hx2(1))


def _km2_weight(q, k, p):
    return Outcome(q.I(k - 2), q.hx2(k))


def _steiner_ball(q):
    s = q.samples
    z = steiner_point_from_samples(s)
    R = q.I(q.n - 1) / q.consts.omega_n  # half the mean width
    return z, R


def _steiner_min(q, k, p):
    n, w = q.n, q.consts.omega_n
    z, R = _steiner_ball(q)
    at_z = q.hx2(n, z)
    rng = np.random.default_rng(p.get("seed", 0))
    dirs = rng.standard_normal((STEINER_TRIALS, n + 1))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    radii = R * rng.uniform(0.0, 1.0, STEINER_TRIALS) ** (1.0 / (n + 1))
    best = min(q.hx2(n, z + t) for t in dirs * radii[:, None])
    dist = q.d2(n, R, z)
    predicted = (n + 1) / w * q.I(n - 1) ** 2 - n * q.I(n - 2) + (n + 1) * dist
    return Outcome(at_z, best, at_z, {"steiner_point": z.tolist(),
                                      "corollary_residual": abs(at_z - predicted)})


def _groemer(q, k, p):
    n, c = q.n, q.consts
    z, R = _steiner_ball(q)
    vol = volume(q.samples)
    dist = q.d2(n, R, z)
    lhs = c.eta_n * vol**n / q.I(n - 2) * dist
    area_term = (q.I(0) / c.omega_n) ** (n + 1)
    return Outcome(lhs, isoperimetric_deficit(q.samples), area_term, {"delta2_sq": dist})


def _cor_isop(q, k, p):
    n, c = q.n, q.consts
    lhs = q.thm1_lhs()
    vol = volume(q.samples)
    rhs = (n + 1) * q.I(n - 2) / (c.eta_n * vol**n) * isoperimetric_deficit(q.samples)
    return Outcome(lhs, rhs, q.hx2(n))


def _hausdorff_l2(q, k, p):
    n, s = q.n, q.samples
    z, R = _steiner_ball(q)
    gap = s.u - R - s.nu @ z
    haus = float(np.max(np.abs(gap)))
    dist = q.d2(n, R, z)
    # diameter of the union of the body and its Steiner ball
    D = max(diameter(s.X), 2 * R, float(np.max(np.linalg.norm(s.X - z, axis=1))) + R)
    lhs = q.consts.c_n * D ** (-n) * haus ** (n + 2)
    return Outcome(lhs, dist, q.consts.c_n * D**2, {"hausdorff": haus, "diameter": D})


# -- registry ---------------------------------------------------------------


def _spec(id, kind, k, fn, hyp=(), origin="as-given", exploratory=False, **params):
    return CheckSpec(id, kind, k, fn, params, tuple(hyp), origin, exploratory)


def registry(dim):
    """All checks applicable to surfaces of dimension ``dim`` (1 or 2), keyed by id."""
    if dim not in (1, 2):
        raise UsageError(f"checks exist for dim 1 and 2, got {dim}")
    n = dim
    specs = []
    for k in range(1, n + 1):
        specs.append(_spec(f"minkowski-{k}", "identity", k, _minkowski))
        specs.append(_spec(f"af-identity-{k}", "identity", k, _af_identity, [("k-convex", k)]))
        for pid in PHI_IDS:
            specs.append(_spec(f"weighted-minkowski-{pid}-{k}", "identity", k, _weighted_minkowski,
                               phi=parse_phi(pid)))
        specs.append(_spec(f"rn-inv-u-{k}", "inequality", k, _rn_inv_u,
                           [("star-shaped", None), ("k-positive", k - 1)], "circumcenter"))
        specs.append(_spec(f"rn-log-{k}", "inequality", k, _rn_log,
                           [("star-shaped", None), ("k-positive", k)], "circumcenter"))
        for m in TAN_M:
            specs.append(_spec(f"tan-rn-{k}-{m:g}", "inequality", k, _tan_rn, [("convex", None)],
                               "circumcenter", m=m))
        for m in UM_I_M:
            specs.append(_spec(f"um-rn-i-{k}-{m:g}", "inequality", k, _um_rn_i,
                               [("strictly-convex", None)], "circumcenter", m=m))
        for m in UM_II_M:
            specs.append(_spec(f"um-rn-ii-{k}-{m:g}", "inequality", k, _um_rn_ii,
                               [("strictly-convex", None)], "circumcenter", m=m))
        specs.append(_spec(f"af-classical-{k}", "inequality", k, _af_classical, [("convex", None)],
                           exploratory=True))
    for k in range(0, n + 1):
        for pid in PHI_IDS:
            phi = parse_phi(pid)
            specs.append(_spec(f"supp-identity-{pid}-{k}", "identity", k, _supp_identity,
                               [("k-convex", k)], phi=phi))
            specs.append(_spec(f"supp-jensen-bounds-{pid}-{k}", "inequality", k,
                               _supp_jensen_bounds, [("k-convex", k)], phi=phi))
        specs.append(_spec(f"circumradius-{k}", "inequality", k, _circumradius,
                           [("k-positive", k)], "circumcenter"))
    for k in range(2, n + 1):
        specs.append(_spec(f"km2-weight-{k}", "inequality", k, _km2_weight, [("k-positive", k)]))
    convex = [("convex", None)]
    specs += [
        _spec("hn-x2", "inequality", n, _hn_x2, convex),
        _spec("thm1-identity", "identity", n, _thm1, convex),
        _spec("km-weight", "inequality", 1, _km_weight, [("star-shaped", None), ("k-convex", 1)]),
        _spec("girao-weight", "inequality", 1, _girao_weight,
              [("star-shaped", None), ("k-convex", 1)]),
        _spec("steiner-min", "inequality", n, _steiner_min, convex, seed=0),
        _spec("groemer-bound", "inequality", n, _groemer, convex),
        _spec("cor-isop", "inequality", n, _cor_isop, convex, "steiner-point"),
        _spec("hausdorff-l2", "inequality", n, _hausdorff_l2, convex),
    ]
    return {s.id: s for s in sorted(specs, key=lambda s: s.id)}


TABLE1 = ("af-identity-1", "hn-x2", "rn-inv-u-1", "rn-log-1", "tan-rn-1-0.5", "tan-rn-1-1.5",
          "um-rn-i-1-0.5", "um-rn-ii-1-0.5")


def select(dim, selection):
    """Resolve ``"all"``, ``"table1"`` or a list of ids to sorted CheckSpecs."""
    reg = registry(dim)
    if selection in ("all", None):
        return list(reg.values())
    if selection == "table1":
        if dim != 1:
            raise UsageError("the table1 selection applies to plane curves (dim 1)")
        selection = TABLE1
    if isinstance(selection, str):
        selection = [s for s in selection.split(",") if s]
    unknown = [s for s in selection if s not in reg]
    if unknown:
        raise UsageError(f"unknown check id(s) for dim {dim}: {', '.join(unknown)}")
    return [reg[s] for s in sorted(set(selection))]


# -- evaluation --------------------------------------------------------------


class SuiteContext:
    """Samples of one shape, per grid and origin policy, computed once."""

    def __init__(self, shape, grid):
        self.shape = shape
        self.grid = grid
        self._cache = {}

    def samples(self, grid, policy):
        key = (grid.label, policy)
        if key not in self._cache:
            if policy == "as-given":
                self._cache[key] = (sample(self.shape, grid), None)
            else:
                base, _ = self.samples(grid, "as-given")
                if policy == "circumcenter":
                    ball = min_enclosing_ball(base.X)
                    self._cache[key] = (base.translated(-ball.center), ball.radius)
                elif policy == "steiner-point":
                    self._cache[key] = (base.translated(-steiner_point_from_samples(base)), None)
                else:
                    raise UsageError(f"unknown origin policy {policy!r}")
        return self._cache[key]

    def quantities(self, grid, policy):
        key = ("q", grid.label, policy)
        if key not in self._cache:
            s, radius = self.samples(grid, policy)
            self._cache[key] = Quantities(s, radius)
        return self._cache[key]


def _hypothesis_status(samples, spec):
    for level, k in spec.hypotheses:
        rep = check_hypotheses(samples, level, k)
        if not rep.passed:
            return False, rep.describe()
    return True, "pass"


def _value(kind, out):
    d = out.lhs - out.rhs
    return abs(d) if kind == "identity" else -d


def run_check(spec, shape, grid, context=None, refine=True):
    """Evaluate one check on ``shape`` at ``grid`` (and at the refined grid for the tolerance)."""
    ctx = context or SuiteContext(shape, grid)
    q = ctx.quantities(grid, spec.origin_policy)
    ok, status = _hypothesis_status(q.samples, spec)
    meta = {"size": grid.label}
    try:
        out = spec.evaluate(q, spec.k, spec.params)
    except (DomainError, HypothesisError) as exc:
        if ok and not isinstance(exc, PhiDomainError):
            raise
        if ok:
            status = f"phi domain: {exc}"
        return CheckResult(spec.id, spec.kind, float("nan"), float("nan"), float("nan"), 0.0,
                           "skipped-hypothesis", status, meta, {"error": str(exc)})
    value = _value(spec.kind, out)
    delta = 0.0
    if refine:
        fine = grid.refined()
        qf = ctx.quantities(fine, spec.origin_policy)
        try:
            out_f = spec.evaluate(qf, spec.k, spec.params)
            delta = abs((out.lhs - out.rhs) - (out_f.lhs - out_f.rhs))
            meta["refined"] = fine.label
        except AflabError:
            delta = float("nan")
        meta["refinement_delta"] = delta
    scale = max(abs(out.lhs), abs(out.rhs), abs(out.term_scale))
    tol = max(REL_TOL * scale, 4.0 * delta) if np.isfinite(delta) else REL_TOL * scale
    details = dict(out.details)
    if not ok:
        verdict = "skipped-hypothesis"
        if spec.exploratory:
            details["exploratory_slack"] = value
    elif spec.kind == "identity":
        verdict = "pass" if value < tol else "fail"
    else:
        verdict = "pass" if value >= -tol else "fail"
    return CheckResult(spec.id, spec.kind, float(out.lhs), float(out.rhs), float(value), float(tol),
                       verdict, status, meta, details)


def _workers():
    try:
        return max(1, int(os.environ.get("AFLAB_THREADS", "1")))
    except ValueError:
        raise UsageError("AFLAB_THREADS must be a positive integer") from None


def run_suite(shape, grid, selection="all", refine=True):
    """Run the selected checks; results come back sorted by id."""
    specs = select(shape.dim, selection)
    ctx = SuiteContext(shape, grid)
    # warm the shared caches before any parallel map
    for policy in sorted({s.origin_policy for s in specs}):
        ctx.quantities(grid, policy)
        if refine:
            ctx.quantities(grid.refined(), policy)
    workers = _workers()
    if workers == 1:
        return [run_check(s, shape, grid, ctx, refine) for s in specs]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(lambda s: run_check(s, shape, grid, ctx, refine), specs))


def convergence_study(shape, check_id, grids):
    """(grid label, residual_or_slack, lhs, rhs) per grid, without refinement."""
    if len(grids) < 2:
        raise UsageError("a convergence study needs at least two grids")
    spec = select(shape.dim, [check_id])[0]
    rows = []
    for g in grids:
        res = run_check(spec, shape, g, refine=False)
        rows.append((g.label, res.residual_or_slack, res.lhs, res.rhs))
    return rows
