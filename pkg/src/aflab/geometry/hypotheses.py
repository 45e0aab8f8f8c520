"""Pointwise convexity and star-shapedness tests on sample sets."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import UsageError

LEVELS = ("convex", "strictly-convex", "k-convex", "k-positive", "star-shaped")

# relative slack for sign tests; curvature quantities are compared with
# REL_TOL * (max |kappa|)^j, support values with REL_TOL * max |X|
REL_TOL = 1e-10


@dataclass(frozen=True)
class HypothesisReport:
    level: str
    passed: bool
    worst_node: int = None
    worst_value: float = None
    minima: dict = field(default_factory=dict)

    @property
    def status(self):
        return "pass" if self.passed else "fail"

    def describe(self):
        if self.passed:
            return f"{self.level}: pass"
        return f"{self.level}: fail at node {self.worst_node} (value {self.worst_value:.6g})"


def check_hypotheses(samples, level, k=None):
    """Report whether ``samples`` satisfy a convexity or star-shapedness level.

    ``k-convex`` means H_j >= 0 for 1 <= j <= k, ``k-positive`` means
    H_j > 0 for 1 <= j <= k; ``convex``/``strictly-convex`` test every
    principal curvature; ``star-shaped`` requires u > 0 (every ray from the
    origin crosses the surface transversally).
    """
    if len(samples) == 0:
        raise UsageError("empty sample set")
    n = samples.dim
    curv_scale = max(float(np.max(np.abs(samples.kappa))), 1e-300)
    minima = {}

    def worst(values, name):
        j = int(np.argmin(values))
        minima[name] = float(values[j])
        return j, float(values[j])

    if level in ("convex", "strictly-convex"):
        kmin = np.min(samples.kappa, axis=1)
        j, v = worst(kmin, "kappa_min")
        ok = v > REL_TOL * curv_scale if level == "strictly-convex" else v >= -REL_TOL * curv_scale
        return HypothesisReport(level, bool(ok), None if ok else j, None if ok else v, minima)
    if level in ("k-convex", "k-positive"):
        if k is None or not 0 <= k <= n:
            raise UsageError(f"{level} needs 0 <= k <= {n}, got {k}")
        result = HypothesisReport(f"{level}({k})", True, minima=minima)
        for i in range(1, k + 1):
            j, v = worst(samples.H(i), f"H{i}")
            tol = REL_TOL * curv_scale**i
            ok = v > tol if level == "k-positive" else v >= -tol
            if not ok and result.passed:
                result = HypothesisReport(f"{level}({k})", False, j, v, minima)
        return HypothesisReport(result.level, result.passed, result.worst_node, result.worst_value,
                                minima)
    if level == "star-shaped":
        scale = float(np.sqrt(np.max(samples.r2)))
        j, v = worst(samples.u, "u")
        ok = v > REL_TOL * scale
        return HypothesisReport(level, bool(ok), None if ok else j, None if ok else v, minima)
    raise UsageError(f"unknown hypothesis level {level!r}; expected one of {LEVELS}")
