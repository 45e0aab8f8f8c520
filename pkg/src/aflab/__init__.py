"""Curvature integrals of closed hypersurfaces in R^2 and R^3, with
residual checks for integral identities and slack checks for inequalities
of Alexandrov-Fenchel type."""

from .checks import CheckResult, registry, run_check, run_suite
from .errors import (
    AflabError,
    ConfigurationError,
    ConvexityError,
    DomainError,
    HypothesisError,
    PhiDomainError,
    RegularityError,
    StarShapedError,
    UsageError,
)
from .expr import parse_expression
from .geometry import ball, default_grid, ellipse, grid_s1, grid_s2, sample
from .specfile import parse_shape_spec

__version__ = "0.1.0"

__all__ = [
    "AflabError",
    "CheckResult",
    "ConfigurationError",
    "ConvexityError",
    "DomainError",
    "HypothesisError",
    "PhiDomainError",
    "RegularityError",
    "StarShapedError",
    "UsageError",
    "ball",
    "default_grid",
    "ellipse",
    "grid_s1",
    "grid_s2",
    "parse_expression",
    "parse_shape_spec",
    "registry",
    "run_check",
    "run_suite",
    "sample",
]
