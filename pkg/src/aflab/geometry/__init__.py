"""Shapes, spherical grids and surface sampling."""

from .grids import SphereGrid, default_grid, grid_s1, grid_s2, parse_grid
from .harmonics import FieldJet, HarmonicField
from .hypotheses import HypothesisReport, check_hypotheses
from .sampling import (
    SurfaceSample,
    SurfaceSamples,
    sample,
    sample_parametric_curve,
    sample_radial_graph,
    sample_support_body,
)
from .shapes import (
    FunctionField,
    GridField,
    ParametricCurve,
    RadialGraph,
    SupportBody,
    ball,
    ellipse,
    random_radial_graph,
    random_support_body,
    translate,
)

__all__ = [
    "FieldJet",
    "FunctionField",
    "GridField",
    "HarmonicField",
    "HypothesisReport",
    "ParametricCurve",
    "RadialGraph",
    "SphereGrid",
    "SupportBody",
    "SurfaceSample",
    "SurfaceSamples",
    "ball",
    "check_hypotheses",
    "default_grid",
    "ellipse",
    "grid_s1",
    "grid_s2",
    "parse_grid",
    "random_radial_graph",
    "random_support_body",
    "sample",
    "sample_parametric_curve",
    "sample_radial_graph",
    "sample_support_body",
    "translate",
]
