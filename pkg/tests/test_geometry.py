import numpy as np
import pytest

from aflab.errors import (
    ConfigurationError,
    ConvexityError,
    RegularityError,
    StarShapedError,
    UsageError,
)
from aflab.expr import parse_expression
from aflab.geometry import (
    GridField,
    HarmonicField,
    ParametricCurve,
    RadialGraph,
    SupportBody,
    ball,
    check_hypotheses,
    ellipse,
    grid_s1,
    grid_s2,
    parse_grid,
    sample,
    translate,
)
from aflab.geometry.harmonics import real_sh_s1
from aflab.measures import quermass


# -- grids ----------------------------------------------------------------------


def test_grid_weights(grid1, grid2):
    assert grid1.integrate(np.ones(grid1.size)) == pytest.approx(2 * np.pi, rel=1e-15)
    assert grid2.integrate(np.ones(grid2.size)) == pytest.approx(4 * np.pi, rel=1e-14)
    assert grid1.label == "128" and grid2.label == "48x96"


def test_s2_harmonics_orthonormal(grid2):
    terms = [(2, 1), (3, -2), (4, 0), (1, 1)]
    Y = [HarmonicField(2, 0.0, ((l, m, 1.0),)).values(grid2.angles) for l, m in terms]
    G = np.array([[grid2.integrate(a * b) for b in Y] for a in Y])
    np.testing.assert_allclose(G, np.eye(len(terms)), atol=1e-13)


def test_s1_spectral_derivative(grid1):
    th = grid1.angles[:, 0]
    f = np.cos(3 * th) + 0.5 * np.sin(7 * th)
    np.testing.assert_allclose(grid1.derivative(f), -3 * np.sin(3 * th) + 3.5 * np.cos(7 * th),
                               atol=1e-12)
    np.testing.assert_allclose(grid1.derivative(f, 2), -9 * np.cos(3 * th) - 24.5 * np.sin(7 * th),
                               atol=1e-11)


def test_s2_spectral_jet_matches_analytic(grid2):
    field = HarmonicField(2, 1.0, ((2, 1, 0.1), (3, -3, 0.05), (4, 2, -0.07), (1, 0, 0.2)))
    spectral = grid2.jet(field.values(grid2.angles))
    exact = field.jet(grid2.angles)
    # spectral differentiation at lmax = 47 amplifies roundoff by O(l^2), more so near the poles
    np.testing.assert_allclose(spectral.grad, exact.grad, atol=1e-10)
    np.testing.assert_allclose(spectral.hess, exact.hess, atol=2e-9)


def test_refined_and_parse():
    assert grid_s1(32).refined().shape == (64,)
    assert grid_s2(16, 32).refined().shape == (32, 64)
    assert parse_grid("24", 2).shape == (24, 48)
    assert parse_grid("24x40", 2).shape == (24, 40)
    with pytest.raises(UsageError):
        parse_grid("8x8", 1)
    with pytest.raises(UsageError):
        parse_grid("abc", 2)
    with pytest.raises(ConfigurationError):
        grid_s1(4)


# -- samplers -------------------------------------------------------------------


def test_offcenter_ball_support_samples(grid2):
    c = np.array([0.3, -0.1, 0.2])
    s = sample(ball(1.5, c), grid2)
    xi = grid2.nodes
    np.testing.assert_allclose(s.kappa, 1 / 1.5, rtol=1e-9)
    np.testing.assert_allclose(s.u, 1.5 + xi @ c, atol=1e-12)
    xt2 = c @ c - (xi @ c) ** 2
    np.testing.assert_allclose(np.sum(s.comps**2, axis=1), xt2, atol=1e-12)


def test_sample_invariants(grid2):
    body = SupportBody(HarmonicField(2, 1.0, ((2, 1, 0.05),)))
    s = sample(body, grid2)
    assert check_hypotheses(s, "convex").passed
    np.testing.assert_allclose(np.linalg.norm(s.nu, axis=1), 1.0, atol=1e-13)
    np.testing.assert_allclose(s.u, np.einsum("ij,ij->i", s.X, s.nu), atol=1e-13)
    D = s.directions
    np.testing.assert_allclose(np.einsum("iaj,ibj->iab", D, D), np.broadcast_to(np.eye(2), D.shape[:1] + (2, 2)),
                               atol=1e-12)
    np.testing.assert_allclose(np.einsum("iaj,ij->ia", D, s.nu), 0.0, atol=1e-12)
    # |X|^2 = u^2 + |X^T|^2
    np.testing.assert_allclose(s.r2, s.u**2 + np.sum(s.comps**2, axis=1), rtol=1e-12)


def test_radial_ellipse_curvature_at_vertex(grid1):
    s = sample(ellipse(2.0, 1.0, representation="radial"), grid1)
    assert grid1.angles[0, 0] == 0.0
    assert abs(s.kappa[0, 0] - 2.0) < 1e-10


def test_representations_agree(grid1, grid2):
    reps = [sample(ellipse(2.0, 1.0, representation=r), grid1) for r in ("parametric", "radial", "support")]
    for k in (-1, 0, 1):
        vals = [quermass(s, k) for s in reps]
        assert max(vals) - min(vals) < 1e-9 * max(abs(v) for v in vals)
    balls = [sample(ball(0.7, [0.1, 0.2, -0.1], dim=2, representation=r), grid2) for r in ("support", "radial")]
    for k in (-1, 0, 1, 2):
        assert quermass(balls[0], k) == pytest.approx(quermass(balls[1], k), rel=1e-11)


def test_clockwise_curve_reoriented(grid1):
    ccw = sample(ellipse(2.0, 1.0), grid1)
    cw = sample(ParametricCurve(parse_expression("2*cos(t)"), parse_expression("-sin(t)")), grid1)
    assert quermass(cw, -1) == pytest.approx(quermass(ccw, -1), rel=1e-13)
    assert np.all(cw.kappa > 0)


def test_convexity_error_names_node(grid1):
    body = SupportBody(HarmonicField(1, 1.0, ((2, 2, 0.9),)))
    with pytest.raises(ConvexityError, match=r"node \d+"):
        sample(body, grid1)


def test_star_shaped_error(grid1):
    with pytest.raises(StarShapedError) as info:
        sample(RadialGraph(HarmonicField(1, 0.1, ((1, 1, 1.0),))), grid1)
    assert info.value.node is not None


def test_regularity_error(grid1):
    astroid = ParametricCurve(parse_expression("cos(t)^3"), parse_expression("sin(t)^3"))
    with pytest.raises(RegularityError):
        sample(astroid, grid1)


def test_nonconvex_star_shaped_hypotheses(grid1):
    # r = 1 + 0.45 cos(2 theta)
    r = RadialGraph(HarmonicField(1, 1.0, ((2, 2, 0.45 * np.sqrt(np.pi)),)))
    np.testing.assert_allclose(real_sh_s1(2, 2, np.array([0.0]))[0] * 0.45 * np.sqrt(np.pi), 0.45)
    s = sample(r, grid1)
    rep = check_hypotheses(s, "convex")
    assert not rep.passed and rep.worst_node is not None
    assert "fail at node" in rep.describe()
    assert check_hypotheses(s, "star-shaped").passed


def test_hypothesis_levels(grid2, offcenter_ball):
    s = sample(offcenter_ball, grid2)
    for level, k in [("convex", None), ("strictly-convex", None), ("k-convex", 2),
                     ("k-positive", 2), ("star-shaped", None)]:
        assert check_hypotheses(s, level, k).passed
    with pytest.raises(UsageError):
        check_hypotheses(s, "round")
    with pytest.raises(UsageError):
        check_hypotheses(s, "k-convex", 5)


def test_translation_is_exact(grid2, convex_bodies):
    body = convex_bodies[0]
    v = np.array([0.2, -0.4, 0.1])
    a = sample(translate(body, v), grid2)
    b = sample(body, grid2).translated(v)
    np.testing.assert_allclose(a.X, b.X, atol=1e-13)
    np.testing.assert_allclose(a.u, b.u, atol=1e-13)
    np.testing.assert_allclose(a.comps ** 2, b.comps ** 2, atol=1e-12)


def test_grid_field_bound_to_grid(grid1):
    f = GridField(1, np.ones(grid1.size), grid1)
    body = SupportBody(f)
    assert quermass(sample(body, grid1), 0) == pytest.approx(2 * np.pi)
    with pytest.raises(UsageError):
        sample(body, grid_s1(64))


def test_ball_radius_validation():
    with pytest.raises(ConfigurationError, match="radius must be positive"):
        ball(-1.0)
    with pytest.raises(ConfigurationError):
        ball(1.0, [0, 0], dim=2)
