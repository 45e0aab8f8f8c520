from itertools import combinations
from math import pi

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.distance import pdist

from aflab.errors import DomainError, HypothesisError, UsageError
from aflab.geometry import HarmonicField, RadialGraph, ball, sample, translate
from aflab.measures import (
    Ball,
    ball_volume,
    body_constants,
    circumradius,
    diameter,
    hausdorff_support,
    isoperimetric_deficit,
    l2_distance_support,
    mean_width,
    mean_width_from_samples,
    min_enclosing_ball,
    newton_form_integral,
    quermass,
    steiner_point,
    steiner_point_from_samples,
    volume,
    weighted_curvature_integral,
    weighted_L2_distance_sq,
)
from aflab.oracle import ellipse_reference, offcenter_ball_reference


def test_constants():
    assert ball_volume(2) == pytest.approx(pi)
    assert ball_volume(3) == pytest.approx(4 * pi / 3)
    c1, c2 = body_constants(1), body_constants(2)
    assert c1.omega_n == pytest.approx(2 * pi) and c2.omega_n == pytest.approx(4 * pi)
    assert c2.eta_n == pytest.approx(4 / (2 * (4 * pi / 3) ** 2))
    assert c1.c_n == pytest.approx(2 * 2 / (2 * 3))


@pytest.mark.parametrize("dim", [1, 2])
def test_ball_quermass(dim, grid1, grid2):
    g = grid1 if dim == 1 else grid2
    R = 1.7
    s = sample(ball(R, dim=dim), g)
    ref = offcenter_ball_reference(R, 0.0, dim)
    for k in range(-1, dim + 1):
        assert quermass(s, k) == pytest.approx(ref[f"I{k}"], rel=1e-12)
    assert volume(s) == pytest.approx(ref["volume"], rel=1e-12)
    with pytest.raises(DomainError):
        quermass(s, dim + 1)


def test_offcenter_ball_closed_forms(grid2, offcenter_ball):
    s = sample(offcenter_ball, grid2)
    ref = offcenter_ball_reference(1.0, 0.3, 2)
    hx2 = weighted_curvature_integral(s, 2, lambda u, r2: r2)
    assert abs(hx2 - ref["hx2_2"]) < 1e-10
    assert abs(weighted_L2_distance_sq(s, 2, Ball(np.zeros(3), 1.0)) - ref["delta2_2"]) < 1e-10
    for k in (1, 2):
        assert abs(newton_form_integral(s, k) - ref[f"newton_{k}"]) < 1e-10


def test_offcenter_circle_newton(grid1, offcenter_circle):
    s = sample(offcenter_circle, grid1)
    assert newton_form_integral(s, 1) == pytest.approx(pi * 0.09, rel=1e-12)
    # psi as a callable and as node values agree
    a = newton_form_integral(s, 1, lambda u: u)
    b = newton_form_integral(s, 1, s.u)
    assert a == pytest.approx(b, rel=1e-15)


def test_distance_to_own_ball_is_zero(grid2):
    c = np.array([0.2, 0.1, -0.3])
    s = sample(ball(0.9, c), grid2)
    assert weighted_L2_distance_sq(s, 1, Ball(c, 0.9)) < 1e-20


def test_nonfinite_weight_names_node(grid1):
    s = sample(ball(1.0, dim=1), grid1)
    w = np.ones(len(s))
    w[5] = np.nan
    with pytest.raises(DomainError, match="node 5"):
        weighted_curvature_integral(s, 1, w)
    with pytest.raises(DomainError):
        newton_form_integral(s, 1, lambda u: np.log(u - 1.0))


def test_negative_hk_rejected(grid1):
    r = RadialGraph(HarmonicField(1, 1.0, ((2, 2, 0.8),)))
    s = sample(r, grid1)
    with pytest.raises(HypothesisError):
        weighted_L2_distance_sq(s, 1, Ball(np.zeros(2), 1.0))


def test_steiner_point_and_mean_width(grid2, convex_bodies):
    c = np.array([0.3, -0.2, 0.1])
    s = sample(ball(1.2, c), grid2)
    np.testing.assert_allclose(steiner_point_from_samples(s), c, atol=1e-10)
    assert mean_width_from_samples(s) == pytest.approx(2.4, rel=1e-12)
    body = convex_bodies[0]
    s0, s1 = sample(body, grid2), sample(translate(body, c), grid2)
    np.testing.assert_allclose(steiner_point_from_samples(s1) - steiner_point_from_samples(s0), c,
                               atol=1e-10)
    # support-function route agrees with the sample route
    h = body.support_values(grid2)
    np.testing.assert_allclose(steiner_point(h, grid2), steiner_point_from_samples(s0), atol=1e-10)
    assert mean_width(h, grid2) == pytest.approx(mean_width_from_samples(s0), rel=1e-10)


def test_support_distances(grid2):
    hK = ball(1.0).support_values(grid2)
    hL = ball(1.5).support_values(grid2)
    assert l2_distance_support(hK, hL, grid2) == pytest.approx(0.5 * np.sqrt(4 * pi), rel=1e-13)
    assert hausdorff_support(hK, hL) == pytest.approx(0.5)
    with pytest.raises(UsageError):
        hausdorff_support(hK, hL[:-1])


def test_isoperimetric_deficit(grid1, ellipse21):
    assert abs(isoperimetric_deficit(sample(ball(1.3, dim=1), grid1))) < 1e-13
    ref = ellipse_reference(2.0, 1.0)
    want = (ref["L"] / (2 * pi)) ** 2 - ref["A"] / pi
    assert isoperimetric_deficit(sample(ellipse21, grid1)) == pytest.approx(want, rel=1e-12)
    # follows from L = 9.6884482 (L / 2 pi = 1.5419644)
    assert want == pytest.approx((9.6884482 / (2 * pi)) ** 2 - 2.0, abs=1e-7)


# -- enclosing ball and diameter --------------------------------------------------


def _brute_ball(P):
    best = None
    d = P.shape[1]
    for size in range(1, d + 2):
        for S in combinations(range(len(P)), size):
            Q = P[list(S)]
            A = Q[1:] - Q[0]
            if size == 1:
                c = Q[0]
            else:
                G = A @ A.T
                if abs(np.linalg.det(G)) < 1e-12:
                    continue
                lam = np.linalg.solve(G, 0.5 * np.sum(A * A, axis=1))
                c = Q[0] + lam @ A
            r = np.max(np.linalg.norm(P - c, axis=1))
            if np.linalg.norm(Q - c, axis=1).max() <= r + 1e-12 and (best is None or r < best[1]):
                best = (c, r)
    return best


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.integers(1, 9), st.integers(0, 10**6))
def test_min_enclosing_ball_brute_force(d, npts, seed):
    P = np.random.default_rng(seed).normal(size=(npts, d))
    ball_ = min_enclosing_ball(P)
    c, r = _brute_ball(P)
    assert ball_.radius == pytest.approx(r, rel=1e-9, abs=1e-12)
    assert np.all(np.linalg.norm(P - ball_.center, axis=1) <= ball_.radius * (1 + 1e-9) + 1e-12)


def test_min_enclosing_ball_on_surface(grid2, offcenter_ball):
    s = sample(offcenter_ball, grid2)
    b = min_enclosing_ball(s.X)
    np.testing.assert_allclose(b.center, [0.3, 0, 0], atol=1e-9)
    assert circumradius(s, b.center) == pytest.approx(b.radius, rel=1e-12)
    with pytest.raises(UsageError):
        min_enclosing_ball(np.zeros((0, 3)))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.integers(2, 300), st.integers(0, 10**6))
def test_diameter_brute_force(d, npts, seed):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(npts, d)) * rng.uniform(0.2, 2.0, size=d)
    assert diameter(P) == pytest.approx(pdist(P).max(), rel=1e-12)


def test_diameter_of_sampled_surfaces(grid1, grid2, convex_bodies, ellipse21):
    for shape in [ellipse21] + convex_bodies:
        X = sample(shape, grid1 if shape.dim == 1 else grid2).X
        assert diameter(X) == pytest.approx(pdist(X).max(), rel=1e-12)
    assert diameter(np.zeros((1, 3))) == 0.0
