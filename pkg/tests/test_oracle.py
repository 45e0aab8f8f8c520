from math import pi

import numpy as np
import pytest

from aflab.errors import DomainError, UsageError
from aflab.geometry import HarmonicField, SupportBody, ball, ellipse
from aflab.oracle import (
    dense_quadrature_crosscheck,
    ellipse_reference,
    elliptic_e,
    offcenter_ball_reference,
)


def test_circle_case():
    ref = ellipse_reference(1.5, 1.5)
    assert ref["L"] == pytest.approx(3 * pi, rel=1e-15)
    assert ref["A"] == pytest.approx(1.5**2 * pi, rel=1e-15)


def test_ellipse_two_routes():
    ref = ellipse_reference(2.0, 1.0)
    assert abs(ref["L"] - ref["L_quad"]) < 1e-12
    assert ref["L"] == pytest.approx(9.6884482, abs=1e-6)
    assert ref["A"] == pytest.approx(2 * pi)
    assert (ref["kappa_min"], ref["kappa_max"]) == (0.25, 2.0)


def test_near_circle_probe():
    ref = ellipse_reference(1.0, 0.999)
    assert abs(ref["L"] - ref["L_quad"]) < 1e-10
    # second-order series 2 pi a (1 - e^2/4) for small eccentricity
    assert ref["L"] == pytest.approx(2 * pi * (1 - (1 - 0.999**2) / 4), rel=1e-6)


def test_elliptic_e_endpoints():
    assert elliptic_e(0.0) == pytest.approx(pi / 2, rel=1e-15)
    with pytest.raises(DomainError):
        elliptic_e(1.0)
    with pytest.raises(DomainError):
        ellipse_reference(1.0, 2.0)


def test_offcenter_ball_reference():
    ref = offcenter_ball_reference(1.0, 0.3, 2)
    assert ref["thm1"] == pytest.approx(4 * pi * 0.09)
    assert ref["thm1"] == pytest.approx(1.1309734, abs=1e-6)
    assert ref["hx2_2"] == pytest.approx(4 * pi * 1.09, rel=1e-15)
    assert ref["delta2_2"] == pytest.approx(0.3769911, abs=1e-6)
    assert offcenter_ball_reference(1.0, 0.3, 1)["newton_1"] == pytest.approx(pi * 0.09)
    centered = offcenter_ball_reference(2.0, [0.0, 0.0], 1)
    assert centered["thm1"] == 0 and centered["delta2_1"] == 0 and centered["af_identity_1"] == 0
    np.testing.assert_array_equal(offcenter_ball_reference(1, [0.1, 0.2, 0.3], 2)["steiner_point"],
                                  [0.1, 0.2, 0.3])
    with pytest.raises(DomainError):
        offcenter_ball_reference(1.0, 1.0, 2)
    with pytest.raises(DomainError):
        offcenter_ball_reference(1.0, [0.1, 0.1], 2)


def test_dense_ellipse_perimeter():
    rep = dense_quadrature_crosscheck(ellipse(2.0, 1.0), "I0")
    assert rep.rel_error < 1e-10
    assert rep.oracle_value == pytest.approx(ellipse_reference(2.0, 1.0)["L"], rel=1e-12)


def test_dense_offcenter_circle_distance():
    rep = dense_quadrature_crosscheck(ball(1.0, [0.3, 0.0], dim=1, representation="parametric"),
                                      "delta2_1")
    assert rep.rel_error < 1e-10
    assert rep.oracle_value == pytest.approx(pi * 0.09, rel=1e-10)


def test_dense_harmonic_body():
    body = SupportBody(HarmonicField(2, 1.0, ((3, 1, 0.1), (3, -2, 0.05), (2, 0, 0.04))),
                       [0.1, 0.0, -0.2])
    rep = dense_quadrature_crosscheck(body, "hx2_2")
    assert rep.rel_error < 1e-8
    assert dense_quadrature_crosscheck(body, "newton_1").rel_error < 1e-8


def test_dense_bad_inputs():
    with pytest.raises(UsageError):
        dense_quadrature_crosscheck(ellipse(2.0, 1.0, representation="radial"), "I0")
    with pytest.raises(UsageError):
        dense_quadrature_crosscheck(ellipse(2.0, 1.0), "volume")
    with pytest.raises(UsageError):
        dense_quadrature_crosscheck(ellipse(2.0, 1.0), "I2")
