from collections import Counter
from math import pi

import numpy as np
import pytest

from aflab.checks import (
    TABLE1,
    convergence_study,
    registry,
    run_check,
    run_suite,
    select,
)
from aflab.errors import UsageError
from aflab.geometry import HarmonicField, RadialGraph, ball, grid_s1, sample
from aflab.measures import steiner_point_from_samples
from aflab.oracle import ellipse_reference, offcenter_ball_reference


def _by_id(results):
    return {r.id: r for r in results}


def test_registry_shape():
    r1, r2 = registry(1), registry(2)
    assert len(r1) == 71 and len(r2) == 116
    assert list(r1) == sorted(r1)
    assert set(TABLE1) <= set(r1)
    for spec in r2.values():
        assert spec.kind in ("identity", "inequality")
        assert spec.origin_policy in ("as-given", "circumcenter", "steiner-point")
    with pytest.raises(UsageError):
        registry(3)


def test_select():
    assert [s.id for s in select(1, "table1")] == sorted(TABLE1)
    assert [s.id for s in select(2, "minkowski-2,minkowski-1")] == ["minkowski-1", "minkowski-2"]
    with pytest.raises(UsageError, match="nope"):
        select(2, ["nope"])
    with pytest.raises(UsageError):
        select(2, "table1")


@pytest.mark.parametrize("dim,rep", [(1, "support"), (1, "radial"), (1, "parametric"),
                                     (2, "support"), (2, "radial")])
def test_centered_ball_all_pass(dim, rep, grid1, grid2):
    res = run_suite(ball(1.0, dim=dim, representation=rep), grid1 if dim == 1 else grid2)
    assert Counter(r.verdict for r in res) == Counter({"pass": len(res)})
    for r in res:
        if r.kind == "identity":
            assert r.residual_or_slack < 1e-9 * max(abs(r.lhs), abs(r.rhs), 1.0)


def test_offcenter_ball_values(grid2, offcenter_ball):
    ref = offcenter_ball_reference(1.0, 0.3, 2)
    res = _by_id(run_suite(offcenter_ball, grid2, ["af-identity-2", "thm1-identity", "hn-x2"]))
    assert res["af-identity-2"].rhs == pytest.approx(ref["af_identity_2"], abs=1e-10)
    assert res["thm1-identity"].lhs == pytest.approx(ref["thm1"], abs=1e-10)
    assert res["thm1-identity"].rhs == pytest.approx(ref["thm1"], abs=1e-10)
    assert res["hn-x2"].residual_or_slack == pytest.approx(ref["hn_x2_slack"], abs=1e-10)
    assert all(r.verdict == "pass" for r in res.values())


def test_offcenter_circle_af_identity(grid1, offcenter_circle):
    r = run_check(registry(1)["af-identity-1"], offcenter_circle, grid1)
    assert r.lhs == pytest.approx(0.09 * pi, abs=1e-12)
    assert r.rhs == pytest.approx(0.09 * pi, abs=1e-12)
    assert r.grid["size"] == "128" and r.grid["refined"] == "256"


def test_ellipse_circumradius_slack(grid1, ellipse21):
    r = run_check(registry(1)["circumradius-1"], ellipse21, grid1)
    L = ellipse_reference(2.0, 1.0)["L"]
    assert r.rhs == pytest.approx(2.0, abs=1e-12)
    assert r.residual_or_slack == pytest.approx(2.0 - L / (2 * pi), abs=1e-10)


def test_hypothesis_gating(grid1):
    r = RadialGraph(HarmonicField(1, 1.0, ((2, 2, 0.45 * np.sqrt(pi)),)))
    res = _by_id(run_suite(r, grid1))
    assert res["hn-x2"].verdict == "skipped-hypothesis"
    assert "fail at node" in res["hn-x2"].hypothesis_status
    assert "exploratory_slack" in res["af-classical-1"].details
    assert res["minkowski-1"].verdict == "pass"
    assert not any(x.verdict == "fail" for x in res.values())


def test_phi_domain_skips(grid1):
    res = _by_id(run_suite(ball(1.0, [2.0, 0.0], dim=1), grid1))
    log_check = res["weighted-minkowski-log-1"]
    assert log_check.verdict == "skipped-hypothesis"
    assert log_check.hypothesis_status.startswith("phi domain")
    assert res["weighted-minkowski-square-1"].verdict == "pass"
    assert not any(x.verdict == "fail" for x in res.values())


def test_random_shapes_no_failures(grid1, grid2, convex_bodies, radial_graphs):
    for shape in convex_bodies + radial_graphs:
        res = run_suite(shape, grid1 if shape.dim == 1 else grid2)
        bad = [r.id for r in res if r.verdict == "fail"]
        assert not bad


def test_steiner_min_corollary(grid2, convex_bodies):
    body = convex_bodies[1]
    r = run_check(registry(2)["steiner-min"], body, grid2)
    assert r.verdict == "pass"
    assert r.details["corollary_residual"] < 1e-8 * r.lhs
    z = steiner_point_from_samples(sample(body, grid2))
    np.testing.assert_allclose(r.details["steiner_point"], z)


def test_threads_match_serial(grid2, convex_bodies, monkeypatch):
    body = convex_bodies[2]
    serial = run_suite(body, grid2, "minkowski-1,af-identity-2,tan-rn-2-1,cor-isop")
    monkeypatch.setenv("AFLAB_THREADS", "4")
    threaded = run_suite(body, grid2, "minkowski-1,af-identity-2,tan-rn-2-1,cor-isop")
    assert [(r.id, r.lhs, r.rhs, r.tol) for r in serial] == [(r.id, r.lhs, r.rhs, r.tol) for r in threaded]
    monkeypatch.setenv("AFLAB_THREADS", "zero")
    with pytest.raises(UsageError):
        run_suite(body, grid2, "minkowski-1")


def test_convergence_study(ellipse21):
    rows = convergence_study(ellipse21, "af-identity-1", [grid_s1(16), grid_s1(32), grid_s1(64)])
    res = [r[1] for r in rows]
    assert res[0] > res[1] > res[2]
    assert [r[0] for r in rows] == ["16", "32", "64"]
    rows = convergence_study(ball(1.0, dim=1), "thm1-identity", [grid_s1(16), grid_s1(48)])
    assert all(r[1] < 1e-12 for r in rows)
    with pytest.raises(UsageError):
        convergence_study(ellipse21, "af-identity-1", [grid_s1(16)])
