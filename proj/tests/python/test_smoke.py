import math

import numpy as np
import pytest

import riskrev as rr


def test_owens_t():
    assert rr.owens_t(0.0, 1.0) == pytest.approx(0.125, abs=1e-15)
    assert rr.owens_t(1.0, 0.5) == pytest.approx(0.0430646911207853, abs=1e-13)
    assert rr.owens_t(1.0, math.inf) == pytest.approx(0.5 * rr.std_normal_cdf(-1.0), abs=1e-15)


def test_geometry_and_projection():
    g = rr.ExampleGeometry(0.5)
    tri = g.triangle()
    assert tri.dim == 2 and len(tri) == 3
    assert tri.contains(np.array([0.5, 0.5]))
    assert np.allclose(tri.project(np.array([-1.0, -1.0])), [0.0, 0.0])
    cube = rr.ConvexPolytope([np.array(v, dtype=float) for v in
                              [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]])
    assert np.allclose(cube.project(np.array([2.0, 0.5, -3.0])), [1.0, 0.5, 0.0], atol=1e-9)


def test_exact_risk_matches_monte_carlo():
    g = rr.ExampleGeometry(0.5)
    exact = rr.risk_triangle_exact(g, 2.0)
    parts = rr.risk_triangle_breakdown(g, 2.0)
    assert sum(parts.values()) == pytest.approx(exact, rel=1e-12)
    est = rr.mc_risk(g.triangle(), g.v1, 2.0, n=200_000, seed=11)
    assert abs(est.mean - exact) <= 4 * est.std_error
    assert est.seed == 11


def test_reversal_signs():
    assert rr.risk_difference(rr.ExampleGeometry(0.5), 0.01) < 0
    assert rr.risk_difference(rr.ExampleGeometry(0.5), 50.0) > 0
    assert rr.risk_difference(rr.ExampleGeometry(2.0), 50.0) < 0


def test_statistical_dimension():
    tri = rr.ExampleGeometry(1.0).triangle()
    assert rr.statistical_dimension(tri, np.zeros(2)) == pytest.approx(0.75, abs=1e-15)
    est = rr.statistical_dimension_mc([np.array([1.0, 0.0]), np.array([1.0, 1.0])], 100_000)
    assert abs(est.mean - 0.75) <= 4 * est.std_error


def test_worst_case_and_envelope():
    poly = rr.ExampleGeometry(0.75, 0.5).theta_x()
    value, vertex = rr.worst_case_limiting_risk(poly, rr.vertex_probabilities_2d(poly))
    assert value == pytest.approx(1.324659, abs=5e-7)
    assert np.allclose(poly.vertices[vertex], [0.0, 0.0])
    xs = [k * 1e-4 for k in range(1, 13333)]
    curve = rr.envelope_curve(0.75, xs)
    assert abs(curve[rr.envelope_argmin(curve)].x - 0.4290) <= 1e-4


def test_errors():
    with pytest.raises(ValueError):
        rr.ExampleGeometry(-1.0)
    with pytest.raises(ValueError):
        rr.mc_risk(rr.ExampleGeometry(1.0).segment(), np.array([5.0, 5.0]), 1.0, n=10)
    huge = rr.ConvexPolytope([np.array(v) for v in
                              [(1e300, 0.0, 0.0), (0.0, 1e300, 0.0), (0.0, 0.0, 1e300), (0.0, 0.0, 0.0)]])
    with pytest.raises(rr.NumericalFailure):
        huge.project(np.array([1.0, 1.0, 1.0]))


def test_reversal_detection_small():
    rep = rr.detect_finite_sigma_reversal(0.75, 1.3, 0.5, [0.01, 0.03], n=20_000)
    assert rep["reversal_sigma"] is None
    assert len(rep["steps"]) == 2
