from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import minksurf as mk
from minksurf.numerics import convergence_order
from minksurf.norms import tangent_basis

coord = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
nonzero3 = st.tuples(coord, coord, coord).filter(lambda v: sum(x * x for x in v) > 1e-2)


def test_gauge_closed_forms(eu, lp4):
    assert eu.gauge_value(np.array([3.0, 4.0, 0.0])) == pytest.approx(5.0, abs=1e-14)
    assert lp4.gauge_value(np.array([1.0, 1.0, 0.0])) == pytest.approx(2.0 ** 0.25, abs=1e-14)
    diag = mk.ellipsoid_norm(np.diag([1.0, 4.0, 9.0]))
    assert diag.gauge_value(np.ones(3)) == pytest.approx(math.sqrt(14.0), abs=1e-13)
    assert eu.gauge_value(np.zeros(3)) == 0.0


def test_dual_closed_forms(eu, lp4):
    assert eu.dual_value(np.array([0.0, 0.0, 2.0])) == pytest.approx(2.0, abs=1e-14)
    # Hoelder: the dual of l4 is l(4/3)
    assert lp4.dual_value(np.array([1.0, 1.0, 0.0])) == pytest.approx(2.0 ** 0.75, abs=1e-13)
    diag = mk.ellipsoid_norm(np.diag([1.0, 4.0, 9.0]))
    assert diag.dual_value(np.array([0.0, 2.0, 0.0])) == pytest.approx(1.0, abs=1e-13)


@given(x=nonzero3, s=st.floats(min_value=0.1, max_value=7.0))
@settings(max_examples=60, deadline=None)
def test_gauge_homogeneity_lp(lp4, x, s):
    x = np.array(x)
    assert math.isclose(lp4.gauge_value(s * x), s * lp4.gauge_value(x),
                        rel_tol=1e-12, abs_tol=1e-12)


@given(x=nonzero3)
@settings(max_examples=60, deadline=None)
def test_euler_identities(ell_norm, x):
    """Degree-1 homogeneity: grad F . x = F(x) and Hess F . x = 0."""
    x = np.array(x)
    g = ell_norm.gauge_gradient(x)
    assert math.isclose(float(g @ x), ell_norm.gauge_value(x), rel_tol=1e-10, abs_tol=1e-12)
    H = ell_norm.gauge_hessian(x)
    assert np.linalg.norm(H @ x) < 1e-10 * max(1.0, np.abs(H).max())


def test_origin_is_nonsmooth(eu):
    with pytest.raises(mk.NonSmoothPoint):
        eu.gauge_gradient(np.zeros(3))
    with pytest.raises(mk.NonSmoothPoint):
        eu.dual_hessian(np.zeros(3))


def test_invalid_families():
    with pytest.raises(mk.InvalidParameter):
        mk.lp_norm(1.0)
    with pytest.raises(mk.InvalidParameter):
        mk.lp_norm(0.5)
    with pytest.raises(mk.InvalidParameter):
        mk.ellipsoid_norm(np.diag([1.0, -2.0, 1.0]))
    with pytest.raises(mk.InvalidParameter):
        mk.ellipsoid_norm(np.array([[1.0, 0.5, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))


def test_birkhoff_point_basics(eu, lp4):
    xi = np.array([0.3, -0.8, 0.5])
    xi /= np.linalg.norm(xi)
    assert np.allclose(eu.birkhoff_point(xi), xi, atol=1e-14)
    assert np.allclose(lp4.birkhoff_point(np.array([1.0, 0.0, 0.0])),
                       [1.0, 0.0, 0.0], atol=1e-14)


@pytest.mark.parametrize("family", ["euclidean", "ellipsoid", "lp4", "lp15"])
def test_birkhoff_round_trip_analytic(family, eu, ell_norm, lp4):
    norm = {"euclidean": eu, "ellipsoid": ell_norm, "lp4": lp4,
            "lp15": mk.lp_norm(1.5)}[family]
    rng = np.random.default_rng(42)
    for _ in range(100):
        xi = rng.normal(size=3)
        xi /= np.linalg.norm(xi)
        u = norm.birkhoff_point(xi)
        assert abs(norm.gauge_value(u) - 1.0) < 1e-10
        g = norm.gauge_gradient(u)
        assert np.linalg.norm(g / np.linalg.norm(g) - xi) < 1e-10


def test_birkhoff_round_trip_fd_jets():
    norm = mk.lp_norm(4.0, jet_source="fd")
    rng = np.random.default_rng(3)
    for _ in range(100):
        xi = rng.normal(size=3)
        xi /= np.linalg.norm(xi)
        u = norm.birkhoff_point(xi)
        assert abs(norm.gauge_value(u) - 1.0) < 1e-6
        g = norm.gauge_gradient(u)
        assert np.linalg.norm(g / np.linalg.norm(g) - xi) < 1e-6


def test_newton_matches_dual_gradient(lp4):
    """The projected-Newton fallback lands on the same Birkhoff point that the
    dual-gradient closed form produces."""
    xi = np.array([1.0, 1.0, 0.0]) / math.sqrt(2.0)
    direct = lp4.birkhoff_point(xi)
    newton = lp4._newton_point(xi)
    assert np.linalg.norm(direct - newton) < 1e-10
    rng = np.random.default_rng(8)
    for _ in range(10):
        xi = rng.normal(size=3)
        xi /= np.linalg.norm(xi)
        assert np.linalg.norm(lp4.birkhoff_point(xi) - lp4._newton_point(xi)) < 1e-9


def test_custom_norm_newton_fallback():
    fancy = mk.custom_norm(
        lambda x: (x[0] ** 4 + 2.0 * x[1] ** 4 + 0.5 * x[2] ** 4
                   + x[0] ** 2 * x[1] ** 2) ** 0.25)
    xi = np.array([0.3, -0.8, 0.5])
    xi /= np.linalg.norm(xi)
    u = fancy.birkhoff_point(xi)
    assert abs(fancy.gauge_value(u) - 1.0) < 1e-9
    g = fancy.gauge_gradient(u)
    assert np.linalg.norm(g / np.linalg.norm(g) - xi) < 1e-8


def test_custom_norm_without_fallback_raises():
    norm = mk.custom_norm(lambda x: float(np.linalg.norm(x)), allow_newton=False)
    with pytest.raises(mk.MissingDualJets):
        norm.birkhoff_point(np.array([0.0, 0.0, 1.0]))


def test_lp_axis_points_stay_exact(lp4):
    """The curvature guard near coordinate planes must not move axis values."""
    e1 = np.array([1.0, 0.0, 0.0])
    assert lp4.gauge_value(e1) == 1.0
    assert np.allclose(lp4.gauge_gradient(e1), e1, atol=1e-15)
    assert np.allclose(lp4.birkhoff_point(e1), e1, atol=1e-14)
    H = lp4.gauge_hessian(np.array([1.0, 1e-12, 0.0]))
    assert np.all(np.isfinite(H))


def test_fd_jets_second_order():
    exact = mk.lp_norm(3.0)
    x = np.array([0.7, -1.1, 0.4])
    steps = np.array([4e-3, 2e-3, 1e-3])
    errs = []
    for h in steps:
        fd = mk.lp_norm(3.0, jet_source="fd", fd_step=float(h))
        errs.append(np.abs(fd.gauge_hessian(x) - exact.gauge_hessian(x)).max())
    assert convergence_order(steps, np.array(errs)) == pytest.approx(2.0, abs=0.2)


def test_tangent_basis_orthonormal():
    rng = np.random.default_rng(1)
    for _ in range(50):
        xi = rng.normal(size=3)
        xi /= np.linalg.norm(xi)
        E = tangent_basis(xi)
        assert np.allclose(E.T @ E, np.eye(2), atol=1e-12)
        assert np.abs(E.T @ xi).max() < 1e-12


def test_du_restricted_is_spd(lp4, ell_norm):
    rng = np.random.default_rng(5)
    for norm in (lp4, ell_norm):
        for _ in range(20):
            xi = rng.normal(size=3)
            xi /= np.linalg.norm(xi)
            E, M = norm.du_restricted(xi)
            assert np.allclose(M, M.T, atol=1e-12)
            assert np.all(np.linalg.eigvalsh(M) > 0.0)
            assert np.abs(E.T @ xi).max() < 1e-12


def test_dupin_form_euclidean_is_restricted_identity(eu):
    xi = np.array([0.2, 0.5, -0.9])
    xi /= np.linalg.norm(xi)
    eta = eu.birkhoff_point(xi)
    E = tangent_basis(xi)
    X = E[:, 0]
    assert eu.dupin_form(eta, X, X) == pytest.approx(1.0, abs=1e-12)
    Y = 0.3 * E[:, 0] - 1.2 * E[:, 1]
    assert eu.dupin_form(eta, X + Y, X + Y) == pytest.approx(
        float((X + Y) @ (X + Y)), abs=1e-12)


def test_dupin_form_symmetric_positive(lp4):
    rng = np.random.default_rng(11)
    for _ in range(30):
        xi = rng.normal(size=3)
        xi /= np.linalg.norm(xi)
        eta = lp4.birkhoff_point(xi)
        E = tangent_basis(xi)
        X = E @ rng.normal(size=2)
        Y = E @ rng.normal(size=2)
        dxy = lp4.dupin_form(eta, X, Y)
        dyx = lp4.dupin_form(eta, Y, X)
        assert math.isclose(dxy, dyx, rel_tol=1e-10, abs_tol=1e-12)
        assert lp4.dupin_form(eta, X, X) > 0.0


def test_dupin_form_matches_fd_hessian_inverse(lp4):
    """Cross-check the restricted dual Hessian against a finite-difference one."""
    xi = np.ones(3) / math.sqrt(3.0)
    eta = lp4.birkhoff_point(xi)
    E = tangent_basis(xi)
    # step 1e-4 balances truncation against the 1/h^2 roundoff of an FD Hessian
    fd = mk.lp_norm(4.0, jet_source="fd", fd_step=1e-4)
    _, M_fd = fd.du_restricted(xi)
    rng = np.random.default_rng(2)
    X2 = rng.normal(size=2)
    X = E @ X2
    expected = float(X2 @ np.linalg.solve(M_fd, X2))
    assert lp4.dupin_form(eta, X, X) == pytest.approx(expected, rel=1e-5)


def test_norm_from_spec_families():
    assert mk.norm_from_spec({"family": "euclidean"}).family == "euclidean"
    assert mk.norm_from_spec({"family": "lp", "p": 4.0}).family == "lp"
    ell = mk.norm_from_spec({"family": "ellipsoid", "A": np.diag([1.0, 4.0, 9.0]).tolist()})
    assert ell.gauge_value(np.ones(3)) == pytest.approx(math.sqrt(14.0), abs=1e-12)
    with pytest.raises(mk.InvalidParameter):
        mk.norm_from_spec({"family": "polyhedral"})
    with pytest.raises(mk.InvalidParameter):
        mk.norm_from_spec({"family": "lp"})
    with pytest.raises(mk.InvalidParameter):
        mk.norm_from_spec({"family": "lp", "p": 4.0, "jet_source": "symbolic"})
