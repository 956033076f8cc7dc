from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import minksurf as mk
from minksurf.numerics import convergence_order
from minksurf.surfaces import SurfacePatch, evaluate_jet


def fd_clone(surface: SurfacePatch, step: float = 1e-5) -> SurfacePatch:
    return SurfacePatch(
        name=surface.name, position=surface.position, jet=None,
        domain=surface.domain, periodic=surface.periodic,
        orientation=surface.orientation, jet_source="fd", fd_step=step,
        params=surface.params)


def jet_gap(surface: SurfacePatch, s: float, t: float, step: float) -> float:
    exact = evaluate_jet(surface, s, t)
    approx = evaluate_jet(fd_clone(surface, step), s, t)
    return max(np.abs(getattr(exact, f) - getattr(approx, f)).max()
               for f in ("f", "f_s", "f_t", "f_ss", "f_st", "f_tt"))


def test_unit_sphere_equator_jet():
    sph = mk.euclidean_sphere(1.0)
    jet = evaluate_jet(sph, math.pi / 2, 0.0)
    assert np.allclose(jet.f, [1.0, 0.0, 0.0], atol=1e-15)
    assert np.allclose(jet.f_s, [0.0, 0.0, -1.0], atol=1e-15)
    assert np.allclose(jet.f_t, [0.0, 1.0, 0.0], atol=1e-15)


def test_saddle_origin_jet():
    sad = mk.saddle(1.0)
    jet = evaluate_jet(sad, 0.0, 0.0)
    assert np.allclose(jet.f, 0.0, atol=1e-15)
    assert np.allclose(jet.f_s, [1.0, 0.0, 0.0], atol=1e-15)
    assert np.allclose(jet.f_t, [0.0, 1.0, 0.0], atol=1e-15)
    assert np.allclose(jet.f_ss, [0.0, 0.0, 2.0], atol=1e-15)
    assert np.allclose(jet.f_tt, [0.0, 0.0, -2.0], atol=1e-15)
    assert np.allclose(jet.f_st, 0.0, atol=1e-15)


def test_periodic_wrap_and_domain():
    tor = mk.torus(2.0, 0.7)
    j1 = evaluate_jet(tor, 0.3, 0.4)
    j2 = evaluate_jet(tor, 0.3 + 2 * math.pi, 0.4 - 2 * math.pi)
    assert np.allclose(j1.f, j2.f, atol=1e-12)
    cat = mk.catenoid(1.0)
    with pytest.raises(mk.OutOfDomain):
        evaluate_jet(cat, 5.0, 0.0)


def test_degenerate_jet_at_pole():
    sph = mk.euclidean_sphere(1.0)
    with pytest.raises(mk.DegenerateJet):
        evaluate_jet(sph, 0.0, 0.0)


@given(s=st.floats(min_value=0.3, max_value=2.8),
       t=st.floats(min_value=0.0, max_value=6.28))
@settings(max_examples=25, deadline=None)
def test_fd_jets_match_analytic_sphere(s, t):
    # step 1e-4: truncation ~1e-8 dominates the 1e-8 roundoff floor of an
    # FD second derivative; 1e-5 would sit at the 1e-6 roundoff floor instead
    assert jet_gap(mk.ellipsoid(1.0, 1.3, 0.8), s, t, 1e-4) < 1e-6


def test_fd_jets_match_analytic_families():
    cases = [
        (mk.euclidean_sphere(2.0), 0.9, 1.7),
        (mk.torus(2.0, 0.7), 2.1, 0.6),
        (mk.catenoid(1.0), 0.5, 2.2),
        (mk.saddle(0.8), 0.2, -0.4),
    ]
    for surf, s, t in cases:
        assert jet_gap(surf, s, t, 1e-4) < 1e-6, surf.name


def test_fd_jets_second_order():
    surf = mk.ellipsoid(1.0, 1.3, 0.8)
    steps = np.array([4e-3, 2e-3, 1e-3])
    errs = np.array([jet_gap(surf, 0.8, 2.4, float(h)) for h in steps])
    assert convergence_order(steps, errs) == pytest.approx(2.0, abs=0.1)


def test_minkowski_sphere_gauge_constant(lp4):
    center = np.array([0.1, -0.2, 0.3])
    ms = mk.minkowski_sphere(lp4, rho=2.0, center=center)
    for s, t in mk.grid_points(ms, 7, 7):
        f = ms.position(s, t)
        assert abs(lp4.gauge_value(f - center) - 2.0) < 1e-12


def test_minkowski_sphere_euclidean_is_round():
    eu = mk.euclidean_norm()
    ms = mk.minkowski_sphere(eu, rho=1.0)
    sph = mk.euclidean_sphere(1.0)
    for s, t in [(0.4, 0.9), (1.7, 3.3), (2.6, 5.1)]:
        assert np.allclose(ms.position(s, t), sph.position(s, t), atol=1e-13)


def test_minkowski_sphere_normal_is_chart_angle(lp4):
    """The Euclidean normal at f(s,t) is the spherical direction used to build it."""
    ms = mk.minkowski_sphere(lp4, rho=1.0)
    for s, t in [(0.5, 0.3), (1.2, 2.0), (2.3, 4.4)]:
        jet = evaluate_jet(ms, s, t)
        n = np.cross(jet.f_s, jet.f_t)
        n /= np.linalg.norm(n)
        xi = np.array([math.sin(s) * math.cos(t), math.sin(s) * math.sin(t), math.cos(s)])
        assert np.linalg.norm(n - xi) < 1e-10


def test_minkowski_sphere_analytic_jet_matches_fd(lp4, ell_norm):
    for norm in (lp4, ell_norm):
        ms = mk.minkowski_sphere(norm, rho=1.5)
        assert ms.jet_source == "analytic"
        assert jet_gap(ms, 0.9, 2.1, 1e-4) < 1e-6


def test_minkowski_sphere_custom_norm_falls_back_to_fd():
    fancy = mk.custom_norm(lambda x: (x[0] ** 4 + 2 * x[1] ** 4 + 0.5 * x[2] ** 4) ** 0.25)
    ms = mk.minkowski_sphere(fancy, rho=1.0)
    assert ms.jet_source == "fd"
    jet = evaluate_jet(ms, 1.0, 1.0)
    assert np.all(np.isfinite(jet.f_ss))


def test_orientation_outward_families():
    for surf, inward_ref in [
        (mk.euclidean_sphere(1.0), np.zeros(3)),
        (mk.ellipsoid(1.0, 1.3, 0.8), np.zeros(3)),
    ]:
        jet = evaluate_jet(surf, 0.9, 1.3)
        n = surf.orientation * np.cross(jet.f_s, jet.f_t)
        assert float(n @ (jet.f - inward_ref)) > 0.0


def test_torus_normal_points_away_from_core():
    tor = mk.torus(2.0, 0.7)
    s, t = 0.8, 1.1
    jet = evaluate_jet(tor, s, t)
    core = np.array([2.0 * math.cos(t), 2.0 * math.sin(t), 0.0])
    n = tor.orientation * np.cross(jet.f_s, jet.f_t)
    assert float(n @ (jet.f - core)) > 0.0


def test_torus_requires_valid_radii():
    with pytest.raises(mk.InvalidParameter):
        mk.torus(1.0, 1.0)
    with pytest.raises(mk.InvalidParameter):
        mk.torus(1.0, -0.2)


def test_flip_orientation():
    sph = mk.euclidean_sphere(1.0)
    assert mk.flip_orientation(sph).orientation == -sph.orientation


def test_reparametrize_linear_chain_rule():
    surf = mk.ellipsoid(1.0, 1.3, 0.8)
    L = np.array([[0.6, -1.1], [0.4, 0.9]])
    off = np.array([0.13, -0.4])
    rep = mk.reparametrize_linear(surf, L, off)
    st_new = np.array([0.25, -0.4])
    st_old = L @ st_new + off
    j_new = evaluate_jet(rep, st_new[0], st_new[1])
    j_old = evaluate_jet(surf, st_old[0], st_old[1])
    assert np.allclose(j_new.f, j_old.f, atol=1e-13)
    a, b = L[0, 0], L[0, 1]
    c, d = L[1, 0], L[1, 1]
    assert np.allclose(j_new.f_s, a * j_old.f_s + c * j_old.f_t, atol=1e-12)
    assert np.allclose(j_new.f_t, b * j_old.f_s + d * j_old.f_t, atol=1e-12)
    assert np.allclose(
        j_new.f_ss,
        a * a * j_old.f_ss + 2 * a * c * j_old.f_st + c * c * j_old.f_tt, atol=1e-12)
    with pytest.raises(mk.InvalidParameter):
        mk.reparametrize_linear(surf, np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_scale_surface():
    surf = mk.ellipsoid(1.0, 1.3, 0.8)
    doubled = mk.scale_surface(surf, 2.0)
    assert np.allclose(doubled.position(0.7, 1.1), 2.0 * surf.position(0.7, 1.1), atol=1e-14)


def test_grid_points_layout():
    sph = mk.euclidean_sphere(1.0)
    pts = mk.grid_points(sph, 4, 6, (1e-3, 0.0))
    assert len(pts) == 24
    ss = sorted({s for s, _ in pts})
    assert ss[0] == pytest.approx(1e-3)
    assert ss[-1] == pytest.approx(math.pi - 1e-3)
    # periodic axis covers the circle without duplicating the seam
    ts = sorted({t for _, t in pts})
    assert len(ts) == 6
    assert ts[-1] < 2 * math.pi
    spacing = np.diff(ts)
    assert np.allclose(spacing, spacing[0], atol=1e-12)


def test_surface_from_spec_families(lp4):
    sph = mk.surface_from_spec({"family": "euclidean_sphere", "r": 2.0})
    assert sph.params["r"] == 2.0
    ms = mk.surface_from_spec({"family": "minkowski_sphere", "rho": 1.0}, norm=lp4)
    assert abs(lp4.gauge_value(ms.position(1.0, 1.0)) - 1.0) < 1e-12
    with pytest.raises(mk.InvalidParameter):
        mk.surface_from_spec({"family": "minkowski_sphere", "rho": 1.0})
    with pytest.raises(mk.InvalidParameter):
        mk.surface_from_spec({"family": "moebius"})
