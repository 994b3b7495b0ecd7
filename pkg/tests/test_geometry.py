import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phaselab.errors import AdmissibilityError, ConfigurationError
from phaselab.geometry import (J0_FIRST_ZERO, make_admissible_arc, make_curve, make_layout, make_profile,
                               validate_layout)
from phaselab.oracles import DiskSpec

from conftest import standard_layout


def test_circle_point_and_normal():
    c = make_curve("circle", {"radius": 1.0, "center": (0.0, 0.0)}, 64)
    assert np.allclose(c.point(0.0), [1.0, 0.0], atol=1e-15)
    assert np.allclose(c.normal(0.0), [1.0, 0.0], atol=1e-15)


def test_ellipse_speed():
    c = make_curve("ellipse", {"a": 2.0, "b": 1.0}, 64)
    t = np.linspace(0, 2 * np.pi, 37)
    assert np.allclose(c.speed(t), np.sqrt(4 * np.sin(t) ** 2 + np.cos(t) ** 2), rtol=0, atol=1e-14)


def test_kite_parametrisation_and_arc_length(frozen):
    c = make_curve("kite", {}, 64)
    t = np.linspace(0, 2 * np.pi, 11)
    expect = np.stack((np.cos(t) + 0.65 * np.cos(2 * t) - 0.65, 1.5 * np.sin(t)), axis=-1)
    assert np.allclose(c.point(t), expect, atol=1e-15)
    assert abs(c.arc_length() - frozen["kite_arc_length"]) <= 1e-10


@pytest.mark.parametrize("kind,params", [("circle", {"radius": 1.3, "center": (0.2, -1)}),
                                         ("ellipse", {"a": 2.0, "b": 0.7}),
                                         ("kite", {"scale": 0.8, "center": (1, 1)})])
def test_normals_unit_and_orthogonal(kind, params):
    c = make_curve(kind, params, 64)
    t = 2 * np.pi * np.arange(64) / 64
    nu, tan = c.normal(t), c.tangent(t)
    assert np.max(np.abs(np.sum(nu * tan, axis=-1))) <= 1e-14 * np.max(np.abs(tan))
    assert np.max(np.abs(np.linalg.norm(nu, axis=-1) - 1)) <= 1e-14
    # outward: normal points away from the interior
    assert not np.any(c.contains_closure(c.point(t) + 1e-3 * nu))


def test_curve_errors():
    with pytest.raises(ConfigurationError):
        make_curve("circle", {"radius": -1.0}, 64)
    with pytest.raises(ConfigurationError):
        make_curve("circle", {"radius": 1.0}, 63)
    with pytest.raises(ConfigurationError):
        make_curve("circle", {"radius": 1.0}, 14)
    with pytest.raises(ConfigurationError):
        make_curve("star", {}, 64)


def test_admissible_arc_examples():
    arc = make_admissible_arc((0, 3), 2.0, (np.pi, 2 * np.pi), 16, 1.0)
    assert arc.k_radius < J0_FIRST_ZERO
    with pytest.raises(AdmissibilityError, match="2.4048"):
        make_admissible_arc((0, 3), 3.0, (np.pi, 2 * np.pi), 16, 1.0)
    arc = make_admissible_arc((0, 0), 1.0, (0.0, np.pi), 5, 2.0)
    assert np.allclose(arc.points[0], [1, 0]) and np.allclose(arc.points[-1], [-1, 0], atol=1e-15)


def test_arc_errors():
    with pytest.raises(ConfigurationError):
        make_admissible_arc((0, 0), 0.5, (1.0, 1.0), 16, 1.0)
    with pytest.raises(ConfigurationError):
        make_admissible_arc((0, 0), 0.5, (0.0, 1.0), 1, 1.0)
    with pytest.raises(ConfigurationError):
        make_admissible_arc((0, 0), -0.5, (0.0, 1.0), 4, 1.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.01, 2.0), st.floats(0, 6.0), st.floats(0.01, 3.0),
       st.integers(2, 40), st.floats(0.5, 5.0))
def test_arc_points_on_circle(cx, cy, r, t0, span, n, k):
    if k * r >= J0_FIRST_ZERO:
        with pytest.raises(AdmissibilityError):
            make_admissible_arc((cx, cy), r, (t0, t0 + span), n, k)
        return
    arc = make_admissible_arc((cx, cy), r, (t0, t0 + span), n, k)
    d = np.linalg.norm(arc.points - np.array([cx, cy]), axis=-1)
    assert np.max(np.abs(d - r)) <= 1e-14 * max(r, np.hypot(cx, cy))
    assert arc.points.shape == (n, 2)


def test_profile_examples():
    p = make_profile(-1, 1, 0.5)
    assert p.f(0.0) == 0.5 and p.f(1.0) == 0.0 and p.f(-1.0) == 0.0
    assert p.df(0.0) == 0.0
    q = make_profile(-2, 0, -0.3)
    # f'' grows linearly away from the endpoint, so the step must be small
    h = 1e-8
    left = (q.f(-2 * h) - 2 * q.f(-h) + q.f(0.0)) / h ** 2
    right = (q.f(2 * h) - 2 * q.f(h) + q.f(0.0)) / h ** 2
    assert abs(left) <= 1e-6 and abs(right) <= 1e-6 and abs(left - right) <= 1e-6
    with pytest.raises(ConfigurationError):
        make_profile(1, 1, 0.1)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(0.2, 4), st.floats(-1, 1))
def test_profile_c2_at_endpoints(a, width, h):
    p = make_profile(a, a + width, h)
    assert p.f(p.a - 0.1) == 0 and p.f(p.b + 0.1) == 0
    for e in (p.a, p.b):
        assert p.f(e) == 0 and p.df(e) == 0 and abs(p.d2f(e)) <= 1e-12
    x = np.linspace(p.a, p.b, 101)
    # analytic derivatives agree with finite differences of f
    hh = 1e-6
    assert np.allclose(p.df(x[1:-1]), (p.f(x[1:-1] + hh) - p.f(x[1:-1] - hh)) / (2 * hh),
                       atol=1e-6 * max(1, abs(h) / width ** 2))


def test_validate_layout_examples(unit_circle):
    lay = standard_layout()
    assert validate_layout(lay, unit_circle).ok
    g = make_admissible_arc((0, 3), 0.5, (0, np.pi), 8, 1.0)
    s = make_admissible_arc((0, 3.6), 0.5, (0, np.pi), 8, 1.0)
    rep = validate_layout(make_layout(g, s, 1.0), unit_circle)
    assert "disk_overlap" in rep.codes() and "Ω̄ ∩ Ḡ = ∅" in str(rep)
    bad = make_layout(lay.gamma, lay.sigma, 1.0, z0=(0.1, 0.2))
    rep = validate_layout(bad, unit_circle)
    assert "z0_placement" in rep.codes()


def test_validate_layout_scatterer_and_surface(bump):
    lay = standard_layout()
    big = DiskSpec(2.8)
    assert "scatterer_intersection" in validate_layout(lay, big).codes()
    g = make_admissible_arc((-1.5, 0.3), 0.5, (np.pi, 2 * np.pi), 8, 2.0)
    s = make_admissible_arc((1.5, 2.0), 0.5, (np.pi, 2 * np.pi), 8, 2.0)
    rep = validate_layout(make_layout(g, s, 2.0, z0=(0, 5)), bump)
    assert rep.codes() == ["surface_clearance"]
    rep = validate_layout(make_layout(g, s, 2.0, z0=(0, -1)), bump)
    assert "z0_placement" in rep.codes()


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 2.0), st.floats(0.05, 2.0), st.floats(0.05, 1.0), st.floats(-3, 3), st.floats(-3, 3))
def test_validate_layout_monotone(rg, rs, shrink, zx, zy):
    k = 1.0
    g = make_admissible_arc((0.0, 2.5), rg, (0, np.pi), 6, k)
    s = make_admissible_arc((2.0, 0.0), rs, (0, np.pi), 6, k)
    scatterer = DiskSpec(1.0)
    before = set(validate_layout(make_layout(g, s, k, z0=(zx, zy)), scatterer).codes())
    g2 = make_admissible_arc((0.0, 2.5), rg * shrink, (0, np.pi), 6, k)
    s2 = make_admissible_arc((2.0, 0.0), rs * shrink, (0, np.pi), 6, k)
    after = set(validate_layout(make_layout(g2, s2, k, z0=(zx, zy)), scatterer).codes())
    assert after <= before


def test_default_z0_and_layout_shapes():
    lay = standard_layout()
    mid = np.array([1.5, 1.5])
    assert abs(np.linalg.norm(np.asarray(lay.z0) - mid) - 2 * np.pi) < 1e-12
    assert all(isinstance(c, float) for c in lay.z0)
    assert lay.all_sources().shape == (17, 2)
    t = lay.transposed()
    assert np.array_equal(t.sources, lay.receivers) and np.array_equal(t.receivers, lay.sources)
