import numpy as np
import pytest
import scipy.special as sp

from phaselab.errors import ConfigurationError, DomainError, TruncationError
from phaselab.oracles import (DiskSpec, SeriesTruncation, bessel_j_orders, bessel_y_orders, disk_series_far,
                              disk_series_field, flat_halfplane_exact, flux_balance, _modal)
from phaselab.solver import IncidentField, halfplane_green, unit_directions


# point sources near the disk converge slowly on the boundary itself
WIDE = SeriesTruncation(60)


def _ring(center, rho, n=64):
    th = 2 * np.pi * np.arange(n) / n
    return np.asarray(center) + rho * np.stack((np.cos(th), np.sin(th)), axis=-1), th


def test_frozen_point_source(frozen):
    o = frozen["soft_disk_point_source"]
    val = disk_series_field(DiskSpec(o["a"]), o["k"], IncidentField.point(o["k"], o["source"]), np.array(o["x"]))
    assert abs(val - complex(*o["value"])) <= 1e-13


def test_frozen_plane_wave(frozen):
    o = frozen["soft_disk_plane"]
    val = disk_series_field(DiskSpec(o["a"]), o["k"], IncidentField.plane(o["k"], o["direction"]), np.array(o["x"]))
    assert abs(val - complex(*o["value"])) <= 1e-13


def test_frozen_far_field(frozen):
    o = frozen["soft_disk_far"]
    th = np.array(o["theta"])
    d = np.stack((np.cos(th), np.sin(th)), axis=-1)
    vals = disk_series_far(DiskSpec(o["a"]), o["k"], IncidentField.plane(o["k"], o["direction"]), d).values
    assert np.max(np.abs(vals - np.array([complex(*v) for v in o["values"]]))) <= 1e-13


def test_bessel_recurrences_against_scipy():
    x = np.array([0.05, 0.7, 3.0, 11.0, 40.0])
    j = bessel_j_orders(60, x)
    y = bessel_y_orders(30, x)
    n = np.arange(61)[:, None]
    assert np.max(np.abs(j - sp.jv(n, x))) <= 1e-14
    ref = sp.yv(np.arange(31)[:, None], x)
    assert np.max(np.abs(y - ref) / np.maximum(1, np.abs(ref))) <= 1e-12


@pytest.mark.parametrize("k", [0.5, 1.0, 3.0])
def test_soft_boundary_zero(k):
    spec = DiskSpec(1.2, (0.3, -0.4))
    for inc in (IncidentField.plane(k, (0.6, 0.8)), IncidentField.point(k, (2.0, 3.0))):
        pts, _ = _ring(spec.center, spec.radius)
        total = inc(pts) + disk_series_field(spec, k, inc, pts, WIDE)
        assert np.max(np.abs(total)) <= 1e-10 * np.max(np.abs(inc(pts)))


def test_impedance_zero_is_sound_hard():
    k, spec = 1.5, DiskSpec(1.0, bc="impedance", impedance=0.0)
    inc = IncidentField.plane(k, (1.0, 0.0))
    h = 1e-4
    outer, _ = _ring(spec.center, 1 + h)
    inner, _ = _ring(spec.center, 1 + 2 * h)
    on, _ = _ring(spec.center, 1.0)
    u = lambda p: inc(p) + disk_series_field(spec, k, inc, p)
    # second-order one-sided difference
    du = (-3 * u(on) + 4 * u(outer) - u(inner)) / (2 * h)
    assert np.max(np.abs(du)) <= 1e-6 * np.max(np.abs(u(on))) * 10


@pytest.mark.parametrize("lam", [0.5, 1.0, -2.0])
def test_impedance_condition(lam):
    k, spec = 2.0, DiskSpec(0.8, bc="impedance", impedance=lam)
    inc = IncidentField.point(k, (0.0, 2.5))
    on, th = _ring(spec.center, spec.radius)
    # analytic normal derivative from the modal expansion
    n_max, c, T, _ = _modal(spec, k, inc, WIDE)
    n = np.arange(-n_max, n_max + 1)
    ka = k * spec.radius
    J, Jp = sp.jv(n, ka), sp.jvp(n, ka)
    H, Hp = sp.hankel1(n, ka), sp.h1vp(n, ka)
    ang = np.exp(1j * np.outer(n, th))
    u = ((c * (J + T * H))[:, None] * ang).sum(0)
    du = ((c * k * (Jp + T * Hp))[:, None] * ang).sum(0)
    assert np.max(np.abs(du + 1j * k * lam * u)) <= 1e-8 * k * np.max(np.abs(u))
    # series field agrees with the reconstructed total on the boundary
    assert np.allclose(inc(on) + disk_series_field(spec, k, inc, on, WIDE), u, atol=1e-12)


def test_medium_index_one_scatters_nothing():
    spec = DiskSpec(1.0, bc="medium", index=1.0)
    inc = IncidentField.point(1.0, (0.0, 3.0))
    rng = np.random.default_rng(3)
    th = rng.uniform(0, 2 * np.pi, 10)
    rho = rng.uniform(1.1, 4.0, 10)
    pts = np.stack((rho * np.cos(th), rho * np.sin(th)), axis=-1)
    pts = pts[np.linalg.norm(pts - [0, 3], axis=-1) > 0.1]
    assert np.max(np.abs(disk_series_field(spec, 1.0, inc, pts))) <= 1e-12


@pytest.mark.parametrize("index", [2.0, 1.5 + 0.2j])
def test_medium_transmission(index):
    k, a = 1.3, 1.0
    spec = DiskSpec(a, bc="medium", index=index)
    inc = IncidentField.plane(k, (0.0, 1.0))
    h = 1e-5
    inside, _ = _ring((0, 0), a * (1 - 1e-11))
    outside, _ = _ring((0, 0), a)
    u_in = disk_series_field(spec, k, inc, inside)
    u_out = inc(outside) + disk_series_field(spec, k, inc, outside)
    assert np.max(np.abs(u_in - u_out)) <= 1e-10
    pin, _ = _ring((0, 0), a - h)
    pout, _ = _ring((0, 0), a + h)
    din = (u_in - disk_series_field(spec, k, inc, pin)) / h
    dout = (inc(pout) + disk_series_field(spec, k, inc, pout) - u_out) / h
    # first-order differences on each side: compare at O(h)
    assert np.max(np.abs(din - dout)) <= 1e-4
    # modal radial derivatives agree exactly
    n_max, c, T, interior = _modal(spec, k, inc, None)
    n = np.arange(-n_max, n_max + 1)
    kappa = k * np.sqrt(complex(index))
    d_in = interior * kappa * sp.jvp(n, kappa * a)
    d_out = k * (sp.jvp(n, k * a) + T * sp.h1vp(n, k * a))
    assert np.max(np.abs((d_in - d_out) * c)) <= 1e-8


@pytest.mark.parametrize("spec", [DiskSpec(1.0), DiskSpec(0.7, (0.5, 0.2)), DiskSpec(1.0, bc="medium", index=2.0),
                                  DiskSpec(1.0, bc="impedance", impedance=0.0)])
def test_flux_balance(spec):
    for k in (0.5, 1.0, 4.0):
        lhs, rhs = flux_balance(spec, k, (np.cos(0.4), np.sin(0.4)))
        assert abs(lhs - rhs) <= 1e-8 * abs(lhs)


def test_far_field_extrapolation():
    spec, k = DiskSpec(1.0), 1.0
    inc = IncidentField.plane(k, (1.0, 0.0))
    d = unit_directions(12)
    ff = disk_series_far(spec, k, inc, d).values
    rho = 200.0
    ext = np.sqrt(rho) * np.exp(-1j * k * rho) * disk_series_field(spec, k, inc, rho * d)
    assert np.max(np.abs(ext - ff)) <= 2.0 / rho * np.max(np.abs(ff))


def test_modal_decay():
    for k, a in ((1.0, 1.0), (5.0, 2.0), (10.0, 1.0)):
        spec = DiskSpec(a)
        _, coef, T, _ = _modal(spec, k, IncidentField.plane(k, (1.0, 0.0)), None)
        mag = np.abs(T * coef)
        n_max = (mag.size - 1) // 2
        assert mag[-1] <= 1e-6 * mag[-6]
        assert SeriesTruncation.default(k, a).n_max == int(np.ceil(k * a)) + 20 == n_max


def test_truncation_rules():
    spec = DiskSpec(1.0)
    inc = IncidentField.plane(1.0, (1.0, 0.0))
    with pytest.raises(ConfigurationError):
        disk_series_field(spec, 1.0, inc, np.array([2.0, 0.0]), SeriesTruncation(5))
    near = IncidentField.point(3.0, (2.0, 3.0))
    on, _ = _ring((0.3, -0.4), 1.2)
    with pytest.raises(TruncationError, match="n_max"):
        disk_series_field(DiskSpec(1.2, (0.3, -0.4)), 3.0, near, on)


def test_domain_errors():
    with pytest.raises(DomainError):
        disk_series_field(DiskSpec(1.0), 1.0, IncidentField.plane(1.0, (1, 0)), np.array([0.2, 0.0]))
    with pytest.raises(DomainError):
        disk_series_field(DiskSpec(1.0), 1.0, IncidentField.point(1.0, (0.5, 0.0)), np.array([2.0, 0.0]))
    with pytest.raises(ConfigurationError):
        DiskSpec(-1.0)
    with pytest.raises(ConfigurationError):
        DiskSpec(1.0, bc="medium", index=-2.0)


def test_flat_halfplane():
    k = 2.0
    z = np.array([0.3, 1.1])
    x = np.stack((np.linspace(-5, 5, 21), np.zeros(21)), axis=-1)
    assert np.max(np.abs(flat_halfplane_exact(k, z, x))) <= 1e-14
    a, b = np.array([1.0, 2.0]), np.array([-0.4, 0.7])
    assert flat_halfplane_exact(k, a, b) == flat_halfplane_exact(k, b, a)
    assert flat_halfplane_exact(k, a, b) == halfplane_green(k, b, a)
