import mpmath
import numpy as np
import pytest

from phaselab.errors import DomainError, SolverError
from phaselab.geometry import make_profile
from phaselab.oracles import flat_halfplane_exact
from phaselab.solver import IncidentField, field_matrix, point_field, solve_rough_soft
from phaselab.solver.quadrature import gauss_legendre, log_product_weights
from phaselab.solver.rough import RoughSurfaceSolver, panel_breaks

from conftest import rough_layout


def test_flat_surface_is_exact():
    flat = make_profile(-1.0, 1.0, 0.0)
    k, z = 2.0, np.array([0.3, 1.5])
    dens = solve_rough_soft(flat, k, IncidentField.point(k, z))
    rng = np.random.default_rng(2)
    x = np.stack((rng.uniform(-6, 6, 40), rng.uniform(0.05, 5, 40)), axis=-1)
    x = x[np.linalg.norm(x - z, axis=-1) > 0.1]
    assert np.max(np.abs(dens.total(x) - flat_halfplane_exact(k, z, x))) <= 1e-10


def test_bump_boundary_residual(bump):
    k = 2.0
    for z in ((0.0, 1.5), (-2.0, 0.8)):
        dens = solve_rough_soft(bump, k, IncidentField.point(k, z))
        assert dens.boundary_residual() <= 1e-6


def test_bump_residual_superposition(bump):
    dens = solve_rough_soft(bump, 2.0, IncidentField.superposition(2.0, (0.0, 1.5), (1.2, 2.0)))
    assert dens.boundary_residual() <= 1e-6


def test_rough_reciprocity(bump):
    rng = np.random.default_rng(7)
    k = 2.0
    for _ in range(5):
        x = np.array([rng.uniform(-3, 3), rng.uniform(0.6, 3)])
        z = np.array([rng.uniform(-3, 3), rng.uniform(0.6, 3)])
        a = point_field(bump, k, z, x)[0]
        b = point_field(bump, k, x, z)[0]
        assert abs(a - b) <= 1e-6 * abs(a)


def test_rough_transpose(bump):
    lay = rough_layout(n=6)
    fm = field_matrix(bump, lay).arc_columns
    tr = field_matrix(bump, lay.transposed()).arc_columns
    assert np.max(np.abs(fm - tr.T)) <= 1e-6 * np.max(np.abs(fm))


def test_margin_does_not_degrade_residual(bump):
    k, inc = 2.0, IncidentField.point(2.0, (0.0, 1.5))
    r4 = solve_rough_soft(bump, k, inc, margin=4.0).boundary_residual()
    r8 = solve_rough_soft(bump, k, inc, margin=8.0).boundary_residual()
    assert r8 <= r4 <= 1e-6


def test_source_below_surface_rejected(bump):
    with pytest.raises(DomainError):
        solve_rough_soft(bump, 2.0, IncidentField.point(2.0, (0.0, 0.1)))
    with pytest.raises(DomainError):
        solve_rough_soft(bump, 2.0, IncidentField.plane(2.0, (0.0, -1.0)))
    dens = solve_rough_soft(bump, 2.0, IncidentField.point(2.0, (0.0, 2.0)))
    with pytest.raises(DomainError):
        dens.total(np.array([0.0, 0.2]))


def test_bad_margin():
    with pytest.raises(SolverError):
        RoughSurfaceSolver(make_profile(-1, 1, 0.2), 2.0, margin=0.0)


def test_panel_breaks_graded():
    br = panel_breaks(-1.0, 1.0, 2.0)
    assert br[0] == -1.0 and br[-1] == 1.0 and np.all(np.diff(br) > 0)
    assert np.max(np.diff(br)) <= min(np.pi / 2.0, 0.25) + 1e-15
    assert np.diff(br)[0] < np.diff(br)[-7]


def test_log_product_weights_exact_on_polynomials():
    order = 8
    gx, _ = gauss_legendre(order)
    for s in (-0.7, 0.0, 0.31):
        w = log_product_weights(order, s)
        exact = (1 + s) * np.log(1 + s) + (1 - s) * np.log(1 - s) - 2
        assert abs(w @ np.ones(order) - exact) <= 1e-13
        for m in (1, 3, 7):
            ref = float(mpmath.quad(lambda t: t ** m * mpmath.log(abs(s - t)), [-1, s, 1]))
            assert abs(w @ gx ** m - ref) <= 1e-12
