"""Nystrom solver for sound-soft obstacles (combined-field integral equation).

The scattered field is sought as

    u_s(x) = int_{dD} [dPhi(x, y)/dnu(y) - i eta Phi(x, y)] phi(y) ds(y),

which leads to ``phi + K phi - i eta S phi = -2 u_i`` on the boundary. The
logarithmic singularities of the parametrised kernels are split off and
integrated with the trigonometric product rule on the ``N = 2n`` equispaced
nodes ``t_j = pi j / n``, which gives spectral convergence for smooth curves.
"""

import functools

import numpy as np
import scipy.linalg

from ..errors import DomainError, SolverError
from ..specialfun import bessel_jy
from .kernels import far_field_constant

EULER_GAMMA = 0.57721566490153286061
MAX_CONDITION = 1e12


def log_weights(n, dt):
    """Trigonometric product weights ``R(dt)`` for ``ln(4 sin^2(dt/2))`` on ``2n`` nodes."""
    m = np.arange(1, n)
    dt = np.asarray(dt, dtype=float)
    series = np.tensordot(np.cos(dt[..., None] * m), 1.0 / m, axes=([-1], [0]))
    return -2 * np.pi / n * series - np.pi / n ** 2 * np.cos(n * dt)


class SoftObstacleSolver:
    """Assembled and factorised CFIE system for one curve and wavenumber.

    Use :func:`obstacle_solver` to get a cached instance.
    """

    def __init__(self, curve, k, eta=None):
        self.curve = curve
        self.k = float(k)
        self.eta = self.k if eta is None else float(eta)
        self.n = curve.N // 2
        self.t = curve.nodes
        self.x = curve.point(self.t)
        self.dx = curve.tangent(self.t)
        self.ddx = curve.second_derivative(self.t)
        self.speed = np.linalg.norm(self.dx, axis=-1)
        # unnormalised outward normal, |nvec| = |x'|
        self.nvec = np.stack((self.dx[:, 1], -self.dx[:, 0]), axis=-1)
        matrix = self._operator_rows(self.t, self.x)
        matrix[np.diag_indices_from(matrix)] += 1.0
        self.matrix = matrix
        self.condition = float(np.linalg.cond(matrix))
        if not np.isfinite(self.condition) or self.condition > MAX_CONDITION:
            raise SolverError(f"CFIE matrix is singular to working precision (cond ~ {self.condition:.3g})",
                              condition=self.condition)
        self.lu = scipy.linalg.lu_factor(matrix)

    def _kernel_parts(self, targets, coincide):
        """Log-coefficient and smooth parts of ``L - i eta M`` for target points."""
        k, eta = self.k, self.eta
        diff = targets[:, None, :] - self.x[None, :, :]
        r = np.linalg.norm(diff, axis=-1)
        safe = np.where(coincide, 1.0, r)
        nd = np.sum(diff * self.nvec[None, :, :], axis=-1)
        j0, y0 = bessel_jy(0, k * safe)
        j1, y1 = bessel_jy(1, k * safe)
        L = 0.5j * k * nd * (j1 + 1j * y1) / safe
        L1 = -k / (2 * np.pi) * nd * j1 / safe
        M = 0.5j * (j0 + 1j * y0) * self.speed
        M1 = -1 / (2 * np.pi) * j0 * self.speed
        return L, L1, M, M1

    def _operator_rows(self, t_targets, targets):
        """Discrete ``(K - i eta S)`` acting on nodal density, rows at ``t_targets``."""
        dt = t_targets[:, None] - self.t[None, :]
        coincide = np.isclose(np.cos(dt), 1.0, rtol=0, atol=1e-15) & np.isclose(np.sin(dt), 0.0, atol=1e-13)
        L, L1, M, M1 = self._kernel_parts(targets, coincide)
        with np.errstate(divide="ignore"):
            logterm = np.log(4 * np.sin(dt / 2) ** 2)
        logterm = np.where(coincide, 0.0, logterm)
        L2 = L - L1 * logterm
        M2 = M - M1 * logterm
        if coincide.any():
            i, j = np.nonzero(coincide)
            nx = self.nvec[j]
            L1[i, j] = 0.0
            L2[i, j] = np.sum(nx * self.ddx[j], axis=-1) / (2 * np.pi * self.speed[j] ** 2)
            M1[i, j] = -self.speed[j] / (2 * np.pi)
            M2[i, j] = (0.5j - EULER_GAMMA / np.pi
                        - np.log(0.5 * self.k * self.speed[j]) / np.pi) * self.speed[j]
        K1 = L1 - 1j * self.eta * M1
        K2 = L2 - 1j * self.eta * M2
        return log_weights(self.n, dt) * K1 + (np.pi / self.n) * K2

    def solve(self, inc):
        for z in inc.sources:
            if self.curve.contains_closure(np.asarray(z)[None, :])[0]:
                raise DomainError(f"incident source {z} is not exterior to the obstacle")
        rhs = -2.0 * inc(self.x)
        return ObstacleDensity(self, scipy.linalg.lu_solve(self.lu, rhs), inc)

    def solve_many(self, rhs_columns):
        return scipy.linalg.lu_solve(self.lu, rhs_columns)

    def interpolate(self, psi, t):
        """Trigonometric interpolant of nodal values at parameters ``t``."""
        N = self.curve.N
        coef = np.fft.fft(psi) / N
        freq = np.fft.fftfreq(N, d=1.0 / N)
        basis = np.exp(1j * np.outer(t, freq))
        # the Nyquist mode is split symmetrically so the interpolant is real for real data
        nyq = freq == -(N // 2)
        basis[:, nyq] = np.cos(N // 2 * t)[:, None]
        terms = coef[None, :] * basis
        return terms.sum(axis=1)

    def potential_matrix(self, points):
        """Matrix mapping nodal density to ``u_s`` at exterior points."""
        k, eta = self.k, self.eta
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        diff = pts[:, None, :] - self.x[None, :, :]
        r = np.linalg.norm(diff, axis=-1)
        nd = np.sum(diff * self.nvec[None, :, :], axis=-1)
        j0, y0 = bessel_jy(0, k * r)
        j1, y1 = bessel_jy(1, k * r)
        kern = 0.25j * k * (j1 + 1j * y1) * nd / r + 0.25 * eta * (j0 + 1j * y0) * self.speed
        return (np.pi / self.n) * kern

    def far_field_matrix(self, directions):
        d = np.atleast_2d(np.asarray(directions, dtype=float))
        phase = np.exp(-1j * self.k * d @ self.x.T)
        kern = (-1j * self.k * d @ self.nvec.T - 1j * self.eta * self.speed[None, :]) * phase
        return far_field_constant(self.k) * (np.pi / self.n) * kern

    def boundary_trace(self, psi, t):
        """``u_s`` on the boundary at parameters ``t`` from the exterior.

        The density is trigonometrically interpolated; comparing against
        ``-u_i`` away from the nodes measures the discretisation error.
        """
        t = np.asarray(t, dtype=float)
        rows = self._operator_rows(t, self.curve.point(t))
        return 0.5 * (self.interpolate(psi, t) + rows @ psi)


@functools.lru_cache(maxsize=32)
def obstacle_solver(curve, k, eta=None):
    return SoftObstacleSolver(curve, k, eta)


class ObstacleDensity:
    """Layer density on an obstacle boundary, with its incident field."""

    kind = "obstacle"
    bc = "dirichlet"

    def __init__(self, solver, values, incident):
        self.solver = solver
        self.values = values
        self.incident = incident
        self.k = solver.k

    @property
    def nodes(self):
        return self.solver.x

    def scattered(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        inside = self.solver.curve.contains_closure(pts)
        if np.any(inside):
            raise DomainError("scattered field requested on or inside the obstacle boundary")
        return self.solver.potential_matrix(pts) @ self.values

    def total(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return self.incident(pts) + self.scattered(pts)

    def far_field(self, directions):
        return self.solver.far_field_matrix(directions) @ self.values

    def boundary_residual(self, n_check=None):
        """Max ``|u_i + u_s|`` over ``2N`` boundary checkpoints divided by max ``|u_i|``."""
        n_check = n_check or 2 * self.solver.curve.N
        t = 2 * np.pi * np.arange(n_check) / n_check
        ui = self.incident(self.solver.curve.point(t))
        total = ui + self.solver.boundary_trace(self.values, t)
        return float(np.max(np.abs(total)) / np.max(np.abs(ui)))
