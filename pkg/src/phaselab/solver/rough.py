"""Sound-soft locally rough surface ``x2 = f(x1)`` with ``f`` supported on ``[a, b]``.

The total field of a point source is written as

    u(x) = G(x, z) + int_{bump} [dG(x, y)/dnu(y) - i eta G(x, y)] phi(y) ds(y),

with ``G`` the Dirichlet Green's function of the upper half-plane. For a
target on the flat part of the surface both ``G(x, .)`` and its normal
derivative vanish, so the density is exactly zero there and only the bump
carries unknowns. The margin ``M`` therefore never changes the solution;
it only sets how far out along the flat part the residual is sampled.

The bump is discretised with Gauss-Legendre panels. The self panel uses
product integration against ``ln|s - t|``; panels that come within one panel
length of the target, directly or through the mirror image, are integrated
adaptively.
"""

import functools
import math

import numpy as np
import scipy.linalg

from ..errors import DomainError, SolverError
from ..specialfun import bessel_j, bessel_jy, bessel_y_regular
from .kernels import halfplane_green
from .obstacle import EULER_GAMMA, MAX_CONDITION
from .quadrature import (adaptive_basis_integrals, bernstein_radius, cauchy_product_weights,
                         gauss_legendre, lagrange_basis, log_product_weights,
                         log_product_weights_complex)

DEFAULT_MARGIN = 8.0
PANEL_ORDER = 16
GRADING_LEVELS = 6
# complex-target product rule is used inside this Bernstein ellipse
NEAR_RHO = 1.2


def panel_breaks(a, b, k, grading=GRADING_LEVELS):
    """Panel endpoints on ``[a, b]``: length ``<= min(lambda/2, (b-a)/8)``, dyadically graded at both ends."""
    lmax = min(np.pi / k, (b - a) / 8)
    n = math.ceil((b - a) / lmax - 1e-12)
    breaks = np.linspace(a, b, n + 1)
    first, last = breaks[1] - a, b - breaks[-2]
    left = a + first * 2.0 ** -np.arange(grading, 0, -1)
    right = b - last * 2.0 ** -np.arange(1, grading + 1)
    return np.concatenate(([a], left, breaks[1:-1], right, [b]))


def _mirror(points):
    p = np.array(points, dtype=float, copy=True)
    p[..., 1] *= -1
    return p


class RoughSurfaceSolver:
    """Assembled and factorised panel system for one profile and wavenumber."""

    def __init__(self, profile, k, margin=DEFAULT_MARGIN, eta=None, order=PANEL_ORDER):
        if not margin > 0:
            raise SolverError("truncation margin must be positive")
        self.profile = profile
        self.k = float(k)
        self.eta = self.k if eta is None else float(eta)
        self.margin = float(margin)
        self.order = order
        gx, gw = gauss_legendre(order)
        self.breaks = panel_breaks(profile.a, profile.b, self.k)
        lo, hi = self.breaks[:-1], self.breaks[1:]
        self.half = 0.5 * (hi - lo)
        self.mid = 0.5 * (hi + lo)
        self.n_panels = lo.size
        self.s = (self.mid[:, None] + self.half[:, None] * gx).ravel()
        self.weights = (self.half[:, None] * gw).ravel()
        self.panel_of = np.repeat(np.arange(self.n_panels), order)
        self.tau_of = np.tile(gx, self.n_panels)
        self.points = self._curve(self.s)
        self._zcoef = self._panel_polynomials()
        self.condition = 1.0
        if profile.is_flat:
            # G-kernels vanish identically for targets on the plane
            self.matrix = 0.5 * np.eye(self.s.size)
        else:
            self.matrix = 0.5 * np.eye(self.s.size) + self._rows(self.points, self.panel_of, self.tau_of)
            self.condition = float(np.linalg.cond(self.matrix))
        if not np.isfinite(self.condition) or self.condition > MAX_CONDITION:
            raise SolverError(f"rough-surface matrix is singular to working precision (cond ~ {self.condition:.3g})",
                              condition=self.condition)
        self.lu = scipy.linalg.lu_factor(self.matrix)

    def _curve(self, s):
        return np.stack((s, self.profile.f(s)), axis=-1)

    def _kernel(self, x, s, image):
        """Parametrised kernel ``[dG/dnu - i eta G] |y'|`` split into free and image terms."""
        f = self.profile
        fp = f.df(s)
        y = np.stack((s, f.f(s)), axis=-1)
        nvec = np.stack((-fp, np.ones_like(fp)), axis=-1)
        speed = np.sqrt(1 + fp * fp)
        if image:
            y, nvec = _mirror(y), _mirror(nvec)
        diff = x - y
        r = np.linalg.norm(diff, axis=-1)
        nd = np.sum(diff * nvec, axis=-1)
        j0, y0 = bessel_jy(0, self.k * r)
        j1, y1 = bessel_jy(1, self.k * r)
        val = 0.25j * self.k * (j1 + 1j * y1) * nd / r + 0.25 * self.eta * (j0 + 1j * y0) * speed
        return -val if image else val

    def _log_coefficient(self, x, s):
        fp = self.profile.df(s)
        y = self._curve(s)
        diff = x - y
        r = np.linalg.norm(diff, axis=-1)
        nd = diff[..., 1] - fp * diff[..., 0]
        kr = self.k * r
        j1_over_r = np.where(r > 0, bessel_j(1, kr) / np.where(r > 0, r, 1.0), 0.5 * self.k)
        return (-self.k / (2 * np.pi) * j1_over_r * nd
                + 1j * self.eta / (2 * np.pi) * bessel_j(0, kr) * np.sqrt(1 + fp * fp))

    def _panel_distance(self, x, mirrored):
        """Approximate distance from each target to each panel (or its mirror), shape ``(m, P)``."""
        pts = self.points.reshape(self.n_panels, self.order, 2)
        ends = np.stack((self._curve(self.breaks[:-1]), self._curve(self.breaks[1:])), axis=1)
        pts = np.concatenate((pts, ends), axis=1)
        if mirrored:
            pts = _mirror(pts)
        d = np.linalg.norm(x[:, None, None, :] - pts[None], axis=-1)
        return d.min(axis=-1)

    def _f_complex(self, s):
        """Analytic continuation of the bump polynomial and its derivative."""
        a, b, h = self.profile.a, self.profile.b, self.profile.h
        u = (2 * s - a - b) / (b - a)
        w = 1 - u * u
        return h * w ** 3, -12 * h * u * w * w / (b - a)

    def _preimage(self, X, p):
        """Complex panel coordinate ``zeta`` with ``z_p(zeta) = X1 + i X2``.

        ``z_p(t) = s(t) + i f(s(t))`` is the complexified panel map. Returns
        ``zeta`` and a mask of targets where Newton converged and ``zeta`` lies
        inside the Bernstein ellipse where the moment recurrence is accurate.
        """
        target = X[:, 0] + 1j * X[:, 1]
        mid, half = self.mid[p], self.half[p]
        zeta = (X[:, 0] - mid) / half + 0j
        for _ in range(40):
            s = mid + half * zeta
            f, fp = self._f_complex(s)
            step = (s + 1j * f - target) / (half * (1 + 1j * fp))
            zeta = zeta - step
            if np.all(np.abs(step) < 1e-15):
                break
        s = mid + half * zeta
        err = np.abs(s + 1j * self._f_complex(s)[0] - target)
        ok = (err < 1e-13 * np.maximum(half, 1.0)) & (bernstein_radius(zeta) < NEAR_RHO)
        return zeta, ok & np.isfinite(zeta)

    def _panel_polynomials(self):
        """Coefficients of ``z_p(t) = s(t) + i f(s(t))`` in ``t``, shape ``(P, 7)``."""
        a, b, h = self.profile.a, self.profile.b, self.profile.h
        P = np.polynomial.Polynomial
        coef = np.zeros((self.n_panels, 7), dtype=complex)
        for p in range(self.n_panels):
            u = P([(2 * self.mid[p] - a - b) / (b - a), 2 * self.half[p] / (b - a)])
            z = P([self.mid[p], self.half[p]]) + 1j * h * (1 - u * u) ** 3
            coef[p, :z.coef.size] = z.coef
        return coef

    def _near_product(self, X, p, zeta):
        """Free kernel over panel ``p`` for targets close to it.

        The kernel is split as ``A ln|zeta - t| + Im(1/(t - zeta))/(2 pi) + B``
        in the panel coordinate ``t``. The Cauchy part carries the
        double-layer jump when ``zeta`` approaches the panel; ``B`` is
        assembled from pieces that stay accurate as ``zeta`` does so.
        """
        k, eta = self.k, self.eta
        gx, gw = gauss_legendre(self.order)
        cols = p[:, None] * self.order + np.arange(self.order)
        s = self.s[cols]
        fp = self.profile.df(s)
        speed = np.sqrt(1 + fp * fp)
        y = self.points[cols]
        diff = X[:, None, :] - y
        r = np.linalg.norm(diff, axis=-1)
        nd_r = (diff[..., 1] - fp * diff[..., 0]) / r
        kr = k * r
        j0, j1 = bessel_j(0, kr), bessel_j(1, kr)
        A = -k / (2 * np.pi) * j1 * nd_r + 1j * eta / (2 * np.pi) * j0 * speed
        log_k2 = math.log(0.5 * k)
        dl = 0.25 * k * nd_r * (1j * j1 - 2 / np.pi * log_k2 * j1 - bessel_y_regular(1, kr))
        sl = 0.25 * eta * speed * (j0 + 1j * (2 / np.pi * log_k2 * j0 + bessel_y_regular(0, kr)))
        # Laplace double layer minus its Cauchy part, via divided differences of z_p
        c = self._zcoef[p]
        t = gx[None, :]
        zt = zeta[:, None]
        D = np.zeros(s.shape, dtype=complex)
        E = np.zeros(s.shape, dtype=complex)
        for deg in range(1, 7):
            cd = c[:, deg][:, None]
            for l in range(deg):
                D += cd * t ** l * zt ** (deg - 1 - l)
            for q in range(deg - 1):
                E += cd * (q + 1) * t ** q * zt ** (deg - 2 - q)
        laplace = np.imag(E / D) / (2 * np.pi * self.half[p][:, None])
        B = laplace + dl + sl + A * (np.log(r) - np.log(np.abs(zt - t)))
        W = log_product_weights_complex(self.order, zeta)
        Wc = np.imag(cauchy_product_weights(self.order, zeta)) / (2 * np.pi)
        return self.half[p][:, None] * (W * A + gw * B) + Wc

    def _self_panel(self, x, p, tau0):
        """Free-space part on the panel containing the target, by product integration."""
        gx, gw = gauss_legendre(self.order)
        idx = slice(p * self.order, (p + 1) * self.order)
        s = self.s[idx]
        half = self.half[p]
        dtau = np.abs(tau0 - gx)
        at_node = dtau < 1e-14
        A = self._log_coefficient(x[None, :], s)
        B = np.zeros(self.order, dtype=complex)
        off = ~at_node
        B[off] = self._kernel(x[None, :], s[off], image=False) - A[off] * np.log(dtau[off])
        if at_node.any():
            j = np.flatnonzero(at_node)[0]
            fp, fpp = self.profile.df(s[j]), self.profile.d2f(s[j])
            speed = math.sqrt(1 + fp * fp)
            B[j] = (fpp / (4 * np.pi * (1 + fp * fp))
                    + 0.25 * self.eta * speed
                    * (1 + 2j / np.pi * (math.log(0.5 * self.k * speed * half) + EULER_GAMMA)))
        W = log_product_weights(self.order, tau0)
        return half * (W * A + gw * B)

    def _rows(self, x, panel=None, tau=None):
        """Matrix mapping nodal density to the layer potential at targets ``x``.

        ``panel``/``tau`` locate targets that lie on the bump (panel index and
        local coordinate); for those the principal value is returned, without
        the jump term.
        """
        x = np.atleast_2d(x)
        m = x.shape[0]
        if panel is None:
            panel = np.full(m, -1)
            tau = np.zeros(m)
        rows = np.zeros((m, self.s.size), dtype=complex)
        dist = self._panel_distance(x, mirrored=False)
        dist_img = self._panel_distance(x, mirrored=True)
        speed = np.sqrt(1 + self.profile.df(self.s) ** 2).reshape(self.n_panels, self.order)
        plen = 2 * self.half * speed.max(axis=1)
        near = dist < plen[None, :]
        near_img = dist_img < plen[None, :]
        on_panel = panel[:, None] == np.arange(self.n_panels)[None, :]
        near |= on_panel
        # smooth Gauss rule for everything that is well separated
        far_mask = np.repeat(~near, self.order, axis=1)
        far_img_mask = np.repeat(~near_img, self.order, axis=1)
        ii, jj = np.nonzero(far_mask)
        rows[ii, jj] += self._kernel(x[ii], self.s[jj], image=False) * self.weights[jj]
        ii, jj = np.nonzero(far_img_mask)
        rows[ii, jj] += self._kernel(x[ii], self.s[jj], image=True) * self.weights[jj]
        for i, p in zip(*np.nonzero(on_panel)):
            rows[i, p * self.order:(p + 1) * self.order] += self._self_panel(x[i], p, tau[i])
        for mask, image in ((near & ~on_panel, False), (near_img, True)):
            ti, tp = np.nonzero(mask)
            if ti.size == 0:
                continue
            # the image kernel at x is minus the free kernel at the mirror of x
            targets = _mirror(x[ti]) if image else x[ti]
            sign = -1.0 if image else 1.0
            zeta, ok = self._preimage(targets, tp)
            vals = np.zeros((ti.size, self.order), dtype=complex)
            if ok.any():
                vals[ok] = sign * self._near_product(targets[ok], tp[ok], zeta[ok])
            rest = np.flatnonzero(~ok)
            if rest.size:
                def kern(job, t, X=targets[rest], P=tp[rest]):
                    s = self.mid[P[job]][:, None] + self.half[P[job]][:, None] * t
                    return self._kernel(X[job][:, None, :], s, False) * self.half[P[job]][:, None]

                vals[rest] = sign * adaptive_basis_integrals(kern, rest.size, self.order)
            cols = tp[:, None] * self.order + np.arange(self.order)
            np.add.at(rows, (np.repeat(ti, self.order).reshape(-1, self.order), cols), vals)
        return rows

    def solve(self, inc):
        for z in inc.sources:
            if self.profile.height_above(np.asarray(z)) <= 0:
                raise DomainError(f"source {tuple(z)} is not strictly above the surface")
        if inc.kind == "plane":
            raise DomainError("rough-surface solver needs point-source incidence")
        values = np.zeros(self.s.size, dtype=complex)
        if not self.profile.is_flat:
            rhs = -halfplane_green_sum(self.k, self.points, inc)
            values = scipy.linalg.lu_solve(self.lu, rhs)
        return SurfaceDensity(self, values, inc)

    def interpolate(self, values, s):
        """Density at arbitrary surface abscissae; zero off the bump."""
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape, dtype=complex)
        inside = (s > self.profile.a) & (s < self.profile.b)
        p = np.clip(np.searchsorted(self.breaks, s[inside]) - 1, 0, self.n_panels - 1)
        tau = (s[inside] - self.mid[p]) / self.half[p]
        basis = lagrange_basis(self.order, tau)
        out[inside] = np.einsum("mj,mj->m", basis, values.reshape(self.n_panels, self.order)[p])
        return out

    def locate(self, s):
        p = np.clip(np.searchsorted(self.breaks, s) - 1, 0, self.n_panels - 1)
        return p, (s - self.mid[p]) / self.half[p]


def halfplane_green_sum(k, x, inc):
    return sum(halfplane_green(k, x, np.asarray(z)) for z in inc.sources)


@functools.lru_cache(maxsize=16)
def rough_solver(profile, k, margin=DEFAULT_MARGIN):
    return RoughSurfaceSolver(profile, k, margin)


class SurfaceDensity:
    """Layer density on the bump of a rough surface, with its incident field."""

    kind = "surface"
    bc = "dirichlet"

    def __init__(self, solver, values, incident):
        self.solver = solver
        self.values = values
        self.incident = incident
        self.k = solver.k

    @property
    def nodes(self):
        return self.solver.points

    def correction(self, points):
        """Layer-potential part ``u - G(., z)`` at points strictly above the surface."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if np.any(self.solver.profile.height_above(pts) <= 0):
            raise DomainError("field requested on or below the rough surface")
        if not np.any(self.values):
            return np.zeros(pts.shape[0], dtype=complex)
        return self.solver._rows(pts) @ self.values

    def total(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return halfplane_green_sum(self.k, pts, self.incident) + self.correction(pts)

    def scattered(self, points):
        """``u - u_i`` with ``u_i`` the free-space point-source field."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return self.total(pts) - self.incident(pts)

    def surface_trace(self, s):
        """Total field on the surface at abscissae ``s`` (limit from above)."""
        s = np.asarray(s, dtype=float)
        sol = self.solver
        x = np.stack((s, sol.profile.f(s)), axis=-1)
        out = halfplane_green_sum(self.k, x, self.incident)
        bump = (s > sol.profile.a) & (s < sol.profile.b)
        if np.any(self.values):
            p, tau = sol.locate(s)
            p = np.where(bump, p, -1)
            out = out + sol._rows(x, p, tau) @ self.values
            out[bump] += 0.5 * sol.interpolate(self.values, s[bump])
        return out

    def residual_points(self, per_panel=5, flat_samples=64):
        sol = self.solver
        tau = np.linspace(-1, 1, per_panel + 2)[1:-1] + 0.013
        s_bump = (sol.mid[:, None] + sol.half[:, None] * tau).ravel()
        lam = 2 * np.pi / self.k
        a, b = sol.profile.a, sol.profile.b
        M = sol.margin * lam
        flat = np.concatenate((np.linspace(a - M, a, flat_samples, endpoint=False),
                               np.linspace(b, b + M, flat_samples + 1)[1:]))
        return np.concatenate((s_bump, flat))

    def boundary_residual(self):
        """Max ``|u|`` over surface checkpoints divided by max ``|u_i|`` there.

        Checkpoints sit between the quadrature nodes on every bump panel and
        along the flat part out to ``M`` wavelengths on each side.
        """
        s = self.residual_points()
        x = np.stack((s, self.solver.profile.f(s)), axis=-1)
        ui = self.incident(x)
        return float(np.max(np.abs(self.surface_trace(s))) / np.max(np.abs(ui)))
