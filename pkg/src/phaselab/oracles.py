"""Separation-of-variables reference solutions.

Disks are expanded in polar harmonics about their centre,

    u_i = sum_n c_n J_n(k rho) e^{i n theta},   u_s = sum_n T_n c_n H_n(k rho) e^{i n theta},

with ``T_n`` fixed by the boundary condition. Point sources are expanded by
Graf's addition theorem, plane waves by Jacobi-Anger. Integer-order Bessel
values come from recurrences seeded by :mod:`phaselab.specialfun`.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ConfigurationError, DomainError, TruncationError
from .specialfun import bessel_j, bessel_jy
from .solver.kernels import FarFieldPattern, far_field_constant, halfplane_green

MODE_MARGIN = 20
TRUNCATION_TOL = 1e-13
MAX_ORDER = 400


@dataclass(frozen=True)
class DiskSpec:
    """Disk scatterer with a soft, impedance, or homogeneous-medium interior.

    Parameters
    ----------
    radius : float
    center : tuple
    bc : {"soft", "impedance", "medium"}
    impedance : float
        ``lambda`` in ``du/dnu + i k lambda u = 0``; used when ``bc == "impedance"``.
    index : complex
        Refractive index ``n`` inside the disk; used when ``bc == "medium"``.
    """

    radius: float
    center: tuple = (0.0, 0.0)
    bc: str = "soft"
    impedance: float = 0.0
    index: complex = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ConfigurationError("disk radius must be positive", field="radius")
        if self.bc not in ("soft", "impedance", "medium"):
            raise ConfigurationError(f"unknown disk boundary condition {self.bc!r}", field="bc")
        n = complex(self.index)
        if self.bc == "medium" and not (n.real > 0 and n.imag >= 0):
            raise ConfigurationError("refractive index needs Re n > 0 and Im n >= 0", field="index")
        if self.bc == "impedance" and not np.isfinite(self.impedance):
            raise ConfigurationError("impedance must be a finite real number", field="impedance")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def contains_closure(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.linalg.norm(x - np.asarray(self.center), axis=-1) <= self.radius * (1 + 1e-12)

    def distance(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.maximum(np.linalg.norm(x - np.asarray(self.center), axis=-1) - self.radius, 0.0)


@dataclass(frozen=True)
class SeriesTruncation:
    """Mode cutoff ``|n| <= n_max``."""

    n_max: int

    @classmethod
    def default(cls, k, radius):
        return cls(math.ceil(k * radius) + MODE_MARGIN)


def bessel_j_orders(n_max, z):
    """``J_0 .. J_{n_max}`` at real or complex ``z`` by Miller's downward recurrence.

    Returns an array of shape ``(n_max + 1,) + z.shape``. The sequence is
    normalised by ``J_0 + 2 sum J_{2m} = 1``; for real arguments the
    normalisation uses the directly computed ``J_0`` or ``J_1`` instead,
    whichever is larger.
    """
    z = np.asarray(z)
    shape = z.shape
    zf = z.ravel().astype(complex)
    out = np.zeros((n_max + 1, zf.size), dtype=complex)
    zero = zf == 0
    out[0, zero] = 1.0
    zs = zf[~zero]
    if zs.size:
        top = int(max(n_max, np.max(np.abs(zs)))) + 30 + int(np.sqrt(40 * max(n_max, np.max(np.abs(zs)))))
        top += top % 2
        vals = np.zeros((n_max + 1, zs.size), dtype=complex)
        j_next = np.zeros(zs.size, dtype=complex)
        j_cur = np.full(zs.size, 1e-300, dtype=complex)
        even_sum = np.zeros(zs.size, dtype=complex)
        for n in range(top, 0, -1):
            j_prev = 2 * n / zs * j_cur - j_next
            j_next, j_cur = j_cur, j_prev
            # j_cur now holds order n - 1
            if n - 1 <= n_max:
                vals[n - 1] = j_cur
            if (n - 1) % 2 == 0 and n - 1 > 0:
                even_sum += j_cur
            big = np.abs(j_cur) > 1e250
            if big.any():
                for arr in (j_cur, j_next, even_sum):
                    arr[big] *= 1e-250
                vals[:, big] *= 1e-250
        scale = j_cur + 2 * even_sum
        real = np.abs(zs.imag) == 0
        if real.any():
            x = zs.real[real]
            j0 = bessel_j(0, x)
            j1 = bessel_j(1, x)
            seq1 = vals[1, real] if n_max >= 1 else j_next[real]
            use0 = np.abs(j0) >= np.abs(j1)
            scale[real] = np.where(use0, vals[0, real] / j0, seq1 / j1)
        out[:, ~zero] = vals / scale
    out = out.reshape((n_max + 1,) + shape)
    return out.real if not np.iscomplexobj(z) else out


def bessel_y_orders(n_max, x):
    """``Y_0 .. Y_{n_max}`` for real ``x > 0`` by upward recurrence."""
    x = np.asarray(x, dtype=float)
    y0 = bessel_jy(0, x)[1]
    y1 = bessel_jy(1, x)[1]
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = y0
    if n_max >= 1:
        out[1] = y1
    for n in range(1, n_max):
        with np.errstate(over="ignore", invalid="ignore"):
            out[n + 1] = 2 * n / x * out[n] - out[n - 1]
    return out


def _symmetric(arr_pos, n_max):
    """Extend orders ``0..n_max`` to ``-n_max..n_max`` using ``C_{-n} = (-1)^n C_n``."""
    n = np.arange(1, n_max + 1)
    sign = ((-1.0) ** n).reshape((-1,) + (1,) * (arr_pos.ndim - 1))
    return np.concatenate((sign[::-1] * arr_pos[:0:-1], arr_pos), axis=0)


def _jh_with_derivatives(n_max, x):
    """``J, J', H, H'`` for orders ``-n_max..n_max`` at real ``x``."""
    j = bessel_j_orders(n_max + 1, x)
    y = bessel_y_orders(n_max + 1, x)
    h = j + 1j * y

    def full_and_prime(c):
        full = _symmetric(c, n_max + 1)
        return full[1:-1], 0.5 * (full[:-2] - full[2:])

    J, dJ = full_and_prime(j)
    H, dH = full_and_prime(h)
    return J, dJ, H, dH


def _incident_coefficients(spec, k, inc, n_max):
    n = np.arange(-n_max, n_max + 1)
    c = np.asarray(spec.center)
    if inc.kind == "plane":
        d = np.asarray(inc.direction)
        theta_d = np.arctan2(d[1], d[0])
        return np.exp(1j * k * (c @ d)) * (1j ** (n % 4)) * np.exp(-1j * n * theta_d)
    coef = np.zeros(n.size, dtype=complex)
    for z in inc.sources:
        rel = np.asarray(z) - c
        rho_z = np.hypot(*rel)
        if rho_z <= spec.radius:
            raise DomainError(f"incident source {tuple(z)} is not outside the disk")
        theta_z = np.arctan2(rel[1], rel[0])
        hz = _symmetric(bessel_j_orders(n_max, k * rho_z) + 1j * bessel_y_orders(n_max, k * rho_z), n_max)
        coef = coef + 0.25j * hz * np.exp(-1j * n * theta_z)
    return coef


def _t_matrix(spec, k, n_max):
    """Scattering coefficients ``T_n`` and interior ratios ``b_n / c_n`` (medium only)."""
    ka = k * spec.radius
    J, dJ, H, dH = _jh_with_derivatives(n_max, ka)
    if spec.bc == "soft":
        return -J / H, None
    if spec.bc == "impedance":
        lam = spec.impedance
        return -(dJ + 1j * lam * J) / (dH + 1j * lam * H), None
    kappa = k * np.sqrt(complex(spec.index))
    jk = _symmetric(bessel_j_orders(n_max + 1, np.asarray(kappa * spec.radius)), n_max + 1)
    Jk, dJk = jk[1:-1], 0.5 * (jk[:-2] - jk[2:])
    det = k * dH * Jk - kappa * dJk * H
    T = (kappa * J * dJk - k * dJ * Jk) / det
    interior = k * (J * dH - H * dJ) / det
    return T, interior


def _modal(spec, k, inc, truncation):
    n_max = (truncation or SeriesTruncation.default(k, spec.radius)).n_max
    if n_max < math.ceil(k * spec.radius) + MODE_MARGIN:
        raise ConfigurationError(f"n_max must be at least ceil(k a) + {MODE_MARGIN}", field="n_max")
    if n_max > MAX_ORDER:
        raise ConfigurationError(f"n_max above {MAX_ORDER} is not supported", field="n_max")
    coef = _incident_coefficients(spec, k, inc, n_max)
    T, interior = _t_matrix(spec, k, n_max)
    return n_max, coef, T, interior


def _sum_checked(terms, n_max):
    """Sum modal terms (axis 0) and apply the last-mode convergence guard."""
    if not np.all(np.isfinite(terms)):
        raise TruncationError("modal series overflowed; evaluation point too close to the disk or a source")
    total = terms.sum(axis=0)
    last = np.abs(terms[0]) + np.abs(terms[-1])
    scale = np.max(np.abs(total)) if total.size else 0.0
    if scale > 0 and np.max(last) > TRUNCATION_TOL * scale:
        raise TruncationError(
            f"series not converged at n_max = {n_max}: last mode contributes "
            f"{np.max(last) / scale:.2e} of the sum")
    return total


def disk_series_field(spec, k, inc, x, truncation=None):
    """Scattered field outside the disk; total field inside a medium disk.

    Parameters
    ----------
    spec : DiskSpec
    k : float
    inc : IncidentField
        Plane wave, point source, or superposition; sources outside the disk.
    x : array_like, shape (..., 2)
    truncation : SeriesTruncation, optional
        Defaults to ``n_max = ceil(k a) + 20``.

    Raises
    ------
    DomainError
        For interior points of a soft or impedance disk.
    TruncationError
        If the last retained mode contributes more than 1e-13 of the sum.
    """
    x = np.asarray(x, dtype=float)
    shape = x.shape[:-1]
    pts = x.reshape(-1, 2)
    rel = pts - np.asarray(spec.center)
    rho = np.hypot(rel[:, 0], rel[:, 1])
    theta = np.arctan2(rel[:, 1], rel[:, 0])
    outside = rho >= spec.radius * (1 - 1e-12)
    if not outside.all() and spec.bc != "medium":
        raise DomainError("scattered field of a soft/impedance disk requested inside the disk")
    n_max, coef, T, interior = _modal(spec, k, inc, truncation)
    n = np.arange(-n_max, n_max + 1)
    out = np.empty(pts.shape[0], dtype=complex)
    angular = np.exp(1j * np.outer(n, theta))
    if outside.any():
        kr = k * rho[outside]
        h = _symmetric(bessel_j_orders(n_max, kr) + 1j * bessel_y_orders(n_max, kr), n_max)
        terms = (T * coef)[:, None] * h * angular[:, outside]
        out[outside] = _sum_checked(terms, n_max)
    if (~outside).any():
        kappa = k * np.sqrt(complex(spec.index))
        jk = _symmetric(bessel_j_orders(n_max, kappa * rho[~outside].astype(complex)), n_max)
        terms = (interior * coef)[:, None] * jk * angular[:, ~outside]
        out[~outside] = _sum_checked(terms, n_max)
    return out.reshape(shape)


def disk_series_far(spec, k, inc, directions, truncation=None):
    """Far-field pattern of the disk under the normalisation of ``far_field_constant``.

    Uses ``H_n(k rho) ~ sqrt(2/(pi k rho)) exp(i(k rho - n pi/2 - pi/4))``.
    """
    d = np.atleast_2d(np.asarray(directions, dtype=float))
    n_max, coef, T, _ = _modal(spec, k, inc, truncation)
    n = np.arange(-n_max, n_max + 1)
    theta = np.arctan2(d[:, 1], d[:, 0])
    shift = np.exp(-1j * k * d @ np.asarray(spec.center))
    a = T * coef * (-1j) ** (n % 4)
    terms = a[:, None] * np.exp(1j * np.outer(n, theta))
    vals = np.sqrt(2 / (np.pi * k)) * np.exp(-1j * np.pi / 4) * shift * _sum_checked(terms, n_max)
    return FarFieldPattern(d, vals)


def modal_coefficients(spec, k, inc, truncation=None):
    """Scattered-field coefficients ``a_n = T_n c_n`` for ``n = -n_max..n_max``."""
    n_max, coef, T, _ = _modal(spec, k, inc, truncation)
    return np.arange(-n_max, n_max + 1), T * coef


def flat_halfplane_exact(k, z, x):
    """Total field of a point source at ``z`` above the sound-soft plane ``x2 = 0``."""
    z = np.asarray(z, dtype=float)
    x = np.asarray(x, dtype=float)
    if z[1] <= 0 or np.any(x[..., 1] < 0):
        raise DomainError("source and receivers must lie above the plane")
    return halfplane_green(k, x, z)


def flux_balance(spec, k, direction, n_quad=512):
    """Both sides of the far-field energy identity for plane-wave incidence.

    Returns ``(lhs, rhs)`` with ``lhs = int |u_inf|^2 dtheta`` (trapezoid
    rule, spectrally accurate for the periodic integrand) and
    ``rhs = -sqrt(8 pi / k) Re(e^{i pi/4} u_inf(d))``. They agree for
    lossless scatterers.
    """
    from .solver.kernels import IncidentField, unit_directions

    inc = IncidentField.plane(k, direction)
    pattern = disk_series_far(spec, k, inc, unit_directions(n_quad))
    lhs = 2 * np.pi / n_quad * np.sum(np.abs(pattern.values) ** 2)
    forward = disk_series_far(spec, k, inc, np.asarray(direction)[None, :]).values[0]
    rhs = -np.sqrt(8 * np.pi / k) * np.real(np.exp(1j * np.pi / 4) * forward)
    return float(lhs), float(rhs)


__all__ = ["DiskSpec", "SeriesTruncation", "bessel_j_orders", "bessel_y_orders",
           "disk_series_field", "disk_series_far", "modal_coefficients",
           "flat_halfplane_exact", "flux_balance", "far_field_constant"]
