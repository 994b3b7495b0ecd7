"""Free-space and half-plane Green's functions and incident fields."""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, SingularityError
from ..specialfun import hankel1

# receivers closer than this many wavelengths to a source are rejected
MIN_SEPARATION_WAVELENGTHS = 1e-8



def far_field_constant(k):
    """``e^{i pi/4} / sqrt(8 pi k)``, the far-field amplitude of ``Phi``.

    With ``u(x) = e^{ik|x|}/sqrt(|x|) (u_inf(xhat) + O(1/|x|))`` the point
    source has ``Phi_inf(xhat, z) = far_field_constant(k) e^{-ik xhat.z}``.
    """
    return np.exp(1j * np.pi / 4) / np.sqrt(8 * np.pi * k)


def _distance(k, x, z):
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    r = np.linalg.norm(x - z, axis=-1)
    if np.any(r < MIN_SEPARATION_WAVELENGTHS * 2 * np.pi / k):
        raise SingularityError("field evaluated at (or within 1e-8 wavelengths of) its source point")
    return r


def fundamental_2d(k, x, z):
    """Outgoing fundamental solution ``(i/4) H0(k |x - z|)``.

    ``x`` and ``z`` are broadcastable arrays with a trailing axis of length 2.
    """
    r = _distance(k, x, z)
    return 0.25j * hankel1(0, k * r)


def reflect(points):
    """Mirror image across the line ``x2 = 0``."""
    p = np.array(points, dtype=float, copy=True)
    p[..., 1] *= -1
    return p


def halfplane_green(k, x, z):
    """Dirichlet Green's function of the upper half-plane, ``Phi(x, z) - Phi(x, z')``."""
    r = _distance(k, x, z)
    r_img = np.linalg.norm(np.asarray(x, dtype=float) - reflect(z), axis=-1)
    return 0.25j * (hankel1(0, k * r) - hankel1(0, k * r_img))


@dataclass(frozen=True)
class IncidentField:
    """Plane wave, point source, or superposition of two point sources."""

    kind: str
    k: float
    direction: tuple = None
    z: tuple = None
    z2: tuple = None

    @classmethod
    def plane(cls, k, direction):
        d = np.asarray(direction, dtype=float)
        if d.shape != (2,) or abs(np.linalg.norm(d) - 1) > 1e-12:
            raise ConfigurationError("plane-wave direction must be a unit 2-vector", field="direction")
        return cls("plane", float(k), direction=tuple(d))

    @classmethod
    def point(cls, k, z):
        return cls("point", float(k), z=tuple(np.asarray(z, dtype=float)))

    @classmethod
    def superposition(cls, k, z1, z2):
        return cls("superposition", float(k), z=tuple(np.asarray(z1, dtype=float)),
                   z2=tuple(np.asarray(z2, dtype=float)))

    def __post_init__(self):
        if self.kind not in ("plane", "point", "superposition"):
            raise ConfigurationError(f"unknown incident kind {self.kind!r}")
        if not self.k > 0:
            raise ConfigurationError("wavenumber must be positive", field="wavenumber")

    @property
    def sources(self):
        if self.kind == "plane":
            return ()
        if self.kind == "point":
            return (self.z,)
        return (self.z, self.z2)

    def point_parts(self):
        """Split a superposition into its single point sources."""
        return [IncidentField.point(self.k, z) for z in self.sources]

    def __call__(self, x):
        return incident_eval(self, x)

    def gradient(self, x):
        """Gradient of the incident field, shape ``x.shape``."""
        x = np.asarray(x, dtype=float)
        k = self.k
        if self.kind == "plane":
            d = np.asarray(self.direction)
            return 1j * k * np.exp(1j * k * (x @ d))[..., None] * d
        out = 0
        for z in self.sources:
            diff = x - np.asarray(z)
            r = _distance(k, x, z)
            out = out + (-0.25j * k * hankel1(1, k * r) / r)[..., None] * diff
        return out


def incident_eval(inc, x):
    """Evaluate an :class:`IncidentField` at points ``x`` (trailing axis 2)."""
    x = np.asarray(x, dtype=float)
    if inc.kind == "plane":
        return np.exp(1j * inc.k * (x @ np.asarray(inc.direction)))
    if inc.kind == "point":
        return fundamental_2d(inc.k, x, inc.z)
    return fundamental_2d(inc.k, x, inc.z) + fundamental_2d(inc.k, x, inc.z2)


@dataclass(frozen=True, eq=False)
class FarFieldPattern:
    """Far-field samples ``u_inf(xhat)`` under the normalisation of :func:`far_field_constant`."""

    directions: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        d = np.atleast_2d(np.asarray(self.directions, dtype=float))
        if np.any(np.abs(np.linalg.norm(d, axis=-1) - 1) > 1e-12):
            raise ConfigurationError("far-field directions must be unit vectors", field="directions")
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))


def unit_directions(n):
    """``n`` equispaced unit vectors starting at angle 0."""
    th = 2 * np.pi * np.arange(n) / n
    return np.stack((np.cos(th), np.sin(th)), axis=-1)
