"""Obstacle boundaries, admissible measurement arcs and rough-surface profiles."""

from dataclasses import dataclass, field

import numpy as np

from .errors import AdmissibilityError, ConfigurationError

# First zero of J0, truncated as in the disk admissibility criterion.
J0_FIRST_ZERO = 2.4048

KITE_BENDING = 0.65
KITE_STRETCH = 1.5

CURVE_KINDS = ("circle", "ellipse", "kite")


def _point(p, name="point"):
    arr = np.asarray(p, dtype=float)
    if arr.shape != (2,) or not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{name} must be a finite 2-vector, got {p!r}", field=name)
    return arr


@dataclass(frozen=True)
class BoundaryCurve:
    """Smooth closed curve ``p(tau)``, ``tau`` in ``[0, 2 pi)``, oriented counterclockwise.

    ``N`` equispaced quadrature nodes ``tau_j = 2 pi j / N`` are used by the
    Nystrom solver.
    """

    kind: str
    center: tuple
    radii: tuple
    N: int

    def _shape(self, tau, order):
        tau = np.asarray(tau, dtype=float)
        c, s = np.cos(tau), np.sin(tau)
        if self.kind in ("circle", "ellipse"):
            a, b = self.radii
            table = {
                0: (a * c, b * s),
                1: (-a * s, b * c),
                2: (-a * c, -b * s),
            }
        else:
            (scale,) = self.radii
            c2, s2 = np.cos(2 * tau), np.sin(2 * tau)
            kb, ks = KITE_BENDING, KITE_STRETCH
            table = {
                0: (scale * (c + kb * c2 - kb), scale * ks * s),
                1: (scale * (-s - 2 * kb * s2), scale * ks * c),
                2: (scale * (-c - 4 * kb * c2), -scale * ks * s),
            }
        return np.stack(table[order], axis=-1)

    def point(self, tau):
        return self._shape(tau, 0) + np.asarray(self.center)

    def tangent(self, tau):
        """First derivative ``p'(tau)``."""
        return self._shape(tau, 1)

    def second_derivative(self, tau):
        return self._shape(tau, 2)

    def speed(self, tau):
        return np.linalg.norm(self.tangent(tau), axis=-1)

    def normal(self, tau):
        """Outward unit normal."""
        t = self.tangent(tau)
        n = np.stack((t[..., 1], -t[..., 0]), axis=-1)
        return n / np.linalg.norm(n, axis=-1, keepdims=True)

    @property
    def nodes(self):
        return 2.0 * np.pi * np.arange(self.N) / self.N

    def outline(self, n=2048):
        return self.point(2.0 * np.pi * np.arange(n) / n)

    def arc_length(self, n=None):
        n = n or 4 * self.N
        return 2.0 * np.pi * np.mean(self.speed(2.0 * np.pi * np.arange(n) / n))

    def contains_closure(self, points, n=4096):
        """True for points inside the curve or within 1e-12 of it."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        poly = self.outline(n)
        inside = _point_in_polygon(pts, poly)
        d = _distance_to_polyline(pts, poly)
        out = inside | (d <= 1e-12)
        return out if np.ndim(points) > 1 else out[0]

    def distance(self, points, n=4096):
        return _distance_to_polyline(np.atleast_2d(points), self.outline(n))

    def with_center(self, center):
        return BoundaryCurve(self.kind, tuple(_point(center, "center")), self.radii, self.N)

    def with_nodes(self, N):
        return make_curve(self.kind, self.params(), N)

    def params(self):
        if self.kind == "circle":
            return {"radius": self.radii[0], "center": list(self.center)}
        if self.kind == "ellipse":
            return {"a": self.radii[0], "b": self.radii[1], "center": list(self.center)}
        return {"scale": self.radii[0], "center": list(self.center)}


def make_curve(kind, params, N=64):
    """Build a :class:`BoundaryCurve`.

    Parameters
    ----------
    kind : {"circle", "ellipse", "kite"}
    params : mapping
        ``circle``: ``radius``; ``ellipse``: ``a``, ``b``; ``kite``: ``scale``
        (default 1). All kinds accept ``center`` (default origin).
    N : int
        Even number of quadrature nodes, at least 16.
    """
    if kind not in CURVE_KINDS:
        raise ConfigurationError(f"unknown curve kind {kind!r}", field="shape")
    if int(N) != N or N % 2 or N < 16:
        raise ConfigurationError(f"node count must be even and >= 16, got {N}", field="nodes")
    params = dict(params or {})
    center = tuple(_point(params.get("center", (0.0, 0.0)), "center"))
    if kind == "circle":
        radii = (float(params.get("radius", 1.0)),) * 2
    elif kind == "ellipse":
        radii = (float(params.get("a", 1.0)), float(params.get("b", 1.0)))
    else:
        radii = (float(params.get("scale", 1.0)),)
    if any(not np.isfinite(r) or r <= 0 for r in radii):
        raise ConfigurationError(f"{kind} size parameters must be positive, got {radii}", field="radius")
    return BoundaryCurve(kind, center, radii, int(N))


@dataclass(frozen=True)
class AdmissibleArc:
    """Circular arc on the boundary of a disk whose Dirichlet spectrum avoids ``k**2``."""

    center: tuple
    radius: float
    aperture: tuple
    n_points: int
    k: float
    k_radius: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "k_radius", self.k * self.radius)

    @property
    def angles(self):
        return np.linspace(self.aperture[0], self.aperture[1], self.n_points)

    @property
    def points(self):
        th = self.angles
        return np.asarray(self.center) + self.radius * np.stack((np.cos(th), np.sin(th)), axis=-1)


def make_admissible_arc(center, radius, aperture, n_points, k):
    """Uniformly sampled arc ``center + radius (cos t, sin t)``, endpoints included.

    Raises
    ------
    AdmissibilityError
        If ``k * radius >= 2.4048``: ``k**2`` could then be a Dirichlet
        eigenvalue of the disk and the arc is not admissible.
    """
    center = tuple(_point(center, "center"))
    radius = float(radius)
    k = float(k)
    if not radius > 0:
        raise ConfigurationError(f"arc radius must be positive, got {radius}", field="radius")
    if not k > 0:
        raise ConfigurationError(f"wavenumber must be positive, got {k}", field="wavenumber")
    if int(n_points) != n_points or n_points < 2:
        raise ConfigurationError(f"arc needs at least 2 points, got {n_points}", field="points")
    t0, t1 = (float(a) for a in aperture)
    if not t1 > t0:
        raise ConfigurationError("arc aperture must have positive measure", field="aperture")
    if t1 - t0 > 2 * np.pi + 1e-12:
        raise ConfigurationError("arc aperture exceeds a full turn", field="aperture")
    if k * radius >= J0_FIRST_ZERO:
        raise AdmissibilityError(
            f"k*radius = {k * radius:.6g} >= {J0_FIRST_ZERO}: k^2 may be a Dirichlet "
            "eigenvalue of -Laplace on the arc disk (radius must be < 2.4048/k)",
            field="radius",
        )
    return AdmissibleArc(center, radius, (t0, t1), int(n_points), k)


@dataclass(frozen=True)
class SurfaceProfile:
    """Compactly supported C2 bump ``h (1 - u^2)^3`` with ``u = (2 x - a - b) / (b - a)``."""

    a: float
    b: float
    h: float

    def _u(self, x):
        # written so that u is exactly -1 at a and +1 at b
        x = np.asarray(x, dtype=float)
        return ((x - self.a) - (self.b - x)) / (self.b - self.a)

    def f(self, x):
        u = self._u(x)
        inside = np.abs(u) < 1
        return np.where(inside, self.h * (1 - u * u) ** 3, 0.0)

    def df(self, x):
        u = self._u(x)
        inside = np.abs(u) < 1
        du = 2.0 / (self.b - self.a)
        return np.where(inside, -6.0 * self.h * u * (1 - u * u) ** 2 * du, 0.0)

    def d2f(self, x):
        u = self._u(x)
        inside = np.abs(u) < 1
        du = 2.0 / (self.b - self.a)
        g = -6.0 * self.h * ((1 - u * u) ** 2 - 4 * u * u * (1 - u * u))
        return np.where(inside, g * du * du, 0.0)

    @property
    def is_flat(self):
        return self.h == 0.0

    def height_above(self, points):
        """Signed vertical clearance ``x2 - f(x1)``."""
        pts = np.asarray(points, dtype=float)
        return pts[..., 1] - self.f(pts[..., 0])

    def contains_closure(self, points):
        """True for points on or below the surface (outside the propagation domain)."""
        return self.height_above(points) <= 0


def make_profile(a, b, h):
    a, b, h = float(a), float(b), float(h)
    if not a < b:
        raise ConfigurationError(f"support must satisfy a < b, got [{a}, {b}]", field="support")
    if not np.isfinite(h):
        raise ConfigurationError("bump height must be finite", field="height")
    return SurfaceProfile(a, b, h)


@dataclass(frozen=True)
class SourceReceiverLayout:
    """Reference source ``z0``, source arc ``gamma`` and receiver arc ``sigma``."""

    z0: tuple
    gamma: AdmissibleArc
    sigma: AdmissibleArc
    k: float

    @property
    def sources(self):
        return self.gamma.points

    @property
    def receivers(self):
        return self.sigma.points

    def all_sources(self):
        """``z0`` followed by the source-arc samples."""
        return np.vstack((np.asarray(self.z0)[None, :], self.gamma.points))

    def transposed(self):
        """Swap the roles of the two arcs (used for reciprocity checks)."""
        return SourceReceiverLayout(self.z0, self.sigma, self.gamma, self.k)


def default_z0(gamma, sigma, k):
    """Midpoint of the arc centers pushed one wavelength along the perpendicular.

    The perpendicular pointing away from the origin is used, so for scatterers
    near the origin ``z0`` lands on the far side of the arcs.
    """
    c1, c2 = np.asarray(gamma.center), np.asarray(sigma.center)
    mid = 0.5 * (c1 + c2)
    d = c2 - c1
    perp = np.array([-d[1], d[0]])
    norm = np.linalg.norm(perp)
    perp = np.array([0.0, 1.0]) if norm == 0 else perp / norm
    if np.dot(perp, mid) < 0:
        perp = -perp
    return tuple(float(c) for c in mid + (2.0 * np.pi / k) * perp)


def make_layout(gamma, sigma, k, z0=None):
    if gamma.k != k or sigma.k != k:
        raise ConfigurationError("arcs were built for a different wavenumber", field="wavenumber")
    z0 = default_z0(gamma, sigma, k) if z0 is None else tuple(float(c) for c in _point(z0, "z0"))
    return SourceReceiverLayout(z0, gamma, sigma, float(k))


@dataclass(frozen=True)
class Violation:
    code: str
    hypothesis: str
    detail: str

    def __str__(self):
        return f"{self.code}: violates {self.hypothesis} ({self.detail})"


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def codes(self):
        return [v.code for v in self.violations]

    def __str__(self):
        return "pass" if self.ok else "; ".join(str(v) for v in self.violations)


def _circle_samples(center, radius, n=720):
    th = 2 * np.pi * np.arange(n) / n
    return np.asarray(center) + radius * np.stack((np.cos(th), np.sin(th)), axis=-1)


def _disk_clear_of(scatterer, center, radius):
    """True when the closed disk lies strictly outside the scatterer's closure."""
    if scatterer.contains_closure(np.asarray(center)[None, :])[0]:
        return False
    return bool(np.min(_scatterer_distance(scatterer, center)) > radius)


def _surface_disk_clear(profile, center, radius):
    # a disk whose boundary circle clears the graph lies entirely above it
    return bool(np.all(profile.height_above(_circle_samples(center, radius)) > 0))


def _scatterer_distance(scatterer, point):
    if hasattr(scatterer, "distance"):
        return scatterer.distance(np.asarray(point)[None, :])
    raise TypeError(f"unsupported scatterer {type(scatterer).__name__}")


def validate_layout(layout, scatterer=None):
    """Check the geometric hypotheses of the phaseless measurement setting.

    Every check uses the closed arc disks, so shrinking an arc never adds a
    violation. ``scatterer`` may be a :class:`BoundaryCurve`, a
    :class:`SurfaceProfile`, any object exposing ``contains_closure`` and
    ``distance`` (e.g. :class:`phaselab.oracles.DiskSpec`), or ``None``.
    """
    out = []
    g, s = layout.gamma, layout.sigma
    gap = np.linalg.norm(np.subtract(g.center, s.center))
    if gap <= g.radius + s.radius:
        out.append(Violation("disk_overlap", "Ω̄ ∩ Ḡ = ∅",
                             f"center distance {gap:.6g} <= radius sum {g.radius + s.radius:.6g}"))
    if g.k != layout.k or s.k != layout.k:
        out.append(Violation("wavenumber_mismatch", "arcs admissible for k",
                             "arc wavenumbers differ from layout wavenumber"))
    z0 = np.asarray(layout.z0)
    for name, arc in (("Ω", g), ("G", s)):
        if np.linalg.norm(z0 - np.asarray(arc.center)) <= arc.radius:
            out.append(Violation("z0_placement", "z₀ ∈ ℝ²∖(D̄∪Γ∪Σ)",
                                 f"z0 lies in the closed disk {name}̄"))
    if scatterer is not None:
        if isinstance(scatterer, SurfaceProfile):
            if scatterer.height_above(z0) <= 0:
                out.append(Violation("z0_placement", "z₀ ∈ D₀", "z0 is not above the surface"))
            for name, arc in (("Ω", g), ("G", s)):
                if not _surface_disk_clear(scatterer, arc.center, arc.radius):
                    out.append(Violation("surface_clearance", f"{name}̄ ⊂⊂ D₀",
                                         f"disk {name} touches or crosses the surface"))
        else:
            if scatterer.contains_closure(z0[None, :])[0]:
                out.append(Violation("z0_placement", "z₀ ∈ ℝ²∖(D̄∪Γ∪Σ)", "z0 lies in the scatterer"))
            for name, arc in (("Ω", g), ("G", s)):
                if not _disk_clear_of(scatterer, arc.center, arc.radius):
                    out.append(Violation("scatterer_intersection", f"{name}̄ ⊂ ℝ²∖D̄",
                                         f"disk {name} meets the scatterer"))
    return ValidationReport(out)


def _point_in_polygon(pts, poly):
    x, y = pts[:, 0][:, None], pts[:, 1][:, None]
    x1, y1 = poly[:, 0][None, :], poly[:, 1][None, :]
    x2, y2 = np.roll(poly[:, 0], -1)[None, :], np.roll(poly[:, 1], -1)[None, :]
    crosses = (y1 > y) != (y2 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
    hits = crosses & (x < xint)
    return np.count_nonzero(hits, axis=1) % 2 == 1


def _distance_to_polyline(pts, poly):
    a = poly[None, :, :]
    b = np.roll(poly, -1, axis=0)[None, :, :]
    p = np.asarray(pts, dtype=float)[:, None, :]
    ab = b - a
    t = np.clip(np.sum((p - a) * ab, axis=-1) / np.sum(ab * ab, axis=-1), 0.0, 1.0)
    proj = a + t[..., None] * ab
    return np.min(np.linalg.norm(p - proj, axis=-1), axis=1)
