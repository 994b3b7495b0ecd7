"""Uniform forward-field interface and the FieldMatrix container.

A *scatterer* is one of

* :class:`phaselab.geometry.BoundaryCurve` (sound-soft, CFIE Nystrom),
* :class:`phaselab.oracles.DiskSpec` (series solution, any boundary condition),
* :class:`phaselab.geometry.SurfaceProfile` (sound-soft rough surface).
"""

import csv
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, DomainError, PhaselabError, SolverError
from ..geometry import BoundaryCurve, SurfaceProfile
from .kernels import MIN_SEPARATION_WAVELENGTHS, IncidentField
from .obstacle import obstacle_solver
from .rough import DEFAULT_MARGIN, rough_solver

SEMANTICS = ("total", "scattered", "incident")


def solve_soft_obstacle(curve, inc):
    """Density of the CFIE solution for a sound-soft obstacle.

    Raises
    ------
    SolverError
        If the Nystrom matrix is singular to working precision; carries the
        condition estimate.
    """
    return obstacle_solver(curve, inc.k).solve(inc)


def solve_rough_soft(profile, k, inc, margin=DEFAULT_MARGIN):
    """Density on the bump of a sound-soft rough surface for point-source incidence."""
    if inc.k != float(k):
        raise ConfigurationError("incident wavenumber differs from k", field="wavenumber")
    return rough_solver(profile, float(k), float(margin)).solve(inc)


def scattered_near(density, x):
    """Scattered field at points strictly outside the obstacle (or above the surface)."""
    return density.scattered(x)


def scattered_far(density, xhat):
    """Far-field pattern ``u_inf(xhat)`` of an obstacle density."""
    if density.kind != "obstacle":
        raise DomainError("far-field patterns are defined for bounded obstacles only")
    d = np.atleast_2d(np.asarray(xhat, dtype=float))
    if np.any(np.abs(np.linalg.norm(d, axis=-1) - 1) > 1e-12):
        raise ConfigurationError("observation directions must be unit vectors", field="xhat")
    return density.far_field(d)


class DiskSolution:
    """Series solution for a :class:`DiskSpec`, with the same interface as the densities."""

    kind = "disk"

    def __init__(self, spec, k, inc, truncation=None):
        from ..oracles import modal_coefficients

        self.spec = spec
        self.k = float(k)
        self.incident = inc
        self.truncation = truncation
        # validates source placement and truncation up front
        modal_coefficients(spec, k, inc, truncation)

    def scattered(self, points):
        from ..oracles import disk_series_field

        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if np.any(np.linalg.norm(pts - np.asarray(self.spec.center), axis=-1) < self.spec.radius):
            raise DomainError("scattered field requested inside the disk")
        return disk_series_field(self.spec, self.k, self.incident, pts, self.truncation)

    def far_field(self, directions):
        from ..oracles import disk_series_far

        return disk_series_far(self.spec, self.k, self.incident, directions, self.truncation).values

    def total(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return self.incident(pts) + self.scattered(pts)


def solve(scatterer, k, inc, margin=DEFAULT_MARGIN, truncation=None):
    """Solve the forward problem; the result exposes ``total`` and ``scattered``."""
    from ..oracles import DiskSpec

    if isinstance(scatterer, BoundaryCurve):
        if inc.k != float(k):
            raise ConfigurationError("incident wavenumber differs from k", field="wavenumber")
        return solve_soft_obstacle(scatterer, inc)
    if isinstance(scatterer, DiskSpec):
        return DiskSolution(scatterer, k, inc, truncation)
    if isinstance(scatterer, SurfaceProfile):
        return solve_rough_soft(scatterer, k, inc, margin)
    raise ConfigurationError(f"unsupported scatterer type {type(scatterer).__name__}", field="scatterer")


def point_field(scatterer, k, z, receivers, semantics="total", margin=DEFAULT_MARGIN, truncation=None):
    """Field of a single point source at ``z`` sampled at ``receivers``."""
    if semantics not in SEMANTICS:
        raise ConfigurationError(f"semantics must be one of {SEMANTICS}", field="semantics")
    receivers = np.atleast_2d(np.asarray(receivers, dtype=float))
    inc = IncidentField.point(k, z)
    gap = np.linalg.norm(receivers - np.asarray(z), axis=-1)
    if np.any(gap < MIN_SEPARATION_WAVELENGTHS * 2 * np.pi / k):
        raise ConfigurationError("a receiver coincides with a source", field="layout")
    if semantics == "incident":
        return inc(receivers)
    sol = solve(scatterer, k, inc, margin, truncation)
    return sol.total(receivers) if semantics == "total" else sol.scattered(receivers)


@dataclass(frozen=True, eq=False)
class FieldMatrix:
    """Samples ``v(x, z)``: rows are receivers, columns are sources with ``z0`` first."""

    receivers: np.ndarray
    sources: np.ndarray
    values: np.ndarray
    semantics: str = "total"

    def __post_init__(self):
        if self.semantics not in SEMANTICS:
            raise ConfigurationError(f"semantics must be one of {SEMANTICS}", field="semantics")
        if self.values.shape != (len(self.receivers), len(self.sources)):
            raise ConfigurationError("field matrix shape does not match receivers x sources")

    @property
    def shape(self):
        return self.values.shape

    @property
    def z0_column(self):
        return self.values[:, 0]

    @property
    def arc_columns(self):
        return self.values[:, 1:]

    def to_csv(self, path):
        write_field_csv(path, self.values, self.semantics)

    @classmethod
    def from_csv(cls, path, receivers=None, sources=None):
        values, semantics = read_field_csv(path)
        if receivers is None:
            receivers = np.full((values.shape[0], 2), np.nan)
        if sources is None:
            sources = np.full((values.shape[1], 2), np.nan)
        return cls(np.asarray(receivers, dtype=float), np.asarray(sources, dtype=float), values, semantics)


def field_matrix(scatterer, layout, semantics="total", margin=DEFAULT_MARGIN, truncation=None):
    """Fields for every receiver on ``layout.sigma`` and every source in ``{z0} + gamma``.

    One forward solve per source; a failed solve is re-raised with the
    offending source index (0 is ``z0``).
    """
    from ..geometry import validate_layout

    report = validate_layout(layout, scatterer)
    if not report.ok:
        raise ConfigurationError(f"layout validation failed: {report}", field="layout")
    receivers = layout.receivers
    sources = layout.all_sources()
    cols = []
    for j, z in enumerate(sources):
        try:
            cols.append(point_field(scatterer, layout.k, z, receivers, semantics, margin, truncation))
        except SolverError as exc:
            raise SolverError(f"solve for source {j} failed: {exc}", condition=exc.condition,
                              source_index=j) from exc
        except PhaselabError as exc:
            raise type(exc)(f"source {j}: {exc}") from exc
    return FieldMatrix(receivers, sources, np.stack(cols, axis=1), semantics)


def write_field_csv(path, values, semantics):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["receiver_ix", "source_ix", "re", "im", "semantics"])
        for i in range(values.shape[0]):
            for j in range(values.shape[1]):
                v = values[i, j]
                w.writerow([i, j, f"{v.real:.17g}", f"{v.imag:.17g}", semantics])


def read_field_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh, skipinitialspace=True))
    if not rows:
        raise ConfigurationError(f"{path}: no field rows")
    ri = np.array([int(r["receiver_ix"]) for r in rows])
    si = np.array([int(r["source_ix"]) for r in rows])
    values = np.full((ri.max() + 1, si.max() + 1), np.nan + 0j)
    values[ri, si] = [complex(float(r["re"]), float(r["im"])) for r in rows]
    if np.isnan(values).any():
        raise ConfigurationError(f"{path}: field matrix has missing entries")
    semantics = {r["semantics"] for r in rows}
    if len(semantics) != 1:
        raise ConfigurationError(f"{path}: mixed semantics {sorted(semantics)}")
    return values, semantics.pop()
