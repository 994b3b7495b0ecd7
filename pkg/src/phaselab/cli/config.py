"""Experiment configuration: YAML parsing, defaults and validation.

A configuration is a nested mapping::

    kind: verify              # forward | measure | retrieve | discriminate | verify
    wavenumber: 1.0
    seed: 0
    scatterer:
      type: obstacle          # obstacle | disk | surface
      shape: kite             # obstacle: circle | ellipse | kite
      params: {scale: 1.0}
      nodes: 64
    layout:
      gamma: {center: [0, 3], radius: 0.5, aperture: [3.14159, 6.28319], points: 16}
      sigma: {center: [3, 0], radius: 0.5, aperture: [1.5708, 4.71239], points: 16}
      z0: [5.9, 5.9]          # optional
    solver:
      margin: 8.0             # rough surface, in wavelengths
      n_max: null             # disk series cutoff

Disks take ``radius``, ``center``, ``bc`` (soft | impedance | medium),
``impedance`` and ``index``; surfaces take ``support: [a, b]`` and ``height``.
Missing sections fall back to the desk-scale defaults below.
"""

import copy
from dataclasses import dataclass, field

import numpy as np
import yaml

from ..errors import ConfigurationError
from ..geometry import make_admissible_arc, make_curve, make_layout, make_profile, validate_layout
from ..oracles import DiskSpec, SeriesTruncation

KINDS = ("forward", "measure", "retrieve", "discriminate", "verify")
SCATTERER_TYPES = ("obstacle", "disk", "surface")

DEFAULT_LAYOUT = {
    "gamma": {"center": [0.0, 3.0], "radius": 0.5, "aperture": [np.pi, 2 * np.pi], "points": 16},
    "sigma": {"center": [3.0, 0.0], "radius": 0.5, "aperture": [0.5 * np.pi, 1.5 * np.pi], "points": 16},
}
DEFAULT_SURFACE_LAYOUT = {
    "gamma": {"center": [-1.5, 2.0], "radius": 0.5, "aperture": [np.pi, 2 * np.pi], "points": 16},
    "sigma": {"center": [1.5, 2.0], "radius": 0.5, "aperture": [np.pi, 2 * np.pi], "points": 16},
}
DEFAULT_SCATTERER = {"type": "obstacle", "shape": "circle", "params": {"radius": 1.0}, "nodes": 64}
DEFAULT_SOLVER = {"margin": 8.0, "n_max": None}


@dataclass
class ExperimentConfig:
    """Validated configuration with the objects it describes already built."""

    kind: str
    k: float
    scatterer_spec: dict
    layout_spec: dict
    solver_spec: dict
    seed: int = 0
    source: str = "<memory>"
    scatterer: object = field(default=None, repr=False)
    layout: object = field(default=None, repr=False)

    @property
    def margin(self):
        return float(self.solver_spec["margin"])

    @property
    def truncation(self):
        n = self.solver_spec.get("n_max")
        return None if n is None else SeriesTruncation(int(n))

    @property
    def solve_options(self):
        return {"margin": self.margin, "truncation": self.truncation}

    def echo(self):
        """Plain-data copy suitable for the report."""
        return _plain({"kind": self.kind, "wavenumber": self.k, "seed": self.seed,
                       "scatterer": self.scatterer_spec, "layout": self.layout_spec,
                       "solver": self.solver_spec})

    def label(self):
        return scatterer_label(self.scatterer_spec)

    def with_scatterer(self, spec):
        """Copy with a different scatterer on the same layout."""
        return build_config({**self.echo(), "scatterer": spec}, self.source)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    return obj


def scatterer_label(spec):
    t = spec["type"]
    if t == "obstacle":
        inner = ",".join(f"{k}={v}" for k, v in sorted(spec.get("params", {}).items()))
        return f"{spec['shape']}({inner})"
    if t == "disk":
        extra = {"impedance": f",lambda={spec.get('impedance', 0.0)}",
                 "medium": f",n={spec.get('index', 1.0)}"}.get(spec.get("bc", "soft"), "")
        return f"disk-{spec.get('bc', 'soft')}(r={spec['radius']},c={list(spec.get('center', [0, 0]))}{extra})"
    return f"surface(support={list(spec['support'])},h={spec['height']})"


def _number(value, name, positive=False):
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{name} must be a number, got {value!r}", field=name) from None
    if not np.isfinite(out) or (positive and out <= 0):
        raise ConfigurationError(f"{name} must be {'positive' if positive else 'finite'}, got {value!r}",
                                 field=name)
    return out


def _pair(value, name):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigurationError(f"{name} must be a pair of numbers, got {value!r}", field=name)
    return [_number(v, name) for v in value]


def _expect_mapping(value, name):
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigurationError(f"{name} must be a mapping, got {type(value).__name__}", field=name)
    return value


def _scatterer_spec(raw):
    raw = _expect_mapping(raw, "scatterer")
    spec = copy.deepcopy(raw) if raw else copy.deepcopy(DEFAULT_SCATTERER)
    t = spec.setdefault("type", "obstacle")
    if t not in SCATTERER_TYPES:
        raise ConfigurationError(f"scatterer.type must be one of {SCATTERER_TYPES}, got {t!r}",
                                 field="scatterer.type")
    if t == "obstacle":
        spec.setdefault("shape", "circle")
        spec["params"] = _expect_mapping(spec.get("params"), "scatterer.params")
        spec.setdefault("nodes", 64)
    elif t == "disk":
        spec["radius"] = _number(spec.get("radius", 1.0), "scatterer.radius", positive=True)
        spec["center"] = _pair(spec.get("center", [0.0, 0.0]), "scatterer.center")
        spec.setdefault("bc", "soft")
        if spec["bc"] == "impedance":
            spec["impedance"] = _number(spec.get("impedance", 0.0), "scatterer.impedance")
        if spec["bc"] == "medium":
            spec["index"] = _number(spec.get("index", 1.0), "scatterer.index", positive=True)
    else:
        spec["support"] = _pair(spec.get("support", [-1.0, 1.0]), "scatterer.support")
        spec["height"] = _number(spec.get("height", 0.0), "scatterer.height")
    return spec


def build_scatterer(spec):
    t = spec["type"]
    if t == "obstacle":
        return make_curve(spec["shape"], spec["params"], int(spec["nodes"]))
    if t == "disk":
        return DiskSpec(spec["radius"], tuple(spec["center"]), spec["bc"],
                        spec.get("impedance", 0.0), spec.get("index", 1.0))
    return make_profile(spec["support"][0], spec["support"][1], spec["height"])


def _arc(spec, name, k):
    spec = _expect_mapping(spec, f"layout.{name}")
    for key in ("center", "radius", "aperture", "points"):
        if key not in spec:
            raise ConfigurationError(f"layout.{name}.{key} is required", field=f"layout.{name}.{key}")
    return make_admissible_arc(_pair(spec["center"], f"layout.{name}.center"),
                               _number(spec["radius"], f"layout.{name}.radius"),
                               _pair(spec["aperture"], f"layout.{name}.aperture"),
                               spec["points"], k)


def build_layout(spec, k):
    gamma = _arc(spec["gamma"], "gamma", k)
    sigma = _arc(spec["sigma"], "sigma", k)
    z0 = spec.get("z0")
    return make_layout(gamma, sigma, k, None if z0 is None else _pair(z0, "layout.z0"))


def build_config(raw, source="<memory>", kind=None):
    """Validate a raw mapping and build scatterer and layout.

    Raises
    ------
    ConfigurationError
        Naming the offending field; layout violations name the violated
        hypothesis.
    """
    raw = _expect_mapping(raw, "config")
    unknown = set(raw) - {"kind", "wavenumber", "seed", "scatterer", "layout", "solver"}
    if unknown:
        raise ConfigurationError(f"unknown top-level keys {sorted(unknown)}", field=sorted(unknown)[0])
    kind = kind or raw.get("kind", "forward")
    if kind not in KINDS:
        raise ConfigurationError(f"kind must be one of {KINDS}, got {kind!r}", field="kind")
    if "wavenumber" not in raw:
        raise ConfigurationError("wavenumber is required", field="wavenumber")
    k = _number(raw["wavenumber"], "wavenumber", positive=True)
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2 ** 64:
        raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {seed!r}", field="seed")
    sspec = _scatterer_spec(raw.get("scatterer"))
    layout_raw = _expect_mapping(raw.get("layout"), "layout")
    default = DEFAULT_SURFACE_LAYOUT if sspec["type"] == "surface" else DEFAULT_LAYOUT
    lspec = {**copy.deepcopy(default), **copy.deepcopy(layout_raw)}
    solver = {**DEFAULT_SOLVER, **_expect_mapping(raw.get("solver"), "solver")}
    solver["margin"] = _number(solver["margin"], "solver.margin", positive=True)
    if solver["n_max"] is not None:
        if not isinstance(solver["n_max"], int) or solver["n_max"] < 1:
            raise ConfigurationError("solver.n_max must be a positive integer", field="solver.n_max")
    scatterer = build_scatterer(sspec)
    layout = build_layout(lspec, k)
    report = validate_layout(layout, scatterer)
    if not report.ok:
        raise ConfigurationError(f"layout validation failed: {report}", field="layout")
    lspec["z0"] = list(layout.z0)
    return ExperimentConfig(kind, k, _plain(sspec), _plain(lspec), _plain(solver), seed, source,
                            scatterer, layout)


def load_config(path, kind=None):
    """Parse a YAML configuration file; syntax errors report the line."""
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigurationError(f"{path}: YAML parse error{where}: {exc.problem}", field="yaml") from None
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror}", field="path") from None
    return build_config(raw, str(path), kind)
