"""Pipelines behind the CLI commands and the verification suite.

Every function takes a validated :class:`ExperimentConfig` and returns check
rows plus the artifacts it wrote; nothing here parses arguments.
"""

import os
import time

import numpy as np

from ..errors import PhaselabError
from ..geometry import BoundaryCurve, SurfaceProfile, make_curve, make_profile
from ..oracles import DiskSpec, disk_series_far, disk_series_field, flat_halfplane_exact
from ..phaseless import (branch_candidates, conjugate_injected_triple, cross_term, discrepancy_breakdown,
                         nonvanishing_mask, resolve_branch, triple_from_fields, write_triple_csv)
from ..solver import IncidentField, far_field_constant, field_matrix, solve, unit_directions, write_field_csv
from ..solver.rough import RoughSurfaceSolver
from .report import CheckRow, atomic_write, atomic_writer, baseline_check, baseline_key

RESIDUAL_TOL = 1e-8
ORACLE_TOL = 1e-8
RECIPROCITY_OBSTACLE_TOL = 1e-7
RECIPROCITY_SURFACE_TOL = 1e-6
MIXED_RECIPROCITY_TOL = 1e-6
TRANSLATION_TOL = 1e-7
CROSS_TERM_TOL = 1e-12
BRANCH_TOL = 1e-6
FLAT_TOL = 1e-10
IDENTICAL_TOL = 1e-12
COVERAGE_MIN = 0.9
SHIFT = np.array([0.5, 0.0])
FAR_RADIUS = 200.0


def _rel(a, b):
    scale = np.max(np.abs(b))
    return float(np.max(np.abs(a - b)) / scale) if scale > 0 else float(np.max(np.abs(a - b)))


def _is_bounded(scatterer):
    return isinstance(scatterer, (BoundaryCurve, DiskSpec))


def _shifted(scatterer, shift=SHIFT):
    if isinstance(scatterer, BoundaryCurve):
        return scatterer.with_center(np.asarray(scatterer.center) + shift)
    return DiskSpec(scatterer.radius, tuple(np.asarray(scatterer.center) + shift), scatterer.bc,
                    scatterer.impedance, scatterer.index)


def _fields(cfg, scatterer=None, layout=None):
    return field_matrix(cfg.scatterer if scatterer is None else scatterer,
                        cfg.layout if layout is None else layout, "total", **cfg.solve_options)


def _triple(cfg, scatterer=None):
    fm = _fields(cfg, scatterer)
    return triple_from_fields(fm.z0_column, fm.arc_columns, cfg.layout), fm


# individual checks -------------------------------------------------------

def check_oracle_far_field(cfg, rng):
    """CFIE far field of a soft disk against its series solution."""
    sc = cfg.scatterer
    if isinstance(sc, BoundaryCurve) and sc.kind == "circle":
        radius, center = sc.radii[0], sc.center
    elif isinstance(sc, DiskSpec):
        radius, center = sc.radius, sc.center
    else:
        radius, center = 1.0, (0.0, 0.0)
    curve = make_curve("circle", {"radius": radius, "center": list(center)}, 64)
    inc = IncidentField.plane(cfg.k, (1.0, 0.0))
    d = unit_directions(64)
    cfie = solve(curve, cfg.k, inc).far_field(d)
    series = disk_series_far(DiskSpec(radius, center), cfg.k, inc, d).values
    return CheckRow.compare("oracle_far_field", _rel(cfie, series), ORACLE_TOL,
                            detail=f"soft disk r={radius}, N=64, 64 directions")


def check_boundary_residual(cfg, rng):
    sc = cfg.scatterer
    inc = IncidentField.point(cfg.k, cfg.layout.z0)
    if isinstance(sc, BoundaryCurve):
        res = solve(sc, cfg.k, inc).boundary_residual()
        detail = f"{sc.kind}, N={sc.N}, 2N checkpoints"
    elif isinstance(sc, SurfaceProfile):
        res = solve(sc, cfg.k, inc, margin=cfg.margin).boundary_residual()
        detail = f"rough surface h={sc.h}, M={cfg.margin} wavelengths"
    else:
        res, detail = _disk_boundary_residual(sc, cfg, inc)
    return CheckRow.compare("boundary_residual", res, RESIDUAL_TOL, detail=detail)


def _disk_boundary_residual(spec, cfg, inc):
    th = 2 * np.pi * np.arange(128) / 128
    unit = np.stack((np.cos(th), np.sin(th)), axis=-1)
    c, a, k = np.asarray(spec.center), spec.radius, cfg.k
    ui = inc(c + a * unit)
    scale = np.max(np.abs(ui))
    total = lambda rho: inc(c + rho * unit) + disk_series_field(spec, k, inc, c + rho * unit, cfg.truncation)
    if spec.bc == "soft":
        return float(np.max(np.abs(total(a))) / scale), "soft disk, |u| on the boundary"
    if spec.bc == "impedance":
        # one-sided fourth-order difference for the outward normal derivative
        h = 1e-3 * a
        coef = np.array([-25, 48, -36, 16, -3]) / (12 * h)
        du = sum(w * total(a + j * h) for j, w in enumerate(coef))
        res = np.abs(du + 1j * k * spec.impedance * total(a))
        return float(np.max(res) / (k * scale)), "impedance disk, du/dn + ik lambda u by finite differences"
    inner = disk_series_field(spec, k, inc, c + a * (1 - 4e-12) * unit, cfg.truncation)
    return float(np.max(np.abs(inner - total(a))) / scale), "medium disk, interior vs exterior trace"


def check_reciprocity_obstacle(cfg, rng):
    fm = _fields(cfg)
    fmt = _fields(cfg, layout=cfg.layout.transposed())
    return CheckRow.compare("reciprocity_obstacle", _rel(fmt.arc_columns.T, fm.arc_columns),
                            RECIPROCITY_OBSTACLE_TOL, detail="v(x,z) vs v(z,x) over Sigma x Gamma")


def check_reciprocity_surface(cfg, rng):
    fm = _fields(cfg)
    fmt = _fields(cfg, layout=cfg.layout.transposed())
    return CheckRow.compare("reciprocity_surface", _rel(fmt.arc_columns.T, fm.arc_columns),
                            RECIPROCITY_SURFACE_TOL, detail="u(x,z) vs u(z,x) over Sigma x Gamma")


def check_mixed_reciprocity(cfg, rng):
    """Far field of point sources on Gamma against plane-wave near fields at Gamma."""
    k, sc = cfg.k, cfg.scatterer
    theta = np.sort(rng.uniform(0, 2 * np.pi, 16))
    xhat = np.stack((np.cos(theta), np.sin(theta)), axis=-1)
    zs = cfg.layout.sources
    lhs = np.empty((xhat.shape[0], zs.shape[0]), dtype=complex)
    rhs = np.empty_like(lhs)
    for j, z in enumerate(zs):
        inc = IncidentField.point(k, z)
        if isinstance(sc, DiskSpec):
            lhs[:, j] = disk_series_far(sc, k, inc, xhat, cfg.truncation).values
        else:
            lhs[:, j] = solve(sc, k, inc).far_field(xhat)
    for i, d in enumerate(-xhat):
        rhs[i] = far_field_constant(k) * solve(sc, k, IncidentField.plane(k, d), **cfg.solve_options).scattered(zs)
    return CheckRow.compare("mixed_reciprocity", _rel(lhs, rhs), MIXED_RECIPROCITY_TOL,
                            detail="v_inf(xhat,z) vs gamma_2 u_s(z,-xhat), 16 random directions")


def check_far_field_limit(cfg, rng):
    """Ratio of far-field mismatches at 2 rho and rho; 1/2 for an O(1/rho) remainder."""
    k = cfg.k
    sol = solve(cfg.scatterer, k, IncidentField.plane(k, (1.0, 0.0)), **cfg.solve_options)
    theta = np.sort(rng.uniform(0, 2 * np.pi, 16))
    xhat = np.stack((np.cos(theta), np.sin(theta)), axis=-1)
    ff = sol.far_field(xhat)
    dev = [_rel(sol.scattered(rho * xhat) * np.sqrt(rho) * np.exp(-1j * k * rho), ff)
           for rho in (FAR_RADIUS, 2 * FAR_RADIUS)]
    return CheckRow.compare("far_field_limit", dev[1] / dev[0], 0.55,
                            detail=f"deviation {dev[0]:.3e} at rho={FAR_RADIUS:g}, {dev[1]:.3e} at {2 * FAR_RADIUS:g}")


def check_translation_far_field(cfg, rng):
    k = cfg.k
    inc = IncidentField.plane(k, (np.cos(0.3), np.sin(0.3)))
    d = unit_directions(64)
    a = np.abs(solve(cfg.scatterer, k, inc, **cfg.solve_options).far_field(d))
    b = np.abs(solve(_shifted(cfg.scatterer), k, inc, **cfg.solve_options).far_field(d))
    return CheckRow.compare("translation_far_field", _rel(b, a), TRANSLATION_TOL,
                            detail=f"| |u_inf| - |u_inf shifted| |, shift {SHIFT.tolist()}")


def check_translation_near_phaseless(cfg, rng, baselines, recorded):
    ta, _ = _triple(cfg)
    tb, _ = _triple(cfg, _shifted(cfg.scatterer))
    val = discrepancy_breakdown(ta, tb)["total"]
    key = baseline_key("translation_near_phaseless", cfg.label(), f"shift={SHIFT.tolist()}", k=cfg.k)
    return baseline_check("translation_near_phaseless", val, key, baselines, recorded)


def check_cross_term(cfg, rng):
    triple, fm = _triple(cfg)
    direct = np.real(fm.z0_column[:, None] * np.conj(fm.arc_columns))
    return CheckRow.compare("cross_term", _rel(cross_term(triple).values, direct), CROSS_TERM_TOL,
                            detail="(t^2 - r^2 - s^2)/2 vs Re(v0 conj v)")


def branch_rows(triple, fm):
    rec = resolve_branch(branch_candidates(triple), triple, reference=(fm.z0_column, fm.arc_columns))
    note = "; single-column rows, sign indeterminate" if rec.indeterminate else ""
    rows = [CheckRow.compare("branch_recovery", rec.gamma_report["max_spread"], BRANCH_TOL,
                             detail=f"per-row spread of arg(recovered conj v); max |gamma| "
                                    f"{rec.gamma_report['max_offset']:.3e}{note}")]
    adv = conjugate_injected_triple(fm.z0_column, fm.arc_columns, triple.layout)
    flagged = resolve_branch(branch_candidates(adv), adv,
                             reference=(fm.z0_column, fm.arc_columns)).branch_conflict
    rows.append(CheckRow.boolean("branch_conflict_flagged", flagged,
                                 detail="conj(v) injected into s and t is rejected"))
    return rows, rec


def check_branch(cfg, rng):
    triple, fm = _triple(cfg)
    return branch_rows(triple, fm)[0]


def check_truncation_margin(cfg, rng):
    """Residual at 2M must not exceed the residual at M (M = 4 wavelengths)."""
    sc, k = cfg.scatterer, cfg.k
    inc = IncidentField.point(k, cfg.layout.z0)
    res = [RoughSurfaceSolver(sc, k, m).solve(inc).boundary_residual() for m in (4.0, 8.0)]
    ratio = res[1] / res[0] if res[0] > 0 else 0.0
    return CheckRow.compare("truncation_margin", ratio, 1.0,
                            detail=f"residual {res[0]:.3e} at M=4, {res[1]:.3e} at M=8")


def check_rough_flat_exact(cfg, rng):
    sc, k = cfg.scatterer, cfg.k
    flat = make_profile(sc.a, sc.b, 0.0)
    x = cfg.layout.receivers
    worst = 0.0
    for z in cfg.layout.all_sources():
        num = solve(flat, k, IncidentField.point(k, z), margin=cfg.margin).total(x)
        worst = max(worst, _rel(num, flat_halfplane_exact(k, z, x)))
    return CheckRow.compare("rough_flat_exact", worst, FLAT_TOL, detail="h=0 against the image-method field")


# suites ---------------------------------------------------------------------

def suite_plan(cfg):
    """Ordered ``(name, callable)`` list appropriate to the scatterer."""
    if _is_bounded(cfg.scatterer):
        plan = [("oracle_far_field", check_oracle_far_field),
                ("boundary_residual", check_boundary_residual),
                ("reciprocity_obstacle", check_reciprocity_obstacle),
                ("mixed_reciprocity", check_mixed_reciprocity),
                ("far_field_limit", check_far_field_limit),
                ("translation_far_field", check_translation_far_field),
                ("translation_near_phaseless", check_translation_near_phaseless)]
    else:
        plan = [("boundary_residual", check_boundary_residual),
                ("reciprocity_surface", check_reciprocity_surface),
                ("truncation_margin", check_truncation_margin),
                ("rough_flat_exact", check_rough_flat_exact)]
    plan += [("cross_term", check_cross_term), ("branch_recovery", None)]
    return plan


def verify_suite(cfg, baselines, recorded=None, only=None):
    """Run the identity checks; an infrastructure failure marks its row errored.

    Returns ``(rows, timings)``.
    """
    rng = np.random.default_rng(cfg.seed)
    rows, timings = [], {}
    for name, fn in suite_plan(cfg):
        names = [name] if name != "branch_recovery" else ["branch_recovery", "branch_conflict_flagged"]
        if only and not any(o in n for o in only for n in names):
            continue
        t0 = time.perf_counter()
        try:
            if name == "branch_recovery":
                triple, fm = _triple(cfg)
                rows.extend(branch_rows(triple, fm)[0])
            elif name == "translation_near_phaseless":
                rows.append(fn(cfg, rng, baselines, recorded))
            else:
                rows.append(fn(cfg, rng))
        except (PhaselabError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            rows.extend(CheckRow.errored(n, exc) for n in names)
        timings[name] = round(time.perf_counter() - t0, 3)
    return rows, timings


def _manifest(path, fmt, rows):
    return {"file": os.path.basename(path), "format": fmt, "rows": int(rows)}


def forward(cfg, out_dir):
    fm = _fields(cfg)
    path = os.path.join(out_dir, "fields.csv")
    atomic_writer(path, lambda p: write_field_csv(p, fm.values, fm.semantics))
    rows = [CheckRow.boolean("fields_finite", np.all(np.isfinite(fm.values)),
                             detail=f"{fm.shape[0]} receivers x {fm.shape[1]} sources")]
    if not isinstance(cfg.scatterer, DiskSpec) or cfg.scatterer.bc == "soft":
        rows.append(check_boundary_residual(cfg, None))
    return rows, [_manifest(path, "field", fm.values.size)]


def measure(cfg, out_dir):
    triple, fm = _triple(cfg)
    tpath = os.path.join(out_dir, "triple.csv")
    fpath = os.path.join(out_dir, "fields.csv")
    atomic_writer(tpath, lambda p: write_triple_csv(p, triple))
    atomic_writer(fpath, lambda p: write_field_csv(p, fm.values, fm.semantics))
    direct = np.real(fm.z0_column[:, None] * np.conj(fm.arc_columns))
    mask = nonvanishing_mask(triple)
    rows = [CheckRow.compare("cross_term", _rel(cross_term(triple).values, direct), CROSS_TERM_TOL),
            CheckRow.compare("nonvanishing_coverage", mask.coverage, COVERAGE_MIN, ">=",
                             detail=f"tau_rel={mask.tau_rel:g}, block {list(map(int, mask.block))}")]
    arts = [_manifest(tpath, "triple", triple.s.size), _manifest(fpath, "field", fm.values.size)]
    return rows, arts


def retrieve(cfg, out_dir):
    rows, arts = measure(cfg, out_dir)
    from ..phaseless import read_triple_csv

    triple = read_triple_csv(os.path.join(out_dir, "triple.csv"), cfg.layout)
    fm = _fields(cfg)
    brows, rec = branch_rows(triple, fm)
    modulus = float(np.nanmax(np.abs(np.abs(rec.values[rec.mask]) - triple.s[rec.mask])))
    rows += brows + [CheckRow.compare("modulus_match", modulus, 1e-13 * np.max(triple.s),
                                      detail="|recovered| = s on the mask")]
    path = os.path.join(out_dir, "recovered.csv")
    lines = ["receiver_ix,source_ix,re,im,delta,orientation"]
    for i, j in zip(*np.nonzero(rec.mask)):
        v = rec.values[i, j]
        lines.append(f"{i},{j + 1},{v.real:.17g},{v.imag:.17g},{rec.delta[i, j]:.17g},{rec.orientation[i]}")
    atomic_write(path, "\n".join(lines) + "\n")
    arts.append(_manifest(path, "recovered", len(lines) - 1))
    return rows, arts


def discriminate(cfg_a, cfg_b, out_dir, baselines, recorded=None):
    from ..errors import ConfigurationError

    if cfg_a.layout_spec != cfg_b.layout_spec or cfg_a.k != cfg_b.k:
        raise ConfigurationError("discriminate needs identical layouts and wavenumbers", field="layout")
    ta, _ = _triple(cfg_a)
    tb, _ = _triple(cfg_b)
    parts = discrepancy_breakdown(ta, tb)
    paths = [os.path.join(out_dir, f"triple_{s}.csv") for s in ("a", "b")]
    for p, t in zip(paths, (ta, tb)):
        atomic_writer(p, lambda q, t=t: write_triple_csv(q, t))
    detail = ", ".join(f"{n}={parts[n]:.6e}" for n in ("r", "s", "t"))
    if cfg_a.scatterer_spec == cfg_b.scatterer_spec:
        row = CheckRow.compare("discrepancy_identical", parts["total"], IDENTICAL_TOL, detail=detail)
    else:
        key = baseline_key("discrepancy", *sorted((cfg_a.label(), cfg_b.label())), k=cfg_a.k)
        row = baseline_check("discrepancy", parts["total"], key, baselines, recorded, detail)
    arts = [_manifest(p, "triple", ta.s.size) for p in paths]
    return [row], arts, parts
