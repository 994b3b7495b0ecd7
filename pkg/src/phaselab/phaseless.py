"""Phaseless measurement triples and the phase information they still carry.

For receivers ``x`` and sources ``z`` the data are

    r = |v(x, z0)|,   s = |v(x, z)|,   t = |v(x, z0) + v(x, z)|,

from which ``Re(v(x, z0) conj v(x, z)) = (t^2 - r^2 - s^2) / 2``. Dividing by
``r s`` gives the cosine of the phase difference ``delta = arg v(x, z0) -
arg v(x, z)``; its sign is chosen by continuity in ``z``.
"""

import csv
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (BranchAmbiguityError, ConfigurationError, DataInconsistencyError,
                     DegenerateDataError)

TAU_REL = 1e-8
CLIP_TOL = 1e-9
TRIANGLE_SLACK = 1e-12
# chosen increments beyond this are treated as undecidable
AMBIGUITY_LIMIT = 0.9 * np.pi
SPREAD_TOL = 1e-6
# smoothness order used by the continuity resolver
DIFF_ORDER = 4


@dataclass(frozen=True, eq=False)
class PhaselessTriple:
    """Moduli ``r`` (per receiver) and ``s``, ``t`` (receiver x source)."""

    r: np.ndarray
    s: np.ndarray
    t: np.ndarray
    layout: object = None

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float).ravel()
        s = np.atleast_2d(np.asarray(self.s, dtype=float))
        t = np.atleast_2d(np.asarray(self.t, dtype=float))
        if s.shape != t.shape or s.shape[0] != r.size:
            raise ConfigurationError(f"triple shapes disagree: r {r.shape}, s {s.shape}, t {t.shape}")
        if min(r.min(), s.min(), t.min()) < 0 or not all(np.isfinite(a).all() for a in (r, s, t)):
            raise DataInconsistencyError("phaseless data must be finite and nonnegative")
        slack = TRIANGLE_SLACK * max(1.0, float(np.max(r[:, None] + s)))
        if np.any(t > r[:, None] + s + slack) or np.any(t < np.abs(r[:, None] - s) - slack):
            raise DataInconsistencyError("triple violates |r - s| <= t <= r + s")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    @property
    def shape(self):
        return self.s.shape

    def to_csv(self, path):
        write_triple_csv(path, self)

    @classmethod
    def from_csv(cls, path, layout=None):
        return read_triple_csv(path, layout)


def triple_from_fields(v0, v, layout=None):
    """Triple from complex fields ``v0 = v(., z0)`` and ``v = v(., z)``."""
    v0 = np.asarray(v0, dtype=complex).ravel()
    v = np.atleast_2d(np.asarray(v, dtype=complex))
    return PhaselessTriple(np.abs(v0), np.abs(v), np.abs(v0[:, None] + v), layout)


def conjugate_injected_triple(v0, v, layout=None):
    """Adversarial triple built from ``conj(v)`` in the ``s``/``t`` sets while ``r`` is kept."""
    return triple_from_fields(v0, np.conj(v), layout)


def synthesize_triple(scatterer, layout, **solver_options):
    """Forward-solve all sources and return the measured moduli.

    ``solver_options`` go to :func:`phaselab.solver.field_matrix`
    (``margin``, ``truncation``).
    """
    from .solver import field_matrix

    fm = field_matrix(scatterer, layout, "total", **solver_options)
    return triple_from_fields(fm.z0_column, fm.arc_columns, layout), fm


@dataclass(frozen=True, eq=False)
class CrossTerm:
    values: np.ndarray


def cross_term(triple):
    """``Re(v(x, z0) conj v(x, z))`` recovered from the moduli."""
    # grouping r^2 + s^2 keeps t = 2r, s = r exact
    return CrossTerm(0.5 * (triple.t ** 2 - (triple.r[:, None] ** 2 + triple.s ** 2)))


@dataclass(frozen=True, eq=False)
class NonvanishingSet:
    """Entries where both ``r`` and ``s`` clear their thresholds.

    ``block`` is ``(row0, row1, col0, col1)`` (half-open) of the largest
    all-true rectangle in the mask.
    """

    mask: np.ndarray
    tau_rel: float
    threshold_r: float
    threshold_s: float
    block: tuple

    @property
    def coverage(self):
        return float(self.mask.mean())


def _largest_rectangle(mask):
    best, best_box = 0, (0, 0, 0, 0)
    heights = np.zeros(mask.shape[1], dtype=int)
    for i, row in enumerate(mask):
        heights = np.where(row, heights + 1, 0)
        stack = []
        for j in range(len(heights) + 1):
            h = heights[j] if j < len(heights) else 0
            start = j
            while stack and stack[-1][1] >= h:
                start, hh = stack.pop()
                area = hh * (j - start)
                if area > best:
                    best, best_box = area, (i - hh + 1, i + 1, start, j)
            stack.append((start, h))
    return best_box


def nonvanishing_mask(triple, tau_rel=TAU_REL):
    """Mask ``r > tau max r`` and ``s > tau max s``.

    Raises
    ------
    DegenerateDataError
        If no entry survives.
    """
    if not 0 < tau_rel < 1:
        raise ConfigurationError("tau_rel must lie in (0, 1)", field="tau_rel")
    tr = tau_rel * float(np.max(triple.r))
    ts = tau_rel * float(np.max(triple.s))
    mask = (triple.r[:, None] > tr) & (triple.s > ts)
    if not mask.any():
        raise DegenerateDataError("phaseless data vanish on the whole grid; no nonvanishing subset")
    return NonvanishingSet(mask, tau_rel, tr, ts, _largest_rectangle(mask))


@dataclass(frozen=True, eq=False)
class BranchField:
    """``cos(delta)`` on the mask (NaN elsewhere) and the two candidate phase differences."""

    cos_delta: np.ndarray
    mask: np.ndarray
    plus: np.ndarray
    minus: np.ndarray
    overshoot: float
    tau_rel: float


def branch_candidates(triple, tau_rel=TAU_REL):
    """Candidate phase differences ``+-arccos(cross / (r s))`` on the nonvanishing mask.

    Raises
    ------
    DataInconsistencyError
        If ``|cross / (r s)|`` exceeds 1 by more than 1e-9.
    """
    nv = nonvanishing_mask(triple, tau_rel)
    mask = nv.mask
    cross = cross_term(triple).values
    rs = triple.r[:, None] * triple.s
    c = np.full(mask.shape, np.nan)
    c[mask] = cross[mask] / rs[mask]
    overshoot = float(np.max(np.abs(c[mask])) - 1) if mask.any() else 0.0
    if overshoot > CLIP_TOL:
        raise DataInconsistencyError(f"|cos delta| exceeds 1 by {overshoot:.3e}; the triple is inconsistent")
    c[mask] = np.clip(c[mask], -1.0, 1.0)
    a = np.arccos(c)
    return BranchField(c, mask, a, -a, max(overshoot, 0.0), tau_rel)


def _wrap(x):
    return np.angle(np.exp(1j * x))


def _resolve_segment(a, order=DIFF_ORDER):
    """Signs for one contiguous run of magnitudes ``a``, seeded + at the first entry.

    Picks the sign sequence whose phase (built from wrapped increments) has
    the smallest sum of squared ``order``-th differences, by Viterbi over the
    last ``order`` signs. Curvature alone (order 2) misreads near-tangencies
    of the phase difference to 0 or pi; fourth differences separate them.
    """
    n = a.size
    if n == 1:
        return np.array([1.0])
    signs = np.array([1.0, -1.0])
    if n == 2:
        d = np.abs(_wrap(signs * a[1] - a[0]))
        return np.array([1.0, signs[np.argmin(d)]])
    m = min(order, n - 1)
    # m-th difference of the phase = (m-1)-th difference of its increments
    weights = np.array([(-1) ** (m - 1 - i) * math.comb(m - 1, i) for i in range(m)], dtype=float)
    states = list(itertools.product((0, 1), repeat=m))
    cost = {st: (0.0 if st[0] == 0 else np.inf) for st in states}
    back = []
    for j in range(m, n):
        new, arg = {}, {}
        for st in states:
            if not np.isfinite(cost[st]):
                continue
            for c in (0, 1):
                seq = st + (c,)
                inc = _wrap(np.diff(signs[list(seq)] * a[j - m:j + 1]))
                val = cost[st] + float(weights @ inc) ** 2
                if val < new.get(seq[1:], np.inf):
                    new[seq[1:]], arg[seq[1:]] = val, st
        cost = new
        back.append(arg)
    st = min(cost, key=cost.get)
    seq = list(st)
    for arg in reversed(back):
        st = arg[st]
        seq.insert(0, st[0])
    return signs[np.array(seq)]


def _circular_spread(phases):
    if phases.size == 0:
        return 0.0, 0.0
    mean = np.angle(np.sum(np.exp(1j * phases)))
    return float(np.max(np.abs(_wrap(phases - mean)))), float(mean)


@dataclass(eq=False)
class RecoveredField:
    """Recovered fields ``s e^{-i delta}`` in the gauge ``arg v(x, z0) = 0``.

    Attributes
    ----------
    values : ndarray
        Complex, NaN off the mask.
    delta : ndarray
        Resolved phase differences in (-pi, pi].
    orientation : list of str
        Per row: ``"seeded"`` without a reference, else ``"aligned"`` or
        ``"flipped"`` after the reference vote.
    gamma_report : dict
        ``spread``: per-row max deviation of ``arg(rec conj ref)`` from its
        circular mean; ``offset``: per-row residual phase ``gamma(x)`` after
        restoring the reference gauge of ``v(x, z0)``. Empty without a
        reference.
    indeterminate : bool
        True when some row has a single masked column, so continuity carries
        no sign information.
    branch_conflict : bool or None
        True when the reference cannot be matched by a row factor with zero
        residual phase; None without a reference.
    """

    values: np.ndarray
    delta: np.ndarray
    mask: np.ndarray
    orientation: list
    gamma_report: dict = field(default_factory=dict)
    indeterminate: bool = False
    branch_conflict: object = None


def resolve_branch(branch, triple, reference=None, tol=SPREAD_TOL):
    """Choose the sign of ``delta`` by phase continuity along each receiver row.

    Parameters
    ----------
    branch : BranchField
    triple : PhaselessTriple
    reference : tuple, optional
        ``(v0, v)`` ground-truth or model fields. Each row is then oriented
        by the vote that makes ``arg(recovered conj v)`` constant, and the
        residual ``gamma(x)`` is reported.
    tol : float
        Spread/offset tolerance (rad) for the conflict flag.

    Raises
    ------
    BranchAmbiguityError
        If a chosen phase increment between adjacent sources exceeds 0.9 pi.
    """
    mask = branch.mask
    a = branch.plus
    n_rows = mask.shape[0]
    delta = np.full(mask.shape, np.nan)
    bad_cols = set()
    indeterminate = False
    for i in range(n_rows):
        cols = np.flatnonzero(mask[i])
        if cols.size == 0:
            continue
        runs = np.split(cols, np.flatnonzero(np.diff(cols) > 1) + 1)
        for run in runs:
            if run.size == 1:
                indeterminate = True
            sg = _resolve_segment(a[i, run])
            delta[i, run] = sg * a[i, run]
            inc = np.abs(_wrap(np.diff(delta[i, run])))
            bad_cols.update(int(run[j + 1]) for j in np.flatnonzero(inc > AMBIGUITY_LIMIT))
    if bad_cols:
        raise BranchAmbiguityError(
            f"phase increments near pi between adjacent sources at columns {sorted(bad_cols)}; "
            "refine the source grid", columns=sorted(bad_cols))
    values = np.where(mask, triple.s * np.exp(-1j * np.nan_to_num(delta)), np.nan)
    orientation = ["seeded"] * n_rows
    out = RecoveredField(values, delta, mask, orientation, {}, indeterminate, None)
    if reference is not None:
        _vote(out, triple, reference, tol)
    return out


def _vote(rec, triple, reference, tol):
    v0_ref = np.asarray(reference[0], dtype=complex).ravel()
    v_ref = np.atleast_2d(np.asarray(reference[1], dtype=complex))
    if v_ref.shape != rec.values.shape or v0_ref.size != v_ref.shape[0]:
        raise ConfigurationError("reference fields do not match the triple layout")
    spread = np.zeros(v_ref.shape[0])
    offset = np.zeros(v_ref.shape[0])
    for i in range(v_ref.shape[0]):
        cols = np.flatnonzero(rec.mask[i])
        if cols.size == 0:
            continue
        options = []
        for sign, name in ((1.0, "aligned"), (-1.0, "flipped")):
            d = sign * rec.delta[i, cols]
            vals = triple.s[i, cols] * np.exp(-1j * d)
            sp, _ = _circular_spread(np.angle(vals * np.conj(v_ref[i, cols])))
            # restore the gauge arg v(x, z0) of the reference and measure what is left
            restored = vals * np.exp(1j * np.angle(v0_ref[i]))
            _, off = _circular_spread(np.angle(restored * np.conj(v_ref[i, cols])))
            options.append((max(sp, abs(off)), sp, off, name, d, vals))
        # a row with constant delta has zero spread either way; the offset decides
        _, spread[i], offset[i], name, d, vals = min(options, key=lambda o: o[0])
        rec.delta[i, cols] = d
        rec.values[i, cols] = vals
        rec.orientation[i] = name
    rec.gamma_report = {"spread": spread, "offset": offset,
                        "max_spread": float(spread.max()), "max_offset": float(np.abs(offset).max())}
    rec.branch_conflict = bool(spread.max() > tol or np.abs(offset).max() > tol)


def discrepancy_breakdown(a, b):
    """RMS differences of ``r``, ``s``, ``t`` over the concatenated triple, normalised by RMS of ``a``.

    The three contributions add in quadrature to the total.
    """
    if a.shape != b.shape:
        raise ConfigurationError(f"triples have different layouts: {a.shape} vs {b.shape}", field="layout")
    if a.layout is not None and b.layout is not None and not _same_layout(a.layout, b.layout):
        raise ConfigurationError("triples were measured on different layouts", field="layout")
    ra = np.broadcast_to(a.r[:, None], a.shape)
    rb = np.broadcast_to(b.r[:, None], b.shape)
    count = 3 * a.s.size
    norm = np.sqrt((np.sum(ra ** 2) + np.sum(a.s ** 2) + np.sum(a.t ** 2)) / count)
    if norm == 0:
        raise DegenerateDataError("reference triple is identically zero")
    parts = {name: float(np.sqrt(np.sum((x - y) ** 2) / count) / norm)
             for name, x, y in (("r", ra, rb), ("s", a.s, b.s), ("t", a.t, b.t))}
    parts["total"] = float(np.sqrt(sum(v ** 2 for v in parts.values())))
    return parts


def discrepancy(a, b):
    """Relative RMS distance between two triples on the same layout."""
    return discrepancy_breakdown(a, b)["total"]


def _same_layout(la, lb):
    return (np.allclose(la.z0, lb.z0, rtol=0, atol=1e-12)
            and np.allclose(la.sources, lb.sources, rtol=0, atol=1e-12)
            and np.allclose(la.receivers, lb.receivers, rtol=0, atol=1e-12)
            and la.k == lb.k)


def write_triple_csv(path, triple):
    """Rows ``receiver_ix, source_ix, r, s, t``; ``source_ix`` starts at 1 (0 is ``z0``)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["receiver_ix", "source_ix", "r", "s", "t"])
        for i in range(triple.shape[0]):
            for j in range(triple.shape[1]):
                w.writerow([i, j + 1, f"{triple.r[i]:.17g}", f"{triple.s[i, j]:.17g}",
                            f"{triple.t[i, j]:.17g}"])


def read_triple_csv(path, layout=None):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh, skipinitialspace=True))
    if not rows:
        raise ConfigurationError(f"{path}: no triple rows")
    ri = np.array([int(r["receiver_ix"]) for r in rows])
    si = np.array([int(r["source_ix"]) for r in rows]) - 1
    if si.min() < 0:
        raise ConfigurationError(f"{path}: source_ix must start at 1")
    shape = (ri.max() + 1, si.max() + 1)
    s = np.full(shape, np.nan)
    t = np.full(shape, np.nan)
    r = np.full(shape[0], np.nan)
    s[ri, si] = [float(x["s"]) for x in rows]
    t[ri, si] = [float(x["t"]) for x in rows]
    r[ri] = [float(x["r"]) for x in rows]
    if np.isnan(s).any() or np.isnan(r).any():
        raise ConfigurationError(f"{path}: triple has missing entries")
    return PhaselessTriple(r, s, t, layout)
