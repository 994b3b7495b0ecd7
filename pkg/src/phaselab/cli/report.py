"""Check rows, run reports, atomic file output and regression baselines."""

import csv
import hashlib
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources

import yaml

BASELINE_ENV = "PHASELAB_BASELINES"
# measured discrepancies must clear this floor even without a baseline
BASELINE_FLOOR = 1e-3
BASELINE_RTOL = 1e-6


@dataclass
class CheckRow:
    """One verification outcome.

    ``comparison`` is ``"<="`` (measured must not exceed ``tolerance``) or
    ``">="`` (measured must reach it). ``status`` is pass, fail or error.
    """

    name: str
    status: str
    measured: float = None
    tolerance: float = None
    comparison: str = "<="
    detail: str = ""

    @classmethod
    def compare(cls, name, measured, tolerance, comparison="<=", detail=""):
        measured = float(measured)
        ok = measured <= tolerance if comparison == "<=" else measured >= tolerance
        return cls(name, "pass" if ok else "fail", measured, float(tolerance), comparison, detail)

    @classmethod
    def boolean(cls, name, ok, detail=""):
        return cls(name, "pass" if ok else "fail", float(bool(ok)), 1.0, ">=", detail)

    @classmethod
    def errored(cls, name, exc):
        return cls(name, "error", None, None, "", f"{type(exc).__name__}: {exc}")

    def as_dict(self):
        return {"name": self.name, "status": self.status, "measured": self.measured,
                "tolerance": self.tolerance, "comparison": self.comparison, "detail": self.detail}


@dataclass
class RunReport:
    run_id: str
    command: str
    config: dict
    checks: list = field(default_factory=list)
    artifacts: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    out_dir: str = ""

    @property
    def ok(self):
        return all(c.status == "pass" for c in self.checks)

    def as_dict(self):
        return {"run_id": self.run_id, "command": self.command,
                "status": "pass" if self.ok else "fail",
                "config": self.config,
                "checks": [c.as_dict() for c in self.checks],
                "artifacts": self.artifacts,
                "timings": self.timings}


def run_id(command, configs, seed):
    """Deterministic id from the command, the config echoes and the seed."""
    blob = json.dumps({"command": command, "configs": configs, "seed": seed}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def atomic_write(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_writer(path, writer):
    """Run ``writer(tmp_path)`` and rename the result into place."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    os.close(fd)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def checks_csv(checks):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "status", "measured", "tolerance", "comparison", "detail"])
    for c in checks:
        w.writerow([c.name, c.status, "" if c.measured is None else f"{c.measured:.17g}",
                    "" if c.tolerance is None else f"{c.tolerance:.17g}", c.comparison, c.detail])
    return buf.getvalue()


def read_checks_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        out.append(CheckRow(r["name"], r["status"],
                            float(r["measured"]) if r["measured"] else None,
                            float(r["tolerance"]) if r["tolerance"] else None,
                            r["comparison"], r["detail"]))
    return out


def write_report(report, out_dir):
    """Write ``report.yaml`` and ``checks.csv`` into ``out_dir``; returns the report path."""
    atomic_write(os.path.join(out_dir, "checks.csv"), checks_csv(report.checks))
    path = os.path.join(out_dir, "report.yaml")
    atomic_write(path, yaml.safe_dump(report.as_dict(), sort_keys=False))
    return path


def baseline_path():
    env = os.environ.get(BASELINE_ENV)
    if env:
        return env
    return str(resources.files("phaselab") / "data" / "baselines.yaml")


def load_baselines(path=None):
    path = path or baseline_path()
    if not os.path.exists(path):
        return {}
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    return data.get("baselines", {})


def save_baselines(entries, path=None):
    """Merge ``{key: {"value": ..., "context": ...}}`` into the baseline file."""
    path = path or baseline_path()
    data = load_baselines(path)
    data.update(entries)
    text = ("# Regression baselines: first verified measured values of checks whose\n"
            "# thresholds have no closed form. Regenerate with --record-baseline.\n"
            + yaml.safe_dump({"baselines": dict(sorted(data.items()))}, sort_keys=False))
    atomic_write(path, text)


def baseline_key(check, *labels, k=None):
    parts = [check] + list(labels)
    if k is not None:
        parts.append(f"k={float(k):g}")
    return " | ".join(parts)


def baseline_check(name, measured, key, baselines, recorded, detail=""):
    """Row requiring ``measured >= max(floor, (1 - rtol) * baseline)``.

    ``recorded`` collects the measured value under ``key`` when baselines
    are being recorded.
    """
    if recorded is not None:
        recorded[key] = {"value": float(measured), "context": name}
        base = float(measured)
    else:
        base = baselines.get(key, {}).get("value")
    if base is None:
        tol = BASELINE_FLOOR
        detail = (detail + "; " if detail else "") + "no recorded baseline, floor only"
    else:
        tol = max(BASELINE_FLOOR, (1 - BASELINE_RTOL) * base)
    return CheckRow.compare(name, measured, tol, ">=", detail or key)
