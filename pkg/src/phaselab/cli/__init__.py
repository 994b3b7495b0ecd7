"""Command-line runner.

Usage::

    phaselab run <config>            # pipeline named by the config's ``kind``
    phaselab verify <config> [--only NAME ...]
    phaselab measure <config>
    phaselab discriminate <configA> <configB>

Common flags: ``--out DIR`` (default ``$PHASELAB_OUT`` or ``./phaselab-out``),
``--seed N`` (overrides the config), ``--record-baseline``. Each run writes
``report.yaml``, ``checks.csv`` and its data files into ``<out>/<run id>/``.
Exit status: 0 when every check passes, 1 when a check fails or errors,
2 for configuration or validation errors, 3 for solver failures.
"""

import argparse
import os
import sys
import time

from ..errors import ConfigurationError, PhaselabError
from .config import ExperimentConfig, build_config, load_config
from .report import (RunReport, load_baselines, run_id, save_baselines, write_report)
from .suite import discriminate, forward, measure, retrieve, verify_suite

OUT_ENV = "PHASELAB_OUT"
DEFAULT_OUT = "phaselab-out"

__all__ = ["main", "run", "run_config", "run_discriminate", "build_config", "load_config",
           "ExperimentConfig"]


def _out_root(out):
    return out or os.environ.get(OUT_ENV) or DEFAULT_OUT


def run_config(cfg, out=None, record_baseline=False, only=None, command=None):
    """Execute the pipeline for ``cfg`` and write its report; returns the :class:`RunReport`."""
    command = command or cfg.kind
    rid = run_id(command, [cfg.echo()], cfg.seed)
    out_dir = os.path.join(_out_root(out), rid)
    os.makedirs(out_dir, exist_ok=True)
    report = RunReport(rid, command, cfg.echo())
    recorded = {} if record_baseline else None
    t0 = time.perf_counter()
    if cfg.kind == "verify":
        rows, timings = verify_suite(cfg, load_baselines(), recorded, only)
        report.timings.update(timings)
        arts = []
    elif cfg.kind == "forward":
        rows, arts = forward(cfg, out_dir)
    elif cfg.kind == "measure":
        rows, arts = measure(cfg, out_dir)
    elif cfg.kind == "retrieve":
        rows, arts = retrieve(cfg, out_dir)
    else:
        raise ConfigurationError("kind 'discriminate' needs two configs; use the discriminate command",
                                 field="kind")
    report.checks, report.artifacts = rows, arts
    report.timings["total"] = round(time.perf_counter() - t0, 3)
    if recorded:
        save_baselines(recorded)
    report.out_dir = out_dir
    write_report(report, out_dir)
    return report


def run_discriminate(cfg_a, cfg_b, out=None, record_baseline=False):
    rid = run_id("discriminate", [cfg_a.echo(), cfg_b.echo()], cfg_a.seed)
    out_dir = os.path.join(_out_root(out), rid)
    os.makedirs(out_dir, exist_ok=True)
    report = RunReport(rid, "discriminate", {"a": cfg_a.echo(), "b": cfg_b.echo()})
    recorded = {} if record_baseline else None
    t0 = time.perf_counter()
    rows, arts, parts = discriminate(cfg_a, cfg_b, out_dir, load_baselines(), recorded)
    report.checks, report.artifacts = rows, arts
    report.config["breakdown"] = {k: float(v) for k, v in parts.items()}
    report.timings["total"] = round(time.perf_counter() - t0, 3)
    if recorded:
        save_baselines(recorded)
    report.out_dir = out_dir
    write_report(report, out_dir)
    return report


def _parser():
    p = argparse.ArgumentParser(prog="phaselab", description="Phaseless scattering experiments and checks.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help=f"output root (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--record-baseline", action="store_true",
                        help="store measured baseline-type values as the new regression baselines")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "run the pipeline named by the config"),
                        ("measure", "synthesize the phaseless triple"),
                        ("verify", "run the identity suite")):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("config")
        if name == "verify":
            sp.add_argument("--only", nargs="+", metavar="NAME",
                            help="run only checks whose name contains NAME")
    sp = sub.add_parser("discriminate", parents=[common], help="compare the triples of two configs")
    sp.add_argument("config_a")
    sp.add_argument("config_b")
    return p


def _load(path, kind, seed):
    cfg = load_config(path, kind)
    if seed is not None:
        if seed < 0 or seed >= 2 ** 64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer", field="seed")
        cfg.seed = seed
    return cfg


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command == "discriminate":
            a = _load(args.config_a, "discriminate", args.seed)
            b = _load(args.config_b, "discriminate", args.seed)
            report = run_discriminate(a, b, args.out, args.record_baseline)
        else:
            kind = None if args.command == "run" else args.command
            cfg = _load(args.config, kind, args.seed)
            report = run_config(cfg, args.out, args.record_baseline, getattr(args, "only", None), args.command)
    except ConfigurationError as exc:
        field = f" (field: {exc.field})" if exc.field else ""
        print(f"phaselab: configuration error{field}: {exc}", file=sys.stderr)
        return 2
    except PhaselabError as exc:
        print(f"phaselab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    for c in report.checks:
        measured = "" if c.measured is None else f"{c.measured:.3e}"
        tol = "" if c.tolerance is None else f"{c.comparison} {c.tolerance:.3e}"
        print(f"{c.status.upper():5s} {c.name:28s} {measured:>11s} {tol}")
    print(f"report: {os.path.join(report.out_dir, 'report.yaml')}")
    return 0 if report.ok else 1


def run(config_path, out=None, **kw):
    """Programmatic ``phaselab run``; returns the report."""
    return run_config(load_config(config_path), out, **kw)
