"""Command-line driver.

    oscinv run CONFIG.yaml
    oscinv phase-ops --dim N --theta0 X [--csv FILE]
    oscinv squeeze --A-re X --A-im Y --B Z --dim N

``run`` exits 0 when every report record passes, 1 when a check fails or a
suite raises, and 2 when the configuration is rejected (nothing is written).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import phase_ops as po
from .config import load_config
from .errors import ConfigError, OscinvError
from .export import write_distribution_csv, write_json
from .suites import SUITES, build_context, phase_ops_report, squeeze_record

__all__ = ["main", "run"]


def _error_record(suite, exc):
    return {
        "suite": suite,
        "check": "contract",
        "value": None,
        "tolerance": None,
        "pass": False,
        "metadata": {"error": type(exc).__name__, "message": str(exc)},
    }


def _run_suite(name, ctx):
    try:
        return SUITES[name](ctx), None
    except (OscinvError, ArithmeticError, ValueError) as exc:
        return [_error_record(name, exc)], exc


def _summary(records):
    lines = []
    for r in records:
        flag = "PASS" if r["pass"] else "FAIL"
        tol = "-" if r["tolerance"] is None else f"{r['tolerance']:.3g}"
        val = "-" if r["value"] is None else f"{r['value']:.6g}"
        lines.append(f"{flag}  {r['suite']:<11} {r['check']:<40} value={val} tol={tol}")
    n_fail = sum(not r["pass"] for r in records)
    lines.append(f"{len(records) - n_fail}/{len(records)} checks passed")
    return "\n".join(lines) + "\n"


def run(config, workers=None):
    """Execute the configured suites; return (exit status, records)."""
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    names = [c for c in config.commands if c != "report"]
    ctx = build_context(config)
    # each suite writes its own files and shares only read-only state
    with ThreadPoolExecutor(max_workers=workers or max(1, len(names))) as pool:
        results = list(pool.map(lambda n: _run_suite(n, ctx), names))
    records = [rec for recs, _ in results for rec in recs]
    write_json(out / "report.json", records)
    if "report" in config.commands:
        (out / "summary.txt").write_text(_summary(records))
    failed = [r for r in records if not r["pass"]]
    if any(exc is not None for _, exc in results):
        for r in failed:
            if r["check"] == "contract":
                print(json.dumps(r, sort_keys=True), file=sys.stderr)
        return 1, records
    return (0 if not failed else 1), records


def _cmd_run(args):
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"oscinv: configuration error: {exc}", file=sys.stderr)
        return 2
    status, _ = run(config, args.workers)
    return status


def _cmd_phase_ops(args):
    rep = phase_ops_report(args.dim, args.theta0)
    if args.csv:
        _, basis = po.pegg_barnett(args.dim, args.theta0)
        state = np.zeros(args.dim, dtype=complex)
        state[:2] = 1.0 / np.sqrt(2.0)
        dist = po.phase_distribution(state, basis, po.pegg_barnett_angles(args.dim, args.theta0))
        write_distribution_csv(args.csv, dist)
    print(json.dumps(rep, indent=2, sort_keys=True))
    return 0


def _cmd_squeeze(args):
    rec = squeeze_record(complex(args.A_re, args.A_im), args.B, args.dim)
    print(json.dumps(rec, indent=2, sort_keys=True))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="oscinv", description="Invariant and phase-operator checks for quadratic oscillators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the suites listed in a YAML config")
    p.add_argument("config")
    p.add_argument("--workers", type=int, default=None, help="thread count (default: one per suite)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("phase-ops", help="phase-operator norms, spectra and residuals as JSON")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--theta0", type=float, default=0.0)
    p.add_argument("--csv", default=None, help="also write the phase distribution of (|0>+|1>)/sqrt2")
    p.set_defaults(func=_cmd_phase_ops)

    p = sub.add_parser("squeeze", help="squeeze reduction of a quadratic invariant as JSON")
    p.add_argument("--A-re", dest="A_re", type=float, required=True)
    p.add_argument("--A-im", dest="A_im", type=float, default=0.0)
    p.add_argument("--B", dest="B", type=float, required=True)
    p.add_argument("--dim", type=int, default=60)
    p.set_defaults(func=_cmd_squeeze)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OscinvError as exc:
        print(f"oscinv: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
