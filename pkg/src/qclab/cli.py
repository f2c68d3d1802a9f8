"""Command-line runner: ``qc-lab run <config.json>`` and ``qc-lab list``.

Config schema (JSON object)::

    {
      "scenario": "bootstrap",            # or "scenarios": [...] / {name: {...}}
      "params": {"q0": "5/2"},            # scenario parameters (single form)
      "tolerances": {"doubling": 1e-12},  # positive numbers
      "seed": 0,
      "out": "runs/bootstrap"             # overridden by --out
    }

With the mapping form each entry may carry its own ``params`` and
``tolerances``.  The environment variable ``QC_LAB_SEED`` overrides ``seed``.

Outputs in the output directory: ``report.json`` (numerics only, so reruns are
byte-identical), ``timing.json``, one CSV per table named
``<scenario>__<table>.csv`` and one SVG per series.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import DomainError, NumericalError
from .scenarios import SCENARIOS

logger = logging.getLogger("qclab")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def list_scenarios() -> list[tuple[str, str]]:
    return [(name, anchor) for name, (_, anchor) in SCENARIOS.items()]


def _check_tolerances(tol, where):
    if not isinstance(tol, dict):
        raise ConfigError(f"{where}: tolerances must be an object")
    for k, v in tol.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
            raise ConfigError(f"{where}: tolerance {k!r} must be a positive number")
    return dict(tol)


def parse_config(raw: dict) -> dict:
    """Normalize a config object into ``{"jobs": [(name, params, tol)], "seed", "out"}``."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("seed must be an integer")
    env = os.environ.get("QC_LAB_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise ConfigError("QC_LAB_SEED must be an integer") from None
    jobs = []
    if "scenario" in raw:
        params = raw.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("params must be an object")
        jobs.append((raw["scenario"], params, _check_tolerances(raw.get("tolerances", {}), raw["scenario"])))
    elif "scenarios" in raw:
        sc = raw["scenarios"]
        if isinstance(sc, list):
            jobs = [(name, {}, {}) for name in sc]
        elif isinstance(sc, dict):
            for name, spec in sc.items():
                spec = spec or {}
                if not isinstance(spec, dict) or not isinstance(spec.get("params", {}), dict):
                    raise ConfigError(f"{name}: entry must be an object with object params")
                jobs.append((name, spec.get("params", {}), _check_tolerances(spec.get("tolerances", {}), name)))
        else:
            raise ConfigError("scenarios must be a list or an object")
    else:
        raise ConfigError("config needs 'scenario' or 'scenarios'")
    if not jobs:
        raise ConfigError("no scenarios requested")
    for name, _, _ in jobs:
        if not isinstance(name, str) or name not in SCENARIOS:
            raise ConfigError(f"unknown scenario {name!r}")
    return {"jobs": jobs, "seed": seed, "out": raw.get("out")}


def run_one(job) -> tuple[str, dict, float]:
    name, params, tol, seed = job
    func, anchor = SCENARIOS[name]
    start = time.perf_counter()
    try:
        report = func(params, tol, seed)
    except (NumericalError, DomainError) as exc:
        report = {"parameters": params, "scalars": {}, "series": {}, "tables": {},
                  "flags": {"completed": {"pass": False, "value": str(exc), "threshold": None, "op": "==",
                                          "margin": None, "invariant": "scenario completes"}}}
    report = {"scenario": name, "anchor": anchor, **report}
    report["passed"] = all(f["pass"] for f in report["flags"].values())
    return name, report, time.perf_counter() - start


def _fmt(x):
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if x == 0 or 1e-3 <= abs(x) < 1e7:
            s = f"{x:.6f}".rstrip("0")
            return s + "0" if s.endswith(".") else s
        return f"{x:.6e}"
    return str(x)


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_svg(path: Path, title: str, xs, ys, width=480, height=320, pad=40):
    """Minimal polyline plot; axes switch to log scale for wide positive ranges."""
    import math

    def scale(vals):
        vals = [float(v) for v in vals]
        logs = all(v > 0 for v in vals) and max(vals) / min(vals) > 100
        tv = [math.log10(v) for v in vals] if logs else vals
        lo, hi = min(tv), max(tv)
        span = hi - lo or 1.0
        return [(v - lo) / span for v in tv], logs

    if len(xs) < 2:
        return
    sx, lx = scale(xs)
    sy, ly = scale(ys)
    pts = " ".join(f"{pad + u * (width - 2 * pad):.2f},{height - pad - v * (height - 2 * pad):.2f}"
                   for u, v in zip(sx, sy))
    label = f"{title}{' (log x)' if lx else ''}{' (log y)' if ly else ''}"
    svg = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
           f'<rect width="100%" height="100%" fill="white"/>\n'
           f'<text x="{pad}" y="20" font-size="12">{label}</text>\n'
           f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>\n'
           f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>\n'
           f'<polyline fill="none" stroke="steelblue" stroke-width="2" points="{pts}"/>\n</svg>\n')
    path.write_text(svg)


def write_outputs(out: Path, reports: dict, timings: dict, seed: int):
    out.mkdir(parents=True, exist_ok=True)
    payload = {"seed": seed, "passed": all(r["passed"] for r in reports.values()), "scenarios": reports}
    (out / "report.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    (out / "timing.json").write_text(json.dumps({k: round(v, 3) for k, v in timings.items()}, indent=2) + "\n")
    for name, rep in reports.items():
        for tname, (header, rows) in rep.get("tables", {}).items():
            write_csv(out / f"{name}__{tname}.csv", header, rows)
        for sname, ser in rep.get("series", {}).items():
            write_svg(out / f"{name}__{sname}.svg", f"{name}: {sname}", ser["x"], ser["y"])


def run(config_path: str, out: str | None = None, parallel: bool = False) -> int:
    try:
        with open(config_path) as fh:
            raw = json.load(fh)
        cfg = parse_config(raw)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"qc-lab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(out or cfg["out"] or "qc-lab-out")
    jobs = [(name, params, tol, cfg["seed"]) for name, params, tol in cfg["jobs"]]
    try:
        if parallel and len(jobs) > 1:
            with ProcessPoolExecutor() as pool:
                results = list(pool.map(run_one, jobs))
        else:
            results = [run_one(job) for job in jobs]
    except (TypeError, ValueError, KeyError) as exc:
        # bad parameter values surface here
        print(f"qc-lab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    reports = {name: rep for name, rep, _ in results}
    timings = {name: dt for name, _, dt in results}
    write_outputs(out_dir, reports, timings, cfg["seed"])
    failed = [f"{name}.{flag}" for name, rep in reports.items() for flag, f in rep["flags"].items() if not f["pass"]]
    for name, rep in reports.items():
        status = "PASS" if rep["passed"] else "FAIL"
        print(f"{status} {name} ({timings[name]:.1f}s) -> {out_dir}")
    if failed:
        print("qc-lab: failing flags: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="qc-lab", description="Run quasiconformal-map experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run scenarios from a JSON config")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--parallel", action="store_true", help="run scenarios in separate processes")
    sub.add_parser("list", help="list scenarios")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.command == "list":
        rows = list_scenarios()
        width = max(len(n) for n, _ in rows)
        for name, anchor in rows:
            print(f"{name:<{width}}  {anchor}")
        return EXIT_OK
    return run(args.config, args.out, args.parallel)


if __name__ == "__main__":
    sys.exit(main())
