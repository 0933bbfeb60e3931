"""Batch command-line front door.

Subcommands: simulate, project, kernel-check, decompose, verify.  All output
is JSON or CSV, fully determined by (config, seed): reruns produce byte
identical artifacts, including under a worker pool.

Exit codes: 0 success, 1 suite or check failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np
import scipy

from . import __version__, config, flows, jumps, markov, simulate, suites
from .errors import ConfigError, SetLevyError


def _default_threads() -> int:
    env = os.environ.get("SETLEVY_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _write_json(path: Path, doc) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _load_spec(path: str, seed: int) -> simulate.ProcessSpec:
    return config.parse_process(config.load_json(path, "process spec"), seed=seed)


def cmd_simulate(args) -> int:
    spec = _load_spec(args.spec, args.seed)
    if args.level is not None:
        spec = simulate.ProcessSpec(spec.triplet, spec.dim, args.level, args.seed)
    regions = config.parse_regions(config.load_json(args.regions, "regions"))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path_id", "region_id", "increment"])
        for r in range(args.paths):
            path = simulate.sample_path(spec, r)
            for j, reg in enumerate(regions):
                writer.writerow([r, j, repr(simulate.evaluate(path, reg))])
    return 0


def cmd_project(args) -> int:
    spec = _load_spec(args.spec, args.seed)
    flow = config.parse_flow(config.load_json(args.flow, "flow"))
    if flow.dim != spec.dim:
        raise ConfigError(
            f"flow dimension {flow.dim} does not match process dimension {spec.dim}"
        )
    lo, hi = flow.theta_range
    mesh = np.linspace(lo, hi, args.mesh)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    worst_gap = 0.0
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path_id", "s", "value"])
        for r in range(args.paths):
            path = simulate.sample_path(spec, r)
            result = flows.project(path, flow, mesh, snap=True)
            worst_gap = max(worst_gap, max(result.gaps))
            for s, v in zip(result.s, result.values):
                writer.writerow([r, repr(s), repr(v)])
    if worst_gap > 0:
        print(f"note: grid snapping, max measure gap {worst_gap!r}", file=sys.stderr)
    return 0


def cmd_kernel_check(args) -> int:
    spec = _load_spec(args.spec, args.seed)
    try:
        v1, v2 = (float(v) for v in args.volumes.split(","))
    except ValueError as exc:
        raise ConfigError(f"--volumes expects 'v1,v2', got {args.volumes!r}") from exc
    if v1 < 0 or v2 < 0:
        raise ConfigError("volumes must be nonnegative")
    kernel = markov.TransitionKernel(spec.triplet, v_max=max(v1 + v2, 1.0))
    err = markov.chapman_kolmogorov_check(kernel, v1, v2)
    passed = err < args.tol
    print(json.dumps({
        "check": "chapman-kolmogorov",
        "volumes": [v1, v2],
        "max_error": err,
        "tol": args.tol,
        "pass": passed,
    }, sort_keys=True))
    return 0 if passed else 1


def cmd_decompose(args) -> int:
    spec = _load_spec(args.spec, args.seed)
    try:
        epsilons = [float(e) for e in args.epsilons.split(",")]
    except ValueError as exc:
        raise ConfigError(f"--epsilons expects a comma list, got {args.epsilons!r}") from exc
    path = simulate.sample_path(spec)
    dec = jumps.levy_ito_decompose(path, epsilons)
    family = jumps.dyadic_family(spec.dim, 2)
    regions = [simulate.IncrementRegion(r) for r in family]
    report = {
        "jump_count": int(path.jump_marks.size),
        "reconstruction_error": dec.reconstruction_error(regions),
        "tail_curve": [[e, v] for e, v in dec.tail_curve(family)],
    }
    if args.out:
        _write_json(Path(args.out), report)
    else:
        print(json.dumps(report, sort_keys=True, indent=2))
    return 0


def cmd_verify(args) -> int:
    doc = config.load_json(args.config, "run config")
    run = config.parse_run_config(doc)
    seed = args.seed if args.seed is not None else run["seed"]
    names = args.suite or run.get("suites") or sorted(suites.SUITES)
    paths = args.paths or run.get("paths")
    threads = args.threads or run.get("threads") or _default_threads()
    for name in names:
        if name not in suites.SUITES:
            raise ConfigError(f"unknown suite {name!r}; available: {sorted(suites.SUITES)}")
    out_dir = Path(args.out)
    config_hash = hashlib.sha256(
        json.dumps(doc, sort_keys=True).encode("utf-8")
    ).hexdigest()
    all_pass = True
    suite_files = {}
    for name in names:
        report = suites.run_suite(name, seed, paths=paths, threads=threads)
        fname = f"{name}.json"
        _write_json(out_dir / fname, report)
        suite_files[name] = fname
        all_pass &= report["pass"]
        status = "PASS" if report["pass"] else "FAIL"
        print(f"{status} {name}", file=sys.stderr)
    manifest = {
        "config_sha256": config_hash,
        "seed": seed,
        "paths": paths if paths is not None else suites.DEFAULT_PATHS,
        "threads": threads,
        "suites": suite_files,
        "versions": {
            "setlevy": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
    }
    _write_json(out_dir / "manifest.json", manifest)
    return 0 if all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setlevy",
        description="Simulate and verify set-indexed processes on dyadic rectangles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample paths and write region increments")
    p.add_argument("--spec", required=True, help="process spec JSON file")
    p.add_argument("--paths", type=int, default=100)
    p.add_argument("--level", type=int, default=None, help="override dissection level")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--regions", required=True, help="regions JSON file")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("project", help="project sampled paths along a flow")
    p.add_argument("--spec", required=True)
    p.add_argument("--flow", required=True, help="flow JSON file (polyline)")
    p.add_argument("--mesh", type=int, default=17, help="number of mesh points")
    p.add_argument("--paths", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("kernel-check", help="Chapman-Kolmogorov composition check")
    p.add_argument("--spec", required=True)
    p.add_argument("--volumes", required=True, help="v1,v2")
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_kernel_check)

    p = sub.add_parser("decompose", help="Gaussian/jump decomposition report")
    p.add_argument("--spec", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epsilons", default="0.1,0.01,0.001")
    p.add_argument("--out", default=None, help="report JSON path (default stdout)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--config", required=True, help="run config JSON file")
    p.add_argument("--seed", type=int, default=None, help="override config seed")
    p.add_argument("--suite", action="append", default=None, help="suite name (repeatable)")
    p.add_argument("--paths", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default="verify-out", help="artifact directory")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SetLevyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
