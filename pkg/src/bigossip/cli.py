"""Command-line front end.

Subcommands
-----------
exact      solve one population pair and print the expected phase times
simulate   run a Monte Carlo batch and emit its summary
verify     run a deterministic verification suite (exit 1 on failure)
figure     emit figure-ready CSV data (bound sweeps, fluid bands)
replay     re-run a command from its run manifest

Every file written with ``--out`` is accompanied by a
``<out>.manifest.json`` run manifest recording the exact argument vector,
seed, and tool version; ``replay`` reproduces the data files byte for
byte.  CSV output is UTF-8 with a header row and 17-significant-digit
floats; JSON objects use sorted keys.  Exit codes: 0 success, 1 failed
verification, 2 invalid usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, fluid, formulas, simulate, verify
from .chain import ChainParams, expected_total_time
from .errors import CapacityError, DomainError

USAGE_ERROR = 2


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _csv_bytes(header: list, rows: list) -> bytes:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode("utf-8")


def _write_with_manifest(out: Path, payload: bytes, args: argparse.Namespace,
                         command: str) -> None:
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(payload)
    manifest = {
        "tool": "bigossip",
        "version": __version__,
        "command": command,
        "argv": args._argv,
        "master_seed": getattr(args, "seed", None),
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "outputs": [str(out)],
    }
    Path(str(out) + ".manifest.json").write_bytes(_json_bytes(manifest))


def _emit(args: argparse.Namespace, command: str, payload: bytes) -> None:
    if args.out is None:
        sys.stdout.write(payload.decode("utf-8"))
    else:
        _write_with_manifest(Path(args.out), payload, args, command)


def cmd_exact(args: argparse.Namespace) -> int:
    params = ChainParams(args.n, args.m)
    total = expected_total_time(params)
    row = {
        "n_static": args.n,
        "n_mobile": args.m,
        "expected_total_steps": total,
        "expected_phase1_steps": float(args.n),
        "expected_phase2_steps": total - args.n,
    }
    if args.format == "json":
        payload = _json_bytes(row)
    else:
        keys = list(row)
        payload = _csv_bytes(keys, [[row[k] for k in keys]])
    _emit(args, "exact", payload)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    config = simulate.SimConfig(
        params=ChainParams(args.n, args.m),
        replicas=args.replicas,
        master_seed=args.seed,
        mode=args.mode,
        rate=args.rate,
        trajectory_stride=args.stride,
    )
    summary = simulate.run_batch(config).summary
    doc = {
        "config": {
            "n_static": args.n,
            "n_mobile": args.m,
            "replicas": args.replicas,
            "master_seed": args.seed,
            "mode": args.mode,
            "rate": args.rate if args.mode == "poisson" else None,
        },
        "summary": summary.to_dict(),
    }
    if args.format == "json":
        payload = _json_bytes(doc)
    else:
        rows = []
        for block_name in ("steps", "completion_time"):
            block = getattr(summary, block_name)._asdict()
            rows += [[f"{block_name}.{k}", float(v)] for k, v in block.items()]
        rows.append(["replica_count", summary.replica_count])
        payload = _csv_bytes(["field", "value"], rows)
    _emit(args, "simulate", payload)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    checks = verify.run_suite(args.suite, n_max=args.n_max, seed=args.seed,
                              replicas=args.replicas)
    failures = 0
    for check in checks:
        print(f"{check.status:4s} {check.name}: {check.detail}")
        failures += check.failed
    passed = sum(c.status == verify.PASS for c in checks)
    print(f"{passed} passed, {failures} failed, "
          f"{sum(c.status == verify.INFO for c in checks)} informational")
    return 1 if failures else 0


_FLUID_FIGURES = {
    "fluid-a": (1.0, 250),
    "fluid-b": (0.1, 1000),
    "fluid-c": (4.0, 125),
}


def _figure_bounds(args: argparse.Namespace) -> bytes:
    rows = []
    for n in range(2, args.n_max + 1):
        exact = expected_total_time(ChainParams(n, n))
        lower, upper = formulas.equal_population_bounds(n)
        rows.append([n, exact, lower, upper])
    return _csv_bytes(["n", "exact", "lower", "upper"], rows)


def _figure_fluid(args: argparse.Namespace, alpha: float, n_mobile: int) -> bytes:
    n_static = alpha * n_mobile
    if abs(n_static - round(n_static)) > 1e-9:
        raise DomainError(
            f"alpha * n = {n_static} must be an integer population size")
    n_static = int(round(n_static))
    params = fluid.FluidParams(alpha, n_mobile)
    config = simulate.SimConfig(
        params=ChainParams(n_static, n_mobile),
        replicas=args.replicas,
        master_seed=args.seed,
        record_trajectories=True,
        trajectory_stride=args.stride,
    )
    batch = simulate.run_batch(config)
    paths = simulate.normalized_trajectories(batch)
    grid = np.linspace(params.x0, 1.0, 201)
    band_low = np.full_like(grid, np.inf)
    band_high = np.full_like(grid, -np.inf)
    for path in paths:
        idx = np.searchsorted(path[:, 1], grid, side="right") - 1
        ys = path[np.clip(idx, 0, len(path) - 1), 2]
        band_low = np.minimum(band_low, ys)
        band_high = np.maximum(band_high, ys)
    closed = fluid.fluid_phase_curve(params, grid)
    rows = [
        [float(x), float(lo), float(hi), float(c)]
        for x, lo, hi, c in zip(grid, band_low, band_high, closed)
    ]
    return _csv_bytes(["x", "y_sim_band_low", "y_sim_band_high", "y_closed_form"], rows)


def cmd_figure(args: argparse.Namespace) -> int:
    if args.figure_id == "bounds":
        payload = _figure_bounds(args)
    else:
        alpha, n_mobile = _FLUID_FIGURES[args.figure_id]
        if args.alpha is not None:
            alpha = args.alpha
        if args.n is not None:
            n_mobile = args.n
        payload = _figure_fluid(args, alpha, n_mobile)
    out = Path(args.out) if args.out else Path(f"figure_{args.figure_id}.csv")
    args.out = str(out)
    _emit(args, "figure", payload)
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    argv = list(manifest["argv"])
    if args.out_dir is not None:
        if "--out" not in argv:
            print("manifest has no --out to remap", file=sys.stderr)
            return USAGE_ERROR
        idx = argv.index("--out") + 1
        argv[idx] = str(Path(args.out_dir) / Path(argv[idx]).name)
    return main(argv)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bigossip",
        description="Exact solver, Monte Carlo simulator and verifier for "
                    "push-pull rumor spreading between static and mobile nodes.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(p):
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--out", type=str, default=None, help="output path")

    p_exact = sub.add_parser("exact", help="expected times from the exact solver")
    p_exact.add_argument("--n", type=int, required=True, help="static node count")
    p_exact.add_argument("--m", type=int, required=True, help="mobile node count")
    add_output_flags(p_exact)
    p_exact.set_defaults(func=cmd_exact)

    p_sim = sub.add_parser("simulate", help="Monte Carlo batch summary")
    p_sim.add_argument("--n", type=int, required=True, help="static node count")
    p_sim.add_argument("--m", type=int, required=True, help="mobile node count")
    p_sim.add_argument("--replicas", type=int, default=10_000)
    p_sim.add_argument("--seed", type=int, default=42, help="master seed")
    p_sim.add_argument("--mode", choices=("rounds", "poisson"), default="rounds")
    p_sim.add_argument("--lambda", dest="rate", type=float, default=1.0,
                       help="per-mobile activation rate (poisson mode)")
    p_sim.add_argument("--stride", type=int, default=None,
                       help="trajectory recording stride")
    add_output_flags(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=verify.SUITES)
    p_verify.add_argument("--n-max", type=int, default=None)
    p_verify.add_argument("--seed", type=int, default=42)
    p_verify.add_argument("--replicas", type=int, default=20_000)
    p_verify.set_defaults(func=cmd_verify)

    p_fig = sub.add_parser("figure", help="emit figure-ready CSV data")
    p_fig.add_argument("figure_id", choices=("bounds",) + tuple(_FLUID_FIGURES))
    p_fig.add_argument("--n-max", type=int, default=2000,
                       help="largest population for the bounds sweep")
    p_fig.add_argument("--replicas", type=int, default=200)
    p_fig.add_argument("--seed", type=int, default=42)
    p_fig.add_argument("--alpha", type=float, default=None,
                       help="override the static/mobile ratio of a fluid figure")
    p_fig.add_argument("--n", type=int, default=None,
                       help="override the mobile count of a fluid figure")
    p_fig.add_argument("--stride", type=int, default=None)
    p_fig.add_argument("--out", type=str, default=None)
    p_fig.set_defaults(func=cmd_figure)

    p_replay = sub.add_parser("replay", help="re-run a command from its manifest")
    p_replay.add_argument("manifest", type=str)
    p_replay.add_argument("--out-dir", type=str, default=None,
                          help="redirect the output file into this directory")
    p_replay.set_defaults(func=cmd_replay)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = list(argv) if argv is not None else sys.argv[1:]
    try:
        return args.func(args)
    except (DomainError, CapacityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
