"""Command-line front end: flags/config-file parsing, CSV output, manifests.

Subcommands: run (one experiment), sweep (guest-size x policy grid),
baseline (no-migration / closed-form check), phases (pattern shift). Every
CSV gets a sibling <path>.manifest.json recording the resolved config and
master seed, enough to reproduce the file byte for byte; feeding a manifest
back through --config replays the run.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .engine import (
    ExperimentConfig,
    ExperimentResult,
    PhaseSpec,
    run_phases,
    run_repetitions,
    sweep_guest_size,
)
from .guest import WeightModel
from .topology import BCube

CSV_HEADER = (
    "t,requests_per_edge,cost_cum_mean,cost_cum_std,"
    "cost_win_mean,cost_win_std,cost_mig_mean,swaps_mean"
)

_DEFAULTS = {
    "host": None,
    "guest": "clique",
    "guest_size": None,
    "weights": "unweighted",
    "range_max": 100,
    "policy": "none",
    "requests": 100_000,
    "reps": 10,
    "seed": 0,
    "mode": "inter",
    "sample_every": None,
    "initial": "random",
    "tenants": None,
    "cover": "strict",
    "workers": 1,
    "out": None,
    "phases": None,
    "reset_stats_on_phase": True,
}

_FILE_KEY_ALIASES = {
    "guest_kind": "guest",
    "repetitions": "reps",
}


class UsageError(SystemExit):
    """Fatal usage problem: print to stderr, exit status 2."""

    def __init__(self, message: str):
        print(f"dswap: error: {message}", file=sys.stderr)
        super().__init__(2)


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def emit_csv(result: ExperimentResult, path: str | Path, manifest: dict) -> None:
    """Write the aggregated series as CSV plus its manifest sibling."""
    path = Path(path)
    with open(path, "w", newline="\n") as out:
        out.write(CSV_HEADER + "\n")
        for i in range(len(result.t)):
            row = (
                str(int(result.t[i])),
                _fmt(float(result.requests_per_edge[i])),
                _fmt(float(result.cost_cum_mean[i])),
                _fmt(float(result.cost_cum_std[i])),
                _fmt(float(result.cost_win_mean[i])),
                _fmt(float(result.cost_win_std[i])),
                _fmt(float(result.cost_mig_mean[i])),
                _fmt(float(result.swaps_mean[i])),
            )
            out.write(",".join(row) + "\n")
    write_manifest(path, manifest)


def write_manifest(csv_path: str | Path, manifest: dict) -> None:
    with open(f"{csv_path}.manifest.json", "w") as out:
        json.dump(manifest, out, indent=2, sort_keys=True)
        out.write("\n")


def _config_to_dict(config: ExperimentConfig) -> dict:
    d = dataclasses.asdict(config)
    d["host"] = list(config.host)
    return d


def _manifest(config: ExperimentConfig, argv: list[str], outputs: list[str],
              started: float, boundaries: list[int] | None = None) -> dict:
    manifest = {
        "tool": "dswap",
        "version": __version__,
        "command": argv,
        "master_seed": config.seed,
        "config": _config_to_dict(config),
        "started": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
        "finished": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "outputs": outputs,
    }
    if boundaries:
        manifest["phase_boundaries"] = boundaries
    return manifest


def _parse_host(text: str) -> tuple[int, int]:
    try:
        n, k = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"host must look like 'n,k' (e.g. 3,7), got {text!r}"
        ) from None
    return n, k


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from None


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file or manifest (flags win)")
    p.add_argument("--host", type=_parse_host, help="BCube parameters n,k")
    p.add_argument("--guest", choices=["clique", "star", "subcube", "matching"])
    p.add_argument("--guest-size", type=int, dest="guest_size")
    p.add_argument("--weights", choices=["unweighted", "product"])
    p.add_argument("--range-max", type=int, dest="range_max")
    p.add_argument("--policy")
    p.add_argument("--requests", type=int)
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int, help="master seed (DSWAP_SEED overrides)")
    p.add_argument("--mode", choices=["inter", "intra"])
    p.add_argument("--sample-every", type=int, dest="sample_every")
    p.add_argument("--initial", choices=["random", "perfect", "local"])
    p.add_argument("--tenants", type=int, help="explicit component count")
    p.add_argument("--cover", choices=["strict", "lenient"])
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="output CSV path")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dswap",
        description="Destination-Swap VM migration experiments on BCube topologies",
    )
    parser.add_argument("--version", action="version", version=f"dswap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment and write a CSV")
    _add_common(p_run)

    p_sweep = sub.add_parser("sweep", help="sweep guest sizes (and policies)")
    _add_common(p_sweep)
    p_sweep.add_argument("--sizes", type=_parse_int_list, help="e.g. 27,243,729")
    p_sweep.add_argument(
        "--policies", help="comma-separated policy names (default: --policy)"
    )

    p_base = sub.add_parser("baseline", help="no-migration baseline / formula check")
    _add_common(p_base)

    p_phases = sub.add_parser("phases", help="pattern-shift run from a phase spec")
    _add_common(p_phases)
    p_phases.add_argument("--spec", help="JSON file with a 'phases' list")
    return parser


def _load_config_file(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data.get("config"), dict):
        data = data["config"]  # manifest: replay the embedded config
    return data


def _resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < explicit flags < DSWAP_SEED."""
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        for key, value in _load_config_file(args.config).items():
            key = _FILE_KEY_ALIASES.get(key, key)
            if key not in merged:
                continue
            if key == "host" and value is not None:
                value = _parse_host(value) if isinstance(value, str) else tuple(
                    int(x) for x in value
                )
            if key == "weights" and isinstance(value, dict):
                merged["weights"] = (
                    "product"
                    if value.get("kind") == "product_uniform"
                    else "unweighted"
                )
                merged["range_max"] = value.get("range_max", merged["range_max"])
                continue
            merged[key] = value
    for key in merged:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    env_seed = os.environ.get("DSWAP_SEED")
    if env_seed is not None:
        merged["seed"] = int(env_seed)
    if merged["host"] is None:
        raise UsageError("--host (or a config file providing one) is required")
    return merged


def _weight_model(spec, default_range: int) -> WeightModel:
    if isinstance(spec, dict):
        return WeightModel(
            spec.get("kind", "unweighted"), spec.get("range_max", default_range)
        )
    kind = "product_uniform" if spec == "product" else spec
    return WeightModel(kind, default_range)


def _parse_phases(raw_phases, merged: dict) -> tuple[PhaseSpec, ...]:
    specs = []
    for raw in raw_phases:
        weights = raw.get("weights", merged["weights"])
        specs.append(
            PhaseSpec(
                guest_kind=raw.get("guest", raw.get("guest_kind", merged["guest"])),
                guest_size=raw.get("guest_size", merged["guest_size"]),
                requests=int(raw["requests"]),
                weights=_weight_model(
                    weights, raw.get("range_max", merged["range_max"])
                ),
                tenants=raw.get("tenants", merged["tenants"]),
            )
        )
    return tuple(specs)


def _experiment_config(merged: dict) -> ExperimentConfig:
    phases = merged.get("phases")
    if phases:
        phases = _parse_phases(phases, merged)
    else:
        phases = None
    config = ExperimentConfig(
        host=tuple(merged["host"]),
        requests=merged["requests"],
        guest_kind=merged["guest"],
        guest_size=merged["guest_size"],
        weights=_weight_model(merged["weights"], merged["range_max"]),
        policy=merged["policy"],
        mode=merged["mode"],
        repetitions=merged["reps"],
        seed=merged["seed"],
        sample_every=merged["sample_every"],
        initial=merged["initial"],
        tenants=merged["tenants"],
        cover=merged["cover"],
        phases=phases,
        reset_stats_on_phase=bool(merged.get("reset_stats_on_phase", True)),
    )
    try:
        config.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return config


def _require_out(merged: dict) -> Path:
    out = merged.get("out")
    if not out:
        raise UsageError("--out is required for this command")
    return Path(out)


def _cmd_run(args: argparse.Namespace, argv: list[str]) -> int:
    merged = _resolve(args)
    config = _experiment_config(merged)
    out = _require_out(merged)
    started = time.time()
    result = run_repetitions(config, workers=merged["workers"])
    emit_csv(result, out, _manifest(config, argv, [str(out)], started,
                                    result.phase_boundaries))
    print(f"wrote {out} (final amortized cost {result.final_cost:.4f})")
    return 0


def _cmd_sweep(args: argparse.Namespace, argv: list[str]) -> int:
    merged = _resolve(args)
    if not args.sizes:
        raise UsageError("--sizes is required for sweep")
    policies = [p for p in args.policies.split(",") if p] if args.policies else None
    config = _experiment_config(merged)
    out = _require_out(merged)
    started = time.time()
    sweep = sweep_guest_size(config, args.sizes, policies, workers=merged["workers"])
    outputs: list[str] = []
    failed = False
    for entry in sweep.entries:
        if entry.result is None:
            print(
                f"size {entry.size} policy {entry.policy}: skipped ({entry.error})",
                file=sys.stderr,
            )
            failed = True
            continue
        sub_path = out.with_name(
            f"{out.stem}-{entry.policy}-size{entry.size}{out.suffix or '.csv'}"
        )
        sub_config = dataclasses.replace(
            config, guest_size=entry.size, policy=entry.policy
        )
        emit_csv(entry.result, sub_path,
                 _manifest(sub_config, argv, [str(sub_path)], started))
        outputs.append(str(sub_path))
    with open(out, "w", newline="\n") as fh:
        fh.write("size,policy,final_cost\n")
        for size, policy, cost in sweep.summary_rows():
            fh.write(f"{size},{policy},{_fmt(cost)}\n")
    write_manifest(out, _manifest(config, argv, outputs + [str(out)], started))
    print(f"wrote {out} and {len(outputs)} per-run CSVs")
    return 1 if failed else 0


def _cmd_baseline(args: argparse.Namespace, argv: list[str]) -> int:
    merged = _resolve(args)
    merged["policy"] = "none"
    n, k = merged["host"]
    expected = BCube(n, k).expected_random_distance()
    print(f"BCube({n},{k}) expected random-placement distance: "
          f"{expected} = {float(expected):.4f}")
    if not merged.get("out"):
        return 0
    config = _experiment_config(merged)
    out = Path(merged["out"])
    started = time.time()
    result = run_repetitions(config, workers=merged["workers"])
    emit_csv(result, out, _manifest(config, argv, [str(out)], started))
    measured = result.final_cost
    print(f"measured over {config.total_requests} requests x "
          f"{config.repetitions} reps: {measured:.4f} "
          f"({measured / float(expected) - 1:+.2%} vs formula)")
    return 0


def _cmd_phases(args: argparse.Namespace, argv: list[str]) -> int:
    merged = _resolve(args)
    if args.spec:
        with open(args.spec) as fh:
            spec = json.load(fh)
        merged["phases"] = spec.get("phases", [])
        if "reset_stats" in spec:
            merged["reset_stats_on_phase"] = bool(spec["reset_stats"])
    if not merged.get("phases") or len(merged["phases"]) < 2:
        raise UsageError("phases needs a spec with at least two phases")
    config = _experiment_config(merged)
    out = _require_out(merged)
    started = time.time()
    result = run_phases(config, workers=merged["workers"])
    emit_csv(result, out, _manifest(config, argv, [str(out)], started,
                                    result.phase_boundaries))
    print(f"wrote {out} (phase boundaries at {result.phase_boundaries})")
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "baseline": _cmd_baseline,
        "phases": _cmd_phases,
    }
    try:
        return handlers[args.command](args, argv)
    except UsageError:
        raise
    except (OSError, ValueError) as exc:
        print(f"dswap: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
