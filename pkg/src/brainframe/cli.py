"""Command-line surface.

Exit codes: 0 success, 2 configuration error, 3 numeric divergence
(message names the failing step), 4 calibration coverage error.
BRAINFRAME_WORKERS overrides the worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io as bfio
from .connectivity import ConnectivityGeneratorSpec, generate_connectivity, save_matrix
from .engine import SimulationConfig, simulate
from .errors import (
    BrainFrameError,
    ConfigError,
    CoverageError,
    NumericDivergenceError,
)
from .model import EvokedInputSchedule, Pulse, UseCase
from .planner import plan as plan_batch
from .profiler import DfeTickModel, estimate_dfe_step_seconds, profile
from .selector import (
    Calibration,
    ExperimentSpec,
    Fabric,
    classify,
    rt_max_network,
    select,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_COVERAGE = 4


def _parse_pulse(text: str) -> Pulse:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"pulse must be start:end:amplitude[:targets], got {text!r}")
    try:
        start, end, amp = int(parts[0]), int(parts[1]), float(parts[2])
        target = None
        if len(parts) == 4 and parts[3] not in ("", "all"):
            target = frozenset(int(t) for t in parts[3].split("+"))
        return Pulse(start_step=start, end_step=end, amplitude=amp, target=target)
    except ValueError as e:
        raise ConfigError(f"bad pulse {text!r}: {e}") from None


def _use_case(text: str) -> UseCase:
    try:
        return UseCase(text.lower())
    except ValueError:
        raise ConfigError(f"unknown use case {text!r} (expected rgj/sgj/ngj)") from None


def _workers(args) -> int:
    env = os.environ.get("BRAINFRAME_WORKERS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"BRAINFRAME_WORKERS={env!r} is not an integer") from None
    return args.workers


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        bfio.atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _connectivity_spec(args, case: UseCase) -> ConnectivityGeneratorSpec | None:
    if case is UseCase.NGJ:
        return None
    if args.connectivity_file:
        return ConnectivityGeneratorSpec(kind="from_file", path=args.connectivity_file,
                                         weight=args.weight)
    if args.density >= 1.0:
        return ConnectivityGeneratorSpec(kind="all_to_all", weight=args.weight)
    return ConnectivityGeneratorSpec(kind="fixed_density", p=args.density,
                                     seed=args.seed, weight=args.weight)


def cmd_simulate(args) -> int:
    if args.config:
        with open(args.config) as fh:
            config = bfio.config_from_dict(json.load(fh))
    else:
        case = _use_case(args.case)
        spec = _connectivity_spec(args, case)
        conn = generate_connectivity(spec, args.n) if spec is not None else None
        workers = _workers(args)
        config = SimulationConfig(
            use_case=case,
            n=args.n,
            duration_steps=args.steps,
            connectivity=conn,
            dt=args.dt,
            inputs=EvokedInputSchedule(tuple(_parse_pulse(p) for p in args.pulse)),
            backend="parallel" if workers > 1 else "sequential",
            workers=workers,
            record_stride=args.record_stride,
            record_neurons=(tuple(args.record_neurons)
                            if args.record_neurons else None),
            seed=args.seed,
            precision=args.precision,
        )
    trace = simulate(config)
    bfio.write_trace(trace, args.out)
    return EXIT_OK


def cmd_profile(args) -> int:
    case = _use_case(args.case)
    p = profile(case, args.n, args.density)
    payload = p.to_dict()
    payload.update({"use_case": case.value, "n": args.n, "density": args.density})
    if args.dfe:
        model = DfeTickModel(unroll_factor=args.dfe_unroll,
                             pipeline_depth=args.dfe_depth,
                             clock_hz=args.dfe_clock)
        from .profiler import estimate_dfe_ticks
        payload["dfe_ticks_per_step"] = estimate_dfe_ticks(case, args.n, args.density, model)
        payload["dfe_step_seconds"] = estimate_dfe_step_seconds(case, args.n,
                                                                args.density, model)
    _emit(payload, args.out)
    return EXIT_OK


def cmd_select(args) -> int:
    case = _use_case(args.case)
    calibration = bfio.read_calibration(args.calibration) if args.calibration else None
    spec = ExperimentSpec(use_case=case, n=args.n, density=args.density,
                          real_time=args.real_time)
    decision = select(classify(spec), calibration)
    payload = decision.to_dict()
    if args.rt_max:
        payload["rt_max_network"] = {
            f.value: rt_max_network(f, case, args.density, calibration)
            for f in Fabric}
    _emit(payload, args.out)
    return EXIT_OK


def cmd_plan(args) -> int:
    batch = bfio.read_batch(args.batch)
    calibration = bfio.read_calibration(args.calibration) if args.calibration else None
    report = plan_batch(batch, calibration, allow_rule_fallback=args.allow_rule_fallback)
    if args.text:
        text = report.to_text() + "\n"
        if args.out:
            bfio.atomic_write_text(args.out, text)
        else:
            sys.stdout.write(text)
    else:
        _emit(report.to_dict(), args.out)
    return EXIT_OK


def cmd_calibrate(args) -> int:
    """Measure local engine seconds-per-step over a sweep and write a
    calibration CSV. The fabric column is labeled by --fabric so locally
    measured data can stand in for any accelerator."""
    case = _use_case(args.case)
    try:
        fabric = Fabric(args.fabric.upper())
    except ValueError:
        raise ConfigError(f"unknown fabric {args.fabric!r}") from None
    workers = _workers(args)
    entries = []
    for n in args.sizes:
        spec = _connectivity_spec(args, case)
        conn = generate_connectivity(spec, n) if spec is not None else None
        config = SimulationConfig(
            use_case=case, n=n, duration_steps=args.steps, connectivity=conn,
            backend="parallel" if workers > 1 else "sequential", workers=workers,
            record_stride=max(1, args.steps), seed=args.seed)
        trace = simulate(config)
        entries.append((fabric, case, args.density, n,
                        trace.metadata["step_seconds_mean"]))
    bfio.write_calibration(entries, args.out)
    return EXIT_OK


def cmd_gen_connectivity(args) -> int:
    if args.density >= 1.0:
        spec = ConnectivityGeneratorSpec(kind="all_to_all", weight=args.weight)
    else:
        spec = ConnectivityGeneratorSpec(kind="fixed_density", p=args.density,
                                         seed=args.seed, weight=args.weight)
    matrix = generate_connectivity(spec, args.n)
    save_matrix(matrix, args.out)
    return EXIT_OK


def _add_common_experiment_args(p, need_steps=False):
    p.add_argument("--case", required=True, help="rgj, sgj or ngj")
    p.add_argument("--n", type=int, required=True, help="network size (cells)")
    p.add_argument("--density", type=float, default=0.0,
                   help="connectivity density in [0, 1]")
    if need_steps:
        p.add_argument("--steps", type=int, required=True, help="simulation steps")


def _add_connectivity_args(p):
    p.add_argument("--weight", type=float, default=0.04, help="connection weight")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--connectivity-file", default=None,
                   help="load weights from a matrix CSV instead of generating")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brainframe",
        description="Gap-junction HH network simulator, workload profiler, "
                    "accelerator selector and batch planner.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a simulation and write a trace CSV")
    p.add_argument("--case", default=None, help="rgj, sgj or ngj")
    p.add_argument("--n", type=int, default=None, help="network size (cells)")
    p.add_argument("--density", type=float, default=0.0,
                   help="connectivity density in [0, 1]")
    p.add_argument("--steps", type=int, default=None, help="simulation steps")
    _add_connectivity_args(p)
    p.add_argument("--pulse", action="append", default=[],
                   help="evoked input start:end:amplitude[:i+j+...] (repeatable)")
    p.add_argument("--dt", type=float, default=0.05, help="step size (ms)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--record-stride", type=int, default=1)
    p.add_argument("--record-neurons", type=int, nargs="*", default=None)
    p.add_argument("--precision", choices=["fp64", "fp32"], default="fp64")
    p.add_argument("--config", default=None, help="JSON config file (overrides flags)")
    p.add_argument("--out", required=True, help="trace CSV path")
    p.set_defaults(func=cmd_simulate, required_steps=True)

    p = sub.add_parser("profile", help="emit the analytic workload profile as JSON")
    _add_common_experiment_args(p)
    p.add_argument("--dfe", action="store_true", help="include the DFE tick model")
    p.add_argument("--dfe-unroll", type=int, default=8)
    p.add_argument("--dfe-depth", type=int, default=100)
    p.add_argument("--dfe-clock", type=float, default=100e6)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("select", help="choose an accelerator fabric")
    _add_common_experiment_args(p)
    p.add_argument("--real-time", action="store_true")
    p.add_argument("--calibration", default=None, help="calibration CSV")
    p.add_argument("--rt-max", action="store_true",
                   help="also report RT-achievable sizes per fabric")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("plan", help="plan a batch of experiments across fabrics")
    p.add_argument("--batch", required=True, help="batch JSON file")
    p.add_argument("--calibration", default=None, help="calibration CSV")
    p.add_argument("--allow-rule-fallback", action="store_true")
    p.add_argument("--text", action="store_true", help="plain-text table output")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("calibrate", help="measure local sec-per-step and write a "
                                         "calibration CSV")
    _add_common_experiment_args(p)
    _add_connectivity_args(p)
    p.add_argument("--sizes", type=int, nargs="+", required=True,
                   help="network sizes to sweep")
    p.add_argument("--steps", type=int, default=200, help="steps per measurement")
    p.add_argument("--fabric", default="DFE", help="fabric label for the CSV")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("gen-connectivity", help="write a connectivity matrix CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--weight", type=float, default=0.04)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_connectivity)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate" and not args.config and (
            args.case is None or args.n is None or args.steps is None):
        parser.error("simulate requires --case, --n and --steps (or --config)")
    try:
        return args.func(args)
    except NumericDivergenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except CoverageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_COVERAGE
    except BrainFrameError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
