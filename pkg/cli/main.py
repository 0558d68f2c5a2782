"""Command-line entry point: `python -m cli <command> [flags]`.

Exit codes: 0 success, 1 usage error, 2 runtime error. Reports go to --out
when given, otherwise to stdout; logs always go to stderr.
"""
import argparse
import asyncio
import json
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
import structlog
from pydantic import ValidationError

from config.grids import PRESETS, GridSpec
from config.logging_config import configure_logging
from config.queues import TRAINING_QUEUE
from config.settings import SettingsManager
from config.train_config import AngleLaw, TrainConfig
from datasets.container import load_dataset, save_dataset
from datasets.csv_io import read_trajectory_csv, trajectory_csv
from datasets.pendulum import simulate_pendulum
from datasets.synthetic import synthetic_rotated_patterns
from gconv.checkpoint import load_checkpoint, save_checkpoint
from interfaces.datasets import PendulumParams
from interfaces.errors import LaconvError, UsageError
from interfaces.lie_group import GroupId
from interfaces.models import TaskType
from lie.sampling import rotation_elements
from metrics.bounds import lie_conv_bound_report
from metrics.equivariance import equivariance_error
from metrics.reports import report_json
from metrics.ulam import (
    TableMap,
    default_grid,
    fickett_bound,
    perturbed_identity_map,
    rotation_map,
    ulam_recover,
)
from training.grid_search import grid_search, metric_name, plan_runs
from training.trainer import train_model

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

SUMMARY_FILE = "summary.json"


class _Parser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting so main() owns the exit code."""

    def error(self, message):
        raise UsageError(message, help_text=self.format_help())


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _g(value: float) -> str:
    return "%.17g" % value


def cmd_simulate_pendulum(args) -> int:
    params = PendulumParams(m=args.m, L=args.L, g=args.g, lam=args.lam, theta0=args.theta0,
                            omega0=args.omega0, dt=args.dt, n_steps=args.steps)
    _emit(trajectory_csv(simulate_pendulum(params)), args.out)
    return EXIT_OK


def cmd_gen_synthetic(args) -> int:
    dataset = synthetic_rotated_patterns(args.per_class, args.classes, args.size, AngleLaw(args.angle_law), args.seed)
    save_dataset(dataset, args.out)
    logger.info("synthetic_written", path=args.out, count=len(dataset))
    return EXIT_OK


def cmd_train(args) -> int:
    config = TrainConfig.from_json_file(args.config)
    if args.seed is not None:
        config = config.model_copy(update={"seed": args.seed})
    record, model = train_model(config, metrics_csv=args.metrics_csv)
    if args.checkpoint:
        save_checkpoint(model, args.checkpoint)
    payload = record.public_dict(include_timing=args.include_timing)
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def _load_grid(args) -> GridSpec:
    spec = GridSpec.from_json_file(args.grid) if args.grid else PRESETS[args.preset]()
    if args.seed is not None:
        spec = spec.model_copy(update={"base": spec.base.model_copy(update={"seed": args.seed})})
    return spec


async def _temporal_grid(spec: GridSpec, n_seeds: int, address: str) -> Dict:
    from temporalio.client import Client

    from workflows.grid_search import GridSearchWorkflow

    runs = plan_runs(spec, n_seeds)
    request = {
        "combos": spec.combinations(),
        "runs": [
            {"run_key": r.run_key, "combo_index": r.combo_index,
             "config": r.config.model_dump(mode="json", by_alias=True)}
            for r in runs
        ],
        "metric": metric_name(spec.base.task),
        "n_seeds": n_seeds,
    }
    client = await Client.connect(address)
    return await client.execute_workflow(
        GridSearchWorkflow.run,
        request,
        id=f"grid-search-{spec.base.fingerprint()}-{spec.size}x{n_seeds}",
        task_queue=TRAINING_QUEUE,
    )


def cmd_grid_search(args) -> int:
    spec = _load_grid(args)
    n_seeds = args.seeds if args.seeds is not None else spec.n_seeds
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.temporal:
        settings = SettingsManager.from_env()
        result = asyncio.run(_temporal_grid(spec, n_seeds, settings.temporal_address))
        text = json.dumps(result["summary"], sort_keys=True, indent=2) + "\n"
    else:
        summary = grid_search(spec, n_seeds, out_dir=out_dir, threads=args.threads)
        text = report_json(summary)
    (out_dir / SUMMARY_FILE).write_text(text, encoding="utf-8", newline="\n")
    return EXIT_OK


def _evaluation_inputs(model, data_path: str, limit: Optional[int]) -> np.ndarray:
    if model.task is TaskType.CLASSIFY:
        inputs = load_dataset(data_path).images
    else:
        inputs = read_trajectory_csv(data_path).t
    return inputs[:limit] if limit else inputs


def cmd_eval_equivariance(args) -> int:
    model = load_checkpoint(args.checkpoint)
    inputs = _evaluation_inputs(model, args.data, args.limit)
    group = GroupId(args.group) if args.group else model.arch.group
    elements = rotation_elements(4, group) if args.quarter_turns else None
    report = equivariance_error(model, group, inputs, n_group_samples=args.samples,
                                seed=args.seed, elements=elements)
    _emit(report_json(report), args.out)
    return EXIT_OK


def _ulam_map(args):
    if args.map == "rotation":
        return rotation_map(args.angle), None
    if args.map == "perturbed-identity":
        return perturbed_identity_map(args.eps), None
    if not args.table:
        raise UsageError("--map custom-table needs --table FILE")
    payload = json.loads(Path(args.table).read_text(encoding="utf-8"))
    table = TableMap(np.asarray(payload["inputs"]), np.asarray(payload["outputs"]))
    return table, table.doubling_grid()


def cmd_ulam_recover(args) -> int:
    T, grid = _ulam_map(args)
    if grid is None:
        grid = default_grid(args.grid_points, args.grid_radius, seed=args.seed)
    result = ulam_recover(T, grid, tol=args.tol, max_doublings=args.max_doublings)
    _emit(report_json(result.report()), args.out)
    return EXIT_OK


def cmd_fickett(args) -> int:
    sys.stdout.write(_g(fickett_bound(args.eps, args.n)) + "\n")
    return EXIT_OK


def cmd_bound_report(args) -> int:
    model = load_checkpoint(args.checkpoint)
    if not 0 <= args.layer < len(model.layers):
        raise UsageError(f"--layer must be in [0, {len(model.layers)}), got {args.layer}")
    model.set_strict_mode(False)
    layer = model.layers[args.layer]
    features = np.random.default_rng(args.seed).standard_normal((layer.n_in, layer.c_in))
    report = lie_conv_bound_report(layer, features, seed=args.seed, n_kernel_args=args.kernel_args)
    _emit(report_json(report), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="python -m cli", description="Almost-equivariant Lie algebra convolutions")
    parser.add_argument("--log-level", default=None, help="overrides LACONV_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("simulate-pendulum", help="RK4 damped pendulum to CSV (t,x,y)")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--g", type=float, default=9.8)
    p.add_argument("--lambda", dest="lam", type=float, default=0.2)
    p.add_argument("--theta0", type=float, default=float(np.pi / 3.0))
    p.add_argument("--omega0", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--steps", type=int, default=6000)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_simulate_pendulum)

    p = sub.add_parser("gen-synthetic", help="rotated glyph dataset to a LADS1 file")
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--per-class", type=int, default=100)
    p.add_argument("--size", type=int, default=16)
    p.add_argument("--angle-law", choices=[law.value for law in AngleLaw], default=AngleLaw.UNIFORM.value)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_gen_synthetic)

    p = sub.add_parser("train", help="train one configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--checkpoint")
    p.add_argument("--metrics-csv")
    p.add_argument("--seed", type=int)
    p.add_argument("--include-timing", action="store_true")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("grid-search", help="train a hyperparameter grid over seeds")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--grid")
    source.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--seeds", type=int)
    p.add_argument("--seed", type=int, help="first seed; run k uses seed + k")
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int)
    p.add_argument("--temporal", action="store_true", help="run on the Temporal training queue")
    p.set_defaults(handler=cmd_grid_search)

    p = sub.add_parser("eval-equivariance", help="equivariance defect of a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", required=True, help="LADS1 images or pendulum CSV")
    p.add_argument("--group", choices=[g.value for g in GroupId])
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--quarter-turns", action="store_true")
    p.add_argument("--limit", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_eval_equivariance)

    p = sub.add_parser("ulam-recover", help="recover an isometry by doubling")
    p.add_argument("--map", choices=["rotation", "perturbed-identity", "custom-table"], required=True)
    p.add_argument("--table")
    p.add_argument("--eps", type=float, default=0.05, help="perturbation amplitude")
    p.add_argument("--angle", type=float, default=0.7)
    p.add_argument("--grid-radius", type=float, default=4.0)
    p.add_argument("--grid-points", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-doublings", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_ulam_recover)

    p = sub.add_parser("fickett", help="print 27·eps^(1/2^n)")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=cmd_fickett)

    p = sub.add_parser("bound-report", help="strict-vs-normal deviation and its bounds")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--layer", type=int, default=0)
    p.add_argument("--kernel-args", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_bound_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required", help_text=parser.format_help())
    except UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        if e.help_text:
            sys.stderr.write(e.help_text)
        return EXIT_USAGE

    handler: Callable = args.handler
    try:
        settings = SettingsManager.from_env()
        configure_logging(args.log_level or settings.log_level, settings.log_format)
        logger.info("command_started", command=args.command)
        code = handler(args)
    except UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except (LaconvError, OSError, ValueError, KeyError, ValidationError) as e:
        logger.error("command_failed", command=args.command, error=str(e))
        sys.stderr.write(f"error: {e}\n")
        return EXIT_RUNTIME
    logger.info("command_finished", command=args.command, exit_code=code)
    return code
