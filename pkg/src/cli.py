"""
semcom-auction command line.

Subcommands
-----------
  simulate  write a valuation dataset CSV
  train     train a learned auction; writes model.json and metrics.csv
  evaluate  evaluate a saved model on held-out profiles
  baseline  Monte Carlo revenue of a classical mechanism
  sweep     revenue against #VSPs, #apps or SemCom on/off

Examples
--------
  semcom-auction simulate --config configs/case_study.json --count 1000 --seed 1 --out data.csv
  semcom-auction train --config configs/case_study.json --out runs/case_study
  semcom-auction evaluate --model runs/case_study/model.json --config configs/case_study.json
  semcom-auction baseline --mechanism second-price --config configs/uniform_two_bidders.json
  semcom-auction sweep --kind vsps --values 2,3,4,5 --config configs/case_study.json --out runs/vsps

Exit codes: 0 success, 2 usage or configuration error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Any

import structlog
from pydantic import ValidationError

from src.auction import METRICS_CSV_HEADER, AuctionTrainer, BatchMetrics, TrainConfig, load_model, save_model
from src.baselines import MECHANISM_NAMES, expected_revenue_mc, make_baseline, market_sampler
from src.errors import AuctionLabError, ConfigurationError, SerializationError
from src.evaluation import (
    compare_semcom,
    evaluate_model,
    sweep_apps,
    sweep_vsps,
    write_sweep_csv,
    write_sweep_summary,
)
from src.market import sample_valuations, write_profiles_csv
from src.observability import configure_logging
from src.runs import MANIFEST_NAME, ExperimentConfig, RunRecorder, RunStatus, load_experiment_config

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    return load_experiment_config(args.config, getattr(args, "train_config", None))


def _sidecar_manifest(out: Path) -> Path:
    return out.with_name(f"{out.stem}.manifest.json")


def _write_json(path: Path, document: dict[str, Any]) -> None:
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n")


def _parse_values(raw: str | None) -> list[int]:
    items = [item.strip() for item in (raw or "").split(",") if item.strip()]
    if not items:
        raise ConfigurationError("--values needs a comma-separated list, e.g. 2,3,4,5", field="values")
    try:
        return [int(item) for item in items]
    except ValueError as e:
        raise ConfigurationError(f"--values must be integers: {raw}", field="values") from e


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    if args.count < 1:
        raise ConfigurationError(f"--count must be >= 1, got {args.count}", field="count")
    seed = config.market.seed if args.seed is None else args.seed
    out = Path(args.out)
    recorder = RunRecorder(
        _sidecar_manifest(out),
        "simulate",
        config.market.model_dump(mode="json"),
        {"seed": seed},
    )
    recorder.start()
    sample = sample_valuations(config.market, args.count, seed=seed)
    write_profiles_csv(out, sample)
    recorder.add_output(out)
    recorder.finish()
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    config = _load_config(args)
    train_config = config.train
    if args.seed is not None:
        try:
            train_config = TrainConfig.model_validate({**train_config.model_dump(), "seed": args.seed})
        except ValidationError as e:
            raise ConfigurationError(f"--seed: {e.errors()[0]['msg']}", field="seed") from e
    out_dir = Path(args.out)
    recorder = RunRecorder(
        out_dir / MANIFEST_NAME,
        "train",
        {"market": config.market.model_dump(mode="json"), "train": train_config.model_dump(mode="json")},
        {"seed": train_config.seed, "holdout_seed": train_config.holdout_seed},
    )
    recorder.start()
    metrics_path = out_dir / "metrics.csv"
    model_path = out_dir / "model.json"
    try:
        with open(metrics_path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(METRICS_CSV_HEADER)

            def stream(metrics: BatchMetrics) -> None:
                writer.writerow(metrics.to_row())
                f.flush()

            result = AuctionTrainer(config.market, train_config, out_dir, on_metrics=stream).run()
    except AuctionLabError:
        recorder.finish(RunStatus.FAILED)
        raise
    save_model(result.model, model_path)
    recorder.add_output(model_path)
    recorder.add_output(metrics_path)
    recorder.finish()
    last = result.history[-1]
    logger.info("train_complete", revenue=last.revenue, ir_penalty=last.ir_penalty, ic_penalty=last.ic_penalty)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    model = load_model(args.model)
    if model.n_bidders != config.market.n_vsps or model.n_units != config.market.n_units:
        raise ConfigurationError(
            f"model is for N={model.n_bidders}, M={model.n_units} but the market has "
            f"N={config.market.n_vsps}, M={config.market.n_units}",
            field="market",
        )
    count = config.train.holdout_size if args.count is None else args.count
    if count < 1:
        raise ConfigurationError(f"--count must be >= 1, got {count}", field="count")
    seed = config.train.holdout_seed if args.seed is None else args.seed
    values = sample_valuations(config.market, count, seed=seed).values
    report = evaluate_model(model, values, config.train.misreport_search(), seed=seed)
    document = {"model": str(args.model), "seed": seed, **report.to_dict()}
    _emit(args, "evaluate", document, config, {"seed": seed})
    return EXIT_OK


def cmd_baseline(args: argparse.Namespace) -> int:
    config = _load_config(args)
    market = config.market
    mechanism = make_baseline(args.mechanism, market.n_vsps, market.n_units, reserve=args.reserve)
    if args.count < 1:
        raise ConfigurationError(f"--count must be >= 1, got {args.count}", field="count")
    seed = market.seed if args.seed is None else args.seed
    revenue = expected_revenue_mc(mechanism, market_sampler(market), args.count, seed=seed)
    document = {
        "mechanism": args.mechanism,
        "n_samples": args.count,
        "seed": seed,
        "revenue": revenue,
    }
    if args.mechanism == "myerson":
        document["reserve"] = args.reserve
    _emit(args, "baseline", document, config, {"seed": seed})
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args)
    values = _parse_values(args.values) if args.kind != "semcom" else []
    out_dir = Path(args.out)
    recorder = RunRecorder(
        out_dir / MANIFEST_NAME,
        f"sweep:{args.kind}",
        {"market": config.market.model_dump(mode="json"), "train": config.train.model_dump(mode="json"), "values": values},
        {"seed": config.train.seed, "holdout_seed": config.train.holdout_seed},
    )
    recorder.start()
    if args.kind == "vsps":
        rows = sweep_vsps(config.market, values, config.train, out_dir)
    elif args.kind == "apps":
        rows = sweep_apps(config.market, values, config.train, out_dir)
    else:
        rows = compare_semcom(config.market, config.train, out_dir).rows
    csv_path = out_dir / "sweep.csv"
    summary_path = out_dir / "summary.json"
    write_sweep_csv(csv_path, rows)
    write_sweep_summary(summary_path, args.kind, rows)
    recorder.add_output(csv_path)
    recorder.add_output(summary_path)
    recorder.finish()
    return EXIT_OK


def _emit(
    args: argparse.Namespace,
    command: str,
    document: dict[str, Any],
    config: ExperimentConfig,
    seeds: dict[str, int],
) -> None:
    """Print a JSON result; with --out also write it with a manifest beside it."""
    sys.stdout.write(json.dumps(document, indent=2, sort_keys=True) + "\n")
    if args.out is None:
        return
    out = Path(args.out)
    recorder = RunRecorder(_sidecar_manifest(out), command, config.model_dump(mode="json"), seeds)
    recorder.start()
    _write_json(out, document)
    recorder.add_output(out)
    recorder.finish()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="semcom-auction",
        description="Learned auctions for edge computing units (simulate | train | evaluate | baseline | sweep)",
    )
    p.add_argument("--log-level", choices=["debug", "info", "warning", "error"], default=None)
    sub = p.add_subparsers(dest="cmd", required=True)

    ps = sub.add_parser("simulate", help="Write a valuation dataset CSV")
    ps.add_argument("--config", type=str, default=None)
    ps.add_argument("--count", type=int, required=True)
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--out", type=str, required=True)
    ps.set_defaults(func=cmd_simulate)

    pt = sub.add_parser("train", help="Train a learned auction")
    pt.add_argument("--config", type=str, default=None)
    pt.add_argument("--train-config", type=str, default=None)
    pt.add_argument("--seed", type=int, default=None)
    pt.add_argument("--out", type=str, required=True)
    pt.set_defaults(func=cmd_train)

    pe = sub.add_parser("evaluate", help="Evaluate a saved model on held-out profiles")
    pe.add_argument("--model", type=str, required=True)
    pe.add_argument("--config", type=str, default=None)
    pe.add_argument("--train-config", type=str, default=None)
    pe.add_argument("--count", type=int, default=None)
    pe.add_argument("--seed", type=int, default=None)
    pe.add_argument("--out", type=str, default=None)
    pe.set_defaults(func=cmd_evaluate)

    pb = sub.add_parser("baseline", help="Monte Carlo revenue of a classical mechanism")
    pb.add_argument("--mechanism", type=str, required=True, help=f"one of: {', '.join(MECHANISM_NAMES)}")
    pb.add_argument("--config", type=str, default=None)
    pb.add_argument("--count", type=int, default=100_000)
    pb.add_argument("--seed", type=int, default=None)
    pb.add_argument("--reserve", type=float, default=0.5)
    pb.add_argument("--out", type=str, default=None)
    pb.set_defaults(func=cmd_baseline)

    pw = sub.add_parser("sweep", help="Revenue sweeps over #VSPs, #apps or SemCom on/off")
    pw.add_argument("--kind", choices=["vsps", "apps", "semcom"], required=True)
    pw.add_argument("--config", type=str, default=None)
    pw.add_argument("--train-config", type=str, default=None)
    pw.add_argument("--values", type=str, default=None)
    pw.add_argument("--out", type=str, required=True)
    pw.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return int(args.func(args))
    except (ConfigurationError, SerializationError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except (AuctionLabError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
