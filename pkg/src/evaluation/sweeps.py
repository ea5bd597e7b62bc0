"""
Experiment sweeps: revenue against the number of VSPs, the number of
applications per VSP, and SemCom on/off.

Each cell trains a learned auction on its market, then evaluates it and VCG
on a held-out set drawn with the holdout seed. Cells are independent and
merged in swept-value order.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

import numpy as np
import structlog

from src.auction.training import TrainConfig, train
from src.baselines import make_baseline
from src.errors import ConfigurationError
from src.market import MarketConfig, sample_valuations

from .report import AuctionEvaluator, EvalReport

logger = structlog.get_logger(__name__)

SWEEP_CSV_HEADER = ["param", "mechanism", "revenue", "ir_penalty", "max_regret"]


@dataclass(frozen=True)
class SweepRow:
    """One (swept value, mechanism) result."""
    param: str
    param_value: int | str
    mechanism: str
    revenue: float
    ir_penalty: float
    max_regret: float

    def to_row(self) -> list[str]:
        return [
            str(self.param_value),
            self.mechanism,
            f"{self.revenue:.9g}",
            f"{self.ir_penalty:.9g}",
            f"{self.max_regret:.9g}",
        ]


@dataclass(frozen=True, eq=False)
class CellResult:
    learned: EvalReport
    vcg: EvalReport
    holdout: np.ndarray


@dataclass(frozen=True, eq=False)
class SemcomComparison:
    """Paired SemCom on/off results; holdout valuations share every random draw."""
    semcom: EvalReport
    raw: EvalReport
    values_semcom: np.ndarray
    values_raw: np.ndarray
    rows: list[SweepRow]


def _evaluator(train_config: TrainConfig) -> AuctionEvaluator:
    return AuctionEvaluator(
        search=train_config.misreport_search(),
        seed=train_config.seed_plan().eval_seed,
    )


def run_cell(
    market: MarketConfig,
    train_config: TrainConfig,
    dump_dir: str | Path | None = None,
) -> CellResult:
    """Train on the market, then evaluate the learned auction and VCG on held-out profiles."""
    model, _ = train(market, train_config, dump_dir)
    holdout = sample_valuations(market, train_config.holdout_size, seed=train_config.holdout_seed).values
    evaluator = _evaluator(train_config)
    learned = evaluator.evaluate(model, holdout)
    vcg = evaluator.evaluate(make_baseline("vcg", market.n_vsps, market.n_units), holdout)
    learned = EvalReport(**{**learned.to_dict(), "vcg_revenue": vcg.mean_revenue})
    return CellResult(learned=learned, vcg=vcg, holdout=holdout)


def _rows(param: str, value: int | str, cell: CellResult) -> list[SweepRow]:
    return [
        SweepRow(param, value, name, report.mean_revenue, report.mean_ir_penalty, report.max_regret)
        for name, report in (("learned", cell.learned), ("vcg", cell.vcg))
    ]


def _check_values(values: list[int], minimum: int, name: str) -> None:
    if not values:
        raise ConfigurationError(f"{name} sweep needs at least one value", field="values")
    if any(v < minimum for v in values):
        raise ConfigurationError(f"{name} values must be >= {minimum}", field="values")


def sweep_vsps(
    base: MarketConfig,
    n_vsps: list[int],
    train_config: TrainConfig,
    dump_dir: str | Path | None = None,
) -> list[SweepRow]:
    _check_values(n_vsps, 2, "n_vsps")
    rows: list[SweepRow] = []
    for n in sorted(n_vsps):
        logger.info("sweep_cell_started", param="n_vsps", value=n)
        rows.extend(_rows("n_vsps", n, run_cell(base.with_vsp_count(n), train_config, dump_dir)))
    return rows


def sweep_apps(
    base: MarketConfig,
    n_apps: list[int],
    train_config: TrainConfig,
    dump_dir: str | Path | None = None,
) -> list[SweepRow]:
    _check_values(n_apps, 1, "n_apps")
    rows: list[SweepRow] = []
    for a in sorted(n_apps):
        logger.info("sweep_cell_started", param="n_apps", value=a)
        rows.extend(_rows("n_apps", a, run_cell(base.with_app_count(a), train_config, dump_dir)))
    return rows


def compare_semcom(
    base: MarketConfig,
    train_config: TrainConfig,
    dump_dir: str | Path | None = None,
) -> SemcomComparison:
    on = run_cell(base.with_semcom(True), train_config, dump_dir)
    off = run_cell(base.with_semcom(False), train_config, dump_dir)
    logger.info(
        "semcom_compared",
        revenue_semcom=on.learned.mean_revenue,
        revenue_raw=off.learned.mean_revenue,
    )
    return SemcomComparison(
        semcom=on.learned,
        raw=off.learned,
        values_semcom=on.holdout,
        values_raw=off.holdout,
        rows=_rows("semcom", "on", on) + _rows("semcom", "off", off),
    )


def write_sweep_csv(path: str | Path, rows: list[SweepRow]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(SWEEP_CSV_HEADER)
        for row in rows:
            writer.writerow(row.to_row())


def sweep_summary(kind: str, rows: list[SweepRow]) -> dict[str, Any]:
    """JSON-ready summary: rows plus the learned/VCG revenue ratio per swept value."""
    by_value: dict[str, dict[str, float]] = {}
    for row in rows:
        by_value.setdefault(str(row.param_value), {})[row.mechanism] = row.revenue
    ratios = {
        value: revenues["learned"] / revenues["vcg"]
        for value, revenues in by_value.items()
        if revenues.get("vcg", 0.0) > 0.0 and "learned" in revenues
    }
    return {"kind": kind, "rows": [asdict(r) for r in rows], "learned_over_vcg": ratios}


def write_sweep_summary(path: str | Path, kind: str, rows: list[SweepRow]) -> None:
    Path(path).write_text(json.dumps(sweep_summary(kind, rows), indent=2, sort_keys=True) + "\n")
