"""
Evaluation Harness

Grid-search regret oracle, held-out evaluation reports and the revenue
sweeps over VSP count, application count and SemCom on/off.
"""

from .oracle import exact_regret_grid, exact_regret_grid_batch, misreport_grid
from .report import AuctionEvaluator, EvalReport, evaluate_model, vcg_revenue
from .sweeps import (
    SWEEP_CSV_HEADER,
    SemcomComparison,
    SweepRow,
    compare_semcom,
    run_cell,
    sweep_apps,
    sweep_summary,
    sweep_vsps,
    write_sweep_csv,
    write_sweep_summary,
)

__all__ = [
    "exact_regret_grid",
    "exact_regret_grid_batch",
    "misreport_grid",
    "EvalReport",
    "AuctionEvaluator",
    "evaluate_model",
    "vcg_revenue",
    "SweepRow",
    "SemcomComparison",
    "SWEEP_CSV_HEADER",
    "run_cell",
    "sweep_vsps",
    "sweep_apps",
    "compare_semcom",
    "write_sweep_csv",
    "write_sweep_summary",
    "sweep_summary",
]
