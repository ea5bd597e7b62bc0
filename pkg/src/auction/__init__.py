"""
Learned Auction

Allocation and payment networks, auction metrics, regret estimation by
misreport ascent, the augmented Lagrangian and the training loop.
"""

from .lagrangian import LagrangeState, LossResult, augmented_lagrangian, lagrange_update, loss
from .metrics import METRICS_CSV_HEADER, BatchMetrics, ir_penalty, revenue, utilities, utility
from .model import (
    AuctionModel,
    MechanismForward,
    PaymentMode,
    allocation_probs,
    build_model,
    load_model,
    mechanism_backward,
    mechanism_forward,
    model_from_dict,
    model_to_dict,
    payments,
    save_model,
    zero_model,
)
from .regret import (
    Mechanism,
    MisreportSearch,
    RegretEstimate,
    ascend_misreports,
    estimate_regret,
    estimate_regret_batch,
)
from .training import AuctionTrainer, TrainConfig, TrainingGuard, TrainResult, train

__all__ = [
    "AuctionModel",
    "PaymentMode",
    "MechanismForward",
    "build_model",
    "zero_model",
    "mechanism_forward",
    "mechanism_backward",
    "allocation_probs",
    "payments",
    "model_to_dict",
    "model_from_dict",
    "save_model",
    "load_model",
    "BatchMetrics",
    "METRICS_CSV_HEADER",
    "utility",
    "utilities",
    "revenue",
    "ir_penalty",
    "Mechanism",
    "MisreportSearch",
    "RegretEstimate",
    "ascend_misreports",
    "estimate_regret",
    "estimate_regret_batch",
    "LagrangeState",
    "LossResult",
    "augmented_lagrangian",
    "lagrange_update",
    "loss",
    "TrainConfig",
    "TrainingGuard",
    "TrainResult",
    "AuctionTrainer",
    "train",
]
