"""
Dense Network Core

Minimal feed-forward networks with exact reverse-mode gradients
(parameters and inputs) plus Adam/SGD optimizers.
"""

from .dense import Activation, DenseNet, Gradients, net_backprop, net_forward, net_init, zero_net
from .gradcheck import finite_diff_gradient
from .optim import AdamState, adam_init, adam_step, sgd_step
from .serialization import net_from_dict, net_to_dict

__all__ = [
    "Activation",
    "DenseNet",
    "Gradients",
    "net_init",
    "zero_net",
    "net_forward",
    "net_backprop",
    "AdamState",
    "adam_init",
    "adam_step",
    "sgd_step",
    "finite_diff_gradient",
    "net_to_dict",
    "net_from_dict",
]
