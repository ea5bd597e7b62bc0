"""
Learned auction model.

Two feed-forward networks read the bid vector. The allocation network emits,
for each of the M units, N+1 logits (the last one is a dummy "unallocated"
slot); a per-unit softmax turns them into winning probabilities. The payment
network emits one price per bidder.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from src.errors import ConfigurationError, DimensionError, DomainError, SerializationError
from src.nn import Activation, DenseNet, Gradients, net_backprop, net_forward, net_init, zero_net
from src.nn.serialization import net_from_dict, net_to_dict
from src.seeding import derive_seed

MODEL_FORMAT_VERSION = 1


class PaymentMode(str, Enum):
    """How payment-network outputs become prices."""
    PENALTY = "penalty"
    STRUCTURAL = "structural"


@dataclass(frozen=True, eq=False)
class AuctionModel:
    """Allocation and payment networks for N bidders and M identical units."""
    n_bidders: int
    n_units: int
    alloc_net: DenseNet
    pay_net: DenseNet
    payment_mode: PaymentMode = PaymentMode.PENALTY

    def __post_init__(self) -> None:
        n, m = self.n_bidders, self.n_units
        if self.alloc_net.input_width != n or self.alloc_net.output_width != (n + 1) * m:
            raise DimensionError(
                "Allocation network widths do not match (N, M)",
                expected=(n, (n + 1) * m),
                actual=(self.alloc_net.input_width, self.alloc_net.output_width),
            )
        if self.pay_net.input_width != n or self.pay_net.output_width != n:
            raise DimensionError(
                "Payment network widths do not match N",
                expected=(n, n),
                actual=(self.pay_net.input_width, self.pay_net.output_width),
            )
        expected_output = (
            Activation.SOFTPLUS if self.payment_mode is PaymentMode.PENALTY else Activation.SIGMOID
        )
        if self.pay_net.output_activation is not expected_output:
            raise ConfigurationError(
                f"{self.payment_mode.value} mode needs a {expected_output.value} payment output",
                field="payment_mode",
            )

    def with_networks(self, alloc_net: DenseNet, pay_net: DenseNet) -> AuctionModel:
        return AuctionModel(self.n_bidders, self.n_units, alloc_net, pay_net, self.payment_mode)

    def outcome(self, bids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Allocation (B, N, M) and payments (B, N) for a batch of bid vectors."""
        forward = mechanism_forward(self, bids)
        return forward.alloc, forward.payments

    def utility_bid_gradient(
        self,
        values: np.ndarray,
        bids: np.ndarray,
        bidder: int,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Utility of `bidder` at `bids` given true `values`, and its derivative in the own bid."""
        forward = mechanism_forward(self, bids)
        utility = values[:, bidder] * forward.alloc[:, bidder, :].sum(axis=1) - forward.payments[:, bidder]
        d_alloc = np.zeros_like(forward.alloc)
        d_alloc[:, bidder, :] = values[:, bidder][:, None]
        d_pay = np.zeros_like(forward.payments)
        d_pay[:, bidder] = -1.0
        _, _, d_bids = mechanism_backward(self, forward, d_alloc, d_pay)
        return utility, d_bids[:, bidder]


def build_model(
    n_bidders: int,
    n_units: int,
    hidden_layers: list[int] | tuple[int, ...] = (100, 100),
    hidden_activation: Activation | str = Activation.TANH,
    payment_mode: PaymentMode | str = PaymentMode.PENALTY,
    seed: int = 0,
) -> AuctionModel:
    if n_bidders < 1 or n_units < 1:
        raise ConfigurationError("n_bidders and n_units must be >= 1", field="n_bidders")
    mode = PaymentMode(payment_mode)
    hidden = [int(h) for h in hidden_layers]
    pay_output = Activation.SOFTPLUS if mode is PaymentMode.PENALTY else Activation.SIGMOID
    alloc_net = net_init(
        [n_bidders, *hidden, (n_bidders + 1) * n_units],
        hidden_activation,
        Activation.LINEAR,
        seed=derive_seed(seed, 1),
    )
    pay_net = net_init(
        [n_bidders, *hidden, n_bidders],
        hidden_activation,
        pay_output,
        seed=derive_seed(seed, 2),
    )
    return AuctionModel(n_bidders, n_units, alloc_net, pay_net, mode)


def zero_model(
    n_bidders: int,
    n_units: int,
    hidden_layers: list[int] | tuple[int, ...] = (4,),
    payment_mode: PaymentMode | str = PaymentMode.PENALTY,
) -> AuctionModel:
    """A model whose networks are identically zero: uniform allocation, constant prices."""
    mode = PaymentMode(payment_mode)
    pay_output = Activation.SOFTPLUS if mode is PaymentMode.PENALTY else Activation.SIGMOID
    return AuctionModel(
        n_bidders,
        n_units,
        zero_net([n_bidders, *hidden_layers, (n_bidders + 1) * n_units], Activation.TANH, Activation.LINEAR),
        zero_net([n_bidders, *hidden_layers, n_bidders], Activation.TANH, pay_output),
        mode,
    )


@dataclass(frozen=True, eq=False)
class MechanismForward:
    """Intermediate values of one batched mechanism evaluation."""
    bids: np.ndarray
    probs: np.ndarray
    alloc: np.ndarray
    pay_out: np.ndarray
    payments: np.ndarray


def _bid_batch(model: AuctionModel, bids: np.ndarray) -> np.ndarray:
    batch = np.asarray(bids, dtype=np.float64)
    batch = batch[None, :] if batch.ndim == 1 else batch
    if batch.ndim != 2 or batch.shape[1] != model.n_bidders:
        raise DimensionError("Bid vector width must equal n_bidders", expected=model.n_bidders, actual=batch.shape)
    if not np.all(np.isfinite(batch)):
        raise DomainError("Bids must be finite")
    return batch


def _unit_softmax(model: AuctionModel, logits: np.ndarray) -> np.ndarray:
    per_unit = logits.reshape(logits.shape[0], model.n_units, model.n_bidders + 1)
    shifted = per_unit - per_unit.max(axis=2, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=2, keepdims=True)


def mechanism_forward(model: AuctionModel, bids: np.ndarray) -> MechanismForward:
    batch = _bid_batch(model, bids)
    probs = _unit_softmax(model, net_forward(model.alloc_net, batch))
    alloc = probs[:, :, : model.n_bidders].transpose(0, 2, 1)
    pay_out = net_forward(model.pay_net, batch)
    if model.payment_mode is PaymentMode.PENALTY:
        payments = pay_out
    else:
        payments = pay_out * batch * alloc.sum(axis=2)
    return MechanismForward(batch, probs, alloc, pay_out, payments)


def mechanism_backward(
    model: AuctionModel,
    forward: MechanismForward,
    d_alloc: np.ndarray,
    d_pay: np.ndarray,
) -> tuple[Gradients, Gradients, np.ndarray]:
    """
    Backpropagate d(objective)/d(alloc) of shape (B, N, M) and
    d(objective)/d(payments) of shape (B, N) into both networks and the bids.
    """
    batch = forward.bids
    d_alloc = np.array(d_alloc, dtype=np.float64)
    d_bids_direct = np.zeros_like(batch)
    if model.payment_mode is PaymentMode.PENALTY:
        d_pay_out = d_pay
    else:
        won = forward.alloc.sum(axis=2)
        d_pay_out = d_pay * batch * won
        d_alloc += (d_pay * forward.pay_out * batch)[:, :, None]
        d_bids_direct = d_pay * forward.pay_out * won

    # softmax over the N+1 slots of each unit; the dummy slot has zero upstream
    g = np.zeros_like(forward.probs)
    g[:, :, : model.n_bidders] = d_alloc.transpose(0, 2, 1)
    p = forward.probs
    d_logits = p * (g - (p * g).sum(axis=2, keepdims=True))
    d_logits = d_logits.reshape(batch.shape[0], -1)

    alloc_grads = net_backprop(model.alloc_net, batch, d_logits)
    pay_grads = net_backprop(model.pay_net, batch, d_pay_out)
    assert alloc_grads.input_gradient is not None and pay_grads.input_gradient is not None
    d_bids = alloc_grads.input_gradient + pay_grads.input_gradient + d_bids_direct
    return alloc_grads, pay_grads, d_bids


def allocation_probs(model: AuctionModel, bids: np.ndarray) -> np.ndarray:
    """Winning probabilities z[n][m]; a single bid vector gives an (N, M) matrix."""
    alloc = mechanism_forward(model, bids).alloc
    return alloc[0] if np.ndim(bids) == 1 else alloc


def payments(model: AuctionModel, bids: np.ndarray, alloc: np.ndarray | None = None) -> np.ndarray:
    """Prices charged for the given bids; alloc defaults to the model's own allocation."""
    batch = _bid_batch(model, bids)
    pay_out = net_forward(model.pay_net, batch)
    if model.payment_mode is PaymentMode.PENALTY:
        result = pay_out
    else:
        if alloc is None:
            alloc = mechanism_forward(model, batch).alloc
        alloc_batch = alloc[None] if np.ndim(alloc) == 2 else alloc
        result = pay_out * batch * alloc_batch.sum(axis=2)
    return result[0] if np.ndim(bids) == 1 else result


def model_to_dict(model: AuctionModel) -> dict[str, Any]:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "n_bidders": model.n_bidders,
        "n_units": model.n_units,
        "payment_mode": model.payment_mode.value,
        "alloc_net": net_to_dict(model.alloc_net),
        "pay_net": net_to_dict(model.pay_net),
    }


def model_from_dict(document: dict[str, Any]) -> AuctionModel:
    if document.get("format_version") != MODEL_FORMAT_VERSION:
        raise SerializationError(f"Unsupported model format_version: {document.get('format_version')!r}")
    try:
        return AuctionModel(
            n_bidders=int(document["n_bidders"]),
            n_units=int(document["n_units"]),
            alloc_net=net_from_dict(document["alloc_net"]),
            pay_net=net_from_dict(document["pay_net"]),
            payment_mode=PaymentMode(document["payment_mode"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise SerializationError(f"Malformed model document: {e}") from e
    except (ConfigurationError, DimensionError) as e:
        raise SerializationError(f"Inconsistent model document: {e}") from e


def save_model(model: AuctionModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), sort_keys=True) + "\n")


def load_model(path: str | Path) -> AuctionModel:
    try:
        document = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise SerializationError(f"Cannot read model: {e}", path=str(path)) from e
    return model_from_dict(document)
