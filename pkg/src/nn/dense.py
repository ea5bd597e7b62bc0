"""
Dense feed-forward networks.

Forward and backward passes accept a single input vector of length
layer_sizes[0] or a batch of shape (batch, layer_sizes[0]). For batches,
parameter gradients are summed over rows and the input gradient is per row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from src.errors import ConfigurationError, DimensionError, DomainError

FloatArray = np.ndarray


class Activation(str, Enum):
    """Activation tags usable in a DenseNet."""
    TANH = "tanh"
    RELU = "relu"
    LINEAR = "linear"
    SIGMOID = "sigmoid"
    SOFTPLUS = "softplus"


HIDDEN_ACTIVATIONS = {Activation.TANH, Activation.RELU}
OUTPUT_ACTIVATIONS = {Activation.LINEAR, Activation.SIGMOID, Activation.SOFTPLUS, Activation.TANH}


def sigmoid(x: FloatArray) -> FloatArray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def softplus(x: FloatArray) -> FloatArray:
    return np.logaddexp(0.0, x)


def _activate(kind: Activation, z: FloatArray) -> FloatArray:
    if kind is Activation.TANH:
        return np.tanh(z)
    if kind is Activation.RELU:
        return np.maximum(z, 0.0)
    if kind is Activation.SIGMOID:
        return sigmoid(z)
    if kind is Activation.SOFTPLUS:
        return softplus(z)
    return z


def _activation_derivative(kind: Activation, z: FloatArray, a: FloatArray) -> FloatArray:
    """Derivative of the activation at pre-activation z (a is the activated value)."""
    if kind is Activation.TANH:
        return 1.0 - a * a
    if kind is Activation.RELU:
        return (z > 0.0).astype(np.float64)
    if kind is Activation.SIGMOID:
        return a * (1.0 - a)
    if kind is Activation.SOFTPLUS:
        return sigmoid(z)
    return np.ones_like(z)


@dataclass(frozen=True, eq=False)
class DenseNet:
    """Feed-forward network. Weight k has shape (layer_sizes[k+1], layer_sizes[k])."""
    layer_sizes: tuple[int, ...]
    hidden_activation: Activation
    output_activation: Activation
    weights: tuple[FloatArray, ...]
    biases: tuple[FloatArray, ...]

    def __post_init__(self) -> None:
        _check_layer_sizes(self.layer_sizes)
        if len(self.weights) != len(self.layer_sizes) - 1 or len(self.biases) != len(self.weights):
            raise DimensionError(
                "Parameter count does not match layer_sizes",
                expected=len(self.layer_sizes) - 1,
                actual=len(self.weights),
            )
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            shape = (self.layer_sizes[k + 1], self.layer_sizes[k])
            if w.shape != shape or b.shape != (shape[0],):
                raise DimensionError(
                    f"Layer {k} parameters have wrong shape",
                    expected=shape,
                    actual=(w.shape, b.shape),
                )
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise DomainError(f"Layer {k} contains non-finite parameters")

    @property
    def input_width(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_width(self) -> int:
        return self.layer_sizes[-1]

    def parameters(self) -> list[FloatArray]:
        """Parameters in optimizer order: W0, b0, W1, b1, ..."""
        params: list[FloatArray] = []
        for w, b in zip(self.weights, self.biases):
            params.extend([w, b])
        return params

    def with_parameters(self, params: list[FloatArray]) -> DenseNet:
        if len(params) != 2 * len(self.weights):
            raise DimensionError(
                "Parameter list length mismatch",
                expected=2 * len(self.weights),
                actual=len(params),
            )
        return DenseNet(
            layer_sizes=self.layer_sizes,
            hidden_activation=self.hidden_activation,
            output_activation=self.output_activation,
            weights=tuple(np.array(p, dtype=np.float64) for p in params[0::2]),
            biases=tuple(np.array(p, dtype=np.float64) for p in params[1::2]),
        )

    def flat_parameters(self) -> FloatArray:
        return np.concatenate([p.ravel() for p in self.parameters()])

    def with_flat_parameters(self, flat: FloatArray) -> DenseNet:
        params: list[FloatArray] = []
        offset = 0
        for p in self.parameters():
            params.append(np.asarray(flat[offset:offset + p.size], dtype=np.float64).reshape(p.shape))
            offset += p.size
        if offset != flat.size:
            raise DimensionError("Flat parameter vector has wrong length", expected=offset, actual=flat.size)
        return self.with_parameters(params)


@dataclass
class Gradients:
    """Gradients shape-congruent with a DenseNet, plus an optional input gradient."""
    weights: list[FloatArray]
    biases: list[FloatArray]
    input_gradient: FloatArray | None = None

    @classmethod
    def zeros_like(cls, net: DenseNet) -> Gradients:
        return cls(
            weights=[np.zeros_like(w) for w in net.weights],
            biases=[np.zeros_like(b) for b in net.biases],
        )

    def parameters(self) -> list[FloatArray]:
        params: list[FloatArray] = []
        for w, b in zip(self.weights, self.biases):
            params.extend([w, b])
        return params

    def flat(self) -> FloatArray:
        return np.concatenate([p.ravel() for p in self.parameters()])

    def accumulate(self, other: Gradients) -> Gradients:
        """Sum parameter gradients; the input gradient is not carried over."""
        return Gradients(
            weights=[a + b for a, b in zip(self.weights, other.weights)],
            biases=[a + b for a, b in zip(self.biases, other.biases)],
        )


@dataclass
class _ForwardCache:
    activations: list[FloatArray] = field(default_factory=list)
    pre_activations: list[FloatArray] = field(default_factory=list)


def _check_layer_sizes(layer_sizes: tuple[int, ...] | list[int]) -> None:
    if len(layer_sizes) < 2:
        raise ConfigurationError("layer_sizes needs at least an input and an output width", field="layer_sizes")
    if any(int(n) < 1 for n in layer_sizes):
        raise ConfigurationError("layer_sizes entries must be >= 1", field="layer_sizes")


def net_init(
    layer_sizes: list[int] | tuple[int, ...],
    hidden_activation: Activation | str = Activation.TANH,
    output_activation: Activation | str = Activation.LINEAR,
    seed: int = 0,
) -> DenseNet:
    """
    Initialize a network with scaled-uniform weights and zero biases.

    Weights of layer k are drawn from U(-bound, bound) with
    bound = sqrt(6 / (fan_in + fan_out)). The same seed yields bit-identical
    parameters.
    """
    _check_layer_sizes(layer_sizes)
    sizes = tuple(int(n) for n in layer_sizes)
    hidden = Activation(hidden_activation)
    output = Activation(output_activation)
    if hidden not in HIDDEN_ACTIVATIONS:
        raise ConfigurationError(f"Unsupported hidden activation: {hidden.value}", field="hidden_activation")
    if output not in OUTPUT_ACTIVATIONS:
        raise ConfigurationError(f"Unsupported output activation: {output.value}", field="output_activation")

    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return DenseNet(sizes, hidden, output, tuple(weights), tuple(biases))


def zero_net(
    layer_sizes: list[int] | tuple[int, ...],
    hidden_activation: Activation | str = Activation.TANH,
    output_activation: Activation | str = Activation.LINEAR,
) -> DenseNet:
    """Network with every weight and bias equal to zero."""
    net = net_init(layer_sizes, hidden_activation, output_activation, seed=0)
    return net.with_parameters([np.zeros_like(p) for p in net.parameters()])


def _as_batch(net: DenseNet, x: FloatArray) -> tuple[FloatArray, bool]:
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    batch = arr[None, :] if single else arr
    if batch.ndim != 2 or batch.shape[1] != net.input_width:
        raise DimensionError(
            "Input width does not match the network",
            expected=net.input_width,
            actual=arr.shape,
        )
    if not np.all(np.isfinite(batch)):
        raise DomainError("Network input contains non-finite values")
    return batch, single


def _forward(net: DenseNet, batch: FloatArray) -> _ForwardCache:
    cache = _ForwardCache(activations=[batch])
    a = batch
    last = len(net.weights) - 1
    for k, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = a @ w.T + b
        a = _activate(net.output_activation if k == last else net.hidden_activation, z)
        cache.pre_activations.append(z)
        cache.activations.append(a)
    return cache


def net_forward(net: DenseNet, x: FloatArray) -> FloatArray:
    """Evaluate the network; pure in (net, x)."""
    batch, single = _as_batch(net, x)
    out = _forward(net, batch).activations[-1]
    return out[0] if single else out


def net_backprop(net: DenseNet, x: FloatArray, upstream: FloatArray) -> Gradients:
    """
    Exact gradients of sum(upstream * output) with respect to every parameter
    and to the input.
    """
    batch, single = _as_batch(net, x)
    up = np.asarray(upstream, dtype=np.float64)
    up = up[None, :] if up.ndim == 1 else up
    if up.shape != (batch.shape[0], net.output_width):
        raise DimensionError(
            "Upstream gradient does not match the network output",
            expected=(batch.shape[0], net.output_width),
            actual=up.shape,
        )

    cache = _forward(net, batch)
    n_layers = len(net.weights)
    grad_w: list[FloatArray] = [np.empty(0)] * n_layers
    grad_b: list[FloatArray] = [np.empty(0)] * n_layers

    delta = up
    for k in range(n_layers - 1, -1, -1):
        kind = net.output_activation if k == n_layers - 1 else net.hidden_activation
        z = cache.pre_activations[k]
        delta = delta * _activation_derivative(kind, z, cache.activations[k + 1])
        grad_w[k] = delta.T @ cache.activations[k]
        grad_b[k] = delta.sum(axis=0)
        delta = delta @ net.weights[k]

    return Gradients(
        weights=grad_w,
        biases=grad_b,
        input_gradient=delta[0] if single else delta,
    )
