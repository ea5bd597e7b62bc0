"""
JSON documents for DenseNet parameters.

Floats are written with Python's shortest round-trip repr, so a
dump/load cycle reproduces every float64 bit for bit.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from src.errors import ConfigurationError, DimensionError, DomainError, SerializationError

from .dense import Activation, DenseNet

FORMAT_VERSION = 1


def net_to_dict(net: DenseNet) -> dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "layer_sizes": list(net.layer_sizes),
        "activations": {
            "hidden": net.hidden_activation.value,
            "output": net.output_activation.value,
        },
        "weights": [w.tolist() for w in net.weights],
        "biases": [b.tolist() for b in net.biases],
    }


def net_from_dict(document: dict[str, Any]) -> DenseNet:
    version = document.get("format_version")
    if version != FORMAT_VERSION:
        raise SerializationError(f"Unsupported network format_version: {version!r}")
    try:
        return DenseNet(
            layer_sizes=tuple(int(n) for n in document["layer_sizes"]),
            hidden_activation=Activation(document["activations"]["hidden"]),
            output_activation=Activation(document["activations"]["output"]),
            weights=tuple(np.array(w, dtype=np.float64) for w in document["weights"]),
            biases=tuple(np.array(b, dtype=np.float64) for b in document["biases"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise SerializationError(f"Malformed network document: {e}") from e
    except (ConfigurationError, DimensionError, DomainError) as e:
        raise SerializationError(f"Inconsistent network document: {e}") from e
