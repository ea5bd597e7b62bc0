"""
Experiment configuration files.

One JSON document holds a "market" section and a "train" section; a separate
train file, when given, replaces the "train" section.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError

from src.auction.training import TrainConfig
from src.errors import ConfigurationError
from src.market import MarketConfig


class ExperimentConfig(BaseModel):
    market: MarketConfig = Field(default_factory=MarketConfig.case_study)
    train: TrainConfig = Field(default_factory=TrainConfig)


def _read_json(path: str | Path) -> dict[str, Any]:
    try:
        document = json.loads(Path(path).read_text())
    except OSError as e:
        raise ConfigurationError(f"Cannot read config {path}: {e.strerror or e}", field=str(path)) from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Config {path} is not valid JSON: {e}", field=str(path)) from e
    if not isinstance(document, dict):
        raise ConfigurationError(f"Config {path} must be a JSON object", field=str(path))
    return document


def _validation_error(path: str | Path, error: ValidationError) -> ConfigurationError:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first["loc"]) or "<root>"
    return ConfigurationError(f"{path}: {location}: {first['msg']}", field=location)


def load_experiment_config(
    path: str | Path | None,
    train_path: str | Path | None = None,
) -> ExperimentConfig:
    """Read an experiment config; with no path the case-study defaults are used."""
    document = _read_json(path) if path is not None else {}
    if train_path is not None:
        document = {**document, "train": _read_json(train_path)}
    try:
        return ExperimentConfig.model_validate(document)
    except ValidationError as e:
        source = " + ".join(str(p) for p in (path, train_path) if p is not None) or "<defaults>"
        raise _validation_error(source, e) from e
