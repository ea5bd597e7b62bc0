"""
Run Bookkeeping

Experiment config files and hash-chained run manifests.
"""

from .config import ExperimentConfig, load_experiment_config
from .manifest import (
    MANIFEST_NAME,
    OutputRecord,
    RunManifest,
    RunRecorder,
    RunStatus,
    file_digest,
    load_manifest,
    verify_manifest,
)

__all__ = [
    "ExperimentConfig",
    "load_experiment_config",
    "MANIFEST_NAME",
    "OutputRecord",
    "RunManifest",
    "RunRecorder",
    "RunStatus",
    "file_digest",
    "load_manifest",
    "verify_manifest",
]
