"""
Run manifests with a hash chain over outputs.

A manifest is written before any result so an interrupted run still records
its command, config and seeds. Each output then gets a SHA-256 digest, and
each record hashes the previous record, so editing or reordering outputs is
detectable. Timestamps live only in the manifest, never in result files.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any

import structlog

from src import __version__
from src.errors import SerializationError

logger = structlog.get_logger(__name__)

MANIFEST_NAME = "manifest.json"


class RunStatus(str, Enum):
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


def file_digest(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


@dataclass
class OutputRecord:
    """One output file, chained to the record before it."""
    path: str
    sha256: str
    previous_hash: str | None
    record_hash: str = field(init=False)

    def __post_init__(self) -> None:
        self.record_hash = self.calculate_hash()

    def calculate_hash(self) -> str:
        content = {"path": self.path, "sha256": self.sha256, "previous_hash": self.previous_hash}
        return hashlib.sha256(json.dumps(content, sort_keys=True).encode()).hexdigest()


@dataclass
class RunManifest:
    """What was run, with which config and seeds, and what it produced."""
    command: str
    config: dict[str, Any]
    seeds: dict[str, int]
    code_version: str = __version__
    started_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    finished_at: str | None = None
    status: RunStatus = RunStatus.RUNNING
    outputs: list[OutputRecord] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        document = asdict(self)
        document["status"] = self.status.value
        return document

    @classmethod
    def from_dict(cls, document: dict[str, Any]) -> RunManifest:
        try:
            outputs = []
            for item in document["outputs"]:
                record = OutputRecord(item["path"], item["sha256"], item["previous_hash"])
                # keep the stored hash so verification can compare it
                record.record_hash = item["record_hash"]
                outputs.append(record)
            return cls(
                command=document["command"],
                config=document["config"],
                seeds=document["seeds"],
                code_version=document["code_version"],
                started_at=document["started_at"],
                finished_at=document["finished_at"],
                status=RunStatus(document["status"]),
                outputs=outputs,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise SerializationError(f"Malformed manifest: {e}") from e


class RunRecorder:
    """
    Writes and updates the manifest of one run.

    Output paths are stored relative to the manifest's directory.
    """

    def __init__(
        self,
        manifest_path: str | Path,
        command: str,
        config: dict[str, Any],
        seeds: dict[str, int],
    ):
        self.manifest_path = Path(manifest_path)
        self.base_dir = self.manifest_path.parent
        self.manifest = RunManifest(command=command, config=config, seeds=seeds)

    def start(self) -> RunManifest:
        self.base_dir.mkdir(parents=True, exist_ok=True)
        self._write()
        logger.info("run_started", command=self.manifest.command, manifest=str(self.manifest_path))
        return self.manifest

    def add_output(self, path: str | Path) -> OutputRecord:
        previous = self.manifest.outputs[-1].record_hash if self.manifest.outputs else None
        record = OutputRecord(
            path=Path(path).resolve().relative_to(self.base_dir.resolve()).as_posix(),
            sha256=file_digest(path),
            previous_hash=previous,
        )
        self.manifest.outputs.append(record)
        self._write()
        return record

    def finish(self, status: RunStatus = RunStatus.COMPLETED) -> RunManifest:
        self.manifest.status = status
        self.manifest.finished_at = datetime.now(timezone.utc).isoformat()
        self._write()
        logger.info("run_finished", command=self.manifest.command, status=status.value)
        return self.manifest

    def _write(self) -> None:
        self.manifest_path.write_text(json.dumps(self.manifest.to_dict(), indent=2, sort_keys=True) + "\n")


def load_manifest(path: str | Path) -> RunManifest:
    try:
        document = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise SerializationError(f"Cannot read manifest: {e}", path=str(path)) from e
    return RunManifest.from_dict(document)


def verify_manifest(path: str | Path) -> tuple[bool, list[str]]:
    """Recompute every output digest and the record chain; returns (ok, problems)."""
    manifest_path = Path(path)
    if manifest_path.is_dir():
        manifest_path = manifest_path / MANIFEST_NAME
    manifest = load_manifest(manifest_path)
    problems: list[str] = []
    previous: str | None = None
    for record in manifest.outputs:
        target = manifest_path.parent / record.path
        if record.previous_hash != previous:
            problems.append(f"{record.path}: chain broken")
        if record.calculate_hash() != record.record_hash:
            problems.append(f"{record.path}: record hash mismatch")
        if not target.exists():
            problems.append(f"{record.path}: missing")
        elif file_digest(target) != record.sha256:
            problems.append(f"{record.path}: content changed")
        previous = record.record_hash
    return not problems, problems
