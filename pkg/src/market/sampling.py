"""
Valuation datasets.

Every random quantity comes from its own generator keyed by
(seed, stream, vsp[, app]). Adding VSPs or applications therefore extends the
draws of a smaller scenario instead of reshuffling them, which keeps sweeps
and SemCom on/off comparisons paired.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import structlog

from src.errors import ConfigurationError, DomainError, SerializationError
from src.seeding import Stream as _Stream
from src.seeding import derive_rng

from .config import MarketConfig, ValuationMode
from .latency import (
    LatencyBreakdown,
    local_compute_time,
    sense_comm_time,
    uav_payload_bits,
    valuation_from_latency,
)

logger = structlog.get_logger(__name__)

CSV_HEADER = ["profile_id", "vsp_id", "valuation", "t_total_s", "t_req_s"]


@dataclass(frozen=True, eq=False)
class ValuationProfile:
    """One auction instance: a valuation in [0, 1] per VSP."""
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or not np.all(np.isfinite(values)):
            raise DomainError("Valuation profile must be a finite vector")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise DomainError("Valuations must lie in [0, 1]")
        object.__setattr__(self, "values", values)

    @property
    def n_bidders(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True, eq=False)
class ValuationSample:
    """A dataset as arrays of shape (count, N); latency columns are NaN in uniform mode."""
    values: np.ndarray
    t_total_s: np.ndarray
    t_req_s: np.ndarray

    @property
    def count(self) -> int:
        return int(self.values.shape[0])

    def profiles(self) -> list[ValuationProfile]:
        return [ValuationProfile(row) for row in self.values]


def sample_valuations(config: MarketConfig, count: int, seed: int | None = None) -> ValuationSample:
    """Draw count profiles; identical (config, count, seed) gives an identical sample."""
    if count < 1:
        raise ConfigurationError(f"count must be >= 1, got {count}", field="count")
    seed = config.seed if seed is None else seed
    n = config.n_vsps
    values = np.empty((count, n))
    t_total = np.full((count, n), np.nan)
    t_req = np.full((count, n), np.nan)

    if config.valuation_mode is ValuationMode.UNIFORM:
        for i in range(n):
            values[:, i] = derive_rng(seed, _Stream.UNIFORM, i).uniform(0.0, 1.0, size=count)
        return ValuationSample(values, t_total, t_req)

    cpu_low, cpu_high = config.cpu_hz_range
    req_low, req_high = config.latency_req_range_s
    for i, vsp in enumerate(config.vsps):
        # payloads do not depend on the sampled CPU or requirements
        bits = float(sum(uav_payload_bits(uav, config) for uav in vsp.uavs))
        sense_comm = sense_comm_time(vsp, config)
        cpu = derive_rng(seed, _Stream.CPU, i).uniform(cpu_low, cpu_high, size=count)
        if config.cycles_per_bit_range is not None:
            z_low, z_high = config.cycles_per_bit_range
            cycles = derive_rng(seed, _Stream.CYCLES, i).uniform(z_low, z_high, size=count)
        else:
            cycles = np.full(count, vsp.cycles_per_bit)
        requirements = np.stack(
            [
                derive_rng(seed, _Stream.REQUIREMENT, i, a).uniform(req_low, req_high, size=count)
                for a in range(vsp.n_apps)
            ],
            axis=1,
        )
        t_total[:, i] = sense_comm + local_compute_time(bits, cpu, cycles)
        t_req[:, i] = requirements.min(axis=1)
        values[:, i] = valuation_from_latency(t_total[:, i], t_req[:, i], config.valuation_scale_s)

    logger.debug("valuations_sampled", count=count, n_vsps=n, seed=seed, mean=float(values.mean()))
    return ValuationSample(values, t_total, t_req)


def sample_profiles(config: MarketConfig, count: int, seed: int | None = None) -> list[ValuationProfile]:
    return sample_valuations(config, count, seed).profiles()


def write_profiles_csv(path: str | Path, sample: ValuationSample) -> None:
    """Write one row per (profile, VSP) with 9 significant digits."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for p in range(sample.count):
            for n in range(sample.values.shape[1]):
                writer.writerow([
                    p,
                    n,
                    f"{sample.values[p, n]:.9g}",
                    f"{sample.t_total_s[p, n]:.9g}",
                    f"{sample.t_req_s[p, n]:.9g}",
                ])


def read_profiles_csv(path: str | Path) -> ValuationSample:
    try:
        with open(path, newline="") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames != CSV_HEADER:
                raise SerializationError(f"Unexpected dataset header: {reader.fieldnames}", path=str(path))
            rows = [(int(r["profile_id"]), int(r["vsp_id"]), float(r["valuation"]),
                     float(r["t_total_s"]), float(r["t_req_s"])) for r in reader]
    except (OSError, ValueError, KeyError) as e:
        raise SerializationError(f"Cannot read dataset: {e}", path=str(path)) from e
    if not rows:
        raise SerializationError("Dataset is empty", path=str(path))
    count = max(r[0] for r in rows) + 1
    n = max(r[1] for r in rows) + 1
    if min(min(r[0], r[1]) for r in rows) < 0:
        raise SerializationError("Dataset has a negative profile_id or vsp_id", path=str(path))
    columns = np.full((3, count, n), np.nan)
    seen = np.zeros((count, n), dtype=bool)
    for p, i, v, total, req in rows:
        if seen[p, i]:
            raise SerializationError(f"Duplicate row for profile {p}, vsp {i}", path=str(path))
        seen[p, i] = True
        columns[:, p, i] = (v, total, req)
    if not seen.all():
        p, i = (int(k) for k in np.argwhere(~seen)[0])
        raise SerializationError(f"Missing row for profile {p}, vsp {i}", path=str(path))
    return ValuationSample(columns[0], columns[1], columns[2])


def latency_table(config: MarketConfig, sample: ValuationSample, profile: int) -> list[LatencyBreakdown]:
    """Per-VSP latency components behind one sampled profile (latency mode only)."""
    if config.valuation_mode is not ValuationMode.LATENCY:
        raise ConfigurationError("latency_table needs valuation_mode 'latency'", field="valuation_mode")
    if not 0 <= profile < sample.count:
        raise ConfigurationError(f"profile {profile} outside [0, {sample.count})", field="profile")
    table = []
    for i, vsp in enumerate(config.vsps):
        bits = float(sum(uav_payload_bits(uav, config) for uav in vsp.uavs))
        sense_comm = sense_comm_time(vsp, config)
        total = float(sample.t_total_s[profile, i])
        table.append(LatencyBreakdown(sense_comm, total - sense_comm, total, bits))
    return table
