"""
Latency model.

A VSP waits for its slowest UAV (sensing + upload), then processes every
received bit locally. Its valuation of an edge computing unit is the
normalized amount by which that total latency misses the tightest
application requirement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.errors import ConfigurationError, DomainError

from .config import MarketConfig, UavConfig, VspConfig


@dataclass(frozen=True)
class LatencyBreakdown:
    """Per-VSP latency components in seconds."""
    sense_comm_s: float
    compute_s: float
    total_s: float
    total_bits: float


def semantic_payload_bits(raw_bits: float, config: MarketConfig) -> float:
    """
    Bits actually transmitted for one image of raw_bits.

    With SemCom the box payload is rounded to whole bits before the fixed
    per-image text is added.
    """
    if not raw_bits > 0:
        raise DomainError(f"raw_bits must be positive, got {raw_bits}")
    if not config.semcom_enabled:
        return float(raw_bits)
    return float(np.rint(raw_bits * config.semcom_box_ratio)) + config.semcom_text_bits


def images_captured(uav: UavConfig) -> int:
    # tolerance keeps 0.3 * 10 from flooring to 2
    images = math.floor(uav.sensing_time_s * uav.sensing_rate_img_per_s + 1e-9)
    if images < 1:
        raise ConfigurationError(
            f"UAV captures no image in {uav.sensing_time_s} s at {uav.sensing_rate_img_per_s} img/s",
            field="sensing_rate_img_per_s",
        )
    return images


def uav_payload_bits(uav: UavConfig, config: MarketConfig) -> float:
    return images_captured(uav) * semantic_payload_bits(uav.raw_image_bits, config)


def sense_comm_time(vsp: VspConfig, config: MarketConfig) -> float:
    """Time until the VSP holds data from its slowest UAV."""
    return max(
        uav.sensing_time_s + uav_payload_bits(uav, config) / uav.link_rate_bps
        for uav in vsp.uavs
    )


def local_compute_time(
    total_bits: float | np.ndarray,
    cpu_hz: float | np.ndarray,
    cycles_per_bit: float | np.ndarray,
) -> float | np.ndarray:
    if np.any(np.asarray(cpu_hz) <= 0.0):
        raise ConfigurationError("cpu_hz must be positive", field="cpu_hz")
    if np.any(np.asarray(cycles_per_bit) <= 0.0):
        raise ConfigurationError("cycles_per_bit must be positive", field="cycles_per_bit")
    return total_bits * cycles_per_bit / cpu_hz


def total_latency(vsp: VspConfig, config: MarketConfig) -> LatencyBreakdown:
    bits = float(sum(uav_payload_bits(uav, config) for uav in vsp.uavs))
    sense_comm = sense_comm_time(vsp, config)
    compute = float(local_compute_time(bits, vsp.cpu_hz, vsp.cycles_per_bit))
    return LatencyBreakdown(
        sense_comm_s=sense_comm,
        compute_s=compute,
        total_s=sense_comm + compute,
        total_bits=bits,
    )


def valuation_from_latency(
    total_s: float | np.ndarray,
    required_s: float | np.ndarray,
    scale_s: float,
) -> float | np.ndarray:
    """Clamp((total - required) / scale, 0, 1); zero whenever the requirement is met."""
    deficit = np.clip((np.asarray(total_s) - np.asarray(required_s)) / scale_s, 0.0, 1.0)
    return float(deficit) if deficit.ndim == 0 else deficit


def valuation(vsp: VspConfig, config: MarketConfig) -> float:
    breakdown = total_latency(vsp, config)
    required = min(vsp.app_latency_reqs_s)
    return float(valuation_from_latency(breakdown.total_s, required, config.valuation_scale_s))
