"""
Edge Computing Market Model

UAV sensing, SemCom payload sizing, communication/computation latency and
the resulting per-VSP valuation of an edge computing unit.
"""

from .config import MarketConfig, UavConfig, ValuationMode, VspConfig
from .latency import (
    LatencyBreakdown,
    local_compute_time,
    semantic_payload_bits,
    sense_comm_time,
    total_latency,
    uav_payload_bits,
    valuation,
    valuation_from_latency,
)
from .sampling import (
    latency_table,
    ValuationProfile,
    ValuationSample,
    read_profiles_csv,
    sample_profiles,
    sample_valuations,
    write_profiles_csv,
)

__all__ = [
    "UavConfig",
    "VspConfig",
    "MarketConfig",
    "ValuationMode",
    "LatencyBreakdown",
    "semantic_payload_bits",
    "uav_payload_bits",
    "sense_comm_time",
    "local_compute_time",
    "total_latency",
    "valuation",
    "valuation_from_latency",
    "ValuationProfile",
    "ValuationSample",
    "sample_profiles",
    "sample_valuations",
    "write_profiles_csv",
    "read_profiles_csv",
    "latency_table",
]
