"""
Market scenario configuration.

MarketConfig.case_study() builds the reference scenario: 5 VSPs with 2 UAVs
each, 2 s of sensing at 3 images/s, 600 cycles/bit, CPUs in [5, 10] GHz,
3 applications per VSP with requirements in [1, 3] s, and a different
UAV link rate per VSP.
"""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, Field, model_validator

# 3.59 Mbytes raw image -> 0.65 Mbytes of boxes + 56 bytes of text
RAW_IMAGE_BITS = 28_720_000
SEMCOM_BOX_RATIO = 0.65 / 3.59
SEMCOM_TEXT_BITS = 448

# UAV-to-VSP links differ in bandwidth, distance and fading; VSP 0 is the best
# connected. The scale keeps raw-upload valuations below 1 at the slowest link.
CASE_STUDY_LINK_RATES_BPS = (100e6, 50e6, 25e6, 12.5e6, 5e6)
CASE_STUDY_VALUATION_SCALE_S = 80.0


class ValuationMode(str, Enum):
    """How valuations are produced."""
    LATENCY = "latency"
    UNIFORM = "uniform"


class UavConfig(BaseModel):
    """One sensing UAV attached to a VSP."""
    sensing_time_s: float = Field(default=2.0, gt=0.0)
    sensing_rate_img_per_s: float = Field(default=3.0, gt=0.0)
    raw_image_bits: float = Field(default=RAW_IMAGE_BITS, gt=0.0)
    link_rate_bps: float = Field(default=20e6, gt=0.0)


class VspConfig(BaseModel):
    """A virtual service provider: its UAVs, CPU and application requirements."""
    uavs: list[UavConfig] = Field(default_factory=lambda: [UavConfig(), UavConfig()], min_length=1)
    cpu_hz: float = Field(default=7.5e9, gt=0.0)
    cycles_per_bit: float = Field(default=600.0, gt=0.0)
    app_latency_reqs_s: list[float] = Field(default_factory=lambda: [2.0, 2.0, 2.0], min_length=1)

    @model_validator(mode="after")
    def _positive_requirements(self) -> VspConfig:
        if any(r <= 0.0 for r in self.app_latency_reqs_s):
            raise ValueError("app_latency_reqs_s entries must be > 0")
        return self

    @property
    def n_apps(self) -> int:
        return len(self.app_latency_reqs_s)


class MarketConfig(BaseModel):
    """The scenario that generates bidder valuations."""
    vsps: list[VspConfig] = Field(default_factory=lambda: [VspConfig() for _ in range(5)])
    n_units: int = Field(default=3, ge=1)
    semcom_enabled: bool = True
    semcom_box_ratio: float = Field(default=SEMCOM_BOX_RATIO, gt=0.0, le=1.0)
    semcom_text_bits: float = Field(default=SEMCOM_TEXT_BITS, ge=0.0)
    valuation_scale_s: float = Field(default=5.0, gt=0.0)
    valuation_mode: ValuationMode = ValuationMode.LATENCY
    cpu_hz_range: tuple[float, float] = (5e9, 10e9)
    latency_req_range_s: tuple[float, float] = (1.0, 3.0)
    cycles_per_bit_range: tuple[float, float] | None = None
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_market(self) -> MarketConfig:
        if len(self.vsps) < 2:
            raise ValueError("a market needs at least 2 VSPs")
        ranges = {
            "cpu_hz_range": self.cpu_hz_range,
            "latency_req_range_s": self.latency_req_range_s,
            "cycles_per_bit_range": self.cycles_per_bit_range,
        }
        for name, bounds in ranges.items():
            if bounds is None:
                continue
            low, high = bounds
            if not 0.0 < low <= high:
                raise ValueError(f"{name} must satisfy 0 < low <= high")
        return self

    @property
    def n_vsps(self) -> int:
        return len(self.vsps)

    @classmethod
    def case_study(
        cls,
        n_vsps: int = 5,
        n_apps: int = 3,
        semcom_enabled: bool = True,
        n_units: int = 3,
        seed: int = 0,
    ) -> MarketConfig:
        """Five VSPs with two UAVs each; VSPs past the fifth reuse the slowest link."""
        rates = CASE_STUDY_LINK_RATES_BPS
        vsps = [
            VspConfig(
                uavs=[UavConfig(link_rate_bps=rates[min(i, len(rates) - 1)]) for _ in range(2)],
                app_latency_reqs_s=[2.0] * n_apps,
            )
            for i in range(n_vsps)
        ]
        return cls(
            vsps=vsps,
            n_units=n_units,
            semcom_enabled=semcom_enabled,
            valuation_scale_s=CASE_STUDY_VALUATION_SCALE_S,
            seed=seed,
        )

    def with_vsp_count(self, n_vsps: int) -> MarketConfig:
        """Truncate or extend the VSP list; new VSPs copy the last one."""
        vsps = [v.model_copy(deep=True) for v in self.vsps[:n_vsps]]
        while len(vsps) < n_vsps:
            vsps.append(self.vsps[-1].model_copy(deep=True))
        return self.model_validate({**self.model_dump(), "vsps": [v.model_dump() for v in vsps]})

    def with_app_count(self, n_apps: int) -> MarketConfig:
        vsps = [
            {**v.model_dump(), "app_latency_reqs_s": [v.app_latency_reqs_s[0]] * n_apps}
            for v in self.vsps
        ]
        return self.model_validate({**self.model_dump(), "vsps": vsps})

    def with_semcom(self, enabled: bool) -> MarketConfig:
        return self.model_copy(update={"semcom_enabled": enabled})
