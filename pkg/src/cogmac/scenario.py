"""Deterministic generation of randomized network scenarios.

Per-link (and per-channel) SNR, detection target, and channel-idle prior
are drawn uniformly from configurable ranges; the SNR is drawn in dB and
converted to a linear ratio at ingestion. The homogeneous flag replaces
the draws by the range midpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contention import BIANCHI_R3_DEFAULTS, BASIC, BackoffParams, MacTiming
from .errors import ConfigError
from .sensing import LinkSensing, SensingParams, snr_db_to_linear
from .throughput import NetworkConfig

DEFAULT_SNR_DB_RANGE = (-20.0, -15.0)
DEFAULT_TARGET_PD_RANGE = (0.7, 0.9)
DEFAULT_PROB_H0_RANGE = (0.7, 0.8)
DEFAULT_SAMPLING_FREQ_HZ = 6e6
DEFAULT_CYCLE_T_S = 0.1


@dataclass(frozen=True)
class ScenarioSpec:
    n_links: int
    m_channels: int = 1
    max_stage: int = 3
    snr_db_range: tuple[float, float] = DEFAULT_SNR_DB_RANGE
    target_pd_range: tuple[float, float] = DEFAULT_TARGET_PD_RANGE
    prob_h0_range: tuple[float, float] = DEFAULT_PROB_H0_RANGE
    seed: int = 0
    homogeneous: bool = False

    def __post_init__(self):
        if self.n_links < 1 or self.m_channels < 1:
            raise ConfigError("n_links and m_channels must be >= 1")
        for name in ("snr_db_range", "target_pd_range", "prob_h0_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ConfigError(f"{name} must be ordered (low, high)")


def _midpoint(rng_pair):
    return 0.5 * (rng_pair[0] + rng_pair[1])


def generate(
    spec: ScenarioSpec,
    *,
    w_min: int = 32,
    w_max: int = 1024,
    cycle_T_s: float = DEFAULT_CYCLE_T_S,
    timing: MacTiming = BIANCHI_R3_DEFAULTS,
    mode: str = BASIC,
    sampling_freq_hz: float = DEFAULT_SAMPLING_FREQ_HZ,
) -> NetworkConfig:
    """Build a NetworkConfig from the scenario spec, reproducibly."""
    rng = np.random.default_rng(spec.seed)
    links = []
    for _ in range(spec.n_links):
        channels = []
        for _ in range(spec.m_channels):
            if spec.homogeneous:
                snr_db = _midpoint(spec.snr_db_range)
                pd = _midpoint(spec.target_pd_range)
                ph0 = _midpoint(spec.prob_h0_range)
            else:
                snr_db = rng.uniform(*spec.snr_db_range)
                pd = rng.uniform(*spec.target_pd_range)
                ph0 = rng.uniform(*spec.prob_h0_range)
            channels.append(
                SensingParams(
                    snr=snr_db_to_linear(snr_db),
                    sampling_freq_hz=sampling_freq_hz,
                    target_pd=pd,
                    prob_h0=ph0,
                )
            )
        links.append(LinkSensing(per_channel=tuple(channels)))
    return NetworkConfig(
        links=tuple(links),
        num_channels=spec.m_channels,
        cycle_T_s=cycle_T_s,
        backoff=BackoffParams(w_min=w_min, max_stage=spec.max_stage),
        w_max=w_max,
        timing=timing,
        mode=mode,
    )
