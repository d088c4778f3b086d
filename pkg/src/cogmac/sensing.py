"""Energy-detection sensing performance for secondary links.

Detection / false-alarm probabilities of the energy detector, threshold
selection for a target detection probability, and the per-cycle channel
participation probabilities that feed the throughput model.

SNR values are linear power ratios here; dB values are converted once at
the configuration boundary (see :mod:`cogmac.scenario` / :mod:`cogmac.config`).
The noise power defaults to 1.0 since only the ratio epsilon/N0 matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError
from .qfunc import q_function, q_inverse


def snr_db_to_linear(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


@dataclass(frozen=True)
class SensingParams:
    """Sensing-side parameters of one link on one channel."""

    snr: float                  # linear PU signal-to-noise ratio at the SU
    sampling_freq_hz: float
    target_pd: float            # required detection probability floor
    prob_h0: float              # prior probability the channel is idle
    noise_power: float = 1.0    # only used when an explicit threshold is given

    def __post_init__(self):
        if self.snr <= 0.0:
            raise ConfigError(f"snr must be positive (linear), got {self.snr}")
        if self.sampling_freq_hz <= 0.0:
            raise ConfigError("sampling_freq_hz must be positive")
        if not 0.0 < self.target_pd < 1.0:
            raise ConfigError(f"target_pd must be in (0, 1), got {self.target_pd}")
        if not 0.0 <= self.prob_h0 <= 1.0:
            raise ConfigError(f"prob_h0 must be in [0, 1], got {self.prob_h0}")
        if self.noise_power <= 0.0:
            raise ConfigError("noise_power must be positive")

    @property
    def prob_h1(self) -> float:
        return 1.0 - self.prob_h0


@dataclass(frozen=True)
class LinkSensing:
    """Per-channel sensing parameters of one secondary link."""

    per_channel: tuple[SensingParams, ...]

    def __post_init__(self):
        if not self.per_channel:
            raise ConfigError("LinkSensing needs at least one channel")

    @classmethod
    def uniform(cls, params: SensingParams, num_channels: int = 1) -> "LinkSensing":
        """Same sensing performance on every channel (the analytical regime)."""
        return cls(per_channel=(params,) * num_channels)

    @property
    def channel_homogeneous(self) -> bool:
        return all(p == self.per_channel[0] for p in self.per_channel[1:])

    @property
    def primary(self) -> SensingParams:
        """Representative channel parameters; requires channel homogeneity."""
        if not self.channel_homogeneous:
            raise ConfigError(
                "link has heterogeneous per-channel sensing; no single "
                "representative parameter set exists"
            )
        return self.per_channel[0]


def _check_tau(tau: float):
    if not (tau > 0.0 and math.isfinite(tau)):
        raise ConfigError(f"sensing time must be positive and finite, got {tau}")


def detection_probability(params: SensingParams, epsilon: float, tau: float) -> float:
    """Probability a busy channel is flagged busy, for threshold epsilon."""
    _check_tau(tau)
    if epsilon <= 0.0:
        raise ConfigError("detection threshold must be positive")
    g = params.snr
    arg = (epsilon / params.noise_power - g - 1.0) * math.sqrt(
        tau * params.sampling_freq_hz / (2.0 * g + 1.0)
    )
    return q_function(arg)


def false_alarm_probability(params: SensingParams, epsilon: float, tau: float) -> float:
    """Probability an idle channel is flagged busy, for threshold epsilon."""
    _check_tau(tau)
    if epsilon <= 0.0:
        raise ConfigError("detection threshold must be positive")
    arg = (epsilon / params.noise_power - 1.0) * math.sqrt(tau * params.sampling_freq_hz)
    return q_function(arg)


def solve_threshold(params: SensingParams, tau: float) -> float:
    """Threshold epsilon0 at which the detection probability equals its target."""
    _check_tau(tau)
    g = params.snr
    return params.noise_power * (
        g
        + 1.0
        + q_inverse(params.target_pd) * math.sqrt((2.0 * g + 1.0) / (tau * params.sampling_freq_hz))
    )


def false_alarm_at_target_pd(params: SensingParams, tau: float) -> float:
    """False alarm probability once the threshold meets the detection target.

    Threshold-free closed form; strictly decreasing in tau.
    """
    _check_tau(tau)
    g = params.snr
    alpha = math.sqrt(2.0 * g + 1.0) * q_inverse(params.target_pd)
    return q_function(alpha + math.sqrt(tau * params.sampling_freq_hz) * g)


def participation_probabilities(link: LinkSensing, tau: float) -> tuple[float, float]:
    """(p_idle, p_busy): probability a link joins / skips the contention phase.

    A link joins when the channel is idle and no false alarm fires, or when
    it is busy but the link mis-detects. Uses the threshold-eliminated false
    alarm form, i.e. the equality-constrained detection regime.
    """
    _check_tau(tau)
    p = link.primary
    pf = false_alarm_at_target_pd(p, tau)
    p_idle = (1.0 - pf) * p.prob_h0 + (1.0 - p.target_pd) * p.prob_h1
    return p_idle, 1.0 - p_idle
