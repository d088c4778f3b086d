"""Per-cycle normalized throughput of the single- and multi-channel protocols.

Combines the sensing-driven participation statistics with the conditional
contention throughput. The multi-channel closed form covers homogeneous
networks only; heterogeneous multi-channel setups are served by the
Monte Carlo simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contention import BackoffParams, MacTiming, MODES, conditional_throughput
from .errors import ConfigError, HeterogeneousModelError, InfeasibleError
from .sensing import LinkSensing, false_alarm_at_target_pd, participation_probabilities

SINGLE = "single"
MULTI = "multi"
PROTOCOLS = (SINGLE, MULTI)


@dataclass(frozen=True)
class NetworkConfig:
    """Full static description of the secondary network."""

    links: tuple[LinkSensing, ...]
    num_channels: int
    cycle_T_s: float
    backoff: BackoffParams
    w_max: int
    timing: MacTiming
    mode: str

    def __post_init__(self):
        if not self.links:
            raise ConfigError("need at least one secondary link")
        if self.num_channels < 1:
            raise ConfigError("num_channels must be >= 1")
        if self.cycle_T_s <= 0.0:
            raise ConfigError("cycle_T_s must be positive")
        if self.backoff.w_min > self.w_max:
            raise ConfigError("w_min must not exceed w_max")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        for link in self.links:
            if len(link.per_channel) != self.num_channels:
                raise ConfigError(
                    "every link must carry sensing parameters for all "
                    f"{self.num_channels} channels"
                )

    @property
    def num_links(self) -> int:
        return len(self.links)

    @property
    def homogeneous(self) -> bool:
        """Same sensing parameters for every link and channel."""
        first = self.links[0].per_channel[0]
        return all(p == first for link in self.links for p in link.per_channel)

    def with_backoff(self, w: int) -> "NetworkConfig":
        return NetworkConfig(
            links=self.links,
            num_channels=self.num_channels,
            cycle_T_s=self.cycle_T_s,
            backoff=BackoffParams(w_min=w, max_stage=self.backoff.max_stage),
            w_max=self.w_max,
            timing=self.timing,
            mode=self.mode,
        )


@dataclass(frozen=True)
class ThroughputReport:
    nt: float
    pf_per_link: tuple[float, ...]
    p_busy_per_link: tuple[float, ...]
    pr_n: tuple[float, ...]                 # indices n0 = 0..N
    per_n0_conditional: tuple[float, ...]   # indices n0 = 0..N, entry 0 is 0
    expected_idle_channels: float | None = None   # multi-channel only


def poisson_binomial(probs) -> np.ndarray:
    """Exact success-count distribution for independent non-identical Bernoulli trials.

    O(N^2) convolution of the probability generating function.
    """
    pmf = np.array([1.0])
    for p in probs:
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"probability out of [0, 1]: {p}")
        nxt = np.zeros(len(pmf) + 1)
        nxt[:-1] = pmf * (1.0 - p)
        nxt[1:] += pmf * p
        pmf = nxt
    return pmf


def _check_tau_in_cycle(config: NetworkConfig, tau: float):
    if not 0.0 < tau < config.cycle_T_s:
        raise InfeasibleError(
            f"need 0 < tau < T, got tau={tau}, T={config.cycle_T_s}"
        )


def single_channel_pr_n(config: NetworkConfig, tau: float) -> np.ndarray:
    """Distribution of the number of contenders, n0 = 0..N."""
    _check_tau_in_cycle(config, tau)
    p_idles = [participation_probabilities(link, tau)[0] for link in config.links]
    return poisson_binomial(p_idles)


def _conditional_by_n0(config: NetworkConfig, tau: float, w: int, use_floor: bool = True):
    backoff = BackoffParams(w_min=w, max_stage=config.backoff.max_stage)
    cond = [0.0]
    for n0 in range(1, config.num_links + 1):
        cond.append(
            conditional_throughput(
                tau, config.cycle_T_s, backoff, n0, config.timing, config.mode,
                use_floor=use_floor,
            )
        )
    return cond


def single_channel_nt(
    config: NetworkConfig, tau: float, w: int, use_floor: bool = True
) -> ThroughputReport:
    """Normalized throughput of the single-channel protocol."""
    _check_tau_in_cycle(config, tau)
    if not 1 <= w <= config.w_max:
        raise ConfigError(f"need 1 <= w <= w_max, got w={w}, w_max={config.w_max}")
    pr_n = single_channel_pr_n(config, tau)
    cond = _conditional_by_n0(config, tau, w, use_floor)
    nt = float(np.dot(pr_n, cond))
    pf = tuple(false_alarm_at_target_pd(link.primary, tau) for link in config.links)
    p_busy = tuple(participation_probabilities(link, tau)[1] for link in config.links)
    return ThroughputReport(
        nt=nt,
        pf_per_link=pf,
        p_busy_per_link=p_busy,
        pr_n=tuple(pr_n),
        per_n0_conditional=tuple(cond),
    )


def _homogeneous_channel_busy(config: NetworkConfig, tau: float) -> float:
    if not config.homogeneous:
        raise HeterogeneousModelError(
            "closed-form multi-channel statistics require a homogeneous "
            "network; use the simulator for heterogeneous configurations"
        )
    params = config.links[0].per_channel[0]
    pf = false_alarm_at_target_pd(params, tau)
    return pf * params.prob_h0 + params.target_pd * params.prob_h1


def multi_channel_stats(config: NetworkConfig, tau: float):
    """(pr_l, p_su_idle, p_su_busy, e_l) for the homogeneous multi-channel model.

    pr_l is the binomial distribution of the per-link count of sensed-idle
    channels; e_l is its (unconditional) mean M * P_idle.
    """
    _check_tau_in_cycle(config, tau)
    p_busy = _homogeneous_channel_busy(config, tau)
    p_idle = 1.0 - p_busy
    m = config.num_channels
    l0 = np.arange(m + 1)
    pr_l = np.array(
        [math.comb(m, k) * p_idle**k * p_busy ** (m - k) for k in l0]
    )
    p_su_busy = p_busy**m
    return pr_l, 1.0 - p_su_busy, p_su_busy, m * p_idle


def multi_channel_pr_n(config: NetworkConfig, tau: float) -> np.ndarray:
    """Distribution of the number of contenders in the multi-channel protocol."""
    _check_tau_in_cycle(config, tau)
    p_su_busy = _homogeneous_channel_busy(config, tau) ** config.num_channels
    n = config.num_links
    return np.array(
        [
            math.comb(n, k) * (1.0 - p_su_busy) ** k * p_su_busy ** (n - k)
            for k in range(n + 1)
        ]
    )


def multi_channel_nt(
    config: NetworkConfig, tau: float, w: int, use_floor: bool = True
) -> ThroughputReport:
    """Per-channel normalized throughput of the multi-channel protocol.

    The winner transmits on all channels it sensed idle, so the per-success
    channel count is the sensed-idle mean conditioned on participation,
    M * P_idle / (1 - P_busy^M). This conditioning makes the M = 1 case
    coincide exactly with the single-channel model.
    """
    _check_tau_in_cycle(config, tau)
    if not 1 <= w <= config.w_max:
        raise ConfigError(f"need 1 <= w <= w_max, got w={w}, w_max={config.w_max}")
    p_busy = _homogeneous_channel_busy(config, tau)
    p_idle = 1.0 - p_busy
    m = config.num_channels
    p_su_busy = p_busy**m
    pr_n = multi_channel_pr_n(config, tau)
    cond = _conditional_by_n0(config, tau, w, use_floor)
    if p_su_busy == 1.0:
        winner_channels = 0.0
    else:
        winner_channels = m * p_idle / (1.0 - p_su_busy)
    nt = float(np.dot(pr_n, cond)) * winner_channels / m
    params = config.links[0].per_channel[0]
    pf = false_alarm_at_target_pd(params, tau)
    return ThroughputReport(
        nt=nt,
        pf_per_link=(pf,) * config.num_links,
        p_busy_per_link=(p_busy,) * config.num_links,
        pr_n=tuple(pr_n),
        per_n0_conditional=tuple(cond),
        expected_idle_channels=m * p_idle,
    )


def normalized_throughput(
    config: NetworkConfig, tau: float, w: int, protocol: str, use_floor: bool = True
) -> ThroughputReport:
    if protocol == SINGLE:
        return single_channel_nt(config, tau, w, use_floor)
    if protocol == MULTI:
        return multi_channel_nt(config, tau, w, use_floor)
    raise ConfigError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")
