"""Seeded Monte Carlo simulation of the cycle-structured MAC protocols.

Independent oracle for the analytical throughput model. Each cycle samples
primary-user states and per-link sensing outcomes, then plays out slotted
CSMA/CA contention with exponential backoff until the cycle budget runs out.
The inner loop is JIT-compiled; randomness comes from an explicit splitmix64
generator so results are bit-identical across platforms for a given seed.

Stream splitting: replication k of base seed s uses seed s + k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigError, InfeasibleError
from .sensing import false_alarm_at_target_pd
from .throughput import NetworkConfig
from .contention import slot_durations


@dataclass(frozen=True)
class SimConfig:
    network: NetworkConfig
    tau_s: float
    num_cycles: int
    rng_seed: int

    def __post_init__(self):
        if self.num_cycles < 1:
            raise ConfigError("num_cycles must be >= 1")
        if not 0.0 < self.tau_s < self.network.cycle_T_s:
            raise InfeasibleError(
                f"need 0 < tau < T, got tau={self.tau_s}, T={self.network.cycle_T_s}"
            )


@dataclass(frozen=True)
class SimReport:
    empirical_nt: float
    ci95_halfwidth: float
    cycles: int
    collisions: int
    successes: int
    idle_slots: int
    winner_mean_idle_channels: float
    per_cycle_participants_histogram: tuple[int, ...]


@njit(cache=True)
def _sm64_next(state):
    state[0] = (state[0] + np.uint64(0x9E3779B97F4A7C15)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = state[0]
    z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _sm64_uniform(state):
    # 53-bit mantissa in [0, 1)
    return (_sm64_next(state) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def _sm64_below(state, n):
    # modulo bias is < 2**-50 for the window sizes used here
    return int(_sm64_next(state) % np.uint64(n))


@njit(cache=True)
def _run_cycles(
    num_cycles,
    n_links,
    n_channels,
    w_min,
    max_stage,
    prob_h0,        # (N, M) channel-idle priors per link
    p_idle_h0,      # (N, M) prob sensed idle given idle  (1 - Pf)
    p_idle_h1,      # (N, M) prob sensed idle given busy  (1 - Pd)
    sigma,
    t_success,
    t_collision,
    tau,
    cycle_t,
    payload_s,
    seed,
):
    state = np.empty(1, dtype=np.uint64)
    state[0] = np.uint64(seed)

    stage = np.zeros(n_links, dtype=np.int64)
    counter = np.empty(n_links, dtype=np.int64)
    for i in range(n_links):
        counter[i] = _sm64_below(state, w_min)

    per_cycle_payload = np.zeros(num_cycles)
    hist = np.zeros(n_links + 1, dtype=np.int64)
    idle_slots = 0
    successes = 0
    collisions = 0
    winner_idle_sum = 0
    winner_count = 0

    active = np.zeros(n_links, dtype=np.bool_)
    idle_count = np.zeros(n_links, dtype=np.int64)
    budget_total = cycle_t - tau

    for cycle in range(num_cycles):
        n0 = 0
        for i in range(n_links):
            cnt = 0
            for j in range(n_channels):
                truth_idle = _sm64_uniform(state) < prob_h0[i, j]
                if truth_idle:
                    sensed_idle = _sm64_uniform(state) < p_idle_h0[i, j]
                else:
                    sensed_idle = _sm64_uniform(state) < p_idle_h1[i, j]
                if sensed_idle:
                    cnt += 1
            idle_count[i] = cnt
            active[i] = cnt > 0
            if cnt > 0:
                n0 += 1
        hist[n0] += 1
        if n0 == 0:
            continue

        remaining = budget_total
        payload = 0.0
        while True:
            # idle mini-slots until the next transmission
            c = np.int64(1) << np.int64(62)
            for i in range(n_links):
                if active[i] and counter[i] < c:
                    c = counter[i]
            n_tx = 0
            winner = -1
            for i in range(n_links):
                if active[i] and counter[i] == c:
                    n_tx += 1
                    winner = i
            event = c * sigma + (t_success if n_tx == 1 else t_collision)
            if event > remaining:
                break
            remaining -= event
            idle_slots += c
            for i in range(n_links):
                if active[i]:
                    counter[i] -= c
            if n_tx == 1:
                successes += 1
                payload += idle_count[winner] * payload_s
                winner_idle_sum += idle_count[winner]
                winner_count += 1
                stage[winner] = 0
                counter[winner] = _sm64_below(state, w_min)
            else:
                collisions += 1
                for i in range(n_links):
                    if active[i] and counter[i] == 0:
                        if stage[i] < max_stage:
                            stage[i] += 1
                        window = w_min * (np.int64(1) << stage[i])
                        counter[i] = _sm64_below(state, window)
        per_cycle_payload[cycle] = payload

    return (
        per_cycle_payload,
        hist,
        idle_slots,
        successes,
        collisions,
        winner_idle_sum,
        winner_count,
    )


def _sensing_matrices(network: NetworkConfig, tau: float):
    n, m = network.num_links, network.num_channels
    prob_h0 = np.empty((n, m))
    p_idle_h0 = np.empty((n, m))
    p_idle_h1 = np.empty((n, m))
    for i, link in enumerate(network.links):
        for j, params in enumerate(link.per_channel):
            prob_h0[i, j] = params.prob_h0
            p_idle_h0[i, j] = 1.0 - false_alarm_at_target_pd(params, tau)
            p_idle_h1[i, j] = 1.0 - params.target_pd
    return prob_h0, p_idle_h0, p_idle_h1


def run_simulation(sim: SimConfig) -> SimReport:
    """Simulate the configured protocol and report empirical throughput."""
    net = sim.network
    prob_h0, p_idle_h0, p_idle_h1 = _sensing_matrices(net, sim.tau_s)
    t_success, t_collision = slot_durations(net.timing, net.mode)
    (
        per_cycle_payload,
        hist,
        idle_slots,
        successes,
        collisions,
        winner_idle_sum,
        winner_count,
    ) = _run_cycles(
        sim.num_cycles,
        net.num_links,
        net.num_channels,
        net.backoff.w_min,
        net.backoff.max_stage,
        prob_h0,
        p_idle_h0,
        p_idle_h1,
        net.timing.sigma_s,
        t_success,
        t_collision,
        sim.tau_s,
        net.cycle_T_s,
        net.timing.payload_s,
        sim.rng_seed,
    )
    norm = net.cycle_T_s * net.num_channels
    per_cycle_nt = per_cycle_payload / norm
    nt = float(per_cycle_nt.mean())
    if sim.num_cycles > 1:
        ci = 1.96 * float(per_cycle_nt.std(ddof=1)) / math.sqrt(sim.num_cycles)
    else:
        ci = 0.0
    winner_mean = winner_idle_sum / winner_count if winner_count else 0.0
    return SimReport(
        empirical_nt=nt,
        ci95_halfwidth=ci,
        cycles=sim.num_cycles,
        collisions=int(collisions),
        successes=int(successes),
        idle_slots=int(idle_slots),
        winner_mean_idle_channels=float(winner_mean),
        per_cycle_participants_histogram=tuple(int(v) for v in hist),
    )


def replicate(sim: SimConfig, replications: int) -> list[SimReport]:
    """Independent replications; replication k runs with seed rng_seed + k."""
    if replications < 1:
        raise ConfigError("replications must be >= 1")
    reports = []
    for k in range(replications):
        child = SimConfig(
            network=sim.network,
            tau_s=sim.tau_s,
            num_cycles=sim.num_cycles,
            rng_seed=sim.rng_seed + k,
        )
        reports.append(run_simulation(child))
    return reports
