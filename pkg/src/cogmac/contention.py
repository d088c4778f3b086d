"""Bianchi-style contention model for the data transmission phase.

Backoff fixed point (transmission probability phi vs. conditional collision
probability p), slot timings for the two handshake modes, and the conditional
normalized throughput for a given number of contenders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import ConfigError, InfeasibleError, SolverError

BASIC = "basic"
RTS_CTS = "rts_cts"
MODES = (BASIC, RTS_CTS)


@dataclass(frozen=True)
class MacTiming:
    """Slot/overhead durations and frame sizes of the MAC protocol."""

    sigma_s: float          # empty mini-slot
    sifs_s: float
    difs_s: float
    prop_delay_s: float
    phy_header_bits: int
    mac_header_bits: int
    payload_bits: int
    ack_bits: int
    rts_bits: int
    cts_bits: int
    bitrate_bps: float

    def __post_init__(self):
        for name in ("sigma_s", "sifs_s", "difs_s", "prop_delay_s"):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"{name} must be >= 0")
        if self.bitrate_bps <= 0.0:
            raise ConfigError("bitrate_bps must be positive")
        if self.payload_bits <= 0:
            raise ConfigError("payload_bits must be positive")

    def bits_to_seconds(self, bits: int) -> float:
        return bits / self.bitrate_bps

    @property
    def payload_s(self) -> float:
        return self.bits_to_seconds(self.payload_bits)

    @property
    def header_s(self) -> float:
        return self.bits_to_seconds(self.phy_header_bits + self.mac_header_bits)


# 802.11 DSSS-style constants (frame sizes include the PHY preamble on the
# control frames), with the 20 us mini-slot override used throughout.
BIANCHI_R3_DEFAULTS = MacTiming(
    sigma_s=20e-6,
    sifs_s=28e-6,
    difs_s=128e-6,
    prop_delay_s=1e-6,
    phy_header_bits=128,
    mac_header_bits=272,
    payload_bits=8184,
    ack_bits=112 + 128,
    rts_bits=160 + 128,
    cts_bits=112 + 128,
    bitrate_bps=1e6,
)

TIMING_PROFILES = {"bianchi-r3-defaults": BIANCHI_R3_DEFAULTS}


@dataclass(frozen=True)
class BackoffParams:
    """Exponential backoff: stage-i window is 2^i * w_min, capped at stage max_stage."""

    w_min: int
    max_stage: int

    def __post_init__(self):
        if self.w_min < 1:
            raise ConfigError("w_min must be >= 1")
        if self.max_stage < 0:
            raise ConfigError("max_stage must be >= 0")


@dataclass(frozen=True)
class FixedPoint:
    phi: float
    p: float
    iterations: int
    residual: float


def phi_of_p(p: float, w: int, m: int) -> float:
    """Transmission probability per generic slot given collision probability p."""
    if p == 0.5:
        # removable singularity of the closed form
        return 2.0 / (w + 1.0 + 0.5 * w * m)
    num = 2.0 * (1.0 - 2.0 * p)
    den = (1.0 - 2.0 * p) * (w + 1.0) + w * p * (1.0 - (2.0 * p) ** m)
    return num / den


@lru_cache(maxsize=None)
def _solve_fixed_point_cached(w: int, m: int, n0: int, tol: float) -> FixedPoint:
    if n0 == 1:
        phi = phi_of_p(0.0, w, m)
        return FixedPoint(phi=phi, p=0.0, iterations=0, residual=0.0)

    def residual_fn(p):
        return p - (1.0 - (1.0 - phi_of_p(p, w, m)) ** (n0 - 1))

    # residual_fn is monotone increasing with residual_fn(0) <= 0 <= residual_fn(1),
    # so bisection converges unconditionally.
    lo, hi = 0.0, 1.0
    iterations = 0
    for _ in range(200):
        iterations += 1
        mid = 0.5 * (lo + hi)
        if residual_fn(mid) > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-16:
            break
    p = 0.5 * (lo + hi)
    phi = phi_of_p(p, w, m)
    # phi is set from p exactly, so the sup-norm residual of the pair of
    # equations is the collision-probability equation alone
    res = abs(p - (1.0 - (1.0 - phi) ** (n0 - 1)))
    if res > tol:
        raise SolverError(
            f"backoff fixed point failed to converge (w={w}, m={m}, n0={n0})",
            residual=res,
        )
    return FixedPoint(phi=phi, p=p, iterations=iterations, residual=res)


def solve_fixed_point(backoff: BackoffParams, n0: int, tol: float = 1e-12) -> FixedPoint:
    """Solve the coupled (phi, p) backoff equations for n0 contenders."""
    if n0 < 1:
        raise ConfigError(f"n0 must be >= 1, got {n0}")
    return _solve_fixed_point_cached(backoff.w_min, backoff.max_stage, n0, tol)


def slot_durations(timing: MacTiming, mode: str) -> tuple[float, float]:
    """(t_success, t_collision) in seconds for the given handshake mode."""
    h = timing.header_s
    ps = timing.payload_s
    sifs, difs, pd = timing.sifs_s, timing.difs_s, timing.prop_delay_s
    ack = timing.bits_to_seconds(timing.ack_bits)
    if mode == BASIC:
        t_s = h + ps + sifs + 2.0 * pd + ack + difs
        t_c = h + ps + difs + pd
    elif mode == RTS_CTS:
        rts = timing.bits_to_seconds(timing.rts_bits)
        cts = timing.bits_to_seconds(timing.cts_bits)
        t_s = h + ps + 3.0 * sifs + 2.0 * pd + rts + cts + ack + difs
        t_c = h + difs + rts + pd
    else:
        raise ConfigError(f"unknown handshake mode {mode!r}; expected one of {MODES}")
    return t_s, t_c


def transmission_probabilities(phi: float, n0: int) -> tuple[float, float]:
    """(p_tx, p_success): some transmission occurs / it is a success.

    p_success is defined as 0 when phi == 0 (no transmission, no success).
    """
    if n0 < 1:
        raise ConfigError(f"n0 must be >= 1, got {n0}")
    p_tx = 1.0 - (1.0 - phi) ** n0
    if p_tx == 0.0:
        return 0.0, 0.0
    if n0 == 1:
        return p_tx, 1.0
    p_success = n0 * phi * (1.0 - phi) ** (n0 - 1) / p_tx
    return p_tx, p_success


def mean_slot_duration(p_tx: float, p_success: float, timing: MacTiming, mode: str) -> float:
    """Average duration of a generic slot (empty / success / collision mix)."""
    t_s, t_c = slot_durations(timing, mode)
    return (1.0 - p_tx) * timing.sigma_s + p_tx * p_success * t_s + p_tx * (1.0 - p_success) * t_c


def conditional_throughput(
    tau: float,
    cycle_T: float,
    backoff: BackoffParams,
    n0: int,
    timing: MacTiming,
    mode: str,
    use_floor: bool = True,
) -> float:
    """Normalized throughput of the data phase given n0 contenders.

    With use_floor=False the integer slot count is replaced by the real
    ratio; the optimizer's refinement uses this smooth variant.
    """
    if not 0.0 < tau < cycle_T:
        raise InfeasibleError(f"need 0 < tau < T, got tau={tau}, T={cycle_T}")
    fp = solve_fixed_point(backoff, n0)
    p_tx, p_success = transmission_probabilities(fp.phi, n0)
    t_bar = mean_slot_duration(p_tx, p_success, timing, mode)
    slots = (cycle_T - tau) / t_bar
    if use_floor:
        slots = math.floor(slots)
    return slots * p_success * p_tx * timing.payload_s / cycle_T
