"""Joint sensing-time / contention-window optimization.

Per-window optimal sensing time by coarse grid plus golden-section
refinement of the floorless objective, exhaustive outer search over the
window, and the stationary-point diagnostic comparing the analytic
first-order condition against the numeric optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import HeterogeneousModelError
from .qfunc import q_inverse
from .sensing import false_alarm_at_target_pd
from .throughput import MULTI, NetworkConfig, SINGLE, normalized_throughput

TAU_MIN_DEFAULT = 10e-6
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
NT_TIE_TOL = 1e-9


@dataclass(frozen=True)
class TauOptimum:
    tau_s: float
    nt: float
    degenerate: bool = False


@dataclass(frozen=True)
class OptimizationResult:
    tau_star_s: float
    w_star: int
    nt_star: float
    per_w_curve: tuple[tuple[int, float, float], ...]   # (w, tau_opt, nt)
    evaluations: int


@dataclass(frozen=True)
class StationaryDiagnostic:
    tau_s: float
    g_value: float
    h_value: float
    residual: float     # h - g; changes sign exactly once across (0, T)


def _golden_section_max(f, a: float, b: float, tol: float = 1e-9) -> float:
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def optimize_tau(
    config: NetworkConfig,
    w: int,
    protocol: str = SINGLE,
    *,
    grid_points: int = 512,
    tau_min: float = TAU_MIN_DEFAULT,
) -> TauOptimum:
    """Best sensing time for a fixed contention window.

    Coarse geometric grid over [tau_min, T - sigma] (dense near 0) followed
    by golden-section refinement of the floorless objective on the
    bracketing interval; the reported throughput re-applies the floor.
    The grid guards against floor-induced plateaus, so unimodality is
    exploited but not assumed.
    """
    t_hi = config.cycle_T_s - config.timing.sigma_s
    grid = np.geomspace(tau_min, t_hi, grid_points)

    def nt_floorless(tau):
        return normalized_throughput(config, tau, w, protocol, use_floor=False).nt

    def nt_floored(tau):
        return normalized_throughput(config, tau, w, protocol, use_floor=True).nt

    values = np.array([nt_floorless(t) for t in grid])
    best = int(np.argmax(values))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]
    tau_ref = _golden_section_max(nt_floorless, lo, hi)

    # report with the floor; never return worse than a coarse grid point
    floored = [(nt_floored(t), t) for t in (tau_ref, *grid)]
    nt_best = max(v for v, _ in floored)
    tau_best = min(t for v, t in floored if v >= nt_best - NT_TIE_TOL)
    if nt_best <= 0.0:
        return TauOptimum(tau_s=float(grid[0]), nt=0.0, degenerate=True)
    return TauOptimum(tau_s=float(tau_best), nt=float(nt_best))


def _window_grid(w_max: int) -> list[int]:
    if w_max <= 1024:
        return list(range(1, w_max + 1))
    coarse = sorted({int(round(w)) for w in np.geomspace(1, w_max, 257)})
    return coarse


def optimize_joint(
    config: NetworkConfig,
    protocol: str = SINGLE,
    *,
    grid_points: int = 512,
    tau_min: float = TAU_MIN_DEFAULT,
) -> OptimizationResult:
    """Exhaustive outer search over the contention window.

    Every integer window is tried when w_max <= 1024; beyond that a
    geometric subsample is refined locally around its best point. Ties
    within NT_TIE_TOL prefer the smaller window, then the smaller tau.
    """
    windows = _window_grid(config.w_max)
    curve = []
    evaluations = 0
    for w in windows:
        opt = optimize_tau(config, w, protocol, grid_points=grid_points, tau_min=tau_min)
        evaluations += grid_points
        curve.append((w, opt.tau_s, opt.nt))

    if config.w_max > 1024:
        # local integer refinement around the subsampled optimum
        best_w = max(curve, key=lambda row: row[2])[0]
        idx = windows.index(best_w)
        lo = windows[max(idx - 1, 0)]
        hi = windows[min(idx + 1, len(windows) - 1)]
        seen = set(windows)
        for w in range(lo, hi + 1):
            if w in seen:
                continue
            opt = optimize_tau(config, w, protocol, grid_points=grid_points, tau_min=tau_min)
            evaluations += grid_points
            curve.append((w, opt.tau_s, opt.nt))
        curve.sort(key=lambda row: row[0])

    nt_star = max(row[2] for row in curve)
    contenders = [row for row in curve if row[2] >= nt_star - NT_TIE_TOL]
    w_star, tau_star, _ = min(contenders, key=lambda row: (row[0], row[1]))
    return OptimizationResult(
        tau_star_s=tau_star,
        w_star=w_star,
        nt_star=nt_star,
        per_w_curve=tuple(curve),
        evaluations=evaluations,
    )


def _stationary_terms(config: NetworkConfig, tau: float, protocol: str):
    if not config.homogeneous:
        raise HeterogeneousModelError(
            "stationary-point diagnostics require a homogeneous network"
        )
    params = config.links[0].per_channel[0]
    gam = params.snr
    fs = params.sampling_freq_hz
    alpha = math.sqrt(2.0 * gam + 1.0) * q_inverse(params.target_pd)
    g = (alpha + gam * math.sqrt(fs * tau)) ** 2

    pf = false_alarm_at_target_pd(params, tau)
    x = pf * params.prob_h0 + params.target_pd * params.prob_h1
    n = config.num_links
    t_total = config.cycle_T_s
    base = 2.0 * math.log(
        params.prob_h0 * gam * math.sqrt(fs / (8.0 * math.pi)) * (t_total - tau) / math.sqrt(tau)
    )
    if protocol == SINGLE:
        shape = 2.0 * math.log(n * x ** (n - 1) / (1.0 - x**n))
    else:
        r = config.num_channels * n
        num = 1.0 - x**r + r * x ** (r - 1) * (1.0 - x)
        den = (1.0 - x) * (1.0 - x**r)
        shape = 2.0 * math.log(num / den)
    return g, base + shape


def stationary_diagnostic(
    config: NetworkConfig, w: int, tau: float, protocol: str = SINGLE
) -> StationaryDiagnostic:
    """Evaluate both sides of the first-order optimality condition at tau.

    The residual h - g is positive where the floorless throughput is still
    rising and crosses zero exactly once at the interior optimum. The
    contention window does not enter either side; it is accepted for
    interface symmetry with the optimizer.
    """
    del w
    g, h = _stationary_terms(config, tau, protocol)
    return StationaryDiagnostic(tau_s=tau, g_value=g, h_value=h, residual=h - g)


def contention_scale_positivity(n: int, m: int, x) -> tuple[np.ndarray, np.ndarray]:
    """Closed forms whose positivity underpins the unimodality argument.

    Returns (n * x^(n-1), 1 - x^(m*n) + m*n * x^(m*n-1) * (1 - x)) on the
    grid x; both must be strictly positive on (0, 1).
    """
    x = np.asarray(x, dtype=float)
    single = n * x ** (n - 1)
    r = m * n
    multi = 1.0 - x**r + r * x ** (r - 1) * (1.0 - x)
    return single, multi
