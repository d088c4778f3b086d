import itertools
import math

import numpy as np
import pytest

from cogmac import (
    BASIC,
    BIANCHI_R3_DEFAULTS,
    BackoffParams,
    ConfigError,
    HeterogeneousModelError,
    InfeasibleError,
    LinkSensing,
    NetworkConfig,
    SensingParams,
    multi_channel_nt,
    multi_channel_pr_n,
    multi_channel_stats,
    normalized_throughput,
    participation_probabilities,
    poisson_binomial,
    single_channel_nt,
    single_channel_pr_n,
)


def params(snr=10 ** (-1.75), pd=0.8, ph0=0.75):
    return SensingParams(snr=snr, sampling_freq_hz=6e6, target_pd=pd, prob_h0=ph0)


def network(links, m=1, cycle=0.1, w_min=32, max_stage=3, mode=BASIC):
    return NetworkConfig(
        links=tuple(links),
        num_channels=m,
        cycle_T_s=cycle,
        backoff=BackoffParams(w_min=w_min, max_stage=max_stage),
        w_max=1024,
        timing=BIANCHI_R3_DEFAULTS,
        mode=mode,
    )


def homogeneous_network(n=5, m=1, **kw):
    return network([LinkSensing.uniform(params(), m) for _ in range(n)], m=m, **kw)


def brute_force_count_distribution(probs):
    """Reference 2^N subset enumeration of the success-count pmf."""
    n = len(probs)
    pmf = np.zeros(n + 1)
    for subset in itertools.product([0, 1], repeat=n):
        weight = 1.0
        for joined, p in zip(subset, probs):
            weight *= p if joined else 1.0 - p
        pmf[sum(subset)] += weight
    return pmf


def test_poisson_binomial_edges():
    assert np.allclose(poisson_binomial([]), [1.0])
    assert np.allclose(poisson_binomial([1.0, 1.0]), [0.0, 0.0, 1.0])
    assert np.allclose(poisson_binomial([0.5, 0.5]), [0.25, 0.5, 0.25])


def test_poisson_binomial_matches_enumeration():
    rng = np.random.default_rng(42)
    for _ in range(25):
        probs = rng.uniform(0.0, 1.0, rng.integers(1, 9))
        assert np.max(np.abs(poisson_binomial(probs) - brute_force_count_distribution(probs))) < 1e-12


def test_poisson_binomial_rejects_bad_probability():
    with pytest.raises(ConfigError):
        poisson_binomial([0.5, 1.2])


def test_network_validation():
    with pytest.raises(ConfigError):
        network([])
    with pytest.raises(ConfigError):
        network([LinkSensing.uniform(params(), 1)], m=2)
    with pytest.raises(ConfigError):
        homogeneous_network(cycle=-1.0)


def test_homogeneous_flag():
    assert homogeneous_network().homogeneous
    mixed = network([LinkSensing.uniform(params(), 1), LinkSensing.uniform(params(ph0=0.7), 1)])
    assert not mixed.homogeneous


def test_single_channel_pr_n_homogeneous_is_binomial():
    cfg = homogeneous_network(n=3)
    tau = 1e-3
    p_idle, _ = participation_probabilities(cfg.links[0], tau)
    pr = single_channel_pr_n(cfg, tau)
    expected = [
        math.comb(3, k) * p_idle**k * (1 - p_idle) ** (3 - k) for k in range(4)
    ]
    assert np.allclose(pr, expected, atol=1e-14)
    assert abs(pr.sum() - 1.0) < 1e-12


def test_single_channel_pr_n_heterogeneous_matches_enumeration():
    rng = np.random.default_rng(7)
    links = [
        LinkSensing.uniform(params(pd=rng.uniform(0.7, 0.9), ph0=rng.uniform(0.7, 0.8)), 1)
        for _ in range(5)
    ]
    cfg = network(links)
    tau = 2.6e-3
    p_idles = [participation_probabilities(link, tau)[0] for link in links]
    assert np.max(np.abs(single_channel_pr_n(cfg, tau) - brute_force_count_distribution(p_idles))) < 1e-12


def test_single_channel_nt_is_expected_conditional():
    cfg = homogeneous_network(n=6)
    tau, w = 1e-3, 64
    report = single_channel_nt(cfg, tau, w)
    assert abs(report.nt - float(np.dot(report.pr_n, report.per_n0_conditional))) < 1e-15
    assert report.per_n0_conditional[0] == 0.0
    assert 0.0 < report.nt < 1.0
    assert abs(sum(report.pr_n) - 1.0) < 1e-12


def test_single_channel_nt_input_validation():
    cfg = homogeneous_network()
    with pytest.raises(InfeasibleError):
        single_channel_nt(cfg, 0.1, 32)
    with pytest.raises(ConfigError):
        single_channel_nt(cfg, 1e-3, 2048)


def test_nt_vanishes_as_tau_approaches_cycle():
    cfg = homogeneous_network()
    assert single_channel_nt(cfg, 0.1 - 1e-6, 32).nt == 0.0


def test_multi_channel_stats_consistency():
    cfg = homogeneous_network(n=4, m=5)
    tau = 1e-3
    pr_l, p_su_idle, p_su_busy, e_l = multi_channel_stats(cfg, tau)
    assert abs(pr_l.sum() - 1.0) < 1e-12
    assert abs(e_l - float(np.dot(np.arange(6), pr_l))) < 1e-12
    assert abs(p_su_idle + p_su_busy - 1.0) < 1e-15
    p_busy = 1.0 - e_l / 5.0
    assert abs(p_su_busy - p_busy**5) < 1e-12


def test_multi_channel_stats_m1_reduces_to_participation():
    cfg = homogeneous_network(n=4, m=1)
    tau = 1e-3
    _, _, p_su_busy, e_l = multi_channel_stats(cfg, tau)
    _, p_busy = participation_probabilities(cfg.links[0], tau)
    assert abs(p_su_busy - p_busy) < 1e-15
    assert abs(e_l - (1.0 - p_busy)) < 1e-15


def test_multi_channel_requires_homogeneity():
    links = [LinkSensing.uniform(params(), 2), LinkSensing.uniform(params(ph0=0.7), 2)]
    cfg = network(links, m=2)
    with pytest.raises(HeterogeneousModelError):
        multi_channel_nt(cfg, 1e-3, 32)


def test_multi_channel_pr_n_is_binomial_in_participation():
    cfg = homogeneous_network(n=6, m=3)
    tau = 1e-3
    _, p_su_idle, p_su_busy, _ = multi_channel_stats(cfg, tau)
    pr = multi_channel_pr_n(cfg, tau)
    expected = [
        math.comb(6, k) * p_su_idle**k * p_su_busy ** (6 - k) for k in range(7)
    ]
    assert np.allclose(pr, expected, atol=1e-14)


def test_multi_channel_collapse_to_single_at_m1():
    cfg = homogeneous_network(n=7, m=1)
    for tau in (1e-4, 1e-3, 1e-2):
        for w in (16, 182):
            single = single_channel_nt(cfg, tau, w).nt
            multi = multi_channel_nt(cfg, tau, w).nt
            assert abs(single - multi) < 1e-12


def test_multi_channel_report_fields():
    cfg = homogeneous_network(n=5, m=4)
    report = multi_channel_nt(cfg, 2.6e-3, 64)
    assert 0.0 < report.nt < 1.0
    assert report.expected_idle_channels is not None
    assert 0.0 < report.expected_idle_channels <= 4.0


def test_normalized_throughput_dispatch():
    cfg = homogeneous_network(n=3, m=1)
    assert normalized_throughput(cfg, 1e-3, 32, "single").nt == single_channel_nt(cfg, 1e-3, 32).nt
    assert normalized_throughput(cfg, 1e-3, 32, "multi").nt == multi_channel_nt(cfg, 1e-3, 32).nt
    with pytest.raises(ConfigError):
        normalized_throughput(cfg, 1e-3, 32, "dual")
