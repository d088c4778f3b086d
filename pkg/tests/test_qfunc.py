import math

import numpy as np
import pytest

from cogmac import CogmacError, q_function, q_inverse


def test_q_at_zero():
    assert q_function(0.0) == 0.5


def test_q_at_one_matches_quadrature_value():
    # frozen from numerical quadrature of the defining integral
    assert abs(q_function(1.0) - 0.15865525393145707) < 1e-12


def test_reflection_identity():
    for x in np.linspace(-6.0, 6.0, 201):
        assert abs(q_function(x) + q_function(-x) - 1.0) < 1e-12


def test_monotone_decreasing():
    xs = np.linspace(-8.0, 8.0, 10_000)
    vals = np.array([q_function(x) for x in xs])
    assert np.all(np.diff(vals) <= 0.0)
    # strictness where double precision can still resolve the tail
    core = vals[(xs > -5.0) & (xs < 8.0)]
    assert np.all(np.diff(core) < 0.0)


def test_q_rejects_non_finite():
    for bad in (math.nan, math.inf, -math.inf):
        with pytest.raises(CogmacError):
            q_function(bad)


def test_inverse_at_half():
    assert q_inverse(0.5) == 0.0


def test_inverse_known_points():
    assert abs(q_inverse(0.15865525393145707) - 1.0) < 1e-10
    assert abs(q_inverse(0.9) - (-1.2815515655446004)) < 1e-10


def test_round_trip_on_log_grid():
    ps = np.geomspace(1e-8, 0.5, 300)
    ps = np.concatenate([ps, 1.0 - ps])
    for p in ps:
        assert abs(q_function(q_inverse(p)) - p) < 1e-10


def test_inverse_rejects_out_of_domain():
    for bad in (0.0, 1.0, -0.1, 1.1, math.nan):
        with pytest.raises(CogmacError):
            q_inverse(bad)
