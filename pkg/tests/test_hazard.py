import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharpelife.hazard import (
    HazardParams,
    HazardState,
    deterministic_hazard,
    exact_step,
    shifted_drift,
)

BASE = HazardParams(mu=0.04, sigma=0.10, lambda_bar=0.02, alpha=0.10)


def test_shifted_drift_examples():
    assert shifted_drift(BASE) == pytest.approx(0.05, abs=1e-15)
    assert shifted_drift(BASE.with_sigma(0.0)) == 0.04
    assert shifted_drift(HazardParams(mu=0.0, sigma=0.10, lambda_bar=0.02, alpha=0.0)) == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(lambda_bar=0.0),
        dict(lambda_bar=-0.01),
        dict(alpha=-0.1),
        dict(alpha=0.15),  # sqrt(0.02) = 0.1414
        dict(sigma=-0.1),
        dict(mu=math.nan),
        dict(sigma=math.inf),
    ],
)
def test_rejects_invalid_params(kwargs):
    base = dict(mu=0.04, sigma=0.10, lambda_bar=0.02, alpha=0.10)
    base.update(kwargs)
    with pytest.raises(ValueError):
        HazardParams(**base)


def test_alpha_at_admissible_limit_is_accepted():
    p = HazardParams(mu=0.04, sigma=0.1, lambda_bar=0.02, alpha=math.sqrt(0.02))
    assert p.alpha == math.sqrt(0.02)


def test_negative_drift_is_flagged_not_rejected():
    with pytest.warns(UserWarning, match="negative hazard drift"):
        p = HazardParams(mu=-0.01, sigma=0.1, lambda_bar=0.02, alpha=0.1)
    assert p.negative_drift
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert not BASE.negative_drift


def test_deterministic_flag():
    assert BASE.with_sigma(0.0).deterministic
    assert not BASE.deterministic


def test_hazard_state_validation():
    HazardState(0.02).validate(BASE)
    HazardState(0.05, t=3.0).validate(BASE, horizon=10.0)
    with pytest.raises(ValueError):
        HazardState(0.019).validate(BASE)
    with pytest.raises(ValueError):
        HazardState(0.05, t=11.0).validate(BASE, horizon=10.0)


def test_exact_step_floor_is_absorbing():
    for dt, z in [(0.01, 0.0), (1.0, 5.0), (3.0, -7.0)]:
        assert exact_step(BASE, 0.02, dt, z, 0.05) == 0.02


def test_exact_step_deterministic_example():
    p = HazardParams(mu=0.04, sigma=0.0, lambda_bar=0.02, alpha=0.1)
    assert exact_step(p, 0.04, 1.0, 0.3, 0.04) == pytest.approx(0.02 + 0.02 * math.exp(0.04), rel=1e-14)
    assert exact_step(p, 0.04, 1.0, 0.3, 0.04) == pytest.approx(0.040816, abs=5e-7)


def test_exact_step_regression_value():
    # frozen from an independent evaluation of the lognormal transition
    got = exact_step(BASE, 0.04, 0.5, 1.0, shifted_drift(BASE))
    assert got == pytest.approx(0.04195385941598084, rel=1e-14)


def test_exact_step_vectorised_and_rejects_bad_dt():
    z = np.array([-1.0, 0.0, 1.0])
    out = exact_step(BASE, np.full(3, 0.05), 0.1, z, 0.05)
    assert out.shape == (3,)
    assert out[0] < out[1] < out[2]
    with pytest.raises(ValueError):
        exact_step(BASE, 0.05, 0.0, 0.0, 0.05)


def test_deterministic_hazard_examples():
    p0 = HazardParams(mu=0.0, sigma=0.0, lambda_bar=0.02, alpha=0.1)
    p4 = HazardParams(mu=0.04, sigma=0.0, lambda_bar=0.02, alpha=0.1)
    assert deterministic_hazard(p4, 0.02, 7.0) == 0.02
    assert deterministic_hazard(p0, 0.04, 10.0) == pytest.approx(0.04, abs=1e-15)
    assert deterministic_hazard(p4, 0.03, 10.0) == pytest.approx(0.02 + 0.01 * math.exp(0.4), rel=1e-14)
    assert deterministic_hazard(p4, 0.03, 10.0) == pytest.approx(0.034918, abs=5e-7)
    with pytest.raises(ValueError):
        deterministic_hazard(BASE, 0.03, 1.0)


params_st = st.builds(
    lambda mu, sigma, lb, frac: HazardParams(mu=mu, sigma=sigma, lambda_bar=lb, alpha=frac * math.sqrt(lb)),
    mu=st.floats(0.0, 0.2),
    sigma=st.floats(0.0, 0.5),
    lb=st.floats(1e-4, 0.1),
    frac=st.floats(0.0, 1.0),
)


@settings(max_examples=200, deadline=None)
@given(params_st, st.floats(0.0, 5.0), st.floats(1e-4, 5.0), st.floats(-8, 8), st.floats(-0.5, 0.5))
def test_exact_step_preserves_floor(p, excess, dt, z, drift):
    assert exact_step(p, p.lambda_bar + excess, dt, z, drift) >= p.lambda_bar


@settings(max_examples=200, deadline=None)
@given(params_st, st.floats(1e-3, 5.0), st.floats(1e-3, 2.0), st.floats(0.0, 6.0), st.floats(-0.2, 0.2))
def test_log_increment_symmetric_in_z(p, excess, dt, z, drift):
    lam = p.lambda_bar + excess
    up = math.log((exact_step(p, lam, dt, z, drift) - p.lambda_bar) / excess)
    down = math.log((exact_step(p, lam, dt, -z, drift) - p.lambda_bar) / excess)
    centre = (drift - 0.5 * p.sigma ** 2) * dt
    assert 0.5 * (up + down) == pytest.approx(centre, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(params_st, st.floats(1e-3, 2.0), st.floats(-0.2, 0.2))
def test_two_half_steps_match_one_step_moments(p, dt, drift):
    # the log-increment is affine in z: read off mean and variance analytically
    def moments(step):
        mean = math.log((exact_step(p, p.lambda_bar + 1.0, step, 0.0, drift) - p.lambda_bar))
        slope = math.log((exact_step(p, p.lambda_bar + 1.0, step, 1.0, drift) - p.lambda_bar)) - mean
        return mean, slope ** 2

    m_half, v_half = moments(dt / 2)
    m_full, v_full = moments(dt)
    assert 2 * m_half == pytest.approx(m_full, abs=1e-12)
    assert 2 * v_half == pytest.approx(v_full, abs=1e-12)
