"""Lognormal event-time calibration and generation."""

import numpy as np
import pytest
from scipy.special import ndtr

from combodose.datagen import LognormalParams, generate_patient, scenario_params, solve_lognormal
from combodose.scenarios import get_scenario


def lognormal_cdf(t, mu, sigma):
    return ndtr((np.log(t) - mu) / sigma)


def test_quantile_match_is_exact():
    mu, sigma = solve_lognormal(0.3, 0.225, 3)
    assert lognormal_cdf(1.0, mu, sigma) == pytest.approx(0.225, abs=1e-12)
    assert lognormal_cdf(3.0, mu, sigma) == pytest.approx(0.300, abs=1e-12)


def test_activity_equal_split_constraints():
    mu, sigma = solve_lognormal(0.55, 0.55 / 3, 3)
    assert lognormal_cdf(1.0, mu, sigma) == pytest.approx(0.55 / 3, abs=1e-12)
    assert lognormal_cdf(3.0, mu, sigma) == pytest.approx(0.55, abs=1e-12)
    # two-parameter family cannot hit the mid-cycle point exactly, but the
    # implied mass at 2 cycles must lie strictly inside (p/3, p)
    mid = lognormal_cdf(2.0, mu, sigma)
    assert 0.55 / 3 < mid < 0.55


def test_never_sentinel_and_input_validation():
    assert solve_lognormal(0.0, 0.0, 3) is None
    with pytest.raises(ValueError):
        solve_lognormal(0.3, 0.3, 3)
    with pytest.raises(ValueError):
        solve_lognormal(0.3, 0.4, 3)


def test_tau_one_fallback():
    mu, sigma = solve_lognormal(0.4, 0.4, 1)
    assert sigma == 1.0
    assert lognormal_cdf(1.0, mu, sigma) == pytest.approx(0.4, abs=1e-12)


def test_scenario_params_solved_per_combo():
    scn = get_scenario("T1.A6")
    params = scenario_params(scn)
    # toxicity at d11: window 0.03, cycle 1 carries 0.75 of it
    mu, sigma = params[(1, 1)].tox
    assert lognormal_cdf(1.0, mu, sigma) == pytest.approx(0.0225, abs=1e-12)
    assert lognormal_cdf(3.0, mu, sigma) == pytest.approx(0.03, abs=1e-12)
    # activity at d11: window 0.1 split equally
    mu, sigma = params[(1, 1)].act
    assert lognormal_cdf(1.0, mu, sigma) == pytest.approx(0.1 / 3, abs=1e-12)
    assert lognormal_cdf(3.0, mu, sigma) == pytest.approx(0.1, abs=1e-12)


def test_zero_probability_combo_never_fires():
    par = LognormalParams(tox=None, act=solve_lognormal(0.5, 0.5 / 3, 3))
    rng = np.random.default_rng(0)
    t_t, t_a = generate_patient(par, rng)
    assert np.isinf(t_t) and np.isfinite(t_a)


def test_generation_matches_targets_mc():
    par = LognormalParams(tox=solve_lognormal(0.3, 0.225, 3),
                          act=solve_lognormal(0.55, 0.55 / 3, 3))
    rng = np.random.default_rng(42)
    n = 200_000
    t = np.array([generate_patient(par, rng) for _ in range(n)])
    assert np.mean(t[:, 0] <= 3.0) == pytest.approx(0.30, abs=0.005)
    assert np.mean(t[:, 0] <= 1.0) == pytest.approx(0.225, abs=0.005)
    assert np.mean(t[:, 1] <= 3.0) == pytest.approx(0.55, abs=0.005)
    corr = np.corrcoef(np.log(t[:, 0]), np.log(t[:, 1]))[0, 1]
    assert corr == pytest.approx(-0.5, abs=0.02)


def test_patient_substream_independence():
    # identical substream position gives identical times regardless of history
    par = LognormalParams(tox=solve_lognormal(0.3, 0.225, 3),
                          act=solve_lognormal(0.5, 0.5 / 3, 3))
    r1 = np.random.Generator(np.random.PCG64(np.random.SeedSequence((7, 1, 5))))
    r2 = np.random.Generator(np.random.PCG64(np.random.SeedSequence((7, 1, 5))))
    assert generate_patient(par, r1) == generate_patient(par, r2)
