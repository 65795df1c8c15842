"""Bivariate binary kernel shared by the model-based designs."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from combodose.gumbel import cell_prob, gumbel_cells, joint_loglik

probs = st.floats(0.0, 1.0)
assoc = st.floats(-30.0, 30.0)


def test_independence_at_zero_association():
    c = gumbel_cells(0.3, 0.2, 0.0)
    assert c.p11 == pytest.approx(0.06)
    assert c.p01 == pytest.approx(0.24)
    assert c.p10 == pytest.approx(0.14)
    assert c.p00 == pytest.approx(0.56)


def test_strong_positive_association_limit():
    c = gumbel_cells(0.5, 0.5, 60.0)  # tanh saturates at 1
    assert c.p11 == pytest.approx(0.25 + 0.0625, abs=1e-12)


def test_degenerate_marginal_kills_correction():
    c = gumbel_cells(1.0, 0.37, 4.2)
    assert c.p01 + c.p11 == pytest.approx(1.0)
    assert c.p00 == pytest.approx(0.0) and c.p10 == pytest.approx(0.0)


@given(ga=probs, gt=probs, psi=assoc)
def test_cells_form_distribution(ga, gt, psi):
    c = gumbel_cells(ga, gt, psi)
    arr = c.as_array()
    assert np.all(arr >= -1e-15)
    assert arr.sum() == pytest.approx(1.0, abs=1e-12)
    # marginalization is exact
    assert c.p01 + c.p11 == pytest.approx(ga, abs=1e-12)
    assert c.p10 + c.p11 == pytest.approx(gt, abs=1e-12)


@given(ga=st.floats(0.05, 0.95), gt=st.floats(0.05, 0.95),
       psi=st.floats(-5, 5), dpsi=st.floats(0.1, 3))
def test_p11_increasing_in_association(ga, gt, psi, dpsi):
    assert gumbel_cells(ga, gt, psi + dpsi).p11 > gumbel_cells(ga, gt, psi).p11


def test_loglik_empty_records():
    assert joint_loglik([], 1.3) == 0.0


def test_loglik_independence_product():
    val = joint_loglik([(0.3, 0.2, 0, 0)], 0.0)
    assert val == pytest.approx(np.log(0.7 * 0.8))


def test_loglik_additivity():
    rec = (0.4, 0.1, 1, 0)
    assert joint_loglik([rec, rec], 0.7) == pytest.approx(2 * joint_loglik([rec], 0.7))


def test_impossible_cell_is_floored_not_crashing():
    val = joint_loglik([(0.0, 0.5, 1, 0)], 0.0)  # observed activity with g_a = 0
    assert np.isfinite(val) and val < -600


def test_cell_prob_vectorized_matches_cells():
    rng = np.random.default_rng(3)
    ga, gt = rng.random(50), rng.random(50)
    ya, yt = rng.integers(0, 2, 50), rng.integers(0, 2, 50)
    psi = 1.7
    vec = cell_prob(ga, gt, ya, yt, psi)
    for k in range(50):
        assert vec[k] == pytest.approx(
            gumbel_cells(ga[k], gt[k], psi).prob(yt[k], ya[k]), abs=1e-14)
