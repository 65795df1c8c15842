"""Utility functions and true-dose classification."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from combodose.scenarios import get_scenario, scenario_names
from combodose.utility import (
    BoinUtilityTable,
    UtilityWeights,
    classify_doses,
    utility_boin_true,
    utility_model_based,
)

from reference_tables import (
    BOIN_CORRECT,
    BOIN_CORRECT_ANOMALIES,
    BOIN_GOOD,
    BOIN_GOOD_ANOMALIES,
    BOIN_UTILITY,
    MODEL_CORRECT,
    MODEL_GOOD,
    MODEL_UTILITY,
    S_ACCEPTABLE,
    S_CORRECT,
    S_GOOD,
    S_MODEL_UTILITY,
)

W = UtilityWeights()
TBL = BoinUtilityTable()


def test_model_utility_examples():
    assert utility_model_based(0.55, 0.20, W, 0.3) == pytest.approx(0.484)
    # indicator is strict: pi_t equal to the target carries no penalty
    assert utility_model_based(0.65, 0.30, W, 0.3) == pytest.approx(0.551)
    assert utility_model_based(0.25, 0.45, W, 0.3) == pytest.approx(-0.989, abs=5e-4)
    scaled = UtilityWeights(penalty_form="scaled")
    assert utility_model_based(0.25, 0.45, scaled, 0.3) == pytest.approx(-0.389, abs=5e-4)


def test_boin_utility_examples():
    assert utility_boin_true(0.20, 0.03, TBL) == pytest.approx(50.8)
    assert utility_boin_true(0.0, 0.0, TBL) == pytest.approx(40.0)
    assert utility_boin_true(0.65, 0.30, TBL) == pytest.approx(67.0)


def test_boin_table_ordering_validated():
    with pytest.raises(ValueError):
        BoinUtilityTable(psi01=10, psi00=40, psi10=0, psi11=60)


@given(
    pa=st.floats(0, 1), pt=st.floats(0, 1),
    da=st.floats(1e-6, 0.2), dt=st.floats(1e-6, 0.2),
    form=st.sampled_from(["fixed", "scaled"]),
)
def test_model_utility_monotone(pa, pt, da, dt, form):
    w = UtilityWeights(penalty_form=form)
    base = utility_model_based(pa, pt, w, 0.3)
    if pa + da <= 1:
        assert utility_model_based(pa + da, pt, w, 0.3) > base
    if pt + dt <= 1:
        assert utility_model_based(pa, pt + dt, w, 0.3) <= base


@pytest.mark.parametrize("name", [n for n in scenario_names()])
def test_classification_nesting(name):
    scn = get_scenario(name)
    for convention in ("model", "boin"):
        cls = scn.classification(convention)
        assert np.all(cls.acceptable == (cls.safe & cls.active))
        assert np.all(~cls.good | cls.acceptable)  # good subset acceptable
        assert np.all(~cls.correct | cls.good)  # correct subset good
        assert cls.correct.sum() == (1 if cls.acceptable.any() else 0)


@pytest.mark.parametrize("name", sorted(MODEL_UTILITY))
def test_model_flags_match_reference(name):
    cls = get_scenario(name).classification("model")
    good = {(i + 1, j + 1) for i, j in zip(*np.nonzero(cls.good))}
    assert good == MODEL_GOOD[name]
    assert cls.correct_combo() == MODEL_CORRECT[name]


@pytest.mark.parametrize("name", sorted(BOIN_UTILITY))
def test_boin_flags_match_reference(name):
    cls = get_scenario(name).classification("boin")
    good = {(i + 1, j + 1) for i, j in zip(*np.nonzero(cls.good))}
    if name not in BOIN_GOOD_ANOMALIES:
        assert good == BOIN_GOOD[name]
    if name not in BOIN_CORRECT_ANOMALIES:
        assert cls.correct_combo() == BOIN_CORRECT[name]


def test_s_scenario_flags_match_reference():
    for name in sorted(S_MODEL_UTILITY):
        cls = get_scenario(name).classification("model")
        acc = {(i + 1, j + 1) for i, j in zip(*np.nonzero(cls.acceptable))}
        good = {(i + 1, j + 1) for i, j in zip(*np.nonzero(cls.good))}
        assert acc == S_ACCEPTABLE[name]
        assert good == S_GOOD[name]
        assert cls.correct_combo() == S_CORRECT[name]


def test_classification_examples():
    assert get_scenario("T1.A1").classification("model").correct_combo() == (2, 5)
    t6 = get_scenario("T6.A1").classification("model")
    assert not t6.acceptable.any() and t6.correct_combo() is None
    assert get_scenario("S4").classification("model").correct_combo() == (1, 3)
    s4 = get_scenario("S4").classification("model")
    assert s4.utility[0, 2] == pytest.approx(0.351, abs=1e-3)


def test_empty_acceptable_has_no_good():
    cls = classify_doses(np.full((2, 2), 0.9), np.full((2, 2), 0.9))
    assert not cls.acceptable.any() and not cls.good.any() and not cls.correct.any()
