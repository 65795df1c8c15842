"""Dose grid and time-to-event weight bookkeeping."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from combodose.grid import DoseCombo, DoseGrid, PatientRecord, TargetSpec, compute_weights


def make_patient(tox=None, act=None, entry=0.0):
    return PatientRecord(DoseCombo(1, 1), entry, tox_time=tox, act_time=act)


def test_grid_validation():
    with pytest.raises(ValueError):
        DoseGrid((600, 600), (50, 75))
    with pytest.raises(ValueError):
        DoseGrid((), (50,))
    g = DoseGrid((600, 1200), (50, 75, 100, 125, 150))
    assert g.I == 2 and g.J == 5 and g.n_combos == 10
    assert g.doses(DoseCombo(2, 5)) == (1200.0, 150.0)
    with pytest.raises(ValueError):
        g.require(DoseCombo(3, 1))
    assert [c.key() for c in g.combos()][:6] == [
        (1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 1)]


def test_target_spec_validation():
    with pytest.raises(ValueError):
        TargetSpec(phi_t=0.0)
    with pytest.raises(ValueError):
        TargetSpec(tau=0)


def test_observed_tox_event_forces_full_weight():
    out = compute_weights(make_patient(tox=0.5), now=1.0, tau=3)
    assert (out.y_t, out.w_t, out.delta_t) == (1, 1.0, 1)


def test_partial_followup_weights():
    out = compute_weights(make_patient(), now=1.5, tau=3)
    assert out.y_t == 0 and out.w_t == pytest.approx(0.5) and out.delta_t == 0
    assert out.y_a == 0 and out.w_a == pytest.approx(0.5) and out.delta_a == 0


def test_activity_censored_by_dlt():
    # DLT at 1.2 cycles before any activity: activity finalized as no-response
    out = compute_weights(make_patient(tox=1.2), now=3.0, tau=3)
    assert out.y_a == 0 and out.w_a == pytest.approx(0.4) and out.delta_a == 1
    assert out.y_t == 1


def test_activity_before_dlt_is_observed():
    out = compute_weights(make_patient(tox=2.0, act=1.0), now=3.0, tau=3)
    assert (out.y_a, out.w_a, out.delta_a) == (1, 1.0, 1)
    assert (out.y_t, out.w_t, out.delta_t) == (1, 1.0, 1)


def test_event_beyond_window_not_counted():
    out = compute_weights(make_patient(tox=3.5), now=10.0, tau=3)
    assert out.y_t == 0 and out.w_t == 1.0 and out.delta_t == 1


def test_negative_followup_rejected():
    with pytest.raises(ValueError):
        compute_weights(make_patient(entry=5.0), now=4.0, tau=3)


@given(
    tox=st.one_of(st.none(), st.floats(0.01, 6.0)),
    act=st.one_of(st.none(), st.floats(0.01, 6.0)),
    follow=st.floats(0.0, 8.0),
)
def test_weight_invariants(tox, act, follow):
    out = compute_weights(make_patient(tox=tox, act=act), now=follow, tau=3)
    for y, w, d in ((out.y_t, out.w_t, out.delta_t), (out.y_a, out.w_a, out.delta_a)):
        assert 0.0 <= w <= 1.0
        if y == 1:
            assert w == 1.0 and d == 1
    # ascertainment is monotone in the observation clock
    later = compute_weights(make_patient(tox=tox, act=act), now=follow + 1.0, tau=3)
    assert later.delta_t >= out.delta_t and later.delta_a >= out.delta_a
