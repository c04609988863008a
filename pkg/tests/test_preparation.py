import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ionparity import (
    FluctuationModel,
    PreparationModel,
    averaged_ground_probability,
    averaged_ground_probability_mixed,
    delta_from_efficiency,
    efficiency,
    parity_delta_mixed,
)

T_COMPARE = 17.0 * np.pi / 8.0 / 1e5
MODEL = FluctuationModel(g_mean=1e5, tau=1e-8)

# frozen from independent brute-force evaluation
DELTA_FOR_ETA_09 = 0.46599060178465607
ETA_FOR_DELTA_1 = 0.39346934028736658
C9_AT_COMPARISON = 0.98359030620125232
C10_AT_COMPARISON = 0.51716019039477334
C11_AT_COMPARISON = 0.3559314397907265
MIXED_DP_09_1E8 = 0.1337902764069957


def test_efficiency_limits():
    assert efficiency(None) == 1.0
    assert efficiency(1e-6) == pytest.approx(1.0, abs=1e-12)
    assert efficiency(100.0) == pytest.approx(0.0, abs=1e-4)
    assert efficiency(1.0) == pytest.approx(ETA_FOR_DELTA_1, abs=1e-15)


def test_efficiency_rejects_nonpositive_width():
    with pytest.raises(ValueError):
        efficiency(0.0)
    with pytest.raises(ValueError):
        efficiency(-0.3)


def test_delta_from_efficiency_spot_values():
    assert delta_from_efficiency(0.9) == pytest.approx(DELTA_FOR_ETA_09, abs=1e-15)
    assert delta_from_efficiency(ETA_FOR_DELTA_1) == pytest.approx(1.0, abs=1e-12)


def test_delta_from_efficiency_domain():
    for bad in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            delta_from_efficiency(bad)


@given(st.floats(min_value=1e-3, max_value=1.0 - 1e-9))
def test_efficiency_round_trip(eta):
    assert efficiency(delta_from_efficiency(eta)) == pytest.approx(eta, abs=1e-12)


def test_high_efficiency_means_narrow_width():
    assert delta_from_efficiency(1.0 - 1e-12) < delta_from_efficiency(0.9) < 1.0


def test_preparation_model_weights():
    prep = PreparationModel(n_target=9, delta=0.5)
    m_values, weights = prep.terms()
    assert m_values[0] == 0
    assert m_values[-1] == 9 + math.ceil(8 * 0.5)
    assert np.sum(weights) == pytest.approx(1.0, abs=1e-12)
    # neighbour ratio encodes the efficiency
    w = dict(zip(m_values.tolist(), weights.tolist()))
    assert w[10] / w[9] == pytest.approx(1.0 - prep.efficiency, rel=1e-12)


def test_preparation_model_exact_flag():
    prep = PreparationModel(n_target=9)
    m_values, weights = prep.terms()
    assert m_values.tolist() == [9]
    assert weights.tolist() == [1.0]
    assert prep.efficiency == 1.0
    with pytest.raises(ValueError):
        PreparationModel(n_target=9, delta=0.0)
    with pytest.raises(ValueError):
        PreparationModel(n_target=-1)


def test_exact_mixture_equals_pure_run():
    prep = PreparationModel(n_target=9)
    mixed = averaged_ground_probability_mixed(prep, MODEL, T_COMPARE)
    pure = averaged_ground_probability(9, MODEL, T_COMPARE)
    assert mixed == pure


def test_mixture_is_convex_combination():
    prep = PreparationModel(n_target=9, delta=0.8)
    m_values, weights = prep.terms()
    expected = sum(
        w * averaged_ground_probability(int(m), MODEL, T_COMPARE)
        for m, w in zip(m_values, weights)
    )
    assert averaged_ground_probability_mixed(prep, MODEL, T_COMPARE) == pytest.approx(
        expected, abs=1e-15
    )


def test_truncation_is_converged():
    prep = PreparationModel(n_target=9, delta=1.0)
    base = averaged_ground_probability_mixed(prep, MODEL, T_COMPARE)
    widened = averaged_ground_probability_mixed(prep, MODEL, T_COMPARE, extra_terms=8)
    assert abs(base - widened) < 1e-9


def test_narrow_width_recovers_exact_limit():
    narrow = averaged_ground_probability_mixed(
        PreparationModel(9, delta=1e-3), MODEL, T_COMPARE
    )
    exact = averaged_ground_probability_mixed(PreparationModel(9), MODEL, T_COMPARE)
    assert abs(narrow - exact) <= 1e-6


def test_vacuum_target_is_stationary():
    prep = PreparationModel(n_target=0)
    assert averaged_ground_probability_mixed(prep, MODEL, T_COMPARE) == 1.0


def test_two_point_mixture_contrast_by_linearity():
    ideal = FluctuationModel(g_mean=1e5, tau=0.0)
    c = {
        n: averaged_ground_probability(n, ideal, T_COMPARE) for n in (9, 10, 11)
    }
    # equal-weight mixtures {9,10} vs {10,11}: the shared term cancels
    mixed_contrast = 0.5 * (c[9] + c[10]) - 0.5 * (c[10] + c[11])
    assert mixed_contrast == pytest.approx(0.5 * (c[9] - c[11]), abs=1e-15)
    assert mixed_contrast / (c[9] - c[10]) == pytest.approx(
        0.5 * (C9_AT_COMPARISON - C11_AT_COMPARISON)
        / (C9_AT_COMPARISON - C10_AT_COMPARISON),
        abs=1e-10,
    )


def test_parity_delta_mixed_frozen_value():
    value = parity_delta_mixed(9, DELTA_FOR_ETA_09, MODEL, T_COMPARE)
    assert value == pytest.approx(MIXED_DP_09_1E8, abs=1e-12)


def test_parity_delta_mixed_exact_matches_pure():
    from ionparity import parity_delta

    assert parity_delta_mixed(9, None, MODEL, T_COMPARE) == pytest.approx(
        parity_delta(9, MODEL, T_COMPARE), abs=1e-15
    )
    with pytest.raises(ValueError):
        parity_delta_mixed(8, None, MODEL, T_COMPARE)
