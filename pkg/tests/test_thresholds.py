import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from becldpc.errors import ContractViolation
from becldpc.thresholds import (
    TABLE2_CELLS,
    exponent,
    f1,
    f3,
    ml_threshold_lower,
    table2,
    threshold_residual,
    truncate,
)

# Lower-bound values printed in the threshold table, keyed by (J, K).
PUBLISHED = {
    (3, 4): "0.74546793", (6, 8): "0.74998348", (9, 12): "0.74999993",
    (4, 6): "0.66531587", (6, 9): "0.66661773", (8, 12): "0.66666485",
    (3, 6): "0.48696550", (4, 8): "0.49705261", (5, 10): "0.49928578",
    (6, 12): "0.49982316", (8, 16): "0.49998898", (9, 18): "0.49999724",
    (3, 9): "0.31827745", (4, 12): "0.32937002", (5, 15): "0.33220831",
    (6, 18): "0.33300515", (8, 24): "0.33330473", (9, 27): "0.33332486",
    (3, 12): "0.23601407", (4, 16): "0.24609298", (5, 20): "0.24882167",
    (6, 24): "0.24963402", (8, 32): "0.24996371", (9, 36): "0.24998853",
}


def test_cells_cover_published_table():
    assert set(TABLE2_CELLS) == set(PUBLISHED)


@pytest.mark.parametrize("cell", sorted(PUBLISHED))
def test_published_thresholds_to_eight_places(cell):
    assert truncate(ml_threshold_lower(*cell)) == PUBLISHED[cell]


def test_table2_rows():
    rows = table2()
    assert [(r["J"], r["K"]) for r in rows] == list(TABLE2_CELLS)
    assert all(r["threshold_8dp"] == PUBLISHED[(r["J"], r["K"])] for r in rows)


def test_near_capacity_cell():
    assert abs(ml_threshold_lower(9, 12) - 0.75) < 7e-8


@pytest.mark.parametrize("cell", sorted(PUBLISHED) + [(2, 4), (2, 3), (3, 5)])
def test_threshold_below_capacity_and_residual_small(cell):
    j, k_row = cell
    t = ml_threshold_lower(j, k_row)
    assert 0 < t < j / k_row
    assert abs(threshold_residual(t, j, k_row)) < 1e-10


def test_j2_k4_root():
    t = ml_threshold_lower(2, 4)
    assert 0 < t < 0.5
    assert abs(t - 2 / 4 * (1 - math.log1p((1 - t) ** 4) / math.log(2))) < 1e-10


def test_rate_half_row_increases_with_column_weight():
    values = [ml_threshold_lower(j, 2 * j) for j in (3, 4, 5, 6, 8, 9)]
    assert values == sorted(values) and len(set(values)) == len(values)


@pytest.mark.parametrize("j, k_row", [(1, 4), (3, 3), (4, 2)])
def test_invalid_parameters(j, k_row):
    with pytest.raises(ContractViolation):
        ml_threshold_lower(j, k_row)


@given(st.floats(0.001, 0.999))
def test_f1_vanishes_at_channel_value(eps):
    assert abs(f1(eps, eps)) < 1e-12


@given(st.floats(0.0, 1.0), st.floats(0.01, 0.99))
def test_f1_nonnegative(alpha, eps):
    assert f1(alpha, eps) >= -1e-12


def test_f3_independent_of_channel():
    assert f3(0.3, 3, 6) == f3(0.3, 3, 6)
    assert f3(0.0, 3, 6) == pytest.approx((0 - 0.5) * math.log(2) + 0.5 * math.log(2))


def test_exponent_sign_examples():
    assert exponent(3, 6, 0.40).e_of_eps > 0
    assert exponent(3, 6, 0.50).e_of_eps <= 1e-9


@pytest.mark.parametrize("j, k_row", [(3, 6), (4, 8), (3, 4), (4, 12)])
def test_exponent_vanishes_exactly_past_threshold(j, k_row):
    t = ml_threshold_lower(j, k_row)
    for eps in np.linspace(0.05, t - 1e-6, 6):
        assert exponent(j, k_row, eps).e_of_eps > 0
    for eps in (t + 1e-6, t + 0.01, min(0.99, t + 0.1)):
        assert exponent(j, k_row, eps).e_of_eps <= 1e-9


def test_exponent_eval_fields_consistent():
    ev = exponent(3, 6, 0.3)
    assert ev.f2 == pytest.approx(ev.f1 - ev.f3)
    assert ev.e_of_eps == pytest.approx(max(ev.f1, ev.f2), abs=1e-12)
    assert 0 <= ev.alpha <= 1


def test_exponent_rejects_endpoint():
    with pytest.raises(ContractViolation):
        exponent(3, 6, 0.0)


def test_truncate_does_not_round():
    assert truncate(0.123456789) == "0.12345678"
    assert truncate(0.999999999) == "0.99999999"
