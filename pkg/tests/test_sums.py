"""Exact sum inequalities and their interval-backed bounds."""

from fractions import Fraction

import mpmath as mp
import pytest

from wellcond.numerics import to_mpf
from wellcond.sums import (
    sum_check_suite,
    CSV_HEADER,
    harmonic_bounds,
    r_sum,
    tail_sum,
    weighted_sum,
)


def test_r2_is_exactly_one_sixteenth():
    res = r_sum(2)
    assert res.value == Fraction(1, 16)
    check = res.checks[0]
    assert check.check_id == "r_sum_le_1_16"
    assert check.margin == 0 and check.passed


def test_r3_hand_value():
    # (1/3)^4 + (2/3)^8 = 1/81 + 256/6561
    assert r_sum(3).value == Fraction(337, 6561)


def test_r_monotone_chain_2_to_5():
    vals = [r_sum(M).value for M in (2, 3, 4, 5)]
    assert vals[0] >= vals[1] >= vals[2] >= vals[3]


def test_r_below_one_thirtieth_from_5_to_64():
    for M in range(5, 65):
        res = r_sum(M, exact=True)
        assert res.value <= Fraction(1, 30), M
        assert all(c.passed for c in res.checks)


def test_r_exact_vs_float_paths_agree():
    with mp.workprec(256):
        for M in (7, 33, 64, 90):
            ex = to_mpf(r_sum(M, exact=True).value)
            fl = r_sum(M, exact=False).value
            assert abs(ex - fl) < mp.mpf("1e-25"), M


def test_r_auto_cutover_at_64():
    assert r_sum(64).exact
    assert not r_sum(65).exact


def test_r_rejects_bad_m():
    for bad in (1, 0, 2.5):
        with pytest.raises(ValueError):
            r_sum(bad)


def test_tail_single_term_hand_value():
    res = tail_sum(3, 5)
    assert res.envelope_value == Fraction(4, 5) ** 20
    assert res.companion_value == Fraction(12, 25) ** 10
    assert all(c.passed for c in res.checks)


def test_tail_bound_holds_on_worst_small_ell():
    res = tail_sum(1, 16)
    bound = [c for c in res.checks if c.check_id == "tail_sum_le_inv_e4m1"][0]
    assert bound.passed
    # the enclosure endpoint really is below 1/(e^4 - 1)
    with mp.workprec(128):
        assert to_mpf(bound.bound) <= 1 / (mp.exp(mp.mpf(4)) - 1)


def test_tail_companion_never_exceeds_envelope_form():
    for ell, M in ((1, 6), (2, 9), (5, 12)):
        res = tail_sum(ell, M)
        assert res.companion_value <= res.envelope_value


def test_tail_rejects_out_of_range():
    with pytest.raises(ValueError):
        tail_sum(4, 5)
    with pytest.raises(ValueError):
        tail_sum(0, 5)


def test_harmonic_sandwich_hand_case():
    res = harmonic_bounds(1, 2)
    assert res.value == Fraction(1, 2)
    with mp.workprec(128):
        assert abs(res.lower - mp.log(mp.mpf(3) / 2)) < mp.mpf(2) ** -100
        assert abs(res.upper - mp.log(mp.mpf(2))) < mp.mpf(2) ** -100
    assert all(c.passed for c in res.checks)


def test_weighted_sum_margin_positive():
    for M in (1, 2, 5, 32, 64):
        res = weighted_sum(M)
        assert res.checks[0].passed
        assert res.checks[0].margin > 0 or M == 1


def test_suite_all_checks_pass():
    checks = sum_check_suite(64)
    assert len(checks) > 4000
    assert all(c.passed for c in checks)
    ids = {c.check_id for c in checks}
    assert {
        "r_sum_le_1_16",
        "r_sum_le_1_30",
        "r_sum_monotone_step",
        "tail_sum_le_inv_e4m1",
        "tail_companion_le_envelope",
        "weighted_sum_le_cubic_bound",
        "harmonic_ge_log_upper_ratio",
        "harmonic_le_log_lower_ratio",
    } <= ids


def test_check_serialization_round_trip():
    check = r_sum(2).checks[0]
    d = check.to_json_dict()
    assert d["id"] == "r_sum_le_1_16"
    assert d["value"] == "1/16" and d["pass"] is True
    row = check.csv_row()
    assert len(row) == len(CSV_HEADER)
    assert row[0] == d["id"] and row[-1] == "True"


def test_huge_rationals_format_without_overflow():
    """Exact values beyond ~4000 digits fall back to decimal display."""
    res = tail_sum(1, 64)
    for c in res.checks:
        for cell in c.csv_row():
            assert len(cell) < 5000
    assert all(c.passed for c in res.checks)
