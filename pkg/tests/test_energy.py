"""Energy closed forms, comparison lemmas, and the verification suites."""

from fractions import Fraction

import mpmath as mp
import pytest

from wellcond.energy import (
    band_integral,
    comparison_inside_margin,
    comparison_outside_margin,
    expected_log_parallel,
    kappa,
    log_energy,
    log_product_to_set,
    s_n,
    t_ell,
    verification_suite,
    verify_comparison,
    verify_denominator,
    verify_numerator,
    verify_sn_kappa,
    verify_t_bounds,
)
from wellcond.numerics import to_mpf
from wellcond.points import build_bands, build_parallels, build_point_set


def test_kappa_value():
    with mp.workprec(256):
        assert abs(kappa(256) - (mp.mpf(1) / 2 - mp.log(2))) < mp.mpf(2) ** -250


@pytest.mark.parametrize(
    "t,c",
    [
        (Fraction(1, 3), Fraction(4, 5)),
        (Fraction(-2, 7), Fraction(-9, 10)),
        (Fraction(0), Fraction(1, 2)),
        (Fraction(3, 5), Fraction(0)),
    ],
)
def test_expected_log_parallel_vs_azimuthal_average(t, c):
    """Closed form against a 4096-node uniform average over the parallel."""
    prec = 256
    n = 4096
    with mp.workprec(prec):
        t_f, c_f = to_mpf(t), to_mpf(c)
        rho_t = mp.sqrt(1 - t_f * t_f)
        rho_c = mp.sqrt(1 - c_f * c_f)
        acc = mp.mpf(0)
        for k in range(n):
            ang = 2 * mp.pi * k / n
            d2 = (rho_c - rho_t * mp.cos(ang)) ** 2 + (rho_t * mp.sin(ang)) ** 2
            d2 += (c_f - t_f) ** 2
            acc += mp.log(d2) / 2
        brute = acc / n
        got = expected_log_parallel(t, c, prec)
        assert abs(got - brute) < mp.mpf("1e-8")


def test_band_integral_vs_adaptive_quadrature():
    prec = 256
    cases = [
        (Fraction(5, 9), Fraction(2, 9), Fraction(9, 10)),  # c above the band
        (Fraction(5, 9), Fraction(2, 9), Fraction(1, 2)),  # c inside the band
        (Fraction(-5, 9), Fraction(2, 9), Fraction(0)),  # c above, southern band
    ]
    with mp.workprec(prec + 64):
        for h, eps, c in cases:
            got = band_integral(h, eps, c, prec)
            h_f, eps_f, c_f = to_mpf(h), to_mpf(eps), to_mpf(c)
            want = mp.quad(
                lambda t: expected_log_parallel(t, c_f, prec + 64) / 2,
                [h_f - eps_f, to_mpf(c) if abs(c - h) < eps else h_f, h_f + eps_f],
            )
            assert abs(got - want) < mp.mpf("1e-12")


@pytest.mark.parametrize("c", [Fraction(0), Fraction(1, 3), Fraction(-24, 25), 1])
def test_band_integrals_sum_to_minus_kappa(c):
    """The full-sphere expected log distance: sum of all bands = -kappa."""
    prec = 256
    M = 5
    bands = build_bands(M)
    with mp.workprec(prec):
        total = mp.fsum(
            band_integral(b.center, b.half_width, Fraction(c), prec) for b in bands
        )
        assert abs(total - (-kappa(prec))) < mp.mpf("1e-12")


def test_t_ell_exact_hand_value():
    assert t_ell(5, 5) == Fraction(93324107900, 1851120298083)
    with pytest.raises(ValueError):
        t_ell(0, 5)
    with pytest.raises(ValueError):
        t_ell(6, 5)


def test_t_ell_matches_direct_definition():
    """Same sum straight from radii and heights, no simplification."""
    for M in (2, 4, 7):
        pars = build_parallels(M)
        N = 4 * M * M
        for ell in (1, M // 2 + 1, M):
            acc = Fraction(0)
            for p in pars:
                if p.index == ell:
                    continue
                side = 1 + p.height if p.index < ell else 1 - p.height
                acc += Fraction(p.count**3, 12 * N * N) / (side * side)
            assert t_ell(ell, M) == acc


def test_comparison_margins_nonnegative_small_m():
    for M in (1, 2, 3, 4):
        for rep in verify_comparison(M, 192, seed=3):
            assert rep.passed, (M, rep.lemma, rep.worst_margin)


def test_comparison_raises_outside_domain():
    with pytest.raises(ValueError):
        comparison_outside_margin(Fraction(5, 9), Fraction(2, 9), Fraction(1, 2), 128)
    with pytest.raises(ValueError):
        comparison_inside_margin(Fraction(5, 9), Fraction(2, 9), Fraction(9, 10), 128)


def test_log_product_to_set_matches_pairwise_sum():
    prec = 256
    for M in (1, 2, 3):
        ps = build_point_set(M, prec_bits=prec)
        q = (Fraction(11, 16), Fraction(1, 5))
        with mp.workprec(prec):
            got = log_product_to_set(q, ps, prec)
            t = to_mpf(q[0])
            rho = mp.sqrt(1 - t * t)
            qx = rho * mp.cospi(to_mpf(q[1]))
            qy = rho * mp.sinpi(to_mpf(q[1]))
            acc = mp.mpf(0)
            for _, _, p in ps.all_points():
                d2 = (qx - p.x) ** 2 + (qy - p.y) ** 2 + (t - p.z) ** 2
                acc += mp.log(d2) / 2
            assert abs(got - acc) < mp.mpf("1e-25")


def test_log_product_to_set_coincidence_is_minus_inf():
    ps = build_point_set(2, prec_bits=192)
    got = log_product_to_set((ps.parallels[0].height, Fraction(0)), ps, 192)
    assert got == mp.mpf("-inf")


def test_s_n_equator_branch_consistency():
    prec = 192
    ps = build_point_set(3, prec_bits=prec)
    with mp.workprec(prec):
        v = s_n(Fraction(1, 2), ps, prec)
        # direct: sum r_j * expected - parallel-weighted
        acc = mp.fsum(
            p.count * expected_log_parallel(p.height, Fraction(1, 2), prec)
            for p in ps.parallels
        )
        assert abs(v - acc) < mp.mpf(2) ** -(prec - 16)


def test_energy_m1_exact_minus_8_log2():
    rep = log_energy(build_point_set(1, prec_bits=256), 256)
    with mp.workprec(256):
        assert abs(rep.energy - (-8 * mp.log(2))) < mp.mpf("1e-12")


@pytest.mark.parametrize("M", [1, 2, 3])
def test_energy_parallel_vs_pairwise(M):
    prec = 256
    ps = build_point_set(M, prec_bits=prec)
    a = log_energy(ps, prec, method="parallel")
    b = log_energy(ps, prec, method="pairwise")
    with mp.workprec(prec):
        assert abs(a.energy - b.energy) < mp.mpf("1e-25")
    assert a.residual is not None and b.N == 4 * M * M


def test_gating_raises_below_hypothesis():
    with pytest.raises(ValueError):
        verify_sn_kappa(3, 128, seed=0, informational=False)
    with pytest.raises(ValueError):
        verify_numerator(4, 128, seed=0, informational=False)
    with pytest.raises(ValueError):
        verify_denominator(2, 128, informational=False)


def test_full_suite_m5_passes_and_is_deterministic():
    prec = 192
    reps_a = verification_suite(5, prec, seed=11)
    reps_b = verification_suite(5, prec, seed=11)
    assert [r.lemma for r in reps_a] == [
        "band_average_outside_window",
        "band_average_inside_window",
        "band_correction_log_bounds",
        "parallel_energy_window",
        "parallel_energy_chain",
        "point_product_vs_parallel_sum",
        "point_product_explicit_bound",
        "gap_product_vs_parallel_sum",
        "gap_product_absolute_floor",
    ]
    for ra, rb in zip(reps_a, reps_b):
        assert ra.passed, (ra.lemma, ra.worst_margin)
        assert ra.to_json_dict() == rb.to_json_dict()


def test_t_bounds_report_covers_all_ell():
    rep = verify_t_bounds(6, 192)
    assert rep.passed
    assert len(rep.cells) == 2 * 6
