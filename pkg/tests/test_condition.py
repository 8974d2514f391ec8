"""Condition numbers: both routes, closed products, certified verdicts."""

from fractions import Fraction

import mpmath as mp
import pytest

from wellcond.condition import (
    certify_bound,
    mu_max_coefficient_route,
    mu_max_spherical_route,
    numerator_integral_log,
    parallel_self_product_log,
    point_gap_product_log,
    theta_product,
    theta_product_log_turn,
)
from wellcond.numerics import to_mpf
from wellcond.points import build_point_set


def brute_theta(r, h, c, dphi, prec):
    """Product of squared distances to the r points of a parallel, directly."""
    with mp.workprec(prec):
        h = to_mpf(h)
        c = to_mpf(c)
        rho_p = mp.sqrt(1 - h * h)
        rho_q = mp.sqrt(1 - c * c)
        prod = mp.mpf(1)
        for k in range(r):
            ang = 2 * mp.pi * k / r
            dx = rho_q * mp.cos(dphi) - rho_p * mp.cos(ang)
            dy = rho_q * mp.sin(dphi) - rho_p * mp.sin(ang)
            dz = c - h
            prod *= dx * dx + dy * dy + dz * dz
        return prod


@pytest.mark.parametrize(
    "r,h,c,turn",
    [
        (8, Fraction(5, 9), Fraction(1, 4), Fraction(1, 16)),
        (12, Fraction(0), Fraction(-7, 10), Fraction(3, 16)),
        (4, Fraction(8, 9), Fraction(8, 9), Fraction(1, 8)),
        (5, Fraction(-1, 3), Fraction(2, 3), Fraction(0)),
    ],
)
def test_theta_product_matches_brute_force(r, h, c, turn):
    prec = 256
    with mp.workprec(prec):
        dphi = mp.pi * to_mpf(turn)
        got = theta_product(r, h, c, dphi, prec)
        want = brute_theta(r, h, c, dphi, prec)
        assert abs(got - want) / want < mp.mpf("1e-20")


def test_theta_log_turn_exact_zero_at_coincidence():
    # q lies exactly on the parallel grid: distance product is zero
    got = theta_product_log_turn(8, Fraction(5, 9), Fraction(5, 9), Fraction(0), 192)
    assert got == mp.mpf("-inf")
    # quarter-turn offset on an 8-point grid also hits a grid point
    got = theta_product_log_turn(
        8, Fraction(5, 9), Fraction(5, 9), Fraction(1, 2), 192
    )
    assert got == mp.mpf("-inf")
    # off-grid azimuth stays finite
    got = theta_product_log_turn(
        8, Fraction(5, 9), Fraction(5, 9), Fraction(1, 16), 192
    )
    assert mp.isfinite(got)


@pytest.mark.parametrize("r,h", [(1, Fraction(0)), (4, Fraction(5, 9)), (12, 0)])
def test_parallel_self_product_matches_brute_force(r, h):
    """prod over pairs |p_i - p_j| on one parallel: closed form r * rho^(r-1)."""
    prec = 256
    with mp.workprec(prec):
        got = parallel_self_product_log(r, h, prec)
        h_f = to_mpf(Fraction(h))
        rho = mp.sqrt(1 - h_f * h_f)
        prod = mp.mpf(1)
        for j in range(1, r):
            prod *= 2 * rho * mp.sin(mp.pi * j / r)
        want = mp.log(prod)
        assert abs(got - want) <= mp.mpf(2) ** -(prec - 24)


def test_mu_max_m1_is_sqrt_2():
    rep = mu_max_coefficient_route(1, 256)
    with mp.workprec(256):
        assert abs(rep.mu_max - mp.sqrt(2)) < mp.mpf(2) ** -240
    assert rep.N == 4
    assert rep.verdicts == {"le_N": True, "le_19half_sqrt": True, "ge_lower": True}


@pytest.mark.parametrize("M", [1, 2, 3])
def test_routes_agree(M):
    prec = 256
    a = mu_max_coefficient_route(M, prec)
    b = mu_max_spherical_route(M, prec)
    with mp.workprec(prec):
        rel = abs(a.mu_max - b.mu_max) / b.mu_max
        assert rel < mp.mpf("1e-40")
    assert a.N == b.N == 4 * M * M


def test_spherical_route_symmetry_reduction_identical():
    prec = 192
    full = mu_max_spherical_route(2, prec, reduce_symmetry=False)
    fast = mu_max_spherical_route(2, prec, reduce_symmetry=True)
    with mp.workprec(prec):
        assert abs(full.mu_max - fast.mu_max) / full.mu_max < mp.mpf(2) ** -150


def test_numerator_integral_node_convergence():
    """Doubling quadrature nodes beyond exactness leaves the value fixed."""
    prec = 256
    ps = build_point_set(2, prec_bits=prec)
    base = numerator_integral_log(ps, prec)
    more = numerator_integral_log(
        ps, prec, gl_nodes=2 * base.gl_nodes, azimuth_nodes=2 * base.azimuth_nodes
    )
    assert not base.undersampled
    with mp.workprec(prec):
        assert abs(base.log_value - more.log_value) < mp.mpf(2) ** -(prec - 32)


def test_undersampled_flag_raised_below_exactness():
    ps = build_point_set(2, prec_bits=192)
    rep = numerator_integral_log(ps, 192, gl_nodes=4, azimuth_nodes=8)
    assert rep.undersampled


def test_point_gap_product_matches_brute_force():
    prec = 256
    M = 2
    ps = build_point_set(M, prec_bits=prec)
    flat = ps.all_points()
    with mp.workprec(prec):
        for idx in (0, 5, 9):
            par_index, azimuth, p = flat[idx]
            got = point_gap_product_log(ps, par_index, azimuth, prec)
            acc = mp.mpf(0)
            for jdx, (_, _, q) in enumerate(flat):
                if jdx == idx:
                    continue
                d2 = (p.x - q.x) ** 2 + (p.y - q.y) ** 2 + (p.z - q.z) ** 2
                acc += mp.log(d2) / 2
            assert abs(got - acc) < mp.mpf(2) ** -(prec - 40)


@pytest.mark.parametrize("M", [1, 2, 3, 4])
def test_certified_verdicts_resolve_true(M):
    rep = certify_bound(M, 256)
    assert rep.certified
    assert rep.verdicts == {"le_N": True, "le_19half_sqrt": True, "ge_lower": True}
    lo = mp.mpf(rep.extras["mu_max_lo"])
    hi = mp.mpf(rep.extras["mu_max_hi"])
    assert 0 < lo <= hi < 4 * M * M


def test_certified_encloses_float_route():
    rep_f = mu_max_coefficient_route(3, 256)
    rep_c = certify_bound(3, 256)
    with mp.workprec(256):
        lo = mp.mpf(rep_c.extras["mu_max_lo"])
        hi = mp.mpf(rep_c.extras["mu_max_hi"])
        assert lo - mp.mpf(2) ** -200 <= rep_f.mu_max <= hi + mp.mpf(2) ** -200


def test_report_json_shape():
    rep = mu_max_coefficient_route(2, 192)
    d = rep.to_json_dict()
    assert d["M"] == 2 and d["N"] == 16
    assert d["route"] == "coefficient"
    assert len(d["per_root"]) == 16
    assert set(d["verdicts"]) == {"le_N", "le_19half_sqrt", "ge_lower"}
