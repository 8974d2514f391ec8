"""Logarithmic energy of the point families and the bound machinery.

The discrete logarithmic energy of a finite set P on the sphere is

    E(P) = sum_{i != j} log 1/|p_i - p_j|,

to be compared with kappa N^2 - (N/2) log N where

    kappa = 1/2 - log 2 = - int_S int_S log|p - q| dsigma dsigma.

The workhorse quantities, for a query point q at height c:

* expected_log_parallel(t, c): the average of log|p - q| over the
  parallel at height t,

      (1/2)(log(1+t) + log(1-c))   if t >= c,
      (1/2)(log(1-t) + log(1+c))   if t <  c;

* band_integral(h, eps, c): (1/2) * int_{h-eps}^{h+eps} of the above in
  t, i.e. the contribution of the band's surface measure, in closed form
  via the antiderivatives (1+u)log(1+u) - u and -(1-u)log(1-u) - u;

* S_N(c) = sum_j r_j * expected_log_parallel(h_j, c): the parallel-sum
  surrogate for N times the continuous field;

* T_ell: the second-order correction sum_{j != ell}
  r_j^3 / (12 N^2 (1 -+ h_j)^2), an exact rational.

The verify_* functions sweep deterministic-plus-seeded grids and report
signed margins for each inequality in the chain that controls the
condition number: comparison windows between a parallel average and its
band average, the window and chain bounds on S_N + N kappa, and the
upper/lower bounds on products of distances from a query point (or a
family point) to the whole family.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .condition import (
    parallel_self_product_log,
    point_gap_product_log,
    theta_product,
    theta_product_log_turn,
)
from .numerics import (
    DEFAULT_PREC_BITS,
    check_precision,
    fmt_real,
    frac_str,
    to_mpf,
)
from .points import Band, PointSet, SpherePoint, build_parallels, build_point_set

HYPOTHESIS_MIN_M = 5  # the sharpened bounds assume M >= 5

_RANDOM_DENOM = 2**20


def kappa(prec_bits: int = DEFAULT_PREC_BITS) -> mp.mpf:
    """Continuous logarithmic energy constant 1/2 - log 2 (~ -0.19315)."""
    check_precision(prec_bits)
    with mp.workprec(prec_bits):
        return mp.mpf(1) / 2 - mp.log(2)


def _log_of(v) -> mp.mpf:
    """log of an exact rational or an mpf, -inf at zero."""
    if isinstance(v, (int, Fraction)):
        if v < 0:
            raise ValueError(f"log of negative value {v}")
        if v == 0:
            return mp.mpf("-inf")
        return mp.log(to_mpf(v))
    v = mp.mpf(v)
    if v < 0:
        raise ValueError(f"log of negative value {v}")
    return mp.log(v) if v > 0 else mp.mpf("-inf")


def expected_log_parallel(t, c, prec_bits: int = DEFAULT_PREC_BITS) -> mp.mpf:
    """Average of log|p - q| over the parallel at height t, query at c.

    Equals log max(x, y) for the Theta variables; the branch switches at
    t = c.  Can be -inf only in the degenerate cases t = c = +-1.
    """
    check_precision(prec_bits)
    exact = isinstance(t, (int, Fraction)) and isinstance(c, (int, Fraction))
    with mp.workprec(prec_bits):
        if exact:
            north = t >= c
        else:
            north = to_mpf(t) >= to_mpf(c)
        if north:
            a, b = _plus_one(t), _one_minus(c)
        else:
            a, b = _one_minus(t), _plus_one(c)
        return (_log_of(a) + _log_of(b)) / 2


def _plus_one(v):
    return 1 + v if isinstance(v, (int, Fraction)) else 1 + to_mpf(v)


def _one_minus(v):
    return 1 - v if isinstance(v, (int, Fraction)) else 1 - to_mpf(v)


def _antideriv_log1p(u) -> mp.mpf:
    """int log(1+t) dt = (1+u)log(1+u) - u, continuous value 1 at u = -1."""
    w = _plus_one(u)
    if w == 0:
        return mp.mpf(1)
    wm = to_mpf(w)
    return wm * mp.log(wm) - (wm - 1)


def _antideriv_log1m(u) -> mp.mpf:
    """int log(1-t) dt = -(1-u)log(1-u) - u, continuous value -1 at u = 1."""
    w = _one_minus(u)
    if w == 0:
        return mp.mpf(-1)
    wm = to_mpf(w)
    return -wm * mp.log(wm) - (1 - wm)


def band_integral(h, eps, c, prec_bits: int = DEFAULT_PREC_BITS) -> mp.mpf:
    """(1/2) int_{h-eps}^{h+eps} expected_log_parallel(t, c) dt.

    This is the exact surface-measure contribution of the band around
    height h to int_S log|p - q| dsigma(p).  The logarithmic endpoint
    singularities integrate to finite values, handled by the continuous
    extension of the antiderivatives; the result is always finite for a
    band inside [-1, 1].
    """
    check_precision(prec_bits)
    exact = all(isinstance(v, (int, Fraction)) for v in (h, eps, c))
    if not exact:
        h, eps, c = to_mpf(h), to_mpf(eps), to_mpf(c)
    if eps <= 0:
        raise ValueError("band half-width must be positive")
    lo, hi = h - eps, h + eps
    if lo < -1 or hi > 1:
        raise ValueError("band must lie inside [-1, 1]")
    if not -1 <= c <= 1:
        raise ValueError("query height must lie in [-1, 1]")
    with mp.workprec(prec_bits):
        if c <= lo:
            body = _antideriv_log1p(hi) - _antideriv_log1p(lo)
            rim = 2 * to_mpf(eps) * _log_of(_one_minus(c))
            return (body + rim) / 4
        if c >= hi:
            body = _antideriv_log1m(hi) - _antideriv_log1m(lo)
            rim = 2 * to_mpf(eps) * _log_of(_plus_one(c))
            return (body + rim) / 4
        upper = (
            _antideriv_log1p(hi)
            - _antideriv_log1p(c)
            + to_mpf(hi - c) * _log_of(_one_minus(c))
        )
        lower = (
            _antideriv_log1m(c)
            - _antideriv_log1m(lo)
            + to_mpf(c - lo) * _log_of(_plus_one(c))
        )
        return (upper + lower) / 4


@dataclass(frozen=True)
class ComparisonMargins:
    """Signed margins for a two-sided bound on a computed value.

    value lies in [lower_bound, upper_bound] iff both margins are >= 0:
    lower_margin = value - lower_bound, upper_margin = upper_bound - value.
    """

    value: mp.mpf
    lower_bound: mp.mpf
    upper_bound: mp.mpf

    @property
    def lower_margin(self) -> mp.mpf:
        return self.value - self.lower_bound

    @property
    def upper_margin(self) -> mp.mpf:
        return self.upper_bound - self.value


def comparison_outside_margin(
    h, eps, c, prec_bits: int = DEFAULT_PREC_BITS
) -> ComparisonMargins:
    """Parallel average minus band average, query outside the band.

    For c >= h + eps (resp. c <= h - eps) the difference

        D = expected_log_parallel(h, c) - band_integral(h, eps, c)/eps
            - eps^2 / (12 (1 -+ h)^2)

    satisfies 0 <= D <= (1/2)(5/6 - log 2) eps^4 / (1 -+ h)^4, using
    1 - h above the band and 1 + h below it.
    """
    check_precision(prec_bits)
    exact = all(isinstance(v, (int, Fraction)) for v in (h, eps, c))
    hq, eq, cq = (h, eps, c) if exact else (to_mpf(h), to_mpf(eps), to_mpf(c))
    if cq >= hq + eq:
        pole_gap = _one_minus(h)
    elif cq <= hq - eq:
        pole_gap = _plus_one(h)
    else:
        raise ValueError("query height must lie outside the open band")
    with mp.workprec(prec_bits):
        gap = to_mpf(pole_gap)
        epsm = to_mpf(eps)
        d = (
            expected_log_parallel(h, c, prec_bits)
            - band_integral(h, eps, c, prec_bits) / epsm
            - epsm**2 / (12 * gap**2)
        )
        ub = (mp.mpf(5) / 6 - mp.log(2)) / 2 * epsm**4 / gap**4
        return ComparisonMargins(value=d, lower_bound=mp.mpf(0), upper_bound=ub)


def comparison_inside_margin(
    h, eps, c, prec_bits: int = DEFAULT_PREC_BITS
) -> ComparisonMargins:
    """Parallel average minus band average, query inside the band.

    For h - eps <= c <= h + eps the difference
    U = expected_log_parallel(h, c) - band_integral(h, eps, c)/eps obeys

        -eps / (4 (1 - h^2)) <= U <= (1 - log 2) eps^2 / (2 (1 -+ h)^2),

    with 1 - h when c >= h and 1 + h when c < h.
    """
    check_precision(prec_bits)
    exact = all(isinstance(v, (int, Fraction)) for v in (h, eps, c))
    hq, eq, cq = (h, eps, c) if exact else (to_mpf(h), to_mpf(eps), to_mpf(c))
    if not hq - eq <= cq <= hq + eq:
        raise ValueError("query height must lie in the closed band")
    pole_gap = _one_minus(h) if cq >= hq else _plus_one(h)
    with mp.workprec(prec_bits):
        epsm = to_mpf(eps)
        u = (
            expected_log_parallel(h, c, prec_bits)
            - band_integral(h, eps, c, prec_bits) / epsm
        )
        hm = to_mpf(h)
        lb = -epsm / (4 * (1 - hm * hm))
        ub = (1 - mp.log(2)) / 2 * epsm**2 / to_mpf(pole_gap) ** 2
        return ComparisonMargins(value=u, lower_bound=lb, upper_bound=ub)


def s_n(c, point_set, prec_bits: int = DEFAULT_PREC_BITS) -> mp.mpf:
    """S_N(c) = sum_j r_j * expected_log_parallel(h_j, c)."""
    check_precision(prec_bits)
    parallels = point_set.parallels if isinstance(point_set, PointSet) else point_set
    with mp.workprec(prec_bits):
        acc = mp.mpf(0)
        for par in parallels:
            acc += par.count * expected_log_parallel(par.height, c, prec_bits)
        return acc


def t_ell(ell: int, M: int) -> Fraction:
    """Exact second-order band correction for the band index ell <= M.

    T(ell) = sum_{j < ell} r_j^3 / (12 N^2 (1 + h_j)^2)
           + sum_{j > ell} r_j^3 / (12 N^2 (1 - h_j)^2).
    """
    if not isinstance(M, int) or M < 1:
        raise ValueError(f"M must be a positive integer, got {M!r}")
    if not isinstance(ell, int) or not 1 <= ell <= M:
        raise ValueError(f"band index must satisfy 1 <= ell <= M, got {ell!r}")
    parallels = build_parallels(M)
    N = 4 * M * M
    total = Fraction(0)
    for par in parallels:
        if par.index == ell:
            continue
        gap = (1 + par.height) if par.index < ell else (1 - par.height)
        total += Fraction(par.count**3) / (12 * N * N * gap * gap)
    return total


def log_product_to_set(q, point_set: PointSet, prec_bits: int = DEFAULT_PREC_BITS) -> mp.mpf:
    """log prod over all family points of |p_i - q| for an external query.

    q may be a SpherePoint or a pair (height, azimuth_turn) with the
    azimuth given as an exact multiple of pi; the pair form keeps
    coincidence with a family point exact, returning -inf.
    """
    check_precision(prec_bits)
    with mp.workprec(prec_bits):
        if isinstance(q, SpherePoint):
            c = q.z
            alpha = mp.atan2(q.y, q.x)
            turn = None
        else:
            c, turn = q
        total = mp.mpf(0)
        for par in point_set.parallels:
            if turn is not None and par.phase == 0:
                lg = theta_product_log_turn(
                    par.count, par.height, c, Fraction(turn), prec_bits
                )
            else:
                dphi = (alpha if turn is None else to_mpf(Fraction(turn)) * mp.pi) - par.phase
                lg = mp.mpf("-inf")
                th = theta_product(par.count, par.height, c, dphi, prec_bits)
                if th > 0:
                    lg = mp.log(th)
            if lg == mp.mpf("-inf"):
                return mp.mpf("-inf")
            total += lg / 2
        return total


@dataclass
class EnergyReport:
    """Discrete logarithmic energy against its continuous prediction.

    residual = (E - kappa N^2 + (N/2) log N) / N, the order-N remainder
    per point.
    """

    M: int | None
    N: int
    method: str
    precision_bits: int
    energy: mp.mpf
    kappa_n_sq: mp.mpf
    half_n_log_n: mp.mpf
    residual: mp.mpf

    def to_json_dict(self) -> dict:
        return {
            "M": self.M,
            "N": self.N,
            "method": self.method,
            "precision_bits": self.precision_bits,
            "energy": fmt_real(self.energy),
            "kappa_n_sq": fmt_real(self.kappa_n_sq),
            "half_n_log_n": fmt_real(self.half_n_log_n),
            "residual": fmt_real(self.residual),
        }

    def csv_row(self) -> list[str]:
        d = self.to_json_dict()
        return [
            str(d["M"]) if d["M"] is not None else "",
            str(d["N"]),
            d["energy"],
            d["kappa_n_sq"],
            d["half_n_log_n"],
            d["residual"],
        ]


def log_energy(
    point_set,
    prec_bits: int = DEFAULT_PREC_BITS,
    method: str = "parallel",
) -> EnergyReport:
    """E(P) = sum_{i != j} log 1/|p_i - p_j|.

    method "parallel" uses the closed-form within-parallel products plus
    Theta products across parallels (PointSet input only); "pairwise"
    sums over materialised coordinate pairs and also accepts a plain
    list of SpherePoints.  Coincident points give E = +inf.
    """
    check_precision(prec_bits)
    if method not in ("parallel", "pairwise"):
        raise ValueError(f"unknown energy method {method!r}")
    with mp.workprec(prec_bits):
        if method == "parallel":
            if not isinstance(point_set, PointSet):
                raise ValueError("parallel method needs a PointSet")
            total = mp.mpf(0)
            for par in point_set.parallels:
                for k in range(par.count):
                    total += point_gap_product_log(
                        point_set, par.index, k, prec_bits
                    )
            energy = -total
            N = point_set.N
            M = point_set.M
        else:
            if isinstance(point_set, PointSet):
                pts = [p for _, _, p in point_set.all_points()]
                M = point_set.M
            else:
                pts = list(point_set)
                M = None
            N = len(pts)
            acc = mp.mpf(0)
            for i in range(N):
                for j in range(i + 1, N):
                    d2 = pts[i].distance_sq(pts[j])
                    acc += mp.log(d2) if d2 > 0 else mp.mpf("-inf")
            # sum_{i != j} log 1/|p_i - p_j| = -sum_{i < j} log |p_i - p_j|^2
            energy = -acc
        kap = kappa(prec_bits)
        kn2 = kap * N * N
        hnln = mp.mpf(N) / 2 * mp.log(N)
        residual = (energy - kn2 + hnln) / N
    return EnergyReport(
        M=M,
        N=N,
        method=method,
        precision_bits=prec_bits,
        energy=energy,
        kappa_n_sq=kn2,
        half_n_log_n=hnln,
        residual=residual,
    )


# ----------------------------------------------------------------------
# Verification grids and reports.
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    """One checked inequality: lhs vs rhs with margin >= 0 meaning pass."""

    params: dict
    lhs: mp.mpf
    rhs: mp.mpf
    margin: mp.mpf

    def to_json_dict(self) -> dict:
        return {
            "params": dict(self.params),
            "lhs": fmt_real(self.lhs),
            "rhs": fmt_real(self.rhs),
            "margin": fmt_real(self.margin),
        }


@dataclass
class VerificationReport:
    """All cells of one verified inequality over its standard grid.

    Some bounds are attained exactly at grid points (for example the
    inside-window upper bound when the band touches a pole and c sits on
    it), so floating evaluation of the margin can land a few ulps on
    either side of zero.  `tolerance` is the rounding allowance for
    this: pass means worst_margin >= -tolerance.  It is 2^(8 - prec) by
    default, dozens of orders below any non-degenerate margin.
    """

    lemma: str
    hypothesis: str
    M: int
    grid: str
    cells: list[Cell]
    notes: list[str] = field(default_factory=list)
    tolerance: object = 0

    @property
    def worst_margin(self) -> mp.mpf:
        if not self.cells:
            return mp.mpf("+inf")
        return min(c.margin for c in self.cells)

    @property
    def passed(self) -> bool:
        return bool(self.worst_margin >= -self.tolerance)

    def to_json_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "hypothesis": self.hypothesis,
            "M": self.M,
            "grid": self.grid,
            "cells": [c.to_json_dict() for c in self.cells],
            "worst_margin": fmt_real(self.worst_margin),
            "tolerance": fmt_real(to_mpf(self.tolerance)),
            "pass": self.passed,
            "notes": list(self.notes),
        }


def _rounding_allowance(prec_bits: int) -> mp.mpf:
    """Margin slack for exactly-attained bounds: 2^(8 - prec_bits)."""
    return mp.ldexp(1, 8 - prec_bits)


def band_probe_heights(
    band: Band, rng: random.Random, n_random: int = 8
) -> list[Fraction]:
    """Standard height grid for one band: five structural plus seeded.

    The structural heights are both boundaries, the midpoint, and the
    midpoint offset by half the half-width each way; random heights are
    exact rationals uniform over the band at denominator 2^20.
    """
    c, hw = band.center, band.half_width
    heights = [band.upper, c + hw / 2, c, c - hw / 2, band.lower]
    span = band.upper - band.lower
    for _ in range(n_random):
        k = rng.randint(1, _RANDOM_DENOM - 1)
        heights.append(band.lower + span * Fraction(k, _RANDOM_DENOM))
    return heights


AZIMUTH_TURNS = [Fraction(m, 16) for m in range(8)]  # multiples of pi in [0, pi/2)


def _gate(M: int, minimum: int, informational: bool, what: str) -> str:
    if M < minimum and not informational:
        raise ValueError(
            f"{what} assumes M >= {minimum}; pass informational=True to "
            f"evaluate the margins at M={M} anyway"
        )
    hyp = f"M >= {minimum}"
    if M < minimum:
        hyp += f" (informational run at M={M})"
    return hyp


def verify_comparison(
    M: int,
    prec_bits: int = DEFAULT_PREC_BITS,
    seed: int = 0,
    n_random: int = 8,
) -> list[VerificationReport]:
    """Margins for the outside/inside band-average comparison windows.

    Sweeps every (band, probe height) pair of the standard grid; each
    pair is classified by whether the probe lies in the closed band and
    checked against the corresponding window.  No hypothesis on M.
    """
    check_precision(prec_bits)
    ps = build_point_set(M, prec_bits=prec_bits)
    rng = random.Random(seed)
    probes = [h for band in ps.bands for h in band_probe_heights(band, rng, n_random)]
    out_cells: list[Cell] = []
    in_cells: list[Cell] = []
    with mp.workprec(prec_bits):
        for band in ps.bands:
            h, eps = band.center, band.half_width
            for c in probes:
                params = {
                    "band": band.index,
                    "h": frac_str(h),
                    "eps": frac_str(eps),
                    "c": frac_str(c),
                }
                if band.lower <= c <= band.upper:
                    m = comparison_inside_margin(h, eps, c, prec_bits)
                    bucket = in_cells
                else:
                    m = comparison_outside_margin(h, eps, c, prec_bits)
                    bucket = out_cells
                bucket.append(
                    Cell({**params, "side": "lower"}, m.value, m.lower_bound, m.lower_margin)
                )
                bucket.append(
                    Cell({**params, "side": "upper"}, m.value, m.upper_bound, m.upper_margin)
                )
    grid = (
        f"{len(ps.bands)} bands x {len(probes)} probe heights "
        f"(5 structural + {n_random} seeded per band, seed={seed})"
    )
    return [
        VerificationReport(
            lemma="band_average_outside_window",
            hypothesis="none (holds for every band geometry)",
            M=M,
            grid=grid,
            cells=out_cells,
            tolerance=_rounding_allowance(prec_bits),
        ),
        VerificationReport(
            lemma="band_average_inside_window",
            hypothesis="none (holds for every band geometry)",
            M=M,
            grid=grid,
            cells=in_cells,
            tolerance=_rounding_allowance(prec_bits),
        ),
    ]


def verify_sn_kappa(
    M: int,
    prec_bits: int = DEFAULT_PREC_BITS,
    seed: int = 0,
    informational: bool = False,
    n_random: int = 8,
) -> list[VerificationReport]:
    """Window and chain bounds on S_N(c) + N kappa for c in a band <= M.

    Window: -1 <= S_N + N kappa - T(ell) <= 2 (1 - log 2)/ell + 1/15.
    Chain:  -1 + (1/3) log((M+1)/(ell+1)) <= S_N + N kappa
                                          <= (1/3) log(M/ell)
                                             + 2 (1 - log 2)/ell + 1/4.
    """
    hyp = _gate(M, HYPOTHESIS_MIN_M, informational, "the S_N + N kappa window")
    check_precision(prec_bits)
    ps = build_point_set(M, prec_bits=prec_bits)
    rng = random.Random(seed)
    kap = kappa(prec_bits)
    win_cells: list[Cell] = []
    chain_cells: list[Cell] = []
    with mp.workprec(prec_bits):
        for band in ps.bands[:M]:
            ell = band.index
            t_corr = to_mpf(t_ell(ell, M))
            win_hi = 2 * (1 - mp.log(2)) / ell + mp.mpf(1) / 15
            chain_lo = -1 + mp.log(mp.mpf(M + 1) / (ell + 1)) / 3
            chain_hi = (
                mp.log(mp.mpf(M) / ell) / 3
                + 2 * (1 - mp.log(2)) / ell
                + mp.mpf(1) / 4
            )
            for c in band_probe_heights(band, rng, n_random):
                val = s_n(c, ps, prec_bits) + ps.N * kap
                params = {"band": ell, "c": frac_str(c)}
                win = val - t_corr
                win_cells.append(
                    Cell({**params, "side": "lower"}, win, mp.mpf(-1), win - (-1))
                )
                win_cells.append(
                    Cell({**params, "side": "upper"}, win, win_hi, win_hi - win)
                )
                chain_cells.append(
                    Cell({**params, "side": "lower"}, val, chain_lo, val - chain_lo)
                )
                chain_cells.append(
                    Cell({**params, "side": "upper"}, val, chain_hi, chain_hi - val)
                )
    grid = (
        f"bands 1..{M} x 13 probe heights "
        f"(5 structural + {n_random} seeded per band, seed={seed})"
    )
    return [
        VerificationReport(
            lemma="parallel_energy_window",
            hypothesis=hyp,
            M=M,
            grid=grid,
            cells=win_cells,
            tolerance=_rounding_allowance(prec_bits),
        ),
        VerificationReport(
            lemma="parallel_energy_chain",
            hypothesis=hyp,
            M=M,
            grid=grid,
            cells=chain_cells,
            tolerance=_rounding_allowance(prec_bits),
        ),
    ]


def verify_t_bounds(M: int, prec_bits: int = DEFAULT_PREC_BITS) -> VerificationReport:
    """Logarithmic bounds on the exact correction T(ell):

        (1/3) log((M+1)/(ell+1)) <= T(ell) <= (1/3) log(M/ell) + 1/6.
    """
    check_precision(prec_bits)
    cells: list[Cell] = []
    with mp.workprec(prec_bits):
        for ell in range(1, M + 1):
            val = to_mpf(t_ell(ell, M))
            lo = mp.log(mp.mpf(M + 1) / (ell + 1)) / 3
            hi = mp.log(mp.mpf(M) / ell) / 3 + mp.mpf(1) / 6
            cells.append(Cell({"ell": ell, "side": "lower"}, val, lo, val - lo))
            cells.append(Cell({"ell": ell, "side": "upper"}, val, hi, hi - val))
    return VerificationReport(
        lemma="band_correction_log_bounds",
        hypothesis="M >= 1",
        M=M,
        grid=f"ell = 1..{M}",
        cells=cells,
        tolerance=_rounding_allowance(prec_bits),
    )


def verify_numerator(
    M: int,
    prec_bits: int = DEFAULT_PREC_BITS,
    seed: int = 0,
    informational: bool = False,
    n_random: int = 8,
) -> list[VerificationReport]:
    """Upper bounds on log prod_i |p_i - q| for external query points q.

    Against the parallel sum:  log prod <= S_N(c) + log 2 + 1/2.
    Explicit form, q in band ell <= M:
        log prod <= log 2 - kappa N + (1/3) log(M/ell) + 3/4
                    + (2/ell)(1 - log 2).
    Queries that hit a family point exactly are skipped with a note.
    """
    hyp = _gate(M, HYPOTHESIS_MIN_M, informational, "the distance-product upper bound")
    check_precision(prec_bits)
    ps = build_point_set(M, prec_bits=prec_bits)
    rng = random.Random(seed)
    kap = kappa(prec_bits)
    sum_cells: list[Cell] = []
    exp_cells: list[Cell] = []
    notes: list[str] = []
    with mp.workprec(prec_bits):
        for band in ps.bands[:M]:
            ell = band.index
            exp_rhs = (
                mp.log(2)
                - kap * ps.N
                + mp.log(mp.mpf(M) / ell) / 3
                + mp.mpf(3) / 4
                + 2 * (1 - mp.log(2)) / ell
            )
            for c in band_probe_heights(band, rng, n_random):
                sum_rhs = s_n(c, ps, prec_bits) + mp.log(2) + mp.mpf(1) / 2
                for turn in AZIMUTH_TURNS:
                    lhs = log_product_to_set((c, turn), ps, prec_bits)
                    params = {"band": ell, "c": frac_str(c), "turn": frac_str(turn)}
                    if lhs == mp.mpf("-inf"):
                        notes.append(
                            f"skipped query at c={frac_str(c)}, turn={frac_str(turn)}: "
                            "coincides with a family point"
                        )
                        continue
                    sum_cells.append(Cell(params, lhs, sum_rhs, sum_rhs - lhs))
                    exp_cells.append(Cell(params, lhs, exp_rhs, exp_rhs - lhs))
    grid = (
        f"bands 1..{M} x 13 probe heights x {len(AZIMUTH_TURNS)} azimuths "
        f"(seed={seed})"
    )
    return [
        VerificationReport(
            lemma="point_product_vs_parallel_sum",
            hypothesis=hyp,
            M=M,
            grid=grid,
            cells=sum_cells,
            notes=notes,
            tolerance=_rounding_allowance(prec_bits),
        ),
        VerificationReport(
            lemma="point_product_explicit_bound",
            hypothesis=hyp,
            M=M,
            grid=grid,
            cells=exp_cells,
            notes=list(notes),
            tolerance=_rounding_allowance(prec_bits),
        ),
    ]


def verify_denominator(
    M: int,
    prec_bits: int = DEFAULT_PREC_BITS,
    informational: bool = False,
) -> list[VerificationReport]:
    """Lower bounds on log prod_{p_i != p} |p_i - p| at every family point.

    Against the parallel sum:  >= S_N(h) + log(2 sqrt(2) M) - 1/8.
    Absolute floor:            >= (1/2) log(2N) - kappa N - 9/8.
    """
    hyp = _gate(M, HYPOTHESIS_MIN_M, informational, "the gap-product lower bound")
    check_precision(prec_bits)
    ps = build_point_set(M, prec_bits=prec_bits)
    kap = kappa(prec_bits)
    sum_cells: list[Cell] = []
    abs_cells: list[Cell] = []
    with mp.workprec(prec_bits):
        abs_rhs = mp.log(2 * ps.N) / 2 - kap * ps.N - mp.mpf(9) / 8
        for par in ps.parallels:
            sum_rhs = (
                s_n(par.height, ps, prec_bits)
                + mp.log(2 * mp.sqrt(2) * M)
                - mp.mpf(1) / 8
            )
            for k in range(par.count):
                lhs = point_gap_product_log(ps, par.index, k, prec_bits)
                params = {"parallel": par.index, "k": k}
                sum_cells.append(Cell(params, lhs, sum_rhs, lhs - sum_rhs))
                abs_cells.append(Cell(params, lhs, abs_rhs, lhs - abs_rhs))
    grid = f"all {ps.N} family points"
    return [
        VerificationReport(
            lemma="gap_product_vs_parallel_sum",
            hypothesis=hyp,
            M=M,
            grid=grid,
            cells=sum_cells,
            tolerance=_rounding_allowance(prec_bits),
        ),
        VerificationReport(
            lemma="gap_product_absolute_floor",
            hypothesis=hyp,
            M=M,
            grid=grid,
            cells=abs_cells,
            tolerance=_rounding_allowance(prec_bits),
        ),
    ]


def verification_suite(
    M: int,
    prec_bits: int = DEFAULT_PREC_BITS,
    seed: int = 0,
    informational: bool = False,
) -> list[VerificationReport]:
    """All inequality suites for one M, in a fixed deterministic order."""
    reports = []
    reports.extend(verify_comparison(M, prec_bits, seed))
    reports.append(verify_t_bounds(M, prec_bits))
    reports.extend(verify_sn_kappa(M, prec_bits, seed, informational))
    reports.extend(verify_numerator(M, prec_bits, seed, informational))
    reports.extend(verify_denominator(M, prec_bits, informational))
    return reports
