"""Discrete sum inequalities used by the energy and product bounds.

Four families of sums, each with explicit bounds:

* R(M) = sum_{j=1}^{M-1} (j/M)^(4j), exactly rational;
  R(M) <= 1/16 for M >= 2 and R(M) <= 1/30 for M >= 5.
* tail(ell, M) = sum_{j=ell+2}^{M} ((ell+1)/j)^(4j) <= 1/(e^4 - 1),
  together with its smaller companion sum_{j} (ell(ell+1)/j^2)^(2j).
* sum_{ell=1}^{M-1} ell^(1/3) (e/2)^(4/ell)
  <= (3/4) M^(4/3) + 12 (1 - log 2) M^(1/3) + 3.
* log((M+1)/(ell+1)) <= sum_{j=ell+1}^{M} 1/j <= log(M/ell).

Rational sums are evaluated exactly; transcendental bounds are enclosed
by interval arithmetic, and a check passes only if the exact value
clears the conservative endpoint, so rounding can never flip a verdict
to pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .numerics import (
    DEFAULT_PREC_BITS,
    check_precision,
    fmt_real,
    fraction_from_raw,
    to_mpf,
)

EXACT_CUTOVER_M = 64  # beyond this, rational powers grow too wide; use floats


@dataclass(frozen=True)
class SumCheck:
    """One verified sum inequality; margin >= 0 means the bound holds.

    For upper bounds margin = bound - value, for lower bounds
    value - bound; interval-backed margins are conservative (measured
    from the unfavourable enclosure endpoint).
    """

    check_id: str
    params: dict
    value: object  # Fraction or mpf
    bound: object
    margin: object
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "id": self.check_id,
            "params": dict(self.params),
            "value": _fmt_value(self.value),
            "bound": _fmt_value(self.bound),
            "margin": _fmt_value(self.margin),
            "pass": self.passed,
        }

    def csv_row(self) -> list[str]:
        d = self.to_json_dict()
        params = ";".join(f"{k}={v}" for k, v in sorted(d["params"].items()))
        return [d["id"], params, d["value"], d["bound"], d["margin"], str(d["pass"])]


CSV_HEADER = ["id", "params", "value", "bound", "margin", "pass"]


# Exact rationals print as num/den up to this many bits per side
# (roughly 4000 decimal digits); larger ones fall back to a decimal at
# working precision so reports stay readable.  Checks themselves always
# compare exactly regardless of how the value is printed.
_MAX_EXACT_BITS = 13288


def _fmt_value(v) -> str:
    if isinstance(v, Fraction):
        if (
            v.numerator.bit_length() <= _MAX_EXACT_BITS
            and v.denominator.bit_length() <= _MAX_EXACT_BITS
        ):
            return f"{v.numerator}/{v.denominator}"
        return fmt_real(to_mpf(v))
    return fmt_real(v)


def _interval(fn, prec_bits: int) -> tuple[Fraction, Fraction]:
    """Exact endpoints of an interval-arithmetic evaluation."""
    old = mp.iv.prec
    try:
        mp.iv.prec = prec_bits
        x = fn(mp.iv)
    finally:
        mp.iv.prec = old
    ra, rb = x._mpi_
    return fraction_from_raw(ra), fraction_from_raw(rb)


def _log_ratio_interval(num: int, den: int, prec_bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of log(num/den) for positive integers."""
    return _interval(lambda iv: iv.log(iv.mpf(num) / iv.mpf(den)), prec_bits)


@dataclass
class RSumResult:
    M: int
    value: object  # Fraction (exact path) or mpf
    exact: bool
    checks: list[SumCheck] = field(default_factory=list)


def r_sum(
    M: int,
    exact: bool | None = None,
    prec_bits: int = DEFAULT_PREC_BITS,
) -> RSumResult:
    """R(M) = sum_{j=1}^{M-1} (j/M)^(4j) with its 1/16 and 1/30 checks.

    The exact rational path is the default up to M = 64; beyond that
    (or on request) the terms are accumulated as exp(4j log(j/M)) at
    working precision.
    """
    if not isinstance(M, int) or M < 2:
        raise ValueError(f"R(M) needs an integer M >= 2, got {M!r}")
    check_precision(prec_bits)
    if exact is None:
        exact = M <= EXACT_CUTOVER_M
    if exact:
        value: object = sum(Fraction(j, M) ** (4 * j) for j in range(1, M))
    else:
        with mp.workprec(prec_bits):
            value = mp.mpf(0)
            for j in range(1, M):
                value += mp.exp(4 * j * (mp.log(j) - mp.log(M)))
    checks = [_ratio_check("r_sum_le_1_16", {"M": M}, value, Fraction(1, 16), exact, prec_bits)]
    if M >= 5:
        checks.append(
            _ratio_check("r_sum_le_1_30", {"M": M}, value, Fraction(1, 30), exact, prec_bits)
        )
    return RSumResult(M=M, value=value, exact=exact, checks=checks)


def _ratio_check(
    check_id: str, params: dict, value, bound: Fraction, exact: bool, prec_bits: int
) -> SumCheck:
    """Upper-bound check against an exact rational bound."""
    if exact:
        margin = bound - value
        passed = margin >= 0
    else:
        with mp.workprec(prec_bits):
            margin = to_mpf(bound) - value
            passed = bool(margin >= 0)
    return SumCheck(check_id, params, value, bound, margin, bool(passed))


@dataclass
class TailSumResult:
    ell: int
    M: int
    envelope_value: Fraction
    companion_value: Fraction
    checks: list[SumCheck] = field(default_factory=list)


def tail_sum(ell: int, M: int, prec_bits: int = DEFAULT_PREC_BITS) -> TailSumResult:
    """Tail sums over j = ell+2 .. M with the 1/(e^4 - 1) bound.

    envelope_value = sum ((ell+1)/j)^(4j); companion_value is the
    smaller sum ((ell (ell+1))/j^2)^(2j) that appears when two narrowing
    factors differ, bounded by the envelope form termwise.
    """
    if not (isinstance(ell, int) and isinstance(M, int) and 1 <= ell <= M - 2):
        raise ValueError(f"need 1 <= ell <= M - 2, got ell={ell!r}, M={M!r}")
    check_precision(prec_bits)
    envelope = sum(Fraction(ell + 1, j) ** (4 * j) for j in range(ell + 2, M + 1))
    companion = sum(
        Fraction(ell * (ell + 1), j * j) ** (2 * j) for j in range(ell + 2, M + 1)
    )
    bound_lo, _ = _interval(lambda iv: 1 / (iv.exp(iv.mpf(4)) - 1), prec_bits)
    checks = [
        SumCheck(
            "tail_sum_le_inv_e4m1",
            {"ell": ell, "M": M},
            envelope,
            bound_lo,
            bound_lo - envelope,
            envelope <= bound_lo,
        ),
        SumCheck(
            "tail_companion_le_envelope",
            {"ell": ell, "M": M},
            companion,
            envelope,
            envelope - companion,
            companion <= envelope,
        ),
    ]
    return TailSumResult(
        ell=ell, M=M, envelope_value=envelope, companion_value=companion, checks=checks
    )


@dataclass
class WeightedSumResult:
    M: int
    value: mp.mpf
    bound: mp.mpf
    checks: list[SumCheck] = field(default_factory=list)


def weighted_sum(M: int, prec_bits: int = DEFAULT_PREC_BITS) -> WeightedSumResult:
    """sum_{ell=1}^{M-1} ell^(1/3) (e/2)^(4/ell) vs its cubic-root bound.

    Both sides are enclosed by interval arithmetic; the check compares
    the unfavourable endpoints, so a pass is rigorous.
    """
    if not isinstance(M, int) or M < 1:
        raise ValueError(f"M must be a positive integer, got {M!r}")
    check_precision(prec_bits)

    def lhs(iv):
        one = iv.mpf(1)
        acc = iv.mpf(0)
        log2 = iv.log(iv.mpf(2))
        for ell in range(1, M):
            root = iv.exp(iv.log(iv.mpf(ell)) / 3)
            acc += root * iv.exp((one - log2) * 4 / ell)
        return acc

    def rhs(iv):
        log2 = iv.log(iv.mpf(2))
        m13 = iv.exp(iv.log(iv.mpf(M)) / 3)
        return iv.mpf(3) / 4 * (m13 ** 4) + 12 * (1 - log2) * m13 + 3

    lhs_lo, lhs_hi = _interval(lhs, prec_bits) if M > 1 else (Fraction(0), Fraction(0))
    rhs_lo, rhs_hi = _interval(rhs, prec_bits)
    margin = rhs_lo - lhs_hi
    with mp.workprec(prec_bits):
        value = to_mpf((lhs_lo + lhs_hi) / 2)
        bound = to_mpf((rhs_lo + rhs_hi) / 2)
        check = SumCheck(
            "weighted_sum_le_cubic_bound",
            {"M": M},
            value,
            bound,
            to_mpf(margin),
            margin >= 0,
        )
    return WeightedSumResult(M=M, value=value, bound=bound, checks=[check])


@dataclass
class HarmonicBoundsResult:
    ell: int
    M: int
    lower: mp.mpf
    value: Fraction
    upper: mp.mpf
    checks: list[SumCheck] = field(default_factory=list)


def harmonic_bounds(
    ell: int, M: int, prec_bits: int = DEFAULT_PREC_BITS
) -> HarmonicBoundsResult:
    """Partial harmonic sum sum_{j=ell+1}^{M} 1/j between its log bounds."""
    if not (isinstance(ell, int) and isinstance(M, int) and M >= 2 and 1 <= ell <= M - 1):
        raise ValueError(f"need M >= 2 and 1 <= ell <= M - 1, got ell={ell!r}, M={M!r}")
    check_precision(prec_bits)
    value = sum(Fraction(1, j) for j in range(ell + 1, M + 1))
    lo_lo, lo_hi = _log_ratio_interval(M + 1, ell + 1, prec_bits)
    hi_lo, hi_hi = _log_ratio_interval(M, ell, prec_bits)
    checks = [
        SumCheck(
            "harmonic_ge_log_upper_ratio",
            {"ell": ell, "M": M},
            value,
            lo_hi,
            value - lo_hi,
            value >= lo_hi,
        ),
        SumCheck(
            "harmonic_le_log_lower_ratio",
            {"ell": ell, "M": M},
            value,
            hi_lo,
            hi_lo - value,
            value <= hi_lo,
        ),
    ]
    with mp.workprec(prec_bits):
        return HarmonicBoundsResult(
            ell=ell,
            M=M,
            lower=to_mpf((lo_lo + lo_hi) / 2),
            value=value,
            upper=to_mpf((hi_lo + hi_hi) / 2),
            checks=checks,
        )


def _tail_grid(M: int) -> list[int]:
    """Representative ell values for the tail-sum grid at one M."""
    if M <= 18:
        return list(range(1, M - 1))
    picks = {1, 2, M // 4, M // 2, M - 3, M - 2}
    return sorted(p for p in picks if 1 <= p <= M - 2)


def sum_check_suite(
    max_m: int = 64, prec_bits: int = DEFAULT_PREC_BITS
) -> list[SumCheck]:
    """Every sum check over the standard desk-scale grids.

    R(M) for all 2 <= M <= max_m (exact), plus the recorded monotone
    chain R(5) <= R(4) <= R(3) <= R(2); tail sums on a representative
    (ell, M) grid; the weighted sum and the harmonic sandwich for every
    M up to max_m.
    """
    checks: list[SumCheck] = []
    values = {}
    for M in range(2, max_m + 1):
        res = r_sum(M, exact=True)
        values[M] = res.value
        checks.extend(res.checks)
    for hi, lo in ((2, 3), (3, 4), (4, 5)):
        if hi in values and lo in values:
            checks.append(
                SumCheck(
                    "r_sum_monotone_step",
                    {"M_small": hi, "M_large": lo},
                    values[lo],
                    values[hi],
                    values[hi] - values[lo],
                    values[lo] <= values[hi],
                )
            )
    for M in range(3, max_m + 1):
        if M <= 18 or M in (24, 32, 48, 64):
            for ell in _tail_grid(M):
                checks.extend(tail_sum(ell, M, prec_bits).checks)
    for M in range(1, max_m + 1):
        checks.extend(weighted_sum(M, prec_bits).checks)
    for M in range(2, max_m + 1):
        for ell in range(1, M):
            checks.extend(harmonic_bounds(ell, M, prec_bits).checks)
    return checks
