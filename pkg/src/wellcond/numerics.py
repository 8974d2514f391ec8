"""Shared arbitrary-precision numeric helpers.

Everything in this package computes either with exact rationals
(``fractions.Fraction``) or with mpmath floats at an explicit binary
precision.  This module owns the conversions between the two worlds,
the log-domain accumulation helpers, Gauss-Legendre nodes at working
precision, and rigorous enclosures of cos(pi * q) for rational q used
by the certified condition-number path.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import mpmath as mp
from mpmath import libmp

DEFAULT_PREC_BITS = 256
MIN_PREC_BITS = 64

RationalLike = int | Fraction
RealLike = int | float | Fraction | mp.mpf


def check_precision(prec_bits: int) -> int:
    """Validate a binary precision argument (>= MIN_PREC_BITS)."""
    if not isinstance(prec_bits, int) or prec_bits < MIN_PREC_BITS:
        raise ValueError(
            f"precision must be an int >= {MIN_PREC_BITS} bits, got {prec_bits!r}"
        )
    return prec_bits


def to_mpf(x: RealLike) -> mp.mpf:
    """Convert to mpf at the current working precision.

    Fractions are rounded correctly (one rounding, via from_rational)
    rather than through a separate numerator/denominator division.
    """
    if isinstance(x, Fraction):
        return mp.mpf(libmp.from_rational(x.numerator, x.denominator, mp.mp.prec, "n"))
    return mp.mpf(x)


def fraction_from_raw(raw) -> Fraction:
    """Exact Fraction from a raw libmp tuple (sign, man, exp, bc).

    Every finite mpf is a dyadic rational, so this conversion is exact.
    Raises ValueError for inf/nan.
    """
    sign, man, exp, bc = raw
    if man == 0:
        if exp == 0 and bc == 0:
            return Fraction(0)
        raise ValueError(f"cannot convert non-finite value {raw!r} to Fraction")
    f = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -f if sign else f


def fraction_from_mpf(x: mp.mpf) -> Fraction:
    """Exact Fraction equal to a finite mpf."""
    return fraction_from_raw(x._mpf_)


def cos_pi_fraction_interval(q: RationalLike, prec_bits: int) -> tuple[Fraction, Fraction]:
    """Rigorous enclosure [lo, hi] of cos(pi * q) for rational q.

    Multiples of 1/2 are returned exactly; everything else goes through
    interval arithmetic at prec_bits and the dyadic endpoints are
    converted to Fractions without further rounding.
    """
    q = Fraction(q) % 2  # cos(pi * q) has period 2
    if q.denominator == 1:
        c = Fraction(1) if q == 0 else Fraction(-1)
        return (c, c)
    if q.denominator == 2:
        return (Fraction(0), Fraction(0))
    old = mp.iv.prec
    try:
        mp.iv.prec = prec_bits
        x = mp.iv.cos(mp.iv.pi * (mp.iv.mpf(q.numerator) / mp.iv.mpf(q.denominator)))
    finally:
        mp.iv.prec = old
    ra, rb = x._mpi_
    return (fraction_from_raw(ra), fraction_from_raw(rb))


def cos_pi_fraction(q: RationalLike) -> mp.mpf:
    """cos(pi * q) for rational q at working precision.

    Multiples of 1/2 come out exactly (0 or +-1), which lets callers
    detect exact point coincidences on uniform azimuth grids.
    """
    q = Fraction(q) % 2
    if q.denominator == 1:
        return mp.mpf(1) if q == 0 else mp.mpf(-1)
    if q.denominator == 2:
        return mp.mpf(0)
    return mp.cospi(to_mpf(q))


def log_sum_exp(terms: Iterable[mp.mpf]) -> mp.mpf:
    """log(sum(exp(t) for t in terms)) with max-shift stabilisation.

    -inf terms (logs of exact zeros) are skipped; an empty or all-(-inf)
    input yields -inf.
    """
    vals = [t for t in terms if t != mp.mpf("-inf")]
    if not vals:
        return mp.mpf("-inf")
    m = max(vals)
    acc = mp.mpf(0)
    for t in vals:
        acc += mp.exp(t - m)
    return m + mp.log(acc)


def log_dot_exp(log_weights: Sequence[mp.mpf], log_terms: Sequence[mp.mpf]) -> mp.mpf:
    """log(sum(w_k * exp(t_k))) given log(w_k), with max-shift.

    Weights must be positive (their logs finite); -inf terms are skipped.
    """
    if len(log_weights) != len(log_terms):
        raise ValueError("weight/term length mismatch")
    return log_sum_exp(lw + lt for lw, lt in zip(log_weights, log_terms))


_GL_CACHE: dict[tuple[int, int], tuple[list[mp.mpf], list[mp.mpf]]] = {}


def gauss_legendre(n: int, prec_bits: int = DEFAULT_PREC_BITS) -> tuple[list[mp.mpf], list[mp.mpf]]:
    """Gauss-Legendre nodes and weights on [-1, 1] at prec_bits.

    Exact for polynomial integrands of degree <= 2n - 1.  Nodes are
    found by Newton iteration on the Legendre recurrence, starting from
    the Chebyshev-angle approximations; results are cached per (n, prec).
    """
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    check_precision(prec_bits)
    key = (n, prec_bits)
    if key in _GL_CACHE:
        return _GL_CACHE[key]

    with mp.workprec(prec_bits + 16):
        tol = mp.mpf(2) ** (-(prec_bits + 6))
        half = []
        for k in range(n // 2 + n % 2):
            x = mp.cos(mp.pi * (k + mp.mpf(3) / 4) / (n + mp.mpf(1) / 2))
            for _ in range(100):
                p_prev, p = mp.mpf(1), x
                for j in range(2, n + 1):
                    p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
                dp = n * (x * p - p_prev) / (x * x - 1)
                dx = p / dp
                x -= dx
                if abs(dx) <= tol * (1 + abs(x)):
                    break
            else:
                raise RuntimeError(f"Legendre node {k} of {n} did not converge")
            p_prev, p = mp.mpf(1), x
            for j in range(2, n + 1):
                p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
            dp = n * (x * p - p_prev) / (x * x - 1)
            w = 2 / ((1 - x * x) * dp * dp)
            half.append((x, w))

    with mp.workprec(prec_bits):
        nodes = [mp.mpf(0)] * n
        weights = [mp.mpf(0)] * n
        for k, (x, w) in enumerate(half):
            xr, wr = +x, +w  # round to target precision
            nodes[k], weights[k] = xr, wr
            nodes[n - 1 - k], weights[n - 1 - k] = -xr, wr
        if n % 2 == 1:
            nodes[n // 2] = mp.mpf(0)

    _GL_CACHE[key] = (nodes, weights)
    return nodes, weights


def fmt_real(x, dps: int | None = None) -> str:
    """Deterministic decimal string for report output.

    dps defaults to the decimal equivalent of the current working
    precision plus a couple of guard digits.
    """
    if isinstance(x, Fraction):
        x = to_mpf(x)
    x = mp.mpf(x)
    if mp.isnan(x):
        return "nan"
    if x == mp.mpf("inf"):
        return "inf"
    if x == mp.mpf("-inf"):
        return "-inf"
    if dps is None:
        dps = mp.mp.dps + 2
    return mp.nstr(x, dps, strip_zeros=True)


def frac_str(q: RationalLike) -> str:
    """Exact "numerator/denominator" string for a rational."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(s: str) -> Fraction:
    """Inverse of frac_str; also accepts plain integer strings."""
    return Fraction(s)
