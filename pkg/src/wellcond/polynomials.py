"""Polynomials with prescribed root moduli, kept exact where possible.

The canonical degree-N = 4M^2 family is a product of binomials

    P(z) = (z^(4M) - 1) * prod_{j=1}^{M-1} (z^(r_j) - s_j)(z^(r_j) - 1/s_j),

with r_j = 4j and s_j = rho_j^(r_j) for rho_j^2 = (2M^2 - j^2)/j^2, so
every s_j is an explicit positive rational.  The roots of the factor
(z^r - s) are the r-th roots of s, all of modulus s^(1/r); under inverse
stereographic projection they land on the parallel of height h with
rho(h)^2 = (1+h)/(1-h).

Expansion, Bombieri-Weyl norms and derivatives stay in exact rational
arithmetic; root values and evaluation use mpmath at a caller-chosen
binary precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath as mp

from .numerics import (
    DEFAULT_PREC_BITS,
    check_precision,
    cos_pi_fraction,
    frac_str,
    to_mpf,
)


class MultipleRootError(ValueError):
    """Raised when a derivative product hits a repeated root exactly."""


@dataclass(frozen=True)
class Factor:
    """A binomial factor z^power - shift with positive rational shift."""

    power: int
    shift: Fraction

    def __post_init__(self):
        if self.power < 1:
            raise ValueError(f"factor power must be >= 1, got {self.power}")
        if self.shift <= 0:
            raise ValueError(f"factor shift must be positive, got {self.shift}")


@dataclass(frozen=True)
class FactorizedPolynomial:
    """A product of binomial factors; degree is the sum of the powers."""

    factors: tuple[Factor, ...]

    @property
    def degree(self) -> int:
        return sum(f.power for f in self.factors)

    def to_json_dict(self) -> dict:
        return {
            "N": self.degree,
            "factors": [
                {"r": f.power, "s": frac_str(f.shift)} for f in self.factors
            ],
        }


@dataclass(frozen=True)
class DensePolynomial:
    """Exact rational coefficients, ascending order; degree = len - 1."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a polynomial needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1]

    def to_json_dict(self) -> dict:
        return {
            "N": self.degree,
            "coeffs": [frac_str(c) for c in self.coeffs],
        }


@dataclass(frozen=True)
class RootEntry:
    """One root: complex value plus (factor, azimuth) bookkeeping."""

    value: mp.mpc
    factor: int
    azimuth: int


def canonical_polynomial(M: int) -> FactorizedPolynomial:
    """The degree-4M^2 product with one factor pair per off-equator parallel.

    Factor order: the equatorial (z^(4M) - 1) first, then for j = 1..M-1
    the pair (z^(4j) - s_j), (z^(4j) - 1/s_j) with s_j the (4j)-th power
    of the modulus sqrt((2M^2 - j^2))/j.
    """
    if not isinstance(M, int) or M < 1:
        raise ValueError(f"M must be a positive integer, got {M!r}")
    factors = [Factor(power=4 * M, shift=Fraction(1))]
    for j in range(1, M):
        rho_sq = Fraction(2 * M * M - j * j, j * j)
        s = rho_sq ** (2 * j)  # (rho^2)^(r_j / 2) = rho^(4j)
        factors.append(Factor(power=4 * j, shift=s))
        factors.append(Factor(power=4 * j, shift=1 / s))
    return FactorizedPolynomial(factors=tuple(factors))


def canonical_factor_parallel(M: int, factor_index: int) -> int:
    """Parallel index carrying the roots of the given canonical factor.

    Factor 0 is equatorial (parallel M); factor 2j-1 sits on the northern
    parallel j and factor 2j on its southern mirror 2M - j.
    """
    if factor_index == 0:
        return M
    j = (factor_index + 1) // 2
    if not 1 <= j <= M - 1:
        raise ValueError(f"factor index {factor_index} out of range for M={M}")
    return j if factor_index % 2 == 1 else 2 * M - j


def expand(f: FactorizedPolynomial) -> DensePolynomial:
    """Multiply the binomial factors into exact dense coefficients."""
    coeffs = [Fraction(1)]
    for fac in f.factors:
        new = [Fraction(0)] * (len(coeffs) + fac.power)
        for i, c in enumerate(coeffs):
            if c:
                new[i + fac.power] += c
                new[i] -= fac.shift * c
        coeffs = new
    return DensePolynomial(coeffs=tuple(coeffs))


def derivative(p: DensePolynomial) -> DensePolynomial:
    """Exact formal derivative."""
    if p.degree == 0:
        return DensePolynomial(coeffs=(Fraction(0),))
    return DensePolynomial(
        coeffs=tuple(i * c for i, c in enumerate(p.coeffs) if i > 0)
    )


def bombieri_norm_sq(p: DensePolynomial) -> Fraction:
    """Squared Bombieri-Weyl norm: sum_i binom(N, i)^-1 * a_i^2.

    Exact over the rationals.  This is the norm invariant under the
    unitary action on homogenisations, which is what makes condition
    numbers comparable across the sphere.
    """
    N = p.degree
    return sum(
        c * c / math.comb(N, i) for i, c in enumerate(p.coeffs)
    )


def roots(f: FactorizedPolynomial, prec_bits: int = DEFAULT_PREC_BITS) -> list[RootEntry]:
    """All degree-many roots, grouped by factor.

    The factor (z^r - s) contributes s^(1/r) * exp(2 pi i k / r) for
    k = 0..r-1.  Azimuth cosines at rational multiples of pi are exact,
    so roots on the coordinate axes come out exact.
    """
    check_precision(prec_bits)
    out: list[RootEntry] = []
    with mp.workprec(prec_bits):
        for fi, fac in enumerate(f.factors):
            modulus = mp.root(to_mpf(fac.shift), fac.power)
            for k in range(fac.power):
                turn = Fraction(2 * k, fac.power)
                ca = cos_pi_fraction(turn)
                sa = cos_pi_fraction(turn - Fraction(1, 2))
                out.append(
                    RootEntry(
                        value=mp.mpc(modulus * ca, modulus * sa),
                        factor=fi,
                        azimuth=k,
                    )
                )
    return out


def evaluate(p: DensePolynomial, z) -> mp.mpc:
    """Horner evaluation at the current working precision."""
    z = mp.mpc(z)
    acc = mp.mpc(0)
    for c in reversed(p.coeffs):
        acc = acc * z + to_mpf(c)
    return acc


def derivative_modulus_at_root(
    root_list: Sequence[RootEntry],
    i: int,
    leading: Fraction = Fraction(1),
    prec_bits: int = DEFAULT_PREC_BITS,
) -> mp.mpf:
    """log |f'(z_i)| via the product over root differences.

    For f = leading * prod (z - z_j) the derivative at a simple root is
    leading * prod_{j != i} (z_i - z_j).  The result is returned as a
    log since the product of N - 1 gaps spans hundreds of orders of
    magnitude for large degrees.  An exactly repeated root raises
    MultipleRootError.
    """
    check_precision(prec_bits)
    zi = root_list[i].value
    with mp.workprec(prec_bits):
        acc = mp.log(abs(to_mpf(leading)))
        for j, entry in enumerate(root_list):
            if j == i:
                continue
            d = zi - entry.value
            gap_sq = d.real * d.real + d.imag * d.imag
            if gap_sq == 0:
                raise MultipleRootError(
                    f"roots {i} and {j} coincide; derivative product vanishes"
                )
            acc += mp.log(gap_sq) / 2
        return acc
