"""Normalized condition numbers of the canonical polynomials.

Two independent routes compute mu_norm for the degree-N = 4M^2 family:

* coefficient route: for each root z of f,

      mu(f, z) = sqrt(N) * (1 + |z|^2)^((N-2)/2) * ||f|| / |f'(z)|

  with ||f|| the Bombieri-Weyl norm, everything assembled in log-domain
  from exact rational data plus high-precision root values;

* spherical route: with the roots pushed onto the sphere by inverse
  stereographic projection,

      mu_max = 1/2 * sqrt(N(N+1)) * (int_S prod_j |p - p_j|^2 dsigma)^(1/2)
               / min_i prod_{j != i} |p_i - p_j|,

  where the surface integral is evaluated exactly-up-to-rounding by a
  Gauss-Legendre x uniform-azimuth product rule (the integrand is a
  polynomial of degree N in the height and a trigonometric polynomial
  of degree N in the azimuth).

The certified path re-derives the coefficient route in exact rational
interval arithmetic: for the canonical family every quantity in mu^2 is
rational except cos(2 pi k r / r'), which is enclosed by directed
rounding, so each bound verdict is a machine-checked inequality between
rationals (or reported inconclusive, never falsely passed).

Distance products against a full parallel use the closed form

    Theta(r, h, c, dphi) = prod_i |p - q_i|^2
                         = (x^r - y^r)^2 + 2 (xy)^r (1 - cos(r dphi)),
    x = sqrt((1-c)(1+h)),  y = sqrt((1+c)(1-h)),

for a query point at height c and azimuth offset dphi from the r
uniformly spaced points at height h; the two-term form is a sum of
non-negative terms, so it never cancels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath as mp

from .numerics import (
    DEFAULT_PREC_BITS,
    check_precision,
    cos_pi_fraction,
    cos_pi_fraction_interval,
    fmt_real,
    frac_str,
    gauss_legendre,
    log_dot_exp,
    log_sum_exp,
    to_mpf,
)
from .points import Parallel, PointSet, build_point_set
from .polynomials import (
    DensePolynomial,
    MultipleRootError,
    RootEntry,
    bombieri_norm_sq,
    canonical_factor_parallel,
    canonical_polynomial,
    derivative_modulus_at_root,
    expand,
    roots,
)

LOWER_CONST = Fraction(227, 500)  # 0.454, the floor on mu_max / sqrt(N)


@dataclass
class ConditionReport:
    """Outcome of one condition-number computation.

    verdicts maps bound ids to True/False, or None when a certified run
    could not resolve the comparison at the precision cap.
    """

    M: int | None
    N: int
    route: str
    precision_bits: int
    mu_max: mp.mpf
    log_mu_max: mp.mpf
    per_root: list[tuple[str, mp.mpf]]
    verdicts: dict[str, bool | None]
    certified: bool
    extras: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {
            "M": self.M,
            "N": self.N,
            "route": self.route,
            "precision_bits": self.precision_bits,
            "mu_max": fmt_real(self.mu_max),
            "log_mu_max": fmt_real(self.log_mu_max),
            "per_root": [
                {"root": rid, "log_mu": fmt_real(lm)} for rid, lm in self.per_root
            ],
            "verdicts": dict(self.verdicts),
            "certified": self.certified,
        }
        out.update(self.extras)
        return out


@dataclass(frozen=True)
class NumeratorIntegral:
    """log of int_S prod_j |p - p_j|^2 dsigma plus quadrature metadata."""

    log_value: mp.mpf
    gl_nodes: int
    azimuth_nodes: int
    undersampled: bool


def _bound_verdicts(mu_max: mp.mpf, N: int) -> dict[str, bool | None]:
    """Float-path verdicts for the three standard bounds."""
    sqrt_np1 = mp.sqrt(mp.mpf(N + 1))
    return {
        "le_N": bool(mu_max <= N),
        "le_19half_sqrt": bool(mu_max <= mp.mpf(19) / 2 * sqrt_np1),
        "ge_lower": bool(mu_max >= to_mpf(LOWER_CONST) * mp.sqrt(mp.mpf(N))),
    }


def mu_at_root(
    f: DensePolynomial,
    root_list: Sequence[RootEntry],
    i: int,
    prec_bits: int = DEFAULT_PREC_BITS,
) -> mp.mpf:
    """mu(f, z_i); +inf when z_i is a repeated root (1/|f'| blows up)."""
    lm = log_mu_at_root(f, root_list, i, prec_bits)
    with mp.workprec(prec_bits):
        return mp.exp(lm) if mp.isfinite(lm) else mp.mpf("+inf")


def log_mu_at_root(
    f: DensePolynomial,
    root_list: Sequence[RootEntry],
    i: int,
    prec_bits: int = DEFAULT_PREC_BITS,
) -> mp.mpf:
    """log mu(f, z_i) in log-domain; +inf sentinel at repeated roots."""
    check_precision(prec_bits)
    N = f.degree
    if N < 1:
        raise ValueError("condition number needs degree >= 1")
    try:
        log_fp = derivative_modulus_at_root(
            root_list, i, leading=f.leading, prec_bits=prec_bits
        )
    except MultipleRootError:
        return mp.mpf("+inf")
    norm_sq = bombieri_norm_sq(f)
    z = root_list[i].value
    with mp.workprec(prec_bits):
        mod_sq = z.real * z.real + z.imag * z.imag
        return (
            mp.log(N) / 2
            + mp.mpf(N - 2) / 2 * mp.log(1 + mod_sq)
            + mp.log(to_mpf(norm_sq)) / 2
            - log_fp
        )


def mu_max_coefficient_route(
    M: int, prec_bits: int = DEFAULT_PREC_BITS
) -> ConditionReport:
    """max mu over all roots of the canonical polynomial, coefficient route."""
    check_precision(prec_bits)
    fac = canonical_polynomial(M)
    dense = expand(fac)
    root_list = roots(fac, prec_bits)
    per_root: list[tuple[str, mp.mpf]] = []
    for i, entry in enumerate(root_list):
        par = canonical_factor_parallel(M, entry.factor)
        lm = log_mu_at_root(dense, root_list, i, prec_bits)
        per_root.append((f"p{par}.k{entry.azimuth}", lm))
    with mp.workprec(prec_bits):
        log_mu_max = max(lm for _, lm in per_root)
        mu_max = mp.exp(log_mu_max)
        verdicts = _bound_verdicts(mu_max, dense.degree)
    return ConditionReport(
        M=M,
        N=dense.degree,
        route="coefficient",
        precision_bits=prec_bits,
        mu_max=mu_max,
        log_mu_max=log_mu_max,
        per_root=per_root,
        verdicts=verdicts,
        certified=False,
    )


def _sin_pi_fraction_sq_twice(q: Fraction) -> mp.mpf:
    """2 sin^2(pi q / 2) = 1 - cos(pi q), exact at multiples of 1/2."""
    s = cos_pi_fraction(q / 2 - Fraction(1, 2))
    return 2 * s * s


def _theta_terms(r: int, h, c, prec_bits: int) -> tuple[mp.mpf, mp.mpf]:
    """(gap, rim) with Theta = gap + rim * (1 - cos(r dphi)).

    gap = (x^r - y^r)^2 is the squared product of distances at aligned
    azimuth; rim = 2 (xy)^r scales the azimuthal modulation.
    """
    one = Fraction(1)
    if isinstance(h, (int, Fraction)) and isinstance(c, (int, Fraction)):
        x2 = to_mpf((one - c) * (one + h))
        y2 = to_mpf((one + c) * (one - h))
    else:
        hm, cm = to_mpf(h), to_mpf(c)
        x2 = (1 - cm) * (1 + hm)
        y2 = (1 + cm) * (1 - hm)
    if x2 < 0 or y2 < 0:
        raise ValueError("heights must lie in [-1, 1]")
    x, y = mp.sqrt(x2), mp.sqrt(y2)
    xr, yr = x**r, y**r
    d = xr - yr
    return d * d, 2 * xr * yr


def theta_product(
    r: int, h, c, dphi, prec_bits: int = DEFAULT_PREC_BITS
) -> mp.mpf:
    """prod over the r points at height h of |p - q_i|^2.

    The query point sits at height c with azimuth offset dphi (radians)
    from the first of the r uniformly spaced points.  Zero is returned
    exactly when the query coincides with a point of the parallel.
    """
    if not isinstance(r, int) or r < 1:
        raise ValueError(f"point count must be a positive integer, got {r!r}")
    check_precision(prec_bits)
    with mp.workprec(prec_bits):
        gap, rim = _theta_terms(r, h, c, prec_bits)
        vers = 1 - mp.cos(r * to_mpf(dphi))
        return gap + rim * vers


def theta_product_log_turn(
    r: int, h, c, turn: Fraction, prec_bits: int = DEFAULT_PREC_BITS
) -> mp.mpf:
    """log Theta with the azimuth offset given as a multiple of pi.

    Rational turns keep coincidences exact: the result is -inf precisely
    when the query point equals a parallel point.
    """
    check_precision(prec_bits)
    with mp.workprec(prec_bits):
        gap, rim = _theta_terms(r, h, c, prec_bits)
        vers = _sin_pi_fraction_sq_twice(r * turn)
        return mp.log(gap + rim * vers)


def parallel_self_product_log(
    r: int, h, prec_bits: int = DEFAULT_PREC_BITS
) -> mp.mpf:
    """log prod_{k=1}^{r-1} |p_k - p_0| within one parallel.

    For r equally spaced points on a circle of radius sqrt(1 - h^2) the
    product of distances from any fixed point to all others is
    r * radius^(r-1), i.e. the log is log r + (r-1)/2 * log(1 - h^2).
    A single-point parallel gives the empty product, log 1 = 0.
    """
    if not isinstance(r, int) or r < 1:
        raise ValueError(f"point count must be a positive integer, got {r!r}")
    check_precision(prec_bits)
    if r == 1:
        return mp.mpf(0)
    if isinstance(h, (int, Fraction)):
        if abs(h) >= 1:
            raise ValueError("parallel height must satisfy |h| < 1")
        rad_sq = to_mpf(1 - Fraction(h) ** 2)
    else:
        hm = to_mpf(h)
        if abs(hm) >= 1:
            raise ValueError("parallel height must satisfy |h| < 1")
        rad_sq = (1 - hm) * (1 + hm)
    with mp.workprec(prec_bits):
        return mp.log(r) + mp.mpf(r - 1) / 2 * mp.log(rad_sq)


def _parallels_of(point_set) -> list[Parallel]:
    if isinstance(point_set, PointSet):
        return point_set.parallels
    return list(point_set)


def numerator_integral_log(
    point_set,
    prec_bits: int = DEFAULT_PREC_BITS,
    gl_nodes: int | None = None,
    azimuth_nodes: int | None = None,
    node_margin: int = 16,
) -> NumeratorIntegral:
    """log of int_S prod_j |p - p_j|^2 dsigma(p) over the whole family.

    After averaging over the azimuth the integrand is a polynomial of
    degree N in the height (all parallel point counts are even for the
    canonical family), so gl_nodes >= ceil((N+1)/2) Gauss-Legendre nodes
    and azimuth_nodes >= N+1 uniform azimuth samples integrate it
    exactly up to rounding.  Smaller custom node counts are accepted but
    flagged undersampled.
    """
    check_precision(prec_bits)
    parallels = _parallels_of(point_set)
    N = sum(par.count for par in parallels)
    need_gl = (N + 1 + 1) // 2
    need_az = N + 1
    n_gl = gl_nodes if gl_nodes is not None else need_gl + node_margin
    n_az = azimuth_nodes if azimuth_nodes is not None else need_az + node_margin
    if n_gl < 1 or n_az < 1:
        raise ValueError("node counts must be positive")
    undersampled = n_gl < need_gl or n_az < need_az

    nodes, weights = gauss_legendre(n_gl, prec_bits)
    with mp.workprec(prec_bits):
        # Azimuthal modulation factors 1 - cos(r_j (alpha_m - phase_j)):
        # they do not depend on the height node, so build them once.
        vers_table: list[list[mp.mpf]] = []
        for par in parallels:
            row = []
            for m in range(n_az):
                turn = Fraction(2 * m, n_az)
                if par.phase == 0:
                    row.append(_sin_pi_fraction_sq_twice(par.count * turn))
                else:
                    ang = par.count * (to_mpf(turn) * mp.pi - par.phase)
                    row.append(1 - mp.cos(ang))
            vers_table.append(row)

        log_w = [mp.log(w) for w in weights]
        log_height_means: list[mp.mpf] = []
        for c in nodes:
            terms = []
            for par in parallels:
                gap, rim = _theta_terms(par.count, par.height, c, prec_bits)
                terms.append((gap, rim))
            log_f = []
            for m in range(n_az):
                prod = mp.mpf(1)
                for (gap, rim), row in zip(terms, vers_table):
                    prod *= gap + rim * row[m]
                log_f.append(mp.log(prod) if prod > 0 else mp.mpf("-inf"))
            log_height_means.append(log_sum_exp(log_f) - mp.log(n_az))
        log_integral = log_dot_exp(log_w, log_height_means) - mp.log(2)

    return NumeratorIntegral(
        log_value=log_integral,
        gl_nodes=n_gl,
        azimuth_nodes=n_az,
        undersampled=undersampled,
    )


def point_gap_product_log(
    point_set: PointSet,
    parallel_index: int,
    azimuth: int,
    prec_bits: int = DEFAULT_PREC_BITS,
) -> mp.mpf:
    """log prod over all other family points of |p - p_other|.

    Splits into the closed-form product within the point's own parallel
    and a Theta product per other parallel.
    """
    check_precision(prec_bits)
    parallels = _parallels_of(point_set)
    own = parallels[parallel_index - 1]
    if own.index != parallel_index:
        raise ValueError("parallel list is not indexed contiguously")
    with mp.workprec(prec_bits):
        total = parallel_self_product_log(own.count, own.height, prec_bits)
        own_turn = Fraction(2 * azimuth, own.count)
        for par in parallels:
            if par.index == parallel_index:
                continue
            if own.phase == 0 and par.phase == 0:
                total += theta_product_log_turn(
                    par.count, par.height, own.height, own_turn, prec_bits
                ) / 2
            else:
                dphi = (own.phase + to_mpf(own_turn) * mp.pi) - par.phase
                total += mp.log(
                    theta_product(par.count, par.height, own.height, dphi, prec_bits)
                ) / 2
        return total


def spherical_condition_of_point_set(
    point_set: PointSet,
    prec_bits: int = DEFAULT_PREC_BITS,
    gl_nodes: int | None = None,
    azimuth_nodes: int | None = None,
    node_margin: int = 16,
    reduce_symmetry: bool = False,
) -> ConditionReport:
    """Spherical-route mu_max for an arbitrary parallel-structured family.

    reduce_symmetry exploits the quarter-turn invariance of zero-phase
    families (all counts divisible by 4): only azimuth representatives
    k < r/4 are evaluated.  The reduction never changes the maximum.
    """
    check_precision(prec_bits)
    num = numerator_integral_log(
        point_set, prec_bits, gl_nodes, azimuth_nodes, node_margin
    )
    N = sum(par.count for par in point_set.parallels)
    reducible = reduce_symmetry and all(
        par.phase == 0 and par.count % 4 == 0 for par in point_set.parallels
    )
    per_root: list[tuple[str, mp.mpf]] = []
    with mp.workprec(prec_bits):
        base = (
            -mp.log(2)
            + (mp.log(N) + mp.log(N + 1)) / 2
            + num.log_value / 2
        )
        for par in point_set.parallels:
            ks = range(par.count // 4) if reducible else range(par.count)
            for k in ks:
                gap_log = point_gap_product_log(point_set, par.index, k, prec_bits)
                per_root.append((f"p{par.index}.k{k}", base - gap_log))
        log_mu_max = max(lm for _, lm in per_root)
        mu_max = mp.exp(log_mu_max)
        verdicts = _bound_verdicts(mu_max, N)
    return ConditionReport(
        M=point_set.M,
        N=N,
        route="spherical",
        precision_bits=prec_bits,
        mu_max=mu_max,
        log_mu_max=log_mu_max,
        per_root=per_root,
        verdicts=verdicts,
        certified=False,
        extras={
            "gl_nodes": num.gl_nodes,
            "azimuth_nodes": num.azimuth_nodes,
            "quadrature_undersampled": num.undersampled,
            "symmetry_reduced": bool(reducible),
        },
    )


def mu_max_spherical_route(
    M: int,
    prec_bits: int = DEFAULT_PREC_BITS,
    phases: Sequence | None = None,
    gl_nodes: int | None = None,
    azimuth_nodes: int | None = None,
    node_margin: int = 16,
    reduce_symmetry: bool = False,
) -> ConditionReport:
    """Spherical-route mu_max for the canonical family of parameter M."""
    ps = build_point_set(M, phases=phases, prec_bits=prec_bits)
    return spherical_condition_of_point_set(
        ps, prec_bits, gl_nodes, azimuth_nodes, node_margin, reduce_symmetry
    )


# ----------------------------------------------------------------------
# Certified route: exact rationals plus directed-rounded cosines.
# ----------------------------------------------------------------------


def _canonical_factor_data(M: int) -> list[tuple[int, Fraction, Fraction]]:
    """(power r, shift s, squared root modulus rho^2) per canonical factor."""
    out = [(4 * M, Fraction(1), Fraction(1))]
    for j in range(1, M):
        rho_sq = Fraction(2 * M * M - j * j, j * j)
        s = rho_sq ** (2 * j)
        out.append((4 * j, s, rho_sq))
        out.append((4 * j, 1 / s, 1 / rho_sq))
    return out


def _mu_sq_intervals(
    M: int, cos_prec: int
) -> list[tuple[str, Fraction, Fraction]]:
    """Rigorous [lo, hi] enclosures of mu^2 at every root.

    mu^2 = N (1 + rho^2)^(N-2) ||f||^2 / |f'(z)|^2 and

        |f'(z)|^2 = r_k^2 rho^(2(r_k-1))
                    * prod_{m != k} (rho^(2 r_m) + s_m^2
                                     - 2 rho^(r_m) s_m cos(2 pi r_m t / r_k))

    for the azimuth-t root of factor k.  Everything here is an exact
    rational except the cosines, which get interval enclosures at
    cos_prec bits; distinct factor moduli keep every product term
    strictly positive, so interval division is safe.
    """
    data = _canonical_factor_data(M)
    N = sum(r for r, _, _ in data)
    norm_sq = bombieri_norm_sq(expand(canonical_polynomial(M)))
    cos_cache: dict[Fraction, tuple[Fraction, Fraction]] = {}

    def cos_iv(q: Fraction) -> tuple[Fraction, Fraction]:
        q = q % 2
        if q not in cos_cache:
            lo, hi = cos_pi_fraction_interval(q, cos_prec)
            cos_cache[q] = (max(lo, Fraction(-1)), min(hi, Fraction(1)))
        return cos_cache[q]

    out: list[tuple[str, Fraction, Fraction]] = []
    for k, (r_k, _, rho_sq) in enumerate(data):
        parallel = canonical_factor_parallel(M, k)
        numer = N * (1 + rho_sq) ** (N - 2) * norm_sq
        fixed = Fraction(r_k * r_k) * rho_sq ** (r_k - 1)
        for t in range(r_k):
            d_lo, d_hi = fixed, fixed
            for m, (r_m, s_m, _) in enumerate(data):
                if m == k:
                    continue
                a = rho_sq**r_m + s_m * s_m
                b = 2 * rho_sq ** (r_m // 2) * s_m
                c_lo, c_hi = cos_iv(Fraction(2 * r_m * t, r_k))
                term_lo = a - b * c_hi
                term_hi = a - b * c_lo
                d_lo, d_hi = d_lo * term_lo, d_hi * term_hi
            out.append((f"p{parallel}.k{t}", numer / d_hi, numer / d_lo))
    return out


def certify_bound(
    M: int,
    prec_bits: int = DEFAULT_PREC_BITS,
    max_prec_bits: int | None = None,
) -> ConditionReport:
    """Certified verdicts for the three standard bounds on mu_max.

    Compares the rigorous mu_max^2 enclosure against N^2,
    (19/2)^2 (N+1) and (227/500)^2 N in exact rational arithmetic,
    doubling the cosine precision until each verdict resolves or the
    cap (default 16x the working precision) is reached; unresolved
    comparisons are reported as None, never as a pass.
    """
    check_precision(prec_bits)
    if max_prec_bits is None:
        max_prec_bits = 16 * prec_bits
    N = 4 * M * M
    thresholds = {
        "le_N": (Fraction(N) ** 2, "upper"),
        "le_19half_sqrt": (Fraction(361, 4) * (N + 1), "upper"),
        "ge_lower": (LOWER_CONST**2 * N, "lower"),
    }
    verdicts: dict[str, bool | None] = {k: None for k in thresholds}
    cos_prec = prec_bits
    intervals: list[tuple[str, Fraction, Fraction]] = []
    while True:
        intervals = _mu_sq_intervals(M, cos_prec)
        max_lo = max(lo for _, lo, _ in intervals)
        max_hi = max(hi for _, _, hi in intervals)
        for key, (thresh, side) in thresholds.items():
            if side == "upper":
                verdicts[key] = (
                    True if max_hi <= thresh
                    else False if max_lo > thresh
                    else None
                )
            else:
                verdicts[key] = (
                    True if max_lo >= thresh
                    else False if max_hi < thresh
                    else None
                )
        if all(v is not None for v in verdicts.values()):
            break
        if cos_prec >= max_prec_bits:
            break
        cos_prec = min(2 * cos_prec, max_prec_bits)

    with mp.workprec(prec_bits):
        mu_lo = mp.sqrt(to_mpf(max_lo))
        mu_hi = mp.sqrt(to_mpf(max_hi))
        mu_mid = (mu_lo + mu_hi) / 2
        log_mu = mp.log(mu_mid)
        per_root = [
            (rid, mp.log(to_mpf((lo + hi) / 2)) / 2) for rid, lo, hi in intervals
        ]
        # Verdicts come from the exact rational comparison above; the
        # extras are decimal views of the enclosure, widened by an ulp
        # so lo <= true mu_max <= hi survives the formatting rounding.
        slack = mp.mpf(2) ** (8 - prec_bits)
        extras = {
            "mu_max_lo": fmt_real(mu_lo * (1 - slack)),
            "mu_max_hi": fmt_real(mu_hi * (1 + slack)),
            "cos_precision_bits": cos_prec,
        }
    return ConditionReport(
        M=M,
        N=N,
        route="coefficient-certified",
        precision_bits=prec_bits,
        mu_max=mu_mid,
        log_mu_max=log_mu,
        per_root=per_root,
        verdicts=verdicts,
        certified=all(v is not None for v in verdicts.values()),
        extras=extras,
    )
