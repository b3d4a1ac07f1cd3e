"""Closed-form model oracles: the parabolic arc, Mordell-Tornheim / Witten
SU(3) series, the special domain L, the prescribed-pole staircase domains,
and a Riemann zeta helper.

The parabolic arc is sqrt(x) + sqrt(y) = 1 joining (1, 0) and (0, 1); its
support values are gamma_{a,b} = a*b/(a+b), so the support defect of a
unimodular normal pair is 1/((a+b)(c+d)(a+b+c+d)) and the boundary series is
the primitive Mordell-Tornheim double series sum over coprime (p, q) of
(p*q*(p+q))^(-s).  The special domain

    L = { |x|, |y| <= 1 : sqrt(1-|x|) + sqrt(1-|y|) >= 1 }

has four such arcs and zeta function (8 - 2^(2-s) zeta_SU3(s)/zeta(3s)) / (s(s-1)).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .estimates import SeriesEstimate
from .lattice import UnimodularQuadruple

# ---------------------------------------------------------------------------
# Riemann zeta: Euler-Maclaurin as the primary route, an accelerated
# alternating (eta) series as the independent cross-check.

# B_2, B_4, ..., B_24
_BERNOULLI_EVEN = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
    Fraction(43867, 798), Fraction(-174611, 330), Fraction(854513, 138),
    Fraction(-236364091, 2730),
]


def riemann_zeta(s: complex, terms: int = 24) -> complex:
    """zeta(s) for Re(s) > 0, s != 1, by Euler-Maclaurin summation.

    Relative error <= 1e-12 for moderate |s| (|Im s| up to a few tens).
    """
    s = complex(s)
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    if s.real <= 0:
        raise ValueError("only Re(s) > 0 is supported")
    n = terms
    out = sum(k ** (-s) for k in range(1, n))
    out += n ** (1 - s) / (s - 1) + 0.5 * n ** (-s)
    # correction terms B_2k/(2k)! * (s)(s+1)...(s+2k-2) * n^(-s-2k+1)
    poch = s  # rising factorial (s)_{2k-1}, built incrementally
    fact = 1.0
    for k, b2k in enumerate(_BERNOULLI_EVEN, start=1):
        fact *= (2 * k - 1) * (2 * k)
        out += float(b2k) / fact * poch * n ** (-s - 2 * k + 1)
        poch *= (s + 2 * k - 1) * (s + 2 * k)
    return out


def riemann_zeta_eta(s: complex, terms: int = 40) -> complex:
    """zeta via the alternating eta series with Cohen-Rodriguez Villegas-Zagier
    acceleration; independent of the Euler-Maclaurin route."""
    s = complex(s)
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    n = terms
    d = (3 + math.sqrt(8)) ** n
    d = (d + 1 / d) / 2
    b, c, out = -1.0, -d, 0j
    for k in range(n):
        c = b - c
        out += c * (k + 1) ** (-s)
        b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1))
    eta = out / d
    return eta / (1 - 2 ** (1 - s))


# ---------------------------------------------------------------------------
# Parabolic arc oracles (exact rational).


def parabola_support(a: int, b: int) -> Fraction:
    """Support value gamma_{a,b} = a*b/(a+b) of the arc sqrt(x)+sqrt(y)=1."""
    if a < 0 or b < 0:
        raise ValueError("direction entries must be nonnegative")
    if a == 0 and b == 0:
        raise ValueError("direction (0, 0) has no supporting line")
    if a == 0 or b == 0:
        return Fraction(0)
    return Fraction(a * b, a + b)


def parabola_defect(quad: UnimodularQuadruple) -> Fraction:
    """Support defect 1/((a+b)(c+d)(a+b+c+d)) of a unimodular normal pair."""
    a, b, c, d = quad.as_tuple()
    return Fraction(1, (a + b) * (c + d) * (a + b + c + d))


# ---------------------------------------------------------------------------
# Mordell-Tornheim / Witten SU(3) series.


def _mt_term_sums(s: complex, p_max: int, coprime_only: bool) -> tuple[complex, int]:
    s = complex(s)
    total = 0j
    count = 0
    q = np.arange(1, p_max + 1, dtype=np.int64)
    qf = q.astype(np.float64)
    for p in range(1, p_max + 1):
        vals = (p * qf * (p + qf)) ** (-s)
        if coprime_only:
            mask = np.gcd(q, p) == 1
            total += vals[mask].sum()
            count += int(mask.sum())
        else:
            total += vals.sum()
            count += p_max
    return total, count


def _mt_tail_bound(sigma: float, p_max: int) -> float:
    # crude bound: sum over max(p,q) > P of (pq(p+q))^-sigma
    #             <= 2 * sum_{p>P} p^-2sigma * zeta(sigma) for sigma > 1-ish;
    # integral-estimate version keeps it finite for sigma > 2/3
    if sigma <= 2 / 3:
        return math.inf
    return 2.0 * p_max ** (1 - 2 * sigma) / max(2 * sigma - 1, 1e-9) * (1 + 1 / max(sigma - 0.5, 0.2))


def mordell_tornheim_primitive(s: complex, p_max: int) -> SeriesEstimate:
    """Primitive Mordell-Tornheim value: sum over coprime p, q <= p_max of
    (p*q*(p+q))^(-s).  Equals the parabolic boundary series."""
    if p_max < 2:
        raise ValueError("p_max must be at least 2")
    total, count = _mt_term_sums(s, p_max, coprime_only=True)
    return SeriesEstimate(value=total, cutoff=float(p_max), terms_used=count,
                          tail_hint=_mt_tail_bound(complex(s).real, p_max))


def witten_su3(s: complex, cutoff: int) -> SeriesEstimate:
    """zeta_SU(3)(s) = 2^s * sum over all p, q <= cutoff of (pq(p+q))^(-s)."""
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    total, count = _mt_term_sums(s, cutoff, coprime_only=False)
    scale = 2 ** complex(s)
    tail = _mt_tail_bound(complex(s).real, cutoff)
    return SeriesEstimate(value=scale * total, cutoff=float(cutoff), terms_used=count,
                          tail_hint=abs(scale) * tail if math.isfinite(tail) else None)


# Known analytic data for zeta_SU(3) (recorded, not recomputed):
# simple poles at s = 2/3 and s = 1/2 - k, and the special value at 0 used by
# the residue of Z_L at 0.
ZETA_SU3_AT_0 = Fraction(1, 3)
ZETA_AT_0 = Fraction(-1, 2)


def residue_su3_two_thirds() -> float:
    """Res_{s=2/3} zeta_SU(3)(s) = (4^(1/3) / (2 pi sqrt(3))) Gamma(1/3)^3."""
    g = math.gamma(1 / 3.0)
    return 4 ** (1 / 3.0) / (2 * math.pi * math.sqrt(3)) * g**3


def residue_zeta_L_two_thirds() -> float:
    """Res_{s=2/3} Z_L(s) = (18 sqrt(3) / pi^3) Gamma(1/3)^3."""
    g = math.gamma(1 / 3.0)
    return 18 * math.sqrt(3) / math.pi**3 * g**3


def residue_zeta_L_zero() -> Fraction:
    """Res_{s=0} Z_L(s) = -(8 - 4 zeta_SU3(0)/zeta(0)) = -32/3."""
    return -(8 - 4 * ZETA_SU3_AT_0 / ZETA_AT_0)


def equiaffine_residue_constant() -> float:
    """Res_{s=2/3} Z_Omega per unit equiaffine boundary length:
    (9 sqrt(3) / (2 * 4^(1/3) * pi^3)) Gamma(1/3)^3."""
    g = math.gamma(1 / 3.0)
    return 9 * math.sqrt(3) / (2 * 4 ** (1 / 3.0) * math.pi**3) * g**3


def boundary_residue_constant() -> float:
    """Res_{s=2/3} F_Gamma per unit equiaffine arc length:
    (sqrt(3) / (4^(1/3) pi^3)) Gamma(1/3)^3  (the interior constant / (9/2))."""
    return equiaffine_residue_constant() / 4.5


def zeta_L(s: complex, cutoff: int = 400) -> complex:
    """Z_L(s) = (8 - 2^(2-s) zeta_SU3(s)/zeta(3s)) / (s(s-1)), series truncated
    at the given cutoff.  s = 0, 1 are poles; use the residue helpers there."""
    s = complex(s)
    if s in (0, 1) or abs(s) < 1e-14 or abs(s - 1) < 1e-14:
        raise ValueError("pole of Z_L; use residue_zeta_L_* instead")
    su3 = witten_su3(s, cutoff).value
    z3s = riemann_zeta(3 * s)
    return (8 - 2 ** (2 - s) * su3 / z3s) / (s * (s - 1))


# ---------------------------------------------------------------------------
# Staircase domains with prescribed rightmost pole alpha in (0, 1).


def d_alpha_cut_sizes(alpha: float, n_max: int) -> np.ndarray:
    """Sizes n^(-1/alpha) of the successive corner cuts, n = 1..n_max."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if n_max < 1:
        raise ValueError("n_max must be positive")
    n = np.arange(1, n_max + 1, dtype=np.float64)
    return n ** (-1.0 / alpha)


def d_alpha_offsets(alpha: float, n_max: int) -> np.ndarray:
    """Cumulative support offsets c_n = sum_{k<=n} k^(-1/alpha): the n-th cut
    line is <(1, n), x> = c_n in the corner frame."""
    sizes = d_alpha_cut_sizes(alpha, n_max)
    offsets = np.cumsum(sizes)
    half_side = 2 * riemann_zeta(1.0 / alpha).real
    if not np.all(np.diff(sizes) < 0):
        raise ValueError("cut sizes must decrease strictly")
    if offsets[-1] >= 2 * half_side:
        raise ValueError("cut offsets exceed the ambient square")
    return offsets


def d_alpha_expected_series(alpha: float, s: complex, n_max: int) -> complex:
    """Partial sum of zeta(s/alpha) = sum n^(-s/alpha): the boundary series of
    the staircase corner."""
    n = np.arange(1, n_max + 1, dtype=np.float64)
    return complex((n ** (-complex(s) / alpha)).sum())
