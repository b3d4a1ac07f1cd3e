"""The zeta engine: boundary Dirichlet series, the identity and Mellin
evaluation routes, exact polygon residues at s = 1 and s = 0, and the fitted
residue at s = 2/3.

Identity route:  s(s-1) Z(s) = H(s) - F(s), with H the minimal-model
correction and F = sum of size^s over the corner cuts.  Mellin route:
Z(s) = integral of t^(s-2) P(t) dt over (0, m) with P(t) the lattice
perimeter of the wave front, computed geometrically from the wave-front
polygon so the two routes share no bookkeeping.

Residues:  Res_1 Z = lattice perimeter (exact); Res_0 Z = -K^2 for at most
A_n-singular polygons; Res_{2/3} Z = (9/2) r with r fitted from the counting
asymptotic N^cut(t) ~ (3/2) r t^(-2/3) of smooth domains.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .cutting import enumerate_cuts, profiles
from .estimates import ResidueEstimate, SeriesEstimate
from .geometry import (
    ConvexDomain,
    clip_polygon,
    corner_singularity,
    det2,
    dot2,
    sub2,
)
from .minimal import correction_h, k_squared, minimal_model_of


class NumericalRegimeError(RuntimeError):
    """A numerical-regime failure (asymptotics out of reach), as opposed to a
    malformed input; the CLI maps this to exit code 2."""


# ---------------------------------------------------------------------------
# boundary series and the identity route


def boundary_series(domain: ConvexDomain, s, eps) -> SeriesEstimate:
    """F(s) truncated at size eps: sum of size^s over all cuts of size >= eps,
    summed per chart and then totaled.  Exact rational for polygon domains at
    integer s (eps = 0 gives the full finite sum)."""
    tree = enumerate_cuts(domain, eps)
    exact = domain.is_polygon and isinstance(s, int) and all(
        isinstance(n.size, (Fraction, int)) for n in tree.nodes
    )
    per_chart: dict[int, object] = {}
    count = 0
    for node in tree.nodes:
        if node.size < eps:
            continue
        count += 1
        if exact:
            term = Fraction(node.size) ** s
        else:
            term = complex(float(node.size)) ** complex(s)
        per_chart[node.chart_id] = per_chart.get(node.chart_id, 0) + term
    total = sum(per_chart.values()) if per_chart else (Fraction(0) if exact else 0j)
    sigma = complex(s).real
    tail = None
    if not domain.is_polygon and sigma > 2 / 3 and count:
        # from N(t) ~ C t^(-2/3): sum_{c < eps} c^sigma ~ N(eps) eps^sigma
        # * (2/3)/(sigma - 2/3)
        tail = count * float(eps) ** sigma * (2 / 3) / (sigma - 2 / 3)
    return SeriesEstimate(value=total, cutoff=float(eps), terms_used=count, tail_hint=tail)


def zeta_via_identity(domain: ConvexDomain, s, eps) -> SeriesEstimate:
    """Z(s) = (H(s) - F(s)) / (s (s-1)) with F truncated at eps."""
    sc = complex(s)
    if sc in (0j, 1 + 0j):
        raise ValueError("pole of prefactor; use residue operations")
    mm = minimal_model_of(domain)
    fest = boundary_series(domain, s, eps)
    exact = isinstance(fest.value, Fraction) and isinstance(s, int)
    if exact:
        h = correction_h(mm, s)
        if isinstance(h, Fraction):
            val = (h - fest.value) / (s * (s - 1))
            return SeriesEstimate(value=val, cutoff=fest.cutoff,
                                  terms_used=fest.terms_used, tail_hint=fest.tail_hint)
    h = correction_h(mm, sc)
    val = (complex(h) - complex(fest.value)) / (sc * (sc - 1))
    tail = fest.tail_hint / abs(sc * (sc - 1)) if fest.tail_hint else None
    return SeriesEstimate(value=val, cutoff=fest.cutoff,
                          terms_used=fest.terms_used, tail_hint=tail)


# ---------------------------------------------------------------------------
# Mellin route


_GL8_NODES, _GL8_WEIGHTS = np.polynomial.legendre.leggauss(8)


def zeta_via_mellin(domain: ConvexDomain, s, rel_tol: float = 1e-10,
                    max_levels: int = 40) -> complex:
    """Z(s) = integral over (0, m) of t^(s-2) * Length_Z(boundary Omega_t) dt
    by composite Gauss-Legendre on a geometric grid refined toward 0, with
    cells split at the perimeter's kinks (the cut sizes) while those are
    sparse.

    Requires Re(s) > 2 (absolute convergence at t = 0).  The perimeter is
    evaluated geometrically from the wave-front support lines, independently
    of the size bookkeeping used by the identity route.
    """
    sc = complex(s)
    if sc.real <= 2:
        raise ValueError("outside Mellin convergence; use identity route")
    mm = minimal_model_of(domain)
    m = float(mm.m)
    total = 0j
    hi = m
    level = 0
    while level < max_levels:
        lo = hi / 2
        tree = enumerate_cuts(domain, 0 if domain.is_polygon else lo)
        perimeter = tree.front_perimeter_geometric
        tree._ensure_sorted()
        all_sizes = tree._sorted  # descending
        inside = np.unique(all_sizes[(all_sizes > lo) & (all_sizes < hi)])
        if 0 < len(inside) <= 256:
            edges = [lo] + [float(x) for x in inside] + [hi]
        elif len(inside) > 256:
            edges = list(np.geomspace(lo, hi, 9))
        else:
            edges = [lo, hi]
        contrib = 0j
        for a, b in zip(edges[:-1], edges[1:]):
            mid = (a + b) / 2
            half = (b - a) / 2
            ts = mid + half * _GL8_NODES
            vals = np.array([t ** (sc - 2) * perimeter(t) for t in ts])
            contrib += half * complex((vals * _GL8_WEIGHTS).sum())
        total += contrib
        if abs(contrib) < rel_tol * max(abs(total), 1e-30) and level > 3:
            break
        hi = lo
        level += 1
    return complex(total)


def rectangle_closed_form(p, q, s) -> complex:
    """s(s-1) Z_R(s) = 8 (Q/2)^s + 2 s (P-Q) (Q/2)^(s-1) for R = [0,P]x[0,Q],
    P >= Q (sides are swapped internally otherwise)."""
    p, q = float(p), float(q)
    if p <= 0 or q <= 0:
        raise ValueError("rectangle sides must be positive")
    if p < q:
        p, q = q, p
    sc = complex(s)
    return 8 * (q / 2) ** sc + 2 * sc * (p - q) * (q / 2) ** (sc - 1)


def one_cut_check(lam: float, s) -> tuple[complex, complex]:
    """Both sides of the one-cut identity: the layer-cake integral
    (s-2) * integral of t^(s-3) (lam-t)^2 / 2 dt over (0, lam) against the
    closed form lam^s / (s (s-1))."""
    sc = complex(s)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if lam == 0:
        return 0j, 0j
    # substitute t = lam * u and integrate u^(s-3)(1-u)^2 on (0,1) by GL with
    # an endpoint-singularity split at u = 1/2
    nodes, weights = np.polynomial.legendre.leggauss(64)

    def quad(a, b, f):
        mid, half = (a + b) / 2, (b - a) / 2
        return half * sum(w * f(mid + half * x) for x, w in zip(nodes, weights))

    total = 0j
    a = 0.5
    total += quad(0.5, 1.0, lambda u: u ** (sc - 3) * (1 - u) ** 2)
    # geometric refinement toward the u = 0 singularity (integrable for Re s > 2)
    while a > 1e-14:
        total += quad(a / 2, a, lambda u: u ** (sc - 3) * (1 - u) ** 2)
        a /= 2
    lhs = (sc - 2) * lam**sc * total / 2
    rhs = lam**sc / (sc * (sc - 1))
    return complex(lhs), complex(rhs)


# ---------------------------------------------------------------------------
# exact polygon zeta by chamber integration (the independent oracle)


def _homogeneous_sym(k: int, a, b, c):
    """Complete homogeneous symmetric polynomial h_k(a, b, c)."""
    total = 0
    for i in range(k + 1):
        for j in range(k + 1 - i):
            total += a**i * b**j * c ** (k - i - j)
    return total


def zeta_polygon_exact(domain: ConvexDomain, s: int) -> Fraction:
    """Z(s) at integer s >= 3 by exact piecewise-linear integration: the
    domain is split into the linearity chambers of rho and rho^(s-2) is
    integrated over each chamber by the simplex moment formula.

    Independent of the cutting machinery: uses only the active-direction min.
    """
    if not isinstance(s, int) or s < 3:
        raise ValueError("exact chamber integration needs integer s >= 3")
    poly = domain.polygon
    if poly is None:
        raise ValueError("exact integration requires a polygon domain")
    actives = poly.active_directions()
    k = s - 2
    total = Fraction(0)
    for u, hu in actives:
        # chamber of u: slack_u <= slack_v for every other direction
        region = [tuple(map(Fraction, v)) for v in poly.vertices]
        for v, hv in actives:
            if (v, hv) == (u, hu):
                continue
            normal = sub2(v, u)
            if normal == (0, 0):
                continue
            region = clip_polygon(region, normal, hv - hu)
            if len(region) < 3:
                break
        if len(region) < 3:
            continue
        # fan triangulation; integrate (u . x - hu)^k per triangle
        p0 = region[0]
        s0 = dot2(u, p0) - hu
        for p1, p2 in zip(region[1:], region[2:]):
            area2 = det2(sub2(p1, p0), sub2(p2, p0))
            if area2 == 0:
                continue
            s1 = dot2(u, p1) - hu
            s2 = dot2(u, p2) - hu
            total += Fraction(area2) * _homogeneous_sym(k, s0, s1, s2) / ((k + 1) * (k + 2))
    return total


# ---------------------------------------------------------------------------
# residues


def polygon_residues(domain: ConvexDomain) -> tuple[Fraction, Optional[Fraction]]:
    """(Res_1, Res_0) of a rational polygon: the lattice perimeter, and
    -K^2 = -(K^2(hat) - #cuts).  Res_0 is refused (None would hide the error:
    a ValueError is raised) when some corner is not of A_n type."""
    if not domain.is_polygon:
        raise ValueError("polygon residues need a polygon domain")
    res1 = Fraction(domain.polygon.lattice_perimeter())
    tree = enumerate_cuts(domain, 0)
    hat_k2 = k_squared(tree.minimal_model.polygon)  # raises on non-A_n corner
    for _vtx, u, v in domain.polygon.corners():
        if corner_singularity(u, v) is None:
            raise ValueError(f"corner with normals {u}, {v} is not of A_n type")
    res0 = -Fraction(hat_k2 - len(tree.nodes))
    return res1, res0


def _loglog_fit(ts: np.ndarray, ys: np.ndarray) -> tuple[float, float, float]:
    """(slope, intercept, r^2) of log ys against log ts."""
    x = np.log(ts)
    y = np.log(ys)
    a = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), res, *_ = np.linalg.lstsq(a, y, rcond=None)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float(res[0]) / ss_tot if len(res) and ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def fixed_slope_intercept(ts: np.ndarray, ys: np.ndarray, slope: float) -> float:
    """exp of the least-squares intercept of log ys - slope * log ts."""
    return float(np.exp(np.mean(np.log(ys) - slope * np.log(ts))))


def fit_counting_exponent(sizes: Sequence[float], window: tuple[float, float],
                          samples: int = 40) -> tuple[float, float, float]:
    """Free-slope log-log fit of N(t) = #{sizes >= t} over the window:
    (exponent, amplitude, r^2)."""
    arr = np.sort(np.asarray([float(s) for s in sizes]))[::-1]
    ts = np.logspace(math.log10(window[0]), math.log10(window[1]), samples)
    ns = np.array([np.searchsorted(-arr, -t, side="right") for t in ts], dtype=float)
    if (ns <= 0).any():
        raise NumericalRegimeError("asymptotic regime not reached")
    slope, intercept, r2 = _loglog_fit(ts, ns)
    return slope, float(np.exp(intercept)), r2


def residue_two_thirds(domain: ConvexDomain, eps_min: float,
                       window: Optional[tuple[float, float]] = None,
                       samples: int = 40) -> ResidueEstimate:
    """Res_{s=2/3} Z from cut-counting asymptotics.

    Primary estimator: least-squares fit of log N^cut(t) against log t over
    the window (default [eps_min, eps_min^0.6]), slope fixed at -2/3 after a
    free-slope diagnostic; N^cut(t) ~ (3/2) r t^(-2/3) gives r and
    Res Z = (9/2) r.  The perimeter fit (coefficient of t^(1/3)) and the
    area-deficit fit (coefficient of t^(4/3)) are reported as diagnostics,
    as is a two-term fit C t^(-2/3) + D t^(-1/2) that absorbs the leading
    correction.
    """
    if domain.is_polygon:
        raise NumericalRegimeError("asymptotic regime not reached")
    tree = enumerate_cuts(domain, eps_min)
    n_min = tree.cut_count(eps_min)
    if n_min < 10**4:
        raise NumericalRegimeError("asymptotic regime not reached")
    if window is None:
        window = (eps_min, eps_min**0.6)
    if samples < 30:
        raise ValueError("need at least 30 window samples")
    ts = np.logspace(math.log10(window[0]), math.log10(window[1]), samples)
    ns = np.array([tree.cut_count(t) for t in ts], dtype=float)
    free_slope, _, r2 = _loglog_fit(ts, ns)
    if abs(free_slope + 2 / 3) > 0.05:
        raise NumericalRegimeError("asymptotic regime not reached")
    c_fixed = fixed_slope_intercept(ts, ns, -2 / 3)
    r_counting = (2 / 3) * c_fixed
    res_counting = 4.5 * r_counting

    # diagnostics: perimeter and area-deficit fits over the same window
    prof = profiles(domain, list(ts))
    lengths = np.array([p[1] for p in prof])
    perim_slope, _, perim_r2 = _loglog_fit(ts, lengths)
    res_perimeter = fixed_slope_intercept(ts, lengths, 1 / 3)

    area = float(domain.area(eps_min))
    deficits = np.array([area - p[2] for p in prof])
    res_area = None
    deficit_slope = None
    if (deficits > 0).all():
        deficit_slope, _, _ = _loglog_fit(ts, deficits)
        res_area = fixed_slope_intercept(ts, deficits, 4 / 3) / 0.75

    # two-term diagnostic: N(t) = C t^(-2/3) + D t^(-1/2), linear in (C, D)
    a = np.vstack([ts ** (-2 / 3), ts ** (-0.5)]).T
    (c2t, d2t), *_ = np.linalg.lstsq(a, ns, rcond=None)
    res_two_term = 4.5 * (2 / 3) * float(c2t)

    diag = {
        "exponent": free_slope,
        "r2": r2,
        "window": (float(window[0]), float(window[1])),
        "samples": samples,
        "intercept_fixed_slope": c_fixed,
        "perimeter_fit": {"value": res_perimeter, "exponent": perim_slope, "r2": perim_r2},
        "area_deficit_fit": {"value": res_area, "exponent": deficit_slope},
        "two_term_fit": {"value": res_two_term, "second_coefficient": float(d2t)},
        "cut_count_at_eps_min": int(n_min),
    }
    return ResidueEstimate(location=2 / 3, value=res_counting,
                           method="counting_fit", fit_diagnostics=diag)
