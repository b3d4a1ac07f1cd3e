"""Minimal models: the maximum of the tropical distance, its locus, the
enveloping rational polygon, the Appendix-style taxonomy, and the holomorphic
correction term.

For a domain Omega, m is the maximum of rho, M = {rho = m} is a point or a
segment, E is the set of primitive directions active somewhere on M, and the
minimal model is hat(Omega) = intersection of {<u, x> >= h(u)} over u in E.
The correction term is H(s) = m^(s-1) (2 l s + k m) with l the lattice length
of M and k = (Length_Z(boundary of hat) - 2 l)/m; k is also the
self-intersection of the canonical class of the toric surface dual to hat.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .geometry import (
    ConvexDomain,
    Polygon,
    Vec,
    corner_singularity,
    det2,
    dot2,
    halfplane_intersection,
    lattice_length,
    primitive_of,
    sail,
    sort_directions,
    sub2,
)


@dataclass
class MinimalModel:
    polygon: Polygon
    m: object
    max_locus: tuple  # (point,) or (endpoint, endpoint)
    l: object
    k: object
    type_tag: str
    type_params: dict = field(default_factory=dict)
    support_directions: list[Vec] = field(default_factory=list)

    @property
    def is_point_collapse(self) -> bool:
        return len(self.max_locus) == 1


def _solve3(rows, rhs):
    """Exact Cramer solve of a 3x3 system; None when singular."""
    (a, b, c), (d, e, f), (g, h, i) = rows
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if det == 0:
        return None
    r1, r2, r3 = rhs
    dx = r1 * (e * i - f * h) - b * (r2 * i - f * r3) + c * (r2 * h - e * r3)
    dy = a * (r2 * i - f * r3) - r1 * (d * i - f * g) + c * (d * r3 - r2 * g)
    dz = a * (e * r3 - r2 * h) - b * (d * r3 - r2 * g) + r1 * (d * h - e * g)
    if isinstance(det, (Fraction, int)):
        det = Fraction(det)
    return (dx / det, dy / det, dz / det)


def _max_of_min_slacks(constraints):
    """Exact maximizer data of min_u (<u, x> - h_u) over the plane: the value
    m and all optimal LP-vertex points.  constraints: list of (u, h)."""
    n = len(constraints)
    best_t = None
    best_pts = []
    exact = all(isinstance(h, (Fraction, int)) for _, h in constraints)
    tol = 0 if exact else 1e-9

    def feasible(x, y, t):
        for u, h in constraints:
            if u[0] * x + u[1] * y - h < t - (tol if not exact else 0):
                return False
        return True

    for i, j, k in itertools.combinations(range(n), 3):
        rows = []
        rhs = []
        for idx in (i, j, k):
            u, h = constraints[idx]
            rows.append((u[0], u[1], -1))
            rhs.append(h)
        sol = _solve3(rows, rhs)
        if sol is None:
            continue
        x, y, t = sol
        if not feasible(x, y, t):
            continue
        if best_t is None or t > best_t + (0 if exact else tol):
            best_t = t
            best_pts = [(x, y)]
        elif t == best_t or (not exact and abs(t - best_t) <= tol * (1 + abs(float(t)))):
            best_pts.append((x, y))
    if best_t is None:
        raise ValueError("unbounded or empty slack program")
    uniq = []
    for p in best_pts:
        if not any(_same_point(p, q, exact) for q in uniq):
            uniq.append(p)
    return best_t, uniq


def _same_point(p, q, exact) -> bool:
    if exact:
        return p == q
    return abs(float(p[0] - q[0])) < 1e-9 and abs(float(p[1] - q[1])) < 1e-9


def _vertex_sets_close(a: set, b: set, tol: float = 1e-9) -> bool:
    if len(a) != len(b):
        return False
    return all(any(abs(pa[0] - pb[0]) <= tol and abs(pa[1] - pb[1]) <= tol for pb in b) for pa in a)


def minimal_model_of(domain: ConvexDomain) -> MinimalModel:
    """Cached minimal model of a domain."""
    cached = getattr(domain, "_mm_cache", None)
    if cached is None:
        cached = compute_minimal_model(domain)
        domain._mm_cache = cached
    return cached


def compute_minimal_model(domain: ConvexDomain) -> MinimalModel:
    """m, M, E and the minimal model polygon of a domain.

    Polygons are solved exactly over the finitely many active directions
    (edge normals plus corner sails); smooth and builtin domains carry a
    declared frame polygon, which is validated and then analyzed as a polygon.
    """
    if domain.is_polygon:
        base = domain.polygon
    else:
        base = domain.hat_polygon
        _validate_declared_frame(domain)

    constraints = base.active_directions()
    m, pts = _max_of_min_slacks(constraints)
    exact = base.is_exact
    if len(pts) == 1:
        locus = (pts[0],)
    else:
        # M is a segment: take the two extreme points along its direction
        lo = min(pts)
        hi = max(pts)
        for p in pts:
            cr = det2(sub2(p, lo), sub2(hi, lo))
            if (cr != 0) if exact else (abs(float(cr)) > 1e-9):
                raise ValueError("max locus is neither a point nor a segment")
        locus = (lo, hi)

    # active directions on M
    e_dirs = []
    for u, h in constraints:
        slack = min(dot2(u, p) - h for p in locus)
        if (slack == m) if exact else (abs(float(slack - m)) <= 1e-9 * (1 + abs(float(m)))):
            e_dirs.append(u)
    e_dirs = sort_directions(set(e_dirs))

    hat_constraints = [(u, base.support(u)) for u in e_dirs]
    verts, normals = halfplane_intersection(hat_constraints)
    if len(verts) < 3:
        raise ValueError("minimal model degenerated; domain may be non-compact-like")
    hat = Polygon(verts)
    if not domain.is_polygon:
        declared = {tuple(map(float, v)) for v in base.vertices}
        computed = {tuple(map(float, v)) for v in hat.vertices}
        if not _vertex_sets_close(declared, computed):
            raise ValueError(
                "declared frame polygon is not a minimal model: "
                f"its own minimal model has vertices {sorted(computed)}"
            )

    l = lattice_length(*locus) if len(locus) == 2 else (Fraction(0) if exact else 0.0)
    perim = hat.lattice_perimeter()
    k = (perim - 2 * l) / m
    tag, params = _classify(hat, m, locus, l, exact)
    return MinimalModel(polygon=hat, m=m, max_locus=locus, l=l, k=k,
                        type_tag=tag, type_params=params, support_directions=e_dirs)


def _validate_declared_frame(domain: ConvexDomain) -> None:
    hat = domain.hat_polygon
    corner_vertices = {tuple(c.corner) for c in domain.charts}
    hat_vertices = {tuple(v) for v in hat.vertices}
    for c in domain.charts:
        if tuple(c.corner) not in hat_vertices:
            raise ValueError(f"chart corner {c.corner} is not a vertex of the frame polygon")
        g10 = c.support(1, 0)
        g01 = c.support(0, 1)
        if abs(float(g10)) > 1e-12 or abs(float(g01)) > 1e-12:
            raise ValueError(
                f"chart at {c.corner}: axis supports gamma(1,0)={g10}, gamma(0,1)={g01} "
                "violate the normalized-frame condition gamma = 0"
            )
        root = c.defect((1, 0, 0, 1))
        if float(root) < 0:
            raise ValueError(
                f"chart at {c.corner}: support superadditivity violated, "
                f"gamma(1,1) - gamma(1,0) - gamma(0,1) = {root} < 0"
            )


def _classify(hat: Polygon, m, locus, l, exact: bool) -> tuple[str, dict]:
    if len(locus) == 1:
        params = _reflexive_census(hat, m, locus[0], exact)
        return "reflexive_point", params
    return _classify_segment(hat, m, locus, l, exact)


def _reflexive_census(hat: Polygon, m, center, exact: bool) -> dict:
    params = {"vertex_count": len(hat.vertices)}
    try:
        scaled = Polygon([((v[0] - center[0]) / m, (v[1] - center[1]) / m) for v in hat.vertices])
        params["rescaled_lattice_perimeter"] = scaled.lattice_perimeter()
        if exact and all(Fraction(c).denominator == 1 for v in scaled.vertices for c in v):
            params["interior_lattice_points"] = _interior_lattice_points(scaled)
    except (ValueError, TypeError):
        pass
    return params


def _interior_lattice_points(poly: Polygon) -> list[Vec]:
    xs = [v[0] for v in poly.vertices]
    ys = [v[1] for v in poly.vertices]
    out = []
    cons = [(n, dot2(n, p)) for (p, _q), n in zip(poly.edges(), poly.edge_normals())]
    for x in range(math.ceil(min(xs)), math.floor(max(xs)) + 1):
        for y in range(math.ceil(min(ys)), math.floor(max(ys)) + 1):
            if all(dot2(u, (x, y)) > h for u, h in cons):
                out.append((x, y))
    return out


def _classify_segment(hat: Polygon, m, locus, l, exact: bool) -> tuple[str, dict]:
    weights = []
    for _vtx, u, v in hat.corners():
        n_type = corner_singularity(u, v)
        weights.append(None if n_type is None else n_type + 1)
    if any(w is None for w in weights):
        return "segment_other", {"corner_weights": weights}

    n_corners = len(hat.vertices)
    ones = weights.count(1)
    twos = weights.count(2)
    if twos == n_corners == 4 and ones == 0:
        tag = "segment_degenerate"
    elif ones == n_corners:
        tag = "segment_branching"
    elif twos == 2 and ones == n_corners - 2:
        tag = "segment_mixed"
    else:
        return "segment_other", {"corner_weights": weights}

    params = {"corner_weights": weights}
    try:
        params.update(_segment_invariants(hat, m, locus, l, tag))
    except (ValueError, ZeroDivisionError, TypeError):
        pass
    return tag, params


def _segment_invariants(hat: Polygon, m, locus, l, tag: str) -> dict:
    """Normalize M to the horizontal axis and read off the integer shape
    parameters of the final-segment families."""
    p = primitive_of(*sub2(locus[1], locus[0]))
    g, x0, y0 = _ext_gcd3(p[0], p[1])
    row1 = (x0, y0)  # <row1, p> = 1
    row2 = (-p[1], p[0])
    center = ((locus[0][0] + locus[1][0]) / 2, (locus[0][1] + locus[1][1]) / 2)

    def to_frame(pt):
        q = sub2(pt, center)
        return (row1[0] * q[0] + row1[1] * q[1], row2[0] * q[0] + row2[1] * q[1])

    verts = [to_frame(v) for v in hat.vertices]
    tops = sorted(v[0] for v in verts if v[1] == m)
    bots = sorted(v[0] for v in verts if v[1] == -m)
    out: dict = {}
    if tag == "segment_degenerate":
        top_len = tops[-1] - tops[0]
        bot_len = bots[-1] - bots[0]
        out["k1_minus_k2_abs"] = abs((top_len - bot_len) / (2 * m))
    elif tag == "segment_branching":
        n1 = (tops[-1] - l / 2) / m
        n4 = (tops[0] + l / 2) / m
        n2 = (bots[-1] - l / 2) / m
        n3 = (bots[0] + l / 2) / m
        cands = [
            (n3 + n4, n1 + n2, n1 - n4),
            (-(n1 + n2), -(n3 + n4), n1 - n4),  # horizontal flip
            (n4 + n3, n2 + n1, n2 - n3),  # vertical flip
            (-(n2 + n1), -(n4 + n3), n2 - n3),  # both
        ]
        out["invariant"] = min(tuple(float(x) for x in c) for c in cands)
    elif tag == "segment_mixed":
        mids = [v for v in verts if v[1] == 0]
        if mids and mids[0][0] < 0:  # put the pentagon's mid vertex on the right
            verts = [(-x, y) for x, y in verts]
            tops = sorted(v[0] for v in verts if v[1] == m)
            bots = sorted(v[0] for v in verts if v[1] == -m)
        k = (tops[0] + l / 2) / m
        n1 = (tops[-1] - l / 2) / m
        n2 = (bots[-1] - l / 2) / m
        cands = [(n1 - k, n1 + n2), (n2 + k + 1, n2 + n1)]
        out["invariant"] = min(tuple(float(x) for x in c) for c in cands)
    return out


def _ext_gcd3(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# the correction term and the closed forms of the final-segment models


def correction_h(mm: MinimalModel, s):
    """H(s) = m^(s-1) (2 l s + k m); exact when s is an integer and the model
    is exact rational."""
    m, l, k = mm.m, mm.l, mm.k
    if isinstance(s, int) and isinstance(m, (Fraction, int)):
        return Fraction(m) ** (s - 1) * (2 * Fraction(l) * s + Fraction(k) * Fraction(m))
    s = complex(s)
    mf = complex(float(m))
    return mf ** (s - 1) * (2 * float(l) * s + float(k) * float(m))


def segment_model_zeta(tag: str, params: dict, s) -> complex:
    """Closed-form zeta of a final-segment minimal model.

    degenerate:  (s-1)^-1 (2l + 4 m / s) m^(s-1)
    branching:   (s-1)^-1 (2l + (4 + n1 + n2 - n3 - n4) m / s) m^(s-1)
    mixed:       (s-1)^-1 (2l + (4 + n1 + n2) m / s) m^(s-1)
    """
    s = complex(s)
    if s == 0 or s == 1:
        raise ValueError("pole of the closed form")
    l = float(params["l"])
    m = float(params["m"])
    if l <= 0 or m <= 0:
        raise ValueError("constraint violated: l and m must be positive")
    if tag == "segment_degenerate":
        k1, k2 = params.get("k1", 0), params.get("k2", 0)
        if l < m * (abs(k1 - k2) - 1):
            raise ValueError("constraint violated: l >= m(|k1-k2| - 1)")
        coeff = 4.0
    elif tag == "segment_branching":
        n1, n2, n3, n4 = (params[k] for k in ("n1", "n2", "n3", "n4"))
        if 2 + n3 + n4 < 0:
            raise ValueError("constraint violated: 2 + n3 + n4 >= 0")
        if 2 - n1 - n2 < 0:
            raise ValueError("constraint violated: 2 - n1 - n2 >= 0")
        if l + m * (n1 - n4) < 0:
            raise ValueError("constraint violated: top side length l + m(n1 - n4) >= 0")
        if l + m * (n2 - n3) < 0:
            raise ValueError("constraint violated: bottom side length l + m(n2 - n3) >= 0")
        coeff = 4.0 + n1 + n2 - n3 - n4
    elif tag == "segment_mixed":
        k, n1, n2 = params["k"], params["n1"], params["n2"]
        if n1 + n2 > 2:
            raise ValueError("constraint violated: n1 + n2 <= 2")
        if l + m * (n1 - k) < 0:
            raise ValueError("constraint violated: top side length l + m(n1 - k) >= 0")
        if l + m * (n2 + k + 1) < 0:
            raise ValueError("constraint violated: bottom side length l + m(n2 + k + 1) >= 0")
        coeff = 4.0 + n1 + n2
    else:
        raise ValueError(f"unknown segment model type {tag!r}")
    return (2 * l + coeff * m / s) * m ** (s - 1) / (s - 1)


# ---------------------------------------------------------------------------
# canonical self-intersection of the dual toric surface


def k_squared(poly: Polygon) -> int:
    """K^2 of the toric surface dual to the polygon's normal fan.

    Corners of A_n type are resolved crepantly by inserting their sail
    (a chain of (-2)-curves), which leaves K^2 unchanged; non-A corners are
    rejected since the canonical class is not defined there.
    On the smooth refined fan, [D_j]^2 = det(v_{j+1}, v_{j-1}) in CCW order
    and K^2 = sum_j [D_j]^2 + 2 * (number of rays).
    """
    rays: list[Vec] = []
    for _vtx, u, v in poly.corners():
        if corner_singularity(u, v) is None:
            raise ValueError(f"corner with normals {u}, {v} is not of A_n type")
        chain = sail(u, v)
        rays.extend(chain[:-1])  # v is the next corner's u
    n = len(rays)
    total = 0
    for j in range(n):
        total += det2(rays[(j + 1) % n], rays[(j - 1) % n])
    return total + 2 * n
