"""The Stern-Brocot cutting engine.

A domain is carved out of its minimal model by unimodular corner cuts: at a
corner with adjacent inward normals u, v (a lattice basis) the mediant u + v
supports the domain and cuts off a triangle of size

    size = h(u + v) - h(u) - h(v)  (>= 0 by superadditivity of min-support),

which is sqrt(2 Area) of the cut triangle.  The two child corners (u, u+v)
and (u+v, v) are cut recursively; sizes are nonincreasing along any path, so
the descent is pruned at a threshold.  Partial cuts, wave fronts and their
exact lattice perimeter / area profiles, and the caustic all read off this
tree:

    Omega^t  : all cuts of size >= t applied,
    Omega_t  = (Omega^t) inset by t  (the wave front),
    Length_Z(boundary Omega^t) = Length_Z(boundary hat) - sum_{size >= t} size,
    Length_Z(boundary Omega_t) = Length_Z(boundary Omega^t) - t K_t^2,
    K_t^2 = K^2(hat) - #cuts of size >= t.

A_n corner events appear as n+1 equal-size nodes of the descent; no special
case is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .geometry import (
    ConvexDomain,
    Polygon,
    Vec,
    corner_singularity,
    det2,
    dot2,
    halfplane_intersection,
    sub2,
)
from .minimal import MinimalModel, minimal_model_of


class _PolygonCornerChart:
    """Chart view of one unimodular corner of a polygon's minimal model:
    gamma(a, b) = h(a u1 + b u2) - <a u1 + b u2, corner>."""

    def __init__(self, poly: Polygon, corner, u1: Vec, u2: Vec, name: str = ""):
        self.poly = poly
        self.corner = corner
        self.u1 = u1
        self.u2 = u2
        self.exact = poly.is_exact
        self.name = name

    def ambient_direction(self, a: int, b: int) -> Vec:
        return (a * self.u1[0] + b * self.u2[0], a * self.u1[1] + b * self.u2[1])

    def support(self, a: int, b: int):
        u = self.ambient_direction(a, b)
        return self.poly.support(u) - dot2(u, self.corner)


@dataclass(frozen=True)
class SupportTriangle:
    __slots__ = ("quad", "size", "chart_id", "depth", "parent")
    quad: tuple[int, int, int, int]
    size: object
    chart_id: int
    depth: int
    parent: Optional[int]


@dataclass
class CutTree:
    domain: ConvexDomain
    charts: list
    threshold: float
    nodes: list[SupportTriangle]
    leaf_sizes: list
    minimal_model: MinimalModel
    k_squared_start: int
    _sorted: Optional[np.ndarray] = None
    _prefix: Optional[np.ndarray] = None
    _prefix_sq: Optional[np.ndarray] = None

    def sizes(self) -> list:
        return [n.size for n in self.nodes]

    def _ensure_sorted(self):
        if self._sorted is None:
            arr = np.array([float(n.size) for n in self.nodes], dtype=np.float64)
            arr[::-1].sort()  # descending
            self._sorted = arr
            self._prefix = np.concatenate([[0.0], np.cumsum(arr)])
            self._prefix_sq = np.concatenate([[0.0], np.cumsum(arr * arr)])

    def cut_count(self, t: float) -> int:
        """N^cut(t) = number of cuts of size >= t."""
        if t < self.threshold:
            raise ValueError("tree too shallow")
        self._ensure_sorted()
        return int(np.searchsorted(-self._sorted, -t, side="right"))

    def size_sum_above(self, t: float) -> float:
        self._ensure_sorted()
        k = self.cut_count(t)
        return float(self._prefix[k])

    def size_sq_sum_above(self, t: float) -> float:
        self._ensure_sorted()
        k = self.cut_count(t)
        return float(self._prefix_sq[k])

    def ambient_normal(self, node: SupportTriangle) -> Vec:
        a, b, c, d = node.quad
        return self.charts[node.chart_id].ambient_direction(a + c, b + d)

    def angular_arrays(self):
        """All front constraints (minimal-model edges plus cut mediants) in
        angular order, as float arrays (Wx, Wy, H, S); model edges carry
        S = +inf so a size mask S >= t always keeps them."""
        cached = getattr(self, "_angular_arrays", None)
        if cached is None:
            rows = []
            hat = self.minimal_model.polygon
            for (p, _q), nrm in zip(hat.edges(), hat.edge_normals()):
                rows.append((float(nrm[0]), float(nrm[1]),
                             float(nrm[0] * p[0] + nrm[1] * p[1]), math.inf))
            sups = [getattr(ch, "support_float", None) or
                    (lambda a, b, _ch=ch: float(_ch.support(a, b))) for ch in self.charts]
            corners = [(float(ch.corner[0]), float(ch.corner[1])) for ch in self.charts]
            for n in self.nodes:
                chart = self.charts[n.chart_id]
                a, b, c, d = n.quad
                w = chart.ambient_direction(a + c, b + d)
                cx, cy = corners[n.chart_id]
                h = sups[n.chart_id](a + c, b + d) + w[0] * cx + w[1] * cy
                rows.append((float(w[0]), float(w[1]), h, float(n.size)))
            arr = np.array(rows, dtype=np.float64).reshape(-1, 4)
            order = np.argsort(np.arctan2(arr[:, 1], arr[:, 0]))
            arr = arr[order]
            cached = (arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(), arr[:, 3].copy())
            self._angular_arrays = cached
        return cached

    def front_perimeter_geometric(self, t: float) -> float:
        """Lattice perimeter of the wave front at t from consecutive support
        line intersections (vectorized; independent of the size bookkeeping)."""
        wx, wy, h, sizes = self.angular_arrays()
        mask = sizes >= t
        ax, ay, off = wx[mask], wy[mask], h[mask] + t
        bx, by, boff = np.roll(ax, -1), np.roll(ay, -1), np.roll(off, -1)
        det = ax * by - bx * ay
        vx = (off * by - boff * ay) / det
        vy = (ax * boff - bx * off) / det
        dx = vx - np.roll(vx, 1)
        dy = vy - np.roll(vy, 1)
        dirx, diry = ay, -ax  # edge direction of the normal (ax, ay)
        tpar = (dx * dirx + dy * diry) / (dirx * dirx + diry * diry)
        return float(np.clip(tpar, 0.0, None).sum())

    def mediant_constraints(self, t) -> list:
        """(normal, offset) of the mediant supporting line of every cut of
        size >= t, in ambient coordinates."""
        out = []
        for n in self.nodes:
            if n.size >= t:
                chart = self.charts[n.chart_id]
                a, b, c, d = n.quad
                w = chart.ambient_direction(a + c, b + d)
                h = chart.support(a + c, b + d) + dot2(w, chart.corner)
                out.append((w, h))
        return out

    def slack_arrays(self):
        """(W, H, S): float arrays of mediant normals, offsets and sizes,
        sorted by size descending, for vectorized slack evaluation."""
        cached = getattr(self, "_slack_arrays", None)
        if cached is None:
            rows = []
            sups = [getattr(ch, "support_float", None) or
                    (lambda a, b, _ch=ch: float(_ch.support(a, b))) for ch in self.charts]
            corners = [(float(ch.corner[0]), float(ch.corner[1])) for ch in self.charts]
            for n in self.nodes:
                chart = self.charts[n.chart_id]
                a, b, c, d = n.quad
                w = chart.ambient_direction(a + c, b + d)
                cx, cy = corners[n.chart_id]
                h = sups[n.chart_id](a + c, b + d) + w[0] * cx + w[1] * cy
                rows.append((float(n.size), float(w[0]), float(w[1]), h))
            rows.sort(key=lambda r: -r[0])
            arr = np.array(rows, dtype=np.float64).reshape(-1, 4)
            cached = (arr[:, 1:3], arr[:, 3], arr[:, 0])
            self._slack_arrays = cached
        return cached


def _chart_descent(chart, chart_id: int, eps, node_sink: list, leaf_sink: list) -> None:
    """Depth-first mediant descent; records nodes with size >= eps (> 0) and
    the frontier leaf sizes (< eps)."""
    defect_den = getattr(chart, "defect_den", None)
    if defect_den is not None:
        _chart_descent_unit_fraction(chart, chart_id, defect_den, eps, node_sink, leaf_sink)
        return
    exact = getattr(chart, "exact", False)
    gamma = chart.support
    g10 = gamma(1, 0)
    g01 = gamma(0, 1)
    stack = [(1, 0, 0, 1, g10, g01, 0, None)]
    while stack:
        a, b, c, d, gu, gv, depth, parent = stack.pop()
        gm = gamma(a + c, b + d)
        size = gm - gu - gv
        if (size < 0) if exact else (size < -1e-9):
            raise ValueError(
                f"chart {getattr(chart, 'name', chart_id)}: negative defect at {(a, b, c, d)}"
            )
        if parent is not None:
            psize = node_sink[parent].size
            if size > psize + (0 if exact else 1e-12 * (1 + float(psize))):
                raise AssertionError("support triangle nesting violated: child larger than parent")
        if size >= eps and size > 0:
            idx = len(node_sink)
            node_sink.append(SupportTriangle(quad=(a, b, c, d), size=size,
                                             chart_id=chart_id, depth=depth, parent=parent))
            stack.append((a, b, a + c, b + d, gu, gm, depth + 1, idx))
            stack.append((a + c, b + d, c, d, gm, gv, depth + 1, idx))
        else:
            leaf_sink.append(size)


def _chart_descent_unit_fraction(chart, chart_id: int, defect_den, eps,
                                 node_sink: list, leaf_sink: list) -> None:
    """Descent specialized to charts with unit-numerator exact defects
    (size = 1/defect_den): all pruning decisions are integer comparisons."""
    if eps <= 0:
        raise ValueError("eps = 0 is only allowed for polygon domains")
    den_cap = int(1 / Fraction(eps))  # size >= eps  <=>  den <= den_cap
    stack = [(1, 0, 0, 1, 0, None)]
    while stack:
        a, b, c, d, depth, parent = stack.pop()
        den = defect_den(a, b, c, d)
        if den <= den_cap:
            idx = len(node_sink)
            node_sink.append(SupportTriangle(quad=(a, b, c, d), size=Fraction(1, den),
                                             chart_id=chart_id, depth=depth, parent=parent))
            stack.append((a, b, a + c, b + d, depth + 1, idx))
            stack.append((a + c, b + d, c, d, depth + 1, idx))
        else:
            leaf_sink.append(Fraction(1, den))


def chart_frontier(chart, eps) -> tuple[list, list]:
    """(cut sizes >= eps, frontier leaf sizes < eps) of a single chart."""
    nodes: list[SupportTriangle] = []
    leaves: list = []
    _chart_descent(chart, 0, eps, nodes, leaves)
    return [n.size for n in nodes], leaves


def chart_frontier_wedges(chart, eps) -> list[tuple[int, int, int, int]]:
    """The frontier leaf wedges (a1, b1, a2, b2) of the descent at threshold
    eps: the unexpanded normal pairs, which tile the chart's arc."""
    if eps <= 0:
        raise ValueError("frontier wedges need eps > 0")
    defect_den = getattr(chart, "defect_den", None)
    out = []
    if defect_den is not None:
        den_cap = int(1 / Fraction(eps))
        stack = [(1, 0, 0, 1)]
        while stack:
            a, b, c, d = stack.pop()
            if defect_den(a, b, c, d) <= den_cap:
                stack.append((a, b, a + c, b + d))
                stack.append((a + c, b + d, c, d))
            else:
                out.append((a, b, c, d))
        return out
    gamma = chart.support
    stack = [(1, 0, 0, 1, gamma(1, 0), gamma(0, 1))]
    while stack:
        a, b, c, d, gu, gv = stack.pop()
        gm = gamma(a + c, b + d)
        if gm - gu - gv >= eps:
            stack.append((a, b, a + c, b + d, gu, gm))
            stack.append((a + c, b + d, c, d, gm, gv))
        else:
            out.append((a, b, c, d))
    return out


def _domain_charts(domain: ConvexDomain, mm: MinimalModel) -> list:
    """Chart objects aligned with the minimal model's unimodular corners."""
    hat = mm.polygon
    out = []
    if domain.is_polygon:
        poly = domain.polygon
        for vtx, u, v in hat.corners():
            q = det2(u, v)
            if q == 1:
                out.append(_PolygonCornerChart(poly, vtx, u, v, name=f"corner@{vtx}"))
            else:
                if not poly.contains(vtx):
                    raise ValueError(
                        f"non-unimodular minimal-model corner at {vtx} not shared with the domain"
                    )
        return out
    by_corner = {tuple(map(float, c.corner)): c for c in domain.charts}
    for vtx, u, v in hat.corners():
        key = tuple(map(float, vtx))
        chart = None
        for ckey, c in by_corner.items():
            if abs(ckey[0] - key[0]) < 1e-9 and abs(ckey[1] - key[1]) < 1e-9:
                chart = c
                break
        if chart is None:
            continue  # corner shared with the domain boundary; nothing to cut
        if (tuple(chart.u1), tuple(chart.u2)) != (tuple(u), tuple(v)):
            raise ValueError(
                f"chart at {vtx}: frame normals {chart.u1}, {chart.u2} do not match "
                f"the minimal-model corner normals {u}, {v}"
            )
        out.append(chart)
    return out


def enumerate_cuts(domain: ConvexDomain, eps) -> CutTree:
    """Materialize the cut tree down to size eps (eps = 0 allowed for
    polygons, where the tree is finite)."""
    mm = minimal_model_of(domain)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps == 0 and not domain.is_polygon:
        raise ValueError("eps = 0 is only allowed for polygon domains")
    cached = getattr(domain, "_tree_cache", None)
    if cached is not None and cached.threshold <= eps:
        return cached
    charts = _domain_charts(domain, mm)
    nodes: list[SupportTriangle] = []
    leaves: list = []
    for i, chart in enumerate(charts):
        _chart_descent(chart, i, eps, nodes, leaves)
    try:
        from .minimal import k_squared

        k2 = k_squared(mm.polygon)
    except ValueError:
        k2 = int(mm.k) if float(mm.k) == int(mm.k) else None
    tree = CutTree(domain=domain, charts=charts, threshold=eps, nodes=nodes,
                   leaf_sizes=leaves, minimal_model=mm, k_squared_start=k2)
    domain._tree_cache = tree
    return tree


def cut_count(tree: CutTree, t) -> int:
    return tree.cut_count(float(t))


@dataclass
class WaveFrontPolygon:
    """A wave front (or partial-cut) polygon: support data plus vertices.

    For t >= m the front degenerates to the max locus; vertices then hold the
    locus endpoint(s) and normals is empty.
    """

    t: float
    vertices: list
    normals: list[Vec]
    degenerate_locus: Optional[tuple] = None
    m_l: Optional[tuple] = None  # (m, l) when degenerate

    @property
    def is_degenerate(self) -> bool:
        return self.degenerate_locus is not None

    def area(self):
        if self.is_degenerate:
            return 0.0
        tot = 0
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            x1, y1 = vs[i]
            x2, y2 = vs[(i + 1) % n]
            tot += x1 * y2 - x2 * y1
        return tot / 2 if not isinstance(tot, (Fraction, int)) else Fraction(tot, 2)

    def lattice_perimeter(self):
        if self.is_degenerate:
            m, l = self.m_l
            return 2 * l
        tot = 0
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            d = (self.normals[i][1], -self.normals[i][0])  # edge direction, CCW travel
            delta = sub2(vs[i], vs[(i - 1) % n])
            t = (delta[0] * d[0] + delta[1] * d[1]) / (d[0] * d[0] + d[1] * d[1])
            tot += t
        return tot

    def active_normals(self) -> list[Vec]:
        return list(self.normals)


def _hat_constraints(mm: MinimalModel) -> list:
    hat = mm.polygon
    return [(n, dot2(n, p)) for (p, _q), n in zip(hat.edges(), hat.edge_normals())]


def partial_cut_polygon(domain: ConvexDomain, t) -> WaveFrontPolygon:
    """Omega^t: the minimal model with every cut of size >= t applied."""
    if t < 0:
        raise ValueError("t must be nonnegative for a partial cut")
    mm = minimal_model_of(domain)
    if t > mm.m:
        hat = mm.polygon
        verts = list(hat.vertices)
        return WaveFrontPolygon(t=float(t), vertices=verts, normals=hat.edge_normals())
    tree = enumerate_cuts(domain, t if t > 0 or domain.is_polygon else 0)
    cons = _hat_constraints(mm) + tree.mediant_constraints(t)
    verts, normals = halfplane_intersection(cons)
    return WaveFrontPolygon(t=float(t), vertices=verts, normals=normals)


def wave_front(domain: ConvexDomain, t) -> WaveFrontPolygon:
    """Omega_t = {rho >= t}, computed as the t-inset of Omega^t."""
    if t <= 0:
        raise ValueError("wave front needs t > 0")
    mm = minimal_model_of(domain)
    if t >= mm.m:
        return WaveFrontPolygon(t=float(t), vertices=list(mm.max_locus), normals=[],
                                degenerate_locus=mm.max_locus, m_l=(mm.m, mm.l))
    tree = enumerate_cuts(domain, t)
    cons = [(u, h + t) for u, h in _hat_constraints(mm) + tree.mediant_constraints(t)]
    verts, normals = halfplane_intersection(cons)
    if len(verts) < 3:
        return WaveFrontPolygon(t=float(t), vertices=verts, normals=[],
                                degenerate_locus=tuple(verts), m_l=(mm.m, mm.l))
    return WaveFrontPolygon(t=float(t), vertices=verts, normals=normals)


def profiles(domain: ConvexDomain, t_grid: Sequence[float]) -> list[tuple[float, float, float]]:
    """(t, Length_Z(boundary Omega_t), Area(Omega_t)) from the exact cut-tree
    bookkeeping (no polygon construction)."""
    mm = minimal_model_of(domain)
    m = float(mm.m)
    ts = [float(t) for t in t_grid]
    if not all(0 < t < m for t in ts):
        raise ValueError("t_grid must lie in (0, m)")
    tree = enumerate_cuts(domain, min(ts) if not domain.is_polygon else 0)
    k2 = tree.k_squared_start
    if k2 is None:
        raise ValueError("K^2 of the minimal model is undefined (non-A_n corner)")
    hat = mm.polygon
    l_hat = float(hat.lattice_perimeter())
    a_hat = float(hat.area())
    out = []
    for t in ts:
        n_t = tree.cut_count(t)
        s1 = tree.size_sum_above(t)
        s2 = tree.size_sq_sum_above(t)
        k2_t = k2 - n_t
        length_cut = l_hat - s1  # Length_Z of boundary Omega^t
        area_cut = a_hat - s2 / 2
        length_front = length_cut - t * k2_t
        area_front = area_cut - t * length_cut + t * t / 2 * k2_t
        out.append((t, length_front, area_front))
    return out


# ---------------------------------------------------------------------------
# caustic


@dataclass
class CausticEdge:
    start: tuple
    end: tuple
    weight: int
    t_start: float
    t_end: float


@dataclass
class CausticGraph:
    edges: list[CausticEdge] = field(default_factory=list)
    max_locus: Optional[tuple] = None

    def total_edges(self) -> int:
        return len(self.edges)


def _inset_vertex(u: Vec, hu, v: Vec, hv, t):
    d = det2(u, v)
    x = ((hu + t) * v[1] - (hv + t) * u[1]) / d
    y = (u[0] * (hv + t) - v[0] * (hu + t)) / d
    return (float(x), float(y))


def caustic(domain: ConvexDomain, eps) -> CausticGraph:
    """The corner locus of the tropical distance function, materialized down
    to critical times >= eps: one edge per wave-front-vertex trajectory, with
    weight the lattice length of the gradient jump (n+1 on A_n trajectories,
    2 along the final segment)."""
    mm = minimal_model_of(domain)
    hat = mm.polygon
    corner_sources = [hat]
    if domain.is_polygon:
        corner_sources.append(domain.polygon)
    for poly in corner_sources:
        for _vtx, u, v in poly.corners():
            if corner_singularity(u, v) is None:
                raise ValueError(
                    "caustic extraction requires at-most-A_n corners; "
                    f"corner with normals {u}, {v} is not of that type"
                )
    tree = enumerate_cuts(domain, eps if not domain.is_polygon else 0)
    graph = CausticGraph()
    m = float(mm.m)
    if len(mm.max_locus) == 2:
        graph.max_locus = tuple((float(p[0]), float(p[1])) for p in mm.max_locus)
        graph.edges.append(CausticEdge(start=graph.max_locus[0], end=graph.max_locus[1],
                                       weight=2, t_start=m, t_end=m))
    else:
        graph.max_locus = ((float(mm.max_locus[0][0]), float(mm.max_locus[0][1])),)

    # root trajectories: one per minimal-model corner, from its first cut
    # event (or the corner itself) up to time m
    chart_of_corner = {}
    for cid, chart in enumerate(tree.charts):
        chart_of_corner[tuple(map(float, chart.corner))] = cid
    roots_by_chart = {}
    for idx, node in enumerate(tree.nodes):
        if node.parent is None:
            roots_by_chart.setdefault(node.chart_id, idx)

    def support_of(u: Vec):
        return domain.support(u)

    for vtx, u, v in hat.corners():
        hu, hv = support_of(u), support_of(v)
        key = tuple(map(float, vtx))
        cid = chart_of_corner.get(key)
        t_birth = 0.0
        if cid is not None and cid in roots_by_chart:
            t_birth = float(tree.nodes[roots_by_chart[cid]].size)
        weight = math.gcd(abs(v[0] - u[0]), abs(v[1] - u[1]))
        graph.edges.append(CausticEdge(
            start=_inset_vertex(u, hu, v, hv, t_birth),
            end=_inset_vertex(u, hu, v, hv, m),
            weight=weight, t_start=t_birth, t_end=m,
        ))

    # interior trajectories from the cut tree
    children: dict[int, dict[tuple, float]] = {}
    for node in tree.nodes:
        if node.parent is not None:
            children.setdefault(node.parent, {})[node.quad] = float(node.size)
    for idx, node in enumerate(tree.nodes):
        chart = tree.charts[node.chart_id]
        a, b, c, d = node.quad
        kids = children.get(idx, {})
        for pa, pb in (((a, b), (a + c, b + d)), ((a + c, b + d), (c, d))):
            quad = (*pa, *pb)
            if quad in kids:
                child_size = kids[quad]
            else:
                gm = chart.support(pa[0] + pb[0], pa[1] + pb[1])
                child_size = float(gm - chart.support(*pa) - chart.support(*pb))
            u_amb = chart.ambient_direction(*pa)
            v_amb = chart.ambient_direction(*pb)
            hu = chart.support(*pa) + dot2(u_amb, chart.corner)
            hv = chart.support(*pb) + dot2(v_amb, chart.corner)
            t_death = float(node.size)
            graph.edges.append(CausticEdge(
                start=_inset_vertex(u_amb, hu, v_amb, hv, child_size),
                end=_inset_vertex(u_amb, hu, v_amb, hv, t_death),
                weight=1, t_start=child_size, t_end=t_death,
            ))
    return graph


# ---------------------------------------------------------------------------
# tropical distance for smooth domains


def tropical_distance_smooth(domain: ConvexDomain, x, tol: float = 1e-12,
                             floor: float = 1e-8) -> float:
    """rho(x) by active-direction refinement: directions of the minimal model
    plus all cut mediants of size >= eps, with eps decreased until the value
    is certified (value >= eps means deeper cuts cannot lower it).

    floor bounds the refinement depth; values below it carry absolute error
    up to floor (they are near-boundary)."""
    mm = minimal_model_of(domain)
    cons = mm.polygon.active_directions()
    est = min(float(dot2(u, x)) - float(h) for u, h in cons)
    if est < -tol:
        raise ValueError("exterior point")
    m = float(mm.m)
    xf = np.array([float(x[0]), float(x[1])])
    eps = max(min(est, m) / 2, floor)
    while True:
        tree = enumerate_cuts(domain, eps)
        w, h, sizes = tree.slack_arrays()
        k = int(np.searchsorted(-sizes, -eps, side="right"))
        val = est
        if k:
            val = min(val, float((w[:k] @ xf - h[:k]).min()))
        if val < -tol:
            raise ValueError("exterior point")
        if val >= eps or eps <= floor:
            return max(val, 0.0)
        eps = max(val / 2, floor)
