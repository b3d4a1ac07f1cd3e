"""Convex planar domains and the primitive-support-function calculus.

A domain is one of:
    - a rational polygon (exact Fraction arithmetic end to end),
    - a smooth domain: a minimal-model frame polygon plus arc charts,
    - a builtin: disk(R), domain_L, parabolic_triangle, d_alpha(alpha, n_max),
      rectangle(P, Q).

Normals are primitive integer vectors and always *inward*: the supporting
half-plane of direction u is {x : <u, x> >= h(u)} with h(u) = min_Omega <u, x>
the lower support function.  The tropical distance is
rho(x) = min over primitive u of (<u, x> - h(u)).

An arc chart describes one boundary arc in its unimodular corner frame: the
frame corner is the intersection of the supporting lines of the two corner
normals u1, u2 (det(u1, u2) = 1), chart direction (a, b) means the ambient
direction a*u1 + b*u2, and the chart support gamma(a, b) is the ambient
support minus <a*u1 + b*u2, corner>, so gamma(1, 0) = gamma(0, 1) = 0.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import models
from .lattice import is_primitive

Vec = tuple[int, int]
Num = object  # Fraction or float, duck-typed


# ---------------------------------------------------------------------------
# small exact-vector helpers


def det2(u: Sequence, v: Sequence):
    return u[0] * v[1] - u[1] * v[0]


def dot2(u: Sequence, v: Sequence):
    return u[0] * v[0] + u[1] * v[1]


def sub2(p: Sequence, q: Sequence):
    return (p[0] - q[0], p[1] - q[1])


def primitive_of(dx, dy) -> Vec:
    """Primitive integer vector parallel to the rational vector (dx, dy)."""
    fx, fy = Fraction(dx), Fraction(dy)
    if fx == 0 and fy == 0:
        raise ValueError("zero vector has no direction")
    den = math.lcm(fx.denominator, fy.denominator)
    ix, iy = int(fx * den), int(fy * den)
    g = math.gcd(abs(ix), abs(iy))
    return (ix // g, iy // g)


def rationalize_direction(dx: float, dy: float, max_den: int = 10**9) -> Vec:
    """Primitive integer direction of a float vector; raises on irrational slope."""
    if dx == 0 and dy == 0:
        raise ValueError("zero vector has no direction")
    if dx == 0:
        return (0, 1 if dy > 0 else -1)
    if dy == 0:
        return (1 if dx > 0 else -1, 0)
    ratio = Fraction(dy / dx).limit_denominator(max_den)
    cand = (ratio.denominator, ratio.numerator)
    if dx < 0:
        cand = (-cand[0], -cand[1])
    norm = math.hypot(dx, dy)
    err = abs(dx * cand[1] - dy * cand[0]) / (norm * math.hypot(*cand))
    if err > 1e-9:
        raise ValueError(f"direction ({dx}, {dy}) is not rational")
    return cand


def _angle_class(u: Vec) -> int:
    x, y = u
    if x > 0 and y >= 0:
        return 0
    if x <= 0 and y > 0:
        return 1
    if x < 0 and y <= 0:
        return 2
    return 3


def angular_compare(u: Vec, v: Vec) -> int:
    """Exact counterclockwise comparison of nonzero integer directions,
    starting from the positive x-axis."""
    cu, cv = _angle_class(u), _angle_class(v)
    if cu != cv:
        return -1 if cu < cv else 1
    d = det2(u, v)
    if d > 0:
        return -1
    if d < 0:
        return 1
    return 0


def sort_directions(dirs):
    return sorted(dirs, key=functools.cmp_to_key(angular_compare))


# ---------------------------------------------------------------------------
# corner sails and A_n recognition


def sail(u: Vec, v: Vec) -> list[Vec]:
    """The Hilbert basis of cone(u, v) in order: u = w_0, ..., w_k = v with
    det(w_i, w_{i+1}) = 1.  Requires det(u, v) >= 1."""
    q = det2(u, v)
    if q < 1:
        raise ValueError("cone must be positively oriented")
    if q == 1:
        return [u, v]
    # w0 with det(u, w0) = 1 via extended Euclid, then slide along u so that
    # det(w, v) lands in [1, q-1]
    ux, uy = u
    g, x0, y0 = _ext_gcd(ux, uy)
    assert g == 1
    w0 = (-y0, x0)  # det(u, w0) = ux*x0 + uy*y0 = 1
    r = det2(w0, v)
    t = (r - 1) // q  # det(w0 - t*u, v) = r - t*q in [1, q]
    w = (w0[0] - t * ux, w0[1] - t * uy)
    assert det2(u, w) == 1 and 1 <= det2(w, v) < q
    return [u] + sail(w, v)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def corner_singularity(u: Vec, v: Vec) -> Optional[int]:
    """For adjacent inward normals u, v (det > 0): n if the corner is of
    A_n type (n = det - 1; n = 0 is a smooth corner), None otherwise.

    The corner is A_{q-1} exactly when the inset vertex moves with a lattice
    velocity, i.e. when q divides v - u componentwise.
    """
    q = det2(u, v)
    if q < 1:
        raise ValueError("normals must be positively oriented")
    if (v[0] - u[0]) % q == 0 and (v[1] - u[1]) % q == 0:
        return q - 1
    return None


# ---------------------------------------------------------------------------
# polygons


@dataclass
class Polygon:
    """Convex polygon, counterclockwise strictly convex vertex list.

    Vertices are Fractions for exact polygons; floats are allowed (used by
    the staircase domains and wave fronts) as long as every edge direction is
    rational.
    """

    vertices: list[tuple[Num, Num]]

    def __post_init__(self):
        vs = [tuple(v) for v in self.vertices]
        if len(vs) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        area2 = 0
        n = len(vs)
        for i in range(n):
            x1, y1 = vs[i]
            x2, y2 = vs[(i + 1) % n]
            area2 += x1 * y2 - x2 * y1
        if area2 < 0:
            vs = vs[::-1]
            area2 = -area2
        if area2 == 0:
            raise ValueError("polygon has empty interior")
        for i in range(n):
            o, a, b = vs[i], vs[(i + 1) % n], vs[(i + 2) % n]
            if det2(sub2(a, o), sub2(b, a)) <= 0:
                raise ValueError("vertices must be strictly convex (no collinear triples)")
        self.vertices = vs

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (Fraction, int)) for v in self.vertices for c in v)

    def edges(self) -> list[tuple[tuple, tuple]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def edge_normals(self) -> list[Vec]:
        """Inward primitive normals, one per edge, in CCW order."""
        out = []
        for p, q in self.edges():
            d = sub2(q, p)
            if all(isinstance(c, (Fraction, int)) for c in d):
                e = primitive_of(*d)
            else:
                e = rationalize_direction(float(d[0]), float(d[1]))
            out.append((-e[1], e[0]))
        return out

    def support(self, u: Vec):
        """Lower support value h(u) = min over vertices of <u, x>."""
        return min(dot2(u, v) for v in self.vertices)

    def support_with_argmin(self, u: Vec):
        vals = [dot2(u, v) for v in self.vertices]
        h = min(vals)
        where = [i for i, t in enumerate(vals) if t == h]
        return h, where

    def area(self):
        tot = 0
        for p, q in self.edges():
            tot += p[0] * q[1] - q[0] * p[1]
        return tot / 2 if not self.is_exact else Fraction(tot, 2)

    def lattice_perimeter(self):
        return sum(lattice_length(p, q) for p, q in self.edges())

    def contains(self, x, tol=0) -> bool:
        for (p, q), nrm in zip(self.edges(), self.edge_normals()):
            if dot2(nrm, x) - dot2(nrm, p) < -tol:
                return False
        return True

    def corners(self) -> list[tuple[tuple, Vec, Vec]]:
        """(vertex, incoming edge normal, outgoing edge normal) per corner."""
        ns = self.edge_normals()
        n = len(self.vertices)
        return [(self.vertices[i], ns[i - 1], ns[i]) for i in range(n)]

    def active_directions(self) -> list[tuple[Vec, Num]]:
        """Directions sufficient for the exact tropical distance: edge normals
        with their offsets, plus the sail of every non-unimodular corner
        (whose support is attained at the corner vertex)."""
        out = []
        for (p, q), nrm in zip(self.edges(), self.edge_normals()):
            out.append((nrm, dot2(nrm, p)))
        for vtx, u, v in self.corners():
            if det2(u, v) > 1:
                for w in sail(u, v)[1:-1]:
                    out.append((w, dot2(w, vtx)))
        return out

    def rho(self, x):
        """Exact tropical distance min_u (<u, x> - h(u)); raises outside."""
        slacks = [dot2(u, x) - h for u, h in self.active_directions()]
        val = min(slacks)
        if val < 0:
            raise ValueError("exterior point")
        return val

    def translate(self, t):
        return Polygon([(v[0] + t[0], v[1] + t[1]) for v in self.vertices])

    def unimodular_image(self, m: Sequence[Sequence[int]]):
        """Apply an SL(2,Z) matrix [[a,b],[c,d]] to every vertex."""
        (a, b), (c, d) = m
        if a * d - b * c != 1:
            raise ValueError("matrix must have determinant 1")
        return Polygon([(a * v[0] + b * v[1], c * v[0] + d * v[1]) for v in self.vertices])

    def scale(self, r):
        return Polygon([(v[0] * r, v[1] * r) for v in self.vertices])


def lattice_length(p, q):
    """Lattice length of the segment [p, q]: Euclidean length divided by the
    length of the parallel primitive integer vector."""
    d = sub2(q, p)
    if all(isinstance(c, (Fraction, int)) for c in d):
        prim = primitive_of(*d)
        t = Fraction(d[0], prim[0]) if prim[0] != 0 else Fraction(d[1], prim[1])
        return abs(t)
    prim = rationalize_direction(float(d[0]), float(d[1]))
    t = float(d[0]) / prim[0] if prim[0] != 0 else float(d[1]) / prim[1]
    return abs(t)


@dataclass(frozen=True)
class LatticeSegment:
    start: tuple
    end: tuple

    def lattice_length(self):
        return lattice_length(self.start, self.end)


def halfplane_intersection(constraints: list[tuple[Vec, Num]], drop_tol: float = 1e-12):
    """Vertices of the bounded region {<u_i, x> >= h_i} when every constraint
    is a *support* constraint (touches the region).  Constraints may arrive in
    any order; they are sorted CCW by normal angle.  Zero-length edges (equal
    consecutive intersection points) are dropped: exactly for Fractions,
    within drop_tol for floats.

    Returns (vertices, kept_normals); degenerate regions (point or segment)
    return fewer than 3 vertices.
    """
    cs = sorted(constraints, key=functools.cmp_to_key(lambda a, b: angular_compare(a[0], b[0])))
    n = len(cs)
    if n < 3:
        raise ValueError("need at least 3 half-planes")
    exact = all(isinstance(h, (Fraction, int)) for _, h in cs)

    def line_intersect(c1, c2):
        (a1, b1), h1 = c1
        (a2, b2), h2 = c2
        d = a1 * b2 - a2 * b1
        if d == 0:
            return None
        x = (h1 * b2 - h2 * b1) / (Fraction(d) if exact else d)
        y = (a1 * h2 - a2 * h1) / (Fraction(d) if exact else d)
        return (x, y)

    raw = []
    for i in range(n):
        v = line_intersect(cs[i], cs[(i + 1) % n])
        if v is None:
            raise ValueError("adjacent parallel support lines: empty or unbounded region")
        raw.append(v)
    # vertex raw[i] joins edge i and edge i+1; edge i runs raw[i-1] -> raw[i]
    verts, normals = [], []
    for i in range(n):
        prev = raw[(i - 1) % n]
        cur = raw[i]
        if exact:
            degenerate = prev == cur
        else:
            scale = 1 + abs(float(cur[0])) + abs(float(cur[1]))
            degenerate = (
                abs(float(cur[0]) - float(prev[0])) <= drop_tol * scale
                and abs(float(cur[1]) - float(prev[1])) <= drop_tol * scale
            )
        if not degenerate:
            verts.append(cur)
            normals.append(cs[i][0])
    return verts, normals


def clip_polygon(vertices: list[tuple], normal: Vec, offset) -> list[tuple]:
    """Sutherland-Hodgman clip of a convex polygon by {<normal, x> >= offset}."""
    out = []
    n = len(vertices)
    for i in range(n):
        cur, nxt = vertices[i], vertices[(i + 1) % n]
        s_cur = dot2(normal, cur) - offset
        s_nxt = dot2(normal, nxt) - offset
        if s_cur >= 0:
            out.append(cur)
        if (s_cur > 0 > s_nxt) or (s_cur < 0 < s_nxt):
            t = s_cur / (s_cur - s_nxt)
            out.append((cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])))
    # remove consecutive duplicates
    dedup = []
    for v in out:
        if not dedup or v != dedup[-1]:
            dedup.append(v)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


# ---------------------------------------------------------------------------
# arc charts


@dataclass
class ArcChart:
    """One boundary arc in its unimodular corner frame.

    support(a, b) returns gamma_{a,b} = min over the arc of a*x + b*g(x) in
    chart coordinates; gamma(1,0) = gamma(0,1) = 0.  When the graph data g is
    present it must agree with the oracle (checked by tests, not here).
    """

    corner: tuple  # ambient frame corner (intersection of the two support lines)
    u1: Vec  # first inward normal (chart direction (1, 0))
    u2: Vec  # second inward normal (chart direction (0, 1)); det(u1, u2) = 1
    support: Callable[[int, int], Num] = None
    g: Optional[Callable] = None
    dg: Optional[Callable] = None
    d2g: Optional[Callable] = None
    d3g: Optional[Callable] = None
    x_max: Optional[float] = None  # g lives on [0, x_max]
    curvature_bounds: Optional[tuple[float, float]] = None
    exact: bool = False
    name: str = ""
    # integer fast path: when set, the support defect of (a,b,c,d) is exactly
    # 1 / defect_den(a, b, c, d)
    defect_den: Optional[Callable[[int, int, int, int], int]] = None
    # float fast path for bulk constraint construction
    support_float: Optional[Callable[[int, int], float]] = None

    def __post_init__(self):
        if det2(self.u1, self.u2) != 1:
            raise ValueError("chart corner normals must form a positive lattice basis")
        if self.support is None:
            if self.g is None:
                raise ValueError("chart needs a support oracle or graph data")
            self.support = self._support_from_graph

    def ambient_direction(self, a: int, b: int) -> Vec:
        return (a * self.u1[0] + b * self.u2[0], a * self.u1[1] + b * self.u2[1])

    def chart_coordinates(self, u: Vec) -> tuple[int, int]:
        """(a, b) with u = a*u1 + b*u2; entries may be negative."""
        return (det2(u, self.u2), det2(self.u1, u))

    def covers(self, u: Vec) -> bool:
        a, b = self.chart_coordinates(u)
        return a >= 0 and b >= 0

    def ambient_support(self, u: Vec):
        a, b = self.chart_coordinates(u)
        if a < 0 or b < 0:
            raise ValueError("unsupported direction")
        return self.support(a, b) + dot2(u, self.corner)

    def defect(self, quad) -> Num:
        """Support defect gamma(a+c, b+d) - gamma(a, b) - gamma(c, d) >= 0."""
        a, b, c, d = quad
        return self.support(a + c, b + d) - self.support(a, b) - self.support(c, d)

    def tangency_x(self, a: int, b: int) -> float:
        """Argmin over [0, x_max] of a*x + b*g(x): bisection on the increasing
        g' to solve g'(x) = -a/b, then one Newton polish."""
        if a < 0 or b < 0 or (a == 0 and b == 0):
            raise ValueError("direction must be nonnegative and nonzero")
        if b == 0:
            return 0.0
        if a == 0:
            return float(self.x_max)
        target = -a / b
        lo, hi = 0.0, float(self.x_max)
        if self.dg(hi) <= target:
            return hi
        try:
            flo = self.dg(max(lo, 1e-18))
        except (ValueError, ZeroDivisionError):
            flo = -math.inf
        if flo >= target:
            return lo
        a_, b_ = lo, hi
        for _ in range(200):
            mid = 0.5 * (a_ + b_)
            if self.dg(mid) < target:
                a_ = mid
            else:
                b_ = mid
            if b_ - a_ <= 1e-13 * max(1.0, abs(b_)):
                break
        x = 0.5 * (a_ + b_)
        d2 = self.d2g(x) if self.d2g else None
        if d2:
            x -= (self.dg(x) - target) / d2
            x = min(max(x, lo), hi)
        return x

    def _support_from_graph(self, a: int, b: int):
        """min over [0, x_max] of a*x + b*g(x) at the tangency point."""
        if a < 0 or b < 0 or (a == 0 and b == 0):
            raise ValueError("direction must be nonnegative and nonzero")
        if a == 0 or b == 0:
            return 0.0  # the arc meets both axes
        x = self.tangency_x(a, b)
        return a * x + b * self.g(x)

    def equiaffine_length(self) -> Optional[float]:
        """integral of (g'')^(1/3) when graph data is available."""
        if self.d2g is None:
            return None
        from .equiaffine import length_graph

        return length_graph(self.d2g, (0.0, float(self.x_max)))


# ---------------------------------------------------------------------------
# builtin charts


def _parabola_chart(corner, u1, u2, name):
    def g(x):
        return (1 - math.sqrt(x)) ** 2

    def dg(x):
        return 1 - 1 / math.sqrt(x)

    def d2g(x):
        return 0.5 * x ** (-1.5)

    def d3g(x):
        return -0.75 * x ** (-2.5)

    return ArcChart(
        corner=corner, u1=u1, u2=u2,
        support=lambda a, b: models.parabola_support(a, b),
        g=g, dg=dg, d2g=d2g, d3g=d3g, x_max=1.0,
        exact=True, name=name,
        defect_den=lambda a, b, c, d: (a + b) * (c + d) * (a + b + c + d),
        support_float=lambda a, b: a * b / (a + b) if a and b else 0.0,
    )


def _disk_chart(radius: float, corner, u1, u2, name):
    r = float(radius)

    def supp(a, b):
        return r * (a + b - math.hypot(a, b))

    def g(x):
        return r - math.sqrt(max(r * r - (x - r) ** 2, 0.0))

    def dg(x):
        return (x - r) / math.sqrt(max(r * r - (x - r) ** 2, 1e-300))

    def d2g(x):
        return r * r / max(r * r - (x - r) ** 2, 1e-300) ** 1.5

    def d3g(x):
        u = x - r
        return 3 * r * r * u / max(r * r - u * u, 1e-300) ** 2.5

    return ArcChart(corner=corner, u1=u1, u2=u2, support=supp,
                    g=g, dg=dg, d2g=d2g, d3g=d3g, x_max=r, exact=False, name=name)


def _parabolic_triangle_charts():
    # chart 1 at trapezoid corner (1/2, 0): normals (1,1) and (0,1)
    def supp1(a, b):
        if a == 0 and b == 0:
            raise ValueError("zero direction")
        return Fraction(a * b, 2 * (2 * a + b)) if a and b else Fraction(0)

    def g1(x):
        return (0.5 - math.sqrt(x / 2)) ** 2

    def dg1(x):
        return -(0.5 - math.sqrt(x / 2)) / math.sqrt(2 * x)

    def d2g1(x):
        return 1 / (4 * math.sqrt(2) * x**1.5)

    c1 = ArcChart(corner=(Fraction(1, 2), Fraction(0)), u1=(1, 1), u2=(0, 1),
                  support=supp1, g=g1, dg=dg1, d2g=d2g1,
                  d3g=lambda x: -3 / (8 * math.sqrt(2) * x**2.5),
                  x_max=0.5, exact=True, name="lower",
                  defect_den=lambda a, b, c, d: (2 * a + b) * (2 * c + d)
                  * (2 * (a + c) + b + d))

    # chart 2 at corner (0, 1/2) is the x <-> y mirror of chart 1
    def supp2(a, b):
        if a == 0 and b == 0:
            raise ValueError("zero direction")
        return Fraction(a * b, 2 * (a + 2 * b)) if a and b else Fraction(0)

    c2 = ArcChart(corner=(Fraction(0), Fraction(1, 2)), u1=(1, 0), u2=(1, 1),
                  support=supp2, g=g1, dg=dg1, d2g=d2g1, d3g=c1.d3g,
                  x_max=0.5, exact=True, name="upper",
                  defect_den=lambda a, b, c, d: (a + 2 * b) * (c + 2 * d)
                  * (a + c + 2 * (b + d)))
    return [c1, c2]


def _d_alpha_chart(alpha: float, n_max: int):
    offsets = models.d_alpha_offsets(alpha, n_max)
    sizes = models.d_alpha_cut_sizes(alpha, n_max)
    half = 2 * models.riemann_zeta(1.0 / alpha).real
    # chain vertices in the corner frame, k = 0..n_max
    xs = np.empty(n_max + 1)
    ys = np.empty(n_max + 1)
    xs[0], ys[0] = 0.0, offsets[0]
    ks = np.arange(1, n_max)
    xs[1:n_max] = offsets[:-1][ks - 1] - ks * sizes[ks]
    ys[1:n_max] = sizes[ks]
    xs[n_max], ys[n_max] = offsets[-1], 0.0

    def supp(a, b):
        if a == 0 and b == 0:
            raise ValueError("zero direction")
        if a == 0 or b == 0:
            return 0.0
        k = min(b // a, n_max)
        return a * xs[k] + b * ys[k]

    corner = (-half, -half)
    return ArcChart(corner=corner, u1=(1, 0), u2=(0, 1), support=supp,
                    exact=False, name=f"staircase(alpha={alpha})")


# ---------------------------------------------------------------------------
# domains


@dataclass
class ConvexDomain:
    """A compact convex planar domain with its support calculus."""

    kind: str  # "polygon" | "smooth" | "builtin"
    polygon: Optional[Polygon] = None  # the domain itself, for kind == polygon
    hat_polygon: Optional[Polygon] = None  # declared minimal model, smooth/builtin
    charts: list[ArcChart] = field(default_factory=list)
    tag: str = ""
    params: dict = field(default_factory=dict)
    _mm_cache: object = None

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_polygon(vertices) -> "ConvexDomain":
        return ConvexDomain(kind="polygon", polygon=Polygon(list(vertices)))

    @staticmethod
    def rectangle(p, q) -> "ConvexDomain":
        p, q = Fraction(p), Fraction(q)
        if p <= 0 or q <= 0:
            raise ValueError("rectangle sides must be positive")
        dom = ConvexDomain.from_polygon([(0, 0), (p, 0), (p, q), (0, q)])
        dom.tag = "rectangle"
        dom.params = {"P": p, "Q": q}
        return dom

    @staticmethod
    def disk(radius: float = 1.0) -> "ConvexDomain":
        r = float(radius)
        if r <= 0:
            raise ValueError("radius must be positive")
        hat = Polygon([(-r, -r), (r, -r), (r, r), (-r, r)])
        charts = [
            _disk_chart(r, (-r, -r), (1, 0), (0, 1), "SW"),
            _disk_chart(r, (r, -r), (0, 1), (-1, 0), "SE"),
            _disk_chart(r, (r, r), (-1, 0), (0, -1), "NE"),
            _disk_chart(r, (-r, r), (0, -1), (1, 0), "NW"),
        ]
        return ConvexDomain(kind="builtin", hat_polygon=hat, charts=charts,
                            tag="disk", params={"radius": r})

    @staticmethod
    def domain_L() -> "ConvexDomain":
        one = Fraction(1)
        hat = Polygon([(-one, -one), (one, -one), (one, one), (-one, one)])
        charts = [
            _parabola_chart((-one, -one), (1, 0), (0, 1), "SW"),
            _parabola_chart((one, -one), (0, 1), (-1, 0), "SE"),
            _parabola_chart((one, one), (-1, 0), (0, -1), "NE"),
            _parabola_chart((-one, one), (0, -1), (1, 0), "NW"),
        ]
        return ConvexDomain(kind="builtin", hat_polygon=hat, charts=charts, tag="domain_L")

    @staticmethod
    def parabolic_triangle() -> "ConvexDomain":
        hat = Polygon([(Fraction(1, 2), 0), (1, 0), (0, 1), (0, Fraction(1, 2))])
        return ConvexDomain(kind="builtin", hat_polygon=hat,
                            charts=_parabolic_triangle_charts(), tag="parabolic_triangle")

    @staticmethod
    def d_alpha(alpha: float, n_max: int) -> "ConvexDomain":
        half = 2 * models.riemann_zeta(1.0 / alpha).real
        hat = Polygon([(-half, -half), (half, -half), (half, half), (-half, half)])
        chart = _d_alpha_chart(alpha, n_max)
        return ConvexDomain(kind="builtin", hat_polygon=hat, charts=[chart],
                            tag="d_alpha", params={"alpha": float(alpha), "n_max": int(n_max)})

    @staticmethod
    def smooth(hat_vertices, charts: list[ArcChart]) -> "ConvexDomain":
        if not 3 <= len(charts) <= 6:
            raise ValueError("a smooth domain has 3 to 6 boundary arcs")
        return ConvexDomain(kind="smooth", hat_polygon=Polygon(list(hat_vertices)),
                            charts=charts)

    # -- basic queries -------------------------------------------------------

    @property
    def is_polygon(self) -> bool:
        return self.kind == "polygon"

    def hat(self) -> Polygon:
        """The minimal model polygon."""
        if self.is_polygon:
            from .minimal import minimal_model_of

            return minimal_model_of(self).polygon
        return self.hat_polygon

    def support(self, u: Vec):
        """Lower support value h(u), exact for polygons."""
        if not is_primitive(*u):
            raise ValueError("direction must be a primitive integer vector")
        if self.is_polygon:
            return self.polygon.support(u)
        best = None
        for chart in self.charts:
            if chart.covers(u):
                val = chart.ambient_support(u)
                best = val if best is None else min(best, val)
        if best is not None:
            return best
        return self.hat_polygon.support(u)

    def chart_for(self, u: Vec) -> Optional[ArcChart]:
        for chart in self.charts:
            if chart.covers(u):
                return chart
        return None

    def area(self, eps: float = 1e-9):
        """Exact for polygons; otherwise Area(hat) - sum of size^2/2 over all
        cuts, truncated at eps (tail below eps is O(eps^(4/3)))."""
        if self.is_polygon:
            return self.polygon.area()
        if self.tag == "domain_L":
            return Fraction(10, 3)
        if self.tag == "disk":
            return math.pi * self.params["radius"] ** 2
        if self.tag == "parabolic_triangle":
            return Fraction(1, 3)
        from .cutting import enumerate_cuts

        tree = enumerate_cuts(self, eps)
        hat_area = float(self.hat_polygon.area())
        return hat_area - sum(float(s) ** 2 for s in tree.sizes()) / 2

    def contains(self, x, tol: float = 1e-12) -> bool:
        if self.is_polygon:
            return self.polygon.contains(x, tol=Fraction(0) if self.polygon.is_exact else tol)
        try:
            return self.rho(x) >= -tol
        except ValueError:
            return False

    def rho(self, x, floor: float = 1e-8):
        """Tropical distance; ValueError("exterior point") outside the domain.
        floor bounds the refinement depth for smooth domains (values below it
        are near-boundary and carry absolute error up to floor)."""
        if self.is_polygon:
            return self.polygon.rho(x)
        from .cutting import tropical_distance_smooth

        return tropical_distance_smooth(self, x, floor=floor)

    def m_and_M(self):
        from .minimal import minimal_model_of

        mm = minimal_model_of(self)
        return mm.m, mm.max_locus


def tropical_distance(domain: ConvexDomain, x):
    return domain.rho(x)


def support_value(domain: ConvexDomain, u: Vec):
    return domain.support(u)


def lattice_perimeter(poly: Polygon):
    return poly.lattice_perimeter()


# ---------------------------------------------------------------------------
# JSON domain specs


def _frac_to_str(f) -> str:
    f = Fraction(f)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def domain_from_dict(spec: dict) -> ConvexDomain:
    kind = spec.get("kind")
    if kind == "polygon":
        verts = [(Fraction(sx), Fraction(sy)) for sx, sy in spec["vertices"]]
        return ConvexDomain.from_polygon(verts)
    if kind == "builtin":
        tag = spec.get("tag")
        if tag == "domain_L":
            return ConvexDomain.domain_L()
        if tag == "disk":
            return ConvexDomain.disk(spec.get("radius", 1.0))
        if tag == "parabolic_triangle":
            return ConvexDomain.parabolic_triangle()
        if tag == "d_alpha":
            return ConvexDomain.d_alpha(spec["alpha"], int(spec.get("n_max", 10**5)))
        if tag == "rectangle":
            return ConvexDomain.rectangle(Fraction(spec["P"]), Fraction(spec["Q"]))
        raise ValueError(f"unknown builtin tag {tag!r}")
    if kind == "smooth":
        hat = [(Fraction(sx), Fraction(sy)) for sx, sy in spec["minimal_model"]["vertices"]]
        hat_poly = Polygon(hat)
        charts = []
        for cspec in spec["charts"]:
            idx = int(cspec["corner"])
            vtx, u_in, u_out = hat_poly.corners()[idx]
            coeffs = [float(c) for c in cspec["g_poly"]]
            x_max = float(cspec["x_max"])
            p = np.polynomial.Polynomial(coeffs)
            dp, d2p, d3p = p.deriv(1), p.deriv(2), p.deriv(3)
            charts.append(ArcChart(corner=vtx, u1=u_in, u2=u_out,
                                   support=None, g=p, dg=dp, d2g=d2p, d3g=d3p,
                                   x_max=x_max, name=f"corner{idx}"))
        return ConvexDomain.smooth(hat, charts)
    raise ValueError(f"unknown domain kind {kind!r}")


def domain_to_dict(domain: ConvexDomain) -> dict:
    if domain.is_polygon and domain.tag == "rectangle":
        return {"kind": "builtin", "tag": "rectangle",
                "P": _frac_to_str(domain.params["P"]), "Q": _frac_to_str(domain.params["Q"])}
    if domain.is_polygon:
        return {"kind": "polygon",
                "vertices": [[_frac_to_str(x), _frac_to_str(y)] for x, y in domain.polygon.vertices]}
    if domain.tag:
        out = {"kind": "builtin", "tag": domain.tag}
        if domain.tag == "disk":
            out["radius"] = domain.params["radius"]
        if domain.tag == "d_alpha":
            out.update(alpha=domain.params["alpha"], n_max=domain.params["n_max"])
        return out
    raise ValueError("user smooth domains cannot be serialized")
