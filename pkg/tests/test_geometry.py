import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropzeta import geometry as geo
from tropzeta.geometry import ConvexDomain, Polygon


def unit_square():
    return Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


class TestPolygonBasics:
    def test_orientation_normalized(self):
        p = Polygon([(0, 0), (0, 1), (1, 1), (1, 0)])  # clockwise input
        assert p.area() == 1

    def test_collinear_rejected(self):
        with pytest.raises(ValueError):
            Polygon([(0, 0), (1, 0), (2, 0), (1, 1)])

    def test_edge_normals_inward(self):
        sq = unit_square()
        assert set(sq.edge_normals()) == {(0, 1), (-1, 0), (0, -1), (1, 0)}

    def test_support_values(self):
        sq = unit_square()
        assert sq.support((1, 0)) == 0
        assert sq.support((-1, -1)) == -2

    def test_area_lattice_perimeter(self):
        tri = Polygon([(0, 0), (1, 0), (0, 1)])
        assert tri.area() == Fraction(1, 2)
        assert tri.lattice_perimeter() == 3
        rect = Polygon([(0, 0), (3, 0), (3, 2), (0, 2)])
        assert rect.lattice_perimeter() == 10


class TestLatticeLength:
    def test_axis(self):
        assert geo.lattice_length((0, 0), (2, 0)) == 2

    def test_diagonal(self):
        assert geo.lattice_length((0, 0), (1, 1)) == 1

    def test_2_4(self):
        # primitive (1,2): |(2,4)| / |(1,2)| = 2
        assert geo.lattice_length((0, 0), (2, 4)) == 2

    def test_fractional(self):
        assert geo.lattice_length((0, 0), (Fraction(1, 2), Fraction(1, 2))) == Fraction(1, 2)


class TestSail:
    def test_unimodular_passthrough(self):
        assert geo.sail((1, 0), (0, 1)) == [(1, 0), (0, 1)]

    def test_a1_cone(self):
        assert geo.sail((1, 0), (1, 2)) == [(1, 0), (1, 1), (1, 2)]

    def test_sharp_cone(self):
        chain = geo.sail((1, 0), (2, 5))
        assert chain[0] == (1, 0) and chain[-1] == (2, 5)
        for w1, w2 in zip(chain, chain[1:]):
            assert geo.det2(w1, w2) == 1

    @given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
    @settings(max_examples=120)
    def test_sail_dets_always_one(self, a, b, c, d):
        u, v = (a, b), (c, d)
        if (a, b) == (0, 0) or (c, d) == (0, 0):
            return
        if math.gcd(abs(a), abs(b)) != 1 or math.gcd(abs(c), abs(d)) != 1:
            return
        if geo.det2(u, v) < 1:
            return
        chain = geo.sail(u, v)
        assert all(geo.det2(w1, w2) == 1 for w1, w2 in zip(chain, chain[1:]))


class TestCornerSingularity:
    def test_smooth(self):
        assert geo.corner_singularity((1, 0), (0, 1)) == 0

    def test_a1(self):
        assert geo.corner_singularity((1, 0), (1, 2)) == 1

    def test_non_a_type(self):
        assert geo.corner_singularity((1, 0), (2, 5)) is None


class TestRho:
    def test_square_center(self):
        assert unit_square().rho((Fraction(1, 2), Fraction(1, 2))) == Fraction(1, 2)

    def test_boundary_is_zero(self):
        assert unit_square().rho((Fraction(1, 2), 0)) == 0

    def test_rectangle_interior(self):
        rect = Polygon([(0, 0), (3, 0), (3, 2), (0, 2)])
        assert rect.rho((Fraction(3, 2), 1)) == 1

    def test_exterior_raises(self):
        with pytest.raises(ValueError, match="exterior"):
            unit_square().rho((2, 2))

    def test_sharp_corner_needs_sail(self):
        # corner with normals (1,0),(2,5): interior direction (1,1) of the sail
        # genuinely lowers rho near the corner
        poly = Polygon([(0, 0), (5, -2), (6, 6), (-4, 8)])
        dirs = dict(poly.active_directions())
        assert (1, 1) in dirs
        x = (Fraction(1, 2), Fraction(1, 4))
        rho = poly.rho(x)
        edge_only = min(
            geo.dot2(nrm, x) - geo.dot2(nrm, p)
            for (p, q), nrm in zip(poly.edges(), poly.edge_normals())
        )
        assert rho < edge_only

    def test_concavity_on_chords(self):
        import random

        rng = random.Random(3)
        poly = Polygon([(0, 0), (4, 1), (5, 5), (1, 6), (-2, 3)])
        for _ in range(200):
            a = (Fraction(rng.randint(0, 40), 10), Fraction(rng.randint(12, 45), 10))
            b = (Fraction(rng.randint(0, 40), 10), Fraction(rng.randint(12, 45), 10))
            if not (poly.contains(a) and poly.contains(b)):
                continue
            mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            assert poly.rho(mid) >= (poly.rho(a) + poly.rho(b)) / 2

    def test_scaling_homogeneity(self):
        poly = Polygon([(0, 0), (4, 1), (5, 5), (1, 6), (-2, 3)])
        x = (Fraction(2), Fraction(3))
        for r in [Fraction(1, 2), 2, 3]:
            scaled = poly.scale(r)
            assert scaled.rho((x[0] * r, x[1] * r)) == r * poly.rho(x)

    def test_sl2_invariance(self):
        import random

        rng = random.Random(11)
        poly = Polygon([(0, 0), (4, 1), (5, 5), (1, 6), (-2, 3)])
        pts = [(Fraction(2), Fraction(3)), (Fraction(1), Fraction(2)), (Fraction(3), Fraction(2))]
        for _ in range(5):
            # random SL2(Z) via products of elementary matrices
            m = [[1, 0], [0, 1]]
            for _ in range(4):
                k = rng.randint(-2, 2)
                if rng.random() < 0.5:
                    m = [[m[0][0] + k * m[1][0], m[0][1] + k * m[1][1]], m[1]]
                else:
                    m = [m[0], [m[1][0] + k * m[0][0], m[1][1] + k * m[0][1]]]
            image = poly.unimodular_image(m)
            for x in pts:
                y = (m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1])
                assert image.rho(y) == poly.rho(x)


class TestHalfplaneIntersection:
    def test_square(self):
        cons = [((1, 0), 0), ((0, 1), 0), ((-1, 0), -1), ((0, -1), -1)]
        verts, normals = geo.halfplane_intersection(cons)
        assert len(verts) == 4
        assert set(verts) == {(0, 0), (1, 0), (1, 1), (0, 1)}

    def test_zero_length_edge_dropped(self):
        # x+y >= 1 touches the square [0,1]^2 cut exactly at vertex... use
        # support line through (0,1),(1,0) of the triangle: degenerate edge
        cons = [((1, 0), 0), ((0, 1), 0), ((-1, -1), -1), ((1, 1), 1)]
        # region: triangle x,y >= 0, x + y <= 1 intersect x + y >= 1 is the segment
        verts, normals = geo.halfplane_intersection(cons)
        assert len(verts) == 2

    def test_clip(self):
        sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
        clipped = geo.clip_polygon([(Fraction(x), Fraction(y)) for x, y in sq], (1, 1), Fraction(1))
        assert set(clipped) == {(1, 0), (1, 1), (0, 1)}


class TestCharts:
    def test_parabola_chart_consistency(self):
        dom = ConvexDomain.domain_L()
        chart = dom.charts[0]
        # oracle equals min_x (a x + b g(x)) from the graph, primitive (a,b), a+b <= 50
        for a in range(0, 51):
            for b in range(0, 51 - a):
                if (a, b) == (0, 0) or math.gcd(a, b) != 1:
                    continue
                via_graph = chart._support_from_graph(a, b)
                assert abs(float(chart.support(a, b)) - via_graph) < 1e-10

    def test_defects_nonnegative(self):
        dom = ConvexDomain.disk()
        chart = dom.charts[0]
        from tropzeta.lattice import stern_brocot_quadruples

        for quad in stern_brocot_quadruples(30):
            assert chart.defect(quad.as_tuple()) >= 0

    def test_parabolic_support_example(self):
        # parabolic chart, u = (2,1) -> 2/3
        dom = ConvexDomain.domain_L()
        assert dom.charts[0].support(2, 1) == Fraction(2, 3)


class TestDomains:
    def test_square_supports(self):
        sq = ConvexDomain.from_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
        assert geo.support_value(sq, (1, 0)) == 0
        assert geo.support_value(sq, (-1, -1)) == -2

    def test_disk_support(self):
        disk = ConvexDomain.disk(1.0)
        for u in [(1, 0), (3, 4), (-3, 4), (-1, -1), (0, -1)]:
            assert disk.support(u) == pytest.approx(-math.hypot(*u), abs=1e-12)

    def test_L_support_matches_parabola(self):
        dom = ConvexDomain.domain_L()
        assert dom.support((1, 1)) == Fraction(-3, 2)
        assert dom.support((1, 0)) == -1

    def test_parabolic_triangle_supports(self):
        dom = ConvexDomain.parabolic_triangle()
        assert dom.support((1, 1)) == Fraction(1, 2)
        assert dom.support((-1, -1)) == -1
        assert dom.support((1, 0)) == 0

    def test_d_alpha_chart_defects(self):
        dom = ConvexDomain.d_alpha(0.5, 50)
        chart = dom.charts[0]
        # defect of the wedge ((1,n-1),(0,1)) is n^{-2}
        for n in range(1, 20):
            quad = (1, n - 1, 0, 1)
            assert chart.defect(quad) == pytest.approx(n ** (-2.0), rel=1e-12)
        # non-chain wedges have zero defect
        assert chart.defect((1, 0, 1, 1)) == pytest.approx(0.0, abs=1e-12)

    def test_areas(self):
        assert ConvexDomain.rectangle(3, 2).polygon.area() == 6
        assert float(ConvexDomain.domain_L().area()) == pytest.approx(10 / 3)
        assert ConvexDomain.parabolic_triangle().area() == Fraction(1, 3)


class TestJson:
    def test_polygon_round_trip(self):
        spec = {"kind": "polygon", "vertices": [["0", "0"], ["3", "0"], ["3", "2"], ["0", "2"]]}
        dom = geo.domain_from_dict(spec)
        assert dom.polygon.area() == 6
        out = geo.domain_to_dict(dom)
        dom2 = geo.domain_from_dict(out)
        assert dom2.polygon.vertices == dom.polygon.vertices

    def test_builtins(self):
        for spec in [
            {"kind": "builtin", "tag": "domain_L"},
            {"kind": "builtin", "tag": "disk", "radius": 2.0},
            {"kind": "builtin", "tag": "d_alpha", "alpha": 0.5, "n_max": 100},
            {"kind": "builtin", "tag": "rectangle", "P": "3", "Q": "2"},
            {"kind": "builtin", "tag": "parabolic_triangle"},
        ]:
            dom = geo.domain_from_dict(spec)
            if spec["tag"] != "rectangle":
                assert dom.tag == spec["tag"]

    def test_smooth_chart_from_polynomial(self):
        # quarter-parabola y = (1-x)^2 /. frame of the unit square corner:
        # g(x) = (1 - sqrt(x))^2 is not polynomial; use g(x) = (1-x)^2 * 1/2 + ...
        # simplest: g(x) = 1 - 2x + x^2 on [0,1] has g(1) = 0, g' = -2 + 2x <= 0,
        # g'' = 2 > 0
        spec = {
            "kind": "smooth",
            "minimal_model": {"vertices": [["0", "0"], ["2", "0"], ["2", "2"], ["0", "2"]]},
            "charts": [
                {"corner": i, "g_poly": ["1", "-2", "1"], "x_max": 1.0} for i in range(4)
            ],
        }
        dom = geo.domain_from_dict(spec)
        c = dom.charts[0]
        assert c.support(1, 0) == pytest.approx(0.0, abs=1e-12)
        # min of x + g(x): derivative 1 - 2 + 2x = 0 at x = 1/2: 1/2 + 1/4 = 3/4
        assert c.support(1, 1) == pytest.approx(0.75, abs=1e-10)
