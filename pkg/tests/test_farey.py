import math
from fractions import Fraction

import numpy as np
import pytest

from tropzeta import farey, models
from tropzeta.farey import (
    SmoothWeight,
    endpoint_model,
    farey_zeta,
    fejer_defect,
    h_kernel,
    h_kernel_integral,
    h_kernel_integral_quadrature,
    hata_basis,
    hata_coefficient,
    hata_reconstruct,
    legendre_dual,
    residue_main_term,
    sigma_b,
)
from tropzeta.geometry import ConvexDomain
from tropzeta.lattice import farey_from_denominators


def interval(b, d):
    return farey_from_denominators(b, d)


class TestHataBasis:
    def test_mediant_is_one(self):
        for b, d in [(1, 1), (2, 3), (5, 7), (3, 8)]:
            iv = interval(b, d)
            assert hata_basis(iv, float(iv.mediant)) == pytest.approx(1.0)

    def test_endpoints_are_zero(self):
        iv = interval(2, 3)
        assert hata_basis(iv, float(iv.left)) == pytest.approx(0.0)
        assert hata_basis(iv, float(iv.right)) == pytest.approx(0.0)

    def test_outside_support_is_zero(self):
        iv = interval(2, 3)  # [1/3, 1/2]
        for x in (0.0, 0.2, 0.6, 1.0):
            assert hata_basis(iv, x) == pytest.approx(0.0)


class TestHataCoefficient:
    def test_full_interval_quadratic(self):
        w = SmoothWeight.quadratic()
        c_i, t_i = hata_coefficient(w, interval(1, 1))
        assert c_i == pytest.approx(-1 / 8)
        assert t_i == pytest.approx(-1 / 4)

    def test_linear_weight_vanishes(self):
        w = SmoothWeight.from_polynomial([3, 2])  # f = 3 + 2x
        for b, d in [(1, 1), (3, 4), (5, 2)]:
            c_i, t_i = hata_coefficient(w, interval(b, d))
            assert abs(c_i) < 5e-15 and abs(t_i) < 5e-14

    def test_quadratic_exact_formula(self):
        # T_I = -1/(2 b d (b+d)) exactly when f'' = 1
        w = SmoothWeight.quadratic()
        for b, d in [(1, 1), (2, 3), (7, 4), (10, 9)]:
            _, t_i = hata_coefficient(w, interval(b, d))
            assert t_i == pytest.approx(-1 / (2 * b * d * (b + d)), rel=1e-12)

    def test_mean_value_bracket(self):
        # -T_I * 2bd(b+d) lies between min and max of f'' on I
        w = SmoothWeight.from_polynomial([0, 0, 0.5, 1 / 10])  # f'' = 1 + 3x/5
        for b, d in [(1, 1), (2, 3), (5, 8), (9, 2)]:
            iv = interval(b, d)
            _, t_i = hata_coefficient(w, iv)
            val = -t_i * 2 * b * d * (b + d)
            lo = min(w.d2f(float(iv.left)), w.d2f(float(iv.right)))
            hi = max(w.d2f(float(iv.left)), w.d2f(float(iv.right)))
            assert lo - 1e-12 <= val <= hi + 1e-12


class TestHataReconstruct:
    def test_linear_is_exact(self):
        w = SmoothWeight.from_polynomial([1, -2])
        for b in (1, 4, 16):
            for x in (0.0, 0.3, 0.71, 1.0):
                assert hata_reconstruct(w, b, x) == pytest.approx(w.f(x), abs=1e-14)

    def test_hand_value_at_half(self):
        # B = 2: only interval [0/1, 1/1]: 1/2 * 1/2 + (-1/8)(1) = 1/8 = f(1/2)
        w = SmoothWeight.quadratic()
        assert hata_reconstruct(w, 2, 0.5) == pytest.approx(1 / 8, abs=1e-15)

    def test_uniform_convergence_monotone(self):
        w = SmoothWeight.quadratic()
        xs = np.linspace(0, 1, 101)
        sups = []
        for bound in (4, 16, 64, 256):
            err = max(abs(hata_reconstruct(w, bound, float(x)) - w.f(float(x))) for x in xs)
            sups.append(err)
        assert sups[0] > sups[1] > sups[2] > sups[3]


class TestFareyZeta:
    def test_quadratic_matches_mordell_tornheim_half(self):
        # Z_f(1) for f = x^2/2: term-by-term equal to half the primitive
        # Mordell-Tornheim sum over the same coprime index set, and
        # converging to MT(1)/2 = 1
        bound = 300
        est = farey_zeta(SmoothWeight.quadratic(), 1.0, bound)
        same_set = sum(
            1.0 / (2 * b * d * (b + d))
            for b in range(1, bound + 1)
            for d in range(1, bound + 1)
            if math.gcd(b, d) == 1
        )
        assert complex(est.value).real == pytest.approx(same_set, rel=1e-12)
        # tail over max(b,d) > B decays like log(B)/B
        assert complex(est.value).real == pytest.approx(1.0, abs=0.02)

    def test_linear_is_zero(self):
        est = farey_zeta(SmoothWeight.from_polynomial([0, 1]), 1.0, 30)
        assert abs(complex(est.value)) < 1e-12

    def test_endpoint_model_equals_farey_zeta_for_constant_curvature(self):
        w = SmoothWeight.quadratic()
        for s in (1.0, 0.8, 2.0):
            a = complex(farey_zeta(w, s, 60).value)
            b = complex(endpoint_model(w, s, 60).value)
            assert a == pytest.approx(b, rel=1e-12)

    def test_endpoint_model_b1(self):
        # single interval [0/1, 1/1]: term 2^-s |f''(1)|^s / (b d (b+d))^s
        w = SmoothWeight.from_polynomial([0, 0, 0.5, 1 / 6])  # f'' = 1 + x
        s = 1.3
        est = endpoint_model(w, s, 1)
        assert est.terms_used == 1
        assert complex(est.value).real == pytest.approx(2.0 ** (-s) * 2.0**s / 2.0**s)

    def test_endpoint_model_difference_stabilizes(self):
        # Z_f - Z^end converges absolutely for Re(s) > 1/2 (the holomorphic-
        # difference principle): successive partial differences are Cauchy
        w = SmoothWeight.from_polynomial([0, 0, 0.5, 1 / 6])  # f'' = x + 1
        diffs = []
        for bound in (20, 50, 120, 240):
            a = complex(farey_zeta(w, 1.0, bound).value).real
            b = complex(endpoint_model(w, 1.0, bound).value).real
            diffs.append(a - b)
        deltas = [abs(d2 - d1) for d1, d2 in zip(diffs, diffs[1:])]
        assert deltas[0] > deltas[1] > deltas[2]
        assert deltas[2] < 5e-4

    def test_removing_two_intervals_changes_exactly_those_terms(self):
        w = SmoothWeight.quadratic()
        s = 1.0
        full = complex(farey_zeta(w, s, 12).value).real
        # remove the two intervals adjacent to 0/1: (b,d) = (1,1) and d-max ones
        iv1 = interval(1, 1)
        _, t1 = hata_coefficient(w, iv1)
        without = full - abs(t1) ** s
        assert without == pytest.approx(full - abs(t1), rel=1e-12)


class TestHKernel:
    def test_telescoping_at_s1(self):
        assert h_kernel(1.0, 1.0).real == pytest.approx(1.0, rel=1e-12)
        assert h_kernel(1.0, 0.5).real == pytest.approx(2.0, rel=1e-12)  # 1/u

    def test_brute_force_agreement(self):
        for s in (0.7, 0.66, 0.9, 0.55):
            for u in (0.1, 0.37, 1.0):
                k = np.arange(2 * 10**6)
                brute = float(((k + u) ** (-s) * (k + 1 + u) ** (-s)).sum())
                # brute truncation tail ~ K^(1-2s)/(2s-1)
                tail = (2e6) ** (1 - 2 * s) / (2 * s - 1)
                accel = h_kernel(s, u).real
                assert abs(accel - (brute + tail)) < 5e-7 * max(1, abs(accel))

    def test_integral_closed_form_vs_quadrature(self):
        for s in (2 / 3, 0.7, 0.8):
            closed = h_kernel_integral(s).real
            quad = h_kernel_integral_quadrature(s)
            assert abs(closed - quad) < 1e-9 * max(1, abs(closed))

    def test_lemma5_special_value(self):
        g = math.gamma
        target = g(1 / 3) ** 2 / g(2 / 3)
        assert h_kernel_integral(2 / 3).real == pytest.approx(target, rel=1e-12)
        assert h_kernel_integral_quadrature(2 / 3) == pytest.approx(target, abs=1e-9)

    def test_pointwise_bound_shape(self):
        # |H_s(u)| <= C_s u^-sigma with C_s = 2 + zeta(2s) (the k = 0 term
        # plus the tail, which is at most zeta(2 sigma))
        for s in (0.6, 2 / 3, 0.85):
            c_s = 2.0 + models.riemann_zeta(2 * s).real
            for u in np.linspace(0.01, 1.0, 25):
                val = abs(h_kernel(s, float(u)))
                assert val <= c_s * u ** (-s)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            h_kernel(0.4, 0.5)
        with pytest.raises(ValueError):
            h_kernel_integral(1.2)


class TestSigmaB:
    def test_b1_single_term(self):
        w = SmoothWeight.quadratic()
        val, main, dev = sigma_b(w, 0.7, 1)
        assert val == pytest.approx(h_kernel(0.7, 1.0))

    def test_constant_curvature_b7(self):
        w = SmoothWeight.quadratic()
        val, main, dev = sigma_b(w, 0.7, 7)
        direct = sum(h_kernel(0.7, r / 7) for r in range(1, 7))
        assert val == pytest.approx(direct, rel=1e-12)
        assert main == pytest.approx(6 * h_kernel_integral(0.7), rel=1e-10)

    def test_deviation_growth_exponent(self):
        # fitted exponent of |Sigma_b - main| over primes <= (1 + sigma)/2 + 0.1
        w = SmoothWeight.from_polynomial([0, 0, 0.5, 1 / 10])
        primes = [101, 211, 401, 809, 1601, 3203, 4801]
        primes = [p for p in primes if all(p % q for q in range(2, int(p**0.5) + 1))]
        s = 0.7
        devs = [sigma_b(w, s, p)[2] for p in primes]
        slope, _, _ = _loglog(primes, devs)
        assert slope <= (1 + s) / 2 + 0.1


def _loglog(xs, ys):
    x = np.log(np.array(xs, dtype=float))
    y = np.log(np.array(ys, dtype=float))
    a = np.vstack([x, np.ones_like(x)]).T
    (slope, icept), res, *_ = np.linalg.lstsq(a, y, rcond=None)
    return float(slope), float(icept), res


class TestFejer:
    def test_constant_is_exact(self):
        assert fejer_defect(lambda x: 2.5, 64) < 1e-12

    def test_tent_ratio(self):
        g = lambda x: abs(x - 0.5)
        d64 = fejer_defect(g, 64)
        d16 = fejer_defect(g, 16)
        assert d64 <= d16 * (math.log(64) / 64) / (math.log(16) / 16) * 1.5

    def test_distance_to_integer_bound(self):
        g = lambda x: min(x % 1, 1 - x % 1)
        assert fejer_defect(g, 256) <= 10 * math.log(256) / 256


class TestResidueMainTerm:
    def test_constant_curvature(self):
        w = SmoothWeight.quadratic()
        g3 = math.gamma(1 / 3) ** 3
        target = math.sqrt(3) * g3 / (2 ** (2 / 3) * math.pi**3)
        assert residue_main_term(w) == pytest.approx(target, rel=1e-10)

    def test_scaling(self):
        w4 = SmoothWeight.from_polynomial([0, 0, 2])  # f'' = 4
        base = residue_main_term(SmoothWeight.quadratic())
        assert residue_main_term(w4) == pytest.approx(4 ** (2 / 3) * base, rel=1e-10)

    def test_consistency_with_boundary_residue_constant(self):
        # f'' = 1 main term equals Res Z_L / ((9/2) * 4^(1/3) * 4) since the
        # parabolic dual has integral of (g~'')^(2/3) equal to 4^(1/3)
        base = residue_main_term(SmoothWeight.quadratic())
        assert base == pytest.approx(models.boundary_residue_constant(), rel=1e-12)


class TestLegendreDual:
    def test_parabola_dual_curvature(self):
        chart = ConvexDomain.domain_L().charts[0]
        dual = legendre_dual(chart)
        # g~(u) = -u/(1+u), g~'' = 2/(1+u)^3
        for u in (0.0, 0.25, 0.5, 1.0):
            assert dual.f(u) == pytest.approx(-u / (1 + u), abs=1e-10)
            assert dual.d2f(u) == pytest.approx(2 / (1 + u) ** 3, rel=1e-7)

    def test_quadratic_self_duality(self):
        # g = x^2/2 on a wide range: dual over [0,1] has g~'' = 1
        from tropzeta.geometry import ArcChart

        chart = ArcChart(corner=(0, 0), u1=(1, 0), u2=(0, 1),
                         support=lambda a, b: 0,
                         g=lambda x: (1 - x) ** 2 / 2 + 0,  # placeholder
                         dg=None, d2g=None, x_max=1.0)
        # direct check instead: dual of g(x) = x^2/2 via the formulas
        # g'(x) = x covers [-1, 0] only after recentring; skip to curvature:
        # handled by the parabola case above; here check the error path
        with pytest.raises(ValueError):
            legendre_dual(ArcChart(corner=(0, 0), u1=(1, 0), u2=(0, 1),
                                   support=lambda a, b: 0))

    def test_dual_integral_identity(self):
        # int_0^1 (g~'')^(2/3) du = int_0^A (g'')^(1/3) dx
        chart = ConvexDomain.domain_L().charts[0]
        dual = legendre_dual(chart)
        lhs = farey._adaptive_simpson(lambda u: dual.d2f(u) ** (2 / 3), 0.0, 1.0, tol=1e-11)
        # analytic: int_0^1 (2/(1+u)^3)^(2/3) du = 2^(2/3) * (1 - 2^-1) = ...
        rhs_analytic = 2 ** (2 / 3) * (1 - 0.5)
        assert lhs == pytest.approx(rhs_analytic, abs=1e-8)
        # graph side on the slope-range [-1, 0] piece: x in [1/4, 1]
        from tropzeta.farey import _adaptive_simpson

        rhs = _adaptive_simpson(lambda x: chart.d2g(x) ** (1 / 3), 0.25, 1.0, tol=1e-11)
        assert lhs == pytest.approx(rhs, abs=1e-8)

    def test_dual_coefficients_match_boundary_terms(self):
        # |T_I(g~)| = f_Gamma(a, b, c, d) for the parabolic chart
        chart = ConvexDomain.domain_L().charts[0]
        dual = legendre_dual(chart)
        checked = 0
        from tropzeta.lattice import coprime_pairs_by_max

        for b, d in coprime_pairs_by_max(10):
            iv = farey_from_denominators(b, d)
            _, t_i = hata_coefficient(dual, iv)
            expected = 1.0 / ((iv.a + iv.b) * (iv.c + iv.d) * (iv.a + iv.b + iv.c + iv.d))
            assert abs(t_i) == pytest.approx(expected, abs=1e-10)
            checked += 1
            if checked >= 50:
                break


class TestEndpointResidueEquality:
    def test_counting_fits_agree_within_three_percent(self):
        # the multisets {|T_I(f)|} and {2^-1 |f''(a/b)| / (bd(b+d))} have the
        # same counting-fit residue (Lemma 3's conclusion, measured)
        w = SmoothWeight.from_polynomial([0, 0, 0.5, 1 / 10])  # x^2/2 + x^3/10
        eps_min = 1e-7
        # |T_I| >= eps needs 2 b d (b+d) <= max|f''| / eps
        cap = 1.6 / eps_min / 2
        exact_terms = []
        endpoint_terms = []
        b = 1
        while b * b * 2 * b <= cap or b == 1:
            d = 1
            while b * d * (b + d) <= cap:
                if math.gcd(b, d) == 1:
                    iv = farey_from_denominators(b, d)
                    _, t_i = hata_coefficient(w, iv)
                    exact_terms.append(abs(t_i))
                    endpoint_terms.append(
                        abs(w.d2f(iv.a / iv.b)) / (2 * b * d * (b + d))
                    )
                d += 1
            b += 1
        from tropzeta.zeta import fixed_slope_intercept

        ts = np.logspace(math.log10(eps_min), 0.6 * math.log10(eps_min), 40)

        def fit(terms):
            arr = np.sort(np.array(terms))[::-1]
            ns = np.array([np.searchsorted(-arr, -t, side="right") for t in ts], float)
            return fixed_slope_intercept(ts, ns, -2 / 3)

        c_exact = fit(exact_terms)
        c_endpoint = fit(endpoint_terms)
        assert abs(c_exact / c_endpoint - 1) < 0.03


class TestRegrouping:
    def test_eq4_exact_rational_regrouping_s1(self):
        # f'' = 1, s = 1: interval-enumerated partial sums equal the
        # b-grouped form with H_1(u) = 1/u, both in exact rationals, with the
        # same per-b telescoped closed form, b <= 200
        for b in range(1, 201):
            lhs = Fraction(0)
            for d in range(1, 10 * b + 1):
                if math.gcd(b, d) == 1:
                    lhs += Fraction(1, 2 * b * d * (b + d))
            # telescoped tail: sum over d > D in each residue class r:
            # sum_{k > k0} 1/((kb+r)(kb+r+b)) = 1/(b * (k0*b + r + b))
            for r in range(1, b + 1):
                if math.gcd(r, b) == 1:
                    k0 = (10 * b - r) // b  # largest k with kb + r <= 10b
                    lhs += Fraction(1, 2 * b) * Fraction(1, b * ((k0 + 1) * b + r))
            rhs = Fraction(0)
            for r in range(1, b + 1):
                if math.gcd(r, b) == 1:
                    rhs += Fraction(1, 2 * b**3) * Fraction(b, r)  # H_1(r/b) = b/r
            assert lhs == rhs

    def test_dirichlet_phi_identity(self):
        # sum phi(b)/b^(3s) -> zeta(3s-1)/zeta(3s) at s = 1.2
        from tropzeta.lattice import arithmetic_functions

        s = 1.2
        total = sum(arithmetic_functions(b)[0] / b ** (3 * s) for b in range(1, 4001))
        target = (models.riemann_zeta(3 * s - 1) / models.riemann_zeta(3 * s)).real
        # tail <= sum_{b > B} b^(1-3s) ~ B^(2-3s)/(3s-2)
        tail = 4000 ** (2 - 3 * s) / (3 * s - 2)
        assert abs(total - target) <= tail * 1.5
