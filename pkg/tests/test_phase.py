import math

import numpy as np
import pytest

from gl3kuz.phase import (CASE_EXPONENTS, CaseExponents, ConsistencyReport,
                          PhaseParams, PhasePoint, RegionSpec,
                          consistency_check, cubic_residuals, phase_g,
                          phase_g1, phase_g1_t1, phase_g1_t2, phase_g2,
                          phase_g2_t2, phase_h, region_measure, region_sample,
                          scan_derivative_bounds, sublemma_bounds)

PP = PhaseParams(50, 50.0, 2.0, 3.0)


def random_point(rng, pp=PP, lo=20.0, hi=200.0):
    while True:
        t1 = float(rng.uniform(lo, hi) * rng.choice([-1, 1]))
        t2 = float(rng.uniform(lo, hi) * rng.choice([-1, 1]))
        try:
            ppt = PhasePoint(t1, t2)
            ppt.check(pp, tol=1.0)
            return ppt
        except ValueError:
            continue


def calibrated_region(t1s, t2s, d=50, rho=50.0, T=50.0):
    """RegionSpec/PhaseParams pair whose admissible set contains
    (t1s, t2s) by construction (the scale ratios solve g_i = 0 there)."""
    h2 = (d / 2.0) ** 2
    ups1 = abs((t1s + 2 * rho) * (h2 + (rho - t1s) ** 2)
               / ((t1s + t2s) * t1s * t1s))
    ups2 = abs((t2s - 2 * rho) * (h2 + (rho + t2s) ** 2)
               / ((t1s + t2s) * t2s * t2s))
    pp = PhaseParams(d, rho, ups1, ups2)
    rs = RegionSpec(U1=t1s, U2=t2s, B1=abs(t1s + 2 * rho),
                    B2=abs(t2s - 2 * rho), B3=abs(t1s + t2s),
                    threshold_eps=4.0 * math.log(T))
    return rs, pp


class TestGradients:
    def test_g1_finite_difference(self, rng):
        worst = 0.0
        for _ in range(1000):
            ppt = random_point(rng)
            h = 1e-5 * max(abs(ppt.t1), 1.0)
            fd = (phase_g(PhasePoint(ppt.t1 + h, ppt.t2), PP)
                  - phase_g(PhasePoint(ppt.t1 - h, ppt.t2), PP)) / (2 * h)
            worst = max(worst, abs(fd - phase_g1(ppt, PP))
                        / max(abs(fd), 1e-9))
        assert worst <= 1e-6

    def test_g2_finite_difference(self, rng):
        worst = 0.0
        for _ in range(1000):
            ppt = random_point(rng)
            h = 1e-5 * max(abs(ppt.t2), 1.0)
            fd = (phase_g(PhasePoint(ppt.t1, ppt.t2 + h), PP)
                  - phase_g(PhasePoint(ppt.t1, ppt.t2 - h), PP)) / (2 * h)
            worst = max(worst, abs(fd - phase_g2(ppt, PP))
                        / max(abs(fd), 1e-9))
        assert worst <= 1e-6

    def test_h_finite_difference(self, rng):
        worst = 0.0
        for _ in range(1000):
            ppt = random_point(rng)
            hr = 1e-5 * 50.0
            up = PhaseParams(50, 50.0 + hr, 2.0, 3.0)
            dn = PhaseParams(50, 50.0 - hr, 2.0, 3.0)
            fd = (phase_g(ppt, up) - phase_g(ppt, dn)) / (2 * hr)
            worst = max(worst, abs(fd - phase_h(ppt, PP))
                        / max(abs(fd), 1e-9))
        assert worst <= 1e-6

    def test_h_independent_of_scales(self, rng):
        ppt = random_point(rng)
        other = PhaseParams(50, 50.0, 17.0, 0.3)
        assert phase_h(ppt, PP) == phase_h(ppt, other)

    def test_mixed_partial(self, rng):
        for _ in range(50):
            ppt = random_point(rng)
            h = 1e-5 * max(abs(ppt.t2), 1.0)
            fd = (phase_g1(PhasePoint(ppt.t1, ppt.t2 + h), PP)
                  - phase_g1(PhasePoint(ppt.t1, ppt.t2 - h), PP)) / (2 * h)
            exact = phase_g1_t2(ppt, PP)
            assert abs(fd - exact) <= 1e-8 * max(abs(exact), 1e-6)
            assert exact == -1.0 / (ppt.t1 + ppt.t2)

    def test_mixed_partial_symmetry(self, rng):
        # d2g/dt1 dt2 = d2g/dt2 dt1 = -1/(t1+t2) by finite differences
        ppt = random_point(rng)
        h = 1e-4 * max(abs(ppt.t1), abs(ppt.t2))

        def g(t1, t2):
            return phase_g(PhasePoint(t1, t2), PP)

        fd12 = (g(ppt.t1 + h, ppt.t2 + h) - g(ppt.t1 + h, ppt.t2 - h)
                - g(ppt.t1 - h, ppt.t2 + h) + g(ppt.t1 - h, ppt.t2 - h)) \
            / (4 * h * h)
        assert fd12 == pytest.approx(-1.0 / (ppt.t1 + ppt.t2), rel=1e-5)

    def test_g1_t1_finite_difference(self, rng):
        for _ in range(200):
            ppt = random_point(rng)
            h = 1e-4 * max(abs(ppt.t1), 1.0)

            def g1(t1):
                return phase_g1(PhasePoint(t1, ppt.t2), PP)

            fd = (8 * (g1(ppt.t1 + h) - g1(ppt.t1 - h))
                  - (g1(ppt.t1 + 2 * h) - g1(ppt.t1 - 2 * h))) / (12 * h)
            assert abs(fd - phase_g1_t1(ppt, PP)) <= \
                1e-7 * max(abs(fd), 1e-4)

    def test_scale_log_shift(self, rng):
        ppt = random_point(rng)
        scaled = PhaseParams(50, 50.0, 2.0 * math.e, 3.0)
        assert phase_g(ppt, scaled) - phase_g(ppt, PP) \
            == pytest.approx(-ppt.t1, rel=1e-12)


class TestCubic:
    def test_exp_identity(self, rng):
        worst = 0.0
        for _ in range(500):
            ppt = random_point(rng, lo=5.0, hi=300.0)
            lhs = math.exp(phase_g1(ppt, PP))
            rhs = abs((ppt.t1 ** 3 - PP.C1 * ppt.t1 - PP.C2)
                      / ((ppt.t1 + ppt.t2) * ppt.t1 ** 2 * PP.ups1))
            worst = max(worst, abs(lhs - rhs) / max(rhs, 1e-12))
        assert worst <= 1e-10

    def test_residual_identity(self, rng):
        # r1 equals ups1^-1(t1^3 - C1 t1 - C2) - alpha1 t1^2(t1+t2) exactly
        for _ in range(100):
            ppt = random_point(rng)
            for a1 in (1, -1):
                r1, _ = cubic_residuals(ppt, PP, a1, 1)
                direct = (ppt.t1 ** 3 - PP.C1 * ppt.t1 - PP.C2) / PP.ups1 \
                    - a1 * ppt.t1 ** 2 * (ppt.t1 + ppt.t2)
                assert abs(r1 - direct) <= 1e-9 * max(1.0, abs(direct))

    def test_zero_at_forced_point(self):
        t1, t2, d, rho = 80.0, 40.0, 50, 50.0
        h2 = (d / 2.0) ** 2
        ups1 = (t1 + 2 * rho) * (h2 + (rho - t1) ** 2) / ((t1 + t2) * t1 * t1)
        pp = PhaseParams(d, rho, ups1, 3.0)
        assert phase_g1(PhasePoint(t1, t2), pp) == pytest.approx(0.0,
                                                                 abs=1e-12)
        r1, _ = cubic_residuals(PhasePoint(t1, t2), pp, 1, 1)
        assert abs(r1) <= 1e-7 * t1 ** 3

    def test_homogeneity(self):
        # residuals are degree-3 homogeneous under (t, rho, d) -> lambda *
        lam = 2.0
        t1, t2, d, rho = 60.0, -25.0, 50, 50.0
        pp1 = PhaseParams(d, rho, 2.0, 3.0)
        pp2 = PhaseParams(2 * d, lam * rho, 2.0, 3.0)
        r1a, r2a = cubic_residuals(PhasePoint(t1, t2), pp1, 1, -1)
        r1b, r2b = cubic_residuals(PhasePoint(lam * t1, lam * t2), pp2, 1, -1)
        assert r1b == pytest.approx(lam ** 3 * r1a, rel=1e-12)
        assert r2b == pytest.approx(lam ** 3 * r2a, rel=1e-12)


class TestLargeT1Regime:
    def test_stronger_leading_term(self, rng):
        # |U1| = 100 (T + |U2|): dg1/dt1 tracks t2/t1^2 within factor 3
        T = 50.0
        for _ in range(30):
            t2 = float(rng.uniform(20.0, 60.0) * rng.choice([-1, 1]))
            t1 = 100.0 * (T + abs(t2)) * float(rng.choice([-1, 1]))
            got = phase_g1_t1(PhasePoint(t1, t2), PP)
            lead = t2 / t1 ** 2
            assert abs(got) <= 3.0 * abs(lead) and abs(got) >= abs(lead) / 3.0

    def test_b2small_envelope(self, rng):
        # shells with B1/B2 >= 100: the two-term approximation of dg1/dt1
        # is accurate to 10 B2/B1^2
        rho = 50.0
        pp = PhaseParams(50, rho, 2.0, 3.0)
        for _ in range(50):
            B1 = float(rng.uniform(2000.0, 8000.0))
            B2 = B1 / float(rng.uniform(100.0, 400.0))
            t1 = B1 * float(rng.uniform(1.0, 2.0)) - 2 * rho
            t2 = 2 * rho + B2 * float(rng.uniform(1.0, 2.0)) \
                * float(rng.choice([-1, 1]))
            ppt = PhasePoint(t1, t2)
            got = phase_g1_t1(ppt, pp)
            h2 = (pp.d / 2.0) ** 2
            approx = -2.0 * (h2 + rho ** 2 - rho * t1) \
                / (t1 * (h2 + (rho - t1) ** 2))
            assert abs(got - approx) <= 10.0 * B2 / B1 ** 2

    def test_b1small_envelope(self, rng):
        rho = 50.0
        pp = PhaseParams(50, rho, 2.0, 3.0)
        for _ in range(50):
            B2 = float(rng.uniform(2000.0, 8000.0))
            B1 = B2 / float(rng.uniform(100.0, 400.0))
            t2 = B2 * float(rng.uniform(1.0, 2.0)) + 2 * rho
            t1 = -2 * rho + B1 * float(rng.uniform(1.0, 2.0)) \
                * float(rng.choice([-1, 1]))
            ppt = PhasePoint(t1, t2)
            got = phase_g2_t2(ppt, pp)
            h2 = (pp.d / 2.0) ** 2
            approx = -2.0 * (h2 + rho ** 2 + rho * t2) \
                / (t2 * (h2 + (rho + t2) ** 2))
            assert abs(got - approx) <= 10.0 * B1 / B2 ** 2


class TestRegion:
    def test_calibrated_region_nonempty(self):
        rs, pp = calibrated_region(120.0, -30.0)
        m = region_measure(rs, pp, 512)
        assert m > 0.0
        pt = region_sample(rs, pp, 512)
        assert pt is not None

    def test_grid_doubling_stability(self):
        rs, pp = calibrated_region(120.0, -30.0)
        m1 = region_measure(rs, pp, 1024)
        m2 = region_measure(rs, pp, 2048)
        assert abs(m1 - m2) <= 0.05 * max(m1, m2)

    def test_mis_scaled_region_empty(self):
        rs, pp = calibrated_region(120.0, -30.0)
        bad = PhaseParams(pp.d, pp.rho, pp.ups1 * 1e6, pp.ups2)
        assert region_measure(rs, bad, 512) == 0.0

    def test_grid_cap(self):
        rs, pp = calibrated_region(120.0, -30.0)
        with pytest.raises(ValueError):
            region_measure(rs, pp, 8192)

    def test_sublemma_envelope_calibration(self):
        # measured region measure is below 10x every applicable bound
        for (t1s, t2s) in ((120.0, -30.0), (90.0, -170.0), (-120.0, 60.0),
                           (150.0, -75.0), (-60.0, 140.0)):
            rs, pp = calibrated_region(t1s, t2s)
            m = region_measure(rs, pp, 1024)
            bounds = sublemma_bounds(rs, pp, 1024)
            assert bounds, (t1s, t2s)
            for name, b in bounds.items():
                assert m <= 10.0 * b, (t1s, t2s, name, m, b)

    def test_consistency_at_calibration(self):
        rs, pp = calibrated_region(120.0, -30.0)
        rep = consistency_check(rs, pp)
        assert rep.passed and not rep.vacuous

    def test_consistency_vacuous_on_empty(self):
        rs, pp = calibrated_region(120.0, -30.0)
        bad = PhaseParams(pp.d, pp.rho, pp.ups1 * 1e6, pp.ups2)
        rep = consistency_check(rs, bad)
        assert rep.passed and rep.vacuous


class TestDerivativeBounds:
    def test_cross_derivative_constant_exact(self):
        rs, pp = calibrated_region(120.0, -30.0)
        rep = scan_derivative_bounds(rs, pp)
        # |dg1/dt2| = 1/|t1+t2| with |t1+t2| in [B3, 2B3): constant exactly 1
        assert rep.constants["g1_t2"] <= 1.0 + 1e-9
        assert rep.constants["g1_t2"] >= 0.5

    def test_low_order_constants(self):
        rs, pp = calibrated_region(120.0, -30.0, T=50.0)
        rep = scan_derivative_bounds(rs, pp)
        assert rep.constants["g1_n1"] <= 8.0
        assert rep.constants["g2_n1"] <= 8.0
        assert rep.constants["g1_n2"] <= 64.0


class TestCaseExponents:
    def test_standard_satisfies_constraints(self):
        assert CASE_EXPONENTS.constraints_hold()

    def test_equalizing_formulas(self):
        b = 2.0 / 595.0
        ce = CaseExponents.standard(b)
        assert ce.d == pytest.approx(9 * b)
        assert ce.u1 == pytest.approx(3 / 34 - 2.5 * b)
        assert ce.u2 == pytest.approx(13 / 68 + 59 * b / 4)
        assert ce.c == pytest.approx(3 / 34 + 13.5 * b)

    def test_range_guard(self):
        with pytest.raises(ValueError):
            CaseExponents.standard(0.05)

    def test_read_only(self):
        with pytest.raises(Exception):
            CASE_EXPONENTS.b = 0.1
