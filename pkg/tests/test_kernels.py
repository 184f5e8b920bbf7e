import math

import numpy as np
import pytest

from gl3kuz.kernels import (KernelSettings, SignPair, b_w6, g_epsilon, k_w4,
                            k_w4_batch, k_w6, k_w6_mb_batch, whittaker_w)
from gl3kuz.quadrature import QuadratureSettings
from gl3kuz.special_functions import SpectralPoint, beta_fn, q_ratio

TIGHT = QuadratureSettings(abs_tol=1e-11, rel_tol=1e-9)
MB = KernelSettings(quad=TIGHT, representation="mellin_barnes")
BS = KernelSettings(quad=TIGHT, representation="bessel_integral")

SIGN_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def _stirling_lg(z: complex) -> complex:
    return (z - 0.5) * np.log(z) - z + 0.5 * math.log(2 * math.pi) \
        + 1.0 / (12.0 * z)


class TestBW6:
    def test_plus_plus_zero(self, rng):
        for _ in range(20):
            s1 = complex(rng.uniform(0, 1), rng.uniform(-20, 20))
            s2 = complex(rng.uniform(0, 1), rng.uniform(-20, 20))
            assert b_w6((1, 1), s1, s2, 1.3) == 0.0

    def test_mixed_cancellation(self, rng):
        # on the antidiagonal the two mixed branches are +-1/(s + 2r)
        for _ in range(100):
            s = complex(rng.uniform(-0.4, 0.6), rng.uniform(-25, 25))
            rho = float(rng.uniform(0.1, 3.0))
            r = 1j * rho
            a = b_w6((1, -1), s - r, -s + r, rho)
            b = b_w6((-1, 1), s - r, -s + r, rho)
            scale = max(abs(a), abs(b), 1e-10)
            assert abs(a + b) <= 1e-12 * scale

    def test_minus_minus_antidiagonal_vanishes(self, rng):
        for _ in range(20):
            s = complex(rng.uniform(-0.4, 0.6), rng.uniform(-25, 25))
            rho = float(rng.uniform(0.1, 3.0))
            r = 1j * rho
            assert b_w6((-1, -1), s - r, -s + r, rho) == 0.0

    def test_parity_sign(self):
        s1, s2, rho = 0.4 + 2j, 0.3 - 1j, 0.7
        even = b_w6((-1, -1), s1, s2, rho, d=4)
        odd = b_w6((-1, -1), s1, s2, rho, d=5)
        assert abs(even + odd) <= 1e-13 * abs(even)

    def test_matches_beta_table(self):
        s1, s2, rho = 0.4 + 2j, 0.3 - 1j, 0.7
        r3 = 3j * rho
        assert b_w6((-1, 1), s1, s2, rho) == \
            beta_fn(s2 - r3, 1 - s1 - s2)
        assert b_w6((1, -1), s1, s2, rho) == \
            beta_fn(s1 + r3, 1 - s1 - s2)

    def test_signpair_validation(self):
        with pytest.raises(ValueError):
            SignPair(0, 1)


class TestGEpsilon:
    def test_cancellation_identity(self, rng):
        pt = SpectralPoint(9, 1.7)
        for _ in range(100):
            s = complex(rng.uniform(-0.4, 0.4), rng.uniform(-30, 30))
            total = sum(g_epsilon(sp, s, -s, pt) for sp in SIGN_PAIRS)
            scale = max(abs(g_epsilon((1, -1), s, -s, pt)), 1.0)
            assert abs(total) <= 1e-12 * scale

    def test_plus_plus_zero(self):
        assert g_epsilon((1, 1), 0.3 + 5j, 0.1 - 2j,
                         SpectralPoint(6, 1.0)) == 0.0

    def test_factorization(self):
        pt = SpectralPoint(8, 0.9)
        s1, s2 = 0.3 + 4j, 0.2 - 6j
        r = pt.r
        want = b_w6((-1, 1), s1 - r, s2 + r, pt.rho, pt.d) \
            * q_ratio(pt.d, s1 - r) * q_ratio(pt.d, s2 + r)
        assert g_epsilon((-1, 1), s1, s2, pt) == want

    def test_stirling_magnitude_model(self):
        # |G^eps| within factor 2 of the Stirling model at heights ~ T
        pt = SpectralPoint(60, 60.0)
        r = pt.r
        d = pt.d
        for t1, t2 in ((40.0, 70.0), (-100.0, 45.0), (120.0, -50.0)):
            s1 = 0.25 + 1j * t1
            s2 = 0.25 + 1j * t2
            got = abs(g_epsilon((-1, 1), s1, s2, pt))
            if got == 0.0:
                continue
            a = (d - 1) / 2.0

            def q_model(s, rr):
                return np.exp(_stirling_lg(a + s - rr)
                              - _stirling_lg(a + 1 + rr - s))

            model = abs(
                np.exp(_stirling_lg(s2 - 2 * r) + _stirling_lg(1 - s1 - s2)
                       - _stirling_lg(1 - s1 - 2 * r))
                * q_model(s1, r) * q_model(s2, -r))
            assert 0.5 <= got / model <= 2.0


class TestKW4:
    @pytest.mark.parametrize("y,d,rho", [(5.0, 6, 0.3), (1.0, 4, 0.0),
                                         (-3.0, 5, 0.7), (100.0, 4, 0.5),
                                         (0.5, 8, 1.0)])
    def test_dual_representation(self, y, d, rho):
        pt = SpectralPoint(d, rho)
        a = k_w4(y, pt, MB)
        b = k_w4(y, pt, BS)
        rel = abs(a.value - b.value) / max(abs(a.value), 1e-300)
        assert rel <= 1e-6 or abs(a.value - b.value) <= a.err_est + b.err_est

    def test_sign_flip_recomputation(self):
        # the (eps i)^d prefactor ties the two signs through the defining
        # contour integral; recompute both from the definition
        pt = SpectralPoint(6, 0.0)
        plus = k_w4(7.0, pt, MB)
        minus = k_w4(-7.0, pt, MB)
        # for rho = 0 and even d the integrands are conjugate in s -> sbar
        assert abs(minus.value - np.conj(plus.value)) <= \
            1e-8 * max(1.0, abs(plus.value))

    def test_scaling_sanity(self):
        pt = SpectralPoint(8, 0.0)
        for y in (1.0, 10.0, 100.0):
            q = k_w4(y, pt, MB)
            assert q.converged
            assert np.isfinite(q.value.real) and np.isfinite(q.value.imag)

    def test_zero_argument_rejected(self):
        with pytest.raises(ValueError):
            k_w4(0.0, SpectralPoint(4, 0.0))

    def test_batch_matches_single(self):
        pt = SpectralPoint(12, 12.0)
        ys = np.array([1728.0, 3000.0, 6912.0])
        batch = k_w4_batch(ys, pt, TIGHT)
        for y, got in zip(ys, batch):
            ref = k_w4(float(y), pt, MB)
            assert abs(got - ref.value) <= 1e-5 * abs(ref.value)

    def test_batch_mixed_signs(self):
        pt = SpectralPoint(6, 0.5)
        ys = np.array([3.0, -3.0])
        batch = k_w4_batch(ys, pt, TIGHT)
        assert abs(batch[0] - k_w4(3.0, pt, MB).value) <= 1e-6
        assert abs(batch[1] - k_w4(-3.0, pt, MB).value) <= 1e-6


class TestKW6:
    def test_plus_plus_identically_zero(self):
        q = k_w6(2.0, 3.0, SpectralPoint(5, 0.3))
        assert q.value == 0.0 and q.nodes_used == 0 and q.converged

    @pytest.mark.parametrize("y1,y2,d,rho", [(-3.0, 4.0, 5, 0.2),
                                             (-1.0, 1.0, 4, 0.0),
                                             (1.0, -1.0, 4, 0.5),
                                             (-2.0, -2.0, 5, 0.3)])
    def test_dual_representation(self, y1, y2, d, rho):
        pt = SpectralPoint(d, rho)
        a = k_w6(y1, y2, pt, MB)
        b = k_w6(y1, y2, pt, BS)
        rel = abs(a.value - b.value) / max(abs(a.value), 1e-300)
        assert rel <= 1e-6 or abs(a.value - b.value) <= a.err_est + b.err_est

    @pytest.mark.parametrize("d", [5, 6])
    def test_parity_recomputation_minus_minus(self, d):
        # definitional recomputation of the (-,-) branch at rho = 0: the
        # kernel carries the parity sign (-1)^d against the plain
        # Bessel-product integral
        from gl3kuz.quadrature import adaptive_panels
        from gl3kuz.special_functions import bessel_j
        nu = d - 1
        c = 4.0 * math.pi * math.sqrt(2.0)

        def f(t):
            t = np.asarray(t, dtype=float)
            return bessel_j(nu, c / np.sqrt(t)) \
                * bessel_j(nu, c / np.sqrt(1.0 - t)) / (t * (1.0 - t))

        v, e, _, _ = adaptive_panels(f, 1e-7, 1.0 - 1e-7, 1e-11, 1e-10,
                                     2_000_000, seed_width=1e-4)
        plain = 4.0 * math.pi ** 2 * 4.0 * v  # 4 pi^2 |y1 y2| * integral
        got = k_w6(-2.0, -2.0, SpectralPoint(d, 0.0), BS)
        want = (-1.0) ** d * plain
        assert abs(got.value - want) <= 2e-4 * abs(want) + got.err_est + e

    def test_batch_consistency(self):
        pt = SpectralPoint(9, 2.0)
        pairs = [(-1.0, 1.0), (-10.0, -10.0), (1.0, -10.0)]
        res = k_w6_mb_batch(pairs, pt, TIGHT)
        for (y1, y2), rr in zip(pairs, res):
            bb = k_w6(y1, y2, pt, BS)
            d = abs(rr.value - bb.value)
            assert d <= 1e-6 * max(abs(rr.value), 1e-300) \
                or d <= rr.err_est + bb.err_est


class TestWhittaker:
    def test_contour_shift_invariance(self):
        pt = SpectralPoint(4, 0.1)
        a = whittaker_w(0, 1, 1.0, 1.0, pt)
        b = whittaker_w(0, 1, 1.0, 1.0, pt, abscissa=(3.0, 3.0))
        assert abs(a.value - b.value) <= 1e-7 * max(1.0, abs(a.value))

    def test_exponential_decay(self):
        pt = SpectralPoint(6, 0.1)
        near = whittaker_w(0, 1, 1.0, 1.0, pt)
        far = whittaker_w(0, 1, 10.0, 10.0, pt)
        assert abs(far.value) * 1e3 <= abs(near.value)

    def test_m_equals_d(self):
        pt = SpectralPoint(4, 0.1)
        q = whittaker_w(4, 1, 1.0, 1.0, pt)
        assert q.converged and np.isfinite(q.value.real)

    def test_m_zero_sign_independent(self):
        pt = SpectralPoint(4, 0.3)
        a = whittaker_w(0, 1, 1.2, 0.8, pt)
        b = whittaker_w(0, -1, 1.2, 0.8, pt)
        assert a.value == b.value

    def test_negative_m_convention(self):
        pt = SpectralPoint(4, 0.1)
        a = whittaker_w(-2, 1, 1.0, 1.0, pt)
        b = whittaker_w(2, -1, 1.0, 1.0, pt)
        assert a.value == b.value

    def test_domain_validation(self):
        pt = SpectralPoint(4, 0.1)
        with pytest.raises(ValueError):
            whittaker_w(5, 1, 1.0, 1.0, pt)
        with pytest.raises(ValueError):
            whittaker_w(0, 1, -1.0, 1.0, pt)
