"""Spectrally averaged weights and Fourier-transformed kernels.

The spectral test function is the Gaussian F(i rho) = exp(-(rho-c)^2/w),
so every average against F * spec over the spectral line has a closed
form: for any unimodular phase e^(i rho phi),

    (1/2pi) int F(i rho) spec^d(rho) e^(i rho phi) d rho
        = (kappa/2pi) sqrt(pi w) e^(i c phi - w phi^2/4)
          * [ (d-1)^2/4 + 9((c + i w phi / 2)^2 + w/2) ],

kappa = (d-1)/(8 pi^3).  The Gaussian factor localizes each kernel
transform to the window |phi| <~ 13/sqrt(w), which is precisely the
stationary window that drives the decay walls: the weights below the wall
are nonzero only through the far Gaussian tail.

The 2-fold and 4-fold Fourier-transformed kernels are evaluated in their
factored Mellin form: one (resp. two) contour integrals against products
of bump Mellin-Fourier transforms, which decay super-polynomially in
contour height and so truncate the lines at ~4 pi max(|U|,|V|) plus a
fixed pad.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import loggamma as _lg

from .quadrature import (BumpSpec, DEFAULT_BUMP, QuadResult,
                         QuadratureSettings, DEFAULT_SETTINGS,
                         adaptive_panels, bump_mf_batch, contour_nodes)
from .special_functions import SpectralPoint, bessel_j

__all__ = [
    "TestFunctionSpec",
    "SmoothCutoffSpec",
    "ScanReport",
    "spectral_average",
    "gauss_hermite_average",
    "delta_integral",
    "phi_w4",
    "phi_w5",
    "phi_w6",
    "KtildeEvaluator",
    "ktilde",
    "KfullEvaluator",
    "kfull",
    "kfull_rho_avg",
    "decay_scan",
    "eps_surrogate",
]

_PI = math.pi
_4PI2 = 4.0 * _PI * _PI
_8PI3 = 8.0 * _PI ** 3


def eps_surrogate(T: float, width: float = 4.0) -> float:
    """Desk-scale stand-in for T^eps: width * log T (eps-powers are
    meaningless at fixed scale; logarithms emulate them)."""
    return width * math.log(max(T, 2.0))


@dataclass(frozen=True)
class TestFunctionSpec:
    """Gaussian spectral weight F(i rho) = exp(-(rho - rho_center)^2 / width),
    equal to 1 at the center; ``width`` plays the role of T^eps."""

    rho_center: float
    width: float = 4.0

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("width must be > 0")

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = np.exp(-((rho - self.rho_center) ** 2) / self.width)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class SmoothCutoffSpec:
    """Compactly supported smooth cutoff with the same profile as the bump
    weight, used for the spectral-window averages."""

    center: float = 0.0
    halfwidth: float = 1.0

    def __post_init__(self):
        if self.halfwidth <= 0:
            raise ValueError("halfwidth must be > 0")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = (x - self.center) / self.halfwidth
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        ui = u[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - ui * ui))
        return out if out.ndim else float(out)


def spectral_average(F: TestFunctionSpec, d: int, phi=0.0):
    """Closed form of (1/2 pi) int F(i rho) spec^d(rho) e^(i rho phi) d rho;
    vectorized over phi."""
    phi = np.asarray(phi, dtype=complex)
    c = F.rho_center
    w = F.width
    kappa = (d - 1) / _8PI3
    gauss = np.exp(1j * c * phi - w * phi * phi / 4.0)
    m1 = c + 0.5j * w * phi
    poly = (d - 1) ** 2 / 4.0 + 9.0 * (m1 * m1 + w / 2.0)
    out = (kappa / (2.0 * _PI)) * math.sqrt(_PI * w) * gauss * poly
    return out if out.ndim else complex(out)


def gauss_hermite_average(F: TestFunctionSpec, d: int, fn, n: int = 96):
    """Generic spectral average (1/2 pi) int F spec fn(rho) d rho on
    Gauss-Hermite nodes matched to the Gaussian; the cross-check path for
    the closed form above and for kernels whose rho-dependence does not
    factor into a pure phase."""
    from .special_functions import spec_density
    x, wq = np.polynomial.hermite.hermgauss(n)
    sw = math.sqrt(F.width)
    rho = F.rho_center + sw * x
    vals = np.array([fn(r) for r in rho], dtype=complex)
    dens = np.array([spec_density(d, r) for r in rho])
    return complex((wq * dens * vals).sum() * sw / (2.0 * _PI))


def delta_integral(F: TestFunctionSpec, d: int) -> float:
    """(1/2 pi) int F(i rho) spec^d(rho) d rho, the diagonal-term weight."""
    return float(spectral_average(F, d, 0.0).real)


# ---------------------------------------------------------------------------
# spectrally averaged kernel weights
# ---------------------------------------------------------------------------


def _phi_halfwidth(F: TestFunctionSpec, tiny: float = 1e-18) -> float:
    """Half-width of the |phi| window outside which the Gaussian factor of
    the spectral average is below ``tiny`` (w phi^2/4 >= -log tiny)."""
    return 2.0 * math.sqrt(-math.log(tiny) / F.width)


def phi_w4(y: float, d: int, F: TestFunctionSpec,
           st: QuadratureSettings = DEFAULT_SETTINGS) -> QuadResult:
    """Spectrally averaged w4 weight

        (1/|y|) (1/2pi) int F(i rho) K_w4(y; d, i rho) spec^d(rho) d rho.

    Evaluated through the Bessel form of the kernel, whose rho-dependence
    is the pure phase e^(i rho (3 ln u - ln(|y| pi^3))); the closed-form
    spectral average then truncates the u-integral to the stationary
    window around u0 = (|y| pi^3)^(1/3)."""
    if y == 0:
        raise ValueError("phi_w4 requires y != 0")
    return _phi_w4_core(y, d, F, st, reflect=False)


def phi_w5(y: float, d: int, F: TestFunctionSpec,
           st: QuadratureSettings = DEFAULT_SETTINGS) -> QuadResult:
    """w5 companion of phi_w4: the kernel argument and spectral parameter
    both change sign."""
    if y == 0:
        raise ValueError("phi_w5 requires y != 0")
    return _phi_w4_core(y, d, F, st, reflect=True)


def _phi_w4_core(y: float, d: int, F: TestFunctionSpec,
                 st: QuadratureSettings, reflect: bool) -> QuadResult:
    nu = d - 1
    eps = (1.0 if y > 0 else -1.0) * (-1.0 if reflect else 1.0)
    A0 = 4.0 * _PI ** 3 * abs(y)
    u0 = (abs(y) * _PI ** 3) ** (1.0 / 3.0)
    hw = _phi_halfwidth(F) / 3.0          # window in ln u
    u_lo = u0 * math.exp(-hw)
    u_hi = u0 * math.exp(hw)
    sgn_phi = -1.0 if reflect else 1.0

    def g(u):
        u = np.asarray(u, dtype=float)
        phi = sgn_phi * (3.0 * np.log(u) - math.log(abs(y) * _PI ** 3))
        rfac = spectral_average(F, d, phi)
        return bessel_j(nu, 2.0 * np.sqrt(A0 / u)) \
            * np.exp(2j * eps * u) * rfac / u

    span = 2.0 * (u_hi - u_lo) \
        + 4.0 * math.sqrt(A0) * (u_lo ** -0.5 - u_hi ** -0.5) \
        + 3.0 * abs(F.rho_center) * math.log(u_hi / u_lo)
    n_seed = int(min(16384, max(8, span / 6.0)))
    val, err, nodes, conv = adaptive_panels(
        g, u_lo, u_hi, st.abs_tol, st.rel_tol, st.max_nodes,
        seed_width=(u_hi - u_lo) / n_seed)
    pref = 2.0 * (eps * 1j) ** d * _PI
    # truncated-window estimate: Gaussian tail times the Bessel envelope
    err += 1e-16 * (1.0 + abs(val))
    return QuadResult(complex(pref * val), float(err * abs(pref)),
                      int(nodes), bool(conv))


def phi_w6(y1: float, y2: float, d: int, F: TestFunctionSpec,
           st: QuadratureSettings = DEFAULT_SETTINGS) -> QuadResult:
    """Spectrally averaged w6 weight

        (1/|y1 y2|) (1/2pi) int F(i rho) K_w6((y1,y2); d, i rho) spec d rho

    through the Bessel-product form; each sign branch carries a pure
    spectral phase, so the average is again closed-form and localizes the
    x-integral to the branch's stationary window."""
    if y1 == 0 or y2 == 0:
        raise ValueError("phi_w6 requires nonzero arguments")
    if y1 > 0 and y2 > 0:
        return QuadResult(0.0 + 0.0j, 0.0, 0, True)
    nu = d - 1
    a1, a2 = abs(y1), abs(y2)
    e1 = 1 if y1 > 0 else -1
    e2 = 1 if y2 > 0 else -1
    c1 = 4.0 * _PI * math.sqrt(a1)
    c2 = 4.0 * _PI * math.sqrt(a2)
    lnratio = math.log(a2 / a1)
    hw = _phi_halfwidth(F)

    if (e1, e2) == (-1, -1):
        sign = (-1.0) ** (d % 2)
        # phi(t) = ln(a2/a1) + 3 ln(t/(1-t)); window in q = t/(1-t)
        q_lo = math.exp((-hw - lnratio) / 3.0)
        q_hi = math.exp((hw - lnratio) / 3.0)
        t_lo = q_lo / (1.0 + q_lo)
        t_hi = q_hi / (1.0 + q_hi)

        def g(t):
            t = np.asarray(t, dtype=float)
            phi = lnratio + 3.0 * (np.log(t) - np.log1p(-t))
            return bessel_j(nu, c1 / np.sqrt(t)) \
                * bessel_j(nu, c2 / np.sqrt(1.0 - t)) \
                * spectral_average(F, d, phi) / (t * (1.0 - t))
    elif (e1, e2) == (-1, 1):
        sign = 1.0
        # phi(t) = ln(a2/a1) - 3 ln t
        t_lo = math.exp((lnratio - hw) / 3.0)
        t_hi = math.exp((lnratio + hw) / 3.0)

        def g(t):
            t = np.asarray(t, dtype=float)
            phi = lnratio - 3.0 * np.log(t)
            return bessel_j(nu, c1 * np.sqrt(1.0 - t)) \
                * bessel_j(nu, c2 * np.sqrt(1.0 / t - 1.0)) \
                * spectral_average(F, d, phi) / t
    else:
        sign = 1.0
        # phi(t) = ln(a2/a1) + 3 ln t
        t_lo = math.exp((-lnratio - hw) / 3.0)
        t_hi = math.exp((-lnratio + hw) / 3.0)

        def g(t):
            t = np.asarray(t, dtype=float)
            phi = lnratio + 3.0 * np.log(t)
            return bessel_j(nu, c1 * np.sqrt(1.0 / t - 1.0)) \
                * bessel_j(nu, c2 * np.sqrt(1.0 - t)) \
                * spectral_average(F, d, phi) / t

    t_lo = max(t_lo, 1e-12)
    t_hi = min(t_hi, 1.0 - 1e-12)
    if t_hi <= t_lo:
        return QuadResult(0.0 + 0.0j, 1e-18, 0, True)
    # seed panels by total phase span across the window, not pointwise
    # frequency (which diverges at the endpoints while the phase itself
    # stays bounded there)
    span = 2.0 * (c1 + c2) * (t_lo ** -0.5 + (1.0 - t_hi) ** -0.5) \
        + 3.0 * abs(F.rho_center) * math.log(t_hi / t_lo)
    n_seed = int(min(8192, max(8, span / 6.0)))
    val, err, nodes, conv = adaptive_panels(
        g, t_lo, t_hi, st.abs_tol, st.rel_tol, st.max_nodes,
        seed_width=(t_hi - t_lo) / n_seed)
    pref = sign * _4PI2
    err = err * abs(pref) + 1e-16 * (1.0 + abs(val))
    return QuadResult(complex(pref * val), float(err), int(nodes),
                      bool(conv))


# ---------------------------------------------------------------------------
# Fourier-transformed kernels in factored Mellin form
# ---------------------------------------------------------------------------

_KF_ABSCISSA = 0.25
_KT_ABSCISSA = 0.45
_W_PAD = 170.0   # height beyond the stationary band where the bump
                 # transform has decayed below ~1e-11


def _band_height(*uv) -> float:
    return 4.0 * _PI * max(abs(x) for x in uv) + _W_PAD


class KtildeEvaluator:
    """Factored evaluation of the 2-fold transformed w4 kernel

        Ktilde(Xi, U, V) = (1/|Xi|) int K_w4(xi eta Xi) e(xi U + eta V)
                              W(xi) W(eta) d xi d eta
                        = (1/|Xi|) (1/2pi i) int_(c) G4(s) |Xi|^(1-r-s)
                              what(s+r, U) what(s+r, V) ds

    for fixed (pt, U, V, sign of Xi); evaluations across |Xi| reuse the
    contour grid and the bump-transform factors."""

    def __init__(self, pt: SpectralPoint, U: float, V: float, sgn: int = 1,
                 w: BumpSpec = DEFAULT_BUMP,
                 qs: QuadratureSettings = DEFAULT_SETTINGS,
                 dens_scale: float = 1.0, lnxi_scale: float | None = None):
        self.pt = pt
        self.U, self.V = U, V
        self.sgn = 1 if sgn >= 0 else -1
        d, rho = pt.d, pt.rho
        r = 1j * rho
        h = _band_height(U, V)
        lnxi = lnxi_scale if lnxi_scale is not None else 17.0
        dens = (1.1 * (lnxi + 2.0 * math.log(2.0 + abs(rho) + d) + 4.0)) \
            * dens_scale
        c = _KT_ABSCISSA
        s, wq = contour_nodes(c, h, 0.0, dens, tilt=False,
                              features=((-3.0 * rho, c),))
        self.s, self.wq = s, wq
        a = (d - 1) / 2.0
        b = (d + 1) / 2.0
        self.gam = np.exp(_lg(a + s) - _lg(b - s) + _lg(s + 3.0 * r)
                          + (self.sgn * 1j * _PI / 2.0) * (s + 3.0 * r))
        self.wU = bump_mf_batch(s + r, U, w)
        self.wV = self.wU if V == U else bump_mf_batch(s + r, V, w)
        self.r = r
        self.d = d
        self.base = self.wq * self.gam * self.wU * self.wV

    def value(self, xi_abs: float) -> complex:
        r = self.r
        lnz = math.log(_8PI3 * xi_abs)
        pref = (self.sgn * 1j) ** self.d / _4PI2 / xi_abs / (2j * _PI)
        tot = self.base @ np.exp((1.0 - r - self.s) * lnz)
        return complex(pref * tot)


def ktilde(Xi: float, U: float, V: float, pt: SpectralPoint,
           w: BumpSpec = DEFAULT_BUMP,
           st: QuadratureSettings = DEFAULT_SETTINGS) -> QuadResult:
    """2-fold transformed w4 kernel with a refinement-based error bar."""
    if Xi == 0:
        raise ValueError("ktilde requires Xi != 0")
    sgn = 1 if Xi > 0 else -1
    lnxi = abs(math.log(_8PI3 * abs(Xi)))
    e1 = KtildeEvaluator(pt, U, V, sgn, w, st, 1.0, lnxi)
    e2 = KtildeEvaluator(pt, U, V, sgn, w, st, 1.35, lnxi)
    v1 = e1.value(abs(Xi))
    v2 = e2.value(abs(Xi))
    return QuadResult(v2, float(abs(v1 - v2)),
                      int(e1.s.size + e2.s.size),
                      bool(abs(v1 - v2) <= max(st.abs_tol,
                                               st.rel_tol * abs(v2)) * 100))


class KfullEvaluator:
    """Factored evaluation of the 4-fold transformed w6 kernel

        K(Xi1, Xi2; U1, V1; U2, V2)
          = (1/(4 pi^2 |Xi1 Xi2|)) (1/(2 pi i)^2) int int
                G^eps((s1, s2); d, r) |4pi^2 Xi1|^(1-s1) |4pi^2 Xi2|^(1-s2)
                what(s1, U1) what(s1, V1) what(s2, U2) what(s2, V2) ds1 ds2

    for fixed sign pair and modulation; |Xi|-sweeps reuse the gamma tensor
    when it fits in memory and stream over row blocks otherwise."""

    def __init__(self, pt: SpectralPoint, eps, U1, V1, U2, V2,
                 w: BumpSpec = DEFAULT_BUMP,
                 qs: QuadratureSettings = DEFAULT_SETTINGS,
                 dens_scale: float = 1.0, lnxi_scale: float = 15.0,
                 max_cache_elems: int = 12_000_000):
        self.pt = pt
        self.eps = (1 if eps[0] >= 0 else -1, 1 if eps[1] >= 0 else -1)
        if self.eps == (1, 1):
            self.trivial = True
            return
        self.trivial = False
        d, rho = pt.d, pt.rho
        r = 1j * rho
        self.r = r
        c = _KF_ABSCISSA
        dens = (0.8 * (lnxi_scale + 2.0 * math.log(2.0 + abs(rho) + d)
                       + 4.0)) * dens_scale
        h1 = _band_height(U1, V1)
        h2 = _band_height(U2, V2)
        s1, w1 = contour_nodes(c, h1, 0.0, dens, tilt=False,
                               features=((-2.0 * rho, c),))
        s2, w2 = contour_nodes(c, h2, 0.0, dens, tilt=False,
                               features=((2.0 * rho, c),))
        self.s1, self.s2 = s1, s2
        a = (d - 1) / 2.0
        b = (d + 1) / 2.0
        lq1 = _lg(a + s1 - r) - _lg(b - s1 + r)
        lq2 = _lg(a + s2 + r) - _lg(b - s2 - r)
        r2 = 2.0 * r
        if self.eps == (-1, -1):
            sgn_d = (-1.0) ** (d % 2)
            self.g1 = lq1 + _lg(s1 + r2)
            self.g2 = lq2 + _lg(s2 - r2)
            self.cross = "neg"
        elif self.eps == (-1, 1):
            sgn_d = 1.0
            self.g1 = lq1 - _lg(1.0 - s1 - r2)
            self.g2 = lq2 + _lg(s2 - r2)
            self.cross = "mix"
        else:
            sgn_d = 1.0
            self.g1 = lq1 + _lg(s1 + r2)
            self.g2 = lq2 - _lg(1.0 - s2 + r2)
            self.cross = "mix"
        self.sgn_d = sgn_d
        f1 = bump_mf_batch(s1, U1, w)
        f1 = f1 * (f1 if V1 == U1 else bump_mf_batch(s1, V1, w))
        f2 = bump_mf_batch(s2, U2, w)
        f2 = f2 * (f2 if V2 == U2 else bump_mf_batch(s2, V2, w))
        self.a1base = w1 * f1
        self.a2base = w2 * f2
        self.M = None
        if s1.size * s2.size <= max_cache_elems:
            self.M = self._rows(np.arange(s1.size))

    def _rows(self, idx):
        s1 = self.s1[idx]
        if self.cross == "neg":
            cross = -_lg(np.add.outer(s1, self.s2))
        else:
            cross = _lg(1.0 - np.add.outer(s1, self.s2))
        return np.exp(self.g1[idx][:, None] + self.g2[None, :] + cross)

    def value(self, Xi1: float, Xi2: float) -> complex:
        if self.trivial:
            return 0.0 + 0.0j
        u1 = _4PI2 * abs(Xi1)
        u2 = _4PI2 * abs(Xi2)
        a1 = self.a1base * np.exp((1.0 - self.s1) * math.log(u1))
        a2 = self.a2base * np.exp((1.0 - self.s2) * math.log(u2))
        if self.M is not None:
            tot = a1 @ self.M @ a2
        else:
            tot = 0.0 + 0.0j
            block = max(1, 3_000_000 // max(self.s2.size, 1))
            idx = np.arange(self.s1.size)
            for i0 in range(0, self.s1.size, block):
                sl = idx[i0:i0 + block]
                tot += a1[sl] @ (self._rows(sl) @ a2)
        pref = self.sgn_d / (_4PI2 * abs(Xi1) * abs(Xi2)) / (2j * _PI) ** 2
        return complex(pref * tot)


def kfull(Xi1: float, Xi2: float, U1: float, V1: float, U2: float, V2: float,
          pt: SpectralPoint, w: BumpSpec = DEFAULT_BUMP,
          st: QuadratureSettings = DEFAULT_SETTINGS,
          dens_scale: float = 1.0) -> QuadResult:
    """4-fold transformed w6 kernel; the sign pair is read off
    (sgn Xi1, sgn Xi2) and the all-positive quadrant vanishes without
    quadrature.  Error bar from a density refinement."""
    if Xi1 == 0 or Xi2 == 0:
        raise ValueError("kfull requires nonzero Xi arguments")
    eps = (1 if Xi1 > 0 else -1, 1 if Xi2 > 0 else -1)
    if eps == (1, 1):
        return QuadResult(0.0 + 0.0j, 0.0, 0, True)
    lnxi = max(abs(math.log(_4PI2 * abs(Xi1))),
               abs(math.log(_4PI2 * abs(Xi2))), 4.0)
    e1 = KfullEvaluator(pt, eps, U1, V1, U2, V2, w, st, dens_scale, lnxi)
    e2 = KfullEvaluator(pt, eps, U1, V1, U2, V2, w, st, 1.3 * dens_scale, lnxi)
    v1 = e1.value(Xi1, Xi2)
    v2 = e2.value(Xi1, Xi2)
    nodes = e1.s1.size * e1.s2.size + e2.s1.size * e2.s2.size
    return QuadResult(v2, float(abs(v1 - v2)), int(nodes),
                      bool(abs(v1 - v2) <= max(st.abs_tol,
                                               st.rel_tol * abs(v2)) * 100))


def kfull_rho_avg(Xi1: float, Xi2: float, U1: float, V1: float,
                  U2: float, V2: float, d: int, G: SmoothCutoffSpec,
                  rho0: float, w: BumpSpec = DEFAULT_BUMP,
                  st: QuadratureSettings = DEFAULT_SETTINGS,
                  n_nodes: int = 12, dens_scale: float = 0.7) -> QuadResult:
    """int G(rho - rho0) K_(d, i rho)(Xi1, Xi2; U1, V1; U2, V2) d rho over
    the support of the shifted cutoff; the bump-transform factors are
    rho-independent and shared across the spectral nodes."""
    if Xi1 == 0 or Xi2 == 0:
        raise ValueError("kfull_rho_avg requires nonzero Xi arguments")
    eps = (1 if Xi1 > 0 else -1, 1 if Xi2 > 0 else -1)
    if eps == (1, 1):
        return QuadResult(0.0 + 0.0j, 0.0, 0, True)
    lo = rho0 + G.center - G.halfwidth
    hi = rho0 + G.center + G.halfwidth
    xg, wg = np.polynomial.legendre.leggauss(n_nodes)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    rho_nodes = mid + half * xg
    lnxi = max(abs(math.log(_4PI2 * abs(Xi1))),
               abs(math.log(_4PI2 * abs(Xi2))), 4.0)
    total = 0.0 + 0.0j
    nodes = 0
    for rho_k, wk in zip(rho_nodes, wg):
        gk = float(G(rho_k - rho0))
        if gk < 1e-300:
            continue
        ev = KfullEvaluator(SpectralPoint(d, rho_k), eps, U1, V1, U2, V2,
                            w, st, dens_scale, lnxi)
        total += wk * half * gk * ev.value(Xi1, Xi2)
        nodes += ev.s1.size * ev.s2.size
    # error bar: node-count refinement on the spectral direction
    xg2, wg2 = np.polynomial.legendre.leggauss(max(6, n_nodes // 2))
    total2 = 0.0 + 0.0j
    for rho_k, wk in zip(mid + half * xg2, wg2):
        gk = float(G(rho_k - rho0))
        if gk < 1e-300:
            continue
        ev = KfullEvaluator(SpectralPoint(d, rho_k), eps, U1, V1, U2, V2,
                            w, st, dens_scale, lnxi)
        total2 += wk * half * gk * ev.value(Xi1, Xi2)
    err = abs(total - total2)
    return QuadResult(complex(total), float(err), int(nodes), True)


# ---------------------------------------------------------------------------
# decay-wall scans
# ---------------------------------------------------------------------------


@dataclass
class ScanReport:
    """Outcome of one decay-wall scan: the qualitative claim checked, the
    measured ratios or slopes, and a pass flag."""

    lemma_id: str
    passed: bool
    details: dict = field(default_factory=dict)
    converged: bool = True

    def to_dict(self) -> dict:
        def clean(v):
            if isinstance(v, complex):
                return {"re": v.real, "im": v.imag}
            if isinstance(v, (np.floating, np.integer)):
                return float(v)
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            return v
        return {"lemma_id": self.lemma_id, "passed": bool(self.passed),
                "converged": bool(self.converged),
                "details": clean(self.details)}


def _fit_slope(xs, ys) -> float:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    A = np.vstack([xs, np.ones_like(xs)]).T
    sol, *_ = np.linalg.lstsq(A, ys, rcond=None)
    return float(sol[0])


# live-scale constants for the central transforms: the kernel stationary
# window sits at |Xi| ~ c * T^3 with c well below 1 (the paper's ~ T^3
# carries unspecified constants; these are calibrated empirically and the
# 6c scan itself verifies the T^3 tracking of the live window)
XI_LIVE_W4 = 0.002
XI_LIVE_W6 = 0.005


def _kfull_central(T: int, c: float,
                   st: QuadratureSettings = DEFAULT_SETTINGS,
                   dens_scale: float = 0.7) -> float:
    ptk = SpectralPoint(T, float(T))
    return abs(kfull(-c * float(T) ** 3, c * float(T) ** 3,
                     0.0, 0.0, 0.0, 0.0, ptk, st=st,
                     dens_scale=dens_scale).value)


def decay_scan(lemma_id: str, T: int = 40,
               st: QuadratureSettings = DEFAULT_SETTINGS,
               width: float = 4.0) -> ScanReport:
    """Run the decay/threshold sweep for one lemma-level claim at the desk
    scale T (spectral data d = rho_center = T unless the claim fixes its
    own scale); 'negligible' is operationalized as a ratio against a
    same-units reference evaluation at the live window."""
    lemma_id = str(lemma_id)
    if not 8 <= T <= 80:
        raise ValueError("T_surrogate must lie in [8, 80]")
    if lemma_id == "3":
        d = max(T, 60)
        F = TestFunctionSpec(float(d), width)
        ref = abs(phi_w4(float(d) ** 3, d, F, st).value)
        vals = {y: abs(phi_w4(y, d, F, st).value)
                for y in (1.0, d / 30.0)}
        ratios = {y: v / ref for y, v in vals.items()}
        passed = all(rat <= 1e-8 for rat in ratios.values()) and ref > 0
        return ScanReport("3", passed,
                          dict(d=d, reference=ref, ratios=ratios))
    if lemma_id == "4":
        d = max(T, 60)
        F = TestFunctionSpec(float(d), width)
        y_ref = (10.0 * d) ** 2
        ref = abs(phi_w6(-y_ref, y_ref, d, F, st).value)
        y_small = (d / 100.0) ** 2
        val = abs(phi_w6(-y_small, y_small, d, F, st).value)
        ratio = val / ref if ref > 0 else math.inf
        return ScanReport("4", ratio <= 1e-6 and ref > 0,
                          dict(d=d, reference=ref, ratio=ratio,
                               upsilon_small=d / 100.0, upsilon_ref=10.0 * d))
    pt = SpectralPoint(T, float(T))
    if lemma_id == "5a":
        # the modulation wall |U| <= T^eps is logarithmically soft at desk
        # scale (the suppression is the bump-transform tail at height
        # ~2 pi U); the scan asserts rapid monotone decay across the wall
        # and full negligibility at the calibrated depth U = 90
        Xi = XI_LIVE_W4 * float(T) ** 3
        ref = abs(ktilde(Xi, 0.0, 0.0, pt, st=st).value)
        ratios = {}
        for u in (25.0, 50.0, 90.0):
            ratios[u] = abs(ktilde(Xi, u, 0.0, pt, st=st).value) / ref \
                if ref > 0 else math.inf
        passed = ref > 0 and ratios[90.0] <= 1e-6 \
            and ratios[50.0] <= 3e-2 * ratios[25.0] \
            and ratios[90.0] <= 3e-2 * ratios[50.0]
        return ScanReport("5a", passed,
                          dict(T=T, reference=ref, ratios=ratios))
    if lemma_id == "5b":
        ref = abs(ktilde(XI_LIVE_W4 * float(T) ** 3, 0.0, 0.0, pt,
                         st=st).value)
        val = abs(ktilde(float(T) ** 3.5, 0.0, 0.0, pt, st=st).value)
        ratio = val / ref if ref > 0 else math.inf
        return ScanReport("5b", ratio <= 1e-4 and ref > 0,
                          dict(T=T, reference=ref, ratio=ratio))
    if lemma_id == "5c":
        # the plateau (|UV|^(1/2)+T)^(-3/2) is attained on the coupled
        # surface where the twist band 2 pi U matches the kernel
        # stationarity, i.e. 8 pi^3 Xi (xi eta) ~ (2 pi U)^2 (2 pi U + 3 rho)
        us = [12.0, 24.0, 48.0, 96.0]
        vals = []
        for u in us:
            best = 0.0
            for xs in (1.1, 1.4, 1.7):
                tb = xs * 2.0 * math.pi * u - pt.rho  # stationary height
                if tb + pt.rho <= 2.0:
                    continue
                xi_live = abs(tb + 3.0 * pt.rho) \
                    * (tb * tb + (pt.d / 2.0) ** 2) \
                    * (2.0 * math.pi * u) ** 2 \
                    / ((tb + pt.rho) ** 2 * _8PI3)
                best = max(best,
                           abs(ktilde(xi_live, -u, -u, pt, st=st).value))
            vals.append(best)
        slope = _fit_slope([math.log(u + T) for u in us],
                           [math.log(max(v, 1e-300)) for v in vals])
        # the measured live-surface peaks also validate the upper bound
        bound_ok = all(v <= 20.0 * (u + T) ** -1.5
                       for u, v in zip(us, vals))
        passed = abs(slope - (-1.5)) <= 0.3 and bound_ok
        return ScanReport("5c", passed,
                          dict(T=T, us=us, values=vals, slope=slope,
                               target=-1.5, tol=0.3, bound_ok=bound_ok))
    if lemma_id == "6a":
        Xi = XI_LIVE_W6 * float(T) ** 3
        ref = abs(kfull(-Xi, Xi, 0.0, 0.0, 0.0, 0.0, pt, st=st).value)
        ratios = {}
        for v1 in (25.0, 90.0):
            ratios[v1] = abs(kfull(-Xi, Xi, 0.0, v1, 0.0, 0.0, pt,
                                   st=st).value) / ref if ref > 0 \
                else math.inf
        passed = ref > 0 and ratios[90.0] <= 1e-6 \
            and ratios[90.0] <= 1e-3 * ratios[25.0]
        return ScanReport("6a", passed,
                          dict(T=T, reference=ref, ratios=ratios))
    if lemma_id == "6b":
        Xi1 = XI_LIVE_W6 * float(T) ** 3
        u0 = eps_surrogate(T, width) * 1.2
        points = []
        for (uv, xi2) in ((u0, Xi1), (2 * u0, Xi1),
                          (u0, 3.0 * Xi1), (2 * u0, 3.0 * Xi1)):
            v = abs(kfull(-Xi1, -xi2, uv, uv, 0.0, 0.0, pt, st=st).value)
            points.append((math.log(uv * uv) / 4.0 + math.log(xi2),
                           math.log(max(v, 1e-300))))
        slope = _fit_slope([p[0] for p in points], [p[1] for p in points])
        passed = abs(slope - (-1.0)) <= 0.3
        return ScanReport("6b", passed,
                          dict(T=T, points=points, slope=slope,
                               target=-1.0, tol=0.3))
    if lemma_id == "6c":
        # plateau height along the live window tracks T^-3, and the live
        # window location itself tracks T^3 (the desk-scale reading of
        # 'negligible unless min |Xi| >= T^(3-eps)')
        Ts = [20, 28, 40, 56]
        vals = [_kfull_central(Tk, XI_LIVE_W6, st) for Tk in Ts]
        slope = _fit_slope([math.log(tk) for tk in Ts],
                           [math.log(max(v, 1e-300)) for v in vals])
        peaks = []
        cs = [XI_LIVE_W6 / 8.0, XI_LIVE_W6 / 2.83, XI_LIVE_W6,
              XI_LIVE_W6 * 2.83, XI_LIVE_W6 * 8.0]
        for Tk in (20, 56):
            vals_c = {c: _kfull_central(Tk, c, st, 0.55) for c in cs}
            best = max(vals_c, key=vals_c.get)
            peaks.append(best * float(Tk) ** 3)
        loc_slope = (math.log(peaks[1]) - math.log(peaks[0]))             / (math.log(56.0) - math.log(20.0))
        passed = abs(slope - (-3.0)) <= 0.5 and abs(loc_slope - 3.0) <= 0.5
        return ScanReport("6c", passed,
                          dict(Ts=Ts, values=vals, slope=slope, target=-3.0,
                               tol=0.5, peak_locations=peaks,
                               location_slope=loc_slope))
    if lemma_id == "6e":
        te = eps_surrogate(T, width)
        U1 = V1 = 1.5 * te
        U2 = V2 = math.sqrt((U1 * V1 + T * T) * 4.0)
        G = SmoothCutoffSpec(0.0, te)
        Xi2_ok = U2 * V2            # Upsilon2 = 1, compliant
        Xi2_bad = 5.0 * U2 * V2     # violates the support condition by 5x
        Xi1 = U1 * V1
        ok = abs(kfull_rho_avg(-Xi1, -Xi2_ok, U1, V1, U2, V2, T, G,
                               float(T), st=st).value)
        bad = abs(kfull_rho_avg(-Xi1, -Xi2_bad, U1, V1, U2, V2, T, G,
                                float(T), st=st).value)
        ratio = bad / ok if ok > 0 else math.inf
        return ScanReport("6e", ratio <= 1e-4 and ok > 0,
                          dict(T=T, ratio=ratio, U1=U1, U2=U2,
                               compliant=ok, violating=bad))
    raise ValueError(f"unknown lemma scan id {lemma_id!r}")
