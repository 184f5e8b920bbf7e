"""Archimedean kernels attached to the w4 and w6 Weyl elements, in both
Mellin-Barnes and Bessel-integral representations, plus the beta-factor
table, its Stirling-ready combination, and the completed Whittaker
function components.

Contour conventions (recorded here, not mandated by the defining
formulas): the w4 kernel integrates over Re s = 0.1, which is right of
every gamma pole for purely imaginary spectral parameter; the w6 kernel
uses Re s1 = Re s2 = 0.45.  The mixed-sign w6 branches carry the factor
Gamma(1 - s1 - s2), whose poles live on Re(s1 + s2) >= 1; keeping the
abscissa sum below 1 is what makes the Mellin-Barnes value agree with the
Bessel-integral representation (a larger abscissa would cross the first
polar divisor and shift the value by a residue term).

The Bessel-integral forms used here are re-derived from the Mellin-Barnes
kernels by inserting the beta integral and collapsing both contour
variables; the two representations are cross-validated numerically to
1e-6 on the acceptance grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import loggamma as _lg

from .quadrature import (QuadResult, QuadratureSettings, DEFAULT_SETTINGS,
                         adaptive_panels, contour_nodes, integrate_vertical)
from .special_functions import (SpectralPoint, bessel_j, beta_fn, q_ratio,
                                log_gamma)

__all__ = [
    "SignPair",
    "KernelSettings",
    "b_w6",
    "g_epsilon",
    "k_w4",
    "k_w4_batch",
    "k_w6",
    "k_w6_mb_batch",
    "whittaker_w",
]

_PI = math.pi
_4PI2 = 4.0 * _PI * _PI
_8PI3 = 8.0 * _PI ** 3


@dataclass(frozen=True)
class SignPair:
    """Sign pair (sgn y1, sgn y2) selecting the kernel branch."""

    eps1: int
    eps2: int

    def __post_init__(self):
        if self.eps1 not in (-1, 1) or self.eps2 not in (-1, 1):
            raise ValueError("signs must be +1 or -1")


def _as_signpair(sp) -> SignPair:
    if isinstance(sp, SignPair):
        return sp
    e1, e2 = sp
    return SignPair(int(e1), int(e2))


@dataclass(frozen=True)
class KernelSettings:
    """Quadrature settings plus the kernel representation choice; ``auto``
    picks the Bessel integral when every argument is below 1e4 in modulus
    and Mellin-Barnes beyond that."""

    quad: QuadratureSettings = DEFAULT_SETTINGS
    representation: str = "auto"

    def __post_init__(self):
        if self.representation not in ("auto", "mellin_barnes",
                                       "bessel_integral"):
            raise ValueError(f"unknown representation {self.representation}")

    def pick(self, *args: float) -> str:
        if self.representation != "auto":
            return self.representation
        return "bessel_integral" if max(abs(a) for a in args) < 1e4 \
            else "mellin_barnes"


DEFAULT_KERNEL_SETTINGS = KernelSettings()


# ---------------------------------------------------------------------------
# beta table and Stirling-ready combination
# ---------------------------------------------------------------------------


def b_w6(sp, s1: complex, s2: complex, rho: float, d: int = 2) -> complex:
    """Four-case beta table of the w6 kernel at r = i rho:

        (-,-): (-1)^d B(s1 + 3r, s2 - 3r)
        (-,+): B(s2 - 3r, 1 - s1 - s2)
        (+,-): B(s1 + 3r, 1 - s1 - s2)
        (+,+): 0

    ``d`` only feeds the parity sign of the (-,-) branch."""
    sp = _as_signpair(sp)
    r3 = 3j * rho
    if (sp.eps1, sp.eps2) == (1, 1):
        return 0.0 + 0.0j
    if (sp.eps1, sp.eps2) == (-1, -1):
        return (-1.0) ** (d % 2) * beta_fn(s1 + r3, s2 - r3)
    if (sp.eps1, sp.eps2) == (-1, 1):
        return beta_fn(s2 - r3, 1.0 - s1 - s2)
    return beta_fn(s1 + r3, 1.0 - s1 - s2)


def g_epsilon(sp, s1: complex, s2: complex, pt: SpectralPoint) -> complex:
    """The shifted-variable integrand factor
    B^eps((s1 - r, s2 + r), r) Q(d, s1 - r) Q(d, s2 + r); the sum over all
    four sign pairs vanishes identically on the antidiagonal s2 = -s1."""
    r = pt.r
    val = b_w6(sp, s1 - r, s2 + r, pt.rho, pt.d)
    if val == 0:
        return 0.0 + 0.0j
    return val * q_ratio(pt.d, s1 - r) * q_ratio(pt.d, s2 + r)


# ---------------------------------------------------------------------------
# w4 kernel
# ---------------------------------------------------------------------------


def _kw4_mb_integrand(y: float, pt: SpectralPoint):
    """Vectorized MB integrand of K_w4 (without the 1/(2 pi i) measure)."""
    eps = 1.0 if y > 0 else -1.0
    d, rho = pt.d, pt.rho
    r = 1j * rho
    ln8p3y = math.log(_8PI3 * abs(y))
    a = (d - 1) / 2.0
    b = (d + 1) / 2.0
    pref = (eps * 1j) ** d / _4PI2

    def f(s):
        s = np.asarray(s, dtype=complex)
        logv = (1.0 - r - s) * ln8p3y + _lg(a + s) - _lg(b - s) \
            + _lg(s + 3.0 * r) + (eps * 1j * _PI / 2.0) * (s + 3.0 * r)
        return pref * np.exp(logv)

    return f


def k_w4(y: float, pt: SpectralPoint,
         st: KernelSettings = DEFAULT_KERNEL_SETTINGS) -> QuadResult:
    """K_w4(y; d, r) for nonzero real y, r = i rho.

    Mellin-Barnes path: the contour Re s = 0.1 with tails bent left beyond
    the gamma pole lines (heights 0 and -3 rho).  Bessel path: the
    oscillatory Bessel-against-exponential integral, split at the phase
    balance point with asymptotic tails."""
    if y == 0:
        raise ValueError("k_w4 requires y != 0")
    rep = st.pick(y)
    if rep == "mellin_barnes":
        return _kw4_mb(y, pt, st.quad)
    return _kw4_bessel(y, pt, st.quad)


def _kw4_mb(y: float, pt: SpectralPoint, qs: QuadratureSettings) -> QuadResult:
    f = _kw4_mb_integrand(y, pt)
    osc = abs(math.log(_8PI3 * abs(y))) + 2.0
    hmax = qs.max_height if qs.max_height > 0 else \
        30.0 * (abs(pt.rho) + pt.d) + 2.0 * (_8PI3 * abs(y)) ** (1.0 / 3.0)
    settings = QuadratureSettings(abs_tol=qs.abs_tol, rel_tol=qs.rel_tol,
                                  max_height=hmax, max_nodes=qs.max_nodes,
                                  oscillation_hint=osc)
    bend = 3.0 * abs(pt.rho) + 10.0
    return integrate_vertical(f, 0.1, settings, tilt_min_height=bend)


def k_w4_batch(ys, pt: SpectralPoint, qs: QuadratureSettings = DEFAULT_SETTINGS,
               refine: bool = False) -> np.ndarray:
    """K_w4 at many nonzero arguments of a common sign on one shared
    contour grid (fixed-panel evaluation used by transform oracles and
    sweep tables)."""
    ys = np.asarray(ys, dtype=float)
    if np.any(ys == 0):
        raise ValueError("arguments must be nonzero")
    if np.any(ys > 0) and np.any(ys < 0):
        pos = ys > 0
        out = np.empty(ys.shape, dtype=complex)
        out[pos] = k_w4_batch(ys[pos], pt, qs, refine)
        out[~pos] = k_w4_batch(ys[~pos], pt, qs, refine)
        return out
    eps = 1.0 if ys.flat[0] > 0 else -1.0
    d, rho = pt.d, pt.rho
    r = 1j * rho
    ymax = float(np.max(np.abs(ys)))
    h0 = 3.0 * abs(rho) + 10.0 + 1.4 * (_8PI3 * ymax) ** (1.0 / 3.0)
    dens = 2.4 * (abs(math.log(_8PI3 * ymax)) + 8.0)
    if refine:
        h0 *= 1.25
        dens *= 1.4
    s, w = contour_nodes(0.1, h0, h0 + 60.0, dens,
                         features=((-3.0 * rho, 0.1),))
    a = (d - 1) / 2.0
    b = (d + 1) / 2.0
    base = _lg(a + s) - _lg(b - s) + _lg(s + 3.0 * r) \
        + (eps * 1j * _PI / 2.0) * (s + 3.0 * r)
    pref = (eps * 1j) ** d / _4PI2 / (2j * _PI)
    lny = np.log(_8PI3 * np.abs(ys))
    # exp((1 - r - s) * ln(8 pi^3 |y|) + base), blocked over y to bound memory
    out = np.empty(ys.shape, dtype=complex)
    block = max(1, 4_000_000 // max(s.size, 1))
    flat = lny.ravel()
    outf = out.ravel()
    for i0 in range(0, flat.size, block):
        sl = slice(i0, i0 + block)
        logv = (1.0 - r - s[None, :]) * flat[sl][:, None] + base[None, :]
        outf[sl] = pref * (np.exp(logv) @ w)
    return out


def _osc_tail_scaled(a: complex, b: float, W: float,
                     terms: int = 12) -> complex:
    """int_W^inf w^(a-1) e^(i b w) dw divided by W^(a-1): the scaled form
    stays O(1/|b|) and lets callers fold W^(a-1) into their own log-space
    bookkeeping.  Repeated integration by parts; needs Re a < 1 and |b| W
    somewhat larger than |a|.  Truncated at the smallest term."""
    ib = 1j * b
    pref = -np.exp(ib * W) / ib
    term = 1.0 + 0.0j
    total = 0.0 + 0.0j
    best = math.inf
    for m in range(terms):
        if abs(term) > best:
            break
        total += term
        best = abs(term)
        term = term * -(a - 1.0 - m) / (ib * W)
    return complex(pref * total)


def _kw4_bessel(y: float, pt: SpectralPoint,
                qs: QuadratureSettings) -> QuadResult:
    """Bessel-integral representation:

        K_w4 = 2 (eps i)^d |y|^(1-r) pi^(1-3r)
               * int_0^inf J_(d-1)(2 sqrt(A/u)) e^(2 eps i u) u^(3r) du/u

    with A = 4 pi^3 |y| (the x-integral after x -> A/u).  Split at the
    phase-balance point u1 = (A/4)^(1/3); below u1 the substitution
    w = u^(-1/2) makes the Bessel phase linear.  Both remaining tails are
    summed in closed asymptotic form."""
    eps = 1.0 if y > 0 else -1.0
    d, rho = pt.d, pt.rho
    r = 1j * rho
    A = 4.0 * _PI ** 3 * abs(y)
    nu = d - 1
    u1 = max((A / 4.0) ** (1.0 / 3.0), 1e-3)
    err = 0.0
    nodes = 0

    # region A: u in [u1, U], direct form, frequency ~ 2.  The cut is where
    # either the power series of J converges fast (argument <= 6) or the
    # Debye suppression has pushed J below ~1e-14 (argument <= 0.29 nu).
    depth = max(12.0 * (1.0 + 3.0 * abs(rho) + nu / 2.0 + 30.0), 4.0 * u1)
    u_cut = max(depth, min(A / 9.0, 49.0 * A / max(1.0, nu * nu)))

    def fA(u):
        u = np.asarray(u, dtype=float)
        z = 2.0 * np.sqrt(A / u)
        return bessel_j(nu, z) * np.exp(2j * eps * u + (3.0 * r - 1.0) * np.log(u))

    phase_w = 2.0 * math.sqrt(A) * u1 ** (-1.5) + 2.0
    vA, eA, nA, convA = adaptive_panels(
        fA, u1, u_cut, qs.abs_tol, qs.rel_tol, qs.max_nodes,
        seed_width=min(8.0 / phase_w * 4.0, (u_cut - u1) / 8.0))
    err += eA
    nodes += nA

    # series tail beyond u_cut: J expanded in its power series, each term an
    # oscillatory power moment (log-space coefficients, overflow-safe)
    z_cut = 2.0 * math.sqrt(A / u_cut)
    tail = 0.0 + 0.0j
    if z_cut > 6.5:
        # argument at the cut still above the series window, which only
        # happens under Debye suppression (z_cut <= 0.29 nu): book the
        # remainder as an error estimate instead of expanding
        err += abs(fA(np.array([u_cut]))[0]) * u_cut
    else:
        ln_au = math.log(A / u_cut)
        for k in range(0, 60):
            a_k = 3.0 * r - 0.5 * nu - k
            # |coefficient * u_cut^(a_k - 1)| in log form; the unimodular
            # u_cut^(3r) phase factor is restored after the loop
            lc = (0.5 * nu + k) * ln_au - math.lgamma(k + 1) \
                - math.lgamma(nu + k + 1) - math.log(u_cut)
            if lc < -42.0 and k > 2:
                break
            tail += (-1.0) ** k * math.exp(lc) * \
                _osc_tail_scaled(a_k, 2.0 * eps, u_cut)
        tail *= np.exp(3.0 * r * math.log(u_cut))
    vA = vA + tail

    # region B: u in (0, u1] via w = u^(-1/2); linear Bessel phase.  The
    # cut is pushed out far enough that the Hankel form of J and the
    # exponential-series of e^(2 i eps / w^2) are both valid at w_cut.
    w1 = u1 ** (-0.5)
    sqA2 = 2.0 * math.sqrt(A)
    w_cut = max(6.0, 1.5 * w1, 12.0 * (1.0 + 6.0 * abs(rho)) / sqA2,
                max(30.0, 0.68 * nu * nu) / sqA2)

    def fB(w):
        w = np.asarray(w, dtype=float)
        with np.errstate(invalid="ignore"):
            return 2.0 * bessel_j(nu, sqA2 * w) * \
                np.exp(2j * eps / (w * w) + (-6.0 * r - 1.0) * np.log(w))

    vB, eB, nB, convB = adaptive_panels(
        fB, w1, w_cut, qs.abs_tol, qs.rel_tol, qs.max_nodes,
        seed_width=min(10.0 / (sqA2 + 2.0) * 4.0, (w_cut - w1) / 8.0))
    err += eB
    nodes += nB

    # Hankel tail beyond w_cut: J in its two-exponential asymptotic form
    # (P + iQ = sum_j a_j (i/z)^j) and e^(2 i eps/w^2) expanded; every term
    # is an oscillatory power moment with linear phase +- sqA2 w
    zc = sqA2 * w_cut
    tailB = 0.0 + 0.0j
    mu = 4.0 * nu * nu
    chi0 = -(0.5 * nu + 0.25) * _PI
    aj = [1.0]
    t = 1.0
    for j in range(1, 9):
        t = t * (mu - (2 * j - 1) ** 2) / (j * 8.0)
        aj.append(t)
    amp0 = 2.0 * math.sqrt(2.0 / (_PI * sqA2)) * 0.5
    for sgn in (1.0, -1.0):
        ph = np.exp(1j * sgn * chi0)
        for j, ajv in enumerate(aj):
            cj = ajv * (sgn * 1j / sqA2) ** j
            if abs(cj) * w_cut ** (-1.5 - j) < 1e-20:
                break
            for q in range(0, 9):
                cq = (2j * eps) ** q / math.factorial(q)
                a_t = -6.0 * r - 0.5 - j - 2.0 * q
                mag = w_cut ** (-1.5 - j - 2.0 * q)
                if abs(cj * cq) * mag < 1e-20:
                    break
                tailB += amp0 * ph * cj * cq * mag * \
                    _osc_tail_scaled(a_t, sgn * sqA2, w_cut)
    tailB *= np.exp(-6.0 * r * math.log(w_cut))  # unimodular phase of w^(-6r)
    # first dropped orders of both expansions
    err += amp0 * (abs(aj[-1]) / zc ** 8 + (2.0 / w_cut ** 2) ** 9 /
                   math.factorial(9)) * w_cut ** (-1.5) / sqA2
    vB = vB + tailB

    pref = 2.0 * (eps * 1j) ** d * abs(y) ** (1.0 - r) * _PI ** (1.0 - 3.0 * r)
    value = pref * (vA + vB)
    scale = abs(pref)
    return QuadResult(complex(value), float(err * scale), int(nodes),
                      bool(convA and convB))


# ---------------------------------------------------------------------------
# w6 kernel
# ---------------------------------------------------------------------------

_W6_ABSCISSA = 0.25


class _Kw6MBGrid:
    """Shared Mellin-Barnes tensor grid for one sign branch at fixed
    (d, rho): the 2-D exponentiated gamma matrix is argument-independent,
    so a whole sweep of (y1, y2) pairs costs one matrix build plus a
    bilinear form per pair.  Above ``max_cache_elems`` the matrix is not
    materialized and every evaluation streams over row blocks instead."""

    def __init__(self, branch, pt: SpectralPoint, h0: float, dens: float,
                 max_cache_elems: int = 16_000_000):
        d, rho = pt.d, pt.rho
        r = 1j * rho
        self.r3 = 3.0 * r
        c = _W6_ABSCISSA
        a = (d - 1) / 2.0
        b = (d + 1) / 2.0
        tail = 0.9 * h0 + 40.0
        s1, w1 = contour_nodes(c, h0, tail, dens, tail_density=0.55 * dens,
                               features=((-3.0 * rho, c),))
        s2, w2 = contour_nodes(c, h0, tail, dens, tail_density=0.55 * dens,
                               features=((3.0 * rho, c),))
        self.s1, self.w1, self.s2, self.w2 = s1, w1, s2, w2
        self.branch = branch
        lq1 = _lg(a + s1) - _lg(b - s1)
        lq2 = _lg(a + s2) - _lg(b - s2)
        if branch == (-1, -1):
            self.g1 = lq1 + _lg(s1 + self.r3)
            self.g2 = lq2 + _lg(s2 - self.r3)
        elif branch == (-1, 1):
            self.g1 = lq1 - _lg(1.0 - s1 - self.r3)
            self.g2 = lq2 + _lg(s2 - self.r3)
        elif branch == (1, -1):
            self.g1 = lq1 + _lg(s1 + self.r3)
            self.g2 = lq2 - _lg(1.0 - s2 + self.r3)
        else:
            raise ValueError("no Mellin-Barnes grid for the (+,+) branch")
        self.d = d
        self.r = r
        self.M = None
        if s1.size * s2.size <= max_cache_elems:
            self.M = self._rows(np.arange(s1.size))

    def _rows(self, idx) -> np.ndarray:
        """exp(gamma part) for the given s1-rows."""
        s1 = self.s1[idx]
        if self.branch == (-1, -1):
            cross = -_lg(np.add.outer(s1, self.s2))
        else:
            cross = _lg(1.0 - np.add.outer(s1, self.s2))
        return np.exp(self.g1[idx][:, None] + self.g2[None, :] + cross)

    def value(self, y1: float, y2: float) -> complex:
        u1 = _4PI2 * abs(y1)
        u2 = _4PI2 * abs(y2)
        # center the argument powers on their vertical-line value and clip
        # the tilted-tail growth: the grids are sized so that the gamma
        # matrix suppresses everything past the clip far below tolerance,
        # while the raw powers would overflow on their own
        e1 = (1.0 - self.s1) * math.log(u1)
        e2 = (1.0 - self.s2) * math.log(u2)
        m1 = (1.0 - _W6_ABSCISSA) * math.log(u1)
        m2 = (1.0 - _W6_ABSCISSA) * math.log(u2)
        a1 = self.w1 * np.exp(np.minimum(e1.real - m1, 500.0)
                              + 1j * e1.imag)
        a2 = self.w2 * np.exp(np.minimum(e2.real - m2, 500.0)
                              + 1j * e2.imag)
        if self.M is not None:
            total = a1 @ self.M @ a2
        else:
            total = 0.0 + 0.0j
            block = max(1, 4_000_000 // max(self.s2.size, 1))
            for i0 in range(0, self.s1.size, block):
                sl = slice(i0, i0 + block)
                total += a1[sl] @ (self._rows(np.arange(self.s1.size)[sl]) @ a2)
        total *= math.exp(m1 + m2)
        if self.branch == (-1, -1):
            total *= (-1.0) ** (self.d % 2)
        pref = abs(y2 / y1) ** self.r / _4PI2 / (2j * _PI) ** 2
        return complex(pref * total)


def _kw6_grid_params(pt: SpectralPoint, ymax_abs: float, scale: float):
    u = _4PI2 * max(ymax_abs, 1.0 / _4PI2)
    h0 = (3.0 * abs(pt.rho) + 10.0 + 1.35 * math.sqrt(max(u, 1.0))) * scale
    dens = (1.1 * (math.log(max(u, 1.0)) + 7.0)) * scale
    return h0, dens


def k_w6_mb_batch(pairs, pt: SpectralPoint,
                  qs: QuadratureSettings = DEFAULT_SETTINGS) -> list:
    """Mellin-Barnes K_w6 for a list of (y1, y2) pairs with one shared
    tensor grid per sign branch; the error estimate comes from a refined
    grid."""
    out = [None] * len(pairs)
    groups = {}
    for i, (y1, y2) in enumerate(pairs):
        br = (1 if y1 > 0 else -1, 1 if y2 > 0 else -1)
        groups.setdefault(br, []).append(i)
    for br, idxs in groups.items():
        if br == (1, 1):
            for i in idxs:
                out[i] = QuadResult(0.0 + 0.0j, 0.0, 0, True)
            continue
        ymax = max(max(abs(pairs[i][0]), abs(pairs[i][1])) for i in idxs)
        vals = {}
        for scale in (1.0, 1.3):
            h0, dens = _kw6_grid_params(pt, ymax, scale)
            grid = _Kw6MBGrid(br, pt, h0, dens)
            vals[scale] = [grid.value(*pairs[i]) for i in idxs]
            n_nodes = grid.s1.size * grid.s2.size
        for k, i in enumerate(idxs):
            v1, v2 = vals[1.0][k], vals[1.3][k]
            err = abs(v1 - v2)
            out[i] = QuadResult(v2, float(err), int(n_nodes),
                                bool(err <= max(qs.abs_tol,
                                                qs.rel_tol * abs(v2)) * 50))
    return out


def _kw6_mb(y1: float, y2: float, pt: SpectralPoint,
            qs: QuadratureSettings) -> QuadResult:
    return k_w6_mb_batch([(y1, y2)], pt, qs)[0]


def _hankel_amp_coeffs(nu: int, nmax: int = 9):
    """Coefficients a_j of the large-argument expansion
    P + iQ = sum_j a_j (i/z)^j of J_nu."""
    mu = 4.0 * nu * nu
    out = [1.0]
    t = 1.0
    for j in range(1, nmax):
        t = t * (mu - (2 * j - 1) ** 2) / (j * 8.0)
        out.append(t)
    return out


def _bessel_power_tail(nu: int, c_fast: float, r6: complex, V: float) -> complex:
    """int_V^inf J_nu(c_fast v) v^(r6 - 1) dv for Re r6 < 1/2, by the
    Hankel form of J and repeated integration by parts; valid once
    c_fast V is past the turning point of J_nu."""
    chi0 = -(0.5 * nu + 0.25) * _PI
    aj = _hankel_amp_coeffs(nu)
    amp0 = math.sqrt(2.0 / (_PI * c_fast)) * 0.5
    total = 0.0 + 0.0j
    for sgn in (1.0, -1.0):
        ph = np.exp(1j * sgn * chi0)
        for j, ajv in enumerate(aj):
            cj = ajv * (sgn * 1j / c_fast) ** j
            mag = V ** (float(r6.real) - 1.5 - j)
            if abs(cj) * mag < 1e-22:
                break
            a_t = r6 - 0.5 - j
            total += ph * cj * mag * _osc_tail_scaled(a_t, sgn * c_fast, V)
    return complex(total * amp0 * np.exp(1j * r6.imag * math.log(V)))


def _kw6_bessel(y1: float, y2: float, pt: SpectralPoint,
                qs: QuadratureSettings) -> QuadResult:
    """Bessel-product representation of K_w6, one branch per sign pair:

      (-,-): (-1)^d 4 pi^2 |y1 y2| |y2/y1|^r *
             int_0^1 t^(3r-1) (1-t)^(-3r-1)
                     J(4 pi sqrt(|y1|/t)) J(4 pi sqrt(|y2|/(1-t))) dt
      (-,+): 4 pi^2 |y1 y2| |y2/y1|^r *
             int_0^1 t^(-3r-1) J(4 pi sqrt(|y1|(1-t))) J(4 pi sqrt(|y2|(1/t-1))) dt
      (+,-): 4 pi^2 |y1 y2| |y2/y1|^r *
             int_0^1 t^(3r-1) J(4 pi sqrt(|y1|(1/t-1))) J(4 pi sqrt(|y2|(1-t))) dt
      (+,+): 0

    (all J of order d-1).  These are the collapse of the double
    Mellin-Barnes integral against the beta integral; the constants differ
    from a commonly printed variant and are pinned by numerical agreement
    with the Mellin-Barnes path.  Oscillatory-singular endpoints are
    integrated in the substituted variable that makes the Bessel phase
    linear, with closed asymptotic tails."""
    d, rho = pt.d, pt.rho
    r = 1j * rho
    nu = d - 1
    e1 = 1 if y1 > 0 else -1
    e2 = 1 if y2 > 0 else -1
    a1, a2 = abs(y1), abs(y2)
    if (e1, e2) == (1, 1):
        return QuadResult(0.0 + 0.0j, 0.0, 0, True)
    c1 = 4.0 * _PI * math.sqrt(a1)
    c2 = 4.0 * _PI * math.sqrt(a2)
    total = 0.0 + 0.0j
    err = 0.0
    nodes = 0
    conv = True
    f_max = 50.0

    def v_high(c_fast: float, vb: float) -> float:
        # far enough out that freezing the slow factor (error O(v^-2.5)
        # relative to the tail itself) is below the kernel tolerance
        return max(2.0 * vb, 150.0,
                   max(30.0, 0.68 * nu * nu) / c_fast,
                   12.0 * (1.0 + 6.0 * abs(rho)) / c_fast)

    def shoulder(f, vb, vh, freq):
        nonlocal err, nodes, conv
        v, e, n, cv = adaptive_panels(
            f, vb, vh, qs.abs_tol / 4, qs.rel_tol, qs.max_nodes,
            seed_width=max(min(10.0 / freq, (vh - vb) / 2.0), (vh - vb) / 4096.0))
        err += e
        nodes += n
        conv &= cv
        return v

    if (e1, e2) == (-1, -1):
        sign = (-1.0) ** (d % 2)
        tb1 = min(max((c1 / (2 * f_max)) ** (2.0 / 3.0), 1e-6), 0.25)
        tb2 = min(max((c2 / (2 * f_max)) ** (2.0 / 3.0), 1e-6), 0.25)

        def mid(t):
            t = np.asarray(t, dtype=float)
            return np.exp((3.0 * r - 1.0) * np.log(t)
                          + (-3.0 * r - 1.0) * np.log1p(-t)) \
                * bessel_j(nu, c1 / np.sqrt(t)) \
                * bessel_j(nu, c2 / np.sqrt(1.0 - t))

        fr_mid = max(c1 * tb1 ** -1.5, c2 * tb2 ** -1.5) * 0.5 + 4 * abs(rho) + 4
        v, e, n, cv = adaptive_panels(mid, tb1, 1.0 - tb2, qs.abs_tol / 4,
                                      qs.rel_tol, qs.max_nodes,
                                      seed_width=10.0 / fr_mid)
        total += v
        err += e
        nodes += n
        conv &= cv
        for (cf, co, ao, rr) in ((c1, c2, a2, r), (c2, c1, a1, -r)):
            # left shoulder of the (fast = cf) endpoint in v = t^(-1/2)
            vb = (tb1 if cf is c1 else tb2) ** -0.5
            vh = v_high(cf, vb)

            def fsh(v, cf=cf, co=co, rr=rr):
                v = np.asarray(v, dtype=float)
                t = v ** -2.0
                return 2.0 * bessel_j(nu, cf * v) \
                    * bessel_j(nu, co / np.sqrt(1.0 - t)) \
                    * np.exp((-3.0 * rr - 1.0) * np.log1p(-t)
                             - (6.0 * rr + 1.0) * np.log(v))

            total += shoulder(fsh, vb, vh, cf)
            # slow factor S(t) = J(co/sqrt(1-t)) (1-t)^(-3r-1) expanded at
            # t = v^-2 = 0 to first order; remainder booked as error
            slow0 = bessel_j(nu, co)
            jp = 0.5 * (bessel_j(max(nu - 1, 0), co) - bessel_j(nu + 1, co))
            slow1 = jp * co / 2.0 + slow0 * (3.0 * rr + 1.0)
            total += 2.0 * slow0 * _bessel_power_tail(nu, cf, -6.0 * rr, vh)
            total += 2.0 * slow1 * _bessel_power_tail(nu, cf, -6.0 * rr - 2.0, vh)
            err += (abs(slow1) + abs(slow0)) * (abs(3.0 * rr) + 2.0) ** 2 \
                * 2.0 * vh ** -4.0 * math.sqrt(2.0 / (_PI * cf)) \
                * vh ** -0.5 / cf
    else:
        if (e1, e2) == (-1, 1):
            sign = 1.0
            cf, co, ao = c2, c1, a1    # fast factor at t -> 0 carries y2
            rpow = 3.0 * r - 1.0       # (1+v^2)^(3r-1) in the v-form
            tpow = -3.0 * r - 1.0      # t-power in the direct form
        else:
            sign = 1.0
            cf, co, ao = c1, c2, a2
            rpow = -3.0 * r - 1.0
            tpow = 3.0 * r - 1.0
        tb = min(max((cf / (2 * f_max)) ** (2.0 / 3.0), 1e-9), 0.25)

        def mid(t):
            t = np.asarray(t, dtype=float)
            return np.exp(tpow * np.log(t)) * \
                bessel_j(nu, cf * np.sqrt(1.0 / t - 1.0)) * \
                bessel_j(nu, co * np.sqrt(1.0 - t))

        # t -> 1 is smooth (both arguments -> 0); stop just short of it
        t_hi = 1.0 - 1e-9
        fr_mid = cf * tb ** -1.5 * 0.5 + co + 4 * abs(rho) + 4
        v, e, n, cv = adaptive_panels(mid, tb, t_hi, qs.abs_tol / 4,
                                      qs.rel_tol, qs.max_nodes,
                                      seed_width=10.0 / fr_mid)
        total += v
        err += e + 1e-9 * abs(mid(np.array([t_hi]))[0])
        nodes += n
        conv &= cv
        # t -> 0 shoulder, exact substitution v = sqrt(1/t - 1)
        vb = math.sqrt(1.0 / tb - 1.0)
        vh = v_high(cf, vb)

        def fsh(v):
            v = np.asarray(v, dtype=float)
            v2 = v * v
            return 2.0 * bessel_j(nu, cf * v) \
                * bessel_j(nu, co * v / np.sqrt(1.0 + v2)) \
                * v * np.exp(rpow * np.log1p(v2))

        total += shoulder(fsh, vb, vh, cf)
        # slow part S(w) = J(co (1+w)^(-1/2)) (1+w)^rpow at w = v^-2,
        # expanded to first order
        slow0 = bessel_j(nu, co)
        jp = 0.5 * (bessel_j(max(nu - 1, 0), co) - bessel_j(nu + 1, co))
        slow1 = -jp * co / 2.0 + slow0 * rpow
        r6 = 2.0 * (rpow + 1.0)   # v^(2 rpow + 1) = v^(r6 - 1)
        total += 2.0 * slow0 * _bessel_power_tail(nu, cf, r6, vh)
        total += 2.0 * slow1 * _bessel_power_tail(nu, cf, r6 - 2.0, vh)
        err += (abs(slow1) + abs(slow0)) * (abs(rpow) + 2.0) ** 2 \
            * 2.0 * vh ** -4.0 * math.sqrt(2.0 / (_PI * cf)) \
            * vh ** -0.5 / cf

    pref = sign * _4PI2 * a1 * a2 * abs(y2 / y1) ** r
    return QuadResult(complex(pref * total), float(err * abs(pref)),
                      int(nodes), bool(conv))


def k_w6(y1: float, y2: float, pt: SpectralPoint,
         st: KernelSettings = DEFAULT_KERNEL_SETTINGS) -> QuadResult:
    """K_w6((y1, y2); d, r); the sign pair is read off the arguments and
    the (+,+) quadrant vanishes identically (no quadrature is run)."""
    if y1 == 0 or y2 == 0:
        raise ValueError("k_w6 requires nonzero arguments")
    if y1 > 0 and y2 > 0:
        return QuadResult(0.0 + 0.0j, 0.0, 0, True)
    rep = st.pick(y1, y2)
    if rep == "mellin_barnes":
        return _kw6_mb(y1, y2, pt, st.quad)
    return _kw6_bessel(y1, y2, pt, st.quad)


# ---------------------------------------------------------------------------
# completed Whittaker function components
# ---------------------------------------------------------------------------


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def whittaker_w(m: int, sign: int, y1: float, y2: float, pt: SpectralPoint,
                st: KernelSettings = DEFAULT_KERNEL_SETTINGS,
                abscissa: tuple = (2.0, 2.0)) -> QuadResult:
    """Component W_(eps m) of the completed Whittaker vector at y1, y2 > 0.

    Negative m indexes the row vector (W_-d, ..., W_d): W_(-m) is the
    eps = -1 variant of W_m.  The double contour sits at Re s = (2, 2) by
    default; the value is independent of the abscissa choice (tested by a
    contour-shift check)."""
    if y1 <= 0 or y2 <= 0:
        raise ValueError("whittaker_w requires y1, y2 > 0")
    if m < 0:
        sign = -1
        m = -m
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    d, rho = pt.d, pt.rho
    if m > d:
        raise ValueError("|m| must be <= d")
    r = 1j * rho
    c1, c2 = abscissa
    h0 = 3.0 * abs(rho) + 0.75 * d + 45.0
    dens = 1.0 * (abs(math.log(2.0 * _PI * max(y1, y2, 0.25))) + 6.0)
    vals = []
    for scale in (1.0, 1.3):
        s1n, w1n = contour_nodes(c1, h0 * scale, 0.0, dens * scale, tilt=False)
        s2n, w2n = contour_nodes(c2, h0 * scale, 0.0, dens * scale, tilt=False)
        lg_a1 = _lg((d - 1) / 2.0 + s1n - r) + (1.0 - s1n) * math.log(2.0 * _PI * y1)
        lg_a2 = _lg((d - 1) / 2.0 + s2n + r) + (1.0 - s2n) * math.log(2.0 * _PI * y2)
        lb1 = _lg((d - m + s1n + 2.0 * r) / 2.0)
        total = 0.0 + 0.0j
        for ell in range(0, m + 1):
            lb2 = _lg((ell + s2n - 2.0 * r) / 2.0)
            binw = sign ** ell * math.exp(_log_binom(m, ell))
            half_sum = np.add.outer((d - m + s1n + 2.0 * r) / 2.0,
                                    (ell + s2n - 2.0 * r) / 2.0)
            lw = (lg_a1 + lb1)[:, None] + (lg_a2 + lb2)[None, :] - _lg(half_sum)
            total += binw * ((w1n @ np.exp(lw)) @ w2n)
        vals.append(total / (2j * _PI) ** 2)
    pref = math.exp(_log_binom(2 * d, d + m) / 2.0) / (2.0 ** (1 + d) * _PI)
    v1, v2 = pref * vals[0], pref * vals[1]
    err = abs(v1 - v2)
    return QuadResult(complex(v2), float(err), int(2 * s1n.size * s2n.size),
                      bool(err <= max(st.quad.abs_tol,
                                      st.quad.rel_tol * abs(v2)) * 100))
