"""Arithmetic side of the summation formula: the diagonal term and the
three Kloosterman-weighted Weyl-element sums, with explicit truncation and
term-by-term breakdowns.

Only the arithmetic side is computed: the spectral side would need a
database of cusp forms, which is out of scope; this module is a one-sided
evaluator used to study the term structure and truncation behavior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .kloosterman import s_long, s_tilde
from .quadrature import QuadResult, QuadratureSettings, DEFAULT_SETTINGS
from .special_functions import SpectralPoint, bessel_j
from .transforms import TestFunctionSpec, delta_integral, phi_w4, phi_w5, \
    phi_w6

__all__ = [
    "KuznetsovRequest",
    "TermBreakdown",
    "ArithmeticSide",
    "delta_term",
    "sigma4_term",
    "sigma5_term",
    "sigma6_term",
    "arithmetic_side",
]


@dataclass(frozen=True)
class KuznetsovRequest:
    """Indices, spectral data, test function and truncation caps for one
    arithmetic-side evaluation."""

    n1: int
    n2: int
    m1: int
    m2: int
    pt: SpectralPoint
    F: TestFunctionSpec
    cap45: int = 400        # largest D1*D2 enumerated in the w4/w5 sums
    cap6: int = 6           # largest D1, D2 in the long-element sum
    quad: QuadratureSettings = DEFAULT_SETTINGS

    def __post_init__(self):
        if min(self.n1, self.n2, self.m1, self.m2) < 1:
            raise ValueError("indices must be positive")
        if self.cap45 < 1 or self.cap6 < 1:
            raise ValueError("caps must be positive")


@dataclass
class TermBreakdown:
    """One Weyl-element sum: the enumerated (D1, D2, eps) terms and their
    partial sum."""

    terms: list = field(default_factory=list)  # (D1, D2, eps, complex term)
    total: complex = 0.0 + 0.0j
    err_est: float = 0.0
    converged: bool = True

    def add(self, D1, D2, eps, value: complex, err: float, conv: bool):
        self.terms.append((D1, D2, eps, complex(value)))
        self.total += complex(value)
        self.err_est += err
        self.converged &= conv


def delta_term(req: KuznetsovRequest) -> QuadResult:
    """Diagonal term: 0 unless (n1, n2) = (m1, m2), else the F-weighted
    spectral mass (closed form for the Gaussian test function)."""
    if (req.n1, req.n2) != (req.m1, req.m2):
        return QuadResult(0.0 + 0.0j, 0.0, 0, True)
    val = delta_integral(req.F, req.pt.d)
    return QuadResult(complex(val), abs(val) * 1e-14, 0, True)


def _sigma45_families(req: KuznetsovRequest, mirror: bool):
    """Moduli families of the w4 (mirror=False) and w5 (True) sums.

    w4: D2 | D1 with m2 D1 = n1 D2^2 -- writing D1 = k D2 forces
        n1 D2 = m2 k, so k runs over multiples of n1/(n1, m2).
    w5: the index-swapped family D1 | D2 with m1 D2 = n2 D1^2."""
    if not mirror:
        small_idx, big_idx = req.m2, req.n1
    else:
        small_idx, big_idx = req.m1, req.n2
    fams = []
    k = 1
    while True:
        # inner modulus Ds, outer D = k * Ds with big_idx * Ds = small_idx * k
        if (small_idx * k) % big_idx == 0:
            Ds = small_idx * k // big_idx
            if Ds >= 1:
                D = k * Ds
                if Ds * D > req.cap45:
                    break
                fams.append((Ds, D))
        k += 1
        if k > req.cap45:
            break
    return fams


def _debye_small(nu: int, arg: float) -> bool:
    if arg >= 0.2 * nu:
        return False
    # J_nu(z) <= (e z / 2 nu)^nu for z << nu
    logj = nu * (1.0 + math.log(max(arg, 1e-300) / (2.0 * nu)))
    return logj < -75.0


def _w4_negligible(y: float, d: int, F: TestFunctionSpec) -> bool:
    """Certificate that the averaged w4 weight at argument y is below
    ~1e-30: the Bessel argument stays under the Debye wall across the
    whole stationary window."""
    slack = math.exp(2.0 * math.sqrt(-math.log(1e-18) / F.width) / 3.0)
    arg = 4.0 * math.pi * abs(y) ** (1.0 / 3.0) * slack
    return _debye_small(d - 1, arg)


def _w6_negligible(y1: float, y2: float, d: int,
                   F: TestFunctionSpec) -> bool:
    """Certificate for the averaged w6 weight: the smaller Bessel argument
    in the stationary window is at most ~18 Upsilon (with window slack),
    Upsilon = min(|y1|^(1/3) |y2|^(1/6), |y1|^(1/6) |y2|^(1/3))."""
    a1, a2 = abs(y1), abs(y2)
    ups = min(a1 ** (1 / 3) * a2 ** (1 / 6), a1 ** (1 / 6) * a2 ** (1 / 3))
    slack = math.exp(2.0 * math.sqrt(-math.log(1e-18) / F.width) / 3.0)
    return _debye_small(d - 1, 18.0 * ups * slack)


def sigma4_term(req: KuznetsovRequest) -> TermBreakdown:
    """w4 sum: over eps = +-1 and the sparse family D2 | D1 with
    m2 D1 = n1 D2^2,

        S~(-eps n2, m2, m1; D2, D1)/(D1 D2)
            * Phi_w4(eps m1 m2 n2 / (D1 D2))."""
    out = TermBreakdown()
    for (Ds, D) in _sigma45_families(req, mirror=False):
        y0 = req.m1 * req.m2 * req.n2 / (D * Ds)
        for eps in (1, -1):
            kl = s_tilde(-eps * req.n2, req.m2, req.m1, Ds, D)
            if abs(kl) < 1e-14:
                out.add(D, Ds, eps, 0.0, 0.0, True)
                continue
            if _w4_negligible(y0, req.pt.d, req.F):
                out.add(D, Ds, eps, 0.0, 1e-30, True)
                continue
            ph = phi_w4(eps * y0, req.pt.d, req.F, req.quad)
            term = kl * ph.value / (D * Ds)
            out.add(D, Ds, eps, term, abs(kl) * ph.err_est / (D * Ds),
                    ph.converged)
    return out


def sigma5_term(req: KuznetsovRequest) -> TermBreakdown:
    """w5 sum: mirror image of the w4 sum (D1 | D2 with m1 D2 = n2 D1^2,
    kernel reflected)."""
    out = TermBreakdown()
    for (Ds, D) in _sigma45_families(req, mirror=True):
        y0 = req.n1 * req.m1 * req.m2 / (Ds * D)
        for eps in (1, -1):
            kl = s_tilde(eps * req.n1, req.m1, req.m2, Ds, D)
            if abs(kl) < 1e-14:
                out.add(Ds, D, eps, 0.0, 0.0, True)
                continue
            if _w4_negligible(y0, req.pt.d, req.F):
                out.add(Ds, D, eps, 0.0, 1e-30, True)
                continue
            ph = phi_w5(eps * y0, req.pt.d, req.F, req.quad)
            term = kl * ph.value / (Ds * D)
            out.add(Ds, D, eps, term, abs(kl) * ph.err_est / (Ds * D),
                    ph.converged)
    return out


def sigma6_term(req: KuznetsovRequest) -> TermBreakdown:
    """Long-element sum: over sign pairs and D1, D2 <= cap6,

        S(eps2 n2, eps1 n1, m1, m2; D1, D2)/(D1 D2)
            * Phi_w6(eps2 m1 n2 D2/D1^2, eps1 m2 n1 D1/D2^2);

    the all-positive-argument sign pair contributes exactly 0."""
    out = TermBreakdown()
    d = req.pt.d
    for D1 in range(1, req.cap6 + 1):
        for D2 in range(1, req.cap6 + 1):
            y1a = req.m1 * req.n2 * D2 / D1 ** 2
            y2a = req.m2 * req.n1 * D1 / D2 ** 2
            for eps1 in (1, -1):
                for eps2 in (1, -1):
                    if eps2 > 0 and eps1 > 0:
                        out.add(D1, D2, (eps1, eps2), 0.0, 0.0, True)
                        continue
                    kl = s_long(eps2 * req.n2, eps1 * req.n1, req.m1,
                                req.m2, D1, D2)
                    if abs(kl) < 1e-14:
                        out.add(D1, D2, (eps1, eps2), 0.0, 0.0, True)
                        continue
                    if _w6_negligible(y1a, y2a, d, req.F):
                        out.add(D1, D2, (eps1, eps2), 0.0, 1e-30, True)
                        continue
                    ph = phi_w6(eps2 * y1a, eps1 * y2a, d, req.F, req.quad)
                    term = kl * ph.value / (D1 * D2)
                    out.add(D1, D2, (eps1, eps2), term,
                            abs(kl) * ph.err_est / (D1 * D2), ph.converged)
    return out


@dataclass
class ArithmeticSide:
    delta: QuadResult
    sigma4: TermBreakdown
    sigma5: TermBreakdown
    sigma6: TermBreakdown

    @property
    def total(self) -> complex:
        return complex(self.delta.value) + self.sigma4.total \
            + self.sigma5.total + self.sigma6.total

    @property
    def err_est(self) -> float:
        return self.delta.err_est + self.sigma4.err_est \
            + self.sigma5.err_est + self.sigma6.err_est


def arithmetic_side(req: KuznetsovRequest) -> ArithmeticSide:
    """Assemble the four arithmetic-side pieces of the summation formula."""
    return ArithmeticSide(delta_term(req), sigma4_term(req),
                          sigma5_term(req), sigma6_term(req))
