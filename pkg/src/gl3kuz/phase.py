"""Stationary-phase surface of the 4-fold transformed long-element kernel:
the phase g(t1, t2), its first derivatives g1, g2 and the spectral
derivative h, the exact rational second derivatives, the equivalent cubic
conditions, and grid-sampled measure estimates for the admissible region
against the sublemma bounds.

One deliberate correction is baked in: the spectral derivative h carries
(t2 - 2 rho) squared in its denominator, as differentiation of g shows
(and as the consistency relation between the dyadic parameters B1, B2
requires); a printed form with the first power fails the finite-difference
check by exactly the missing factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PhaseParams",
    "PhasePoint",
    "RegionSpec",
    "CaseExponents",
    "CASE_EXPONENTS",
    "phase_g",
    "phase_g1",
    "phase_g2",
    "phase_h",
    "phase_g1_t1",
    "phase_g2_t2",
    "phase_g1_t2",
    "cubic_residuals",
    "region_measure",
    "region_sample",
    "scan_derivative_bounds",
    "consistency_check",
    "sublemma_bounds",
    "DerivativeBoundReport",
    "ConsistencyReport",
]


@dataclass(frozen=True)
class PhaseParams:
    """Spectral data (d, rho) and the two scale ratios (ups1, ups2) that
    enter the phase; C1 = 3 rho^2 - (d/2)^2 and C2 = -2 rho((d/2)^2+rho^2)
    are the derived cubic coefficients."""

    d: int
    rho: float
    ups1: float
    ups2: float

    def __post_init__(self):
        if self.ups1 <= 0 or self.ups2 <= 0:
            raise ValueError("scale ratios must be positive")

    @property
    def C1(self) -> float:
        return 3.0 * self.rho ** 2 - (self.d / 2.0) ** 2

    @property
    def C2(self) -> float:
        return -2.0 * self.rho * ((self.d / 2.0) ** 2 + self.rho ** 2)


@dataclass(frozen=True)
class PhasePoint:
    """Contour heights (t1, t2), off the logarithmic singularities
    t1 = 0, t1 = -2 rho, t2 = 0, t2 = 2 rho, t1 + t2 = 0."""

    t1: float
    t2: float

    def check(self, pp: PhaseParams, tol: float = 1e-9):
        bad = (abs(self.t1) < tol or abs(self.t2) < tol
               or abs(self.t1 + 2.0 * pp.rho) < tol
               or abs(self.t2 - 2.0 * pp.rho) < tol
               or abs(self.t1 + self.t2) < tol)
        if bad:
            raise ValueError(f"phase point {self} sits on a singularity")


def phase_g(ppt: PhasePoint, pp: PhaseParams) -> float:
    """The stationary phase

        g = d arctan((t1-rho)/(d/2)) + (t1-rho) log(((t1-rho)^2+(d/2)^2)/e^2)
          + d arctan((t2+rho)/(d/2)) + (t2+rho) log(((t2+rho)^2+(d/2)^2)/e^2)
          + (t1+2rho) log(|t1+2rho|/e) + (t2-2rho) log(|t2-2rho|/e)
          - (t1+t2) log(|t1+t2|/e)
          - t1 log(t1^2 e^-2 ups1) - t2 log(t2^2 e^-2 ups2).
    """
    ppt.check(pp)
    t1, t2 = ppt.t1, ppt.t2
    d, rho = float(pp.d), pp.rho
    h2 = (d / 2.0) ** 2
    e2 = math.e ** 2
    out = d * math.atan((t1 - rho) / (d / 2.0)) \
        + (t1 - rho) * math.log(((t1 - rho) ** 2 + h2) / e2) \
        + d * math.atan((t2 + rho) / (d / 2.0)) \
        + (t2 + rho) * math.log(((t2 + rho) ** 2 + h2) / e2) \
        + (t1 + 2 * rho) * math.log(abs(t1 + 2 * rho) / math.e) \
        + (t2 - 2 * rho) * math.log(abs(t2 - 2 * rho) / math.e) \
        - (t1 + t2) * math.log(abs(t1 + t2) / math.e) \
        - t1 * math.log(t1 ** 2 * pp.ups1 / e2) \
        - t2 * math.log(t2 ** 2 * pp.ups2 / e2)
    return out


def phase_g1(ppt: PhasePoint, pp: PhaseParams) -> float:
    """d g / d t1 = log | (t1+2rho)((d/2)^2+(rho-t1)^2)
                          / ((t1+t2) t1^2 ups1) |."""
    ppt.check(pp)
    t1, t2 = ppt.t1, ppt.t2
    h2 = (pp.d / 2.0) ** 2
    return math.log(abs((t1 + 2 * pp.rho) * (h2 + (pp.rho - t1) ** 2)
                        / ((t1 + t2) * t1 * t1 * pp.ups1)))


def phase_g2(ppt: PhasePoint, pp: PhaseParams) -> float:
    """d g / d t2 = log | (t2-2rho)((d/2)^2+(rho+t2)^2)
                          / ((t1+t2) t2^2 ups2) |."""
    ppt.check(pp)
    t1, t2 = ppt.t1, ppt.t2
    h2 = (pp.d / 2.0) ** 2
    return math.log(abs((t2 - 2 * pp.rho) * (h2 + (pp.rho + t2) ** 2)
                        / ((t1 + t2) * t2 * t2 * pp.ups2)))


def phase_h(ppt: PhasePoint, pp: PhaseParams) -> float:
    """Spectral derivative d g / d rho:

        log | ((d/2)^2+(rho+t2)^2) (t1+2rho)^2
              / (((d/2)^2+(rho-t1)^2) (t2-2rho)^2) |.

    Independent of ups1, ups2 (no scale term carries rho)."""
    ppt.check(pp)
    t1, t2 = ppt.t1, ppt.t2
    h2 = (pp.d / 2.0) ** 2
    return math.log(((h2 + (pp.rho + t2) ** 2) * (t1 + 2 * pp.rho) ** 2)
                    / ((h2 + (pp.rho - t1) ** 2) * (t2 - 2 * pp.rho) ** 2))


def phase_g1_t1(ppt: PhasePoint, pp: PhaseParams) -> float:
    """d g1 / d t1 = -2/t1 + 1/(t1+2rho) - 1/(t1+t2)
                     + 2(t1-rho)/((d/2)^2+(t1-rho)^2)."""
    ppt.check(pp)
    t1, t2 = ppt.t1, ppt.t2
    h2 = (pp.d / 2.0) ** 2
    return -2.0 / t1 + 1.0 / (t1 + 2 * pp.rho) - 1.0 / (t1 + t2) \
        + 2.0 * (t1 - pp.rho) / (h2 + (t1 - pp.rho) ** 2)


def phase_g2_t2(ppt: PhasePoint, pp: PhaseParams) -> float:
    """d g2 / d t2 = -2/t2 + 1/(t2-2rho) - 1/(t1+t2)
                     + 2(t2+rho)/((d/2)^2+(t2+rho)^2)."""
    ppt.check(pp)
    t1, t2 = ppt.t1, ppt.t2
    h2 = (pp.d / 2.0) ** 2
    return -2.0 / t2 + 1.0 / (t2 - 2 * pp.rho) - 1.0 / (t1 + t2) \
        + 2.0 * (t2 + pp.rho) / (h2 + (t2 + pp.rho) ** 2)


def phase_g1_t2(ppt: PhasePoint, pp: PhaseParams) -> float:
    """Mixed derivative d g1 / d t2 = -1/(t1+t2), exactly."""
    ppt.check(pp)
    return -1.0 / (ppt.t1 + ppt.t2)


def _nth_derivative_g1(ppt: PhasePoint, pp: PhaseParams, n: int) -> float:
    """Closed form of d^n g1 / d t1^n (n >= 1): the log derivatives of the
    four factors of exp(g1)."""
    t1, t2 = ppt.t1, ppt.t2
    rho = pp.rho
    fac = math.factorial(n - 1) * (-1.0) ** (n - 1)
    z = complex(t1 - rho, pp.d / 2.0)
    return fac * ((t1 + 2 * rho) ** -n - (t1 + t2) ** -n
                  - 2.0 * t1 ** -n + 2.0 * (z ** -n).real)


def _nth_derivative_g2(ppt: PhasePoint, pp: PhaseParams, n: int) -> float:
    t1, t2 = ppt.t1, ppt.t2
    rho = pp.rho
    fac = math.factorial(n - 1) * (-1.0) ** (n - 1)
    z = complex(t2 + rho, pp.d / 2.0)
    return fac * ((t2 - 2 * rho) ** -n - (t1 + t2) ** -n
                  - 2.0 * t2 ** -n + 2.0 * (z ** -n).real)


def cubic_residuals(ppt: PhasePoint, pp: PhaseParams,
                    alpha1: int, alpha2: int) -> tuple:
    """The two cubic left-hand sides equivalent to the conditions
    g_i = log |...| = 0 with branch signs alpha_i:

        r1 = ups1^-1 (t1^3 - C1 t1 - C2) - alpha1 t1^2 (t1 + t2)
        r2 = ups2^-1 (t2^3 - C1 t2 + C2) - alpha2 t2^2 (t1 + t2)
    """
    if alpha1 not in (-1, 1) or alpha2 not in (-1, 1):
        raise ValueError("branch signs must be +-1")
    t1, t2 = ppt.t1, ppt.t2
    C1, C2 = pp.C1, pp.C2
    r1 = (t1 ** 3 - C1 * t1 - C2) / pp.ups1 - alpha1 * t1 * t1 * (t1 + t2)
    r2 = (t2 ** 3 - C1 * t2 + C2) / pp.ups2 - alpha2 * t2 * t2 * (t1 + t2)
    return r1, r2


# ---------------------------------------------------------------------------
# admissible region
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegionSpec:
    """Dyadic localization of the admissible region: t_i in sign(U_i) *
    [|U_i|, 2|U_i|), |t1 + 2 rho| in [B1, 2 B1), |t2 - 2 rho| in [B2, 2 B2),
    |t1 + t2| in [B3, 2 B3), with the derivative thresholds scaled by
    ``threshold_eps`` (the T^eps surrogate)."""

    U1: float
    U2: float
    B1: float
    B2: float
    B3: float
    threshold_eps: float

    def __post_init__(self):
        if min(self.B1, self.B2, self.B3) <= 0:
            raise ValueError("dyadic scales must be positive")
        if self.U1 == 0 or self.U2 == 0:
            raise ValueError("scales U1, U2 must be nonzero")
        # triangle compatibility of the three dyadic scales
        b1, b2, b3 = sorted((self.B1, self.B2, self.B3))
        if b3 > 2.1 * (b1 + b2) + 4.0 * b2:
            raise ValueError("dyadic scales violate the triangle constraint")

    def E1(self) -> float:
        return min(self.B1, self.B3, abs(self.U1))

    def E2(self) -> float:
        return min(self.B2, self.B3, abs(self.U2))

    def F_scale(self, T: float) -> float:
        return min(self.B1, self.B2, T)


def _region_mask(rs: RegionSpec, pp: PhaseParams, grid_n: int, T: float):
    """Boolean admissibility mask on the dyadic box plus the grid cell
    area."""
    s1 = 1.0 if rs.U1 > 0 else -1.0
    s2 = 1.0 if rs.U2 > 0 else -1.0
    t1 = s1 * np.linspace(abs(rs.U1), 2.0 * abs(rs.U1), grid_n,
                          endpoint=False)
    t2 = s2 * np.linspace(abs(rs.U2), 2.0 * abs(rs.U2), grid_n,
                          endpoint=False)
    cell = (abs(rs.U1) / grid_n) * (abs(rs.U2) / grid_n)
    T1, T2 = np.meshgrid(t1, t2, indexing="ij")
    rho = pp.rho
    h2 = (pp.d / 2.0) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        shell = (np.abs(T1 + 2 * rho) >= rs.B1) \
            & (np.abs(T1 + 2 * rho) < 2 * rs.B1) \
            & (np.abs(T2 - 2 * rho) >= rs.B2) \
            & (np.abs(T2 - 2 * rho) < 2 * rs.B2) \
            & (np.abs(T1 + T2) >= rs.B3) \
            & (np.abs(T1 + T2) < 2 * rs.B3)
        g1 = np.log(np.abs((T1 + 2 * rho) * (h2 + (rho - T1) ** 2)
                           / ((T1 + T2) * T1 * T1 * pp.ups1)))
        g2 = np.log(np.abs((T2 - 2 * rho) * (h2 + (rho + T2) ** 2)
                           / ((T1 + T2) * T2 * T2 * pp.ups2)))
    thr1 = rs.threshold_eps / math.sqrt(rs.E1())
    thr2 = rs.threshold_eps / math.sqrt(rs.E2())
    cond = (np.abs(g1) <= thr1) & (np.abs(g2) <= thr2)
    # alternative admissibility in the unbalanced regimes
    if abs(rs.U1) >= 8.0 * (T + abs(rs.U2)):
        cond |= (np.abs(g1) <= rs.threshold_eps * math.sqrt(abs(rs.U2))
                 / abs(rs.U1)) & (np.abs(g2) <= thr2)
    if abs(rs.U2) >= 8.0 * (T + abs(rs.U1)):
        cond |= (np.abs(g2) <= rs.threshold_eps * math.sqrt(abs(rs.U1))
                 / abs(rs.U2)) & (np.abs(g1) <= thr1)
    return shell & cond & np.isfinite(g1) & np.isfinite(g2), cell, (T1, T2)


def region_measure(rs: RegionSpec, pp: PhaseParams, grid_n: int = 512,
                   T: float | None = None) -> float:
    """Grid-sampled 2-D measure of the admissible region on the dyadic
    shell (the set where both derivative thresholds hold)."""
    if grid_n > 4096:
        raise ValueError("grid_n capped at 4096")
    T = T if T is not None else max(pp.d, abs(pp.rho))
    mask, cell, _ = _region_mask(rs, pp, grid_n, T)
    return float(np.count_nonzero(mask) * cell)


def region_sample(rs: RegionSpec, pp: PhaseParams, grid_n: int = 512,
                  T: float | None = None):
    """One admissible grid point (t1, t2), or None when the sampled region
    is empty."""
    T = T if T is not None else max(pp.d, abs(pp.rho))
    mask, _, (T1, T2) = _region_mask(rs, pp, grid_n, T)
    idx = np.argwhere(mask)
    if idx.size == 0:
        return None
    i, j = idx[len(idx) // 2]
    return PhasePoint(float(T1[i, j]), float(T2[i, j]))


@dataclass
class DerivativeBoundReport:
    constants: dict
    passed: bool
    details: dict


def scan_derivative_bounds(rs: RegionSpec, pp: PhaseParams,
                           grid_n: int = 256,
                           T: float | None = None) -> DerivativeBoundReport:
    """Smallest constants c with |d g1/d t2| <= c / B3 and
    |d^n g_i / d t_i^n| <= c_n / E_i (n <= 3) over the dyadic shell."""
    T = T if T is not None else max(pp.d, abs(pp.rho))
    s1 = 1.0 if rs.U1 > 0 else -1.0
    s2 = 1.0 if rs.U2 > 0 else -1.0
    t1 = s1 * np.linspace(abs(rs.U1), 2.0 * abs(rs.U1), grid_n)
    t2 = s2 * np.linspace(abs(rs.U2), 2.0 * abs(rs.U2), grid_n)
    T1, T2 = np.meshgrid(t1, t2, indexing="ij")
    rho = pp.rho
    shell = (np.abs(T1 + 2 * rho) >= rs.B1) \
        & (np.abs(T1 + 2 * rho) < 2 * rs.B1) \
        & (np.abs(T2 - 2 * rho) >= rs.B2) \
        & (np.abs(T2 - 2 * rho) < 2 * rs.B2) \
        & (np.abs(T1 + T2) >= rs.B3) \
        & (np.abs(T1 + T2) < 2 * rs.B3)
    if not np.any(shell):
        return DerivativeBoundReport({}, True, dict(empty=True))
    consts = {}
    cross = np.abs(-1.0 / (T1 + T2))[shell]
    consts["g1_t2"] = float(np.max(cross) * rs.B3)
    h2 = (pp.d / 2.0) ** 2
    for n in (1, 2, 3):
        fac = math.factorial(n - 1)
        z1 = (T1 - rho) + 1j * (pp.d / 2.0)
        d1 = fac * np.abs((T1 + 2 * rho) ** -float(n) - (T1 + T2) ** -float(n)
                          - 2.0 * T1 ** -float(n)
                          + 2.0 * np.real(z1 ** -float(n)))
        z2 = (T2 + rho) + 1j * (pp.d / 2.0)
        d2 = fac * np.abs((T2 - 2 * rho) ** -float(n) - (T1 + T2) ** -float(n)
                          - 2.0 * T2 ** -float(n)
                          + 2.0 * np.real(z2 ** -float(n)))
        consts[f"g1_n{n}"] = float(np.max(d1[shell]) * rs.E1() ** 1)
        consts[f"g2_n{n}"] = float(np.max(d2[shell]) * rs.E2() ** 1)
    passed = consts["g1_t2"] <= 2.0 + 1e-12
    return DerivativeBoundReport(consts, passed, dict(empty=False))


@dataclass
class ConsistencyReport:
    passed: bool
    vacuous: bool
    ratios: dict


def consistency_check(rs: RegionSpec, pp: PhaseParams, grid_n: int = 512,
                      T: float | None = None,
                      factor: float = 20.0) -> ConsistencyReport:
    """At a sampled admissible point, the two comparability relations

        B1 (T+|U1|)^2 / (B3 |U1|^2 ups1) ~ 1 ~ B2 (T+|U2|)^2 / (B3 |U2|^2 ups2)

    and the spectral-consistency relation

        (T^2 + U2^2) B1^2 / ((T^2 + U1^2) B2^2) ~ 1

    hold within the stated factor; an empty sampled region passes
    vacuously."""
    T = T if T is not None else max(pp.d, abs(pp.rho))
    pt = region_sample(rs, pp, grid_n, T)
    if pt is None:
        return ConsistencyReport(True, True, {})
    r1 = rs.B1 * (T + abs(rs.U1)) ** 2 / (rs.B3 * rs.U1 ** 2 * pp.ups1)
    r2 = rs.B2 * (T + abs(rs.U2)) ** 2 / (rs.B3 * rs.U2 ** 2 * pp.ups2)
    r3 = (T * T + rs.U2 ** 2) * rs.B1 ** 2 \
        / ((T * T + rs.U1 ** 2) * rs.B2 ** 2)
    ratios = dict(first=r1, second=r2, spectral=r3)
    ok = all(1.0 / factor <= v <= factor for v in ratios.values())
    return ConsistencyReport(ok, False, ratios)


def sublemma_bounds(rs: RegionSpec, pp: PhaseParams, grid_n: int = 512,
                    T: float | None = None) -> dict:
    """The applicable measure bounds for the admissible region on this
    shell: always the two unconditionally valid ones,

        (1b)  T^eps min(B1, |U1|) B3 / sqrt(E1)
        (2b)  T^eps min(B2, |U2|) B3 / sqrt(E2),

    plus the inf-derivative bounds (1a)/(2a) whenever the corresponding
    infimum clears its floor, and the unbalanced-regime bounds when one
    scale dominates.  The T^eps factor is the spec's threshold surrogate."""
    T = T if T is not None else max(pp.d, abs(pp.rho))
    te = rs.threshold_eps
    out = {
        "1b": te * min(rs.B1, abs(rs.U1)) * rs.B3 / math.sqrt(rs.E1()),
        "2b": te * min(rs.B2, abs(rs.U2)) * rs.B3 / math.sqrt(rs.E2()),
    }
    mask, cell, (T1, T2) = _region_mask(rs, pp, grid_n, T)
    if np.any(mask):
        rho = pp.rho
        h2 = (pp.d / 2.0) ** 2
        t1m = T1[mask]
        t2m = T2[mask]
        d1 = np.abs(1.0 / (t1m + 2 * rho) - 1.0 / (t1m + t2m)
                    - 2.0 / t1m + 2.0 * (t1m - rho) / (h2 + (t1m - rho) ** 2))
        d2 = np.abs(1.0 / (t2m - 2 * rho) - 1.0 / (t1m + t2m)
                    - 2.0 / t2m + 2.0 * (t2m + rho) / (h2 + (t2m + rho) ** 2))
        H1 = float(np.min(d1))
        H2 = float(np.min(d2))
        if H2 >= te / rs.E2() ** 1.25:
            out["1a"] = te * min(rs.B1, abs(rs.U1)) / (math.sqrt(rs.E2()) * H2)
        if H1 >= te / rs.E1() ** 1.25:
            out["2a"] = te * min(rs.B2, abs(rs.U2)) / (math.sqrt(rs.E1()) * H1)
    if abs(rs.U1) >= 8.0 * (T + abs(rs.U2)):
        out["modif1"] = abs(rs.U2) ** -0.5 * rs.B2 * abs(rs.U1) * te
    if abs(rs.U2) >= 8.0 * (T + abs(rs.U1)):
        out["modif2"] = abs(rs.U1) ** -0.5 * rs.B1 * abs(rs.U2) * te
    return out


# ---------------------------------------------------------------------------
# the documented case exponents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CaseExponents:
    """Read-only record of the case-analysis exponents and their
    constraint set (documentation only; no proof steps are executed)."""

    b: float
    u1: float
    u2: float
    c: float
    d: float

    def constraints_hold(self) -> bool:
        # the binding constraints; the nominal smallness range is taken as
        # < 1/4 because the equalizing choice itself pushes u2 slightly
        # past 1/5
        return (all(0 < v < 0.25 for v in
                    (self.u1, self.u2, self.b, self.c, self.d))
                and self.u1 > self.b
                and self.u2 > self.u1 + 12.0 * self.b + self.d
                and self.c > 6.0 * self.b
                and self.d > 8.0 * self.b)

    @staticmethod
    def standard(b: float = 2.0 / 595.0) -> "CaseExponents":
        """The equalizing choice d = 9b, u1 = 3/34 - 5b/2,
        u2 = 13/68 + 59b/4, c = 3/34 + 27b/2 (valid for b < 3/119)."""
        if not 0 < b < 3.0 / 119.0:
            raise ValueError("b must lie in (0, 3/119)")
        return CaseExponents(b=b,
                             u1=3.0 / 34.0 - 2.5 * b,
                             u2=13.0 / 68.0 + 14.75 * b,
                             c=3.0 / 34.0 + 13.5 * b,
                             d=9.0 * b)


CASE_EXPONENTS = CaseExponents.standard()
