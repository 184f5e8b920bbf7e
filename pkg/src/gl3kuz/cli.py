"""Command-line front end: parameterized evaluation, sweep tables, the
verification suites, configuration, and an append-only result cache.

Output is one JSON record per result on stdout (CSV with --csv); every
float is printed with 17 significant digits so records round-trip
exactly.  Exit codes: 0 success, 1 failed verification, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .quadrature import QuadratureSettings, BumpSpec, bump_mellin_fourier
from .special_functions import (SpectralPoint, bessel_j,
                                bessel_j_derivative, beta_fn, log_gamma,
                                q_ratio, spec_density)
from . import kloosterman as kl
from . import lfunction as lf
from .kernels import KernelSettings, k_w4, k_w6, whittaker_w, g_epsilon
from . import transforms as tr
from . import assembly as asm
from . import phase as ph

DEFAULT_CONFIG_NAME = "gl3kuz.toml"
CACHE_ENV = "GL3KUZ_CACHE"

_CONFIG_KEYS = {
    "abs_tol": float,
    "rel_tol": float,
    "width": float,
    "cap45": int,
    "cap6": int,
    "cache_path": str,
    "parallelism": int,
    "abscissa_w4": float,
    "abscissa_w6": float,
    "table_node_budget": float,
}

_DEFAULTS = {
    "abs_tol": 1e-10,
    "rel_tol": 1e-8,
    "width": 4.0,
    "cap45": 400,
    "cap6": 6,
    "cache_path": "",
    "parallelism": 1,
    "abscissa_w4": 0.1,
    "abscissa_w6": 0.25,
    "table_node_budget": 5e8,
}


class UsageError(Exception):
    pass


def load_config(path: str | None) -> dict:
    """Flat key = value config (TOML-style scalars); unknown keys are
    rejected."""
    cfg = dict(_DEFAULTS)
    file = path or (DEFAULT_CONFIG_NAME
                    if os.path.exists(DEFAULT_CONFIG_NAME) else None)
    if file is None:
        return cfg
    with open(file) as fh:
        for ln, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{file}:{ln}: expected key = value")
            key, _, raw = line.partition("=")
            key = key.strip()
            raw = raw.strip().strip('"').strip("'")
            if key not in _CONFIG_KEYS:
                raise UsageError(f"{file}:{ln}: unknown config key {key!r}")
            cfg[key] = _CONFIG_KEYS[key](raw)
    return cfg


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _canon(obj):
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, dict):
        return {k: _canon(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [_canon(v) for v in obj]
    return obj


@dataclass
class ResultRecord:
    command: str
    params: dict
    value_re: float
    value_im: float
    err_est: float
    nodes: int
    wall_time: float
    version: str
    config_hash: str

    def to_json(self) -> str:
        return json.dumps({
            "command": self.command,
            "params": _canon(self.params),
            "value": {"re": _fmt(self.value_re), "im": _fmt(self.value_im)},
            "err_est": _fmt(self.err_est),
            "nodes": self.nodes,
            "wall_time": _fmt(self.wall_time),
            "version": self.version,
            "config_hash": self.config_hash,
        })

    @staticmethod
    def from_json(line: str) -> "ResultRecord":
        d = json.loads(line)
        return ResultRecord(d["command"], d["params"],
                            float(d["value"]["re"]), float(d["value"]["im"]),
                            float(d["err_est"]), int(d["nodes"]),
                            float(d["wall_time"]), d["version"],
                            d["config_hash"])


class ResultCache:
    """Append-only JSON-lines cache keyed by a hash of the operation name,
    canonicalized parameters and tolerance tier; corrupt lines are skipped
    with a warning."""

    def __init__(self, path: str):
        self.path = path
        self.entries: dict = {}
        if path and os.path.exists(path):
            with open(path) as fh:
                for ln, line in enumerate(fh, 1):
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        d = json.loads(line)
                        self.entries[d["key"]] = d["record"]
                    except (json.JSONDecodeError, KeyError):
                        print(f"warning: skipping corrupt cache line {ln}",
                              file=sys.stderr)

    @staticmethod
    def key(op: str, params: dict, tol_tier: str) -> str:
        blob = json.dumps([op, _canon(params), tol_tier], sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def get(self, key: str):
        return self.entries.get(key)

    def put(self, key: str, record: dict):
        self.entries[key] = record
        if self.path:
            with open(self.path, "a") as fh:
                fh.write(json.dumps({"key": key, "record": record}) + "\n")


@dataclass
class Runtime:
    cfg: dict
    cache: ResultCache
    csv: bool
    out: object
    config_hash: str

    @property
    def settings(self) -> QuadratureSettings:
        return QuadratureSettings(abs_tol=self.cfg["abs_tol"],
                                  rel_tol=self.cfg["rel_tol"])

    def tol_tier(self) -> str:
        return f"{self.cfg['abs_tol']:.1e}/{self.cfg['rel_tol']:.1e}"

    def emit(self, rec: ResultRecord, csv_header: list | None = None):
        if self.csv:
            row = [rec.command] + [str(v) for v in rec.params.values()] + \
                [_fmt(rec.value_re), _fmt(rec.value_im), _fmt(rec.err_est)]
            print(",".join(row), file=self.out)
        else:
            print(rec.to_json(), file=self.out)


def _record(rt: Runtime, command: str, params: dict, value: complex,
            err: float, nodes: int, t0: float) -> ResultRecord:
    return ResultRecord(command, params, float(np.real(value)),
                        float(np.imag(value)), float(err), int(nodes),
                        time.time() - t0, __version__, rt.config_hash)


def _cached_run(rt: Runtime, command: str, params: dict, fn):
    key = ResultCache.key(command, params, rt.tol_tier())
    hit = rt.cache.get(key)
    if hit is not None:
        rec = ResultRecord(**hit)
        rt.emit(rec)
        return rec
    t0 = time.time()
    value, err, nodes = fn()
    rec = _record(rt, command, params, value, err, nodes, t0)
    rt.cache.put(key, rec.__dict__.copy())
    rt.emit(rec)
    return rec


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_kloosterman(rt: Runtime, args) -> int:
    if args.which == "stilde":
        params = dict(n1=args.n1, n2=args.n2, m1=args.m1,
                      d1=args.d1, d2=args.d2)
        _cached_run(rt, "kloosterman.stilde", params, lambda: (
            kl.s_tilde(args.n1, args.n2, args.m1, args.d1, args.d2), 0.0, 0))
    elif args.which == "slong":
        params = dict(n1=args.n1, m2=args.m2, m1=args.m1, n2=args.n2,
                      d1=args.d1, d2=args.d2)
        _cached_run(rt, "kloosterman.slong", params, lambda: (
            kl.s_long(args.n1, args.m2, args.m1, args.n2, args.d1, args.d2),
            0.0, 0))
    else:  # hat
        r = [int(v) for v in args.r.split(",")]
        xy = [int(v) for v in args.xy.split(",")]
        if len(r) != 4 or len(xy) != 4:
            raise UsageError("--r and --xy take four comma-separated integers")
        p = kl.HatParams(r[0], r[1], r[2], r[3], xy[0], xy[1], xy[2], xy[3],
                         args.d1, args.d2)
        params = dict(r=args.r, xy=args.xy, d1=args.d1, d2=args.d2)
        _cached_run(rt, "kloosterman.hat", params,
                    lambda: (kl.hat_s(p), 0.0, 0))
    return 0


def cmd_kernel(rt: Runtime, args) -> int:
    pt = SpectralPoint(args.d, args.rho)
    qs = rt.settings
    methods = {"mb": "mellin_barnes", "bessel": "bessel_integral",
               "auto": "auto"}
    reps = [methods[args.method]] if args.method != "both" \
        else ["mellin_barnes", "bessel_integral"]
    vals = []
    for rep in reps:
        ks = KernelSettings(quad=qs, representation=rep)
        if args.which == "w4":
            params = dict(y=args.y, d=args.d, rho=args.rho, method=rep)
            rec = _cached_run(rt, "kernel.w4", params, lambda ks=ks: (
                lambda q: (q.value, q.err_est, q.nodes_used))(
                    k_w4(args.y, pt, ks)))
        else:
            params = dict(y1=args.y1, y2=args.y2, d=args.d, rho=args.rho,
                          method=rep)
            rec = _cached_run(rt, "kernel.w6", params, lambda ks=ks: (
                lambda q: (q.value, q.err_est, q.nodes_used))(
                    k_w6(args.y1, args.y2, pt, ks)))
        vals.append(complex(rec.value_re, rec.value_im))
    if len(vals) == 2:
        delta = abs(vals[0] - vals[1])
        rel = delta / max(abs(vals[0]), 1e-300)
        print(json.dumps({"agreement": {"abs": _fmt(delta),
                                        "rel": _fmt(rel)}}), file=rt.out)
    return 0


def cmd_whittaker(rt: Runtime, args) -> int:
    pt = SpectralPoint(args.d, args.rho)
    ks = KernelSettings(quad=rt.settings)
    params = dict(m=args.m, sign=args.sign, y1=args.y1, y2=args.y2,
                  d=args.d, rho=args.rho)
    _cached_run(rt, "whittaker", params, lambda: (
        lambda q: (q.value, q.err_est, q.nodes_used))(
            whittaker_w(args.m, args.sign, args.y1, args.y2, pt, ks)))
    return 0


def cmd_phi(rt: Runtime, args) -> int:
    F = tr.TestFunctionSpec(args.rho_center, args.width or rt.cfg["width"])
    qs = rt.settings
    if args.which in ("w4", "w5"):
        fn = tr.phi_w4 if args.which == "w4" else tr.phi_w5
        params = dict(y=args.y, d=args.d, rho_center=args.rho_center,
                      width=F.width)
        _cached_run(rt, f"phi.{args.which}", params, lambda: (
            lambda q: (q.value, q.err_est, q.nodes_used))(
                fn(args.y, args.d, F, qs)))
    else:
        params = dict(y1=args.y1, y2=args.y2, d=args.d,
                      rho_center=args.rho_center, width=F.width)
        _cached_run(rt, "phi.w6", params, lambda: (
            lambda q: (q.value, q.err_est, q.nodes_used))(
                tr.phi_w6(args.y1, args.y2, args.d, F, qs)))
    return 0


def cmd_ktransform(rt: Runtime, args) -> int:
    pt = SpectralPoint(args.d, args.rho)
    qs = rt.settings
    if args.which == "ktilde":
        params = dict(xi=args.xi, u=args.u, v=args.v, d=args.d, rho=args.rho)
        _cached_run(rt, "ktransform.ktilde", params, lambda: (
            lambda q: (q.value, q.err_est, q.nodes_used))(
                tr.ktilde(args.xi, args.u, args.v, pt, st=qs)))
    else:
        params = dict(xi1=args.xi1, xi2=args.xi2, u1=args.u1, v1=args.v1,
                      u2=args.u2, v2=args.v2, d=args.d, rho=args.rho)
        _cached_run(rt, "ktransform.kfull", params, lambda: (
            lambda q: (q.value, q.err_est, q.nodes_used))(
                tr.kfull(args.xi1, args.xi2, args.u1, args.v1,
                         args.u2, args.v2, pt, st=qs)))
    return 0


def cmd_kuznetsov(rt: Runtime, args) -> int:
    pt = SpectralPoint(args.d, args.rho_center)
    F = tr.TestFunctionSpec(args.rho_center, args.width or rt.cfg["width"])
    req = asm.KuznetsovRequest(args.n1, args.n2, args.m1, args.m2, pt, F,
                               cap45=args.cap45 or rt.cfg["cap45"],
                               cap6=args.cap6 or rt.cfg["cap6"],
                               quad=rt.settings)
    t0 = time.time()
    side = asm.arithmetic_side(req)
    out = {
        "delta": {"re": _fmt(side.delta.value.real),
                  "im": _fmt(side.delta.value.imag)},
        "sigma4": {"re": _fmt(side.sigma4.total.real),
                   "im": _fmt(side.sigma4.total.imag),
                   "terms": len(side.sigma4.terms)},
        "sigma5": {"re": _fmt(side.sigma5.total.real),
                   "im": _fmt(side.sigma5.total.imag),
                   "terms": len(side.sigma5.terms)},
        "sigma6": {"re": _fmt(side.sigma6.total.real),
                   "im": _fmt(side.sigma6.total.imag),
                   "terms": len(side.sigma6.terms)},
        "total": {"re": _fmt(side.total.real), "im": _fmt(side.total.imag)},
        "err_est": _fmt(side.err_est),
        "wall_time": _fmt(time.time() - t0),
    }
    print(json.dumps(out), file=rt.out)
    return 0


def cmd_phase(rt: Runtime, args) -> int:
    pp = ph.PhaseParams(args.d, args.rho, args.ups1, args.ups2)
    ppt = ph.PhasePoint(args.t1, args.t2)
    fns = {"g": ph.phase_g, "g1": ph.phase_g1, "g2": ph.phase_g2,
           "h": ph.phase_h, "g1t1": ph.phase_g1_t1, "g2t2": ph.phase_g2_t2}
    params = dict(which=args.which, t1=args.t1, t2=args.t2, d=args.d,
                  rho=args.rho, ups1=args.ups1, ups2=args.ups2)
    _cached_run(rt, f"phase.{args.which}", params,
                lambda: (complex(fns[args.which](ppt, pp)), 0.0, 0))
    return 0


def cmd_lfunction(rt: Runtime, args) -> int:
    if args.which == "hecke":
        sp = lf.SatakeParams.from_angles(args.alpha_angle, args.beta_angle)
        params = dict(k1=args.k1, k2=args.k2, alpha_angle=args.alpha_angle,
                      beta_angle=args.beta_angle)
        _cached_run(rt, "lfunction.hecke", params, lambda: (
            lf.hecke_eigenvalue(sp, args.k1, args.k2), 0.0, 0))
    elif args.which == "conductor":
        pt = SpectralPoint(args.d, args.rho)
        params = dict(d=args.d, rho=args.rho)
        _cached_run(rt, "lfunction.conductor", params, lambda: (
            complex(lf.analytic_conductor(pt)), 0.0, 0))
    else:  # convexity
        pt = SpectralPoint(args.d, args.rho)
        rep = lf.convexity_benchmark(pt, args.eps)
        print(json.dumps({
            "literal_value": _fmt(rep.literal_value),
            "conductor_value": _fmt(rep.conductor_value),
            "convexity_exponent": _fmt(rep.convexity_exponent),
            "target_exponent": _fmt(rep.target_exponent),
        }), file=rt.out)
    return 0


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------


def _verify_kloosterman(rng, max_modulus: int, quick: bool) -> list:
    checks = []
    t0 = time.time()
    viol = 0
    n_inst = 40 if quick else 200
    dmax = min(max_modulus, 12)
    for _ in range(n_inst):
        D = int(rng.integers(1, dmax + 1))
        delta = int(rng.integers(1, dmax + 1))
        r1, s1, n2, s2 = (int(rng.integers(1, 6)) * int(rng.choice([-1, 1]))
                          for _ in range(4))
        x = int(rng.integers(0, D))
        y = int(rng.integers(0, delta))
        rep = kl.verify_lemma1(D, delta, r1, s1, n2, s2, x, y)
        viol += 0 if rep.passed else 1
    checks.append(("lemma1_random", viol == 0,
                   dict(instances=n_inst, violations=viol,
                        elapsed=round(time.time() - t0, 2))))
    t0 = time.time()
    rep2 = kl.verify_lemma2(D_max=4 if quick else 8,
                            twists=(-1, 1, 2) if quick else (-2, -1, 1, 2),
                            parts=("a", "b", "c") if quick
                            else ("a", "b", "c", "d"))
    checks.append(("lemma2_sweep", rep2.passed,
                   dict(checked=rep2.checked,
                        violations=len(rep2.violations),
                        elapsed=round(time.time() - t0, 2))))
    t0 = time.time()
    phi_ok = all(kl.hat_s(kl.HatParams(1, 1, 1, 1, 0, 0, 0, 0, D, D))
                 == kl.euler_phi(D) for D in range(1, 21))
    checks.append(("hat_phi_identity", phi_ok,
                   dict(range="D <= 20", elapsed=round(time.time() - t0, 2))))
    return checks


def _verify_hecke(rng, quick: bool) -> list:
    n = 100 if quick else 1000
    worst = 0.0
    for _ in range(n):
        t1, t2 = rng.uniform(0, 2 * math.pi, 2)
        sp = lf.SatakeParams.from_angles(t1, t2)
        lhs = lf.hecke_eigenvalue(sp, 0, 1) * lf.hecke_eigenvalue(sp, 0, 2)
        rhs = lf.hecke_eigenvalue(sp, 0, 3) \
            + lf.hecke_eigenvalue(sp, 0, 1) * lf.hecke_eigenvalue(sp, 1, 0) \
            - 1.0
        worst = max(worst, abs(lhs - rhs))
    ok1 = worst <= 1e-10
    worst_m = 0.0
    for _ in range(20 if quick else 100):
        sp = lf.SatakeParams.from_angles(*rng.uniform(0, 2 * math.pi, 2))
        nn = int(rng.integers(1, 500))
        mm = int(rng.integers(1, 500))
        worst_m = max(worst_m,
                      lf.hecke_multiplicativity_check(sp, nn, mm).residual)
    return [("hecke_relation", ok1, dict(samples=n, worst=worst)),
            ("hecke_multiplicativity", worst_m <= 1e-10,
             dict(worst=worst_m))]


def _verify_special(quick: bool) -> list:
    from scipy.special import jv
    checks = []
    ok = True
    worst = 0.0
    for d in range(1, 61, 2 if quick else 1):
        y = np.linspace(0.05, 200, 100 if quick else 400)
        bound = np.minimum((2 * y / d) ** d, 1.0) + 1e-12
        bad = np.abs(bessel_j(d, y)) > bound
        ok &= not np.any(bad)
    checks.append(("jbound_grid", ok, dict()))
    worst = 0.0
    for d in range(2, 41, 4 if quick else 1):
        y = np.linspace(0.5, 50, 25)
        h = 1e-5
        fd = (bessel_j(d, y + h) - bessel_j(d, y - h)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(
            bessel_j_derivative(d, y) - fd))))
    checks.append(("jder_fd", worst <= 1e-6, dict(worst=worst)))
    worst = max(abs(q_ratio(d, 0.5) - 1.0) for d in range(2, 201))
    checks.append(("q_ratio_half", worst <= 1e-13, dict(worst=worst)))
    return checks


def _verify_phase(rng, quick: bool) -> list:
    pp = ph.PhaseParams(50, 50.0, 2.0, 3.0)
    n = 100 if quick else 1000
    worst_fd = 0.0
    worst_cubic = 0.0
    count = 0
    while count < n:
        t1 = float(rng.uniform(20, 200) * rng.choice([-1, 1]))
        t2 = float(rng.uniform(20, 200) * rng.choice([-1, 1]))
        try:
            ppt = ph.PhasePoint(t1, t2)
            ppt.check(pp, tol=1.0)
        except ValueError:
            continue
        count += 1
        h = 1e-5 * max(abs(t1), 1.0)
        fd = (ph.phase_g(ph.PhasePoint(t1 + h, t2), pp)
              - ph.phase_g(ph.PhasePoint(t1 - h, t2), pp)) / (2 * h)
        worst_fd = max(worst_fd, abs(fd - ph.phase_g1(ppt, pp))
                       / max(abs(fd), 1e-9))
        lhs = math.exp(ph.phase_g1(ppt, pp))
        rhs = abs((t1 ** 3 - pp.C1 * t1 - pp.C2)
                  / ((t1 + t2) * t1 * t1 * pp.ups1))
        worst_cubic = max(worst_cubic, abs(lhs - rhs) / max(rhs, 1e-12))
    return [("phase_fd", worst_fd <= 1e-6, dict(worst=worst_fd, n=count)),
            ("phase_cubic", worst_cubic <= 1e-10, dict(worst=worst_cubic))]


def _verify_kernels(quick: bool, qs: QuadratureSettings) -> list:
    mb = KernelSettings(quad=qs, representation="mellin_barnes")
    bs = KernelSettings(quad=qs, representation="bessel_integral")
    pt = SpectralPoint(6, 0.3)
    a = k_w4(5.0, pt, mb)
    b = k_w4(5.0, pt, bs)
    rel4 = abs(a.value - b.value) / max(abs(a.value), 1e-300)
    pt6 = SpectralPoint(5, 0.2)
    a6 = k_w6(-3.0, 4.0, pt6, mb)
    b6 = k_w6(-3.0, 4.0, pt6, bs)
    rel6 = abs(a6.value - b6.value) / max(abs(a6.value), 1e-300)
    return [("kernel_w4_dual", rel4 <= 1e-6 or
             abs(a.value - b.value) <= a.err_est + b.err_est,
             dict(rel=rel4)),
            ("kernel_w6_dual", rel6 <= 1e-6 or
             abs(a6.value - b6.value) <= a6.err_est + b6.err_est,
             dict(rel=rel6))]


def _verify_cancellation(rng, quick: bool) -> list:
    pt = SpectralPoint(9, 1.7)
    worst = 0.0
    for _ in range(20 if quick else 100):
        s = complex(rng.uniform(-0.4, 0.4), rng.uniform(-30, 30))
        tot = sum(g_epsilon(sp, s, -s, pt)
                  for sp in ((1, 1), (1, -1), (-1, 1), (-1, -1)))
        scale = max(abs(g_epsilon((1, -1), s, -s, pt)), 1.0)
        worst = max(worst, abs(tot) / scale)
    return [("g_epsilon_cancellation", worst <= 1e-12, dict(worst=worst))]


def verify_all(rt: Runtime, suites=("kloosterman", "hecke", "special",
                                    "phase", "kernels", "cancellation"),
               quick: bool = False, seed: int = 1234,
               max_modulus: int = 12) -> tuple:
    rng = np.random.default_rng(seed)
    all_checks = []
    for suite in suites:
        if suite == "kloosterman":
            all_checks += _verify_kloosterman(rng, max_modulus, quick)
        elif suite == "hecke":
            all_checks += _verify_hecke(rng, quick)
        elif suite == "special":
            all_checks += _verify_special(quick)
        elif suite == "phase":
            all_checks += _verify_phase(rng, quick)
        elif suite == "kernels":
            all_checks += _verify_kernels(quick, rt.settings)
        elif suite == "cancellation":
            all_checks += _verify_cancellation(rng, quick)
        else:
            raise UsageError(f"unknown verify suite {suite!r}")
    passed = all(ok for (_, ok, _) in all_checks)
    return passed, all_checks


def cmd_verify(rt: Runtime, args) -> int:
    suites = (args.suite,) if args.suite != "all" else (
        "kloosterman", "hecke", "special", "phase", "kernels",
        "cancellation")
    passed, checks = verify_all(rt, suites, quick=args.quick,
                                seed=args.seed,
                                max_modulus=args.max_modulus)
    report = {
        "passed": bool(passed),
        "seed": args.seed,
        "checks": [{"name": name, "passed": bool(ok),
                    "details": _canon(det)} for (name, ok, det) in checks],
    }
    print(json.dumps(report), file=rt.out)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# sweep tables
# ---------------------------------------------------------------------------

_TABLE_OPS = {
    "spec_density": (("d", "rho"), 1.0),
    "phi_w4": (("y", "d", "rho_center", "width"), 2e4),
    "phi_w6": (("y1", "y2", "d", "rho_center", "width"), 3e4),
    "k_w4": (("y", "d", "rho"), 2e4),
    "k_w6": (("y1", "y2", "d", "rho"), 2e6),
    "ktilde": (("xi", "u", "v", "d", "rho"), 3e4),
    "bump_mf": (("s_im", "u"), 2e3),
}


def _parse_sweep(spec: str):
    # name=lo:hi:n[:log]
    name, _, rng = spec.partition("=")
    if not rng:
        raise UsageError(f"bad sweep spec {spec!r} (want name=lo:hi:n[:log])")
    parts = rng.split(":")
    if len(parts) not in (3, 4):
        raise UsageError(f"bad sweep spec {spec!r}")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    logspace = len(parts) == 4 and parts[3] == "log"
    if n < 0:
        raise UsageError("sweep count must be >= 0")
    if logspace:
        if lo <= 0 or hi <= 0:
            raise UsageError("log sweep needs positive endpoints")
        vals = np.geomspace(lo, hi, n) if n else np.array([])
    else:
        vals = np.linspace(lo, hi, n) if n else np.array([])
    return name.strip(), vals


def _table_eval(op: str, params: dict, qs: QuadratureSettings):
    if op == "spec_density":
        return complex(spec_density(int(params["d"]), params["rho"])), 0.0, 0
    if op == "phi_w4":
        F = tr.TestFunctionSpec(params["rho_center"], params["width"])
        q = tr.phi_w4(params["y"], int(params["d"]), F, qs)
        return q.value, q.err_est, q.nodes_used
    if op == "phi_w6":
        F = tr.TestFunctionSpec(params["rho_center"], params["width"])
        q = tr.phi_w6(params["y1"], params["y2"], int(params["d"]), F, qs)
        return q.value, q.err_est, q.nodes_used
    if op == "k_w4":
        pt = SpectralPoint(int(params["d"]), params["rho"])
        q = k_w4(params["y"], pt, KernelSettings(quad=qs))
        return q.value, q.err_est, q.nodes_used
    if op == "k_w6":
        pt = SpectralPoint(int(params["d"]), params["rho"])
        q = k_w6(params["y1"], params["y2"], pt, KernelSettings(quad=qs))
        return q.value, q.err_est, q.nodes_used
    if op == "ktilde":
        pt = SpectralPoint(int(params["d"]), params["rho"])
        q = tr.ktilde(params["xi"], params["u"], params["v"], pt, st=qs)
        return q.value, q.err_est, q.nodes_used
    if op == "bump_mf":
        q = bump_mellin_fourier(complex(1.0, params["s_im"]), params["u"])
        return q.value, q.err_est, q.nodes_used
    raise UsageError(f"unknown table op {op!r}")


def cmd_table(rt: Runtime, args) -> int:
    if args.op not in _TABLE_OPS:
        raise UsageError(f"unknown table op {args.op!r}; "
                         f"choose from {sorted(_TABLE_OPS)}")
    param_names, cost_per_row = _TABLE_OPS[args.op]
    fixed = {}
    for kv in args.set or []:
        k, _, v = kv.partition("=")
        if k not in param_names:
            raise UsageError(f"unknown parameter {k!r} for op {args.op!r}")
        fixed[k] = float(v)
    sweeps = [_parse_sweep(s) for s in args.sweep or []]
    if len(sweeps) > 2:
        raise UsageError("at most two sweep axes")
    for name, _ in sweeps:
        if name not in param_names:
            raise UsageError(f"unknown sweep parameter {name!r}")
    rows = [dict(fixed)]
    for name, vals in sweeps:
        rows = [dict(r, **{name: float(v)}) for r in rows for v in vals]
    if sweeps and any(len(v) == 0 for _, v in sweeps):
        rows = []
    est = cost_per_row * max(len(rows), 0)
    if est > rt.cfg["table_node_budget"]:
        raise UsageError(
            f"estimated node budget {est:.2e} exceeds limit "
            f"{rt.cfg['table_node_budget']:.2e}; narrow the sweep")
    missing = [p for p in param_names
               if p not in rows[0]] if rows else []
    if rows and missing:
        raise UsageError(f"missing parameters for {args.op!r}: {missing}")
    header = list(param_names) + ["re", "im", "err_est"]
    print(",".join(header), file=rt.out)
    qs = rt.settings

    def run_row(row):
        v, e, n = _table_eval(args.op, row, qs)
        return row, v, e

    par = max(1, int(rt.cfg["parallelism"]))
    if par > 1 and len(rows) > 1:
        with ThreadPoolExecutor(max_workers=par) as ex:
            results = list(ex.map(run_row, rows))
    else:
        results = [run_row(r) for r in rows]
    for row, v, e in results:
        cells = [_fmt(row[p]) for p in param_names]
        cells += [_fmt(np.real(v)), _fmt(np.imag(v)), _fmt(e)]
        print(",".join(cells), file=rt.out)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gl3kuz",
                                description=__doc__.splitlines()[0])
    p.add_argument("--config", help="config file (flat key = value)")
    p.add_argument("--out", help="write records to this file")
    p.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--no-cache", action="store_true",
                   help="disable the result cache")
    sub = p.add_subparsers(dest="cmd", required=True)

    pk = sub.add_parser("kloosterman")
    ks = pk.add_subparsers(dest="which", required=True)
    st = ks.add_parser("stilde")
    for f in ("n1", "n2", "m1", "d1", "d2"):
        st.add_argument(f"--{f}", type=int, required=True)
    sl = ks.add_parser("slong")
    for f in ("n1", "m2", "m1", "n2", "d1", "d2"):
        sl.add_argument(f"--{f}", type=int, required=True)
    ha = ks.add_parser("hat")
    ha.add_argument("--r", required=True, help="r1,s1,r2,s2")
    ha.add_argument("--xy", required=True, help="x1,y1,x2,y2")
    ha.add_argument("--d1", type=int, required=True)
    ha.add_argument("--d2", type=int, required=True)

    pe = sub.add_parser("kernel")
    ke = pe.add_subparsers(dest="which", required=True)
    w4 = ke.add_parser("w4")
    w4.add_argument("--y", type=float, required=True)
    w6 = ke.add_parser("w6")
    w6.add_argument("--y1", type=float, required=True)
    w6.add_argument("--y2", type=float, required=True)
    for sp_ in (w4, w6):
        sp_.add_argument("--d", type=int, required=True)
        sp_.add_argument("--rho", type=float, required=True)
        sp_.add_argument("--method", choices=("mb", "bessel", "auto", "both"),
                         default="auto")

    pw = sub.add_parser("whittaker")
    pw.add_argument("--m", type=int, required=True)
    pw.add_argument("--sign", type=int, default=1, choices=(-1, 1))
    pw.add_argument("--y1", type=float, required=True)
    pw.add_argument("--y2", type=float, required=True)
    pw.add_argument("--d", type=int, required=True)
    pw.add_argument("--rho", type=float, required=True)

    pp_ = sub.add_parser("phi")
    fs = pp_.add_subparsers(dest="which", required=True)
    f4 = fs.add_parser("w4")
    f5 = fs.add_parser("w5")
    for sp_ in (f4, f5):
        sp_.add_argument("--y", type=float, required=True)
    f6 = fs.add_parser("w6")
    f6.add_argument("--y1", type=float, required=True)
    f6.add_argument("--y2", type=float, required=True)
    for sp_ in (f4, f5, f6):
        sp_.add_argument("--d", type=int, required=True)
        sp_.add_argument("--rho-center", type=float, required=True,
                         dest="rho_center")
        sp_.add_argument("--width", type=float)

    pt_ = sub.add_parser("ktransform")
    kt = pt_.add_subparsers(dest="which", required=True)
    k1 = kt.add_parser("ktilde")
    k1.add_argument("--xi", type=float, required=True)
    k1.add_argument("--u", type=float, required=True)
    k1.add_argument("--v", type=float, required=True)
    k2 = kt.add_parser("kfull")
    for f in ("xi1", "xi2", "u1", "v1", "u2", "v2"):
        k2.add_argument(f"--{f}", type=float, required=True)
    for sp_ in (k1, k2):
        sp_.add_argument("--d", type=int, required=True)
        sp_.add_argument("--rho", type=float, required=True)

    pz = sub.add_parser("kuznetsov")
    for f in ("n1", "n2", "m1", "m2"):
        pz.add_argument(f"--{f}", type=int, required=True)
    pz.add_argument("--d", type=int, required=True)
    pz.add_argument("--rho-center", type=float, required=True,
                    dest="rho_center")
    pz.add_argument("--width", type=float)
    pz.add_argument("--cap45", type=int)
    pz.add_argument("--cap6", type=int)

    pf = sub.add_parser("phase")
    pf.add_argument("which", choices=("g", "g1", "g2", "h", "g1t1", "g2t2"))
    for f in ("t1", "t2", "rho", "ups1", "ups2"):
        pf.add_argument(f"--{f}", type=float, required=True)
    pf.add_argument("--d", type=int, required=True)

    pl = sub.add_parser("lfunction")
    lfs = pl.add_subparsers(dest="which", required=True)
    lh = lfs.add_parser("hecke")
    lh.add_argument("--k1", type=int, required=True)
    lh.add_argument("--k2", type=int, required=True)
    lh.add_argument("--alpha-angle", type=float, required=True,
                    dest="alpha_angle")
    lh.add_argument("--beta-angle", type=float, required=True,
                    dest="beta_angle")
    lc = lfs.add_parser("conductor")
    lv = lfs.add_parser("convexity")
    for sp_ in (lc, lv):
        sp_.add_argument("--d", type=int, required=True)
        sp_.add_argument("--rho", type=float, required=True)
    lv.add_argument("--eps", type=float, default=0.0)

    pv = sub.add_parser("verify")
    pv.add_argument("suite", nargs="?", default="all",
                    choices=("all", "kloosterman", "hecke", "special",
                             "phase", "kernels", "cancellation"))
    pv.add_argument("--quick", action="store_true")
    pv.add_argument("--seed", type=int, default=1234)
    pv.add_argument("--max-modulus", type=int, default=12,
                    dest="max_modulus")

    pt2 = sub.add_parser("table")
    pt2.add_argument("--op", required=True)
    pt2.add_argument("--sweep", action="append",
                     help="name=lo:hi:n[:log], up to twice")
    pt2.add_argument("--set", action="append",
                     help="fixed parameter name=value")
    return p


_DISPATCH = {
    "kloosterman": cmd_kloosterman,
    "kernel": cmd_kernel,
    "whittaker": cmd_whittaker,
    "phi": cmd_phi,
    "ktransform": cmd_ktransform,
    "kuznetsov": cmd_kuznetsov,
    "phase": cmd_phase,
    "lfunction": cmd_lfunction,
    "verify": cmd_verify,
    "table": cmd_table,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = load_config(args.config)
        cfg_blob = json.dumps(_canon(cfg), sort_keys=True)
        config_hash = hashlib.sha256(cfg_blob.encode()).hexdigest()[:16]
        cache_path = os.environ.get(CACHE_ENV, cfg["cache_path"])
        cache = ResultCache("" if args.no_cache else cache_path)
        out = open(args.out, "w") if args.out else sys.stdout
        rt = Runtime(cfg, cache, args.csv, out, config_hash)
        try:
            return _DISPATCH[args.cmd](rt, args)
        finally:
            if args.out:
                out.close()
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
