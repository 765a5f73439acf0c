"""The twelve acceptance checks, each returning a :class:`CriterionResult`.

``python -m bergman_lab verify`` runs them all; ``tests/test_acceptance.py``
runs them one per test.  Tolerances are fixed here and are not tunable.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import dblquad

from .balanced import balanced_system
from .catalog import builtin, nested_pairs, shared_points
from .constructions import (ZalcmanParams, build_metric_bounded_schedule, build_zalcman_radii,
                            polar_grid, recertify, refine_zalcman_schedule)
from .domains import (Annulus, DiscMinusDiscs, Disc, Hole, PNormBall, Polydisc, SpikyBalanced,
                      UnitDisc)
from .hartogs import brute_force_kernel, hartogs_system
from .integration import fiber_weight
from .kernel import annulus_kernel, converged_kernel, disc_kernel, planar_system
from .metric import bergman_distance, bergman_metric_at, path_length, default_system
from .probes import (completeness_probe, cone_exponent, exhaustion_probe, localization_ratio,
                     monotonicity_check, outer_cone_check, radial_monotone_check)

__all__ = ["CriterionResult", "CRITERIA", "run_all"]


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    measured: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        vals = ", ".join(f"{k}={_short(v)}" for k, v in self.measured.items())
        return f"[{status}] criterion {self.number}: {self.title} ({vals}; {self.seconds:.1f} s)"


def _short(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    return str(v)


def _timed(fn):
    def run():
        t0 = time.perf_counter()
        res = fn()
        res.seconds = time.perf_counter() - t0
        if "limit_s" in res.measured:
            res.passed = res.passed and res.seconds < res.measured["limit_s"]
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def disc_kernel_oracle():
    """Degree-60 disc kernel on a grid of ``|z| <= 0.7`` against the closed form."""
    x = np.linspace(-0.7, 0.7, 29)
    z = (x[:, None] + 1j * x[None, :]).ravel()
    z = z[np.abs(z) <= 0.7]
    K = planar_system(UnitDisc(), 60).kernel(z)
    err = float(np.max(np.abs(K / disc_kernel(z) - 1)))
    return CriterionResult(1, "disc kernel oracle", err <= 1e-6,
                           {"max_rel_err": err, "points": len(z), "limit_s": 5.0})


@_timed
def annulus_kernel_oracle():
    """Engine kernel on Annulus(0.5) against the Laurent series at 20 points."""
    r = np.linspace(0.55, 0.9, 20)
    z = r * np.exp(2j * np.pi * np.arange(20) / 20 * 3)
    K, degree, _ = converged_kernel(Annulus(0.5), z)
    ref = np.array([annulus_kernel(p, 0.5)[0] for p in z])
    err = float(np.max(np.abs(K / ref - 1)))
    return CriterionResult(2, "annulus kernel oracle", err <= 1e-6,
                           {"max_rel_err": err, "degree": degree, "limit_s": 5.0})


@_timed
def monotonicity_suite():
    """``K_outer <= K_inner (1 + 1e-8)`` on 50 nested pairs."""
    bad, worst = [], 0.0
    pairs = nested_pairs()
    for label, inner, outer in pairs:
        rep = monotonicity_check(inner, outer, shared_points(inner), slack=1e-8)
        worst = max(worst, max(r["ratio"] for r in rep.table))
        if rep.verdict != "holds":
            bad.append(label)
    return CriterionResult(3, "monotonicity suite", len(pairs) == 50 and not bad,
                           {"pairs": len(pairs), "violations": len(bad),
                            "max_outer_over_inner": worst})


@_timed
def deleted_disc_stability():
    """``sup_B |K - K_E|`` for one hole at 0.5 with radius 1e-1, 1e-2, 1e-3."""
    grid = polar_grid(Disc(-0.3, 0.3), 64)
    sups = []
    for r in (1e-1, 1e-2, 1e-3):
        K, _, _ = converged_kernel(DiscMinusDiscs((Hole(0.5, r),)), grid)
        sups.append(float(np.max(np.abs(K - disc_kernel(grid)))))
    ok = sups[0] > sups[1] > sups[2] and sups[2] < 1e-2
    return CriterionResult(4, "deleted-disc stability", ok, {"sup_diff": sups})


@_timed
def triangle_exhaustion():
    """Triangle kernel along ``(t, t/2)`` and outer-cone witnesses at the origin."""
    tri = builtin("hartogs-triangle")
    t = np.array([0.2, 0.1, 0.05, 0.02])
    rep = exhaustion_probe(tri, [0, 0], scales=t * math.hypot(1, 0.5), direction=[1, 0.5])
    vals = [r["kernel"] for r in rep.table]
    eps = cone_exponent(1.0)
    cone = outer_cone_check(tri, [0, 0], 0.5, eps, [[0, w] for w in (0.3, 0.1, 0.03)])
    growth = vals[-1] / vals[0]
    ok = growth >= 10 and all(b > a for a, b in zip(vals, vals[1:])) and cone.verdict == "witness"
    return CriterionResult(5, "Hartogs triangle exhaustion", ok,
                           {"growth": growth, "eps": eps, "cone": cone.verdict, "limit_s": 60.0})


def _rays(spec, n=20, seed=7):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * (0.95 / spec.minkowski(v))[:, None]


@_timed
def radial_monotonicity():
    """``t -> K(t z)`` nondecreasing on 20 rays in three balanced domains."""
    t = np.linspace(0, 1, 11)
    worst = {}
    ok = True
    for name, spec in (("ball", PNormBall(2.0, 2)), ("polydisc", Polydisc(2)),
                       ("spiky", SpikyBalanced())):
        drop = 0.0
        for p in _rays(spec):
            rep = radial_monotone_check(spec, p, t, rtol=1e-6)
            v = np.array([r["kernel"] for r in rep.table])
            drop = max(drop, float(np.max(1 - v[1:] / v[:-1])))
            ok &= rep.verdict == "holds"
        worst[name] = drop
    return CriterionResult(6, "radial monotonicity", ok,
                           {f"max_rel_drop_{k}": v for k, v in worst.items()})


@lru_cache(maxsize=1)
def _disc_distance():
    return bergman_distance(UnitDisc(), 0, 0.5)


@_timed
def metric_closed_form():
    """``beta_E(0; 1) = sqrt 2`` and the distance bound for ``b_E(0, 0.5)``."""
    beta = bergman_metric_at(planar_system(UnitDisc(), 60), 0.0, 1.0).value
    res = _disc_distance()
    exact = math.sqrt(2) * math.atanh(0.5)
    bounds = [t[2] for t in res.trace]
    ok = abs(beta - math.sqrt(2)) <= 1e-6 and abs(res.bound - exact) <= 1e-3 \
        and all(b <= a for a, b in zip(bounds, bounds[1:]))
    return CriterionResult(7, "metric closed form", ok,
                           {"beta0": beta, "bound": res.bound, "exact": exact,
                            "trace": bounds})


@_timed
def caratheodory_below_bergman():
    """``atanh t <= b_E(0, t)`` upper bound for t = 0.1..0.9."""
    gaps = []
    for t in np.arange(1, 10) / 10:
        b = bergman_distance(UnitDisc(), 0, t, levels=(64, 256)).bound
        gaps.append(b - math.atanh(t))
    return CriterionResult(8, "inner Caratheodory below Bergman", min(gaps) >= 0,
                           {"min_gap": min(gaps)})


@lru_cache(maxsize=1)
def _kernel_schedules():
    params = ZalcmanParams()
    radii_schedule = build_zalcman_radii(params)
    refined = refine_zalcman_schedule(radii_schedule, stages=8)
    return radii_schedule, refined


@lru_cache(maxsize=1)
def _metric_schedule():
    _, refined = _kernel_schedules()
    return build_metric_bounded_schedule(refined, stages=4)


@_timed
def zalcman_kernel_construction():
    """Five kernel stages below threshold, re-certified, and bounded exhaustion at 0."""
    radii_schedule, refined = _kernel_schedules()
    T, M = radii_schedule.params.threshold, radii_schedule.params.bound
    certs = [c["sup"] for c in radii_schedule.certificates]
    recert = [c["sup"] for c in recertify(radii_schedule)]
    rep = exhaustion_probe(refined.domain(), 0, direction=-1, start=0.2, steps=8, bound=M)
    ok = (len(certs) == 5 and max(certs) < T and max(recert) < M
          and max(c["sup"] for c in refined.certificates) < T
          and rep.verdict == "bounded-with-margin")
    return CriterionResult(9, "Zalcman kernel construction", ok,
                           {"certificates": certs, "recertified_max": max(recert),
                            "exhaustion": rep.verdict,
                            "max_kernel_on_approach": max(r["kernel"] for r in rep.table)})


@_timed
def metric_bounded_construction():
    """Four metric stages; segment length toward 0 within ``M1 * length``; disc contrast."""
    sched = _metric_schedule()
    M1 = sched.metric_bound
    G = sched.domain()
    c = complex(sched.params.reference_disc.center)
    end = -1e-3
    L = path_length(default_system(G, [c]), [c, end], order=16, subdivisions=64)
    allowed = M1 * abs(end - c) + 1e-3
    disc = completeness_probe(UnitDisc(), 0, 1 - 0.5 ** np.arange(1, 10))
    ok = (len(sched.certificates) == 4
          and max(x["sup"] for x in sched.certificates) < sched.threshold
          and L <= allowed and disc.verdict == "diverging" and disc.table[-1]["distance"] > 3)
    return CriterionResult(10, "metric-bounded construction", ok,
                           {"M1": M1, "segment_length": L, "allowed": allowed,
                            "disc_distance": disc.table[-1]["distance"]})


@_timed
def fiber_weight_identity():
    """Fiber weight at nu = -1 by direct quadrature; Laurent kernel against brute force."""
    spec = builtin("laurent-hartogs")
    rho = math.exp(-1.0)
    w = float(fiber_weight(spec, -1, np.array(0.3)))

    def integrand(y, x):
        return 1.0 / (x * x + y * y)

    inner, _ = dblquad(integrand, -rho, rho, lambda x: math.sqrt(rho * rho - x * x),
                       lambda x: math.sqrt(1 - x * x), epsabs=1e-13, epsrel=1e-12)
    outer = 0.0
    for a, b in ((-1, -rho), (rho, 1)):
        v, _ = dblquad(integrand, a, b, lambda x: 0.0, lambda x: math.sqrt(1 - x * x),
                       epsabs=1e-13, epsrel=1e-12)
        outer += v
    direct = 2 * (inner + outer)
    err_w = abs(w - direct)
    errs = []
    for p in ((0.3, 0.6), (-0.2 + 0.1j, 0.5j), (0.0, 0.8)):
        k = float(hartogs_system(spec, 2, 3).kernel(np.array([p]))[0])
        ref = brute_force_kernel(spec, p, a_max=3, nu_max=2)
        errs.append(abs(k / ref - 1))
    ok = err_w <= 1e-6 and max(errs) <= 1e-3
    return CriterionResult(11, "fiber weight identity", ok,
                           {"weight": w, "direct": direct, "kernel_rel_err": max(errs)})


@_timed
def localization():
    """``K_V / K_D`` near 1 on the disc and near 0 on a three-hole Zalcman stage."""
    disc = localization_ratio(UnitDisc(), 1.0, Disc(1.0, 0.25), Disc(1.0, 0.5))
    D3 = builtin("zalcman-d3")
    zal = localization_ratio(D3, 0.0, Disc(0.0, 0.09), Disc(0.0, 0.18))
    out = {}
    ok = True
    for name, rep in (("disc", disc), ("zalcman", zal)):
        r = np.array([x["ratio"] for x in rep.table])
        base = np.array([x["ratio"] for x in rep.table if not x["refined"]])
        out[f"{name}_min"] = float(r.min())
        out[f"{name}_C"] = float(r.max())
        out[f"{name}_C_half"] = float(base.max())
        ok &= rep.verdict == "bounded" and r.min() >= 1 - 1e-6 \
            and abs(r.max() / base.max() - 1) <= 0.2
    return CriterionResult(12, "localization", ok, out)


CRITERIA = [disc_kernel_oracle, annulus_kernel_oracle, monotonicity_suite,
            deleted_disc_stability, triangle_exhaustion, radial_monotonicity,
            metric_closed_form, caratheodory_below_bergman, zalcman_kernel_construction,
            metric_bounded_construction, fiber_weight_identity, localization]


def run_all(echo=print) -> list[CriterionResult]:
    results = []
    for fn in CRITERIA:
        res = fn()
        echo(res.line())
        results.append(res)
    return results
