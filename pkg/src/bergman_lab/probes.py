"""Numerical probes with reproducible verdicts.

Every probe returns a :class:`ProbeReport` holding a flat data table and the
thresholds used; :func:`recompute_verdict` derives the verdict from those two
alone, so a stored report can always be re-judged.

Verdicts: ``diverging``, ``bounded-with-margin``, ``bounded``, ``holds``,
``witness``, ``violated``, ``inconclusive``.  Kernel values from truncated
orthonormal systems are lower bounds, which is why "bounded" style verdicts
require a margin and a truncation-stability check.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .balanced import balanced_system
from .domains import (Annulus, BalancedDomainSpec, DiscMinusDiscs, Disc, DomainError,
                      HartogsDomainSpec, Hole, LaurentHartogsSpec, PlanarDomainSpec, PNormBall,
                      Polydisc, TriangleLogRadius, UnitDisc, Zalcman, _classify_many,
                      boundary_distance, contains_many, spec_hash)
from .hartogs import hartogs_system
from .integration import _radial_shape
from .kernel import (_degree_for, annulus_kernel, ball_kernel, converged_kernel, disc_kernel,
                     planar_system, polydisc_kernel)
from .metric import bergman_distance, default_system, path_length

__all__ = [
    "ProbeReport",
    "recompute_verdict",
    "kernel_levels",
    "default_direction",
    "exhaustion_probe",
    "outer_cone_check",
    "cone_exponent",
    "is_nested",
    "monotonicity_check",
    "radial_monotone_check",
    "lens_map",
    "lens_kernel",
    "localization_ratio",
    "points_in_disc",
    "slice_ratio",
    "completeness_probe",
]

VERDICTS = ("diverging", "bounded-with-margin", "bounded", "holds", "witness", "violated",
            "inconclusive")


@dataclass(frozen=True)
class ProbeReport:
    probe: str
    domain: str
    table: list
    verdict: str
    params: dict = field(default_factory=dict)
    notes: tuple = ()

    def to_json(self) -> str:
        return json.dumps({"probe": self.probe, "domain": self.domain, "verdict": self.verdict,
                           "params": self.params, "notes": list(self.notes),
                           "rows": len(self.table)}, indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        if not self.table:
            return ""
        cols = list(self.table[0])
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in self.table:
            w.writerow([_fmt(row[c]) for c in cols])
        return buf.getvalue()


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v)) if not math.isfinite(v) else f"{float(v):.17g}"
    return str(v)


def _report(probe, spec, table, params, notes=()):
    verdict = _VERDICT_RULES[probe](table, params)
    dom = spec_hash(spec) if spec is not None else ""
    return ProbeReport(probe, dom, table, verdict, params, tuple(notes))


def recompute_verdict(report: ProbeReport) -> str:
    """Verdict from the stored table and parameters only."""
    return _VERDICT_RULES[report.probe](report.table, report.params)


def _point_fields(p, prefix="z"):
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    if p.size == 1:
        return {f"{prefix}_re": float(p[0].real), f"{prefix}_im": float(p[0].imag)}
    out = {}
    for i, c in enumerate(p, 1):
        out[f"{prefix}{i}_re"] = float(c.real)
        out[f"{prefix}{i}_im"] = float(c.imag)
    return out


# ---------------------------------------------------------------------------
# kernel values at three truncation levels


def kernel_levels(spec, points, levels: int = 3) -> np.ndarray:
    """Kernel lower bounds at ``levels`` successively larger bases, shape ``(levels, m)``.

    Planar domains start from the degree suggested by the points and add 20
    monomials and 4 hole terms per level; fiber domains add 10 blocks and 10
    base monomials; balanced domains add homogeneous blocks.
    """
    out = []
    if isinstance(spec, PlanarDomainSpec):
        pts = np.ravel(np.asarray(points, dtype=complex))
        cap = 20000 if _radial_shape(spec) is not None else 800
        d0 = _degree_for(pts, 60, cap=cap)
        for ell in range(levels):
            out.append(planar_system(spec, d0 + 20 * ell, 24 + 4 * ell).kernel(pts))
    elif isinstance(spec, (HartogsDomainSpec, LaurentHartogsSpec)):
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        for ell in range(levels):
            n = 40 + 10 * ell
            out.append(hartogs_system(spec, n, n).kernel(pts))
    elif isinstance(spec, BalancedDomainSpec):
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        top = 60 if getattr(spec, "reinhardt", False) else 12
        for ell in range(levels):
            out.append(balanced_system(spec, top - 2 * (levels - 1 - ell)).kernel(pts))
    else:
        raise TypeError(f"no kernel engine for {type(spec).__name__}")
    return np.array(out)


# ---------------------------------------------------------------------------
# exhaustion


def default_direction(spec, boundary_point):
    """Inward unit direction used when the caller does not give one."""
    b = np.atleast_1d(np.asarray(boundary_point, dtype=complex))
    if isinstance(spec, HartogsDomainSpec) and isinstance(spec.log_radius, TriangleLogRadius) \
            and np.all(b == 0):
        v = np.array([1.0, 0.5], dtype=complex)
        return v / np.linalg.norm(v)
    if isinstance(spec, Zalcman) and spec.reference_disc is not None and np.all(b == 0):
        c = complex(spec.reference_disc.center)
        return np.array([c / abs(c)])
    n = np.linalg.norm(b)
    if n == 0:
        raise DomainError("give an approach direction for this boundary point")
    return -b / n


def _approach(spec, boundary_point, direction, scales):
    b = np.atleast_1d(np.asarray(boundary_point, dtype=complex))
    u = default_direction(spec, b) if direction is None \
        else np.atleast_1d(np.asarray(direction, dtype=complex))
    u = u / np.linalg.norm(u)
    pts = b[None, :] + np.asarray(scales, dtype=float)[:, None] * u[None, :]
    ok = contains_many(spec, pts[:, 0] if spec.dim == 1 else pts)
    if not np.all(ok):
        raise DomainError(f"approach point {pts[~ok][0]} exits the domain")
    return pts


def exhaustion_probe(spec, boundary_point, q: float = 0.5, steps: int = 8, start: float = 0.5,
                     direction=None, scales=None, bound: float | None = None,
                     margin: float = 0.2, ratio_threshold: float = 10.0, monotone_tail: int = 3,
                     stability: float = 0.01) -> ProbeReport:
    """Kernel lower bounds along ``boundary_point + s_k u`` with ``s_k = start * q^k``.

    Each row carries the value at the largest basis and the relative change
    over two basis enlargements.
    """
    if scales is None:
        scales = start * q ** np.arange(steps)
    pts = _approach(spec, boundary_point, direction, scales)
    P = pts[:, 0] if spec.dim == 1 else pts
    lv = kernel_levels(spec, P)
    change = np.max(np.abs(np.diff(lv, axis=0)), axis=0) / np.abs(lv[-1])
    table = []
    for k, (s, p) in enumerate(zip(scales, pts)):
        row = {"step": k, "scale": float(s)}
        row.update(_point_fields(p))
        row.update({"kernel": float(lv[-1, k]), "stability": float(change[k])})
        table.append(row)
    params = {"ratio_threshold": ratio_threshold, "monotone_tail": monotone_tail,
              "bound": bound, "margin": margin, "stability": stability,
              "boundary_point": _point_fields(boundary_point, "b")}
    return _report("exhaustion", spec, table, params)


def _exhaustion_verdict(table, p):
    v = [r["kernel"] for r in table]
    t = p["monotone_tail"]
    mono = len(v) > t and all(v[i] > v[i - 1] for i in range(len(v) - t, len(v)))
    if v[-1] / v[0] >= p["ratio_threshold"] and mono:
        return "diverging"
    M = p.get("bound")
    if M is not None and max(v) < M * (1 - p["margin"]) \
            and max(r["stability"] for r in table) < p["stability"]:
        return "bounded-with-margin"
    return "inconclusive"


# ---------------------------------------------------------------------------
# outer cone condition


def cone_exponent(delta: float, slack: float = 0.1) -> float:
    """``max(1, 1/delta, (2 - delta)/delta) + slack``."""
    if not delta > 0:
        raise DomainError("delta must be positive")
    return max(1.0, 1.0 / delta, (2.0 - delta) / delta) + slack


def _ball_points(dim, count, seed):
    """Scrambled Sobol points filling the closed unit ball of ``C^dim``."""
    d = 2 * dim
    u = qmc.Sobol(d, scramble=True, seed=seed).random(4 * count)
    x = 2 * u - 1
    x = x[np.sum(x ** 2, axis=1) <= 1][:count - 2 * d]
    # include the extreme points along each real axis
    axes = np.vstack([np.eye(d), -np.eye(d)])
    x = np.vstack([axes, x])
    return x[:, 0::2] + 1j * x[:, 1::2]


def outer_cone_check(spec, z0, r: float, eps: float, exterior_points,
                     samples_per_ball: int = 256, seed: int = 0) -> ProbeReport:
    """Sample each ball ``B(z^nu, r |z^nu - z0|^eps)`` and count points that land in D."""
    if not 0 < r <= 1 or eps < 1:
        raise DomainError("need r in (0, 1] and eps >= 1")
    z0 = np.atleast_1d(np.asarray(z0, dtype=complex))
    ext = np.asarray(exterior_points, dtype=complex).reshape(-1, z0.size)
    ins, und = _classify_many(spec, ext[:, 0] if spec.dim == 1 else ext)
    if np.any(ins | und):
        raise DomainError("exterior points must lie outside the domain")
    unit = _ball_points(z0.size, samples_per_ball, seed)
    table = []
    for k, p in enumerate(ext):
        dist = float(np.linalg.norm(p - z0))
        rho = r * dist ** eps
        pts = p[None, :] + rho * unit
        ins, und = _classify_many(spec, pts[:, 0] if spec.dim == 1 else pts)
        row = {"index": k}
        row.update(_point_fields(p))
        row.update({"distance": dist, "ball_radius": rho, "samples": len(pts),
                    "hits": int(ins.sum()), "undecided": int(und.sum())})
        table.append(row)
    params = {"r": r, "eps": eps, "samples_per_ball": samples_per_ball, "seed": seed}
    params.update(_point_fields(z0, "z0"))
    return _report("outer-cone", spec, table, params)


def _cone_verdict(table, p):
    if any(r["hits"] for r in table):
        return "violated"
    if any(r["undecided"] for r in table):
        return "inconclusive"
    return "witness"


# ---------------------------------------------------------------------------
# comparison inequalities


def _holes_and_points(spec):
    return list(spec.holes), list(spec.punctures)


def is_nested(inner, outer) -> bool:
    """Structural test of ``inner`` being a subset of ``outer`` (planar domains).

    Every hole of the outer domain must sit inside a hole of the inner one,
    and every outer puncture must be removed from the inner domain as well.
    """
    if not (isinstance(inner, PlanarDomainSpec) and isinstance(outer, PlanarDomainSpec)):
        return inner == outer
    ih, ip = _holes_and_points(inner)
    oh, op = _holes_and_points(outer)
    for h in oh:
        if not any(abs(h.center - g.center) + h.radius <= g.radius * (1 + 1e-12) for g in ih):
            return False
    for p in op:
        if p in ip:
            continue
        if not any(abs(p - g.center) <= g.radius for g in ih):
            return False
    return True


def _converged(spec, pts):
    if isinstance(spec, UnitDisc):
        return disc_kernel(pts)
    if isinstance(spec, Annulus):
        return np.array([annulus_kernel(z, spec.r_inner)[0] for z in pts])
    return converged_kernel(spec, pts)[0]


def monotonicity_check(inner, outer, points, slack: float = 1e-6,
                       nested: bool | None = None) -> ProbeReport:
    """``K_outer(z) <= K_inner(z) (1 + slack)`` at points of the inner domain."""
    if nested is None:
        nested = is_nested(inner, outer)
    if not nested:
        raise DomainError("nesting of the two domains is not declared")
    pts = np.ravel(np.asarray(points, dtype=complex))
    if not np.all(inner.inside(pts)):
        raise DomainError("points must lie in the inner domain")
    ki, ko = _converged(inner, pts), _converged(outer, pts)
    table = []
    for z, a, b in zip(pts, ki, ko):
        row = _point_fields(z)
        row.update({"inner": float(a), "outer": float(b), "ratio": float(b / a)})
        table.append(row)
    notes = ("values are converged truncations; each is a lower bound for the true kernel",)
    return _report("monotonicity", inner, table, {"slack": slack, "outer": spec_hash(outer)},
                   notes)


def _monotone_verdict(table, p):
    ok = all(r["outer"] <= r["inner"] * (1 + p["slack"]) for r in table)
    return "holds" if ok else "violated"


def radial_monotone_check(spec, point, t_grid, rtol: float = 1e-8) -> ProbeReport:
    """``t -> K(t * point)`` (balanced) or ``t -> K(z, t w)`` (fiber domains)."""
    p = np.asarray(point, dtype=complex)
    t = np.sort(np.asarray(t_grid, dtype=float))
    if isinstance(spec, BalancedDomainSpec):
        pts = t[:, None] * p[None, :]
    elif isinstance(spec, (HartogsDomainSpec, LaurentHartogsSpec)):
        pts = np.stack([np.full(t.shape, p[0]), t * p[1]], axis=1)
    else:
        raise TypeError("radial monotonicity needs a balanced or fiber domain")
    ok = contains_many(spec, pts)
    if not np.all(ok):
        raise DomainError(f"ray exits the domain at t = {t[~ok][0]}")
    if isinstance(spec, Polydisc):
        vals = np.array([polydisc_kernel(x) for x in pts])
    elif isinstance(spec, PNormBall) and spec.p == 2:
        vals = np.array([ball_kernel(x) for x in pts])
    else:
        vals = kernel_levels(spec, pts, levels=1)[0]
    table = [{"t": float(a), "kernel": float(v)} for a, v in zip(t, vals)]
    return _report("radial", spec, table, {"rtol": rtol, **_point_fields(p, "p")})


def _radial_verdict(table, p):
    v = [r["kernel"] for r in table]
    ok = all(v[i] >= v[i - 1] * (1 - p["rtol"]) for i in range(1, len(v)))
    return "holds" if ok else "violated"


# ---------------------------------------------------------------------------
# localization


def lens_map(b: complex, rho: float):
    """Conformal map of ``E ∩ disc(b, rho)`` (``|b| = 1``) onto the upper half-plane.

    A Möbius map sends the two corners to ``0`` and ``infinity`` and the lens
    to a sector of opening ``theta``; the power ``pi / theta`` opens the
    sector.  Returns ``(S, dS)``.
    """
    b = complex(b)
    if abs(abs(b) - 1) > 1e-12 or not 0 < rho < 2:
        raise DomainError("lens needs |b| = 1 and 0 < rho < 2")
    phi = 2 * math.asin(rho / 2)
    p1, p2 = b * np.exp(1j * phi), b * np.exp(-1j * phi)

    def T(z):
        return (z - p1) / (z - p2)

    a1 = np.angle(T(b))
    a2 = np.angle(T(b * (1 - rho)))
    ac = np.angle(T(b * (1 - rho / 2)))
    th = np.mod(a2 - a1, 2 * np.pi)
    if np.mod(ac - a1, 2 * np.pi) < th:
        start, theta = a1, th
    else:
        start, theta = a2, 2 * np.pi - th
    k = np.pi / theta

    def S(z):
        t = T(np.asarray(z, dtype=complex))
        arg = np.mod(np.angle(t) - start, 2 * np.pi)
        return np.abs(t) ** k * np.exp(1j * k * arg)

    def dS(z):
        z = np.asarray(z, dtype=complex)
        return k * S(z) / T(z) * (p1 - p2) / (z - p2) ** 2

    return S, dS


def lens_kernel(z, b: complex, rho: float):
    """Bergman kernel of ``E ∩ disc(b, rho)`` through :func:`lens_map`."""
    S, dS = lens_map(b, rho)
    w = S(z)
    return np.abs(dS(z)) ** 2 / (4 * np.pi * np.imag(w) ** 2)


def points_in_disc(spec, U: Disc, count: int, seed: int = 0, min_distance: float = 0.0):
    """Deterministic Sobol points in ``U ∩ D`` (prefix-stable in ``count``)."""
    sob = qmc.Sobol(2, scramble=True, seed=seed)
    out, total = [], 0
    for _ in range(64):
        u = sob.random(1024)
        z = U.center + U.radius * (2 * u[:, 0] - 1 + 1j * (2 * u[:, 1] - 1))
        keep = (np.abs(z - U.center) < U.radius) & spec.inside(z)
        if min_distance > 0:
            keep &= spec.distance(z) >= min_distance
        out.append(z[keep])
        total += int(keep.sum())
        if total >= count:
            return np.concatenate(out)[:count]
    raise DomainError("too few sample points in the neighbourhood")


def _local_kernel(spec, U2: Disc, pts):
    """Kernel of the component of ``D ∩ U2`` containing the points, and its description."""
    c, rho = complex(U2.center), float(U2.radius)
    if abs(c) + 1 <= rho and isinstance(spec, PlanarDomainSpec):
        return _converged(spec, pts), "V = D"
    holes, punct = _holes_and_points(spec)
    inside_h = []
    for h in holes:
        d = abs(h.center - c)
        if d + h.radius <= rho:
            inside_h.append(h)
        elif d - h.radius < rho:
            raise DomainError(f"circle of U2 cuts hole {h}; component not identified")
    inside_p = [p for p in punct if abs(p - c) < rho]
    if abs(c) + rho < 1:
        scaled = DiscMinusDiscs(
            tuple(Hole((h.center - c) / rho, log_radius=h.log_radius - math.log(rho))
                  for h in inside_h),
            tuple((p - c) / rho for p in inside_p))
        w = (pts - c) / rho
        if not scaled.hole_list:
            return disc_kernel(w) / rho ** 2, "disc"
        return _converged(scaled, w) / rho ** 2, "scaled disc minus discs"
    if abs(abs(c) - 1) < 1e-12 and not inside_h and not inside_p:
        return lens_kernel(pts, c, rho), "lens"
    raise DomainError("component of D ∩ U2 not identified for this geometry")


def localization_ratio(spec, boundary_point, U1: Disc, U2: Disc, points=None, count: int = 64,
                       seed: int = 0, min_distance: float = 2e-3, tol: float = 1e-6,
                       stability: float = 0.2) -> ProbeReport:
    """Ratio ``K_V / K_D`` on points of ``U1 ∩ D`` where ``V`` is the local component.

    Unless ``points`` is given, ``count`` Sobol points are used together with
    a doubled set (``refined`` column) to check stability of the maximum.
    """
    if not isinstance(spec, PlanarDomainSpec):
        raise TypeError("localization is implemented for planar domains")
    if abs(U1.center - U2.center) + U1.radius >= U2.radius:
        raise DomainError("U1 must be relatively compact in U2")
    if points is None:
        pts = points_in_disc(spec, U1, 2 * count, seed, min_distance)
        refined = np.arange(2 * count) >= count
    else:
        pts = np.ravel(np.asarray(points, dtype=complex))
        refined = np.zeros(len(pts), bool)
    kv, how = _local_kernel(spec, U2, pts)
    kd = _converged(spec, pts)
    table = []
    for z, a, b, r in zip(pts, kv, kd, refined):
        row = _point_fields(z)
        row.update({"refined": int(r), "local": float(a), "global": float(b),
                    "ratio": float(a / b)})
        table.append(row)
    params = {"tol": tol, "stability": stability, "U1": [*_point_fields(U1.center).values(),
                                                          U1.radius],
              "U2": [*_point_fields(U2.center).values(), U2.radius], "component": how}
    params.update(_point_fields(boundary_point, "b"))
    return _report("localization", spec, table, params)


def _localization_verdict(table, p):
    ratios = np.array([r["ratio"] for r in table])
    if not np.all(np.isfinite(ratios)):
        return "inconclusive"
    if ratios.min() < 1 - p["tol"]:
        return "violated"
    base = [r["ratio"] for r in table if not r["refined"]]
    c_base, c_all = max(base), ratios.max()
    if abs(c_all / c_base - 1) > p["stability"]:
        return "inconclusive"
    return "bounded"


# ---------------------------------------------------------------------------
# slices


def slice_ratio(spec, points, direction=None) -> ProbeReport:
    """``K_slice / K_domain`` on a complex line through 0 or on the slice ``w = 0``.

    Balanced: ``points`` are complex scalars ``lam`` on the line ``lam * v``;
    the slice is a disc of radius ``1 / h(v)``.  Fiber domains: ``points``
    are base points ``z`` and the slice is the base itself.
    """
    lam = np.ravel(np.asarray(points, dtype=complex))
    if isinstance(spec, BalancedDomainSpec):
        v = np.asarray(direction if direction is not None else np.eye(spec.dim)[0],
                       dtype=complex)
        v = v / np.linalg.norm(v)
        R = 1.0 / float(spec.minkowski(v[None, :])[0])
        if np.any(np.abs(lam) >= R):
            raise DomainError("points leave the slice")
        ks = R ** 2 / (np.pi * (R ** 2 - np.abs(lam) ** 2) ** 2)
        pts = lam[:, None] * v[None, :]
        if isinstance(spec, Polydisc):
            kd = np.array([polydisc_kernel(x) for x in pts])
        elif isinstance(spec, PNormBall) and spec.p == 2:
            kd = np.array([ball_kernel(x) for x in pts])
        else:
            kd = kernel_levels(spec, pts, levels=1)[0]
    elif isinstance(spec, (HartogsDomainSpec, LaurentHartogsSpec)):
        if isinstance(spec, LaurentHartogsSpec):
            raise DomainError("w = 0 is not in a Laurent-Hartogs domain")
        if not np.all(spec.base.inside(lam)):
            raise DomainError("points leave the base")
        ks = _converged(spec.base, lam)
        sys = hartogs_system(spec)
        kd = sys.block_kernels(lam)[:, 0]
    else:
        raise TypeError("slices need a balanced or Hartogs domain")
    table = []
    for z, a, b in zip(lam, ks, kd):
        row = _point_fields(z, "lam")
        row.update({"slice": float(a), "domain": float(b), "ratio": float(a / b)})
        table.append(row)
    return _report("slice", spec, table, {})


def _slice_verdict(table, p):
    r = np.array([row["ratio"] for row in table])
    return "bounded" if np.all(np.isfinite(r) & (r > 0)) else "inconclusive"


# ---------------------------------------------------------------------------
# completeness evidence


def completeness_probe(spec, basepoint, approach, mode: str = "segment",
                       threshold: float = 3.0, decay: float = 0.8, monotone_tail: int = 3,
                       certificate: float | None = None, system=None) -> ProbeReport:
    """Distance upper bounds ``d_k`` from ``basepoint`` to each approach point.

    ``mode="segment"``: ``d_k`` is the metric length of the polyline through
    the basepoint and the approach points, so increments are segment
    lengths.  ``mode="mesh"``: ``d_k`` is the geodesic mesh bound.  With
    ``certificate = M1`` each row also records ``M1 * |z_k - basepoint|``,
    a pointwise bound for the segment length when ``beta <= M1`` along it.
    """
    if not isinstance(spec, PlanarDomainSpec):
        raise TypeError("completeness probe is implemented for planar domains")
    z = np.ravel(np.asarray(approach, dtype=complex))
    base = complex(basepoint)
    if system is None:
        system = default_system(spec, np.append(z, base))
    table, d = [], 0.0
    prev = base
    for k, p in enumerate(z):
        if mode == "segment":
            inc = path_length(system, [prev, p], order=16, subdivisions=4) if p != prev else 0.0
            d += inc
        elif mode == "mesh":
            new = bergman_distance(spec, base, p, system=system).bound
            inc, d = new - d, new
        else:
            raise DomainError(f"unknown mode {mode!r}")
        row = {"step": k}
        row.update(_point_fields(p))
        row.update({"distance": d, "increment": inc})
        if certificate is not None:
            row["certified"] = certificate * abs(p - base)
        table.append(row)
        prev = p
    params = {"mode": mode, "threshold": threshold, "decay": decay,
              "monotone_tail": monotone_tail, "certificate": certificate}
    params.update(_point_fields(base, "base"))
    notes = ("distances are upper bounds; a bounded verdict is the rigorous direction",)
    return _report("completeness", spec, table, params, notes)


def _completeness_verdict(table, p):
    d = [r["distance"] for r in table]
    inc = [r["increment"] for r in table]
    t = p["monotone_tail"]
    if len(d) <= t:
        return "inconclusive"
    tail = inc[-t:]
    if d[-1] > p["threshold"] and all(x > 0 for x in tail):
        return "diverging"
    ratios = [b / a for a, b in zip(tail[:-1], tail[1:]) if a > 0]
    if len(ratios) == t - 1 and all(r <= p["decay"] for r in ratios):
        return "bounded"
    if p.get("certificate") is not None and all(r["distance"] <= r["certified"] + 1e-12
                                                 for r in table):
        return "bounded"
    return "inconclusive"


_VERDICT_RULES = {
    "exhaustion": _exhaustion_verdict,
    "outer-cone": _cone_verdict,
    "monotonicity": _monotone_verdict,
    "radial": _radial_verdict,
    "localization": _localization_verdict,
    "slice": _slice_verdict,
    "completeness": _completeness_verdict,
}
