"""Inductive hole schedules for Zalcman-type domains, and named example domains.

Three schedules are built with the kernel and metric engines as oracles.
Every quantity is certified on a polar grid over the reference disc ``B``.

* :func:`build_zalcman_radii` picks hole radii ``r_N`` one at a time.  Each
  ``D_N = E minus the first N holes`` keeps the grid supremum of ``K_{D_N}``
  below the threshold.
* :func:`refine_zalcman_schedule` shrinks the whole tail of holes by a factor
  ``t`` at each stage.  The grid then covers a growing exhaustion
  ``L_N = disc(c_B, rho_B (1 - 2^-(N+2)))`` of the interior of ``B``.  The
  result is a triangular family ``s^j_N`` with diagonal ``s_j``.
* :func:`build_metric_bounded_schedule` runs the same induction for the
  Bergman metric ``beta(z; 1)``.  It yields radii ``lambda_j`` and shrink
  factors ``t_j``.

Holes are stored through their log-radii, because the radii needed for holes
close to 0 are far below double precision.  Stage thresholds are
``bound * (1 - margin)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .domains import (ConstantLogRadius, DenseSeriesLogRadius, Disc, DomainError,
                      GeometricSequence, HartogsDomainSpec, LaurentHartogsSpec,
                      PoleSeriesLogRadius, TriangleLogRadius, UnitDisc, Zalcman, contains)
from .kernel import disc_kernel, planar_system
from .metric import metric_values

__all__ = [
    "ConstructionError",
    "ZalcmanParams",
    "Schedule",
    "polar_grid",
    "grid_sup",
    "build_zalcman_radii",
    "refine_zalcman_schedule",
    "build_metric_bounded_schedule",
    "recertify",
    "build_builtin",
    "BUILTIN_FAMILIES",
]


class ConstructionError(RuntimeError):
    """A schedule search could not meet its bound."""


@dataclass(frozen=True)
class ZalcmanParams:
    """Inputs shared by the three schedule builders.

    ``tail`` is the number of holes kept in the refined schedules.  Holes
    beyond the kernel stages get extrapolated log-radii
    ``log r_j = log r_S * tail_growth^(j - S)``.
    """

    centers: GeometricSequence = field(default_factory=GeometricSequence)
    reference_disc: Disc = field(default_factory=lambda: Disc(-0.3, 0.3))
    bound: float = 2.0
    metric_bound: float | None = None
    stages: int = 5
    grid: int = 64
    margin: float = 0.2
    degree: int = 60
    hole_order: int = 24
    log_floor: float = -1e4
    shrink_floor: float = -1e15
    max_iter: int = 60
    reserve: float = 0.9
    tail: int = 40
    tail_growth: float = 8.0
    shrink_cap: float = 0.5
    certify_slack: float = 1e-3

    def __post_init__(self):
        B = self.reference_disc
        if abs(abs(B.center) - B.radius) > 1e-12:
            raise DomainError("0 must lie on the boundary of the reference disc")
        if not (0 < B.radius and abs(B.center) + B.radius < 1):
            raise DomainError("reference disc must lie in the unit disc")
        a = self.centers.take(max(self.stages, self.tail))
        if np.any(np.abs(a - B.center) <= B.radius):
            raise DomainError("hole centers must avoid the reference disc")
        if self.stages < 0 or self.grid < 4 or not 0 <= self.margin < 1:
            raise DomainError("stages >= 0, grid >= 4 and margin in [0, 1) required")
        if self.degree < 1 or self.max_iter < 1:
            raise DomainError("degree and max_iter must be positive")

    @property
    def threshold(self) -> float:
        return self.bound * (1 - self.margin)

    def to_dict(self):
        d = asdict(self)
        u = complex(self.centers.direction)
        d["centers"] = {"first": self.centers.first, "ratio": self.centers.ratio,
                        "direction": [u.real, u.imag]}
        c = complex(self.reference_disc.center)
        d["reference_disc"] = {"center": [c.real, c.imag], "radius": self.reference_disc.radius}
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        c = d.pop("centers")
        B = d.pop("reference_disc")
        return cls(GeometricSequence(c["first"], c["ratio"], complex(*c["direction"])),
                   Disc(complex(*B["center"]), B["radius"]), **d)


@dataclass
class Schedule:
    """Per-stage log-radius rows with their certificates.

    ``rows[N]`` lists the log-radii of the holes present at stage ``N + 1``.
    ``shrinks[N]`` is the grid exhaustion factor of that stage.
    ``log_radii`` holds the final per-hole values: ``r_j``, the diagonal
    ``s_j`` or ``lambda_j``.
    """

    kind: str
    quantity: str
    params: ZalcmanParams
    rows: list
    shrinks: list
    certificates: list
    log_radii: list
    puncture: bool
    factors: list = field(default_factory=list)
    base_certificate: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def radii(self) -> np.ndarray:
        return np.exp(np.asarray(self.log_radii, dtype=float))

    @property
    def threshold(self) -> float:
        bound = self.params.bound if self.quantity == "kernel" else self.metric_bound
        return bound * (1 - self.params.margin)

    @property
    def metric_bound(self):
        return self.params.metric_bound

    def domain(self, stage: int | None = None) -> Zalcman:
        """Domain certified at ``stage`` (1-based; default the last)."""
        if not self.rows:
            return Zalcman(self.params.centers, (), self.puncture, self.params.reference_disc,
                           ())
        row = self.rows[-1 if stage is None else stage - 1]
        return Zalcman(self.params.centers, (), self.puncture, self.params.reference_disc,
                       tuple(row))

    def to_json(self) -> str:
        body = {"kind": self.kind, "quantity": self.quantity, "params": self.params.to_dict(),
                "rows": self.rows, "shrinks": self.shrinks, "certificates": self.certificates,
                "log_radii": self.log_radii, "puncture": self.puncture,
                "factors": self.factors, "base_certificate": self.base_certificate,
                "notes": self.notes}
        return json.dumps(body, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Schedule":
        d = json.loads(text)
        d["params"] = ZalcmanParams.from_dict(d["params"])
        return cls(**d)


# ---------------------------------------------------------------------------
# grids and oracles


def polar_grid(B: Disc, n: int, shrink: float = 1.0) -> np.ndarray:
    """Centre of ``B`` plus ``n`` circles of ``n`` points, out to radius ``shrink * rho_B``."""
    r = B.radius * shrink * np.arange(1, n + 1) / n
    t = 2 * np.pi * np.arange(n) / n
    pts = (r[:, None] * np.exp(1j * t)[None, :]).ravel() + B.center
    return np.append(complex(B.center), pts)


def _spec(params, row, puncture):
    return Zalcman(params.centers, (), puncture, params.reference_disc, tuple(row))


def grid_sup(spec, grid, quantity="kernel", degree=60, hole_order=24):
    """``(sup, argmax)`` of the kernel or ``beta(z; 1)`` over grid points."""
    grid = grid[spec.inside(grid)]
    if not spec.holes:
        if quantity == "kernel":
            vals = disc_kernel(grid)
        else:
            vals = math.sqrt(2) / (1 - np.abs(grid) ** 2)
    else:
        sys = planar_system(spec, degree, hole_order)
        vals = sys.kernel(grid) if quantity == "kernel" else metric_values(sys, grid, 1.0)
    k = int(np.argmax(vals))
    return float(vals[k]), complex(grid[k])


def _certificate(stage, sup, arg, params, threshold, target, shrink, n=None, degree=None):
    return {"stage": stage, "sup": sup, "argmax": [arg.real, arg.imag],
            "threshold": threshold, "target": target, "grid": n or params.grid,
            "shrink": shrink, "degree": degree or params.degree}


def _search(f, lo, hi, target, max_iter, what):
    """Largest ``x`` in ``[lo, hi]`` (by bisection) with ``f(x)[0] < target``."""
    v_hi = f(hi)
    if v_hi[0] < target:
        return hi, v_hi
    v_lo = f(lo)
    if not v_lo[0] < target:
        raise ConstructionError(
            f"{what}: floor reached with sup {v_lo[0]:.6g} >= {target:.6g} "
            f"at grid point {v_lo[1]}")
    for _ in range(max_iter):
        if hi - lo <= 1e-3 * max(1.0, abs(lo)):
            break
        mid = 0.5 * (lo + hi)
        v = f(mid)
        if v[0] < target:
            lo, v_lo = mid, v
        else:
            hi = mid
    return lo, v_lo


def _radius_cap(params, N, log_radii):
    """Half the distance from ``a_N`` to ``dE``, ``B``, earlier holes and ``a_{N+1}``."""
    a = params.centers.take(N + 1)
    c = a[N - 1]
    B = params.reference_disc
    d = [1 - abs(c), abs(c - B.center) - B.radius, abs(c - a[N])]
    for j, x in enumerate(log_radii):
        d.append(abs(c - a[j]) - math.exp(x))
    return 0.5 * min(d)


# ---------------------------------------------------------------------------
# kernel radii, one hole per stage


def build_zalcman_radii(params: ZalcmanParams = ZalcmanParams()) -> Schedule:
    """Radii ``r_1, ..., r_S`` keeping ``K_{D_N} < bound (1 - margin)`` on the B-grid.

    Each stage gets a share of the gap between the hole-free supremum and
    the threshold.  The share grows like ``dist(a_N, B)^-2``, since a hole's
    effect on the grid scales that way.  The radius is then the largest one
    (bisection in ``log r`` below the cap) that keeps the grid supremum
    under the cumulative target.
    """
    grid = polar_grid(params.reference_disc, params.grid)
    T = params.threshold
    sup0, arg0 = grid_sup(UnitDisc(), grid)
    if not sup0 < T:
        raise ConstructionError(f"bound too small: unit-disc grid sup {sup0:.6g} >= {T:.6g}")
    S = params.stages
    B = params.reference_disc
    a = params.centers.take(max(S, 1))
    w = np.array([(abs(c - B.center) - B.radius) ** -2 for c in a[:S]])
    W = np.cumsum(w) / w.sum() if S else w
    rows, certs, logs = [], [], []
    for N in range(1, S + 1):
        target = sup0 + params.reserve * (T - sup0) * W[N - 1]
        cap = _radius_cap(params, N, logs)

        def f(x, logs=logs):
            return grid_sup(_spec(params, logs + [x], False), grid, "kernel",
                            params.degree, params.hole_order)

        x, (v, arg) = _search(f, params.log_floor, math.log(cap), target, params.max_iter,
                              f"stage {N}")
        logs = logs + [x]
        rows.append(list(logs))
        certs.append(_certificate(N, v, arg, params, T, target, 1.0))
    return Schedule("kernel-radii", "kernel", params, rows, [1.0] * S, certs, logs, False,
                    base_certificate=_certificate(0, sup0, arg0, params, T, T, 1.0),
                    notes=["D_N = E minus the first N holes; the origin is not removed"])


def _extend_tail(params, logs):
    """Log-radii for holes ``1..tail``, extrapolating past the computed ones."""
    logs = list(logs)
    if not logs:
        raise ConstructionError("empty prior schedule")
    while len(logs) < params.tail:
        logs.append(logs[-1] * params.tail_growth)
    return logs


def _tail_note(params, S):
    return (f"holes {S + 1}..{params.tail} carry extrapolated log-radii "
            f"(log r_j = log r_{S} * {params.tail_growth:g}^(j - {S})); holes beyond "
            f"{params.tail} are omitted, which can only lower the kernel")


def _induction(params, start_logs, quantity, threshold, n_stages, cap_first):
    """Shared stage loop of the refined kernel and the metric schedules."""
    rows, certs, factors, shrinks = [], [], [], []
    row = list(start_logs)
    for N in range(1, n_stages + 1):
        sh = 1 - 2.0 ** -(N + 2)        # L_N exhausts the interior of B
        grid = polar_grid(params.reference_disc, params.grid, sh)
        cap = cap_first if N == 1 else params.shrink_cap

        def f(x, row=row, N=N):
            trial = row[:N - 1] + [y + x for y in row[N - 1:]]
            return grid_sup(_spec(params, trial, True), grid, quantity, params.degree,
                            params.hole_order)

        target = threshold * (1 - params.certify_slack)
        x, (v, arg) = _search(f, params.shrink_floor, math.log(cap), target,
                              params.max_iter, f"stage {N}")
        row = row[:N - 1] + [y + x for y in row[N - 1:]]
        rows.append(list(row))
        factors.append(x)
        shrinks.append(sh)
        certs.append(_certificate(N, v, arg, params, threshold, target, sh))
    diag = [rows[j][j] for j in range(n_stages)] if n_stages else []
    return rows, certs, factors, shrinks, diag


def refine_zalcman_schedule(prior: Schedule, stages: int | None = None,
                            params: ZalcmanParams | None = None) -> Schedule:
    """Triangular family ``s^j_N`` from a kernel-radii schedule.

    Stage ``N`` multiplies every radius with index ``j >= N`` by a shrink
    factor ``t_N <= shrink_cap``.  It is the largest such factor, found by
    bisection in ``log t``, that keeps ``K_{G_N} < bound (1 - margin)`` on
    the grid over ``L_N``.  ``G_N`` contains ``G``, so the certificate
    carries over to the final domain by monotonicity of the kernel.  Stored
    factors are ``log t_N``.
    """
    params = params or prior.params
    if prior.kind != "kernel-radii":
        raise ConstructionError("refinement needs a kernel-radii schedule")
    S = len(prior.log_radii)
    n = S if stages is None else stages
    start = _extend_tail(params, prior.log_radii)
    if n > len(start):
        raise ConstructionError("more refinement stages than holes")
    rows, certs, factors, shrinks, diag = _induction(
        params, start, "kernel", params.threshold, n, params.shrink_cap)
    notes = [_tail_note(params, S),
             "K_G <= K_{G_N} since G_N is contained in G; certificates hold on L_N grids"]
    return Schedule("triangular", "kernel", params, rows, shrinks, certs, diag, True,
                    factors=factors, notes=notes)


def build_metric_bounded_schedule(prior: Schedule, params: ZalcmanParams | None = None,
                                  stages: int | None = None) -> Schedule:
    """Radii ``lambda_j = t_1 ... t_j s_j`` keeping ``beta(z; 1) < M1 (1 - margin)`` on ``L_N``.

    ``prior`` supplies ``s_j`` (a triangular or kernel-radii schedule).
    ``M1`` defaults to twice the grid supremum of ``beta_E`` on ``B``.  The
    first factor may be 1 and later ones are capped by ``shrink_cap``.
    """
    params = params or prior.params
    grid = polar_grid(params.reference_disc, params.grid)
    beta0, arg0 = grid_sup(UnitDisc(), grid, "metric")
    M1 = params.metric_bound if params.metric_bound is not None else 2 * beta0
    if params.metric_bound is None:
        params = ZalcmanParams(**{**params.__dict__, "metric_bound": M1})
    T1 = M1 * (1 - params.margin)
    if not beta0 < T1:
        raise ConstructionError(f"M1 too small: unit-disc grid sup {beta0:.6g} >= {T1:.6g}")
    n = params.stages if stages is None else stages
    S = len(prior.log_radii)
    start = _extend_tail(params, prior.log_radii)
    if n > len(start):
        raise ConstructionError("more stages than holes")
    rows, certs, factors, shrinks, diag = _induction(
        params, start, "metric", T1, n, 1.0)
    notes = [_tail_note(params, S), "t_1 may equal 1; later factors are capped",
             f"M1 = {M1:.17g}"]
    return Schedule("metric", "metric", params, rows, shrinks, certs, diag, True,
                    factors=factors,
                    base_certificate=_certificate(0, beta0, arg0, params, T1, T1, 1.0),
                    notes=notes)


def recertify(schedule: Schedule, grid_factor: int = 2, degree_extra: int = 10) -> list:
    """Grid suprema of every stage at a finer grid and a larger basis."""
    p = schedule.params
    n = p.grid * grid_factor
    out = []
    for N, (row, sh) in enumerate(zip(schedule.rows, schedule.shrinks), 1):
        grid = polar_grid(p.reference_disc, n, sh)
        v, arg = grid_sup(_spec(p, row, schedule.puncture), grid, schedule.quantity,
                          p.degree + degree_extra, p.hole_order)
        out.append(_certificate(N, v, arg, p, schedule.threshold, schedule.threshold, sh, n,
                                p.degree + degree_extra))
    return out


# ---------------------------------------------------------------------------
# named example domains


BUILTIN_FAMILIES = ("hartogs-triangle", "pole-series", "dense-series", "laurent-hartogs",
                    "product-disc2")


def build_builtin(name: str, **params):
    """Validated spec of a named example domain with a membership self-check.

    ``pole-series`` takes ``first``, ``ratio``, ``n_offset`` and
    ``truncation``.  ``dense-series`` takes ``truncation``.
    ``laurent-hartogs`` takes constants ``u`` and ``v`` over the unit disc.
    """
    if name == "hartogs-triangle":
        spec = HartogsDomainSpec(UnitDisc(), TriangleLogRadius())
        checks = [((0.5, 0.25), True), ((0.25, 0.5), False)]
    elif name == "pole-series":
        seq = GeometricSequence(params.get("first", 0.5), params.get("ratio", 0.5))
        spec = HartogsDomainSpec(UnitDisc(), PoleSeriesLogRadius(
            seq, params.get("n_offset", 1), params.get("truncation", 40)))
        checks = [((0.0, 0.0), True)]
    elif name == "dense-series":
        spec = HartogsDomainSpec(UnitDisc(), DenseSeriesLogRadius(params.get("truncation", 64)))
        checks = [((0.0, 0.0), True)]
    elif name == "laurent-hartogs":
        spec = LaurentHartogsSpec(UnitDisc(), ConstantLogRadius(params.get("u", -1.0)),
                                  ConstantLogRadius(params.get("v", 0.0)))
        checks = [((0.0, 0.5), True), ((0.0, 0.1), False)]
    elif name == "product-disc2":
        spec = HartogsDomainSpec(UnitDisc(), ConstantLogRadius(0.0))
        checks = [((0.5, 0.5), True), ((0.5, 1.0), False)]
    else:
        raise DomainError(f"unknown example family {name!r}")
    unknown = set(params) - {"first", "ratio", "n_offset", "truncation", "u", "v"}
    if unknown:
        raise DomainError(f"unknown parameters {sorted(unknown)}")
    for p, expected in checks:
        if contains(spec, p) != expected:
            raise DomainError(f"membership self-check failed for {name} at {p}")
    return spec
