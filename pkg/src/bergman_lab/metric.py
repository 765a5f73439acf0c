"""Bergman metric, curve lengths and geodesic upper bounds for the Bergman distance.

``beta(z; X)^2`` is the Levi form of ``log K`` applied to ``X``.  With an
orthonormal family ``phi_k`` and ``K = sum |phi_k|^2`` it is

    (K * sum_k |D_X phi_k|^2 - |sum_k D_X phi_k conj(phi_k)|^2) / K^2

where ``D_X`` is the holomorphic directional derivative.  A central
finite-difference Laplacian of ``log K`` serves as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

from .balanced import balanced_system
from .domains import (BalancedDomainSpec, DomainError, HartogsDomainSpec, LaurentHartogsSpec,
                      PlanarDomainSpec, UnitDisc, boundary_distance, contains_many,
                      sample_interior)
from .hartogs import hartogs_system
from .integration import _radial_shape
from .kernel import _degree_for, planar_system

__all__ = [
    "MetricValue",
    "GeodesicResult",
    "default_system",
    "metric_values",
    "bergman_metric_at",
    "finite_difference_metric",
    "path_length",
    "bergman_distance",
    "disc_closed_forms",
]

KERNEL_FLOOR = 1e-300


@dataclass(frozen=True)
class MetricValue:
    value: float
    point: tuple
    direction: tuple
    degree: int | None
    method: str = "analytic-series"


@dataclass
class GeodesicResult:
    """Upper bound for ``b_D(p, q)`` with the path that realises it."""

    endpoints: tuple
    bound: float
    polyline: np.ndarray
    trace: list = field(default_factory=list)     # (level, nodes, bound, mesh length)

    def summary(self):
        return {"p": _cx(self.endpoints[0]), "q": _cx(self.endpoints[1]),
                "bound": self.bound,
                "trace": [{"level": t[0], "nodes": t[1], "bound": t[2], "mesh_length": t[3]}
                          for t in self.trace]}


def _cx(p):
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    return [[float(v.real), float(v.imag)] for v in p]


def default_system(spec, points=None, degree: int | None = None):
    """A reasonable orthonormal system for metric work on ``spec`` near ``points``."""
    if isinstance(spec, PlanarDomainSpec):
        if degree is None:
            pts = np.zeros(1) if points is None else np.ravel(np.asarray(points, dtype=complex))
            if _radial_shape(spec) is not None:
                # diagonal system; derivative sums converge a little slower
                degree = int(1.2 * _degree_for(pts, 60, cap=20000))
            else:
                degree = min(_degree_for(pts, 60), 400)
        return planar_system(spec, degree)
    if isinstance(spec, (HartogsDomainSpec, LaurentHartogsSpec)):
        return hartogs_system(spec, 40, degree or 40)
    if isinstance(spec, BalancedDomainSpec):
        return balanced_system(spec, degree or 12)
    raise TypeError(f"no kernel engine for {type(spec).__name__}")


def _as_points(system, z):
    z = np.asarray(z, dtype=complex)
    if getattr(system, "dim", 1) == 1 and not hasattr(system, "blocks"):
        return np.ravel(z)
    return np.atleast_2d(z)


def metric_values(system, z, X):
    """Vectorised ``beta(z_i; X_i)`` for arrays of points and directions."""
    pts = _as_points(system, z)
    F, dF = system.features(pts)
    X = np.asarray(X, dtype=complex)
    Xv = X.reshape(len(pts), -1) if X.size == dF.shape[0] * dF.shape[2] \
        else np.broadcast_to(X.reshape(1, -1), (len(pts), dF.shape[2]))
    DX = np.einsum("mkj,mj->mk", dF, Xv)
    K = np.sum(np.abs(F) ** 2, axis=1)
    if np.any(K < KERNEL_FLOOR):
        raise DomainError("kernel below positivity floor; metric undefined at this truncation")
    S2 = np.sum(np.abs(DX) ** 2, axis=1)
    S1 = np.sum(DX * F.conj(), axis=1)
    b2 = (K * S2 - np.abs(S1) ** 2) / K ** 2
    return np.sqrt(np.maximum(b2, 0.0))


def bergman_metric_at(system, z, X=1.0) -> MetricValue:
    """``beta_D(z; X)`` from analytic derivatives of the orthonormal family."""
    spec = getattr(system, "spec", None)
    if spec is not None:
        if not contains_many(spec, np.atleast_2d(np.asarray(z, dtype=complex))
                             if getattr(spec, "dim", 1) > 1 else np.atleast_1d(z))[0]:
            raise DomainError(f"point {z} is not in the domain")
    v = float(metric_values(system, [z] if np.ndim(z) == 0 else [z], X)[0])
    return MetricValue(v, tuple(np.atleast_1d(np.asarray(z, dtype=complex)).tolist()),
                       tuple(np.atleast_1d(np.asarray(X, dtype=complex)).tolist()),
                       getattr(system, "degree", None))


def finite_difference_metric(system, z, X=1.0, h: float | None = None) -> MetricValue:
    """``beta`` from a five-point Laplacian of ``t -> log K(z + t X/|X|)``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    X = np.atleast_1d(np.asarray(X, dtype=complex))
    nx = float(np.linalg.norm(X))
    if nx == 0:
        return MetricValue(0.0, tuple(z.tolist()), tuple(X.tolist()),
                           getattr(system, "degree", None), "finite-difference")
    if h is None:
        h = 1e-4 * (1 + float(np.linalg.norm(z)))
    u = X / nx
    steps = np.array([0, h, -h, 1j * h, -1j * h])
    pts = z[None, :] + steps[:, None] * u[None, :]
    K = system.kernel(_as_points(system, pts if z.size > 1 else pts[:, 0]))
    f = np.log(K)
    b2 = (f[1:].sum() - 4 * f[0]) / (4 * h * h)
    return MetricValue(nx * math.sqrt(max(b2, 0.0)), tuple(z.tolist()), tuple(X.tolist()),
                       getattr(system, "degree", None), "finite-difference")


# ---------------------------------------------------------------------------
# lengths


def _segment_nodes(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1) / 2, w / 2


def _inside_along(spec, polyline, samples=17):
    P = np.asarray(polyline, dtype=complex)
    t = np.linspace(0, 1, samples)
    if P.ndim == 1:
        pts = (P[:-1, None] + t[None, :] * (P[1:] - P[:-1])[:, None]).ravel()
    else:
        pts = (P[:-1, None, :] + t[None, :, None] * (P[1:] - P[:-1])[:, None, :]).reshape(-1, P.shape[1])
    return contains_many(spec, pts)


def path_length(system, polyline, order: int = 8, subdivisions: int = 1,
                check: bool = True) -> float:
    """Composite Gauss rule for ``int beta(gamma(t); gamma'(t)) dt`` along a polyline."""
    P = np.asarray(polyline, dtype=complex)
    if len(P) < 2:
        return 0.0
    if subdivisions > 1:
        P = _refine(P, subdivisions)
    spec = getattr(system, "spec", None)
    if check and spec is not None and not np.all(_inside_along(spec, P)):
        raise DomainError("polyline leaves the domain")
    s, w = _segment_nodes(order)
    d = P[1:] - P[:-1]
    if P.ndim == 1:
        nodes = (P[:-1, None] + s[None, :] * d[:, None]).ravel()
        X = np.repeat(d, order)
    else:
        nodes = (P[:-1, None, :] + s[None, :, None] * d[:, None, :]).reshape(-1, P.shape[1])
        X = np.repeat(d, order, axis=0)
    beta = metric_values(system, nodes, X)
    return float(np.sum(beta.reshape(-1, order) * w[None, :]))


def _refine(P, k):
    t = np.arange(k) / k
    if P.ndim == 1:
        Q = (P[:-1, None] + t[None, :] * (P[1:] - P[:-1])[:, None]).ravel()
        return np.append(Q, P[-1])
    Q = (P[:-1, None, :] + t[None, :, None] * (P[1:] - P[:-1])[:, None, :]).reshape(-1, P.shape[1])
    return np.vstack([Q, P[-1:]])


# ---------------------------------------------------------------------------
# geodesic upper bounds


def _edge_lengths(system, A, B, order=4):
    s, w = _segment_nodes(order)
    d = B - A
    nodes = (A[:, None] + s[None, :] * d[:, None]).ravel()
    beta = metric_values(system, nodes, np.repeat(d, order))
    return np.sum(beta.reshape(-1, order) * w[None, :], axis=1)


def _visible(spec, A, B, samples=17):
    t = np.linspace(0, 1, samples)
    pts = A[:, None] + t[None, :] * (B - A)[:, None]
    return np.all(contains_many(spec, pts.ravel()).reshape(pts.shape), axis=1)


def _smooth(system, spec, poly, n_vertices=8, order=8):
    """Locally shorten a polyline by moving its interior vertices."""
    P = np.asarray(poly, dtype=complex)
    # resample by arclength in the Euclidean sense
    seg = np.abs(np.diff(P))
    s = np.concatenate([[0], np.cumsum(seg)])
    if s[-1] == 0:
        return P, 0.0
    t = np.linspace(0, s[-1], n_vertices + 1)
    Q = np.interp(t, s, P.real) + 1j * np.interp(t, s, P.imag)
    if not np.all(_inside_along(spec, Q)):
        Q = P
    p0, p1 = Q[0], Q[-1]

    def build(x):
        inner = x[0::2] + 1j * x[1::2]
        return np.concatenate([[p0], inner, [p1]])

    def objective(x):
        R = build(x)
        if not np.all(_inside_along(spec, R, samples=9)):
            return 1e6
        return path_length(system, R, order=order, check=False)

    x0 = np.empty(2 * (len(Q) - 2))
    x0[0::2], x0[1::2] = Q[1:-1].real, Q[1:-1].imag
    best = (Q, objective(x0))
    if len(x0):
        res = minimize(objective, x0, method="L-BFGS-B",
                       options={"maxiter": 60, "eps": 1e-7})
        if res.fun < best[1]:
            best = (build(res.x), float(res.fun))
    return best


def bergman_distance(spec: PlanarDomainSpec, p, q, system=None, levels=(64, 256, 1024),
                     k: int = 8, seed: int = 0, smooth: bool = True) -> GeodesicResult:
    """Upper bound for the Bergman distance between ``p`` and ``q`` (planar domains).

    For each mesh level: interior Sobol nodes plus the endpoints, edges to
    the ``k`` nearest mutually visible neighbours weighted by the metric
    length of the segment, Dijkstra, then local smoothing of the path.  The
    straight segment is always a candidate when it stays in the domain.  The
    reported trace is the running minimum over levels, so it never
    increases.
    """
    p, q = complex(p), complex(q)
    if not contains_many(spec, np.array([p, q])).all():
        raise DomainError("endpoints must lie in the domain")
    if system is None:
        system = default_system(spec, [p, q])
    if p == q:
        return GeodesicResult((p, q), 0.0, np.array([p, q]), [(0, 0, 0.0, 0.0)])
    best_len, best_poly = math.inf, None
    if _visible(spec, np.array([p]), np.array([q]))[0]:
        best_len = path_length(system, [p, q], order=16, subdivisions=4)
        best_poly = np.array([p, q])
    floor = 0.5 * min(boundary_distance(spec, p), boundary_distance(spec, q))
    trace = []
    for level, n in enumerate(levels):
        pts = sample_interior(spec, n, seed=seed + level)
        pts = pts[spec.distance(pts) >= floor]
        nodes = np.concatenate([[p, q], pts])
        tree = cKDTree(np.c_[nodes.real, nodes.imag])
        kk = min(k + 1, len(nodes))
        _, nb = tree.query(np.c_[nodes.real, nodes.imag], kk)
        I = np.repeat(np.arange(len(nodes)), kk - 1)
        J = nb[:, 1:].ravel()
        keep = I < J
        I, J = I[keep], J[keep]
        vis = _visible(spec, nodes[I], nodes[J])
        I, J = I[vis], J[vis]
        wts = _edge_lengths(system, nodes[I], nodes[J])
        W = coo_matrix((wts, (I, J)), shape=(len(nodes),) * 2).tocsr()
        dist, pred = dijkstra(W, directed=False, indices=0, return_predecessors=True)
        length = math.inf
        if np.isfinite(dist[1]):
            path, j = [1], 1
            while j != 0:
                j = pred[j]
                path.append(j)
            poly = nodes[path[::-1]]
            length = float(dist[1])
            if smooth:
                poly_s, len_s = _smooth(system, spec, poly)
                if len_s < length:
                    poly, length = poly_s, len_s
            length = path_length(system, poly, order=16, subdivisions=4)
            if length < best_len:
                best_len, best_poly = length, poly
        if math.isfinite(best_len):
            trace.append((level, int(len(nodes)), best_len, length))
    if not math.isfinite(best_len):
        raise DomainError("endpoints disconnected at mesh resolution")
    return GeodesicResult((p, q), best_len, best_poly, trace)


# ---------------------------------------------------------------------------
# unit-disc closed forms


def disc_closed_forms(z=0.0, X=None, t=None):
    """Caratheodory-Reiffen and Bergman quantities on the unit disc.

    ``gamma(z; X) = |X| / (1 - |z|^2)``, ``beta = sqrt(2) * gamma``,
    ``c^i(0, t) = atanh t``, ``b(0, t) = sqrt(2) atanh t``.
    """
    out = {}
    z = complex(z)
    if abs(z) >= 1:
        raise DomainError("point outside the unit disc")
    if X is not None:
        g = abs(complex(X)) / (1 - abs(z) ** 2)
        out["gamma"] = g
        out["beta"] = math.sqrt(2) * g
    if t is not None:
        t = abs(complex(t))
        if t >= 1:
            raise DomainError("point outside the unit disc")
        out["c_inner"] = math.atanh(t)
        out["b"] = math.sqrt(2) * math.atanh(t)
    return out
