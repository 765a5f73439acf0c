"""Orthonormal systems and truncated Bergman kernels.

A kernel value computed here is always ``sum_k |phi_k(z)|^2`` over a finite
orthonormal family, hence a lower bound for the true kernel that can only
grow when the family is enlarged.  Closed forms for the classical domains
serve as oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import lapack, solve_triangular

from .domains import Annulus, DomainError, PlanarDomainSpec, contains_many
from .integration import (BasisFunction, GramMatrix, PlanarBasis, _is_point_hole,
                          _closed_form_applicable, _radial_moment, _radial_shape,
                          gram_matrix)

__all__ = [
    "KernelValue",
    "OrthonormalSystem",
    "orthonormalize",
    "default_planar_basis",
    "planar_system",
    "kernel_at",
    "kernel_values",
    "converged_kernel",
    "disc_kernel",
    "annulus_kernel",
    "polydisc_kernel",
    "ball_kernel",
    "hartogs_triangle_kernel",
    "hartogs_triangle_series",
    "closed_form_kernel",
    "CLOSED_FORMS",
]

PIVOT_TOL = 1e-10


@dataclass(frozen=True)
class KernelValue:
    """A truncated kernel ``K_N(z)``: a lower bound, nondecreasing in ``N``."""

    value: float
    degree: int
    point: tuple
    monotone: bool = True
    increment: float | None = None

    def __float__(self):
        return float(self.value)


# ---------------------------------------------------------------------------
# orthonormalisation


class OrthonormalSystem:
    """Raw basis plus the triangular map that makes it orthonormal.

    With ``D = diag(G)^(1/2)`` and pivoted Cholesky
    ``(D^-1 G D^-1)[p, p] = L L^H`` the orthonormal functions are
    ``phi = L^-1 (f[p] / D[p])``.  Pivots below ``PIVOT_TOL`` (relative)
    are dropped, so ``effective_rank`` may be smaller than the basis.
    """

    def __init__(self, L, perm, scale, n, *, basis=None, spec=None, weight=None,
                 degree=None, report=None):
        self.L = L
        self.perm = perm
        self.scale = scale
        self.n = n
        self.basis = basis
        self.spec = spec
        self.weight = weight
        self.degree = degree
        self.report = report or {}

    @property
    def effective_rank(self) -> int:
        return len(self.perm)

    @property
    def coefficient_matrix(self) -> np.ndarray:
        """``A`` with ``phi = A @ f`` in the original basis order (``A G A^H = I``)."""
        r = self.effective_rank
        M = np.zeros((r, self.n), dtype=complex)
        M[np.arange(r), self.perm] = self.scale
        if self.L is None:
            return M
        return solve_triangular(self.L, M, lower=True)

    def transform(self, raw):
        """Map raw function values ``(m, n)`` to orthonormal values ``(m, rank)``."""
        raw = np.asarray(raw)
        x = raw[..., self.perm] * self.scale
        if self.L is None:           # diagonal Gram matrix
            return x
        flat = x.reshape(-1, x.shape[-1])
        out = solve_triangular(self.L, flat.T, lower=True).T
        return out.reshape(x.shape)

    def values(self, z):
        return self.transform(self.basis.values(np.ravel(z)))

    def features(self, z):
        """Orthonormal values ``(m, r)`` and gradients ``(m, r, 1)`` at planar points."""
        z = np.ravel(np.asarray(z, dtype=complex))
        F = self.transform(self.basis.values(z))
        dF = self.transform(self.basis.derivatives(z))
        return F, dF[..., None]

    def kernel(self, z):
        if self.L is None and hasattr(self.basis, "abs_values"):
            A = self.basis.abs_values(np.ravel(z))[:, self.perm] * self.scale
            return np.sum(A * A, axis=-1)
        F = self.values(z)
        return np.sum(np.abs(F) ** 2, axis=-1)


def orthonormalize(gram, rel_tol: float = PIVOT_TOL, psd_tol: float = 1e-10, **meta
                   ) -> OrthonormalSystem:
    """Pivoted Cholesky of a Gram matrix (``GramMatrix`` or Hermitian array)."""
    if isinstance(gram, GramMatrix):
        G = gram.entries
        meta.setdefault("basis", gram.basis)
        meta.setdefault("spec", gram.spec)
        meta.setdefault("weight", gram.weight)
    else:
        G = np.asarray(gram, dtype=complex)
    n = G.shape[0]
    if G.shape != (n, n):
        raise ValueError("Gram matrix must be square")
    if np.max(np.abs(G - G.conj().T), initial=0.0) > 1e-12 * max(1.0, np.abs(G).max()):
        raise ValueError("Gram matrix is not Hermitian")
    G = 0.5 * (G + G.conj().T)
    d = np.sqrt(np.real(np.diag(G)))
    if n == 0 or np.any(~(d > 0)):
        raise ValueError("Gram matrix has a nonpositive diagonal entry")
    if not np.any(G - np.diag(np.diag(G))):
        report = {"size": n, "rank": n, "min_pivot": 1.0, "min_eigenvalue": 1.0,
                  "condition": 1.0, "diagonal": True}
        return OrthonormalSystem(None, np.arange(n), 1.0 / d, n, report=report, **meta)
    Gn = G / np.outer(d, d)
    ev = np.linalg.eigvalsh(Gn)
    if ev[0] < -psd_tol * n:
        raise ValueError(f"Gram matrix is not positive semidefinite (min eig {ev[0]:.3e})")
    c, piv, rank, info = lapack.zpstrf(Gn, lower=1, tol=rel_tol)
    if info < 0:
        raise ValueError("pivoted Cholesky failed")
    rank = int(rank)
    L = np.tril(c[:rank, :rank])
    perm = piv[:rank].astype(int) - 1
    diag = np.abs(np.diag(L)) ** 2
    report = {
        "size": n,
        "rank": rank,
        "min_pivot": float(diag.min()) if rank else 0.0,
        "min_eigenvalue": float(ev[0]),
        "condition": float(ev[-1] / max(ev[0], 1e-300)),
    }
    return OrthonormalSystem(L, perm, 1.0 / d[perm], n, report=report, **meta)


# ---------------------------------------------------------------------------
# planar systems


def _hole_order(spec, h, max_order):
    if _is_point_hole(h):
        return 1
    gap = 1 - abs(h.center)
    for g in spec.holes:
        if g is not h:
            gap = min(gap, abs(g.center - h.center) - g.radius)
    q = h.radius / gap
    if q <= 0:
        return 1
    m = math.ceil(math.log(1e-17) / math.log(q))
    return int(min(max(m, 2), max_order))


def default_planar_basis(spec: PlanarDomainSpec, degree: int = 60, hole_order: int = 24):
    """Monomials ``z^0..z^degree`` plus negative powers at every hole.

    Pole orders adapt to how small a hole is compared with its distance to
    the rest of the boundary; point-like holes get the first-order pole only.
    """
    fns = [BasisFunction(k) for k in range(degree + 1)]
    if isinstance(spec, Annulus):
        r = spec.r_inner
        return fns + [BasisFunction(-k, 0j, r) for k in range(1, degree + 1)]
    for h in spec.holes:
        if _is_point_hole(h):
            fns.append(BasisFunction(-1, h.center, 1.0))
            continue
        for k in range(1, _hole_order(spec, h, hole_order) + 1):
            fns.append(BasisFunction(-k, h.center, h.radius))
    return fns


@lru_cache(maxsize=64)
def planar_system(spec: PlanarDomainSpec, degree: int = 60, hole_order: int = 24,
                  weight=None, tol: float | None = None) -> OrthonormalSystem:
    """Orthonormal system for the default basis on ``spec`` (cached per arguments)."""
    basis = PlanarBasis(default_planar_basis(spec, degree, hole_order))
    if _closed_form_applicable(basis, spec, weight):
        # rotation invariant: only the diagonal is nonzero
        norms = np.array([_radial_moment(weight, 2 * f.power, _radial_shape(spec))
                          / f.scale ** (2 * f.power) for f in basis.functions])
        if not np.all(np.isfinite(norms) & (norms > 0)):
            raise DomainError("basis is not square integrable with this weight")
        n = len(basis)
        report = {"size": n, "rank": n, "min_pivot": 1.0, "min_eigenvalue": 1.0,
                  "condition": 1.0, "diagonal": True}
        return OrthonormalSystem(None, np.arange(n), 1.0 / np.sqrt(norms), n, basis=basis,
                                 spec=spec, weight=weight, degree=degree, report=report)
    gm = gram_matrix(basis, spec, weight, tol)
    return orthonormalize(gm, degree=degree)


def _check_inside(spec, pts):
    ok = contains_many(spec, pts)
    if not np.all(ok):
        bad = np.asarray(pts)[~ok][0]
        raise DomainError(f"point {bad} is not in the domain")


def kernel_at(system: OrthonormalSystem, z) -> KernelValue:
    """``K_N(z) = sum |phi_k(z)|^2`` for one point."""
    if system.spec is not None:
        _check_inside(system.spec, np.atleast_1d(np.asarray(z, dtype=complex)))
    val = float(system.kernel(np.atleast_1d(z))[0])
    pt = tuple(np.atleast_1d(np.asarray(z, dtype=complex)).tolist())
    return KernelValue(val, system.degree, pt)


def kernel_values(system: OrthonormalSystem, points) -> np.ndarray:
    return system.kernel(np.asarray(points, dtype=complex))


def _degree_for(points, base, cap=2000):
    r = float(np.max(np.abs(points), initial=0.0))
    # z^k terms decay like |z|^(2k); keep the tail of sum (k+1)|z|^(2k) below 1e-17
    if r == 0:
        return base
    need = math.log(1e-17 * (1 - r * r) ** 2) / (2 * math.log(r)) if r < 1 else math.inf
    return int(min(max(base, math.ceil(need) + 10), cap))


def converged_kernel(spec: PlanarDomainSpec, points, degree: int | None = None,
                     step: int = 20, rtol: float = 1e-10, hole_order: int = 24,
                     max_degree: int = 800):
    """Kernel lower bounds at ``points`` with a truncation-increment estimate.

    Starting from ``degree`` (chosen from the largest ``|z|`` when omitted),
    the monomial degree is raised by ``step`` until two consecutive
    enlargements change every value by less than ``rtol`` relative.  Returns
    ``(values, degree, increment)`` where ``increment`` is the last relative
    change.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    _check_inside(spec, pts)
    if _radial_shape(spec) is not None:
        # diagonal Gram matrices: very high degrees are cheap
        max_degree = max(max_degree, 20000)
    if degree is None:
        degree = _degree_for(pts, 60, cap=max_degree)
    degree = min(degree, max_degree)
    prev = planar_system(spec, degree, hole_order).kernel(pts)
    calm = 0
    inc = math.inf
    while True:
        nxt_deg = degree + step
        if nxt_deg > max_degree:
            break
        cur = planar_system(spec, nxt_deg, hole_order).kernel(pts)
        inc = float(np.max(np.abs(cur - prev) / np.abs(cur)))
        degree, prev = nxt_deg, cur
        calm = calm + 1 if inc < rtol else 0
        if calm >= 2:
            break
    return prev, degree, inc


# ---------------------------------------------------------------------------
# closed forms


def disc_kernel(z):
    """``1 / (pi (1 - |z|^2)^2)`` on the unit disc."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1):
        raise DomainError("point outside the unit disc")
    return 1.0 / (math.pi * (1 - np.abs(z) ** 2) ** 2)


def annulus_kernel(z, r_inner: float, tol: float = 1e-17):
    """Laurent series ``sum_k |z|^(2k) / ||z^k||^2`` on ``{r < |z| < 1}``.

    Returns ``(value, tail_bound)``; terms are added on both sides until the
    geometric bound on the rest drops below ``tol`` times the partial sum.
    """
    x = abs(complex(z)) ** 2
    r2 = r_inner ** 2
    if not r2 < x < 1:
        raise DomainError("point outside the annulus")

    def norm(k):
        if k == -1:
            return 2 * math.pi * -math.log(r_inner)
        e = 2 * k + 2
        return 2 * math.pi * -math.expm1(e * math.log(r_inner)) / e

    total = 1 / norm(0) + 1 / (x * norm(-1))
    tail = 0.0
    k = 1
    while True:                                   # k >= 1
        t = x ** k / norm(k)
        total += t
        rho = x * (k + 2) / (k + 1)
        if rho < 1 and t * rho / (1 - rho) < tol * total:
            tail += t * rho / (1 - rho)
            break
        k += 1
        if k > 100000:
            raise DomainError("annulus series did not reach its tail bound")
    j = 2
    while True:                                   # k = -j <= -2
        t = x ** -j / norm(-j)
        total += t
        rho = (r2 / x) * j / (j - 1)
        if rho < 1 and t * rho / (1 - rho) < tol * total:
            tail += t * rho / (1 - rho)
            break
        j += 1
        if j > 100000:
            raise DomainError("annulus series did not reach its tail bound")
    return total, tail


def polydisc_kernel(z):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return float(np.prod(disc_kernel(z)))


def ball_kernel(z):
    """``n! / pi^n * (1 - |z|^2)^-(n+1)`` on the Euclidean unit ball of ``C^n``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    n = z.size
    s = float(np.sum(np.abs(z) ** 2))
    if s >= 1:
        raise DomainError("point outside the ball")
    return math.factorial(n) / math.pi ** n / (1 - s) ** (n + 1)


def hartogs_triangle_kernel(z, w):
    """Closed form ``1 / (pi^2 x (1 - x)^2 (1 - y)^2)``, ``x = |z|^2``, ``y = |w/z|^2``.

    This is the sum of the orthogonal series over ``z^a w^b`` (``b >= 0``,
    ``a >= -b - 1``) with ``||z^a w^b||^2 = 4 pi^2 / ((2b + 2)(2a + 2b + 4))``.
    """
    x = abs(complex(z)) ** 2
    if not 0 < abs(complex(w)) < abs(complex(z)) < 1 and not (w == 0 and 0 < x < 1):
        raise DomainError("point outside the Hartogs triangle")
    y = abs(complex(w)) ** 2 / x
    return 1.0 / (math.pi ** 2 * x * (1 - x) ** 2 * (1 - y) ** 2)


def hartogs_triangle_series(z, w, b_max: int, a_max: int) -> float:
    """Partial double series for the Hartogs triangle kernel."""
    az, aw = abs(complex(z)), abs(complex(w))
    total = 0.0
    for b in range(b_max + 1):
        a = np.arange(-b - 1, a_max + 1)
        norms = 4 * math.pi ** 2 / ((2 * b + 2) * (2 * a + 2 * b + 4))
        total += float(np.sum(az ** (2.0 * a) * aw ** (2 * b) / norms))
    return total


def _annulus_closed(point, r=0.5):
    return annulus_kernel(complex(np.ravel(point)[0]), r)[0]


CLOSED_FORMS = {
    "unit-disc": lambda p: float(disc_kernel(complex(np.ravel(p)[0]))),
    "polydisc": polydisc_kernel,
    "ball": ball_kernel,
    "hartogs-triangle": lambda p: hartogs_triangle_kernel(*np.ravel(p)),
}


def closed_form_kernel(name: str, point, **params) -> float:
    """Closed-form kernel of a built-in domain (``unit-disc``, ``annulus``,
    ``polydisc``, ``ball``, ``hartogs-triangle``)."""
    if name == "annulus":
        return _annulus_closed(point, params.get("r_inner", 0.5))
    try:
        return float(CLOSED_FORMS[name](point))
    except KeyError:
        raise DomainError(f"no closed form for {name!r}") from None
