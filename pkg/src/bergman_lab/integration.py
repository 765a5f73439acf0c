"""L^2 inner products of holomorphic functions on planar domains.

Three integration paths, tried in this order:

``closed-form``
    rotation-invariant domains (disc, annulus) with radial weights and
    monomials centred at 0: the Gram matrix is diagonal with explicit entries.
``boundary``
    unweighted products on a disc minus closed discs.  For holomorphic ``f``
    and ``g`` pick ``Phi`` with ``d Phi / d zbar = conj(g)``; Green's formula
    gives ``<f, g> = (1/2i) * contour integral of f * Phi dz`` over the
    positively oriented boundary.  ``Phi`` is single valued for every basis
    function (``log|z - c|^2`` handles the residue term), so the periodic
    trapezoidal rule on each circle converges geometrically.
``polar``
    weighted products: polar Gauss rule centred at 0 with the hole arcs cut
    out exactly and endpoint clustering at every arc boundary.  A scrambled
    Sobol rule is the last resort when the polar rule stalls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .domains import Annulus, DomainError, PlanarDomainSpec, UnitDisc

__all__ = [
    "QuadratureError",
    "BasisFunction",
    "Monomial",
    "NegativePower",
    "PlanarBasis",
    "ConstantWeight",
    "RadialPowerWeight",
    "FunctionWeight",
    "GramMatrix",
    "QuadResult",
    "monomial_norm_disc",
    "laurent_norm_annulus",
    "integrate_product",
    "gram_matrix",
    "polar_rule",
    "fiber_weight",
    "fiber_weight_function",
]


class QuadratureError(RuntimeError):
    """Requested tolerance not reached within the node budget."""


# ---------------------------------------------------------------------------
# basis functions


@dataclass(frozen=True)
class BasisFunction:
    """``((z - center) / scale) ** power`` for an integer ``power``.

    Negative powers are the ``NegativePower`` functions ``(r / (z - c))**k``
    with the pole at a hole center (or at a puncture when a vanishing weight
    makes them square integrable).
    """

    power: int
    center: complex = 0j
    scale: float = 1.0

    @property
    def kind(self) -> str:
        return "monomial" if self.power >= 0 else "negative-power"


def Monomial(k: int, center: complex = 0j, scale: float = 1.0) -> BasisFunction:
    if k < 0:
        raise ValueError("monomial degree must be >= 0")
    return BasisFunction(k, complex(center), float(scale))


def NegativePower(pole: complex, k: int, scale: float = 1.0) -> BasisFunction:
    if k < 1:
        raise ValueError("negative power order must be >= 1")
    return BasisFunction(-k, complex(pole), float(scale))


class PlanarBasis:
    """Vectorised evaluation of a list of :class:`BasisFunction`."""

    def __init__(self, functions):
        self.functions = tuple(functions)
        if len(set(self.functions)) != len(self.functions):
            raise ValueError("basis functions must be pairwise distinct")
        self.power = np.array([f.power for f in self.functions], dtype=float)
        self.center = np.array([f.center for f in self.functions], dtype=complex)
        self.scale = np.array([f.scale for f in self.functions], dtype=float)

    def __len__(self):
        return len(self.functions)

    def _diff(self, z, anchor=0j):
        # z - c computed as (anchor - c) + offset keeps relative accuracy on tiny circles
        z = np.asarray(z, dtype=complex)
        return (anchor - self.center)[None, :] + z.reshape(-1)[:, None]

    def values(self, z, anchor=0j):
        d = self._diff(z, anchor)
        return self._powers(d)

    def _powers(self, d):
        # (d/s)**k for k >= 0 and (s/d)**|k| for k < 0; both stay bounded where it matters
        k = self.power
        neg = k < 0
        out = np.empty(d.shape, dtype=complex)
        out[:, ~neg] = (d[:, ~neg] / self.scale[~neg]) ** k[~neg]
        out[:, neg] = (self.scale[neg] / d[:, neg]) ** -k[neg]
        return out

    def abs_values(self, z, anchor=0j):
        """``|f(z)|`` in real arithmetic (much cheaper than complex powers)."""
        a = np.abs(self._diff(z, anchor))
        k = self.power
        neg = k < 0
        out = np.empty(a.shape)
        out[:, ~neg] = (a[:, ~neg] / self.scale[~neg]) ** k[~neg]
        with np.errstate(divide="ignore"):
            out[:, neg] = (self.scale[neg] / a[:, neg]) ** -k[neg]
        return out

    def derivatives(self, z, anchor=0j):
        d = self._diff(z, anchor)
        k, s = self.power, self.scale
        out = np.zeros(d.shape, dtype=complex)
        pos = k > 0
        out[:, pos] = k[pos] * (d[:, pos] / s[pos]) ** (k[pos] - 1) / s[pos]
        neg = k < 0
        out[:, neg] = k[neg] * (s[neg] / d[:, neg]) ** -k[neg] / d[:, neg]
        return out

    def conj_antiderivative(self, z, anchor=0j):
        """``Phi`` with ``d Phi / d zbar = conj(f)``, single valued off the poles."""
        d = self._diff(z, anchor)
        k, s = self.power, self.scale
        out = np.empty(d.shape, dtype=complex)
        dc = np.conj(d)
        pos = k >= 0
        out[:, pos] = s[pos] * (dc[:, pos] / s[pos]) ** (k[pos] + 1) / (k[pos] + 1)
        low = k <= -2
        out[:, low] = s[low] * (s[low] / dc[:, low]) ** (-k[low] - 1) / (k[low] + 1)
        one = k == -1
        out[:, one] = 2 * s[one] * np.log(np.abs(d[:, one]))
        return out


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class ConstantWeight:
    c: float = 1.0
    radial = True

    def __call__(self, z):
        return np.full(np.shape(z), self.c, dtype=float)

    def describe(self):
        return {"kind": "constant", "c": self.c}


@dataclass(frozen=True)
class RadialPowerWeight:
    """``W(z) = c * |z| ** p``."""

    c: float
    p: float
    radial = True

    def __call__(self, z):
        return self.c * np.abs(z) ** self.p

    def describe(self):
        return {"kind": "radial-power", "c": self.c, "p": self.p}


@dataclass(frozen=True)
class FunctionWeight:
    fn: object = field(compare=False)
    label: str = "function"
    radial = False

    def __call__(self, z):
        return np.asarray(self.fn(np.asarray(z, dtype=complex)), dtype=float)

    def describe(self):
        return {"kind": "function", "label": self.label}


def _radial_moment(weight, power_sum: float, r_in: float) -> float:
    """``2 pi * int_{r_in}^1 r**(power_sum + 1) W(r) dr`` for radial weights."""
    if weight is None or isinstance(weight, ConstantWeight):
        c = 1.0 if weight is None else weight.c
        e = power_sum + 2
    elif isinstance(weight, RadialPowerWeight):
        c, e = weight.c, power_sum + 2 + weight.p
    else:
        raise TypeError("closed form needs a constant or radial-power weight")
    if e == 0:
        if r_in == 0:
            return math.inf
        return 2 * math.pi * c * -math.log(r_in)
    if r_in == 0:
        return 2 * math.pi * c / e if e > 0 else math.inf
    # (1 - r_in**e) / e, written to stay accurate for large |e|
    return 2 * math.pi * c * -math.expm1(e * math.log(r_in)) / e


def monomial_norm_disc(k: int) -> float:
    """``||z^k||^2`` over the unit disc: ``pi / (k + 1)``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return math.pi / (k + 1)


def laurent_norm_annulus(k: int, r_inner: float) -> float:
    """``||z^k||^2`` over ``{r_inner < |z| < 1}`` for any integer ``k``."""
    if not 0 < r_inner < 1:
        raise ValueError("r_inner must lie in (0, 1)")
    return _radial_moment(None, 2 * k, r_inner)


# ---------------------------------------------------------------------------
# quadrature rules


def _circle_nodes(n):
    t = 2 * np.pi * np.arange(n) / n
    return np.exp(1j * t)


POINT_HOLE_RADIUS = 1e-18


def _is_point_hole(h):
    return h.radius < POINT_HOLE_RADIUS


def _boundary_gram(basis: PlanarBasis, spec: PlanarDomainSpec, n_outer, n_holes):
    """Green's-formula Gram matrix with the given trapezoid sizes per circle.

    Holes below ``POINT_HOLE_RADIUS`` are handled by the limit of their
    circle integral: only the first-order pole ``s / (z - c)`` sees the hole,
    through ``-pi * s * Phi_j(c)`` off the diagonal and ``-2 pi s^2 log r``
    on it.  The neglected terms are ``O(r)``.
    """
    G = np.zeros((len(basis), len(basis)), dtype=complex)
    e = _circle_nodes(n_outer)
    F = basis.values(e)
    P = basis.conj_antiderivative(e)
    dz = 1j * e * (2 * np.pi / n_outer)
    G += (F * dz[:, None]).T @ P
    for h, n in zip(spec.holes, n_holes):
        if _is_point_hole(h):
            rows = np.flatnonzero((basis.center == h.center) & (basis.power < 0))
            if rows.size == 0:
                continue
            if rows.size > 1 or basis.power[rows[0]] != -1:
                raise DomainError("point-like holes carry only the first-order pole")
            i = rows[0]
            s_i = basis.scale[i]
            with np.errstate(divide="ignore", invalid="ignore"):
                phi_c = basis.conj_antiderivative(np.array([h.center]))[0]
            others = np.arange(len(basis)) != i
            G[i, others] += -np.pi * s_i * phi_c[others] * 2j
            G[i, i] += -2 * np.pi * s_i ** 2 * h.log_radius * 2j
            continue
        e = _circle_nodes(n)
        off = h.radius * e
        F = basis.values(off, anchor=h.center)
        P = basis.conj_antiderivative(off, anchor=h.center)
        dz = -1j * off * (2 * np.pi / n)   # clockwise
        G += (F * dz[:, None]).T @ P
    return G / 2j


def _gl01(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1), 0.5 * w


def _clustered(a, b, n):
    """Nodes on [a, b] clustered like sqrt at both ends (sin^2 substitution)."""
    s, w = _gl01(n)
    x = a + (b - a) * np.sin(0.5 * np.pi * s) ** 2
    jac = (b - a) * 0.5 * np.pi * np.sin(np.pi * s)
    return x, w * jac


def polar_rule(spec: PlanarDomainSpec, n_r: int, n_t: int):
    """Nodes and weights for ``int_D F dA`` on a disc minus closed discs.

    Radii are split at every ``|c| +- r``; on each circle the hole arcs are
    removed exactly and the remaining arcs get clustered Gauss rules (a full
    circle gets the trapezoidal rule).
    """
    holes = spec.holes
    brk = {0.0, 1.0}
    for h in holes:
        for b in (abs(h.center) - h.radius, abs(h.center) + h.radius):
            if 0 < b < 1:
                brk.add(b)
    brk = sorted(brk)
    zs, ws = [], []
    for a, b in zip(brk[:-1], brk[1:]):
        rho, wr = _clustered(a, b, n_r)
        for r, w_r in zip(rho, wr):
            arcs = []  # excluded (lo, hi) in angle
            full = False
            for h in holes:
                c = abs(h.center)
                if c == 0:
                    if r <= h.radius:
                        full = True
                    continue
                kap = (r * r + c * c - h.radius ** 2) / (2 * r * c)
                if kap <= -1:
                    full = True
                elif kap < 1:
                    half = math.acos(kap)
                    mid = math.atan2(h.center.imag, h.center.real)
                    arcs.append((mid - half, mid + half))
            if full:
                continue
            if not arcs:
                t = 2 * np.pi * np.arange(n_t) / n_t
                zs.append(r * np.exp(1j * t))
                ws.append(np.full(n_t, w_r * r * 2 * np.pi / n_t))
                continue
            arcs.sort()
            start = arcs[0][1]
            for i in range(len(arcs)):
                lo = arcs[i][1]
                hi = arcs[i + 1][0] if i + 1 < len(arcs) else arcs[0][0] + 2 * np.pi
                if hi <= lo:
                    continue
                t, wt = _clustered(lo, hi, n_t)
                zs.append(r * np.exp(1j * t))
                ws.append(wt * w_r * r)
            del start
    return np.concatenate(zs), np.concatenate(ws)


def _qmc_rule(spec, n, seed):
    sob = qmc.Sobol(2, scramble=True, seed=seed)
    u = sob.random(n)
    z = (2 * u[:, 0] - 1) + 1j * (2 * u[:, 1] - 1)
    ok = spec.inside(z)
    return z[ok], np.full(int(ok.sum()), 4.0 / n)


# ---------------------------------------------------------------------------
# inner products and Gram matrices


@dataclass
class QuadResult:
    value: complex
    error: float
    path: str


@dataclass
class GramMatrix:
    """Hermitian matrix of L^2 inner products of ``basis`` on ``spec``."""

    basis: PlanarBasis
    entries: np.ndarray
    weight: object
    error: float
    path: str
    spec: PlanarDomainSpec = None

    def check(self, herm_tol=1e-12, psd_tol=1e-10):
        G = self.entries
        if np.max(np.abs(G - G.conj().T), initial=0.0) > herm_tol * max(1.0, np.abs(G).max()):
            raise ValueError("Gram matrix is not Hermitian")
        ev = np.linalg.eigvalsh(G)
        if ev.size and ev[0] < -psd_tol * np.trace(G).real:
            raise ValueError(f"Gram matrix is not positive semidefinite (min eig {ev[0]:.3e})")
        return ev


def _radial_shape(spec):
    """Inner radius if ``spec`` is a disc or centred annulus up to punctures at 0."""
    if set(spec.punctures) - {0j}:
        return None
    holes = spec.holes
    if not holes:
        return 0.0
    if len(holes) == 1 and holes[0].center == 0:
        return holes[0].radius
    return None


def _closed_form_applicable(basis, spec, weight):
    return (
        _radial_shape(spec) is not None
        and (weight is None or isinstance(weight, (ConstantWeight, RadialPowerWeight)))
        and np.all(basis.center == 0)
    )


def _closed_form_gram(basis, spec, weight):
    r_in = _radial_shape(spec)
    n = len(basis)
    G = np.zeros((n, n), dtype=complex)
    for i, f in enumerate(basis.functions):
        m = _radial_moment(weight, 2 * f.power, r_in)
        if not math.isfinite(m):
            raise DomainError(f"{f} is not square integrable with this weight")
        G[i, i] = m / f.scale ** (2 * f.power)
    return G


def _hole_rate(spec, basis):
    """Crude geometric convergence factor per circle for the trapezoid rule."""
    poles = [c for c, k in zip(basis.center, basis.power) if k < 0]
    rates = []
    for h in spec.holes:
        if _is_point_hole(h):
            rates.append(0.5)
            continue
        q = 0.0
        for c in poles:
            if c == h.center:
                continue
            q = max(q, h.radius / abs(c - h.center))
        for g in spec.holes:
            if g is not h and not _is_point_hole(g):
                q = max(q, h.radius / (abs(g.center - h.center) - g.radius))
        q = max(q, h.radius / (1 - abs(h.center)))
        rates.append(min(q, 0.99))
    return rates


def _boundary_path(basis, spec, tol, max_nodes=2 ** 16):
    deg = int(np.max(np.abs(basis.power), initial=0))
    poles = np.abs(basis.center[basis.power < 0])
    rho = max([abs(h.center) + h.radius for h in spec.holes] + [0.0])
    n_out = 2 * deg + 32
    if rho > 0:
        n_out += int(math.ceil(math.log(1e-17) / math.log(rho)))
    n_out = max(64, n_out)
    rates = _hole_rate(spec, basis)
    n_h = [max(32, 2 * deg + 16 + int(math.ceil(math.log(1e-17) / math.log(max(q, 1e-3)))))
           for q in rates]
    del poles
    G = _boundary_gram(basis, spec, n_out, n_h)
    while True:
        n_out2, n_h2 = 2 * n_out, [2 * n for n in n_h]
        G2 = _boundary_gram(basis, spec, n_out2, n_h2)
        err = float(np.max(np.abs(G2 - G)))
        # relative to the diagonal so that tiny-hole functions are judged fairly
        d = np.sqrt(np.abs(np.diag(G2)))
        rel = float(np.max(np.abs(G2 - G) / np.outer(d, d)))
        if rel <= max(tol, 1e-14):
            return G2, err
        if n_out2 > max_nodes:
            raise QuadratureError(f"boundary rule did not reach tol {tol:g} (rel err {rel:.2e})")
        G, n_out, n_h = G2, n_out2, n_h2


def _weighted_gram(basis, spec, weight, tol, n_start=24, max_nodes=2 ** 21):
    if any(_is_point_hole(h) for h in spec.holes):
        raise DomainError("weighted quadrature needs holes of resolvable size")
    def build(n_r, n_t):
        z, w = polar_rule(spec, n_r, n_t)
        F = basis.values(z)
        ww = w * weight(z)
        return (F * ww[:, None]).T @ F.conj(), len(z)

    deg = int(np.max(np.abs(basis.power), initial=0))
    n_r, n_t = max(n_start, deg // 2 + 8), max(2 * n_start, deg + 16)
    G, _ = build(n_r, n_t)
    while True:
        n_r, n_t = 2 * n_r, 2 * n_t
        G2, m = build(n_r, n_t)
        err = float(np.max(np.abs(G2 - G)))
        if err <= tol:
            return G2, err, "polar"
        if m > max_nodes:
            break
        G = G2
    # low-discrepancy fallback with randomized error estimate
    reps = []
    for seed in range(4):
        z, w = _qmc_rule(spec, 2 ** 18, seed)
        F = basis.values(z)
        reps.append((F * (w * weight(z))[:, None]).T @ F.conj())
    reps = np.array(reps)
    G = reps.mean(axis=0)
    err = float(np.max(np.abs(reps.std(axis=0))) / 2)
    if err > tol:
        raise QuadratureError(f"weighted quadrature did not reach tol {tol:g} (err {err:.2e})")
    return G, err, "qmc"


def gram_matrix(basis, spec: PlanarDomainSpec, weight=None, tol: float | None = None
                ) -> GramMatrix:
    """All pairwise inner products ``<f_i, f_j>`` (with optional weight).

    Rotation-invariant cases come out exactly diagonal; the result is
    symmetrised so that ``G[i, j] == conj(G[j, i])`` holds exactly.
    """
    if not isinstance(basis, PlanarBasis):
        basis = PlanarBasis(basis)
    if tol is None:
        tol = 1e-10 if weight is None else 1e-8
    if _closed_form_applicable(basis, spec, weight):
        G, err, path = _closed_form_gram(basis, spec, weight), 0.0, "closed-form"
    elif weight is None or isinstance(weight, ConstantWeight):
        for f in basis.functions:
            if f.power < 0 and not any(abs(f.center - h.center) < h.radius or f.center == h.center
                                       for h in spec.holes):
                raise DomainError(f"pole of {f} is not inside a deleted hole")
        c = 1.0 if weight is None else weight.c
        G, err = _boundary_path(basis, spec, tol)
        G, err, path = c * G, c * err, "boundary"
    else:
        G, err, path = _weighted_gram(basis, spec, weight, tol)
    G = 0.5 * (G + G.conj().T)
    return GramMatrix(basis, G, weight, err, path, spec)


def integrate_product(f: BasisFunction, g: BasisFunction, spec: PlanarDomainSpec,
                      weight=None, tol: float = 1e-10) -> QuadResult:
    """``int_D f * conj(g) * W dA`` with the cheapest applicable path."""
    if f == g:
        gm = gram_matrix([f], spec, weight, tol)
        return QuadResult(complex(gm.entries[0, 0]), gm.error, gm.path)
    gm = gram_matrix([f, g], spec, weight, tol)
    return QuadResult(complex(gm.entries[0, 1]), gm.error, gm.path)


# ---------------------------------------------------------------------------
# fiber weights


def fiber_weight(spec, nu: int, z):
    """Integral of ``|w|^(2 nu)`` over the fiber above ``z``.

    Hartogs fibers ``|w| < R(z)``: ``pi R^(2nu+2) / (nu+1)``.  Laurent fibers
    ``e^u < |w| < e^-v``: ``2 pi (e^{-(2nu+2) v} - e^{(2nu+2) u}) / (2nu+2)``
    and ``2 pi (-v - u)`` for ``nu = -1``.
    """
    from .domains import HartogsDomainSpec, LaurentHartogsSpec

    z = np.asarray(z, dtype=complex)
    if isinstance(spec, HartogsDomainSpec):
        if nu < 0:
            raise DomainError("Hartogs fibers need nu >= 0")
        u, _ = spec.log_radius.evaluate(z)
        return math.pi * np.exp(-(2 * nu + 2) * u) / (nu + 1)
    if isinstance(spec, LaurentHartogsSpec):
        u, _ = spec.u.evaluate(z)
        v, _ = spec.v.evaluate(z)
        if nu == -1:
            return 2 * math.pi * (-v - u)
        e = 2 * nu + 2
        return 2 * math.pi * (np.exp(-e * v) - np.exp(e * u)) / e
    raise TypeError("fiber weights need a Hartogs or Laurent-Hartogs spec")


def fiber_weight_function(spec, nu: int):
    """The fiber weight for ``nu`` as a weight object (closed form when possible)."""
    from .domains import (ConstantLogRadius, HartogsDomainSpec, LaurentHartogsSpec,
                          TriangleLogRadius)

    if isinstance(spec, HartogsDomainSpec):
        u = spec.log_radius
        if isinstance(u, ConstantLogRadius):
            return ConstantWeight(float(fiber_weight(spec, nu, 0.0)))
        if isinstance(u, TriangleLogRadius):
            return RadialPowerWeight(math.pi / (nu + 1), 2 * nu + 2)
    elif isinstance(spec, LaurentHartogsSpec):
        if isinstance(spec.u, ConstantLogRadius) and isinstance(spec.v, ConstantLogRadius):
            return ConstantWeight(float(fiber_weight(spec, nu, 0.0)))
    return FunctionWeight(lambda z, _s=spec, _n=nu: fiber_weight(_s, _n, z), f"fiber nu={nu}")
