"""Domain specifications: membership, boundary distance and interior sampling.

Every domain family used by the package lives here:

* planar domains inside the unit disc ``E`` (disc, annulus, disc minus
  finitely many closed discs and points, Zalcman-type domains),
* balanced domains ``{h < 1}`` in ``C^n`` given by a Minkowski functional,
* Hartogs domains ``{(z, w): z in D, |w| < exp(-u(z))}`` with one fiber
  variable, and
* Laurent-Hartogs domains ``{(z, w): exp(u(z)) < |w| < exp(-v(z))}``.

Specs are immutable.  Series-defined log-radius functions are evaluated with
a truncation index and a tail bound, so membership near such boundaries may
be *undecided*.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.stats import qmc

__all__ = [
    "DomainError",
    "UndecidedMembership",
    "Membership",
    "Hole",
    "Disc",
    "GeometricSequence",
    "PlanarDomainSpec",
    "UnitDisc",
    "Annulus",
    "DiscMinusDiscs",
    "Zalcman",
    "BalancedDomainSpec",
    "PNormBall",
    "Polydisc",
    "SpikyBalanced",
    "LogRadius",
    "ConstantLogRadius",
    "TriangleLogRadius",
    "PoleSeriesLogRadius",
    "DenseSeriesLogRadius",
    "TableLogRadius",
    "HartogsDomainSpec",
    "LaurentHartogsSpec",
    "classify",
    "contains",
    "contains_many",
    "boundary_distance",
    "sample_interior",
    "eval_log_radius",
    "to_document",
    "from_document",
    "spec_hash",
]


class DomainError(ValueError):
    """Invalid specification, or a point that is not admissible for it."""


class UndecidedMembership(DomainError):
    """The point is within the truncation tolerance of a series boundary."""


class Membership(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    UNDECIDED = "undecided"


# ---------------------------------------------------------------------------
# planar building blocks


@dataclass(frozen=True)
class Hole:
    """Closed disc removed from the unit disc.

    The radius may also be given through its logarithm; holes far below
    double-precision range then keep an exact ``log_radius`` while
    ``radius`` underflows to 0.
    """

    center: complex
    radius: float = 0.0
    log_radius: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if self.log_radius is None:
            if not self.radius > 0:
                raise DomainError(f"hole radius must be positive: {self.radius}")
            object.__setattr__(self, "radius", float(self.radius))
            object.__setattr__(self, "log_radius", math.log(self.radius))
        else:
            object.__setattr__(self, "log_radius", float(self.log_radius))
            object.__setattr__(self, "radius", math.exp(self.log_radius))


@dataclass(frozen=True)
class Disc:
    """Closed reference disc (used for the set ``B`` of the Zalcman constructions)."""

    center: complex
    radius: float

    def contains(self, z):
        return np.abs(np.asarray(z) - self.center) <= self.radius


@dataclass(frozen=True)
class GeometricSequence:
    """``a_j = first * ratio**(j-1) * direction`` for ``j = 1, 2, ...``."""

    first: float = 0.5
    ratio: float = 0.5
    direction: complex = 1.0

    def __post_init__(self):
        if not 0 < abs(self.ratio) < 1:
            raise DomainError("geometric sequence must tend to 0 (|ratio| < 1)")
        if abs(abs(self.direction) - 1.0) > 1e-12:
            raise DomainError("direction must have modulus 1")

    def __call__(self, j: int) -> complex:
        if j < 1:
            raise DomainError("sequence index starts at 1")
        return complex(self.first * self.ratio ** (j - 1) * self.direction)

    def take(self, n: int) -> np.ndarray:
        j = np.arange(1, n + 1)
        return self.first * self.ratio ** (j - 1) * complex(self.direction)


class PlanarDomainSpec:
    """Base class for open subsets of the unit disc (dimension 1)."""

    dim = 1
    family = "planar"

    @property
    def holes(self) -> tuple[Hole, ...]:
        return ()

    @property
    def punctures(self) -> tuple[complex, ...]:
        return ()

    @property
    def rotation_invariant(self) -> bool:
        return False

    def _check_geometry(self):
        holes = self.holes
        for h in holes:
            if not math.isfinite(h.log_radius):
                raise DomainError(f"hole radius must be positive: {h}")
            if abs(h.center) + h.radius >= 1:
                raise DomainError(f"hole closure must lie in the open unit disc: {h}")
        for i in range(len(holes)):
            for j in range(i + 1, len(holes)):
                a, b = holes[i], holes[j]
                if abs(a.center - b.center) <= a.radius + b.radius:
                    raise DomainError(f"hole closures intersect: {a}, {b}")
        for p in self.punctures:
            if abs(p) >= 1:
                raise DomainError(f"puncture outside the unit disc: {p}")
            for h in holes:
                if abs(p - h.center) <= h.radius:
                    raise DomainError(f"puncture {p} lies in hole {h}")

    def inside(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        ok = np.abs(z) < 1
        for h in self.holes:
            ok &= np.abs(z - h.center) > h.radius
        for p in self.punctures:
            ok &= z != p
        return ok

    def distance(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        d = 1 - np.abs(z)
        for h in self.holes:
            d = np.minimum(d, np.abs(z - h.center) - h.radius)
        for p in self.punctures:
            d = np.minimum(d, np.abs(z - p))
        return d


@dataclass(frozen=True)
class UnitDisc(PlanarDomainSpec):
    family = "unit-disc"

    @property
    def rotation_invariant(self):
        return True


@dataclass(frozen=True)
class Annulus(PlanarDomainSpec):
    r_inner: float = 0.5
    family = "annulus"

    def __post_init__(self):
        if not 0 < self.r_inner < 1:
            raise DomainError("annulus inner radius must lie in (0, 1)")

    @property
    def holes(self):
        return (Hole(0j, float(self.r_inner)),)

    @property
    def rotation_invariant(self):
        return True


@dataclass(frozen=True)
class DiscMinusDiscs(PlanarDomainSpec):
    hole_list: tuple[Hole, ...] = ()
    puncture_list: tuple[complex, ...] = ()
    family = "disc-minus-discs"

    def __post_init__(self):
        object.__setattr__(
            self, "hole_list",
            tuple(h if isinstance(h, Hole) else Hole(*h) for h in self.hole_list))
        object.__setattr__(self, "puncture_list", tuple(complex(p) for p in self.puncture_list))
        self._check_geometry()

    @property
    def holes(self):
        return self.hole_list

    @property
    def punctures(self):
        return self.puncture_list


@dataclass(frozen=True)
class Zalcman(PlanarDomainSpec):
    """Unit disc minus closed discs ``(a_j, r_j)`` accumulating at 0.

    Only ``len(radii)`` holes are materialised; the origin is optionally a
    puncture.  ``reference_disc`` is the closed disc ``B`` with ``0`` on its
    boundary that every hole must avoid.
    """

    centers: GeometricSequence = field(default_factory=GeometricSequence)
    radii: tuple[float, ...] = ()
    include_origin_puncture: bool = True
    reference_disc: Disc | None = None
    log_radii: tuple[float, ...] | None = None
    family = "zalcman"

    def __post_init__(self):
        if self.log_radii is None:
            if any(not r > 0 for r in self.radii):
                raise DomainError("Zalcman radii must be positive")
            object.__setattr__(self, "log_radii", tuple(math.log(r) for r in self.radii))
        else:
            object.__setattr__(self, "log_radii", tuple(float(x) for x in self.log_radii))
        object.__setattr__(self, "radii", tuple(math.exp(x) for x in self.log_radii))
        a = self.centers.take(len(self.radii))
        if np.any(np.abs(a) >= 1) or np.any(a == 0):
            raise DomainError("Zalcman centers must lie in the punctured unit disc")
        self._check_geometry()
        B = self.reference_disc
        if B is not None:
            if abs(abs(B.center) - B.radius) > 1e-12:
                raise DomainError("reference disc must have 0 on its boundary")
            for h in self.holes:
                if abs(h.center - B.center) <= h.radius + B.radius:
                    raise DomainError(f"hole {h} meets the reference disc")

    @property
    def holes(self):
        a = self.centers.take(len(self.radii))
        return tuple(Hole(complex(c), log_radius=x) for c, x in zip(a, self.log_radii))

    @property
    def punctures(self):
        return (0j,) if self.include_origin_puncture else ()


# ---------------------------------------------------------------------------
# balanced domains


class BalancedDomainSpec:
    """``D = {h < 1}`` for an absolutely homogeneous Minkowski functional ``h``."""

    family = "balanced"
    dim = 2
    reinhardt = False

    def minkowski(self, z) -> np.ndarray:
        raise NotImplementedError

    @property
    def lower_bound_constant(self) -> float:
        raise NotImplementedError

    def inside(self, z):
        return self.minkowski(z) < 1


@dataclass(frozen=True)
class PNormBall(BalancedDomainSpec):
    p: float = 2.0
    dim: int = 2
    family = "p-norm-ball"
    reinhardt = True

    def __post_init__(self):
        if not self.p >= 1:
            raise DomainError("p-norm balls need p >= 1")

    def minkowski(self, z):
        a = np.abs(np.asarray(z, dtype=complex))
        return np.sum(a ** self.p, axis=-1) ** (1.0 / self.p)

    @property
    def lower_bound_constant(self):
        return self.dim ** min(0.0, 1.0 / self.p - 0.5)


@dataclass(frozen=True)
class Polydisc(BalancedDomainSpec):
    dim: int = 2
    family = "polydisc"
    reinhardt = True

    def minkowski(self, z):
        return np.max(np.abs(np.asarray(z, dtype=complex)), axis=-1)

    @property
    def lower_bound_constant(self):
        return 1.0 / math.sqrt(self.dim)


@dataclass(frozen=True)
class SpikyBalanced(BalancedDomainSpec):
    """``h(z) = max(|z|, kappa * prod_j |z2 - a_j z1|**alpha_j)`` on ``C^2``.

    The weights sum to one so ``h`` is absolutely homogeneous; ``log h`` is a
    maximum of plurisubharmonic functions, hence the domain is pseudoconvex.
    Near the lines ``z2 = a_j z1`` the domain reaches out to the unit ball.
    """

    a: tuple[complex, ...] = (0.0, 1.0, -1.0, 1j)
    alpha: tuple[float, ...] = (0.25, 0.25, 0.25, 0.25)
    kappa: float = 2.0
    family = "spiky-balanced"

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(complex(x) for x in self.a))
        object.__setattr__(self, "alpha", tuple(float(x) for x in self.alpha))
        if len(self.a) != len(self.alpha) or not self.a:
            raise DomainError("a and alpha must be nonempty and of equal length")
        if any(x <= 0 for x in self.alpha) or abs(sum(self.alpha) - 1) > 1e-12:
            raise DomainError("alpha must be positive and sum to 1")
        if self.kappa <= 0:
            raise DomainError("kappa must be positive")

    @property
    def dim(self):
        return 2

    def minkowski(self, z):
        z = np.asarray(z, dtype=complex)
        z1, z2 = z[..., 0], z[..., 1]
        logp = np.zeros(z1.shape)
        with np.errstate(divide="ignore"):
            for aj, al in zip(self.a, self.alpha):
                logp = logp + al * np.log(np.abs(z2 - aj * z1))
        spike = self.kappa * np.exp(logp)
        return np.maximum(np.sqrt(np.abs(z1) ** 2 + np.abs(z2) ** 2), spike)

    @property
    def lower_bound_constant(self):
        return 1.0


# ---------------------------------------------------------------------------
# log-radius functions for Hartogs and Laurent-Hartogs domains


class LogRadius:
    """A function ``u`` on a planar base; fiber radius is ``exp(-u)``.

    ``evaluate`` returns ``(value, tail)`` such that the true value lies in
    ``[value - tail, value + tail]``; ``bracket`` returns the tightest known
    enclosure ``(lo, hi)``.
    """

    kind = "abstract"
    exact = True

    def evaluate(self, z, truncation: int | None = None):
        raise NotImplementedError

    def bracket(self, z, truncation: int | None = None):
        value, tail = self.evaluate(z, truncation)
        return value - tail, value + tail

    def lower_bound(self) -> float:
        """A constant ``C`` with ``u > C`` on the base (``-inf`` if unknown)."""
        return -math.inf

    def singular_points(self) -> tuple[complex, ...]:
        return ()


@dataclass(frozen=True)
class ConstantLogRadius(LogRadius):
    c: float = 0.0
    kind = "constant"

    def evaluate(self, z, truncation=None):
        z = np.asarray(z, dtype=complex)
        return np.full(z.shape, float(self.c)), np.zeros(z.shape)

    def lower_bound(self):
        return float(self.c)


@dataclass(frozen=True)
class TriangleLogRadius(LogRadius):
    """``u(z) = -log|z|``: the Hartogs triangle ``|w| < |z|``."""

    kind = "triangle"

    def evaluate(self, z, truncation=None):
        z = np.asarray(z, dtype=complex)
        if np.any(z == 0):
            raise DomainError("u = -log|z| is infinite at z = 0")
        return -np.log(np.abs(z)), np.zeros(z.shape)

    def lower_bound(self):
        return 0.0

    def singular_points(self):
        return (0j,)


@dataclass(frozen=True)
class PoleSeriesLogRadius(LogRadius):
    """``u = log sum_j (a_j / (2|z - a_j|))**n_j`` with ``n_j = j + n_offset``.

    ``a_j`` is a real geometric sequence in ``(0, 1)``.  The partial sum
    ``S_J`` is increasing in ``J``; the tail is bounded by
    ``q**n_{J+1} / (1 - q)`` where ``q`` bounds every ratio
    ``a_j / (2|z - a_j|)`` for ``j > J``.
    """

    centers: GeometricSequence = field(default_factory=GeometricSequence)
    n_offset: int = 1
    truncation: int = 60
    kind = "pole-series"
    exact = False

    def __post_init__(self):
        c = self.centers
        if not (0 < c.first < 1 and 0 < c.ratio < 1 and c.direction == 1):
            raise DomainError("pole centers must form a decreasing sequence in (0, 1)")
        if self.n_offset < 0:
            raise DomainError("n_j >= j requires n_offset >= 0")
        # value at 0 is log sum 2**-n_j = log(2**-n_offset / (1 - 1/2)) ... must be < 0
        if sum(0.5 ** (j + self.n_offset) for j in range(1, 200)) >= 1:
            raise DomainError("sum (1/2)**n_j must be < 1 so that u(0) < 0")

    def n(self, j):
        return np.asarray(j) + self.n_offset

    def singular_points(self):
        return tuple(complex(a) for a in self.centers.take(self.truncation))

    def partial_sum(self, z, J):
        z = np.asarray(z, dtype=complex)
        a = self.centers.take(J)
        d = np.abs(z[..., None] - a)
        if np.any(d == 0):
            raise DomainError("u is +inf at the centers a_j (fiber radius 0)")
        ratios = a / (2 * d)
        return np.sum(ratios ** self.n(np.arange(1, J + 1)), axis=-1)

    def tail_bound(self, z, J):
        z = np.asarray(z, dtype=complex)
        a_next = self.centers(J + 1).real
        modz = np.abs(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            q_far = np.where(modz > a_next, a_next / (2 * (modz - a_next)), np.inf)
        q = np.where(z.real <= 0, np.minimum(0.5, q_far), q_far)
        n_next = self.n(J + 1)
        with np.errstate(over="ignore", invalid="ignore"):
            t = np.where(q < 1, q ** n_next / (1 - q), np.inf)
        return t

    def evaluate(self, z, truncation=None):
        J = truncation or self.truncation
        S = self.partial_sum(z, J)
        T = self.tail_bound(z, J)
        return np.log(S), np.log1p(T / S)

    def bracket(self, z, truncation=None):
        value, tail = self.evaluate(z, truncation)
        return value, value + tail

    def lower_bound(self):
        a1 = self.centers.first
        return (1 + self.n_offset) * math.log(a1 / (2 * (1 + a1)))


@lru_cache(maxsize=8)
def _dense_points(count: int) -> np.ndarray:
    """Enumeration of points dense in ``E \\ {0}``: shifted dyadic grids by level."""
    pts: list[complex] = []
    level = 1
    while len(pts) < count:
        h = 2.0 ** -level
        k = np.arange(-2 ** level, 2 ** level + 1)
        x, y = np.meshgrid((k + 1 / 3) * h, (k + 1 / 7) * h)
        z = (x + 1j * y).ravel()
        z = z[(np.abs(z) < 1) & (z != 0)]
        z = z[np.lexsort((np.angle(z), np.abs(z)))]
        pts.extend(z.tolist())
        level += 1
    return np.array(pts[:count])


@dataclass(frozen=True)
class DenseSeriesLogRadius(LogRadius):
    """``u = exp(sum_j alpha_j log(|z - a_j| / 2))`` with ``a_j`` dense in ``E \\ {0}``.

    Weights are ``alpha_j = 2**-j / (1 + |log|a_j||)`` so that
    ``sum alpha_j log|a_j| > -inf``.  Every tail term is negative, so the
    partial value ``u_J`` is an upper bound and ``u`` lies in ``(0, u_J]``.
    """

    truncation: int = 400
    kind = "dense-series"
    exact = False

    def points(self, J=None):
        return _dense_points(J or self.truncation)

    def weights(self, J=None):
        a = self.points(J)
        j = np.arange(1, len(a) + 1)
        return 2.0 ** -j / (1 + np.abs(np.log(np.abs(a))))

    def singular_points(self):
        return ()

    def evaluate(self, z, truncation=None):
        J = truncation or self.truncation
        z = np.asarray(z, dtype=complex)
        a, al = self.points(J), self.weights(J)
        with np.errstate(divide="ignore"):
            phi = np.sum(al * np.log(np.abs(z[..., None] - a) / 2), axis=-1)
        u = np.exp(phi)
        return u, u

    def bracket(self, z, truncation=None):
        u, _ = self.evaluate(z, truncation)
        return np.zeros_like(u), u

    def lower_bound(self):
        return 0.0


@dataclass(frozen=True)
class TableLogRadius(LogRadius):
    """Bilinear interpolation of tabulated ``u`` on a Cartesian grid.

    Plurisubharmonicity of the table is an unchecked assumption.
    """

    x: tuple[float, ...] = (-1.0, 1.0)
    y: tuple[float, ...] = (-1.0, 1.0)
    values: tuple[tuple[float, ...], ...] = ((0.0, 0.0), (0.0, 0.0))
    kind = "table"

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(map(float, self.x)))
        object.__setattr__(self, "y", tuple(map(float, self.y)))
        object.__setattr__(self, "values", tuple(tuple(map(float, r)) for r in self.values))
        if np.asarray(self.values).shape != (len(self.x), len(self.y)):
            raise DomainError("table values must have shape (len(x), len(y))")

    def evaluate(self, z, truncation=None):
        z = np.asarray(z, dtype=complex)
        f = RegularGridInterpolator((self.x, self.y), np.asarray(self.values),
                                    bounds_error=False, fill_value=None)
        pts = np.stack([z.real.ravel(), z.imag.ravel()], axis=-1)
        return f(pts).reshape(z.shape), np.zeros(z.shape)

    def lower_bound(self):
        return float(np.min(self.values))


# ---------------------------------------------------------------------------
# Hartogs and Laurent-Hartogs domains


@dataclass(frozen=True)
class HartogsDomainSpec:
    """``{(z, w) : z in base, |w| < exp(-u(z))}`` (one fiber variable)."""

    base: PlanarDomainSpec = field(default_factory=UnitDisc)
    log_radius: LogRadius = field(default_factory=ConstantLogRadius)
    family = "hartogs"
    dim = 2
    fiber_dim = 1

    def __post_init__(self):
        zs = sample_interior(self.base, 64, seed=0)
        zs = zs[~np.isin(zs, self.log_radius.singular_points())]
        lo, _ = self.log_radius.bracket(zs)
        if not np.all(np.isfinite(np.exp(-lo))):
            raise DomainError("fiber radius is unbounded on base samples")

    @property
    def radius_bound(self) -> float:
        return math.exp(-self.log_radius.lower_bound())

    def radius_bracket(self, z, truncation=None):
        lo, hi = self.log_radius.bracket(z, truncation)
        return np.exp(-hi), np.exp(-lo)


@dataclass(frozen=True)
class LaurentHartogsSpec:
    """``{(z, w) : z in base, exp(u(z)) < |w| < exp(-v(z))}``."""

    base: PlanarDomainSpec = field(default_factory=UnitDisc)
    u: LogRadius = field(default_factory=lambda: ConstantLogRadius(-1.0))
    v: LogRadius = field(default_factory=lambda: ConstantLogRadius(0.0))
    family = "laurent-hartogs"
    dim = 2
    fiber_dim = 1

    def __post_init__(self):
        if not math.isfinite(self.u.lower_bound()) or not math.isfinite(self.v.lower_bound()):
            raise DomainError("u and v need finite lower bounds (bounded domain, u > C > -inf)")
        zs = sample_interior(self.base, 256, seed=0)
        _, u_hi = self.u.bracket(zs)
        _, v_hi = self.v.bracket(zs)
        if np.any(u_hi + v_hi >= 0):
            raise DomainError("u + v must be negative on the base")

    @property
    def radius_bound(self) -> float:
        return math.exp(-self.v.lower_bound())


# ---------------------------------------------------------------------------
# generic operations


def _as_point(spec, point) -> np.ndarray:
    p = np.atleast_1d(np.asarray(point, dtype=complex))
    if p.shape[-1] != spec.dim and not (spec.dim == 1 and p.ndim == 1):
        raise DomainError(f"point has dimension {p.shape[-1]}, domain has {spec.dim}")
    return p


def _classify_many(spec, pts):
    """Vectorised classification; returns (inside, undecided) boolean arrays."""
    if isinstance(spec, PlanarDomainSpec):
        ins = spec.inside(pts)
        return ins, np.zeros(ins.shape, bool)
    if isinstance(spec, BalancedDomainSpec):
        ins = spec.minkowski(pts) < 1
        return ins, np.zeros(ins.shape, bool)
    z, w = pts[..., 0], pts[..., 1]
    base_ok = spec.base.inside(z)
    inside = np.zeros(z.shape, bool)
    undecided = np.zeros(z.shape, bool)
    idx = np.flatnonzero(base_ok.ravel())
    zz, ww = z.ravel()[idx], np.abs(w.ravel()[idx])
    if isinstance(spec, HartogsDomainSpec):
        sing = np.isin(zz, spec.log_radius.singular_points())
        keep = ~sing
        lo, hi = spec.log_radius.bracket(zz[keep])
        r_lo, r_hi = np.exp(-hi), np.exp(-lo)
        sure = np.zeros(zz.shape, bool)
        maybe = np.zeros(zz.shape, bool)
        sure[keep] = ww[keep] < r_lo
        maybe[keep] = (ww[keep] >= r_lo) & (ww[keep] < r_hi)
    else:
        u_lo, u_hi = spec.u.bracket(zz)
        v_lo, v_hi = spec.v.bracket(zz)
        sure = (ww > np.exp(u_hi)) & (ww < np.exp(-v_hi))
        outside = (ww <= np.exp(u_lo)) | (ww >= np.exp(-v_lo))
        maybe = ~sure & ~outside
    inside.ravel()[idx] = sure
    undecided.ravel()[idx] = maybe
    return inside, undecided


def classify(spec, point) -> Membership:
    p = _as_point(spec, point)
    if spec.dim == 1:
        p = p.reshape(())
    ins, und = _classify_many(spec, p)
    if bool(und):
        return Membership.UNDECIDED
    return Membership.INSIDE if bool(ins) else Membership.OUTSIDE


def contains(spec, point) -> bool:
    """True iff ``point`` lies in the open domain.

    Raises :class:`UndecidedMembership` when a series-defined boundary cannot
    be resolved at the spec's truncation level.
    """
    m = classify(spec, point)
    if m is Membership.UNDECIDED:
        raise UndecidedMembership(f"membership of {point} undecided at this truncation")
    return m is Membership.INSIDE


def contains_many(spec, points) -> np.ndarray:
    """Vectorised membership; undecided points count as outside."""
    pts = np.asarray(points, dtype=complex)
    ins, _ = _classify_many(spec, pts)
    return ins


def _sampled_distance(spec, p, n_dirs=256, seed=0) -> float:
    """Largest radius (by bisection) for which sampled ball points stay inside."""
    rng = np.random.default_rng(seed)
    dim = 2 * spec.dim
    v = rng.standard_normal((n_dirs, dim))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    shells = np.array([1.0, 0.75, 0.5, 0.25])
    dirs = (v[:, None, :] * shells[None, :, None]).reshape(-1, dim)
    dz = dirs[:, 0::2] + 1j * dirs[:, 1::2]

    def ok(r):
        return bool(np.all(contains_many(spec, p[None, :] + r * dz)))

    lo, hi = 0.0, 1.0
    scale = getattr(spec, "radius_bound", 1.0)
    hi = 2 * max(1.0, scale)
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def boundary_distance(spec, point) -> float:
    """Lower bound on the Euclidean distance from ``point`` to the complement.

    Exact for planar domains, the Hartogs triangle, product domains and
    Euclidean balls / polydiscs; a sampled estimate otherwise.
    """
    if not contains(spec, point):
        raise DomainError(f"{point} is not in the domain")
    p = _as_point(spec, point)
    if isinstance(spec, PlanarDomainSpec):
        return float(spec.distance(p.reshape(())))
    if isinstance(spec, PNormBall) and spec.p == 2:
        return float(1 - np.linalg.norm(p))
    if isinstance(spec, Polydisc):
        return float(1 - np.max(np.abs(p)))
    if isinstance(spec, HartogsDomainSpec):
        z, w = p
        if isinstance(spec.log_radius, TriangleLogRadius) and not spec.base.holes \
                and set(spec.base.punctures) <= {0j}:
            return float(min(1 - abs(z), (abs(z) - abs(w)) / math.sqrt(2)))
        if isinstance(spec.log_radius, ConstantLogRadius):
            R = math.exp(-spec.log_radius.c)
            return float(min(spec.base.distance(z), R - abs(w)))
    return _sampled_distance(spec, p)


def _bounding_box(spec):
    if isinstance(spec, PlanarDomainSpec):
        return np.array([-1.0, -1.0]), np.array([1.0, 1.0])
    if isinstance(spec, BalancedDomainSpec):
        r = 1.0 / spec.lower_bound_constant
        return -r * np.ones(2 * spec.dim), r * np.ones(2 * spec.dim)
    R = spec.radius_bound
    return np.array([-1.0, -1.0, -R, -R]), np.array([1.0, 1.0, R, R])


def sample_interior(spec, count: int, seed: int = 0, *, min_acceptance: float = 1e-4,
                    ) -> np.ndarray:
    """Deterministic low-discrepancy interior points.

    Scrambled Sobol points in a bounding box, filtered by membership, drawn
    in fixed batches so that the first ``k`` points of a request for ``n > k``
    points equal the request for ``k`` points.  Planar domains return a
    complex vector, others an ``(count, dim)`` complex array.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    lo, hi = _bounding_box(spec)
    d = len(lo)
    sob = qmc.Sobol(d, scramble=True, seed=seed)
    accepted = []
    drawn = 0
    total = 0
    batch = 1024
    while total < count:
        u = sob.random(batch)
        drawn += batch
        x = lo + (hi - lo) * u
        pts = x[:, 0::2] + 1j * x[:, 1::2]
        if spec.dim == 1:
            pts = pts[:, 0]
        ok = contains_many(spec, pts)
        accepted.append(pts[ok])
        total += int(ok.sum())
        if drawn >= 2 ** 14 and total / drawn < min_acceptance:
            raise DomainError(f"acceptance ratio {total / drawn:.2e} below floor; degenerate spec?")
        if drawn > 2 ** 24:
            raise DomainError("sampling budget exhausted")
    return np.concatenate(accepted)[:count]


def eval_log_radius(spec: HartogsDomainSpec, z, truncation: int | None = None):
    """``(u_J(z), tail)`` for the log-radius of a Hartogs spec.

    ``z`` must lie in the base and avoid the singular points of ``u``.
    """
    z = complex(z)
    if z in spec.log_radius.singular_points():
        raise DomainError(f"u has a pole at {z}: fiber radius 0")
    if not (abs(z) < 1):
        raise DomainError(f"{z} is not in the base domain")
    value, tail = spec.log_radius.evaluate(np.array(z), truncation)
    return float(np.real(value)), float(np.real(tail))


# ---------------------------------------------------------------------------
# documents


def _cx(c):
    return [float(np.real(c)), float(np.imag(c))]


def _uncx(v):
    return complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)


def _seq_params(s: GeometricSequence):
    return {"first": s.first, "ratio": s.ratio, "direction": _cx(s.direction)}


def _seq_from(p):
    return GeometricSequence(p["first"], p["ratio"], _uncx(p["direction"]))


def _logr_params(u: LogRadius):
    if isinstance(u, ConstantLogRadius):
        return {"kind": "constant", "c": u.c}
    if isinstance(u, TriangleLogRadius):
        return {"kind": "triangle"}
    if isinstance(u, PoleSeriesLogRadius):
        return {"kind": "pole-series", "centers": _seq_params(u.centers),
                "n_offset": u.n_offset, "truncation": u.truncation}
    if isinstance(u, DenseSeriesLogRadius):
        return {"kind": "dense-series", "truncation": u.truncation}
    if isinstance(u, TableLogRadius):
        return {"kind": "table", "x": list(u.x), "y": list(u.y),
                "values": [list(r) for r in u.values]}
    raise DomainError(f"unknown log-radius {u!r}")


def _logr_from(p):
    kind = p["kind"]
    if kind == "constant":
        return ConstantLogRadius(p["c"])
    if kind == "triangle":
        return TriangleLogRadius()
    if kind == "pole-series":
        return PoleSeriesLogRadius(_seq_from(p["centers"]), p["n_offset"], p["truncation"])
    if kind == "dense-series":
        return DenseSeriesLogRadius(p["truncation"])
    if kind == "table":
        return TableLogRadius(tuple(p["x"]), tuple(p["y"]), tuple(map(tuple, p["values"])))
    raise DomainError(f"unknown log-radius kind {kind!r}")


def _params(spec) -> dict:
    if isinstance(spec, UnitDisc):
        return {}
    if isinstance(spec, Annulus):
        return {"r_inner": spec.r_inner}
    if isinstance(spec, DiscMinusDiscs):
        return {"holes": [{"center": _cx(h.center), "log_radius": h.log_radius}
                          for h in spec.holes],
                "punctures": [_cx(p) for p in spec.punctures]}
    if isinstance(spec, Zalcman):
        B = spec.reference_disc
        return {"centers": _seq_params(spec.centers), "log_radii": list(spec.log_radii),
                "include_origin_puncture": spec.include_origin_puncture,
                "reference_disc": None if B is None else {"center": _cx(B.center),
                                                          "radius": B.radius}}
    if isinstance(spec, PNormBall):
        return {"p": spec.p, "dim": spec.dim}
    if isinstance(spec, Polydisc):
        return {"dim": spec.dim}
    if isinstance(spec, SpikyBalanced):
        return {"a": [_cx(a) for a in spec.a], "alpha": list(spec.alpha), "kappa": spec.kappa}
    if isinstance(spec, HartogsDomainSpec):
        return {"base": to_document(spec.base), "log_radius": _logr_params(spec.log_radius)}
    if isinstance(spec, LaurentHartogsSpec):
        return {"base": to_document(spec.base), "u": _logr_params(spec.u),
                "v": _logr_params(spec.v)}
    raise DomainError(f"cannot serialise {spec!r}")


def spec_hash(spec) -> str:
    """Content hash of the (family, parameters) pair; independent of any seed."""
    body = json.dumps({"family": spec.family, "parameters": _params(spec)}, sort_keys=True)
    return hashlib.sha256(body.encode()).hexdigest()[:16]


def to_document(spec) -> dict:
    """JSON-ready document for a spec (round-trips through :func:`from_document`)."""
    return {"family": spec.family, "parameters": _params(spec), "id": spec_hash(spec)}


def from_document(doc: dict):
    fam, p = doc["family"], doc.get("parameters", {})
    if fam == "unit-disc":
        spec = UnitDisc()
    elif fam == "annulus":
        spec = Annulus(p["r_inner"])
    elif fam == "disc-minus-discs":
        spec = DiscMinusDiscs(tuple(Hole(_uncx(h["center"]), log_radius=h["log_radius"])
                                    for h in p["holes"]),
                              tuple(_uncx(x) for x in p.get("punctures", [])))
    elif fam == "zalcman":
        B = p.get("reference_disc")
        spec = Zalcman(_seq_from(p["centers"]), (), p.get("include_origin_puncture", True),
                       None if B is None else Disc(_uncx(B["center"]), B["radius"]),
                       tuple(p["log_radii"]))
    elif fam == "p-norm-ball":
        spec = PNormBall(p["p"], p.get("dim", 2))
    elif fam == "polydisc":
        spec = Polydisc(p.get("dim", 2))
    elif fam == "spiky-balanced":
        spec = SpikyBalanced(tuple(_uncx(a) for a in p["a"]), tuple(p["alpha"]), p["kappa"])
    elif fam == "hartogs":
        spec = HartogsDomainSpec(from_document(p["base"]), _logr_from(p["log_radius"]))
    elif fam == "laurent-hartogs":
        spec = LaurentHartogsSpec(from_document(p["base"]), _logr_from(p["u"]),
                                  _logr_from(p["v"]))
    else:
        raise DomainError(f"unknown domain family {fam!r}")
    if "id" in doc and doc["id"] != spec_hash(spec):
        raise DomainError("document id does not match its parameters")
    return spec
