"""Fiber-decomposed kernels of Hartogs and Laurent-Hartogs domains.

Functions ``f(z) w^nu`` with different ``nu`` are orthogonal on any domain
whose fibers are discs or annuli centred at ``w = 0``, and

    ||f w^nu||^2 = int_base |f(z)|^2 W_nu(z) dA(z)

with the fiber weight ``W_nu`` from :func:`integration.fiber_weight`.  The
kernel therefore splits as ``K(z, w) = sum_nu K_nu(z) |w|^(2 nu)`` where
``K_nu`` is the weighted Bergman kernel of the base.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .domains import (ConstantLogRadius, DomainError, HartogsDomainSpec, LaurentHartogsSpec,
                      TriangleLogRadius, UnitDisc, contains_many)
from .integration import BasisFunction, PlanarBasis, fiber_weight_function, gram_matrix
from .kernel import KernelValue, default_planar_basis, orthonormalize

__all__ = [
    "FiberSystem",
    "hartogs_system",
    "hartogs_kernel",
    "brute_force_kernel",
    "direct_product_integral",
]


class FiberSystem:
    """Orthonormal family ``psi_{nu,k}(z) w^nu`` assembled from weighted base blocks."""

    dim = 2

    def __init__(self, spec, blocks, base_degree):
        self.spec = spec
        self.blocks = blocks          # list of (nu, OrthonormalSystem)
        self.degree = base_degree

    @property
    def nus(self):
        return [nu for nu, _ in self.blocks]

    def features(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        z, w = pts[:, 0], pts[:, 1]
        Fs, dFs = [], []
        for nu, sys in self.blocks:
            psi, dpsi = sys.features(z)
            wn = (w ** nu)[:, None]
            dwn = (nu * w ** (nu - 1))[:, None] if nu != 0 else np.zeros_like(wn)
            Fs.append(psi * wn)
            dFs.append(np.stack([dpsi[..., 0] * wn, psi * dwn], axis=-1))
        return np.concatenate(Fs, axis=1), np.concatenate(dFs, axis=1)

    def block_kernels(self, z):
        """``K_nu(z)`` for every block, shape ``(m, n_blocks)``."""
        z = np.ravel(np.asarray(z, dtype=complex))
        return np.stack([sys.kernel(z) for _, sys in self.blocks], axis=-1)

    def kernel(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        Kn = self.block_kernels(pts[:, 0])
        aw = np.abs(pts[:, 1])
        powers = np.array(self.nus, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            wp = np.where(powers == 0, 1.0, aw[:, None] ** (2 * powers))
        return np.sum(Kn * wp, axis=-1)


def _block_basis(spec, nu, base_degree):
    base = spec.base
    if (isinstance(spec, HartogsDomainSpec) and isinstance(spec.log_radius, TriangleLogRadius)
            and not base.holes):
        # z^a is square integrable against |z|^(2 nu + 2) exactly when a >= -nu - 1
        return [BasisFunction(a) for a in range(-nu - 1, base_degree + 1)]
    return default_planar_basis(base, base_degree)


@lru_cache(maxsize=32)
def hartogs_system(spec, nu_max: int = 40, base_degree: int = 40) -> FiberSystem:
    """Blocks ``nu = 0..nu_max`` (Hartogs) or ``-nu_max..nu_max`` (Laurent)."""
    if isinstance(spec, HartogsDomainSpec):
        nus = range(0, nu_max + 1)
    elif isinstance(spec, LaurentHartogsSpec):
        nus = range(-nu_max, nu_max + 1)
    else:
        raise TypeError("expected a Hartogs or Laurent-Hartogs spec")
    blocks = []
    for nu in nus:
        basis = PlanarBasis(_block_basis(spec, nu, base_degree))
        gm = gram_matrix(basis, spec.base, fiber_weight_function(spec, nu))
        blocks.append((nu, orthonormalize(gm, degree=base_degree)))
    return FiberSystem(spec, blocks, base_degree)


def hartogs_kernel(spec, point, nu_max: int = 40, base_degree: int = 40) -> KernelValue:
    """Truncated kernel ``sum_nu K_nu(z) |w|^(2 nu)`` at ``point = (z, w)``.

    ``increment`` is the contribution of the outermost fiber block(s), a
    proxy for the neglected tail in ``nu``.
    """
    p = np.asarray(point, dtype=complex).reshape(1, 2)
    if not contains_many(spec, p)[0]:
        raise DomainError(f"point {point} is not in the domain")
    sys = hartogs_system(spec, nu_max, base_degree)
    Kn = sys.block_kernels(p[:, 0])[0]
    aw = abs(p[0, 1])
    terms = np.array([Kn[i] * (aw ** (2 * nu) if nu else 1.0)
                      for i, nu in enumerate(sys.nus)])
    value = float(terms.sum())
    edge = [i for i, nu in enumerate(sys.nus) if abs(nu) == nu_max]
    inc = float(terms[edge].sum() / value) if value > 0 else math.inf
    return KernelValue(value, base_degree, tuple(p[0].tolist()), increment=inc)


# ---------------------------------------------------------------------------
# brute-force reference in four real dimensions


def _gauss(a, b, n):
    x, w = np.polynomial.legendre.leggauss(n)
    return a + (b - a) * (x + 1) / 2, w * (b - a) / 2


def _product_rule(spec, n_r=24, n_t=32):
    """Tensor polar rule on ``{(z, w)}`` for specs over the unit disc."""
    if not isinstance(spec.base, UnitDisc):
        raise DomainError("brute-force reference needs the unit disc as base")
    r, wr = _gauss(0.0, 1.0, n_r)
    t = 2 * np.pi * np.arange(n_t) / n_t
    z = (r[:, None] * np.exp(1j * t)[None, :]).ravel()
    wz = (wr[:, None] * r[:, None] * np.full(n_t, 2 * np.pi / n_t)[None, :]).ravel()
    if isinstance(spec, HartogsDomainSpec):
        lo = np.zeros_like(z.real)
        hi = np.exp(-spec.log_radius.evaluate(z)[0])
    else:
        lo = np.exp(spec.u.evaluate(z)[0])
        hi = np.exp(-spec.v.evaluate(z)[0])
    x, wx = np.polynomial.legendre.leggauss(n_r)
    rho = lo[:, None] + (hi - lo)[:, None] * (x[None, :] + 1) / 2
    wrho = (hi - lo)[:, None] * wx[None, :] / 2 * rho
    Z = np.repeat(z, n_r * n_t)
    W = (rho[:, :, None] * np.exp(1j * t)[None, None, :]).reshape(-1)
    wt = (wz[:, None, None] * wrho[:, :, None] * np.full(n_t, 2 * np.pi / n_t)).reshape(-1)
    return Z, W, wt


def direct_product_integral(spec, f, nu, n_r=24, n_t=32):
    """``int |f(z) w^nu|^2`` over the four-dimensional domain by tensor quadrature."""
    Z, W, wt = _product_rule(spec, n_r, n_t)
    return float(np.sum(wt * np.abs(f(Z) * W ** nu) ** 2))


def brute_force_kernel(spec, point, a_max: int = 3, nu_max: int = 2, n_r=24, n_t=32):
    """Kernel from a full Gram matrix of ``z^a w^nu`` computed in four real dimensions.

    No fiber orthogonality is assumed: every pair of basis functions is
    integrated by a tensor polar rule.
    """
    Z, W, wt = _product_rule(spec, n_r, n_t)
    nus = range(-nu_max, nu_max + 1) if isinstance(spec, LaurentHartogsSpec) \
        else range(0, nu_max + 1)
    idx = [(a, nu) for nu in nus for a in range(a_max + 1)]
    F = np.stack([Z ** a * W ** nu for a, nu in idx], axis=1)
    G = (F * wt[:, None]).T @ F.conj()
    sys = orthonormalize(0.5 * (G + G.conj().T))
    z, w = np.asarray(point, dtype=complex)
    raw = np.array([[z ** a * w ** nu for a, nu in idx]])
    return float(np.sum(np.abs(sys.transform(raw)) ** 2))


def product_kernel_constant(spec: LaurentHartogsSpec):
    """True when both log-radii are constant (the domain is a product)."""
    return isinstance(spec.u, ConstantLogRadius) and isinstance(spec.v, ConstantLogRadius)
