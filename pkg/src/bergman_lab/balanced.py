"""Kernels of balanced domains ``{h < 1}`` from homogeneous degree blocks.

Homogeneous polynomials of different degrees are orthogonal on a balanced
domain (rotate by ``e^{it}``), so the kernel is ``sum_k q_k(z)`` with
``q_k`` the kernel of the degree-``k`` block.  Each ``q_k`` is homogeneous of
degree ``2k`` and nonnegative, which makes ``t -> K(t z)`` nondecreasing.

Block Gram matrices come from the polar formula

    int_D z^a conj(z)^b dV = 1/(2k + 2n) * int_S zeta^a conj(zeta)^b h(zeta)^-(2k+2n) dsigma

(exact Dirichlet integrals for Reinhardt families, scrambled Sobol points on
the sphere otherwise).
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np
from scipy.special import gammaln
from scipy.stats import qmc

from .domains import BalancedDomainSpec, DomainError, PNormBall, Polydisc, contains_many
from .kernel import KernelValue, orthonormalize

__all__ = [
    "multi_indices",
    "reinhardt_norm",
    "block_gram",
    "BalancedSystem",
    "balanced_system",
    "balanced_kernel",
]

MAX_BLOCK_DEGREE = 12


def multi_indices(k: int, n: int) -> list[tuple[int, ...]]:
    """All multi-indices of total degree ``k`` in ``n`` variables (lexicographic)."""
    out = []
    for combo in combinations_with_replacement(range(n), k):
        a = [0] * n
        for i in combo:
            a[i] += 1
        out.append(tuple(a))
    return sorted(out, reverse=True)


def reinhardt_norm(spec: BalancedDomainSpec, alpha) -> float:
    """``||z^alpha||^2`` on p-norm balls and polydiscs (exact).

    For ``sum |z_i|^p < 1``:
    ``(2 pi)^n prod Gamma((2 a_i + 2)/p) / (p^n Gamma(sum (2 a_i + 2)/p + 1))``.
    """
    alpha = np.asarray(alpha, dtype=float)
    n = alpha.size
    if isinstance(spec, Polydisc):
        return float(np.prod(math.pi / (alpha + 1)))
    if isinstance(spec, PNormBall):
        p = spec.p
        e = (2 * alpha + 2) / p
        log = n * math.log(2 * math.pi) + np.sum(gammaln(e)) - n * math.log(p) \
            - gammaln(np.sum(e) + 1)
        return float(math.exp(log))
    raise DomainError("exact monomial norms need a Reinhardt family")


def _sphere_points(m_log2, seed):
    """Sobol points mapped to ``(s, psi)``; ``zeta = (sqrt(1-s), sqrt(s) e^{i psi})``."""
    u = qmc.Sobol(2, scramble=True, seed=seed).random_base2(m_log2)
    s, psi = u[:, 0], 2 * np.pi * u[:, 1]
    return np.stack([np.sqrt(1 - s), np.sqrt(s) * np.exp(1j * psi)], axis=1)


def block_gram(spec: BalancedDomainSpec, k: int, m_log2: int = 15, replicates: int = 4,
               seed: int = 0):
    """Gram matrix of the degree-``k`` monomials and an error estimate.

    Reinhardt families are diagonal and exact.  Otherwise ``C^2`` only: the
    common phase of ``zeta`` integrates out, leaving a two-dimensional
    integral over ``(s, psi)`` estimated by independent scrambled Sobol
    replicates (the spread of the replicate means is the error estimate).
    """
    alphas = multi_indices(k, spec.dim)
    if getattr(spec, "reinhardt", False):
        return np.diag([reinhardt_norm(spec, a) for a in alphas]).astype(complex), 0.0
    if spec.dim != 2:
        raise DomainError("sampled block Gram matrices are implemented for C^2")
    A = np.array(alphas)
    reps = []
    for r in range(replicates):
        zeta = _sphere_points(m_log2, seed * 1000 + r)
        h = spec.minkowski(zeta)
        if np.any(~(h > 0)):
            raise DomainError("Minkowski functional vanished on the sphere")
        mono = np.prod(zeta[:, None, :] ** A[None, :, :], axis=-1)
        wgt = h ** -(2 * k + 4)
        G = (mono * wgt[:, None]).T @ mono.conj() / len(zeta)
        reps.append(G * 2 * math.pi ** 2 / (2 * k + 4))
    reps = np.array(reps)
    G = reps.mean(axis=0)
    err = float(np.max(np.abs(reps.std(axis=0, ddof=1))) / math.sqrt(replicates))
    return 0.5 * (G + G.conj().T), err


class BalancedSystem:
    """Orthonormalised homogeneous blocks ``k = 0..deg_max``."""

    def __init__(self, spec, blocks, deg_max, errors):
        self.spec = spec
        self.blocks = blocks            # list of (k, exponent array, OrthonormalSystem)
        self.degree = deg_max
        self.errors = errors

    @property
    def dim(self):
        return self.spec.dim

    def features(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        Fs, dFs = [], []
        for _, A, sys in self.blocks:
            mono = np.prod(pts[:, None, :] ** A[None, :, :], axis=-1)
            grads = []
            for j in range(pts.shape[1]):
                Aj = A.copy()
                Aj[:, j] = np.maximum(Aj[:, j] - 1, 0)
                g = A[:, j] * np.prod(pts[:, None, :] ** Aj[None, :, :], axis=-1)
                grads.append(sys.transform(g))
            Fs.append(sys.transform(mono))
            dFs.append(np.stack(grads, axis=-1))
        return np.concatenate(Fs, axis=1), np.concatenate(dFs, axis=1)

    def block_kernels(self, points):
        """``q_k(z)`` for every block, shape ``(m, deg_max + 1)``."""
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        out = []
        for _, A, sys in self.blocks:
            mono = np.prod(pts[:, None, :] ** A[None, :, :], axis=-1)
            out.append(np.sum(np.abs(sys.transform(mono)) ** 2, axis=-1))
        return np.stack(out, axis=-1)

    def kernel(self, points):
        return self.block_kernels(points).sum(axis=-1)


@lru_cache(maxsize=16)
def balanced_system(spec: BalancedDomainSpec, deg_max: int = MAX_BLOCK_DEGREE,
                    m_log2: int = 15, seed: int = 0) -> BalancedSystem:
    if spec.dim > 2 and not getattr(spec, "reinhardt", False):
        raise DomainError("non-Reinhardt balanced domains are supported in C^2 only")
    if deg_max > MAX_BLOCK_DEGREE and not getattr(spec, "reinhardt", False):
        raise DomainError(f"sampled blocks are capped at degree {MAX_BLOCK_DEGREE}")
    blocks, errors = [], []
    for k in range(deg_max + 1):
        G, err = block_gram(spec, k, m_log2, seed=seed)
        blocks.append((k, np.array(multi_indices(k, spec.dim)), orthonormalize(G, degree=k)))
        errors.append(err)
    return BalancedSystem(spec, blocks, deg_max, errors)


def balanced_kernel(spec: BalancedDomainSpec, z, deg_max: int = MAX_BLOCK_DEGREE,
                    m_log2: int = 15) -> KernelValue:
    """Truncated kernel ``sum_{k <= deg_max} q_k(z)`` (a lower bound)."""
    p = np.atleast_2d(np.asarray(z, dtype=complex))
    if not contains_many(spec, p)[0]:
        raise DomainError(f"point {z} is not in the domain")
    sys = balanced_system(spec, deg_max, m_log2)
    q = sys.block_kernels(p)[0]
    value = float(q.sum())
    return KernelValue(value, deg_max, tuple(p[0].tolist()),
                       increment=float(q[-1] / value) if value > 0 else math.inf)
