import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bergman_lab.domains import Annulus, DiscMinusDiscs, DomainError, Hole, UnitDisc
from bergman_lab.hartogs import hartogs_system
from bergman_lab.catalog import builtin
from bergman_lab.integration import PlanarBasis, gram_matrix
from bergman_lab.kernel import (annulus_kernel, closed_form_kernel, converged_kernel,
                                default_planar_basis, disc_kernel, hartogs_triangle_kernel,
                                hartogs_triangle_series, orthonormalize, planar_system)

# K of the unit disc minus the closed disc |z - 0.5| <= 0.1.  Frozen from an
# independent oracle: the Moebius map (z - a)/(1 - a z), a = 0.5067878888070656,
# sends the domain onto the annulus 0.13393944403532795 < |w| < 1, whose kernel
# is the Laurent sum of |w^k|^2 / ||w^k||^2 evaluated directly.
OFF_CENTRE = [
    (0.0, 0.5479292028046),
    (-0.5, 0.5979772011848),
    (0.3j, 0.5404170646268),
    (0.5 + 0.3j, 2.081230511621),
    (0.8, 4.425811143163),
]


def test_disc_kernel_degree_60():
    z = np.array([0, 0.3, -0.5j, 0.4 + 0.4j])
    K = planar_system(UnitDisc(), 60).kernel(z)
    np.testing.assert_allclose(K, 1 / (np.pi * (1 - abs(z) ** 2) ** 2), rtol=1e-12)


def test_disc_kernel_near_boundary_uses_high_degree():
    z = np.array([0.99, 0.996j])
    K, degree, inc = converged_kernel(UnitDisc(), z)
    assert degree > 1000
    np.testing.assert_allclose(K, disc_kernel(z), rtol=1e-9)


def test_annulus_engine_matches_laurent_series():
    z = np.array([0.55, 0.7j, -0.9, 0.6 - 0.3j])
    K, _, _ = converged_kernel(Annulus(0.5), z)
    ref = [annulus_kernel(p, 0.5)[0] for p in z]
    np.testing.assert_allclose(K, ref, rtol=1e-10)


@pytest.mark.parametrize("z, expected", OFF_CENTRE)
def test_off_centre_hole_matches_moebius_oracle(z, expected):
    K, _, _ = converged_kernel(DiscMinusDiscs((Hole(0.5, 0.1),)), np.array([z]))
    assert K[0] == pytest.approx(expected, rel=1e-9)


def test_puncture_does_not_change_disc_kernel():
    z = np.array([0.0, 0.2 + 0.1j, -0.6])
    K, _, _ = converged_kernel(DiscMinusDiscs((), (0.3,)), z)
    np.testing.assert_allclose(K, disc_kernel(z), rtol=1e-12)


@pytest.mark.parametrize("log_r", [-700.0, -70000.0])
def test_tiny_hole_excess_decays_like_inverse_log_radius(log_r):
    # |log r| (K - K_E) tends to |g|^2 / (2 pi), g = (1 - |a|^2) / ((z - a)(1 - conj(a) z))
    a = 0.5
    z = np.array([0.0, 0.2 + 0.1j, -0.6])
    K, _, _ = converged_kernel(DiscMinusDiscs((Hole(a, log_radius=log_r),)), z)
    g = (1 - abs(a) ** 2) / ((z - a) * (1 - np.conj(a) * z))
    limit = np.abs(g) ** 2 / (2 * np.pi)
    np.testing.assert_allclose(abs(log_r) * (K - disc_kernel(z)), limit, rtol=5 / abs(log_r))


def test_kernel_rejects_outside_points():
    with pytest.raises(DomainError):
        converged_kernel(Annulus(0.5), np.array([0.1]))


def test_orthonormal_system_reproduces_identity():
    spec = DiscMinusDiscs((Hole(0.4j, 0.15),))
    basis = PlanarBasis(default_planar_basis(spec, 20, 8))
    gm = gram_matrix(basis, spec)
    sys_ = orthonormalize(gm)
    A = sys_.coefficient_matrix
    np.testing.assert_allclose(A @ gm.entries @ A.conj().T, np.eye(A.shape[0]), atol=1e-8)


@given(st.floats(0.05, 0.6), st.floats(0.05, 0.15), st.floats(0, 2 * math.pi))
def test_gram_matrix_is_hermitian_psd(c, r, angle):
    center = c * np.exp(1j * angle)
    spec = DiscMinusDiscs((Hole(center, min(r, 0.9 - c)),))
    basis = PlanarBasis(default_planar_basis(spec, 8, 4))
    G = gram_matrix(basis, spec).entries
    np.testing.assert_allclose(G, G.conj().T, atol=1e-12 * np.abs(G).max())
    assert np.linalg.eigvalsh(G).min() > -1e-9 * np.abs(G).max()


def test_closed_forms_by_name():
    assert closed_form_kernel("unit-disc", 0.0) == pytest.approx(1 / math.pi)
    assert closed_form_kernel("polydisc", [0, 0]) == pytest.approx(1 / math.pi ** 2)
    assert closed_form_kernel("ball", [0, 0]) == pytest.approx(2 / math.pi ** 2)
    with pytest.raises(DomainError):
        closed_form_kernel("no-such-domain", 0)


def test_hartogs_triangle_closed_form_agrees_with_series():
    z, w = 0.3, 0.1
    assert hartogs_triangle_series(z, w, 200, 200) == pytest.approx(
        hartogs_triangle_kernel(z, w), rel=1e-10)


def test_hartogs_triangle_engine_against_closed_form():
    tri = builtin("hartogs-triangle")
    pts = np.array([[0.5, 0.2], [-0.4j, 0.1 + 0.1j]])
    K = hartogs_system(tri, 40, 40).kernel(pts)
    ref = [hartogs_triangle_kernel(*p) for p in pts]
    np.testing.assert_allclose(K, ref, rtol=1e-6)
