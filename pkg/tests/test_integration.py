import math

import numpy as np
import pytest

from bergman_lab.balanced import balanced_system, reinhardt_norm
from bergman_lab.catalog import builtin
from bergman_lab.domains import (Annulus, DiscMinusDiscs, Hole, PNormBall, Polydisc,
                                 SpikyBalanced, UnitDisc)
from bergman_lab.hartogs import brute_force_kernel, hartogs_system, product_kernel_constant
from bergman_lab.integration import (Monomial, NegativePower, PlanarBasis, RadialPowerWeight,
                                     fiber_weight, gram_matrix, integrate_product,
                                     laurent_norm_annulus, monomial_norm_disc)
from bergman_lab.kernel import ball_kernel, polydisc_kernel


def test_monomial_norms_on_disc():
    for k in range(5):
        assert monomial_norm_disc(k) == pytest.approx(math.pi / (k + 1))


def test_boundary_gram_matches_area_integral():
    # <z, z> over the disc minus |z - 0.5| <= 0.2: pi/2 minus the second moment of the hole
    spec = DiscMinusDiscs((Hole(0.5, 0.2),))
    basis = PlanarBasis([Monomial(1)])
    val = gram_matrix(basis, spec).entries[0, 0].real
    exact = math.pi / 2 - (math.pi * 0.2 ** 2 * (0.5 ** 2 + 0.2 ** 2 / 2))
    assert val == pytest.approx(exact, rel=1e-12)


def test_negative_power_norm_on_annulus():
    b = PlanarBasis([NegativePower(0j, 2)])
    val = gram_matrix(b, Annulus(0.5)).entries[0, 0].real
    assert val == pytest.approx(laurent_norm_annulus(-2, 0.5), rel=1e-12)


def test_weighted_inner_product_radial_weight():
    # integral over the disc of |z|^2 * |z| = 2 pi / 5
    w = RadialPowerWeight(1.0, 1.0)
    val = integrate_product(Monomial(1), Monomial(1), UnitDisc(), w).value.real
    assert val == pytest.approx(2 * math.pi / (2 + 2 + 1), rel=1e-8)


def test_fiber_weight_laurent_nu_minus_one():
    spec = builtin("laurent-hartogs")
    assert float(fiber_weight(spec, -1, np.array(0.2))) == pytest.approx(2 * math.pi * 1.0)


def test_fiber_weight_hartogs_unit_fiber():
    spec = builtin("product-disc2")
    for nu in range(3):
        assert float(fiber_weight(spec, nu, np.array(0.3))) == pytest.approx(math.pi / (nu + 1))


def test_product_domain_kernel_is_polydisc_kernel():
    spec = builtin("product-disc2")
    pts = np.array([[0.3, 0.2j], [-0.5, 0.6]])
    K = hartogs_system(spec, 40, 40).kernel(pts)
    np.testing.assert_allclose(K, [polydisc_kernel(p) for p in pts], rtol=1e-8)


def test_laurent_kernel_matches_brute_force():
    spec = builtin("laurent-hartogs")
    p = (0.2, 0.6)
    k = float(hartogs_system(spec, 2, 3).kernel(np.array([p]))[0])
    assert k == pytest.approx(brute_force_kernel(spec, p, a_max=3, nu_max=2), rel=1e-3)


def test_laurent_product_constant_positive():
    assert product_kernel_constant(builtin("laurent-hartogs")) > 0


def test_reinhardt_norms_polydisc():
    assert reinhardt_norm(Polydisc(2), (1, 2)) == pytest.approx(math.pi ** 2 / 6)


def test_ball_engine_matches_closed_form():
    sys_ = balanced_system(PNormBall(2.0, 2), 40)
    p = np.array([[0.3, 0.2j], [0.1, -0.4]])
    np.testing.assert_allclose(sys_.kernel(p), [ball_kernel(x) for x in p], rtol=1e-6)


def test_spiky_kernel_exceeds_circumscribed_ball_kernel():
    # the spiky domain sits inside the ball of radius 1 / min h; monotonicity bounds it below
    spec = SpikyBalanced()
    sys_ = balanced_system(spec, 8)
    k0 = float(sys_.kernel(np.zeros((1, 2)))[0])
    v = np.random.default_rng(0).standard_normal((4096, 2)) * (1 + 1j)
    R = float(np.max(1 / spec.minkowski(v / np.linalg.norm(v, axis=1, keepdims=True))))
    assert k0 >= 2 / (math.pi ** 2 * R ** 4) * (1 - 1e-6)
