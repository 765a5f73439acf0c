"""Small worked examples with values obtained from closed forms or direct oracles."""

import math

import numpy as np
import pytest

from bergman_lab.balanced import balanced_system
from bergman_lab.catalog import builtin
from bergman_lab.constructions import build_builtin
from bergman_lab.domains import (Annulus, DiscMinusDiscs, Hole, PNormBall, Polydisc, UnitDisc,
                                 boundary_distance, eval_log_radius, sample_interior)
from bergman_lab.hartogs import hartogs_system
from bergman_lab.integration import (Monomial, NegativePower, PlanarBasis, fiber_weight,
                                     gram_matrix, laurent_norm_annulus, monomial_norm_disc)
from bergman_lab.kernel import (closed_form_kernel, converged_kernel, disc_kernel,
                                orthonormalize, planar_system)
from bergman_lab.metric import (bergman_metric_at, disc_closed_forms, path_length,
                                default_system)
from bergman_lab.probes import (cone_exponent, monotonicity_check, outer_cone_check,
                                radial_monotone_check, slice_ratio)

HOLE = DiscMinusDiscs((Hole(0.5, 0.1),))


def test_boundary_distance_to_hole():
    assert boundary_distance(HOLE, 0.3) == pytest.approx(0.1, abs=1e-12)


def test_annulus_samples():
    pts = sample_interior(Annulus(0.9), 50, seed=1)
    assert len(pts) == 50
    assert np.all((np.abs(pts) > 0.9) & (np.abs(pts) < 1))


def test_pole_series_fiber_radius_exceeds_one_at_origin():
    value, _ = eval_log_radius(build_builtin("pole-series"), 0.0)
    assert value < 0


def test_laurent_norms():
    assert laurent_norm_annulus(0, 0.5) == pytest.approx(0.75 * math.pi)
    assert laurent_norm_annulus(-1, math.exp(-1)) == pytest.approx(2 * math.pi)
    assert monomial_norm_disc(1) == pytest.approx(math.pi / 2)
    assert monomial_norm_disc(5) == pytest.approx(math.pi / 6)


def test_constant_norm_on_disc_minus_hole_is_area():
    G = gram_matrix(PlanarBasis([Monomial(0)]), HOLE).entries
    assert G[0, 0].real == pytest.approx(math.pi * 0.99, rel=1e-12)


def test_pole_norm_decreases_as_hole_grows():
    norms = []
    for r in (0.05, 0.1, 0.2):
        spec = DiscMinusDiscs((Hole(0.5, r),))
        norms.append(gram_matrix(PlanarBasis([NegativePower(0.5, 1)]), spec).entries[0, 0].real)
    assert norms[0] > norms[1] > norms[2] > 0


def test_monomial_gram_diagonal_on_disc_and_annulus():
    G = gram_matrix(PlanarBasis([Monomial(k) for k in range(4)]), UnitDisc()).entries
    np.testing.assert_allclose(G, np.diag([math.pi / (k + 1) for k in range(4)]), atol=1e-14)
    ks = [-2, -1, 0, 1, 2]
    basis = PlanarBasis([NegativePower(0j, -k) if k < 0 else Monomial(k) for k in ks])
    G = gram_matrix(basis, Annulus(0.5)).entries
    np.testing.assert_allclose(G, np.diag([laurent_norm_annulus(k, 0.5) for k in ks]),
                               rtol=1e-12, atol=1e-14)


def test_two_function_gram_is_positive_definite_and_orthonormalizes():
    gm = gram_matrix(PlanarBasis([Monomial(0), NegativePower(0.5, 1)]), HOLE)
    G = gm.entries
    assert np.allclose(G, G.conj().T)
    assert np.linalg.eigvalsh(G).min() > 0
    sys_ = orthonormalize(gm)
    assert sys_.effective_rank == 2
    A = sys_.coefficient_matrix
    assert np.max(np.abs(A @ G @ A.conj().T - np.eye(2))) <= 1e-8


def test_disc_kernel_values():
    K = planar_system(UnitDisc(), 60).kernel(np.array([0.0, 0.5]))
    assert K[0] == pytest.approx(1 / math.pi, rel=1e-12)
    assert K[1] == pytest.approx(16 / (9 * math.pi), rel=1e-6)


def test_small_hole_far_point_within_one_percent():
    # -0.6 is the point of B = disc(-0.3, 0.3) farthest from the hole
    z = np.array([-0.6])
    K, _, _ = converged_kernel(DiscMinusDiscs((Hole(0.5, 1e-3),)), z)
    assert K[0] == pytest.approx(disc_kernel(z)[0], rel=1e-2)


def test_polydisc_kernels_at_origin():
    assert closed_form_kernel("polydisc", [0, 0]) == pytest.approx(1 / math.pi ** 2)
    assert float(balanced_system(Polydisc(2), 4).kernel(np.zeros((1, 2)))[0]) == \
        pytest.approx(1 / math.pi ** 2, rel=1e-10)
    K = hartogs_system(builtin("product-disc2"), 4, 4).kernel(np.zeros((1, 2)))
    assert float(K[0]) == pytest.approx(1 / math.pi ** 2, rel=1e-12)


def test_ball_kernel_at_origin():
    K = balanced_system(PNormBall(2.0, 2), 4).kernel(np.zeros((1, 2)))
    assert float(K[0]) == pytest.approx(2 / math.pi ** 2, rel=1e-10)


def test_triangle_engine_at_reference_point():
    K = hartogs_system(builtin("hartogs-triangle"), 40, 40).kernel(np.array([[0.5, 0.125]]))
    ref = closed_form_kernel("hartogs-triangle", (0.5, 0.125))
    assert float(K[0]) == pytest.approx(ref, rel=1e-4)


def test_laurent_fiber_weights():
    spec = builtin("laurent-hartogs")
    z = np.array(0.4)
    assert float(fiber_weight(spec, -1, z)) == pytest.approx(2 * math.pi)
    assert float(fiber_weight(spec, 0, z)) == pytest.approx(math.pi * (1 - math.exp(-2)))


def test_disc_metric_values():
    sys_ = planar_system(UnitDisc(), 60)
    assert bergman_metric_at(sys_, 0.0, 1.0).value == pytest.approx(math.sqrt(2), rel=1e-12)
    assert bergman_metric_at(sys_, 0.5, 1.0).value == pytest.approx(1.885618083164127,
                                                                    rel=1e-9)


def test_disc_segment_length():
    L = path_length(default_system(UnitDisc(), [0.5]), [0, 0.5], order=16, subdivisions=4)
    assert L == pytest.approx(0.7768361992, rel=1e-9)


def test_caratheodory_closed_forms():
    d = disc_closed_forms(0, X=1, t=0.5)
    assert d["gamma"] == 1.0
    assert d["beta"] == pytest.approx(math.sqrt(2))
    assert d["c_inner"] == pytest.approx(0.549306144, rel=1e-9)
    assert d["b"] == pytest.approx(0.776836199, rel=1e-9)
    assert d["c_inner"] <= d["b"]


def test_cone_exponents():
    assert cone_exponent(1) == pytest.approx(1.1)
    assert cone_exponent(2) == pytest.approx(1.1)
    assert cone_exponent(0.5) == pytest.approx(3.1)


def test_disc_outer_cone_along_real_axis():
    rep = outer_cone_check(UnitDisc(), 1.0, 0.5, 1.0, [1 + 1 / k for k in range(2, 12)])
    assert rep.verdict == "witness"


def test_pole_series_outer_cone_at_origin():
    G = build_builtin("pole-series")
    a = 0.5 ** np.arange(1, 9)
    rep = outer_cone_check(G, [0, 0], 0.5, cone_exponent(0.5), [[x, x] for x in a])
    assert rep.verdict == "witness"


def test_annulus_inside_disc_at_point():
    assert monotonicity_check(Annulus(0.5), UnitDisc(), [0.7]).verdict == "holds"


def test_radial_examples():
    t = np.linspace(0, 0.9, 10)
    assert radial_monotone_check(PNormBall(2.0, 2), [0.4, 0.3], t).verdict == "holds"
    assert radial_monotone_check(Polydisc(2), [0.7, 0.7], t).verdict == "holds"


def test_ball_slice_ratio_bounded():
    lam = np.linspace(0, 0.9, 10)
    r = [x["ratio"] for x in slice_ratio(PNormBall(2.0, 2), lam).table]
    assert max(r) <= math.pi / 2 + 1e-12 and min(r) > 0


def test_product_slice_ratio_is_pi():
    z = np.array([0.0, 0.3, -0.5j])
    r = [x["ratio"] for x in slice_ratio(builtin("product-disc2"), z).table]
    np.testing.assert_allclose(r, math.pi, rtol=1e-10)
