import math

import numpy as np
import pytest

from bergman_lab.domains import Annulus, DomainError, UnitDisc
from bergman_lab.metric import (bergman_distance, bergman_metric_at, default_system,
                                disc_closed_forms, finite_difference_metric, metric_values,
                                path_length)
from bergman_lab.kernel import planar_system


def test_disc_metric_at_origin_is_sqrt2():
    v = bergman_metric_at(planar_system(UnitDisc(), 60), 0.0, 1.0).value
    assert v == pytest.approx(math.sqrt(2), abs=1e-12)


def test_disc_metric_off_centre_matches_closed_form():
    z = np.array([0.3, 0.5j, -0.7])
    beta = metric_values(default_system(UnitDisc(), z), z, 1.0)
    expected = [disc_closed_forms(p, X=1)["beta"] for p in z]
    np.testing.assert_allclose(beta, expected, rtol=1e-9)


def test_metric_is_homogeneous_in_direction():
    sys_ = planar_system(Annulus(0.4), 40)
    a = bergman_metric_at(sys_, 0.7, 1.0).value
    b = bergman_metric_at(sys_, 0.7, 3.0j).value
    assert b == pytest.approx(3 * a, rel=1e-12)


def test_finite_difference_agrees_with_analytic_metric():
    sys_ = planar_system(Annulus(0.4), 40)
    a = bergman_metric_at(sys_, 0.6 + 0.2j).value
    b = finite_difference_metric(sys_, 0.6 + 0.2j).value
    assert b == pytest.approx(a, rel=1e-5)


def test_segment_length_on_disc_is_exact_radial_distance():
    L = path_length(default_system(UnitDisc(), [0.6]), [0, 0.6], order=16, subdivisions=8)
    assert L == pytest.approx(math.sqrt(2) * math.atanh(0.6), rel=1e-9)


def test_distance_bound_is_above_truth_and_trace_nonincreasing():
    res = bergman_distance(UnitDisc(), 0, 0.3 + 0.3j, levels=(64, 256))
    exact = math.sqrt(2) * math.atanh(abs(0.3 + 0.3j))
    assert res.bound >= exact - 1e-9
    assert res.bound == pytest.approx(exact, abs=1e-3)
    bounds = [t[2] for t in res.trace]
    assert all(b <= a for a, b in zip(bounds, bounds[1:]))


def test_distance_endpoints_must_be_inside():
    with pytest.raises(DomainError):
        bergman_distance(Annulus(0.5), 0.1, 0.7)


def test_closed_forms_reject_outside_points():
    with pytest.raises(DomainError):
        disc_closed_forms(1.0, X=1)
