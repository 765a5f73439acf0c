import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bergman_lab.constructions import (BUILTIN_FAMILIES, Schedule, ZalcmanParams,
                                       build_builtin, build_metric_bounded_schedule,
                                       build_zalcman_radii, grid_sup, polar_grid, recertify,
                                       refine_zalcman_schedule)
from bergman_lab.domains import Disc, DomainError, GeometricSequence, Zalcman, contains

FAST = ZalcmanParams(stages=2, grid=24, degree=40, hole_order=12)


@pytest.fixture(scope="module")
def radii_schedule():
    return build_zalcman_radii(FAST)


def test_polar_grid_covers_disc():
    B = Disc(-0.3, 0.3)
    g = polar_grid(B, 8)
    assert len(g) == 65
    assert np.max(np.abs(g - B.center)) == pytest.approx(0.3)


def test_radii_stages_are_certified(radii_schedule):
    assert len(radii_schedule.certificates) == 2
    assert all(c["sup"] < radii_schedule.threshold for c in radii_schedule.certificates)
    assert radii_schedule.threshold == pytest.approx(2 * 0.8)


def test_schedule_domain_contains_b_and_avoids_holes(radii_schedule):
    G = radii_schedule.domain()
    assert isinstance(G, Zalcman)
    assert contains(G, -0.3)
    for h in G.holes:
        assert not contains(G, h.center)


def test_schedule_json_round_trip(radii_schedule):
    again = Schedule.from_json(radii_schedule.to_json())
    assert again.to_json() == radii_schedule.to_json()
    assert again.params == radii_schedule.params


def test_recertification_stays_below_bound(radii_schedule):
    assert max(c["sup"] for c in recertify(radii_schedule)) < FAST.bound


def test_refinement_keeps_threshold(radii_schedule):
    ref = refine_zalcman_schedule(radii_schedule, stages=3)
    assert len(ref.certificates) == 3
    assert all(c["sup"] < ref.threshold for c in ref.certificates)


def test_metric_schedule_has_bound(radii_schedule):
    sched = build_metric_bounded_schedule(refine_zalcman_schedule(radii_schedule, stages=2), stages=2)
    assert sched.metric_bound is not None
    assert all(c["sup"] < sched.threshold for c in sched.certificates)


def test_invalid_params_rejected():
    with pytest.raises((DomainError, ValueError)):
        ZalcmanParams(margin=1.5)
    with pytest.raises((DomainError, ValueError)):
        ZalcmanParams(reference_disc=Disc(0.3, 0.3))


@pytest.mark.parametrize("name", BUILTIN_FAMILIES)
def test_builtin_families_build(name):
    spec = build_builtin(name)
    assert spec.dim == 2


@settings(max_examples=10)
@given(st.integers(1, 4), st.floats(-12, -3))
def test_halving_a_radius_never_increases_grid_sup(j, log_r):
    # a smaller hole gives a larger domain, so the kernel can only drop
    grid = polar_grid(Disc(-0.3, 0.3), 12)
    logs = [np.log(abs(a)) - 3 for a in GeometricSequence().take(4)]
    logs[j - 1] = min(log_r, logs[j - 1])
    before = Zalcman(GeometricSequence(), (), False, Disc(-0.3, 0.3), tuple(logs))
    logs[j - 1] -= np.log(2)
    after = Zalcman(GeometricSequence(), (), False, Disc(-0.3, 0.3), tuple(logs))
    s0, _ = grid_sup(before, grid, degree=30, hole_order=10)
    s1, _ = grid_sup(after, grid, degree=30, hole_order=10)
    assert s1 <= s0 * (1 + 1e-9)
