"""One test per acceptance criterion; each prints a PASS/FAIL line.

Tolerances are restated here and checked against the measured values as
well as the criterion's own verdict.
"""

import math

import pytest

from bergman_lab import acceptance as A


@pytest.fixture
def report(capsys):
    def emit(res):
        with capsys.disabled():
            print("\n" + res.line())
        return res.measured
    return emit


def test_criterion_01_disc_kernel_oracle(report):
    res = A.disc_kernel_oracle()
    m = report(res)
    assert m["max_rel_err"] <= 1e-6
    assert res.seconds < 5.0
    assert res.passed


def test_criterion_02_annulus_kernel_oracle(report):
    res = A.annulus_kernel_oracle()
    m = report(res)
    assert m["max_rel_err"] <= 1e-6
    assert res.seconds < 5.0
    assert res.passed


def test_criterion_03_monotonicity_suite(report):
    res = A.monotonicity_suite()
    m = report(res)
    assert m["pairs"] == 50
    assert m["violations"] == 0
    assert res.passed


def test_criterion_04_deleted_disc_stability(report):
    res = A.deleted_disc_stability()
    s = report(res)["sup_diff"]
    assert s[0] > s[1] > s[2]
    assert s[2] < 1e-2
    assert res.passed


def test_criterion_05_triangle_exhaustion(report):
    res = A.triangle_exhaustion()
    m = report(res)
    assert m["growth"] >= 10
    assert m["eps"] == pytest.approx(1.1)
    assert m["cone"] == "witness"
    assert res.seconds < 60.0
    assert res.passed


def test_criterion_06_radial_monotonicity(report):
    res = A.radial_monotonicity()
    m = report(res)
    assert all(v <= 1e-6 for v in m.values())
    assert res.passed


def test_criterion_07_metric_closed_form(report):
    res = A.metric_closed_form()
    m = report(res)
    assert abs(m["beta0"] - math.sqrt(2)) <= 1e-6
    assert abs(m["bound"] - math.sqrt(2) * math.atanh(0.5)) <= 1e-3
    assert all(b <= a for a, b in zip(m["trace"], m["trace"][1:]))
    assert res.passed


def test_criterion_08_caratheodory_below_bergman(report):
    res = A.caratheodory_below_bergman()
    assert report(res)["min_gap"] >= 0
    assert res.passed


def test_criterion_09_zalcman_kernel_construction(report):
    res = A.zalcman_kernel_construction()
    m = report(res)
    assert len(m["certificates"]) == 5
    assert max(m["certificates"]) < 2.0 * (1 - 0.2)
    assert m["recertified_max"] < 2.0
    assert m["exhaustion"] == "bounded-with-margin"
    assert res.passed


def test_criterion_10_metric_bounded_construction(report):
    res = A.metric_bounded_construction()
    m = report(res)
    assert m["segment_length"] <= m["allowed"]
    assert m["disc_distance"] > 3
    assert res.passed


def test_criterion_11_fiber_weight_identity(report):
    res = A.fiber_weight_identity()
    m = report(res)
    assert abs(m["weight"] - m["direct"]) <= 1e-6
    assert m["kernel_rel_err"] <= 1e-3
    assert res.passed


def test_criterion_12_localization(report):
    res = A.localization()
    m = report(res)
    for name in ("disc", "zalcman"):
        assert m[f"{name}_min"] >= 1 - 1e-6
        assert abs(m[f"{name}_C"] / m[f"{name}_C_half"] - 1) <= 0.2
    assert res.passed
