import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bergman_lab.catalog import builtin
from bergman_lab.domains import (Annulus, Disc, DiscMinusDiscs, DomainError, Hole, PNormBall,
                                 Polydisc, UnitDisc)
from bergman_lab.kernel import disc_kernel
from bergman_lab.probes import (ProbeReport, completeness_probe, cone_exponent, exhaustion_probe,
                                is_nested, lens_kernel, lens_map, localization_ratio,
                                monotonicity_check, outer_cone_check, radial_monotone_check,
                                recompute_verdict, slice_ratio)


def test_exhaustion_on_disc_diverges():
    rep = exhaustion_probe(UnitDisc(), 1.0)
    assert rep.verdict == "diverging"
    k = [r["kernel"] for r in rep.table]
    assert all(b > a for a, b in zip(k, k[1:]))


def test_exhaustion_toward_triangle_origin_diverges():
    rep = exhaustion_probe(builtin("hartogs-triangle"), [0, 0])
    assert rep.verdict == "diverging"


def test_exhaustion_with_bound_and_flat_values_is_bounded():
    table = [{"step": k, "kernel": 1.0 + 0.01 * k, "stability": 1e-9} for k in range(6)]
    rep = ProbeReport("exhaustion", "", table, "", {"ratio_threshold": 10, "monotone_tail": 3,
                                                    "bound": 2.0, "margin": 0.2,
                                                    "stability": 0.01})
    assert recompute_verdict(rep) == "bounded-with-margin"
    rep.params["bound"] = 1.2
    assert recompute_verdict(rep) == "inconclusive"


def test_cone_exponent_values():
    assert cone_exponent(1.0) == pytest.approx(1.1)
    assert cone_exponent(0.5) == pytest.approx(3.1)
    with pytest.raises(DomainError):
        cone_exponent(0.0)


def test_outer_cone_witness_at_triangle_origin():
    rep = outer_cone_check(builtin("hartogs-triangle"), [0, 0], 0.5, 1.1,
                           [[0, 0.3], [0, 0.1], [0, 0.03]])
    assert rep.verdict == "witness"
    assert all(r["hits"] == 0 for r in rep.table)


def test_outer_cone_rejects_interior_points():
    with pytest.raises(DomainError):
        outer_cone_check(UnitDisc(), 1.0, 0.5, 1.1, [0.5])


def test_is_nested_structural():
    assert is_nested(Annulus(0.5), Annulus(0.3))
    assert not is_nested(Annulus(0.3), Annulus(0.5))
    assert is_nested(DiscMinusDiscs((Hole(0.5, 0.1),)), UnitDisc())


def test_monotonicity_requires_nesting():
    with pytest.raises(DomainError):
        monotonicity_check(Annulus(0.3), Annulus(0.5), [0.7])


def test_radial_ball_closed_form_holds():
    rep = radial_monotone_check(PNormBall(2.0, 2), [0.5, 0.5j], np.linspace(0, 1, 6))
    assert rep.verdict == "holds"
    k = [r["kernel"] for r in rep.table]
    assert k[0] == pytest.approx(2 / math.pi ** 2)


def test_radial_ray_leaving_domain_rejected():
    with pytest.raises(DomainError):
        radial_monotone_check(Polydisc(2), [1.2, 0], [0, 1])


def test_lens_map_lands_in_upper_half_plane_with_consistent_derivative():
    b, rho = 1.0, math.sqrt(2)
    z = np.array([0.5, 0.3 + 0.2j])
    S, dS = lens_map(b, rho)
    w = S(z)
    assert np.all(w.imag > 0)
    h = 1e-6
    num = (S(z + h) - S(z - h)) / (2 * h)
    np.testing.assert_allclose(dS(z), num, rtol=1e-6)


def test_lens_kernel_reproduces_itself():
    # integral of |K(zeta, z)|^2 over the lens equals K(z)
    b, rho = 1.0, 0.5
    S, dS = lens_map(b, rho)
    z = 0.8 + 0.05j
    n = 600
    x = np.linspace(1 - rho, 1, n)
    y = np.linspace(-rho, rho, 2 * n)
    X, Y = np.meshgrid(x, y)
    zeta = (X + 1j * Y).ravel()
    keep = (np.abs(zeta) < 1) & (np.abs(zeta - b) < rho)
    zeta = zeta[keep]
    wz, wzeta = S(z), S(zeta)
    Kc = dS(zeta) * np.conj(dS(z)) / (-np.pi * (wzeta - np.conj(wz)) ** 2)
    integral = np.sum(np.abs(Kc) ** 2) * (x[1] - x[0]) * (y[1] - y[0])
    assert integral == pytest.approx(float(lens_kernel(z, b, rho)), rel=5e-3)


def test_localization_on_disc_is_bounded():
    rep = localization_ratio(UnitDisc(), 1.0, Disc(1.0, 0.25), Disc(1.0, 0.5), count=32)
    assert rep.verdict == "bounded"
    assert min(r["ratio"] for r in rep.table) >= 1 - 1e-6


def test_localization_interior_disc_is_exact_disc_kernel():
    pts = np.array([0.1, -0.05j])
    rep = localization_ratio(UnitDisc(), 0.0, Disc(0, 0.2), Disc(0, 0.4), points=pts)
    local = [r["local"] for r in rep.table]
    np.testing.assert_allclose(local, disc_kernel(pts / 0.4) / 0.16, rtol=1e-12)


def test_localization_rejects_cut_hole():
    spec = DiscMinusDiscs((Hole(0.3, 0.1),))
    with pytest.raises(DomainError):
        localization_ratio(spec, 0.0, Disc(0, 0.1), Disc(0, 0.3), points=[0.05])


def test_slice_ratio_ball():
    rep = slice_ratio(PNormBall(2.0, 2), [0.0, 0.5])
    r = [x["ratio"] for x in rep.table]
    # slice disc kernel / ball kernel = (1 - |l|^2) pi / 2
    np.testing.assert_allclose(r, [math.pi / 2, math.pi / 2 * 0.75], rtol=1e-12)


def test_completeness_on_disc_diverges():
    t = 1 - 0.5 ** np.arange(1, 10)
    assert completeness_probe(UnitDisc(), 0, t).verdict == "diverging"


def test_report_serialisation():
    rep = monotonicity_check(Annulus(0.5), UnitDisc(), [0.7, 0.6j])
    doc = json.loads(rep.to_json())
    assert doc["verdict"] == rep.verdict == "holds"
    lines = rep.to_csv().splitlines()
    assert lines[0].split(",") == list(rep.table[0])
    assert len(lines) == 3
    assert float(lines[1].split(",")[2]) == rep.table[0]["inner"]


@given(st.floats(0.05, 0.6), st.floats(0.05, 0.3), st.integers(0, 2 ** 16))
def test_monotonicity_holds_and_verdict_is_reproducible(r1, dr, seed):
    r2 = min(r1 + dr, 0.9)
    inner, outer = Annulus(r2), Annulus(r1)
    rng = np.random.default_rng(seed)
    pts = (r2 + (1 - r2) * rng.uniform(0.1, 0.9, 4)) * np.exp(2j * np.pi * rng.uniform(size=4))
    rep = monotonicity_check(inner, outer, pts, slack=1e-10)
    assert rep.verdict == "holds"
    assert recompute_verdict(rep) == rep.verdict


@given(st.lists(st.floats(0.1, 100), min_size=4, max_size=10), st.floats(1, 50))
def test_exhaustion_verdict_is_pure_function_of_table(values, bound):
    table = [{"step": k, "kernel": v, "stability": 0.0} for k, v in enumerate(values)]
    params = {"ratio_threshold": 10, "monotone_tail": 3, "bound": bound, "margin": 0.2,
              "stability": 0.01}
    a = recompute_verdict(ProbeReport("exhaustion", "", table, "", params))
    b = recompute_verdict(ProbeReport("exhaustion", "", json.loads(json.dumps(table)), "",
                                      json.loads(json.dumps(params))))
    assert a == b
    assert a in {"diverging", "bounded-with-margin", "inconclusive"}
    if a == "bounded-with-margin":
        assert max(values) < 0.8 * bound
