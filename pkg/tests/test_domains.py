import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bergman_lab.catalog import BUILTINS, builtin, nested_pairs, resolve
from bergman_lab.domains import (Annulus, DiscMinusDiscs, DomainError, GeometricSequence, Hole,
                                 Membership, PNormBall, Polydisc, UnitDisc, boundary_distance,
                                 classify, contains, from_document, sample_interior, spec_hash,
                                 to_document)


def test_unit_disc_membership():
    E = UnitDisc()
    assert classify(E, 0.5) is Membership.INSIDE
    assert classify(E, 1.0) is Membership.OUTSIDE
    assert not contains(E, 1.2j)


def test_hole_boundary_is_excluded():
    D = DiscMinusDiscs((Hole(0.5, 0.1),))
    assert not contains(D, 0.6)
    assert not contains(D, 0.5)
    assert contains(D, 0.61)


def test_puncture_is_excluded():
    D = DiscMinusDiscs((), (0.3,))
    assert not contains(D, 0.3)
    assert contains(D, 0.3 + 1e-9)


def test_overlapping_holes_rejected():
    with pytest.raises(DomainError):
        DiscMinusDiscs((Hole(0.3, 0.2), Hole(0.5, 0.2)))


def test_hole_leaving_disc_rejected():
    with pytest.raises(DomainError):
        DiscMinusDiscs((Hole(0.9, 0.2),))


def test_nonpositive_radius_rejected():
    with pytest.raises(DomainError):
        Hole(0.5, 0.0)


def test_log_radius_far_below_double_range():
    h = Hole(0.5, log_radius=-1e6)
    assert h.radius == 0.0 and h.log_radius == -1e6


def test_geometric_sequence_must_converge():
    with pytest.raises(DomainError):
        GeometricSequence(0.5, 1.5)


def test_ball_membership_and_distance():
    B = PNormBall(2.0, 2)
    assert contains(B, [0.5, 0.5])
    assert not contains(B, [0.8, 0.8])
    assert boundary_distance(B, [0, 0]) == pytest.approx(1.0, abs=1e-6)


def test_polydisc_membership():
    P = Polydisc(2)
    assert contains(P, [0.9, 0.9j])
    assert not contains(P, [1.01, 0])


def test_triangle_membership():
    tri = builtin("hartogs-triangle")
    assert contains(tri, [0.5, 0.4])
    assert not contains(tri, [0.4, 0.5])
    assert not contains(tri, [0, 0])


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_builtin_documents_round_trip(name):
    spec = builtin(name)
    doc = json.loads(json.dumps(to_document(spec)))
    again = from_document(doc)
    assert spec_hash(again) == spec_hash(spec)
    assert doc["id"] == spec_hash(spec)


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_builtin_samples_are_inside(name):
    spec = builtin(name)
    pts = sample_interior(spec, 32, seed=1)
    assert len(pts) == 32
    assert all(contains(spec, p) for p in pts)


def test_resolve_reads_json_files(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps(to_document(Annulus(0.3))))
    assert resolve(str(path)) == Annulus(0.3)
    with pytest.raises(FileNotFoundError):
        resolve(str(tmp_path / "missing.json"))
    with pytest.raises(DomainError):
        resolve("builtin:missing")


def test_catalog_has_fifty_nested_pairs():
    assert len(nested_pairs()) == 50


@given(st.floats(0.05, 0.7), st.floats(-3.1, 3.1), st.floats(-30, -0.5))
def test_planar_document_round_trip(c, angle, log_r):
    r = np.exp(log_r)
    if c + r >= 0.99 or c - r <= 0:
        return
    spec = DiscMinusDiscs((Hole(c * np.exp(1j * angle), log_radius=log_r),), (0.0,))
    assert from_document(json.loads(json.dumps(to_document(spec)))) == spec


@given(st.floats(0.01, 0.9))
def test_spec_hash_depends_on_parameters(r):
    assert spec_hash(Annulus(r)) != spec_hash(Annulus(r / 2))
    assert spec_hash(Annulus(r)) == spec_hash(Annulus(r))
