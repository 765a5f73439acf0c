import numpy as np
import pytest
from hypothesis import given, strategies as st

from bergman_lab.cache import CACHE_ENV, cache_lookup_or_compute, cached_gram
from bergman_lab.domains import DiscMinusDiscs, Hole
from bergman_lab.integration import PlanarBasis, gram_matrix
from bergman_lab.kernel import default_planar_basis


def _spec_basis(c=0.4, r=0.1):
    spec = DiscMinusDiscs((Hole(c, r),))
    return spec, PlanarBasis(default_planar_basis(spec, 10, 4))


def test_cached_gram_is_transparent(tmp_path):
    spec, basis = _spec_basis()
    direct = gram_matrix(basis, spec)
    first, hit1 = cached_gram(spec, basis, cache_dir=tmp_path)
    second, hit2 = cached_gram(spec, basis, cache_dir=tmp_path)
    assert (hit1, hit2) == (False, True)
    np.testing.assert_array_equal(first.entries, direct.entries)
    np.testing.assert_array_equal(second.entries, direct.entries)


def test_version_mismatch_recomputes(tmp_path):
    calls = []

    def produce():
        calls.append(1)
        return {"x": np.arange(3)}

    cache_lookup_or_compute({"k": 1}, produce, tmp_path, version="1")
    _, hit = cache_lookup_or_compute({"k": 1}, produce, tmp_path, version="2")
    assert not hit and len(calls) == 2


def test_corrupt_entry_is_replaced(tmp_path):
    produce = lambda: {"x": np.ones(4)}
    cache_lookup_or_compute({"k": 2}, produce, tmp_path)
    for f in tmp_path.glob("*.npz"):
        f.write_bytes(b"not an archive")
    payload, hit = cache_lookup_or_compute({"k": 2}, produce, tmp_path)
    assert not hit
    np.testing.assert_array_equal(payload["x"], np.ones(4))
    _, hit = cache_lookup_or_compute({"k": 2}, produce, tmp_path)
    assert hit


def test_environment_variable_selects_root(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    cache_lookup_or_compute({"k": 3}, lambda: {"x": np.zeros(1)})
    assert list(tmp_path.glob("*.npz"))


def test_no_root_means_no_caching(monkeypatch):
    monkeypatch.delenv(CACHE_ENV, raising=False)
    _, hit = cache_lookup_or_compute({"k": 4}, lambda: {"x": np.zeros(1)})
    assert not hit


@given(st.floats(0.2, 0.6), st.floats(0.02, 0.15))
def test_cache_never_changes_results(c, r):
    import tempfile
    spec, basis = _spec_basis(c, r)
    direct = gram_matrix(basis, spec).entries
    with tempfile.TemporaryDirectory() as d:
        for _ in range(2):
            gm, _ = cached_gram(spec, basis, cache_dir=d)
            np.testing.assert_array_equal(gm.entries, direct)
