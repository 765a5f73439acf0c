"""Content-addressed on-disk cache for Gram matrices and other array payloads."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

import numpy as np

__all__ = ["ENGINE_VERSION", "CACHE_ENV", "cache_root", "cache_key",
           "cache_lookup_or_compute", "cached_gram"]

ENGINE_VERSION = "1"
CACHE_ENV = "BERGMAN_LAB_CACHE"

log = logging.getLogger(__name__)


def cache_root(explicit=None) -> Path | None:
    """``explicit`` or the directory named by ``$BERGMAN_LAB_CACHE`` (None disables caching)."""
    root = explicit or os.environ.get(CACHE_ENV)
    return Path(root) if root else None


def cache_key(key: dict, version: str = ENGINE_VERSION) -> str:
    body = json.dumps({"key": key, "version": version}, sort_keys=True, default=str)
    return hashlib.sha256(body.encode()).hexdigest()


def _load(path, key_json, version):
    with np.load(path, allow_pickle=False) as data:
        if str(data["__version__"]) != version or str(data["__key__"]) != key_json:
            return None
        return {k: data[k] for k in data.files if not k.startswith("__")}


def cache_lookup_or_compute(key: dict, producer, cache_dir=None,
                            version: str = ENGINE_VERSION):
    """Return ``(payload, hit)``; ``payload`` is a dict of arrays.

    A stored entry is used only when both the full key and the version
    match, so hash collisions behave like version mismatches.  Unreadable
    entries are recomputed and overwritten.  Writes go to a temporary file
    that is renamed into place.
    """
    root = cache_root(cache_dir)
    if root is None:
        return producer(), False
    root.mkdir(parents=True, exist_ok=True)
    key_json = json.dumps(key, sort_keys=True, default=str)
    path = root / f"{cache_key(key, version)}.npz"
    if path.exists():
        try:
            payload = _load(path, key_json, version)
            if payload is not None:
                return payload, True
        except Exception as exc:   # corrupt or truncated file
            log.warning("discarding unreadable cache entry %s (%s)", path.name, exc)
    payload = producer()
    fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            np.savez(fh, __key__=np.array(key_json), __version__=np.array(version),
                     **{k: np.asarray(v) for k, v in payload.items()})
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return payload, False


def cached_gram(spec, basis, weight=None, tol=None, cache_dir=None):
    """:func:`integration.gram_matrix` behind the cache; returns ``(GramMatrix, hit)``."""
    from .domains import to_document
    from .integration import GramMatrix, gram_matrix

    centers = [complex(f.center) for f in basis.functions]
    key = {"spec": to_document(spec),
           "basis": [[int(f.power), [c.real, c.imag], float(f.scale)]
                     for f, c in zip(basis.functions, centers)],
           "weight": None if weight is None else weight.describe(),
           "tol": tol}

    def produce():
        gm = gram_matrix(basis, spec, weight, tol)
        return {"entries": gm.entries, "error": np.array(gm.error), "path": np.array(gm.path)}

    payload, hit = cache_lookup_or_compute(key, produce, cache_dir)
    gm = GramMatrix(basis, payload["entries"], weight, float(payload["error"]),
                    str(payload["path"]), spec)
    return gm, hit
