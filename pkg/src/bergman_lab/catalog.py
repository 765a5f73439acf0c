"""Named domains and declared nestings."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .constructions import BUILTIN_FAMILIES, build_builtin
from .domains import (Annulus, DiscMinusDiscs, DomainError, GeometricSequence, Hole, PNormBall,
                      Polydisc, SpikyBalanced, UnitDisc, Zalcman, from_document,
                      sample_interior)

__all__ = ["BUILTINS", "builtin", "resolve", "nested_pairs", "shared_points"]


def _zalcman_stage(n, divisor=8.0):
    a = GeometricSequence().take(n)
    return Zalcman(GeometricSequence(), tuple(float(abs(x)) / divisor for x in a), False)


BUILTINS = {
    "unit-disc": lambda: UnitDisc(),
    "annulus": lambda: Annulus(0.5),
    "disc-minus-disc": lambda: DiscMinusDiscs((Hole(0.5, 0.1),)),
    "zalcman-d3": lambda: _zalcman_stage(3),
    "ball": lambda: PNormBall(2.0, 2),
    "p-norm-ball-4": lambda: PNormBall(4.0, 2),
    "polydisc": lambda: Polydisc(2),
    "spiky-balanced": lambda: SpikyBalanced(),
    **{name: (lambda n=name: build_builtin(n)) for name in BUILTIN_FAMILIES},
}


def builtin(name: str):
    try:
        return BUILTINS[name]()
    except KeyError:
        raise DomainError(f"unknown built-in domain {name!r}") from None


def resolve(ref: str):
    """``builtin:<name>`` or the path of a JSON spec document."""
    if ref.startswith("builtin:"):
        return builtin(ref.split(":", 1)[1])
    path = Path(ref)
    if not path.exists():
        raise FileNotFoundError(f"spec file not found: {ref}")
    return from_document(json.loads(path.read_text()))


def nested_pairs():
    """Fifty ``(label, inner, outer)`` planar pairs with ``inner ⊂ outer``."""
    E = UnitDisc()
    pairs = []
    for r in (0.1, 0.2, 0.3, 0.4, 0.5, 0.6):
        pairs.append((f"annulus({r}) in disc", Annulus(r), E))
    for r1, r2 in ((0.1, 0.3), (0.3, 0.5), (0.1, 0.5)):
        pairs.append((f"annulus({r2}) in annulus({r1})", Annulus(r2), Annulus(r1)))
    for c in (0.5, -0.3 + 0.3j, 0.2j):
        for r in (0.05, 0.1):
            pairs.append((f"hole({c}, {r}) in disc", DiscMinusDiscs((Hole(c, r),)), E))
    for c in (0.5, -0.3 + 0.3j, 0.2j):
        pairs.append((f"hole({c}) grows", DiscMinusDiscs((Hole(c, 0.1),)),
                      DiscMinusDiscs((Hole(c, 0.05),))))
    for c, d in ((0.5, -0.5), (0.4j, -0.4j), (0.3, 0.6j)):
        pairs.append((f"second hole {d}", DiscMinusDiscs((Hole(c, 0.1), Hole(d, 0.1))),
                      DiscMinusDiscs((Hole(c, 0.1),))))
    for r in (0.1, 0.2, 0.3):
        pairs.append((f"annulus({r}) minus a disc",
                      DiscMinusDiscs((Hole(0, r), Hole(0.6, 0.1))), Annulus(r)))
    for n in range(1, 5):
        pairs.append((f"zalcman stage {n + 1} in stage {n}", _zalcman_stage(n + 1),
                      _zalcman_stage(n)))
        pairs.append((f"zalcman stage {n} in disc", _zalcman_stage(n), E))
    pairs.append(("disc in itself", E, E))
    pairs.append(("annulus in itself", Annulus(0.5), Annulus(0.5)))
    for p in (0.3, -0.2j):
        pairs.append((f"puncture {p}", DiscMinusDiscs((Hole(0.6, 0.1),), (p,)),
                      DiscMinusDiscs((Hole(0.6, 0.1),))))
    for c in (0.5, -0.25j):
        pairs.append((f"point-like hole {c}", DiscMinusDiscs((Hole(c, log_radius=-50.0),)), E))
    for c in (0.5, -0.4, 0.3j, -0.2 - 0.2j):
        for r1, r2 in ((0.02, 0.05), (0.05, 0.1), (0.02, 0.1)):
            pairs.append((f"hole({c}) {r1} -> {r2}", DiscMinusDiscs((Hole(c, r2),)),
                          DiscMinusDiscs((Hole(c, r1),))))
    return pairs


def shared_points(inner, count: int = 8, seed: int = 0, min_distance: float = 0.05,
                  max_modulus: float = 0.9) -> np.ndarray:
    """Interior points of ``inner`` away from its boundary."""
    pts = sample_interior(inner, 16 * count, seed=seed)
    keep = (inner.distance(pts) >= min_distance) & (np.abs(pts) <= max_modulus)
    pts = pts[keep][:count]
    if len(pts) < count:
        raise DomainError("not enough well-separated interior points")
    return pts
