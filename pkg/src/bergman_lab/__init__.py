"""Numerical Bergman kernels, metrics and boundary probes."""

__version__ = "0.1.0"

from .domains import (Annulus, Disc, DiscMinusDiscs, DomainError, GeometricSequence,  # noqa: E402
                      HartogsDomainSpec, Hole, LaurentHartogsSpec, Membership, PNormBall,
                      Polydisc, SpikyBalanced, UnitDisc, Zalcman, classify, contains,
                      from_document, spec_hash, to_document)
from .kernel import closed_form_kernel, converged_kernel, planar_system  # noqa: E402
from .metric import bergman_distance, bergman_metric_at  # noqa: E402

__all__ = ["__version__", "Annulus", "Disc", "DiscMinusDiscs", "DomainError",
           "GeometricSequence", "HartogsDomainSpec", "Hole", "LaurentHartogsSpec", "Membership",
           "PNormBall", "Polydisc", "SpikyBalanced", "UnitDisc", "Zalcman", "classify",
           "contains", "from_document", "spec_hash", "to_document", "closed_form_kernel",
           "converged_kernel", "planar_system", "bergman_distance", "bergman_metric_at"]
