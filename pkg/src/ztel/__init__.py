"""Computational lab for lattices Z^n x|_phi Z.

Exact group arithmetic and Cayley-ball search, the mapping telescope of the
defining linear map with its group action, a slope compactification of the
straightened product, and the experiments that measure whether translated
fundamental domains become small near the boundary.
"""

from .algebra import Automorphism, GroupElement, make_automorphism
from .compactify import (
    BoundaryPoint,
    ChartPoint,
    MonotoneTable,
    SlopeSpec,
    build_slope_spec,
)
from .telescope import (
    FundamentalDomain,
    ProductPoint,
    TelescopePoint,
    act,
    embed_straightline,
    fundamental_domain,
    u_map,
    v_map,
)

__version__ = "0.1.0"

__all__ = [
    "Automorphism",
    "GroupElement",
    "make_automorphism",
    "BoundaryPoint",
    "ChartPoint",
    "MonotoneTable",
    "SlopeSpec",
    "build_slope_spec",
    "FundamentalDomain",
    "ProductPoint",
    "TelescopePoint",
    "act",
    "embed_straightline",
    "fundamental_domain",
    "u_map",
    "v_map",
    "__version__",
]
