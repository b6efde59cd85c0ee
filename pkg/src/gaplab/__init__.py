"""gaplab: gap distribution of angles to lattice points from a receding observer.

Three engines compute the same limiting distribution and cross-validate:

* :mod:`gaplab.simulate` -- exact brute-force simulation at finite box size;
* :mod:`gaplab.closed`   -- the explicit laws for t > 2/3 and their densities;
* :mod:`gaplab.general`  -- the superlevel-measure integral for any t > 0,
  numerically and as an exact symbolic region atlas.
"""

__version__ = "0.1.0"

from .exactconst import ExactConst
from .model import (
    Constraint,
    GapCurve,
    KappaVector,
    Region,
    RegionAtlas,
    Scene,
    ZERO_KAPPA,
    atlas_from_json,
    atlas_to_json,
    eval_kappa_basis,
    parse_rational,
    region_lookup,
)
from .closed import (
    AlphaVector,
    ClosedFormUnavailable,
    REFERENCE_ROWS,
    asymptotic_average_gap,
    check_boundary_relations,
    density_closed,
    density_from_kappa,
    gap_closed,
    reference_atlas,
)
from .profiles import (
    FracMinProfile,
    build_profile,
    superlevel_measure,
    superlevel_segments,
    superlevel_thresholds,
)
from .simulate import (
    AngleOrdering,
    GapSequence,
    curve_from_gaps,
    empirical_curve,
    enumerate_and_sort,
    gap_sequence,
    interference_region,
    model_gap,
)
from .general import (
    AtlasReport,
    IntegralBounds,
    build_strip_atlas,
    gap_numeric,
    integral_bounds,
    interference_depth,
    validate_atlas,
    x_integral,
)

__all__ = [
    "AlphaVector",
    "AngleOrdering",
    "AtlasReport",
    "ClosedFormUnavailable",
    "Constraint",
    "ExactConst",
    "FracMinProfile",
    "GapCurve",
    "GapSequence",
    "IntegralBounds",
    "KappaVector",
    "REFERENCE_ROWS",
    "Region",
    "RegionAtlas",
    "Scene",
    "ZERO_KAPPA",
    "asymptotic_average_gap",
    "atlas_from_json",
    "atlas_to_json",
    "build_profile",
    "build_strip_atlas",
    "check_boundary_relations",
    "curve_from_gaps",
    "density_closed",
    "density_from_kappa",
    "empirical_curve",
    "enumerate_and_sort",
    "eval_kappa_basis",
    "gap_closed",
    "gap_numeric",
    "gap_sequence",
    "integral_bounds",
    "interference_depth",
    "interference_region",
    "model_gap",
    "parse_rational",
    "reference_atlas",
    "region_lookup",
    "superlevel_measure",
    "superlevel_segments",
    "superlevel_thresholds",
    "validate_atlas",
    "x_integral",
]
