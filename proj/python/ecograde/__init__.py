"""EcoGrade: sustainability scoring for rental listings."""

try:
    from ._ecograde import *  # noqa: F403
    from ._ecograde import EcoGradeError, Service, __version__
except ImportError:  # build tree: the extension sits next to the package, not inside it
    from _ecograde import *  # noqa: F403
    from _ecograde import EcoGradeError, Service, __version__

__all__ = [
    "EcoGradeError",
    "Service",
    "__version__",
    "band_to_score",
    "co2_estimate",
    "cohens_d",
    "cohens_d_percent",
    "consumption_factor",
    "ecograde",
    "efficiency_factor",
    "emissions_label",
    "haversine_km",
    "leaves_for",
    "run_validation",
    "score",
    "supplier_factor",
    "to_leaf_scale",
    "tost_equivalence",
    "transport_factor",
    "walking_time_hours",
]
