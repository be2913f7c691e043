"""Upper bounds for contiguity distances of simplicial maps, and the motion planners they certify."""

from .complex_core import (
    Complex,
    ComplexError,
    DisconnectedComplexError,
    ProductVertexCodec,
    SimplicialMap,
    Subdivision,
    approximation_of_identity,
    axial_inclusions,
    barycentric_subdivision,
    boundary_complex,
    build_complex,
    euler_characteristic,
    factor_projections,
    generated_subcomplex,
    ordered_product,
    projections,
    simplex_complex,
)
from .contiguity import (
    ContiguityChain,
    CoverCertificate,
    CoverPart,
    DistanceReport,
    contiguous,
    is_simplicial,
    map_distance,
    verify_chain,
    verify_cover,
)
from .covering import add_facet, add_facets, covering, optimized_covering, rcc
from .planner import (
    BarycentricPoint,
    PlannerSystem,
    estimate_cat,
    estimate_distance,
    estimate_distance_subdivided,
    estimate_sc,
    plan_path,
)
from .search import SearchParams, local_search, reduce

__version__ = "0.1.0"
