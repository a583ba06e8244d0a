"""Vertex fault-tolerant geodesic spanners for weighted points in simple
polygons and polygonal domains, with brute-force certification utilities."""

__version__ = "0.1.0"

from .geometry import (
    Point2,
    PolygonCut,
    SimplePolygon,
    SplitSegment,
    WeightedPoint,
    balanced_cut,
    orientation,
    triangulate,
)
from .geodesic import (
    GeodesicPath,
    PolygonalDomain,
    ProjectedPoint,
    build_visibility_graph,
    geodesic_distance,
    geodesic_project,
    weighted_distance,
)
from .sspd import SspdDecomposition, SspdPair, build_sspd, verify_sspd
from .decomposition import (
    DomainDecomposition,
    SeparatorPartition,
    decompose_domain,
    planar_separator,
)
from .spanner import (
    SpannerGraph,
    SpannerParams,
    build_vftswp_polygonal_domain,
    build_vftswp_simple_polygon,
    include_edges_using_sspd,
)
from .verify import StretchReport, certify_stretch, graph_distance, size_scaling_report
from .instances import Instance, generate_instance, instance_hash, load_instance, save_instance

__all__ = [
    "Point2",
    "WeightedPoint",
    "SimplePolygon",
    "SplitSegment",
    "PolygonCut",
    "orientation",
    "triangulate",
    "balanced_cut",
    "PolygonalDomain",
    "GeodesicPath",
    "ProjectedPoint",
    "build_visibility_graph",
    "geodesic_distance",
    "weighted_distance",
    "geodesic_project",
    "SspdPair",
    "SspdDecomposition",
    "build_sspd",
    "verify_sspd",
    "DomainDecomposition",
    "SeparatorPartition",
    "decompose_domain",
    "planar_separator",
    "SpannerParams",
    "SpannerGraph",
    "include_edges_using_sspd",
    "build_vftswp_simple_polygon",
    "build_vftswp_polygonal_domain",
    "StretchReport",
    "graph_distance",
    "certify_stretch",
    "size_scaling_report",
    "Instance",
    "generate_instance",
    "instance_hash",
    "load_instance",
    "save_instance",
]
