"""storient: st-orientations of plane graphs with few transitive edges."""

from .embedding import (
    Angle,
    Face,
    PlaneGraph,
    build_embedding,
    check_st_admissible,
    is_biconnected,
    parse_pg,
    trace_faces,
    write_pg,
)
from .orientation import (
    OrientationReport,
    StNumbering,
    StOrientation,
    heuristic_orientation,
    improvement_percent,
    orient_by_numbering,
    parse_ori,
    st_number,
    transitive_edges_faces,
    transitive_edges_reach,
    validate_st_orientation,
    write_ori,
)
from .labeling import (
    StLabeling,
    labels_from_orientation,
    orientation_from_labels,
    parse_lab,
    validate_labeling,
    write_lab,
)
from .generator import DensityStats, GenConfig, density, generate, sample_stats

__version__ = "0.1.0"
