"""Modes of a system as faces of a simplicial complex, driven by evidence."""

from .belief import (
    BeliefFunction,
    MassFunction,
    PartitionOfUnity,
    belief_from_mass,
    evaluate_phi,
    is_normalised,
    validate_belief,
    validate_partition,
)
from .geometry import (
    BarycentricPoint,
    Layout,
    Trajectory,
    active_set,
    carrier,
    embed,
    face_intersection,
    mass_outside,
)
from .modes import (
    ModeSystem,
    OracleMonitor,
    TransitionEvent,
    add_shadow,
    record_oracle_call,
    run,
    step,
)
from .simplicial import (
    Complex,
    Cover,
    SimplicialMap,
    check_refinement,
    complex_from_maximal_faces,
    face_census,
    is_valid,
    nerve,
    to_graph,
    validate_simplicial_map,
)

__all__ = [
    "BeliefFunction",
    "MassFunction",
    "PartitionOfUnity",
    "belief_from_mass",
    "evaluate_phi",
    "is_normalised",
    "validate_belief",
    "validate_partition",
    "BarycentricPoint",
    "Layout",
    "Trajectory",
    "active_set",
    "carrier",
    "embed",
    "face_intersection",
    "mass_outside",
    "ModeSystem",
    "OracleMonitor",
    "TransitionEvent",
    "add_shadow",
    "record_oracle_call",
    "run",
    "step",
    "Complex",
    "Cover",
    "SimplicialMap",
    "check_refinement",
    "complex_from_maximal_faces",
    "face_census",
    "is_valid",
    "nerve",
    "to_graph",
    "validate_simplicial_map",
]

__version__ = "0.1.0"
