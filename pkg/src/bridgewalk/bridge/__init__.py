from bridgewalk.bridge.enumerate import PathEnumeration, enumerate_bridges, enumerate_walks
from bridgewalk.bridge.lamplighter import (
    LampBridgePath,
    ProjectionRangeTable,
    expected_projection_range,
    lamplighter_path_probability,
    lamplighter_projection_pmf,
    lamplighter_return_probabilities,
    projection_range_joint,
    sample_lamplighter_bridge,
)
from bridgewalk.bridge.sampler import (
    BridgePath,
    bridge_step_distribution,
    choose_neighbor,
    path_probability,
    sample_bridge,
    sample_walk,
)
from bridgewalk.bridge.tables import BackwardTable, backward_table

__all__ = [
    "BackwardTable",
    "BridgePath",
    "LampBridgePath",
    "PathEnumeration",
    "ProjectionRangeTable",
    "backward_table",
    "bridge_step_distribution",
    "choose_neighbor",
    "enumerate_bridges",
    "enumerate_walks",
    "expected_projection_range",
    "lamplighter_path_probability",
    "lamplighter_projection_pmf",
    "lamplighter_return_probabilities",
    "path_probability",
    "projection_range_joint",
    "sample_bridge",
    "sample_lamplighter_bridge",
    "sample_walk",
]
