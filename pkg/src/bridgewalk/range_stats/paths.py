"""Path statistics: range R_n and maximal distance D_n."""

from __future__ import annotations

from typing import Sequence, Union

from bridgewalk.bridge.lamplighter import LampBridgePath
from bridgewalk.bridge.sampler import BridgePath
from bridgewalk.walk_models import Vertex, WalkModel

PathLike = Union[BridgePath, LampBridgePath, Sequence[Vertex]]


def path_vertices(path: PathLike) -> Sequence[Vertex]:
    if isinstance(path, BridgePath):
        return path.vertices
    if isinstance(path, LampBridgePath):
        return path.states
    return path


def range_of_path(model: WalkModel, path: PathLike) -> int:
    """R_n = number of distinct vertices among S_0..S_{n-1} (S_n excluded)."""
    vertices = path_vertices(path)
    if len(vertices) < 2:
        raise ValueError("a path needs at least one step")
    return len({model.canonical_key(v) for v in vertices[:-1]})


def max_distance_of_path(model: WalkModel, path: PathLike) -> int:
    """D_n = max_k d(S_k)."""
    return max(model.graph_distance(v) for v in path_vertices(path))
