"""Return kernels, exact bridge sampling and range statistics for symmetric random walks."""

from bridgewalk.walk_models import (
    LampState,
    LamplighterModel,
    LatticeModel,
    ModelSpec,
    TreeModel,
    VolumeCurve,
    WalkModel,
    make_model,
)

__version__ = "0.1.0"

__all__ = [
    "LampState",
    "LamplighterModel",
    "LatticeModel",
    "ModelSpec",
    "TreeModel",
    "VolumeCurve",
    "WalkModel",
    "make_model",
]
