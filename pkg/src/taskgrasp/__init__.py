"""Task-oriented grasping from a single RGB-D view.

The package turns a natural-language request plus one RGB-D observation into
a ranked parallel-jaw grasp on the task-relevant object part. It ships a
synthetic tabletop simulator and deterministic mock backends so the whole
pipeline runs offline.
"""

__version__ = "0.1.0"

from . import errors, geometry, grasp, grounding, reasoning, scene
from .errors import TaskGraspError

__all__ = [
    "TaskGraspError",
    "__version__",
    "errors",
    "geometry",
    "grasp",
    "grounding",
    "reasoning",
    "scene",
]
