"""Symbolic ARC-grid solving: scene abstraction, a 22-pattern DSL,
cross-example program filtering, and ensemble solution generation."""

__version__ = "0.1.0"

from .errors import ArcError
from .grid import Grid, TaskRecord, grids_equal, load_task, parse_task, render, serialize_task
from .scene import Cavity, GridObject, SceneGraph, abstract_scene

__all__ = [
    "ArcError",
    "Grid",
    "TaskRecord",
    "grids_equal",
    "load_task",
    "parse_task",
    "render",
    "serialize_task",
    "Cavity",
    "GridObject",
    "SceneGraph",
    "abstract_scene",
    "__version__",
]
