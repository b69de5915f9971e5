"""Grid representation and ARC task I/O.

A grid is a dense 2D array of color codes 0-9, at most 30x30 (ARC
convention). Grids are immutable; every operation in the package returns
new grids. Tasks use the public ARC-AGI JSON format::

    {"train": [{"input": [[...]], "output": [[...]]}, ...],
     "test":  [{"input": [[...]], "output": [[...]]?}, ...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .errors import (
    ColorOutOfRange,
    EmptyGrid,
    MalformedJson,
    PixelOutOfBounds,
    SchemaViolation,
)

if TYPE_CHECKING:  # pragma: no cover
    from .scene import SceneGraph

MAX_SIDE = 30
NUM_COLORS = 10


@dataclass(frozen=True)
class Grid:
    """Immutable rectangular grid of color codes.

    ``rows`` is a tuple of row tuples, row-major, top-left origin (0,0),
    addressed as (row y, column x).
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise EmptyGrid("grid must have at least one row and one column")
        w = len(self.rows[0])
        for row in self.rows:
            if len(row) != w:
                raise SchemaViolation("ragged rows in grid")
            for v in row:
                if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v <= 9:
                    raise ColorOutOfRange(f"cell value {v!r} outside 0-9 palette")
        if len(self.rows) > MAX_SIDE or w > MAX_SIDE:
            raise SchemaViolation(
                f"grid {len(self.rows)}x{w} exceeds the {MAX_SIDE}x{MAX_SIDE} cap"
            )

    # -- construction --------------------------------------------------------

    @classmethod
    def _trusted(cls, rows: tuple[tuple[int, ...], ...]) -> "Grid":
        # internal fast path for step kernels, which only ever rewrite cells
        # with palette ints on an already-validated canvas
        g = object.__new__(cls)
        object.__setattr__(g, "rows", rows)
        return g

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]]) -> "Grid":
        if not isinstance(data, (list, tuple)):
            raise SchemaViolation("grid must be a list of lists")
        rows = []
        for row in data:
            if not isinstance(row, (list, tuple)):
                raise SchemaViolation("grid row must be a list")
            rows.append(tuple(int(v) if isinstance(v, (int, np.integer)) and not isinstance(v, bool) else v for v in row))
        return cls(tuple(rows))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Grid":
        if arr.ndim != 2:
            raise SchemaViolation("grid array must be 2-dimensional")
        return cls(tuple(tuple(int(v) for v in row) for row in arr))

    @classmethod
    def filled(cls, height: int, width: int, color: int) -> "Grid":
        return cls(tuple(tuple([color] * width) for _ in range(height)))

    # -- views ----------------------------------------------------------------

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return len(self.rows[0])

    @property
    def dims(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]))

    def __getitem__(self, yx: tuple[int, int]) -> int:
        y, x = yx
        return self.rows[y][x]

    def in_bounds(self, y: int, x: int) -> bool:
        return 0 <= y < len(self.rows) and 0 <= x < len(self.rows[0])

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.rows]

    def to_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    def to_text(self) -> str:
        """ASCII rendering: one digit per cell, rows on separate lines."""
        return "\n".join("".join(str(v) for v in row) for row in self.rows)

    def __hash__(self) -> int:
        # grids key the execution and scene caches, so hashing the row
        # tuples on every lookup adds up; cache it on first use
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.rows)
            object.__setattr__(self, "_hash", h)
        return h


def grids_equal(a: Grid, b: Grid) -> bool:
    """Exact cell-wise equality; dimensions must match."""
    return a.rows == b.rows


@dataclass
class TaskRecord:
    """One ARC task: k training pairs plus one or more test inputs."""

    task_id: str
    train_pairs: list[tuple[Grid, Grid]]
    test_inputs: list[Grid]
    test_outputs: list[Grid] | None = None

    def __post_init__(self):
        if not self.train_pairs:
            raise SchemaViolation("task must have at least one training pair")
        if not self.test_inputs:
            raise SchemaViolation("task must have at least one test input")
        if self.test_outputs is not None and len(self.test_outputs) != len(self.test_inputs):
            raise SchemaViolation("test_outputs length must match test_inputs")

    @property
    def k(self) -> int:
        return len(self.train_pairs)


def _grid_from_json(value: object, where: str) -> Grid:
    if not isinstance(value, list) or not value:
        raise SchemaViolation(f"{where}: grid must be a non-empty list of rows")
    width = None
    rows = []
    for row in value:
        if not isinstance(row, list) or not row:
            raise SchemaViolation(f"{where}: grid rows must be non-empty lists")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SchemaViolation(f"{where}: ragged rows")
        for v in row:
            if not isinstance(v, int) or isinstance(v, bool):
                raise SchemaViolation(f"{where}: cell {v!r} is not an integer")
            if not 0 <= v <= 9:
                raise ColorOutOfRange(f"{where}: cell value {v} outside 0-9 palette")
        rows.append(tuple(row))
    if len(rows) > MAX_SIDE or width > MAX_SIDE:
        raise SchemaViolation(f"{where}: grid exceeds the {MAX_SIDE}x{MAX_SIDE} cap")
    return Grid(tuple(rows))


def parse_task(raw: bytes | str, task_id: str = "") -> TaskRecord:
    """Parse ARC task JSON bytes into a validated TaskRecord.

    Test outputs are kept when present (evaluation mode); a partial set of
    test outputs is rejected.
    """
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise MalformedJson(f"not UTF-8: {e}") from e
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise MalformedJson(str(e)) from e
    if not isinstance(doc, dict):
        raise SchemaViolation("top level must be an object")
    for key in ("train", "test"):
        if key not in doc or not isinstance(doc[key], list) or not doc[key]:
            raise SchemaViolation(f"missing or empty {key!r} list")

    train_pairs = []
    for i, item in enumerate(doc["train"]):
        if not isinstance(item, dict) or "input" not in item or "output" not in item:
            raise SchemaViolation(f"train[{i}] must have input and output")
        train_pairs.append(
            (
                _grid_from_json(item["input"], f"train[{i}].input"),
                _grid_from_json(item["output"], f"train[{i}].output"),
            )
        )

    test_inputs = []
    test_outputs: list[Grid] = []
    outputs_seen = 0
    for i, item in enumerate(doc["test"]):
        if not isinstance(item, dict) or "input" not in item:
            raise SchemaViolation(f"test[{i}] must have an input")
        test_inputs.append(_grid_from_json(item["input"], f"test[{i}].input"))
        if "output" in item and item["output"] is not None:
            test_outputs.append(_grid_from_json(item["output"], f"test[{i}].output"))
            outputs_seen += 1
    if outputs_seen and outputs_seen != len(test_inputs):
        raise SchemaViolation("either all or none of the test items may carry outputs")

    return TaskRecord(
        task_id=task_id,
        train_pairs=train_pairs,
        test_inputs=test_inputs,
        test_outputs=test_outputs if outputs_seen else None,
    )


def serialize_task(task: TaskRecord) -> bytes:
    """Byte-stable ARC JSON for a TaskRecord (sorted keys, no whitespace)."""
    doc: dict = {
        "train": [
            {"input": a.to_lists(), "output": b.to_lists()} for a, b in task.train_pairs
        ],
        "test": [],
    }
    for i, g in enumerate(task.test_inputs):
        item: dict = {"input": g.to_lists()}
        if task.test_outputs is not None:
            item["output"] = task.test_outputs[i].to_lists()
        doc["test"].append(item)
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def load_task(path) -> TaskRecord:
    """Read a task file; the task_id is the file stem."""
    from pathlib import Path

    p = Path(path)
    return parse_task(p.read_bytes(), task_id=p.stem)


def render(scene: "SceneGraph", height: int, width: int) -> Grid:
    """Paint a scene graph onto a fresh grid of the given dimensions.

    Every cell starts as the scene background; objects paint in list order,
    so later objects overwrite earlier ones on overlap (DSL execution can
    create overlaps even though abstracted scenes never do).
    """
    cells = [[scene.background_color] * width for _ in range(height)]
    for obj in scene.objects:
        for (y, x), color in obj.cells.items():
            if not (0 <= y < height and 0 <= x < width):
                raise PixelOutOfBounds(
                    f"object {obj.object_id} pixel ({y},{x}) outside {height}x{width} frame"
                )
            cells[y][x] = color
    return Grid(tuple(tuple(row) for row in cells))
