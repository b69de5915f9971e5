"""The 22-pattern transformation library.

Each schema names one parameterized atomic grid transformation. Fourteen
of them carry executable semantics (see ``execute.py``); the other eight
are hint-only: they can be detected and forwarded as structured hints but
have no deterministic executor, so programs containing them are rejected
at execution time.

Names and parameter enums are frozen; ``tests/data/registry_golden.json``
pins them byte-for-byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import UnknownPattern


@dataclass(frozen=True)
class PatternSchema:
    name: str
    description: str
    parameters: dict[str, tuple[str, ...]] = field(default_factory=dict)
    executable: bool = False

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "parameters": {k: list(v) for k, v in self.parameters.items()},
            "executable": self.executable,
        }


def _schema(name, description, executable, **parameters):
    return PatternSchema(
        name=name,
        description=description,
        parameters={k: tuple(v) for k, v in parameters.items()},
        executable=executable,
    )


_REGISTRY: tuple[PatternSchema, ...] = (
    _schema(
        "Horizontal Fill",
        "Grow an object sideways, painting empty cells row by row until a stop condition.",
        True,
        source_object=["line", "square", "rectangle", "cavity"],
        column_index=["left of an object", "right of an object"],
        fill_color=["based on source", "based on some different objects"],
        sequence=["based on source width", "based on source height"],
        stop_condition=["another object", "grid boundary", "specific color"],
        overlaps=["keep the latest", "no overlaps possible"],
    ),
    _schema(
        "Vertical Fill",
        "Grow an object up or down, painting empty cells column by column until a stop condition.",
        True,
        source_object=["line", "square", "rectangle", "cavity"],
        row_index=["top of an object", "below an object"],
        fill_color=["based on source color"],
        sequence=["based on source width", "based on source height"],
        stop_condition=["another object", "grid boundary", "specific color"],
    ),
    _schema(
        "Connecting Bridges",
        "Paint a connector between two objects along the straight corridor separating them.",
        True,
        source_object=["line", "square", "rectangle", "cavity"],
        target_object=["line", "square", "rectangle", "cavity"],
        bridge_color=[
            "based on bridge starting point",
            "based on bridge ending point",
            "based on cavity inside an object",
        ],
        connection_shape=["line", "triangle", "rectangle", "circle"],
        path_direction=["orthogonal", "diagonal", "based on color sequence"],
        thickness=["based on width of cavity", "based on width of starting object"],
    ),
    _schema(
        "Boundary Attachment Fill",
        "Complete or pad an object at its bounding box: make it solid or lay a strip on one side.",
        True,
        objects_with_holes=["horizontally laid", "vertically laid", "diagonally laid"],
        attachment_direction=["left", "right", "top", "bottom"],
        fill_logic=["fits in space to form rectangle", "gets laid on the object"],
        object_filled=["irregular", "triangle", "rectangle", "square"],
    ),
    _schema(
        "Diagonal Fill",
        "Paint cells along a 45-degree path leaving an object corner until something stops it.",
        True,
        source_point_or_corner=["L-shaped", "rectangle"],
        direction=["bottom-right", "top-left", "top-right", "bottom-left"],
        fill_color=["same as source", "complementary to source", "change on bounce"],
        stop_condition=["object obstruction", "hit grid boundary"],
    ),
    _schema(
        "Pattern Matching Fill / Remove",
        "Locate a repeating sub-pattern and fill it in or erase it.",
        False,
        template_pattern=["alternate objects", "similar objects", "symmetry via some axis"],
        operation=["remove cells to match pattern", "fill cells to match pattern"],
        fill_color=["boundary color", "pattern color"],
        tolerance=["no tolerance", "edges are exceptions"],
        target_regions=["inside a cavity", "outside an object"],
    ),
    _schema(
        "Creating Patterns based on starting Objects",
        "Grow a larger arrangement seeded from one or more starter objects.",
        False,
        seed_objects=["colored cell", "rectangle", "diagonal"],
        transformation_sequence=["circular", "straight", "fill all", "towards an object"],
        inter_object_spacing=["none", "single", "multiple", "variable"],
        repeat=["till filling the cavity", "only once"],
        stopping_condition=[
            "reached an object",
            "reached boundary",
            "filled object completely",
        ],
    ),
    _schema(
        "Find Objects in the Input Image and Color Them",
        "Select every object of a given class and repaint it.",
        True,
        object_type=["plus", "rectangle", "irregular", "circle", "cell", "horizontal bar"],
        new_color=["complements the original color", "constant throughout", "alternating pattern"],
        detection_method=["exact match", "fuzzy", "at some location"],
        overlap_policy=["all unique", "overlaps allowed"],
    ),
    _schema(
        "Remove Objects from the Output in a Particular Sequence",
        "Delete a set of objects chosen by a trigger rule and an ordering rule.",
        True,
        object_list_ordered=["all in the row", "all in a column", "same shape"],
        removal_method=["erase and color", "replace with background"],
        trigger_condition=["based on an object", "leftmost", "rightmost", "topmost", "overlaps"],
    ),
    _schema(
        "Rearrange the Objects in the Output in a Particular Sequence/Pattern",
        "Keep objects satisfying an ordering rule and reposition the rest.",
        False,
        keep_sequence=["ascending order of height", "descending order of height"],
        color_of_object=["same as in-place object", "original color"],
        pattern=["to a particular part of another object", "to a particular region"],
    ),
    _schema(
        "Alternating Pattern Filling",
        "Paint background cells in a two-or-three color rhythm: checkerboard or stripes.",
        True,
        colors=['["A", "B"]', '["A", "A", "B"]'],
        pattern_type=["checkerboard", "stripe_vertical", "stripe_horizontal"],
        internal_sequence_spacing=["none", "singular"],
    ),
    _schema(
        "Object Translation Based on Environment Colors",
        "Move an object to a place determined by the colors around it.",
        False,
        moving_object_shape=["plus", "square", "rectangle", "all cells"],
        target_environment_color=["same as moving object", "complementary color"],
        translation_vector=["centroid of the environment colors", "on top of environment color"],
        step_size=["arbitrary", "fixed size"],
    ),
    _schema(
        "Cavity Fill",
        "Paint the enclosed holes inside an object, or complete it to a solid block.",
        True,
        object_outline=["U shaped", "V shaped", "rectangular", "triangle", "square"],
        max_indent_depth=["based on available filling material", "till complete object"],
        fill_color=["arbitrary", "based on material already present"],
    ),
    _schema(
        "Add/Replace an Object",
        "Swap an object for a new shape anchored to the old one's footprint.",
        True,
        source_object=[
            "horizontal bar",
            "vertical bar",
            "rectangle",
            "square",
            "circle",
            "triangle",
            "irregular",
        ],
        add_replacement_object=[
            "horizontal bar",
            "vertical bar",
            "rectangle",
            "square",
            "circle",
            "triangle",
            "cell",
        ],
        inherit_properties=["same midpoint", "same centroid", "at some location"],
        additional_change=["add a boundary to new object", "do nothing"],
    ),
    _schema(
        "Falling Down (Gravity-Effect)",
        "Drop objects straight down until they rest on another object or the floor.",
        True,
        object_list=["cell", "square", "rectangle"],
        gravity_direction=["downward"],
        collision_map=["horizontal bar", "vertical bar"],
    ),
    _schema(
        "Get Attached to Similar Object",
        "Move or grow an object until it touches another of the same kind.",
        False,
        moving_object=["plus", "U shaped", "V shaped", "square", "rectangle", "irregular"],
        target_object_type=["rectangle", "square", "irregular"],
        attachment_rule=["head on with common color side", "fit into cavity"],
        movement_path=["fixed numeric steps", "reach goal"],
    ),
    _schema(
        "Object Translation Based on Goal",
        "Slide an object in a straight line toward a goal object until it arrives or is blocked.",
        True,
        source_object=["square", "rectangle", "irregular"],
        goal_location_or_object=["square", "matching pattern"],
        pathfinding_method=["straight-line", "fixed path"],
        step_count_or_speed=["stop on obstacle", "stop on goal", "fixed"],
    ),
    _schema(
        "Object Dismantles",
        "Break an object apart into cells or fragments that disperse.",
        False,
        source_object=["irregular", "rectangular", "square"],
        fragment_shape=["individual cells", "smaller tiles", "break at hit"],
        dismantle_sequence=["outer-to-inner", "when hit by other object", "symmetric"],
        dispersion_pattern=["momentum conserved", "toward hit object", "away from hit object"],
    ),
    _schema(
        "Symmetry-Based Pattern",
        "Complete the grid by reflecting or copying content across an axis or center.",
        True,
        symmetry_type=["horizontal", "vertical", "rotational"],
        axis_or_center_point=["horizontal bar", "vertical bar", "single cell"],
        object_group=["individual cells", "square"],
        copy_mode=["duplicate", "mirror"],
    ),
    _schema(
        "Ray-Cast / Ray-Trace Pattern",
        "Shoot a straight ray from a source, marking its path until a wall or object.",
        True,
        ray_source=["starting cell", "object"],
        direction=["horizontal", "vertical", "diagonal", "change on hit"],
        shape=["line", "triangle", "circle", "rectangle"],
        stop_condition=["object", "boundary"],
        mark_color=[
            "same as starting point",
            "alternating pattern",
            "change on hit",
            "based on other objects",
        ],
    ),
    _schema(
        "Scattering Pattern",
        "Spray a triangular, staircase-edged spread of cells outward from a source.",
        False,
        source=["starting cell", "object"],
        direction=["horizontal", "vertical", "diagonal", "radially outwards"],
        shape=["triangle"],
        stop_condition=["object", "boundary"],
        mark_color=[
            "same as starting point",
            "alternating pattern",
            "change on hit",
            "based on other objects",
        ],
        boundary=[
            "single cell thickness of different color than the pattern",
            "multi cell thickness of different color than the pattern",
        ],
        edge_pattern=[
            "staircase with a width 'w' and height 'h', where 'w' and 'h' are number of cells"
        ],
    ),
    _schema(
        "Patterns formed using small objects",
        "Arrangements and color schemes expressed by groups of small objects.",
        False,
        small_object_type=["small adjacent objects", "parts of a bigger object"],
        small_pattern_type=[
            "spatial pattern and/or color scheme pattern formed by smaller distinct objects",
            "coloring scheme pattern formed inside a object",
        ],
    ),
)

_BY_NAME = {s.name: s for s in _REGISTRY}

EXECUTABLE_NAMES: tuple[str, ...] = tuple(s.name for s in _REGISTRY if s.executable)
HINT_ONLY_NAMES: tuple[str, ...] = tuple(s.name for s in _REGISTRY if not s.executable)

# Registry rank, used as the deterministic tie-break everywhere.
REGISTRY_ORDER: dict[str, int] = {s.name: i for i, s in enumerate(_REGISTRY)}


def registry() -> list[PatternSchema]:
    """All 22 schemas in their fixed listing order."""
    return list(_REGISTRY)


def get_schema(name: str) -> PatternSchema:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownPattern(f"no pattern named {name!r}") from None


def registry_fingerprint() -> str:
    """Canonical JSON of names and parameter enums (golden-test surface)."""
    doc = [
        {"name": s.name, "parameters": {k: list(v) for k, v in s.parameters.items()}}
        for s in _REGISTRY
    ]
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
