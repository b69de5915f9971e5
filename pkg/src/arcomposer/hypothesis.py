"""Candidate generation: propose pattern instances that explain a training pair.

Two proposers share one Detection record type. The builtin proposer is a
deterministic matched filter: it classifies the cell-level diff between the
two grids, gates the executable schemas whose effect could produce such a
diff, then confirms candidates by running them through the real kernels and
comparing grids exactly. The external proposer adapter forwards the pair to
a remote model speaking the JSON detection protocol and parses its answer
leniently.

Detections are aggregated across repetitions by count, and the surviving
top-k patterns are expanded into concrete candidate programs by enumerating
bindings over the scene.
"""

from __future__ import annotations

import json
import logging
import random
import zlib
from collections import Counter
from dataclasses import dataclass, field

from .errors import ArcError, BindingResolutionFailed, EmptyResponse
from .grid import Grid, grids_equal, render
from .scene import SceneGraph, abstract_scene_cached
from .patterns import (
    EXECUTABLE_NAMES,
    REGISTRY_ORDER,
    PatternInstance,
    Program,
    Selector,
    get_schema,
    registry,
)
from .patterns.execute import run_program_on_grid

logger = logging.getLogger(__name__)

_EXTREMALS = ("leftmost", "rightmost", "topmost", "bottommost")


# --- domain types -------------------------------------------------------------

@dataclass(frozen=True)
class Detection:
    """One proposer verdict about one pattern on one training pair."""

    pattern_name: str
    params: dict[str, str] = field(default_factory=dict)
    detected: bool = True
    reason: str = ""
    source: str = "builtin"  # builtin | external

    def to_json_dict(self) -> dict:
        return {
            "pattern_name": self.pattern_name,
            "params": dict(self.params),
            "detected": self.detected,
            "reason": self.reason,
            "source": self.source,
        }


@dataclass(frozen=True)
class RankedPattern:
    """A pattern surviving aggregation, with its detection count and the
    modal parameter map (plus every distinct map seen, for enumeration)."""

    pattern_name: str
    count: int
    params: dict[str, str]
    param_maps: tuple[dict[str, str], ...] = ()


@dataclass
class CandidateSet:
    """Per-training-pair proposals: candidate programs plus raw counts."""

    example_index: int
    candidates: list[Program]
    detection_counts: dict[str, int]
    ranked: tuple[RankedPattern, ...] = ()


@dataclass
class InstantiationResult:
    programs: list[Program]
    truncated: bool = False  # enumeration budget ran out (soft cap)
    hint_path: bool = False  # ranked patterns existed but none executable


class _Budget:
    """Mutable countdown over step executions (soft: callers stop, not raise)."""

    def __init__(self, limit: int | None):
        self.remaining = limit

    def spend(self, n: int = 1) -> bool:
        if self.remaining is None:
            return True
        self.remaining -= n
        return self.remaining >= 0

    @property
    def exhausted(self) -> bool:
        return self.remaining is not None and self.remaining < 0


# --- grid diff ----------------------------------------------------------------

class GridDiff:
    """Cell-level difference between two same-sized grids, relative to the
    input scene's background color."""

    def __init__(self, g_in: Grid, g_out: Grid, bg: int):
        self.dims_match = g_in.dims == g_out.dims
        self.added: dict[tuple[int, int], int] = {}
        self.removed: dict[tuple[int, int], int] = {}
        self.recolored: dict[tuple[int, int], tuple[int, int]] = {}
        if not self.dims_match:
            return
        for y, (ri, ro) in enumerate(zip(g_in.rows, g_out.rows)):
            for x, (a, b) in enumerate(zip(ri, ro)):
                if a == b:
                    continue
                if a == bg:
                    self.added[(y, x)] = b
                elif b == bg:
                    self.removed[(y, x)] = a
                else:
                    self.recolored[(y, x)] = (a, b)

    @property
    def empty(self) -> bool:
        return not (self.added or self.removed or self.recolored)

    @property
    def additive(self) -> bool:
        return bool(self.added) and not self.removed and not self.recolored

    @property
    def subtractive(self) -> bool:
        return bool(self.removed) and not self.added and not self.recolored

    @property
    def recolor_only(self) -> bool:
        return bool(self.recolored) and not self.added and not self.removed

    @property
    def transportish(self) -> bool:
        return bool(self.added) and bool(self.removed)


def _pixel_axes(scene: SceneGraph):
    """Row/col/diagonal index sets over all object pixels."""
    rows, cols, sums, diffs = set(), set(), set(), set()
    for obj in scene.objects:
        for (y, x) in obj.pixels:
            rows.add(y)
            cols.add(x)
            sums.add(y + x)
            diffs.add(y - x)
    return rows, cols, sums, diffs


def _gate(name: str, diff: GridDiff, scene: SceneGraph) -> bool:
    """Necessary condition on the diff for `name` to have produced it.

    Sound pruning only: every kernel effect satisfies its own gate, so
    skipping a gated-out schema can never lose an exact match.
    """
    rows, cols, sums, diffs = _pixel_axes(scene)
    if name == "Horizontal Fill":
        return diff.additive and all(y in rows for (y, _) in diff.added)
    if name == "Vertical Fill":
        return diff.additive and all(x in cols for (_, x) in diff.added)
    if name == "Connecting Bridges":
        if not (diff.additive and len(scene.objects) >= 2):
            return False
        # bridge cells sit strictly between object pixels along some axis
        span: dict[tuple[str, int], tuple[int, int]] = {}
        for obj in scene.objects:
            for (y, x) in obj.pixels:
                for axis, idx, pos in (
                    ("r", y, x), ("c", x, y), ("d", y - x, y), ("a", y + x, y)
                ):
                    lo, hi = span.get((axis, idx), (pos, pos))
                    span[(axis, idx)] = (min(lo, pos), max(hi, pos))

        def between(axis, idx, pos):
            lo, hi = span.get((axis, idx), (0, -1))
            return lo < pos < hi

        return all(
            between("r", y, x) or between("c", x, y)
            or between("d", y - x, y) or between("a", y + x, y)
            for (y, x) in diff.added
        )
    if name == "Boundary Attachment Fill":
        if not diff.additive:
            return False
        boxes = [o.bbox for o in scene.objects]
        return all(
            any(y0 - 1 <= y <= y1 + 1 and x0 - 1 <= x <= x1 + 1 for (y0, x0, y1, x1) in boxes)
            for (y, x) in diff.added
        )
    if name == "Diagonal Fill":
        return diff.additive and all(
            (y + x) in sums or (y - x) in diffs for (y, x) in diff.added
        )
    if name == "Find Objects in the Input Image and Color Them":
        return diff.recolor_only
    if name == "Remove Objects from the Output in a Particular Sequence":
        return diff.subtractive
    if name == "Alternating Pattern Filling":
        return diff.additive and len(set(diff.added.values())) <= 2
    if name == "Cavity Fill":
        if not diff.additive:
            return False
        boxes = [o.bbox for o in scene.objects]
        return all(
            any(y0 <= y <= y1 and x0 <= x <= x1 for (y0, x0, y1, x1) in boxes)
            for (y, x) in diff.added
        )
    if name == "Add/Replace an Object":
        # erases the source, draws a derived shape: removals are object
        # pixels, all changes stay within one cell of some bounding box
        pix = {p for o in scene.objects for p in o.pixels}
        if not all(p in pix for p in diff.removed):
            return False
        boxes = [o.bbox for o in scene.objects]
        return all(
            any(y0 - 1 <= y <= y1 + 1 and x0 - 1 <= x <= x1 + 1 for (y0, x0, y1, x1) in boxes)
            for (y, x) in list(diff.added) + list(diff.recolored)
        )
    if name == "Falling Down (Gravity-Effect)":
        # vertical moves change cells only in vacated columns; overlap of a
        # multicolor mover with its old footprint shows up as recolors
        if not (diff.removed or diff.recolored):
            return False
        src_cols = {x for (_, x) in diff.removed} | {x for (_, x) in diff.recolored}
        return all(x in src_cols for (_, x) in diff.added)
    if name == "Object Translation Based on Goal":
        if not (diff.removed or diff.recolored):
            return False
        landed = list(diff.added) + list(diff.recolored)
        vacated = list(diff.removed) + list(diff.recolored)
        rows_ok = {y for (y, _) in landed} <= {y for (y, _) in vacated}
        cols_ok = {x for (_, x) in landed} <= {x for (_, x) in vacated}
        return rows_ok or cols_ok
    if name == "Symmetry-Based Pattern":
        return diff.additive
    if name == "Ray-Cast / Ray-Trace Pattern":
        return diff.additive and all(
            y in rows or x in cols or (y + x) in sums or (y - x) in diffs
            for (y, x) in diff.added
        )
    return False


# --- step instance enumeration --------------------------------------------------

def _scene_palette(scene: SceneGraph) -> list[int]:
    return sorted({c for obj in scene.objects for c in obj.cells.values()})


def _object_selectors(scene: SceneGraph) -> list[Selector]:
    # specific selectors first: enumeration order doubles as the preference
    # order wherever ties are broken, and "all" transfers worst to test
    # inputs with extra objects
    sels = [Selector("color", c) for c in sorted({o.main_color for o in scene.objects})]
    sels += [Selector("shape", s) for s in sorted({o.shape_label for o in scene.objects})]
    sels += [Selector("extremal", e) for e in _EXTREMALS]
    sels += [Selector("size_rank", k) for k in range(len(scene.objects))]
    sels.append(Selector("all"))
    return sels


def _pair_selectors(scene: SceneGraph) -> list[Selector]:
    # two-role schemas want pointed selectors; "all" on both sides mostly
    # degenerates to every-pair bridging and bloats the space
    sels = [Selector("color", c) for c in sorted({o.main_color for o in scene.objects})]
    sels += [Selector("extremal", e) for e in _EXTREMALS]
    sels += [Selector("size_rank", k) for k in range(len(scene.objects))]
    return sels


def _dedup_by_resolution(scene: SceneGraph, sels: list[Selector]) -> list[Selector]:
    """Keep the first selector per resolved object set (detection only --
    candidate enumeration must keep every spelling so canonical ids align
    across examples)."""
    seen: set[frozenset[int]] = set()
    out = []
    for s in sels:
        try:
            ids = frozenset(o.object_id for o in s.resolve(scene))
        except BindingResolutionFailed:
            continue
        if ids not in seen:
            seen.add(ids)
            out.append(s)
    return out


def _iter_schema_instances(name, scene, src_sels, pair_sels, fill_colors, stop_colors):
    """Yield (params, bindings) for one executable schema.

    Only kernel-interpreted parameters are enumerated; descriptive ones
    stay at their defaults so canonical ids do not fan out.
    """
    if name == "Horizontal Fill":
        for col in ("left of an object", "right of an object"):
            for stop in ("another object", "grid boundary", "specific color"):
                stops = stop_colors if stop == "specific color" else (None,)
                for mode in ("based on source", "based on some different objects"):
                    fills = fill_colors if mode == "based on some different objects" else (None,)
                    for src in src_sels:
                        for sc in stops:
                            for fc in fills:
                                b = {"source": src}
                                if sc is not None:
                                    b["stop_color"] = sc
                                if fc is not None:
                                    b["color"] = fc
                                yield (
                                    {"column_index": col, "fill_color": mode, "stop_condition": stop},
                                    b,
                                )
    elif name == "Vertical Fill":
        for row in ("top of an object", "below an object"):
            for stop in ("another object", "grid boundary", "specific color"):
                stops = stop_colors if stop == "specific color" else (None,)
                for src in src_sels:
                    for sc in stops:
                        b = {"source": src}
                        if sc is not None:
                            b["stop_color"] = sc
                        yield ({"row_index": row, "stop_condition": stop}, b)
    elif name == "Connecting Bridges":
        # s == t is kept: bridging within one color class is the common case
        for path, shape in (("orthogonal", "line"), ("orthogonal", "rectangle"), ("diagonal", "line")):
            for cmode in ("based on bridge starting point", "based on bridge ending point"):
                for s in pair_sels:
                    for t in pair_sels:
                        yield (
                            {
                                "bridge_color": cmode,
                                "connection_shape": shape,
                                "path_direction": path,
                            },
                            {"source": s, "target": t},
                        )
    elif name == "Boundary Attachment Fill":
        for src in src_sels:
            yield ({"fill_logic": "fits in space to form rectangle"}, {"source": src})
            for d in ("left", "right", "top", "bottom"):
                yield (
                    {"attachment_direction": d, "fill_logic": "gets laid on the object"},
                    {"source": src},
                )
    elif name == "Diagonal Fill":
        for d in ("bottom-right", "top-left", "top-right", "bottom-left"):
            for fill in ("same as source", "complementary to source"):
                for stop in ("object obstruction", "hit grid boundary"):
                    for src in src_sels:
                        yield (
                            {"direction": d, "fill_color": fill, "stop_condition": stop},
                            {"source": src},
                        )
    elif name == "Find Objects in the Input Image and Color Them":
        for src in src_sels:
            yield ({"new_color": "complements the original color"}, {"source": src})
            for mode in ("constant throughout", "alternating pattern"):
                for c in fill_colors:
                    yield ({"new_color": mode}, {"source": src, "color": c})
    elif name == "Remove Objects from the Output in a Particular Sequence":
        for order in ("all in the row", "all in a column", "same shape"):
            for trig in ("based on an object", "leftmost", "rightmost", "topmost", "overlaps"):
                for src in src_sels:
                    yield (
                        {"object_list_ordered": order, "trigger_condition": trig},
                        {"source": src},
                    )
    elif name == "Alternating Pattern Filling":
        for colors in ('["A", "B"]', '["A", "A", "B"]'):
            for ptype in ("checkerboard", "stripe_vertical", "stripe_horizontal"):
                for a in fill_colors:
                    for b in fill_colors:
                        if a == b:
                            continue
                        yield (
                            {"colors": colors, "pattern_type": ptype},
                            {"color_a": a, "color_b": b},
                        )
    elif name == "Cavity Fill":
        for depth in ("based on available filling material", "till complete object"):
            for src in src_sels:
                yield (
                    {"max_indent_depth": depth, "fill_color": "based on material already present"},
                    {"source": src},
                )
                for c in fill_colors:
                    yield (
                        {"max_indent_depth": depth, "fill_color": "arbitrary"},
                        {"source": src, "color": c},
                    )
    elif name == "Add/Replace an Object":
        for shape in ("horizontal bar", "vertical bar", "rectangle", "square", "cell"):
            for anchor in ("same midpoint", "same centroid"):
                for src in src_sels:
                    yield (
                        {
                            "add_replacement_object": shape,
                            "inherit_properties": anchor,
                            "additional_change": "do nothing",
                        },
                        {"source": src},
                    )
    elif name == "Falling Down (Gravity-Effect)":
        for src in src_sels:
            yield ({}, {"source": src})
    elif name == "Object Translation Based on Goal":
        for speed in ("stop on obstacle", "stop on goal"):
            for s in pair_sels:
                for t in pair_sels:
                    if s == t:
                        continue
                    yield (
                        {"step_count_or_speed": speed},
                        {"source": s, "goal": t},
                    )
    elif name == "Symmetry-Based Pattern":
        for sym in ("horizontal", "vertical", "rotational"):
            yield ({"symmetry_type": sym, "copy_mode": "mirror"}, {})
        for sym in ("horizontal", "vertical"):
            yield ({"symmetry_type": sym, "copy_mode": "duplicate"}, {})
    elif name == "Ray-Cast / Ray-Trace Pattern":
        for d in ("horizontal", "vertical", "diagonal"):
            for stop in ("object", "boundary"):
                for mark in ("same as starting point", "alternating pattern"):
                    for src in src_sels:
                        yield (
                            {"direction": d, "stop_condition": stop, "mark_color": mark},
                            {"source": src},
                        )


def enumerate_step_instances(
    scene: SceneGraph,
    names: tuple[str, ...] | list[str] | None = None,
    *,
    fill_colors: list[int] | None = None,
    stop_colors: list[int] | None = None,
    dedup: bool = False,
    cap_per_schema: int | None = None,
) -> list[PatternInstance]:
    """Deterministic list of legal single-step instances for this scene.

    The ordering is fixed: registry order over schemas, declared enum order
    within a schema, selector order within a role. This list is the shared
    instance space: the planted-task generator samples from it and the
    proposer scans it, so recovery is a closed loop.
    """
    if names is None:
        names = EXECUTABLE_NAMES
    palette = _scene_palette(scene)
    if fill_colors is None:
        fill_colors = [c for c in palette if c != scene.background_color]
    if stop_colors is None:
        stop_colors = [c for c in palette if c != scene.background_color]
    src_sels = _object_selectors(scene)
    pair_sels = _pair_selectors(scene)
    if dedup:
        src_sels = _dedup_by_resolution(scene, src_sels)
        pair_sels = _dedup_by_resolution(scene, pair_sels)
    out: list[PatternInstance] = []
    for name in sorted(names, key=REGISTRY_ORDER.__getitem__):
        if not get_schema(name).executable:
            continue
        n = 0
        for params, bindings in _iter_schema_instances(
            name, scene, src_sels, pair_sels, fill_colors, stop_colors
        ):
            inst = PatternInstance(name, params, bindings)
            # built from the schema's own enums and role table, so the
            # executor's legality re-check would be pure overhead
            inst._checked = True
            out.append(inst)
            n += 1
            if cap_per_schema is not None and n >= cap_per_schema:
                break
    return out


# --- exact matching -------------------------------------------------------------

def _try_step(inst: PatternInstance, g: Grid) -> Grid | None:
    try:
        return run_program_on_grid(Program([inst]), g)
    except ArcError:
        return None


def _bound_colors_plausible(inst, added_vals: set, recolor_targets: set) -> bool:
    """Reject instances whose bound paint color cannot reproduce the diff.

    Fill kernels write their bound color onto background cells only, so an
    exact match forces the set of added cell values to be exactly that color
    (or a subset of {a, b} for the alternating pair). Find-and-color rewrites
    object pixels, so its bound color must cover every recolor target. Stop
    colors are conditions, never painted, and are left alone.
    """
    name = inst.schema_name
    b = inst.bindings
    if name == "Horizontal Fill":
        if inst.params.get("fill_color") == "based on some different objects":
            return added_vals == {b.get("color")}
    elif name == "Cavity Fill":
        if inst.params.get("fill_color") == "arbitrary":
            return added_vals == {b.get("color")}
    elif name == "Alternating Pattern Filling":
        return added_vals <= {b.get("color_a"), b.get("color_b")}
    elif name == "Find Objects in the Input Image and Color Them":
        mode = inst.params.get("new_color")
        if mode == "constant throughout":
            return not added_vals and recolor_targets == {b.get("color")}
        if mode == "alternating pattern":
            c = b.get("color")
            if isinstance(c, int):
                return not added_vals and recolor_targets <= {c, 9 - c}
    return True


def exact_step_matches(
    scene_in: SceneGraph,
    g_out: Grid,
    *,
    names: tuple[str, ...] | None = None,
    per_schema_cap: int = 12,
    budget: _Budget | None = None,
    dedup: bool = False,
) -> list[PatternInstance]:
    """Single-step instances whose kernel output equals g_out exactly.

    Candidates are diff-gated per schema, then confirmed by execution, so a
    returned instance is a proof, not a guess. Dedup collapses selector
    spellings that resolve alike; leave it off when the caller needs ids
    that line up across examples.
    """
    g_in = render(scene_in, *scene_in.source_dims)
    if g_in.dims != g_out.dims or grids_equal(g_in, g_out):
        return []
    diff = GridDiff(g_in, g_out, scene_in.background_color)
    palette = [c for c in _scene_palette(scene_in) if c != scene_in.background_color]
    # any color a kernel painted either changed some cell or was already on
    # the input, so this pool can never exclude a true match
    fill_colors = sorted(
        set(diff.added.values())
        | {b for (_, b) in diff.recolored.values()}
        | set(palette)
    )
    added_vals = set(diff.added.values())
    recolor_targets = {b for (_, b) in diff.recolored.values()}
    budget = budget or _Budget(None)
    matches: list[PatternInstance] = []
    for name in (names or EXECUTABLE_NAMES):
        if not _gate(name, diff, scene_in):
            continue
        found = 0
        for inst in enumerate_step_instances(
            scene_in,
            [name],
            fill_colors=fill_colors,
            stop_colors=palette,
            dedup=dedup,
        ):
            if not _bound_colors_plausible(inst, added_vals, recolor_targets):
                continue
            if not budget.spend():
                return matches
            mid = _try_step(inst, g_in)
            if mid is not None and grids_equal(mid, g_out):
                matches.append(inst)
                found += 1
                if found >= per_schema_cap:
                    break
    return matches


# --- proposers ------------------------------------------------------------------

def propose_builtin(
    input_scene: SceneGraph,
    output_scene: SceneGraph,
    exact: list[PatternInstance] | None = None,
) -> list[Detection]:
    """Deterministic detections for one training pair.

    Exact kernel matches come first (with their confirmed parameters); for
    schemas without an exact match the coarse diff signature alone can
    still raise a detection, which feeds ranking and the hint path. A
    caller that already ran the exact matcher can pass its result in.
    """
    g_in = render(input_scene, *input_scene.source_dims)
    g_out = render(output_scene, *output_scene.source_dims)
    if grids_equal(g_in, g_out):
        return []
    diff = GridDiff(g_in, g_out, input_scene.background_color)
    if not diff.dims_match:
        return []  # executable patterns are size-preserving
    detections: list[Detection] = []
    if exact is None:
        exact = exact_step_matches(input_scene, g_out, per_schema_cap=4, dedup=True)
    by_name: dict[str, list[PatternInstance]] = {}
    for inst in exact:
        by_name.setdefault(inst.schema_name, []).append(inst)
    for name in EXECUTABLE_NAMES:
        insts = by_name.get(name)
        if insts:
            seen: set[tuple] = set()
            for inst in insts:
                key = tuple(sorted(inst.params.items()))
                if key in seen:
                    continue
                seen.add(key)
                detections.append(
                    Detection(
                        pattern_name=name,
                        params=dict(inst.params),
                        detected=True,
                        reason="single step reproduces the output exactly",
                        source="builtin",
                    )
                )
        elif _gate(name, diff, input_scene):
            kind = (
                "additive" if diff.additive
                else "subtractive" if diff.subtractive
                else "recolor" if diff.recolor_only
                else "transport"
            )
            detections.append(
                Detection(
                    pattern_name=name,
                    params={},
                    detected=True,
                    reason=f"{kind} diff signature is consistent with this pattern",
                    source="builtin",
                )
            )
    return detections


def _coerce_bool(v) -> bool | None:
    if isinstance(v, bool):
        return v
    if isinstance(v, str) and v.lower() in ("true", "false"):
        return v.lower() == "true"
    return None


def _parse_external_entry(entry) -> Detection | None:
    """One lenient pass over a wire detection record; None means drop it."""
    if not isinstance(entry, dict):
        logger.warning("external detection entry is not an object: %r", entry)
        return None
    name = entry.get("pattern_name")
    try:
        schema = get_schema(name)
    except ArcError:
        logger.warning("external detection names unknown pattern %r", name)
        return None
    detected = _coerce_bool(entry.get("pattern_detected"))
    if detected is None:
        logger.warning("external detection for %r lacks a boolean verdict", name)
        return None
    raw = entry.get("params") or {}
    if not isinstance(raw, dict):
        logger.warning("external detection for %r has non-object params", name)
        return None
    params: dict[str, str] = {}
    for k, v in raw.items():
        if k not in schema.parameters or v not in schema.parameters[k]:
            logger.warning("external detection for %r has illegal param %r=%r", name, k, v)
            return None
        params[k] = v
    return Detection(
        pattern_name=name,
        params=params,
        detected=detected,
        reason=str(entry.get("reason", "")),
        source="external",
    )


def propose_external(pair, scenes, endpoint) -> list[Detection]:
    """Ask a remote proposer about one training pair.

    `endpoint` is any callable taking the request payload and returning the
    decoded JSON response (transport retries live in the wire layer).
    Invalid entries are dropped with a warning; an unusable response raises
    EmptyResponse.
    """
    g_in, g_out = pair
    s_in, s_out = scenes
    payload = {
        "input": g_in.to_lists(),
        "output": g_out.to_lists(),
        "input_objects": s_in.to_json_dict()["objects"],
        "output_objects": s_out.to_json_dict()["objects"],
        "patterns": [s.to_json_dict() for s in registry()],
    }
    response = endpoint(payload)
    if not isinstance(response, list) or not response:
        raise EmptyResponse("proposer response is not a non-empty JSON array")
    detections = [d for d in (_parse_external_entry(e) for e in response) if d is not None]
    if not detections:
        raise EmptyResponse("every proposer entry failed schema validation")
    return detections


# --- aggregation ----------------------------------------------------------------

def _normalize_params(name: str, params: dict[str, str]) -> dict[str, str]:
    schema = get_schema(name)
    return {k: params.get(k, vals[0]) for k, vals in schema.parameters.items()}


def _enum_order_key(name: str, params: dict[str, str]) -> tuple[int, ...]:
    schema = get_schema(name)
    return tuple(vals.index(params[k]) for k, vals in schema.parameters.items())


def aggregate_detections(runs: list[list[Detection]], k_top: int = 3) -> list[RankedPattern]:
    """Count detected=true per pattern across repetitions; keep the top k.

    Ties in count fall back to registry order. The representative params
    are the modal full parameter map; map ties go to the map earliest in
    enum order.
    """
    counts: Counter[str] = Counter()
    maps: dict[str, Counter] = {}
    for run in runs:
        for det in run:
            if not det.detected:
                continue
            counts[det.pattern_name] += 1
            norm = _normalize_params(det.pattern_name, det.params)
            key = tuple(sorted(norm.items()))
            maps.setdefault(det.pattern_name, Counter())[key] += 1
    top = sorted(counts, key=lambda n: (-counts[n], REGISTRY_ORDER[n]))[:k_top]
    ranked = []
    for name in top:
        per_map = maps[name]
        ordered = sorted(
            per_map,
            key=lambda key: (-per_map[key], _enum_order_key(name, dict(key))),
        )
        ranked.append(
            RankedPattern(
                pattern_name=name,
                count=counts[name],
                params=dict(ordered[0]),
                param_maps=tuple(dict(key) for key in ordered),
            )
        )
    return ranked


# --- candidate instantiation ------------------------------------------------------

def _bindings_for(name, scene, params, src_sels, pair_sels, fill_colors, stop_colors):
    """Binding maps compatible with a fixed parameter map, in fixed order.

    Reuses the schema enumerator and keeps the bindings of every entry
    whose kernel-interpreted parameters agree with `params` (descriptive
    parameters in `params` are free: the enumerator never varies them).
    """
    target = _normalize_params(name, params)
    for p, b in _iter_schema_instances(name, scene, src_sels, pair_sels, fill_colors, stop_colors):
        if all(target[k] == v for k, v in p.items()):
            yield b


def instantiate_candidates(
    ranked: list[RankedPattern],
    input_scene: SceneGraph,
    max_depth: int = 2,
    budget: int = 10_000,
) -> InstantiationResult:
    """Expand ranked patterns into concrete programs, shallowest first.

    Parameters are fixed to the detected maps; bindings are enumerated over
    the scene. Depth-2 programs are ordered pairs of the depth-1 pool. The
    budget is a soft cap: hitting it truncates the list and sets a flag.
    """
    executable = [rp for rp in ranked if get_schema(rp.pattern_name).executable]
    if not executable:
        return InstantiationResult([], hint_path=bool(ranked))
    palette = [c for c in _scene_palette(input_scene) if c != input_scene.background_color]
    src_sels = _object_selectors(input_scene)
    pair_sels = _pair_selectors(input_scene)

    def resolvable(inst: PatternInstance) -> bool:
        for v in inst.bindings.values():
            if isinstance(v, Selector):
                try:
                    v.resolve(input_scene)
                except BindingResolutionFailed:
                    return False
        return True

    steps: list[PatternInstance] = []
    for rp in executable:
        param_maps = rp.param_maps or (rp.params,)
        seen_params: set[tuple] = set()
        for params in param_maps:
            key = tuple(sorted(_normalize_params(rp.pattern_name, params).items()))
            if key in seen_params:
                continue
            seen_params.add(key)
            for bindings in _bindings_for(
                rp.pattern_name, input_scene, params, src_sels, pair_sels, palette, palette
            ):
                inst = PatternInstance(rp.pattern_name, dict(params), bindings)
                if resolvable(inst):
                    steps.append(inst)

    programs: list[Program] = []
    truncated = False
    for inst in steps:
        if len(programs) >= budget:
            truncated = True
            break
        programs.append(Program([inst]))
    if max_depth >= 2 and not truncated:
        for a in steps:
            for b in steps:
                if len(programs) >= budget:
                    truncated = True
                    break
                programs.append(Program([a, b]))
            if truncated:
                break
    return InstantiationResult(programs, truncated=truncated)


# --- pipeline driver --------------------------------------------------------------

def _validates_quick(p: Program, pairs: list[tuple[Grid, Grid]]) -> bool:
    for g_in, g_out in pairs:
        try:
            if not grids_equal(run_program_on_grid(p, g_in), g_out):
                return False
        except ArcError:
            return False
    return True


def _guided_depth2(
    pairs: list[tuple[Grid, Grid]],
    names: list[str],
    budget: _Budget,
    max_programs: int = 40,
) -> list[Program]:
    """Search two-step programs: run every plausible first step, then ask the
    exact matcher whether a single second step closes the remaining gap.

    Programs recovered on one pair are kept only when they validate every
    pair; a pair whose finds all fail cross-validation hands the search on
    to the next pair instead of ending it.
    """
    exec_names = [n for n in names if get_schema(n).executable]
    if not exec_names:
        return []
    for g_in, g_out in pairs:
        if budget.exhausted:
            break
        scene = abstract_scene_cached(g_in)
        firsts = enumerate_step_instances(scene, exec_names, dedup=True)
        # run the cheap part (every first step) up front, then scan the
        # expensive second-step matcher in order of remaining disagreement;
        # keep a few spellings per mid grid so one fragile selector cannot
        # sink an otherwise correct composition
        mids: dict[tuple, list] = {}
        order: list[tuple[int, int, tuple]] = []
        for inst in firsts:
            if not budget.spend():
                break
            mid = _try_step(inst, g_in)
            if mid is None or grids_equal(mid, g_out):
                continue
            entry = mids.get(mid.rows)
            if entry is None:
                residual = (
                    sum(a != b for ra, rb in zip(mid.rows, g_out.rows) for a, b in zip(ra, rb))
                    if mid.dims == g_out.dims
                    else mid.height * mid.width
                )
                mids[mid.rows] = [mid, inst]
                order.append((residual, len(order), mid.rows))
            elif len(entry) < 121:
                entry.append(inst)
        order.sort(key=lambda t: t[:2])
        # walk the residual ordering from both ends: small residuals catch
        # finishing touches, large ones catch second steps that repaint
        # most of the grid
        lo, hi = 0, len(order) - 1
        walk = []
        while lo <= hi:
            walk.append((order[lo], True))
            if hi != lo:
                walk.append((order[hi], False))
            lo, hi = lo + 1, hi - 1
        validated: list[Program] = []
        for walk_pos, ((_, _, rows), from_front) in enumerate(walk):
            if budget.exhausted or len(validated) >= max_programs:
                break
            mid, *spellings = mids[rows]
            # the true mid almost always ranks near the front of the
            # ascending-residual order, so spend a deep spelling scan on
            # those; many spellings reproduce a single transition and only
            # a few survive every pair. The large-residual side of the walk
            # covers second steps that repaint most of the grid, which have
            # few spellings, so the cheap scan is enough there.
            deep = from_front and walk_pos < 7
            seconds = exact_step_matches(
                abstract_scene_cached(mid), g_out,
                per_schema_cap=32 if deep else 3,
                budget=budget,
                dedup=not deep,
            )
            if deep:
                # cross-validation discards most spellings at the second
                # pair, so trying all of them is cheap; generic selectors
                # transfer best, try those first
                firsts_here = sorted(
                    spellings,
                    key=lambda s: sum(
                        1
                        for sel in (s.bindings or {}).values()
                        if getattr(sel, "kind", "all") != "all"
                    ),
                )
            else:
                firsts_here = spellings[:9]
            for first in firsts_here:
                if len(validated) >= max_programs:
                    break
                for second in seconds:
                    p = Program([first, second])
                    if _validates_quick(p, pairs):
                        validated.append(p)
            if len(validated) >= 6:
                break
        if validated:
            return validated
    return []


def _probe_order(pairs: list[tuple[Grid, Grid]], programs: list[Program]) -> list[Program]:
    """Order programs by behavioral agreement on synthetic probe scenes.

    Every program here already reproduces all training pairs; they differ
    only in how their selectors generalize. Executing them on fresh scenes
    drawn to resemble the training inputs (same palette, similar object
    counts) and preferring the plurality behavior is self-consistency
    voting applied to program identity, using no test information.
    """
    if len(programs) < 2:
        return list(programs)
    from .synthetic import _random_scene_grid  # deferred: synthetic imports us

    scenes = [abstract_scene_cached(g_in) for g_in, _ in pairs]
    palette = sorted(
        {c for s in scenes for o in s.objects for c in o.cells.values()}
    ) or [1]
    counts = [len(s.objects) for s in scenes]
    seed = zlib.crc32(
        json.dumps([[g.to_lists() for g in pair] for pair in pairs]).encode()
    )
    rng = random.Random(seed)
    scores = [0] * len(programs)
    crashes = [0] * len(programs)
    kept = 0
    for attempt in range(25):
        if kept >= 5:
            break
        n = counts[attempt % len(counts)] + rng.choice((-1, 0, 0, 1))
        probe = _random_scene_grid(rng, palette, n_objects=max(1, n))
        if probe is None:
            continue
        outs = []
        for p in programs:
            try:
                outs.append(run_program_on_grid(p, probe).rows)
            except ArcError:
                outs.append(None)
        if all(o is None for o in outs):
            # a probe no program can run on says nothing; training inputs
            # were themselves rejection-sampled to be runnable, so condition
            # the jury the same way
            continue
        kept += 1
        tally = Counter(o for o in outs if o is not None)
        for i, o in enumerate(outs):
            if o is None:
                crashes[i] += 1
            else:
                scores[i] += tally[o]

    def specificity(p: Program) -> int:
        # non-"all" selector bindings can fail to match on unseen inputs;
        # prefer the spelling with the fewest such commitments on ties
        return sum(
            1
            for step in p.steps
            for sel in (step.bindings or {}).values()
            if getattr(sel, "kind", "all") != "all"
        )

    ranked = sorted(
        range(len(programs)),
        key=lambda i: (-scores[i], crashes[i], specificity(programs[i]), i),
    )
    return [programs[i] for i in ranked]


def generate_candidates(
    pairs: list[tuple[Grid, Grid]],
    *,
    k_top: int = 3,
    repetitions: int = 5,
    max_depth: int = 2,
    budget: int = 10_000,
    exec_budget: int = 30_000,
    external=None,
) -> list[CandidateSet]:
    """Stage-2 driver: detections, aggregation, and candidate assembly for
    every training pair.

    The builtin proposer is deterministic, so one run stands for all R
    repetitions (the counts are scaled accordingly). Depth-2 candidates are
    found by guided composition and injected into every example's set so
    the cross-example intersection sees aligned identities.
    """
    sets: list[CandidateSet] = []
    per_example_ranked: list[list[RankedPattern]] = []
    for i, (g_in, g_out) in enumerate(pairs):
        s_in = abstract_scene_cached(g_in)
        s_out = abstract_scene_cached(g_out)
        exact = exact_step_matches(s_in, g_out) if g_in.dims == g_out.dims else []
        if external is None:
            runs = [propose_builtin(s_in, s_out, exact)] * repetitions
        else:
            runs = []
            for _ in range(repetitions):
                try:
                    runs.append(propose_external((g_in, g_out), (s_in, s_out), external))
                except ArcError as err:
                    logger.warning("external proposer run failed: %s", err)
        ranked = aggregate_detections(runs, k_top)
        per_example_ranked.append(ranked)
        counts = {rp.pattern_name: rp.count for rp in ranked}
        programs: dict[str, Program] = {}
        for inst in exact:
            p = Program([inst])
            programs.setdefault(p.canonical_id(), p)
        if external is not None:
            # external detections arrive without spellings; expand them
            blind = instantiate_candidates(ranked, s_in, max_depth=1, budget=budget)
            for p in blind.programs:
                programs.setdefault(p.canonical_id(), p)
        sets.append(CandidateSet(i, list(programs.values()), counts, tuple(ranked)))

    # shared pool: an exact match found on any one example becomes a
    # candidate everywhere, so the intersection can align on its identity
    # even when other examples cannot re-enumerate that spelling
    union: dict[str, Program] = {}
    for cs in sets:
        for p in cs.candidates:
            union.setdefault(p.canonical_id(), p)
    for cs in sets:
        have = {p.canonical_id() for p in cs.candidates}
        cs.candidates.extend(p for cid, p in union.items() if cid not in have)

    validators = [p for p in union.values() if _validates_quick(p, pairs)]
    if max_depth >= 2 and not validators:
        # guided search only when no depth-1 candidate explains every pair
        found = _guided_depth2(pairs, list(EXECUTABLE_NAMES), _Budget(exec_budget))
        for p in found:
            cid = p.canonical_id()
            if cid not in union:
                union[cid] = p
                validators.append(p)
                for cs in sets:
                    cs.candidates.append(p)

    if len(validators) > 1:
        # enumeration order is the argmin-depth tie-break downstream, so
        # put the behaviorally robust spellings first
        preferred = _probe_order(pairs, validators)
        pref_ids = [p.canonical_id() for p in preferred]
        pref_set = set(pref_ids)
        for cs in sets:
            rest = [p for p in cs.candidates if p.canonical_id() not in pref_set]
            cs.candidates = list(preferred) + rest
    return sets
