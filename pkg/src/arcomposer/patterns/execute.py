"""Deterministic execution of the 14-pattern core subset.

Each kernel maps (instance, scene, rendered grid) to a new grid; the
step wrapper re-abstracts the result so scene invariants (disjoint
components, consecutive ids) always hold after every step. Kernels
never mutate their inputs.

Shared conventions, pinned in docs/semantics.md and locked by fixture
tests:
- fills and rays paint background cells only and stop at the first
  non-background cell (contiguity);
- a stop condition that can never trigger is a SemanticsViolation, as
  is a step that leaves the grid unchanged;
- enum values whose behavior the parameter listing leaves genuinely
  open (e.g. "change on bounce") raise SemanticsViolation rather than
  guess; the built-in proposer never emits them;
- multi-match selectors apply the kernel to every resolved object, in
  object_id order.

Results are memoized per (canonical step, input grid), including
failures: candidate filtering retries the same step on the same grid
many times.
"""

from __future__ import annotations

import json

from ..errors import ArcError, NotExecutable, SemanticsViolation, StepExecutionError
from ..grid import Grid, grids_equal, render
from ..scene import GridObject, SceneGraph, abstract_scene_cached
from .registry import get_schema
from .types import PatternInstance, Program, validate_instance

_DIAG_DIRS = ((-1, -1), (-1, 1), (1, -1), (1, 1))


def _canvas(g: Grid) -> list[list[int]]:
    return list(map(list, g.rows))


def _finish(canvas: list[list[int]]) -> Grid:
    return Grid._trusted(tuple(map(tuple, canvas)))


def _walk(canvas, bg, y, x, dy, dx):
    """Contiguous background run from (y,x): (cells, blocking color or None)."""
    h, w = len(canvas), len(canvas[0])
    cells = []
    while 0 <= y < h and 0 <= x < w:
        if canvas[y][x] != bg:
            return cells, canvas[y][x]
        cells.append((y, x))
        y += dy
        x += dx
    return cells, None


def _paint_run(canvas, bg, start, step, stop, stop_color, color):
    """One fill/ray leg. Returns (painted count, stop-condition met)."""
    cells, blocker = _walk(canvas, bg, start[0], start[1], step[0], step[1])
    if stop == "another object":
        ok = blocker is not None
    elif stop == "specific color":
        ok = blocker == stop_color
    else:  # grid boundary: the run always terminates legally
        ok = True
    if not ok:
        return 0, False
    for y, x in cells:
        canvas[y][x] = color
    return len(cells), True


def _k_horizontal_fill(inst, scene, g):
    bg = scene.background_color
    canvas = _canvas(g)
    dx = -1 if inst.param("column_index") == "left of an object" else 1
    stop = inst.param("stop_condition")
    stop_color = inst.color("stop_color") if stop == "specific color" else None
    fixed_color = (
        inst.color("color")
        if inst.param("fill_color") == "based on some different objects"
        else None
    )
    any_stop = False
    for obj in inst.objects("source", scene):
        color = obj.main_color if fixed_color is None else fixed_color
        by_row: dict[int, list[int]] = {}
        for (y, x) in obj.pixels:
            by_row.setdefault(y, []).append(x)
        for y, xs in sorted(by_row.items()):
            x0 = (min(xs) - 1) if dx < 0 else (max(xs) + 1)
            _, ok = _paint_run(canvas, bg, (y, x0), (0, dx), stop, stop_color, color)
            any_stop |= ok
    if stop != "grid boundary" and not any_stop:
        raise SemanticsViolation("fill has no stop condition in any row")
    return _finish(canvas)


def _k_vertical_fill(inst, scene, g):
    bg = scene.background_color
    canvas = _canvas(g)
    dy = -1 if inst.param("row_index") == "top of an object" else 1
    stop = inst.param("stop_condition")
    stop_color = inst.color("stop_color") if stop == "specific color" else None
    any_stop = False
    for obj in inst.objects("source", scene):
        color = obj.main_color
        by_col: dict[int, list[int]] = {}
        for (y, x) in obj.pixels:
            by_col.setdefault(x, []).append(y)
        for x, ys in sorted(by_col.items()):
            y0 = (min(ys) - 1) if dy < 0 else (max(ys) + 1)
            _, ok = _paint_run(canvas, bg, (y0, x), (dy, 0), stop, stop_color, color)
            any_stop |= ok
    if stop != "grid boundary" and not any_stop:
        raise SemanticsViolation("fill has no stop condition in any column")
    return _finish(canvas)


def _k_connecting_bridges(inst, scene, g):
    shape = inst.param("connection_shape")
    if shape in ("triangle", "circle"):
        raise SemanticsViolation(f"bridge shape {shape!r} is not size-preserving")
    pathd = inst.param("path_direction")
    if pathd == "based on color sequence":
        raise SemanticsViolation("color-sequence pathing is underdetermined")
    cmode = inst.param("bridge_color")
    if cmode == "based on cavity inside an object":
        raise SemanticsViolation("cavity-derived bridge color is underdetermined")
    bg = scene.background_color
    canvas = _canvas(g)
    painted = 0
    for s in inst.objects("source", scene):
        for t in inst.objects("target", scene):
            if s.object_id == t.object_id:
                continue
            color = s.main_color if cmode == "based on bridge starting point" else t.main_color
            if pathd == "orthogonal":
                painted += _orthogonal_bridge(canvas, bg, s, t, shape, color)
            else:
                painted += _diagonal_bridge(canvas, bg, s, t, color)
    if painted == 0:
        raise SemanticsViolation("no open corridor between source and target")
    return _finish(canvas)


def _orthogonal_bridge(canvas, bg, s, t, shape, color):
    painted = 0
    sy0, sx0, sy1, sx1 = s.bbox
    ty0, tx0, ty1, tx1 = t.bbox
    # horizontal corridor: bboxes share rows, disjoint column ranges
    lo, hi = max(sy0, ty0), min(sy1, ty1)
    if lo <= hi and (sx1 < tx0 or tx1 < sx0):
        xa, xb = (sx1 + 1, tx0 - 1) if sx1 < tx0 else (tx1 + 1, sx0 - 1)
        # line: one-cell-thick bridge at the center of the shared span
        rows = [(lo + hi) // 2] if shape == "line" else range(lo, hi + 1)
        for y in rows:
            for x in range(xa, xb + 1):
                if canvas[y][x] == bg:
                    canvas[y][x] = color
                    painted += 1
    lo, hi = max(sx0, tx0), min(sx1, tx1)
    if lo <= hi and (sy1 < ty0 or ty1 < sy0):
        ya, yb = (sy1 + 1, ty0 - 1) if sy1 < ty0 else (ty1 + 1, sy0 - 1)
        cols = [(lo + hi) // 2] if shape == "line" else range(lo, hi + 1)
        for x in cols:
            for y in range(ya, yb + 1):
                if canvas[y][x] == bg:
                    canvas[y][x] = color
                    painted += 1
    return painted


def _diagonal_bridge(canvas, bg, s, t, color):
    painted = 0
    target_pixels = t.pixels
    for (y, x) in sorted(s.pixels):
        for dy, dx in _DIAG_DIRS:
            cells, blocker = _walk(canvas, bg, y + dy, x + dx, dy, dx)
            if blocker is None or not cells:
                continue
            end = (cells[-1][0] + dy, cells[-1][1] + dx)
            if end in target_pixels:
                for cy, cx in cells:
                    if canvas[cy][cx] == bg:
                        canvas[cy][cx] = color
                        painted += 1
    return painted


def _k_boundary_attachment(inst, scene, g):
    bg = scene.background_color
    canvas = _canvas(g)
    h, w = g.dims
    lay_on = inst.param("fill_logic") == "gets laid on the object"
    side = inst.param("attachment_direction")
    for obj in inst.objects("source", scene):
        y0, x0, y1, x1 = obj.bbox
        color = obj.main_color
        if not lay_on:
            for y in range(y0, y1 + 1):
                for x in range(x0, x1 + 1):
                    if canvas[y][x] == bg:
                        canvas[y][x] = color
            continue
        if side == "left":
            strip = [(y, x0 - 1) for y in range(y0, y1 + 1)]
        elif side == "right":
            strip = [(y, x1 + 1) for y in range(y0, y1 + 1)]
        elif side == "top":
            strip = [(y0 - 1, x) for x in range(x0, x1 + 1)]
        else:
            strip = [(y1 + 1, x) for x in range(x0, x1 + 1)]
        for y, x in strip:
            if 0 <= y < h and 0 <= x < w and canvas[y][x] == bg:
                canvas[y][x] = color
    return _finish(canvas)


_CORNER_DIRS = {
    "bottom-right": (1, 1),
    "top-left": (-1, -1),
    "top-right": (-1, 1),
    "bottom-left": (1, -1),
}


def _k_diagonal_fill(inst, scene, g):
    mode = inst.param("fill_color")
    if mode == "change on bounce":
        raise SemanticsViolation("bounce recoloring is underdetermined")
    dy, dx = _CORNER_DIRS[inst.param("direction")]
    stop = inst.param("stop_condition")
    walk_stop = "another object" if stop == "object obstruction" else "grid boundary"
    bg = scene.background_color
    canvas = _canvas(g)
    any_stop = False
    for obj in inst.objects("source", scene):
        color = obj.main_color if mode == "same as source" else 9 - obj.main_color
        # corner pixel: the object pixel furthest along the ray direction
        start = max(sorted(obj.pixels), key=lambda p: (p[0] * dy + p[1] * dx, -p[0], -p[1]))
        _, ok = _paint_run(
            canvas, bg, (start[0] + dy, start[1] + dx), (dy, dx), walk_stop, None, color
        )
        any_stop |= ok
    if stop == "object obstruction" and not any_stop:
        raise SemanticsViolation("no obstruction along any diagonal")
    return _finish(canvas)


def _k_find_and_color(inst, scene, g):
    mode = inst.param("new_color")
    canvas = _canvas(g)
    for idx, obj in enumerate(inst.objects("source", scene)):
        if mode == "complements the original color":
            color = 9 - obj.main_color
        elif mode == "constant throughout":
            color = inst.color("color")
        else:  # alternating pattern: even-ranked objects get the bound color
            base = inst.color("color")
            color = base if idx % 2 == 0 else 9 - base
        for y, x in obj.pixels:
            canvas[y][x] = color
    return _finish(canvas)


def _bbox_rows_overlap(a: GridObject, b: GridObject) -> bool:
    return a.bbox[0] <= b.bbox[2] and b.bbox[0] <= a.bbox[2]


def _bbox_cols_overlap(a: GridObject, b: GridObject) -> bool:
    return a.bbox[1] <= b.bbox[3] and b.bbox[1] <= a.bbox[3]


def _k_remove_sequence(inst, scene, g):
    universe = inst.objects("source", scene)
    trigger = inst.param("trigger_condition")
    if trigger == "based on an object":
        seeds = list(universe)
    elif trigger == "leftmost":
        seeds = [min(universe, key=lambda o: (o.bbox[1], o.object_id))]
    elif trigger == "rightmost":
        seeds = [min(universe, key=lambda o: (-o.bbox[3], o.object_id))]
    elif trigger == "topmost":
        seeds = [min(universe, key=lambda o: (o.bbox[0], o.object_id))]
    else:  # overlaps: objects whose bbox intersects another's
        seeds = [
            o
            for o in universe
            if any(
                p.object_id != o.object_id
                and _bbox_rows_overlap(o, p)
                and _bbox_cols_overlap(o, p)
                for p in universe
            )
        ]
        if not seeds:
            raise SemanticsViolation("no overlapping objects to trigger removal")
    expand = inst.param("object_list_ordered")
    doomed: set[int] = set()
    for seed in seeds:
        for o in universe:
            if expand == "all in the row":
                hit = _bbox_rows_overlap(o, seed)
            elif expand == "all in a column":
                hit = _bbox_cols_overlap(o, seed)
            else:  # same shape
                hit = o.canonical_shape == seed.canonical_shape
            if hit:
                doomed.add(o.object_id)
    bg = scene.background_color
    canvas = _canvas(g)
    for o in universe:
        if o.object_id in doomed:
            for y, x in o.pixels:
                canvas[y][x] = bg
    return _finish(canvas)


def _k_alternating_fill(inst, scene, g):
    labels = json.loads(inst.param("colors"))
    a, b = inst.color("color_a"), inst.color("color_b")
    seq = [a if lab == "A" else b for lab in labels]
    ptype = inst.param("pattern_type")
    bg = scene.background_color
    canvas = _canvas(g)
    for y in range(g.height):
        for x in range(g.width):
            if canvas[y][x] != bg:
                continue
            if ptype == "checkerboard":
                i = y + x
            elif ptype == "stripe_vertical":
                i = x
            else:
                i = y
            canvas[y][x] = seq[i % len(seq)]
    return _finish(canvas)


def _k_cavity_fill(inst, scene, g):
    solid = inst.param("max_indent_depth") == "till complete object"
    arbitrary = inst.param("fill_color") == "arbitrary"
    bg = scene.background_color
    canvas = _canvas(g)
    for obj in inst.objects("source", scene):
        color = inst.color("color") if arbitrary else obj.main_color
        if solid:
            y0, x0, y1, x1 = obj.bbox
            cells = [
                (y, x)
                for y in range(y0, y1 + 1)
                for x in range(x0, x1 + 1)
                if canvas[y][x] == bg
            ]
        else:
            cells = [p for cav in obj.cavities for p in sorted(cav.pixels)]
        for y, x in cells:
            canvas[y][x] = color
    return _finish(canvas)


def _k_add_replace(inst, scene, g):
    new_shape = inst.param("add_replacement_object")
    if new_shape in ("circle", "triangle"):
        raise SemanticsViolation(f"replacement shape {new_shape!r} is underdetermined")
    anchor = inst.param("inherit_properties")
    if anchor == "at some location":
        raise SemanticsViolation("free placement is underdetermined")
    if inst.param("additional_change") == "add a boundary to new object":
        raise SemanticsViolation("boundary decoration is underdetermined")
    bg = scene.background_color
    canvas = _canvas(g)
    h, w = g.dims
    for obj in inst.objects("source", scene):
        y0, x0, y1, x1 = obj.bbox
        if anchor == "same midpoint":
            cy, cx = (y0 + y1) // 2, (x0 + x1) // 2
        else:
            cy, cx = int(obj.centroid[0]), int(obj.centroid[1])
        color = obj.main_color
        for y, x in obj.pixels:
            canvas[y][x] = bg
        if new_shape == "horizontal bar":
            cells = [(cy, x) for x in range(x0, x1 + 1)]
        elif new_shape == "vertical bar":
            cells = [(y, cx) for y in range(y0, y1 + 1)]
        elif new_shape == "rectangle":
            cells = [(y, x) for y in range(y0, y1 + 1) for x in range(x0, x1 + 1)]
        elif new_shape == "square":
            side = min(y1 - y0, x1 - x0) + 1
            sy, sx = cy - side // 2, cx - side // 2
            cells = [(y, x) for y in range(sy, sy + side) for x in range(sx, sx + side)]
        else:  # cell
            cells = [(cy, cx)]
        for y, x in cells:
            if 0 <= y < h and 0 <= x < w:
                canvas[y][x] = color
    return _finish(canvas)


def _k_falling_down(inst, scene, g):
    movers = inst.objects("source", scene)
    bg = scene.background_color
    canvas = _canvas(g)
    h = g.height
    for obj in movers:
        for y, x in obj.pixels:
            canvas[y][x] = bg
    # bottom-most objects settle first so stacks preserve their order
    for obj in sorted(movers, key=lambda o: (-o.bbox[2], o.object_id)):
        drop = 0
        while True:
            nxt = drop + 1
            if any(y + nxt >= h or canvas[y + nxt][x] != bg for (y, x) in obj.pixels):
                break
            drop = nxt
        for (y, x), color in obj.cells.items():
            canvas[y + drop][x] = color
    return _finish(canvas)


def _k_goal_translation(inst, scene, g):
    if inst.param("pathfinding_method") == "fixed path":
        raise SemanticsViolation("fixed paths are underdetermined")
    speed = inst.param("step_count_or_speed")
    if speed == "fixed":
        raise SemanticsViolation("fixed step counts are underdetermined")
    goal = inst.objects("goal", scene)[0]
    bg = scene.background_color
    canvas = _canvas(g)
    h, w = g.dims
    for obj in inst.objects("source", scene):
        if obj.object_id == goal.object_id:
            continue
        dy_c = goal.centroid[0] - obj.centroid[0]
        dx_c = goal.centroid[1] - obj.centroid[1]
        if abs(dy_c) > abs(dx_c):
            step = (1 if dy_c > 0 else -1, 0)
        elif dx_c != 0:
            step = (0, 1 if dx_c > 0 else -1)
        elif dy_c != 0:
            step = (1 if dy_c > 0 else -1, 0)
        else:
            continue  # concentric with the goal; nothing to do
        for y, x in obj.pixels:
            canvas[y][x] = bg
        placed = _slide(canvas, obj, step, speed, goal, bg, h, w)
        for (y, x), color in obj.cells.items():
            canvas[y + placed[0]][x + placed[1]] = color
    return _finish(canvas)


def _slide(canvas, obj, step, speed, goal, bg, h, w):
    """Offset at which the object comes to rest; raises when it never stops."""
    dy, dx = step
    off = (0, 0)
    goal_pixels = goal.pixels
    while True:
        if speed == "stop on goal" and _touches(obj, off, goal_pixels):
            return off
        ny, nx = off[0] + dy, off[1] + dx
        blocked = False
        for y, x in obj.pixels:
            ty, tx = y + ny, x + nx
            if not (0 <= ty < h and 0 <= tx < w):
                raise SemanticsViolation("object slid off the grid before stopping")
            if canvas[ty][tx] != bg:
                blocked = True
                break
        if blocked:
            if speed == "stop on goal":
                raise SemanticsViolation("goal unreachable along the slide axis")
            return off
        off = (ny, nx)


def _touches(obj, off, goal_pixels) -> bool:
    for y, x in obj.pixels:
        for ddy in (-1, 0, 1):
            for ddx in (-1, 0, 1):
                if (y + off[0] + ddy, x + off[1] + ddx) in goal_pixels:
                    return True
    return False


def _k_symmetry(inst, scene, g):
    stype = inst.param("symmetry_type")
    mode = inst.param("copy_mode")
    bg = scene.background_color
    canvas = _canvas(g)
    h, w = g.dims
    if mode == "mirror":
        if stype == "horizontal":
            flip = lambda y, x: (y, w - 1 - x)
        elif stype == "vertical":
            flip = lambda y, x: (h - 1 - y, x)
        else:
            flip = lambda y, x: (h - 1 - y, w - 1 - x)
        for y in range(h):
            for x in range(w):
                if canvas[y][x] != bg:
                    continue
                sy, sx = flip(y, x)
                if g.rows[sy][sx] != bg:
                    canvas[y][x] = g.rows[sy][sx]
        return _finish(canvas)
    if stype == "rotational":
        raise SemanticsViolation("rotational duplication has no translation axis")
    if stype == "horizontal":
        half = w // 2
        pairs = [((y, i), (y, w - half + i)) for y in range(h) for i in range(half)]
    else:
        half = h // 2
        pairs = [((i, x), (h - half + i, x)) for i in range(half) for x in range(w)]
    a_count = sum(1 for (ay, ax), _ in pairs if g.rows[ay][ax] != bg)
    b_count = sum(1 for _, (by, bx) in pairs if g.rows[by][bx] != bg)
    for (ay, ax), (by, bx) in pairs:
        src, dst = ((ay, ax), (by, bx)) if a_count >= b_count else ((by, bx), (ay, ax))
        if g.rows[src[0]][src[1]] != bg and canvas[dst[0]][dst[1]] == bg:
            canvas[dst[0]][dst[1]] = g.rows[src[0]][src[1]]
    return _finish(canvas)


def _k_ray_cast(inst, scene, g):
    if inst.param("shape") != "line":
        raise SemanticsViolation("only line rays are size-preserving")
    mark = inst.param("mark_color")
    if mark in ("change on hit", "based on other objects"):
        raise SemanticsViolation(f"mark color {mark!r} is underdetermined")
    direction = inst.param("direction")
    if direction == "change on hit":
        raise SemanticsViolation("reflective rays are underdetermined")
    stop = inst.param("stop_condition")
    walk_stop = "another object" if stop == "object" else "grid boundary"
    bg = scene.background_color
    canvas = _canvas(g)
    any_stop = False
    for obj in inst.objects("source", scene):
        color = obj.main_color
        cy, cx = int(obj.centroid[0]), int(obj.centroid[1])
        y0, x0, y1, x1 = obj.bbox
        if direction == "horizontal":
            legs = [((cy, x0 - 1), (0, -1)), ((cy, x1 + 1), (0, 1))]
        elif direction == "vertical":
            legs = [((y0 - 1, cx), (-1, 0)), ((y1 + 1, cx), (1, 0))]
        else:
            legs = [
                ((y0 - 1, x0 - 1), (-1, -1)),
                ((y0 - 1, x1 + 1), (-1, 1)),
                ((y1 + 1, x0 - 1), (1, -1)),
                ((y1 + 1, x1 + 1), (1, 1)),
            ]
        for start, step in legs:
            cells, blocker = _walk(canvas, bg, start[0], start[1], step[0], step[1])
            if walk_stop == "another object" and blocker is None:
                continue
            any_stop = True
            for i, (y, x) in enumerate(cells):
                if mark == "alternating pattern":
                    canvas[y][x] = color if i % 2 == 0 else 9 - color
                else:
                    canvas[y][x] = color
    if stop == "object" and not any_stop:
        raise SemanticsViolation("no ray hits an object")
    return _finish(canvas)


_KERNELS = {
    "Horizontal Fill": _k_horizontal_fill,
    "Vertical Fill": _k_vertical_fill,
    "Connecting Bridges": _k_connecting_bridges,
    "Boundary Attachment Fill": _k_boundary_attachment,
    "Diagonal Fill": _k_diagonal_fill,
    "Find Objects in the Input Image and Color Them": _k_find_and_color,
    "Remove Objects from the Output in a Particular Sequence": _k_remove_sequence,
    "Alternating Pattern Filling": _k_alternating_fill,
    "Cavity Fill": _k_cavity_fill,
    "Add/Replace an Object": _k_add_replace,
    "Falling Down (Gravity-Effect)": _k_falling_down,
    "Object Translation Based on Goal": _k_goal_translation,
    "Symmetry-Based Pattern": _k_symmetry,
    "Ray-Cast / Ray-Trace Pattern": _k_ray_cast,
}

# Step results (including deterministic failures) keyed by canonical
# step id and input grid; cleared wholesale on overflow. Kept small on
# purpose: repeats cluster within a single task, and a large long-lived
# dict makes every full gc pass walk it.
_STEP_CACHE: dict[tuple, Grid | ArcError] = {}
_STEP_CACHE_CAP = 25_000


_SORTED_PARAMS: dict[str, tuple[str, ...]] = {}


def _step_id(inst: PatternInstance) -> tuple:
    # instances are built once by enumeration and never mutated afterwards,
    # so the key can live on the object; a nested tuple is much cheaper to
    # build and hash than a JSON string
    sid = getattr(inst, "_sid", None)
    if sid is None:
        schema = get_schema(inst.schema_name)
        names = _SORTED_PARAMS.get(inst.schema_name)
        if names is None:
            names = tuple(sorted(schema.parameters))
            _SORTED_PARAMS[inst.schema_name] = names
        params = inst.params
        sid = (
            inst.schema_name,
            tuple(
                params[n] if n in params else schema.parameters[n][0]
                for n in names
            ),
            tuple(
                sorted(
                    (role, (v.kind, v.value) if not isinstance(v, int) else v)
                    for role, v in inst.bindings.items()
                )
            ),
        )
        inst._sid = sid
    return sid


def _run_step_on_grid(inst: PatternInstance, g: Grid) -> Grid:
    key = (_step_id(inst), g)
    hit = _STEP_CACHE.get(key)
    if hit is None:
        try:
            hit = _apply_kernel(inst, g)
        except ArcError as err:
            hit = err
        if len(_STEP_CACHE) >= _STEP_CACHE_CAP:
            _STEP_CACHE.clear()
        _STEP_CACHE[key] = hit
    if isinstance(hit, ArcError):
        raise hit
    return hit


def _apply_kernel(inst: PatternInstance, g: Grid) -> Grid:
    if not getattr(inst, "_checked", False):
        validate_instance(inst)
        inst._checked = True
    if not get_schema(inst.schema_name).executable:
        raise NotExecutable(f"{inst.schema_name!r} is hint-only")
    scene = abstract_scene_cached(g)
    out = _KERNELS[inst.schema_name](inst, scene, g)
    if grids_equal(out, g):
        raise SemanticsViolation("step left the grid unchanged")
    return out


def execute_step(inst: PatternInstance, scene: SceneGraph) -> SceneGraph:
    """Apply one pattern instance; result is re-abstracted from the render."""
    g = render(scene, *scene.source_dims)
    return abstract_scene_cached(_run_step_on_grid(inst, g))


def execute_program(p: Program, scene: SceneGraph) -> SceneGraph:
    """Left-to-right fold of execute_step; errors carry the step index."""
    if not p.steps:
        raise NotExecutable("a program needs at least one step")
    g = render(scene, *scene.source_dims)
    for idx, step in enumerate(p.steps):
        try:
            g = _run_step_on_grid(step, g)
        except ArcError as err:
            raise StepExecutionError(idx, err) from err
    return abstract_scene_cached(g)


def run_program_on_grid(p: Program, g: Grid) -> Grid:
    """Grid-to-grid execution; what candidate filtering and solving use."""
    if not p.steps:
        raise NotExecutable("a program needs at least one step")
    for idx, step in enumerate(p.steps):
        try:
            g = _run_step_on_grid(step, g)
        except ArcError as err:
            raise StepExecutionError(idx, err) from err
    return g


def clear_execution_cache() -> None:
    _STEP_CACHE.clear()
