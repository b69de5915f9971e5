"""Scene abstraction: grid -> background + connected objects + features.

The decomposition is deterministic end to end: background ties break to the
lowest color code, components are discovered in row-major scan order of
their first pixel, and BFS inside a component follows a fixed neighbor
order. Object features beyond the pixel map are computed lazily because the
hot execution path (render, re-abstract) rarely touches them.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from functools import cached_property, lru_cache

from .grid import Grid

# 8-neighborhood, fixed order: row-major over the 3x3 ring.
_NEIGHBORS_8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
_NEIGHBORS_4 = ((-1, 0), (0, -1), (0, 1), (1, 0))

SHAPE_LABELS = ("square", "rectangle", "line", "plus", "L-shape", "irregular")


class Cavity:
    """A background region fully enclosed by an object's bounding box.

    Pixels are background-colored, form one 4-connected region, and never
    touch the bounding-box perimeter ring.
    """

    __slots__ = ("pixels",)

    def __init__(self, pixels: frozenset[tuple[int, int]]):
        self.pixels = pixels

    @property
    def size(self) -> int:
        return len(self.pixels)

    def __eq__(self, other):
        return isinstance(other, Cavity) and self.pixels == other.pixels

    def __hash__(self):
        return hash(self.pixels)

    def __repr__(self):
        return f"Cavity(size={self.size})"


class GridObject:
    """One 8-connected component of non-background pixels.

    ``cells`` maps pixel -> color in BFS discovery order; components may mix
    colors because connectivity ignores color. Everything else derives from
    ``cells`` plus the source grid context captured at construction.
    """

    def __init__(
        self,
        object_id: int,
        cells: dict[tuple[int, int], int],
        grid: Grid,
        background: int,
    ):
        self.object_id = object_id
        self.cells = cells
        self._grid = grid
        self._background = background

    # -- raw geometry ----------------------------------------------------------

    @property
    def pixels(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.cells)

    @cached_property
    def bbox(self) -> tuple[int, int, int, int]:
        ys = [y for y, _ in self.cells]
        xs = [x for _, x in self.cells]
        return (min(ys), min(xs), max(ys), max(xs))

    @property
    def height(self) -> int:
        y0, _, y1, _ = self.bbox
        return y1 - y0 + 1

    @property
    def width(self) -> int:
        _, x0, _, x1 = self.bbox
        return x1 - x0 + 1

    @property
    def size(self) -> int:
        return len(self.cells)

    @cached_property
    def centroid(self) -> tuple[Fraction, Fraction]:
        n = len(self.cells)
        sy = sum(y for y, _ in self.cells)
        sx = sum(x for _, x in self.cells)
        return (Fraction(sy, n), Fraction(sx, n))

    @cached_property
    def canonical_shape(self) -> frozenset[tuple[int, int]]:
        y0, x0, _, _ = self.bbox
        return frozenset((y - y0, x - x0) for y, x in self.cells)

    @cached_property
    def color_histogram(self) -> tuple[int, ...]:
        counts = [0] * 10
        for color in self.cells.values():
            counts[color] += 1
        return tuple(counts)

    @cached_property
    def main_color(self) -> int:
        """Most frequent color in the object; ties break to the lowest code."""
        hist = self.color_histogram
        best = max(hist)
        return hist.index(best)

    @cached_property
    def cavities(self) -> list[Cavity]:
        return detect_cavities(self.pixels, self.bbox, self._grid, self._background)

    @cached_property
    def shape_label(self) -> str:
        return classify_shape(self.canonical_shape, self.height, self.width)

    # -- misc -------------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, GridObject)
            and self.object_id == other.object_id
            and self.cells == other.cells
        )

    def __repr__(self):
        return (
            f"GridObject(id={self.object_id}, size={self.size}, "
            f"bbox={self.bbox}, color={self.main_color})"
        )

    def to_json_dict(self) -> dict:
        """Wire digest with stable field order."""
        return {
            "id": self.object_id,
            "color_histogram": list(self.color_histogram),
            "bbox": list(self.bbox),
            "centroid": [float(self.centroid[0]), float(self.centroid[1])],
            "canonical_shape": sorted(list(p) for p in self.canonical_shape),
            "cavities": [sorted(list(p) for p in c.pixels) for c in self.cavities],
            "shape_label": self.shape_label,
        }


class SceneGraph:
    """Background color plus the ordered object list for one grid."""

    def __init__(
        self,
        background_color: int,
        objects: list[GridObject],
        source_dims: tuple[int, int],
    ):
        self.background_color = background_color
        self.objects = objects
        self.source_dims = source_dims

    def __eq__(self, other):
        return (
            isinstance(other, SceneGraph)
            and self.background_color == other.background_color
            and self.source_dims == other.source_dims
            and self.objects == other.objects
        )

    def __repr__(self):
        return (
            f"SceneGraph(bg={self.background_color}, "
            f"objects={len(self.objects)}, dims={self.source_dims})"
        )

    def to_json_dict(self) -> dict:
        return {
            "background_color": self.background_color,
            "dims": list(self.source_dims),
            "objects": [o.to_json_dict() for o in self.objects],
        }


def find_background(g: Grid) -> int:
    """Most frequent color; ties break to the lowest color code."""
    counts = [0] * 10
    for row in g.rows:
        for v in row:
            counts[v] += 1
    best = max(counts)
    return counts.index(best)


def connected_components(g: Grid, bg: int) -> list[dict[tuple[int, int], int]]:
    """8-connected components of non-background pixels.

    Components are returned in row-major scan order of their first pixel;
    each component's cell map is in BFS order from that pixel.
    """
    h, w = g.dims
    rows = g.rows
    seen = [[False] * w for _ in range(h)]
    components = []
    for y0 in range(h):
        row = rows[y0]
        for x0 in range(w):
            if row[x0] == bg or seen[y0][x0]:
                continue
            cells: dict[tuple[int, int], int] = {}
            queue = deque([(y0, x0)])
            seen[y0][x0] = True
            while queue:
                y, x = queue.popleft()
                cells[(y, x)] = rows[y][x]
                for dy, dx in _NEIGHBORS_8:
                    ny, nx = y + dy, x + dx
                    if 0 <= ny < h and 0 <= nx < w and not seen[ny][nx] and rows[ny][nx] != bg:
                        seen[ny][nx] = True
                        queue.append((ny, nx))
            components.append(cells)
    return components


def detect_cavities(
    obj_pixels: frozenset[tuple[int, int]],
    bbox: tuple[int, int, int, int],
    g: Grid,
    bg: int,
) -> list[Cavity]:
    """Enclosed background regions inside the bounding box.

    A cavity is a maximal 4-connected set of background cells within the
    box that contains no cell of the box's perimeter ring (a region that
    could 4-reach the ring would include a ring cell, so containment is the
    whole criterion). Regions are labeled in row-major scan order.
    """
    y0, x0, y1, x1 = bbox
    rows = g.rows
    seen: set[tuple[int, int]] = set()
    cavities = []
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            if rows[y][x] != bg or (y, x) in seen:
                continue
            region = []
            touches_ring = False
            stack = [(y, x)]
            seen.add((y, x))
            while stack:
                cy, cx = stack.pop()
                region.append((cy, cx))
                if cy == y0 or cy == y1 or cx == x0 or cx == x1:
                    touches_ring = True
                for dy, dx in _NEIGHBORS_4:
                    ny, nx = cy + dy, cx + dx
                    if (
                        y0 <= ny <= y1
                        and x0 <= nx <= x1
                        and (ny, nx) not in seen
                        and rows[ny][nx] == bg
                    ):
                        seen.add((ny, nx))
                        stack.append((ny, nx))
            if not touches_ring:
                cavities.append(Cavity(frozenset(region)))
    return cavities


def compute_features(
    pixels: dict[tuple[int, int], int] | frozenset[tuple[int, int]],
    g: Grid,
    bg: int,
    object_id: int = 0,
) -> GridObject:
    """Build a GridObject for an arbitrary non-background pixel set."""
    if not isinstance(pixels, dict):
        cells = {(y, x): g.rows[y][x] for y, x in sorted(pixels)}
    else:
        cells = pixels
    return GridObject(object_id, cells, g, bg)


def abstract_scene(g: Grid) -> SceneGraph:
    """Grid -> SceneGraph: background mode, 8-connected objects, features."""
    bg = find_background(g)
    components = connected_components(g, bg)
    objects = [GridObject(i, cells, g, bg) for i, cells in enumerate(components)]
    return SceneGraph(bg, objects, g.dims)


@lru_cache(maxsize=512)
def abstract_scene_cached(g: Grid) -> SceneGraph:
    """Memoized abstraction; grids are immutable so sharing scenes is safe.

    The execution engine re-abstracts after every step and candidate
    programs overlap heavily in intermediate grids, so this cache carries
    most of the pipeline's speed.
    """
    return abstract_scene(g)


def classify_shape(canonical: frozenset[tuple[int, int]], h: int, w: int) -> str:
    """Coarse shape label for binding selectors and pattern parameters.

    Exact rules (documented in docs/shape_labels.md):
    square      filled h x w block with h == w (includes single cells)
    rectangle   filled block, h != w
    line        filled 1 x n or n x 1 bar, n >= 2
    plus        full middle row plus full middle column, odd h and w >= 3
    L-shape     one full edge row plus one full edge column, nothing else
    irregular   anything else
    """
    n = len(canonical)
    if n == h * w:
        if h == 1 and w == 1:
            return "square"
        if h == 1 or w == 1:
            return "line"
        return "square" if h == w else "rectangle"
    if h >= 3 and w >= 3 and h % 2 == 1 and w % 2 == 1:
        yc, xc = h // 2, w // 2
        plus = {(yc, x) for x in range(w)} | {(y, xc) for y in range(h)}
        if canonical == frozenset(plus):
            return "plus"
    if h >= 2 and w >= 2:
        for row in (0, h - 1):
            for col in (0, w - 1):
                ell = {(row, x) for x in range(w)} | {(y, col) for y in range(h)}
                if canonical == frozenset(ell):
                    return "L-shape"
    return "irregular"
