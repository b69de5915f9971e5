"""Cross-example filtering: keep only programs that explain every training pair.

A candidate validates an example when executing it on the input reproduces
the output grid exactly. Validated sets are intersected across examples by
canonical program identity; the shallowest survivor is selected. When the
intersection is empty the stage emits a structured hint instead, built from
the aggregated detections.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from .errors import ArcError
from .grid import Grid, grids_equal
from .patterns import Program
from .patterns.execute import run_program_on_grid
from .scene import abstract_scene_cached

logger = logging.getLogger(__name__)


def canonical_id(p: Program) -> str:
    """Stable identity: step order kept, params key-sorted, bindings normalized."""
    return p.canonical_id()


def validates(p: Program, pair: tuple[Grid, Grid]) -> bool:
    """Exact reproduction check; execution errors count as a logged False."""
    g_in, g_out = pair
    try:
        return grids_equal(run_program_on_grid(p, g_in), g_out)
    except ArcError as err:
        logger.debug("candidate %s failed: %s", canonical_id(p), err)
        return False


@dataclass
class Hint:
    """Consensus record handed to the fallback solvers when nothing survives."""

    ranked_patterns: list[tuple[str, dict, int]]  # (name, params, detection count)
    scene_summary: dict | None = None
    consensus_notes: dict[str, str] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "ranked_patterns": [
                {"pattern_name": n, "params": dict(p), "count": c}
                for n, p, c in self.ranked_patterns
            ],
            "scene_summary": self.scene_summary,
            "consensus_notes": dict(self.consensus_notes),
        }


@dataclass
class ConsistencyReport:
    per_example_valid: list[set[str]]
    surviving: set[str]
    selected: Program | None = None
    hint: Hint | None = None
    rationale: str = ""

    def to_json_dict(self) -> dict:
        return {
            "per_example_valid": [sorted(s) for s in self.per_example_valid],
            "surviving": sorted(self.surviving),
            "selected": self.selected.to_json_dict() if self.selected else None,
            "hint": self.hint.to_json_dict() if self.hint else None,
            "rationale": self.rationale,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)


def _scene_digest(g: Grid) -> dict:
    scene = abstract_scene_cached(g)
    return {
        "dims": list(g.dims),
        "background": scene.background_color,
        "object_count": len(scene.objects),
        "colors": sorted({o.main_color for o in scene.objects}),
        "shapes": sorted({o.shape_label for o in scene.objects}),
    }


def _build_hint(candidates_per_example, k_top: int, test_input: Grid | None) -> Hint:
    k = len(candidates_per_example)
    totals: dict[str, int] = {}
    seen_in: dict[str, int] = {}
    params: dict[str, dict] = {}
    for cs in candidates_per_example:
        for name, count in cs.detection_counts.items():
            totals[name] = totals.get(name, 0) + count
            seen_in[name] = seen_in.get(name, 0) + 1
        for rp in getattr(cs, "ranked", ()):
            params.setdefault(rp.pattern_name, rp.params)
    ranked = sorted(totals, key=lambda n: (-totals[n], n))[:k_top]
    notes = {
        name: f"detected in {seen_in[name]}/{k} examples ({totals[name]} detections)"
        for name in ranked
    }
    return Hint(
        ranked_patterns=[(n, params.get(n, {}), totals[n]) for n in ranked],
        scene_summary=_scene_digest(test_input) if test_input is not None else None,
        consensus_notes=notes,
    )


def filter_consistent(
    candidates_per_example,
    pairs: list[tuple[Grid, Grid]],
    *,
    k_top: int = 3,
    test_input: Grid | None = None,
) -> ConsistencyReport:
    """Validate per example, intersect by canonical id, select by depth.

    Ties at minimal depth go to the first occurrence in candidate order.
    The survivors are re-validated on every pair as a soundness assertion.
    """
    if len(candidates_per_example) != len(pairs):
        raise ValueError("one candidate set per training pair is required")

    per_valid: list[set[str]] = []
    by_id: dict[str, Program] = {}
    order: list[str] = []
    for cs, pair in zip(candidates_per_example, pairs):
        valid: set[str] = set()
        for p in cs.candidates:
            cid = canonical_id(p)
            if cid not in by_id:
                by_id[cid] = p
                order.append(cid)
            if validates(p, pair):
                valid.add(cid)
        per_valid.append(valid)

    surviving = set.intersection(*per_valid) if per_valid else set()
    for cid in surviving:
        assert all(validates(by_id[cid], pair) for pair in pairs), (
            "intersection produced a program that fails re-validation"
        )

    if surviving:
        best = min(
            (cid for cid in order if cid in surviving),
            key=lambda cid: (by_id[cid].depth, order.index(cid)),
        )
        return ConsistencyReport(
            per_example_valid=per_valid,
            surviving=surviving,
            selected=by_id[best],
            rationale=(
                f"{len(surviving)} program(s) survived intersection across "
                f"{len(pairs)} example(s); selected depth {by_id[best].depth}"
            ),
        )
    return ConsistencyReport(
        per_example_valid=per_valid,
        surviving=set(),
        hint=_build_hint(candidates_per_example, k_top, test_input),
        rationale="no candidate survived every example; emitting a hint",
    )
