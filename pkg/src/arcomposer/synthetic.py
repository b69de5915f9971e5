"""Seeded synthetic-task generation by program planting.

A planted task is built backwards: sample a random executable program of
depth one or two from the same instance space the proposer enumerates,
then keep only input grids on which every step runs cleanly and changes
something. The recovery suite and the eval demos both draw from here.
"""

from __future__ import annotations

import random

from .errors import ArcError
from .grid import Grid, TaskRecord, grids_equal, serialize_task
from .hypothesis import enumerate_step_instances
from .patterns import Program
from .patterns.execute import run_program_on_grid
from .scene import abstract_scene_cached

# small sprite templates as (y, x) offsets; varied enough to exercise
# shape and rank selectors without dominating the grid
_TEMPLATES = [
    [(0, 0)],
    [(0, 0), (0, 1)],
    [(0, 0), (1, 0)],
    [(0, 0), (0, 1), (0, 2)],
    [(0, 0), (1, 0), (2, 0)],
    [(0, 0), (0, 1), (1, 0), (1, 1)],
    [(0, 0), (1, 0), (1, 1)],
    [(0, 0), (0, 1), (0, 2), (1, 1)],
]


def _random_scene_grid(
    rng: random.Random, palette: list[int], n_objects: int | None = None
) -> Grid | None:
    """Sparse grid of well-separated sprites; every palette color appears."""
    h, w = rng.randint(6, 10), rng.randint(6, 10)
    cells = [[0] * w for _ in range(h)]
    blocked: set[tuple[int, int]] = set()
    colors = palette * 3
    rng.shuffle(colors)
    n_obj = n_objects if n_objects is not None else max(len(palette), rng.randint(2, 4))
    n_obj = min(n_obj, len(colors))
    placed_colors: set[int] = set()
    placed = 0
    for i in range(n_obj):
        template = rng.choice(_TEMPLATES)
        for _ in range(40):
            ty = rng.randrange(0, h - max(y for y, _ in template))
            tx = rng.randrange(0, w - max(x for _, x in template))
            spot = [(ty + y, tx + x) for y, x in template]
            # inflate by one cell so 8-connectivity keeps sprites separate
            halo = {
                (y + dy, x + dx)
                for y, x in spot
                for dy in (-1, 0, 1)
                for dx in (-1, 0, 1)
            }
            if halo & blocked:
                continue
            for y, x in spot:
                cells[y][x] = colors[i]
            blocked |= halo
            placed_colors.add(colors[i])
            placed += 1
            break
    if placed < len(palette) or not placed_colors >= set(palette):
        return None
    return Grid.from_lists(cells)


def _first_working_step(rng: random.Random, g: Grid, tries: int) -> tuple:
    scene = abstract_scene_cached(g)
    insts = enumerate_step_instances(scene, dedup=True)
    rng.shuffle(insts)
    for inst in insts[:tries]:
        try:
            mid = run_program_on_grid(Program([inst]), g)
        except ArcError:
            continue
        if not grids_equal(mid, g):
            return inst, mid
    return None, None


def _sample_program(rng: random.Random, g: Grid, depth: int) -> Program | None:
    """Random program of the requested depth that visibly transforms g."""
    inst, mid = _first_working_step(rng, g, tries=200)
    if inst is None:
        return None
    if depth == 1:
        return Program([inst])
    inst2, _ = _first_working_step(rng, mid, tries=80)
    if inst2 is None:
        return None
    prog = Program([inst, inst2])
    try:
        out = run_program_on_grid(prog, g)
    except ArcError:
        return None
    return prog if not grids_equal(out, g) else None


def _instance_fields(inst) -> dict:
    d = {("p", key): val for key, val in (inst.params or {}).items()}
    for key, val in (inst.bindings or {}).items():
        d[("b", key)] = val
    return d


def _single_field_mutants(inst, scene) -> list:
    """Same-schema instances differing from inst in one semantic choice.

    One choice means: exactly one binding value changed, or exactly one
    param changed together with any bindings that only exist under one of
    the two param values (a stop color, say, exists only under the
    "specific color" stop condition and travels with it).
    """
    base = _instance_fields(inst)
    out = []
    for cand in enumerate_step_instances(scene, [inst.schema_name]):
        fields = _instance_fields(cand)
        keys = set(base) | set(fields)
        diff = [key for key in keys if base.get(key) != fields.get(key)]
        if not diff:
            continue
        p_diff = [key for key in diff if key[0] == "p"]
        b_diff = [key for key in diff if key[0] == "b"]
        if not p_diff and len(b_diff) == 1:
            out.append(cand)
        elif len(p_diff) == 1 and all(
            key not in base or key not in fields for key in b_diff
        ):
            out.append(cand)
    return out


def _well_posed(prog: Program, grids: list[Grid]) -> bool:
    """Do the demonstrations pin down every field of the planted program?

    Rejects the plant when some single-field variant agrees with it on
    every training grid yet disagrees (or fails) on the held-out test one:
    no solver could separate the two from the demonstrations, so the task
    would not determine its own answer.
    """
    train, test = grids[:-1], grids[-1]
    train_outs = [run_program_on_grid(prog, g) for g in train]
    test_out = run_program_on_grid(prog, test)
    for si, step in enumerate(prog.steps):
        if si == 0:
            scene = abstract_scene_cached(train[0])
        else:
            prefix = Program(list(prog.steps[:si]))
            scene = abstract_scene_cached(run_program_on_grid(prefix, train[0]))
        for mut in _single_field_mutants(step, scene):
            steps = list(prog.steps)
            steps[si] = mut
            variant = Program(steps)
            try:
                if any(
                    not grids_equal(run_program_on_grid(variant, g), o)
                    for g, o in zip(train, train_outs)
                ):
                    continue
            except ArcError:
                continue
            try:
                if not grids_equal(run_program_on_grid(variant, test), test_out):
                    return False
            except ArcError:
                return False
    return True


def make_planted_task(
    rng: random.Random,
    k: int,
    *,
    max_depth: int = 2,
    task_id: str = "",
) -> tuple[TaskRecord, Program]:
    """One task with k training pairs, one test pair, and its hidden program.

    Rejection-samples inputs until the planted program executes with a
    visible change on all k+1 grids and the demonstrations are specific
    enough to identify the program (see _well_posed).
    """
    depth = rng.randint(1, max_depth)
    for _ in range(200):
        palette = rng.sample(range(1, 10), rng.randint(2, 3))
        grids = []
        while len(grids) < k + 1:
            g = _random_scene_grid(rng, palette)
            if g is not None:
                grids.append(g)
        prog = _sample_program(rng, grids[0], depth)
        if prog is None:
            continue
        outs = []
        for g in grids:
            try:
                out = run_program_on_grid(prog, g)
            except ArcError:
                break
            if grids_equal(out, g):
                break
            outs.append(out)
        if len(outs) != k + 1:
            continue
        if not _well_posed(prog, grids):
            continue
        task = TaskRecord(
            task_id or "planted",
            list(zip(grids[:k], outs[:k])),
            [grids[k]],
            [outs[k]],
        )
        return task, prog
    raise RuntimeError("could not plant a task after 200 attempts")


def generate_suite(
    n: int, seed: int, k_choices: tuple[int, ...] = (2, 3, 4)
) -> list[tuple[TaskRecord, Program]]:
    """n independent planted tasks from one seed; deterministic."""
    rng = random.Random(seed)
    suite = []
    for i in range(n):
        k = rng.choice(k_choices)
        task, prog = make_planted_task(rng, k, task_id=f"planted-{seed}-{i:04d}")
        suite.append((task, prog))
    return suite


def write_suite(directory, suite) -> None:
    """Dump each task as <task_id>.json in ARC task format."""
    from pathlib import Path

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for task, _prog in suite:
        (out / f"{task.task_id}.json").write_bytes(serialize_task(task))
