"""Ad-hoc profiling of planted-program recovery (acceptance dry run)."""
import sys
import time
from collections import Counter

from arcomposer.consistency import filter_consistent
from arcomposer.errors import ArcError, Unsolvable
from arcomposer.grid import grids_equal
from arcomposer.hypothesis import generate_candidates
from arcomposer.solution import solve_task
from arcomposer.synthetic import generate_suite

n = int(sys.argv[1]) if len(sys.argv) > 1 else 100
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 7

t0 = time.perf_counter()
suite = generate_suite(n, seed)
t_gen = time.perf_counter() - t0
print(f"generated {n} tasks in {t_gen:.1f}s")
dep = Counter(len(p.steps) for _, p in suite)
print("planted depth histogram:", dict(dep))

solved = 0
depth_ok = 0
route_hist = Counter()
slow = []
t0 = time.perf_counter()
for task, planted in suite:
    t1 = time.perf_counter()
    sets = generate_candidates(task.train_pairs)
    rep = filter_consistent(sets, task.train_pairs, test_input=task.test_inputs[0])
    try:
        res = solve_task(rep, task.test_inputs[0], pairs=task.train_pairs)
        pred = res.final_prediction
        route = res.candidates[0][1] + ("/low" if res.low_confidence else "")
    except (Unsolvable, ArcError):
        pred, route = None, "unsolvable"
    dt = time.perf_counter() - t1
    if dt > 1.0:
        slow.append((task.task_id, dt, len(planted.steps)))
    ok = pred is not None and grids_equal(pred, task.test_outputs[0])
    if ok:
        solved += 1
        if rep.selected is not None and len(rep.selected.steps) <= len(planted.steps):
            depth_ok += 1
        elif rep.selected is None:
            depth_ok += 1  # solved off-program (symmetry/greedy); no depth claim
    route_hist[route] += 1
t_solve = time.perf_counter() - t0

print(f"solved {solved}/{n} = {solved/n:.3f}  depth_ok={depth_ok}/{solved}")
print("routes:", dict(route_hist))
print(f"solve time {t_solve:.1f}s  total {t_gen + t_solve:.1f}s  per-task {1000*t_solve/n:.0f}ms")
for tid, dt, d in slow[:10]:
    print(f"  slow: {tid} {dt:.2f}s depth={d}")
