"""Dump full detail on each failing task."""
import sys
from arcomposer.consistency import canonical_id, filter_consistent
from arcomposer.grid import grids_equal
from arcomposer.hypothesis import generate_candidates, _validates_quick
from arcomposer.patterns.execute import run_program_on_grid
from arcomposer.errors import ArcError
from arcomposer.synthetic import generate_suite

suite = generate_suite(60, 7)
want = sys.argv[1:] if len(sys.argv) > 1 else None

def show(g, label):
    print(f"  {label}:")
    for row in g.rows:
        print("   ", "".join(str(c) for c in row))

for task, planted in suite:
    sets = generate_candidates(task.train_pairs)
    rep = filter_consistent(sets, task.train_pairs)
    ok = False
    if rep.selected is not None:
        try:
            ok = grids_equal(run_program_on_grid(rep.selected, task.test_inputs[0]), task.test_outputs[0])
        except ArcError as e:
            ok = False
    if ok:
        continue
    if want and task.task_id not in want:
        continue
    print(f"=== {task.task_id} k={len(task.train_pairs)} planted depth={len(planted.steps)}")
    print("  planted:", canonical_id(planted)[:300])
    if rep.selected is not None:
        print("  selected:", canonical_id(rep.selected)[:300])
        print("  surviving:", len(rep.surviving), "planted-in:", canonical_id(planted) in rep.surviving)
    else:
        print("  NO SURVIVOR; candidates:", [len(cs.candidates) for cs in sets])
        print("  planted validates:", _validates_quick(planted, task.train_pairs))
    show(task.test_inputs[0], "test in")
    show(task.test_outputs[0], "want")
    if rep.selected is not None:
        try:
            show(run_program_on_grid(rep.selected, task.test_inputs[0]), "got")
        except ArcError as e:
            print("   got: raises", e)
    print()
