"""Diagnose why planted programs fail to survive intersection."""
import sys
from collections import Counter

from arcomposer.consistency import canonical_id, filter_consistent, validates
from arcomposer.grid import grids_equal
from arcomposer.hypothesis import exact_step_matches, generate_candidates
from arcomposer.scene import abstract_scene_cached
from arcomposer.synthetic import generate_suite

n = int(sys.argv[1]) if len(sys.argv) > 1 else 60
suite = generate_suite(n, 7)

fail_kinds = Counter()
examples_shown = 0
for task, planted in suite:
    sets = generate_candidates(task.train_pairs)
    rep = filter_consistent(sets, task.train_pairs)
    solved = rep.selected is not None and grids_equal(
        __import__("arcomposer.patterns.execute", fromlist=["run_program_on_grid"]).run_program_on_grid(
            rep.selected, task.test_inputs[0]),
        task.test_outputs[0])
    if solved:
        continue
    d = len(planted.steps)
    pcid = canonical_id(planted)
    in_ex = [any(canonical_id(p) == pcid for p in cs.candidates) for cs in sets]
    if rep.selected is not None:
        fail_kinds[f"d{d}-selected-wrong-on-test"] += 1
        kind = "selected-wrong"
    elif all(in_ex):
        fail_kinds[f"d{d}-planted-in-all-but-no-selected??"] += 1
        kind = "weird"
    elif d == 1:
        # which example lost it, and does a single-pair exact scan find it?
        missing = [i for i, ok in enumerate(in_ex) if not ok]
        i = missing[0]
        g_in, g_out = task.train_pairs[i]
        ms = exact_step_matches(abstract_scene_cached(g_in), g_out)
        from arcomposer.patterns import Program as _P
        found = any(canonical_id(_P([m])) == pcid for m in ms)
        fail_kinds[f"d1-missing-ex{'' if found else '-and-scan-misses'}"] += 1
        kind = "d1"
        if examples_shown < 4:
            examples_shown += 1
            print(f"--- {task.task_id} planted={pcid[:120]}")
            print(f"    in_ex={in_ex} scan_on_missing_finds={found} n_cands={[len(cs.candidates) for cs in sets]}")
            if not found:
                names = Counter(m.schema_name for m in ms)
                print(f"    scan found instead: {dict(names)}")
    else:
        fail_kinds[f"d2-planted-missing"] += 1
        kind = "d2"
print(dict(fail_kinds))
