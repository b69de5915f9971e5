"""Classify recovery failures: alias-divergence vs missing-from-candidates."""
import sys
from collections import Counter

from arcomposer.consistency import canonical_id, filter_consistent
from arcomposer.grid import grids_equal
from arcomposer.hypothesis import generate_candidates
from arcomposer.patterns.execute import run_program_on_grid
from arcomposer.errors import ArcError
from arcomposer.synthetic import generate_suite

n = int(sys.argv[1]) if len(sys.argv) > 1 else 60
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 7
suite = generate_suite(n, seed)

kinds = Counter()
shown = 0
for task, planted in suite:
    sets = generate_candidates(task.train_pairs)
    rep = filter_consistent(sets, task.train_pairs)
    ok = False
    if rep.selected is not None:
        try:
            ok = grids_equal(run_program_on_grid(rep.selected, task.test_inputs[0]), task.test_outputs[0])
        except ArcError:
            kinds[f"d{len(planted.steps)}-selected-raises-on-test"] += 1
            continue
    if ok:
        kinds["solved"] += 1
        continue
    d = len(planted.steps)
    pcid = canonical_id(planted)
    surv = rep.surviving
    if rep.selected is None:
        kinds[f"d{d}-no-survivor"] += 1
        if shown < 3 and d == 2:
            shown += 1
            print(f"--- {task.task_id} d2 planted steps:",
                  [s.schema_name for s in planted.steps])
    elif pcid in surv:
        # planted survived but tie-break picked a diverging alias
        sel_depth = len(rep.selected.steps)
        kinds[f"d{d}-alias-divergence-seldepth{sel_depth}"] += 1
    else:
        kinds[f"d{d}-planted-not-surviving-selected-wrong"] += 1
print(dict(kinds))
