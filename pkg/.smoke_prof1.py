import sys, cProfile, pstats
from arcomposer.consistency import filter_consistent
from arcomposer.errors import ArcError, Unsolvable
from arcomposer.hypothesis import generate_candidates
from arcomposer.solution import solve_task
from arcomposer.synthetic import generate_suite

seed, want = int(sys.argv[1]), sys.argv[2]
suite = generate_suite(int(sys.argv[3]), seed)
task, planted = next((t, p) for t, p in suite if t.task_id == want)
print("planted:", [s.schema_name for s in planted.steps], "k =", len(task.train_pairs))
print("dims:", [(gi.dims, go.dims) for gi, go in task.train_pairs])

def run():
    sets = generate_candidates(task.train_pairs)
    rep = filter_consistent(sets, task.train_pairs, test_input=task.test_inputs[0])
    try:
        solve_task(rep, task.test_inputs[0], pairs=task.train_pairs)
    except (Unsolvable, ArcError):
        pass

cProfile.run("run()", ".prof_out")
st = pstats.Stats(".prof_out")
st.sort_stats("cumulative").print_stats(18)
