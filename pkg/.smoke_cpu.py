import sys, time, statistics
from collections import Counter
from arcomposer.consistency import filter_consistent
from arcomposer.errors import ArcError, Unsolvable
from arcomposer.hypothesis import generate_candidates
from arcomposer.solution import solve_task
from arcomposer.synthetic import generate_suite
from arcomposer.patterns import execute as ex

n, seed = int(sys.argv[1]), int(sys.argv[2])
suite = generate_suite(n, seed)

counter = {"n": 0}
orig = ex._apply_kernel
def counted(*a, **kw):
    counter["n"] += 1
    return orig(*a, **kw)
ex._apply_kernel = counted

execs, cpus, rows = [], [], []
for task, planted in suite:
    c0, t0 = counter["n"], time.process_time()
    sets = generate_candidates(task.train_pairs)
    rep = filter_consistent(sets, task.train_pairs, test_input=task.test_inputs[0])
    try:
        solve_task(rep, task.test_inputs[0], pairs=task.train_pairs)
    except (Unsolvable, ArcError):
        pass
    dt = time.process_time() - t0
    cpus.append(dt)
    execs.append(counter["n"] - c0)
    rows.append((dt, counter["n"] - c0, task.task_id, len(planted.steps)))

se = sorted(execs)
print(f"cpu/task mean {statistics.mean(cpus)*1000:.0f}ms median {statistics.median(cpus)*1000:.0f}ms total {sum(cpus):.1f}s")
print(f"execs mean {statistics.mean(execs):.0f} median {se[len(se)//2]} p90 {se[int(len(se)*0.9)]} max {se[-1]} total {sum(execs)}")
for dt, e, tid, d in sorted(rows, reverse=True)[:8]:
    print(f"  {tid} cpu={dt*1000:.0f}ms execs={e} depth={d}")
