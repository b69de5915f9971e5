"""Ad-hoc smoke run for consistency + solution stages (not part of the suite)."""
import time

from arcomposer.grid import Grid, grids_equal
from arcomposer.patterns import PatternInstance, Program, Selector
from arcomposer.patterns.execute import run_program_on_grid
from arcomposer.hypothesis import generate_candidates
from arcomposer.consistency import filter_consistent
from arcomposer.solution import (
    SymmetryAssessment, majority_vote, solve_symmetry, solve_task, symmetry_score,
)

# --- planted depth-1 task: fill right of each red object until boundary
g1 = Grid.from_lists([[0,2,0,0],[0,0,0,0],[2,0,0,0]])
g2 = Grid.from_lists([[0,0,0,0],[0,0,2,0],[0,0,0,0]])
g3 = Grid.from_lists([[2,0,0,0],[0,0,0,0],[0,2,0,0]])
planted = Program([PatternInstance(
    "Horizontal Fill",
    {"column_index": "right of an object", "fill_color": "based on source",
     "stop_condition": "grid boundary"},
    {"source": Selector("color", 2)},
)])
pairs = [(g, run_program_on_grid(planted, g)) for g in (g1, g2, g3)]

t0 = time.perf_counter()
sets = generate_candidates(pairs)
rep = filter_consistent(sets, pairs)
dt = time.perf_counter() - t0
print(f"[d1] surviving={len(rep.surviving)} selected_depth={len(rep.selected.steps)} {dt:.3f}s")
assert rep.selected is not None and rep.hint is None
for g_in, g_out in pairs:
    assert grids_equal(run_program_on_grid(rep.selected, g_in), g_out)
print("[d1] rationale:", rep.rationale)

# route 1 on a fresh test input
test_in = Grid.from_lists([[0,0,0,0],[2,0,0,0],[0,0,0,0]])
res = solve_task(rep, test_in, pairs=pairs)
expect = run_program_on_grid(planted, test_in)
assert grids_equal(res.final_prediction, expect) and res.candidates[0][1] == "executed_program"
assert not res.low_confidence and res.votes_used == 1
print("[route1] ok, agreement", res.per_cell_agreement)

# --- JSON round trip of the report
import json
blob = json.loads(rep.to_json())
assert blob["selected"] is not None and blob["hint"] is None
print("[report-json] keys:", sorted(blob.keys()))

# --- hint path: pairs no depth<=2 program explains (random-ish recolor)
ha = Grid.from_lists([[1,0,2],[0,3,0],[4,0,5]])
hb = Grid.from_lists([[5,0,4],[0,1,0],[3,0,2]])
hc = Grid.from_lists([[2,2,0],[0,0,7],[8,0,0]])
hd = Grid.from_lists([[0,9,9],[1,0,0],[0,0,6]])
hp = [(ha, hb), (hc, hd)]
hsets = generate_candidates(hp)
hrep = filter_consistent(hsets, hp, test_input=ha)
assert hrep.selected is None and hrep.hint is not None
print("[hint] ranked:", [(n, c) for n, _, c in hrep.hint.ranked_patterns][:3])
print("[hint] notes:", list(hrep.hint.consensus_notes.items())[:2])
assert hrep.hint.scene_summary is not None

# --- route 3: external solver sampled + voted
calls = {"n": 0}
def fake_solver(payload):
    assert "demonstrations" in payload and "hint" in payload
    calls["n"] += 1
    return [[1, 1], [1, calls["n"] % 2]]  # flip one cell across samples
res3 = solve_task(hrep, Grid.from_lists([[0,0],[0,0]]), attempts=5, external=fake_solver, pairs=hp)
assert calls["n"] == 5 and res3.votes_used == 5
assert [p for _, p in res3.candidates] == ["external_solver"] * 5
print("[route3] final:", res3.final_prediction.to_lists(), "agreement:", round(res3.per_cell_agreement, 3))

# --- route 4: greedy fallback, no external
res4 = solve_task(hrep, ha, attempts=3)
assert res4.low_confidence
print("[route4] provenance:", res4.candidates[0][1], "low_confidence:", res4.low_confidence)

# --- symmetry: build h-mirror-symmetric grid, mask a patch with unique color 9
base = [[0,3,0,0,3,0],[3,5,0,0,5,3],[0,0,7,7,0,0],[3,5,0,0,5,3],[0,3,0,0,3,0]]
masked = [row[:] for row in base]
for y in (1, 2):
    for x in (4, 5):
        masked[y][x] = 9
gm = Grid.from_lists(masked)
ass = symmetry_score(gm)
print(f"[sym] score={ass.score:.3f} transform={ass.best_transform} occ={len(ass.occluded_region)}")
assert ass.score == 1.0 and ass.best_transform == "horizontal mirror"
assert ass.occluded_region == frozenset({(1,4),(1,5),(2,4),(2,5)})
restored = solve_symmetry(gm, ass)
assert restored.to_lists() == base
print("[sym] exact restore ok")

# routing: report-with-no-selected + symmetric test input hits route 2
res2 = solve_task(hrep, gm, attempts=3)
assert res2.candidates[0][1] == "symmetry_solver" and res2.final_prediction.to_lists() == base
print("[route2] ok")

# asymmetric grid scores low
noise = Grid.from_lists([[1,2,3],[4,5,6],[7,8,1]])
assert symmetry_score(noise).score < 0.70
print("[sym] noise score:", round(symmetry_score(noise).score, 3))

# --- voting edge cases
a = Grid.from_lists([[1,1],[2,2]])
b = Grid.from_lists([[1,3],[2,2]])
c = Grid.from_lists([[1,1],[2,4]])
v = majority_vote([a, b, c])
assert v.to_lists() == [[1,1],[2,2]]
# dimension disagreement: modal group wins
d = Grid.from_lists([[9]])
v2 = majority_vote([d, a, b])
assert v2.dims == (2, 2)
# modal tie prefers first candidate's group
v3 = majority_vote([d, a])
assert v3.dims == (1, 1)
# cell tie keeps first-in-group value
v4 = majority_vote([Grid.from_lists([[5]]), Grid.from_lists([[6]])])
assert v4.to_lists() == [[5]]
print("[vote] all edge cases ok")

print("SMOKE OK")
