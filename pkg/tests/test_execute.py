"""Fixture tests for the 14 executable kernels.

Every pinned behavior in docs/semantics.md has a test here; the fixtures
are hand-executed expected grids. A helper runs one instance through
execute_step and renders the result.
"""

import pytest
from hypothesis import given, settings

from arcomposer.errors import (
    BindingResolutionFailed,
    NotExecutable,
    SemanticsViolation,
    StepExecutionError,
)
from arcomposer.grid import Grid, grids_equal, render
from arcomposer.scene import abstract_scene
from arcomposer.patterns import PatternInstance, Program, Selector
from arcomposer.patterns.execute import (
    execute_program,
    execute_step,
    run_program_on_grid,
)

from strategies import sparse_grids


def run(inst: PatternInstance, cells: list[list[int]]) -> list[list[int]]:
    g = Grid.from_lists(cells)
    scene = execute_step(inst, abstract_scene(g))
    return render(scene, *g.dims).to_lists()


def src_all() -> dict:
    return {"source": Selector("all")}


class TestHorizontalFill:
    def test_right_to_boundary(self):
        out = run(
            PatternInstance(
                "Horizontal Fill",
                {"column_index": "right of an object", "stop_condition": "grid boundary"},
                src_all(),
            ),
            [[0, 0, 0], [0, 4, 0], [0, 0, 0]],
        )
        assert out == [[0, 0, 0], [0, 4, 4], [0, 0, 0]]

    def test_left_to_boundary(self):
        out = run(
            PatternInstance(
                "Horizontal Fill",
                {"column_index": "left of an object", "stop_condition": "grid boundary"},
                src_all(),
            ),
            [[0, 0, 4]],
        )
        assert out == [[4, 4, 4]]

    def test_stop_at_another_object(self):
        out = run(
            PatternInstance(
                "Horizontal Fill",
                {"column_index": "right of an object", "stop_condition": "another object"},
                {"source": Selector("color", 4)},
            ),
            [[4, 0, 0, 7, 0]],
        )
        assert out == [[4, 4, 4, 7, 0]]

    def test_rows_without_obstacle_are_skipped(self):
        out = run(
            PatternInstance(
                "Horizontal Fill",
                {"column_index": "right of an object", "stop_condition": "another object"},
                {"source": Selector("color", 4)},
            ),
            [[4, 0, 0, 7, 0], [4, 0, 0, 0, 0], [0, 0, 0, 0, 0]],
        )
        assert out == [[4, 4, 4, 7, 0], [4, 0, 0, 0, 0], [0, 0, 0, 0, 0]]

    def test_no_obstacle_anywhere_is_a_violation(self):
        with pytest.raises(SemanticsViolation):
            run(
                PatternInstance(
                    "Horizontal Fill",
                    {"column_index": "right of an object", "stop_condition": "another object"},
                    src_all(),
                ),
                [[4, 0, 0]],
            )

    def test_stop_at_specific_color_only(self):
        inst = PatternInstance(
            "Horizontal Fill",
            {"column_index": "right of an object", "stop_condition": "specific color"},
            {"source": Selector("color", 4), "stop_color": 7},
        )
        out = run(inst, [[4, 0, 7, 0], [4, 0, 5, 0]])
        # row 1 is blocked by color 5, not the stop color: unpainted
        assert out == [[4, 4, 7, 0], [4, 0, 5, 0]]

    def test_fill_color_from_binding(self):
        out = run(
            PatternInstance(
                "Horizontal Fill",
                {
                    "column_index": "right of an object",
                    "fill_color": "based on some different objects",
                    "stop_condition": "grid boundary",
                },
                {"source": Selector("color", 4), "color": 6},
            ),
            [[4, 0, 0]],
        )
        assert out == [[4, 6, 6]]

    def test_per_row_extent_follows_the_object(self):
        out = run(
            PatternInstance(
                "Horizontal Fill",
                {"column_index": "right of an object", "stop_condition": "grid boundary"},
                src_all(),
            ),
            [[4, 4, 0, 0], [4, 0, 0, 0]],
        )
        assert out == [[4, 4, 4, 4], [4, 4, 4, 4]]


class TestVerticalFill:
    def test_down_to_boundary(self):
        out = run(
            PatternInstance(
                "Vertical Fill",
                {"row_index": "below an object", "stop_condition": "grid boundary"},
                src_all(),
            ),
            [[3, 0], [0, 0], [0, 0]],
        )
        assert out == [[3, 0], [3, 0], [3, 0]]

    def test_up_stops_before_obstacle(self):
        out = run(
            PatternInstance(
                "Vertical Fill",
                {"row_index": "top of an object", "stop_condition": "another object"},
                {"source": Selector("color", 3)},
            ),
            [[7, 0], [0, 0], [3, 0]],
        )
        assert out == [[7, 0], [3, 0], [3, 0]]

    def test_fill_color_is_source_color(self):
        out = run(
            PatternInstance(
                "Vertical Fill",
                {"row_index": "below an object", "stop_condition": "grid boundary"},
                {"source": Selector("color", 8)},
            ),
            [[8, 0], [0, 0]],
        )
        assert out == [[8, 0], [8, 0]]


class TestConnectingBridges:
    CELLS = [
        [0, 0, 0, 0, 0, 0],
        [3, 3, 0, 0, 5, 5],
        [3, 3, 0, 0, 5, 5],
        [0, 0, 0, 0, 0, 0],
    ]

    def test_orthogonal_line_uses_source_color(self):
        out = run(
            PatternInstance(
                "Connecting Bridges",
                {"path_direction": "orthogonal", "connection_shape": "line"},
                {"source": Selector("color", 3), "target": Selector("color", 5)},
            ),
            self.CELLS,
        )
        # shared rows 1-2, line takes the central (floor) row only
        assert out[1] == [3, 3, 3, 3, 5, 5]
        assert out[2] == [3, 3, 0, 0, 5, 5]
        assert out[0] == [0] * 6 and out[3] == [0] * 6

    def test_end_point_color(self):
        out = run(
            PatternInstance(
                "Connecting Bridges",
                {
                    "path_direction": "orthogonal",
                    "connection_shape": "line",
                    "bridge_color": "based on bridge ending point",
                },
                {"source": Selector("color", 3), "target": Selector("color", 5)},
            ),
            self.CELLS,
        )
        assert out[1][2:4] == [5, 5]

    def test_line_restricted_to_shared_span(self):
        cells = [
            [3, 0, 0, 5],
            [3, 0, 0, 0],
        ]
        out = run(
            PatternInstance(
                "Connecting Bridges",
                {"path_direction": "orthogonal", "connection_shape": "line"},
                {"source": Selector("color", 3), "target": Selector("color", 5)},
            ),
            cells,
        )
        assert out == [[3, 3, 3, 5], [3, 0, 0, 0]]

    def test_rectangle_spans_shared_bbox_rows(self):
        cells = [
            [3, 0, 0, 5],
            [3, 0, 0, 5],
            [3, 0, 0, 5],
        ]
        out = run(
            PatternInstance(
                "Connecting Bridges",
                {"path_direction": "orthogonal", "connection_shape": "rectangle"},
                {"source": Selector("color", 3), "target": Selector("color", 5)},
            ),
            cells,
        )
        assert [row[1:3] for row in out] == [[3, 3], [3, 3], [3, 3]]

    def test_line_on_same_fixture_takes_central_row(self):
        cells = [
            [3, 0, 0, 5],
            [3, 0, 0, 5],
            [3, 0, 0, 5],
        ]
        out = run(
            PatternInstance(
                "Connecting Bridges",
                {"path_direction": "orthogonal", "connection_shape": "line"},
                {"source": Selector("color", 3), "target": Selector("color", 5)},
            ),
            cells,
        )
        assert [row[1:3] for row in out] == [[0, 0], [3, 3], [0, 0]]

    def test_vertical_corridor(self):
        cells = [
            [0, 3, 0],
            [0, 0, 0],
            [0, 0, 0],
            [0, 5, 0],
        ]
        out = run(
            PatternInstance(
                "Connecting Bridges",
                {"path_direction": "orthogonal", "connection_shape": "line"},
                {"source": Selector("color", 3), "target": Selector("color", 5)},
            ),
            cells,
        )
        assert [row[1] for row in out] == [3, 3, 3, 5]

    def test_diagonal_bridge(self):
        cells = [
            [3, 0, 0, 0],
            [0, 0, 0, 0],
            [0, 0, 0, 0],
            [0, 0, 0, 5],
        ]
        out = run(
            PatternInstance(
                "Connecting Bridges",
                {"path_direction": "diagonal", "connection_shape": "line"},
                {"source": Selector("color", 3), "target": Selector("color", 5)},
            ),
            cells,
        )
        assert out[1][1] == 3 and out[2][2] == 3

    def test_no_corridor_is_a_violation(self):
        cells = [
            [3, 0, 0],
            [0, 0, 0],
            [0, 0, 5],
        ]
        with pytest.raises(SemanticsViolation):
            run(
                PatternInstance(
                    "Connecting Bridges",
                    {"path_direction": "orthogonal", "connection_shape": "line"},
                    {"source": Selector("color", 3), "target": Selector("color", 5)},
                ),
                cells,
            )

    def test_rejected_shapes_and_paths(self):
        for params in (
            {"connection_shape": "triangle"},
            {"connection_shape": "circle"},
            {"path_direction": "based on color sequence"},
            {"bridge_color": "based on cavity inside an object"},
        ):
            with pytest.raises(SemanticsViolation):
                run(
                    PatternInstance(
                        "Connecting Bridges",
                        params,
                        {"source": Selector("color", 3), "target": Selector("color", 5)},
                    ),
                    self.CELLS,
                )


class TestBoundaryAttachmentFill:
    def test_solidify_bbox(self):
        out = run(
            PatternInstance(
                "Boundary Attachment Fill",
                {"fill_logic": "fits in space to form rectangle"},
                src_all(),
            ),
            [[0, 0, 0, 0], [0, 6, 0, 6], [0, 6, 6, 6], [0, 0, 0, 0]],
        )
        assert out == [[0, 0, 0, 0], [0, 6, 6, 6], [0, 6, 6, 6], [0, 0, 0, 0]]

    @pytest.mark.parametrize(
        "side,expected",
        [
            ("left", [[0, 0, 0, 0], [6, 6, 0, 0], [6, 6, 0, 0], [0, 0, 0, 0]]),
            ("right", [[0, 0, 0, 0], [0, 6, 6, 0], [0, 6, 6, 0], [0, 0, 0, 0]]),
            ("top", [[0, 6, 0, 0], [0, 6, 0, 0], [0, 6, 0, 0], [0, 0, 0, 0]]),
            ("bottom", [[0, 0, 0, 0], [0, 6, 0, 0], [0, 6, 0, 0], [0, 6, 0, 0]]),
        ],
    )
    def test_strip_sides(self, side, expected):
        out = run(
            PatternInstance(
                "Boundary Attachment Fill",
                {"fill_logic": "gets laid on the object", "attachment_direction": side},
                src_all(),
            ),
            [[0, 0, 0, 0], [0, 6, 0, 0], [0, 6, 0, 0], [0, 0, 0, 0]],
        )
        assert out == expected

    def test_strip_off_grid_is_clipped(self):
        # object hugs the left edge; a left strip has nowhere to go
        with pytest.raises(SemanticsViolation):
            run(
                PatternInstance(
                    "Boundary Attachment Fill",
                    {"fill_logic": "gets laid on the object", "attachment_direction": "left"},
                    src_all(),
                ),
                [[6, 0, 0], [6, 0, 0], [0, 0, 0]],
            )


class TestDiagonalFill:
    def test_bottom_right_ray(self):
        out = run(
            PatternInstance(
                "Diagonal Fill",
                {"direction": "bottom-right", "stop_condition": "hit grid boundary"},
                src_all(),
            ),
            [[2, 0, 0], [0, 0, 0], [0, 0, 0]],
        )
        assert out == [[2, 0, 0], [0, 2, 0], [0, 0, 2]]

    def test_complementary_color(self):
        out = run(
            PatternInstance(
                "Diagonal Fill",
                {
                    "direction": "bottom-right",
                    "fill_color": "complementary to source",
                    "stop_condition": "hit grid boundary",
                },
                src_all(),
            ),
            [[2, 0], [0, 0]],
        )
        assert out == [[2, 0], [0, 7]]

    def test_starts_at_ray_facing_corner(self):
        out = run(
            PatternInstance(
                "Diagonal Fill",
                {"direction": "top-right", "stop_condition": "hit grid boundary"},
                src_all(),
            ),
            [[0, 0, 0], [0, 0, 0], [2, 2, 0]],
        )
        # (2,1) is strictly furthest along (-1,+1); ray starts at (1,2)
        assert out == [[0, 0, 0], [0, 0, 2], [2, 2, 0]]

    def test_projection_tie_prefers_scan_order(self):
        # (0,1) and (1,0) tie on the bottom-right projection; smaller row wins
        out = run(
            PatternInstance(
                "Diagonal Fill",
                {"direction": "bottom-right", "stop_condition": "hit grid boundary"},
                src_all(),
            ),
            [[0, 2, 0], [2, 0, 0], [0, 0, 0]],
        )
        assert out == [[0, 2, 0], [2, 0, 2], [0, 0, 0]]

    def test_obstruction_required(self):
        with pytest.raises(SemanticsViolation):
            run(
                PatternInstance(
                    "Diagonal Fill",
                    {"direction": "bottom-right", "stop_condition": "object obstruction"},
                    src_all(),
                ),
                [[2, 0], [0, 0]],
            )

    def test_stops_before_obstruction(self):
        out = run(
            PatternInstance(
                "Diagonal Fill",
                {"direction": "bottom-right", "stop_condition": "object obstruction"},
                {"source": Selector("color", 2)},
            ),
            [[2, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 8]],
        )
        assert out[1][1] == 2 and out[2][2] == 2 and out[3][3] == 8

    def test_bounce_is_rejected(self):
        with pytest.raises(SemanticsViolation):
            run(
                PatternInstance(
                    "Diagonal Fill",
                    {"fill_color": "change on bounce"},
                    src_all(),
                ),
                [[2, 0], [0, 0]],
            )


class TestFindAndColor:
    CELLS = [[1, 0, 2, 0, 3], [0, 0, 0, 0, 0]]

    def test_complement(self):
        out = run(
            PatternInstance(
                "Find Objects in the Input Image and Color Them",
                {"new_color": "complements the original color"},
                src_all(),
            ),
            self.CELLS,
        )
        assert out[0] == [8, 0, 7, 0, 6]

    def test_constant(self):
        out = run(
            PatternInstance(
                "Find Objects in the Input Image and Color Them",
                {"new_color": "constant throughout"},
                {"source": Selector("all"), "color": 5},
            ),
            self.CELLS,
        )
        assert out[0] == [5, 0, 5, 0, 5]

    def test_alternating(self):
        out = run(
            PatternInstance(
                "Find Objects in the Input Image and Color Them",
                {"new_color": "alternating pattern"},
                {"source": Selector("all"), "color": 5},
            ),
            self.CELLS,
        )
        assert out[0] == [5, 0, 4, 0, 5]

    def test_selector_narrows_targets(self):
        out = run(
            PatternInstance(
                "Find Objects in the Input Image and Color Them",
                {"new_color": "complements the original color"},
                {"source": Selector("color", 2)},
            ),
            self.CELLS,
        )
        assert out[0] == [1, 0, 7, 0, 3]


class TestRemoveSequence:
    CELLS = [
        [1, 0, 2, 0, 0],
        [0, 0, 0, 0, 3],
        [0, 5, 0, 0, 3],
    ]

    def test_leftmost_same_shape_removes_singletons(self):
        out = run(
            PatternInstance(
                "Remove Objects from the Output in a Particular Sequence",
                {"object_list_ordered": "same shape", "trigger_condition": "leftmost"},
                src_all(),
            ),
            self.CELLS,
        )
        assert out == [
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 3],
            [0, 0, 0, 0, 3],
        ]

    def test_topmost_all_in_row(self):
        out = run(
            PatternInstance(
                "Remove Objects from the Output in a Particular Sequence",
                {"object_list_ordered": "all in the row", "trigger_condition": "topmost"},
                src_all(),
            ),
            self.CELLS,
        )
        assert out == [
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 3],
            [0, 5, 0, 0, 3],
        ]

    def test_rightmost_all_in_column(self):
        out = run(
            PatternInstance(
                "Remove Objects from the Output in a Particular Sequence",
                {"object_list_ordered": "all in a column", "trigger_condition": "rightmost"},
                src_all(),
            ),
            self.CELLS,
        )
        assert out == [
            [1, 0, 2, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 5, 0, 0, 0],
        ]

    def test_selector_is_the_trigger(self):
        out = run(
            PatternInstance(
                "Remove Objects from the Output in a Particular Sequence",
                {"object_list_ordered": "same shape", "trigger_condition": "based on an object"},
                {"source": Selector("color", 5)},
            ),
            self.CELLS,
        )
        # seed is the 5; same-shape expansion within the selected universe only
        assert out == [
            [1, 0, 2, 0, 0],
            [0, 0, 0, 0, 3],
            [0, 0, 0, 0, 3],
        ]

    def test_overlap_trigger_without_overlaps_is_a_violation(self):
        with pytest.raises(SemanticsViolation):
            run(
                PatternInstance(
                    "Remove Objects from the Output in a Particular Sequence",
                    {"object_list_ordered": "same shape", "trigger_condition": "overlaps"},
                    src_all(),
                ),
                self.CELLS,
            )

    def test_overlap_trigger(self):
        cells = [
            [2, 2, 2, 2, 0, 7],
            [2, 0, 0, 0, 0, 7],
            [2, 0, 1, 0, 0, 0],
            [2, 0, 0, 0, 0, 0],
        ]
        out = run(
            PatternInstance(
                "Remove Objects from the Output in a Particular Sequence",
                {"object_list_ordered": "same shape", "trigger_condition": "overlaps"},
                src_all(),
            ),
            cells,
        )
        # the 1 sits inside the hook's bbox: both are removed; the
        # detached 7 bar overlaps nothing and matches neither shape
        assert out == [
            [0, 0, 0, 0, 0, 7],
            [0, 0, 0, 0, 0, 7],
            [0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0],
        ]


class TestAlternatingFill:
    def test_checkerboard_ab(self):
        out = run(
            PatternInstance(
                "Alternating Pattern Filling",
                {"pattern_type": "checkerboard"},
                {"color_a": 1, "color_b": 2},
            ),
            [[0, 0], [0, 0]],
        )
        assert out == [[1, 2], [2, 1]]

    def test_stripe_vertical_aab(self):
        out = run(
            PatternInstance(
                "Alternating Pattern Filling",
                {"colors": '["A", "A", "B"]', "pattern_type": "stripe_vertical"},
                {"color_a": 3, "color_b": 4},
            ),
            [[0, 0, 0, 0]],
        )
        assert out == [[3, 3, 4, 3]]

    def test_stripe_horizontal(self):
        out = run(
            PatternInstance(
                "Alternating Pattern Filling",
                {"pattern_type": "stripe_horizontal"},
                {"color_a": 3, "color_b": 4},
            ),
            [[0], [0], [0]],
        )
        assert out == [[3], [4], [3]]

    def test_existing_objects_are_preserved(self):
        out = run(
            PatternInstance(
                "Alternating Pattern Filling",
                {"pattern_type": "checkerboard"},
                {"color_a": 1, "color_b": 2},
            ),
            [[0, 9, 0], [0, 0, 0], [0, 0, 0]],
        )
        assert out[0][1] == 9
        assert out[0][0] == 1 and out[0][2] == 1


class TestCavityFill:
    RING = [
        [0, 0, 0, 0, 0],
        [0, 2, 2, 2, 0],
        [0, 2, 0, 2, 0],
        [0, 2, 2, 2, 0],
        [0, 0, 0, 0, 0],
    ]

    def test_material_color(self):
        out = run(
            PatternInstance(
                "Cavity Fill",
                {"fill_color": "based on material already present"},
                src_all(),
            ),
            self.RING,
        )
        assert out[2][2] == 2

    def test_arbitrary_color(self):
        out = run(
            PatternInstance(
                "Cavity Fill",
                {"fill_color": "arbitrary"},
                {"source": Selector("all"), "color": 8},
            ),
            self.RING,
        )
        assert out[2][2] == 8

    def test_open_shape_strict_mode_is_noop_violation(self):
        cells = [
            [0, 0, 0, 0, 0],
            [0, 2, 0, 2, 0],
            [0, 2, 0, 2, 0],
            [0, 2, 2, 2, 0],
            [0, 0, 0, 0, 0],
        ]
        with pytest.raises(SemanticsViolation):
            run(
                PatternInstance(
                    "Cavity Fill",
                    {"fill_color": "based on material already present"},
                    src_all(),
                ),
                cells,
            )

    def test_solid_mode_completes_bbox(self):
        cells = [
            [0, 0, 0, 0, 0],
            [0, 2, 0, 2, 0],
            [0, 2, 0, 2, 0],
            [0, 2, 2, 2, 0],
            [0, 0, 0, 0, 0],
        ]
        out = run(
            PatternInstance(
                "Cavity Fill",
                {
                    "max_indent_depth": "till complete object",
                    "fill_color": "based on material already present",
                },
                src_all(),
            ),
            cells,
        )
        assert [row[1:4] for row in out[1:4]] == [[2, 2, 2], [2, 2, 2], [2, 2, 2]]


class TestAddReplace:
    PLUS = [
        [0, 0, 0, 0, 0],
        [0, 0, 7, 0, 0],
        [0, 7, 7, 7, 0],
        [0, 0, 7, 0, 0],
        [0, 0, 0, 0, 0],
    ]

    def test_replace_with_cell_at_midpoint(self):
        out = run(
            PatternInstance(
                "Add/Replace an Object",
                {
                    "add_replacement_object": "cell",
                    "inherit_properties": "same midpoint",
                    "additional_change": "do nothing",
                },
                src_all(),
            ),
            self.PLUS,
        )
        assert out[2][2] == 7
        assert sum(v != 0 for row in out for v in row) == 1

    def test_replace_with_horizontal_bar(self):
        out = run(
            PatternInstance(
                "Add/Replace an Object",
                {
                    "add_replacement_object": "horizontal bar",
                    "inherit_properties": "same midpoint",
                    "additional_change": "do nothing",
                },
                src_all(),
            ),
            self.PLUS,
        )
        assert out[2] == [0, 7, 7, 7, 0]
        assert sum(v != 0 for row in out for v in row) == 3

    def test_replace_with_vertical_bar(self):
        out = run(
            PatternInstance(
                "Add/Replace an Object",
                {
                    "add_replacement_object": "vertical bar",
                    "inherit_properties": "same midpoint",
                    "additional_change": "do nothing",
                },
                src_all(),
            ),
            self.PLUS,
        )
        assert [row[2] for row in out] == [0, 7, 7, 7, 0]

    def test_replace_with_rectangle_fills_bbox(self):
        out = run(
            PatternInstance(
                "Add/Replace an Object",
                {
                    "add_replacement_object": "rectangle",
                    "inherit_properties": "same midpoint",
                    "additional_change": "do nothing",
                },
                src_all(),
            ),
            self.PLUS,
        )
        assert [row[1:4] for row in out[1:4]] == [[7, 7, 7]] * 3

    def test_square_side_is_min_dimension(self):
        cells = [
            [0, 0, 0, 0, 0, 0],
            [0, 5, 5, 5, 5, 0],
            [0, 5, 5, 5, 5, 0],
            [0, 0, 0, 0, 0, 0],
        ]
        out = run(
            PatternInstance(
                "Add/Replace an Object",
                {
                    "add_replacement_object": "square",
                    "inherit_properties": "same midpoint",
                    "additional_change": "do nothing",
                },
                src_all(),
            ),
            cells,
        )
        assert sum(v == 5 for row in out for v in row) == 4

    def test_centroid_anchor_differs_from_midpoint(self):
        cells = [
            [0, 0, 0, 0, 0],
            [0, 3, 0, 0, 0],
            [0, 3, 0, 0, 0],
            [0, 3, 3, 3, 0],
            [0, 0, 0, 0, 0],
        ]
        mid = run(
            PatternInstance(
                "Add/Replace an Object",
                {
                    "add_replacement_object": "cell",
                    "inherit_properties": "same midpoint",
                    "additional_change": "do nothing",
                },
                src_all(),
            ),
            cells,
        )
        cen = run(
            PatternInstance(
                "Add/Replace an Object",
                {
                    "add_replacement_object": "cell",
                    "inherit_properties": "same centroid",
                    "additional_change": "do nothing",
                },
                src_all(),
            ),
            cells,
        )
        assert mid[2][2] == 3
        assert cen[2][1] == 3  # centroid pulls toward the L's heavy column

    def test_rejected_values(self):
        for params in (
            {"add_replacement_object": "circle"},
            {"add_replacement_object": "triangle"},
            {"inherit_properties": "at some location"},
            {"additional_change": "add a boundary to new object"},
        ):
            with pytest.raises(SemanticsViolation):
                run(PatternInstance("Add/Replace an Object", params, src_all()), self.PLUS)


class TestFallingDown:
    def test_single_cell_falls_to_floor(self):
        out = run(
            PatternInstance("Falling Down (Gravity-Effect)", {}, src_all()),
            [[4, 0], [0, 0], [0, 0]],
        )
        assert out == [[0, 0], [0, 0], [4, 0]]

    def test_lands_on_static_obstacle(self):
        out = run(
            PatternInstance(
                "Falling Down (Gravity-Effect)", {}, {"source": Selector("color", 4)}
            ),
            [[4, 0], [0, 0], [8, 8]],
        )
        assert out == [[0, 0], [4, 0], [8, 8]]

    def test_stack_preserves_vertical_order(self):
        out = run(
            PatternInstance("Falling Down (Gravity-Effect)", {}, src_all()),
            [[4, 0], [0, 0], [5, 0], [0, 0], [0, 0]],
        )
        assert [row[0] for row in out] == [0, 0, 0, 4, 5]

    def test_multicolor_object_falls_intact(self):
        out = run(
            PatternInstance("Falling Down (Gravity-Effect)", {}, src_all()),
            [[4, 5], [0, 0], [0, 0]],
        )
        assert out == [[0, 0], [0, 0], [4, 5]]

    def test_grounded_everything_is_a_violation(self):
        with pytest.raises(SemanticsViolation):
            run(
                PatternInstance("Falling Down (Gravity-Effect)", {}, src_all()),
                [[0, 0], [4, 4]],
            )


class TestGoalTranslation:
    def test_stop_on_goal_travels_until_adjacent(self):
        out = run(
            PatternInstance(
                "Object Translation Based on Goal",
                {"step_count_or_speed": "stop on goal"},
                {"source": Selector("color", 4), "goal": Selector("color", 8)},
            ),
            [[4, 0, 0, 0, 8]],
        )
        assert out == [[0, 0, 0, 4, 8]]

    def test_stop_on_obstacle(self):
        out = run(
            PatternInstance(
                "Object Translation Based on Goal",
                {"step_count_or_speed": "stop on obstacle"},
                {"source": Selector("color", 4), "goal": Selector("color", 8)},
            ),
            [[4, 0, 7, 0, 8]],
        )
        assert out == [[0, 4, 7, 0, 8]]

    def test_vertical_axis_chosen_when_taller(self):
        out = run(
            PatternInstance(
                "Object Translation Based on Goal",
                {"step_count_or_speed": "stop on goal"},
                {"source": Selector("color", 4), "goal": Selector("color", 8)},
            ),
            [[4, 0], [0, 0], [0, 0], [8, 0]],
        )
        assert [row[0] for row in out] == [0, 0, 4, 8]

    def test_unreachable_goal_is_a_violation(self):
        with pytest.raises(SemanticsViolation):
            run(
                PatternInstance(
                    "Object Translation Based on Goal",
                    {"step_count_or_speed": "stop on goal"},
                    {"source": Selector("color", 4), "goal": Selector("color", 8)},
                ),
                [[4, 0, 7, 0, 8]],
            )

    def test_rejected_values(self):
        for params in (
            {"step_count_or_speed": "fixed"},
            {"pathfinding_method": "fixed path"},
        ):
            with pytest.raises(SemanticsViolation):
                run(
                    PatternInstance(
                        "Object Translation Based on Goal",
                        params,
                        {"source": Selector("color", 4), "goal": Selector("color", 8)},
                    ),
                    [[4, 0, 8]],
                )


class TestSymmetry:
    def test_horizontal_mirror_completes_right_half(self):
        out = run(
            PatternInstance(
                "Symmetry-Based Pattern",
                {"symmetry_type": "horizontal", "copy_mode": "mirror"},
            ),
            [[3, 0, 0, 0], [5, 3, 0, 0], [3, 0, 0, 0]],
        )
        assert out == [[3, 0, 0, 3], [5, 3, 3, 5], [3, 0, 0, 3]]

    def test_vertical_mirror(self):
        out = run(
            PatternInstance(
                "Symmetry-Based Pattern",
                {"symmetry_type": "vertical", "copy_mode": "mirror"},
            ),
            [[3, 5], [0, 0], [0, 0]],
        )
        assert out == [[3, 5], [0, 0], [3, 5]]

    def test_rotational_mirror(self):
        out = run(
            PatternInstance(
                "Symmetry-Based Pattern",
                {"symmetry_type": "rotational", "copy_mode": "mirror"},
            ),
            [[3, 5, 0], [0, 0, 0]],
        )
        assert out == [[3, 5, 0], [0, 5, 3]]

    def test_existing_cells_never_overwritten(self):
        out = run(
            PatternInstance(
                "Symmetry-Based Pattern",
                {"symmetry_type": "horizontal", "copy_mode": "mirror"},
            ),
            [[3, 0, 0, 9], [5, 0, 0, 0], [3, 0, 0, 0]],
        )
        assert out[0][3] == 9

    def test_duplicate_copies_fuller_half_unflipped(self):
        out = run(
            PatternInstance(
                "Symmetry-Based Pattern",
                {"symmetry_type": "horizontal", "copy_mode": "duplicate"},
            ),
            [[3, 5, 0, 0], [5, 3, 0, 0]],
        )
        assert out == [[3, 5, 3, 5], [5, 3, 5, 3]]

    def test_duplicate_skips_odd_middle_column(self):
        out = run(
            PatternInstance(
                "Symmetry-Based Pattern",
                {"symmetry_type": "horizontal", "copy_mode": "duplicate"},
            ),
            [[3, 0, 0], [5, 0, 0]],
        )
        assert out == [[3, 0, 3], [5, 0, 5]]

    def test_rotational_duplicate_rejected(self):
        with pytest.raises(SemanticsViolation):
            run(
                PatternInstance(
                    "Symmetry-Based Pattern",
                    {"symmetry_type": "rotational", "copy_mode": "duplicate"},
                ),
                [[3, 0], [0, 0]],
            )


class TestRayCast:
    def test_horizontal_rays_from_centroid_row(self):
        out = run(
            PatternInstance(
                "Ray-Cast / Ray-Trace Pattern",
                {"direction": "horizontal", "stop_condition": "boundary"},
                src_all(),
            ),
            [[0, 0, 0, 0, 0], [0, 0, 2, 0, 0], [0, 0, 0, 0, 0]],
        )
        assert out[1] == [2, 2, 2, 2, 2]
        assert out[0] == [0] * 5 and out[2] == [0] * 5

    def test_vertical_rays(self):
        out = run(
            PatternInstance(
                "Ray-Cast / Ray-Trace Pattern",
                {"direction": "vertical", "stop_condition": "boundary"},
                src_all(),
            ),
            [[0, 0, 0], [0, 2, 0], [0, 0, 0]],
        )
        assert [row[1] for row in out] == [2, 2, 2]

    def test_diagonal_rays_from_corners(self):
        out = run(
            PatternInstance(
                "Ray-Cast / Ray-Trace Pattern",
                {"direction": "diagonal", "stop_condition": "boundary"},
                src_all(),
            ),
            [[0, 0, 0], [0, 2, 0], [0, 0, 0]],
        )
        assert out == [[2, 0, 2], [0, 2, 0], [2, 0, 2]]

    def test_object_stop_requires_a_hit(self):
        with pytest.raises(SemanticsViolation):
            run(
                PatternInstance(
                    "Ray-Cast / Ray-Trace Pattern",
                    {"direction": "horizontal", "stop_condition": "object"},
                    src_all(),
                ),
                [[0, 2, 0]],
            )

    def test_object_stop_paints_only_blocked_rays(self):
        out = run(
            PatternInstance(
                "Ray-Cast / Ray-Trace Pattern",
                {"direction": "horizontal", "stop_condition": "object"},
                {"source": Selector("color", 2)},
            ),
            [[0, 2, 0, 0, 8]],
        )
        assert out == [[0, 2, 2, 2, 8]]

    def test_alternating_mark(self):
        out = run(
            PatternInstance(
                "Ray-Cast / Ray-Trace Pattern",
                {
                    "direction": "horizontal",
                    "stop_condition": "boundary",
                    "mark_color": "alternating pattern",
                },
                {"source": Selector("color", 2)},
            ),
            [[2, 0, 0, 0, 0]],
        )
        assert out == [[2, 2, 7, 2, 7]]

    def test_rejected_values(self):
        for params in (
            {"shape": "triangle"},
            {"direction": "change on hit"},
            {"mark_color": "change on hit"},
            {"mark_color": "based on other objects"},
        ):
            with pytest.raises(SemanticsViolation):
                run(
                    PatternInstance("Ray-Cast / Ray-Trace Pattern", params, src_all()),
                    [[2, 0, 0]],
                )


class TestExecutionEngine:
    def test_hint_only_step_not_executable(self):
        scene = abstract_scene(Grid.from_lists([[0, 3], [0, 0]]))
        with pytest.raises(NotExecutable):
            execute_step(PatternInstance("Object Dismantles", {}), scene)

    def test_no_effect_is_a_violation(self):
        scene = abstract_scene(Grid.from_lists([[0, 0, 0], [0, 3, 0], [0, 0, 0]]))
        inst = PatternInstance(
            "Cavity Fill", {"fill_color": "based on material already present"}, src_all()
        )
        with pytest.raises(SemanticsViolation):
            execute_step(inst, scene)

    def test_missing_selector_match_raises(self):
        scene = abstract_scene(Grid.from_lists([[0, 3], [0, 0]]))
        inst = PatternInstance(
            "Falling Down (Gravity-Effect)", {}, {"source": Selector("color", 5)}
        )
        with pytest.raises(BindingResolutionFailed):
            execute_step(inst, scene)

    def test_purity_input_scene_unchanged(self):
        g = Grid.from_lists([[4, 0, 0]])
        scene = abstract_scene(g)
        before = render(scene, *g.dims)
        execute_step(
            PatternInstance(
                "Horizontal Fill",
                {"column_index": "right of an object", "stop_condition": "grid boundary"},
                src_all(),
            ),
            scene,
        )
        assert grids_equal(render(scene, *g.dims), before)

    def test_depth_one_program_equals_step(self):
        g = Grid.from_lists([[4, 0, 0]])
        scene = abstract_scene(g)
        inst = PatternInstance(
            "Horizontal Fill",
            {"column_index": "right of an object", "stop_condition": "grid boundary"},
            src_all(),
        )
        a = execute_step(inst, scene)
        b = execute_program(Program([inst]), scene)
        assert a == b

    def test_depth_two_composes_left_to_right(self):
        cells = [
            [4, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
        ]
        g = Grid.from_lists(cells)
        fill = PatternInstance(
            "Horizontal Fill",
            {"column_index": "right of an object", "stop_condition": "grid boundary"},
            src_all(),
        )
        mirror = PatternInstance(
            "Symmetry-Based Pattern", {"symmetry_type": "vertical", "copy_mode": "mirror"}
        )
        composed = execute_program(Program([fill, mirror]), abstract_scene(g))
        by_hand = execute_step(mirror, execute_step(fill, abstract_scene(g)))
        assert composed == by_hand
        out = render(composed, 5, 5)
        assert out.rows[0] == (4, 4, 4, 4, 4)
        assert out.rows[4] == (4, 4, 4, 4, 4)

    def test_program_error_carries_step_index(self):
        g = Grid.from_lists([[4, 0, 0]])
        fill = PatternInstance(
            "Horizontal Fill",
            {"column_index": "right of an object", "stop_condition": "grid boundary"},
            src_all(),
        )
        hint = PatternInstance("Object Dismantles", {})
        with pytest.raises(StepExecutionError) as exc:
            execute_program(Program([fill, hint]), abstract_scene(g))
        assert exc.value.step_index == 1
        assert isinstance(exc.value.cause, NotExecutable)

    def test_concatenation_matches_sequential_execution(self):
        g = Grid.from_lists([[4, 0, 0], [0, 0, 0], [0, 0, 0]])
        a = Program(
            [
                PatternInstance(
                    "Horizontal Fill",
                    {"column_index": "right of an object", "stop_condition": "grid boundary"},
                    src_all(),
                )
            ]
        )
        b = Program(
            [
                PatternInstance(
                    "Symmetry-Based Pattern",
                    {"symmetry_type": "vertical", "copy_mode": "mirror"},
                )
            ]
        )
        combined = run_program_on_grid(Program(a.steps + b.steps), g)
        stepwise = run_program_on_grid(b, run_program_on_grid(a, g))
        assert grids_equal(combined, stepwise)

    @given(sparse_grids(max_side=8))
    @settings(max_examples=60)
    def test_executing_twice_matches(self, g):
        inst = PatternInstance(
            "Symmetry-Based Pattern",
            {"symmetry_type": "horizontal", "copy_mode": "mirror"},
        )
        try:
            first = run_program_on_grid(Program([inst]), g)
        except StepExecutionError:
            return
        second = run_program_on_grid(Program([inst]), g)
        assert grids_equal(first, second)

    @given(sparse_grids(max_side=8))
    @settings(max_examples=60)
    def test_closure_output_scene_satisfies_invariants(self, g):
        inst = PatternInstance(
            "Symmetry-Based Pattern",
            {"symmetry_type": "horizontal", "copy_mode": "mirror"},
        )
        try:
            scene = execute_step(inst, abstract_scene(g))
        except (StepExecutionError, SemanticsViolation):
            return
        seen: set = set()
        for i, obj in enumerate(scene.objects):
            assert obj.object_id == i
            assert not (obj.pixels & seen)
            seen |= obj.pixels
        out = render(scene, *scene.source_dims)
        non_bg = {
            (y, x)
            for y in range(out.height)
            for x in range(out.width)
            if out.rows[y][x] != scene.background_color
        }
        assert seen == non_bg
