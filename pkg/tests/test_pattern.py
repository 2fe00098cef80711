import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from fixtures import MIX4A, MIX4B, OPEN, PLUS, START4
from labyrinth import (
    InvalidPatternError,
    Pattern,
    build_graph,
    check_corner_property,
    find_exits,
    is_blocked,
    is_horizontally_blocked,
    is_tree,
    is_vertically_blocked,
    validate_labyrinth_pattern,
)
from labyrinth.errors import FormatError
from labyrinth.pattern import ExitsError, PatternGraph, SquareIndex, grid_is_tree
from strategies import labyrinth_patterns


def test_plus_cells():
    p = Pattern.from_rows(PLUS)
    assert p.width == 3
    assert p.white == {(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)}


def test_first_text_row_is_top():
    p = Pattern.from_rows(START4)
    black = {(c, r) for c in range(4) for r in range(4)} - p.white
    assert p.n_white == 9
    assert black == {(1, 0), (2, 0), (3, 0), (2, 1), (0, 2), (2, 3), (3, 3)}
    assert p.rows() == START4


def test_full_grid_parses():
    assert Pattern.from_rows(["..."] * 3).n_white == 9


@pytest.mark.parametrize("rows, needle", [
    (["..", "..."], "row has 3"),
    (["#x#", "...", "#.#"], "illegal"),
    (["###", "###", "###"], "no white"),
])
def test_from_rows_errors(rows, needle):
    with pytest.raises(FormatError, match=needle):
        Pattern.from_rows(rows)


def test_ragged_row_reports_line():
    with pytest.raises(FormatError) as info:
        Pattern.from_rows(["#.#", "..", "#.#"])
    assert info.value.lineno == 2


def test_graph_of_plus_is_a_star():
    g = build_graph(Pattern.from_rows(PLUS))
    assert len(g.vertices) == 5 and len(g.edges) == 4
    assert all(SquareIndex(1, 1) in e for e in g.edges)


def test_graph_sizes():
    assert len(build_graph(Pattern.from_rows(START4)).edges) == 8
    single = build_graph(Pattern.from_white(3, [(1, 1)]))
    assert len(single.vertices) == 1 and not single.edges


def test_is_tree_cases():
    assert is_tree(build_graph(Pattern.from_rows(PLUS)))
    assert not is_tree(build_graph(Pattern.from_rows(["..."] * 3)))
    assert not is_tree(build_graph(Pattern.from_white(3, [(0, 0), (2, 2)])))
    assert not is_tree(PatternGraph((), frozenset()))


def test_exits_of_plus():
    ex, pos = find_exits(Pattern.from_rows(PLUS))
    assert ex.top == (1, 2) and ex.bottom == (1, 0) and ex.left == (0, 1) and ex.right == (2, 1)
    assert (pos.r, pos.c) == (2, 2)


def test_exits_of_start4():
    ex, pos = find_exits(Pattern.from_rows(START4))
    assert (pos.r, pos.c) == (3, 1)
    assert ex.left.row == 1 and ex.top.col == 0


def test_exits_failure_lists_candidates():
    with pytest.raises(ExitsError) as info:
        find_exits(Pattern.from_rows(["..."] * 3))
    assert info.value.vertical == [0, 1, 2]
    assert info.value.horizontal == [0, 1, 2]


def test_corner_property():
    assert check_corner_property(Pattern.from_rows(PLUS))
    assert not check_corner_property(Pattern.from_white(4, [(0, 0), (3, 3)]))
    assert not check_corner_property(Pattern.from_white(4, [(0, 3), (3, 0)]))
    assert check_corner_property(Pattern.from_rows(START4))


def test_validation_reports():
    for rows in (PLUS, START4, MIX4A, MIX4B, *OPEN.values()):
        assert validate_labyrinth_pattern(Pattern.from_rows(rows)).ok
    report = validate_labyrinth_pattern(Pattern.from_rows(["..."] * 3))
    assert {c.name for c in report.failures()} == {"tree", "exits", "corner"}


def test_small_widths_rejected_at_validation_only():
    p = Pattern.from_white(2, [(0, 0), (0, 1), (1, 1)])
    report = validate_labyrinth_pattern(p)
    assert not report["width >= 3"].passed


def test_blockedness():
    for rows in (START4, MIX4A, MIX4B):
        p = Pattern.from_rows(rows)
        assert is_horizontally_blocked(p) and is_vertically_blocked(p)
    for rows in (PLUS, *OPEN.values()):
        p = Pattern.from_rows(rows)
        assert not is_horizontally_blocked(p) and not is_vertically_blocked(p)
        assert not is_blocked(p)


def test_blockedness_requires_labyrinth_pattern():
    with pytest.raises(InvalidPatternError):
        is_blocked(Pattern.from_rows(["..."] * 3))


def test_pattern_is_immutable_and_hashable():
    p = Pattern.from_rows(PLUS, "plus")
    with pytest.raises(ValueError):
        p.cells[0, 0] = True
    assert p == Pattern.from_rows(PLUS, "other") and hash(p) == hash(Pattern.from_rows(PLUS))


cells = st.integers(3, 7).flatmap(
    lambda m: st.lists(st.booleans(), min_size=m * m, max_size=m * m).map(lambda b: np.array(b).reshape(m, m)))


@settings(max_examples=300, deadline=None)
@given(cells)
def test_tree_check_agrees_with_dfs(c):
    if not c.any():
        return
    p = Pattern(c)
    white = oracles.from_rows(p.rows())
    assert is_tree(build_graph(p)) == oracles.dfs_is_tree(white) == grid_is_tree(c)


@settings(max_examples=300, deadline=None)
@given(cells)
def test_rotation_keeps_verdict(c):
    if not c.any():
        return
    p = Pattern(c)
    assert validate_labyrinth_pattern(p).ok == validate_labyrinth_pattern(p.rotated180()).ok


@settings(max_examples=100, deadline=None)
@given(labyrinth_patterns())
def test_exit_positions_under_reflection(p):
    m = p.width
    _, (r, c) = find_exits(p)
    assert find_exits(p.flipped_horizontally())[1] == (r, m + 1 - c)
    assert find_exits(p.flipped_vertically())[1] == (m + 1 - r, c)


@settings(max_examples=100, deadline=None)
@given(labyrinth_patterns())
def test_exit_squares_distinct(p):
    ex, _ = find_exits(p)
    assert len(set(ex)) == 4
