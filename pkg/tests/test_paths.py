import numpy as np
import pytest
from hypothesis import given, settings

import oracles
from fixtures import M_MIX4A, M_MIX4B, M_PLUS, M_START4, M_W2, MIX4A, MIX4B, PLUS, Q1, START4, SUPERMIXED_MAP, W2_D_PATH, W2_LENGTHS
from labyrinth import (
    AssignmentRule,
    ConsistencyError,
    ConstructionPlan,
    InvariantViolation,
    Pattern,
    PathType,
    arc_approximation,
    arc_length_lower_bound,
    build_to_level,
    counting_matrices,
    exit_path,
    exit_paths,
    path_length_sum_identity,
    path_matrix,
    paths_intersection,
    substitute_path,
    verify_counting_chain,
    verify_recursion,
)
from labyrinth.paths import (
    corridor_contains,
    identity_counting_matrix,
    iterate_level_paths,
    kind_for_exits,
    matrix_csv,
    path_lengths,
    polyline_length,
    tree_path,
)
from labyrinth.pattern import SquareIndex
from strategies import labyrinth_patterns, plans


def supermixed_plan():
    return ConstructionPlan.from_collections(
        [[Pattern.from_rows(START4, "start4")], [Pattern.from_rows(MIX4A, "mix4a"), Pattern.from_rows(MIX4B, "mix4b")]],
        [AssignmentRule.constant(0), AssignmentRule.explicit(SUPERMIXED_MAP)])


def test_kind_orientation():
    assert PathType.D.sides == ("right", "bottom")
    assert kind_for_exits("bottom", "right") == (PathType.D, False)
    assert kind_for_exits("left", "top") == (PathType.F, True)
    with pytest.raises(ValueError):
        kind_for_exits("top", "top")


def test_plus_paths():
    p = Pattern.from_rows(PLUS)
    a = exit_path(p, "A")
    assert a.squares == [(1, 2), (1, 1), (1, 0)]
    assert a.types == [PathType.A] * 3
    assert exit_path(p, "C").types == [PathType.A, PathType.C, PathType.B]


def test_reversed_path_keeps_types():
    path = exit_path(Pattern.from_rows(START4), "D")
    back = path.reversed()
    assert back.squares == path.squares[::-1] and back.types == path.types[::-1]


@pytest.mark.parametrize("rows, expected", [(PLUS, M_PLUS), (START4, M_START4), (MIX4A, M_MIX4A), (MIX4B, M_MIX4B)])
def test_frozen_path_matrices(rows, expected):
    assert path_matrix(Pattern.from_rows(rows)).tolist() == expected


def test_level_two_matrix_and_lengths():
    s = build_to_level(supermixed_plan(), 2)
    M = path_matrix(s)
    assert M.tolist() == M_W2
    assert path_lengths(M) == W2_LENGTHS
    assert exit_path(s, "D").squares == W2_D_PATH


def test_counting_matrices_and_recursion():
    plan = supermixed_plan()
    s1 = build_to_level(plan, 1)
    Qs = counting_matrices(s1, plan.collection(2), plan.rule(2))
    assert [q.entries.tolist() for q in Qs] == Q1
    assert all(q.level == 1 for q in Qs) and [q.member for q in Qs] == [0, 1]
    M2 = path_matrix(build_to_level(plan, 2))
    assert verify_recursion(path_matrix(s1), Qs, plan.collection(2).members, M2).ok
    assert verify_counting_chain([identity_counting_matrix()], [path_matrix(s1)], Qs).ok


def test_recursion_reports_wrong_matrix():
    plan = supermixed_plan()
    s1 = build_to_level(plan, 1)
    Qs = counting_matrices(s1, plan.collection(2), plan.rule(2))
    bad = np.array(M_W2, dtype=object)
    bad[0, 0] += 1
    report = verify_recursion(path_matrix(s1), Qs, plan.collection(2).members, bad)
    assert not report["M(n+1) = sum_h Q(n,h) M(n+1,h)"].passed
    assert "(A,A): 8 != 9" in report["M(n+1) = sum_h Q(n,h) M(n+1,h)"].detail


def test_counting_matrices_need_next_level():
    plan = supermixed_plan()
    with pytest.raises(ValueError):
        counting_matrices(build_to_level(plan, 2), plan.collection(2), plan.rule(2))


def test_substitution_equals_extraction():
    plan = supermixed_plan()
    s1, s2 = build_to_level(plan, 1), build_to_level(plan, 2)
    members = plan.collection(2).members
    for kind in PathType:
        coarse = exit_path(s1, kind)
        chosen = [members[SUPERMIXED_MAP[v]] for v in coarse.squares]
        assert substitute_path(coarse, chosen) == exit_path(s2, kind)


def test_substitution_seam_mismatch():
    coarse = exit_path(Pattern.from_rows(PLUS), "A")
    mixed = [Pattern.from_rows(START4), Pattern.from_rows(MIX4A), Pattern.from_rows(START4)]
    with pytest.raises(ConsistencyError):
        substitute_path(coarse, mixed)
    with pytest.raises(ValueError):
        substitute_path(coarse, mixed[:2])


def test_tree_path_endpoints():
    p = Pattern.from_rows(START4)
    assert tree_path(p, SquareIndex(0, 0), SquareIndex(0, 0)) == [(0, 0)]
    path = tree_path(p, SquareIndex(0, 3), SquareIndex(3, 1))
    assert path[0] == (0, 3) and path[-1] == (3, 1)


def test_intersection_cases():
    assert paths_intersection(Pattern.from_rows(PLUS)).case == "a"
    hit = paths_intersection(Pattern.from_rows(START4))
    assert hit.case == "b" and len(hit.squares) > 1


def test_arc_polyline():
    pts = arc_approximation(Pattern.from_rows(PLUS), "bottom", "top")
    assert pts.tolist() == [[0.5, 1 / 6], [0.5, 0.5], [0.5, 5 / 6]]
    assert polyline_length(pts) == pytest.approx(2 / 3)
    assert polyline_length(pts[:1]) == 0.0


def test_arc_bound():
    assert arc_length_lower_bound(3, 1, [3]) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        arc_length_lower_bound(3, 2, [3])


def test_matrix_csv_header():
    text = matrix_csv(path_matrix(Pattern.from_rows(PLUS)))
    assert text.splitlines()[0] == ",A,B,C,D,E,F"
    assert text.splitlines()[1] == "A,3,0,0,0,0,0"


@settings(max_examples=150, deadline=None)
@given(labyrinth_patterns())
def test_paths_agree_with_dfs_oracle(p):
    white = oracles.from_rows(p.rows())
    assert path_matrix(p).tolist() == oracles.path_matrix(white, p.width)
    for kind, path in exit_paths(p).items():
        squares, types = oracles.typed_path(white, p.width, kind.value)
        assert path.squares == squares and [t.value for t in path.types] == types


@settings(max_examples=150, deadline=None)
@given(labyrinth_patterns())
def test_length_identity_and_intersection(p):
    assert path_length_sum_identity(p).ok
    try:
        paths_intersection(p)
    except InvariantViolation as exc:
        pytest.fail(str(exc))


@settings(max_examples=40, deadline=None)
@given(plans(depth=3))
def test_recursion_on_random_plans(plan):
    sets = [build_to_level(plan, n) for n in range(1, plan.depth + 1)]
    for a, b in zip(sets, sets[1:]):
        col, rule = plan.collection(b.level), plan.rule(b.level)
        Qs = counting_matrices(a, col, rule)
        assert verify_recursion(path_matrix(a), Qs, col.members, path_matrix(b)).ok


@settings(max_examples=40, deadline=None)
@given(plans(depth=3))
def test_walk_matches_grid_and_nests(plan):
    previous = None
    for k, paths in iterate_level_paths(plan, plan.depth):
        s = build_to_level(plan, k)
        assert paths == exit_paths(s.grid)
        if previous is not None:
            m = plan.widths[k - 1]
            for kind in PathType:
                assert corridor_contains(previous[kind], paths[kind], m)
        previous = paths


@settings(max_examples=40, deadline=None)
@given(plans(depth=2))
def test_polyline_not_shorter_than_bound(plan):
    s = build_to_level(plan, plan.depth)
    for kind in PathType:
        start, end = kind.sides
        pts = arc_approximation(s, start, end)
        assert polyline_length(pts) >= float(arc_length_lower_bound(len(pts), plan.depth, plan.widths)) - 1e-12
