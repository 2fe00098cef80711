"""The nine acceptance criteria, one test each.

Every test records a single ``criterion N: PASS|FAIL`` line; the lines are
printed together at the end of the pytest run.
"""

import time
from contextlib import contextmanager
from fractions import Fraction
from math import prod

import numpy as np

from acceptance_log import RESULTS
from fixtures import START4_BOUND_EXCEEDS_10, START4_V_EXCEEDS_10, W2_ROWS
from labyrinth import (
    PathType,
    blocked_inequality_check,
    box_dimension_estimate,
    build_to_level,
    counting_matrices,
    exit_coordinates,
    exit_path,
    find_exits,
    format_set,
    format_trace,
    growth_diagnostics,
    is_horizontally_blocked,
    is_vertically_blocked,
    kappa_bound_check,
    parse_plan,
    path_length_sum_identity,
    path_matrix,
    paths_intersection,
    reduced_product_check,
    substitute_path,
    validate_collection_consistency,
    validate_labyrinth_pattern,
    verify_recursion,
)
from labyrinth.analysis import KAPPA_STAR, reduction_is_multiplicative, turn_balance_holds
from labyrinth.corpus import PLAN_NAMES, blocked_corpus, corpus_patterns, corpus_plan, data_dir, random_labyrinth_pattern, random_plan
from labyrinth.render import RenderSpec, render

N_RANDOM = 120


@contextmanager
def criterion(n, title):
    """Record PASS with ``notes`` if the block finishes, FAIL with the error otherwise."""
    notes = []
    start = time.perf_counter()
    try:
        yield notes
    except BaseException as exc:
        RESULTS[n] = f"criterion {n}: FAIL  {title} ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
        raise
    elapsed = time.perf_counter() - start
    detail = "; ".join(notes + [f"{elapsed:.2f} s"])
    RESULTS[n] = f"criterion {n}: PASS  {title} ({detail})"


def buildable_corpus_plans(cap=1024):
    out = {}
    for name in PLAN_NAMES:
        if name == "adversarial":
            continue
        plan = corpus_plan(name)
        depth = max(n for n in range(1, plan.depth + 1) if prod(plan.widths[:n]) <= cap)
        out[name] = (plan, depth)
    return out


def test_criterion_1_fixture_fidelity():
    with criterion(1, "reference patterns and the 16 x 16 level-2 set") as notes:
        plan = corpus_plan("supermixed16")
        reference = [plan.collection(1).members[0], *plan.collection(2).members]
        for p in reference:
            assert p.width == 4
            assert validate_labyrinth_pattern(p).ok
            assert is_horizontally_blocked(p) and is_vertically_blocked(p)
        exits = {find_exits(p)[1] for p in plan.collection(2).members}
        assert len(exits) == 1
        assert validate_collection_consistency(plan).ok
        s = build_to_level(plan, 2)
        assert s.grid.rows() == W2_ROWS
        assert validate_labyrinth_pattern(s.grid).ok
        r, c = exits.pop()
        notes.append(f"3 patterns, shared exits (r,c)=({r},{c}), 256 cells match")


def test_criterion_2_matrix_recursion():
    with criterion(2, "path matrix recursion on random plans") as notes:
        rng = np.random.default_rng(20260101)
        checked = 0
        supermixed = 0
        for _ in range(N_RANDOM):
            plan = random_plan(rng, depth=int(rng.integers(2, 4)), widths=(3, 4, 5, 6), max_members=3, grid_cap=216)
            sets = [build_to_level(plan, n) for n in range(1, plan.depth + 1)]
            for a, b in zip(sets, sets[1:]):
                col, rule = plan.collection(b.level), plan.rule(b.level)
                Qs = counting_matrices(a, col, rule)
                report = verify_recursion(path_matrix(a.grid), Qs, col.members, path_matrix(b.grid))
                assert report.ok, report.format()
                checked += 1
            supermixed += not plan.is_mixed
        notes.append(f"{N_RANDOM} plans ({supermixed} supermixed), {checked} level pairs")


def test_criterion_3_reduced_product():
    with criterion(3, "reduced product for mixed blocked plans") as notes:
        rng = np.random.default_rng(20260202)
        for _ in range(N_RANDOM):
            plan = random_plan(rng, depth=int(rng.integers(2, 4)), widths=(4, 5, 6), grid_cap=216,
                               blocked=True, mixed=True)
            report = reduced_product_check(plan, plan.depth)
            assert report.ok, report.format()
        pairs = 0
        for _ in range(N_RANDOM):
            m1, m2 = (int(x) for x in rng.integers(4, 9, size=2))
            M1 = path_matrix(random_labyrinth_pattern(m1, rng, blocked=True))
            M2 = path_matrix(random_labyrinth_pattern(m2, rng, blocked=True))
            assert turn_balance_holds(M1)
            assert reduction_is_multiplicative(M1, M2)
            pairs += 1
        # negative control: without the column equalities the fold is not multiplicative
        bad = np.zeros((6, 6), dtype=object)
        bad[0, 4] = 1
        assert not reduction_is_multiplicative(bad, M2)
        notes.append(f"{N_RANDOM} plans, {pairs} blocked matrix pairs, negative control fails as expected")


def test_criterion_4_path_identities():
    with criterion(4, "path intersection and length-sum identity") as notes:
        grids = list(corpus_patterns().values())
        for plan, depth in buildable_corpus_plans().values():
            grids += [build_to_level(plan, n).grid for n in range(1, depth + 1)]
        rng = np.random.default_rng(20260404)
        for _ in range(40):
            plan = random_plan(rng)
            grids.append(build_to_level(plan, plan.depth).grid)
        cases = {"a": 0, "b": 0}
        for g in grids:
            cases[paths_intersection(g).case] += 1
            report = path_length_sum_identity(g)
            assert report.ok, report.format()
        notes.append(f"{len(grids)} grids, intersection case a: {cases['a']}, case b: {cases['b']}")


def test_criterion_5_blocked_inequalities():
    with criterion(5, "blocked-pattern inequality and kappa bound") as notes:
        blocked = blocked_corpus()
        for p in blocked:
            report = blocked_inequality_check(p)
            assert report.ok, report.format()
        assert kappa_bound_check(range(4, 1001), kappa=KAPPA_STAR).ok
        control = kappa_bound_check([4], kappa=KAPPA_STAR + Fraction(1, 100))
        assert not control.ok
        assert "fails at m = 4" in control.checks[-1].detail
        notes.append(f"{len(blocked)} blocked patterns, m in 4..1000, inflated kappa fails at m = 4")


def test_criterion_6_growth():
    with criterion(6, "growth of the constant width-4 blocked plan") as notes:
        g = growth_diagnostics(corpus_plan("start4"), 40)
        assert g.blocked and g.mixed
        assert all(lv.min_entry >= lv.bound for lv in g.levels[:20])
        assert g.bound_holds
        first = g.first_level_exceeding(10)
        assert first is not None and first <= 40
        assert first == START4_V_EXCEEDS_10
        assert g.first_level_exceeding(10, which="bound") == START4_BOUND_EXCEEDS_10
        notes.append(f"bound holds to n = 40, min v_n > 10 first at n = {first}, "
                     f"bound > 10 first at n = {START4_BOUND_EXCEEDS_10}")


def test_criterion_7_known_answers():
    with criterion(7, "self-similar plus pattern") as notes:
        plan = corpus_plan("plus")
        d = box_dimension_estimate(plan, 15)
        assert [lengths[0] for lengths in d.lengths] == [3**n for n in range(1, 16)]
        assert all(x == 1.0 for x in d.series("A"))
        e = exit_coordinates(plan, 15)
        for N, (x, y) in enumerate(zip(e.top_x, e.left_y), 1):
            assert abs(x - Fraction(1, 2)) <= Fraction(1, 3**N)
            assert abs(y - Fraction(1, 2)) <= Fraction(1, 3**N)
        notes.append("A(n) = 3^n and d_n = 1 for n <= 15, exits within 1/3^N of 1/2")


def test_criterion_8_substitution_commutes():
    with criterion(8, "substituted paths equal extracted paths") as notes:
        checked = []
        for name, (plan, depth) in buildable_corpus_plans().items():
            if depth < 3:
                continue
            sets = [build_to_level(plan, n) for n in range(1, 4)]
            for a, b in zip(sets, sets[1:]):
                members = plan.collection(b.level).members
                assigned = b.trace[a.level - 1]
                for kind in PathType:
                    coarse = exit_path(a, kind)
                    chosen = [members[assigned[v.row, v.col]] for v in coarse.squares]
                    assert substitute_path(coarse, chosen) == exit_path(b, kind), (name, b.level, kind)
            checked.append(name)
        assert checked
        notes.append(f"plans {', '.join(checked)} to level 3, all six kinds")


def test_criterion_9_determinism():
    with criterion(9, "byte-identical rebuilds") as notes:
        text = (data_dir() / "supermixed16.plan").read_text().replace(
            "assign map supermixed16.map", "assign random seed=424242")
        random_plan_ = parse_plan(text, base_dir=data_dir())
        plans = {name: corpus_plan(name) for name in ("supermixed16", "mixed-blocked", "stairs")}
        plans["random"] = random_plan_
        for name, plan in plans.items():
            n = min(plan.depth, 3)
            outputs = []
            for _ in range(2):
                s = build_to_level(plan, n)
                outputs.append((format_set(s).encode(), format_trace(s).encode(),
                                render(RenderSpec("set"), s).encode(),
                                render(RenderSpec("path-corridor", kind="A", polyline=True), s).encode()))
            assert outputs[0] == outputs[1], name
        other = build_to_level(random_plan_.with_seed(7), 2)
        assert format_trace(other) != format_trace(build_to_level(random_plan_, 2))
        notes.append(f"{len(plans)} plans, grid, trace and two SVGs each; a different seed changes the trace")
