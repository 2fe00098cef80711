"""Bundled patterns and plans, and random generators for property tests.

Bundled patterns (``data/corpus.pat``):

* ``start4``, ``mix4a``, ``mix4b``: three blocked 4-patterns; ``start4`` followed
  by ``{mix4a, mix4b}`` under ``supermixed16.map`` gives a 16 x 16 supermixed set.
* ``plus``: the 3 x 3 cross.
* ``open4a``, ``open5``, ``open4b``: labyrinth patterns that are neither
  horizontally nor vertically blocked.
* ``stair7a``, ``stair7b``: blocked 7-patterns, mirror images of each other.
* ``blocked8``: a blocked 8-pattern.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .formats import load_plan, parse_patterns
from .pattern import Pattern, find_exits, is_blocked, is_labyrinth_pattern
from .errors import ConsistencyError
from .substitution import AssignmentRule, ConstructionPlan, PatternCollection, PlanLevel, build_to_level, plan_report

PLAN_NAMES = ("supermixed16", "plus", "start4", "mixed-blocked", "stairs", "adversarial")


def data_dir() -> Path:
    return Path(str(resources.files("labyrinth") / "data"))


@lru_cache(maxsize=1)
def corpus_patterns() -> dict[str, Pattern]:
    path = data_dir() / "corpus.pat"
    return {p.name: p for p in parse_patterns(path.read_text(encoding="utf-8"), str(path))}


def corpus_pattern(name: str) -> Pattern:
    return corpus_patterns()[name]


def blocked_corpus() -> list[Pattern]:
    return [p for p in corpus_patterns().values() if p.width >= 4 and is_blocked(p)]


def corpus_plan(name: str, seed: int | None = None) -> ConstructionPlan:
    return load_plan(data_dir() / f"{name}.plan", seed=seed)


def _neighbour_counts(cells: np.ndarray) -> np.ndarray:
    padded = np.pad(cells.astype(np.int8), 1)
    return padded[:-2, 1:-1] + padded[2:, 1:-1] + padded[1:-1, :-2] + padded[1:-1, 2:]


_CORNERS = {"bottom-left": (0, 0), "bottom-right": (0, -1), "top-left": (-1, 0), "top-right": (-1, -1)}
_OPPOSITE = {"bottom-left": "top-right", "top-right": "bottom-left",
             "top-left": "bottom-right", "bottom-right": "top-left"}


def _grow(m: int, rng: np.random.Generator, col: int, row: int, forbidden: frozenset, stop: float) -> np.ndarray | None:
    cells = np.zeros((m, m), dtype=bool)
    targets = [(m - 1, col), (0, col), (row, 0), (row, m - 1)]
    blocked_corner = np.zeros((m, m), dtype=bool)
    for name in forbidden:
        blocked_corner[_CORNERS[name]] = True
    for r, c in targets:
        if blocked_corner[r, c]:
            return None
    cells[m - 1, col] = True
    while True:
        cand = (~cells) & (_neighbour_counts(cells) == 1) & ~blocked_corner
        # keep every other column and row from becoming a second exit pair
        top, bottom = cells[m - 1, :].copy(), cells[0, :].copy()
        left, right = cells[:, 0].copy(), cells[:, m - 1].copy()
        others = np.arange(m) != col
        cand[m - 1, others & bottom] = False
        cand[0, others & top] = False
        others = np.arange(m) != row
        cand[others & right, 0] = False
        cand[others & left, m - 1] = False
        for name, (r, c) in _CORNERS.items():
            if cells[_CORNERS[_OPPOSITE[name]]]:
                cand[r, c] = False
        done = all(cells[r, c] for r, c in targets)
        if done and rng.random() < stop:
            return cells
        options = np.flatnonzero(cand)
        if not len(options):
            return cells if done else None
        cells.flat[rng.choice(options)] = True


def random_labyrinth_pattern(m: int, rng: np.random.Generator, exits: tuple[int, int] | None = None,
                             blocked: bool = False, forbidden_corners=(), name: str = "",
                             max_tries: int = 5000) -> Pattern:
    """A random labyrinth pattern of width ``m`` grown as a tree from its top exit.

    ``exits`` fixes the exit column and exit row as 0-based ``(col, row)``;
    ``forbidden_corners`` names corners that must stay black.
    """
    if m < 3 or (blocked and m < 4):
        raise ValueError(f"no {'blocked ' if blocked else ''}labyrinth patterns of width {m}")
    forbidden = frozenset(forbidden_corners)
    for _ in range(max_tries):
        col, row = exits if exits is not None else (int(rng.integers(m)), int(rng.integers(m)))
        cells = _grow(m, rng, col, row, forbidden, stop=float(rng.uniform(0.02, 0.3)))
        if cells is None:
            continue
        p = Pattern(cells, name)
        if not is_labyrinth_pattern(p):
            continue
        if blocked and not is_blocked(p):
            continue
        return p
    raise RuntimeError(f"no pattern found for m={m}, exits={exits} after {max_tries} tries")


def _white_corners(p: Pattern) -> set[str]:
    return {n for n, rc in _CORNERS.items() if p.cells[rc]}


def random_collection(level: int, m: int, size: int, rng: np.random.Generator, blocked: bool = False) -> PatternCollection:
    """``size`` members sharing width, exit positions and corner consistency."""
    first = random_labyrinth_pattern(m, rng, blocked=blocked, name=f"L{level}P1")
    ex, _ = find_exits(first)
    members = [first]
    forbidden = {_OPPOSITE[c] for c in _white_corners(first)}
    while len(members) < size:
        p = random_labyrinth_pattern(m, rng, exits=(ex.top.col, ex.left.row), blocked=blocked,
                                     forbidden_corners=forbidden, name=f"L{level}P{len(members) + 1}")
        members.append(p)
        forbidden |= {_OPPOSITE[c] for c in _white_corners(p)}
    return PatternCollection(level, tuple(members))


def random_plan(rng: np.random.Generator, depth: int | None = None, widths=(3, 4, 5, 6), max_members: int = 3,
                grid_cap: int = 216, blocked: bool = False, mixed: bool = False, max_tries: int = 200) -> ConstructionPlan:
    """A random plan that passes every consistency check and builds to full depth.

    Widths are drawn from ``widths`` with ``prod(widths) <= grid_cap``; rules
    are seeded-random, parity or constant.
    """
    if blocked:
        widths = tuple(w for w in widths if w >= 4)
    for _ in range(max_tries):
        n = depth or int(rng.integers(1, 4))
        ws = [int(rng.choice(widths)) for _ in range(n)]
        if int(np.prod(ws)) > grid_cap:
            continue
        levels = []
        for k, m in enumerate(ws, 1):
            size = 1 if (k == 1 or mixed) else int(rng.integers(1, max_members + 1))
            col = random_collection(k, m, size, rng, blocked=blocked)
            kind = int(rng.integers(3))
            if size == 1 or kind == 0:
                rule = AssignmentRule.constant(int(rng.integers(size)))
            elif kind == 1:
                rule = AssignmentRule.parity(int(rng.integers(size)))
            else:
                rule = AssignmentRule.random(int(rng.integers(1 << 63)))
            levels.append(PlanLevel(col, rule))
        plan = ConstructionPlan(tuple(levels))
        if not plan_report(plan).ok:
            continue
        try:
            build_to_level(plan, n, cap=grid_cap)
        except ConsistencyError:
            continue
        return plan
    raise RuntimeError("could not draw a consistent plan")
