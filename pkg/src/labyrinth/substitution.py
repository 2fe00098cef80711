"""Pattern collections, assignment rules and construction of labyrinth sets.

A :class:`ConstructionPlan` lists, for levels ``k = 1..N``, a collection of
labyrinth patterns of common width ``m_k`` and a rule choosing, for every white
square of the level-``(k-1)`` set, which member refines it.  Level 1 always
holds a single pattern, which is the level-1 set itself.

Member indices are 0-based in the Python API and 1-based in text files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Mapping, Sequence

import numpy as np

from .errors import ConsistencyError, GridCapError
from .pattern import (
    Pattern,
    SquareIndex,
    find_exits,
    grid_is_tree,
    is_labyrinth_pattern,
    validate_labyrinth_pattern,
)
from .report import Report

DEFAULT_GRID_CAP = 4096

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(x: np.ndarray) -> np.ndarray:
    """One SplitMix64 step applied elementwise: ``mix(x + golden)`` modulo 2**64.

    ``splitmix64(0)`` is ``0xE220A8397B1DCDAF``, the first output of the
    reference generator seeded with 0.
    """
    z = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = z + np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def random_member_indices(seed: int, level: int, cols, rows, n_members: int) -> np.ndarray:
    """Stateless per-square draw: ``h(h(h(seed ^ level) ^ col) ^ row) mod s``.

    Each square's choice depends only on ``(seed, level, col, row)``, so the
    result is independent of traversal order and platform.
    """
    cols = np.atleast_1d(np.asarray(cols, dtype=np.uint64))
    rows = np.atleast_1d(np.asarray(rows, dtype=np.uint64))
    h = splitmix64(np.uint64((seed ^ level) & _MASK64))
    h = splitmix64(h ^ cols)
    h = splitmix64(h ^ rows)
    return (h % np.uint64(n_members)).astype(np.int64)


@dataclass(frozen=True)
class PatternCollection:
    level: int
    members: tuple[Pattern, ...]

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if self.level < 1:
            raise ValueError(f"levels start at 1, got {self.level}")
        if not members:
            raise ValueError(f"level {self.level}: a collection needs at least one pattern")
        if self.level == 1 and len(members) != 1:
            raise ValueError("the level-1 collection must hold exactly one pattern")

    @property
    def width(self) -> int:
        return self.members[0].width

    def __len__(self) -> int:
        return len(self.members)

    def index_of(self, name: str) -> int:
        for i, p in enumerate(self.members):
            if p.name == name:
                return i
        raise KeyError(f"level {self.level} has no pattern named {name!r}")


@dataclass(frozen=True, eq=False)
class AssignmentRule:
    """Chooses a collection member for every white square of the previous level.

    Build instances with :meth:`constant`, :meth:`explicit`, :meth:`parity`
    or :meth:`random`.
    """

    kind: str
    member: int = 0
    mapping: Mapping[tuple[int, int], int] = field(default_factory=dict)
    offset: int = 0
    seed: int = 0

    KINDS = ("constant", "map", "parity", "random")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown assignment kind {self.kind!r}")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @classmethod
    def constant(cls, member: int = 0) -> "AssignmentRule":
        return cls("constant", member=member)

    @classmethod
    def explicit(cls, mapping: Mapping[tuple[int, int], int]) -> "AssignmentRule":
        return cls("map", mapping={(int(c), int(r)): int(h) for (c, r), h in mapping.items()})

    @classmethod
    def parity(cls, offset: int = 0) -> "AssignmentRule":
        return cls("parity", offset=offset)

    @classmethod
    def random(cls, seed: int) -> "AssignmentRule":
        return cls("random", seed=seed)

    def with_seed(self, seed: int) -> "AssignmentRule":
        if self.kind != "random":
            return self
        return AssignmentRule.random(seed)

    def assign(self, level: int, cols, rows, n_members: int) -> np.ndarray:
        """Member index (0-based) for each square ``(cols[i], rows[i])`` of level ``level - 1``."""
        try:
            cols = np.asarray(cols, dtype=np.int64)
            rows = np.asarray(rows, dtype=np.int64)
        except OverflowError:
            # levels deep enough that coordinates pass 2**63
            cols = np.array([int(c) for c in cols], dtype=object)
            rows = np.array([int(r) for r in rows], dtype=object)
        if self.kind == "constant":
            out = np.full(cols.shape, self.member, dtype=np.int64)
        elif self.kind == "parity":
            out = ((cols + rows + self.offset) % n_members).astype(np.int64)
        elif self.kind == "random":
            if cols.dtype == object:
                cols = np.array([c & _MASK64 for c in cols], dtype=np.uint64)
                rows = np.array([r & _MASK64 for r in rows], dtype=np.uint64)
            out = random_member_indices(self.seed, level, cols, rows, n_members).reshape(cols.shape)
        else:
            try:
                out = np.array([self.mapping[(int(c), int(r))] for c, r in zip(cols, rows)], dtype=np.int64)
            except KeyError as err:
                raise ConsistencyError(
                    f"level {level}: assignment map does not cover square {err.args[0]}"
                ) from None
        bad = (out < 0) | (out >= n_members)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise ConsistencyError(
                f"level {level}: member index {int(out[i]) + 1} out of range 1..{n_members} "
                f"at square ({int(cols[i])}, {int(rows[i])})"
            )
        return out

    def describe(self) -> str:
        if self.kind == "constant":
            return f"constant {self.member + 1}"
        if self.kind == "parity":
            return f"parity {self.offset}"
        if self.kind == "random":
            return f"random seed={self.seed}"
        return f"map ({len(self.mapping)} squares)"


@dataclass(frozen=True)
class PlanLevel:
    collection: PatternCollection
    rule: AssignmentRule


@dataclass(frozen=True)
class ConstructionPlan:
    levels: tuple[PlanLevel, ...]

    def __post_init__(self):
        levels = tuple(self.levels)
        object.__setattr__(self, "levels", levels)
        if not levels:
            raise ValueError("a plan needs at least one level")
        for k, lv in enumerate(levels, 1):
            if lv.collection.level != k:
                raise ValueError(f"plan entry {k} holds a collection for level {lv.collection.level}")

    @classmethod
    def from_collections(cls, collections: Sequence[Sequence[Pattern]], rules: Sequence[AssignmentRule] | None = None):
        """``collections[k-1]`` are the members of level ``k``; rules default to constant 0."""
        if rules is None:
            rules = [AssignmentRule.constant(0)] * len(collections)
        return cls(tuple(
            PlanLevel(PatternCollection(k, tuple(ms)), rule)
            for k, (ms, rule) in enumerate(zip(collections, rules), 1)
        ))

    @classmethod
    def mixed(cls, patterns: Sequence[Pattern]) -> "ConstructionPlan":
        return cls.from_collections([[p] for p in patterns])

    @classmethod
    def self_similar(cls, pattern: Pattern, depth: int) -> "ConstructionPlan":
        return cls.mixed([pattern] * depth)

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def widths(self) -> tuple[int, ...]:
        return tuple(lv.collection.width for lv in self.levels)

    @property
    def is_mixed(self) -> bool:
        return all(len(lv.collection) == 1 for lv in self.levels)

    def collection(self, k: int) -> PatternCollection:
        return self.levels[k - 1].collection

    def rule(self, k: int) -> AssignmentRule:
        return self.levels[k - 1].rule

    def truncated(self, n: int) -> "ConstructionPlan":
        return ConstructionPlan(self.levels[:n])

    def with_seed(self, seed: int) -> "ConstructionPlan":
        return ConstructionPlan(tuple(PlanLevel(lv.collection, lv.rule.with_seed(seed)) for lv in self.levels))


@dataclass(frozen=True, eq=False)
class LabyrinthSet:
    """The level-``n`` set of white squares, with the choices that produced it.

    ``trace[k-1]`` is an ``m(k) x m(k)`` integer array indexed ``[row, col]``
    giving the member of level ``k + 1`` chosen for each white square of the
    level-``k`` set, and ``-1`` on black squares.
    """

    level: int
    widths: tuple[int, ...]
    grid: Pattern
    trace: tuple[np.ndarray, ...] = ()
    verified: bool = True

    @property
    def width(self) -> int:
        return self.grid.width


def _corner_flags(p: Pattern) -> dict[str, bool]:
    c = p.cells
    return {"bottom-left": bool(c[0, 0]), "bottom-right": bool(c[0, -1]),
            "top-left": bool(c[-1, 0]), "top-right": bool(c[-1, -1])}


_OPPOSITE = (("bottom-left", "top-right"), ("top-left", "bottom-right"))


def validate_collection_consistency(plan: ConstructionPlan) -> Report:
    """Per-level checks: members are labyrinth patterns sharing width and
    exit positions, and no two members have white squares at diagonally
    opposite corners."""
    report = Report("plan collections")
    for lv in plan.levels:
        col = lv.collection
        k = col.level
        names = [p.name or f"#{i + 1}" for i, p in enumerate(col.members)]
        invalid = [n for n, p in zip(names, col.members) if not is_labyrinth_pattern(p)]
        report.add(f"level {k}: labyrinth patterns", not invalid,
                   f"not labyrinth patterns: {', '.join(invalid)}" if invalid else "")
        if invalid:
            continue
        sigs = {}
        for n, p in zip(names, col.members):
            _, pos = find_exits(p)
            sigs.setdefault((p.width, pos.r, pos.c), []).append(n)
        exits_ok = len(sigs) == 1
        detail = "; ".join(f"{', '.join(ns)}: width {w}, (r,c)=({r},{c})" for (w, r, c), ns in sigs.items())
        report.add(f"level {k}: exits consistency", exits_ok, "" if exits_ok else detail)

        flags = [_corner_flags(p) for p in col.members]
        clashes = []
        for a, b in _OPPOSITE:
            with_a = [n for n, f in zip(names, flags) if f[a]]
            with_b = [n for n, f in zip(names, flags) if f[b]]
            if with_a and with_b:
                clashes.append(f"{a} in {', '.join(with_a)} vs {b} in {', '.join(with_b)}")
        report.add(f"level {k}: corner consistency", not clashes, "; ".join(clashes))
    return report


def exit_squares(plan: ConstructionPlan, n: int) -> dict[str, SquareIndex]:
    """Exit squares of the level-``n`` set, computed from the exit positions alone."""
    col = row = 0
    for k in range(1, n + 1):
        p = plan.collection(k).members[0]
        ex, _ = find_exits(p)
        col = col * p.width + ex.top.col
        row = row * p.width + ex.left.row
    w = prod(plan.widths[:n])
    return {"top": SquareIndex(col, w - 1), "bottom": SquareIndex(col, 0),
            "left": SquareIndex(0, row), "right": SquareIndex(w - 1, row)}


def check_exit_line_compatibility(plan: ConstructionPlan, n: int) -> Report:
    """The members refining opposite exit squares must not open a second exit pair.

    For each level ``k``, the top row of the member placed on the top exit
    square and the bottom row of the member placed on the bottom exit square
    may share only the exit column; likewise for the left and right exits and
    the exit row.  Neighbouring squares are covered by pairwise tree
    consistency, but these two pairs are not neighbours, and without this
    condition the composed set can have several exit pairs.
    """
    report = Report("exit-line compatibility")
    for k in range(2, n + 1):
        col = plan.collection(k)
        if len(col) == 1:
            continue
        rule = plan.rule(k)
        ex = exit_squares(plan, k - 1)
        m = col.width
        sq = [ex["top"], ex["bottom"], ex["left"], ex["right"]]
        h = rule.assign(k, [s.col for s in sq], [s.row for s in sq], len(col))
        top, bottom, left, right = (col.members[int(i)] for i in h)
        own, _ = find_exits(col.members[0])
        shared_cols = [int(x) for x in np.flatnonzero(top.cells[m - 1, :] & bottom.cells[0, :])]
        shared_rows = [int(x) for x in np.flatnonzero(left.cells[:, 0] & right.cells[:, m - 1])]
        report.add(f"level {k}: vertical exit pair", shared_cols == [own.top.col],
                   f"top and bottom rows share columns {shared_cols}")
        report.add(f"level {k}: horizontal exit pair", shared_rows == [own.left.row],
                   f"left and right columns share rows {shared_rows}")
    return report


def initial_set(plan: ConstructionPlan) -> LabyrinthSet:
    first = plan.collection(1).members[0]
    return LabyrinthSet(1, (first.width,), first.renamed("W1"), ())


def compose_level(current: LabyrinthSet, collection: PatternCollection, rule: AssignmentRule) -> LabyrinthSet:
    """Refine every white square of ``current`` by the member ``rule`` picks for it."""
    if collection.level != current.level + 1:
        raise ValueError(f"cannot apply a level-{collection.level} collection to a level-{current.level} set")
    widths = {p.width for p in collection.members}
    if len(widths) != 1:
        raise ConsistencyError(f"level {collection.level}: members have widths {sorted(widths)}")
    m = collection.width
    parent = current.grid.cells
    rows, cols = np.nonzero(parent)
    choice = rule.assign(collection.level, cols, rows, len(collection))
    assigned = np.full(parent.shape, -1, dtype=np.int16)
    assigned[rows, cols] = choice
    cells = np.zeros((parent.shape[0] * m, parent.shape[1] * m), dtype=bool)
    for h, member in enumerate(collection.members):
        mask = assigned == h
        if mask.any():
            cells |= np.kron(mask, member.cells).astype(bool)
    assigned.setflags(write=False)
    n = current.level + 1
    return LabyrinthSet(n, current.widths + (m,), Pattern(cells, f"W{n}"), current.trace + (assigned,), current.verified)


def check_pairwise_tree_consistency(s: LabyrinthSet, members: Sequence[Pattern] | None = None) -> Report:
    """For each pair of neighbouring level-``(n-1)`` squares, the level-``n``
    squares inside the two of them must induce a tree.

    Each block is a copy of a member pattern, so the pair induces a tree
    exactly when both members are trees and one edge crosses the shared side.
    """
    if s.level < 2:
        raise ValueError("pairwise tree consistency needs a set of level >= 2")
    report = Report(f"pairwise tree consistency of level {s.level}")
    m = s.widths[-1]
    assigned = s.trace[-1]
    parent = assigned >= 0
    if members is not None:
        non_trees = {h for h, p in enumerate(members) if not grid_is_tree(p.cells)}
    else:
        non_trees = set()
    g = s.grid.cells
    M = parent.shape[0]

    # horizontal neighbours (C, R) ~ (C+1, R)
    right = g[:, m - 1::m]
    left = g[:, 0::m]
    h_count = (right[:, :-1] & left[:, 1:]).reshape(M, m, M - 1).sum(axis=1)
    h_pair = parent[:, :-1] & parent[:, 1:]
    # vertical neighbours (C, R) ~ (C, R+1)
    top = g[m - 1::m, :]
    bottom = g[0::m, :]
    v_count = (top[:-1, :] & bottom[1:, :]).reshape(M - 1, M, m).sum(axis=2)
    v_pair = parent[:-1, :] & parent[1:, :]

    bad = []
    for R, C in zip(*np.nonzero(h_pair & (h_count != 1))):
        bad.append(f"({C},{R})-({C + 1},{R}): {h_count[R, C]} crossing edges")
    for R, C in zip(*np.nonzero(v_pair & (v_count != 1))):
        bad.append(f"({C},{R})-({C},{R + 1}): {v_count[R, C]} crossing edges")
    if non_trees:
        for R, C in zip(*np.nonzero(h_pair)):
            if assigned[R, C] in non_trees or assigned[R, C + 1] in non_trees:
                bad.append(f"({C},{R})-({C + 1},{R}): refined by a non-tree pattern")
        for R, C in zip(*np.nonzero(v_pair)):
            if assigned[R, C] in non_trees or assigned[R + 1, C] in non_trees:
                bad.append(f"({C},{R})-({C},{R + 1}): refined by a non-tree pattern")
    n_pairs = int(h_pair.sum() + v_pair.sum())
    report.add("neighbour pairs induce trees", not bad,
               "; ".join(bad[:20]) + (f" (+{len(bad) - 20} more)" if len(bad) > 20 else "")
               if bad else f"{n_pairs} pairs checked")
    return report


def validate_pairwise_tree_consistency(s: LabyrinthSet, plan: ConstructionPlan | None = None) -> Report:
    members = plan.collection(s.level).members if plan is not None else None
    return check_pairwise_tree_consistency(s, members)


def plan_report(plan: ConstructionPlan, n: int | None = None) -> Report:
    """Collection consistency plus exit-line compatibility for the first ``n`` levels."""
    sub = plan.truncated(n or plan.depth)
    report = validate_collection_consistency(sub)
    if report.ok:
        report.extend(check_exit_line_compatibility(sub, sub.depth))
    return report


def build_to_level(plan: ConstructionPlan, n: int, cap: int = DEFAULT_GRID_CAP, force: bool = False) -> LabyrinthSet:
    """Fold :func:`compose_level` over the first ``n`` levels of ``plan``.

    Unless ``force`` is set, a plan failing the collection checks or a level
    failing pairwise tree consistency raises :class:`ConsistencyError`.  With
    ``force`` the set is built anyway and ``verified`` records the outcome.
    """
    if not 1 <= n <= plan.depth:
        raise ValueError(f"level {n} outside 1..{plan.depth}")
    width = prod(plan.widths[:n])
    if width > cap:
        raise GridCapError(f"level {n} needs a {width}x{width} grid, cap is {cap}")
    sub = plan.truncated(n)
    report = plan_report(sub)
    if not report.ok and not force:
        raise ConsistencyError("plan fails collection consistency:\n" + report.format(), report)
    s = initial_set(sub)
    verified = report.ok
    for k in range(2, n + 1):
        s = compose_level(s, sub.collection(k), sub.rule(k))
        tree_report = validate_pairwise_tree_consistency(s, sub)
        if not tree_report.ok:
            if not force:
                raise ConsistencyError(tree_report.format(), tree_report)
            verified = False
    if force:
        verified = verified and validate_labyrinth_pattern(s.grid).ok
    return LabyrinthSet(s.level, s.widths, s.grid, s.trace, verified)


def assignment_of(s: LabyrinthSet, level: int, square: SquareIndex | tuple[int, int]) -> int:
    """Member of level ``level + 1`` chosen for a white square of level ``level``."""
    col, row = square
    return int(s.trace[level - 1][row, col])
