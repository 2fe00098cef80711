"""Exit-to-exit paths, square types, path matrices and counting matrices.

The six path kinds join pairs of exits::

    A top-bottom   B left-right   C top-right
    D right-bottom E bottom-left  F left-top

A square on a path gets the kind whose two sides are the sides on which its
path neighbours lie.  An exit square at the end of a path counts the outside
of its exit side as a neighbour.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import breadth_first_order

from .errors import ConsistencyError, InvalidPatternError, InvariantViolation
from .pattern import Pattern, SquareIndex, find_exits, require_labyrinth
from .report import Report
from .substitution import AssignmentRule, ConstructionPlan, LabyrinthSet, PatternCollection, plan_report

SIDES = ("top", "bottom", "left", "right")
_TOP, _BOTTOM, _LEFT, _RIGHT = range(4)
_SIDE_CODE = {name: i for i, name in enumerate(SIDES)}
# (dcol, drow) towards the neighbour on each side
_SIDE_STEP = {_TOP: (0, 1), _BOTTOM: (0, -1), _LEFT: (-1, 0), _RIGHT: (1, 0)}


class PathType(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"

    @property
    def sides(self) -> tuple[str, str]:
        """Start and end exit of the stored orientation."""
        return _KIND_SIDES[self]

    @property
    def index(self) -> int:
        return "ABCDEF".index(self.value)


KINDS = tuple(PathType)
_KIND_SIDES = {
    PathType.A: ("top", "bottom"),
    PathType.B: ("left", "right"),
    PathType.C: ("top", "right"),
    PathType.D: ("right", "bottom"),
    PathType.E: ("bottom", "left"),
    PathType.F: ("left", "top"),
}
_TYPE_TABLE = np.full((4, 4), -1, dtype=np.int8)
for _k, (_a, _b) in _KIND_SIDES.items():
    _TYPE_TABLE[_SIDE_CODE[_a], _SIDE_CODE[_b]] = _k.index
    _TYPE_TABLE[_SIDE_CODE[_b], _SIDE_CODE[_a]] = _k.index


def kind_for_exits(a: str, b: str) -> tuple[PathType, bool]:
    """Kind joining exits ``a`` and ``b``, and whether ``a -> b`` is the stored orientation."""
    for kind, (s, e) in _KIND_SIDES.items():
        if (s, e) == (a, b):
            return kind, True
        if (e, s) == (a, b):
            return kind, False
    raise ValueError(f"no path kind joins exits {a!r} and {b!r}")


@dataclass(frozen=True, eq=False)
class TypedPath:
    """A path of squares with the type of each square within the path.

    Coordinates and type codes are kept as integer arrays; ``squares`` and
    ``types`` give the list views.
    """

    kind: PathType
    cols: np.ndarray
    rows: np.ndarray
    codes: np.ndarray

    def __len__(self) -> int:
        return len(self.cols)

    @property
    def squares(self) -> list[SquareIndex]:
        return [SquareIndex(int(c), int(r)) for c, r in zip(self.cols, self.rows)]

    @property
    def types(self) -> list[PathType]:
        return [KINDS[i] for i in self.codes]

    def type_counts(self) -> list[int]:
        return [int(x) for x in np.bincount(self.codes, minlength=6)]

    def reversed(self) -> "TypedPath":
        return TypedPath(self.kind, self.cols[::-1], self.rows[::-1], self.codes[::-1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, TypedPath):
            return NotImplemented
        return (self.kind == other.kind and np.array_equal(self.cols, other.cols)
                and np.array_equal(self.rows, other.rows) and np.array_equal(self.codes, other.codes))

    def __repr__(self) -> str:
        return f"TypedPath(kind={self.kind.value}, length={len(self)})"


def _grid_of(p) -> Pattern:
    return p.grid if isinstance(p, LabyrinthSet) else p


@lru_cache(maxsize=32)
def _adjacency(p: Pattern):
    cells = p.cells
    m = p.width
    flat = cells.ravel()
    whites = np.flatnonzero(flat)
    index = np.full(m * m, -1, dtype=np.int64)
    index[whites] = np.arange(len(whites))
    pos = np.arange(m * m).reshape(m, m)
    h = cells[:, :-1] & cells[:, 1:]
    v = cells[:-1, :] & cells[1:, :]
    src = np.concatenate([pos[:, :-1][h], pos[:-1, :][v]])
    dst = np.concatenate([pos[:, 1:][h], pos[1:, :][v]])
    n = len(whites)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (index[src], index[dst])), shape=(n, n)).tocsr()
    return index, whites, graph


@lru_cache(maxsize=64)
def _bfs_predecessors(p: Pattern, root: int) -> np.ndarray:
    index, _, graph = _adjacency(p)
    _, pred = breadth_first_order(graph, int(index[root]), directed=False, return_predecessors=True)
    return pred


def tree_path(p: Pattern | LabyrinthSet, a: SquareIndex, b: SquareIndex) -> list[SquareIndex]:
    """The unique path between two white squares of a tree pattern, ``a`` first."""
    grid = _grid_of(p)
    cols, rows = _tree_path_arrays(grid, a, b)
    return [SquareIndex(int(c), int(r)) for c, r in zip(cols, rows)]


def _tree_path_arrays(grid: Pattern, a, b) -> tuple[np.ndarray, np.ndarray]:
    m = grid.width
    if not (grid.is_white(*a) and grid.is_white(*b)):
        raise ValueError("both endpoints must be white squares")
    index, whites, _ = _adjacency(grid)
    pred = _bfs_predecessors(grid, a[1] * m + a[0])
    node = int(index[b[1] * m + b[0]])
    start = int(index[a[1] * m + a[0]])
    chain = [node]
    while node != start:
        node = int(pred[node])
        if node < 0:
            raise InvalidPatternError(f"no path from {tuple(a)} to {tuple(b)}")
        chain.append(node)
    flat = whites[np.array(chain[::-1], dtype=np.int64)]
    return flat % m, flat // m


def _sides_towards(dc: np.ndarray, dr: np.ndarray) -> np.ndarray:
    out = np.full(dc.shape, -1, dtype=np.int8)
    out[(dc == 0) & (dr == 1)] = _TOP
    out[(dc == 0) & (dr == -1)] = _BOTTOM
    out[(dc == -1) & (dr == 0)] = _LEFT
    out[(dc == 1) & (dr == 0)] = _RIGHT
    return out


def _entry_exit_sides(cols, rows, start: int, end: int) -> tuple[np.ndarray, np.ndarray]:
    n = len(cols)
    before = np.empty(n, dtype=np.int8)
    after = np.empty(n, dtype=np.int8)
    before[0] = start
    after[-1] = end
    if n > 1:
        dc = np.diff(cols)
        dr = np.diff(rows)
        fwd = _sides_towards(dc, dr)
        if (fwd < 0).any():
            raise InvariantViolation("consecutive path squares are not side-adjacent")
        after[:-1] = fwd
        before[1:] = _sides_towards(-dc, -dr)
    return before, after


def type_codes(cols, rows, start: str, end: str) -> np.ndarray:
    """Type code of every square of a path leaving through ``start`` and ``end`` sides."""
    before, after = _entry_exit_sides(np.asarray(cols), np.asarray(rows), _SIDE_CODE[start], _SIDE_CODE[end])
    codes = _TYPE_TABLE[before, after]
    if (codes < 0).any():
        raise InvariantViolation("a path square has both neighbours on one side")
    return codes


def exit_path(p: Pattern | LabyrinthSet, kind: PathType | str) -> TypedPath:
    return exit_paths(_grid_of(p))[PathType(kind)]


@lru_cache(maxsize=64)
def exit_paths(p: Pattern) -> dict[PathType, TypedPath]:
    """The six typed exit paths of a labyrinth pattern (or set grid)."""
    p = _grid_of(p)
    require_labyrinth(p)
    exits, _ = find_exits(p)
    out = {}
    for kind in KINDS:
        s, e = kind.sides
        a, b = getattr(exits, s), getattr(exits, e)
        cols, rows = _tree_path_arrays(p, a, b)
        if len(cols) < 2:
            raise InvalidPatternError(f"{kind.value}-path is a single square")
        out[kind] = TypedPath(kind, cols, rows, type_codes(cols, rows, s, e))
    return out


def int_matrix(rows) -> np.ndarray:
    """Exact integer matrix (numpy object array of Python ints)."""
    a = np.array(rows, dtype=object)
    return np.vectorize(int, otypes=[object])(a) if a.size else a


def identity(n: int = 6) -> np.ndarray:
    return int_matrix(np.eye(n, dtype=int))


def matrix_from_paths(paths: dict[PathType, TypedPath]) -> np.ndarray:
    return int_matrix([paths[k].type_counts() for k in KINDS])


def path_matrix(p: Pattern | LabyrinthSet) -> np.ndarray:
    """Entry ``(i, j)``: number of type-``j`` squares on the path of kind ``i``."""
    return matrix_from_paths(exit_paths(_grid_of(p)))


def path_lengths(M: np.ndarray) -> list[int]:
    return [int(x) for x in M.dot(np.ones(M.shape[1], dtype=object))]


@dataclass(frozen=True, eq=False)
class CountingMatrix:
    """Counts of type-``j`` squares on path ``i`` of level ``level`` refined by ``member`` (0-based)."""

    level: int
    member: int
    entries: np.ndarray


def identity_counting_matrix() -> CountingMatrix:
    return CountingMatrix(0, 0, identity())


def counting_matrices_from_paths(paths: dict[PathType, TypedPath], rule: AssignmentRule,
                                 next_level: int, n_members: int, level: int | None = None) -> list[CountingMatrix]:
    q = np.zeros((n_members, 6, 6), dtype=np.int64)
    for i, kind in enumerate(KINDS):
        path = paths[kind]
        choice = rule.assign(next_level, path.cols, path.rows, n_members)
        np.add.at(q, (choice, i, path.codes), 1)
    lvl = next_level - 1 if level is None else level
    return [CountingMatrix(lvl, h, int_matrix(q[h])) for h in range(n_members)]


def counting_matrices(s: LabyrinthSet, next_collection: PatternCollection, rule: AssignmentRule) -> list[CountingMatrix]:
    """One matrix per member ``h`` of the next collection, in member order."""
    if next_collection.level != s.level + 1:
        raise ValueError(f"collection of level {next_collection.level} does not follow a level-{s.level} set")
    return counting_matrices_from_paths(exit_paths(s.grid), rule, next_collection.level, len(next_collection), s.level)


def _entries(x) -> np.ndarray:
    return x.entries if isinstance(x, CountingMatrix) else x


def _matrix_sum(items) -> np.ndarray:
    total = int_matrix(np.zeros((6, 6), dtype=int))
    for x in items:
        total = total + x
    return total


def _diff_detail(left: np.ndarray, right: np.ndarray) -> str:
    diffs = [f"({KINDS[i].value},{KINDS[j].value}): {left[i, j]} != {right[i, j]}"
             for i in range(left.shape[0]) for j in range(left.shape[1]) if left[i, j] != right[i, j]]
    return "; ".join(diffs)


def verify_recursion(M_n: np.ndarray, Qs: Sequence, members: Sequence, M_next: np.ndarray) -> Report:
    """Check ``M(n) = sum_h Q(n,h)`` and ``M(n+1) = sum_h Q(n,h) M(n+1,h)`` exactly.

    ``members`` are the path matrices of the next collection (or the patterns
    themselves).
    """
    Qs = [_entries(q) for q in Qs]
    Ms = [path_matrix(x) if isinstance(x, Pattern) else x for x in members]
    if len(Qs) != len(Ms):
        raise ValueError(f"{len(Qs)} counting matrices for {len(Ms)} members")
    report = Report("path matrix recursion")
    total = _matrix_sum(Qs)
    same = bool((total == M_n).all())
    report.add("M(n) = sum_h Q(n,h)", same, "" if same else _diff_detail(total, M_n))
    predicted = _matrix_sum(q.dot(m) for q, m in zip(Qs, Ms))
    same = bool((predicted == M_next).all())
    report.add("M(n+1) = sum_h Q(n,h) M(n+1,h)", same, "" if same else _diff_detail(predicted, M_next))
    return report


def verify_counting_chain(Q_prev: Sequence, members: Sequence, Q_next: Sequence) -> Report:
    """Check ``sum_h Q(n,h) = sum_h Q(n-1,h) M(n,h)``; use ``[identity_counting_matrix()]`` for n = 1."""
    Ms = [path_matrix(x) if isinstance(x, Pattern) else x for x in members]
    lhs = _matrix_sum(_entries(q) for q in Q_next)
    rhs = _matrix_sum(_entries(q).dot(m) for q, m in zip(Q_prev, Ms))
    report = Report("counting matrix chain")
    same = bool((lhs == rhs).all())
    report.add("sum_h Q(n,h) = sum_h Q(n-1,h) M(n,h)", same, "" if same else _diff_detail(lhs, rhs))
    return report


def _substitute(path: TypedPath, members: Sequence[Pattern], choice: np.ndarray) -> TypedPath:
    widths = {p.width for p in members}
    if len(widths) != 1:
        raise ConsistencyError(f"substituted patterns have widths {sorted(widths)}")
    m = widths.pop()
    n = len(path)
    choice = np.asarray(choice, dtype=np.int64)
    if choice.shape != (n,):
        raise ValueError("need one member choice per path square")
    start, _ = path.kind.sides
    before, _ = _entry_exit_sides(path.cols, path.rows, _SIDE_CODE[start], _SIDE_CODE[path.kind.sides[1]])
    stored_start = np.array([_SIDE_CODE[KINDS[c].sides[0]] for c in range(6)], dtype=np.int8)
    flip = before != stored_start[path.codes]

    sub = {h: exit_paths(p) for h, p in enumerate(members) if (choice == h).any()}
    lengths = np.zeros(n, dtype=np.int64)
    for h, paths in sub.items():
        sel = choice == h
        table = np.array([len(paths[k]) for k in KINDS], dtype=np.int64)
        lengths[sel] = table[path.codes[sel]]
    offsets = np.concatenate([[0], np.cumsum(lengths)])
    total = int(offsets[-1])
    cols = np.empty(total, dtype=np.int64)
    rows = np.empty(total, dtype=np.int64)
    codes = np.empty(total, dtype=np.int8)
    for h, paths in sub.items():
        for t in range(6):
            for f in (False, True):
                idx = np.flatnonzero((choice == h) & (path.codes == t) & (flip == f))
                if not len(idx):
                    continue
                sp = paths[KINDS[t]]
                if f:
                    sp = sp.reversed()
                L = len(sp)
                pos = offsets[idx][:, None] + np.arange(L)[None, :]
                cols[pos] = path.cols[idx][:, None] * m + sp.cols[None, :]
                rows[pos] = path.rows[idx][:, None] * m + sp.rows[None, :]
                codes[pos] = sp.codes[None, :]
    if total > 1:
        step = np.abs(np.diff(cols)) + np.abs(np.diff(rows))
        if (step != 1).any():
            i = int(np.flatnonzero(step != 1)[0])
            raise ConsistencyError(
                f"sub-paths do not meet at a seam near ({cols[i]}, {rows[i]}); exit positions differ")
    return TypedPath(path.kind, cols, rows, codes)


def substitute_path(path: TypedPath, patterns: Sequence[Pattern]) -> TypedPath:
    """Replace each type-``j`` square by the ``j``-path of the pattern refining it.

    ``patterns[i]`` is the pattern assigned to the ``i``-th square of ``path``.
    Sub-paths are traversed in the direction of ``path``.
    """
    if len(patterns) != len(path):
        raise ValueError(f"{len(patterns)} patterns for a path of {len(path)} squares")
    distinct: list[Pattern] = []
    choice = np.empty(len(path), dtype=np.int64)
    for i, p in enumerate(patterns):
        for h, q in enumerate(distinct):
            if q is p or q == p:
                break
        else:
            distinct.append(p)
            h = len(distinct) - 1
        choice[i] = h
    return _substitute(path, distinct, choice)


def iterate_level_paths(plan: ConstructionPlan, n: int, max_squares: int = 20_000_000
                        ) -> Iterator[tuple[int, dict[PathType, TypedPath]]]:
    """Yield ``(k, paths)`` for ``k = 1..n`` without building any grid.

    Each level's six paths come from substituting the previous level's paths;
    only the squares on the paths are ever visited.  Pairwise tree
    consistency away from the paths is not checked here.
    """
    report = plan_report(plan, n)
    if not report.ok:
        raise ConsistencyError("plan fails collection consistency:\n" + report.format(), report)
    paths = exit_paths(plan.collection(1).members[0])
    yield 1, paths
    for k in range(2, n + 1):
        col = plan.collection(k)
        rule = plan.rule(k)
        new = {}
        for kind, path in paths.items():
            choice = rule.assign(k, path.cols, path.rows, len(col))
            new[kind] = _substitute(path, col.members, choice)
        if sum(len(p) for p in new.values()) > max_squares:
            raise MemoryError(f"level-{k} paths exceed {max_squares} squares")
        paths = new
        yield k, paths


@dataclass(frozen=True)
class PathIntersection:
    """Squares shared by the A- and B-paths, ordered along the A-path.

    ``case`` is ``"a"`` for a single square and ``"b"`` for a common subpath.
    """

    case: str
    squares: tuple[SquareIndex, ...]


def paths_intersection(p: Pattern | LabyrinthSet) -> PathIntersection:
    paths = exit_paths(_grid_of(p))
    a = paths[PathType.A].squares
    b = paths[PathType.B].squares
    pos_b = {v: i for i, v in enumerate(b)}
    shared_a = [i for i, v in enumerate(a) if v in pos_b]
    if not shared_a:
        raise InvariantViolation("top-bottom and left-right paths do not meet")
    squares = tuple(a[i] for i in shared_a)
    if len(squares) == 1:
        return PathIntersection("a", squares)
    along_b = [pos_b[v] for v in squares]
    contiguous_a = shared_a == list(range(shared_a[0], shared_a[0] + len(shared_a)))
    step = along_b[1] - along_b[0]
    contiguous_b = abs(step) == 1 and all(y - x == step for x, y in zip(along_b, along_b[1:]))
    if not (contiguous_a and contiguous_b):
        raise InvariantViolation("paths share squares that do not form a common subpath")
    return PathIntersection("b", squares)


def path_length_sum_identity(p: Pattern | LabyrinthSet) -> Report:
    """``A + B = max(E + C, F + D)`` on the six exit path lengths."""
    L = {k: len(v) for k, v in exit_paths(_grid_of(p)).items()}
    lhs = L[PathType.A] + L[PathType.B]
    ec = L[PathType.E] + L[PathType.C]
    fd = L[PathType.F] + L[PathType.D]
    report = Report(f"path length sums of {_grid_of(p).name or '<unnamed>'}")
    report.add("A + B = max(E + C, F + D)", lhs == max(ec, fd), f"{lhs} vs max({ec}, {fd})")
    return report


def arc_approximation(s: Pattern | LabyrinthSet, start: str, end: str) -> np.ndarray:
    """Centres of the squares of the path from exit ``start`` to exit ``end``, in the unit square."""
    grid = _grid_of(s)
    kind, forward = kind_for_exits(start, end)
    path = exit_path(grid, kind)
    if not forward:
        path = path.reversed()
    m = grid.width
    return np.column_stack([(path.cols + 0.5) / m, (path.rows + 0.5) / m])


def polyline_length(points: np.ndarray) -> float:
    return float(np.hypot(*np.diff(points, axis=0).T).sum()) if len(points) > 1 else 0.0


def corridor_contains(outer: TypedPath, inner: TypedPath, factor: int) -> bool:
    """Every square of ``inner`` (on a grid ``factor`` times finer) lies in a square of ``outer``."""
    outer_set = set(zip(outer.cols.tolist(), outer.rows.tolist()))
    return all((c // factor, r // factor) in outer_set for c, r in zip(inner.cols.tolist(), inner.rows.tolist()))


def arc_length_lower_bound(k: int, n: int, widths: Sequence[int]) -> Fraction:
    """``(k - 1) / (2 m(n))``: least length of a curve through a path of ``k`` level-``n`` squares."""
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    if len(widths) < n:
        raise ValueError(f"need {n} widths, got {len(widths)}")
    return Fraction(k - 1, 2 * prod(widths[:n]))


def format_matrix(M: np.ndarray) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in M)


def matrix_csv(M: np.ndarray, row_labels: Sequence[str] = "ABCDEF", col_labels: Sequence[str] = "ABCDEF") -> str:
    lines = ["," + ",".join(col_labels)]
    for label, row in zip(row_labels, M):
        lines.append(label + "," + ",".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
