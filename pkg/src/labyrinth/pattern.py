"""Square patterns on an ``m x m`` grid and the labyrinth-pattern axioms.

Cells are addressed as ``(col, row)``: ``col`` counted from the left, ``row``
from the bottom, both 0-based.  A pattern stores a read-only boolean array
indexed ``cells[row, col]`` so that ``cells[0]`` is the bottom row.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple

import numpy as np
from scipy import ndimage

from .errors import FormatError, InvalidPatternError
from .report import Report

WHITE_CHAR = "."
BLACK_CHAR = "#"


class SquareIndex(NamedTuple):
    col: int
    row: int


@dataclass(frozen=True, eq=False)
class Pattern:
    """An m-pattern: a nonempty set of white cells of the ``m x m`` grid."""

    cells: np.ndarray
    name: str = ""

    def __post_init__(self):
        cells = np.array(self.cells, dtype=bool)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1] or cells.shape[0] == 0:
            raise ValueError(f"pattern cells must be a nonempty square array, got shape {cells.shape}")
        if not cells.any():
            raise ValueError("a pattern needs at least one white square")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_white(cls, width: int, white: Iterable[tuple[int, int]], name: str = "") -> "Pattern":
        cells = np.zeros((width, width), dtype=bool)
        for col, row in white:
            if not (0 <= col < width and 0 <= row < width):
                raise ValueError(f"square ({col}, {row}) outside a grid of width {width}")
            cells[row, col] = True
        return cls(cells, name)

    @classmethod
    def from_rows(cls, rows: Iterable[str], name: str = "") -> "Pattern":
        """Build from text rows listed top-down, ``.`` white and ``#`` black."""
        rows = [r.strip() for r in rows]
        m = len(rows)
        if m == 0:
            raise FormatError("pattern body is empty")
        for i, line in enumerate(rows, 1):
            if len(line) != m:
                raise FormatError(f"row has {len(line)} characters, expected {m}", lineno=i)
            bad = set(line) - {WHITE_CHAR, BLACK_CHAR}
            if bad:
                raise FormatError(f"illegal characters {''.join(sorted(bad))!r}", lineno=i)
        cells = np.array([[ch == WHITE_CHAR for ch in line] for line in reversed(rows)], dtype=bool)
        if not cells.any():
            raise FormatError("pattern has no white squares")
        return cls(cells, name)

    @property
    def width(self) -> int:
        return self.cells.shape[0]

    @cached_property
    def n_white(self) -> int:
        return int(self.cells.sum())

    @cached_property
    def white(self) -> frozenset[SquareIndex]:
        rows, cols = np.nonzero(self.cells)
        return frozenset(SquareIndex(int(c), int(r)) for r, c in zip(rows, cols))

    def is_white(self, col: int, row: int) -> bool:
        m = self.width
        return 0 <= col < m and 0 <= row < m and bool(self.cells[row, col])

    def rows(self) -> list[str]:
        return ["".join(WHITE_CHAR if w else BLACK_CHAR for w in line) for line in self.cells[::-1]]

    def renamed(self, name: str) -> "Pattern":
        return Pattern(self.cells, name)

    def flipped_horizontally(self) -> "Pattern":
        return Pattern(self.cells[:, ::-1], self.name)

    def flipped_vertically(self) -> "Pattern":
        return Pattern(self.cells[::-1, :], self.name)

    def rotated180(self) -> "Pattern":
        return Pattern(self.cells[::-1, ::-1], self.name)

    @cached_property
    def _hash(self) -> int:
        return hash((self.width, self.cells.tobytes()))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pattern):
            return NotImplemented
        return self.width == other.width and bool(np.array_equal(self.cells, other.cells))

    def __repr__(self) -> str:
        return f"Pattern(name={self.name!r}, width={self.width}, white={self.n_white})"


@dataclass(frozen=True)
class PatternGraph:
    vertices: tuple[SquareIndex, ...]
    edges: frozenset[frozenset[SquareIndex]]


class ExitSet(NamedTuple):
    top: SquareIndex
    bottom: SquareIndex
    left: SquareIndex
    right: SquareIndex


class ExitPositions(NamedTuple):
    """Exit row ``r`` counted from the top and exit column ``c`` from the left, both 1-based."""

    r: int
    c: int


class ExitsError(InvalidPatternError):
    """Zero or several vertical or horizontal exit pairs."""

    def __init__(self, vertical: list[int], horizontal: list[int]):
        self.vertical = vertical
        self.horizontal = horizontal
        super().__init__(
            f"expected exactly one vertical and one horizontal exit pair; "
            f"found {len(vertical)} vertical (columns {vertical}) and "
            f"{len(horizontal)} horizontal (rows {horizontal})"
        )


def _edge_masks(cells: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # horiz[r, c]: edge (c, r)-(c+1, r); vert[r, c]: edge (c, r)-(c, r+1)
    return cells[:, :-1] & cells[:, 1:], cells[:-1, :] & cells[1:, :]


def build_graph(p: Pattern) -> PatternGraph:
    rows, cols = np.nonzero(p.cells)
    vertices = tuple(SquareIndex(int(c), int(r)) for r, c in zip(rows, cols))
    horiz, vert = _edge_masks(p.cells)
    edges = set()
    for r, c in zip(*np.nonzero(horiz)):
        edges.add(frozenset((SquareIndex(int(c), int(r)), SquareIndex(int(c) + 1, int(r)))))
    for r, c in zip(*np.nonzero(vert)):
        edges.add(frozenset((SquareIndex(int(c), int(r)), SquareIndex(int(c), int(r) + 1))))
    return PatternGraph(vertices, frozenset(edges))


def is_tree(g: PatternGraph) -> bool:
    """True iff the graph is connected and has exactly ``|V| - 1`` edges."""
    if not g.vertices or len(g.edges) != len(g.vertices) - 1:
        return False
    adj: dict[SquareIndex, list[SquareIndex]] = {v: [] for v in g.vertices}
    for e in g.edges:
        u, v = tuple(e)
        adj[u].append(v)
        adj[v].append(u)
    start = g.vertices[0]
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == len(g.vertices)


def tree_stats(cells: np.ndarray) -> tuple[int, int, int]:
    """Return ``(vertices, edges, components)`` of the white-square graph."""
    horiz, vert = _edge_masks(cells)
    _, n_components = ndimage.label(cells)
    return int(cells.sum()), int(horiz.sum() + vert.sum()), int(n_components)


def grid_is_tree(cells: np.ndarray) -> bool:
    v, e, k = tree_stats(cells)
    return k == 1 and e == v - 1


def find_exits(p: Pattern) -> tuple[ExitSet, ExitPositions]:
    """Locate the unique vertical and horizontal exit pairs.

    Raises :class:`ExitsError` listing every candidate column and row when
    either pair is missing or not unique.
    """
    cells = p.cells
    m = p.width
    cols = [int(c) for c in np.flatnonzero(cells[0, :] & cells[m - 1, :])]
    rows = [int(r) for r in np.flatnonzero(cells[:, 0] & cells[:, m - 1])]
    if len(cols) != 1 or len(rows) != 1:
        raise ExitsError(cols, rows)
    c, r = cols[0], rows[0]
    exits = ExitSet(
        top=SquareIndex(c, m - 1),
        bottom=SquareIndex(c, 0),
        left=SquareIndex(0, r),
        right=SquareIndex(m - 1, r),
    )
    return exits, ExitPositions(r=m - r, c=c + 1)


def check_corner_property(p: Pattern) -> bool:
    c = p.cells
    return not (c[0, 0] and c[-1, -1]) and not (c[-1, 0] and c[0, -1])


def validate_labyrinth_pattern(p: Pattern) -> Report:
    report = Report(f"pattern {p.name or '<unnamed>'} (width {p.width})")
    report.add("width >= 3", p.width >= 3, "" if p.width >= 3 else f"width is {p.width}")
    v, e, k = tree_stats(p.cells)
    report.add("tree", k == 1 and e == v - 1, f"{v} vertices, {e} edges, {k} component(s)")
    try:
        _, pos = find_exits(p)
    except ExitsError as err:
        report.add("exits", False, str(err))
    else:
        report.add("exits", True, f"(r,c)=({pos.r},{pos.c})")
    corner = check_corner_property(p)
    report.add("corner", corner, "" if corner else "white squares at diagonally opposite corners")
    return report


@lru_cache(maxsize=1024)
def is_labyrinth_pattern(p: Pattern) -> bool:
    return validate_labyrinth_pattern(p).ok


def require_labyrinth(p: Pattern) -> None:
    if not is_labyrinth_pattern(p):
        raise InvalidPatternError(validate_labyrinth_pattern(p).format())


def is_horizontally_blocked(p: Pattern) -> bool:
    """The row joining the left and right exits contains a black square."""
    require_labyrinth(p)
    exits, _ = find_exits(p)
    return not bool(p.cells[exits.left.row, :].all())


def is_vertically_blocked(p: Pattern) -> bool:
    """The column joining the top and bottom exits contains a black square."""
    require_labyrinth(p)
    exits, _ = find_exits(p)
    return not bool(p.cells[:, exits.top.col].all())


def is_blocked(p: Pattern) -> bool:
    return is_horizontally_blocked(p) and is_vertically_blocked(p)
