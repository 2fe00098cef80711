"""SVG rendering of patterns, labyrinth sets, path corridors and arc polylines.

The document uses one user unit per cell (``viewBox="0 0 m m"``), with row 0
at the bottom, and draws each row as runs of equally coloured rectangles.
The output is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .paths import PathType, arc_approximation, exit_path
from .pattern import Pattern
from .substitution import LabyrinthSet

TARGETS = ("pattern", "set", "path-corridor", "arc-polyline")


@dataclass(frozen=True)
class Palette:
    white: str = "#ffffff"
    black: str = "#000000"
    corridor: str = "#bfbfbf"
    stroke: str = "#808080"


@dataclass(frozen=True)
class RenderSpec:
    """What to draw.  ``kind`` names the path for corridors and polylines."""

    target: str = "set"
    level: int | None = None
    kind: PathType | str | None = None
    canvas: int = 512
    palette: Palette = field(default_factory=Palette)
    polyline: bool = False

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"unknown render target {self.target!r}; choose from {', '.join(TARGETS)}")
        if self.canvas < 64:
            raise ValueError(f"canvas must be at least 64 px, got {self.canvas}")
        if self.target in ("path-corridor", "arc-polyline") and self.kind is None:
            raise ValueError(f"target {self.target} needs a path kind")
        if self.kind is not None:
            object.__setattr__(self, "kind", PathType(self.kind))


def _grid(spec: RenderSpec, data) -> Pattern:
    if spec.target == "set" and not isinstance(data, LabyrinthSet):
        raise ValueError("target 'set' needs a LabyrinthSet")
    if spec.target == "pattern" and not isinstance(data, Pattern):
        raise ValueError("target 'pattern' needs a Pattern")
    if isinstance(data, LabyrinthSet):
        if spec.level is not None and spec.level != data.level:
            raise ValueError(f"spec asks for level {spec.level}, data is level {data.level}")
        return data.grid
    if isinstance(data, Pattern):
        return data
    raise ValueError(f"cannot render {type(data).__name__}")


def _num(x: float) -> str:
    return f"{x:.6f}".rstrip("0").rstrip(".") or "0"


def render(spec: RenderSpec, data: Pattern | LabyrinthSet) -> str:
    grid = _grid(spec, data)
    m = grid.width
    pal = spec.palette
    # 0 black, 1 white, 2 corridor
    codes = grid.cells.astype(np.int8)
    if spec.target == "path-corridor":
        path = exit_path(grid, spec.kind)
        codes[path.rows, path.cols] = 2
    colours = (pal.black, pal.white, pal.corridor)

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{spec.canvas}" height="{spec.canvas}" '
        f'viewBox="0 0 {m} {m}" shape-rendering="crispEdges">',
    ]
    for row in range(m - 1, -1, -1):
        line = codes[row]
        y = m - 1 - row
        starts = np.flatnonzero(np.diff(line, prepend=-1))
        ends = np.append(starts[1:], m)
        for a, b in zip(starts, ends):
            out.append(f'<rect x="{a}" y="{y}" width="{b - a}" height="1" fill="{colours[line[a]]}"/>')
    if spec.target == "arc-polyline" or (spec.polyline and spec.kind is not None):
        start, end = spec.kind.sides
        pts = arc_approximation(grid, start, end) * m
        coords = " ".join(f"{_num(x)},{_num(m - y)}" for x, y in pts)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{pal.stroke}" '
                   f'stroke-width="{_num(max(0.15, m / 200))}" stroke-linejoin="round"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

