"""Text formats: pattern files, plan files, assignment maps and built-set sidecars.

Pattern file::

    % comment
    pattern plus
    width 3
    #.#
    ...
    #.#

Plan file (pattern names resolve against ``include``-d pattern files and any
patterns passed in)::

    include corpus.pat
    level 1
    use start4
    level 2
    use mix4a mix4b
    assign map fig2.map
    level 3..6
    use start4
    assign constant start4

``assign`` takes ``constant <name|index>``, ``map <file>``, ``parity <offset>``
or ``random seed=<u64>``.  A level with a single member may omit it.  Member
indices in files are 1-based.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable, Sequence

from .errors import FormatError
from .pattern import Pattern
from .substitution import AssignmentRule, ConstructionPlan, LabyrinthSet, PatternCollection, PlanLevel

_NAME = re.compile(r"^[A-Za-z0-9_.+\-]+$")


def _lines(text: str) -> Iterable[tuple[int, str]]:
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("%"):
            yield i, line


def parse_patterns(text: str, source: str = "<string>") -> list[Pattern]:
    """All patterns of a pattern file, in file order."""
    out: list[Pattern] = []
    lines = list(_lines(text))
    i = 0
    seen: set[str] = set()
    while i < len(lines):
        lineno, line = lines[i]
        head = line.split()
        if head[0] != "pattern" or len(head) != 2:
            raise FormatError(f"expected 'pattern <name>', got {line!r}", lineno, source)
        name = head[1]
        if not _NAME.match(name):
            raise FormatError(f"bad pattern name {name!r}", lineno, source)
        if name in seen:
            raise FormatError(f"duplicate pattern name {name!r}", lineno, source)
        seen.add(name)
        if i + 1 >= len(lines):
            raise FormatError(f"pattern {name}: missing 'width' line", lineno, source)
        wline, wtext = lines[i + 1]
        parts = wtext.split()
        if len(parts) != 2 or parts[0] != "width" or not parts[1].isdigit() or int(parts[1]) < 1:
            raise FormatError(f"expected 'width <m>' with m >= 1, got {wtext!r}", wline, source)
        m = int(parts[1])
        body = lines[i + 2:i + 2 + m]
        if len(body) < m:
            raise FormatError(f"pattern {name}: expected {m} rows, found {len(body)}", wline, source)
        for bl, row in body:
            if row.split()[0] in ("pattern", "width"):
                raise FormatError(f"pattern {name}: expected {m} rows before {row!r}", bl, source)
        try:
            out.append(Pattern.from_rows([r for _, r in body], name))
        except FormatError as err:
            lineno_in_body = body[err.lineno - 1][0] if err.lineno else wline
            raise FormatError(f"pattern {name}: {err.message}", lineno_in_body, source) from None
        i += 2 + m
    return out


def parse_pattern(text: str, source: str = "<string>") -> Pattern:
    """Exactly one pattern; a bare body without header lines is also accepted."""
    lines = list(_lines(text))
    if lines and lines[0][1].split()[0] != "pattern":
        try:
            return Pattern.from_rows([r for _, r in lines])
        except FormatError as err:
            lineno = lines[err.lineno - 1][0] if err.lineno else None
            raise FormatError(err.message, lineno, source) from None
    found = parse_patterns(text, source)
    if len(found) != 1:
        raise FormatError(f"expected exactly one pattern, found {len(found)}", None, source)
    return found[0]


def format_pattern(p: Pattern, name: str | None = None) -> str:
    name = name or p.name or "unnamed"
    return f"pattern {name}\nwidth {p.width}\n" + "\n".join(p.rows()) + "\n"


def format_patterns(patterns: Sequence[Pattern]) -> str:
    return "\n".join(format_pattern(p) for p in patterns)


def load_patterns(path: str | Path) -> list[Pattern]:
    path = Path(path)
    return parse_patterns(_read(path), str(path))


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as err:
        raise FormatError(f"cannot read file: {err.strerror}", None, str(path)) from None


def _resolve_member(token: str, names: Sequence[str], lineno: int, source: str) -> int:
    if token.isdigit():
        h = int(token)
        if not 1 <= h <= len(names):
            raise FormatError(f"member index {h} out of range 1..{len(names)}", lineno, source)
        return h - 1
    if token not in names:
        raise FormatError(f"{token!r} is not used at this level (members: {' '.join(names)})", lineno, source)
    return names.index(token)


def parse_assignment_map(text: str, names: Sequence[str], source: str = "<string>") -> dict[tuple[int, int], int]:
    """Lines ``col row member``; ``member`` is a name or a 1-based index."""
    mapping: dict[tuple[int, int], int] = {}
    for lineno, line in _lines(text):
        parts = line.split()
        if len(parts) != 3 or not (parts[0].isdigit() and parts[1].isdigit()):
            raise FormatError(f"expected 'col row member', got {line!r}", lineno, source)
        key = (int(parts[0]), int(parts[1]))
        if key in mapping:
            raise FormatError(f"square {key} assigned twice", lineno, source)
        mapping[key] = _resolve_member(parts[2], names, lineno, source)
    return mapping


def _parse_rule(parts: list[str], names: Sequence[str], lineno: int, source: str, base: Path) -> AssignmentRule:
    if len(parts) != 3:
        raise FormatError("expected 'assign <kind> <argument>'", lineno, source)
    kind, arg = parts[1], parts[2]
    if kind == "constant":
        return AssignmentRule.constant(_resolve_member(arg, names, lineno, source))
    if kind == "parity":
        if not re.fullmatch(r"-?\d+", arg):
            raise FormatError(f"parity offset must be an integer, got {arg!r}", lineno, source)
        return AssignmentRule.parity(int(arg))
    if kind == "random":
        m = re.fullmatch(r"seed=(\d+)", arg)
        if not m or int(m.group(1)) >= 1 << 64:
            raise FormatError(f"expected 'seed=<u64>', got {arg!r}", lineno, source)
        return AssignmentRule.random(int(m.group(1)))
    if kind == "map":
        path = base / arg
        return AssignmentRule.explicit(parse_assignment_map(_read(path), names, str(path)))
    raise FormatError(f"unknown assignment kind {kind!r}", lineno, source)


def parse_plan(text: str, source: str = "<string>", base_dir: str | Path = ".",
               patterns: Iterable[Pattern] = ()) -> ConstructionPlan:
    base = Path(base_dir)
    library: dict[str, Pattern] = {p.name: p for p in patterns}
    blocks: list[dict] = []
    current = None
    for lineno, line in _lines(text):
        parts = line.split()
        word = parts[0]
        if word == "include":
            if len(parts) != 2:
                raise FormatError("expected 'include <file>'", lineno, source)
            for p in load_patterns(base / parts[1]):
                library[p.name] = p
        elif word == "level":
            m = re.fullmatch(r"(\d+)(?:\.\.(\d+))?", parts[1]) if len(parts) == 2 else None
            if not m:
                raise FormatError("expected 'level <k>' or 'level <a>..<b>'", lineno, source)
            lo = int(m.group(1))
            hi = int(m.group(2) or lo)
            expected = blocks[-1]["hi"] + 1 if blocks else 1
            if lo != expected or hi < lo:
                raise FormatError(f"levels must run consecutively; expected level {expected}", lineno, source)
            current = {"lo": lo, "hi": hi, "use": None, "rule": None, "lineno": lineno}
            blocks.append(current)
        elif word in ("use", "assign"):
            if current is None:
                raise FormatError(f"'{word}' outside a level block", lineno, source)
            if word == "use":
                if current["use"] is not None:
                    raise FormatError("a level block takes one 'use' line", lineno, source)
                if len(parts) < 2:
                    raise FormatError("'use' needs at least one pattern name", lineno, source)
                for name in parts[1:]:
                    if name not in library:
                        raise FormatError(f"unknown pattern {name!r}", lineno, source)
                current["use"] = parts[1:]
            else:
                if current["use"] is None:
                    raise FormatError("'assign' must follow 'use'", lineno, source)
                if current["rule"] is not None:
                    raise FormatError("a level block takes one 'assign' line", lineno, source)
                current["rule"] = _parse_rule(parts, current["use"], lineno, source, base)
        else:
            raise FormatError(f"unknown directive {word!r}", lineno, source)

    if not blocks:
        raise FormatError("plan has no levels", None, source)
    levels = []
    for b in blocks:
        names = b["use"]
        if names is None:
            raise FormatError("level block without 'use'", b["lineno"], source)
        rule = b["rule"]
        if rule is None:
            if len(names) > 1 and b["lo"] > 1:
                raise FormatError("a level with several patterns needs an 'assign' line", b["lineno"], source)
            rule = AssignmentRule.constant(0)
        for k in range(b["lo"], b["hi"] + 1):
            if k == 1 and len(names) != 1:
                raise FormatError("level 1 must use exactly one pattern", b["lineno"], source)
            levels.append(PlanLevel(PatternCollection(k, tuple(library[n] for n in names)), rule))
    return ConstructionPlan(tuple(levels))


def load_plan(path: str | Path, seed: int | None = None, patterns: Iterable[Pattern] = ()) -> ConstructionPlan:
    """Read a plan file; ``seed`` replaces the seed of every random rule."""
    path = Path(path)
    plan = parse_plan(_read(path), str(path), path.parent, patterns)
    return plan.with_seed(seed) if seed is not None else plan


def format_set(s: LabyrinthSet) -> str:
    return format_pattern(s.grid, f"W{s.level}")


def format_trace(s: LabyrinthSet) -> str:
    """One line ``k col row member`` per white level-``k`` square, ``k < n``; member is 1-based."""
    out = []
    for k, assigned in enumerate(s.trace, 1):
        rows, cols = (assigned >= 0).nonzero()
        order = sorted(zip(cols.tolist(), rows.tolist()), key=lambda cr: (cr[1], cr[0]))
        out.extend(f"{k} {c} {r} {int(assigned[r, c]) + 1}" for c, r in order)
    return "\n".join(out) + ("\n" if out else "")


def parse_trace(text: str, source: str = "<string>") -> dict[int, dict[tuple[int, int], int]]:
    """Inverse of :func:`format_trace`: level -> square -> 0-based member."""
    out: dict[int, dict[tuple[int, int], int]] = {}
    for lineno, line in _lines(text):
        parts = line.split()
        if len(parts) != 4 or not all(x.isdigit() for x in parts):
            raise FormatError(f"expected 'k col row member', got {line!r}", lineno, source)
        k, c, r, h = map(int, parts)
        if h < 1:
            raise FormatError("member indices start at 1", lineno, source)
        out.setdefault(k, {})[(c, r)] = h - 1
    return out
