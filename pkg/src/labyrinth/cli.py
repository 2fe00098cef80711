"""``laby``: command-line front end.

Exit status is 0 on success, 1 when a validation or verification fails and 2
for usage, parse and I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from math import prod
from pathlib import Path

from . import analysis, formats, paths
from .errors import ConsistencyError, FormatError, GridCapError, InvalidPatternError
from .pattern import is_horizontally_blocked, is_vertically_blocked, validate_labyrinth_pattern
from .render import RenderSpec, render
from .substitution import DEFAULT_GRID_CAP, build_to_level, plan_report


class UsageError(Exception):
    pass


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _load_extra_patterns(files) -> list:
    out = []
    for f in files or ():
        out.extend(formats.load_patterns(f))
    return out


def _plan(args):
    if not args.plan:
        raise UsageError("--plan is required")
    return formats.load_plan(args.plan, seed=args.seed, patterns=_load_extra_patterns(args.patterns))


def _level(args, plan, attr="level") -> int:
    n = getattr(args, attr) or plan.depth
    if not 1 <= n <= plan.depth:
        raise UsageError(f"level {n} outside 1..{plan.depth}")
    return n


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _is_plan_text(path: Path) -> bool:
    if path.suffix == ".plan":
        return True
    for line in path.read_text(encoding="utf-8").splitlines():
        word = line.strip().split(" ", 1)[0]
        if word and not word.startswith("%"):
            return word in ("include", "level")
    return False


def _pattern_line(p) -> tuple[bool, str]:
    report = validate_labyrinth_pattern(p)
    name = p.name or "<unnamed>"
    if not report.ok:
        lines = [f"{name}: labyrinth: no"]
        lines += [f"  {c.name}: {c.detail}" if c.detail else f"  {c.name}" for c in report.failures()]
        return False, "\n".join(lines)
    h, v = is_horizontally_blocked(p), is_vertically_blocked(p)
    blocked = "h+v" if h and v else "h" if h else "v" if v else "none"
    exits = report["exits"].detail
    return True, f"{name}: labyrinth: yes, blocked: {blocked}, exits {exits}"


def cmd_validate(args) -> int:
    ok = True
    extra = _load_extra_patterns(args.patterns)
    for f in args.files:
        path = Path(f)
        try:
            is_plan = _is_plan_text(path)
        except OSError as err:
            raise FormatError(f"cannot read file: {err.strerror}", None, str(path)) from None
        if is_plan:
            plan = formats.load_plan(path, seed=args.seed, patterns=extra)
            report = plan_report(plan)
            print(f"plan {path}: {'consistent' if report.ok else 'inconsistent'}")
            for c in report.failures():
                print(f"  {c.name}: {c.detail}")
            ok &= report.ok
        else:
            for p in formats.load_patterns(path):
                passed, line = _pattern_line(p)
                print(line)
                ok &= passed
    return 0 if ok else 1


def _build(args, plan, n):
    cap = args.cap
    if prod(plan.widths[:n]) > cap:
        raise GridCapError(f"level {n} needs a {prod(plan.widths[:n])}-wide grid; cap is {cap} (raise --cap)")
    return build_to_level(plan, n, cap=cap, force=getattr(args, "force", False))


def cmd_build(args) -> int:
    plan = _plan(args)
    n = _level(args, plan)
    s = _build(args, plan, n)
    if args.format == "svg":
        _emit(render(RenderSpec("set", level=n, canvas=args.canvas), s), args.out)
    else:
        _emit(formats.format_set(s), args.out)
    if args.trace:
        Path(args.trace).write_text(formats.format_trace(s), encoding="utf-8")
    if not s.verified:
        print(f"warning: level-{n} set built with --force is not a verified labyrinth set", file=sys.stderr)
        return 1
    return 0


def _level_paths(plan, n, cap):
    """Exit paths of level ``n``: from the grid when it fits, else by substitution."""
    if prod(plan.widths[:n]) <= cap:
        return paths.exit_paths(build_to_level(plan, n, cap=cap).grid), "grid"
    return dict(paths.iterate_level_paths(plan, n))[n], "substituted paths"


def _level_matrix(plan, n, cap):
    if plan.truncated(n).is_mixed:
        M = paths.identity()
        for k in range(1, n + 1):
            M = M.dot(paths.path_matrix(plan.collection(k).members[0]))
        return M
    return paths.matrix_from_paths(_level_paths(plan, n, cap)[0])


def cmd_matrices(args) -> int:
    plan = _plan(args)
    n = _level(args, plan)
    M = _level_matrix(plan, n, args.cap)
    if args.format == "csv":
        _emit(paths.matrix_csv(M), args.out)
    else:
        _emit(paths.format_matrix(M) + "\n", args.out)
    if not args.verify:
        return 0
    ok = True
    if n >= 2:
        prev, _ = _level_paths(plan, n - 1, args.cap)
        col = plan.collection(n)
        Qs = paths.counting_matrices_from_paths(prev, plan.rule(n), n, len(col), n - 1)
        observed, route = _level_paths(plan, n, args.cap)
        report = paths.verify_recursion(paths.matrix_from_paths(prev), Qs, list(col.members),
                                        paths.matrix_from_paths(observed))
        for c in report.checks:
            print(f"{c.name}: {'OK' if c.passed else 'FAIL'}" + ("" if c.passed else f" ({c.detail})"))
        print(f"(M({n}) taken from {route})")
        ok &= report.ok
    else:
        print("level 1: M(1) is the path matrix of the first pattern; nothing to verify")
    if plan.truncated(n).is_mixed:
        report = analysis.reduced_product_check(plan, n, cap=args.cap)
        for c in report.checks:
            print(f"{c.name}: {'OK' if c.passed else 'FAIL'}")
        ok &= report.ok
    return 0 if ok else 1


def cmd_path(args) -> int:
    plan = _plan(args)
    n = _level(args, plan)
    kind = paths.PathType(args.kind)
    if args.format == "svg":
        s = _build(args, plan, n)
        spec = RenderSpec("path-corridor", level=n, kind=kind, canvas=args.canvas, polyline=args.polyline)
        _emit(render(spec, s), args.out)
        return 0
    level_paths, _ = _level_paths(plan, n, args.cap)
    path = level_paths[kind]
    if args.format == "csv":
        lines = ["col,row,type"] + [f"{c},{r},{t.value}" for (c, r), t in zip(path.squares, path.types)]
    else:
        width = prod(plan.widths[:n])
        bound = paths.arc_length_lower_bound(len(path), n, plan.widths)
        lines = [f"{kind.value}-path of level {n} ({width} x {width}): {len(path)} squares, "
                 f"arc length >= {bound}"]
        lines += [f"{c} {r} {t.value}" for (c, r), t in zip(path.squares, path.types)]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_growth(args) -> int:
    plan = _plan(args)
    n = _level(args, plan, "levels")
    g = analysis.growth_diagnostics(plan, n)
    if args.format == "csv":
        _emit(analysis.growth_csv(g), args.out)
    else:
        lines = [f"c = {g.c} (~{float(g.c):.12g}), kappa = {g.kappa}"]
        for lv in g.levels:
            bound = "" if lv.bound is None else f"  bound {float(lv.bound):.6g}"
            lines.append(f"level {lv.level}: min v = {float(lv.min_entry):.6g}{bound}  "
                         f"v = ({', '.join(str(x) for x in lv.v)})")
        status = g.bound_holds
        lines.append("lower bound: " + ("not asserted (plan not mixed and blocked)" if status is None
                                        else "holds" if status else "VIOLATED"))
        lines.append(g.divergence_status())
        _emit("\n".join(lines) + "\n", args.out)
        if status is False:
            return 1
    return 0


def cmd_dimension(args) -> int:
    plan = _plan(args)
    n = _level(args, plan, "levels")
    d = analysis.box_dimension_estimate(plan, n)
    if args.format == "csv":
        _emit(analysis.dimension_csv(d), args.out)
    else:
        _emit("".join(f"{x:.12g}\n" for x in d.series(args.kind)), args.out)
    return 0


def cmd_exits(args) -> int:
    plan = _plan(args)
    n = _level(args, plan, "terms")
    e = analysis.exit_coordinates(plan, n)
    if args.format == "csv":
        _emit(analysis.exits_csv(e), args.out)
    else:
        lines = [f"{k} {x} {y}" for k, (x, y) in enumerate(zip(e.top_x, e.left_y), 1)]
        lines.append(f"bound {e.bound}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_render(args) -> int:
    if args.target == "pattern":
        if not args.patterns:
            raise UsageError("render --target pattern needs --patterns FILE")
        found = _load_extra_patterns(args.patterns)
        chosen = [p for p in found if args.name in (None, p.name)]
        if not chosen:
            raise UsageError(f"no pattern named {args.name!r}")
        data = chosen[0]
        spec = RenderSpec("pattern", canvas=args.canvas)
    else:
        plan = _plan(args)
        n = _level(args, plan)
        data = _build(args, plan, n)
        spec = RenderSpec(args.target, level=n, kind=args.kind, canvas=args.canvas, polyline=args.polyline)
    _emit(render(spec, data), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="laby", description="Supermixed labyrinth sets: build, verify, analyse, render.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, level=True):
        p.add_argument("--plan", help="plan file")
        p.add_argument("--patterns", action="append", help="extra pattern file (repeatable)")
        p.add_argument("--seed", type=_seed, help="override the seed of every random rule")
        p.add_argument("--cap", type=_positive, default=DEFAULT_GRID_CAP, help="largest grid width to build")
        p.add_argument("--out", help="write output to this file instead of stdout")
        if level:
            p.add_argument("--level", type=_positive, help="level to use (default: deepest level of the plan)")

    p = sub.add_parser("validate", help="check pattern files and plan files")
    p.add_argument("files", nargs="+")
    p.add_argument("--patterns", action="append")
    p.add_argument("--seed", type=_seed)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("build", help="build a labyrinth set")
    common(p)
    p.add_argument("--trace", help="write the assignment trace sidecar here")
    p.add_argument("--force", action="store_true", help="build even if the consistency checks fail")
    p.add_argument("--format", choices=("text", "svg"), default="text")
    p.add_argument("--canvas", type=int, default=512)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("matrices", help="print the path matrix of a level")
    common(p)
    p.add_argument("--verify", action="store_true", help="check the recursion identities exactly")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_matrices)

    p = sub.add_parser("path", help="print or draw an exit-to-exit path")
    common(p)
    p.add_argument("--kind", choices=list("ABCDEF"), default="A")
    p.add_argument("--format", choices=("text", "csv", "svg"), default="text")
    p.add_argument("--canvas", type=int, default=512)
    p.add_argument("--polyline", action="store_true", help="overlay the centre polyline")
    p.set_defaults(func=cmd_path)

    for name, func, helptext in (("growth", cmd_growth, "normalised reduced-matrix growth per level"),
                                 ("dimension", cmd_dimension, "finite-level dimension estimates")):
        p = sub.add_parser(name, help=helptext)
        common(p, level=False)
        p.add_argument("--levels", type=_positive, help="number of levels (default: all)")
        p.add_argument("--format", choices=("text", "csv"), default="text")
        if name == "dimension":
            p.add_argument("--kind", choices=list("ABCDEF"), default="A")
        p.set_defaults(func=func)

    p = sub.add_parser("exits", help="partial sums of the exit coordinate series")
    common(p, level=False)
    p.add_argument("--terms", type=_positive, help="number of terms (default: all levels)")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_exits)

    p = sub.add_parser("render", help="draw a pattern, set, corridor or polyline as SVG")
    common(p)
    p.add_argument("--target", choices=("pattern", "set", "path-corridor", "arc-polyline"), default="set")
    p.add_argument("--kind", choices=list("ABCDEF"))
    p.add_argument("--name", help="pattern name for --target pattern")
    p.add_argument("--canvas", type=int, default=512)
    p.add_argument("--polyline", action="store_true")
    p.add_argument("--format", choices=("svg",), default="svg")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConsistencyError, InvalidPatternError) as err:
        print(f"laby {args.command}: {err}", file=sys.stderr)
        return 1
    except (FormatError, UsageError, GridCapError, OSError, ValueError) as err:
        print(f"laby {args.command}: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
