"""Build the 16 x 16 supermixed set from its three 4 x 4 patterns and draw it.

Run:  python3 demos/supermixed16.py [output-dir]
"""

import sys
from pathlib import Path

from labyrinth import build_to_level, exit_path, format_set, path_matrix, validate_labyrinth_pattern
from labyrinth.corpus import corpus_plan
from labyrinth.paths import format_matrix
from labyrinth.render import RenderSpec, render

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

plan = corpus_plan("supermixed16")
for k in (1, 2):
    names = ", ".join(p.name for p in plan.collection(k).members)
    print(f"level {k}: {names} ({plan.rule(k).kind} rule)")

s = build_to_level(plan, 2)
print()
print(format_set(s))
print(validate_labyrinth_pattern(s.grid).format())

# the 6 x 6 path matrix: entry (i, j) counts type-j squares on the type-i path
print("\npath matrix of the level-2 set")
print(format_matrix(path_matrix(s)))

d = exit_path(s, "D")
print(f"\nright-to-bottom path: {len(d)} squares")

(out / "supermixed16.svg").write_text(render(RenderSpec("set"), s))
(out / "supermixed16-D.svg").write_text(render(RenderSpec("path-corridor", kind="D", polyline=True), s))
print(f"SVGs written to {out}/")
