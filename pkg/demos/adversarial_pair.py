"""Two patterns that are each fine but stack into a cycle.

Both members validate and agree on exits and corners, yet a vertically
neighbouring pair of them shares two white squares across the seam.  The
builder refuses the plan; --force style building marks the set unverified.

Run:  python3 demos/adversarial_pair.py
"""

from labyrinth import ConsistencyError, build_to_level, validate_pairwise_tree_consistency
from labyrinth.corpus import corpus_plan
from labyrinth.substitution import plan_report

plan = corpus_plan("adversarial")
print(plan_report(plan).format())

try:
    build_to_level(plan, 2)
except ConsistencyError as err:
    print(f"\nbuild refused: {err}")

s = build_to_level(plan, 2, force=True)
print(f"\nforced build verified: {s.verified}")
print(validate_pairwise_tree_consistency(s).format())
print("\n".join(s.grid.rows()))
