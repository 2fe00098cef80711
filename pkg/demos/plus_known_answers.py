"""The self-similar plus pattern: every answer is known in closed form.

Exit paths are straight, so the top-bottom path of level n has 3^n squares,
the length-based dimension estimate is exactly 1 at every level, and the
exits sit at the midpoints of the sides.

Run:  python3 demos/plus_known_answers.py
"""

from labyrinth import box_dimension_estimate, exit_coordinates
from labyrinth.corpus import corpus_plan

plan = corpus_plan("plus")
d = box_dimension_estimate(plan, 15)
for n, (lengths, dims) in enumerate(zip(d.lengths, d.values), 1):
    print(f"n = {n:>2}: A(n) = {lengths[0]:>8}  (3^n = {3**n:>8})  d_n = {dims[0]}")

e = exit_coordinates(plan, 15)
print(f"\ntop exit x after 15 terms: {e.top_x[-1]} (error {float(abs(e.top_x[-1] - 0.5)):.3g}, bound {float(e.bound):.3g})")
