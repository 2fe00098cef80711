"""Watch the lower-bound mechanism for arc length at work on a width-4 blocked plan.

For a blocked pattern every exit path must detour, so the reduced path
matrices grow a little faster than the width.  The normalised vector v_n
tracks that excess exactly, in rational arithmetic, and is compared with
the product bound (1 / (1 + c)) * prod(1 + kappa / m_k).

Run:  python3 demos/growth_of_blocked_plan.py [levels]
"""

import sys

from labyrinth import blocked_inequality_check, kappa_bound_check
from labyrinth.analysis import C_STAR, KAPPA_STAR, growth_diagnostics, kappa_optimum
from labyrinth.corpus import corpus_pattern, corpus_plan

levels = int(sys.argv[1]) if len(sys.argv) > 1 else 40

c_num, k_num = kappa_optimum()
print(f"numerical optimum of min(2c, (1-c)/(1+c)): c = {c_num:.10f}, kappa = {k_num:.10f}")
print(f"certified dyadic c = {float(C_STAR):.12f}, kappa = 2c = {float(KAPPA_STAR):.12f}")

p = corpus_pattern("start4")
print(f"\n{p.name}: blocked inequality {'holds' if blocked_inequality_check(p).ok else 'FAILS'}")
print(f"kappa bound for m in 4..1000: {'holds' if kappa_bound_check(range(4, 1001)).ok else 'FAILS'}")

g = growth_diagnostics(corpus_plan("start4"), levels)
print(f"\n{'n':>3} {'min v_n':>12} {'bound':>12}")
for lv in g.levels:
    if lv.level % 5 == 0 or lv.level < 4:
        print(f"{lv.level:>3} {float(lv.min_entry):>12.6f} {float(lv.bound):>12.6f}")
print(f"\nmin v_n first exceeds 10 at n = {g.first_level_exceeding(10)}")
print(f"the bound first exceeds 10 at n = {g.first_level_exceeding(10, which='bound')}")
print(g.divergence_status())
