"""Reduced path matrices, blocked-pattern inequalities, growth, dimension and exit coordinates.

All verdicts are exact.  The optimal constant ``c = (sqrt(17) - 3) / 4`` is
irrational, so inequality checks run on a dyadic bracket ``[c_lo, c_hi]``
containing it; every checked quantity is affine in ``c``, hence holding at
both ends of the bracket means it holds at the true value too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, prod
from typing import Iterable

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InvalidPatternError
from .paths import KINDS, identity, int_matrix, iterate_level_paths, matrix_from_paths, path_matrix
from .pattern import Pattern, find_exits, is_blocked
from .report import Report
from .substitution import ConstructionPlan, DEFAULT_GRID_CAP, build_to_level

REDUCED_ROWS = ("A", "B", "CE", "DF")
REDUCED_COLS = ("A", "B", "C", "D")

# rows of the 4x6 left projection add E onto C and F onto D
P_LEFT = int_matrix([
    [1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 1, 0],
    [0, 0, 0, 1, 0, 1],
])
P_RIGHT = int_matrix(np.eye(6, 4, dtype=int))

_BITS = 40


def certified_c() -> tuple[Fraction, Fraction]:
    """Dyadic bracket ``lo < (sqrt(17) - 3)/4 < hi`` with ``hi - lo = 2**-40``."""
    lo = Fraction(isqrt(17 << (2 * _BITS - 4)) - (3 << (_BITS - 2)), 1 << _BITS)
    return lo, lo + Fraction(1, 1 << _BITS)


C_STAR = certified_c()[0]
KAPPA_STAR = 2 * C_STAR  # equals min(2c, (1-c)/(1+c)) because C_STAR lies below the optimum


def reduce_path_matrix(M) -> np.ndarray:
    """Fold rows E into C and F into D, then keep columns A..D."""
    M = int_matrix(M)
    out = M[:4, :4].copy()
    out[2] = out[2] + M[4, :4]
    out[3] = out[3] + M[5, :4]
    return out


def reduce_by_projection(M) -> np.ndarray:
    return P_LEFT.dot(int_matrix(M)).dot(P_RIGHT)


def turn_balance_holds(M) -> bool:
    """Columns C, E agree and columns D, F agree on the rows A, B, C+E, D+F.

    Path matrices of blocked patterns always have this form, and it is exactly
    what makes reduction multiplicative when ``M`` is the left factor.
    """
    folded = P_LEFT.dot(int_matrix(M))
    return bool((folded[:, 2] == folded[:, 4]).all() and (folded[:, 3] == folded[:, 5]).all())


def reduction_is_multiplicative(M1, M2) -> bool:
    M1, M2 = int_matrix(M1), int_matrix(M2)
    return bool((reduce_path_matrix(M1.dot(M2)) == reduce_path_matrix(M1).dot(reduce_path_matrix(M2))).all())


def blocked_matrix_facts(M) -> Report:
    """Equalities, positivity and disjunctions satisfied by path matrices of blocked patterns."""
    M = int_matrix(M)
    ix = {k.value: i for i, k in enumerate(KINDS)}

    def e(i, j):
        return M[ix[i], ix[j]]

    report = Report("blocked path-matrix facts")
    eqs = [
        (e("A", "C"), e("A", "E"), "A,C = A,E"), (e("A", "D"), e("A", "F"), "A,D = A,F"),
        (e("B", "C"), e("B", "E"), "B,C = B,E"), (e("B", "D"), e("B", "F"), "B,D = B,F"),
        (e("C", "C") + e("E", "C"), e("C", "E") + e("E", "E"), "C,C + E,C = C,E + E,E"),
        (e("C", "D") + e("E", "D"), e("C", "F") + e("E", "F"), "C,D + E,D = C,F + E,F"),
        (e("D", "C") + e("F", "C"), e("D", "E") + e("F", "E"), "D,C + F,C = D,E + F,E"),
        (e("D", "D") + e("F", "D"), e("D", "F") + e("F", "F"), "D,D + F,D = D,F + F,F"),
    ]
    for lhs, rhs, name in eqs:
        report.add(name, lhs == rhs, f"{lhs} vs {rhs}")
    for row, cols in (("A", "ACDEF"), ("B", "BCDEF")):
        low = [j for j in cols if e(row, j) < 1]
        report.add(f"{row} path has every type in {cols}", not low, f"missing {''.join(low)}" if low else "")
    for a, b, j in (("C", "E", "A"), ("D", "F", "A"), ("C", "E", "B"), ("D", "F", "B")):
        report.add(f"{a},{j} >= 1 or {b},{j} >= 1", e(a, j) >= 1 or e(b, j) >= 1, f"{e(a, j)}, {e(b, j)}")
    return report


def _mixed_members(plan: ConstructionPlan, n: int) -> list[Pattern]:
    if not plan.truncated(n).is_mixed:
        raise ValueError("the reduced-product identity is stated for mixed plans (one pattern per level)")
    return [plan.collection(k).members[0] for k in range(1, n + 1)]


def level_path_matrices(plan: ConstructionPlan, n: int, max_squares: int = 20_000_000) -> list[np.ndarray]:
    """``M(1), ..., M(n)`` from substituted paths; works for supermixed plans without a grid."""
    return [matrix_from_paths(paths) for _, paths in iterate_level_paths(plan, n, max_squares)]


def reduced_product_check(plan: ConstructionPlan, n: int, cap: int = DEFAULT_GRID_CAP) -> Report:
    """Reduced matrix of the level-``n`` set versus the ordered product of the per-level reduced matrices.

    The level-``n`` matrix is extracted from the built grid when it fits under
    ``cap`` and from substituted paths otherwise.  Also checks that reduction
    is multiplicative on every consecutive pair ``(M(k-1), M_k)``.
    """
    members = _mixed_members(plan, n)
    report = Report(f"reduced product, level {n}")
    Ms = [path_matrix(p) for p in members]
    product = identity(4)
    for M in Ms:
        product = product.dot(reduce_path_matrix(M))
    if prod(plan.widths[:n]) <= cap:
        observed = path_matrix(build_to_level(plan, n, cap=cap).grid)
        route = "grid"
    else:
        observed = level_path_matrices(plan, n)[-1]
        route = "substituted paths"
    reduced = reduce_path_matrix(observed)
    same = bool((reduced == product).all())
    report.add("reduce(M(n)) = product of reduce(M_k)", same, f"M(n) from {route}")
    running = Ms[0]
    for k, M in enumerate(Ms[1:], 2):
        ok = reduction_is_multiplicative(running, M)
        report.add(f"reduce(M({k - 1}) M_{k}) = reduce(M({k - 1})) reduce(M_{k})", ok)
        running = running.dot(M)
    return report


def virtual_matrix(m: int) -> np.ndarray:
    if m < 4:
        raise ValueError(f"the virtual matrix is defined for m >= 4, got {m}")
    return int_matrix([
        [m - 2, 0, 1, 1],
        [0, m - 2, 1, 1],
        [1, 1, m - 1, 0],
        [1, 1, 0, m - 1],
    ])


def _weights(c: Fraction) -> np.ndarray:
    return np.array([Fraction(1), Fraction(1), 1 + c, 1 + c], dtype=object)


def _bracket(c) -> tuple[Fraction, ...]:
    if c is None:
        return certified_c()
    if isinstance(c, tuple):
        lo, hi = (Fraction(x) for x in c)
        return (lo, hi) if lo != hi else (lo,)
    return (Fraction(c),)


def blocked_inequality_check(M, m: int | None = None, c=None) -> Report:
    """``reduce(M) w >= L(m) w`` entrywise with ``w = (1, 1, 1+c, 1+c)``.

    ``c`` is a rational, a ``(lo, hi)`` bracket, or ``None`` for the certified
    bracket around ``(sqrt(17) - 3)/4``.  ``M`` may also be a blocked pattern.
    """
    if isinstance(M, Pattern):
        if not is_blocked(M):
            raise InvalidPatternError(f"{M.name or 'pattern'} is not horizontally and vertically blocked")
        m = M.width
        M = path_matrix(M)
    elif m is None:
        raise ValueError("the width m is needed when a bare matrix is given")
    points = _bracket(c)
    if not all(0 < x < 1 for x in points):
        raise ValueError("c must lie in (0, 1)")
    reduced = reduce_path_matrix(M)
    L = virtual_matrix(m)
    report = Report(f"blocked inequality, m = {m}")
    for x in points:
        w = _weights(x)
        lhs, rhs = reduced.dot(w), L.dot(w)
        for name, a, b in zip(REDUCED_ROWS, lhs, rhs):
            report.add(f"row {name} at c = {x}", a >= b, f"{a} >= {b}" if a >= b else f"{a} < {b}")
    return report


def kappa_for(c) -> Fraction:
    c = Fraction(c)
    return min(2 * c, (1 - c) / (1 + c))


def kappa_bound_check(ms: Iterable[int], c=None, kappa=None) -> Report:
    """``L(m) w >= (m + kappa) w`` for every ``m`` in ``ms``.

    Both entries of the comparison are affine in ``m`` with equal slopes, so
    the constant terms decide it; the per-``m`` evaluation is kept as a
    second route.
    """
    c = C_STAR if c is None else Fraction(c)
    kappa = kappa_for(c) if kappa is None else Fraction(kappa)
    ms = list(ms)
    report = Report(f"kappa bound, c = {c}, kappa = {kappa}")
    report.add("slope comparison: 2c >= kappa", 2 * c >= kappa)
    report.add("slope comparison: 1 - c >= (1 + c) kappa", 1 - c >= (1 + c) * kappa)
    failing = []
    for m in ms:
        if m < 4:
            raise ValueError("m must be at least 4")
        w = _weights(c)
        lhs = virtual_matrix(m).dot(w)
        rhs = (m + kappa) * w
        if not all(a >= b for a, b in zip(lhs, rhs)):
            failing.append(m)
    span = f"m in [{min(ms)}, {max(ms)}]" if ms else "no m"
    report.add(f"entrywise for {span}", not failing,
               f"fails at m = {', '.join(map(str, failing[:10]))}" if failing else f"{len(ms)} widths")
    return report


def kappa_optimum() -> tuple[float, float]:
    """Numerical maximiser of ``min(2c, (1-c)/(1+c))`` on ``(0, 1)`` and its value."""
    res = minimize_scalar(lambda c: -min(2 * c, (1 - c) / (1 + c)), bounds=(0.0, 1.0),
                          method="bounded", options={"xatol": 1e-12})
    return float(res.x), float(-res.fun)


@dataclass(frozen=True)
class GrowthLevel:
    level: int
    v: tuple[Fraction, Fraction, Fraction, Fraction]
    bound: Fraction | None
    inverse_width_sum: Fraction

    @property
    def min_entry(self) -> Fraction:
        return min(self.v)


@dataclass(frozen=True)
class GrowthDiagnostics:
    """``v_n = reduce(M(n)) 1 / m(n)`` per level, with the lower-bound product when it applies.

    ``bound`` is ``None`` for plans whose patterns are not all blocked or that
    are supermixed; no bound is asserted there.
    """

    levels: tuple[GrowthLevel, ...]
    c: Fraction
    kappa: Fraction
    blocked: bool
    mixed: bool

    @property
    def bound_holds(self) -> bool | None:
        if not (self.blocked and self.mixed):
            return None
        return all(lv.min_entry >= lv.bound for lv in self.levels)

    def first_level_exceeding(self, threshold, which: str = "v") -> int | None:
        for lv in self.levels:
            value = lv.min_entry if which == "v" else lv.bound
            if value is not None and value > threshold:
                return lv.level
        return None

    def divergence_status(self) -> str:
        s = self.levels[-1].inverse_width_sum
        return (f"sum of 1/m_k over {len(self.levels)} levels = {s} (~{float(s):.6g}); "
                "divergence of the full series cannot be decided from a finite plan")


def growth_diagnostics(plan: ConstructionPlan, n: int, c=None) -> GrowthDiagnostics:
    c = C_STAR if c is None else Fraction(c)
    kappa = kappa_for(c)
    mixed = plan.truncated(n).is_mixed
    blocked = min(plan.widths[:n]) >= 4 and all(
        is_blocked(p) for k in range(1, n + 1) for p in plan.collection(k).members)
    if mixed:
        reduced = [reduce_path_matrix(path_matrix(plan.collection(k).members[0])) for k in range(1, n + 1)]
    else:
        reduced = [reduce_path_matrix(M) for M in level_path_matrices(plan, n)]
    ones = np.array([Fraction(1)] * 4, dtype=object)
    levels = []
    running = identity(4)
    bound = 1 / (1 + c)
    inv_sum = Fraction(0)
    for k in range(1, n + 1):
        m = plan.widths[k - 1]
        inv_sum += Fraction(1, m)
        bound *= 1 + kappa / m
        if mixed:
            running = running.dot(reduced[k - 1])
            v = running.dot(ones) / prod(plan.widths[:k])
        else:
            v = reduced[k - 1].dot(ones) / prod(plan.widths[:k])
        levels.append(GrowthLevel(k, tuple(Fraction(x) for x in v), bound if (blocked and mixed) else None, inv_sum))
    return GrowthDiagnostics(tuple(levels), c, kappa, blocked, mixed)


@dataclass(frozen=True)
class DimensionEstimate:
    """``d_n = log(length of the kind-i path) / log m(n)`` for each kind and level."""

    values: tuple[tuple[float, ...], ...]
    lengths: tuple[tuple[int, ...], ...]
    widths: tuple[int, ...]

    def series(self, kind: str = "A") -> list[float]:
        i = "ABCDEF".index(kind)
        return [row[i] for row in self.values]

    def running_inf(self, kind: str = "A") -> list[float]:
        return list(np.minimum.accumulate(self.series(kind)))

    def running_sup(self, kind: str = "A") -> list[float]:
        return list(np.maximum.accumulate(self.series(kind)))


def _log_ratio(count: int, width: int) -> float:
    return math.log(count) / math.log(width)


def box_dimension_estimate(plan: ConstructionPlan, n_max: int, max_squares: int = 20_000_000) -> DimensionEstimate:
    """Mixed plans use matrix products; supermixed plans walk substituted paths."""
    if plan.truncated(n_max).is_mixed:
        Ms = []
        running = identity()
        for k in range(1, n_max + 1):
            running = running.dot(path_matrix(plan.collection(k).members[0]))
            Ms.append(running)
    else:
        Ms = level_path_matrices(plan, n_max, max_squares)
    values, lengths = [], []
    for k, M in enumerate(Ms, 1):
        width = prod(plan.widths[:k])
        row_lengths = tuple(int(x) for x in M.dot(np.ones(6, dtype=object)))
        d = tuple(_log_ratio(x, width) for x in row_lengths)
        if not all(0 <= x <= 2 + 1e-12 for x in d):
            raise AssertionError(f"dimension estimate outside [0, 2] at level {k}: {d}")
        values.append(d)
        lengths.append(row_lengths)
    return DimensionEstimate(tuple(values), tuple(lengths), plan.widths[:n_max])


@dataclass(frozen=True)
class ExitCoordinates:
    """Partial sums of the top-exit abscissa and left-exit ordinate series."""

    top_x: tuple[Fraction, ...]
    left_y: tuple[Fraction, ...]
    bound: Fraction


def exit_coordinates(plan: ConstructionPlan, N: int) -> ExitCoordinates:
    if not 1 <= N <= plan.depth:
        raise ValueError(f"N must lie in 1..{plan.depth}")
    top, left = [], []
    sx = sy = Fraction(0)
    scale = 1
    for k in range(1, N + 1):
        pattern = plan.collection(k).members[0]
        _, pos = find_exits(pattern)
        m = pattern.width
        scale *= m
        sx += Fraction(pos.c - 1, scale)
        sy += Fraction(m - pos.r, scale)
        top.append(sx)
        left.append(sy)
    return ExitCoordinates(tuple(top), tuple(left), Fraction(1, scale))


def growth_csv(g: GrowthDiagnostics) -> str:
    lines = ["level,v_A,v_B,v_CE,v_DF,lower_bound,inverse_width_sum"]
    for lv in g.levels:
        bound = "" if lv.bound is None else str(lv.bound)
        lines.append(",".join([str(lv.level), *map(str, lv.v), bound, str(lv.inverse_width_sum)]))
    return "\n".join(lines) + "\n"


def dimension_csv(d: DimensionEstimate) -> str:
    lines = ["level," + ",".join(f"d_{k}" for k in "ABCDEF")]
    for k, row in enumerate(d.values, 1):
        lines.append(f"{k}," + ",".join(f"{x:.12g}" for x in row))
    return "\n".join(lines) + "\n"


def exits_csv(e: ExitCoordinates) -> str:
    lines = ["terms,top_x,left_y,bound"]
    for k, (x, y) in enumerate(zip(e.top_x, e.left_y), 1):
        lines.append(f"{k},{x},{y},{e.bound if k == len(e.top_x) else ''}")
    return "\n".join(lines) + "\n"
