"""Per-row stitch counts and increase/decrease placement.

A row at landmark x gets round(2*pi * scale * stitch_gauge/4 * f(x))
stitches.  When consecutive rows differ by n stitches, the n shaping ops
are laid out by the remainder method: with min(s_prev, s_cur) = q*n + r,
the ops sit at instruction positions {q*j + k} for a shift k in [1, q+r].
The shift is chosen to keep this row's ops far from the previous row's on
the circle: maximize the minimum circular distance d1 between the two
rows' position ratios, break ties by the larger mean nearest-neighbor
distance d2.  Ratios are exact fractions so ties compare exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .calculus import LandmarkPlan, PatternSpec, round_half_away
from .expression import compile_expr

OP_NONE = "none"
OP_INCREASE = "increase"
OP_DECREASE = "decrease"


@dataclass(frozen=True)
class RowShaping:
    """Shaping decision for one row.

    positions are 1-indexed instruction slots; for a shaped row they are
    {q*j + k : 0 <= j < n_ops} with 1 <= k <= q + r, and an increase row
    consumes min(s_prev, s_cur) instructions while producing s_cur stitches.
    steep marks a row whose stitch change exceeds what single increases or
    decreases can do (n_ops > min); it carries no positions.
    """

    index: int
    x: float
    stitches: int
    op: str
    n_ops: int = 0
    q: int | None = None
    r: int | None = None
    k: int | None = None
    positions: tuple[int, ...] = ()
    steep: bool = False


def stitch_count(spec: PatternSpec, x: float) -> int:
    """Stitches around the surface at landmark x."""
    if not (spec.a <= x <= spec.b):
        raise ValueError(f"x={x!r} outside [{spec.a!r}, {spec.b!r}]")
    y = spec.func.evaluate(x)
    return round_half_away(2.0 * math.pi * spec.stitches_per_unit * y)


def row_counts(spec: PatternSpec, plan: LandmarkPlan) -> list[int]:
    """Stitch count at every landmark of the plan, in order."""
    f = compile_expr(spec.func)
    factor = 2.0 * math.pi * spec.stitches_per_unit
    return [round_half_away(factor * f(x)) for x in plan.landmarks]


def circular_distance(u, v):
    """Distance between two positions on the unit circle, in [0, 1/2].

    Works for floats and Fractions alike; only the values mod 1 matter.
    """
    d = abs(v - u) % 1
    return min(d, 1 - d)


def d1(prev_ratios: Iterable, cur_ratios: Iterable):
    """Smallest circular distance between any pair across the two sets."""
    prev_ratios, cur_ratios = list(prev_ratios), list(cur_ratios)
    if not prev_ratios or not cur_ratios:
        raise ValueError("d1 needs two nonempty ratio sets")
    return min(circular_distance(u, v) for u in prev_ratios for v in cur_ratios)


def d2(prev_ratios: Iterable, cur_ratios: Iterable):
    """Mean over cur_ratios of the distance to the nearest prev ratio.

    This is the tie-breaking measure: on average, how far each of this
    row's ops sits from the closest op of the reference row.
    """
    prev_ratios, cur_ratios = list(prev_ratios), list(cur_ratios)
    if not prev_ratios or not cur_ratios:
        raise ValueError("d2 needs two nonempty ratio sets")
    total = sum(min(circular_distance(u, v) for u in prev_ratios) for v in cur_ratios)
    return total / len(cur_ratios)


def ratio_set(positions: Sequence[int], denom: int) -> tuple[Fraction, ...]:
    """Positions normalized by the row's instruction count, as fractions."""
    return tuple(Fraction(p, denom) for p in positions)


def placement_candidates(
    prev_positions: Sequence[int], prev_denom: int, s_prev: int, s_cur: int
):
    """All k-shift candidates with their exact d1/d2 against the reference row.

    Returns (k, positions, d1, d2) tuples for k = 1 .. q+r, in k order.
    """
    n_ops = abs(s_cur - s_prev)
    low = min(s_prev, s_cur)
    if n_ops == 0 or n_ops > low:
        raise ValueError("no remainder-method candidates for this stitch change")
    q, r = divmod(low, n_ops)
    prev_ratios = ratio_set(prev_positions, prev_denom)
    out = []
    for k in range(1, q + r + 1):
        positions = tuple(q * j + k for j in range(n_ops))
        ratios = ratio_set(positions, low)
        out.append((k, positions, d1(prev_ratios, ratios), d2(prev_ratios, ratios)))
    return out


def optimize_placement(
    prev_positions: Sequence[int],
    prev_denom: int,
    s_prev: int,
    s_cur: int,
    *,
    index: int = 0,
    x: float = 0.0,
) -> RowShaping:
    """Choose shaping positions for a row that goes s_prev -> s_cur stitches.

    Scans k = 1 .. q+r starting from the k=1 layout, replacing it only on a
    strictly larger d1, or on equal d1 with strictly larger d2 (so the
    earliest k wins ties).  With no reference positions the k=1 layout is
    returned unoptimized.  A change bigger than min(s_prev, s_cur) cannot be
    worked with single increases/decreases and comes back flagged steep.
    """
    n_ops = abs(s_cur - s_prev)
    if n_ops == 0:
        return RowShaping(index, x, s_cur, OP_NONE)
    op = OP_INCREASE if s_cur > s_prev else OP_DECREASE
    low = min(s_prev, s_cur)
    if n_ops > low:
        return RowShaping(index, x, s_cur, op, n_ops=n_ops, steep=True)
    q, r = divmod(low, n_ops)

    best_k = 1
    best = tuple(q * j + 1 for j in range(n_ops))
    if prev_positions:
        prev_ratios = ratio_set(prev_positions, prev_denom)
        prev_distance = Fraction(0)
        prev_mean = Fraction(0)
        for k in range(1, q + r + 1):
            candidate = tuple(q * j + k for j in range(n_ops))
            ratios = ratio_set(candidate, low)
            new_distance = d1(prev_ratios, ratios)
            new_mean = d2(prev_ratios, ratios)
            if new_distance > prev_distance or (
                new_distance == prev_distance and new_mean > prev_mean
            ):
                prev_distance, prev_mean = new_distance, new_mean
                best, best_k = candidate, k
    return RowShaping(
        index, x, s_cur, op, n_ops=n_ops, q=q, r=r, k=best_k, positions=best
    )


def shape_rows(spec: PatternSpec, plan: LandmarkPlan) -> list[RowShaping]:
    """Shaping decisions for every row of the plan, in crochet order.

    Row 0 is the cast-on at the first landmark.  A zero-stitch landmark at
    either end (the surface closes to a point there) is dropped here; the
    cast-on or the closing instruction takes its place.  Each shaped row is
    optimized against the most recent row that actually had shaping ops.
    """
    counts = row_counts(spec, plan)
    start = 1 if counts[0] == 0 and len(counts) > 1 else 0
    end = len(counts) - 1 if counts[-1] == 0 and len(counts) - 1 > start else len(counts)

    xs = plan.landmarks[start:end]
    counts = counts[start:end]
    rows = [RowShaping(0, xs[0], counts[0], OP_NONE)]
    ref_positions: tuple[int, ...] = ()
    ref_denom = 1
    for i in range(1, len(counts)):
        row = optimize_placement(
            ref_positions, ref_denom, counts[i - 1], counts[i], index=i, x=xs[i]
        )
        rows.append(row)
        if row.positions:
            ref_positions = row.positions
            ref_denom = min(counts[i - 1], counts[i])
    return rows
