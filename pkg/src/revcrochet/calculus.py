"""Arclength in row units, local extrema, and per-row x landmarks.

The driving quantity is the curve's arclength measured in crochet rows:

    rows(lo, hi) = (scale * row_gauge / 4) * integral of sqrt(1 + f'(x)^2)

Each segment between consecutive extrema gets round(rows) crochet rows,
and the i-th row landmark is the x where the accumulated arclength from
the segment start reaches i equal shares.  Landmarks are reported to two
decimal places; the downstream stitch counts use the rounded values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .expression import Expr, EvalDomainError, compile_expr, differentiate, render

QUAD_TOL = 1e-8
QUAD_MAX_DEPTH = 50
LANDMARK_XTOL = 1e-4      # bisection bracket width; finer than the 0.01 reporting step
EXTREMUM_XTOL = 1e-9
EXTREMUM_DEDUPE = 1e-6
EXTREMUM_GRID = 4096      # subintervals scanned for f' sign changes
VALIDATION_GRID = 2048    # subintervals sampled for positivity / f' definedness


class SpecValidationError(ValueError):
    """The six inputs do not describe a crochetable surface."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature hit the depth limit without converging."""


def round_half_away(v: float) -> int:
    """Round to the nearest integer, ties away from zero."""
    return math.floor(v + 0.5) if v >= 0 else math.ceil(v - 0.5)


def round_landmark(x: float) -> float:
    """Round an x landmark to two decimals, ties away from zero."""
    return round_half_away(x * 100.0) / 100.0


@dataclass(frozen=True)
class PatternSpec:
    """The six user inputs: f, its interval, gauge, and physical scale."""

    func: Expr
    a: float
    b: float
    stitch_gauge: int   # stitches per 4 inches
    row_gauge: int      # rows per 4 inches
    scale: float        # inches per x unit
    source: str | None = None

    @property
    def function_text(self) -> str:
        return self.source if self.source is not None else render(self.func)

    @property
    def rows_per_unit(self) -> float:
        return self.scale * self.row_gauge / 4.0

    @property
    def stitches_per_unit(self) -> float:
        return self.scale * self.stitch_gauge / 4.0

    def validate(self) -> None:
        """Check the invariants; raises SpecValidationError.

        f >= 0 at the endpoints, f > 0 on the open interval, and f'
        defined on [a, b] are checked by dense sampling (VALIDATION_GRID
        subintervals), which is as strong a guarantee as sampling can give.
        """
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise SpecValidationError("a and b must be finite")
        if not self.a < self.b:
            raise SpecValidationError("a must be less than b")
        if not isinstance(self.stitch_gauge, int) or self.stitch_gauge < 1:
            raise SpecValidationError("stitch gauge must be a positive integer")
        if not isinstance(self.row_gauge, int) or self.row_gauge < 1:
            raise SpecValidationError("row gauge must be a positive integer")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise SpecValidationError("scale must be a positive number")

        f = compile_expr(self.func)
        fp = compile_expr(differentiate(self.func))
        n = VALIDATION_GRID
        step = (self.b - self.a) / n
        for i in range(n + 1):
            x = self.a + i * step
            try:
                y = f(x)
            except (ValueError, ZeroDivisionError, OverflowError) as exc:
                raise SpecValidationError(f"f is undefined at x={x!r}: {exc}") from exc
            if isinstance(y, complex) or not math.isfinite(y):
                raise SpecValidationError(f"f is not finite at x={x!r}")
            if y < 0:
                raise SpecValidationError(f"f must be nonnegative on [a, b]; f({x!r}) = {y!r}")
            if y == 0 and 0 < i < n:
                raise SpecValidationError(
                    f"f must be positive on the open interval; f({x!r}) = 0"
                )
            try:
                dy = fp(x)
            except (ValueError, ZeroDivisionError, OverflowError) as exc:
                raise SpecValidationError(f"f' is undefined at x={x!r}: {exc}") from exc
            if isinstance(dy, complex) or not math.isfinite(dy):
                raise SpecValidationError(f"f' is not finite at x={x!r}")


@dataclass(frozen=True)
class Segment:
    """One stretch between consecutive extrema (or the endpoints)."""

    lo: float
    hi: float
    arclength_rows: float
    row_count: int


@dataclass(frozen=True)
class LandmarkPlan:
    """Ordered segments plus the merged landmark list x_0 .. x_n."""

    segments: tuple[Segment, ...]
    landmarks: tuple[float, ...]
    total_rows: int


def adaptive_simpson(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = QUAD_TOL,
    max_depth: int = QUAD_MAX_DEPTH,
) -> float:
    """Adaptive Simpson quadrature of g over [lo, hi] to absolute tol."""
    if hi == lo:
        return 0.0
    mid = 0.5 * (lo + hi)
    fa, fm, fb = g(lo), g(mid), g(hi)
    whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_step(g, lo, hi, fa, fm, fb, whole, tol, max_depth)


def _simpson_step(g, lo, hi, fa, fm, fb, whole, tol, depth):
    mid = 0.5 * (lo + hi)
    lmid, rmid = 0.5 * (lo + mid), 0.5 * (mid + hi)
    flm, frm = g(lmid), g(rmid)
    left = (mid - lo) / 6.0 * (fa + 4.0 * flm + fm)
    right = (hi - mid) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureError(
            f"quadrature did not converge on [{lo!r}, {hi!r}] after the depth limit"
        )
    half = 0.5 * tol
    return _simpson_step(g, lo, mid, fa, flm, fm, left, half, depth - 1) + _simpson_step(
        g, mid, hi, fm, frm, fb, right, half, depth - 1
    )


@lru_cache(maxsize=128)
def _arc_integrand(func: Expr) -> Callable[[float], float]:
    """sqrt(1 + f'(x)^2) as a compiled callable, cached per tree."""
    fp = compile_expr(differentiate(func))

    def g(x: float) -> float:
        d = fp(x)
        return math.sqrt(1.0 + d * d)

    return g


def arclength_rows(spec: PatternSpec, lo: float, hi: float) -> float:
    """Arclength of f over [lo, hi] converted to row units."""
    if not (spec.a <= lo < hi <= spec.b):
        raise ValueError(f"need a <= lo < hi <= b, got lo={lo!r}, hi={hi!r}")
    g = _arc_integrand(spec.func)
    try:
        raw = adaptive_simpson(g, lo, hi)
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise EvalDomainError(f"f' undefined somewhere in [{lo!r}, {hi!r}]") from exc
    return spec.rows_per_unit * raw


def find_extrema(spec: PatternSpec) -> list[float]:
    """x values in (a, b) where f' changes sign, sorted ascending.

    Sign changes are detected on a uniform grid of EXTREMUM_GRID
    subintervals and then located by bisection to EXTREMUM_XTOL; results
    closer together than EXTREMUM_DEDUPE are merged.
    """
    fp = compile_expr(differentiate(spec.func))
    n = EXTREMUM_GRID
    step = (spec.b - spec.a) / n

    def deriv(x):
        try:
            return fp(x)
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise EvalDomainError(f"f' undefined at x={x!r}") from exc

    roots = []
    last_x = None
    last_sign = 0
    for i in range(n + 1):
        x = spec.a + i * step
        v = deriv(x)
        s = (v > 0) - (v < 0)
        if s == 0:
            continue
        if last_sign != 0 and s != last_sign:
            roots.append(_bisect_sign_change(deriv, last_x, x, last_sign))
        last_x, last_sign = x, s

    merged = []
    for r in roots:
        if merged and r - merged[-1] <= EXTREMUM_DEDUPE:
            continue
        # extrema essentially at a or b belong to the endpoints, not the interior
        if r - spec.a <= EXTREMUM_DEDUPE or spec.b - r <= EXTREMUM_DEDUPE:
            continue
        merged.append(r)
    return merged


def _bisect_sign_change(deriv, lo, hi, lo_sign):
    while hi - lo > EXTREMUM_XTOL:
        mid = 0.5 * (lo + hi)
        v = deriv(mid)
        if v == 0.0:
            return mid
        if ((v > 0) - (v < 0)) == lo_sign:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_landmarks(spec: PatternSpec, seg: Segment) -> list[float]:
    """Landmarks x_0 .. x_rowcount for one segment.

    Interior landmark i satisfies rows(seg.lo, x_i) = i * L / row_count,
    with the arclength always accumulated from seg.lo; each is found by
    bisection (the accumulated arclength is strictly increasing) and then
    rounded to two decimals.  The segment endpoints are returned unrounded.
    """
    g = _arc_integrand(spec.func)
    factor = spec.rows_per_unit
    xs = [seg.lo]
    xl, al = seg.lo, 0.0  # left bracket and its accumulated arclength in rows
    for i in range(1, seg.row_count):
        target = i * seg.arclength_rows / seg.row_count
        xr = seg.hi
        while xr - xl > LANDMARK_XTOL:
            mid = 0.5 * (xl + xr)
            amid = al + factor * adaptive_simpson(g, xl, mid)
            if amid < target:
                xl, al = mid, amid
            else:
                xr = mid
        xs.append(round_landmark(0.5 * (xl + xr)))
    xs.append(seg.hi)
    return xs


def build_plan(spec: PatternSpec, prioritize_extrema: bool = True) -> LandmarkPlan:
    """Segment the interval and place one landmark per crochet row.

    With prioritize_extrema, segment boundaries are {a, extrema.., b} so
    every local extremum lands exactly on a row; otherwise [a, b] is one
    segment.  Shared boundary landmarks are deduplicated when segments
    are concatenated.
    """
    spec.validate()
    bounds = [spec.a]
    if prioritize_extrema:
        bounds.extend(find_extrema(spec))
    bounds.append(spec.b)

    segments: list[Segment] = []
    landmarks: list[float] = []
    for lo, hi in zip(bounds, bounds[1:]):
        length = arclength_rows(spec, lo, hi)
        seg = Segment(lo, hi, length, max(1, round_half_away(length)))
        pts = solve_landmarks(spec, seg)
        landmarks.extend(pts if not landmarks else pts[1:])
        segments.append(seg)
    total = sum(s.row_count for s in segments)
    return LandmarkPlan(tuple(segments), tuple(landmarks), total)
