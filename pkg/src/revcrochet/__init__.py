"""Crochet patterns for surfaces of revolution.

Revolve a positive function f about the x-axis over [a, b]; given a
crochet gauge and a physical scale, this package places one row landmark
per row of fabric by arclength, counts stitches around each landmark,
spreads the increases and decreases so they avoid the previous row's, and
renders the whole thing as a pattern (text, JSON, or an SVG plot).
"""

from .calculus import (
    LandmarkPlan,
    PatternSpec,
    QuadratureError,
    Segment,
    SpecValidationError,
    arclength_rows,
    build_plan,
    find_extrema,
    solve_landmarks,
)
from .emit import (
    PatternDoc,
    PatternRow,
    doc_from_json,
    instruction_totals,
    render_json,
    render_pattern,
    render_row,
    render_svg,
)
from .expression import (
    EvalDomainError,
    ExpressionError,
    Expr,
    ParseError,
    differentiate,
    evaluate,
    parse,
    render,
)
from .shaping import (
    RowShaping,
    circular_distance,
    d1,
    d2,
    optimize_placement,
    placement_candidates,
    ratio_set,
    row_counts,
    shape_rows,
    stitch_count,
)

__version__ = "0.1.0"

__all__ = [
    "EvalDomainError",
    "ExpressionError",
    "Expr",
    "LandmarkPlan",
    "ParseError",
    "PatternDoc",
    "PatternRow",
    "PatternSpec",
    "QuadratureError",
    "RowShaping",
    "Segment",
    "SpecValidationError",
    "arclength_rows",
    "build_plan",
    "circular_distance",
    "d1",
    "d2",
    "differentiate",
    "doc_from_json",
    "evaluate",
    "find_extrema",
    "instruction_totals",
    "optimize_placement",
    "parse",
    "placement_candidates",
    "ratio_set",
    "render",
    "render_json",
    "render_pattern",
    "render_row",
    "render_svg",
    "row_counts",
    "shape_rows",
    "solve_landmarks",
    "stitch_count",
]
