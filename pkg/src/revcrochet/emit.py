"""Render shaping rows into crochet instructions and export the pattern.

Text dialect, one row per line:

    Row 0: Chain 6. join work, and Sc6.          (open start)
    Row 0: Create a magic ring with 6 stitches.  (closed start)
    Row 5:  Sc6, Inc, *Sc3, Inc* (5 times), Sc2. (35 stitches)
    Tie off                                       (open end)

A shaped row with ops at {q*j + k} renders as the split-first form
"Sc(k-1), Op, *Sc(q-1), Op* (n-1 times), Sc(t)" with t = q + r - k;
zero-length Sc runs are omitted, the starred group is omitted when n = 1,
and the k = q, t = 0 case collapses to "*Sc(q-1), Op* (n times)".
Warning notes go at the top of the pattern; stuffing and closing lines at
the bottom.  The JSON export carries the full structure (schema_version 1)
and the SVG export plots the curve with one marker per row landmark.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import asdict, dataclass

from .calculus import LandmarkPlan, PatternSpec
from .expression import compile_expr
from .shaping import OP_DECREASE, OP_INCREASE, OP_NONE, RowShaping, stitch_count

SCHEMA_VERSION = 1
SVG_SAMPLES = 512
OP_CAST_ON = "cast-on"

STUFFING_LINE = "Stuff the shape with fiberfill before closing."
CLOSING_LINE = "Dec to close; tie off and weave in end."
TIE_OFF_LINE = "Tie off"


@dataclass(frozen=True)
class PatternRow:
    row: int
    x: float
    stitches: int
    op: str
    n_ops: int
    q: int | None
    r: int | None
    k: int | None
    positions: tuple[int, ...]
    instruction: str


@dataclass(frozen=True)
class PatternDoc:
    """A finished pattern: metadata, warnings, rows, and closure handling."""

    function: str
    a: float
    b: float
    stitch_gauge: int
    row_gauge: int
    scale: float
    prioritize_extrema: bool
    total_rows: int
    closed_start: bool
    closed_end: bool
    stuffed: bool
    warnings: tuple[str, ...]
    landmarks: tuple[float, ...]
    rows: tuple[PatternRow, ...]
    finishing: tuple[str, ...]

    def to_text(self) -> str:
        lines = [f"Note: {w}" for w in self.warnings]
        lines.extend(r.instruction for r in self.rows)
        lines.extend(self.finishing)
        return "\n".join(lines) + "\n"


def _op_word(op: str) -> str:
    return "Inc" if op == OP_INCREASE else "Dec"


def render_row(shaping: RowShaping) -> str:
    """Instruction text for one row, ending with its stitch total."""
    total = f" ({shaping.stitches} stitches)"
    if shaping.op == OP_NONE:
        return f"Sc{shaping.stitches}.{total}"
    if shaping.steep:
        kind = "increases" if shaping.op == OP_INCREASE else "decreases"
        return f"This row cannot be worked with single {kind}; see the note at the top.{total}"
    opw = _op_word(shaping.op)
    n, q, k = shaping.n_ops, shaping.q, shaping.k
    t = q + shaping.r - k  # plain stitches after the last op
    star = f"*Sc{q - 1}, {opw}*" if q > 1 else f"*{opw}*"
    if k == q and t == 0:
        return f"{star} ({n} times).{total}"
    parts = []
    if k > 1:
        parts.append(f"Sc{k - 1}")
    parts.append(opw)
    if n > 1:
        parts.append(f"{star} ({n - 1} times)")
    if t > 0:
        parts.append(f"Sc{t}")
    return ", ".join(parts) + "." + total


def render_pattern(
    spec: PatternSpec,
    plan: LandmarkPlan,
    rows: list[RowShaping],
    prioritize_extrema: bool = True,
) -> PatternDoc:
    """Assemble the full document from shaping decisions.

    rows[0] is the cast-on row (see shaping.shape_rows): a chain when the
    surface is open at the start, a magic ring when f reaches zero there.
    Steep rows produce a note at the top naming the row.
    """
    closed_start = stitch_count(spec, spec.a) == 0
    closed_end = stitch_count(spec, spec.b) == 0
    stuffed = closed_start and closed_end

    warnings = []
    pattern_rows = []
    for i, sh in enumerate(rows):
        if i == 0:
            if closed_start:
                body = f"Create a magic ring with {sh.stitches} stitches."
            else:
                body = f"Chain {sh.stitches}. join work, and Sc{sh.stitches}."
            line = f"Row 0: {body}"
            op = OP_CAST_ON
        else:
            line = f"Row {sh.index}:  {render_row(sh)}"
            op = sh.op
            if sh.steep:
                prev = rows[i - 1].stitches
                warnings.append(
                    f"Row {sh.index} goes from {prev} to {sh.stitches} stitches, "
                    "which more than doubles or more than halves the row; single "
                    "increases or decreases cannot work that change. Add a positive "
                    "constant to the function or adjust the scale."
                )
        pattern_rows.append(
            PatternRow(
                row=sh.index,
                x=sh.x,
                stitches=sh.stitches,
                op=op,
                n_ops=sh.n_ops,
                q=sh.q,
                r=sh.r,
                k=sh.k,
                positions=sh.positions,
                instruction=line,
            )
        )

    finishing = []
    if stuffed:
        finishing.append(STUFFING_LINE)
    finishing.append(CLOSING_LINE if closed_end else TIE_OFF_LINE)

    return PatternDoc(
        function=spec.function_text,
        a=spec.a,
        b=spec.b,
        stitch_gauge=spec.stitch_gauge,
        row_gauge=spec.row_gauge,
        scale=spec.scale,
        prioritize_extrema=prioritize_extrema,
        total_rows=plan.total_rows,
        closed_start=closed_start,
        closed_end=closed_end,
        stuffed=stuffed,
        warnings=tuple(warnings),
        landmarks=tuple(plan.landmarks),
        rows=tuple(pattern_rows),
        finishing=tuple(finishing),
    )


def render_json(doc: PatternDoc) -> str:
    """Serialize the document; key order is fixed by construction."""
    obj = {
        "schema_version": SCHEMA_VERSION,
        "function": doc.function,
        "a": doc.a,
        "b": doc.b,
        "stitch_gauge": doc.stitch_gauge,
        "row_gauge": doc.row_gauge,
        "scale": doc.scale,
        "prioritize_extrema": doc.prioritize_extrema,
        "total_rows": doc.total_rows,
        "closed_start": doc.closed_start,
        "closed_end": doc.closed_end,
        "stuffed": doc.stuffed,
        "warnings": list(doc.warnings),
        "landmarks": list(doc.landmarks),
        "rows": [asdict(r) | {"positions": list(r.positions)} for r in doc.rows],
        "finishing": list(doc.finishing),
    }
    return json.dumps(obj, indent=2) + "\n"


def doc_from_json(text: str) -> PatternDoc:
    """Rebuild a PatternDoc from render_json output (exact roundtrip)."""
    obj = json.loads(text)
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {obj.get('schema_version')!r}")
    rows = tuple(
        PatternRow(
            row=r["row"],
            x=r["x"],
            stitches=r["stitches"],
            op=r["op"],
            n_ops=r["n_ops"],
            q=r["q"],
            r=r["r"],
            k=r["k"],
            positions=tuple(r["positions"]),
            instruction=r["instruction"],
        )
        for r in obj["rows"]
    )
    return PatternDoc(
        function=obj["function"],
        a=obj["a"],
        b=obj["b"],
        stitch_gauge=obj["stitch_gauge"],
        row_gauge=obj["row_gauge"],
        scale=obj["scale"],
        prioritize_extrema=obj["prioritize_extrema"],
        total_rows=obj["total_rows"],
        closed_start=obj["closed_start"],
        closed_end=obj["closed_end"],
        stuffed=obj["stuffed"],
        warnings=tuple(obj["warnings"]),
        landmarks=tuple(obj["landmarks"]),
        rows=rows,
        finishing=tuple(obj["finishing"]),
    )


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def render_svg(spec: PatternSpec, plan: LandmarkPlan) -> str:
    """Standalone SVG of f over [a, b] with one marker per landmark.

    The curve is sampled at SVG_SAMPLES points; the viewBox is the data
    bounding box padded by 5% on every side (y is negated so the curve
    reads the usual way up).  Output is deterministic for identical inputs.
    """
    f = compile_expr(spec.func)
    n = SVG_SAMPLES
    xs = [spec.a + i * (spec.b - spec.a) / (n - 1) for i in range(n)]
    ys = [f(x) for x in xs]
    marks = [(x, f(x)) for x in plan.landmarks]

    ymin, ymax = min(ys), max(ys)
    pad_x = 0.05 * (spec.b - spec.a)
    height = ymax - ymin
    pad_y = 0.05 * height if height > 0 else 0.05 * max(1.0, abs(ymax))
    vb_x = spec.a - pad_x
    vb_y = -(ymax + pad_y)
    vb_w = (spec.b - spec.a) + 2 * pad_x
    vb_h = height + 2 * pad_y
    extent = max(vb_w, vb_h)
    stroke = 0.004 * extent
    radius = 0.010 * extent

    points = " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in zip(xs, ys))
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="800" height="600" '
        f'viewBox="{_fmt(vb_x)} {_fmt(vb_y)} {_fmt(vb_w)} {_fmt(vb_h)}" '
        'preserveAspectRatio="xMidYMid meet">',
        f'<rect x="{_fmt(vb_x)}" y="{_fmt(vb_y)}" width="{_fmt(vb_w)}" '
        f'height="{_fmt(vb_h)}" fill="white"/>',
        f'<polyline fill="none" stroke="#336699" stroke-width="{_fmt(stroke)}" '
        f'points="{points}"/>',
    ]
    for x, y in marks:
        lines.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(-y)}" r="{_fmt(radius)}" fill="#cc3333"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


_CAST_ON_CHAIN = re.compile(r"^Chain (\d+)\. join work, and Sc\1\.$")
_CAST_ON_RING = re.compile(r"^Create a magic ring with (\d+) stitches\.$")
_TOKEN = re.compile(r"\*([^*]*)\* \((\d+) times\)|Sc(\d+)|Inc|Dec")


def instruction_totals(line: str) -> tuple[int, int]:
    """(consumed, produced) stitch totals of a rendered row line.

    Accepts a full "Row N: ..." line or a bare instruction body; cast-on
    rows consume 0.  Used to check stitch conservation row by row.
    """
    body = re.sub(r"^Row \d+: {1,2}", "", line.strip())
    body = re.sub(r" \(\d+ stitches\)$", "", body)
    m = _CAST_ON_CHAIN.match(body)
    if m:
        return 0, int(m.group(1))
    m = _CAST_ON_RING.match(body)
    if m:
        return 0, int(m.group(1))

    def tally(text):
        consumed = produced = 0
        for m in _TOKEN.finditer(text):
            if m.group(2) is not None:
                inner_c, inner_p = tally(m.group(1))
                times = int(m.group(2))
                consumed += inner_c * times
                produced += inner_p * times
            elif m.group(3) is not None:
                n = int(m.group(3))
                consumed += n
                produced += n
            elif m.group(0) == "Inc":
                consumed += 1
                produced += 2
            else:
                consumed += 2
                produced += 1
        return consumed, produced

    return tally(body)
