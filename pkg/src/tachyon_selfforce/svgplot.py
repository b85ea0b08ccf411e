"""Self-contained SVG rendering of a sweep series.

Rows with status "ok" and a finite series value become polyline
vertices; any other row breaks the polyline, so gaps are visible where
points were skipped (singular velocity on the grid) or failed. Computed
singular velocities inside the plotted range are drawn as dashed
vertical marker lines. Layout coordinates use binary floats; the data
itself is never round-tripped through them.
"""

from __future__ import annotations

from .nullshell import singular_betas
from .precision import DEFAULT_CONTEXT, PrecisionContext
from .records import ParsedRow

WIDTH = 800
HEIGHT = 500
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 30
MARGIN_BOTTOM = 50

DEFAULT_MARKER_COUNT = 15


def _ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    span = hi - lo
    raw = span / max(count - 1, 1)
    import math

    magnitude = 10 ** math.floor(math.log10(raw))
    for factor in (1, 2, 2.5, 5, 10):
        step = factor * magnitude
        if span / step <= count:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * span:
        ticks.append(t)
        t += step
    return ticks


def render_svg(
    rows: list[ParsedRow],
    series: str = "Z",
    title: str | None = None,
    marker_count: int = DEFAULT_MARKER_COUNT,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> str:
    """Render one series of a parsed sweep as an SVG document string."""
    points: list[tuple[float, float] | None] = []
    for row in rows:
        value = row.value(series)
        if row.status == "ok" and value is not None:
            points.append((float(row.beta), float(value)))
        else:
            points.append(None)

    finite = [p for p in points if p is not None]
    if finite:
        xs = [p[0] for p in finite]
        ys = [p[1] for p in finite]
        x_lo, x_hi = min(xs), max(xs)
        y_lo, y_hi = min(ys), max(ys)
    else:
        x_lo, x_hi, y_lo, y_hi = 0.0, 1.0, 0.0, 1.0
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    y_pad = 0.05 * (y_hi - y_lo)
    y_lo -= y_pad
    y_hi += y_pad

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(x: float) -> float:
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts: list[str] = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    parts.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    parts.append(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="#333" stroke-width="1"/>'
    )
    if title:
        parts.append(
            f'<text x="{WIDTH / 2:.1f}" y="{MARGIN_TOP - 10}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )

    for t in _ticks(x_lo, x_hi):
        parts.append(
            f'<line class="tick" x1="{sx(t):.2f}" y1="{MARGIN_TOP + plot_h}" '
            f'x2="{sx(t):.2f}" y2="{MARGIN_TOP + plot_h + 5}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{sx(t):.2f}" y="{MARGIN_TOP + plot_h + 20}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="11">{t:g}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        parts.append(
            f'<line class="tick" x1="{MARGIN_LEFT - 5}" y1="{sy(t):.2f}" '
            f'x2="{MARGIN_LEFT}" y2="{sy(t):.2f}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{sy(t):.2f}" text-anchor="end" '
            f'dominant-baseline="middle" font-family="sans-serif" '
            f'font-size="11">{t:g}</text>'
        )
    parts.append(
        f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">beta</text>'
    )
    parts.append(
        f'<text x="18" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2:.1f})">{series}</text>'
    )

    if marker_count > 0:
        for sv in singular_betas(marker_count, ctx):
            x = float(sv.beta)
            if x_lo <= x <= x_hi:
                parts.append(
                    f'<line class="singular" x1="{sx(x):.2f}" y1="{MARGIN_TOP}" '
                    f'x2="{sx(x):.2f}" y2="{MARGIN_TOP + plot_h}" '
                    f'stroke="#c44" stroke-width="1" stroke-dasharray="4 3"/>'
                )

    # Contiguous runs of valid points -> polylines; isolated points ->
    # small circles so they stay visible.
    run: list[tuple[float, float]] = []

    def flush(run: list[tuple[float, float]]) -> None:
        if len(run) >= 2:
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in run)
            parts.append(
                f'<polyline class="series" points="{coords}" fill="none" '
                f'stroke="#1a6" stroke-width="1.5"/>'
            )
        elif len(run) == 1:
            x, y = run[0]
            parts.append(
                f'<circle class="series" cx="{sx(x):.2f}" cy="{sy(y):.2f}" '
                f'r="2.5" fill="#1a6"/>'
            )

    for p in points:
        if p is None:
            flush(run)
            run = []
        else:
            run.append(p)
    flush(run)

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
