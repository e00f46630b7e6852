"""Standalone SVG reliability diagrams."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .confidence import CalibrationReport

SIZE = 400  # plot area, px
MARGIN = 50
MIN_BAR_WIDTH = 0.01  # in confidence units, for zero-width equal-mass ranges


def _f(x: float) -> str:
    return f"{x:.3f}"


def reliability_svg(report: CalibrationReport, title: str | None = None) -> str:
    """Unit square with the identity diagonal, one accuracy bar per occupied
    bin and the gap to the bin's mean confidence shaded.  Empty bins are left
    blank.  Output depends only on the report, so it is deterministic."""

    def x(v):
        return MARGIN + v * SIZE

    def y(v):
        return MARGIN + (1.0 - v) * SIZE

    total = SIZE + 2 * MARGIN
    scheme = report.scheme
    label = title or (
        f"{report.metric_name} {scheme['kind']} bins={report.num_bins_effective} "
        f"value={report.value:.4f} n={report.n}"
    )
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" '
        f'viewBox="0 0 {total} {total}">',
        f"<title>{escape(label)}</title>",
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>',
    ]
    for t in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0):
        parts.append(
            f'<text x="{_f(x(t))}" y="{_f(y(0) + 18)}" font-size="11" text-anchor="middle">{t:.1f}</text>'
        )
        parts.append(
            f'<text x="{_f(x(0) - 8)}" y="{_f(y(t) + 4)}" font-size="11" text-anchor="end">{t:.1f}</text>'
        )
    for b in report.per_bin:
        if b.count == 0:
            continue
        lo, hi = b.lower, b.upper
        if hi - lo < MIN_BAR_WIDTH:
            mid = (lo + hi) / 2
            lo, hi = mid - MIN_BAR_WIDTH / 2, mid + MIN_BAR_WIDTH / 2
        width = (hi - lo) * SIZE
        parts.append(
            f'<rect class="bar" x="{_f(x(lo))}" y="{_f(y(b.acc))}" width="{_f(width)}" '
            f'height="{_f(b.acc * SIZE)}" fill="#3b6ea8" stroke="#1d3a5c"/>'
        )
        top, bottom = max(b.acc, b.conf), min(b.acc, b.conf)
        if top > bottom:
            parts.append(
                f'<rect class="gap" x="{_f(x(lo))}" y="{_f(y(top))}" width="{_f(width)}" '
                f'height="{_f((top - bottom) * SIZE)}" fill="#d9534f" fill-opacity="0.35" stroke="none"/>'
            )
    parts.append(
        f'<line class="diagonal" x1="{_f(x(0))}" y1="{_f(y(0))}" x2="{_f(x(1))}" y2="{_f(y(1))}" '
        f'stroke="#2e8b57" stroke-width="2" stroke-dasharray="6,4"/>'
    )
    parts.append(
        f'<text x="{_f(x(0.5))}" y="{_f(total - 8)}" font-size="12" text-anchor="middle">confidence</text>'
    )
    parts.append(
        f'<text x="14" y="{_f(y(0.5))}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 14 {_f(y(0.5))})">accuracy</text>'
    )
    parts.append(f'<text x="{_f(x(0.5))}" y="30" font-size="13" text-anchor="middle">{escape(label)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
