"""SVG rendering of packing layouts: the container outline plus every
circle to scale, labeled by index.  Output bytes are deterministic for
identical input."""

from __future__ import annotations

from .solution import SolutionFile

_VIEW = 1000.0  # viewbox units per container side
_MARGIN = 20.0


def render_svg(sol: SolutionFile) -> str:
    scale = _VIEW / sol.L
    size = _VIEW + 2 * _MARGIN

    def sx(x: float) -> float:
        return _MARGIN + (x + 0.5 * sol.L) * scale

    def sy(y: float) -> float:
        return _MARGIN + (0.5 * sol.L - y) * scale  # flip: SVG y grows downward

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size:.0f} {size:.0f}">',
        f'  <rect x="{_MARGIN:.1f}" y="{_MARGIN:.1f}" width="{_VIEW:.1f}" height="{_VIEW:.1f}"'
        ' fill="none" stroke="black" stroke-width="2"/>',
    ]
    for i, r, x, y in sol.circles:
        parts.append(
            f'  <circle cx="{sx(x):.4f}" cy="{sy(y):.4f}" r="{r * scale:.4f}"'
            ' fill="#9ecae1" fill-opacity="0.6" stroke="#3182bd" stroke-width="1.5"/>'
        )
    for i, r, x, y in sol.circles:
        font = max(10.0, min(0.8 * r * scale, 48.0))
        parts.append(
            f'  <text x="{sx(x):.4f}" y="{sy(y):.4f}" font-size="{font:.1f}"'
            ' text-anchor="middle" dominant-baseline="central"'
            f' font-family="sans-serif">{i}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(sol: SolutionFile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(render_svg(sol))
