"""SVG rendering of packed layouts."""
from __future__ import annotations

import colorsys
import hashlib
from typing import Optional, Sequence, Tuple

from .geometry import Polygon

_MARGIN = 8.0


def _color(label: str) -> str:
    h = int(hashlib.sha1(label.encode()).hexdigest()[:6], 16) / 0xFFFFFF
    r, g, b = colorsys.hsv_to_rgb(h, 0.55, 0.88)
    return f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}"


def render_svg(
    placements: Sequence[Tuple[str, Polygon, float, float]],
    strip_width: float,
    used_length: Optional[float] = None,
    scale: float = 8.0,
) -> str:
    """Return an SVG document; y is flipped so the strip bottom is down."""
    if used_length is None:
        used_length = max(
            (dx + poly.width for _, poly, dx, _ in placements), default=1.0
        )
    w = used_length * scale + 2 * _MARGIN
    h = strip_width * scale + 2 * _MARGIN

    def tx(x: float) -> float:
        return _MARGIN + x * scale

    def ty(y: float) -> float:
        return h - _MARGIN - y * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1f}" height="{h:.1f}" '
        f'viewBox="0 0 {w:.1f} {h:.1f}">',
        f'<rect x="{tx(0):.2f}" y="{ty(strip_width):.2f}" '
        f'width="{used_length * scale:.2f}" height="{strip_width * scale:.2f}" '
        'fill="none" stroke="#333" stroke-width="1.5"/>',
    ]
    for label, poly, dx, dy in placements:
        pts = " ".join(
            f"{tx(x + dx):.2f},{ty(y + dy):.2f}" for x, y in poly.vertices
        )
        parts.append(
            f'<polygon points="{pts}" fill="{_color(label)}" '
            'fill-opacity="0.75" stroke="#222" stroke-width="0.6"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def write_svg(path: str, *args, **kwargs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(*args, **kwargs))
