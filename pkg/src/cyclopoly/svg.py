"""Static SVG figures: patches, polygons, window insets and switching pairs."""

from __future__ import annotations

from typing import Iterable, Sequence

from . import __version__
from .cyclotomic import CyclotomicNumber
from .model_sets import Kind, Patch

_SIZE = 480


def _fmt(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


class _Canvas:
    """Maps the disc of radius ``extent`` onto a square panel, y axis pointing up."""

    def __init__(self, extent: float, x0: float = 0.0, size: float = _SIZE):
        self.extent = extent
        self.x0 = x0
        self.size = size
        self.parts: list[str] = []

    def xy(self, z: complex) -> tuple[str, str]:
        s = self.size / (2 * self.extent * 1.05)
        return _fmt(self.x0 + self.size / 2 + s * z.real), _fmt(self.size / 2 - s * z.imag)

    def dots(self, pts: Iterable[complex], r: float, fill: str) -> None:
        for z in pts:
            x, y = self.xy(z)
            self.parts.append(f'<circle cx="{x}" cy="{y}" r="{_fmt(r)}" fill="{fill}"/>')

    def polygon(self, pts: Sequence[complex], stroke: str, fill: str = "none", width: float = 1.5) -> None:
        coords = " ".join(",".join(self.xy(z)) for z in pts)
        self.parts.append(
            f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}" stroke-width="{_fmt(width)}"/>'
        )


def _document(width: float, height: float, body: list[str]) -> str:
    head = [
        f"<!-- cyclopoly {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect width="{_fmt(width)}" height="{_fmt(height)}" fill="white"/>',
    ]
    return "\n".join(head + body + ["</svg>", ""])


def _window_inset(patch: Patch, x0: float) -> list[str]:
    win = patch.descriptor.window
    star = patch.descriptor.star
    extent = win.outer_radius()
    c = _Canvas(extent, x0, _SIZE / 4)
    c.parts.append(
        f'<rect x="{_fmt(x0)}" y="0" width="{_fmt(_SIZE / 4)}" height="{_fmt(_SIZE / 4)}" '
        'fill="white" stroke="#888"/>'
    )
    c.polygon([v.approx for v in win.vertices], "#2a6")
    c.dots([star(z - patch.descriptor.translate).approx for z in patch.points], 0.8, "#333")
    return c.parts


def render_patch(
    patch: Patch,
    polygons: Sequence[Sequence[CyclotomicNumber]] = (),
    highlight: Iterable[CyclotomicNumber] = (),
    window_inset: bool = True,
) -> str:
    """Patch points, optional polygon outlines and highlighted points."""
    c = _Canvas(float(patch.region_radius))
    c.dots([z.approx for z in patch.points], 2.0, "#333")
    for poly in polygons:
        c.polygon([v.approx for v in poly], "#c33", "rgba(204,51,51,0.08)")
    c.dots([z.approx for z in highlight], 4.0, "#c33")
    body = c.parts
    if window_inset and patch.descriptor.kind is Kind.CUT_AND_PROJECT:
        body += _window_inset(patch, _SIZE * 3 / 4)
    return _document(_SIZE, _SIZE, body)


def render_pair(
    patch: Patch,
    polygon: Sequence[CyclotomicNumber],
    F: Iterable[CyclotomicNumber],
    Fprime: Iterable[CyclotomicNumber],
) -> str:
    """Two panels showing ``F`` and ``F'`` over the polygon they were switched on."""
    verts = [v.approx for v in polygon]
    extent = max(abs(z) for z in verts) * 1.15
    body: list[str] = []
    for k, pts in enumerate((F, Fprime)):
        c = _Canvas(extent, k * _SIZE)
        c.dots([z.approx for z in patch.points if abs(z.approx) <= extent], 1.5, "#bbb")
        c.polygon(verts, "#888", width=1.0)
        c.dots([z.approx for z in pts], 4.0, "#c33" if k == 0 else "#36c")
        body += c.parts
    return _document(2 * _SIZE, _SIZE, body)
