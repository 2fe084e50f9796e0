# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""
SVG pictures of normalized instances: the unit circle, the bodies colored
by family, an optional chord configuration with its region labels and an
optional certificate. Output is byte-stable (fixed number formatting, no
timestamps).
"""

from typing import Sequence
import math

from pierce import colors, log
from pierce.errors import InvalidCertificate
from pierce.geometry import ConvexBody, LineEq, Point
from pierce.solver import ChordConfig, Instance, PiercingCertificate, region_polygon, verify_certificate

PREAMBLE = """\
<?xml version="1.0" standalone="no"?>
<svg width="%(size)d" height="%(size)d" viewBox="0 0 %(size)d %(size)d" version="1.1" xmlns="http://www.w3.org/2000/svg">
<rect x="0" y="0" width="%(size)d" height="%(size)d" style="fill:#ffffff"/>
"""

POSTAMBLE = """\
</svg>
"""

LINE_COLOR = '#222222'
CHORD_COLOR = '#95a5a6'
LABEL_COLOR = '#666666'

def _fmt(v: float) -> str:
    # "-0.000000" and "0.000000" must not depend on rounding noise
    text = "%.6f" % v
    return "0.000000" if text == "-0.000000" else text

class SvgCanvas:
    """Collects SVG elements in world coordinates (y up), centered on the origin."""
    def __init__(self, size: int = 600, extent: float = 1.2) -> None:
        self.size = size
        self.extent = extent
        self.scale = size / (2.0 * extent)
        self.commands: list[str] = []

    def xy(self, p: Point) -> tuple[str, str]:
        return _fmt(self.size / 2.0 + self.scale * p.x), _fmt(self.size / 2.0 - self.scale * p.y)

    def circle(self, center: Point, radius: float, stroke: str = '#000000', fill: str = 'none', width: float = 1.0) -> None:
        cx, cy = self.xy(center)
        self.commands.append(
            f'<circle cx="{cx}" cy="{cy}" r="{_fmt(radius * self.scale)}" style="fill:{fill};stroke:{stroke};stroke-width:{_fmt(width)}"/>'
        )

    def dot(self, center: Point, color: str) -> None:
        cx, cy = self.xy(center)
        self.commands.append(f'<circle cx="{cx}" cy="{cy}" r="3.000000" style="fill:{color};stroke:none"/>')

    def line(self, p: Point, q: Point, color: str = '#000000', width: float = 1.0, dash: str | None = None) -> None:
        (x1, y1), (x2, y2) = self.xy(p), self.xy(q)
        style = f"stroke:{color};stroke-width:{_fmt(width)}" + (f";stroke-dasharray:{dash}" if dash else "")
        self.commands.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" style="{style}"/>')

    def polygon(self, points: Sequence[Point], fill: str, stroke: str, opacity: float = 0.5) -> None:
        coords = ' '.join('%s,%s' % self.xy(p) for p in points)
        self.commands.append(
            f'<polygon points="{coords}" style="fill:{fill};fill-opacity:{_fmt(opacity)};stroke:{stroke};stroke-width:1.000000"/>'
        )

    def text(self, at: Point, text: str, color: str = LABEL_COLOR) -> None:
        x, y = self.xy(at)
        self.commands.append(
            f'<text x="{x}" y="{y}" fill="{color}" font-size="14" font-family="monospace" text-anchor="middle">{text}</text>'
        )

    def body(self, body: ConvexBody, color: str) -> None:
        if len(body) == 1:
            self.dot(body.vertices[0], color)
        elif len(body) == 2:
            self.line(body.vertices[0], body.vertices[1], color, 2.0)
        else:
            self.polygon(body.vertices, color, color)

    def render(self) -> str:
        return PREAMBLE % {"size": self.size} + ''.join(c + '\n' for c in self.commands) + POSTAMBLE

def polygon_centroid(points: Sequence[Point]) -> Point:
    area = 0.0
    cx = cy = 0.0
    for p, q in zip(points, list(points[1:]) + [points[0]]):
        cross = p.x * q.y - q.x * p.y
        area += cross
        cx += (p.x + q.x) * cross
        cy += (p.y + q.y) * cross
    if abs(area) < 1e-15:
        return Point(sum(p.x for p in points) / len(points), sum(p.y for p in points) / len(points))
    return Point(cx / (3.0 * area), cy / (3.0 * area))

def clip_line_to_circle(line: LineEq, radius: float) -> tuple[Point, Point] | None:
    """The part of a line inside the circle of the given radius around the origin."""
    if abs(line.c) >= radius:
        return None
    half = math.sqrt(radius * radius - line.c * line.c)
    foot = Point(line.a * line.c, line.b * line.c)
    direction = Point(-line.b, line.a)
    return foot - direction.scaled(half), foot + direction.scaled(half)

def render_svg(
    instance: Instance,
    certificate: PiercingCertificate | None = None,
    config: ChordConfig | None = None,
    metadata: dict[str, str] | None = None,
    size: int = 600
) -> str:
    """Draw the normalized instance; a certificate must re-verify before it is drawn."""
    if certificate is not None and not verify_certificate(instance, certificate):
        raise InvalidCertificate()

    canvas = SvgCanvas(size)
    canvas.circle(Point(0.0, 0.0), 1.0)
    for index, family in enumerate(instance.normalized):
        color = colors.family_color(index, metadata)
        for body in family:
            canvas.body(body, color)

    if config is not None:
        for chord in config.chords:
            canvas.line(chord.p, chord.q, CHORD_COLOR, 1.5, dash="6,3")
        for i in range(1, config.n + 1):
            poly = region_polygon(config, i)
            if poly:
                canvas.text(polygon_centroid(poly), f"R{i}")

    if certificate is not None:
        for line in certificate.lines:
            ends = clip_line_to_circle(line, canvas.extent)
            if ends is not None:
                canvas.line(*ends, LINE_COLOR, 2.0)

    log.debug(f"Rendered {len(canvas.commands)} SVG elements")
    return canvas.render()
