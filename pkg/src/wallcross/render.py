# -*- coding: utf-8 -*-
"""Static SVG figures of diagrams and tropical discs."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional

from src.wallcross.engine import Diagram, Scene
from src.wallcross.geometry import Box, Point
from src.wallcross.tropical import TropicalDisc


@dataclass(frozen=True)
class LayoutConfig:
    scale: int = 40  # pixels per lattice unit
    margin: int = 20
    singularity_size: int = 5
    stroke: float = 1.5


class Colors:
    BACKGROUND = "#FFFFFF"
    AXIS = "#DDDDDD"
    SINGULARITY = "#D32F2F"
    STOP = "#1A1A1A"
    DISC_EDGE = "#6A1B9A"
    # rays by generation, cycled
    GENERATIONS = ("#1565C0", "#2E7D32", "#EF6C00", "#00838F", "#AD1457", "#5D4037")


def _fmt(x: Fraction) -> str:
    # fixed precision keeps output byte-identical across runs
    return f"{float(x):.3f}"


def default_viewport(points: Iterable[Point], pad: Fraction = Fraction(2)) -> Box:
    pts = list(points) or [Point(0, 0)]
    return Box(
        min(p.x for p in pts) - pad,
        min(p.y for p in pts) - pad,
        max(p.x for p in pts) + pad,
        max(p.y for p in pts) + pad,
    )


class _Canvas:
    def __init__(self, box: Box, layout: LayoutConfig):
        self.box = box
        self.layout = layout
        self.width = int((box.xmax - box.xmin) * layout.scale) + 2 * layout.margin
        self.height = int((box.ymax - box.ymin) * layout.scale) + 2 * layout.margin
        self.parts: List[str] = []

    def x(self, p: Point) -> str:
        return _fmt((p.x - self.box.xmin) * self.layout.scale + self.layout.margin)

    def y(self, p: Point) -> str:
        # SVG y grows downward
        return _fmt((self.box.ymax - p.y) * self.layout.scale + self.layout.margin)

    def line(self, a: Point, b: Point, color: str, width: float, extra: str = "") -> None:
        self.parts.append(
            f'<line x1="{self.x(a)}" y1="{self.y(a)}" x2="{self.x(b)}" y2="{self.y(b)}" '
            f'stroke="{color}" stroke-width="{width}"{extra}/>'
        )

    def cross_mark(self, p: Point, color: str) -> None:
        s = self.layout.singularity_size
        cx, cy = float(self.x(p)), float(self.y(p))
        self.parts.append(
            f'<path d="M{cx - s:.3f},{cy - s:.3f} L{cx + s:.3f},{cy + s:.3f} '
            f'M{cx - s:.3f},{cy + s:.3f} L{cx + s:.3f},{cy - s:.3f}" stroke="{color}" stroke-width="2"/>'
        )

    def dot(self, p: Point, color: str, r: int = 4) -> None:
        self.parts.append(f'<circle cx="{self.x(p)}" cy="{self.y(p)}" r="{r}" fill="{color}"/>')

    def text(self, p: Point, label: str) -> None:
        self.parts.append(
            f'<text x="{self.x(p)}" y="{self.y(p)}" font-family="monospace" font-size="10" dx="4" dy="-4">{label}</text>'
        )

    def axes(self) -> None:
        if self.box.xmin <= 0 <= self.box.xmax:
            self.line(Point(0, self.box.ymin), Point(0, self.box.ymax), Colors.AXIS, 1)
        if self.box.ymin <= 0 <= self.box.ymax:
            self.line(Point(self.box.xmin, 0), Point(self.box.xmax, 0), Colors.AXIS, 1)

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">'
        )
        background = f'<rect width="{self.width}" height="{self.height}" fill="{Colors.BACKGROUND}"/>'
        return "\n".join([head, background] + self.parts + ["</svg>"]) + "\n"


def _scene_box(scene: Scene, extra: Iterable[Point] = ()) -> Box:
    if scene.viewport is not None:
        return scene.viewport
    return default_viewport([s.pos for s in scene.singularities] + list(extra))


def diagram_svg(diagram: Diagram, layout: Optional[LayoutConfig] = None) -> str:
    layout = layout or LayoutConfig()
    box = _scene_box(diagram.scene, [r.origin for r in diagram.rays])
    canvas = _Canvas(box, layout)
    canvas.axes()
    for ray in sorted(diagram.rays, key=lambda r: r.generation):
        seg = box.clip_ray(ray.origin, ray.direction)
        if seg is None:
            continue
        color = Colors.GENERATIONS[ray.generation % len(Colors.GENERATIONS)]
        dash = ' stroke-dasharray="4,2"' if ray.generation > 0 else ""
        canvas.line(seg[0], seg[1], color, layout.stroke, dash)
    for k, s in enumerate(diagram.scene.singularities):
        canvas.cross_mark(s.pos, Colors.SINGULARITY)
        canvas.text(s.pos, f"I{s.multiplicity}#{k}")
    return canvas.render()


def disc_svg(disc: TropicalDisc, scene: Scene, layout: Optional[LayoutConfig] = None) -> str:
    layout = layout or LayoutConfig()
    positions = {vid: disc.position(vid, scene) for vid in disc.vertices}
    box = _scene_box(scene, positions.values())
    canvas = _Canvas(box, layout)
    canvas.axes()
    for e in disc.edges:
        canvas.line(positions[e.src], positions[e.dst], Colors.DISC_EDGE, layout.stroke + e.weight - 1)
        if e.weight > 1:
            mid = Point((positions[e.src].x + positions[e.dst].x) / 2, (positions[e.src].y + positions[e.dst].y) / 2)
            canvas.text(mid, f"w={e.weight}")
    for s in scene.singularities:
        canvas.cross_mark(s.pos, Colors.SINGULARITY)
    canvas.dot(positions[disc.root], Colors.STOP)
    return canvas.render()
