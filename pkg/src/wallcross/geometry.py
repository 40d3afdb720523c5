# -*- coding: utf-8 -*-
"""Exact rational plane geometry for rays, lines and viewport clipping."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from src.wallcross.lattice import BoundaryVector


@dataclass(frozen=True, order=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Point":
        return Point(-self.x, -self.y)

    def along(self, direction: BoundaryVector, t: Fraction) -> "Point":
        """self + t * direction"""
        return Point(self.x + t * direction.a, self.y + t * direction.b)

    def as_strings(self) -> Tuple[str, str]:
        return (str(self.x), str(self.y))

    def __str__(self) -> str:
        return f"({self.x},{self.y})"

    @classmethod
    def parse(cls, text: str) -> "Point":
        parts = text.strip().strip("()").split(",")
        if len(parts) != 2:
            raise ValueError(f"expected 'x,y', got {text!r}")
        return cls(Fraction(parts[0].strip()), Fraction(parts[1].strip()))


ORIGIN = Point(0, 0)


def cross(u: Tuple[Fraction, Fraction], v: Tuple[Fraction, Fraction]) -> Fraction:
    return Fraction(u[0]) * v[1] - Fraction(u[1]) * v[0]


def _vec(d: BoundaryVector) -> Tuple[Fraction, Fraction]:
    return (Fraction(d.a), Fraction(d.b))


def param_on_ray(origin: Point, direction: BoundaryVector, p: Point) -> Optional[Fraction]:
    """t with p = origin + t*direction, or None when p is off the line."""
    rel = p - origin
    if cross((rel.x, rel.y), _vec(direction)) != 0:
        return None
    if direction.a != 0:
        return rel.x / direction.a
    return rel.y / direction.b


def line_intersection(
    o1: Point, d1: BoundaryVector, o2: Point, d2: BoundaryVector
) -> Optional[Tuple[Fraction, Fraction]]:
    """Parameters (t1, t2) where the two lines meet; None for parallel lines."""
    det = cross(_vec(d1), _vec(d2))
    if det == 0:
        return None
    rel = o2 - o1
    t1 = cross((rel.x, rel.y), _vec(d2)) / det
    t2 = cross((rel.x, rel.y), _vec(d1)) / det
    return t1, t2


def half_plane(v: BoundaryVector) -> int:
    """0 for angles in [0, pi), 1 for [pi, 2pi)."""
    return 0 if (v.b > 0 or (v.b == 0 and v.a > 0)) else 1


def angle_key(v: BoundaryVector) -> Tuple[int, Fraction]:
    """
    Sort key increasing with the counterclockwise angle from (1,0).
    Within a half plane the key is the cotangent-like ratio, negated so it grows.
    """
    h = half_plane(v)
    a, b = (v.a, v.b) if h == 0 else (-v.a, -v.b)
    # a / |a|+|b| decreases strictly from 1 to -1 over the half plane
    return h, -Fraction(a, abs(a) + abs(b))


@dataclass(frozen=True)
class Box:
    xmin: Fraction
    ymin: Fraction
    xmax: Fraction
    ymax: Fraction

    def __post_init__(self):
        for name in ("xmin", "ymin", "xmax", "ymax"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.xmin >= self.xmax or self.ymin >= self.ymax:
            raise ValueError(f"empty viewport {self}")

    def contains(self, p: Point) -> bool:
        return self.xmin <= p.x <= self.xmax and self.ymin <= p.y <= self.ymax

    def clip_ray(self, origin: Point, direction: BoundaryVector) -> Optional[Tuple[Point, Point]]:
        """Liang-Barsky clip of origin + t*direction, t >= 0, to the box."""
        t0: Fraction = Fraction(0)
        t1: Optional[Fraction] = None
        for p, q in (
            (-direction.a, origin.x - self.xmin),
            (direction.a, self.xmax - origin.x),
            (-direction.b, origin.y - self.ymin),
            (direction.b, self.ymax - origin.y),
        ):
            if p == 0:
                if q < 0:
                    return None
                continue
            r = Fraction(q) / p
            if p < 0:
                t0 = max(t0, r)
            else:
                t1 = r if t1 is None else min(t1, r)
        if t1 is None or t0 > t1:
            return None
        return origin.along(direction, t0), origin.along(direction, t1)
