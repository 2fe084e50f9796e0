# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""
Planar primitives shared by every other module: points, convex bodies,
lines, unit-circle chords, the similarity that normalizes an instance into
the unit disk, and the predicates built on them.

All values are immutable. Closed-set semantics with the single tolerance
`EPS_GEOM` apply everywhere: touching counts as hitting.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence
import math
import sys

import numpy as np
from scipy.optimize import linprog

from pierce import log
from pierce.errors import EmptyInput, NumericalFailure

EPS_GEOM: float = 1e-9
DISK_MARGIN: float = 0.05

# Shewchuk's static filter for the 2x2 orientation determinant
_EPSILON: float = sys.float_info.epsilon / 2.0
_CCW_ERRBOUND_A: float = (3.0 + 16.0 * _EPSILON) * _EPSILON

@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Non-finite point ({self.x}, {self.y})")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def scaled(self, factor: float) -> "Point":
        return Point(self.x * factor, self.y * factor)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)

    @classmethod
    def polar(cls, angle: float, radius: float = 1.0) -> "Point":
        return cls(radius * math.cos(angle), radius * math.sin(angle))

def _orient_exact(a: Point, b: Point, c: Point) -> Fraction:
    ax, ay, bx, by, cx, cy = (Fraction(v) for v in (a.x, a.y, b.x, b.y, c.x, c.y))
    return (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)

def orient_det(a: Point, b: Point, c: Point) -> float:
    """
    Twice the signed area of triangle abc, positive when counterclockwise.
    Falls back to exact rational arithmetic when the float result is
    within its rounding error bound.
    """
    detleft = (a.x - c.x) * (b.y - c.y)
    detright = (a.y - c.y) * (b.x - c.x)
    det = detleft - detright
    errbound = _CCW_ERRBOUND_A * (abs(detleft) + abs(detright))
    if abs(det) > errbound:
        return det
    return float(_orient_exact(a, b, c))

def orient(a: Point, b: Point, c: Point) -> int:
    """Orientation sign of abc: +1 counterclockwise, -1 clockwise, 0 collinear within EPS_GEOM."""
    det = orient_det(a, b, c)
    if abs(det) <= EPS_GEOM:
        return 0
    return 1 if det > 0 else -1

@dataclass(frozen=True)
class ConvexBody:
    """
    Closed convex polygon given by its counterclockwise vertices.
    One vertex is a point body, two vertices a segment body.
    Build canonical bodies with `ConvexBody.of` or `convex_hull`.
    """
    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) == 0:
            raise EmptyInput("body")
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @classmethod
    def of(cls, points: Iterable[Point | tuple[float, float]]) -> "ConvexBody":
        return convex_hull([p if isinstance(p, Point) else Point(*p) for p in points])

    def canonical(self) -> "ConvexBody":
        return convex_hull(self.vertices)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array([p.as_tuple() for p in self.vertices], dtype=float)

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        arr = self.array
        return (float(arr[:, 0].min()), float(arr[:, 1].min()), float(arr[:, 0].max()), float(arr[:, 1].max()))

    def __len__(self) -> int:
        return len(self.vertices)

@dataclass(frozen=True)
class LineEq:
    """The locus a*x + b*y = c, normalized so that a^2 + b^2 = 1 with the first nonzero of (a, b) positive."""
    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        n = math.hypot(self.a, self.b)
        if not math.isfinite(n) or n < 1e-300 or not math.isfinite(self.c):
            raise ValueError(f"Degenerate line ({self.a}, {self.b}, {self.c})")
        a, b, c = self.a / n, self.b / n, self.c / n
        if a < 0 or (a == 0 and b < 0):
            a, b, c = -a, -b, -c
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def through(cls, p: Point, q: Point) -> "LineEq":
        dx, dy = q.x - p.x, q.y - p.y
        return cls(-dy, dx, -dy * p.x + dx * p.y)

    def value(self, p: Point) -> float:
        return self.a * p.x + self.b * p.y - self.c

    def angle(self) -> float:
        """Direction angle in [0, pi)."""
        return math.atan2(self.a, -self.b) % math.pi

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

@dataclass(frozen=True)
class Chord:
    """Segment between two points of the unit circle, possibly a single point."""
    p: Point
    q: Point

    def __post_init__(self) -> None:
        for end in (self.p, self.q):
            if abs(end.norm() - 1.0) > 1e-9:
                raise ValueError(f"Chord endpoint {end} is not on the unit circle")

    def is_degenerate(self) -> bool:
        return math.hypot(self.p.x - self.q.x, self.p.y - self.q.y) <= EPS_GEOM

    def line(self) -> LineEq:
        """Line through the chord; a degenerate chord gives the diameter through its point."""
        if self.is_degenerate():
            return LineEq.through(Point(0.0, 0.0), self.p)
        return LineEq.through(self.p, self.q)

@dataclass(frozen=True)
class AffineMap:
    """The similarity z -> scale * (z - shift)."""
    scale: float
    shift: Point

    def __post_init__(self) -> None:
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValueError(f"AffineMap scale must be positive, got {self.scale}")

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(1.0, Point(0.0, 0.0))

    def apply(self, p: Point) -> Point:
        return Point(self.scale * (p.x - self.shift.x), self.scale * (p.y - self.shift.y))

    def inverse(self, p: Point) -> Point:
        return Point(p.x / self.scale + self.shift.x, p.y / self.scale + self.shift.y)

    def apply_body(self, body: ConvexBody) -> ConvexBody:
        # A similarity keeps orientation and convex position
        return ConvexBody(tuple(self.apply(p) for p in body.vertices))

    def apply_line(self, line: LineEq) -> LineEq:
        return LineEq(line.a, line.b, self.scale * (line.c - line.a * self.shift.x - line.b * self.shift.y))

    def pull_back_line(self, line: LineEq) -> LineEq:
        return LineEq(line.a, line.b, line.c / self.scale + line.a * self.shift.x + line.b * self.shift.y)

# --- Hulls and polygons ---

def convex_hull(points: Sequence[Point]) -> ConvexBody:
    """
    Counterclockwise convex hull (monotone chain), starting at the
    lexicographically smallest vertex, collinear points dropped.
    """
    if len(points) == 0:
        raise EmptyInput("point list")
    pts = sorted(set(points), key=lambda p: (p.x, p.y))
    if len(pts) <= 2:
        return ConvexBody(tuple(pts))

    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return ConvexBody(tuple(hull))

def polygon_area(points: Sequence[Point]) -> float:
    if len(points) < 3:
        return 0.0
    total = 0.0
    for p, q in zip(points, list(points[1:]) + [points[0]]):
        total += p.x * q.y - q.x * p.y
    return 0.5 * total

def clip_polygon(subject: Sequence[Point], a: float, b: float, c: float) -> list[Point]:
    """Sutherland-Hodgman clip of a convex polygon against the halfplane a*x + b*y >= c."""
    if len(subject) == 0:
        return []

    def side(p: Point) -> float:
        return a * p.x + b * p.y - c

    output: list[Point] = []
    s = subject[-1]
    s_side = side(s)
    for e in subject:
        e_side = side(e)
        if e_side >= 0:
            if s_side < 0:
                t = s_side / (s_side - e_side)
                output.append(Point(s.x + t * (e.x - s.x), s.y + t * (e.y - s.y)))
            output.append(e)
        elif s_side >= 0:
            t = s_side / (s_side - e_side)
            output.append(Point(s.x + t * (e.x - s.x), s.y + t * (e.y - s.y)))
        s, s_side = e, e_side
    return output

def regular_polygon(center: Point, radius: float, sides: int) -> list[Point]:
    return [Point(center.x + radius * math.cos(2 * math.pi * k / sides),
                  center.y + radius * math.sin(2 * math.pi * k / sides)) for k in range(sides)]

# --- Vectorized distance kernels ---

def point_segment_distance(X: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Distances from points X to segments [A, B]; all arrays broadcast on their leading axes, last axis is xy."""
    d = B - A
    dd = np.sum(d * d, axis=-1)
    safe = np.where(dd > 0.0, dd, 1.0)
    t = np.clip(np.sum((X - A) * d, axis=-1) / safe, 0.0, 1.0)
    t = np.where(dd > 0.0, t, 0.0)
    foot = A + t[..., None] * d
    return np.hypot(X[..., 0] - foot[..., 0], X[..., 1] - foot[..., 1])

def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]

def segment_segment_distance(A: np.ndarray, B: np.ndarray, C: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Distances between segments [A, B] and [C, D], broadcast like `point_segment_distance`."""
    dist = np.minimum(
        np.minimum(point_segment_distance(A, C, D), point_segment_distance(B, C, D)),
        np.minimum(point_segment_distance(C, A, B), point_segment_distance(D, A, B)),
    )
    o1 = _cross(B - A, C - A)
    o2 = _cross(B - A, D - A)
    o3 = _cross(D - C, A - C)
    o4 = _cross(D - C, B - C)
    crossing = (o1 * o2 < 0.0) & (o3 * o4 < 0.0)
    return np.where(crossing, 0.0, dist)

def _contains(body: ConvexBody, X: np.ndarray, eps: float = EPS_GEOM) -> np.ndarray:
    """Membership of points X (k, 2) in a body with at least three vertices."""
    V = body.array
    E = np.roll(V, -1, axis=0) - V
    lengths = np.hypot(E[:, 0], E[:, 1])
    rel = X[:, None, :] - V[None, :, :]
    signed = (E[None, :, 0] * rel[..., 1] - E[None, :, 1] * rel[..., 0]) / lengths[None, :]
    return np.all(signed >= -eps, axis=1)

def point_body_distance(p: Point, body: ConvexBody) -> float:
    X = np.array([p.as_tuple()])
    if len(body) >= 3 and _contains(body, X)[0]:
        return 0.0
    V = body.array
    return float(point_segment_distance(X, V, np.roll(V, -1, axis=0)).min())

def body_line_hit(F: ConvexBody, L: LineEq, eps: float = EPS_GEOM) -> bool:
    """Closed hit test: the body has vertices on both (closed) sides of the line."""
    values = F.array @ np.array([L.a, L.b]) - L.c
    return bool(values.min() <= eps and values.max() >= -eps)

def body_segment_distance(F: ConvexBody, s: Chord) -> float:
    """Euclidean distance between a convex body and a (possibly degenerate) chord."""
    P = np.array(s.p.as_tuple())
    Q = np.array(s.q.as_tuple())
    V = F.array
    if len(F) >= 3 and _contains(F, np.stack([P, Q])).any():
        return 0.0
    return float(segment_segment_distance(V, np.roll(V, -1, axis=0), P, Q).min())

# --- Triple intersection ---

def _boxes_overlap(u: tuple[float, float, float, float], v: tuple[float, float, float, float], eps: float) -> bool:
    return u[0] <= v[2] + eps and v[0] <= u[2] + eps and u[1] <= v[3] + eps and v[1] <= u[3] + eps

def bodies_intersect(F: ConvexBody, G: ConvexBody, H: ConvexBody, eps: float = EPS_GEOM) -> bool:
    """
    Whether the three closed bodies share a point. Decided by the linear
    program minimizing the L-infinity gap t between one point per body,
    each written as a convex combination of its vertices.
    """
    bodies = (F, G, H)
    for i in range(3):
        for j in range(i + 1, 3):
            if not _boxes_overlap(bodies[i].bbox, bodies[j].bbox, eps):
                return False

    # A vertex of one body inside the two others answers directly
    for i, body in enumerate(bodies):
        others = [bodies[j] for j in range(3) if j != i]
        for p in body.vertices:
            if all(point_body_distance(p, other) <= eps for other in others):
                return True

    sizes = [len(b) for b in bodies]
    nw = sum(sizes)
    nvar = nw + 3  # weights, z = (zx, zy), t
    iz, it = nw, nw + 2
    A_ub: list[np.ndarray] = []
    A_eq: list[np.ndarray] = []
    offset = 0
    for body, size in zip(bodies, sizes):
        arr = body.array
        for axis in range(2):
            row = np.zeros(nvar)
            row[offset:offset + size] = arr[:, axis]
            row[iz + axis] = -1.0
            row[it] = -1.0
            A_ub.append(row.copy())
            row[offset:offset + size] = -arr[:, axis]
            row[iz + axis] = 1.0
            A_ub.append(row)
        eq = np.zeros(nvar)
        eq[offset:offset + size] = 1.0
        A_eq.append(eq)
        offset += size

    cost = np.zeros(nvar)
    cost[it] = 1.0
    bounds = [(0.0, None)] * nw + [(None, None), (None, None), (0.0, None)]
    res = linprog(cost, A_ub=np.array(A_ub), b_ub=np.zeros(len(A_ub)),
                  A_eq=np.array(A_eq), b_eq=np.ones(3), bounds=bounds, method="highs",
                  options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10})
    if res.status != 0:
        log.warning(f"Triple intersection LP ended with status {res.status}: {res.message}, clipping instead")
        return _clip_intersect(bodies, eps)
    return bool(res.fun <= eps)

def _clip_intersect(bodies: Sequence[ConvexBody], eps: float) -> bool:
    """Clip the smallest body by the edge halfplanes of the two others, which must be polygons."""
    subject, *clippers = sorted(bodies, key=len)
    if any(len(body) < 3 for body in clippers):
        raise NumericalFailure(f"Cannot decide the intersection of bodies with {[len(b) for b in bodies]} vertices")
    region = list(subject.vertices)
    for body in clippers:
        for p, q in zip(body.vertices, body.vertices[1:] + body.vertices[:1]):
            a, b = p.y - q.y, q.x - p.x
            region = clip_polygon(region, a, b, a * p.x + b * p.y - eps * math.hypot(a, b))
            if not region:
                return False
    return True

# --- Normalization ---

def normalize_to_disk(families: Sequence[Sequence[ConvexBody]], margin: float = DISK_MARGIN) -> tuple[AffineMap, list[list[ConvexBody]]]:
    """
    Similarity sending every body into the closed disk of radius 1 - margin
    around the origin, centered on the bounding box of all vertices.
    """
    arrays = [body.array for family in families for body in family]
    if not arrays:
        raise EmptyInput("families")
    allv = np.concatenate(arrays)
    lo = allv.min(axis=0)
    hi = allv.max(axis=0)
    center = (lo + hi) / 2.0
    radius = float(np.hypot(allv[:, 0] - center[0], allv[:, 1] - center[1]).max())
    scale = (1.0 - margin) / radius if radius > 0 else 1.0
    transform = AffineMap(scale, Point(float(center[0]), float(center[1])))
    log.debug(f"Normalized {len(arrays)} bodies with scale {scale:.6g} around ({center[0]:.6g}, {center[1]:.6g})")
    return transform, [[transform.apply_body(body) for body in family] for family in families]
