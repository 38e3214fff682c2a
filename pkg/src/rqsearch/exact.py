"""Exact rational plane primitives, plus the tolerance regime used for circles.

Two numeric worlds live here and must not be mixed silently:

* straight-line constructions use `fractions.Fraction` end to end, so every
  degeneracy test (collinearity, concurrence, coincidence) is exact;
* circle/disk constructions use binary64 with an absolute tolerance ``TAU``,
  because equal-radius circle intersections are irrational.  Inputs for the
  float regime are expected to be pre-scaled to ``|coordinate| <= COORD_LIMIT``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Rationals are stdlib Fractions: always normalized (gcd 1, positive
# denominator), compared by cross-multiplication.
Rat = Fraction

TAU = 1e-9
COORD_LIMIT = 1e3


def as_rat(value) -> Fraction:
    """Exact rational from int, Fraction, or a decimal string like '-12.75'."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to a rational exactly")


@dataclass(frozen=True)
class ExactPoint:
    x: Fraction
    y: Fraction

    def translated(self, dx, dy) -> "ExactPoint":
        return ExactPoint(self.x + dx, self.y + dy)

    def as_floats(self):
        return (float(self.x), float(self.y))


def pt(x, y) -> ExactPoint:
    return ExactPoint(as_rat(x), as_rat(y))


@dataclass(frozen=True)
class ExactLine:
    """Line a*x + b*y = c with the first nonzero of (a, b) scaled to 1."""

    a: Fraction
    b: Fraction
    c: Fraction

    @staticmethod
    def make(a, b, c) -> "ExactLine":
        a, b, c = as_rat(a), as_rat(b), as_rat(c)
        if a == 0 and b == 0:
            raise ValueError("degenerate line: a = b = 0")
        lead = a if a != 0 else b
        return ExactLine(a / lead, b / lead, c / lead)

    @staticmethod
    def through(p: ExactPoint, q: ExactPoint) -> "ExactLine":
        if p == q:
            raise ValueError("two coincident points do not define a line")
        return ExactLine.make(q.y - p.y, p.x - q.x, (q.y - p.y) * p.x + (p.x - q.x) * p.y)

    def is_vertical(self) -> bool:
        return self.b == 0

    def side_of(self, p: ExactPoint) -> int:
        """Sign of a*x + b*y - c at p: 0 means incident."""
        v = self.a * p.x + self.b * p.y - self.c
        return (v > 0) - (v < 0)

    def y_at(self, x) -> Fraction:
        if self.b == 0:
            raise ValueError("vertical line has no y(x)")
        return (self.c - self.a * as_rat(x)) / self.b

    def contains(self, p: ExactPoint) -> bool:
        return self.side_of(p) == 0


class Parallel:
    """Marker for a missing intersection; covers identical lines too."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Parallel"


PARALLEL = Parallel()


def orient(p: ExactPoint, q: ExactPoint, r: ExactPoint) -> int:
    """Sign of the cross product (q-p) x (r-p): +1 ccw, -1 cw, 0 collinear."""
    v = cross2(p, q, r)
    return (v > 0) - (v < 0)


def cross2(p: ExactPoint, q: ExactPoint, r: ExactPoint) -> Fraction:
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def dual_of_point(p: ExactPoint) -> ExactLine:
    """Dual line y = p.x * x - p.y of the point p."""
    return ExactLine.make(p.x, Fraction(-1), p.y)


def line_intersection(l1: ExactLine, l2: ExactLine):
    """Exact intersection point, or PARALLEL when the determinant vanishes."""
    det = l1.a * l2.b - l2.a * l1.b
    if det == 0:
        return PARALLEL
    x = (l1.c * l2.b - l2.c * l1.b) / det
    y = (l1.a * l2.c - l2.a * l1.c) / det
    return ExactPoint(x, y)


def lines_coincident(l1: ExactLine, l2: ExactLine) -> bool:
    return l1.a == l2.a and l1.b == l2.b and l1.c == l2.c


def vertical_distance(q: ExactPoint, l: ExactLine) -> Fraction:
    """|l(q.x) - q.y|, exact.  Rejects vertical lines."""
    if l.is_vertical():
        raise ValueError("vertical distance undefined for a vertical line")
    return abs(l.y_at(q.x) - q.y)


def triangle_area2(a: ExactPoint, b: ExactPoint, c: ExactPoint) -> Fraction:
    """Twice the triangle area (kept rational); 0 iff the points are collinear."""
    return abs(cross2(a, b, c))


@dataclass(frozen=True)
class ApproxPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("ApproxPoint coordinates must be finite")

    def dist(self, other: "ApproxPoint") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


def circle_circle_intersections(c1: ApproxPoint, c2: ApproxPoint, r: float,
                                tau: float = TAU) -> list[ApproxPoint]:
    """Intersections of the equal-radius circles around c1 and c2.

    Tangency within tau collapses to the single midpoint; coincident or
    far-apart centers give no points.  Returned points are within tau of
    distance r from both centers.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    d = c1.dist(c2)
    if d <= tau:
        return []
    if d >= 2.0 * r + tau:
        return []
    mx, my = (c1.x + c2.x) / 2.0, (c1.y + c2.y) / 2.0
    if abs(d - 2.0 * r) <= tau:
        return [ApproxPoint(mx, my)]
    h_sq = r * r - (d / 2.0) ** 2
    h = math.sqrt(max(h_sq, 0.0))
    ux, uy = (c2.x - c1.x) / d, (c2.y - c1.y) / d
    # perpendicular offset; fixed orientation keeps output deterministic
    return [
        ApproxPoint(mx - uy * h, my + ux * h),
        ApproxPoint(mx + uy * h, my - ux * h),
    ]
