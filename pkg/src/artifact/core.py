"""Exact integer geometry: object types, predicates, scaling and trig snapping.

All coordinates are Python ints, so products never overflow; the
``COORD_LIMIT`` bound exists only to flag gadgets that grew beyond the
declared coordinate model.
"""

from __future__ import annotations

import math
from collections import namedtuple
from fractions import Fraction
from typing import Iterable, Sequence

COORD_LIMIT = 1 << 62

Rational = Fraction


class CoordOverflow(OverflowError):
    pass


Point2 = namedtuple("Point2", "x y")
Point3 = namedtuple("Point3", "x y z")


class Rect2(namedtuple("Rect2", "x0 x1 y0 y1")):
    """Closed axis-aligned rectangle [x0, x1] x [y0, y1]."""

    __slots__ = ()

    def __new__(cls, x0, x1, y0, y1):
        if x0 > x1 or y0 > y1:
            raise ValueError(f"degenerate rectangle bounds {(x0, x1, y0, y1)}")
        return super().__new__(cls, x0, x1, y0, y1)

    @property
    def area(self):
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def contains(self, p) -> bool:
        return self.x0 <= p[0] <= self.x1 and self.y0 <= p[1] <= self.y1

    def intersect(self, other: "Rect2"):
        x0, x1 = max(self.x0, other.x0), min(self.x1, other.x1)
        y0, y1 = max(self.y0, other.y0), min(self.y1, other.y1)
        if x0 > x1 or y0 > y1:
            return None
        return Rect2(x0, x1, y0, y1)


def square(x, y, side) -> Rect2:
    """Square with lower-left corner (x, y)."""
    return Rect2(x, x + side, y, y + side)


class AnchoredBox3(namedtuple("AnchoredBox3", "x y z")):
    """Box [0,x] x [0,y] x [0,z]."""

    __slots__ = ()

    def __new__(cls, x, y, z):
        if x < 0 or y < 0 or z < 0:
            raise ValueError(f"anchored box needs non-negative corner, got {(x, y, z)}")
        return super().__new__(cls, x, y, z)


class Disk2(namedtuple("Disk2", "cx cy r2")):
    """Closed disk given by integer center and squared radius."""

    __slots__ = ()

    def __new__(cls, cx, cy, r2):
        if r2 < 0:
            raise ValueError("negative squared radius")
        return super().__new__(cls, cx, cy, r2)


def check_coord(v):
    if abs(v) >= COORD_LIMIT:
        raise CoordOverflow(f"coordinate {v} exceeds 2^62")
    return v


# -- predicates ---------------------------------------------------------------

def _sign(v) -> int:
    return (v > 0) - (v < 0)


def orient2d(a, b, c) -> int:
    """+1 for a left turn a->b->c, -1 for a right turn, 0 if collinear."""
    return _sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def orient3d(a, b, c, d) -> int:
    """Sign of det[b-a, c-a, d-a]."""
    return _sign(_dot(_cross(_sub(b, a), _sub(c, a)), _sub(d, a)))


def _affinely_independent(pts) -> bool:
    n = len(pts)
    if n == 1:
        return True
    if n == 2:
        return pts[0] != pts[1]
    if n == 3:
        return _cross(_sub(pts[1], pts[0]), _sub(pts[2], pts[0])) != (0, 0, 0)
    return orient3d(*pts) != 0


def simplex_contains_3d(simplex: Sequence, p) -> bool:
    """Closed convex-hull membership of ``p`` in 1 to 4 points.

    Affinely dependent inputs are reduced by Caratheodory: the hull of a
    dependent set is the union of the hulls of its subsets one smaller.
    """
    pts = [tuple(q) for q in simplex]
    p = tuple(p)
    n = len(pts)
    if not 1 <= n <= 4:
        raise ValueError("simplex must have 1 to 4 points")
    if not _affinely_independent(pts):
        return any(
            simplex_contains_3d(pts[:i] + pts[i + 1:], p) for i in range(n)
        )
    if n == 1:
        return pts[0] == p
    if n == 2:
        a, b = pts
        ab, ap = _sub(b, a), _sub(p, a)
        if _cross(ab, ap) != (0, 0, 0):
            return False
        t = _dot(ap, ab)
        return 0 <= t <= _dot(ab, ab)
    if n == 3:
        a, b, c = pts
        if orient3d(a, b, c, p) != 0:
            return False
        nrm = _cross(_sub(b, a), _sub(c, a))
        for u, v in ((a, b), (b, c), (c, a)):
            if _dot(_cross(_sub(v, u), _sub(p, u)), nrm) < 0:
                return False
        return True
    faces = ((0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 3, 1), (1, 2, 3, 0))
    for i, j, k, opp in faces:
        s = orient3d(pts[i], pts[j], pts[k], pts[opp])
        t = orient3d(pts[i], pts[j], pts[k], p)
        if t != 0 and t != s:
            return False
    return True


# -- scaling --------------------------------------------------------------------

def scale_object(o, f: int):
    if isinstance(o, Rect2):
        return Rect2(*(check_coord(v * f) for v in o))
    if isinstance(o, Disk2):
        return Disk2(check_coord(o.cx * f), check_coord(o.cy * f), o.r2 * f * f)
    if isinstance(o, AnchoredBox3):
        return AnchoredBox3(*(check_coord(v * f) for v in o))
    if isinstance(o, Point3):
        return Point3(*(check_coord(v * f) for v in o))
    if isinstance(o, Point2):
        return Point2(*(check_coord(v * f) for v in o))
    raise TypeError(f"cannot scale {type(o).__name__}")


def scale_all(objects: Iterable, factor: int) -> list:
    """Multiply every coordinate by a positive integer factor."""
    if factor <= 0 or int(factor) != factor:
        raise ValueError("factor must be a positive integer")
    return [scale_object(o, factor) for o in objects]


# -- fixed-point trig -------------------------------------------------------------

_GUARD = 24


def trig_bits(R: int) -> int:
    """Fractional bits used for trig evaluation at radius bound R."""
    return math.ceil(6 * math.log2(R)) + 16


def _atan_inv(x: int, bits: int) -> int:
    # atan(1/x) * 2^bits by its alternating series
    one = 1 << bits
    term = one // x
    x2 = x * x
    total, k, sign = 0, 1, 1
    while term:
        total += sign * (term // k)
        term //= x2
        k += 2
        sign = -sign
    return total


def pi_fixed(bits: int) -> int:
    b = bits + _GUARD
    v = 16 * _atan_inv(5, b) - 4 * _atan_inv(239, b)
    return v >> _GUARD


def _round_shift(v: int, s: int) -> int:
    return (v + (1 << (s - 1))) >> s if s > 0 else v


def angle_fixed(j: int, m: int, offset: Fraction = Fraction(0), bits: int = 64) -> int:
    """(2*pi*j/m + offset) * 2^bits, rounded."""
    b = bits + _GUARD
    th = (2 * pi_fixed(b) * j) // m
    off = Fraction(offset)
    th += (off.numerator << b) // off.denominator
    return _round_shift(th, _GUARD)


def cos_sin_fixed(theta: int, bits: int) -> tuple[int, int]:
    """cos and sin of theta / 2^bits, both scaled by 2^bits."""
    b = bits + _GUARD
    th = theta << _GUARD
    two_pi = 2 * pi_fixed(b)
    th %= two_pi
    if th > two_pi // 2:
        th -= two_pi
    neg = th < 0
    a = -th if neg else th
    one = 1 << b
    c, s = one, 0
    term, k = one, 0
    # Taylor series in |theta| <= pi; sin is odd so the sign is applied last
    while True:
        k += 1
        term = (term * a >> b) // k
        if term == 0:
            break
        r = k % 4
        if r == 1:
            s += term
        elif r == 2:
            c -= term
        elif r == 3:
            s -= term
        else:
            c += term
    if neg:
        s = -s
    return _round_shift(c, _GUARD), _round_shift(s, _GUARD)


def _round_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    return q + (2 * r >= den)


def snap_scale(R: int) -> int:
    """Integer scale putting the snapping grid (spacing 1/(2R^2)) on integers."""
    return 2 * R * R


def snap_rational(v: Fraction, R: int) -> int:
    v = Fraction(v)
    return check_coord(_round_div(v.numerator * snap_scale(R), v.denominator))


def polar_snapped(radius: Fraction, theta: int, bits: int, scale: int) -> tuple[int, int]:
    """Round (radius cos t, radius sin t) * scale to integers; t = theta / 2^bits."""
    c, s = cos_sin_fixed(theta, bits)
    radius = Fraction(radius)
    den = radius.denominator << bits
    x = _round_div(radius.numerator * c * scale, den)
    y = _round_div(radius.numerator * s * scale, den)
    return check_coord(x), check_coord(y)


def cyl_to_snapped_point(r: int, j: int, m: int, height: int, R: int) -> Point3:
    """Snap the cylindrical point (r, 2*pi*j/m, height) to the grid of spacing
    1/(2R^2) and return it scaled by 2R^2, so all coordinates are integers."""
    if not (0 <= j < m):
        raise ValueError("need 0 <= j < m")
    if not (0 < r <= R):
        raise ValueError("need 0 < r <= R")
    bits = trig_bits(R)
    theta = angle_fixed(j, m, bits=bits)
    x, y = polar_snapped(Fraction(r), theta, bits, snap_scale(R))
    return Point3(x, y, check_coord(height * snap_scale(R)))
