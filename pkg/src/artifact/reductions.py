"""Gadget encoders turning set-intersection instances into geometric update scripts,
and drivers that run them against a structure.

An encoder translates a set family F into Step-1 objects, a set J into Step-2
updates, and a probe index i' into Step-3 updates plus queries together with
a decision function over the query answers.  The decision must equal
``J & F[i'] != {}``.  All coordinates are integers; gadgets that need half
units are stored pre-scaled and record the factor in ``Encoder.scale``.

Operations are tuples: ``("insert", obj)``, ``("delete", obj)``,
``("mark", rect)`` and ``("query", q)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import adapters, oracles
from .adapters import WeightedRect
from .core import (
    AnchoredBox3, Disk2, Point2, Point3, Rect2, angle_fixed, cyl_to_snapped_point,
    polar_snapped, snap_rational,
)
from .marking import MarkKdTree
from .measures import SlabMeasureEngine


# -- instance types --------------------------------------------------------------------

@dataclass(frozen=True)
class SetFamily:
    m: int
    sets: tuple

    def __post_init__(self):
        norm = tuple(tuple(sorted(set(s))) for s in self.sets)
        object.__setattr__(self, "sets", norm)
        for s in norm:
            for e in s:
                if not 1 <= e <= self.m:
                    raise ValueError(f"element {e} outside 1..{self.m}")

    @property
    def k(self) -> int:
        return len(self.sets)

    @property
    def s_F(self) -> int:
        return sum(len(s) for s in self.sets)

    def has(self, i: int, j: int) -> bool:
        """j in F_i, 1-based."""
        return j in self.sets[i - 1]

    def is_normal(self) -> bool:
        """No empty set and every element covered."""
        return all(self.sets) and set().union(*self.sets) == set(range(1, self.m + 1))


@dataclass(frozen=True)
class MultiphaseQuery:
    J: frozenset
    i_prime: int

    def truth(self, F: SetFamily) -> bool:
        return bool(self.J & set(F.sets[self.i_prime - 1]))


@dataclass
class OMvInstance:
    N: int
    W: int
    M: list
    vectors: list

    def __post_init__(self):
        if len(self.M) != self.N or any(len(r) != self.N for r in self.M):
            raise ValueError("matrix must be N x N")
        for v in self.vectors:
            if len(v) != self.N:
                raise ValueError("vector length must be N")
        for x in itertools.chain(itertools.chain.from_iterable(self.M), *self.vectors):
            if not 0 <= x <= self.W:
                raise ValueError(f"entry {x} outside 0..{self.W}")


def intersects(F: SetFamily, J, i_prime: int) -> bool:
    return bool(set(J) & set(F.sets[i_prime - 1]))


def oumv_truth(F: SetFamily, I, J) -> bool:
    return any(F.has(i, j) for i in I for j in J)


# -- encoders -----------------------------------------------------------------------------

@dataclass
class Encoder:
    name: str
    problem: str
    step1: Callable
    step2: Callable
    step3: Callable
    fast: Callable
    reference: Callable
    scenario: str = ""
    scale: int = 1
    oumv: bool = False
    min_m: int = 1
    min_k: int = 1
    needs_normal: bool = False
    forbid_full_J: bool = False
    notes: str = ""

    def accepts(self, F: SetFamily, J=None) -> bool:
        if F.m < self.min_m or F.k < self.min_k:
            return False
        if self.oumv and F.m != F.k:
            return False
        if self.needs_normal and not F.is_normal():
            return False
        if self.forbid_full_J and J is not None and set(J) == set(range(1, F.m + 1)):
            return False
        return True


def _ins(objs):
    return [("insert", o) for o in objs]


def _dels(objs):
    return [("delete", o) for o in objs]


def _closed_square(x, y, side):
    return Rect2(x, x + side, y, y + side)


def _halfopen_square(x, y, side):
    # [x, x+side) on the integer lattice doubled: touching squares stay disjoint
    return Rect2(2 * x, 2 * (x + side) - 1, 2 * y, 2 * (y + side) - 1)


# marking ----------------------------------------------------------------------------------

def enc_square_range_marking() -> Encoder:
    def pts(F):
        k = F.k
        return [Point2(2 * ((k + 2) * j + 1), 2 * (i + 1))
                for i in range(1, k + 1) for j in F.sets[i - 1]]

    def step1(F):
        return _ins(pts(F))

    def step2(F, J):
        k = F.k
        return [("mark", _closed_square(2 * (k + 2) * j, 2, 2 * (k + 2)))
                for j in range(1, F.m + 1) if j not in J]

    def step3(F, J, ip):
        side = 2 * (F.k + 2) * (F.m + 1)
        ops = [("mark", _closed_square(0, 2 * ip + 3, side)),
               ("mark", _closed_square(0, 2 * ip + 1 - side, side)),
               ("query", "any_unmarked")]
        return ops, lambda vals: bool(vals[0])

    return Encoder("square_range_marking", "marking", step1, step2, step3,
                   fast=kd_marking, reference=reference_marking,
                   scenario="3", scale=2)


def enc_rect_range_marking_oumv() -> Encoder:
    def step1(F):
        return _ins(Point2(j, i) for i in range(1, F.k + 1) for j in F.sets[i - 1])

    def step2(F, I, J):
        N = F.m
        ops = [("mark", Rect2(j, j, 1, N)) for j in range(1, N + 1) if j not in J]
        ops += [("mark", Rect2(1, N, i, i)) for i in range(1, N + 1) if i not in I]
        return ops

    def step3(F):
        return [("query", "any_unmarked")], lambda vals: bool(vals[0])

    return Encoder("rect_range_marking_oumv", "marking", step1, step2, step3,
                   fast=kd_marking, reference=reference_marking, scenario="OuMv", oumv=True)


# maximal / extremal points ------------------------------------------------------------------

def enc_maximal_points(variant: str = "fully_dynamic") -> Encoder:
    if variant not in ("fully_dynamic", "incremental"):
        raise ValueError("variant must be fully_dynamic or incremental")

    def b(F, j):
        return Point3(2 * j, 2 * (F.k + 1), 2 * (-(F.k + 2) * j + 1))

    def step1(F):
        k = F.k
        objs = [Point3(2 * j, 2 * i, 2 * (-(k + 2) * j - i))
                for i in range(1, k + 1) for j in F.sets[i - 1]]
        if variant == "fully_dynamic":
            objs += [b(F, j) for j in range(1, F.m + 1)]
        return _ins(objs)

    def step2(F, J):
        if variant == "fully_dynamic":
            return _dels(b(F, j) for j in sorted(J))
        return _ins(b(F, j) for j in range(1, F.m + 1) if j not in J)

    def step3(F, J, ip):
        m = F.m
        ops = [("insert", Point3(2 * (m + 1), 2 * ip - 1, 2)), ("query", None),
               ("insert", Point3(2 * (m + 2), 2 * ip + 1, 4)), ("query", None)]
        return ops, lambda vals: vals[1] < vals[0]

    return Encoder(f"maximal_points_{variant}", "maximal", step1, step2, step3,
                   fast=adapter_structure(adapters.maximal_count),
                   reference=adapter_structure(adapters.maximal_count),
                   scenario="4" if variant == "fully_dynamic" else "3", scale=2)


def extremal_radius(F: SetFamily) -> int:
    return 4 * F.k ** 2 * F.m ** 2


def extremal_t(F: SetFamily, i: int) -> Point3:
    R = extremal_radius(F)
    h = Fraction(R + (2 * i - 1) ** 2, 2 * (2 * i - 1))
    return Point3(0, 0, snap_rational(h, R))


def extremal_gadget(F: SetFamily) -> dict:
    """Labelled snapped points: ('q', i, j), ('p', i, j), ('b', j) and ('t', i)."""
    m, k = F.m, F.k
    R = extremal_radius(F)
    out = {}
    for j in range(1, m + 1):
        for i in range(0, k + 1):
            out[("q", i, j)] = cyl_to_snapped_point(R - (2 * i + 1) ** 2, j % m, m, 2 * i + 1, R)
        for i in range(1, k + 1):
            if F.has(i, j):
                out[("p", i, j)] = cyl_to_snapped_point(R - (2 * i) ** 2, j % m, m, 2 * i, R)
        out[("b", j)] = cyl_to_snapped_point(R - 1, j % m, m, 2 * k + 2, R)
    for i in range(1, k + 2):
        out[("t", i)] = extremal_t(F, i)
    return out


def enc_extremal_points() -> Encoder:
    cache = {}

    def gadget(F):
        if F not in cache:
            cache.clear()
            cache[F] = extremal_gadget(F)
        return cache[F]

    def check(F):
        if F.m < 5 or F.k < 5:
            raise ValueError("extremal gadget needs m, k >= 5")

    def step1(F):
        check(F)
        g = gadget(F)
        return _ins(v for key, v in g.items() if key[0] in ("q", "p", "b"))

    def step2(F, J):
        g = gadget(F)
        return _dels(g[("b", j)] for j in sorted(J))

    def step3(F, J, ip):
        g = gadget(F)
        size = len(J)
        ops = [("insert", g[("t", ip + 1)]), ("query", None),
               ("insert", g[("t", ip)]), ("query", None)]
        return ops, lambda vals: vals[0] - vals[1] != size

    return Encoder("extremal_points", "extremal", step1, step2, step3,
                   fast=adapter_structure(adapters.extremal_count),
                   reference=adapter_structure(adapters.extremal_count),
                   scenario="4", scale=1, min_m=5, min_k=5)


def extremal_lemma_expected(F: SetFamily, present_b, present_t) -> dict:
    """Extremality predicted for every q, p and t point of the gadget given which
    b_j and t_i are present; keys as in ``extremal_gadget``."""
    exp = {}
    for j in range(1, F.m + 1):
        exp[("q", 0, j)] = True
        for i in range(1, F.k + 1):
            val = j not in present_b and all(t not in present_t for t in range(1, i + 1))
            exp[("q", i, j)] = val
            if F.has(i, j):
                exp[("p", i, j)] = val
    for i in present_t:
        exp[("t", i)] = all(t not in present_t for t in range(1, i))
    return exp


# set cover -----------------------------------------------------------------------------------

def set_cover_c(F: SetFamily, alpha: Fraction, beta: int, weighted: bool) -> int:
    """Smallest integer c with c > beta * (n1 + m + 2)^alpha * (m + 2).

    n1 counts the Step-1 objects, which itself depends on c."""
    alpha = Fraction(alpha)
    if not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1)")
    p, q = alpha.numerator, alpha.denominator
    m = F.m

    def n1(c):
        return F.s_F + m if weighted else c * F.s_F + m * c

    def ok(c):
        return c ** q > beta ** q * (n1(c) + m + 2) ** p * (m + 2) ** q

    hi = 1
    while not ok(hi):
        hi *= 2
    lo = hi // 2 + 1 if hi > 1 else 1
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def enc_set_cover(weighted: bool = False, alpha=Fraction(0), beta: int = 1,
                  mode: str = "greedy") -> Encoder:
    alpha = Fraction(alpha)

    def c_of(F):
        return set_cover_c(F, alpha, beta, weighted)

    def step1(F):
        c, k = c_of(F), F.k
        if weighted:
            objs = [Point2(j, i) for i in range(1, k + 1) for j in F.sets[i - 1]]
            objs += [WeightedRect(Rect2(j, j, 0, k + 1), c) for j in range(1, F.m + 1)]
            return _ins(objs)
        objs = [Point2(c * j + a, i) for i in range(1, k + 1) for j in F.sets[i - 1]
                for a in range(c)]
        objs += [Rect2(c * j + a, c * j + a, 0, k + 1)
                 for j in range(1, F.m + 1) for a in range(c)]
        return _ins(objs)

    def group(F, j):
        if weighted:
            return WeightedRect(Rect2(j, j, 0, F.k + 1), 1)
        c = c_of(F)
        return Rect2(c * j, c * j + c - 1, 0, F.k + 1)

    def step2(F, J):
        return _ins(group(F, j) for j in range(1, F.m + 1) if j not in J)

    def step3(F, J, ip):
        c = c_of(F)
        x0, x1 = (0, F.m + 1) if weighted else (0, c * (F.m + 1))
        lo, hi = Rect2(x0, x1, 0, ip - 1), Rect2(x0, x1, ip + 1, F.k + 1)
        if weighted:
            lo, hi = WeightedRect(lo, 1), WeightedRect(hi, 1)
        ops = [("insert", lo), ("insert", hi), ("query", None)]
        return ops, lambda vals: vals[0] >= c

    make = (lambda: adapters.approx_cover(mode))
    name = "weighted_set_cover" if weighted else "set_cover"
    return Encoder(f"{name}[{mode}]", "set_cover", step1, step2, step3,
                   fast=adapter_structure(make),
                   reference=adapter_structure(adapters.min_cover),
                   scenario="3/4" if weighted else "4",
                   notes=f"alpha={alpha} beta={beta}")


# measures of squares -----------------------------------------------------------------------------

def enc_kmp_squares() -> Encoder:
    def b(F, j):
        k = F.k
        return _closed_square(k * j, 1, k)

    def step1(F):
        k = F.k
        objs = [_closed_square(k * j, i, 1) for i in range(1, k + 1) for j in F.sets[i - 1]]
        objs += [b(F, j) for j in range(1, F.m + 1)]
        return _ins(objs)

    def step2(F, J):
        return _dels(b(F, j) for j in sorted(J))

    def step3(F, J, ip):
        k, m = F.k, F.m
        s = k * (m + 1)
        thr = 2 * s * s + (m - len(J)) * k
        ops = [("insert", _closed_square(0, ip + 1, s)),
               ("insert", _closed_square(0, ip - s, s)), ("query", "area")]
        return ops, lambda vals: vals[0] > thr

    return Encoder("kmp_squares", "measures", step1, step2, step3,
                   fast=measure_engine(), reference=measure_reference(), scenario="4")


def enc_discrete_kmp() -> Encoder:
    def b(F, j):
        k = F.k
        return _closed_square(2 * (k + 2) * j, 2, 2 * (k + 2))

    def step1(F):
        k = F.k
        objs = [Point2(2 * ((k + 2) * j + 1), 2 * (i + 1))
                for i in range(1, k + 1) for j in F.sets[i - 1]]
        objs += [b(F, j) for j in range(1, F.m + 1)]
        return _ins(objs)

    def step2(F, J):
        return _dels(b(F, j) for j in sorted(J))

    def step3(F, J, ip):
        side = 2 * (F.k + 2) * (F.m + 1)
        total = F.s_F
        ops = [("insert", _closed_square(0, 2 * ip + 3, side)),
               ("insert", _closed_square(0, 2 * ip + 1 - side, side)),
               ("query", "covered_count")]
        return ops, lambda vals: vals[0] < total

    return Encoder("discrete_kmp", "measures", step1, step2, step3,
                   fast=measure_engine(), reference=measure_reference(), scenario="4", scale=2)


def enc_depth_squares() -> Encoder:
    def step1(F):
        k = F.k
        return _ins(_halfopen_square(k * j, i, 1) for i in range(1, k + 1) for j in F.sets[i - 1])

    def step2(F, J):
        k = F.k
        return _ins(_halfopen_square(k * j, 1, k) for j in sorted(J))

    def step3(F, J, ip):
        k, m = F.k, F.m
        ops = [("insert", _halfopen_square(k, ip, k * m)),
               ("insert", _halfopen_square(k, ip + 1 - k * m, k * m)), ("query", "depth")]
        return ops, lambda vals: vals[0] >= 4

    return Encoder("depth_squares", "measures", step1, step2, step3,
                   fast=measure_engine(), reference=measure_reference(), scenario="4", scale=2)


def square_cover_region(F: SetFamily) -> Rect2:
    R = F.m * (F.k + 1)
    return _closed_square(0, 0, 2 * R + F.k)


def enc_square_cover_squares() -> Encoder:
    def b(F, j):
        k = F.k
        return _closed_square((k + 1) * j - 1, F.m * (k + 1), k)

    def step1(F):
        m, k = F.m, F.k
        R = m * (k + 1)
        objs = [_closed_square(0, 0, R), _closed_square(0, R + k, R),
                _closed_square(R, 0, R + k), _closed_square(R, R, R + k)]
        objs += [_closed_square((k + 1) * (j - 1), R, k) for j in range(1, m + 1)]
        objs += [_closed_square((k + 1) * j - 1, R + i - 1, 1)
                 for i in range(1, k + 1) for j in range(1, m + 1) if not F.has(i, j)]
        objs += [b(F, j) for j in range(1, m + 1)]
        return _ins(objs)

    def step2(F, J):
        return _dels(b(F, j) for j in sorted(J))

    def step3(F, J, ip):
        R = F.m * (F.k + 1)
        ops = [("insert", _closed_square(0, ip - 1, R)),
               ("insert", _closed_square(0, R + ip, R)), ("query", "covers")]
        return ops, lambda vals: not vals[0]

    return Encoder("square_cover_squares", "measures", step1, step2, step3,
                   fast=measure_engine(square_cover_region),
                   reference=measure_reference(square_cover_region), scenario="2")


def enc_square_cover_rects_oumv() -> Encoder:
    def region(F):
        return _closed_square(1, 1, F.m)

    def step1(F):
        N = F.m
        return _ins(_closed_square(j, i, 1) for i in range(1, N + 1)
                    for j in range(1, N + 1) if not F.has(i, j))

    def step2(F, I, J):
        N = F.m
        ops = [("insert", Rect2(1, N + 1, i, i + 1)) for i in range(1, N + 1) if i not in I]
        ops += [("insert", Rect2(j, j + 1, 1, N + 1)) for j in range(1, N + 1) if j not in J]
        return ops

    def step3(F):
        return [("query", "covers")], lambda vals: not vals[0]

    return Encoder("square_cover_rects_oumv", "measures", step1, step2, step3,
                   fast=measure_engine(region), reference=measure_reference(region),
                   scenario="OuMv", oumv=True)


# disks ------------------------------------------------------------------------------------------

def _empty_disk_points(F: SetFamily):
    m, k = F.m, F.k
    w = 10 * k + 1
    pts = []
    for j in range(1, m + 1):
        for i in range(1, k + 2):
            pts += [Point2(w * j, 4 * i), Point2(w * j + 10 * k, 4 * i)]
        for i in range(1, k + 1):
            if not F.has(i, j):
                for dy in (1, 3):
                    pts += [Point2(w * j, 4 * i + dy), Point2(w * j + 10 * k, 4 * i + dy)]
    b = {j: Point2(w * j + 5 * k, 4) for j in range(1, m + 1)}
    return pts, b


def empty_disk_region(F: SetFamily, ip: int) -> Rect2:
    w = 10 * F.k + 1
    return Rect2(w, w * F.m + 10 * F.k, 4 * ip, 4 * ip + 4)


def enc_empty_disk() -> Encoder:
    def step1(F):
        pts, b = _empty_disk_points(F)
        return _ins(pts + list(b.values()))

    def step2(F, J):
        _, b = _empty_disk_points(F)
        return _dels(b[j] for j in sorted(J))

    def step3(F, J, ip):
        target = 25 * F.k ** 2 + 4
        return ([("query", empty_disk_region(F, ip))],
                lambda vals: vals[0] == target)

    ad = adapter_structure(adapters.largest_empty_disk)
    return Encoder("empty_disk", "largest_empty_disk", step1, step2, step3,
                   fast=ad, reference=ad, scenario="2")


@dataclass(frozen=True)
class DiskLayout:
    """Scaled disk gadget: every coordinate of the point gadget times ``s``."""
    s: int
    small_r: int         # radius of the small disks
    probe_r: int         # radius tested for emptiness, in scaled units
    big_L: int           # probe_r + radius of each big disk
    box: Rect2


def disk_layout(F: SetFamily, rho: Fraction) -> DiskLayout:
    m, k = F.m, F.k
    rho = Fraction(rho)
    s = 4 * k * rho.denominator // math.gcd(4 * k, rho.denominator)
    small = int(rho * s)
    # s * (5k + 1/(4k)) lies strictly between the no and yes radii
    reach = s * 5 * k + s // (4 * k)
    probe = reach - small
    w = 10 * k + 1
    box = Rect2(s * w, s * (w * m + 10 * k), 4 * s, 4 * s * (k + 1))
    half = (box.x1 - box.x0 + 1) // 2 + 1
    # points of the box below the band lie within big_L of the lower centre
    L = max(probe + 1, -(-(half * half + (2 * s - 1) ** 2) // (2 * (2 * s - 1))) + 2 * s)
    while half * half + (L - 2 * s + 1) ** 2 > L * L:
        L += 1
    return DiskLayout(s, small, probe, L, box)


def _big_disks(F, lay: DiskLayout, ip: int, inflate: bool):
    s = lay.s
    xc = (lay.box.x0 + lay.box.x1) // 2
    ymid = s * (4 * ip + 2)
    r = lay.big_L if inflate else lay.big_L - lay.probe_r
    return (Disk2(xc, ymid - lay.big_L - 1, r * r), Disk2(xc, ymid + lay.big_L + 1, r * r))


def _disk_gadget(F, lay: DiskLayout, radius: int):
    pts, b = _empty_disk_points(F)
    s = lay.s
    small = [Disk2(s * p.x, s * p.y, radius * radius) for p in pts]
    bd = {j: Disk2(s * p.x, s * p.y, radius * radius) for j, p in b.items()}
    return small, bd


def enc_empty_disk_among_disks(rho=Fraction(1, 2)) -> Encoder:
    rho = Fraction(rho)
    if not 0 < rho < 1:
        raise ValueError("rho must lie in (0, 1)")

    def step1(F):
        lay = disk_layout(F, rho)
        small, bd = _disk_gadget(F, lay, lay.small_r)
        return _ins(small + list(bd.values()))

    def step2(F, J):
        lay = disk_layout(F, rho)
        _, bd = _disk_gadget(F, lay, lay.small_r)
        return _dels(bd[j] for j in sorted(J))

    def step3(F, J, ip):
        lay = disk_layout(F, rho)
        c1, c2 = _big_disks(F, lay, ip, inflate=False)
        ops = [("insert", c1), ("insert", c2), ("query", (lay.box, lay.probe_r))]
        return ops, lambda vals: bool(vals[0])

    ad = adapter_structure(adapters.empty_disk_exists)
    return Encoder("empty_disk_among_disks", "empty_disk_among_disks", step1, step2, step3,
                   fast=ad, reference=ad, scenario="2", notes=f"rho={rho}")


def enc_rect_cover_disks() -> Encoder:
    def step1(F):
        lay = disk_layout(F, Fraction(0))
        small, bd = _disk_gadget(F, lay, lay.probe_r)
        return _ins(small + list(bd.values()))

    def step2(F, J):
        lay = disk_layout(F, Fraction(0))
        _, bd = _disk_gadget(F, lay, lay.probe_r)
        return _dels(bd[j] for j in sorted(J))

    def step3(F, J, ip):
        lay = disk_layout(F, Fraction(0))
        c1, c2 = _big_disks(F, lay, ip, inflate=True)
        ops = [("insert", c1), ("insert", c2), ("query", lay.box)]
        return ops, lambda vals: not vals[0]

    ad = adapter_structure(adapters.region_covered)
    return Encoder("rect_cover_disks", "region_covered", step1, step2, step3,
                   fast=ad, reference=ad, scenario="2")


# convex layers -----------------------------------------------------------------------------------

LAYER_BITS = 96
LAYER_SCALE = 1 << 56


def convex_layer_gadget(F: SetFamily) -> dict:
    """Labelled points ('q', i, j), ('q2', i, j), ('p', i, j), ('b', j)."""
    m, k = F.m, F.k
    eps = Fraction(1, k * m * m)
    alpha = Fraction(1, k * m ** 3)
    out = {}

    def at(radius, j, off=Fraction(0)):
        th = angle_fixed(j % m, m, offset=off, bits=LAYER_BITS)
        return Point2(*polar_snapped(radius, th, LAYER_BITS, LAYER_SCALE))

    for i in range(1, k + 1):
        base = 1 + 2 * (k - i) * eps
        for j in range(1, m + 1):
            out[("q", i, j)] = at(base, j)
            out[("q2", i, j)] = at(base + eps, j)
            if F.has(i, j):
                out[("p", i, j)] = at(base + eps, j, alpha)
    for j in range(1, m + 1):
        out[("b", j)] = at(1 + 2 * k * eps, j)
    return out


def enc_convex_layers() -> Encoder:
    cache = {}

    def gadget(F):
        if F not in cache:
            cache.clear()
            cache[F] = convex_layer_gadget(F)
        return cache[F]

    def step1(F):
        if F.m < 3:
            raise ValueError("convex layer gadget needs m >= 3")
        return _ins(gadget(F).values())

    def step2(F, J):
        if set(J) == set(range(1, F.m + 1)):
            raise ValueError("convex layer gadget needs J != {1..m}")
        g = gadget(F)
        return _dels(g[("b", j)] for j in sorted(J))

    def step3(F, J, ip):
        m = F.m
        return [("query", 2 * ip - 1)], lambda vals: vals[0] != m

    ad = adapter_structure(adapters.layer_size)
    return Encoder("convex_layers", "layers", step1, step2, step3, fast=ad, reference=ad,
                   scenario="2", min_m=3, forbid_full_J=True)


def all_encoders() -> list:
    return [
        enc_square_range_marking(), enc_rect_range_marking_oumv(),
        enc_maximal_points("fully_dynamic"), enc_maximal_points("incremental"),
        enc_extremal_points(), enc_set_cover(False), enc_set_cover(True),
        enc_kmp_squares(), enc_discrete_kmp(), enc_depth_squares(),
        enc_square_cover_squares(), enc_square_cover_rects_oumv(),
        enc_empty_disk(), enc_empty_disk_among_disks(), enc_rect_cover_disks(),
        enc_convex_layers(),
    ]


# structure handles -----------------------------------------------------------------------------

class Handle:
    """Uniform face over a structure: ``apply(op)`` and ``undo()`` per update."""

    supports = frozenset()

    def __init__(self):
        self.counts = {"insert": 0, "delete": 0, "mark": 0, "query": 0}

    def apply(self, op):
        kind, arg = op
        if kind not in self.supports:
            raise TypeError(f"capability mismatch: {type(self).__name__} cannot {kind}")
        self.counts[kind] += 1
        return getattr(self, "_" + kind)(arg)


class _KdHandle(Handle):
    supports = frozenset({"mark", "query"})

    def __init__(self, points):
        super().__init__()
        self.s = MarkKdTree(points)

    def _mark(self, r):
        self.s.mark_range(r)

    def _query(self, q):
        return self.s.unmarked_count() if q == "unmarked_count" else self.s.any_unmarked()

    def undo(self):
        self.s.undo()

    def snapshot(self):
        return self.s.snapshot()


class _RefMarkHandle(Handle):
    supports = frozenset({"mark", "query"})

    def __init__(self, points):
        super().__init__()
        self.s = adapters.marking_reference(points)

    def _mark(self, r):
        self.s.insert(r)

    def _query(self, q):
        return self.s.query()

    def undo(self):
        self.s.undo()

    def snapshot(self):
        return self.s.snapshot()


def _init_points(init_ops):
    pts = []
    for kind, o in init_ops:
        if kind != "insert":
            raise TypeError("marking structures are built from points only")
        pts.append(o)
    return pts


def kd_marking(F=None):
    return lambda init_ops: _KdHandle(_init_points(init_ops))


def reference_marking(F=None):
    return lambda init_ops: _RefMarkHandle(_init_points(init_ops))


class _MeasureHandle(Handle):
    supports = frozenset({"insert", "delete", "query"})

    def __init__(self, C=None):
        super().__init__()
        self.s = SlabMeasureEngine(C)

    def _insert(self, o):
        (self.s.insert_rect if isinstance(o, Rect2) else self.s.insert_point)(o)

    def _delete(self, o):
        (self.s.delete_rect if isinstance(o, Rect2) else self.s.delete_point)(o)

    def _query(self, q):
        return {"area": self.s.query_union_area, "depth": self.s.query_depth,
                "covers": self.s.query_covers,
                "covered_count": self.s.query_covered_count}[q]()

    def undo(self):
        self.s.undo()

    def snapshot(self):
        s = self.s
        extra = (s.query_union_area(), s.query_depth(), s.query_covered_count())
        return s.snapshot(), extra


class _AdapterHandle(Handle):
    supports = frozenset({"insert", "delete", "query"})

    def __init__(self, adapter):
        super().__init__()
        self.s = adapter

    def _insert(self, o):
        self.s.insert(o)

    def _delete(self, o):
        self.s.delete(o)

    def _query(self, q):
        return self.s.query(q)

    def undo(self):
        self.s.undo()

    def snapshot(self):
        return self.s.snapshot()


def _run_init(h, init_ops):
    for op in init_ops:
        h.apply(op)
    return h


def measure_engine(region=None):
    def bind(F):
        C = region(F) if region else None
        return lambda init_ops: _run_init(_MeasureHandle(C), init_ops)
    return bind


def measure_reference(region=None):
    def bind(F):
        C = region(F) if region else None
        return lambda init_ops: _run_init(_AdapterHandle(adapters.measures_reference(C)), init_ops)
    return bind


def adapter_structure(make):
    def bind(F):
        return lambda init_ops: _run_init(_AdapterHandle(make()), init_ops)
    return bind


# drivers -------------------------------------------------------------------------------------

def _updates(ops):
    return sum(1 for kind, _ in ops if kind != "query")


def _run_ops(h, ops):
    vals = []
    for op in ops:
        ans = h.apply(op)
        if op[0] == "query":
            vals.append(ans)
    return vals


def _structure(enc, F, which):
    bind = enc.fast if which == "fast" else enc.reference
    return bind(F)


def run_multiphase(enc: Encoder, F: SetFamily, q: MultiphaseQuery, which: str = "fast") -> bool:
    if enc.oumv:
        raise TypeError("encoder expects the OuMv driver")
    h = _structure(enc, F, which)(enc.step1(F))
    _run_ops(h, enc.step2(F, q.J))
    ops, decide = enc.step3(F, q.J, q.i_prime)
    return bool(decide(_run_ops(h, ops)))


@dataclass
class ProbeResult:
    decisions: list
    undo_ok: bool
    handle: object = field(repr=False, default=None)


def probe_all(enc: Encoder, F: SetFamily, J, which: str = "fast") -> ProbeResult:
    """Steps 1 and 2 once, then every i' in turn, undoing Step 3 in between."""
    J = frozenset(J)
    h = _structure(enc, F, which)(enc.step1(F))
    _run_ops(h, enc.step2(F, J))
    base = h.snapshot()
    out, ok = [], True
    for ip in range(1, F.k + 1):
        ops, decide = enc.step3(F, J, ip)
        out.append(bool(decide(_run_ops(h, ops))))
        for _ in range(_updates(ops)):
            h.undo()
        ok = ok and h.snapshot() == base
    return ProbeResult(out, ok, h)


def run_oumv(enc: Encoder, F: SetFamily, I, J, which: str = "fast") -> bool:
    if not enc.oumv:
        raise TypeError("encoder expects the multiphase driver")
    h = _structure(enc, F, which)(enc.step1(F))
    _run_ops(h, enc.step2(F, set(I), set(J)))
    ops, decide = enc.step3(F)
    return bool(decide(_run_ops(h, ops)))


def probe_oumv(enc: Encoder, F: SetFamily, pairs, which: str = "fast") -> ProbeResult:
    """One structure, many (I, J) pairs; Step 2 and 3 are undone after each pair."""
    h = _structure(enc, F, which)(enc.step1(F))
    base = h.snapshot()
    out, ok = [], True
    for I, J in pairs:
        ops = enc.step2(F, set(I), set(J))
        q, decide = enc.step3(F)
        _run_ops(h, ops)
        out.append(bool(decide(_run_ops(h, q))))
        for _ in range(_updates(ops) + _updates(q)):
            h.undo()
        ok = ok and h.snapshot() == base
    return ProbeResult(out, ok, h)


# depth OMv ----------------------------------------------------------------------------------------

def depth_omv_threshold(N: int, t: int, r: int) -> int:
    """Depth reached in round t (1-based) at row r iff (M v_t)_r = 1."""
    return (t - 1) * (2 * N + 1) + 2 * r + 2


def run_depth_omv(handle: Handle, inst: OMvInstance) -> list:
    """Boolean products M v_t for every vector, from depth queries only.

    ``handle`` must accept ("insert", Rect2) and ("query", "depth"); nothing
    is ever deleted.
    """
    N, M = inst.N, inst.M
    side = N * N
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            if M[i - 1][j - 1]:
                handle.apply(("insert", _halfopen_square(N * j, i, 1)))
    results = []
    for t, v in enumerate(inst.vectors, start=1):
        for j in range(1, N + 1):
            if v[j - 1]:
                handle.apply(("insert", _halfopen_square(N * j, 1, N)))
        row = []
        for r in range(1, N + 1):
            handle.apply(("insert", _halfopen_square(N, r, side)))
            handle.apply(("insert", _halfopen_square(N, r + 1 - side, side)))
            row.append(int(handle.apply(("query", "depth")) >= depth_omv_threshold(N, t, r)))
            handle.apply(("insert", _halfopen_square(N, r + 1, side)))
            handle.apply(("insert", _halfopen_square(N, r - side, side)))
        for j in range(1, N + 1):
            if not v[j - 1]:
                handle.apply(("insert", _halfopen_square(N * j, 1, N)))
        results.append(row)
    return results


def depth_engine_handle() -> Handle:
    return _MeasureHandle()


def depth_reference_handle() -> Handle:
    return _AdapterHandle(adapters.measures_reference())


# matrix-vector via hypervolume -----------------------------------------------------------------------

def matvec_boxes(M, v, W: int) -> list:
    N = len(M)
    B = N * (N + 1)
    boxes = []
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            h = B - i - j * N
            boxes.append(AnchoredBox3(j * W, i * W, h))
            boxes.append(AnchoredBox3(j * W, (i - 1) * W + M[i - 1][j - 1], h + 1))
    for j in range(1, N + 1):
        boxes.append(AnchoredBox3((j - 1) * W + v[j - 1], N * W, B - j * N))
    return boxes


def matvec_probe(N: int, W: int, k: int) -> AnchoredBox3:
    return AnchoredBox3(N * W, k * W, N * (N + 1))


def matvec_delta(M, v, W: int, k: int) -> int:
    """Closed form of the volume gained by the k-th probe box."""
    N = len(M)
    row = M[k - 1]
    return ((2 * k + N * (N + 1)) * N * W * W // 2 - W * sum(row) - k * W * sum(v)
            + sum(a * b for a, b in zip(v, row)))


def run_matvec_hypervolume(structure, M, v, W: int, trace: list | None = None) -> list:
    """M v from volume readings: c_0 after the gadget, c_k after probe k.

    ``structure`` needs ``insert_box`` and ``current_volume``.  Readings are
    appended to ``trace`` when given.
    """
    N = len(M)
    for b in matvec_boxes(M, v, W):
        structure.insert_box(b)
    prev = structure.current_volume()
    if trace is not None:
        trace.append(prev)
    sv = sum(v)
    out = []
    for k in range(1, N + 1):
        structure.insert_box(matvec_probe(N, W, k))
        cur = structure.current_volume()
        if trace is not None:
            trace.append(cur)
        d = cur - prev
        prev = cur
        out.append(d - (2 * k + N * (N + 1)) * N * W * W // 2 + W * sum(M[k - 1]) + k * W * sv)
    return out


class ReferenceHV:
    """Hypervolume by recomputation, for cross-checking the incremental structure."""

    def __init__(self):
        self.boxes = []

    def insert_box(self, b):
        self.boxes.append(AnchoredBox3(*b))
        return self.current_volume()

    def current_volume(self):
        return oracles.hypervolume(self.boxes)


# instance text format ---------------------------------------------------------------------------

def _ints(line):
    return [int(t) for t in line.split()]


def dump_instance(F: SetFamily, J=None, I=None, i_prime=None) -> str:
    lines = [f"{F.m} {F.k}"]
    lines += [" ".join(map(str, s)) for s in F.sets]
    if J is not None:
        lines.append("J: " + " ".join(map(str, sorted(J))))
    if I is not None:
        lines.append("I: " + " ".join(map(str, sorted(I))))
    if i_prime is not None:
        lines.append(f"# i' = {i_prime}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str):
    """Returns (F, J, I, i_prime); J, I and i_prime are None when absent."""
    raw = text.split("\n")
    if raw and raw[-1] == "":
        raw.pop()
    i_prime = None
    lines = []
    for ln in raw:
        if ln.startswith("#"):
            if "i'" in ln:
                i_prime = int(ln.split("=")[1])
            continue
        lines.append(ln)
    m, k = _ints(lines[0])
    sets = [tuple(_ints(ln)) for ln in lines[1:1 + k]]
    if len(sets) != k:
        raise ValueError("truncated instance")
    J = I = None
    for ln in lines[1 + k:]:
        if ln.startswith("J:"):
            J = frozenset(_ints(ln[2:]))
        elif ln.startswith("I:"):
            I = frozenset(_ints(ln[2:]))
        elif ln.strip():
            raise ValueError(f"unexpected line {ln!r}")
    return SetFamily(m, tuple(sets)), J, I, i_prime


def dump_omv(inst: OMvInstance) -> str:
    lines = [f"{inst.N} {inst.W}"]
    lines += [" ".join(map(str, r)) for r in inst.M]
    lines += [" ".join(map(str, v)) for v in inst.vectors]
    return "\n".join(lines) + "\n"


def parse_omv(text: str) -> OMvInstance:
    lines = [ln for ln in text.split("\n") if ln.strip()]
    N, W = _ints(lines[0])
    M = [_ints(ln) for ln in lines[1:1 + N]]
    vecs = [_ints(ln) for ln in lines[1 + N:]]
    return OMvInstance(N, W, M, vecs)


# enumeration helpers ------------------------------------------------------------------------------

def all_subsets(m: int):
    for mask in range(1 << m):
        yield frozenset(j + 1 for j in range(m) if mask >> j & 1)


def all_families(m: int, k: int):
    subs = list(all_subsets(m))
    for combo in itertools.product(subs, repeat=k):
        yield SetFamily(m, tuple(tuple(sorted(s)) for s in combo))


def random_family(rng, m: int, k: int, density: float = 0.5) -> SetFamily:
    return SetFamily(m, tuple(tuple(j for j in range(1, m + 1) if rng.random() < density)
                              for _ in range(k)))


def random_subset(rng, m: int) -> frozenset:
    return frozenset(j for j in range(1, m + 1) if rng.random() < 0.5)
