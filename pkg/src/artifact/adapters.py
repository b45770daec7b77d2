"""Dynamic wrappers that answer every query by rerunning a static oracle.

They are slow by design and serve as the reference structure for problems
that have no dedicated engine.
"""

from __future__ import annotations

from collections import Counter, namedtuple
from typing import Callable

from . import oracles
from .core import Rect2

WeightedRect = namedtuple("WeightedRect", "rect weight")


class RecomputeAdapter:
    def __init__(self, oracle: Callable, name: str = ""):
        self.name = name
        self._oracle = oracle
        self._items = Counter()
        self.journal = []
        self.version = 0
        self._memo = None

    def insert(self, o) -> None:
        self._items[o] += 1
        self.journal.append((o, -1))
        self.version += 1

    def delete(self, o) -> None:
        if self._items[o] <= 0:
            raise KeyError(f"delete of absent object {o!r}")
        self._apply(o, -1)
        self.journal.append((o, +1))
        self.version += 1

    def _apply(self, o, d):
        c = self._items[o] + d
        if c:
            self._items[o] = c
        else:
            del self._items[o]

    def undo(self) -> None:
        if not self.journal:
            raise IndexError("undo on empty journal")
        o, d = self.journal.pop()
        self._apply(o, d)
        self.version += 1

    def objects(self) -> list:
        return list(self._items.elements())

    def __len__(self):
        return sum(self._items.values())

    def query(self, q=None):
        key = (self.version, q)
        if self._memo is not None and self._memo[0] == key:
            return self._memo[1]
        ans = self._oracle(self.objects(), q)
        self._memo = (key, ans)
        return ans

    def snapshot(self):
        return frozenset(self._items.items())


def extremal_count() -> RecomputeAdapter:
    return RecomputeAdapter(lambda objs, q: oracles.extremal_count_3d(objs), "extremal_count")


def maximal_count() -> RecomputeAdapter:
    return RecomputeAdapter(lambda objs, q: oracles.maximal_count_3d(objs), "maximal_count")


def _layer_size(objs, i):
    sizes = oracles.convex_layer_sizes(objs)
    if i is None or i < 1:
        raise ValueError("layer index must be >= 1")
    return sizes[i - 1] if i <= len(sizes) else 0


def layer_size() -> RecomputeAdapter:
    """query(i): number of points on the i-th convex layer (1-based, 0 past the last)."""
    return RecomputeAdapter(_layer_size, "layer_size")


def largest_empty_disk() -> RecomputeAdapter:
    """query(B): squared radius of the largest empty disk centred in B."""
    return RecomputeAdapter(lambda objs, B: oracles.largest_empty_disk(objs, B), "largest_empty_disk")


def region_covered() -> RecomputeAdapter:
    """Objects are Disk2; query(B) tells whether B lies in their union."""
    return RecomputeAdapter(lambda objs, B: oracles.region_covered_by_disks(objs, B), "region_covered")


def empty_disk_exists() -> RecomputeAdapter:
    """Objects are Disk2; query((B, r)) asks for an empty disk of radius r centred in B."""
    return RecomputeAdapter(
        lambda objs, q: oracles.empty_disk_exists(objs, q[0], q[1]), "empty_disk_exists")


def _measure(C):
    def run(objs, q):
        rects = [o for o in objs if isinstance(o, Rect2)]
        if q == "area":
            return oracles.union_area(rects)
        if q == "depth":
            return oracles.max_depth(rects)
        if q == "covers":
            return oracles.covers_region(rects, C)
        if q == "covered_count":
            pts = [o for o in objs if not isinstance(o, Rect2)]
            return oracles.covered_count(pts, rects)
        raise ValueError(f"unknown measure query {q!r}")
    return run


def measures_reference(C: Rect2 | None = None) -> RecomputeAdapter:
    """Rectangles and points; queries 'area', 'depth', 'covers' (of C), 'covered_count'."""
    return RecomputeAdapter(_measure(C), "measures_reference")


def marking_reference(points) -> RecomputeAdapter:
    """Objects are marked ranges; query() tells whether some point escapes all of them."""
    pts = [tuple(p) for p in points]

    def run(ranges, q):
        return any(not any(r.contains(p) for r in ranges) for p in pts)
    return RecomputeAdapter(run, "marking_reference")


def _split_cover(objs):
    pts, rects, weights = [], [], []
    for o in objs:
        if isinstance(o, WeightedRect):
            rects.append(o.rect)
            weights.append(o.weight)
        elif isinstance(o, Rect2):
            rects.append(o)
            weights.append(1)
        else:
            pts.append(o)
    return pts, rects, weights


def _cover(mode):
    def run(objs, q):
        pts, rects, weights = _split_cover(objs)
        if mode == "exact":
            return oracles.min_weight_set_cover(pts, rects, weights)
        return oracles.greedy_weight_set_cover(pts, rects, weights)
    return run


def min_cover() -> RecomputeAdapter:
    """Objects are points plus Rect2 or WeightedRect; query() is the optimum cover weight."""
    return RecomputeAdapter(_cover("exact"), "min_cover")


def approx_cover(mode: str = "greedy") -> RecomputeAdapter:
    """Cover weight that is at least the optimum: exact, or greedy (within H(n) of it)."""
    if mode not in ("exact", "greedy"):
        raise ValueError("mode must be 'exact' or 'greedy'")
    return RecomputeAdapter(_cover(mode), f"approx_cover[{mode}]")


__all__ = [
    "RecomputeAdapter", "WeightedRect", "extremal_count", "maximal_count", "layer_size",
    "largest_empty_disk", "region_covered", "empty_disk_exists", "min_cover", "approx_cover",
    "measures_reference", "marking_reference",
]
