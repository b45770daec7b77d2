"""Range marking over a static planar point set.

A balanced kd-tree stores, per node, the bounding box of its points, the
number of points below it that are still unmarked, and an "all marked"
flag.  Leaves hold a small bucket of points with a bitmask of the marked
ones.  Marking a range touches O(sqrt n) nodes; flags are never pushed
down, so the only state an update changes lies on the nodes it visits.

Node fields live in typed arrays rather than lists of boxed ints: the
walk is memory bound, and scattered int objects made the per-node cost
grow with n.
"""

from __future__ import annotations

from array import array

from .core import Rect2, check_coord

LEAF_SIZE = 8


class MarkKdTree:
    __slots__ = ("n", "bx0", "bx1", "by0", "by1", "left", "right", "lo", "hi",
                 "px", "py", "unmarked", "flag", "mask", "journal", "last_visits")

    def __init__(self, points):
        pts = [tuple(p) for p in points]
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate points")
        for p in pts:
            check_coord(p[0])
            check_coord(p[1])
        self.n = len(pts)
        self.bx0, self.bx1, self.by0, self.by1 = (array("q") for _ in range(4))
        # children, or -1; leaves own px/py[lo:hi]
        self.left, self.right, self.lo, self.hi = (array("q") for _ in range(4))
        self.px, self.py = array("q"), array("q")
        self.unmarked = array("q")
        self.flag = array("b")
        self.mask = array("H")
        self.journal = []
        self.last_visits = 0
        if pts:
            self._build(pts, 0)

    def _new(self, pts, leaf):
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        self.bx0.append(min(xs))
        self.bx1.append(max(xs))
        self.by0.append(min(ys))
        self.by1.append(max(ys))
        self.left.append(-1)
        self.right.append(-1)
        if leaf:
            self.lo.append(len(self.px))
            self.px.extend(xs)
            self.py.extend(ys)
            self.hi.append(len(self.px))
        else:
            self.lo.append(0)
            self.hi.append(0)
        self.unmarked.append(len(pts))
        self.flag.append(0)
        self.mask.append(0)
        return len(self.unmarked) - 1

    def _build(self, pts, axis):
        node = self._new(pts, len(pts) <= LEAF_SIZE)
        if len(pts) > LEAF_SIZE:
            # median split; equal keys stay on the left
            pts.sort(key=lambda p: (p[axis], p[1 - axis]))
            mid = (len(pts) + 1) // 2
            split = pts[mid - 1][axis]
            while mid < len(pts) and pts[mid][axis] == split:
                mid += 1
            if mid == len(pts):
                mid = (len(pts) + 1) // 2
            self.left[node] = self._build(pts[:mid], 1 - axis)
            self.right[node] = self._build(pts[mid:], 1 - axis)
        return node

    def is_leaf(self, v) -> bool:
        return self.left[v] < 0

    def _eff(self, v):
        return 0 if self.flag[v] else self.unmarked[v]

    def mark_range(self, r: Rect2) -> None:
        group = []
        self.journal.append(group)
        self.last_visits = 0
        if self.n:
            self._mark(0, r.x0, r.x1, r.y0, r.y1, group)

    def _mark(self, v, x0, x1, y0, y1, group):
        self.last_visits += 1
        if self.flag[v] or self.unmarked[v] == 0:
            return
        bx0, bx1, by0, by1 = self.bx0[v], self.bx1[v], self.by0[v], self.by1[v]
        if bx1 < x0 or bx0 > x1 or by1 < y0 or by0 > y1:
            return
        if x0 <= bx0 and bx1 <= x1 and y0 <= by0 and by1 <= y1:
            group.append((v, 0, self.unmarked[v], self.mask[v]))
            self.flag[v] = 1
            return
        lt = self.left[v]
        if lt < 0:
            old = self.mask[v]
            new = old
            px, py, lo = self.px, self.py, self.lo[v]
            for b in range(self.hi[v] - lo):
                if x0 <= px[lo + b] <= x1 and y0 <= py[lo + b] <= y1:
                    new |= 1 << b
            if new != old:
                group.append((v, 0, self.unmarked[v], old))
                self.mask[v] = new
                self.unmarked[v] = self.hi[v] - lo - new.bit_count()
            return
        rt = self.right[v]
        self._mark(lt, x0, x1, y0, y1, group)
        self._mark(rt, x0, x1, y0, y1, group)
        now = self._eff(lt) + self._eff(rt)
        if now != self.unmarked[v]:
            group.append((v, self.flag[v], self.unmarked[v], self.mask[v]))
            self.unmarked[v] = now

    def any_unmarked(self) -> bool:
        return self.n > 0 and self._eff(0) > 0

    def unmarked_count(self) -> int:
        return self._eff(0) if self.n else 0

    def undo(self) -> None:
        if not self.journal:
            raise IndexError("undo on empty journal")
        for v, flag, cnt, mask in reversed(self.journal.pop()):
            self.flag[v] = flag
            self.unmarked[v] = cnt
            self.mask[v] = mask

    def unmarked_points(self) -> list:
        out = []
        stack = [0] if self.n else []
        while stack:
            v = stack.pop()
            if self.flag[v]:
                continue
            if self.left[v] < 0:
                mask, lo = self.mask[v], self.lo[v]
                out.extend((self.px[i], self.py[i]) for i in range(lo, self.hi[v])
                           if not mask >> (i - lo) & 1)
            else:
                stack.append(self.left[v])
                stack.append(self.right[v])
        return out

    def snapshot(self):
        """Observable node state, for equality checks after undo."""
        return (self.flag.tobytes(), self.unmarked.tobytes(), self.mask.tobytes())


def build(points) -> MarkKdTree:
    return MarkKdTree(points)
