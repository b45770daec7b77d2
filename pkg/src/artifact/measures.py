"""Fully dynamic union area, depth, coverage and covered-point counting.

The x-axis is cut into about sqrt(n) slabs.  Inside a slab a rectangle is
either *full* (it spans the slab) or *partial* (one of its vertical edges
falls inside).  Full rectangles are +-1 range updates on a per-slab segment
tree over y.  Partial rectangles only change a per-slab base profile
``l(y)`` (x-length covered by partial pieces) and ``d(y)`` (their depth);
that profile is recomputed locally and written into the tree with lazy
range assignment, so a node with no full rectangle covering it reports
``l * length`` as its area.

Closed intervals are handled by doubling coordinates: [a, b] becomes the
half-open [2a, 2b+1), and the true length of a doubled range [u, v) is
v//2 - u//2.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections import Counter

from . import oracles
from .core import Rect2

_FAR = 1 << 130


def _tlen(lo, hi):
    return (hi >> 1) - (lo >> 1)


class _YTree:
    """Implicit segment tree over doubled y with lazy base assignment."""

    __slots__ = ("W", "lo", "hi", "lc", "rc", "cnt", "CL", "MC", "A", "D",
                 "NP", "CP", "tagL", "tagD", "PC")

    def __init__(self, width, lo, hi):
        self.W = width
        self.lo, self.hi = lo, hi
        self.lc, self.rc = [], []
        self.cnt, self.CL, self.MC = [], [], []
        self.A, self.D, self.NP, self.CP = [], [], [], []
        self.tagL, self.tagD, self.PC = [], [], []
        self._node(0, 0)

    def _node(self, tl, td):
        self.lc.append(-1)
        self.rc.append(-1)
        self.cnt.append(0)
        self.CL.append(0)
        self.MC.append(0)
        self.A.append(0)
        self.D.append(td)
        self.NP.append(0)
        self.CP.append(0)
        self.tagL.append(tl)
        self.tagD.append(td)
        self.PC.append(0)
        return len(self.cnt) - 1

    def _pull(self, v, lo, hi):
        tl = _tlen(lo, hi)
        c = self.cnt[v]
        l = self.lc[v]
        if l == -1:
            self.CL[v] = tl if c else 0
            self.MC[v] = c
            self.A[v] = self.W * tl if c else self.tagL[v] * tl
            self.D[v] = c + self.tagD[v]
            self.CP[v] = self.NP[v] if c else self.PC[v]
            return
        r = self.rc[v]
        cl = tl if c else self.CL[l] + self.CL[r]
        self.CL[v] = cl
        mc = c + max(self.MC[l], self.MC[r])
        self.MC[v] = mc
        t = self.tagL[v]
        if c:
            self.A[v] = self.W * tl
        elif t is not None:
            self.A[v] = self.W * cl + t * (tl - cl)
        else:
            self.A[v] = self.A[l] + self.A[r]
        if t is not None:
            self.D[v] = mc + self.tagD[v]
        else:
            self.D[v] = c + max(self.D[l], self.D[r])
        np_ = self.NP[l] + self.NP[r]
        self.NP[v] = np_
        self.CP[v] = np_ if c else self.CP[l] + self.CP[r]

    def _push(self, v, lo, hi):
        t = self.tagL[v]
        if self.lc[v] == -1:
            self.lc[v] = self._node(t, self.tagD[v])
            self.rc[v] = self._node(t, self.tagD[v])
            mid = (lo + hi) >> 1
            self._pull(self.lc[v], lo, mid)
            self._pull(self.rc[v], mid, hi)
        elif t is not None:
            mid = (lo + hi) >> 1
            for ch, a, b in ((self.lc[v], lo, mid), (self.rc[v], mid, hi)):
                self.tagL[ch] = t
                self.tagD[ch] = self.tagD[v]
                self._pull(ch, a, b)
        self.tagL[v] = None
        self.tagD[v] = None

    def add(self, ql, qh, delta):
        self._add(0, self.lo, self.hi, ql, qh, delta)

    def _add(self, v, lo, hi, ql, qh, delta):
        if ql <= lo and hi <= qh:
            self.cnt[v] += delta
            self._pull(v, lo, hi)
            return
        self._push(v, lo, hi)
        mid = (lo + hi) >> 1
        if ql < mid:
            self._add(self.lc[v], lo, mid, ql, qh, delta)
        if qh > mid:
            self._add(self.rc[v], mid, hi, ql, qh, delta)
        self._pull(v, lo, hi)

    def assign(self, ql, qh, L, d):
        self._assign(0, self.lo, self.hi, ql, qh, L, d)

    def _assign(self, v, lo, hi, ql, qh, L, d):
        if ql <= lo and hi <= qh:
            self.tagL[v] = L
            self.tagD[v] = d
            self._pull(v, lo, hi)
            return
        self._push(v, lo, hi)
        mid = (lo + hi) >> 1
        if ql < mid:
            self._assign(self.lc[v], lo, mid, ql, qh, L, d)
        if qh > mid:
            self._assign(self.rc[v], mid, hi, ql, qh, L, d)
        self._pull(v, lo, hi)

    def build(self, ivs, runs):
        """Rebuild from scratch: full intervals ``ivs`` as (lo, hi, mult) over
        the base profile ``runs`` as (lo, hi, L, d), which must tile the domain.
        Counts land on the same canonical nodes that ``add`` would use."""
        for name in self.__slots__[3:]:
            setattr(self, name, [])
        self._build(self.lo, self.hi, ivs, runs)

    def _build(self, lo, hi, ivs, runs):
        v = self._node(None, None)
        c = 0
        part = []
        for iv in ivs:
            if iv[0] <= lo and hi <= iv[1]:
                c += iv[2]
            else:
                part.append(iv)
        self.cnt[v] = c
        rs = [r for r in runs if r[0] < hi and r[1] > lo]
        if len(rs) == 1 and not part:
            self.tagL[v] = rs[0][2]
            self.tagD[v] = rs[0][3]
        else:
            mid = (lo + hi) >> 1
            left = [iv for iv in part if iv[0] < mid]
            right = [iv for iv in part if iv[1] > mid]
            self.lc[v] = self._build(lo, mid, left, rs)
            self.rc[v] = self._build(mid, hi, right, rs)
        self._pull(v, lo, hi)
        return v

    def point(self, y2, dnp, dpc):
        v, lo, hi = 0, self.lo, self.hi
        path = []
        while hi - lo > 1:
            self._push(v, lo, hi)
            path.append((v, lo, hi))
            mid = (lo + hi) >> 1
            if y2 < mid:
                v, hi = self.lc[v], mid
            else:
                v, lo = self.rc[v], mid
        self.NP[v] += dnp
        self.PC[v] += dpc
        self._pull(v, lo, hi)
        for u, a, b in reversed(path):
            self._pull(u, a, b)


class _XTree:
    """Static counting tree over compressed doubled x, for profile sweeps."""

    __slots__ = ("xs", "n", "cnt", "cov", "mx", "w")

    def __init__(self, xs):
        self.xs = xs
        self.n = len(xs) - 1
        size = 4 * max(self.n, 1)
        self.cnt = [0] * size
        self.cov = [0] * size
        self.mx = [0] * size
        self.w = [0] * size
        if self.n > 0:
            self._init(1, 0, self.n)

    def _init(self, v, l, r):
        if r - l == 1:
            self.w[v] = _tlen(self.xs[l], self.xs[r])
            return
        m = (l + r) >> 1
        self._init(2 * v, l, m)
        self._init(2 * v + 1, m, r)
        self.w[v] = self.w[2 * v] + self.w[2 * v + 1]

    def add(self, a, b, delta, v=1, l=0, r=None):
        if r is None:
            r = self.n
        if b <= l or r <= a:
            return
        if a <= l and r <= b:
            self.cnt[v] += delta
        else:
            m = (l + r) >> 1
            self.add(a, b, delta, 2 * v, l, m)
            self.add(a, b, delta, 2 * v + 1, m, r)
        if r - l == 1:
            self.cov[v] = self.w[v] if self.cnt[v] else 0
            self.mx[v] = self.cnt[v]
        else:
            self.cov[v] = self.w[v] if self.cnt[v] else self.cov[2 * v] + self.cov[2 * v + 1]
            self.mx[v] = self.cnt[v] + max(self.mx[2 * v], self.mx[2 * v + 1])


class _Slab:
    __slots__ = ("X0", "X1", "tree", "full", "pieces", "points", "pcount")

    def __init__(self, X0, X1, ylo, yhi):
        self.X0, self.X1 = X0, X1
        self.tree = _YTree(_tlen(X0, X1), ylo, yhi)
        self.full = Counter()
        self.pieces = Counter()
        self.points = Counter()
        self.pcount = {}

    def load(self):
        return sum(self.pieces.values()) + sum(self.points.values())


def _doubled(r: Rect2):
    return 2 * r.x0, 2 * r.x1 + 1, 2 * r.y0, 2 * r.y1 + 1


class SlabMeasureEngine:
    """Union area, max depth, coverage of a fixed region C and the number of
    covered points, under insertion and deletion of rectangles and points.

    Rectangles and points are multisets.  Every update can be undone.
    """

    def __init__(self, C: Rect2 | None = None, *, min_slabs: int = 1):
        self._rects = Counter()
        self._pts = Counter()
        self.journal = []
        self.C = C
        self._clip = SlabMeasureEngine(None) if C is not None and C.area > 0 else None
        self._min_slabs = min_slabs
        self._ybits = 8
        self.rebuilds = 0
        self._rebuild()

    @classmethod
    def from_objects(cls, rects=(), points=(), C: Rect2 | None = None) -> "SlabMeasureEngine":
        """Bulk load with one rebuild; the journal starts empty."""
        eng = cls(C)
        eng._rects.update(rects)
        eng._pts.update(tuple(p) for p in points)
        if eng._clip is not None:
            eng._clip = cls.from_objects(
                [c for c in (r.intersect(C) for r in eng._rects.elements()) if c is not None])
        eng._rebuild()
        return eng

    @property
    def rebuild_period(self) -> int:
        """Updates between scheduled rebuilds at the current size."""
        return max(self._built_at, 64)

    # -- bookkeeping ---------------------------------------------------------

    def _size(self):
        return sum(self._rects.values()) + sum(self._pts.values())

    def _target(self):
        return max(1, math.isqrt(max(self._size(), 1) - 1) + 1)

    def _rebuild(self):
        self.rebuilds += 1
        n = self._size()
        self._built_at = n
        self._since = 0
        self._split_at = 4 * self._target() + 16
        coords = [0]
        for r in self._rects:
            coords.extend(abs(v) for v in _doubled(r))
        for p in self._pts:
            coords.extend((abs(2 * p[0]), abs(2 * p[1])))
        self._ybits = max(self._ybits, max(coords).bit_length() + 1)
        ylo, yhi = -(1 << self._ybits), 1 << self._ybits
        self._ylo, self._yhi = ylo, yhi
        events = []
        for r, mlt in self._rects.items():
            dx0, dx1, _, _ = _doubled(r)
            events.extend([dx0, dx1] * mlt)
        for p, mlt in self._pts.items():
            events.extend([2 * p[0]] * mlt)
        events.sort()
        s = max(self._min_slabs, self._target())
        bounds = [-_FAR]
        if events:
            for i in range(1, s):
                x = events[(i * len(events)) // s]
                if x > bounds[-1]:
                    bounds.append(x)
        bounds.append(_FAR)
        self._X = bounds
        self._slabs = [_Slab(a, b, ylo, yhi) for a, b in zip(bounds, bounds[1:])]
        for r, mlt in self._rects.items():
            self._place_rect(r, mlt, recompute=False)
        for sl in self._slabs:
            ivs = [(_doubled(r)[2], _doubled(r)[3], m) for r, m in sl.full.items()]
            sl.tree.build(ivs, self._profile(sl, ylo, yhi))
        for p, mlt in self._pts.items():
            self._place_point(p, mlt)
        self._area = sum(sl.tree.A[0] for sl in self._slabs)
        self._cp = sum(sl.tree.CP[0] for sl in self._slabs)

    def _slab_range(self, dx0, dx1):
        a = bisect_right(self._X, dx0) - 1
        b = bisect_right(self._X, dx1 - 1) - 1
        return a, b

    # -- per-slab work ---------------------------------------------------------

    def _recompute(self, sl: _Slab, Y0, Y1):
        """Rewrite the partial-piece profile of ``sl`` on doubled y in [Y0, Y1)."""
        for a, b, L, d in self._profile(sl, Y0, Y1):
            sl.tree.assign(a, b, L, d)

    def _profile(self, sl: _Slab, Y0, Y1):
        """Maximal runs (a, b, L, d) of the partial-piece profile tiling [Y0, Y1)."""
        live = []
        xs = set()
        for (px0, px1, py0, py1), mlt in sl.pieces.items():
            if py1 <= Y0 or py0 >= Y1:
                continue
            live.append((px0, px1, max(py0, Y0), min(py1, Y1), mlt))
            xs.add(px0)
            xs.add(px1)
        if not live:
            return [(Y0, Y1, 0, 0)]
        xs = sorted(xs)
        idx = {x: i for i, x in enumerate(xs)}
        xt = _XTree(xs)
        events = []
        for px0, px1, a, b, mlt in live:
            events.append((a, idx[px0], idx[px1], mlt))
            events.append((b, idx[px0], idx[px1], -mlt))
        events.sort()
        cur = Y0
        runs = []
        i = 0
        while i < len(events):
            y = events[i][0]
            if y > cur:
                runs.append((cur, y, xt.cov[1], xt.mx[1]))
                cur = y
            while i < len(events) and events[i][0] == y:
                _, a, b, d = events[i]
                xt.add(a, b, d)
                i += 1
        if cur < Y1:
            runs.append((cur, Y1, xt.cov[1], xt.mx[1]))
        merged = []
        for run in runs:
            if merged and merged[-1][2] == run[2] and merged[-1][3] == run[3] and merged[-1][1] == run[0]:
                merged[-1] = (merged[-1][0], run[1], run[2], run[3])
            else:
                merged.append(run)
        return merged

    def _place_rect(self, r: Rect2, mlt: int, recompute=True):
        dx0, dx1, dy0, dy1 = _doubled(r)
        a, b = self._slab_range(dx0, dx1)
        for s in range(a, b + 1):
            sl = self._slabs[s]
            before_a, before_cp = sl.tree.A[0], sl.tree.CP[0]
            if dx0 <= sl.X0 and dx1 >= sl.X1:
                sl.full[r] += mlt
                if sl.full[r] == 0:
                    del sl.full[r]
                if recompute:
                    sl.tree.add(dy0, dy1, mlt)
            else:
                piece = (max(dx0, sl.X0), min(dx1, sl.X1), dy0, dy1)
                sl.pieces[piece] += mlt
                if sl.pieces[piece] == 0:
                    del sl.pieces[piece]
                for p, pm in sl.points.items():
                    if piece[0] <= 2 * p[0] < piece[1] and dy0 <= 2 * p[1] < dy1:
                        old = sl.pcount[p]
                        new = old + mlt
                        sl.pcount[p] = new
                        if (old > 0) != (new > 0):
                            sl.tree.point(2 * p[1], 0, pm if new > 0 else -pm)
                if recompute:
                    self._recompute(sl, dy0, dy1)
            if recompute:
                self._area += sl.tree.A[0] - before_a
                self._cp += sl.tree.CP[0] - before_cp
        return a, b

    def _place_point(self, p, mlt):
        s = bisect_right(self._X, 2 * p[0]) - 1
        sl = self._slabs[s]
        before = sl.tree.CP[0]
        old = sl.points[p]
        sl.points[p] += mlt
        if sl.points[p] == 0:
            del sl.points[p]
            covered = sl.pcount.pop(p) > 0
        else:
            if old == 0:
                sl.pcount[p] = sum(
                    pm for (px0, px1, py0, py1), pm in sl.pieces.items()
                    if px0 <= 2 * p[0] < px1 and py0 <= 2 * p[1] < py1
                )
            covered = sl.pcount[p] > 0
        sl.tree.point(2 * p[1], mlt, mlt if covered else 0)
        self._cp += sl.tree.CP[0] - before
        return s

    def _maybe_split(self, s):
        sl = self._slabs[s]
        if sl.load() <= self._split_at:
            return
        xs = sorted(
            [x for (px0, px1, _, _), m in sl.pieces.items() for x in (px0, px1)
             if sl.X0 < x < sl.X1]
            + [2 * p[0] for p in sl.points if sl.X0 < 2 * p[0]]
        )
        if not xs:
            return
        cut = xs[len(xs) // 2]
        if not (sl.X0 < cut < sl.X1):
            return
        rects = Counter(sl.full)
        for r, m in self._rects.items():
            dx0, dx1, _, _ = _doubled(r)
            if dx0 < sl.X1 and dx1 > sl.X0 and not (dx0 <= sl.X0 and dx1 >= sl.X1):
                rects[r] = m
        pts = Counter(sl.points)
        self._area -= sl.tree.A[0]
        self._cp -= sl.tree.CP[0]
        left = _Slab(sl.X0, cut, self._ylo, self._yhi)
        right = _Slab(cut, sl.X1, self._ylo, self._yhi)
        self._slabs[s:s + 1] = [left, right]
        self._X.insert(s + 1, cut)
        for r, m in rects.items():
            dx0, dx1, dy0, dy1 = _doubled(r)
            for t in (s, s + 1):
                part = self._slabs[t]
                if dx0 >= part.X1 or dx1 <= part.X0:
                    continue
                if dx0 <= part.X0 and dx1 >= part.X1:
                    part.full[r] += m
                    part.tree.add(dy0, dy1, m)
                else:
                    part.pieces[(max(dx0, part.X0), min(dx1, part.X1), dy0, dy1)] += m
        for part in (left, right):
            self._recompute(part, self._ylo, self._yhi)
        for p, m in pts.items():
            self._place_point(p, m)
        for part in (left, right):
            self._area += part.tree.A[0]
            # points were already credited by _place_point

    def _after_update(self, touched):
        self._since += 1
        n = self._size()
        if self._since >= self.rebuild_period or n > 2 * self._built_at + 64 or 2 * n + 64 < self._built_at:
            self._rebuild()
            return
        for s in sorted(set(touched), reverse=True):
            self._maybe_split(s)

    def _fits(self, vals):
        lim = 1 << self._ybits
        return all(-lim <= v < lim for v in vals)

    # -- public updates ---------------------------------------------------------

    def _rect_op(self, r: Rect2, delta: int, log: bool):
        if delta < 0 and self._rects[r] == 0:
            raise KeyError(f"rectangle {tuple(r)} not present")
        self._rects[r] += delta
        if self._rects[r] == 0:
            del self._rects[r]
        if self._clip is not None:
            c = r.intersect(self.C)
            if c is not None:
                self._clip._rect_op(c, delta, False)
        if log:
            self.journal.append(("rect", r, delta))
        if not self._fits(_doubled(r)):
            self._rebuild()
            return
        a, b = self._place_rect(r, delta)
        self._after_update((a, b))

    def _point_op(self, p, delta: int, log: bool):
        p = tuple(p)
        if delta < 0 and self._pts[p] == 0:
            raise KeyError(f"point {p} not present")
        self._pts[p] += delta
        if self._pts[p] == 0:
            del self._pts[p]
        if log:
            self.journal.append(("point", p, delta))
        if not self._fits((2 * p[0], 2 * p[1])):
            self._rebuild()
            return
        s = self._place_point(p, delta)
        self._after_update((s,))

    def insert_rect(self, r: Rect2) -> None:
        self._rect_op(r, 1, True)

    def delete_rect(self, r: Rect2) -> None:
        self._rect_op(r, -1, True)

    def insert_point(self, p) -> None:
        self._point_op(p, 1, True)

    def delete_point(self, p) -> None:
        self._point_op(p, -1, True)

    def undo(self) -> None:
        if not self.journal:
            raise IndexError("undo on empty journal")
        kind, obj, delta = self.journal.pop()
        if kind == "rect":
            self._rect_op(obj, -delta, False)
        else:
            self._point_op(obj, -delta, False)

    # -- queries ------------------------------------------------------------------

    def query_union_area(self) -> int:
        return self._area

    def query_depth(self) -> int:
        return max(sl.tree.D[0] for sl in self._slabs)

    def query_covers(self, C: Rect2 | None = None) -> bool:
        if C is not None and C != self.C:
            raise ValueError("covers region is fixed at construction")
        if self.C is None:
            raise ValueError("engine built without a covers region")
        if self._clip is not None:
            return self._clip.query_union_area() == self.C.area
        return oracles.covers_region(list(self._rects.elements()), self.C)

    def query_covered_count(self) -> int:
        return self._cp

    # -- inspection ---------------------------------------------------------------

    def rects(self) -> list:
        return sorted(self._rects.elements())

    def points(self) -> list:
        return sorted(self._pts.elements())

    def snapshot(self):
        return (tuple(self.rects()), tuple(self.points()))

    @property
    def slab_count(self) -> int:
        return len(self._slabs)
