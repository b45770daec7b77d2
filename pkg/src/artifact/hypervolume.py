"""Incremental volume of a union of origin-anchored boxes in 3-D.

The union is kept as its top view: a partition of its xy-shadow into
disjoint half-open rectangles ``(u0,u1] x (v0,v1]``, each tagged with the
height of the union above it.  Inserting box (x, y, z) only has to look at
faces lower than z inside ``(0,x] x (0,y]``.  That region is closed upward
inside the box (heights only drop away from the origin), so the faces are
found by a flood fill over a uniform grid index starting at the far corner.
The uncovered floor is read from the 2-D staircase of the shadow.
"""

from __future__ import annotations

import math
from bisect import bisect_left

from .core import AnchoredBox3


class StaircaseHV3:
    def __init__(self):
        self._volume = 0
        self._corners = []
        self._faces = {}
        self._next = 0
        self._cells = {}
        self._g = 1
        self._indexed = 0
        self._ext = 1
        # shadow staircase: a ascending, b descending
        self._sa = []
        self._sb = []

    # -- index ---------------------------------------------------------------

    def _cell_span(self, u0, u1, v0, v1):
        g = self._g
        return range(u0 // g, (u1 - 1) // g + 1), range(v0 // g, (v1 - 1) // g + 1)

    def _register(self, fid, face):
        cells = self._cells
        xr, yr = self._cell_span(*face[:4])
        for i in xr:
            for j in yr:
                s = cells.get((i, j))
                if s is None:
                    cells[(i, j)] = {fid}
                else:
                    s.add(fid)

    def _unregister(self, fid, face):
        cells = self._cells
        xr, yr = self._cell_span(*face[:4])
        for i in xr:
            for j in yr:
                s = cells[(i, j)]
                s.discard(fid)
                if not s:
                    del cells[(i, j)]

    def _reindex(self):
        F = max(len(self._faces), 1)
        area = sum((f[1] - f[0]) * (f[3] - f[2]) for f in self._faces.values())
        # cap the cells per axis so one wide face cannot flood the index
        self._g = max(1, math.isqrt(max(area // F, 1)), self._ext // (4 * math.isqrt(F) + 64))
        self._cells = {}
        for fid, face in self._faces.items():
            self._register(fid, face)
        self._indexed = F

    def _add_face(self, u0, u1, v0, v1, c):
        if u0 >= u1 or v0 >= v1:
            return
        fid = self._next
        self._next += 1
        face = (u0, u1, v0, v1, c)
        self._faces[fid] = face
        self._register(fid, face)

    def _height_at(self, u, v):
        g = self._g
        for fid in self._cells.get(((u - 1) // g, (v - 1) // g), ()):
            u0, u1, v0, v1, c = self._faces[fid]
            if u0 < u <= u1 and v0 < v <= v1:
                return c
        return 0

    # -- shadow staircase ---------------------------------------------------------

    def _floor_pieces(self, x, y):
        """Rectangles of (0,x] x (0,y] outside the shadow; updates the shadow."""
        sa, sb = self._sa, self._sb
        # first corner with b < y (b is descending)
        lo, hi = 0, len(sb)
        while lo < hi:
            mid = (lo + hi) // 2
            if sb[mid] < y:
                hi = mid
            else:
                lo = mid + 1
        k = lo
        pieces = []
        prev_a = sa[k - 1] if k > 0 else 0
        if prev_a >= x:
            return pieces
        i = k
        while i < len(sa) and prev_a < x:
            pieces.append((prev_a, min(sa[i], x), sb[i], y))
            prev_a = sa[i]
            i += 1
        if prev_a < x:
            pieces.append((prev_a, x, 0, y))
        # drop corners dominated by (x, y) and insert it
        j = k
        while j < len(sa) and sa[j] <= x:
            j += 1
        del sa[k:j]
        del sb[k:j]
        sa.insert(k, x)
        sb.insert(k, y)
        return pieces

    def _dominated_shadow(self, x, y):
        i = bisect_left(self._sa, x)
        return i < len(self._sa) and self._sb[i] >= y

    # -- updates ------------------------------------------------------------------

    def insert_box(self, b) -> int:
        b = AnchoredBox3(*b)
        x, y, z = b
        self._corners.append(b)
        if x == 0 or y == 0 or z == 0:
            return self._volume
        if max(x, y) > 2 * self._ext:
            self._ext = max(x, y)
            self._reindex()
        if self._height_at(x, y) >= z:
            return self._volume
        touched = self._touched(x, y, z)
        delta = 0
        pieces = []
        for fid in touched:
            u0, u1, v0, v1, c = self._faces.pop(fid)
            self._unregister(fid, (u0, u1, v0, v1))
            iu, iv = min(u1, x), min(v1, y)
            delta += (z - c) * (iu - u0) * (iv - v0)
            pieces.append((u0, iu, v0, iv))
            if u1 > x:
                self._add_face(max(u0, x), u1, v0, v1, c)
            if v1 > y and u0 < iu:
                self._add_face(u0, iu, max(v0, y), v1, c)
        if not self._dominated_shadow(x, y):
            for u0, u1, v0, v1 in self._floor_pieces(x, y):
                if u0 < u1 and v0 < v1:
                    delta += z * (u1 - u0) * (v1 - v0)
                    pieces.append((u0, u1, v0, v1))
        for u0, u1, v0, v1 in pieces:
            self._add_face(u0, u1, v0, v1, z)
        self._volume += delta
        if len(self._faces) > 2 * self._indexed + 16:
            self._reindex()
        return self._volume

    def _touched(self, x, y, z):
        g = self._g
        faces = self._faces
        cells = self._cells
        start = ((x - 1) // g, (y - 1) // g)
        seen = {start}
        stack = [start]
        out = set()
        while stack:
            ci, cj = stack.pop()
            pu = min((ci + 1) * g, x)
            pv = min((cj + 1) * g, y)
            if self._height_at(pu, pv) >= z:
                continue
            for fid in cells.get((ci, cj), ()):
                if fid in out:
                    continue
                u0, u1, v0, v1, c = faces[fid]
                if c < z and u0 < x and v0 < y:
                    out.add(fid)
            for nb in ((ci - 1, cj), (ci, cj - 1)):
                if nb[0] >= 0 and nb[1] >= 0 and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return out

    # -- queries --------------------------------------------------------------------

    def current_volume(self) -> int:
        return self._volume

    def corners(self) -> list:
        """Inserted corners not dominated by another inserted corner."""
        pts = sorted(set(self._corners), key=lambda p: (-p[0], -p[1], -p[2]))
        out = []
        # sweep x downward; keep the (y, z) staircase of points seen so far
        ys, zs = [], []  # y ascending, z descending
        for p in pts:
            i = bisect_left(ys, p[1])
            if i < len(ys) and zs[i] >= p[2]:
                continue
            out.append(p)
            j = i
            while j > 0 and zs[j - 1] <= p[2]:
                j -= 1
            del ys[j:i]
            del zs[j:i]
            ys.insert(j, p[1])
            zs.insert(j, p[2])
        return sorted(out)

    def face_count(self) -> int:
        return len(self._faces)

    def __len__(self):
        return len(self._corners)
