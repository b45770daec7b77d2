"""Brute-force exact reference measures.

These favour obvious correctness over speed.  Every structure and every
gadget in the package is checked against them.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import Rect2, orient2d, simplex_contains_3d


# -- rectangles -------------------------------------------------------------------

def union_area(rects: Sequence[Rect2]) -> int:
    xs = sorted({v for r in rects for v in (r.x0, r.x1)})
    total = 0
    for xa, xb in zip(xs, xs[1:]):
        spans = sorted((r.y0, r.y1) for r in rects if r.x0 <= xa and r.x1 >= xb)
        covered, cur_lo, cur_hi = 0, None, None
        for lo, hi in spans:
            if cur_hi is None or lo > cur_hi:
                if cur_hi is not None:
                    covered += cur_hi - cur_lo
                cur_lo, cur_hi = lo, hi
            elif hi > cur_hi:
                cur_hi = hi
        if cur_hi is not None:
            covered += cur_hi - cur_lo
        total += covered * (xb - xa)
    return total


def covered_count(points, rects: Sequence[Rect2]) -> int:
    return sum(1 for p in points if any(r.contains(p) for r in rects))


def max_depth(rects: Sequence[Rect2]) -> int:
    """Largest number of closed rectangles sharing a point.

    A nonempty intersection of closed rectangles has lower-left corner
    (max x0, max y0), so only left edges need to be tried as abscissae.
    """
    best = 0
    for x in {r.x0 for r in rects}:
        events = []
        for r in rects:
            if r.x0 <= x <= r.x1:
                events.append((r.y0, 0))
                events.append((r.y1, 1))
        events.sort()
        depth = 0
        for _, kind in events:
            if kind == 0:
                depth += 1
                best = max(best, depth)
            else:
                depth -= 1
    return best


def _interval_cover(intervals, lo, hi) -> bool:
    reach = lo
    for a, b in sorted(intervals):
        if a > reach:
            return False
        reach = max(reach, b)
        if reach >= hi:
            return True
    return reach >= hi


def covers_region(rects: Sequence[Rect2], C: Rect2) -> bool:
    clipped = [c for c in (r.intersect(C) for r in rects) if c is not None]
    if C.x0 < C.x1 and C.y0 < C.y1:
        return union_area(clipped) == C.area
    if C.x0 == C.x1 and C.y0 == C.y1:
        return bool(clipped)
    if C.y0 == C.y1:
        return _interval_cover([(r.x0, r.x1) for r in clipped], C.x0, C.x1)
    return _interval_cover([(r.y0, r.y1) for r in clipped], C.y0, C.y1)


# -- anchored boxes and dominance ------------------------------------------------

def _staircase_area(corners) -> int:
    # x-strips right to left; the strip height is the tallest corner reaching it
    area = 0
    pts = sorted(corners, reverse=True)
    reach = 0
    for (x, y), nxt in zip(pts, pts[1:] + [(0, 0)]):
        reach = max(reach, y)
        area += (x - nxt[0]) * reach
    return area


def hypervolume(boxes) -> int:
    zs = sorted({b.z for b in boxes})
    total, prev = 0, 0
    for z in zs:
        active = [(b.x, b.y) for b in boxes if b.z >= z]
        total += (z - prev) * _staircase_area(active)
        prev = z
    return total


def dominates(q, p) -> bool:
    return q != p and all(a >= b for a, b in zip(q, p))


def maximal_points_3d(points) -> list[bool]:
    pts = [tuple(p) for p in points]
    return [not any(dominates(q, p) for q in pts) for p in pts]


def maximal_count_3d(points) -> int:
    return sum(maximal_points_3d(points))


# -- extremal points -----------------------------------------------------------------

def _in_hull_bruteforce(p, others) -> bool:
    if len(others) <= 4:
        return bool(others) and simplex_contains_3d(others, p)
    return any(simplex_contains_3d(s, p) for s in itertools.combinations(others, 4))


def extremal_points_bruteforce(points) -> list[bool]:
    pts = [tuple(p) for p in points]
    return [not _in_hull_bruteforce(p, pts[:i] + pts[i + 1:]) for i, p in enumerate(pts)]


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _hull_proposal(pts):
    from scipy.spatial import ConvexHull, QhullError

    try:
        hull = ConvexHull(np.array(pts, dtype=float))
    except (QhullError, ValueError):
        return None
    return set(int(v) for v in hull.vertices), [tuple(int(i) for i in s) for s in hull.simplices]


def extremal_points_3d(points) -> list[bool]:
    """Per-point flag: True iff the point is a vertex of the hull of the set.

    Small sets go straight to Caratheodory enumeration.  Larger sets take a
    floating hull as a proposal only: each claimed vertex must be confirmed
    by an exact strictly separating plane and each claimed non-vertex by an
    exact containing simplex; anything unconfirmed falls back to enumeration.
    """
    pts = [tuple(int(c) for c in p) for p in points]
    mult = Counter(pts)
    if len(mult) != len(pts):
        # a repeated point lies in the hull of its own copy; other copies change nothing
        flags = dict(zip(mult, extremal_points_3d(list(mult))))
        return [flags[p] and mult[p] == 1 for p in pts]
    n = len(pts)
    if n <= 8:
        return extremal_points_bruteforce(pts)
    prop = _hull_proposal(pts)
    if prop is None:
        return extremal_points_bruteforce(pts)
    verts, tris = prop
    sx = sum(p[0] for p in pts)
    sy = sum(p[1] for p in pts)
    sz = sum(p[2] for p in pts)
    normals = []
    for a, b, c in tris:
        pa, pb, pc = pts[a], pts[b], pts[c]
        nrm = _cross((pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]),
                     (pc[0] - pa[0], pc[1] - pa[1], pc[2] - pa[2]))
        side = nrm[0] * (sx - n * pa[0]) + nrm[1] * (sy - n * pa[1]) + nrm[2] * (sz - n * pa[2])
        if side > 0:
            nrm = (-nrm[0], -nrm[1], -nrm[2])
        normals.append(nrm if side != 0 else None)

    incident = {v: [] for v in verts}
    for t, tri in enumerate(tris):
        for v in tri:
            if v in incident:
                incident[v].append(t)

    out = [False] * n
    arr = np.array(pts, dtype=float)
    v0 = next(iter(verts))
    fan = [tri for tri in tris if v0 not in tri]
    flat = [tri for tri in tris if v0 in tri]

    for i, p in enumerate(pts):
        if i in verts:
            acc = [0, 0, 0]
            for t in incident[i]:
                if normals[t] is not None:
                    acc = [acc[0] + normals[t][0], acc[1] + normals[t][1], acc[2] + normals[t][2]]
            ok = acc != [0, 0, 0] and all(
                acc[0] * (q[0] - p[0]) + acc[1] * (q[1] - p[1]) + acc[2] * (q[2] - p[2]) < 0
                for j, q in enumerate(pts) if j != i
            )
            out[i] = True if ok else not _in_hull_bruteforce(p, pts[:i] + pts[i + 1:])
        else:
            found = False
            order = _likely_tetra(arr, v0, fan, i)
            for tri in order:
                if i in tri:
                    continue
                if simplex_contains_3d([pts[v0]] + [pts[t] for t in tri], p):
                    found = True
                    break
            if not found:
                for tri in flat:
                    if i not in tri and simplex_contains_3d([pts[t] for t in tri], p):
                        found = True
                        break
            out[i] = False if found else not _in_hull_bruteforce(p, pts[:i] + pts[i + 1:])
    return out


def _likely_tetra(arr, v0, fan, i):
    # float barycentric scores, used only to order the exact tests
    if not fan:
        return []
    idx = np.array(fan)
    a = arr[v0]
    m = np.stack([arr[idx[:, 0]] - a, arr[idx[:, 1]] - a, arr[idx[:, 2]] - a], axis=2)
    rhs = arr[i] - a
    with np.errstate(all="ignore"):
        try:
            lam = np.linalg.solve(m, np.broadcast_to(rhs, (len(fan), 3))[..., None])[..., 0]
        except np.linalg.LinAlgError:
            return fan
    worst = np.minimum(lam.min(axis=1), 1 - lam.sum(axis=1))
    worst = np.nan_to_num(worst, nan=-np.inf)
    return [fan[t] for t in np.argsort(-worst)]


def extremal_count_3d(points) -> int:
    return sum(extremal_points_3d(points))


# -- convex layers -------------------------------------------------------------------

def _strict_hull(pts):
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and orient2d(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and orient2d(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def convex_layers(points) -> list[list]:
    rest = [tuple(p) for p in points]
    layers = []
    while rest:
        hull = _strict_hull(rest)
        if len(hull) <= 2:
            layers.append(rest)
            break
        layer = set(hull)
        taken, keep = [], []
        for p in rest:
            if p in layer:
                taken.append(p)
                layer.discard(p)
            else:
                keep.append(p)
        layers.append(taken)
        rest = keep
    return layers


def convex_layer_sizes(points) -> list[int]:
    return [len(layer) for layer in convex_layers(points)]


# -- empty disks and disk coverage ---------------------------------------------------------

def _power_eval(c, sites):
    x, y = c
    return min((x - sx) ** 2 + (y - sy) ** 2 - w for sx, sy, w in sites)


def _cell_candidates(x0, x1, y0, y1, sites):
    yield (x0, y0)
    yield (x0, y1)
    yield (x1, y0)
    yield (x1, y1)
    axes = []
    for (ax, ay, aw), (bx, by, bw) in itertools.combinations(sites, 2):
        # |c-a|^2 - aw = |c-b|^2 - bw  <=>  p*x + q*y = r
        p, q = 2 * (bx - ax), 2 * (by - ay)
        r = bx * bx + by * by - bw - ax * ax - ay * ay + aw
        if p == 0 and q == 0:
            continue
        axes.append((p, q, r))
        if q != 0:
            for x in (x0, x1):
                y = Fraction(r - p * x) / q
                if y0 <= y <= y1:
                    yield (x, y)
        if p != 0:
            for y in (y0, y1):
                x = Fraction(r - q * y) / p
                if x0 <= x <= x1:
                    yield (x, y)
    for (p1, q1, r1), (p2, q2, r2) in itertools.combinations(axes, 2):
        det = p1 * q2 - p2 * q1
        if det == 0:
            continue
        x = Fraction(r1 * q2 - r2 * q1, det)
        y = Fraction(p1 * r2 - p2 * r1, det)
        if x0 <= x <= x1 and y0 <= y <= y1:
            yield (x, y)


_LEAF_SITES = 3


def _max_min_power(sites, B: Rect2, stop_above=None, inclusive=False):
    """max over c in B of min_i |c - s_i|^2 - w_i, exactly.

    Cells of a dyadic subdivision of B are pruned by comparing the best
    value seen with a per-cell upper bound.  Inside a cell only sites that
    can attain the minimum there are kept; once few remain, the maximum
    over the cell is attained at a cell corner, a radical axis crossing the
    cell boundary, or a radical centre inside the cell.

    Everything is rescaled so that cell corners down to the depth limit are
    integers; the bounds then need no rational arithmetic.

    With ``stop_above`` set the search only decides the comparison with it:
    it returns early with a value beyond the threshold (``>=`` when
    ``inclusive``) or a value on the other side otherwise.
    """
    depth_cap = 48
    vals = [Fraction(v) for s in sites for v in s[:2]] + [Fraction(v) for v in B]
    den = 1
    for v in vals + [Fraction(s[2]) for s in sites]:
        den = den * v.denominator // math.gcd(den, v.denominator)
    T = den << depth_cap
    T2 = T * T
    isites = [(int(Fraction(sx) * T), int(Fraction(sy) * T), int(Fraction(w) * T2))
              for sx, sy, w in sites]
    stop = None if stop_above is None else Fraction(stop_above) * T2
    best = None
    stack = [(int(Fraction(B.x0) * T), int(Fraction(B.x1) * T),
              int(Fraction(B.y0) * T), int(Fraction(B.y1) * T), isites, 0)]
    while stack:
        x0, x1, y0, y1, cand, depth = stack.pop()
        lo_hi = []
        ub = None
        for s in cand:
            sx, sy, w = s
            dxl = 0 if x0 <= sx <= x1 else min(abs(sx - x0), abs(sx - x1))
            dyl = 0 if y0 <= sy <= y1 else min(abs(sy - y0), abs(sy - y1))
            dxh = max(abs(sx - x0), abs(sx - x1))
            dyh = max(abs(sy - y0), abs(sy - y1))
            lo_hi.append((dxl * dxl + dyl * dyl - w, s))
            hi = dxh * dxh + dyh * dyh - w
            if ub is None or hi < ub:
                ub = hi
        if best is not None and ub <= best:
            continue
        if stop is not None and (ub < stop if inclusive else ub <= stop):
            continue
        rel = [s for lo, s in lo_hi if lo <= ub]
        if len(rel) <= _LEAF_SITES or depth >= depth_cap:
            for c in _cell_candidates(x0, x1, y0, y1, rel):
                v = _power_eval(c, rel)
                if best is None or v > best:
                    best = v
                    if stop is not None and (best >= stop if inclusive else best > stop):
                        return Fraction(best) / T2
            continue
        xm, ym = (x0 + x1) // 2, (y0 + y1) // 2
        if x0 == x1:
            stack.append((x0, x1, y0, ym, rel, depth + 1))
            stack.append((x0, x1, ym, y1, rel, depth + 1))
        elif y0 == y1:
            stack.append((x0, xm, y0, y1, rel, depth + 1))
            stack.append((xm, x1, y0, y1, rel, depth + 1))
        else:
            for a, b in ((x0, xm), (xm, x1)):
                for c, d in ((y0, ym), (ym, y1)):
                    stack.append((a, b, c, d, rel, depth + 1))
    return None if best is None else Fraction(best) / T2


def _incircle(a, b, c, d) -> int:
    rows = [(p[0] - d[0], p[1] - d[1]) for p in (a, b, c)]
    m = [(x, y, x * x + y * y) for x, y in rows]
    det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
           - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
           + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    return (det > 0) - (det < 0)


def _certified_delaunay(pts):
    """Triangles (ccw index triples) of a Delaunay triangulation of integer
    points, or None if the floating-point proposal fails exact checks."""
    from scipy.spatial import Delaunay, QhullError
    try:
        tri = Delaunay(np.array(pts, dtype=float))
    except (QhullError, ValueError):
        return None
    tris = []
    for a, b, c in tri.simplices.tolist():
        o = orient2d(pts[a], pts[b], pts[c])
        if o == 0:
            return None
        tris.append((a, b, c) if o > 0 else (a, c, b))
    if len({v for t in tris for v in t}) != len(pts):
        return None
    opp = {}
    for a, b, c in tris:
        for u, v, w in ((a, b, c), (b, c, a), (c, a, b)):
            opp[(u, v)] = w
    for (u, v), w in opp.items():
        x = opp.get((v, u))
        if x is not None and _incircle(pts[u], pts[v], pts[w], pts[x]) > 0:
            return None
    return tris


def _circumcenter(a, b, c):
    bx, by = b[0] - a[0], b[1] - a[1]
    cx, cy = c[0] - a[0], c[1] - a[1]
    d = 2 * (bx * cy - by * cx)
    b2, c2 = bx * bx + by * by, cx * cx + cy * cy
    return (a[0] + Fraction(cy * b2 - by * c2, d), a[1] + Fraction(bx * c2 - cx * b2, d))


def _voronoi_max(pts, B: Rect2):
    tris = _certified_delaunay(pts)
    if tris is None:
        return None
    x0, x1, y0, y1 = (Fraction(v) for v in B)
    cands = {(x0, y0), (x0, y1), (x1, y0), (x1, y1)}
    edges = set()
    for a, b, c in tris:
        cc = _circumcenter(pts[a], pts[b], pts[c])
        if x0 <= cc[0] <= x1 and y0 <= cc[1] <= y1:
            cands.add(cc)
        for u, v in ((a, b), (b, c), (c, a)):
            edges.add((min(u, v), max(u, v)))
    for u, v in edges:
        (ax, ay), (bx, by) = pts[u], pts[v]
        p, q = 2 * (bx - ax), 2 * (by - ay)
        r = bx * bx + by * by - ax * ax - ay * ay
        if q != 0:
            for x in (x0, x1):
                y = (r - p * x) / q
                if y0 <= y <= y1:
                    cands.add((x, y))
        if p != 0:
            for y in (y0, y1):
                x = (r - q * y) / p
                if x0 <= x <= x1:
                    cands.add((x, y))
    cands = list(cands)
    P = np.array(pts, dtype=float)
    C = np.array([(float(x), float(y)) for x, y in cands])
    best = None
    for lo in range(0, len(cands), 256):
        blk = C[lo:lo + 256]
        d2 = ((blk[:, None, :] - P[None, :, :]) ** 2).sum(axis=2)
        fmin = d2.min(axis=1)
        for row in range(len(blk)):
            c = cands[lo + row]
            lim = fmin[row] * (1 + 1e-9) + 1e-6
            near = np.nonzero(d2[row] <= lim)[0]
            v = min((c[0] - pts[i][0]) ** 2 + (c[1] - pts[i][1]) ** 2 for i in near.tolist())
            if best is None or v > best:
                best = v
    return Fraction(best)


def largest_empty_disk(points, B: Rect2) -> Fraction:
    """Squared radius of the largest disk centred in B with no point inside.

    The maximum of the nearest-point distance over B sits at a corner of B,
    a Voronoi vertex inside B, or a Voronoi edge crossing the boundary of B.
    The Voronoi diagram comes from a Delaunay triangulation that is checked
    with exact in-circle tests; small or degenerate inputs use a dyadic
    branch and bound instead.
    """
    if not points:
        raise ValueError("unbounded")
    pts = sorted({(p[0], p[1]) for p in points})
    if len(pts) >= 8 and all(isinstance(v, int) for p in pts for v in p):
        got = _voronoi_max(pts, B)
        if got is not None:
            return got
    return _max_min_power([(x, y, 0) for x, y in pts], B)


def largest_empty_disk_bruteforce(points, B: Rect2) -> Fraction:
    if not points:
        raise ValueError("unbounded")
    sites = [(p[0], p[1], 0) for p in points]
    return max(Fraction(_power_eval(c, sites)) for c in _cell_candidates(
        Fraction(B.x0), Fraction(B.x1), Fraction(B.y0), Fraction(B.y1), sites))


def region_covered_by_disks(disks, B: Rect2) -> bool:
    """True iff every point of B lies in some closed disk.

    A point c is covered iff min_i |c - c_i|^2 - r_i^2 <= 0, so B is covered
    iff the maximum of that power function over B is non-positive.
    """
    if not disks:
        return False
    top = _max_min_power([(d.cx, d.cy, d.r2) for d in disks], B, stop_above=0)
    return top is None or top <= 0


def _exact_sqrt(v) -> Fraction:
    v = Fraction(v)
    a, b = math.isqrt(v.numerator), math.isqrt(v.denominator)
    if a * a != v.numerator or b * b != v.denominator:
        raise ValueError("precision-indeterminate")
    return Fraction(a, b)


def empty_disk_exists(disks, B: Rect2, r) -> bool:
    """Is there a disk of radius r, centred in B, whose interior misses every
    disk?  Touching is allowed.  Radii must be rational (perfect-square r2)."""
    r = Fraction(r)
    sites = [(d.cx, d.cy, (r + _exact_sqrt(d.r2)) ** 2) for d in disks]
    if not sites:
        return True
    top = _max_min_power(sites, B, stop_above=0, inclusive=True)
    return top is not None and top >= 0


# -- set cover ---------------------------------------------------------------------------

def _incidence(points, rects):
    masks = []
    for r in rects:
        m = 0
        for i, p in enumerate(points):
            if r.contains(p):
                m |= 1 << i
        masks.append(m)
    full = (1 << len(points)) - 1
    got = 0
    for m in masks:
        got |= m
    if got != full:
        raise ValueError("uncoverable point")
    return masks


def _reduce(masks, weights, npts):
    # keep one copy per mask (cheapest), drop rects dominated by a cheaper superset
    best = {}
    for m, w in zip(masks, weights):
        if m and (m not in best or w < best[m]):
            best[m] = w
    items = sorted(best.items(), key=lambda t: (-bin(t[0]).count("1"), t[1]))
    kept = []
    for m, w in items:
        if any((m | km) == km and kw <= w for km, kw in kept):
            continue
        kept.append((m, w))
    # drop points implied by another point whose rect set is a subset
    sets = []
    for i in range(npts):
        bit = 1 << i
        sets.append(frozenset(j for j, (m, _) in enumerate(kept) if m & bit))
    order = sorted(range(npts), key=lambda i: len(sets[i]))
    keep_pts = []
    for i in order:
        if any(sets[j] <= sets[i] for j in keep_pts):
            continue
        keep_pts.append(i)
    remap = {i: k for k, i in enumerate(keep_pts)}
    new = []
    for m, w in kept:
        nm = 0
        for i, k in remap.items():
            if m >> i & 1:
                nm |= 1 << k
        new.append((nm, w))
    return new, len(keep_pts)


def greedy_weight_set_cover(points, rects, weights=None) -> int:
    if weights is None:
        weights = [1] * len(rects)
    masks = _incidence(points, rects)
    left = (1 << len(points)) - 1
    cost = 0
    while left:
        best, bw, bm = None, None, None
        for m, w in zip(masks, weights):
            gain = bin(m & left).count("1")
            if gain == 0:
                continue
            # compare w/gain without floats
            if best is None or w * best[1] < best[0] * gain:
                best, bw, bm = (w, gain), w, m
        cost += bw
        left &= ~bm
    return cost


def greedy_set_cover(points, rects) -> int:
    return greedy_weight_set_cover(points, rects)


def min_weight_set_cover(points, rects, weights) -> int:
    """Exact optimum by branch and bound on the most constrained point."""
    if not points:
        return 0
    masks = _incidence(points, rects)
    items, npts = _reduce(masks, list(weights), len(points))
    full = (1 << npts) - 1
    by_point = [[] for _ in range(npts)]
    for idx, (m, w) in enumerate(items):
        for i in range(npts):
            if m >> i & 1:
                by_point[i].append(idx)
    for lst in by_point:
        lst.sort(key=lambda t: (items[t][1], -bin(items[t][0]).count("1")))
    cheapest = [min(items[t][1] for t in lst) for lst in by_point]
    reach = []
    for i in range(npts):
        m = 0
        for t in by_point[i]:
            m |= items[t][0]
        reach.append(m)

    def lower_bound(left):
        lb = 0
        while left:
            i = (left & -left).bit_length() - 1
            lb += cheapest[i]
            left &= ~reach[i]
        return lb

    best = [sum(w for _, w in items) + 1]
    seen = {}

    def rec(left, cost):
        if not left:
            if cost < best[0]:
                best[0] = cost
            return
        if cost + lower_bound(left) >= best[0]:
            return
        if seen.get(left, best[0] + 1) <= cost:
            return
        seen[left] = cost
        opts = None
        rem = left
        while rem:
            i = (rem & -rem).bit_length() - 1
            rem &= rem - 1
            if opts is None or len(by_point[i]) < len(opts):
                opts = by_point[i]
                if len(opts) == 1:
                    break
        for t in opts:
            m, w = items[t]
            rec(left & ~m, cost + w)

    rec(full, 0)
    return best[0]


def min_set_cover(points, rects) -> int:
    return min_weight_set_cover(points, rects, [1] * len(rects))
