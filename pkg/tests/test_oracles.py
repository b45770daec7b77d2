import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact import oracles, reductions
from artifact.core import AnchoredBox3, Disk2, Point2, Rect2, square
from helpers import DIAGONAL_5, FIG_FAMILY, FIG_J, state

coord = st.integers(0, 30)


@st.composite
def rects(draw, max_size=8):
    out = []
    for _ in range(draw(st.integers(0, max_size))):
        x, y = draw(coord), draw(coord)
        out.append(Rect2(x, x + draw(st.integers(0, 12)), y, y + draw(st.integers(0, 12))))
    return out


def grid_area(rs):
    cells = set()
    for r in rs:
        cells.update(itertools.product(range(r.x0, r.x1), range(r.y0, r.y1)))
    return len(cells)


# -- union area ----------------------------------------------------------------------------

def test_union_area_examples():
    assert oracles.union_area([Rect2(0, 2, 0, 3)]) == 6
    assert oracles.union_area([square(0, 0, 2), square(1, 1, 2)]) == 7


def test_union_area_of_measure_gadget_after_step1():
    enc = reductions.enc_kmp_squares()
    F = FIG_FAMILY
    rs = state(enc, F)
    assert oracles.union_area(rs) == F.k ** 2 * F.m == 45


@given(rects())
def test_union_area_matches_unit_cells_and_bbox(rs):
    a = oracles.union_area(rs)
    assert a == grid_area(rs)
    if rs:
        bx = (max(r.x1 for r in rs) - min(r.x0 for r in rs)) * (max(r.y1 for r in rs) - min(r.y0 for r in rs))
        assert a <= bx


# -- covered count ---------------------------------------------------------------------------

def test_covered_count_examples():
    assert oracles.covered_count([(1, 1)], [square(0, 0, 2)]) == 1
    assert oracles.covered_count([(1, 1), (2, 2), (3, 3)], []) == 0


def test_covered_count_on_discrete_gadget_matches_scan():
    enc = reductions.enc_discrete_kmp()
    F, J = FIG_FAMILY, FIG_J
    objs = state(enc, F, J, 2)
    pts = [o for o in objs if isinstance(o, Point2)]
    rs = [o for o in objs if isinstance(o, Rect2)]
    scan = sum(1 for p in pts if any(r.x0 <= p.x <= r.x1 and r.y0 <= p.y <= r.y1 for r in rs))
    assert oracles.covered_count(pts, rs) == scan


# -- depth -------------------------------------------------------------------------------------

def test_depth_examples():
    assert oracles.max_depth([square(0, 0, 1)]) == 1
    assert oracles.max_depth([square(0, 0, 1)] * 5) == 5
    assert oracles.max_depth([]) == 0


def test_depth_gadget_reaches_four_on_intersection():
    enc = reductions.enc_depth_squares()
    F, J = FIG_FAMILY, FIG_J
    assert reductions.intersects(F, J, 1)
    assert oracles.max_depth(state(enc, F, J, 1)) == 4
    assert not reductions.intersects(F, J, 3)
    assert oracles.max_depth(state(enc, F, J, 3)) < 4


@given(rects())
def test_depth_bounded_by_count_and_matches_probe(rs):
    d = oracles.max_depth(rs)
    assert d <= len(rs)
    best = 0
    for x2 in range(-1, 90):
        for y2 in range(-1, 90):
            best = max(best, sum(1 for r in rs if 2 * r.x0 <= x2 <= 2 * r.x1 and 2 * r.y0 <= y2 <= 2 * r.y1))
    assert d == best


# -- covers -----------------------------------------------------------------------------------

def test_covers_examples():
    C = Rect2(0, 4, 0, 4)
    assert oracles.covers_region([C], C)
    assert not oracles.covers_region([], C)


def test_square_cover_gadget_covers_after_step1():
    enc = reductions.enc_square_cover_squares()
    F = FIG_FAMILY
    assert oracles.covers_region(state(enc, F), reductions.square_cover_region(F))


@given(rects(), st.integers(0, 20), st.integers(0, 20), st.integers(0, 10), st.integers(0, 10))
def test_covers_implies_area(rs, x, y, w, h):
    C = Rect2(x, x + w, y, y + h)
    if oracles.covers_region(rs, C):
        clipped = [c for c in (r.intersect(C) for r in rs) if c is not None]
        assert oracles.union_area(clipped) == C.area


# -- hypervolume --------------------------------------------------------------------------------

def test_hypervolume_examples():
    assert oracles.hypervolume([AnchoredBox3(2, 3, 4)]) == 24
    assert oracles.hypervolume([AnchoredBox3(2, 3, 4), AnchoredBox3(3, 2, 1)]) == 26


def test_hypervolume_of_matvec_gadget_matches_closed_form():
    rng = random.Random(11)
    W = 15
    for _ in range(10):
        N = rng.randint(1, 6)
        M = [[rng.randint(0, W) for _ in range(N)] for _ in range(N)]
        v = [rng.randint(0, W) for _ in range(N)]
        c0 = oracles.hypervolume(reductions.matvec_boxes(M, v, W))
        rows = range(1, N + 1)
        want = (sum((N * (N + 1) - i - j * N) * W * W for i in rows for j in rows)
                + sum(map(sum, M)) * W
                + sum(v[j - 1] * sum(i * W for i in rows) for j in rows)
                - sum(v[j - 1] * sum(M[i - 1][j - 1] for i in rows) for j in rows))
        assert c0 == want


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)), max_size=7))
def test_hypervolume_matches_voxel_count(bs):
    boxes = [AnchoredBox3(*b) for b in bs]
    vox = sum(1 for x in range(6) for y in range(6) for z in range(6)
              if any(x < b.x and y < b.y and z < b.z for b in boxes))
    assert oracles.hypervolume(boxes) == vox


# -- maximal and extremal ---------------------------------------------------------------------------

def test_maximal_examples():
    assert oracles.maximal_count_3d([(1, 2, 3)]) == 1
    assert oracles.maximal_count_3d([(1, 2, 3), (2, 1, 3), (0, 0, 0)]) == 2


def _maximal_by_sweep(pts):
    pts = sorted(set(map(tuple, pts)), key=lambda p: (-p[0], -p[1], -p[2]))
    keep = []
    for p in pts:
        if not any(q[0] >= p[0] and q[1] >= p[1] and q[2] >= p[2] and q != p for q in keep):
            keep.append(p)
    return len(keep)


def test_maximal_gadget_count_matches_sweep():
    enc = reductions.enc_maximal_points()
    for F in (FIG_FAMILY, DIAGONAL_5):
        pts = state(enc, F)
        assert oracles.maximal_count_3d(pts) == _maximal_by_sweep(pts)


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)), unique=True, max_size=12))
def test_maximal_count_matches_sweep(pts):
    assert oracles.maximal_count_3d(pts) == _maximal_by_sweep(pts)


def test_extremal_examples():
    tet = [(0, 0, 0), (4, 0, 0), (0, 4, 0), (0, 0, 4)]
    assert oracles.extremal_count_3d(tet) == 4
    assert oracles.extremal_count_3d(tet + [(1, 1, 1)]) == 4


def test_extremal_lemma_on_diagonal_family():
    F = DIAGONAL_5
    g = reductions.extremal_gadget(F)
    for pb, pt in [(set(), set()), ({2}, {3}), ({1, 4}, {1, 2}), (set(range(1, 6)), {5})]:
        keys = [k for k in g if k[0] in ("q", "p")] + [("b", j) for j in pb] + [("t", i) for i in pt]
        flags = dict(zip(keys, oracles.extremal_points_3d([g[k] for k in keys])))
        want = reductions.extremal_lemma_expected(F, pb, pt)
        assert all(flags[k] == v for k, v in want.items())
        assert all(flags[("q", 0, j)] for j in range(1, 6))


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)),
                unique=True, min_size=1, max_size=14))
def test_extremal_matches_bruteforce(pts):
    assert oracles.extremal_points_3d(pts) == oracles.extremal_points_bruteforce(pts)


def test_extremal_repeated_points_are_interior():
    cube = [(x, y, z) for x in (0, 9) for y in (0, 9) for z in (0, 9)]
    inner = [(1 + i % 7, 2 + i % 5, 3 + i % 3) for i in range(12)]
    pts = cube + inner + [cube[0]]
    flags = oracles.extremal_points_3d(pts)
    assert flags[0] is False and flags[-1] is False
    assert sum(flags) == 7


# -- convex layers -----------------------------------------------------------------------------------

def test_layer_examples():
    sq = [(0, 0), (4, 0), (4, 4), (0, 4)]
    assert oracles.convex_layer_sizes(sq) == [4]
    assert oracles.convex_layer_sizes(sq + [(1, 1), (3, 1), (3, 3), (1, 3)]) == [4, 4]


@pytest.mark.parametrize("J", [frozenset({1, 3, 5}), frozenset(), frozenset({2})])
def test_layer_gadget_has_2k_plus_1_layers(J):
    enc = reductions.enc_convex_layers()
    F = FIG_FAMILY
    layers = oracles.convex_layer_sizes(state(enc, F, J))
    assert len(layers) == 2 * F.k + 1


@given(st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), unique=True, max_size=25))
def test_layers_partition_the_points(pts):
    layers = oracles.convex_layers(pts)
    flat = [p for layer in layers for p in layer]
    assert sorted(flat) == sorted(pts)
    for a, b in zip(layers, layers[1:]):
        assert len(a) >= 1 and len(b) >= 1


# -- largest empty disk -----------------------------------------------------------------------------

def test_largest_empty_disk_examples():
    sq = [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert oracles.largest_empty_disk(sq, Rect2(0, 1, 0, 1)) == Fraction(1, 2)
    # the farther corner (3, 0) wins
    assert oracles.largest_empty_disk([(0, 0)], Rect2(2, 3, 0, 0)) == 9


def test_empty_disk_gadget_radii():
    enc = reductions.enc_empty_disk()
    F, J = FIG_FAMILY, FIG_J
    k = F.k
    yes = oracles.largest_empty_disk(state(enc, F, J), reductions.empty_disk_region(F, 1))
    assert yes == 25 * k * k + 4
    G = reductions.SetFamily(2, ((1,),))
    no = oracles.largest_empty_disk(state(enc, G, {2}), reductions.empty_disk_region(G, 1))
    assert no == 25 * 1 + 1


def test_empty_disk_no_case_can_fall_below_the_gap_value():
    # every column of row i' belongs to F_{i'}, so no column gap is open
    enc = reductions.enc_empty_disk()
    F = reductions.SetFamily(1, ((1,), (1,)))
    got = [oracles.largest_empty_disk(state(enc, F, frozenset()), reductions.empty_disk_region(F, ip))
           for ip in (1, 2)]
    assert got == [Fraction(841, 25), Fraction(1681, 25)]
    assert all(r2 < 25 * F.k ** 2 + 1 for r2 in got)


@given(st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), min_size=1, max_size=12),
       st.integers(0, 10), st.integers(0, 10), st.integers(0, 6), st.integers(0, 6))
def test_largest_empty_disk_matches_candidate_enumeration(pts, x, y, w, h):
    B = Rect2(x, x + w, y, y + h)
    assert oracles.largest_empty_disk(pts, B) == oracles.largest_empty_disk_bruteforce(pts, B)


def test_largest_empty_disk_voronoi_path_matches_bruteforce():
    rng = random.Random(4)
    for _ in range(12):
        pts = list({(rng.randrange(60), rng.randrange(60)) for _ in range(rng.randint(8, 30))})
        x, y = rng.randrange(40), rng.randrange(40)
        B = Rect2(x, x + rng.randrange(25), y, y + rng.randrange(25))
        assert oracles.largest_empty_disk(pts, B) == oracles.largest_empty_disk_bruteforce(pts, B)


# -- disks ------------------------------------------------------------------------------------------

def test_region_covered_examples():
    B = Rect2(0, 2, 0, 2)
    assert oracles.region_covered_by_disks([Disk2(1, 1, 4)], B)
    assert not oracles.region_covered_by_disks([], B)
    assert not oracles.region_covered_by_disks([Disk2(1, 1, 1)], B)


def test_inflated_disk_gadget_covers_when_disjoint():
    enc = reductions.enc_rect_cover_disks()
    pt_enc = reductions.enc_empty_disk()
    F, J = FIG_FAMILY, FIG_J
    lay = reductions.disk_layout(F, Fraction(0))
    for ip in range(1, F.k + 1):
        covered = oracles.region_covered_by_disks(state(enc, F, J, ip), lay.box)
        r2 = oracles.largest_empty_disk(state(pt_enc, F, J), reductions.empty_disk_region(F, ip))
        assert covered == (not reductions.intersects(F, J, ip))
        assert covered == (r2 < 25 * F.k ** 2 + 4)


def _grid_covered(disks, B, step=Fraction(1, 4)):
    x = Fraction(B.x0)
    while x <= B.x1:
        y = Fraction(B.y0)
        while y <= B.y1:
            if not any((x - d.cx) ** 2 + (y - d.cy) ** 2 <= d.r2 for d in disks):
                return False
            y += step
        x += step
    return True


@given(st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8), st.integers(1, 5)), min_size=1, max_size=6),
       st.integers(0, 6), st.integers(0, 6), st.integers(0, 3), st.integers(0, 3))
def test_region_covered_implies_sampled_coverage(ds, x, y, w, h):
    disks = [Disk2(a, b, r * r) for a, b, r in ds]
    B = Rect2(x, x + w, y, y + h)
    if oracles.region_covered_by_disks(disks, B):
        assert _grid_covered(disks, B)
    else:
        # a witness of the uncovered point exists at positive power
        top = oracles._max_min_power([(d.cx, d.cy, d.r2) for d in disks], B)
        assert top > 0


def test_empty_disk_exists_rejects_irrational_radii():
    with pytest.raises(ValueError, match="precision-indeterminate"):
        oracles.empty_disk_exists([Disk2(0, 0, 2)], Rect2(3, 4, 0, 0), 1)


def test_empty_disk_exists_examples():
    B = Rect2(0, 10, 0, 0)
    assert oracles.empty_disk_exists([Disk2(0, 0, 1)], B, 9)
    assert not oracles.empty_disk_exists([Disk2(0, 0, 1)], B, 10)
    assert oracles.empty_disk_exists([], B, 100)


# -- set cover ------------------------------------------------------------------------------------

def test_set_cover_examples():
    pts = [(0, 0), (1, 1), (2, 2)]
    assert oracles.min_set_cover(pts, [Rect2(0, 2, 0, 2)]) == 1
    singles = [Rect2(p[0], p[0], p[1], p[1]) for p in pts]
    assert oracles.min_set_cover(pts, singles) == 3
    assert oracles.greedy_set_cover(pts, singles) == 3


def test_set_cover_gadget_small_when_disjoint():
    enc = reductions.enc_set_cover(False, mode="exact")
    F = reductions.SetFamily(1, ((1,),))
    objs = state(enc, F, frozenset(), 1)
    pts = [o for o in objs if not isinstance(o, Rect2)]
    rs = [o for o in objs if isinstance(o, Rect2)]
    assert oracles.min_set_cover(pts, rs) <= F.m + 2


@given(st.integers(0, 10**6))
def test_greedy_is_feasible_and_not_better_than_exact(seed):
    rng = random.Random(seed)
    pts = list({(rng.randrange(8), rng.randrange(8)) for _ in range(rng.randint(1, 8))})
    rs = [Rect2(p[0], p[0], p[1], p[1]) for p in pts]
    for _ in range(rng.randint(0, 6)):
        x, y = rng.randrange(8), rng.randrange(8)
        rs.append(Rect2(x, x + rng.randrange(4), y, y + rng.randrange(4)))
    w = [rng.randint(1, 5) for _ in rs]
    exact = oracles.min_weight_set_cover(pts, rs, w)
    greedy = oracles.greedy_weight_set_cover(pts, rs, w)
    assert exact <= greedy
    # brute force the optimum on these tiny instances
    best = None
    for mask in range(1 << len(rs)):
        chosen = [r for i, r in enumerate(rs) if mask >> i & 1]
        if all(any(r.contains(p) for r in chosen) for p in pts):
            cost = sum(w[i] for i in range(len(rs)) if mask >> i & 1)
            best = cost if best is None else min(best, cost)
    assert exact == best
