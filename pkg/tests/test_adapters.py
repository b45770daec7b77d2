import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact import adapters, oracles, reductions
from artifact.adapters import WeightedRect
from artifact.core import Disk2, Rect2
from helpers import FIG_FAMILY, FIG_J, state


def test_insert_undo_empties():
    a = adapters.maximal_count()
    a.insert((1, 1, 1))
    a.undo()
    assert a.objects() == [] and a.query() == 0


def test_delete_absent_and_empty_undo():
    a = adapters.maximal_count()
    with pytest.raises(KeyError):
        a.delete((0, 0, 0))
    with pytest.raises(IndexError):
        a.undo()


def test_multiset_matches_shadow_replay():
    rng = random.Random(3)
    a = adapters.extremal_count()
    shadow, log = Counter(), []
    for _ in range(100):
        r = rng.random()
        if r < 0.5 or not shadow:
            o = (rng.randrange(4), rng.randrange(4), rng.randrange(4))
            a.insert(o)
            shadow[o] += 1
            log.append((o, -1))
        elif r < 0.8:
            o = rng.choice(sorted(shadow))
            a.delete(o)
            shadow[o] -= 1
            log.append((o, 1))
        elif log:
            a.undo()
            o, d = log.pop()
            shadow[o] += d
        shadow = +shadow
        assert Counter(a.objects()) == shadow


def test_layer_size_square():
    a = adapters.layer_size()
    for p in [(0, 0), (4, 0), (4, 4), (0, 4)]:
        a.insert(p)
    assert a.query(1) == 4
    assert a.query(2) == 0
    with pytest.raises(ValueError):
        a.query(0)


def test_extremal_count_simplex():
    a = adapters.extremal_count()
    for p in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]:
        a.insert(p)
    assert a.query() == 4


def test_layer_gadget_empty_intersection_gives_m():
    enc = reductions.enc_convex_layers()
    F = FIG_FAMILY
    a = adapters.layer_size()
    for p in state(enc, F, frozenset()):
        a.insert(p)
    for ip in range(1, F.k + 1):
        assert a.query(2 * ip - 1) == F.m


def test_layer_gadget_intersection_differs_from_m():
    enc = reductions.enc_convex_layers()
    F, J = FIG_FAMILY, FIG_J
    a = adapters.layer_size()
    for p in state(enc, F, J):
        a.insert(p)
    for ip in range(1, F.k + 1):
        assert (a.query(2 * ip - 1) != F.m) == reductions.intersects(F, J, ip)


def test_disk_adapters():
    B = Rect2(0, 10, 0, 0)
    a = adapters.empty_disk_exists()
    a.insert(Disk2(0, 0, 1))
    assert a.query((B, 9)) and not a.query((B, 10))
    c = adapters.region_covered()
    c.insert(Disk2(1, 1, 4))
    assert c.query(Rect2(0, 2, 0, 2))


def test_greedy_cover_within_harmonic_bound():
    rng = random.Random(6)
    for _ in range(40):
        pts = list({(rng.randrange(10), rng.randrange(10)) for _ in range(rng.randint(1, 10))})
        ex, gr = adapters.min_cover(), adapters.approx_cover("greedy")
        objs = list(pts) + [Rect2(p[0], p[0], p[1], p[1]) for p in pts]
        for _ in range(rng.randint(0, 8)):
            x, y = rng.randrange(10), rng.randrange(10)
            objs.append(WeightedRect(Rect2(x, x + rng.randrange(5), y, y + rng.randrange(5)), rng.randint(1, 3)))
        for o in objs:
            ex.insert(o)
            gr.insert(o)
        opt, got = ex.query(), gr.query()
        H = sum(Fraction(1, i) for i in range(1, len(pts) + 1))
        assert opt <= got <= H * opt


def test_approx_cover_rejects_unknown_mode():
    with pytest.raises(ValueError):
        adapters.approx_cover("lp")


def _check(adapter, oracle_call, objs, q):
    for o in objs:
        adapter.insert(o)
    return adapter.query(q) == oracle_call(objs, q)


pt3 = st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
pt2 = st.tuples(st.integers(0, 12), st.integers(0, 12))


@given(st.lists(pt3, max_size=15))
def test_counting_adapters_match_oracles(pts):
    assert _check(adapters.extremal_count(), lambda o, q: oracles.extremal_count_3d(o), pts, None)
    assert _check(adapters.maximal_count(), lambda o, q: oracles.maximal_count_3d(o), pts, None)


@given(st.lists(pt2, unique=True, min_size=1, max_size=15), st.integers(1, 4))
def test_layer_adapter_matches_oracle(pts, i):
    sizes = oracles.convex_layer_sizes(pts)
    assert sum(sizes) == len(pts)
    a = adapters.layer_size()
    for p in pts:
        a.insert(p)
    assert a.query(i) == (sizes[i - 1] if i <= len(sizes) else 0)


@given(st.lists(pt2, min_size=1, max_size=10), st.integers(0, 8), st.integers(0, 8))
def test_empty_disk_adapter_matches_oracle(pts, x, y):
    B = Rect2(x, x + 3, y, y + 2)
    assert _check(adapters.largest_empty_disk(), oracles.largest_empty_disk, pts, B)
