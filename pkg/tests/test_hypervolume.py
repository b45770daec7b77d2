import random

from hypothesis import given
from hypothesis import strategies as st

from artifact import oracles, reductions
from artifact.core import AnchoredBox3
from artifact.hypervolume import StaircaseHV3


def test_two_boxes():
    s = StaircaseHV3()
    assert s.current_volume() == 0
    assert s.insert_box(AnchoredBox3(2, 3, 4)) == 24
    assert s.insert_box(AnchoredBox3(3, 2, 1)) == 26


def test_degenerate_box_adds_nothing():
    s = StaircaseHV3()
    s.insert_box((5, 5, 5))
    assert s.insert_box((0, 9, 9)) == 125


def test_large_values_stay_exact():
    s = StaircaseHV3()
    big = 1 << 40
    s.insert_box((big, big, big))
    assert s.current_volume() == big ** 3


def _random_matvec(rng, N, W):
    M = [[rng.randint(0, W) for _ in range(N)] for _ in range(N)]
    v = [rng.randint(0, W) for _ in range(N)]
    return M, v


def test_probe_deltas_match_closed_form():
    rng = random.Random(21)
    W = 15
    for _ in range(10):
        N = rng.randint(1, 8)
        M, v = _random_matvec(rng, N, W)
        trace = []
        got = reductions.run_matvec_hypervolume(StaircaseHV3(), M, v, W, trace)
        assert got == [sum(M[k][j] * v[j] for j in range(N)) for k in range(N)]
        for k in range(1, N + 1):
            assert trace[k] - trace[k - 1] == reductions.matvec_delta(M, v, W, k)


def test_gadget_volume_matches_c0_sum():
    rng = random.Random(22)
    W = 15
    for N in (1, 3, 6):
        M, v = _random_matvec(rng, N, W)
        s = StaircaseHV3()
        for b in reductions.matvec_boxes(M, v, W):
            s.insert_box(b)
        rows = range(1, N + 1)
        c0 = (sum((N * (N + 1) - i - j * N) * W * W for i in rows for j in rows)
              + sum(map(sum, M)) * W
              + sum(v) * sum(i * W for i in rows)
              - sum(v[j - 1] * M[i - 1][j - 1] for i in rows for j in rows))
        assert s.current_volume() == c0


def _dominance_filter(corners):
    cs = set(c for c in corners if min(c) > 0)
    return sorted(c for c in cs if not any(d != c and all(a >= b for a, b in zip(d, c)) for d in cs))


box = st.tuples(st.integers(0, 1000), st.integers(0, 1000), st.integers(0, 1000))


@given(st.lists(box, max_size=60))
def test_oracle_equivalence_and_monotone(bs):
    s = StaircaseHV3()
    prev = 0
    for i, b in enumerate(bs):
        vol = s.insert_box(b)
        assert vol == oracles.hypervolume([AnchoredBox3(*c) for c in bs[: i + 1]])
        assert vol >= prev
        prev = vol
    live = _dominance_filter(bs)
    assert [c for c in s.corners() if min(c) > 0] == live
    assert len(live) == oracles.maximal_count_3d(live)


@given(st.lists(box, min_size=1, max_size=30), st.data())
def test_dominated_insert_is_free(bs, data):
    s = StaircaseHV3()
    for b in bs:
        s.insert_box(b)
    x, y, z = data.draw(st.sampled_from(bs))
    before = s.current_volume()
    smaller = (data.draw(st.integers(0, x)), data.draw(st.integers(0, y)), data.draw(st.integers(0, z)))
    assert s.insert_box(smaller) == before
