import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact import oracles, reductions as R
from artifact.hypervolume import StaircaseHV3
from helpers import DIAGONAL_5, FIG_FAMILY, FIG_J

MULTIPHASE = [e for e in R.all_encoders() if not e.oumv]
OUMV = [e for e in R.all_encoders() if e.oumv]
by_name = {e.name: e for e in R.all_encoders()}


def _family_for(enc, F):
    """Pad a family up to the encoder's minimum size without touching its first sets."""
    m, k = max(F.m, enc.min_m), max(F.k, enc.min_k)
    return R.SetFamily(m, tuple(F.sets) + tuple(() for _ in range(k - F.k)))


def _decide(enc, F, J, ip, which="fast"):
    return R.run_multiphase(enc, F, R.MultiphaseQuery(frozenset(J), ip), which)


@pytest.mark.parametrize("enc", MULTIPHASE, ids=lambda e: e.name)
def test_singleton_family(enc):
    F = _family_for(enc, R.SetFamily(1, ((1,),)))
    assert _decide(enc, F, {1}, 1)
    assert not _decide(enc, F, set(), 1)


@pytest.mark.parametrize("enc", MULTIPHASE, ids=lambda e: e.name)
def test_figure_family(enc):
    F = _family_for(enc, FIG_FAMILY)
    if not enc.accepts(F, FIG_J):
        pytest.skip("encoder needs a normal family")
    assert _decide(enc, F, FIG_J, 1)
    assert not _decide(enc, F, FIG_J, 3)


@pytest.mark.parametrize("enc", MULTIPHASE, ids=lambda e: e.name)
def test_fast_and_reference_agree(enc):
    rng = random.Random(enc.name)
    for _ in range(3):
        m, k = max(rng.randint(1, 4), enc.min_m), max(rng.randint(1, 4), enc.min_k)
        F = R.random_family(rng, m, k)
        J = R.random_subset(rng, m)
        if not enc.accepts(F, J):
            continue
        fast = R.probe_all(enc, F, J, "fast")
        ref = R.probe_all(enc, F, J, "reference")
        assert fast.decisions == ref.decisions == [R.intersects(F, J, i) for i in range(1, k + 1)]
        assert fast.undo_ok and ref.undo_ok


def test_extremal_diagonal_family():
    enc = by_name["extremal_points"]
    assert _decide(enc, DIAGONAL_5, {3}, 3)
    assert R.probe_all(enc, DIAGONAL_5, set()).decisions == [False] * 5


def test_extremal_requires_five():
    assert not by_name["extremal_points"].accepts(R.SetFamily(4, ((1,),) * 5))


def test_convex_layers_examples():
    enc = by_name["convex_layers"]
    assert _decide(enc, FIG_FAMILY, FIG_J, 1)
    assert R.probe_all(enc, FIG_FAMILY, set()).decisions == [False] * 3
    with pytest.raises(ValueError):
        enc.step2(FIG_FAMILY, set(range(1, 6)))


def test_convex_layers_random_layer_count():
    enc = by_name["convex_layers"]
    rng = random.Random(17)
    for _ in range(5):
        m, k = rng.randint(3, 5), rng.randint(1, 4)
        F = R.random_family(rng, m, k)
        J = R.random_subset(rng, m) - {m}
        g = R.convex_layer_gadget(F)
        pts = [p for key, p in g.items() if not (key[0] == "b" and key[1] in J)]
        assert len(oracles.convex_layer_sizes(pts)) == 2 * k + 1
        assert R.probe_all(enc, F, J).decisions == [R.intersects(F, J, i) for i in range(1, k + 1)]


def test_set_cover_threshold():
    assert R.set_cover_c(R.SetFamily(4, ((1,),)), Fraction(0), 1, False) == 4 + 3


def test_set_cover_disjoint_min_cover_small():
    enc = R.enc_set_cover(False, mode="exact")
    F = R.SetFamily(1, ((1,),))
    assert not _decide(enc, F, set(), 1)


def test_set_cover_greedy_random():
    enc = R.enc_set_cover(False)
    rng = random.Random(18)
    for _ in range(20):
        F = R.random_family(rng, rng.randint(1, 3), rng.randint(1, 3))
        J = R.random_subset(rng, F.m)
        assert R.probe_all(enc, F, J).decisions == [R.intersects(F, J, i) for i in range(1, F.k + 1)]


def test_rect_marking_oumv_examples():
    enc = by_name["rect_range_marking_oumv"]
    ident = R.SetFamily(2, ((1,), (2,)))
    assert R.run_oumv(enc, ident, {1}, {1})
    zero = R.SetFamily(2, ((), ()))
    assert not R.run_oumv(enc, zero, {1, 2}, {1, 2})


@pytest.mark.parametrize("enc", OUMV, ids=lambda e: e.name)
def test_oumv_random_n8(enc):
    rng = random.Random(enc.name)
    F = R.random_family(rng, 8, 8)
    pairs = [(R.random_subset(rng, 8), R.random_subset(rng, 8)) for _ in range(100)]
    res = R.probe_oumv(enc, F, pairs)
    assert res.decisions == [R.oumv_truth(F, I, J) for I, J in pairs]
    assert res.undo_ok


def test_oumv_rejects_rectangular_family():
    enc = by_name["square_cover_rects_oumv"]
    assert not enc.accepts(R.SetFamily(3, ((1,), (2,))))


def test_empty_disk_random_small():
    enc = by_name["empty_disk"]
    rng = random.Random(19)
    for _ in range(12):
        F = R.random_family(rng, rng.randint(1, 4), rng.randint(1, 4))
        J = R.random_subset(rng, F.m)
        assert R.probe_all(enc, F, J).decisions == [R.intersects(F, J, i) for i in range(1, F.k + 1)]


def test_disk_encoders_reject_bad_rho():
    with pytest.raises(ValueError):
        R.enc_empty_disk_among_disks(Fraction(1))


# -- depth OMv ---------------------------------------------------------------------------------

def _boolmv(M, v):
    return [int(any(a and b for a, b in zip(row, v))) for row in M]


@pytest.mark.parametrize("make", [R.depth_engine_handle, R.depth_reference_handle])
def test_depth_omv_identity_and_zero(make):
    N = 3
    eye = [[int(i == j) for j in range(N)] for i in range(N)]
    vs = [[int(i == t) for i in range(N)] for t in range(N)]
    assert R.run_depth_omv(make(), R.OMvInstance(N, 1, eye, vs)) == vs
    zero = [[0] * N for _ in range(N)]
    assert R.run_depth_omv(make(), R.OMvInstance(N, 1, zero, vs)) == [[0] * N] * N


def test_depth_omv_random_n8_insert_only():
    rng = random.Random(20)
    N = 8
    M = [[rng.randint(0, 1) for _ in range(N)] for _ in range(N)]
    vs = [[rng.randint(0, 1) for _ in range(N)] for _ in range(N)]
    h = R.depth_engine_handle()
    assert R.run_depth_omv(h, R.OMvInstance(N, 1, M, vs)) == [_boolmv(M, v) for v in vs]
    assert h.counts["delete"] == 0 and h.counts["mark"] == 0


# -- matrix-vector hypervolume -------------------------------------------------------------------

def test_matvec_zero_matrix():
    N, W = 3, 15
    M = [[0] * N for _ in range(N)]
    v = [4, 0, 9]
    trace = []
    assert R.run_matvec_hypervolume(StaircaseHV3(), M, v, W, trace) == [0] * N
    for k in range(1, N + 1):
        pure = (2 * k + N * (N + 1)) * N * W * W // 2 - k * W * sum(v)
        assert trace[k] - trace[k - 1] == pure


def test_matvec_single_entry():
    assert R.run_matvec_hypervolume(StaircaseHV3(), [[7]], [5], 15) == [35]


def test_matvec_random_n12():
    W = 15
    for seed in range(50):
        rng = random.Random(seed)
        M = [[rng.randint(0, W) for _ in range(12)] for _ in range(12)]
        v = [rng.randint(0, W) for _ in range(12)]
        want = [sum(a * b for a, b in zip(row, v)) for row in M]
        assert R.run_matvec_hypervolume(StaircaseHV3(), M, v, W) == want


# -- instance text format ---------------------------------------------------------------------

def test_instance_roundtrip_with_empty_set():
    F = R.SetFamily(4, ((1, 3), (), (2, 4)))
    text = R.dump_instance(F, J={2, 3}, i_prime=2)
    assert text.endswith("\n")
    G, J, I, ip = R.parse_instance(text)
    assert (G, set(J), I, ip) == (F, {2, 3}, None, 2)


@given(st.integers(1, 6), st.data())
def test_instance_roundtrip(m, data):
    sets = data.draw(st.lists(st.frozensets(st.integers(1, m)), min_size=1, max_size=5))
    F = R.SetFamily(m, tuple(sets))
    J = data.draw(st.frozensets(st.integers(1, m)))
    I = data.draw(st.one_of(st.none(), st.frozensets(st.integers(1, F.k))))
    G, J2, I2, _ = R.parse_instance(R.dump_instance(F, J=J, I=I))
    assert G == F and set(J2) == set(J)
    assert (I2 is None) == (I is None) and (I is None or set(I2) == set(I))


def test_omv_roundtrip():
    inst = R.OMvInstance(2, 3, [[1, 0], [3, 2]], [[0, 1], [2, 2]])
    assert R.parse_omv(R.dump_omv(inst)) == inst


def test_omv_rejects_bad_entries():
    with pytest.raises(ValueError):
        R.OMvInstance(2, 1, [[1, 2], [0, 0]], [])
