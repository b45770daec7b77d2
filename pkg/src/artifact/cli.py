"""Command line: ``verify`` runs the property suites, ``bench`` times the structures.

    python -m artifact.cli verify [--suite NAME]* [--seed U64] [--max-mk INT]
    python -m artifact.cli bench --structures LIST --sizes LIST --ops-per-size INT
                                 --seed U64 --out PATH

Reports go to standard output and never contain timings, so two ``verify``
runs with the same arguments print identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import gc
import math
import random
import sys
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import adapters, oracles, reductions
from .core import AnchoredBox3, Disk2, Point2, Point3, Rect2
from .hypervolume import StaircaseHV3
from .marking import MarkKdTree
from .measures import SlabMeasureEngine
from .reductions import (
    OMvInstance, SetFamily, all_families, all_subsets, dump_instance, dump_omv, intersects,
    oumv_truth, random_family, random_subset,
)

SUITES = ("soundness", "oracles", "lemma", "matvec", "depth_omv")
MAX_DUMPS = 3


def _rng(seed, *tags) -> random.Random:
    return random.Random(":".join(str(t) for t in (seed,) + tags))


def _indeterminate(exc: Exception) -> bool:
    return "precision-indeterminate" in str(exc)


class Report:
    """Collects suite lines; ``ok`` turns False on the first failure."""

    def __init__(self, out=None):
        self.out = out or sys.stdout
        self.ok = True

    def line(self, text=""):
        print(text, file=self.out, flush=True)

    def verdict(self, suite, name, ok, detail):
        self.ok = self.ok and ok
        self.line(f"[{suite}] {name}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())

    def dump(self, header, body):
        self.line(f"  counterexample ({header}):")
        for ln in body.rstrip("\n").split("\n"):
            self.line("    " + ln)


# -- soundness and undo ----------------------------------------------------------------------

FIXED_MK = {"extremal_points": 5, "convex_layers": 5}


def _structures(enc):
    return ("fast",) if enc.fast is enc.reference else ("fast", "reference")


def _random_case(enc, rng, max_mk):
    fixed = FIXED_MK.get(enc.name)
    for _ in range(200):
        if fixed:
            m = k = fixed
        else:
            m = rng.randint(max(enc.min_m, 1), max(max_mk, enc.min_m))
            k = m if enc.oumv else rng.randint(max(enc.min_k, 1), max(max_mk, enc.min_k))
        F = random_family(rng, m, k, rng.choice((0.25, 0.5, 0.75)))
        if not enc.accepts(F):
            continue
        if enc.oumv:
            pairs = [(frozenset(random_subset(rng, k)), random_subset(rng, m)) for _ in range(4)]
            return F, pairs
        J = random_subset(rng, m)
        if enc.accepts(F, J):
            return F, J
    return None


def _exhaustive_cases(enc, emax):
    for m in range(1, emax + 1):
        for k in range(1, emax + 1):
            for F in all_families(m, k):
                if not enc.accepts(F):
                    continue
                if enc.oumv:
                    yield F, [(I, J) for I in all_subsets(k) for J in all_subsets(m)]
                    continue
                for J in all_subsets(m):
                    if enc.accepts(F, J):
                        yield F, J


@dataclass
class SoundnessTally:
    cases: int = 0
    decisions: int = 0
    wrong: int = 0
    undo_bad: int = 0
    errors: int = 0


def check_case(enc, F, payload, which):
    """Returns (decisions, wrong list, undo_ok).  ``payload`` is J or a list of (I, J)."""
    if enc.oumv:
        res = reductions.probe_oumv(enc, F, payload, which)
        wrong = [(I, J, None) for (I, J), d in zip(payload, res.decisions) if d != oumv_truth(F, I, J)]
    else:
        res = reductions.probe_all(enc, F, payload, which)
        wrong = [(None, payload, ip) for ip, d in enumerate(res.decisions, 1)
                 if d != intersects(F, payload, ip)]
    return len(res.decisions), wrong, res.undo_ok


def soundness_suite(encoders, report: Report, seed=0, max_mk=12, trials=200, exhaustive_mk=2):
    for enc in encoders:
        tally = SoundnessTally()
        dumps = []

        def run(F, payload):
            tally.cases += 1
            for which in _structures(enc):
                try:
                    n, wrong, undo_ok = check_case(enc, F, payload, which)
                except ValueError as exc:
                    tally.errors += 1
                    if len(dumps) < MAX_DUMPS:
                        dumps.append((f"{enc.name} {which}: {exc}", _dump_payload(enc, F, payload)))
                    continue
                tally.decisions += n
                tally.wrong += len(wrong)
                tally.undo_bad += not undo_ok
                for I, J, ip in wrong:
                    if len(dumps) < MAX_DUMPS:
                        dumps.append((f"{enc.name} {which} wrong decision",
                                      dump_instance(F, J, I, ip)))
                if not undo_ok and len(dumps) < MAX_DUMPS:
                    dumps.append((f"{enc.name} {which} undo mismatch", _dump_payload(enc, F, payload)))

        if enc.name not in FIXED_MK:
            for F, payload in _exhaustive_cases(enc, exhaustive_mk):
                run(F, payload)
        exhaustive = tally.cases
        rng = _rng(seed, "soundness", enc.name)
        for _ in range(trials):
            case = _random_case(enc, rng, max_mk)
            if case is not None:
                run(*case)
        ok = tally.wrong == 0 and tally.undo_bad == 0 and tally.errors == 0
        report.verdict("soundness", enc.name, ok,
                       f"exhaustive={exhaustive} random={tally.cases - exhaustive} "
                       f"decisions={tally.decisions} wrong={tally.wrong} "
                       f"undo_mismatch={tally.undo_bad} errors={tally.errors}")
        for head, body in dumps:
            report.dump(head, body)


def _dump_payload(enc, F, payload):
    if enc.oumv:
        I, J = payload[0]
        return dump_instance(F, J, I)
    return dump_instance(F, payload)


# -- oracle equivalence scripts ---------------------------------------------------------------

def _coord(rng, hi=40):
    return rng.randrange(hi)


def _rect(rng, hi=40, side=16):
    x, y = _coord(rng, hi), _coord(rng, hi)
    return Rect2(x, x + rng.randrange(side), y, y + rng.randrange(side))


def script_marking(rng, max_n=64, max_ops=200):
    pts = sorted({(_coord(rng), _coord(rng)) for _ in range(rng.randint(1, max_n))})
    tree = MarkKdTree(pts)
    marks = []
    for _ in range(rng.randint(1, max_ops)):
        if marks and rng.random() < 0.3:
            tree.undo()
            marks.pop()
        else:
            r = _rect(rng)
            tree.mark_range(r)
            marks.append(r)
        left = sorted(p for p in pts if not any(r.contains(p) for r in marks))
        if tree.unmarked_count() != len(left) or tree.any_unmarked() != bool(left):
            return f"unmarked count {tree.unmarked_count()} != {len(left)}"
        if sorted(map(tuple, tree.unmarked_points())) != left:
            return "unmarked point set differs"
    return None


def script_measures(rng, max_n=64, max_ops=200):
    C = _rect(rng, 30, 20)
    eng = SlabMeasureEngine(C)
    rects, pts = [], []
    for _ in range(rng.randint(1, max_ops)):
        u = rng.random()
        size = len(rects) + len(pts)
        if (u < 0.35 or not rects) and size < max_n:
            r = _rect(rng)
            eng.insert_rect(r)
            rects.append(r)
        elif u < 0.55 and rects:
            r = rng.choice(rects)
            eng.delete_rect(r)
            rects.remove(r)
        elif u < 0.7 and size < max_n:
            p = (_coord(rng), _coord(rng))
            eng.insert_point(p)
            pts.append(p)
        elif u < 0.8 and pts:
            p = rng.choice(pts)
            eng.delete_point(p)
            pts.remove(p)
        elif eng.journal:
            kind, obj, d = eng.journal[-1]
            eng.undo()
            bag = rects if kind == "rect" else pts
            if d > 0:
                bag.remove(obj)
            else:
                bag.append(obj)
        want = (oracles.union_area(rects), oracles.max_depth(rects),
                oracles.covers_region(rects, C), oracles.covered_count(pts, rects))
        got = (eng.query_union_area(), eng.query_depth(), eng.query_covers(),
               eng.query_covered_count())
        if got != want:
            return f"(area, depth, covers, covered) {got} != {want}"
    return None


def script_hypervolume(rng, max_n=64, max_ops=200):
    hv = StaircaseHV3()
    boxes = []
    for _ in range(rng.randint(1, min(max_n, max_ops))):
        b = AnchoredBox3(rng.randrange(30), rng.randrange(30), rng.randrange(30))
        got = hv.insert_box(b)
        boxes.append(b)
        want = oracles.hypervolume(boxes)
        if got != want or hv.current_volume() != want:
            return f"volume {got} != {want}"
    flags = oracles.maximal_points_3d(list(set(boxes)))
    want = sorted(b for b, f in zip(list(set(boxes)), flags) if f)
    if sorted(hv.corners()) != want:
        return "corner set differs"
    return None


def _adapter_cases():
    """name -> (factory, object generator, query generator, direct oracle)."""
    def p3(rng):
        return Point3(rng.randrange(12), rng.randrange(12), rng.randrange(12))

    def p2(rng):
        return Point2(rng.randrange(25), rng.randrange(25))

    def disk(rng):
        return Disk2(rng.randrange(25), rng.randrange(25), rng.randint(1, 6) ** 2)

    def box(rng):
        x, y = rng.randrange(20), rng.randrange(20)
        return Rect2(x, x + rng.randrange(8), y, y + rng.randrange(8))

    def le_disk(objs, B):
        return oracles.largest_empty_disk(objs, B) if objs else None

    def mixed_measure(rng):
        return _rect(rng, 25, 10) if rng.random() < 0.6 else Point2(rng.randrange(25), rng.randrange(25))

    measure_C = Rect2(3, 15, 3, 15)

    def measure_direct(objs, q):
        rects = [o for o in objs if isinstance(o, Rect2)]
        pts = [o for o in objs if not isinstance(o, Rect2)]
        return {"area": oracles.union_area(rects), "depth": oracles.max_depth(rects),
                "covers": oracles.covers_region(rects, measure_C),
                "covered_count": oracles.covered_count(pts, rects)}[q]

    mark_pts = [(x, y) for x in range(0, 20, 3) for y in range(0, 20, 4)]

    def cover_obj(rng):
        if rng.random() < 0.4:
            return Point2(rng.randrange(10), rng.randrange(10))
        r = _rect(rng, 10, 6)
        return adapters.WeightedRect(r, rng.randint(1, 4)) if rng.random() < 0.5 else r

    def cover_direct(exact):
        def run(objs, q):
            pts, rects, w = adapters._split_cover(objs)
            if exact:
                return oracles.min_weight_set_cover(pts, rects, w)
            return oracles.greedy_weight_set_cover(pts, rects, w)
        return run

    def guarded(fn):
        def run(objs, q):
            try:
                return fn(objs, q)
            except ValueError as exc:
                return ("error", str(exc))
        return run

    return {
        "extremal_count": (adapters.extremal_count, p3, lambda rng: None,
                           lambda o, q: oracles.extremal_count_3d(o)),
        "maximal_count": (adapters.maximal_count, p3, lambda rng: None,
                          lambda o, q: oracles.maximal_count_3d(o)),
        "layer_size": (adapters.layer_size, p2, lambda rng: rng.randint(1, 4),
                       lambda o, q: (oracles.convex_layer_sizes(o) + [0] * q)[q - 1]),
        "largest_empty_disk": (adapters.largest_empty_disk, p2, box, le_disk),
        "region_covered": (adapters.region_covered, disk, box,
                           lambda o, B: oracles.region_covered_by_disks(o, B)),
        "empty_disk_exists": (adapters.empty_disk_exists, disk,
                              lambda rng: (box(rng), Fraction(rng.randint(0, 8), rng.choice((1, 2)))),
                              lambda o, q: oracles.empty_disk_exists(o, q[0], q[1])),
        "measures_reference": (lambda: adapters.measures_reference(measure_C), mixed_measure,
                               lambda rng: rng.choice(("area", "depth", "covers", "covered_count")),
                               measure_direct),
        "marking_reference": (lambda: adapters.marking_reference(mark_pts), lambda rng: _rect(rng, 20, 8),
                              lambda rng: None,
                              lambda o, q: any(not any(r.contains(p) for r in o) for p in mark_pts)),
        "min_cover": (adapters.min_cover, cover_obj, lambda rng: None, guarded(cover_direct(True))),
        "approx_cover": (adapters.approx_cover, cover_obj, lambda rng: None, guarded(cover_direct(False))),
    }


ADAPTER_LIMITS = {"min_cover": 20, "approx_cover": 20, "extremal_count": 40}


def script_adapter(name, rng, max_n=64, max_ops=200):
    make, gen, qgen, direct = _adapter_cases()[name]
    ad = make()
    if name in ("min_cover", "approx_cover"):
        ad = adapters.RecomputeAdapter(_guard_query(ad._oracle), ad.name)
    cap = min(max_n, ADAPTER_LIMITS.get(name, max_n))
    bag = Counter()
    for step in range(rng.randint(1, max_ops)):
        u = rng.random()
        n = sum(bag.values())
        if u < 0.5 and n < cap:
            o = gen(rng)
            ad.insert(o)
            bag[o] += 1
        elif u < 0.75 and n:
            o = rng.choice(sorted(bag.elements(), key=repr))
            ad.delete(o)
            bag[o] -= 1
        elif ad.journal:
            o, d = ad.journal[-1]
            ad.undo()
            bag[o] += d
        bag += Counter()
        if ad.snapshot() != frozenset(bag.items()):
            return f"multiset differs after step {step}"
        if rng.random() < 0.08 and bag:
            q = qgen(rng)
            got, want = ad.query(q), direct(list(bag.elements()), q)
            if got != want:
                return f"query {q!r}: {got!r} != {want!r}"
    return None


def _guard_query(fn):
    def run(objs, q):
        try:
            return fn(objs, q)
        except ValueError as exc:
            return ("error", str(exc))
    return run


def oracle_scripts():
    named = {"marking": script_marking, "measures": script_measures,
             "hypervolume": script_hypervolume}
    for name in _adapter_cases():
        named[f"adapter:{name}"] = (lambda nm: lambda rng, **kw: script_adapter(nm, rng, **kw))(name)
    return named


def oracles_suite(report: Report, seed=0, scripts=1000, only=None):
    for name, fn in oracle_scripts().items():
        if only and name not in only:
            continue
        bad = []
        errors = 0
        for s in range(scripts):
            try:
                msg = fn(_rng(seed, "oracles", name, s))
            except ValueError as exc:
                errors += 1
                msg = str(exc)
            if msg is not None:
                bad.append((s, msg))
        report.verdict("oracles", name, not bad, f"scripts={scripts} failing={len(bad)} errors={errors}")
        for s, msg in bad[:MAX_DUMPS]:
            report.line(f"  script {s}: {msg}")


# -- extremal lemma ------------------------------------------------------------------------------

_STEPS = [(dx, dy, dz) for dx in range(-2, 3) for dy in range(-2, 3) for dz in range(-2, 3)
          if dx * dx + dy * dy + dz * dz <= 4]


def _ideal_scaled(F, key):
    """Unsnapped location of a gadget point, in the scaled integer frame."""
    m, k = F.m, F.k
    R = reductions.extremal_radius(F)
    S = 2 * R * R
    kind = key[0]
    if kind == "t":
        i = key[1]
        return (0.0, 0.0, float(Fraction(R + (2 * i - 1) ** 2, 2 * (2 * i - 1)) * S))
    if kind == "q":
        r, h, j = R - (2 * key[1] + 1) ** 2, 2 * key[1] + 1, key[2]
    elif kind == "p":
        r, h, j = R - (2 * key[1]) ** 2, 2 * key[1], key[2]
    else:
        r, h, j = R - 1, 2 * k + 2, key[1]
    th = 2 * math.pi * (j % m) / m
    return (r * math.cos(th) * S, r * math.sin(th) * S, float(h * S))


def perturb(F, gadget, rng, reach=2.0):
    """Move every point to a random grid node within ``reach`` grid units of its
    unsnapped location (one unit is 1/(2R^2), so reach 2 is 1/R^2)."""
    out = {}
    lim = reach - 1e-6
    for key, p in gadget.items():
        ideal = _ideal_scaled(F, key)
        opts = []
        for d in _STEPS:
            q = (p[0] + d[0], p[1] + d[1], p[2] + d[2])
            if math.dist(q, ideal) <= lim:
                opts.append(q)
        out[key] = Point3(*rng.choice(opts))
    return out


def lemma_family(m=5, k=5) -> SetFamily:
    return SetFamily(m, tuple(((i - 1) % m + 1,) for i in range(1, k + 1)))


def lemma_check(F, gadget, present_b, present_t):
    keys = [key for key in gadget if key[0] in ("q", "p")]
    keys += [("b", j) for j in sorted(present_b)] + [("t", i) for i in sorted(present_t)]
    flags = oracles.extremal_points_3d([gadget[key] for key in keys])
    got = dict(zip(keys, flags))
    want = reductions.extremal_lemma_expected(F, present_b, present_t)
    return [key for key, v in want.items() if got[key] != v]


def lemma_suite(report: Report, seed=0, perturbations=50, F=None):
    F = F or lemma_family()
    m, k = F.m, F.k
    base = reductions.extremal_gadget(F)
    rng = _rng(seed, "lemma")
    patterns = runs = 0
    bad = []
    for bmask in range(1 << m):
        present_b = {j for j in range(1, m + 1) if bmask >> (j - 1) & 1}
        for tmask in range(1 << k):
            present_t = {i for i in range(1, k + 1) if tmask >> (i - 1) & 1}
            patterns += 1
            for trial in range(perturbations + 1):
                g = base if trial == 0 else perturb(F, base, rng)
                runs += 1
                wrong = lemma_check(F, g, present_b, present_t)
                if wrong:
                    bad.append((sorted(present_b), sorted(present_t), trial, wrong[:4]))
    report.verdict("lemma", f"m={m} k={k}", not bad,
                   f"patterns={patterns} configurations={runs} mismatching={len(bad)}")
    for b, t, trial, wrong in bad[:MAX_DUMPS]:
        report.line(f"  b={b} t={t} perturbation={trial} points={wrong}")
        report.dump("family", dump_instance(F))


# -- matrix-vector through hypervolume ---------------------------------------------------------------

def matvec_suite(report: Report, seed=0, instances=50, max_n=12, W=15):
    rng = _rng(seed, "matvec")
    bad = []
    for t in range(instances):
        N = rng.randint(1, max_n)
        M = [[rng.randint(0, W) for _ in range(N)] for _ in range(N)]
        v = [rng.randint(0, W) for _ in range(N)]
        trace = []
        got = reductions.run_matvec_hypervolume(StaircaseHV3(), M, v, W, trace)
        want = [sum(a * b for a, b in zip(row, v)) for row in M]
        deltas_ok = all(trace[k] - trace[k - 1] == reductions.matvec_delta(M, v, W, k)
                        for k in range(1, N + 1))
        ref = reductions.ReferenceHV()
        reductions.run_matvec_hypervolume(ref, M, v, W, rtrace := [])
        if got != want or not deltas_ok or rtrace != trace:
            bad.append(OMvInstance(N, W, M, [v]))
    report.verdict("matvec", f"W={W}", not bad, f"instances={instances} failing={len(bad)}")
    for inst in bad[:MAX_DUMPS]:
        report.dump("matrix and vector", dump_omv(inst))


# -- depth OMv -------------------------------------------------------------------------------------

def depth_omv_suite(report: Report, seed=0, instances=50, max_n=10):
    rng = _rng(seed, "depth_omv")
    bad = []
    for t in range(instances):
        N = rng.randint(1, max_n)
        M = [[rng.randint(0, 1) for _ in range(N)] for _ in range(N)]
        vecs = [[rng.randint(0, 1) for _ in range(N)] for _ in range(N)]
        inst = OMvInstance(N, 1, M, vecs)
        want = [[int(any(M[r][j] and v[j] for j in range(N))) for r in range(N)] for v in vecs]
        for make in (reductions.depth_engine_handle, reductions.depth_reference_handle):
            h = make()
            got = reductions.run_depth_omv(h, inst)
            if got != want or h.counts["delete"] or h.counts["mark"]:
                bad.append(inst)
                break
    report.verdict("depth_omv", "insert-only", not bad, f"instances={instances} failing={len(bad)}")
    for inst in bad[:MAX_DUMPS]:
        report.dump("boolean instance", dump_omv(inst))


# -- verify entry ----------------------------------------------------------------------------------

def verify(suites=None, seed=0, max_mk=12, trials=200, exhaustive_mk=2, scripts=1000,
           perturbations=50, instances=50, encoders=None, out=None) -> int:
    report = Report(out)
    suites = list(suites or SUITES)
    report.line(f"verify seed={seed} max_mk={max_mk} suites={','.join(suites)}")
    for s in suites:
        try:
            if s == "soundness":
                soundness_suite(encoders or reductions.all_encoders(), report, seed, max_mk,
                                trials, exhaustive_mk)
            elif s == "oracles":
                oracles_suite(report, seed, scripts)
            elif s == "lemma":
                lemma_suite(report, seed, perturbations)
            elif s == "matvec":
                matvec_suite(report, seed, instances)
            elif s == "depth_omv":
                depth_omv_suite(report, seed, instances)
            else:
                raise ValueError(f"unknown suite {s!r}")
        except ValueError as exc:
            tag = "precision-indeterminate" if _indeterminate(exc) else "error"
            report.verdict(s, tag, False, str(exc))
    report.line("verify: " + ("PASS" if report.ok else "FAIL"))
    return 0 if report.ok else 1


# -- bench -------------------------------------------------------------------------------------------

BENCH_HEADER = ["structure", "n", "op", "samples", "mean_ns", "p50_ns", "p99_ns", "seed"]
BENCH_SPAN = 1 << 20
MIN_SAMPLES = 30


def _keep(samples):
    """Drop the first tenth as warm-up."""
    return samples[len(samples) // 10:]


def _total(ops):
    # enough raw samples that MIN_SAMPLES survive the warm-up cut
    return max(ops, MIN_SAMPLES + MIN_SAMPLES // 9 + 1)


def _square(rng, n):
    side = rng.randrange(1, max(2, 4 * BENCH_SPAN // math.isqrt(n)))
    x, y = rng.randrange(BENCH_SPAN), rng.randrange(BENCH_SPAN)
    return Rect2(x, x + side, y, y + side)


def _uniform_rect(rng):
    # uniform corners: the boundary cuts about sqrt(n) kd cells
    x0, x1 = sorted((rng.randrange(BENCH_SPAN), rng.randrange(BENCH_SPAN)))
    y0, y1 = sorted((rng.randrange(BENCH_SPAN), rng.randrange(BENCH_SPAN)))
    return Rect2(x0, x1, y0, y1)


def _timed(fn, *args):
    t = time.perf_counter_ns()
    fn(*args)
    return time.perf_counter_ns() - t


def bench_counter(n, ops, rng, shapes=None):
    box = [n]

    def bump():
        box[0] += 1
    return {"update": [_timed(bump) for _ in range(_total(ops))]}


def bench_kdtree(n, ops, rng, shapes=None):
    """``shapes`` draws the query rectangles; reuse one seed across sizes so
    every n sees the same rectangle sequence."""
    shapes = shapes or rng
    pts = [(rng.randrange(BENCH_SPAN), rng.randrange(BENCH_SPAN)) for _ in range(n)]
    tree = MarkKdTree(pts)
    mark, query = [], []
    for _ in range(_total(ops)):
        mark.append(_timed(tree.mark_range, _uniform_rect(shapes)))
        tree.undo()
        query.append(_timed(tree.any_unmarked))
    return {"mark": mark, "query": query}


def bench_measures(n, ops, rng, shapes=None):
    """Update samples plus their amortized form, which adds the cost of one
    bulk rebuild spread over the rebuild period."""
    live = [_square(rng, n) for _ in range(n)]
    t = time.perf_counter_ns()
    eng = SlabMeasureEngine.from_objects(live)
    share = (time.perf_counter_ns() - t) / eng.rebuild_period
    upd, query = [], []
    for _ in range(_total(ops)):
        before = eng.rebuilds
        r = _square(rng, n)
        a = _timed(eng.insert_rect, r)
        b = _timed(eng.delete_rect, r)
        if eng.rebuilds == before:
            upd += [a, b]
        query.append(_timed(eng.query_depth))
    return {"update": upd, "update_amortized": [round(s + share) for s in upd], "query": query}


def bench_hypervolume(n, ops, rng, shapes=None, W=15):
    N = max(1, math.isqrt(n // 2))
    M = [[rng.randint(0, W) for _ in range(N)] for _ in range(N)]
    v = [rng.randint(0, W) for _ in range(N)]
    boxes = reductions.matvec_boxes(M, v, W) + [reductions.matvec_probe(N, W, k)
                                                 for k in range(1, N + 1)]
    hv = StaircaseHV3()
    ins = [_timed(hv.insert_box, b) for b in boxes]
    query = [_timed(hv.current_volume) for _ in range(_total(ops))]
    return {"insert": ins, "query": query}


BENCHES = {"counter": bench_counter, "kdtree": bench_kdtree, "measures": bench_measures,
           "hypervolume": bench_hypervolume}


def _summary(samples):
    kept = np.array(_keep(samples), dtype=float)
    return (len(kept), float(kept.mean()), float(np.percentile(kept, 50)),
            float(np.percentile(kept, 99)))


def fit_slope(ns, means) -> float:
    """Least-squares slope of log2(mean) against log2(n)."""
    if len(ns) < 2:
        return float("nan")
    return float(np.polyfit(np.log2(ns), np.log2(means), 1)[0])


def bench(structures, sizes, ops_per_size, seed, out_path, log=None):
    sizes = sorted(sizes)
    rows = []
    for name in structures:
        if name not in BENCHES:
            raise ValueError(f"unknown structure {name!r}; choose from {sorted(BENCHES)}")
        for n in sizes:
            gc.collect()
            gc.disable()
            try:
                res = BENCHES[name](n, ops_per_size, _rng(seed, "bench", name, n),
                                    _rng(seed, "bench", name, "shapes"))
            finally:
                gc.enable()
            for op, samples in res.items():
                cnt, mean, p50, p99 = _summary(samples)
                rows.append((name, n, op, cnt, mean, p50, p99, seed))
                if log:
                    log(f"{name} n={n} {op} mean={mean:.0f}ns samples={cnt}")
    fits = []
    for name in structures:
        ops = dict.fromkeys(r[2] for r in rows if r[0] == name)
        for op in ops:
            pts = [(r[1], r[4]) for r in rows if r[0] == name and r[2] == op]
            fits.append((name, op, fit_slope([p[0] for p in pts], [p[1] for p in pts])))
    with open(out_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(BENCH_HEADER)
        for r in rows:
            w.writerow([r[0], r[1], r[2], r[3], f"{r[4]:.1f}", f"{r[5]:.1f}", f"{r[6]:.1f}", r[7]])
        for name, op, slope in fits:
            fh.write(f"# fit {name} {op} {slope:.4f}\n")
    return rows, fits


def read_bench(path):
    """Parse a bench CSV into (rows, {(structure, op): slope})."""
    with open(path) as fh:
        text = fh.read().splitlines()
    body = [ln for ln in text if not ln.startswith("#")]
    rows = list(csv.DictReader(body))
    fits = {}
    for ln in text:
        if ln.startswith("# fit "):
            _, _, s, op, slope = ln.split()
            fits[(s, op)] = float(slope)
    return rows, fits


# -- argument parsing -------------------------------------------------------------------------------

def _csv_list(text):
    return [t for t in text.split(",") if t]


def _size_list(text):
    out = []
    for t in _csv_list(text):
        out.append(1 << int(t[2:]) if t.startswith("2^") else int(t))
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="artifact")
    sub = p.add_subparsers(dest="cmd", required=True)
    v = sub.add_parser("verify", help="run property suites against the oracles")
    v.add_argument("--suite", action="append", choices=SUITES)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-mk", type=int, default=12)
    v.add_argument("--trials", type=int, default=200, help="random instances per encoder")
    v.add_argument("--exhaustive-mk", type=int, default=2,
                   help="enumerate every (F, J) with m, k up to this bound")
    v.add_argument("--scripts", type=int, default=1000, help="random scripts per structure")
    v.add_argument("--perturbations", type=int, default=50)
    v.add_argument("--instances", type=int, default=50)
    b = sub.add_parser("bench", help="time updates and queries, write CSV")
    b.add_argument("--structures", type=_csv_list, default=list(BENCHES))
    b.add_argument("--sizes", type=_size_list, default=[1 << e for e in range(12, 17)],
                   help="comma list; entries may be written 2^e")
    b.add_argument("--ops-per-size", type=int, default=1000)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed < 0 or args.seed >= 1 << 64:
        print("seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 2
    if args.cmd == "verify":
        return verify(args.suite, args.seed, args.max_mk, args.trials, args.exhaustive_mk,
                      args.scripts, args.perturbations, args.instances)
    try:
        _, fits = bench(args.structures, args.sizes, args.ops_per_size, args.seed, args.out,
                        log=lambda s: print(s, file=sys.stderr))
    except (OSError, ValueError) as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 1
    for name, op, slope in fits:
        print(f"fit {name} {op} {slope:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
