"""Replay helpers shared by the test modules."""

from collections import Counter

from artifact.reductions import SetFamily

FIG_FAMILY = SetFamily(5, ((1, 3, 5), (2, 4, 5), (2,)))
FIG_J = frozenset({1, 3, 5})
DIAGONAL_5 = SetFamily(5, ((1,), (2,), (3,), (4,), (5,)))


def replay(ops, bag=None):
    """Apply insert/delete ops to a multiset and return it."""
    bag = Counter() if bag is None else bag
    for kind, obj in ops:
        if kind == "insert":
            bag[obj] += 1
        elif kind == "delete":
            assert bag[obj] > 0, obj
            bag[obj] -= 1
            if not bag[obj]:
                del bag[obj]
    return bag


def state(enc, F, J=None, ip=None):
    """Objects present after Step 1, Step 2 (if J given) and the updates of Step 3 (if ip given)."""
    bag = replay(enc.step1(F))
    if J is not None:
        replay(enc.step2(F, J), bag)
    if ip is not None:
        ops, _ = enc.step3(F, J, ip)
        replay([op for op in ops if op[0] != "query"], bag)
    return list(bag.elements())
