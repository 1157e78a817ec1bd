from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from oracles import partitions, pieri
from threetrans.errors import RankTooSmall, UnsupportedShape
from threetrans.zhu import (
    BASE_FOUR,
    Bipartition,
    P,
    Partition,
    SignedPermutation,
    admissible_bipartitions,
    branch,
    module_count,
    restrict_to_symmetric,
    verify_coxeter_model,
)

E = P()


def parts(xs):
    return sorted(x.parts for x in xs)


@pytest.mark.parametrize("bp,want", [
    (Bipartition(P(4), E), [(4,)]),
    (Bipartition(P(3), P(1)), [(3, 1), (4,)]),
    (Bipartition(P(2), P(2)), [(2, 2), (3, 1), (4,)]),
])
def test_pieri_examples(bp, want):
    assert parts(restrict_to_symmetric(bp)) == want


def test_sign_marked_restricts_like_underlying():
    a = restrict_to_symmetric(Bipartition(P(2), "+"))
    assert a == restrict_to_symmetric(Bipartition(P(2), P(2)))


@given(st.integers(0, 7).flatmap(lambda a: st.tuples(st.sampled_from(list(partitions(a)) or [()]), st.integers(0, 5))))
def test_pieri_matches_brute_force(args):
    lam, i = args
    bp = Bipartition(Partition(lam), P(i) if i else E)
    assert parts(restrict_to_symmetric(bp)) == sorted(pieri(lam, i))


def test_pieri_needs_single_row():
    with pytest.raises(UnsupportedShape):
        restrict_to_symmetric(Bipartition(P(2), P(1, 1)))


def test_branch_examples():
    assert branch(Bipartition(P(1), E)) == [Bipartition(E, E)]
    got = branch(Bipartition(P(3), P(1)))
    assert sorted(map(str, got)) == sorted(map(str, [Bipartition(P(2), P(1)), Bipartition(P(3), E)]))
    for n in range(5, 10):
        for i in range(3, n // 2 + 1):
            assert Bipartition(P(n - i, i - 1), E) in branch(Bipartition(P(n - i, i), E))


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.sampled_from(list(partitions(n))), st.integers(0, 4))))
def test_branch_conserves_size(args):
    lam, b = args
    bp = Bipartition(Partition(lam), P(*([b] if b else [])))
    for c in branch(bp):
        assert c.size == bp.size - 1


def test_base_case():
    assert admissible_bipartitions(4) == list(BASE_FOUR)
    assert len(BASE_FOUR) == 5


def test_n7_list():
    got = admissible_bipartitions(7)
    want = [Bipartition(P(7), E), Bipartition(P(6, 1), E), Bipartition(P(6), P(1)),
            Bipartition(P(5), P(2)), Bipartition(P(4), P(3))]
    assert sorted(map(str, got)) == sorted(map(str, want))


def test_n8_list():
    got = admissible_bipartitions(8)
    assert len(got) == 7
    assert Bipartition(P(4), "+") in got and Bipartition(P(4), "-") in got


@pytest.mark.parametrize("n", range(4, 13))
def test_counts(n):
    bps = admissible_bipartitions(n)
    assert len(bps) == module_count(n)
    assert module_count(n) == ((n + 3) // 2 if n % 2 else n // 2 + 3)
    for bp in bps:
        lam, mu = bp.underlying()
        total = len(lam) + (0 if bp.signed else len(mu))
        assert total <= 2


@pytest.mark.parametrize("n", range(5, 13))
def test_two_row_first_part_is_pruned(n):
    bps = admissible_bipartitions(n)
    for i in range(2, n // 2 + 1):
        assert Bipartition(P(n - i, i), E) not in bps


def test_module_count_examples():
    assert [module_count(n) for n in (4, 9, 10)] == [5, 6, 8]
    with pytest.raises(RankTooSmall):
        module_count(3)
    with pytest.raises(RankTooSmall):
        admissible_bipartitions(3)


@pytest.mark.parametrize("n", range(2, 9))
def test_coxeter_model(n):
    r = verify_coxeter_model(n)
    assert r.ok, r.failed
    assert (r.order_w, r.order_w_prime, r.order_h) == (2**n * math.factorial(n), 2 ** (n - 1) * math.factorial(n), math.factorial(n))


def test_coxeter_small_orders():
    r = verify_coxeter_model(2)
    assert (r.order_w, r.order_w_prime) == (8, 4)
    assert verify_coxeter_model(4).order_w == 384


def test_signed_permutation_basics():
    t = SignedPermutation.sign_flip(3, 2)
    s = SignedPermutation.reflection(3, 1, 2, plus=True)
    assert (t * t).is_identity() and (s * s).is_identity()
    assert s.images == (-2, -1, 3)
    assert (t * s).to_permutation().order() == 4


def test_bipartition_validation():
    with pytest.raises(ValueError):
        Bipartition(P(2), "x")
    with pytest.raises(ValueError):
        P(1, 2)
    assert Bipartition(P(3), "+").to_dict() == {"first": [3], "second": "+", "label": "([3],+)"}
