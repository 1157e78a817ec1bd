from __future__ import annotations

from fractions import Fraction

import pytest

from oracles import frac_rank
from threetrans.errors import DimensionMismatch, WrongSignMode
from threetrans.fischer import from_f2_space, from_signed_roots, from_single_roots, orthogonal_space
from threetrans.griess import build_griess, eta_central_charge, sigma_symmetric, verify_quotient_isomorphism
from threetrans.linalg import nullspace
from threetrans.matsuo import build_matsuo, nondegenerate_quotient
from threetrans.roots import build_root_system

F = Fraction


def griess(f, n, signs="both"):
    return build_griess(build_root_system(f, n), signs)


def quotient(f, n, signs):
    r = build_root_system(f, n)
    fs = from_signed_roots(r) if signs == "both" else from_single_roots(r)
    return nondegenerate_quotient(build_matsuo(fs))


@pytest.mark.parametrize("f,n,signs,span,d", [
    ("A", 2, "minus_only", 3, 3),
    ("D", 5, "both", 40, 35),
    ("E", 8, "both", 240, 156),
])
def test_span_and_rank(f, n, signs, span, d):
    g = griess(f, n, signs)
    assert (g.span_dim, g.d) == (span, d)


def expected_d(f, n, signs):
    r = build_root_system(f, n)
    if signs == "minus_only":
        return r.num_positive
    if f == "A":
        return n * (n + 1)
    if f == "D":
        return n * (3 * n - 1) // 2
    return {6: 57, 7: 91, 8: 156}[n]


FAMILIES = [("A", n) for n in range(2, 7)] + [("D", n) for n in range(4, 7)] + [("E", 6), ("E", 7)]


@pytest.mark.parametrize("f,n", FAMILIES)
@pytest.mark.parametrize("signs", ["both", "minus_only"])
def test_d_column(f, n, signs):
    assert griess(f, n, signs).d == expected_d(f, n, signs)


def test_gram_rank_against_fraction_oracle():
    g = griess("D", 4)
    rows = [[F(int(x), 32) for x in row] for row in g.gram_w.numerator]
    assert frac_rank(rows) == g.d == 22


@pytest.mark.parametrize("f,n,signs,d", [
    ("A", 3, "minus_only", 6),
    ("E", 6, "both", 57),
    ("A", 4, "both", 20),
])
def test_quotient_isomorphism(f, n, signs, d):
    g = griess(f, n, signs)
    q = quotient(f, n, signs)
    assert q.dim == d
    assert verify_quotient_isomorphism(g, q)


def test_e8_minus_matches_orthogonal_quotient():
    g = griess("E", 8, "minus_only")
    q = quotient("E", 8, "minus_only")
    assert q.dim == 120 and verify_quotient_isomorphism(g, q)
    # the F2 construction of the same space has the same invariants
    assert nondegenerate_quotient(build_matsuo(from_f2_space(orthogonal_space(4, 1)))).dim == 120


def test_isomorphism_rejects_a_mismatched_quotient():
    g = griess("A", 3, "minus_only")
    with pytest.raises(DimensionMismatch):
        verify_quotient_isomorphism(g, quotient("A", 3, "both"))


def test_products_descend_to_quotient():
    g = griess("D", 4)
    n = g.span_dim
    gram = g.gram_w
    for v in nullspace(gram)[:4]:
        for w in range(0, n, 5):
            prod = [F(0)] * n
            for k, c in enumerate(v):
                if c:
                    for m, s in g.product_w(w, k).items():
                        prod[m] += c * s
            for u in range(n):
                assert sum(prod[m] * gram[m, u] for m in range(n) if prod[m]) == 0


@pytest.mark.parametrize("f,n,c", [("A", 2, F(6, 5)), ("E", 7, F(63, 10)), ("D", 8, F(7))])
def test_eta_central_charge(f, n, c):
    assert eta_central_charge(griess(f, n, "minus_only")) == c


def test_eta_requires_minus_span():
    with pytest.raises(WrongSignMode):
        eta_central_charge(griess("A", 2, "both"))


def test_bad_sign_mode():
    with pytest.raises(WrongSignMode):
        build_griess(build_root_system("A", 2), "plus")


@pytest.mark.parametrize("f,n", [("A", 4), ("D", 5), ("E", 6)])
def test_sigma_symmetry(f, n):
    assert sigma_symmetric(griess(f, n))
