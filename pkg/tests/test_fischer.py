from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from threetrans.errors import DegenerateForm, NotRegular, TauMissing, UnsupportedShape
from threetrans.fischer import (
    F2QuadraticSpace,
    FischerSpace,
    affine_plane3,
    check_3transposition,
    disjoint_union,
    f2_spectrum,
    from_f2_space,
    from_signed_roots,
    from_single_roots,
    is_symplectic_type,
    orthogonal_space,
    srg_parameters,
    symplectic_space,
    symplectic_violation,
    tensor_shell,
    valency,
)
from threetrans.linalg import RationalMatrix, verify_spectrum
from threetrans.roots import build_root_system


def signed(f, n):
    return from_signed_roots(build_root_system(f, n))


def single(f, n):
    return from_single_roots(build_root_system(f, n))


def adj_matrix(fs):
    return RationalMatrix(fs.adjacency.astype(np.int64))


# --- constructions --------------------------------------------------------------


def test_signed_examples():
    a1 = signed("A", 1)
    assert a1.n == 2 and not a1.adjacency.any() and not a1.is_connected()
    a2 = signed("A", 2)
    assert a2.n == 6 and valency(a2) == 4 and a2.is_connected()
    e8 = signed("E", 8)
    assert (e8.n, valency(e8)) == (240, 112)


def test_signed_point_order():
    fs = signed("A", 2)
    assert fs.points[:4] == [(0, "-"), (0, "+"), (1, "-"), (1, "+")]


def test_single_examples():
    a2 = single("A", 2)
    assert a2.n == 3 and a2.adjacency.sum() == 6
    assert (single("D", 4).n, valency(single("D", 4))) == (12, 8)
    assert (single("E", 7).n, valency(single("E", 7))) == (63, 32)


def test_single_is_minus_part_of_signed():
    for f, n in [("A", 3), ("D", 5), ("E", 6)]:
        s, m = signed(f, n), single(f, n)
        minus = [i for i, p in enumerate(s.points) if p[1] == "-"]
        sub = s.induced(minus)
        assert np.array_equal(sub.adjacency, m.adjacency)
        assert np.array_equal(sub.tau, m.tau)


def test_f2_examples():
    sp6 = from_f2_space(symplectic_space(3))
    assert (sp6.n, valency(sp6)) == (63, 32)
    om6 = from_f2_space(orthogonal_space(3, -1))
    assert (om6.n, valency(om6)) == (36, 20)
    op10 = from_f2_space(orthogonal_space(5, 1))
    assert (op10.n, valency(op10)) == (496, 240)


@pytest.mark.parametrize("kind,n", [("sp", 2), ("sp", 3), ("sp", 4), ("o+", 3), ("o+", 4), ("o-", 3), ("o-", 4), ("o+", 5), ("o-", 5)])
def test_f2_counts_match_table(kind, n):
    sp = symplectic_space(n) if kind == "sp" else orthogonal_space(n, 1 if kind == "o+" else -1)
    fs = from_f2_space(sp)
    v, k, r, s = srg_parameters(kind, n)
    assert fs.n == v and valency(fs) == k
    if fs.n <= 300:
        assert verify_spectrum(adj_matrix(fs), f2_spectrum(kind, n))


def test_degenerate_forms_rejected():
    with pytest.raises(DegenerateForm):
        F2QuadraticSpace(2, np.zeros((2, 2), dtype=np.uint8))
    b = np.array([[0, 1], [1, 0]])
    with pytest.raises(DegenerateForm):
        F2QuadraticSpace(2, b, np.array([[1, 0], [0, 0]]))  # polarises to zero


def test_witt_types():
    for n in range(1, 5):
        for sign in (1, -1):
            assert orthogonal_space(n, sign).witt_sign() == sign


# --- shells ------------------------------------------------------------------------


def test_shell_of_s4_is_single_d4():
    a3 = build_root_system("A", 3)
    base = from_single_roots(a3)
    shell = tensor_shell(base, 1)
    d4 = build_root_system("D", 4)
    target = from_single_roots(d4)
    assert shell.n == 12 and valency(shell) == 8
    # explicit relabelling: copy 0 -> e_i - e_j, copy 1 -> e_i + e_j
    perm = []
    for c, p in shell.points:
        v = a3.roots[p]
        i, j = v.index(1), v.index(-1)
        w = [0] * 4
        w[i] = 1
        w[j] = -1 if c == 0 else 1
        if w[min(i, j)] < 0:
            w = [-x for x in w]
        perm.append(d4.index_of(w))
    assert sorted(perm) == list(range(12))
    assert np.array_equal(target.adjacency[np.ix_(perm, perm)], shell.adjacency)


def test_shell_spectrum_f4_cubed():
    base = single("A", 3)
    base.claimed_spectrum = [(4, 1), (0, 3), (-2, 2)]
    shell = tensor_shell(base, 3)
    assert shell.n == 48 and shell.tau is None
    assert verify_spectrum(adj_matrix(shell), [(32, 1), (0, 3 + 42), (-16, 2)])
    assert shell.claimed_spectrum == [(32, 1), (0, 45), (-16, 2)]


def test_shell_needs_positive_m():
    with pytest.raises(UnsupportedShape):
        tensor_shell(single("A", 3), 0)


@given(st.sampled_from([("sp", 2), ("o-", 3), ("o+", 3)]), st.integers(1, 3))
def test_shell_spectrum_scales(base_kind, m):
    kind, n = base_kind
    sp = symplectic_space(n) if kind == "sp" else orthogonal_space(n, 1 if kind == "o+" else -1)
    shell = tensor_shell(from_f2_space(sp), m)
    assert verify_spectrum(adj_matrix(shell), shell.claimed_spectrum)
    scaled = {(1 << m) * th for th, _ in f2_spectrum(kind, n)}
    assert {th for th, _ in shell.claimed_spectrum} == scaled | {0}


# --- axioms ------------------------------------------------------------------------


AXIOM_SPACES = [
    lambda: single("A", 3),
    lambda: single("A", 5),
    lambda: signed("A", 3),
    lambda: single("D", 5),
    lambda: signed("D", 4),
    lambda: signed("E", 6),
    lambda: single("E", 7),
    lambda: from_f2_space(symplectic_space(3)),
    lambda: from_f2_space(orthogonal_space(3, -1)),
    lambda: from_f2_space(orthogonal_space(4, 1)),
]


@pytest.mark.parametrize("make", AXIOM_SPACES)
def test_axioms_hold(make):
    fs = make()
    assert check_3transposition(fs).ok
    assert is_symplectic_type(fs)


def test_adversarial_tau_fails():
    fs = single("A", 3)
    tau = fs.tau.copy()
    i, j = map(int, np.argwhere(fs.adjacency)[0])
    bad = int(np.flatnonzero(~fs.adjacency[i] & (np.arange(fs.n) != i))[0])
    tau[i, j] = tau[j, i] = bad
    rep = check_3transposition(FischerSpace(fs.points, fs.adjacency, tau, {"name": "broken"}))
    assert not rep.ok and rep.where == (i, j)


def test_affine_plane_is_not_symplectic():
    ag = affine_plane3()
    assert check_3transposition(ag).ok
    assert not is_symplectic_type(ag)
    assert symplectic_violation(ag) is not None


def test_tau_required():
    shell = tensor_shell(single("A", 2), 1)
    with pytest.raises(TauMissing):
        check_3transposition(shell)
    with pytest.raises(TauMissing):
        is_symplectic_type(shell)


def test_connectivity_and_valency():
    assert signed("A", 2).is_connected()
    u = disjoint_union(signed("A", 2), signed("A", 2))
    assert not u.is_connected()
    for n in range(2, 8):
        assert valency(single("A", n)) == 2 * (n - 1)
    assert valency(signed("D", 6)) == 32
    assert valency(from_f2_space(orthogonal_space(4, -1))) == 72
    with pytest.raises(NotRegular):
        valency(disjoint_union(single("A", 2), single("A", 3)))


@pytest.mark.parametrize("make", AXIOM_SPACES[:8])
def test_tau_group_transitive(make):
    fs = make()
    assert fs.is_connected() and fs.tau_group().is_transitive()


def test_json_round_trip():
    fs = signed("D", 4)
    doc = fs.to_dict()
    assert set(doc) == {"version", "family_tag", "points", "edges", "tau"}
    assert doc["edges"] == sorted(doc["edges"])
    back = FischerSpace.from_json(fs.to_json())
    assert back.points == fs.points
    assert np.array_equal(back.adjacency, fs.adjacency)
    assert np.array_equal(back.tau, fs.tau)
    shell = tensor_shell(single("A", 2), 1)
    assert FischerSpace.from_json(shell.to_json()).tau is None


@given(st.sampled_from(AXIOM_SPACES[:6]), st.data())
def test_third_point_lies_on_line(make, data):
    fs = make()
    i = data.draw(st.integers(0, fs.n - 1))
    nb = fs.neighbors(i)
    j = int(data.draw(st.sampled_from(list(nb))))
    k = int(fs.tau[i, j])
    assert fs.adjacency[k, i] and fs.adjacency[k, j]
    assert {int(fs.tau[i, k]), int(fs.tau[j, k])} == {j, i}
