"""Matsuo algebras B(I) over Q and their non-degenerate quotients.

Basis x^i, one per point.  Products: x^i x^i = 2 x^i; for collinear i, j
x^i x^j = (x^i + x^j - x^(i o j)) / 4; otherwise 0.  Form: (x^i|x^i) = 1/4,
1/32 on collinear pairs, 0 otherwise.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _intmat
from .errors import NotRegular, RadicalNotIdeal, TauMissing
from .fischer import FischerSpace, valency
from .linalg import Inertia, RationalMatrix, inertia, nullspace_matrix, rank, rref

GRAM_SCALE = 32  # 32 * Gram = 8 I + A
PROD_SCALE = 4


class FormClass(str, enum.Enum):
    POSITIVE_DEFINITE = "positive_definite"
    PSD_SINGULAR = "psd_singular"
    INDEFINITE = "indefinite"


@dataclass
class MatsuoAlgebra:
    space: FischerSpace
    overrides: dict = field(default_factory=dict)  # (i, j) -> {m: Fraction}

    @property
    def dim(self) -> int:
        return self.space.n

    @cached_property
    def gram_int(self) -> np.ndarray:
        n = self.dim
        return 8 * np.eye(n, dtype=np.int64) + self.space.adjacency.astype(np.int64)

    @cached_property
    def gram(self) -> RationalMatrix:
        return RationalMatrix(self.gram_int, GRAM_SCALE)

    def product(self, i: int, j: int) -> dict[int, Fraction]:
        """x^i x^j as a sparse vector."""
        if (i, j) in self.overrides:
            return {m: Fraction(c) for m, c in self.overrides[(i, j)].items() if c}
        if i == j:
            return {i: Fraction(2)}
        if not self.space.adjacency[i, j]:
            return {}
        k = int(self.space.require_tau()[i, j])
        q = Fraction(1, 4)
        return {i: q, j: q, k: -q}

    def perturbed(self, i: int, j: int, m: int, delta) -> "MatsuoAlgebra":
        """Copy whose x^i x^j has its x^m coefficient shifted by delta."""
        vec = dict(self.product(i, j))
        vec[m] = vec.get(m, Fraction(0)) + Fraction(delta)
        ov = dict(self.overrides)
        ov[(i, j)] = vec
        return MatsuoAlgebra(self.space, ov)

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        u = np.array([Fraction(x) for x in u], dtype=object)
        v = np.array([Fraction(x) for x in v], dtype=object)
        return Fraction(u @ self.gram_int.astype(object) @ v) / GRAM_SCALE

    def multiply(self, u: Sequence, v: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        nu = [(i, Fraction(x)) for i, x in enumerate(u) if x]
        nv = [(j, Fraction(y)) for j, y in enumerate(v) if y]
        for i, a in nu:
            for j, b in nv:
                for m, c in self.product(i, j).items():
                    out[m] += a * b * c
        return out

    # dense sparse-term table --------------------------------------------
    def product_table(self) -> tuple[np.ndarray, np.ndarray, int]:
        """(idx, coef, scale): x^i x^j = sum_t coef[i,j,t]/scale x^idx[i,j,t].

        Terms are sorted by index with padding idx = -1, coef = 0.  This is
        n*n*K integers, not a dense structure-constant cube.
        """
        n = self.dim
        tau = self.space.require_tau().astype(np.int64)
        adj = self.space.adjacency
        width = max([3] + [len(v) for v in self.overrides.values()])
        scale = PROD_SCALE
        for v in self.overrides.values():
            for c in v.values():
                scale = scale * Fraction(c).denominator // math.gcd(scale, Fraction(c).denominator)
        mult = scale // PROD_SCALE
        idx = np.full((n, n, width), -1, dtype=np.int64)
        coef = np.zeros((n, n, width), dtype=np.int64)
        ii, jj = np.nonzero(adj)
        kk = tau[ii, jj]
        # sort the three indices per pair
        trio = np.stack([ii, jj, kk], axis=1)
        trio_c = np.stack([np.ones_like(ii), np.ones_like(ii), -np.ones_like(ii)], axis=1) * mult
        order = np.argsort(trio, axis=1)
        idx[ii, jj, :3] = np.take_along_axis(trio, order, axis=1)
        coef[ii, jj, :3] = np.take_along_axis(trio_c, order, axis=1)
        d = np.arange(n)
        idx[d, d, 0] = d
        coef[d, d, 0] = 2 * scale
        for (i, j), vec in self.overrides.items():
            terms = sorted((m, Fraction(c)) for m, c in vec.items() if c)
            idx[i, j, :] = -1
            coef[i, j, :] = 0
            for t, (m, c) in enumerate(terms):
                idx[i, j, t] = m
                coef[i, j, t] = int(c * scale)
        return idx, coef, scale


def build_matsuo(fs: FischerSpace) -> MatsuoAlgebra:
    return MatsuoAlgebra(fs)


# --------------------------------------------------------------------------
# axioms


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    violation: str | None = None
    where: tuple | None = None
    triples_checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def check_axioms(a: MatsuoAlgebra) -> AxiomReport:
    """Exhaustive over every basis triple.

    Invariance (x^i x^j | x^l) == (x^i | x^j x^l) is checked one j at a time
    as two n x n integer matrices, so the cost is O(n^3) with no dense
    structure-constant cube.  Also: idempotents x^i / 2, form values, and
    every tau_i acting as an automorphism of product and form.
    """
    n = a.dim
    g = a.gram_int
    if not np.array_equal(g, g.T):
        return AxiomReport(False, "form not symmetric")
    if np.any(np.diag(g) != 8) or np.any((g != 0) & (g != 1) & ~np.eye(n, dtype=bool)):
        return AxiomReport(False, "form values outside 1/4, 1/32, 0")
    idx, coef, scale = a.product_table()
    d = np.arange(n)
    diag_ok = (idx[d, d, 0] == d) & (coef[d, d, 0] == 2 * scale) & (coef[d, d, 1:] == 0).all(axis=1)
    if not diag_ok.all():
        i = int(np.flatnonzero(~diag_ok)[0])
        return AxiomReport(False, "x^i/2 is not idempotent", (i,))
    safe = np.maximum(idx, 0)
    c32 = coef.astype(np.int32) if np.abs(coef).max() < 1 << 20 else coef
    g = g.astype(c32.dtype)
    best = None
    for j in range(n):
        # lhs[i, l] = (x^i x^j | x^l)
        lhs = c32[:, j, 0][:, None] * g[safe[:, j, 0], :]
        for t in range(1, idx.shape[2]):
            lhs += c32[:, j, t][:, None] * g[safe[:, j, t], :]
        # rhs[i, l] = (x^i | x^j x^l)
        rhs = g[:, safe[j, :, 0]] * c32[j, :, 0][None, :]
        for t in range(1, idx.shape[2]):
            rhs += g[:, safe[j, :, t]] * c32[j, :, t][None, :]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            i, l = (int(x) for x in bad[0])
            cand = (i, j, l)
            if best is None or cand < best:
                best = cand
    if best is not None:
        return AxiomReport(False, "form is not invariant", best, n**3)
    if a.space.tau is not None:
        where = _check_rho(a)
        if where is not None:
            return AxiomReport(False, "tau_i does not act as an algebra automorphism", where, n**3)
    return AxiomReport(True, None, None, n**3)


def _check_rho(a: MatsuoAlgebra):
    """First (i,) or (i, a, b) where tau_i fails to preserve form or product.

    Outside overridden pairs the product is fixed by adjacency and the third
    point, so rho(i) preserves it iff tau_i preserves adjacency and maps
    third points to third points.  Overridden pairs (and their images) are
    compared term by term.
    """
    n = a.dim
    adj = a.space.adjacency
    tau = a.space.require_tau().astype(np.int64)
    ii, jj = np.nonzero(adj)
    kk = tau[ii, jj]
    special = set(a.overrides)
    if special:
        mask = np.array([(x, y) not in special for x, y in zip(ii.tolist(), jj.tolist())], dtype=bool)
    for i in range(n):
        p = a.space.tau_images(i)
        if not np.array_equal(adj[np.ix_(p, p)], adj):
            return (i,)
        ok = tau[p[ii], p[jj]] == p[kk]
        if special:
            img_special = np.array([(int(p[x]), int(p[y])) in special for x, y in zip(ii, jj)], dtype=bool)
            ok |= ~mask | img_special  # compared explicitly below
        if not ok.all():
            w = int(np.flatnonzero(~ok)[0])
            return (i, int(ii[w]), int(jj[w]))
        pairs = set(special) | {(int(p[x]), int(p[y])) for x, y in special}
        for x, y in sorted(pairs):
            lhs = {int(p[m]): c for m, c in a.product(x, y).items()}
            if lhs != a.product(int(p[x]), int(p[y])):
                return (i, x, y)
    return None


def conformal_vector(a: MatsuoAlgebra) -> list[Fraction]:
    k = valency(a.space)
    s = Fraction(8, k + 8)
    return [s] * a.dim


def central_charge(a: MatsuoAlgebra) -> Fraction:
    """2 (w|w) for w = 8/(k+8) sum_i x^i."""
    k = valency(a.space)
    s = Fraction(8, k + 8)
    total = int(a.gram_int.sum())
    return 2 * s * s * Fraction(total, GRAM_SCALE)


def conformal_check(a: MatsuoAlgebra) -> bool:
    """w x^i == 2 x^i for every basis vector."""
    k = valency(a.space)
    idx, coef, scale = a.product_table()
    n = a.dim
    for i in range(n):
        acc = np.zeros(n + 1, dtype=np.int64)
        np.add.at(acc, np.where(idx[:, i, :] < 0, n, idx[:, i, :]).ravel(), coef[:, i, :].ravel())
        vec = acc[:n] * Fraction(8, k + 8) / scale
        expect = np.zeros(n, dtype=object)
        expect[i] = 2
        if any(Fraction(x) != Fraction(y) for x, y in zip(vec, expect)):
            return False
    return True


# --------------------------------------------------------------------------
# quotient


@dataclass
class QuotientAlgebra:
    """B / rad(B), presented on the section spanned by pivot basis vectors."""

    parent: MatsuoAlgebra
    pivots: tuple[int, ...]
    projection: RationalMatrix  # d x n; kernel = radical
    gram: RationalMatrix  # d x d, non-singular

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def project(self, vec: dict[int, Fraction] | Sequence) -> list[Fraction]:
        if not isinstance(vec, dict):
            vec = {i: Fraction(x) for i, x in enumerate(vec) if x}
        out = [Fraction(0)] * self.dim
        for m, c in vec.items():
            for r in range(self.dim):
                e = self.projection[r, m]
                if e:
                    out[r] += c * e
        return out

    def product(self, p: int, q: int) -> list[Fraction]:
        return self.project(self.parent.product(self.pivots[p], self.pivots[q]))


def radical_ideal_violation(a: MatsuoAlgebra, points: Sequence[int]) -> int | None:
    """First basis index i in `points` with x^i * rad not inside rad."""
    kern = nullspace_matrix(a.gram)
    if kern.cols == 0:
        return None
    v = kern.numerator
    g = a.gram_int
    idx, coef, _ = a.product_table()
    n = a.dim
    for i in points:
        lv = np.zeros((n + 1, v.shape[1]), dtype=object if v.dtype == object else np.int64)
        rows = np.where(idx[i] < 0, n, idx[i])  # (c, t) -> m
        for t in range(idx.shape[2]):
            np.add.at(lv, rows[:, t], coef[i, :, t][:, None] * v)
        prod = _intmat.exact_matmul(g, _intmat.as_int_array(lv[:n]))
        if _intmat.max_abs(prod):
            return int(i)
    return None


EXHAUSTIVE_RADICAL_LIMIT = 260


def nondegenerate_quotient(a: MatsuoAlgebra, exhaustive: bool | None = None) -> QuotientAlgebra:
    """Quotient by the radical of the form.

    The radical is checked to be an ideal for every basis vector when the
    algebra is small (or exhaustive=True); otherwise for one point per orbit
    of the tau-group, which suffices because each tau_i acts as an
    automorphism of product and form (see check_axioms).
    """
    if exhaustive is None:
        exhaustive = a.dim <= EXHAUSTIVE_RADICAL_LIMIT
    if exhaustive or a.space.tau is None:
        points = range(a.dim)
    else:
        points = [orb[0] for orb in a.space.tau_group().orbits()]
    bad = radical_ideal_violation(a, points)
    if bad is not None:
        raise RadicalNotIdeal(f"x^{bad} times the radical leaves the radical")
    ech = rref(a.gram)
    piv = ech.pivots
    return QuotientAlgebra(a, piv, ech.matrix, a.gram.submatrix(piv, piv))


def radical_dim(a: MatsuoAlgebra) -> int:
    """Nullity of the Gram matrix; works on adjacency-only shells too."""
    return a.dim - rank(a.gram)


def quotient_dimension(a: MatsuoAlgebra) -> int:
    return rank(a.gram)


# --------------------------------------------------------------------------
# form classification


SPECTRAL_LIMIT = 260


def gram_spectrum(a: MatsuoAlgebra) -> list[tuple[Fraction, int]] | None:
    """Gram eigenvalues (8 + theta)/32 from a claimed adjacency spectrum."""
    claim = a.space.claimed_spectrum
    if claim is None:
        return None
    return [(Fraction(8 + th, GRAM_SCALE), mu) for th, mu in claim]


def gram_inertia(a: MatsuoAlgebra, method: str = "auto") -> Inertia:
    """method: "congruence", "spectrum" (certified claim) or "auto"."""
    spec = gram_spectrum(a)
    if method == "spectrum" or (method == "auto" and spec is not None and a.dim > SPECTRAL_LIMIT):
        if spec is None:
            raise ValueError("no claimed spectrum for this space")
        return inertia(a.gram, spectrum=spec)
    return inertia(a.gram)


def form_class(iner: Inertia) -> FormClass:
    if iner.negative:
        return FormClass.INDEFINITE
    if iner.zero:
        return FormClass.PSD_SINGULAR
    return FormClass.POSITIVE_DEFINITE


def classify_form(a: MatsuoAlgebra, method: str = "auto") -> FormClass:
    return form_class(gram_inertia(a, method))
