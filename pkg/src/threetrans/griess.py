"""Griess algebras spanned by the Ising vectors w^e(alpha) of a root system.

Computed straight from root coordinates (reflections are redone here, not
borrowed from the Fischer space) so that comparing against the Matsuo
quotient is a genuine cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, WrongSignMode
from .linalg import RationalMatrix, rank
from .matsuo import QuotientAlgebra
from .roots import RootSystem

SIGN_MODES = ("both", "minus_only")


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


@dataclass
class GriessPresentation:
    root_system: RootSystem
    signs: str
    spanning: list[tuple[int, str]]  # (positive root index, "-"/"+")

    @cached_property
    def _coords(self) -> list[tuple[int, ...]]:
        return [self.root_system.roots[a] for a, _ in self.spanning]

    @cached_property
    def _lookup(self) -> dict:
        return {(self.root_system.roots[a], e): k for k, (a, e) in enumerate(self.spanning)}

    @property
    def span_dim(self) -> int:
        return len(self.spanning)

    def _ip(self, a, b) -> int:
        s2 = self.root_system.scale ** 2
        v = _dot(a, b)
        assert v % s2 == 0
        return v // s2

    @cached_property
    def gram_w(self) -> RationalMatrix:
        """1/4 on equal labels, 1/32 when (alpha|beta) = +-1, else 0."""
        n = self.span_dim
        num = np.zeros((n, n), dtype=np.int64)
        for i, ((a, e), u) in enumerate(zip(self.spanning, self._coords)):
            for j, ((b, f), v) in enumerate(zip(self.spanning, self._coords)):
                if a == b:
                    num[i, j] = 8 if e == f else 0
                elif abs(self._ip(u, v)) == 1:
                    num[i, j] = 1
        return RationalMatrix(num, 32)

    @cached_property
    def d(self) -> int:
        return rank(self.gram_w)

    def product_w(self, i: int, j: int) -> dict[int, Fraction]:
        """w^e(alpha)_(1) w^f(beta) in the spanning coordinates."""
        (a, e), (b, f) = self.spanning[i], self.spanning[j]
        u, v = self._coords[i], self._coords[j]
        if a == b:
            return {i: Fraction(2)} if e == f else {}
        c = self._ip(u, v)
        if abs(c) != 1:
            return {}
        refl = tuple(y - c * x for x, y in zip(u, v))
        if not _positive(refl):
            refl = tuple(-x for x in refl)
        g = "+" if (e == "-") != (f == "-") else "-"  # -e*f
        k = self._lookup[(refl, g)]
        q = Fraction(1, 4)
        out: dict[int, Fraction] = {}
        for m, s in ((i, q), (j, q), (k, -q)):
            out[m] = out.get(m, 0) + s
        return {m: s for m, s in out.items() if s}


def _positive(v) -> bool:
    for x in v:
        if x:
            return x > 0
    return False


def build_griess(r: RootSystem, signs: str = "both") -> GriessPresentation:
    if signs not in SIGN_MODES:
        raise WrongSignMode(f"signs must be one of {SIGN_MODES}")
    eps = ("-", "+") if signs == "both" else ("-",)
    span = [(a, e) for a in range(r.num_positive) for e in eps]
    return GriessPresentation(r, signs, span)


def verify_quotient_isomorphism(g: GriessPresentation, q: QuotientAlgebra) -> bool:
    """Spanning vector k <-> Matsuo basis vector k preserves the form exactly
    and every product modulo the radical of the Matsuo form."""
    parent = q.parent
    if g.span_dim != parent.dim:
        raise DimensionMismatch(f"{g.span_dim} spanning vectors vs {parent.dim} basis vectors")
    if g.gram_w != parent.gram:
        return False
    if g.d != q.dim:
        return False
    proj = q.projection.numerator
    n = g.span_dim
    for i in range(n):
        for j in range(n):
            lhs = g.product_w(i, j)
            rhs = parent.product(i, j)
            if lhs == rhs:
                continue
            diff = {m: lhs.get(m, 0) - rhs.get(m, 0) for m in set(lhs) | set(rhs)}
            acc = np.zeros(proj.shape[0], dtype=object)
            for m, c in diff.items():
                if c:
                    acc = acc + proj[:, m].astype(object) * c
            if any(x != 0 for x in acc):
                return False
    return True


def eta_central_charge(g: GriessPresentation) -> Fraction:
    """2 (eta|eta) for eta = 4/(h+2) sum_alpha w^-(alpha)."""
    if g.signs != "minus_only":
        raise WrongSignMode("eta is defined on the minus-sign span")
    h = g.root_system.coxeter_number
    coeff = Fraction(4, h + 2)
    gram = g.gram_w
    total = Fraction(int(gram.numerator.sum()), gram.denominator)
    return 2 * coeff * coeff * total


def sigma_symmetric(g: GriessPresentation) -> bool:
    """sigma_e f == sigma_f e whenever (e|f) = 1/32 (both give the third point)."""
    n = g.span_dim
    for i in range(n):
        for j in range(i + 1, n):
            if g.gram_w[i, j] == Fraction(1, 32):
                third_ij = [m for m, c in g.product_w(i, j).items() if c < 0]
                third_ji = [m for m, c in g.product_w(j, i).items() if c < 0]
                if third_ij != third_ji:
                    return False
    return True
