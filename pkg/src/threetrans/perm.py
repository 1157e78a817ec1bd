"""Permutations on {0..n-1} and permutation groups via Schreier-Sims.

Composition convention: (p * q)(x) == p(q(x)), i.e. q acts first.
"""
from __future__ import annotations

import math
from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

from .errors import NotInvolution


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("not a permutation")
        self.images = images

    @classmethod
    def _raw(cls, images: tuple[int, ...]) -> "Permutation":
        p = object.__new__(cls)
        p.images = images
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._raw(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        a = self.images
        return Permutation._raw(tuple(a[x] for x in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation._raw(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        out = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self, g: "Permutation") -> "Permutation":
        """g * self * g^-1."""
        return g * self * g.inverse()

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for s in range(self.degree):
            if seen[s]:
                continue
            cyc = []
            x = s
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self.images) if i != x]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


def element_order(p: Permutation) -> int:
    return p.order()


def conjugation_closure(seeds: Iterable[Permutation], gens: Sequence[Permutation] | None = None) -> list[Permutation]:
    """Smallest set containing `seeds` closed under conjugation by `gens`
    (default: the seeds themselves), in breadth-first discovery order."""
    seeds = list(seeds)
    for x in seeds:
        if not (x * x).is_identity():
            raise NotInvolution(f"{x!r} is not an involution")
    gens = seeds if gens is None else list(gens)
    invs = [g.inverse() for g in gens]
    out = list(dict.fromkeys(seeds))
    seen = set(out)
    todo = deque(out)
    while todo:
        x = todo.popleft()
        for g, gi in zip(gens, invs):
            y = g * x * gi
            if y not in seen:
                seen.add(y)
                out.append(y)
                todo.append(y)
    return out


class PermGroup:
    """Group generated by permutations of a common degree; BSGS built lazily."""

    def __init__(self, generators: Sequence[Permutation], degree: int | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for the trivial group")
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators of mixed degree")
        self.degree = degree
        self.generators = gens

    # orbits ---------------------------------------------------------------
    def orbit(self, point: int) -> list[int]:
        seen = {point}
        out = [point]
        for x in out:
            for g in self.generators:
                y = g.images[x]
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        return out

    def orbits(self) -> list[list[int]]:
        left = set(range(self.degree))
        out = []
        for p in range(self.degree):
            if p in left:
                orb = self.orbit(p)
                left.difference_update(orb)
                out.append(sorted(orb))
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree if self.degree else True

    # stabiliser chain -----------------------------------------------------
    @cached_property
    def _bsgs(self):
        return _schreier_sims(self.generators, self.degree)

    @property
    def base(self) -> list[int]:
        return list(self._bsgs[0])

    def order(self) -> int:
        return math.prod(len(t) for t in self._bsgs[2])

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        base, _, trans = self._bsgs
        h, level = _sift(p, base, trans)
        return level == len(base) and h.is_identity()


def group_order(g: PermGroup) -> int:
    return g.order()


def _first_moved(p: Permutation) -> int:
    for i, x in enumerate(p.images):
        if i != x:
            return i
    return -1


def _transversal(point: int, gens: list[Permutation], n: int) -> dict[int, Permutation]:
    trans = {point: Permutation.identity(n)}
    queue = [point]
    for x in queue:
        u = trans[x]
        for g in gens:
            y = g.images[x]
            if y not in trans:
                trans[y] = g * u
                queue.append(y)
    return trans


def _sift(g: Permutation, base: list[int], trans: list[dict], start: int = 0):
    for level in range(start, len(base)):
        b = g.images[base[level]]
        t = trans[level].get(b)
        if t is None:
            return g, level
        g = t.inverse() * g
    return g, len(base)


def _schreier_sims(generators: list[Permutation], n: int):
    """Deterministic Schreier-Sims; new base points are lowest moved points."""
    strong = [g for g in generators if not g.is_identity()]
    base: list[int] = []
    for g in strong:
        if all(g.images[b] == b for b in base):
            base.append(_first_moved(g))
    levels = len(base)
    gens_at = [[g for g in strong if all(g.images[b] == b for b in base[:i])] for i in range(levels)]
    trans = [_transversal(base[i], gens_at[i], n) for i in range(levels)]
    i = levels - 1
    while i >= 0:
        restart = None
        for beta in list(trans[i]):
            u = trans[i][beta]
            for s in gens_at[i]:
                sb = s.images[beta]
                h = trans[i][sb].inverse() * s * u
                if h.is_identity():
                    continue
                y, j = _sift(h, base, trans, i + 1)
                if j < len(base) or not y.is_identity():
                    if j == len(base):
                        base.append(_first_moved(y))
                        gens_at.append([])
                        trans.append({})
                    for lvl in range(i + 1, j + 1):
                        gens_at[lvl].append(y)
                        trans[lvl] = _transversal(base[lvl], gens_at[lvl], n)
                    restart = j
                    break
            if restart is not None:
                break
        i = restart if restart is not None else i - 1
    return base, gens_at, trans
