"""Bipartition bookkeeping for modules over the Coxeter groups of type B/D.

Covers the Pieri restriction to the symmetric group, the branching rule
W_n -> W_(n-1), the inductive admissibility sieve, and a signed-permutation
model that checks the Coxeter presentations.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

from .errors import RankTooSmall, UnsupportedShape
from .perm import Permutation, PermGroup


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x <= 0 for x in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"not a partition: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.parts)) + "]" if self.parts else "∅"


def P(*parts: int) -> Partition:
    return Partition(tuple(parts))


SIGN_MARKS = ("+", "-")


@dataclass(frozen=True)
class Bipartition:
    first: Partition
    second: Partition | str

    def __post_init__(self):
        if isinstance(self.second, str) and self.second not in SIGN_MARKS:
            raise ValueError("sign marker must be + or -")

    @property
    def signed(self) -> bool:
        return isinstance(self.second, str)

    def underlying(self) -> tuple[Partition, Partition]:
        if self.signed:
            return self.first, self.first
        return self.first, self.second  # type: ignore[return-value]

    @property
    def size(self) -> int:
        a, b = self.underlying()
        return a.size + b.size

    def __str__(self) -> str:
        return f"({self.first},{self.second})"

    def to_dict(self) -> dict:
        sec = self.second if self.signed else list(self.second.parts)  # type: ignore[union-attr]
        return {"first": list(self.first.parts), "second": sec, "label": str(self)}


def _horizontal_strips(lam: tuple[int, ...], i: int) -> Iterator[tuple[int, ...]]:
    """All nu containing lam with nu/lam a horizontal strip of i boxes."""
    rows = len(lam) + 1
    padded = list(lam) + [0]
    # nu_1 unbounded above; nu_r in [lam_r, lam_(r-1)] for r >= 2
    def rec(r: int, left: int, acc: list[int]):
        if r == rows:
            if left == 0:
                yield tuple(x for x in acc if x)
            return
        lo = padded[r]
        hi = padded[r] + left if r == 0 else min(padded[r - 1], padded[r] + left)
        for v in range(hi, lo - 1, -1):
            yield from rec(r + 1, left - (v - lo), acc + [v])

    yield from rec(0, i, [])


def restrict_to_symmetric(bp: Bipartition) -> list[Partition]:
    """Constituents of the restriction to S_n (Pieri rule, single-row second part).

    A sign-marked label restricts through its underlying (lam, lam)."""
    lam, mu = bp.underlying()
    if len(mu) >= 2:
        raise UnsupportedShape("second component must have at most one row")
    i = mu.size
    out = [Partition(nu) for nu in _horizontal_strips(lam.parts, i)]
    return sorted(out, reverse=True)


def _removable(parts: tuple[int, ...]) -> list[int]:
    r = len(parts)
    return [d for d in range(r) if d == r - 1 or parts[d] > parts[d + 1]]


def _lower(parts: tuple[int, ...], d: int) -> Partition:
    p = list(parts)
    p[d] -= 1
    return Partition(tuple(x for x in p if x))


def branch(bp: Bipartition) -> list[Bipartition]:
    """Restriction from W_n to W_(n-1): remove one corner box from either part."""
    lam, mu = bp.underlying()
    out = [Bipartition(_lower(lam.parts, d), mu) for d in _removable(lam.parts)]
    out += [Bipartition(lam, _lower(mu.parts, d)) for d in _removable(mu.parts)]
    return out


def _normal(lam: Partition, mu: Partition) -> tuple[Partition, Partition]:
    """Unordered label: (lam, mu) and (mu, lam) agree on the type-D subgroup."""
    return (lam, mu) if (lam.size, lam) >= (mu.size, mu) else (mu, lam)


def _partitions(n: int, max_parts: int) -> Iterator[Partition]:
    def rec(left: int, cap: int, k: int):
        if left == 0:
            yield ()
            return
        if k == 0:
            return
        for first in range(min(left, cap), 0, -1):
            for rest in rec(left - first, first, k - 1):
                yield (first,) + rest

    for parts in rec(n, n, max_parts):
        yield Partition(parts)


BASE_FOUR = (
    Bipartition(P(4), P()),
    Bipartition(P(3, 1), P()),
    Bipartition(P(3), P(1)),
    Bipartition(P(2), "+"),
    Bipartition(P(2), "-"),
)


def _sort_key(bp: Bipartition):
    lam, mu = bp.underlying()
    sign = 0 if not bp.signed else SIGN_MARKS.index(bp.second) + 1  # type: ignore[arg-type]
    return (mu.size, tuple(-x for x in lam.parts), tuple(-x for x in mu.parts), sign)


def admissible_bipartitions(n: int) -> list[Bipartition]:
    if n < 4:
        raise RankTooSmall("the sieve starts at n = 4")
    current = list(BASE_FOUR)
    for m in range(5, n + 1):
        ok = {_normal(*bp.underlying()) for bp in current}
        nxt = []
        for b in range(0, m // 2 + 1):
            a = m - b
            for lam in _partitions(a, 2):
                for mu in _partitions(b, 2 - len(lam)):
                    if (a, lam) < (b, mu):
                        continue
                    cand = Bipartition(lam, mu)
                    if all(_normal(*c.underlying()) in ok for c in branch(cand)):
                        if lam == mu:
                            nxt += [Bipartition(lam, s) for s in SIGN_MARKS]
                        else:
                            nxt.append(cand)
        current = nxt
    return sorted(current, key=_sort_key)


def module_count(n: int) -> int:
    if n < 4:
        raise RankTooSmall("defined for n >= 4")
    return (n + 3) // 2 if n % 2 else n // 2 + 3


# --------------------------------------------------------------------------
# signed permutations


@dataclass(frozen=True)
class SignedPermutation:
    """e_i -> sign * e_|img|, stored 1-based as signed images."""

    images: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def reflection(cls, n: int, i: int, j: int, plus: bool) -> "SignedPermutation":
        """Reflection in e_i - e_j (plus=False) or e_i + e_j (plus=True)."""
        img = list(range(1, n + 1))
        s = -1 if plus else 1
        img[i - 1], img[j - 1] = s * j, s * i
        return cls(tuple(img))

    @classmethod
    def sign_flip(cls, n: int, i: int) -> "SignedPermutation":
        img = list(range(1, n + 1))
        img[i - 1] = -i
        return cls(tuple(img))

    @property
    def n(self) -> int:
        return len(self.images)

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        out = []
        for x in other.images:
            y = self.images[abs(x) - 1]
            out.append(y if x > 0 else -y)
        return SignedPermutation(tuple(out))

    def __pow__(self, k: int) -> "SignedPermutation":
        out = SignedPermutation.identity(self.n)
        for _ in range(k):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def to_permutation(self) -> Permutation:
        """Action on the 2n points +e_1..+e_n, -e_1..-e_n."""
        n = self.n
        img = [0] * (2 * n)
        for i, x in enumerate(self.images):
            j = abs(x) - 1
            img[i] = j if x > 0 else j + n
            img[i + n] = j + n if x > 0 else j
        return Permutation(img)


@dataclass
class CoxeterReport:
    ok: bool
    n: int
    order_w: int
    order_w_prime: int
    order_h: int
    failed: str | None = None


def verify_coxeter_model(n: int) -> CoxeterReport:
    if not 2 <= n <= 10:
        raise ValueError("n must lie in 2..10")
    one = SignedPermutation.identity(n)
    t = SignedPermutation.sign_flip(n, 1)
    s = {i: SignedPermutation.reflection(n, i, i + 1, False) for i in range(1, n)}
    checks: list[tuple[str, bool]] = []

    def rel(name: str, lhs: SignedPermutation, rhs: SignedPermutation = one):
        checks.append((name, lhs == rhs))

    # type B presentation
    rel("t^2", t * t)
    for i in s:
        rel(f"s{i}^2", s[i] * s[i])
    if n >= 2:
        rel("(t s1)^4", (t * s[1]) ** 4)
    for i in s:
        if i > 1:
            rel(f"t s{i} = s{i} t", t * s[i], s[i] * t)
        if i + 1 in s:
            rel(f"braid s{i} s{i+1}", s[i] * s[i + 1] * s[i], s[i + 1] * s[i] * s[i + 1])
        for j in s:
            if j > i + 1:
                rel(f"s{i} s{j} commute", s[i] * s[j], s[j] * s[i])
    # type D generator u = t s1 t
    u = t * s[1] * t
    rel("u^2", u * u)
    if 2 in s:
        rel("u s2 u = s2 u s2", u * s[2] * u, s[2] * u * s[2])
    for i in s:
        if i != 2:
            rel(f"u s{i} = s{i} u", u * s[i], s[i] * u)
    tt = [t]
    for i in range(1, n):
        tt.append(s[i] * tt[-1] * s[i])
    uu = {1: u * s[1]}
    for i in range(2, n):
        uu[i] = s[i] * uu[i - 1] * s[i]
    for i in uu:
        rel(f"u{i} = t0 t{i}", uu[i], tt[0] * tt[i])
    # idempotent-derived relations, with s^-(e_i - e_j) the transposition and
    # s^+(e_i - e_j) the reflection in e_i + e_j
    roots = list(itertools.combinations(range(1, n + 1), 2))

    def sgen(root, plus: bool) -> SignedPermutation:
        return SignedPermutation.reflection(n, root[0], root[1], plus)

    def ip(a, b) -> int:
        va = {a[0]: 1, a[1]: -1}
        vb = {b[0]: 1, b[1]: -1}
        return sum(va.get(k, 0) * vb.get(k, 0) for k in set(va) | set(vb))

    def reflect(a, b):
        c = ip(a, b)
        v = {a[0]: 0, a[1]: 0, b[0]: 0, b[1]: 0}
        v[b[0]] += 1
        v[b[1]] -= 1
        v[a[0]] -= c
        v[a[1]] += c
        pos = [k for k, x in v.items() if x == 1]
        neg = [k for k, x in v.items() if x == -1]
        i, j = pos[0], neg[0]
        return (i, j) if i < j else (j, i)

    for a in roots:
        for e in (False, True):
            rel(f"s^{e}({a})^2", sgen(a, e) * sgen(a, e))
        rel(f"s+ s- commute at {a}", sgen(a, True) * sgen(a, False), sgen(a, False) * sgen(a, True))
        for b in roots:
            c = ip(a, b)
            for e, f in itertools.product((False, True), repeat=2):
                if c == 0 and a != b:
                    rel(f"orthogonal {a},{b} commute", sgen(a, e) * sgen(b, f), sgen(b, f) * sgen(a, e))
                elif abs(c) == 1:
                    g = reflect(a, b)
                    plus = e != f  # -e*f as a sign: + iff signs differ
                    rel(f"conjugate {a},{b}", sgen(a, f) * sgen(b, e) * sgen(a, f), sgen(g, plus))
    for i in range(1, n - 1):
        a, b = (i, i + 1), (i + 1, i + 2)
        rhs = sgen(a, False) * sgen(b, False) * sgen(a, True) * sgen(b, False) * sgen(a, False)
        rel(f"s+(a{i+1}) from a{i}", sgen(b, True), rhs)

    h = PermGroup([s[i].to_permutation() for i in s], degree=2 * n) if s else PermGroup([], degree=2 * n)
    w = PermGroup([t.to_permutation()] + [s[i].to_permutation() for i in s], degree=2 * n)
    wp = PermGroup([u.to_permutation()] + [s[i].to_permutation() for i in s], degree=2 * n)
    ow, owp, oh = w.order(), wp.order(), h.order()
    checks.append(("|W_n| = 2^n n!", ow == 2**n * math.factorial(n)))
    checks.append(("|W'_n| = 2^(n-1) n!", owp == 2 ** (n - 1) * math.factorial(n)))
    checks.append(("|H_n| = n!", oh == math.factorial(n)))
    failed = next((name for name, ok in checks if not ok), None)
    return CoxeterReport(failed is None, n, ow, owp, oh, failed)
