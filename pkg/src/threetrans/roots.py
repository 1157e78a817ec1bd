"""Simply-laced root systems A_n, D_n, E_6, E_7, E_8 in integer coordinates."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

from .errors import UnsupportedRank

Vector = tuple[int, ...]


@dataclass(frozen=True)
class RootSystem:
    """Roots as integer vectors; the true inner product is dot / scale**2.

    roots[:N] are the positive roots in ascending lexicographic order and
    roots[N + i] == -roots[i].  Positive means first nonzero coordinate > 0.
    """

    family: str
    rank: int
    roots: tuple[Vector, ...]
    scale: int = 1
    _index: dict = field(default=None, repr=False, compare=False)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "_index", {r: i for i, r in enumerate(self.roots)})

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def num_positive(self) -> int:
        return len(self.roots) // 2

    @property
    def positives(self) -> range:
        return range(self.num_positive)

    @property
    def coxeter_number(self) -> int:
        return len(self.roots) // self.rank

    def index_of(self, v) -> int:
        return self._index[tuple(v)]

    def inner(self, i: int, j: int) -> int:
        a, b = self.roots[i], self.roots[j]
        s = sum(x * y for x, y in zip(a, b))
        q, r = divmod(s, self.scale * self.scale)
        assert r == 0
        return q

    def negate(self, i: int) -> int:
        n = self.num_positive
        return i + n if i < n else i - n

    def positive_rep(self, i: int) -> int:
        """|gamma|: the positive root among +-gamma."""
        return i if i < self.num_positive else i - self.num_positive

    def reflect(self, i: int, j: int) -> int:
        """Index of r_alpha(beta) = beta - (alpha|beta) alpha."""
        c = self.inner(i, j)
        a, b = self.roots[i], self.roots[j]
        return self._index[tuple(y - c * x for x, y in zip(a, b))]

    @cached_property
    def simple_roots(self) -> tuple[int, ...]:
        """Indecomposable positive roots, ordered by leading coordinate."""
        pos = self.roots[: self.num_positive]
        sums = {tuple(x + y for x, y in zip(a, b)) for a, b in itertools.combinations(pos, 2)}
        simple = [i for i, r in enumerate(pos) if r not in sums]
        return tuple(sorted(simple, key=lambda i: (_lead(pos[i]), pos[i])))

    def to_json(self) -> str:
        return json.dumps(
            {
                "family": self.family,
                "rank": self.rank,
                "scale": self.scale,
                "coxeter_number": self.coxeter_number,
                "num_positive": self.num_positive,
                "roots": [list(r) for r in self.roots],
            },
            sort_keys=True,
        )


def _lead(v: Vector) -> int:
    for k, x in enumerate(v):
        if x:
            return k
    return len(v)


def _is_positive(v: Vector) -> bool:
    for x in v:
        if x:
            return x > 0
    return False


def _assemble(family: str, rank: int, vectors, scale: int = 1) -> RootSystem:
    pos = sorted(v for v in set(vectors) if _is_positive(v))
    neg = [tuple(-x for x in v) for v in pos]
    return RootSystem(family, rank, tuple(pos) + tuple(neg), scale)


def _unit(n: int, i: int, c: int = 1) -> list[int]:
    v = [0] * n
    v[i] = c
    return v


def _type_a(n: int):
    m = n + 1
    for i, j in itertools.permutations(range(m), 2):
        v = [0] * m
        v[i], v[j] = 1, -1
        yield tuple(v)


def _type_d(n: int, c: int = 1):
    for i, j in itertools.combinations(range(n), 2):
        for si, sj in itertools.product((c, -c), repeat=2):
            v = [0] * n
            v[i], v[j] = si, sj
            yield tuple(v)


def _e8():
    # even coordinate system doubled: (+-2, +-2, 0^6) and (+-1)^8 with an
    # even number of minus signs; norm 8, so scale 2
    yield from _type_d(8, 2)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            yield signs


def _orthogonal_to(vectors, normals):
    for v in vectors:
        if all(sum(a * b for a, b in zip(v, w)) == 0 for w in normals):
            yield v


def build_root_system(family: str, rank: int) -> RootSystem:
    family = family.upper()
    if family == "A":
        if rank < 1:
            raise UnsupportedRank("A_n needs n >= 1")
        return _assemble("A", rank, _type_a(rank))
    if family == "D":
        if rank < 3:
            raise UnsupportedRank("D_n needs n >= 3")
        return _assemble("D", rank, _type_d(rank))
    if family == "E":
        if rank not in (6, 7, 8):
            raise UnsupportedRank("E_n needs n in 6..8")
        roots = list(_e8())
        normals = []
        if rank <= 7:
            normals.append((0, 0, 0, 0, 0, 0, 2, 2))  # e7 + e8
        if rank == 6:
            normals.append((0, 0, 0, 0, 0, 2, -2, 0))  # e6 - e7
        return _assemble("E", rank, _orthogonal_to(roots, normals), scale=2)
    raise UnsupportedRank(f"unknown family {family!r}")
