"""Top-weight bound h <= lam (k_H+8)|I_G| / ((k_G+8)|I_H|) and the data feeding it."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import RangeError, UnsupportedFamily

F = Fraction


@dataclass(frozen=True)
class BoundInstance:
    name: str
    I_G: int
    I_H: int
    k_G: int
    k_H: int
    lam: Fraction
    h_min: Fraction
    expected: Fraction | None = None

    def __post_init__(self):
        if min(self.I_G, self.I_H, self.k_G, self.k_H) <= 0 or self.lam <= 0:
            raise ValueError("all inputs must be positive")
        if self.I_H > self.I_G or self.k_H > self.k_G:
            raise ValueError("subspace cannot be larger than the ambient space")


def sigma_bound(i: BoundInstance) -> Fraction:
    return F(i.lam) * (i.k_H + 8) * i.I_G / ((i.k_G + 8) * i.I_H)


# ---------------------------------------------------------------------------
# top weights


@dataclass(frozen=True)
class TopWeightTable:
    family: str
    n: int
    entries: tuple[tuple[Fraction, int | None], ...]

    @property
    def weights(self) -> list[Fraction]:
        return [w for w, _ in self.entries]

    @property
    def max_weight(self) -> Fraction:
        return max(self.weights)


LATTICE = "V+sqrt2A"
COSET = "K(A,2)"

# weights of sigma-type modules of the coset algebra, by n
_COSET_WEIGHTS = {
    5: (F(0), F(3, 4), F(5, 4), F(3, 2)),
    7: (F(0), F(4, 5), F(7, 5), F(9, 5), F(2)),
}


def _lattice_entries(n: int) -> list[tuple[Fraction, int]]:
    out = [(F(0), 1), (F(1), n - 1)]
    for i in range(1, (n + 1) // 2):
        out.append((F(i * (n - i), n), math.comb(n, i)))
    if n % 2 == 0:
        half = (F(n, 4), math.comb(n, n // 2) // 2)
        out += [half, half]
    return out


def top_weight_table(family: str, n: int) -> TopWeightTable:
    """Lattice family: parameter n stands for the root lattice of A_{n-1}."""
    if family == LATTICE:
        if n < 2:
            raise UnsupportedFamily("lattice family needs n >= 2")
        return TopWeightTable(family, n, tuple(_lattice_entries(n)))
    if family == COSET:
        if n == 3:  # same algebra as the lattice case n = 3
            return TopWeightTable(family, n, tuple(_lattice_entries(3)))
        if n in _COSET_WEIGHTS:
            return TopWeightTable(family, n, tuple((w, None) for w in _COSET_WEIGHTS[n]))
        raise UnsupportedFamily(f"no tabulated top weights for {family} at n={n}")
    raise UnsupportedFamily(f"unknown family {family!r}")


# constants for the E-type lattice algebras; not derived here
LAMBDA_E6 = F(4, 3)
LAMBDA_E7 = F(3, 2)
LAMBDA_E8_COSET = F(3, 2)


def _cases() -> list[BoundInstance]:
    lam_a2 = top_weight_table(LATTICE, 3).max_weight
    lam_a3 = top_weight_table(LATTICE, 4).max_weight
    lam_a5 = top_weight_table(LATTICE, 6).max_weight
    lam_k5 = top_weight_table(COSET, 5).max_weight
    lam_k7 = top_weight_table(COSET, 7).max_weight
    t52c2 = BoundInstance("Thm5.2-Case2", 63, 28, 32, 12, lam_k7, F(3), F(9, 4))
    return [
        BoundInstance("Lemma4.7", 12, 6, 8, 4, lam_a2, F(3), F(3, 2)),
        BoundInstance("Thm5.1", 24, 12, 16, 8, lam_a3, F(2), F(4, 3)),
        BoundInstance("Thm5.2-Case1", 36, 15, 20, 8, lam_k5, F(3), F(72, 35)),
        t52c2,
        # weights of the E7 coset algebra are bounded by the previous case
        BoundInstance("Thm5.2-Case3", 120, 63, 56, 32, sigma_bound(t52c2), F(3), F(75, 28)),
        BoundInstance("Thm6.3-Case1", 72, 30, 40, 16, lam_a5, F(2), F(9, 5)),
        BoundInstance("Thm6.3-Case2", 126, 72, 64, 40, LAMBDA_E6, F(2), F(14, 9)),
        BoundInstance("Thm6.3-Case3", 136, 72, 72, 40, LAMBDA_E6, F(2), F(68, 45)),
        BoundInstance("Thm6.3-Case4", 255, 120, 128, 56, LAMBDA_E8_COSET, F(2), F(3, 2)),
        BoundInstance("Thm6.3-Case5", 240, 126, 112, 64, LAMBDA_E7, F(2), F(12, 7)),
        BoundInstance("Thm6.3-Case6", 496, 126, 240, 64, LAMBDA_E7, F(2), F(12, 7)),
    ]


CASES: tuple[BoundInstance, ...] = tuple(_cases())


@dataclass(frozen=True)
class CaseResult:
    case: BoundInstance
    bound: Fraction

    @property
    def matches(self) -> bool:
        return self.case.expected is None or self.bound == self.case.expected

    @property
    def contradiction(self) -> bool:
        return self.bound < self.case.h_min

    @property
    def ok(self) -> bool:
        return self.matches and self.contradiction

    def row(self) -> dict:
        c = self.case
        return {
            "case": c.name,
            "I_G": c.I_G,
            "I_H": c.I_H,
            "k_G": c.k_G,
            "k_H": c.k_H,
            "lambda": str(c.lam),
            "bound": str(self.bound),
            "expected": str(c.expected),
            "h_min": str(c.h_min),
            "verdict": "contradiction" if self.contradiction else "no contradiction",
            "matches": self.matches,
        }


def run_all_cases(cases=CASES) -> list[CaseResult]:
    return [CaseResult(c, sigma_bound(c)) for c in cases]


# ---------------------------------------------------------------------------
# lattice top weights h_{n,p,i}


def lattice_top_weight(n: int, p: int, i: int) -> Fraction:
    m = 2 * n * (n - 1)
    if n < 2 or not 1 <= i < m:
        raise RangeError(f"need n >= 2 and 1 <= i < {m}")
    return F((m * p + i) ** 2, 2 * m)


def is_integer_square(x) -> bool:
    """True iff x is the square of an integer."""
    x = F(x)
    if x.denominator != 1 or x < 0:
        return False
    r = math.isqrt(x.numerator)
    return r * r == x.numerator


def non_square_sweep(ns=range(4, 13), ps=range(-5, 6)) -> tuple[int, list[tuple[int, int, int]]]:
    """Brute force over (n, p, i); returns (checks made, offending triples)."""
    checks, bad = 0, []
    for n in ns:
        m = 2 * n * (n - 1)
        for p in ps:
            for i in range(1, m):
                checks += 1
                if is_integer_square(lattice_top_weight(n, p, i)):
                    bad.append((n, p, i))
    return checks, bad
