"""Exact rational matrices: rank, kernel, inertia and spectrum certificates.

Entries are stored as an integer numerator array over one positive common
denominator, so a 2000x2000 Gram matrix costs an int64 array rather than four
million Fraction objects.  Entry access hands back `fractions.Fraction`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _intmat
from .errors import MultiplicityMismatch, NonSymmetric

Rational = Fraction


def rat(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def fmt(q) -> str:
    return str(rat(q))


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _gcd_array(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        g = 0
        for x in a.flat:
            g = math.gcd(g, int(x))
            if g == 1:
                break
        return g
    return int(np.gcd.reduce(np.abs(a).ravel()))


class RationalMatrix:
    """Immutable dense rational matrix (num / den with den > 0)."""

    __slots__ = ("_num", "_den", "__dict__")

    def __init__(self, num: np.ndarray, den: int = 1):
        num = _intmat.as_int_array(num)
        if num.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(_gcd_array(num), den)
        if g > 1:
            num = num // g
            den //= g
        num.setflags(write=False)
        self._num = num
        self._den = den

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [[rat(x) for x in row] for row in rows]
        if not rows:
            return cls(np.zeros((0, 0), dtype=np.int64))
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        den = _lcm(x.denominator for r in rows for x in r)
        num = np.array([[x.numerator * (den // x.denominator) for x in r] for r in rows], dtype=object)
        return cls(num.reshape(len(rows), width), den)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64))

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self._num.shape

    @property
    def rows(self) -> int:
        return self._num.shape[0]

    @property
    def cols(self) -> int:
        return self._num.shape[1]

    @property
    def numerator(self) -> np.ndarray:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return Fraction(int(self._num[i, j]), self._den)

    def tolist(self) -> list[list[Fraction]]:
        d = self._den
        return [[Fraction(int(x), d) for x in row] for row in self._num]

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.tolist()]

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, den={self._den})"

    # arithmetic ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.shape != other.shape or self._den != other._den:
            return False
        return bool(np.array_equal(self._num, other._num))

    __hash__ = None  # type: ignore[assignment]

    def _aligned(self, other: "RationalMatrix"):
        den = self._den * other._den // math.gcd(self._den, other._den)
        a = self._num * (den // self._den)
        b = other._num * (den // other._den)
        if a.dtype != b.dtype:
            a, b = a.astype(object), b.astype(object)
        return a, b, den

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        a, b, den = self._aligned(other)
        return RationalMatrix(a + b, den)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        a, b, den = self._aligned(other)
        return RationalMatrix(a - b, den)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(-self._num, self._den)

    def scale(self, q) -> "RationalMatrix":
        q = rat(q)
        return RationalMatrix(_safe_mul(self._num, q.numerator), self._den * q.denominator)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        return RationalMatrix(_intmat.exact_matmul(self._num, other._num), self._den * other._den)

    def shift(self, theta) -> "RationalMatrix":
        """self - theta * Id."""
        if self.rows != self.cols:
            raise ValueError("square matrix required")
        theta = rat(theta)
        den = _lcm([self._den, theta.denominator])
        num = _safe_mul(self._num, den // self._den)
        diag = theta.numerator * (den // theta.denominator)
        num = num.astype(object) if abs(diag) >= 1 << 60 else num.copy()
        num[np.diag_indices(self.rows)] -= diag
        return RationalMatrix(num, den)

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(self._num.T.copy(), self._den)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix(self._num[np.ix_(list(rows), list(cols))], self._den)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and bool(np.array_equal(self._num, self._num.T))

    def trace(self) -> Fraction:
        return Fraction(sum(int(x) for x in self._num.diagonal()), self._den)

    # cached analyses ----------------------------------------------------
    @cached_property
    def _echelon(self):
        piv, num, den = _intmat.rref_int(self._num)
        return tuple(piv), num, den


def _safe_mul(a: np.ndarray, k: int) -> np.ndarray:
    if a.dtype != object and _intmat.max_abs(a) * abs(k) < (1 << 62):
        return a * k
    return a.astype(object) * k


@dataclass(frozen=True)
class Inertia:
    positive: int
    zero: int
    negative: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.positive, self.zero, self.negative)


@dataclass(frozen=True)
class Echelon:
    pivots: tuple[int, ...]
    matrix: RationalMatrix  # rank x cols, identity on the pivot columns


def rref(m: RationalMatrix) -> Echelon:
    """Canonical reduced row echelon form; pivots are the leading columns."""
    piv, num, den = m._echelon
    if not piv:
        return Echelon((), RationalMatrix.zeros(0, m.cols))
    return Echelon(piv, RationalMatrix(num, den))


def rank(m: RationalMatrix) -> int:
    return len(m._echelon[0])


def nullspace(m: RationalMatrix) -> list[list[Fraction]]:
    """Kernel basis in reduced echelon form: one vector per free column,
    with a 1 in that column and zeros in the other free columns."""
    piv, num, den = m._echelon
    pivset = set(piv)
    free = [j for j in range(m.cols) if j not in pivset]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, p in enumerate(piv):
            x = num[r, f]
            if x:
                v[p] = -Fraction(int(x), den)
        basis.append(v)
    return basis


def nullspace_matrix(m: RationalMatrix) -> RationalMatrix:
    """Kernel basis as the columns of a cols x nullity matrix."""
    piv, num, den = m._echelon
    pivset = set(piv)
    free = [j for j in range(m.cols) if j not in pivset]
    out = np.zeros((m.cols, len(free)), dtype=num.dtype if num.size else np.int64)
    for k, f in enumerate(free):
        out[f, k] = den
        for r, p in enumerate(piv):
            out[p, k] = -num[r, f]
    return RationalMatrix(out, den)


# --------------------------------------------------------------------------
# inertia


def _check_symmetric(m: RationalMatrix) -> None:
    if not m.is_symmetric():
        raise NonSymmetric("matrix is not symmetric")


CORE_THRESHOLD = 64


def inertia(m: RationalMatrix, spectrum: Sequence[tuple] | None = None) -> Inertia:
    """Sylvester inertia by exact congruence.

    With `spectrum` (pairs theta, multiplicity) the claim is first certified
    by `verify_spectrum` and the signs are read off the eigenvalues.
    Larger matrices are split as the congruent sum core + 0 where core is
    the principal submatrix on the echelon pivots (a basis of the column
    space, non-singular by symmetry) and the zero block comes from the kernel.
    """
    _check_symmetric(m)
    if spectrum is not None:
        if not verify_spectrum(m, spectrum):
            raise MultiplicityMismatch("claimed spectrum does not hold")
        pos = sum(mu for th, mu in spectrum if rat(th) > 0)
        neg = sum(mu for th, mu in spectrum if rat(th) < 0)
        return Inertia(pos, m.rows - pos - neg, neg)
    if m.rows <= CORE_THRESHOLD:
        return Inertia(*_intmat.inertia_congruence(m.numerator))
    piv = list(m._echelon[0])
    core = m.numerator[np.ix_(piv, piv)]
    pos, zero, neg = _intmat.inertia_congruence(core)
    assert zero == 0, "pivot core must be non-singular"
    return Inertia(pos, m.rows - pos - neg, neg)


# --------------------------------------------------------------------------
# spectrum certificate


def verify_spectrum(m: RationalMatrix, claimed: Sequence[tuple]) -> bool:
    """True iff nullity(m - theta Id) == mu for every claimed (theta, mu).

    Certificate (no eigensolver): m symmetric, hence diagonalisable with real
    eigenvalues.  If prod(m - theta_i Id) == 0 every eigenvalue is some
    theta_i; the unknown true multiplicities g_i then satisfy
    sum_i g_i theta_i**j == trace(m**j) for j = 0..t-1, a Vandermonde system
    in distinct theta_i, so g == mu exactly when those traces match.
    """
    _check_symmetric(m)
    pairs = [(rat(th), int(mu)) for th, mu in claimed]
    if sum(mu for _, mu in pairs) != m.rows:
        raise MultiplicityMismatch(f"multiplicities sum to {sum(mu for _, mu in pairs)}, dimension is {m.rows}")
    if any(mu < 0 for _, mu in pairs):
        raise MultiplicityMismatch("negative multiplicity")
    if len({th for th, _ in pairs}) != len(pairs):
        raise ValueError("claimed eigenvalues must be distinct")
    thetas = [th for th, _ in pairs]
    # integer model: s = den*m, eigenvalues den*theta
    den = _lcm([m.denominator] + [th.denominator for th in thetas])
    s = _safe_mul(m.numerator, den // m.denominator)
    eig = [th.numerator * (den // th.denominator) for th in thetas]
    n = m.rows

    def shifted(e: int) -> np.ndarray:
        out = s.astype(object) if abs(e) >= 1 << 60 else s.copy()
        out[np.diag_indices(n)] -= e
        return _intmat.as_int_array(out)

    prod = shifted(eig[0])
    for e in eig[1:]:
        prod = _intmat.exact_matmul(prod, shifted(e))
        if _intmat.max_abs(prod) == 0:
            break
    if _intmat.max_abs(prod) != 0:
        return False
    # power traces
    power = s
    for j in range(1, len(eig)):
        if j == 1:
            tr = sum(int(x) for x in s.diagonal())
        elif j == 2:
            tr = _trace_of_product(s, s)
            power = _intmat.exact_matmul(s, s) if len(eig) > 3 else None
        else:
            if j > 3:
                power = _intmat.exact_matmul(power, s)
            a = _intmat.as_int_array(power)
            tr = _trace_of_product(a, s)
        if tr != sum(mu * e**j for e, (_, mu) in zip(eig, pairs)):
            return False
    return True


def _trace_of_product(a: np.ndarray, b: np.ndarray) -> int:
    """trace(a @ b) for symmetric b without forming the product."""
    if a.dtype != object and b.dtype != object:
        bound = _intmat.max_abs(a) * _intmat.max_abs(b) * a.size
        if bound < 1 << 62:
            return int((a * b.T).sum())
    return int(sum(int(x) * int(y) for x, y in zip(a.flat, b.T.flat)))
