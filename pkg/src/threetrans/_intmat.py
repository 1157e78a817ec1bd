"""Integer matrix kernels: exact products, modular and fraction-free row reduction.

Everything here works on integer numpy arrays (int64 or object dtype) and
returns exact answers.  Floating point is only used as a fast integer
multiplier when every partial sum provably stays below 2**53.
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction

import numpy as np

log = logging.getLogger(__name__)

_F64_EXACT = 1 << 53
_I64_SAFE = 1 << 62


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):  # deterministic below 3.4e14
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_below(bound: int, count: int) -> tuple[int, ...]:
    out = []
    n = bound - 1
    while len(out) < count:
        if _is_prime(n):
            out.append(n)
        n -= 1
    return tuple(out)


# primes below 2**31 so that a product of two residues fits in int64
PRIMES = _primes_below(1 << 31, 12)


def as_int_array(a) -> np.ndarray:
    """Return an int64 array when every entry fits comfortably, else object."""
    arr = np.asarray(a)
    if arr.dtype == object:
        if arr.size == 0:
            return arr.astype(np.int64)
        m = max(abs(int(x)) for x in arr.flat)
        if m < _I64_SAFE:
            return arr.astype(np.int64)
        return arr
    return arr.astype(np.int64)


def max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(x)) for x in a.flat)
    return int(np.abs(a).max())


def _max_row_abs_sum(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(sum(abs(int(x)) for x in row) for row in a)
    return int(np.abs(a).sum(axis=1).max())


def exact_matmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Exact integer product.

    Every partial sum of row i of x times column j of y is bounded by
    (max row abs-sum of x) * (max |y|).  Below 2**53 the float64 BLAS
    product is exact; below 2**62 int64 is exact; otherwise Python ints.
    """
    bound = _max_row_abs_sum(x) * max_abs(y)
    if bound < _F64_EXACT:
        prod = x.astype(np.float64) @ y.astype(np.float64)
        return np.rint(prod).astype(np.int64)
    if bound < _I64_SAFE:
        return x.astype(np.int64) @ y.astype(np.int64)
    return np.dot(x.astype(object), y.astype(object))


# --------------------------------------------------------------------------
# modular reduction


def rref_mod_p(a: np.ndarray, p: int) -> tuple[list[int], np.ndarray]:
    """Reduced row echelon form over GF(p); `a` must already hold residues."""
    m = np.array(a, dtype=np.int64, copy=True)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r, c:] = (m[r, c:] * inv) % p
        f = m[:, c].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            m[hit, c:] = (m[hit, c:] - np.outer(f[hit], m[r, c:])) % p
        pivots.append(c)
        r += 1
    return pivots, m[:r]


def rational_reconstruct(u: int, mod: int) -> Fraction | None:
    """Find a/b == u (mod mod) with |a|, b <= sqrt(mod/2), or None."""
    bound = math.isqrt(mod // 2)
    r0, r1 = mod, u % mod
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _crt_pair(x1: int, m1: int, x2: int, m2: int) -> int:
    t = ((x2 - x1) * pow(m1, -1, m2)) % m2
    return x1 + m1 * t


def _reconstruct(residues: list[np.ndarray], primes: list[int]):
    """Lift stacked residue matrices to rationals; None when some entry fails."""
    stack = np.stack(residues, axis=-1)
    shape = stack.shape[:-1]
    flat = stack.reshape(-1, len(primes))
    uniq, inverse = np.unique(flat, axis=0, return_inverse=True)
    modulus = math.prod(primes)
    values = []
    for row in uniq:
        x, m = int(row[0]), primes[0]
        for res, q in zip(row[1:], primes[1:]):
            x = _crt_pair(x, m, int(res), q)
            m *= q
        if x == 0:
            values.append(Fraction(0))
            continue
        fr = rational_reconstruct(x, modulus)
        if fr is None:
            return None
        values.append(fr)
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    nums = np.array([v.numerator * (den // v.denominator) for v in values], dtype=object)
    out = nums[np.asarray(inverse).reshape(-1)].reshape(shape)
    return as_int_array(out), den


def _certify(a: np.ndarray, pivots: list[int], rnum: np.ndarray, den: int) -> bool:
    """Check den*a == a[:, pivots] @ rnum exactly.

    Together with rank_p(a) == len(pivots) this proves that rnum/den is the
    reduced echelon form of a over the rationals: the row space of a sits
    inside the row space of the candidate, and both have the same dimension.
    """
    lhs = exact_matmul(a[:, pivots], rnum)
    if a.dtype != object and max_abs(a) * den < _I64_SAFE:
        rhs = a * den
    else:
        rhs = a.astype(object) * den
    if lhs.dtype != rhs.dtype:
        lhs = lhs.astype(object)
        rhs = rhs.astype(object)
    return bool(np.array_equal(lhs, rhs))


# --------------------------------------------------------------------------
# fraction-free reference


def rref_bareiss(a: np.ndarray) -> tuple[list[int], np.ndarray, np.ndarray]:
    """Fraction-free Gauss-Jordan; returns (pivots, rows, pivot_values).

    Row i of the echelon form is rows[i] / pivot_values[i].  Pivot choice is
    the first nonzero entry scanning down the current column.
    """
    m = np.array(a, dtype=object, copy=True)
    rows, cols = m.shape
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if m[i, c] != 0]
        if not nz:
            continue
        k = nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        pv = m[r, c]
        others = np.ones(rows, dtype=bool)
        others[r] = False
        col = m[others, c].copy()
        m[others, :] = (m[others, :] * pv - np.outer(col, m[r, :])) // prev
        prev = pv
        pivots.append(c)
        r += 1
    body = m[:r]
    diag = np.array([body[i, pivots[i]] for i in range(r)], dtype=object)
    return pivots, body, diag


def _bareiss_to_common(body, diag) -> tuple[np.ndarray, int]:
    if len(diag) == 0:
        return np.zeros((0, body.shape[1]), dtype=np.int64), 1
    den = 1
    rows = []
    for row, d in zip(body, diag):
        fr = [Fraction(int(x), int(d)) for x in row]
        rows.append(fr)
        for v in fr:
            den = den * v.denominator // math.gcd(den, v.denominator)
    nums = np.array([[v.numerator * (den // v.denominator) for v in row] for row in rows], dtype=object)
    return as_int_array(nums), den


SMALL_CELLS = 1600


def rref_int(a: np.ndarray, method: str = "auto") -> tuple[list[int], np.ndarray, int]:
    """Exact reduced echelon form of an integer matrix.

    Returns (pivots, num, den) with the echelon rows equal to num / den.
    method: "bareiss", "modular" or "auto" (small matrices go fraction-free).
    """
    a = as_int_array(a)
    rows, cols = a.shape
    if rows == 0 or cols == 0 or not a.any():
        return [], np.zeros((0, cols), dtype=np.int64), 1
    if method == "bareiss" or (method == "auto" and rows * cols <= SMALL_CELLS):
        piv, body, diag = rref_bareiss(a)
        num, den = _bareiss_to_common(body, diag)
        return piv, num, den

    best: list[int] | None = None
    residues: list[np.ndarray] = []
    used: list[int] = []
    for p in PRIMES:
        red = a % p if a.dtype != object else np.array([[int(x) % p for x in row] for row in a], dtype=np.int64)
        piv, rp = rref_mod_p(red, p)
        if best is None or len(piv) > len(best) or (len(piv) == len(best) and piv < best):
            best, residues, used = piv, [rp], [p]
        elif piv == best:
            residues.append(rp)
            used.append(p)
        else:
            continue
        lifted = _reconstruct(residues, used)
        if lifted is None:
            continue
        num, den = lifted
        if _certify(a, best, num, den):
            return best, num, den
    log.debug("modular echelon form not certified, falling back to Bareiss")
    piv, body, diag = rref_bareiss(a)
    num, den = _bareiss_to_common(body, diag)
    return piv, num, den


# --------------------------------------------------------------------------
# symmetric congruence


def inertia_congruence(s: np.ndarray) -> tuple[int, int, int]:
    """(positive, zero, negative) of a symmetric integer matrix.

    Symmetric fraction-free elimination.  Each step's pivot is the quotient
    p_k / p_(k-1) of successive stored pivots, so its sign is
    sign(p_k) * sign(p_(k-1)).  When every remaining diagonal entry is zero
    but some off-diagonal (i, j) is not, the unimodular congruence
    e_i <- e_i + e_j creates the diagonal entry 2 * s[i, j].
    """
    m = np.array(s, dtype=object, copy=True)
    n = m.shape[0]
    active = list(range(n))
    prev = 1
    pos = neg = 0
    while active:
        sub = m[np.ix_(active, active)]
        diag = [k for k, i in enumerate(active) if m[i, i] != 0]
        if diag:
            k = active[diag[0]]
        else:
            hit = np.argwhere(sub != 0)
            if hit.size == 0:
                break
            a_pos, b_pos = (int(v) for v in hit[0])
            i, j = active[a_pos], active[b_pos]
            m[i, active] = m[i, active] + m[j, active]
            m[active, i] = m[active, i] + m[active, j]
            k = i
        pv = m[k, k]
        if (pv > 0) == (prev > 0):
            pos += 1
        else:
            neg += 1
        rest = [i for i in active if i != k]
        if rest:
            block = m[np.ix_(rest, rest)]
            col = m[rest, k]
            m[np.ix_(rest, rest)] = (block * pv - np.outer(col, col)) // prev
        prev = pv
        active = rest
    return pos, n - pos - neg, neg
