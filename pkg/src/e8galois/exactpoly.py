"""Exact polynomial kernels over Z with modular back ends.

Characteristic polynomials and discriminants are computed prime by prime
and glued with the Chinese remainder theorem, guarded by an a priori
coefficient bound and by control primes that play no part in the
reconstruction.
"""

from __future__ import annotations

import hashlib
import sys
import math
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
import scipy.sparse as sp
import sympy

from . import _kernels

# Hessenberg kernel needs p < 2**26 (delayed column reduction).
CRT_PRIME_CEILING = 1 << 26
N_CONTROL = 2


class ReconstructionError(RuntimeError):
    """A control prime disagreed with a CRT reconstruction."""


class NotDivisibleError(ArithmeticError):
    pass


def ordered_map(fn, items, threads: int = 1) -> list:
    """map() over a thread pool; results come back in input order."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ------------------------------------------------------------ IntPoly


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, ascending coefficients, no trailing zeros."""

    coeffs: tuple

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_roots_of_unity_factor(cls, k: int, sign: int = -1) -> IntPoly:
        """(T + sign)**k."""
        return cls(tuple(math.comb(k, i) * sign ** (k - i) for i in range(k + 1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.lc == 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self):
        return IntPoly(tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(tuple(other * x for x in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def divmod_monic(self, divisor: IntPoly) -> tuple[IntPoly, IntPoly]:
        if not divisor.is_monic():
            raise ValueError("divisor must be monic")
        r = list(self.coeffs)
        d = divisor.degree
        q = [0] * max(len(r) - d, 0)
        for i in range(len(r) - 1, d - 1, -1):
            c = r[i]
            if c:
                q[i - d] = c
                for j, dc in enumerate(divisor.coeffs):
                    r[i - d + j] -= c * dc
        return IntPoly(tuple(q)), IntPoly(tuple(r[:d]))

    def derivative(self) -> IntPoly:
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def mod(self, p: int) -> np.ndarray:
        return _kernels.trim(np.array([c % p for c in self.coeffs], dtype=np.int64))

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def norm2_sq(self) -> int:
        return sum(c * c for c in self.coeffs)

    def sha256(self) -> str:
        return hashlib.sha256(format_poly(self).encode()).hexdigest()

    def to_sympy(self, x=None):
        x = x or sympy.Symbol("T")
        return sympy.Poly(list(reversed(self.coeffs)), x)


def format_poly(p: IntPoly) -> str:
    lines = [f"deg {p.degree}"]
    lines += [f"{k} {c}" for k, c in enumerate(p.coeffs)]
    return "\n".join(lines) + "\n"


def write_poly(p: IntPoly, path) -> None:
    Path(path).write_text(format_poly(p))


def parse_poly(text: str, name: str = "<poly>") -> IntPoly:
    lines = [ln for ln in text.splitlines()]
    if not lines or not lines[0].startswith("deg "):
        raise ValueError(f"{name}:1: expected 'deg <d>' header")
    try:
        d = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise ValueError(f"{name}:1: malformed degree header") from None
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != d + 1:
        raise ValueError(f"{name}: header says degree {d} but found {len(body)} coefficient lines")
    coeffs = []
    for k, ln in enumerate(body):
        parts = ln.split()
        lineno = k + 2
        if len(parts) != 2:
            raise ValueError(f"{name}:{lineno}: expected '<k> <coefficient>'")
        try:
            idx, c = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"{name}:{lineno}: non-integer field") from None
        if idx != k:
            raise ValueError(f"{name}:{lineno}: expected index {k}, found {idx}")
        coeffs.append(c)
    if coeffs and coeffs[-1] == 0:
        raise ValueError(f"{name}: leading coefficient is zero")
    return IntPoly(tuple(coeffs))


def read_poly(path) -> IntPoly:
    return parse_poly(Path(path).read_text(), str(path))


# ------------------------------------------------------------ primes / CRT


def primes_below(ceiling: int, count: int, skip=()) -> list[int]:
    out = []
    p = ceiling
    while len(out) < count:
        p = sympy.prevprime(p)
        if p not in skip:
            out.append(p)
    return out


@dataclass
class CrtPlan:
    primes: list[int]
    bound: int
    control: list[int] = field(default_factory=list)

    def __post_init__(self):
        if math.prod(self.primes) <= 2 * self.bound:
            raise ValueError("reconstruction primes do not cover twice the bound")
        if set(self.primes) & set(self.control):
            raise ValueError("control primes must be disjoint from reconstruction primes")

    @classmethod
    def for_bound(cls, bound: int, ceiling: int = CRT_PRIME_CEILING, n_control: int = N_CONTROL):
        bits = (2 * bound).bit_length() + 1
        count = bits // (ceiling.bit_length() - 2) + 1
        allp = primes_below(ceiling, count + n_control)
        while math.prod(allp[:count]) <= 2 * bound:
            count += 1
            allp = primes_below(ceiling, count + n_control)
        return cls(allp[:count], bound, allp[count:])


def crt_symmetric(residues, primes) -> int:
    """Integer in (-M/2, M/2] congruent to residues[i] mod primes[i]."""
    x, m = 0, 1
    for r, p in zip(residues, primes):
        r = int(r) % p
        t = (r - x) * pow(m % p, -1, p) % p
        x += m * t
        m *= p
    return x - m if x > m // 2 else x


def crt_vectors(rows, primes) -> list[int]:
    """Coefficient-wise symmetric CRT using a Garner-style mixed radix."""
    rows = [np.asarray(r, dtype=np.int64) for r in rows]
    n = len(rows[0])
    m = 1
    acc = [0] * n
    for r, p in zip(rows, primes):
        inv = pow(m % p, -1, p)
        for i in range(n):
            t = (int(r[i]) - acc[i]) % p
            acc[i] += m * (t * inv % p)
        m *= p
    half = m // 2
    return [a - m if a > half else a for a in acc]


# ------------------------------------------------------------ charpoly


def _as_int_rows(mat) -> list[list[int]]:
    data = getattr(mat, "data", mat)
    return [[int(x) for x in row] for row in np.asarray(data)]


def _residues(mat, p: int) -> np.ndarray:
    data = np.asarray(getattr(mat, "data", mat))
    if data.dtype == object:
        return np.array([[int(x) % p for x in row] for row in data], dtype=np.int64)
    return np.ascontiguousarray(data % p, dtype=np.int64)


def charpoly_mod(mat, p: int) -> np.ndarray:
    """det(T - M) mod p, ascending, length n + 1 (monic)."""
    if p >= CRT_PRIME_CEILING:
        raise ValueError("prime too large for the Hessenberg kernel")
    a = _residues(mat, p)
    if a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    return _kernels.hessenberg_charpoly(a, p)


def charpoly_bound(mat) -> int:
    """Bound on |c_k| for det(T - M): max_k C(n, k) * prod of top-k row 2-norms."""
    data = np.asarray(getattr(mat, "data", mat))
    n = data.shape[0]
    norms = sorted((math.isqrt(sum(int(x) ** 2 for x in row)) + 1 for row in data), reverse=True)
    best, prod = 1, 1
    for k in range(1, n + 1):
        prod *= norms[k - 1]
        best = max(best, math.comb(n, k) * prod)
    return best


def charpoly_exact(mat, plan: CrtPlan | None = None, report: dict | None = None, threads: int = 1) -> IntPoly:
    """Exact det(T - M) for an integer matrix via modular images and CRT."""
    plan = plan or CrtPlan.for_bound(charpoly_bound(mat))
    images = ordered_map(lambda p: charpoly_mod(mat, p), sorted(plan.primes), threads)
    coeffs = crt_vectors(images, sorted(plan.primes))
    poly = IntPoly(tuple(coeffs))
    for q in plan.control:
        if not np.array_equal(poly.mod(q), _kernels.trim(charpoly_mod(mat, q))):
            raise ReconstructionError(f"control prime {q} disagrees with the CRT result")
    if report is not None:
        report.update(primes=len(plan.primes), control=list(plan.control), bound_bits=plan.bound.bit_length())
    return poly


def charpoly_division_free(mat) -> IntPoly:
    """Exact det(T - M) by the Faddeev-LeVerrier recursion over Z.

    The division by k at each step is exact, so all intermediates are
    integers. Quadratic in matrix size per step; meant for small matrices.
    """
    a = _as_int_rows(mat)
    n = len(a)
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    m = [[0] * n for _ in range(n)]
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    c_prev = 1
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        am = [[sum(a[i][t] * m[t][j] for t in range(n) if a[i][t]) for j in range(n)] for i in range(n)]
        m = [[am[i][j] + c_prev * ident[i][j] for j in range(n)] for i in range(n)]
        am = [[sum(a[i][t] * m[t][j] for t in range(n) if a[i][t]) for j in range(n)] for i in range(n)]
        tr = sum(am[i][i] for i in range(n))
        if tr % k:
            raise ArithmeticError("Faddeev-LeVerrier trace not divisible")
        c_prev = -tr // k
        coeffs[n - k] = c_prev
    return IntPoly(tuple(coeffs))


# ------------------------------------------------------------ transforms


def strip_unit_eigenvalue(cp: IntPoly, k: int = 8) -> IntPoly:
    """Exact quotient cp / (T - 1)**k; raises when the division is not exact."""
    q = cp
    for i in range(k):
        quo, rem = q.divmod_monic(IntPoly((-1, 1)))
        if rem.coeffs:
            raise NotDivisibleError(
                f"multiplicity of eigenvalue 1 falls short of {k} (only {i})"
            )
        q = quo
    return q


def unit_eigenvalue_multiplicity(cp: IntPoly) -> int:
    k, q = 0, cp
    while q.degree > 0 and q(1) == 0:
        q, _ = q.divmod_monic(IntPoly((-1, 1)))
        k += 1
    return k


def reciprocal_transform(p: IntPoly) -> IntPoly:
    """The Q with P(T) = T**m Q(T + 1/T), for palindromic P of degree 2m."""
    if p.degree % 2 or not p.is_palindromic():
        raise ValueError("input must be self-reciprocal of even degree")
    m = p.degree // 2
    # coefficient of T**(m+k) and T**(m-k) in P; P = T**m * sum_k c_k (T**k + T**-k)
    rest = list(p.coeffs[m:])  # rest[k] pairs with basis element T^k + T^-k (k>0), 1 for k = 0
    # powers of t = T + 1/T in the basis {1, p_1, p_2, ...} with p_k = T^k + T^-k
    # peel from the top: t**k = p_k + lower terms
    q = [0] * (m + 1)
    tpows = _t_powers_in_pk_basis(m)
    for k in range(m, -1, -1):
        c = rest[k]
        if c == 0:
            continue
        q[k] = c
        for j, v in enumerate(tpows[k]):
            if j <= k:
                rest[j] -= c * v
    if any(rest):
        raise ArithmeticError("reciprocal transform did not terminate cleanly")
    out = IntPoly(tuple(q))
    if expand_reciprocal(out) != p:
        raise ArithmeticError("reciprocal transform failed its round trip")
    return out


@lru_cache(maxsize=8)
def _t_powers_in_pk_basis(m: int):
    """t**k written over {1, p_1, ..., p_k}, where p_j = T**j + T**-j.

    Entry j of row k is the coefficient of p_j, with j = 0 meaning the
    constant 1 (so p_0 would count twice).
    """
    rows = [[1]]
    for k in range(1, m + 1):
        prev = rows[-1] + [0]
        new = [0] * (k + 1)
        # t * p_j = p_{j+1} + p_{j-1}; t * 1 = p_1; t * p_1 = p_2 + 2
        for j, c in enumerate(prev):
            if c == 0:
                continue
            if j == 0:
                new[1] += c
            else:
                if j + 1 <= k:
                    new[j + 1] += c
                new[j - 1] += c * (2 if j == 1 else 1)
        rows.append(new)
    return tuple(tuple(r) for r in rows)


def expand_reciprocal(q: IntPoly) -> IntPoly:
    """T**m Q(T + 1/T) for Q of degree m."""
    m = q.degree
    t_poly = IntPoly((1, 0, 1))  # T**2 + 1 = T * (T + 1/T)
    out = IntPoly(())
    power = IntPoly((1,))
    for k, c in enumerate(q.coeffs):
        # T**m t**k = T**(m-k) (T**2+1)**k
        if c:
            shift = IntPoly((0,) * (m - k) + power.coeffs)
            out = out + shift * c
        power = power * t_poly
    return out


# ------------------------------------------------------------ factor patterns


@dataclass(frozen=True)
class FactorPattern:
    prime: int
    squarefree: bool
    degrees: tuple = ()  # sorted (degree, count) pairs

    def as_dict(self) -> dict[int, int]:
        return dict(self.degrees)

    def to_json(self) -> dict:
        return {
            "p": self.prime,
            "squarefree": self.squarefree,
            "degrees": {str(d): c for d, c in self.degrees} if self.squarefree else None,
        }


def pattern_of_residues(f: np.ndarray, p: int) -> FactorPattern:
    f = _kernels.poly_monic(_kernels.trim(np.asarray(f, dtype=np.int64) % p), p)
    g = _kernels.poly_gcd(f, _kernels.poly_deriv(f, p), p)
    if g.shape[0] != 1:
        return FactorPattern(p, False)
    counts = _kernels.distinct_degree(f, p)
    degrees = tuple((int(d), int(c)) for d, c in enumerate(counts) if c)
    return FactorPattern(p, True, degrees)


def factor_degree_pattern(poly: IntPoly, p: int) -> FactorPattern:
    """Squarefreeness and distinct-degree factor counts of poly mod p."""
    if poly.lc % p == 0:
        raise ValueError(f"p = {p} divides the leading coefficient")
    return pattern_of_residues(poly.mod(p), p)


def subset_sums(pattern: FactorPattern) -> set[int]:
    """Degrees of all products of irreducible factors mod p (bitset DP)."""
    bits = 1
    for d, c in pattern.degrees:
        for _ in range(c):
            bits |= bits << d
    return {i for i in range(bits.bit_length()) if bits >> i & 1}


def factor_degree_sieve(poly: IntPoly, patterns) -> set[int]:
    """Intersection of feasible factor degrees across the supplied patterns."""
    feasible = set(range(poly.degree + 1))
    for pat in patterns:
        if not pat.squarefree:
            raise ValueError(f"pattern at p = {pat.prime} is not squarefree")
        feasible &= subset_sums(pat)
    return feasible


def is_irreducible_by_sieve(poly: IntPoly, patterns) -> bool:
    return factor_degree_sieve(poly, patterns) == {0, poly.degree}


# ------------------------------------------------------------ discriminant


def resultant_mod(a: IntPoly, b: IntPoly, p: int) -> int:
    return int(_kernels.resultant(a.mod(p), b.mod(p), p))


def discriminant_bound(poly: IntPoly) -> int:
    """Hadamard bound on |Res(P, P')| from the Sylvester matrix rows."""
    d = poly.degree
    dp = poly.derivative()
    n1 = math.isqrt(poly.norm2_sq()) + 1
    n2 = math.isqrt(dp.norm2_sq()) + 1
    return n1 ** (d - 1) * n2**d


def discriminant_exact(poly: IntPoly, report: dict | None = None, threads: int = 1) -> int:
    """disc(P) = (-1)**(d(d-1)/2) Res(P, P') / lc(P), by CRT over many primes."""
    d = poly.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    if d == 1:
        return 1
    lc = poly.lc
    dp = poly.derivative()
    bound = discriminant_bound(poly)
    plan = CrtPlan.for_bound(bound, ceiling=1 << 31)
    skip = set()
    primes = list(plan.primes)
    # primes dividing lc * d would drop degrees; replace them
    bad = {p for p in primes + plan.control if (lc * d) % p == 0}
    if bad:
        skip |= bad
        extra = primes_below(min(primes + plan.control), len(bad), skip=skip)
        primes = [p for p in primes if p not in bad] + extra[: len([p for p in primes if p in bad])]
    usable = ordered_map(lambda p: resultant_mod(poly, dp, p), primes, threads)
    res = crt_symmetric(usable, primes)
    for q in plan.control:
        if q in bad:
            continue
        if (res - resultant_mod(poly, dp, q)) % q:
            raise ReconstructionError(f"control prime {q} disagrees with the resultant")
    if res % lc:
        raise ArithmeticError("resultant not divisible by the leading coefficient")
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    if report is not None:
        report.update(primes=len(primes), control=list(plan.control), bound_bits=bound.bit_length())
    return sign * res // lc


# ------------------------------------------------------------ annihilation


def poly_eval_matrix_mod(poly_mod_p: np.ndarray, mat_mod_p: np.ndarray, p: int) -> np.ndarray:
    """f(M) mod p for a residue matrix, via sparse Horner."""
    csr = sp.csr_matrix(mat_mod_p)
    return _kernels.horner_sparse_mod(
        np.asarray(poly_mod_p, dtype=np.int64),
        csr.indptr.astype(np.int64),
        csr.indices.astype(np.int64),
        csr.data.astype(np.int64),
        mat_mod_p.shape[0],
        p,
    )


def annihilation_check(mat, poly: IntPoly, n_primes: int = 3, with_unit_factor: bool = True) -> bool:
    """Whether (M - Id) P(M) = 0 (or P(M) = 0 without the unit factor).

    Every entry of f(M) is bounded by sum_k |c_k| ||M||_inf**k, so vanishing
    modulo primes whose product exceeds twice that bound proves f(M) = 0.
    At least ``n_primes`` primes are always used; a nonzero residue exits early.
    """
    data = np.asarray(getattr(mat, "data", mat))
    f = poly * IntPoly((-1, 1)) if with_unit_factor else poly
    row_norm = max(max(sum(abs(int(x)) for x in row) for row in data), 1)
    bound = sum(abs(c) * row_norm**k for k, c in enumerate(f.coeffs))
    ceiling = CRT_PRIME_CEILING - (1 << 20)
    primes: list[int] = []
    p = ceiling
    while len(primes) < n_primes or math.prod(primes) <= 2 * bound:
        p = sympy.prevprime(p)
        primes.append(p)
        if np.any(poly_eval_matrix_mod(f.mod(p), _residues(data, p), p)):
            return False
    return True


def decimal_digits(n: int) -> int:
    """Number of decimal digits of |n|, without a string conversion."""
    n = abs(n)
    if n == 0:
        return 1
    k = int(n.bit_length() * math.log10(2))
    while 10**k <= n:
        k += 1
    while k > 1 and 10 ** (k - 1) > n:
        k -= 1
    return k


@contextmanager
def unlimited_int_digits():
    """Lift the interpreter's int <-> str digit cap for huge exact integers."""
    old = sys.get_int_max_str_digits()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)
