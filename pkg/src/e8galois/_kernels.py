"""Compiled mod-p kernels.

Polynomials are int64 arrays of ascending coefficients with no trailing
zeros; the zero polynomial is the empty array. All residues live in [0, p).
Primes must be below 2**31 so that a single product fits in int64; the
Hessenberg kernel additionally needs p < 2**26 for its delayed reduction.
"""

import numpy as np
from numba import njit

# ---------------------------------------------------------------- scalars


@njit(cache=True, nogil=True)
def inv_mod(a, p):
    a = a % p
    if a == 0:
        raise ZeroDivisionError("inverse of zero mod p")
    r0, r1 = p, a
    s0, s1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    return s0 % p


@njit(cache=True, nogil=True)
def pow_mod(a, e, p):
    r = 1
    a = a % p
    while e > 0:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


# ----------------------------------------------------------- matrices


@njit(cache=True, nogil=True)
def hessenberg_charpoly(a, p):
    """det(T - A) mod p, ascending coefficients, via Hessenberg reduction.

    ``a`` is reduced into [0, p) and overwritten.
    """
    n = a.shape[0]
    for k in range(n - 2):
        piv = -1
        for i in range(k + 1, n):
            if a[i, k] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != k + 1:
            for j in range(n):
                t = a[piv, j]
                a[piv, j] = a[k + 1, j]
                a[k + 1, j] = t
            for r in range(n):
                t = a[r, piv]
                a[r, piv] = a[r, k + 1]
                a[r, k + 1] = t
        inv = inv_mod(a[k + 1, k], p)
        mult = np.zeros(n, dtype=np.int64)
        any_nz = False
        for i in range(k + 2, n):
            if a[i, k] == 0:
                continue
            m = a[i, k] * inv % p
            mult[i] = m
            any_nz = True
            neg = p - m
            for j in range(k, n):
                a[i, j] = (a[i, j] + neg * a[k + 1, j]) % p
        if not any_nz:
            continue
        # column k+1 += sum_i mult[i] * column i; each product < 2**52
        for r in range(n):
            acc = a[r, k + 1]
            for i in range(k + 2, n):
                acc += mult[i] * a[r, i]
            a[r, k + 1] = acc % p

    # charpoly of the upper Hessenberg matrix by the standard recurrence
    polys = np.zeros((n + 1, n + 1), dtype=np.int64)
    polys[0, 0] = 1
    for k in range(1, n + 1):
        c = k - 1
        hcc = a[c, c]
        for d in range(k):
            polys[k, d + 1] = polys[k - 1, d]
        for d in range(k):
            polys[k, d] = (polys[k, d] + (p - hcc) * polys[k - 1, d]) % p
        t = 1
        for i in range(k - 1, 0, -1):
            t = t * a[i, i - 1] % p
            if t == 0:
                break
            coef = a[i - 1, c] * t % p
            if coef == 0:
                continue
            neg = p - coef
            for d in range(i):
                polys[k, d] = (polys[k, d] + neg * polys[i - 1, d]) % p
    return polys[n].copy()


@njit(cache=True, nogil=True)
def matmul_mod(a, b, p):
    """Dense product mod p; inputs reduced, p < 2**26."""
    n, m = a.shape
    q = b.shape[1]
    out = np.zeros((n, q), dtype=np.int64)
    for i in range(n):
        for k in range(m):
            aik = a[i, k]
            if aik == 0:
                continue
            for j in range(q):
                out[i, j] += aik * b[k, j]
        # at most m products below 2**52 each
        for j in range(q):
            out[i, j] %= p
    return out


@njit(cache=True, nogil=True)
def right_mul_sparse_mod(m, rows, cols, vals, p):
    """Return M @ X mod p, X given by COO triplets (values reduced mod p)."""
    n = m.shape[0]
    out = np.zeros_like(m)
    for t in range(rows.shape[0]):
        k = rows[t]
        j = cols[t]
        v = vals[t]
        for r in range(n):
            out[r, j] += m[r, k] * v
    for r in range(n):
        for j in range(out.shape[1]):
            out[r, j] %= p
    return out


# -------------------------------------------------------- polynomials


@njit(cache=True, nogil=True)
def trim(a):
    n = a.shape[0]
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return a[:n].copy()


@njit(cache=True, nogil=True)
def poly_rem(a, f, p):
    """Remainder of a modulo f (f nonzero)."""
    df = f.shape[0] - 1
    r = a.copy()
    if r.shape[0] <= df:
        return trim(r)
    inv = inv_mod(f[df], p)
    for i in range(r.shape[0] - 1, df - 1, -1):
        c = r[i] * inv % p
        if c == 0:
            continue
        neg = p - c
        s = i - df
        for j in range(df + 1):
            r[s + j] = (r[s + j] + neg * f[j]) % p
    return trim(r[:df])


@njit(cache=True, nogil=True)
def poly_divmod(a, f, p):
    df = f.shape[0] - 1
    if a.shape[0] <= df:
        return np.zeros(0, dtype=np.int64), trim(a.copy())
    r = a.copy()
    q = np.zeros(a.shape[0] - df, dtype=np.int64)
    inv = inv_mod(f[df], p)
    for i in range(r.shape[0] - 1, df - 1, -1):
        c = r[i] * inv % p
        q[i - df] = c
        if c == 0:
            continue
        neg = p - c
        s = i - df
        for j in range(df + 1):
            r[s + j] = (r[s + j] + neg * f[j]) % p
    return trim(q), trim(r[:df])


@njit(cache=True, nogil=True)
def poly_mul(a, b, p):
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    out = np.zeros(a.shape[0] + b.shape[0] - 1, dtype=np.int64)
    for i in range(a.shape[0]):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(b.shape[0]):
            out[i + j] = (out[i + j] + ai * b[j]) % p
    return trim(out)


@njit(cache=True, nogil=True)
def poly_mulmod(a, b, f, p):
    return poly_rem(poly_mul(a, b, p), f, p)


@njit(cache=True, nogil=True)
def poly_sub(a, b, p):
    n = max(a.shape[0], b.shape[0])
    out = np.zeros(n, dtype=np.int64)
    for i in range(a.shape[0]):
        out[i] = a[i]
    for i in range(b.shape[0]):
        out[i] = (out[i] - b[i]) % p
    return trim(out)


@njit(cache=True, nogil=True)
def poly_monic(a, p):
    if a.shape[0] == 0:
        return a.copy()
    inv = inv_mod(a[a.shape[0] - 1], p)
    out = np.empty_like(a)
    for i in range(a.shape[0]):
        out[i] = a[i] * inv % p
    return out


@njit(cache=True, nogil=True)
def poly_gcd(a, b, p):
    """Monic gcd."""
    a = trim(a.copy())
    b = trim(b.copy())
    while b.shape[0] > 0:
        a, b = b, poly_rem(a, b, p)
    return poly_monic(a, p)


@njit(cache=True, nogil=True)
def poly_deriv(a, p):
    if a.shape[0] <= 1:
        return np.zeros(0, dtype=np.int64)
    out = np.empty(a.shape[0] - 1, dtype=np.int64)
    for i in range(1, a.shape[0]):
        out[i - 1] = (i % p) * a[i] % p
    return trim(out)


@njit(cache=True, nogil=True)
def poly_powmod_x(e, f, p):
    """T**e mod f."""
    result = np.ones(1, dtype=np.int64)
    base = poly_rem(np.array([0, 1], dtype=np.int64), f, p)
    while e > 0:
        if e & 1:
            result = poly_mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = poly_mulmod(base, base, f, p)
    return poly_rem(result, f, p)


@njit(cache=True, nogil=True)
def frobenius_matrix(f, p):
    """Rows are T**(i*p) mod f for i < deg f, padded to deg f."""
    d = f.shape[0] - 1
    mat = np.zeros((d, d), dtype=np.int64)
    xp = poly_powmod_x(p, f, p)
    cur = np.ones(1, dtype=np.int64)
    for i in range(d):
        for j in range(cur.shape[0]):
            mat[i, j] = cur[j]
        if i + 1 < d:
            cur = poly_mulmod(cur, xp, f, p)
    return mat


@njit(cache=True, nogil=True)
def apply_frobenius(h, mat, p):
    """h**p mod f given the Frobenius matrix of f."""
    d = mat.shape[0]
    out = np.zeros(d, dtype=np.int64)
    for i in range(h.shape[0]):
        hi = h[i]
        if hi == 0:
            continue
        for j in range(d):
            out[j] = (out[j] + hi * mat[i, j]) % p
    return trim(out)


@njit(cache=True, nogil=True)
def distinct_degree(f, p):
    """Distinct-degree factorization of a monic squarefree f over F_p.

    Returns an array ``counts`` where counts[d] is the number of
    irreducible factors of degree d.
    """
    n = f.shape[0] - 1
    counts = np.zeros(n + 1, dtype=np.int64)
    g = f.copy()
    mat = frobenius_matrix(f, p)
    x = np.array([0, 1], dtype=np.int64)
    h = poly_rem(x, f, p)
    d = 0
    while g.shape[0] - 1 >= 2 * (d + 1):
        d += 1
        h = apply_frobenius(h, mat, p)
        hx = poly_rem(poly_sub(h, x, p), g, p)
        c = poly_gcd(g, hx, p)
        dc = c.shape[0] - 1
        if dc > 0:
            counts[d] += dc // d
            g, _ = poly_divmod(g, c, p)
            g = poly_monic(g, p)
            h = poly_rem(h, g, p)
    rem = g.shape[0] - 1
    if rem > 0:
        counts[rem] += 1
    return counts


@njit(cache=True, nogil=True)
def resultant(a, b, p):
    """Res(a, b) mod p by the Euclidean recurrence."""
    a = trim(a.copy())
    b = trim(b.copy())
    if a.shape[0] == 0 or b.shape[0] == 0:
        return 0
    res = 1
    while True:
        da = a.shape[0] - 1
        db = b.shape[0] - 1
        if db == 0:
            return res * pow_mod(b[0], da, p) % p
        r = poly_rem(a, b, p)
        if r.shape[0] == 0:
            return 0
        dr = r.shape[0] - 1
        if (da * db) % 2 == 1:
            res = (p - res) % p
        res = res * pow_mod(b[db], da - dr, p) % p
        a, b = b, r


@njit(cache=True, nogil=True)
def horner_sparse_mod(coeffs, indptr, indices, data, n, p):
    """f(M) mod p by Horner's rule, M given in CSR form with entries in [0, p).

    ``coeffs`` is ascending; requires p < 2**26 and column counts < 2**11.
    """
    acc = np.zeros((n, n), dtype=np.int64)
    out = np.zeros((n, n), dtype=np.int64)
    for t in range(coeffs.shape[0] - 1, -1, -1):
        out[:, :] = 0
        for i in range(n):
            for k in range(n):
                aik = acc[i, k]
                if aik == 0:
                    continue
                for s in range(indptr[k], indptr[k + 1]):
                    out[i, indices[s]] += aik * data[s]
        c = coeffs[t]
        for i in range(n):
            for j in range(n):
                acc[i, j] = out[i, j] % p
            acc[i, i] = (acc[i, i] + c) % p
    return acc


@njit(cache=True, nogil=True)
def cycle_counts(perms):
    """counts[r, k] = number of k-cycles of the permutation in row r."""
    n_rows, n = perms.shape
    counts = np.zeros((n_rows, n + 1), dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    for r in range(n_rows):
        seen[:] = False
        for s in range(n):
            if seen[s]:
                continue
            k = 0
            j = s
            while not seen[j]:
                seen[j] = True
                j = perms[r, j]
                k += 1
            counts[r, k] += 1
    return counts
