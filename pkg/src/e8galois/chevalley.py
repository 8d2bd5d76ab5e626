"""Chevalley basis of e8: structure constants and the adjoint action.

Basis slots are h_1..h_8 (coroots of the simple roots) followed by e_alpha
for the 240 roots in canonical order, so slot ``8 + k`` holds
``e_{roots[k]}``. The relations used throughout are

    [h_i, e_b] = (b, alpha_i) e_b
    [e_a, e_-a] = h_a = sum_i coeffs(a)_i h_i
    [e_a, e_b]  = N(a, b) e_{a+b}      when a + b is a root.
"""

from __future__ import annotations

import hashlib
import os
import sys
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .rootsystem import NPOS, NROOTS, RANK, RootSystem, build_e8_root_system

DIM = RANK + NROOTS
CACHE_VERSION = 1


def slot(root: int) -> int:
    """Basis slot of e_root."""
    return RANK + root


@dataclass(frozen=True, eq=False)
class StructureConstants:
    rs: RootSystem
    n_table: np.ndarray  # (240, 240) int8, N(a, b); 0 when a + b is not a root
    coroot_rows: np.ndarray  # (240, 8): h_a over h_1..h_8
    extraspecial: tuple  # ((a, b), sign) per non-simple positive root
    source: str = "extraspecial"

    def n(self, a: int, b: int) -> int:
        return int(self.n_table[a, b])


def compute_extraspecial_pairs(rs: RootSystem) -> list[tuple[int, int]]:
    """Extraspecial pair (a, b) for each positive non-simple root, by height order.

    For gamma the pair has a + b = gamma with a minimal in canonical order.
    """
    pairs = []
    for gamma in range(RANK, NPOS):
        best = None
        for a in range(NPOS):
            hits = np.nonzero(rs.sum_table[a, :NPOS] == gamma)[0]
            if hits.size:
                best = (a, int(hits[0]))
                break
        if best is None:
            raise RuntimeError(f"positive root {gamma} has no decomposition")
        pairs.append(best)
    return pairs


def compute_structure_constants(rs: RootSystem | None = None, signs=None) -> StructureConstants:
    """Structure constants determined by signs on the 112 extraspecial pairs.

    Non-extraspecial special pairs follow from the four-root identity
    N(a,b)N(-g,-d) + N(b,-g)N(a,-d) + N(-g,a)N(b,-d) = 0, where (g, d) is
    the extraspecial pair of a + b; every other pair reduces to a special
    pair through antisymmetry, N(-a,-b) = -N(a,b) and the cyclic rule for
    three roots summing to zero.
    """
    rs = rs or build_e8_root_system()
    pairs = compute_extraspecial_pairs(rs)
    if signs is None:
        signs = [1] * len(pairs)
    signs = [int(s) for s in signs]
    if len(signs) != len(pairs) or any(s not in (1, -1) for s in signs):
        raise ValueError(f"need {len(pairs)} signs in {{+1, -1}}")

    S = rs.sum_table
    neg = rs.negation
    extra_of = {}
    for (a, b), s in zip(pairs, signs):
        extra_of[int(S[a, b])] = (a, b, s)
    memo: dict[tuple[int, int], int] = {}

    def n_any(a, b):
        c = int(S[a, b])
        if c < 0:
            return 0
        pa, pb = a < NPOS, b < NPOS
        if pa and pb:
            return n_pos(a, b)
        if not pa and not pb:
            return -n_pos(int(neg[a]), int(neg[b]))
        # a, b, -c sum to zero: N(a,b) = N(b,-c) = N(-c,a)
        mc = int(neg[c])
        if pa:
            return n_any(b, mc) if c < NPOS else n_any(mc, a)
        return n_any(mc, a) if c < NPOS else n_any(b, mc)

    def n_pos(a, b):
        if a > b:
            return -n_pos(b, a)
        key = (a, b)
        if key in memo:
            return memo[key]
        g, d, s = extra_of[int(S[a, b])]
        if (a, b) == (g, d):
            val = s
        else:
            mg, md = int(neg[g]), int(neg[d])
            val = s * (n_any(b, mg) * n_any(a, md) + n_any(mg, a) * n_any(b, md))
            if val not in (1, -1):
                raise RuntimeError(f"structure constant recursion failed at {key}")
        memo[key] = val
        return val

    table = np.zeros((NROOTS, NROOTS), dtype=np.int8)
    ii, jj = np.nonzero(S >= 0)
    for a, b in zip(ii.tolist(), jj.tolist()):
        table[a, b] = n_any(a, b)

    sc = StructureConstants(
        rs=rs,
        n_table=table,
        coroot_rows=rs.coeffs.copy(),
        extraspecial=tuple(zip(pairs, signs)),
    )
    check_structure_constants(sc)
    return sc


def cocycle_structure_constants(rs: RootSystem | None = None) -> StructureConstants:
    """Structure constants from a bimultiplicative +-1 cocycle on the root lattice.

    N(a, b) = eps(a, b) with eps(a_i, a_j) = -1 exactly when i < j are
    joined in the Dynkin diagram or i == j. Independent of extraspecial pairs;
    used as an oracle.
    """
    rs = rs or build_e8_root_system()
    upper = np.zeros((RANK, RANK), dtype=np.int64)
    for i in range(RANK):
        upper[i, i] = 1
        for j in range(i + 1, RANK):
            if rs.cartan[i, j] == -1:
                upper[i, j] = 1
    c = rs.coeffs
    eps = np.where((c @ upper @ c.T) % 2 == 1, -1, 1)
    root_sum = rs.sum_table >= 0

    # Here [e_a, e_-a] = eps(a, -a) h_a; rescale e_a for negative roots so
    # that [e_a, e_-a] = h_a. With e'_a = s_a e_a,
    # N'(a, b) = s_a s_b s_{a+b} N(a, b).
    scale = np.ones(NROOTS, dtype=np.int64)
    scale[NPOS:] = eps[np.arange(NPOS), np.arange(NPOS, NROOTS)]
    S = np.where(root_sum, rs.sum_table, 0)
    table = np.where(root_sum, eps * scale[:, None] * scale[None, :] * scale[S], 0)
    sc = StructureConstants(
        rs=rs,
        n_table=table.astype(np.int8),
        coroot_rows=rs.coeffs.copy(),
        extraspecial=(),
        source="cocycle",
    )
    check_structure_constants(sc)
    return sc


def check_structure_constants(sc: StructureConstants) -> None:
    """Verify the full Jacobi identity at the level of structure constants.

    Jacobi on e_a, e_b, e_c splits into three families:
      * a+b+c a root, no pair opposite:
        N(b,c)N(a,b+c) + N(c,a)N(b,c+a) + N(a,b)N(c,a+b) = 0
      * a+b+c = 0: N(a,b) = N(b,c) = N(c,a)
      * (e_a, e_-a, e_b): N(-a,b)N(a,b-a) + N(b,a)N(-a,a+b) = (a,b)
    Triples involving h_i hold automatically for any root-graded bracket.
    """
    rs = sc.rs
    N = sc.n_table.astype(np.int64)
    S = rs.sum_table
    neg = rs.negation
    root_sum = S >= 0
    if not np.array_equal(N != 0, root_sum):
        raise RuntimeError("N(a,b) nonzero pattern differs from root sums")
    if not np.array_equal(N, -N.T):
        raise RuntimeError("structure constants are not antisymmetric")
    if not np.array_equal(N[np.ix_(neg, neg)], -N):
        raise RuntimeError("N(-a,-b) != -N(a,b)")

    Np = np.zeros((NROOTS + 1, NROOTS + 1), dtype=np.int64)
    Np[:NROOTS, :NROOTS] = N
    Sp = np.where(root_sum, S, NROOTS)
    ar = np.arange(NROOTS)
    opposite = ar[:, None] == neg[None, :]
    for a in range(NROOTS):
        t1 = N * Np[a, Sp]
        t2 = N[:, a][None, :] * Np[ar[:, None], Sp[:, a][None, :]]
        t3 = N[a, :][:, None] * Np[ar[None, :], Sp[a, :][:, None]]
        total = t1 + t2 + t3
        skip = opposite | (ar[:, None] == neg[a]) | (ar[None, :] == neg[a])
        if np.any(total[~skip]):
            raise RuntimeError(f"Jacobi identity fails for triples with first root {a}")

    ii, jj = np.nonzero(root_sum)
    kk = neg[S[ii, jj]]
    if not (np.array_equal(N[ii, jj], N[jj, kk]) and np.array_equal(N[ii, jj], N[kk, ii])):
        raise RuntimeError("cyclic rule N(a,b) = N(b,c) = N(c,a) fails")

    for a in range(NROOTS):
        ma = int(neg[a])
        lhs = Np[ma, ar] * Np[a, Sp[ma, :]] + N[:, a] * Np[ma, Sp[a, :]]
        keep = (ar != a) & (ar != ma)
        if not np.array_equal(lhs[keep], rs.gram[a, keep]):
            raise RuntimeError(f"Jacobi identity fails on (e_a, e_-a, e_b) for a = {a}")


def ad_root_matrix(sc: StructureConstants, alpha: int) -> np.ndarray:
    """Matrix of [e_alpha, .] on the 248 basis slots (column j = image of slot j)."""
    rs = sc.rs
    m = np.zeros((DIM, DIM), dtype=np.int64)
    m[slot(alpha), :RANK] = -rs.gram[alpha, :RANK]
    m[:RANK, slot(int(rs.negation[alpha]))] = sc.coroot_rows[alpha]
    betas = np.nonzero(rs.sum_table[alpha] >= 0)[0]
    m[RANK + rs.sum_table[alpha, betas], RANK + betas] = sc.n_table[alpha, betas]
    return m


def ad_cartan_matrix(sc: StructureConstants, i: int) -> np.ndarray:
    """Matrix of [h_i, .] (i is 0-based)."""
    m = np.zeros((DIM, DIM), dtype=np.int64)
    idx = np.arange(RANK, DIM)
    m[idx, idx] = sc.rs.gram[:, i]
    return m


def ad_basis_matrix(sc: StructureConstants, k: int) -> np.ndarray:
    return ad_cartan_matrix(sc, k) if k < RANK else ad_root_matrix(sc, k - RANK)


@lru_cache(maxsize=8)
def _structure_triplets(sc: StructureConstants) -> np.ndarray:
    """All nonzero [b_i, b_j] = c b_k as rows (i, j, k, c)."""
    out = []
    for k in range(DIM):
        m = ad_basis_matrix(sc, k)
        rows, cols = np.nonzero(m)
        out.append(np.stack([np.full(rows.size, k), cols, rows, m[rows, cols]], axis=1))
    return np.concatenate(out)


def bracket(sc: StructureConstants, x, y) -> np.ndarray:
    """Exact Lie bracket of two coefficient vectors of length 248."""
    x = np.asarray(x, dtype=object)
    y = np.asarray(y, dtype=object)
    if x.shape != (DIM,) or y.shape != (DIM,):
        raise ValueError("bracket expects vectors of length 248")
    t = _structure_triplets(sc)
    out = np.zeros(DIM, dtype=object)
    xi = x[t[:, 0]]
    yj = y[t[:, 1]]
    mask = (xi != 0) & (yj != 0)
    if mask.any():
        tm = t[mask]
        np.add.at(out, tm[:, 2], xi[mask] * yj[mask] * tm[:, 3].astype(object))
    return out


def basis_vector(k: int) -> np.ndarray:
    v = np.zeros(DIM, dtype=object)
    v[k] = 1
    return v


# ------------------------------------------------------------------ cache


def _digest(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()[:16]


def cache_dir() -> Path:
    return Path(os.environ.get("E8_CACHE_DIR", ".e8cache"))


def load_or_build(signs=None, directory: Path | None = None) -> StructureConstants:
    """Structure constants, read from an ``.npz`` cache when the keys match.

    The cache file stores ``version``, ``order_hash``, ``signs_hash``,
    ``n_table`` and ``coroot_rows``; a mismatch on any key triggers a rebuild.
    """
    rs = build_e8_root_system()
    pairs = compute_extraspecial_pairs(rs)
    sign_arr = np.array(signs if signs is not None else [1] * len(pairs), dtype=np.int64)
    order_hash = _digest(rs.roots)
    signs_hash = _digest(sign_arr)
    directory = Path(directory) if directory is not None else cache_dir()
    path = directory / f"constants-{order_hash}-{signs_hash}.npz"
    if path.exists():
        try:
            with np.load(path) as z:
                ok = (
                    int(z["version"]) == CACHE_VERSION
                    and str(z["order_hash"]) == order_hash
                    and str(z["signs_hash"]) == signs_hash
                )
                if ok:
                    sc = StructureConstants(
                        rs=rs,
                        n_table=z["n_table"].astype(np.int8),
                        coroot_rows=z["coroot_rows"].astype(np.int64),
                        extraspecial=tuple(zip(pairs, sign_arr.tolist())),
                    )
                    check_structure_constants(sc)
                    return sc
        except (OSError, KeyError, ValueError, RuntimeError) as exc:
            print(f"ignoring stale cache {path}: {exc}", file=sys.stderr)
    sc = compute_structure_constants(rs, sign_arr.tolist())
    directory.mkdir(parents=True, exist_ok=True)
    np.savez(
        path,
        version=CACHE_VERSION,
        order_hash=order_hash,
        signs_hash=signs_hash,
        n_table=sc.n_table,
        coroot_rows=sc.coroot_rows,
    )
    return sc


@lru_cache(maxsize=1)
def default_constants() -> StructureConstants:
    """All-+1 extraspecial structure constants (in-memory only)."""
    return compute_structure_constants(build_e8_root_system())
