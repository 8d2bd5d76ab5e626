"""Adjoint-group elements Ad(x_alpha(u)) and products of them.

Ad(x_alpha(u)) = Id + u ad(e_alpha) + (u**2 / 2) ad(e_alpha)**2, where the
half-square is integral in a Chevalley basis. Products are dense 248x248
matrices, int64 while entries provably fit, Python ints otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .chevalley import DIM, StructureConstants, ad_root_matrix, default_constants
from .rootsystem import NPOS, NROOTS, RANK

_INT64_SAFE = 1 << 62


@dataclass(frozen=True, eq=False)
class AdMatrix:
    """A 248x248 matrix over Z (modulus None) or over F_p."""

    data: np.ndarray
    modulus: int | None = None

    @classmethod
    def identity(cls, modulus: int | None = None, n: int = DIM) -> AdMatrix:
        return cls(np.eye(n, dtype=np.int64), modulus)

    @property
    def shape(self):
        return self.data.shape

    def nnz(self) -> int:
        return int(np.count_nonzero(self.data))

    def max_abs(self) -> int:
        return int(max(abs(int(x)) for x in (self.data.max(), self.data.min())))

    def triplets(self):
        rows, cols = np.nonzero(self.data)
        return rows, cols, self.data[rows, cols]

    def reduce(self, p: int) -> AdMatrix:
        if self.modulus is not None and self.modulus != p:
            raise ValueError("cannot change the modulus of a reduced matrix")
        if self.data.dtype == object:
            red = np.array([[int(x) % p for x in row] for row in self.data], dtype=np.int64)
        else:
            red = self.data % p
        return AdMatrix(red, p)

    def residues(self, p: int) -> np.ndarray:
        """Entries reduced into [0, p) as a fresh int64 array."""
        return self.reduce(p).data.copy() if self.modulus is None else self.data.copy()

    def __eq__(self, other):
        if not isinstance(other, AdMatrix):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.data, other.data)

    __hash__ = None

    def __matmul__(self, other: AdMatrix) -> AdMatrix:
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")
        if self.modulus is not None:
            return AdMatrix(_kernels.matmul_mod(self.data, other.data, self.modulus), self.modulus)
        a, b = self.data, other.data
        if a.dtype != object and b.dtype != object:
            bound = self.max_abs() * int(np.abs(b).sum(axis=0).max())
            if bound < _INT64_SAFE:
                return AdMatrix(a @ b)
        return AdMatrix(_as_int64_if_small(a.astype(object) @ b.astype(object)))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.data, np.eye(self.shape[0], dtype=np.int64)))

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        m = [[int(x) for x in row] for row in self.data]
        n = len(m)
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                mik = m[i][k]
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - mik * m[k][j]) // prev
            prev = m[k][k]
        det = sign * m[n - 1][n - 1]
        return det % self.modulus if self.modulus else det


def _as_int64_if_small(a: np.ndarray) -> np.ndarray:
    if a.size and max(abs(int(a.max())), abs(int(a.min()))) < _INT64_SAFE:
        return a.astype(np.int64)
    return a


@dataclass(frozen=True)
class GeneratorWord:
    """A product x_{r1}(u1) x_{r2}(u2) ... of root-group elements."""

    letters: tuple[tuple[int, int], ...]
    modulus: int | None = None

    def __post_init__(self):
        if not self.letters:
            raise ValueError("a generator word needs at least one letter")
        for r, u in self.letters:
            if not (0 <= r < NROOTS) or int(u) != u:
                raise ValueError(f"bad letter ({r}, {u})")

    def inverse(self) -> GeneratorWord:
        return GeneratorWord(tuple((r, -u) for r, u in reversed(self.letters)), self.modulus)

    def to_json(self) -> list:
        return [[int(r), int(u)] for r, u in self.letters]


def paper_word() -> GeneratorWord:
    """x_{a1}(1) ... x_{a8}(1) x_{-a1}(1) ... x_{-a8}(1)."""
    return GeneratorWord(tuple((i, 1) for i in range(RANK)) + tuple((NPOS + i, 1) for i in range(RANK)))


def sign_twisted_word(eps) -> GeneratorWord:
    eps = [int(e) for e in eps]
    return GeneratorWord(
        tuple((i, eps[i]) for i in range(RANK)) + tuple((NPOS + i, eps[i]) for i in range(RANK))
    )


def parse_letter(token: str) -> int:
    """``+k``/``-k`` is the signed simple root k (1..8); ``r<idx>`` a root index."""
    token = token.strip()
    if token.startswith("r"):
        return int(token[1:])
    if token[:1] in "+-":
        k = int(token[1:])
        if not 1 <= k <= RANK:
            raise ValueError(f"simple index out of range: {token}")
        return k - 1 if token[0] == "+" else NPOS + k - 1
    raise ValueError(f"letter must be +k, -k or r<index>: {token!r}")


def read_word(path) -> GeneratorWord:
    letters = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected '<letter> <u>'")
        letters.append((parse_letter(parts[0]), int(parts[1])))
    return GeneratorWord(tuple(letters))


def write_word(word: GeneratorWord, path) -> None:
    lines = []
    for r, u in word.letters:
        if r < RANK:
            tok = f"+{r + 1}"
        elif NPOS <= r < NPOS + RANK:
            tok = f"-{r - NPOS + 1}"
        else:
            tok = f"r{r}"
        lines.append(f"{tok} {u}")
    Path(path).write_text("\n".join(lines) + "\n")


@lru_cache(maxsize=4096)
def _nilpotent_parts(sc: StructureConstants, alpha: int):
    a = ad_root_matrix(sc, alpha)
    a2 = a @ a
    if np.any(a2 % 2):
        raise RuntimeError(f"ad(e_{alpha})**2 / 2 is not integral")
    return a, a2 // 2


def ad_unipotent(
    alpha: int, u: int, modulus: int | None = None, sc: StructureConstants | None = None
) -> AdMatrix:
    """Ad(x_alpha(u)) = Id + u ad(e_alpha) + u**2 ad(e_alpha)**2 / 2."""
    sc = sc or default_constants()
    a, half_sq = _nilpotent_parts(sc, alpha)
    u = int(u)
    m = np.eye(DIM, dtype=np.int64) + u * a + (u * u) * half_sq
    mat = AdMatrix(m)
    return mat.reduce(modulus) if modulus else mat


@lru_cache(maxsize=8192)
def _step_operator(sc: StructureConstants, alpha: int, u: int, modulus: int | None):
    """Sparse u A + u**2 A**2/2 (optionally reduced), plus its max column abs-sum."""
    a, half_sq = _nilpotent_parts(sc, alpha)
    d = u * a + (u * u) * half_sq
    colsum = int(np.abs(d).sum(axis=0).max())
    if modulus:
        d = d % modulus
    coo = sp.coo_matrix(d)
    return sp.csr_matrix(coo), coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data.astype(np.int64), colsum


def word_product(
    word: GeneratorWord, modulus: int | None = None, sc: StructureConstants | None = None
) -> AdMatrix:
    """Ordered product Ad(x_{r1}(u1)) Ad(x_{r2}(u2)) ... over Z or F_p."""
    sc = sc or default_constants()
    modulus = modulus if modulus is not None else word.modulus
    m = np.eye(DIM, dtype=np.int64)
    for alpha, u in word.letters:
        u = int(u)
        if modulus:
            _, rows, cols, vals, _ = _step_operator(sc, alpha, u % modulus, modulus)
            m = (m + _kernels.right_mul_sparse_mod(m, rows, cols, vals, modulus)) % modulus
            continue
        csr, _, _, _, colsum = _step_operator(sc, alpha, u, None)
        if m.dtype != object and int(np.abs(m).max()) * (colsum + 1) < _INT64_SAFE:
            m = m + (csr.T @ m.T).T
        else:
            d = csr.toarray().astype(object)
            m = m.astype(object)
            m = _as_int64_if_small(m + m @ d)
    return AdMatrix(np.asarray(m), modulus)


def build_paper_element(sc: StructureConstants | None = None) -> AdMatrix:
    return word_product(paper_word(), sc=sc)
