"""The E8 root system in exact doubled coordinates.

Every root is stored as 8 integers equal to twice the real coordinates, so the
half-integer family needs no rationals. Inner products are recovered by
dividing the integer dot product by 4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

RANK = 8
NROOTS = 240
NPOS = 120

# Edges of the E8 Dynkin diagram in Bourbaki numbering (1-based).
DYNKIN_EDGES = ((1, 3), (3, 4), (2, 4), (4, 5), (5, 6), (6, 7), (7, 8))

# Bourbaki simple roots, doubled coordinates.
SIMPLE_ROOTS_DOUBLED = (
    (1, -1, -1, -1, -1, -1, -1, 1),
    (2, 2, 0, 0, 0, 0, 0, 0),
    (-2, 2, 0, 0, 0, 0, 0, 0),
    (0, -2, 2, 0, 0, 0, 0, 0),
    (0, 0, -2, 2, 0, 0, 0, 0),
    (0, 0, 0, -2, 2, 0, 0, 0),
    (0, 0, 0, 0, -2, 2, 0, 0),
    (0, 0, 0, 0, 0, -2, 2, 0),
)


def coxeter_m(i: int, j: int) -> int:
    """Order of w_i w_j in the Coxeter presentation (1-based labels)."""
    if i == j:
        return 1
    return 3 if (min(i, j), max(i, j)) in DYNKIN_EDGES else 2


def dynkin_cartan_matrix() -> np.ndarray:
    a = 2 * np.eye(RANK, dtype=np.int64)
    for i, j in DYNKIN_EDGES:
        a[i - 1, j - 1] = a[j - 1, i - 1] = -1
    return a


def _enumerate_doubled_roots() -> list[tuple[int, ...]]:
    out = []
    for i, j in itertools.combinations(range(RANK), 2):
        for si, sj in itertools.product((2, -2), repeat=2):
            v = [0] * RANK
            v[i], v[j] = si, sj
            out.append(tuple(v))
    for signs in itertools.product((1, -1), repeat=RANK):
        if signs.count(-1) % 2 == 0:
            out.append(signs)
    return out


def cartan_pairing(beta, alpha) -> int:
    """Exact inner product (beta, alpha) of two doubled-coordinate vectors.

    For E8 every root has norm 2, so this is also <beta, alpha^vee>.
    """
    a = np.asarray(alpha, dtype=np.int64)
    if int(a @ a) != 8:
        raise ValueError("alpha is not a root (doubled norm must be 8)")
    dot = int(np.asarray(beta, dtype=np.int64) @ a)
    if dot % 4:
        raise ValueError("pairing is not integral; beta is not in the root lattice")
    return dot // 4


@dataclass(frozen=True, eq=False)
class RootSystem:
    """All 240 roots plus the combinatorial tables built on them.

    Roots 0..119 are positive, sorted by height and then by descending
    coefficient vector (so indices 0..7 are alpha_1..alpha_8); root
    ``120 + i`` is the negative of root ``i``.
    """

    roots: np.ndarray  # (240, 8) doubled coordinates
    coeffs: np.ndarray  # (240, 8) simple-root expansions
    simple: tuple[int, ...]
    cartan: np.ndarray
    gram: np.ndarray  # (240, 240) inner products
    sum_table: np.ndarray  # (240, 240) index of roots[i]+roots[j], or -1
    height: np.ndarray
    negation: np.ndarray
    _index: dict = field(repr=False)

    def index(self, vec) -> int:
        """Index of a root given by doubled coordinates."""
        return self._index[tuple(int(x) for x in vec)]

    def index_of_coeffs(self, coeffs) -> int:
        vec = np.asarray(coeffs, dtype=np.int64) @ self.roots[: RANK]
        return self.index(vec)

    def root_sum_index(self, i: int, j: int) -> int | None:
        k = int(self.sum_table[i, j])
        return None if k < 0 else k

    def reflect_root(self, i: int, alpha: int) -> int:
        """Index of s_alpha(beta) = beta - (beta, alpha) alpha with beta = roots[i]."""
        vec = self.roots[i] - int(self.gram[i, alpha]) * self.roots[alpha]
        return self.index(vec)

    def root_height(self, i: int) -> int:
        return int(self.height[i])

    def pairing(self, i: int, j: int) -> int:
        return int(self.gram[i, j])

    @property
    def highest_root(self) -> int:
        return int(np.argmax(self.height))

    def dump(self, path) -> None:
        lines = [" ".join(str(int(x)) for x in r) for r in self.roots]
        Path(path).write_text("\n".join(lines) + "\n")


@lru_cache(maxsize=1)
def build_e8_root_system() -> RootSystem:
    doubled = np.array(_enumerate_doubled_roots(), dtype=np.int64)
    simple = np.array(SIMPLE_ROOTS_DOUBLED, dtype=np.int64)

    cartan = (simple @ simple.T) // 4
    if not np.array_equal(cartan, dynkin_cartan_matrix()):
        raise RuntimeError("simple roots do not reproduce the E8 Cartan matrix")

    # Expansion over simple roots: doubled = coeffs @ simple.
    inv = np.linalg.inv(simple.T.astype(float))
    coeffs = np.rint(doubled @ inv.T).astype(np.int64)
    if not np.array_equal(coeffs @ simple, doubled):
        raise RuntimeError("a root is not an integral combination of simple roots")
    pos = np.all(coeffs >= 0, axis=1)
    neg = np.all(coeffs <= 0, axis=1)
    if not np.all(pos ^ neg):
        raise RuntimeError("a root has mixed-sign simple-root expansion")

    pos_coeffs = sorted(
        (tuple(int(x) for x in c) for c in coeffs[pos]),
        key=lambda c: (sum(c), tuple(-x for x in c)),
    )
    if len(doubled) != NROOTS or len(pos_coeffs) != NPOS:
        raise RuntimeError("wrong number of E8 roots")
    cpos = np.array(pos_coeffs, dtype=np.int64)
    ordered_coeffs = np.vstack([cpos, -cpos])
    roots = ordered_coeffs @ simple
    index = {tuple(int(x) for x in r): k for k, r in enumerate(roots)}

    gram = (roots @ roots.T) // 4
    negation = np.concatenate([np.arange(NPOS, NROOTS), np.arange(NPOS)])
    height = ordered_coeffs.sum(axis=1)

    # alpha + beta is a root exactly when (alpha, beta) = -1.
    sum_table = np.full((NROOTS, NROOTS), -1, dtype=np.int64)
    ii, jj = np.nonzero(gram == -1)
    for i, j in zip(ii.tolist(), jj.tolist()):
        sum_table[i, j] = index[tuple(int(x) for x in roots[i] + roots[j])]

    return RootSystem(
        roots=roots,
        coeffs=ordered_coeffs,
        simple=tuple(range(RANK)),
        cartan=cartan,
        gram=gram,
        sum_table=sum_table,
        height=height,
        negation=negation,
        _index=index,
    )
