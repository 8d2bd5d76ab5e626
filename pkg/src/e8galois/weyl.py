"""W(E8) as a permutation group on the 240 roots.

Permutations are int16 arrays ``w`` with ``w[i]`` the image of root ``i``.
The product ``compose(a, b)`` applies ``a`` first, then ``b``.
A deterministic Schreier-Sims builds a base and strong generating set,
which gives the group order, membership testing and uniform sampling.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .rootsystem import NROOTS, RANK, RootSystem, build_e8_root_system, coxeter_m

WEYL_ORDER = 696729600
WEYL_ORDER_FACTORS = {2: 14, 3: 5, 5: 2, 7: 1}

# Indices of the maximal subgroups of W(E8), reference data only.
MAXIMAL_SUBGROUP_INDICES = (12096, 11200, 2025, 1575, 1120, 960, 135, 120, 2)

COXETER_TYPE = {30: 8}
TYPE_15 = {15: 16}
TYPE_4_8 = {4: 2, 8: 29}


def identity_perm(n: int = NROOTS) -> np.ndarray:
    return np.arange(n, dtype=np.int16)


def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a then b."""
    return b[a]


def inverse(a: np.ndarray) -> np.ndarray:
    inv = np.empty_like(a)
    inv[a] = np.arange(a.shape[0], dtype=a.dtype)
    return inv


def is_identity(a: np.ndarray) -> bool:
    return bool(np.array_equal(a, np.arange(a.shape[0])))


def perm_power(a: np.ndarray, k: int) -> np.ndarray:
    out = identity_perm(a.shape[0])
    base = a.copy()
    k = int(k)
    if k < 0:
        base, k = inverse(base), -k
    while k:
        if k & 1:
            out = compose(out, base)
        base = compose(base, base)
        k >>= 1
    return out


def simple_reflection_perm(i: int, rs: RootSystem | None = None) -> np.ndarray:
    """beta -> s_{alpha_i}(beta) on root indices, i in 1..8."""
    if not 1 <= i <= RANK:
        raise ValueError("simple reflection index must be in 1..8")
    rs = rs or build_e8_root_system()
    a = i - 1
    return np.array([rs.reflect_root(b, a) for b in range(NROOTS)], dtype=np.int16)


@lru_cache(maxsize=1)
def simple_reflections() -> tuple[np.ndarray, ...]:
    rs = build_e8_root_system()
    out = tuple(simple_reflection_perm(i, rs) for i in range(1, RANK + 1))
    for w in out:
        w.setflags(write=False)
    return out


def product_of_reflections(indices) -> np.ndarray:
    """s_{i1} s_{i2} ... as a map on roots (rightmost acts first)."""
    gens = simple_reflections()
    w = identity_perm()
    for i in reversed(list(indices)):
        w = compose(w, gens[i - 1])
    return w


def coxeter_element() -> np.ndarray:
    """c = s_1 s_2 ... s_8."""
    return product_of_reflections(range(1, RANK + 1))


# ----------------------------------------------------------- cycle data


def cycle_type(w: np.ndarray) -> dict[int, int]:
    seen = np.zeros(w.shape[0], dtype=bool)
    lengths: Counter = Counter()
    for start in range(w.shape[0]):
        if seen[start]:
            continue
        n, j = 0, start
        while not seen[j]:
            seen[j] = True
            j = int(w[j])
            n += 1
        lengths[n] += 1
    return dict(sorted(lengths.items()))


def signature_of_type(ct: dict[int, int]) -> int:
    return -1 if sum((k - 1) * c for k, c in ct.items()) % 2 else 1


def signature(w: np.ndarray) -> int:
    return signature_of_type(cycle_type(w))


def perm_order(w: np.ndarray) -> int:
    return math.lcm(*cycle_type(w))


def batch_cycle_types(perms: np.ndarray) -> list[tuple]:
    """Cycle types of many permutations at once (rows of ``perms``)."""
    counts = _kernels.cycle_counts(np.ascontiguousarray(perms, dtype=np.int64))
    rows, inv = np.unique(counts, axis=0, return_inverse=True)
    types = [tuple((int(k), int(c)) for k, c in enumerate(row) if c) for row in rows]
    return [types[i] for i in inv.ravel()]


def commutes_with_negation(w: np.ndarray, rs: RootSystem | None = None) -> bool:
    rs = rs or build_e8_root_system()
    neg = rs.negation
    return bool(np.array_equal(w[neg], neg[w]))


# ----------------------------------------------------------- Schreier-Sims


@dataclass
class _Level:
    point: int
    gens: list = field(default_factory=list)
    transversal: dict = field(default_factory=dict)  # orbit point -> perm taking base point there

    def rebuild(self):
        u = {self.point: identity_perm()}
        frontier = [self.point]
        while frontier:
            nxt = []
            for x in frontier:
                for s in self.gens:
                    y = int(s[x])
                    if y not in u:
                        u[y] = compose(u[x], s)
                        nxt.append(y)
            frontier = nxt
        self.transversal = u


@dataclass
class Bsgs:
    """Base, strong generators and transversals of a permutation group."""

    levels: list
    generators: tuple

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    @property
    def orbit_sizes(self) -> list[int]:
        return [len(lv.transversal) for lv in self.levels]

    def order(self) -> int:
        return math.prod(self.orbit_sizes)

    def strip(self, g: np.ndarray, start: int = 0):
        """Sift g through the chain; returns (residue, level reached)."""
        h = g
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            x = int(h[lv.point])
            u = lv.transversal.get(x)
            if u is None:
                return h, i
            h = compose(h, inverse(u))
        return h, len(self.levels)

    def contains(self, g: np.ndarray) -> bool:
        g = np.asarray(g, dtype=np.int16)
        if g.shape != (NROOTS,) or sorted(g.tolist()) != list(range(NROOTS)):
            return False
        h, lvl = self.strip(g)
        return lvl == len(self.levels) and is_identity(h)

    def transversal_arrays(self) -> list[np.ndarray]:
        return [np.stack([lv.transversal[k] for k in sorted(lv.transversal)]) for lv in self.levels]

    def random_picks(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n rows of independent uniform coset indices, one column per level."""
        sizes = self.orbit_sizes
        return np.stack([rng.integers(0, m, size=n) for m in reversed(sizes)], axis=1)[:, ::-1]

    def elements_from_picks(self, picks: np.ndarray) -> np.ndarray:
        tables = self.transversal_arrays()
        g = np.tile(identity_perm().astype(np.int64), (picks.shape[0], 1))
        # g = u_last ... u_0 applied right to left gives each element once
        for lvl in reversed(range(len(tables))):
            pick = tables[lvl][picks[:, lvl]].astype(np.int64)
            g = np.take_along_axis(pick, g, axis=1)
        return g

    def random_elements(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n uniform elements as rows: independent uniform coset picks per level."""
        return self.elements_from_picks(self.random_picks(n, rng))

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        return self.random_elements(1, rng)[0].astype(np.int16)


def schreier_sims(generators) -> Bsgs:
    """Deterministic Schreier-Sims with greedy base points."""
    gens = [np.asarray(g, dtype=np.int16) for g in generators if not is_identity(np.asarray(g))]
    n = NROOTS
    levels: list[_Level] = []

    def first_moved(g) -> int:
        moved = np.nonzero(g != np.arange(n))[0]
        return int(moved[0])

    def fixes_prefix(g, k) -> bool:
        return all(int(g[levels[j].point]) == levels[j].point for j in range(k))

    for g in gens:
        if all(int(g[lv.point]) == lv.point for lv in levels):
            levels.append(_Level(first_moved(g)))
    for i, lv in enumerate(levels):
        lv.gens = [g for g in gens if fixes_prefix(g, i)]
        lv.rebuild()

    chain = Bsgs(levels, tuple(gens))
    i = len(levels) - 1
    while i >= 0:
        lv = levels[i]
        added = False
        for x, ux in list(lv.transversal.items()):
            for s in list(lv.gens):
                y = int(s[x])
                sch = compose(compose(ux, s), inverse(lv.transversal[y]))
                if is_identity(sch):
                    continue
                h, j = chain.strip(sch, i + 1)
                if j < len(levels) or not is_identity(h):
                    if j == len(levels):
                        levels.append(_Level(first_moved(h)))
                    for k in range(i + 1, j + 1):
                        levels[k].gens.append(h)
                        levels[k].rebuild()
                    i = j
                    added = True
                    break
            if added:
                break
        if not added:
            i -= 1
    return chain


@lru_cache(maxsize=1)
def build_group() -> Bsgs:
    return schreier_sims(simple_reflections())


def coxeter_relations_hold() -> dict[tuple[int, int], bool]:
    gens = simple_reflections()
    out = {}
    for i in range(1, RANK + 1):
        for j in range(i, RANK + 1):
            w = compose(gens[j - 1], gens[i - 1])
            out[(i, j)] = is_identity(perm_power(w, coxeter_m(i, j)))
    return out


# ----------------------------------------------------------- sampling


def type_key(ct) -> tuple:
    items = ct.items() if isinstance(ct, dict) else ct
    return tuple(sorted((int(k), int(c)) for k, c in items))


def class_frequency_experiment(
    n_samples: int, seed: int = 0, chain: Bsgs | None = None, chunk: int = 20000
) -> dict[tuple, int]:
    """Cycle-type tallies of uniform samples from W(E8); deterministic per seed."""
    chain = chain or build_group()
    # coset picks are drawn up front so the tally does not depend on chunk
    picks = chain.random_picks(n_samples, np.random.default_rng(seed))
    tally: Counter = Counter()
    for lo in range(0, n_samples, chunk):
        tally.update(batch_cycle_types(chain.elements_from_picks(picks[lo : lo + chunk])))
    return dict(sorted(tally.items()))


def binomial_check(count: int, n: int, p: float, n_sigma: float = 3.0) -> dict:
    sigma = math.sqrt(n * p * (1 - p))
    return {
        "count": count,
        "n": n,
        "expected": n * p,
        "sigma": sigma,
        "z": (count - n * p) / sigma if sigma else 0.0,
        "ok": abs(count - n * p) <= n_sigma * sigma,
    }


# ----------------------------------------------------------- lattice check


def is_lattice_automorphism(images, rs: RootSystem | None = None) -> bool:
    """Whether the linear map sending alpha_j to images[j] preserves Gamma_8 and its roots.

    ``images`` are 8 vectors in doubled coordinates. The map must be integral
    on the simple-root basis, preserve the inner product and permute the roots.
    """
    rs = rs or build_e8_root_system()
    simple = rs.roots[:RANK].astype(np.int64)
    img = np.asarray(images, dtype=np.int64)
    if img.shape != (RANK, RANK):
        return False
    # coefficients of each image over the simple roots
    coeffs = img @ np.linalg.inv(simple).astype(float)
    ci = np.rint(coeffs).astype(np.int64)
    if not np.array_equal(ci @ simple, img):
        return False
    if not np.array_equal(img @ img.T, simple @ simple.T):
        return False
    # image of every root: roots = rs.coeffs @ simple -> rs.coeffs @ img
    mapped = rs.coeffs @ img
    return {tuple(r) for r in mapped.tolist()} == set(rs._index)


def perm_as_simple_images(w: np.ndarray, rs: RootSystem | None = None) -> np.ndarray:
    rs = rs or build_e8_root_system()
    return rs.roots[np.asarray(w[:RANK], dtype=np.int64)]


def lattice_automorphism_check(perms=None) -> bool:
    """All given Weyl permutations (default: the 8 generators) act as automorphisms of Gamma_8."""
    rs = build_e8_root_system()
    perms = simple_reflections() if perms is None else perms
    for w in perms:
        if not is_lattice_automorphism(perm_as_simple_images(w, rs), rs):
            return False
        # the linear map must also reproduce the permutation itself
        img = perm_as_simple_images(w, rs)
        mapped = rs.coeffs @ img
        if any(rs.index(v) != int(w[k]) for k, v in enumerate(mapped)):
            return False
    return True
