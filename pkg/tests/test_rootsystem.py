import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from e8galois.rootsystem import (
    NPOS,
    NROOTS,
    cartan_pairing,
    coxeter_m,
    dynkin_cartan_matrix,
)

root_index = st.integers(0, NROOTS - 1)


def brute_force_roots():
    """Norm-2 vectors of Gamma_8 by scanning the doubled box {-2..2}^8."""
    out = set()
    for v in itertools.product(range(-2, 3), repeat=8):
        if sum(x * x for x in v) != 8:
            continue
        if all(x % 2 == 0 for x in v):
            out.add(v)
        elif all(x % 2 for x in v) and sum(1 for x in v if x < 0) % 2 == 0:
            out.add(v)
    return out


def test_count_and_families(rs):
    assert rs.roots.shape == (240, 8)
    oracle = brute_force_roots()
    assert {tuple(int(x) for x in r) for r in rs.roots} == oracle
    even = sum(all(x % 2 == 0 for x in r) for r in rs.roots)
    assert (even, NROOTS - even) == (112, 128)
    assert np.all((rs.roots**2).sum(axis=1) == 8)


def test_cartan_matches_dynkin(rs):
    assert np.array_equal(rs.cartan, dynkin_cartan_matrix())
    assert rs.cartan[0, 2] == -1 and rs.cartan[0, 1] == 0


def test_positive_roots_and_order(rs):
    assert np.all(rs.height[:NPOS] > 0) and np.all(rs.height[NPOS:] < 0)
    assert np.array_equal(rs.coeffs[:8], np.eye(8, dtype=np.int64))
    assert np.array_equal(rs.roots[NPOS:], -rs.roots[:NPOS])
    h = rs.height[:NPOS]
    assert np.all(np.diff(h) >= 0)
    assert rs.root_height(rs.highest_root) == 29
    assert rs.coeffs[rs.highest_root].tolist() == [2, 3, 4, 6, 5, 4, 3, 2]


def test_cartan_pairing_examples(rs):
    a1, a3 = rs.roots[0], rs.roots[2]
    assert cartan_pairing(a1, a1) == 2
    assert cartan_pairing(a1, a3) == -1
    with pytest.raises(ValueError):
        cartan_pairing(a1, 2 * a1)


def test_sum_table_consistency(rs):
    ii, jj = np.nonzero(rs.sum_table >= 0)
    assert np.array_equal(rs.sum_table, rs.sum_table.T)
    assert np.array_equal(rs.roots[ii] + rs.roots[jj], rs.roots[rs.sum_table[ii, jj]])
    # every root has 56 partners b with a + b a root
    assert np.all((rs.sum_table >= 0).sum(axis=1) == 56)
    assert rs.root_sum_index(0, 0) is None
    assert np.array_equal(rs.negation[rs.negation], np.arange(NROOTS))


@given(root_index, root_index)
def test_reflection_is_isometric_involution(rs, i, a):
    j = rs.reflect_root(i, a)
    assert rs.reflect_root(j, a) == i
    assert rs.pairing(j, a) == -rs.pairing(i, a)


@settings(max_examples=50)
@given(root_index, root_index)
def test_pairing_range(rs, i, j):
    v = rs.pairing(i, j)
    assert v in (-2, -1, 0, 1, 2)
    assert (v == 2) == (i == j) and (v == -2) == (j == rs.negation[i])


def test_coxeter_m():
    assert coxeter_m(1, 3) == 3 and coxeter_m(3, 1) == 3
    assert coxeter_m(1, 2) == 2 and coxeter_m(5, 5) == 1


def test_dump(rs, tmp_path):
    p = tmp_path / "roots.txt"
    rs.dump(p)
    rows = [list(map(int, ln.split())) for ln in p.read_text().splitlines()]
    assert np.array_equal(np.array(rows), rs.roots)
