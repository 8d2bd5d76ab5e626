import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from e8galois.chevalley import (
    DIM,
    ad_basis_matrix,
    ad_cartan_matrix,
    ad_root_matrix,
    basis_vector,
    bracket,
    check_structure_constants,
    cocycle_structure_constants,
    compute_extraspecial_pairs,
    compute_structure_constants,
    load_or_build,
    slot,
)
from e8galois.rootsystem import NPOS, NROOTS, RANK


def test_extraspecial_pairs(rs):
    pairs = compute_extraspecial_pairs(rs)
    assert len(pairs) == 112
    sums = [int(rs.sum_table[a, b]) for a, b in pairs]
    assert sorted(sums) == list(range(RANK, NPOS))  # oracle: 120 positive minus 8 simple
    assert all(a < NPOS and b < NPOS for a, b in pairs)
    assert (0, 2) in pairs  # (alpha_1, alpha_3)


def test_magma_and_gap_sign_conventions(rs, sc):
    assert sc.n(0, 2) == 1 and sc.n(2, 0) == -1
    pairs = compute_extraspecial_pairs(rs)
    signs = [1] * 112
    signs[pairs.index((0, 2))] = -1
    flipped = compute_structure_constants(rs, signs)
    assert flipped.n(0, 2) == -1


def test_invariants(rs, sc):
    n = sc.n_table.astype(int)
    assert np.array_equal(n != 0, rs.sum_table >= 0)
    assert np.array_equal(n, -n.T)
    neg = rs.negation
    assert np.array_equal(n[np.ix_(neg, neg)], -n)
    assert set(np.unique(n).tolist()) == {-1, 0, 1}


def test_extraspecial_entries_equal_signs(rs):
    rng = np.random.default_rng(3)
    signs = rng.choice([-1, 1], size=112)
    s = compute_structure_constants(rs, signs)
    for ((a, b), sg), want in zip(s.extraspecial, signs):
        assert s.n(a, b) == sg == want


def test_bad_signs_rejected(rs):
    with pytest.raises(ValueError):
        compute_structure_constants(rs, [1] * 111)
    with pytest.raises(ValueError):
        compute_structure_constants(rs, [2] * 112)


def test_corrupted_table_is_caught(sc):
    bad = sc.n_table.copy()
    a, b = np.argwhere(bad == 1)[5]
    bad[a, b] = -1
    bad[b, a] = 1
    na, nb = sc.rs.negation[a], sc.rs.negation[b]
    bad[na, nb], bad[nb, na] = 1, -1
    from dataclasses import replace

    with pytest.raises(RuntimeError):
        check_structure_constants(replace(sc, n_table=bad))


def test_cocycle_table(sc):
    co = cocycle_structure_constants()
    n = co.n_table.astype(int)
    assert np.array_equal(n, -n.T)
    # same ad matrices up to a +-1 diagonal: absolute values agree
    for a in range(NROOTS):
        assert np.array_equal(np.abs(ad_root_matrix(sc, a)), np.abs(ad_root_matrix(co, a)))


def test_bracket_cartan_is_abelian(sc):
    for i in range(RANK):
        for j in range(RANK):
            assert not np.any(bracket(sc, basis_vector(i), basis_vector(j)))


def test_bracket_h_e_eigenvalues(rs, sc):
    from e8galois.rootsystem import cartan_pairing

    for i in range(RANK):
        for a in range(0, NROOTS, 7):
            out = bracket(sc, basis_vector(i), basis_vector(slot(a)))
            want = cartan_pairing(rs.roots[a], rs.roots[i])
            expect = basis_vector(slot(a)) * want
            assert np.array_equal(out, expect)


def test_coroot_action_brute_force(rs, sc):
    """[[e_a, e_-a], e_b] = <b, a> e_b for all a, b."""
    from e8galois.rootsystem import cartan_pairing

    for a in range(NPOS):
        h = bracket(sc, basis_vector(slot(a)), basis_vector(slot(int(rs.negation[a]))))
        assert np.array_equal(h[:RANK], rs.coeffs[a])
        assert not np.any(h[RANK:])
        ad_h = sum(int(c) * ad_cartan_matrix(sc, i) for i, c in enumerate(h[:RANK]))
        diag = np.diag(ad_h)[RANK:]
        want = [cartan_pairing(rs.roots[b], rs.roots[a]) for b in range(NROOTS)]
        assert diag.tolist() == want


def test_ad_root_matrix_shape_and_entries(rs, sc):
    for a in range(NROOTS):
        m = ad_root_matrix(sc, a)
        assert m.shape == (DIM, DIM)
        assert np.trace(m) == 0
        col = m[:, slot(int(rs.negation[a]))]
        assert np.array_equal(col[:RANK], sc.coroot_rows[a])
        rest = m.copy()
        rest[:RANK, slot(int(rs.negation[a]))] = 0
        assert np.abs(rest).max() <= 2
    # the coroot column reaches 6 on the highest root
    assert np.abs(ad_root_matrix(sc, rs.highest_root)).max() == 6


@settings(max_examples=30, deadline=None)
@given(st.integers(0, DIM - 1), st.integers(0, DIM - 1))
def test_bracket_antisymmetric(sc, i, j):
    x, y = basis_vector(i), basis_vector(j)
    assert np.array_equal(bracket(sc, x, y), -bracket(sc, y, x))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=DIM, max_size=DIM), st.integers(0, DIM - 1))
def test_bracket_matches_ad_matrix(sc, coeffs, k):
    x = np.array(coeffs, dtype=object)
    via_bracket = bracket(sc, basis_vector(k), x)
    via_matrix = ad_basis_matrix(sc, k) @ np.array(coeffs, dtype=np.int64)
    assert np.array_equal(via_bracket.astype(np.int64), via_matrix)


def test_ad_basis_linearly_independent(sc):
    """Rank 248 of the ad matrices, via a random bilinear projection and rank mod p."""
    p = 1_000_003
    rng = np.random.default_rng(11)
    u = rng.integers(0, 1000, size=(DIM, 20))
    v = rng.integers(0, 1000, size=(DIM, 20))
    rows = np.stack([((u.T @ ad_basis_matrix(sc, k) @ v) % p).ravel() for k in range(DIM)])
    assert _rank_mod_p(rows, p) == DIM


def _rank_mod_p(a, p):
    a = a.copy() % p
    r = 0
    for c in range(a.shape[1]):
        piv = next((i for i in range(r, a.shape[0]) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        nz = np.nonzero(a[:, c])[0]
        for i in nz:
            if i != r:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        r += 1
        if r == a.shape[0]:
            break
    return r


def test_cache_round_trip(tmp_path, sc):
    first = load_or_build(directory=tmp_path)
    files = list(tmp_path.glob("*.npz"))
    assert len(files) == 1
    second = load_or_build(directory=tmp_path)
    assert np.array_equal(first.n_table, sc.n_table)
    assert np.array_equal(second.n_table, sc.n_table)
