import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from e8galois import weyl
from e8galois.rootsystem import NPOS, NROOTS


@pytest.fixture(scope="module")
def chain():
    return weyl.build_group()


def test_simple_reflections(rs):
    for i, s in enumerate(weyl.simple_reflections()):
        assert weyl.is_identity(weyl.compose(s, s))
        assert s[i] == rs.negation[i]
        assert weyl.cycle_type(s) == {1: 126, 2: 57}
        assert weyl.signature(s) == -1
        # s_i permutes the positive roots other than alpha_i
        pos = [j for j in range(NPOS) if j != i]
        assert set(s[pos].tolist()) == set(pos)


def test_order_and_orbits(chain):
    assert chain.order() == weyl.WEYL_ORDER
    assert chain.orbit_sizes[0] == NROOTS
    assert all(weyl.WEYL_ORDER % m == 0 for m in weyl.MAXIMAL_SUBGROUP_INDICES)


def test_membership(chain):
    w = weyl.product_of_reflections([0, 1, 2])
    assert chain.contains(w)
    swap = weyl.identity_perm()
    swap[[0, 1]] = [1, 0]  # not negation-equivariant, so not in W
    assert not chain.contains(swap)
    assert not weyl.commutes_with_negation(swap)


def test_coxeter_element():
    c = weyl.coxeter_element()
    assert weyl.cycle_type(c) == weyl.COXETER_TYPE
    assert weyl.perm_order(c) == 30
    assert weyl.cycle_type(weyl.perm_power(c, 2)) == weyl.TYPE_15
    assert weyl.cycle_type(weyl.perm_power(c, 7)) == {30: 8}  # gcd(7, 30) = 1
    assert weyl.cycle_type(weyl.perm_power(c, 4)) == {15: 16}
    assert weyl.cycle_type(weyl.perm_power(c, 15)) == {2: 120}  # c^15 = -1
    assert weyl.signature_of_type(weyl.TYPE_15) == 1
    assert weyl.signature_of_type(weyl.TYPE_4_8) == -1


def test_coxeter_relations():
    assert all(weyl.coxeter_relations_hold().values())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_elements_are_lattice_automorphisms(chain, seed):
    w = chain.random_element(np.random.default_rng(seed))
    assert chain.contains(w)
    assert weyl.commutes_with_negation(w)
    assert weyl.is_lattice_automorphism(weyl.perm_as_simple_images(w))
    assert weyl.is_identity(weyl.compose(w, weyl.inverse(w)))


def test_lattice_check_rejects_scaling(rs):
    doubled = [2 * rs.roots[i] for i in range(8)]
    assert not weyl.is_lattice_automorphism(doubled)
    assert weyl.lattice_automorphism_check()


def test_batch_cycle_types_match_single(chain):
    perms = chain.random_elements(50, np.random.default_rng(1))
    assert weyl.batch_cycle_types(perms) == [weyl.type_key(weyl.cycle_type(p)) for p in perms]


def test_sampling_reproducible(chain):
    a = weyl.class_frequency_experiment(2000, seed=4, chain=chain)
    b = weyl.class_frequency_experiment(2000, seed=4, chain=chain, chunk=333)
    assert a == b and sum(a.values()) == 2000


def test_binomial_check():
    assert weyl.binomial_check(333, 10000, 1 / 30)["ok"]
    assert not weyl.binomial_check(600, 10000, 1 / 30)["ok"]
