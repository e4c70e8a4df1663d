import random

import pytest
from hypothesis import given, settings, strategies as st

from symremoval.errors import (BadModulus, InputError, NoIdentity, NoInverse, NotAssociative,
                               NotClosed, UniverseMismatch, UnknownElement)
from symremoval.groups import (GroupAction, PartitePermutation, Permutation, cyclic_product_group,
                               is_invariant, orbit_of_tuple, orbits_touching, symmetric_group_table,
                               table_group, translation_permutations)


def z_shift(n, step=1):
    return Permutation({v: (v + step) % n for v in range(n)})


def diagonal_zn(n):
    return GroupAction((z_shift(n),), 2)


def test_trivial_orbit():
    act = GroupAction((Permutation.identity(range(4)),), 2)
    assert orbit_of_tuple(act, (1, 3)) == {(1, 3)}


def test_z6_translation_orbit():
    assert orbit_of_tuple(diagonal_zn(6), (0, 5)) == {(v, (v - 1) % 6) for v in range(6)}


def test_transposition_orbit():
    act = GroupAction((Permutation({"a": "b", "b": "a"}, "abc"),), 2)
    assert orbit_of_tuple(act, ("a", "c")) == {("a", "c"), ("b", "c")}


def test_orbit_universe_mismatch():
    with pytest.raises(UniverseMismatch):
        orbit_of_tuple(diagonal_zn(6), (0, 9))
    with pytest.raises(UniverseMismatch):
        orbit_of_tuple(diagonal_zn(6), (0, 1, 2))


def test_orbits_touching_examples():
    act = diagonal_zn(6)
    assert orbits_touching(act, set()) == []
    triv = GroupAction((Permutation.identity(range(6)),), 2)
    s = {(0, 1), (2, 3), (4, 0)}
    orbs = orbits_touching(triv, s)
    assert len(orbs) == 3 and all(o.size == 1 and o.hits == 1 for o in orbs)
    three = {(1, 0), (3, 2), (5, 4)}
    (orb,) = orbits_touching(act, three)
    assert (orb.size, orb.hits) == (6, 3)


def test_is_invariant_examples():
    act = diagonal_zn(6)
    assert is_invariant(act, set())
    universe = {(a, b) for a in range(6) for b in range(6)}
    assert is_invariant(act, universe)
    assert not is_invariant(act, {(0, 5)})


def test_partite_action_moves_by_part():
    p0 = Permutation({0: 1, 1: 0})
    p1 = Permutation.identity([0, 1])
    act = GroupAction((PartitePermutation([p0, p1]),), 2)
    assert orbit_of_tuple(act, ((0, 1), (0, 0))) == {((0, 1), (0, 0)), ((0, 1), (1, 0))}


def test_permutation_must_be_bijective():
    with pytest.raises(InputError):
        Permutation({0: 1, 1: 1})


def test_cyclic_products():
    assert cyclic_product_group([5]).order == 5
    g = cyclic_product_group([2, 3])
    assert g.order == 6 and g.identity == (0, 0)
    assert cyclic_product_group([1]).order == 1
    with pytest.raises(BadModulus):
        cyclic_product_group([0])


def test_group_operations():
    z5 = cyclic_product_group([5])
    assert z5.multiply(2, 4) == 1
    assert z5.invert(2) == 3
    for x in z5:
        assert z5.multiply(z5.identity, x) == x
        assert z5.invert(z5.multiply(x, z5.invert(x))) == z5.identity
    with pytest.raises(UnknownElement):
        z5.multiply(2, 7)
    g = cyclic_product_group([2, 3])
    assert g.multiply((1, 2), (1, 2)) == (0, 1)


def test_table_z2():
    g = table_group([0, 1], [[0, 1], [1, 0]], verify_assoc=True)
    assert g.order == 2 and g.identity == 0 and g.is_abelian()


def test_table_s3():
    names, table = symmetric_group_table(3)
    g = table_group(names, table, verify_assoc=True)
    assert g.order == 6 and not g.is_abelian()
    assert g.identity == "012"
    for x in g:
        assert g.multiply(x, g.invert(x)) == g.identity


def test_table_errors():
    with pytest.raises(NotClosed):
        table_group([0, 1], [[0, 1], [1, 2]])
    with pytest.raises(NotClosed):
        table_group([0, 1], [[0, 1]])
    with pytest.raises((NotClosed, NoInverse)):
        table_group([0, 1], [[0, 1], [1, 1]])
    with pytest.raises(NoIdentity):
        table_group([0, 1], [[1, 1], [1, 1]])


def test_table_associativity_opt_in():
    # a Latin square with identity 0 that is not associative (a loop of order 5)
    els = list(range(5))
    table = [[0, 1, 2, 3, 4],
             [1, 0, 3, 4, 2],
             [2, 4, 0, 1, 3],
             [3, 2, 4, 0, 1],
             [4, 3, 1, 2, 0]]
    g = table_group(els, table)  # structural checks only
    assert g.order == 5
    with pytest.raises(NotAssociative):
        table_group(els, table, verify_assoc=True)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.randoms(use_true_random=False))
def test_orbit_partition_and_invariance(n, rnd):
    act = GroupAction(tuple(z_shift(n, s) for s in rnd.sample(range(n), rnd.randint(1, min(n, 3)))), 2)
    universe = [(a, b) for a in range(n) for b in range(n)]
    s = {x for x in universe if rnd.random() < 0.3}
    orbs = orbits_touching(act, s)
    seen = set()
    for o in orbs:
        assert not (o.members & seen)
        seen |= o.members
        assert o.hits == len(o.members & s)
        assert n % o.size == 0  # translation subgroup of Z_n
    assert s <= seen
    chosen = set()
    for o in orbs:
        if rnd.random() < 0.5:
            chosen |= o.members
    assert is_invariant(act, chosen)


@pytest.mark.parametrize("group", [cyclic_product_group([n]) for n in range(1, 13)]
                         + [cyclic_product_group([2, 3]), cyclic_product_group([2, 2, 3]),
                            table_group(*symmetric_group_table(3))])
def test_diagonal_translation_orbits_are_cosets(group):
    act = GroupAction(tuple(translation_permutations(group, group.generators())), 2)
    rnd = random.Random(group.order)
    els = list(group.elements)
    for _ in range(5):
        a, b = rnd.choice(els), rnd.choice(els)
        expected = {(group.multiply(a, g), group.multiply(b, g)) for g in els}
        orb = orbit_of_tuple(act, (a, b))
        assert orb == expected and len(orb) == group.order
