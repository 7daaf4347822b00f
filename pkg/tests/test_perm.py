import itertools

import numpy as np
import pytest

from schurkit import groups as gr
from schurkit.perm import (DEGREE_CAP, Perm, PermGroup, compose, coset_action, orbits, pair_orbits,
                           rank_on_pairs, regular_representation, element_perm, wreath_imprimitive)
from schurkit.scheme import orbital_scheme

from conftest import brute_force_group_order, cyc


def test_compose_identity_and_inverse():
    p = cyc(5, (0, 3, 1), (2, 4))
    e = Perm.identity(5)
    assert compose(e, p) == p
    assert compose(p, p.inverse()).is_identity()
    assert (p * ~p).is_identity()


def test_compose_acts_left_to_right():
    # apply (0 1) first, then (1 2): 0 -> 1 -> 2, 1 -> 0, 2 -> 1
    c = compose(cyc(3, (0, 1)), cyc(3, (1, 2)))
    assert c.images.tolist() == [2, 0, 1]
    assert c == cyc(3, (0, 2, 1))


def test_compose_associative(rng):
    for _ in range(20):
        a, b, c = (Perm(rng.permutation(7)) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_perm_rejects_non_bijection():
    with pytest.raises(ValueError):
        Perm([0, 0, 1])


def test_order_and_cycle_type():
    p = cyc(6, (0, 1, 2), (3, 4))
    assert p.order() == 6
    assert sorted(p.cycle_type()) == [1, 2, 3]
    assert (p ** 6).is_identity()
    assert p ** -1 == p.inverse()


@pytest.mark.parametrize("gens, degree, order", [
    ([[(0, 1)], [(0, 1, 2, 3)]], 4, 24),
    ([[(0, 1, 2, 3, 4)]], 5, 5),
    ([[(0, 1, 2)], [(1, 2, 3)]], 4, 12),
    ([[(0, 1, 2, 3, 4, 5, 6)], [(1, 2, 4), (3, 6, 5)]], 7, 21),
])
def test_chain_order(gens, degree, order):
    G = PermGroup(degree, [Perm.from_cycles(degree, c) for c in gens])
    assert G.order() == order
    assert brute_force_group_order(degree, G.generators) == order


def test_right_regular_d8_order_and_left_commutes():
    D8 = gr.dihedral(8)
    R = regular_representation(D8, "right")
    L = regular_representation(D8, "left")
    assert R.order() == 8 and R.is_regular()
    for g in range(8):
        for h in range(8):
            a, b = element_perm(D8, g, "right"), element_perm(D8, h, "left")
            assert a * b == b * a


def test_regular_c3():
    R = regular_representation(gr.cyclic(3))
    assert R.order() == 3
    assert rank_on_pairs(R) == 3


def test_membership():
    A4 = PermGroup(4, [cyc(4, (0, 1, 2)), cyc(4, (1, 2, 3))])
    assert A4.contains(cyc(4, (0, 1), (2, 3)))
    assert not A4.contains(cyc(4, (0, 1)))
    S4 = PermGroup.symmetric(4)
    assert A4.is_subgroup_of(S4)
    assert all(A4.contains(g) for g in A4.elements())
    assert len(set(A4.elements())) == 12


def test_membership_random_words(rng):
    G = PermGroup(7, [cyc(7, (0, 1, 2, 3, 4, 5, 6)), cyc(7, (1, 2, 4), (3, 6, 5))])
    for _ in range(30):
        w = Perm.identity(7)
        for i in rng.integers(0, 2, size=12):
            w = w * G.generators[i]
        assert G.contains(w)
    assert not G.contains(cyc(7, (0, 1)))


def test_orbits():
    assert orbits(4, [cyc(4, (0, 1), (2, 3))]) == [[0, 1], [2, 3]]
    assert PermGroup.symmetric(5).is_transitive()


def test_point_stabilizers():
    S3 = PermGroup.symmetric(3)
    assert S3.point_stabilizer(0).order() == 2
    C5 = PermGroup.cyclic(5)
    assert C5.point_stabilizer(0).order() == 1
    A4 = PermGroup.alternating(4)
    # brute force: elements of A4 fixing 0
    fix0 = [g for g in A4.elements() if g(0) == 0]
    assert A4.point_stabilizer(0).order() == len(fix0) == 3


def test_orbit_stabilizer(rng):
    for G in (PermGroup.symmetric(5), PermGroup.dihedral(7), PermGroup.alternating(5)):
        for x in range(G.degree):
            assert G.order() == len(G.orbit(x)) * G.point_stabilizer(x).order()


def test_stabilizer_of_identity_in_d10_orbits():
    # Gamma = D10_right * Inn(D10); the identity stabilizer orbits are the conjugacy classes
    D10 = gr.dihedral(10)
    gens = list(regular_representation(D10).generators)
    gens += [Perm([D10.conj(x, g) for x in range(10)]) for g in D10.generators()]
    gamma = PermGroup(10, gens)
    sizes = sorted(len(o) for o in gamma.point_stabilizer(0).orbits())
    assert sizes == sorted(len(c) for c in D10.conjugacy_classes())


def test_coset_action():
    S3 = gr.symmetric_group(3)
    assert coset_action(S3, [0]).order() == 6
    assert coset_action(S3, [0]).is_regular()
    top = coset_action(S3, range(6))
    assert top.degree == 1 and top.order() == 1
    a, b = [x for x in range(6) if S3.element_order(x) == 2][:2]
    with pytest.raises(ValueError):
        coset_action(S3, [0, a, b])


def test_a5_on_cosets_of_involution():
    A5 = gr.alternating_group(5)
    inv = next(x for x in range(60) if A5.element_order(x) == 2)
    G = coset_action(A5, [0, inv])
    assert G.degree == 30 and G.is_transitive() and G.order() == 60


@pytest.mark.parametrize("G, rank", [
    (PermGroup.symmetric(4), 2), (PermGroup.symmetric(2), 2),
    (PermGroup.cyclic(5), 5), (PermGroup.dihedral(5), 3),
])
def test_rank_on_pairs(G, rank):
    assert rank_on_pairs(G) == rank
    assert orbital_scheme(G).rank == rank


def test_pair_orbits_brute_force():
    G = PermGroup.dihedral(6)
    orb = pair_orbits(G)
    elems = list(G.elements())
    for x, y in itertools.product(range(6), repeat=2):
        images = {(g(x), g(y)) for g in elems}
        assert {tuple(p) for p in np.argwhere(orb == orb[x, y])} == images


def test_wreath_imprimitive_order():
    W = wreath_imprimitive(PermGroup.symmetric(2), PermGroup.symmetric(3))
    assert W.degree == 6 and W.order() == 2**3 * 6


def test_degree_cap():
    assert DEGREE_CAP == 10_000
