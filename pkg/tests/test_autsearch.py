import itertools

import numpy as np
import pytest

from schurkit import groups as gr
from schurkit.autsearch import (SearchBudgetExceeded, aut_scheme, automorphism_search, caut_scheme,
                                find_regular_subgroup, flag_orbit_count, is_2transitive_on, isomorphism,
                                normalizer_in_sym, pair_set_orbits)
from schurkit.designs import dev, paley_difference_set
from schurkit.perm import Perm, PermGroup, pair_orbits, regular_representation
from schurkit.scheme import AssociationScheme, class_scheme, orbital_scheme, trivial_scheme

from conftest import brute_force_aut_order


def random_coloring(rng, n, colors=3, symmetric=False):
    c = rng.integers(1, colors + 1, size=(n, n))
    if symmetric:
        c = np.triu(c) + np.triu(c, 1).T
    np.fill_diagonal(c, 0)
    return c


def pentagon():
    return orbital_scheme(PermGroup.dihedral(5))


def test_rank_two_gives_symmetric_group():
    for n in range(1, 8):
        assert aut_scheme(trivial_scheme(n)).order() == int(np.prod(range(1, n + 1)))


def test_pentagon():
    X = pentagon()
    assert aut_scheme(X).order() == 10 == brute_force_aut_order(X.color)
    C = caut_scheme(X)
    assert C.group.order() == 20 and C.aut_order == 10 and C.color_group_order == 2


def test_caut_brute_force_pentagon():
    X = pentagon()
    count = 0
    for p in itertools.permutations(range(5)):
        p = np.array(p)
        img = X.color[p[:, None], p[None, :]]
        # a color permutation pi with img = pi(X) exists iff the map X -> img is well defined
        pairs = set(zip(X.color.ravel().tolist(), img.ravel().tolist()))
        if len(pairs) == X.rank and len({a for a, _ in pairs}) == X.rank:
            count += 1
    assert count == 20


@pytest.mark.parametrize("n", range(2, 8))
def test_brute_force_agreement_random_colorings(rng, n):
    for trial in range(4):
        c = random_coloring(rng, n, colors=2 if trial % 2 else 3, symmetric=trial < 2)
        assert automorphism_search(c).order == brute_force_aut_order(c)


@pytest.mark.parametrize("n", range(3, 8))
def test_brute_force_agreement_orbital_schemes(rng, n):
    for G in (PermGroup.cyclic(n), PermGroup.dihedral(n)):
        X = orbital_scheme(G)
        assert aut_scheme(X).order() == brute_force_aut_order(X.color)


def test_regular_vertex_colors_on_diagonal():
    # diagonal colors distinguish vertices: two classes of sizes 2 and 3
    c = np.ones((5, 5), dtype=int) * 5
    np.fill_diagonal(c, [0, 0, 1, 1, 1])
    assert automorphism_search(c).order == 2 * 6 == brute_force_aut_order(c)


def test_generators_are_sound(rng):
    for X in (class_scheme(gr.psl2(7)), orbital_scheme(PermGroup.dihedral(9)), pentagon()):
        G = aut_scheme(X)
        for g in G.generators:
            img = g.images
            assert np.array_equal(X.color[img[:, None], img[None, :]], X.color)


def test_psl2_7_class_scheme():
    P = gr.psl2(7)
    X = class_scheme(P)
    G = aut_scheme(X)
    right = regular_representation(P, "right")
    left = regular_representation(P, "left")
    for g in list(right.generators) + list(left.generators):
        assert G.contains(g)
    # left x right has order 168^2 (trivial center); the extra factor 2 comes from an
    # outer automorphism composed with inversion, each of which swaps the two classes
    # of elements of order 7
    assert G.order() == 168 * 168 * 2
    inv = Perm(P.inv)
    assert not G.contains(inv)
    assert caut_scheme(X).group.contains(inv)


def test_galois_property():
    for gamma in (PermGroup.dihedral(6), PermGroup.alternating(5), PermGroup.cyclic(8)):
        X = orbital_scheme(gamma)
        A = aut_scheme(X)
        Y = orbital_scheme(A)
        assert X.is_fusion_of(Y)
        A2 = aut_scheme(Y)
        assert A2.order() == A.order()
        assert all(A.contains(g) for g in A2.generators)


def test_isomorphism():
    X = pentagon()
    p = Perm(np.array([3, 0, 4, 1, 2]))
    img = p.images
    Y = np.empty_like(X.color)
    Y[img[:, None], img[None, :]] = X.color
    g = isomorphism(X.color, Y)
    assert g is not None
    assert np.array_equal(Y[g.images[:, None], g.images[None, :]], X.color)
    assert isomorphism(X.color, orbital_scheme(PermGroup.cyclic(5)).color) is None
    assert isomorphism(X.color, np.zeros((4, 4), dtype=int)) is None


def brute_force_normalizer_order(delta: PermGroup) -> int:
    n = delta.degree
    count = 0
    for p in itertools.permutations(range(n)):
        g = Perm(np.array(p))
        gi = g.inverse()
        if all(delta.contains(gi * d * g) for d in delta.generators):
            count += 1
    return count


@pytest.mark.parametrize("n, order", [(5, 20), (6, 12), (7, 42), (8, 32)])
def test_normalizer_of_regular_cyclic(n, order):
    N = normalizer_in_sym(PermGroup.cyclic(n))
    assert N.order() == order
    if n <= 6:
        assert brute_force_normalizer_order(PermGroup.cyclic(n)) == order
    C = PermGroup.cyclic(n)
    assert all(N.contains(g) for g in C.generators)
    for g in N.generators:
        gi = g.inverse()
        assert all(C.contains(gi * d * g) for d in C.generators)


def test_normalizer_of_symmetric_group():
    assert normalizer_in_sym(PermGroup.symmetric(5)).order() == 120


def test_normalizer_rejects_intransitive():
    from conftest import cyc
    with pytest.raises(ValueError):
        normalizer_in_sym(PermGroup(4, [cyc(4, (0, 1))]))


def test_find_regular_subgroup():
    emb = find_regular_subgroup(PermGroup.symmetric(4), gr.elementary_abelian(2, 2))
    assert emb is not None and emb.subgroup().is_regular()
    emb = find_regular_subgroup(PermGroup.symmetric(4), gr.cyclic(4))
    assert emb is not None
    # the embedding is a homomorphism
    G = emb.group
    for a in range(4):
        for b in range(4):
            assert emb.perms[a] * emb.perms[b] == emb.perms[int(G.mul[a, b])]
    assert find_regular_subgroup(PermGroup.dihedral(5), gr.cyclic(5)) is not None
    with pytest.raises(ValueError):
        find_regular_subgroup(PermGroup.alternating(4), gr.alternating_group(4))
    # the pentagon group has no regular subgroup of order 5 other than C5, and D10 is not regular
    assert find_regular_subgroup(PermGroup.cyclic(6), gr.symmetric_group(3)) is None


def test_fano_flags_and_regular_flags():
    B = dev(paley_difference_set(7))
    from schurkit.designs import design_automorphisms
    res = design_automorphisms(B)
    assert res.order == 168
    flags = [(x, 7 + b) for x, b in B.flags()]
    assert len(flags) == 21 and flag_orbit_count(res.group, flags) == 1
    # the cyclic translation group alone has 3 flag orbits
    shift = Perm(np.concatenate([(np.arange(7) + 1) % 7, 7 + (np.arange(7) + 1) % 7]))
    C7 = PermGroup(14, [shift])
    assert flag_orbit_count(C7, flags) == 3


def test_is_2transitive():
    assert is_2transitive_on(PermGroup.symmetric(5))
    assert not is_2transitive_on(PermGroup.dihedral(5))
    assert is_2transitive_on(PermGroup.alternating(4))
    orbs = pair_set_orbits(PermGroup.symmetric(4), [(a, b) for a in range(4) for b in range(4) if a != b])
    assert len(orbs) == 1


def test_node_budget_is_enforced():
    with pytest.raises(SearchBudgetExceeded):
        automorphism_search(trivial_scheme(7).color, node_cap=2)
