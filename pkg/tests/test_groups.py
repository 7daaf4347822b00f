import itertools

import numpy as np
import pytest

from schurkit import groups as gr


def exhaustive_axioms(G):
    m = G.mul
    n = G.order
    assert np.array_equal(m[0], np.arange(n)) and np.array_equal(m[:, 0], np.arange(n))
    for row in m:
        assert sorted(row.tolist()) == list(range(n))
    # associativity over all triples
    assert np.array_equal(m[m[:, :, None], np.arange(n)[None, None, :]], m[np.arange(n)[:, None, None], m[None, :, :]])


def brute_center(G):
    return [x for x in range(G.order) if all(G.mul[x, y] == G.mul[y, x] for y in range(G.order))]


CONSTRUCTED = [
    gr.cyclic(12), gr.dihedral(8), gr.dihedral(14), gr.elementary_abelian(3, 2),
    gr.generalized_dihedral(gr.elementary_abelian(3, 2)), gr.quaternion_generalized(16),
    gr.semidihedral(16), gr.modular_M(2, 4), gr.modular_M(3, 3), gr.g16(), gr.sg16_3(),
    gr.frobenius_field(2, 3, 7), gr.frobenius_field(2, 4, 3), gr.psl2(3), gr.symmetric_group(4),
]


@pytest.mark.parametrize("G", CONSTRUCTED, ids=lambda G: f"{G.label or 'G'}-{G.order}")
def test_constructors_satisfy_axioms(G):
    exhaustive_axioms(G)


@pytest.mark.parametrize("G", CONSTRUCTED, ids=lambda G: f"{G.label or 'G'}-{G.order}")
def test_class_sizes_sum_and_divide(G):
    sizes = [len(c) for c in G.conjugacy_classes()]
    assert sum(sizes) == G.order
    assert all(G.order % s == 0 for s in sizes)


def test_generalized_dihedral():
    assert gr.is_isomorphic(gr.generalized_dihedral(gr.cyclic(7)), gr.dihedral(14)) is not None
    G = gr.generalized_dihedral(gr.elementary_abelian(3, 2))
    assert G.order == 18 and G.exponent() == 6
    # H first, then Hg; every element of Hg is an involution
    assert all(G.element_order(x) == 2 for x in range(9, 18))


@pytest.mark.parametrize("n", range(3, 10))
def test_dihedral_center(n):
    D = gr.dihedral(2 * n)
    expect = 1 if n % 2 else 2
    assert len(D.center()) == len(brute_center(D)) == expect


def test_g16_invariants():
    G = gr.g16()
    assert G.order == 16 and G.exponent() == 4
    # a central of order 4; a center of index 2 would force an abelian group
    assert len(G.center()) == len(brute_center(G)) == 4
    assert not G.is_abelian()


def test_small_2_and_3_groups():
    M27 = gr.modular_M(3, 3)
    assert M27.order == 27 and 9 in M27.element_orders().tolist()
    Q8 = gr.quaternion_generalized(8)
    assert int((Q8.element_orders() == 2).sum()) == 1


def test_products():
    S3 = gr.semidirect(gr.cyclic(3), gr.cyclic(2), [[0, 1, 2], [0, 2, 1]])
    assert gr.is_isomorphic(S3, gr.dihedral(6)) is not None
    P = gr.direct_product(gr.elementary_abelian(3, 2), gr.cyclic(2))
    assert P.order == 18 and P.is_abelian()
    C5 = gr.cyclic(5)
    F20 = gr.semidirect(C5, gr.cyclic(4), gr.cyclic_action(C5, 4, [0, 2, 4, 1, 3]))
    assert F20.order == 20 and len(F20.center()) == 1


def test_semidirect_rejects_non_automorphism():
    with pytest.raises(gr.GroupError):
        gr.semidirect(gr.cyclic(3), gr.cyclic(2), [[0, 1, 2], [1, 0, 2]])


def test_frobenius_field():
    G = gr.frobenius_field(2, 3, 7)
    assert G.order == 56
    # normal Sylow-2 subgroup: the first 8 elements, elementary abelian of rank 3
    N = list(range(8))
    assert G.is_normal(N)
    assert all(G.element_order(x) == 2 for x in range(1, 8))
    assert gr.frobenius_field(2, 4, 3).order == 48
    G992 = gr.frobenius_field(2, 5, 31)
    assert G992.order == 992
    x = 32  # generator of the complement
    assert [v for v in range(32) if G992.conj(v, x) == v] == [0]
    with pytest.raises(gr.GroupError):
        gr.frobenius_field(2, 3, 5)


def test_psl2():
    assert gr.psl2(2).order == 6 and gr.is_isomorphic(gr.psl2(2), gr.dihedral(6)) is not None
    assert gr.psl2(3).order == 12 and gr.is_isomorphic(gr.psl2(3), gr.alternating_group(4)) is not None
    P = gr.psl2(7)
    assert P.order == 168
    assert sorted(len(c) for c in P.conjugacy_classes()) == [1, 21, 24, 24, 42, 56]


def test_conjugacy_classes_small():
    assert all(len(c) == 1 for c in gr.cyclic(6).conjugacy_classes())
    assert sorted(len(c) for c in gr.symmetric_group(3).conjugacy_classes()) == [1, 2, 3]


def test_quotient_and_isomorphism():
    D8 = gr.dihedral(8)
    Q, proj = gr.quotient(D8, D8.center())
    assert gr.is_isomorphic(Q, gr.elementary_abelian(2, 2)) is not None
    assert gr.is_isomorphic(gr.cyclic(4), gr.elementary_abelian(2, 2)) is None
    hom = gr.is_isomorphic(gr.generalized_dihedral(gr.cyclic(3)), gr.psl2(2))
    assert hom is not None and hom.is_injective()


def test_isomorphism_reflexive_symmetric():
    sample = [gr.dihedral(8), gr.quaternion_generalized(8), gr.cyclic(8), gr.g16(), gr.sg16_3(),
              gr.modular_M(2, 4), gr.direct_product(gr.cyclic(2), gr.dihedral(8))]
    for A, B in itertools.product(sample, repeat=2):
        ab = gr.is_isomorphic(A, B) is not None
        ba = gr.is_isomorphic(B, A) is not None
        assert ab == ba
        if A is B:
            assert ab


def test_order16_catalogue_pairwise_distinct():
    from schurkit.io import CATALOGUE
    gs = [CATALOGUE[k]() for k in CATALOGUE if k.startswith("16,")]
    for A, B in itertools.combinations(gs, 2):
        assert gr.is_isomorphic(A, B) is None


def test_subgroup_generated_and_automorphisms():
    D8 = gr.dihedral(8)
    r = next(x for x in range(8) if D8.element_order(x) == 4)
    assert len(gr.subgroup_generated(D8, [r])) == 4
    assert len(gr.automorphisms(D8)) == 8
    assert len(gr.automorphisms(gr.cyclic(7))) == 6


def test_relabel_keeps_identity():
    G = gr.cyclic(4)
    with pytest.raises(gr.GroupError):
        G.relabel([1, 0, 2, 3])
