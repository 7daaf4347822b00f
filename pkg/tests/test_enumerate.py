import numpy as np
import pytest

from schurkit import groups as gr
from schurkit.enumerate import (EnumerationBudgetExceeded, EnumStats, brute_force_srings, closure_labels,
                                enumerate_srings, processing_order, schurity_census, sring_closure)
from schurkit.sring import group_ring, trivial_sring, validate_sring


def keyset(srings):
    return {A.key() for A in srings}


def test_closure_examples():
    C5 = gr.cyclic(5)
    assert sring_closure(C5, [[x] for x in range(5)]) == group_ring(C5)
    A = sring_closure(C5, [[0], [1, 2, 3, 4]])
    assert A == trivial_sring(C5) and validate_sring(A) is None
    C4 = gr.cyclic(4)
    assert sorted(sring_closure(C4, [[0], [2], [1, 3]]).classes) == [[0], [1, 3], [2]]
    # {1} forces its inverse {3} apart, then everything splits
    assert sring_closure(C4, [[0], [1], [2, 3]]) == group_ring(C4)


def test_closure_is_idempotent():
    for G in (gr.dihedral(8), gr.cyclic(9)):
        for A in enumerate_srings(G):
            assert sring_closure(G, A.classes) == A


@pytest.mark.parametrize("G, count", [(gr.cyclic(2), 1), (gr.cyclic(4), 3), (gr.cyclic(5), 3)],
                         ids=["C2", "C4", "C5"])
def test_small_counts(G, count):
    assert len(enumerate_srings(G)) == count == len(brute_force_srings(G))


@pytest.mark.parametrize("p", [5, 7, 11])
def test_prime_cyclic_counts(p):
    divisors = sum(1 for d in range(1, p) if (p - 1) % d == 0)
    assert len(enumerate_srings(gr.cyclic(p))) == divisors


def test_e4_contents():
    E4 = gr.elementary_abelian(2, 2)
    ranks = sorted(A.rank for A in brute_force_srings(E4))
    assert ranks == [2, 3, 3, 3, 4]


@pytest.mark.parametrize("G", [gr.cyclic(6), gr.dihedral(6), gr.dihedral(8), gr.quaternion_generalized(8),
                               gr.elementary_abelian(2, 3), gr.cyclic(8)], ids=lambda G: G.label or str(G.order))
def test_enumeration_matches_oracle(G):
    assert keyset(enumerate_srings(G)) == keyset(brute_force_srings(G))


def test_enumerated_are_valid_and_complete_at_ends():
    for G in (gr.dihedral(10), gr.alternating_group(4)):
        found = enumerate_srings(G)
        assert all(validate_sring(A) is None for A in found)
        keys = keyset(found)
        assert group_ring(G).key() in keys and trivial_sring(G).key() in keys
        assert [(A.rank, A.key()) for A in found] == sorted((A.rank, A.key()) for A in found)


def test_processing_order():
    D8 = gr.dihedral(8)
    order = processing_order(D8)
    assert order[0] == 0
    orders = D8.element_orders()[order]
    assert list(orders) == sorted(orders)


def test_budget_exhaustion_keeps_partial():
    with pytest.raises(EnumerationBudgetExceeded) as exc:
        enumerate_srings(gr.dihedral(12), node_budget=5)
    assert isinstance(exc.value.partial, list)


def test_order_caps():
    with pytest.raises(ValueError):
        brute_force_srings(gr.cyclic(9))
    with pytest.raises(ValueError):
        enumerate_srings(gr.cyclic(33))


def test_progress_and_stats():
    seen = []
    st = EnumStats()
    enumerate_srings(gr.dihedral(12), progress=lambda s, f: seen.append((s.nodes, f)), stats=st)
    assert st.nodes > 0 and st.closures > 0 and st.wall_time > 0
    assert all(n % 1000 == 0 for n, _ in seen)


def test_census_small():
    c = schurity_census(gr.cyclic(4))
    assert len(c.rows) == 3 and c.is_schur
    assert schurity_census(gr.quaternion_generalized(8)).is_schur


def test_closure_labels_respects_seed():
    G = gr.dihedral(8)
    lab = closure_labels(G, np.arange(8))
    assert len(set(lab.tolist())) == 8
