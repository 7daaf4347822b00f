import itertools

import numpy as np
import pytest

from schurkit import groups as gr
from schurkit.designs import paley_difference_set, singer_difference_set
from schurkit.enumerate import enumerate_srings
from schurkit.perm import Perm, PermGroup, regular_representation
from schurkit.scheme import orbital_scheme, validate
from schurkit.sring import (SRing, SRingError, difference_set_identities, difference_set_sring,
                            from_cayley_scheme, group_ring, is_schurian, product_coefficients,
                            relabel_sring, sring_from_action, sring_from_partition, to_cayley_scheme,
                            trivial_sring, validate_sring, wreath_sring)


def brute_product(G, X, Y):
    out = np.zeros(G.order, dtype=int)
    for x in X:
        for y in Y:
            out[G.mul[x, y]] += 1
    return out


def test_product_coefficients_matches_brute_force(rng):
    G = gr.dihedral(10)
    A = sring_from_partition(G, G.conjugacy_classes())
    coef = product_coefficients(G, A.indicator())
    for i, j in itertools.product(range(A.rank), repeat=2):
        assert np.array_equal(coef[i, j], brute_product(G, A.classes[i], A.classes[j]))


def test_validate_c4():
    C4 = gr.cyclic(4)
    assert validate_sring(group_ring(C4)) is None
    bad = validate_sring(SRing(C4, [[0], [1], [2, 3]]))
    assert bad is not None and "inverse" in bad.reason
    assert validate_sring(SRing(C4, [[0], [2], [1, 3]])) is None
    with pytest.raises(SRingError):
        sring_from_partition(C4, [[0], [1], [2, 3]])


def test_validate_partition_errors():
    C4 = gr.cyclic(4)
    assert "partition" in validate_sring(SRing(C4, [[0], [1, 3]])).reason
    assert "identity" in validate_sring(SRing(C4, [[0, 2], [1, 3]])).reason


@pytest.mark.parametrize("G", [gr.cyclic(6), gr.dihedral(8), gr.alternating_group(4)], ids=["C6", "D8", "A4"])
def test_from_action(G):
    R = regular_representation(G)
    assert sring_from_action(R, G) == group_ring(G)
    assert sring_from_action(PermGroup.symmetric(G.order), G) == trivial_sring(G)
    inn = [Perm([G.conj(x, g) for x in range(G.order)]) for g in G.generators()]
    gamma = PermGroup(G.order, list(R.generators) + inn)
    A = sring_from_action(gamma, G)
    assert sorted(A.classes) == sorted(sorted(c) for c in G.conjugacy_classes())


def test_from_action_needs_right_regular():
    G = gr.cyclic(5)
    with pytest.raises(SRingError):
        sring_from_action(PermGroup(5, [Perm([0, 4, 3, 2, 1])]), G)


def _sample_srings():
    out = []
    for G in (gr.cyclic(8), gr.dihedral(8), gr.quaternion_generalized(8), gr.cyclic(9),
              gr.dihedral(10), gr.alternating_group(4), gr.dihedral(12)):
        out.extend(enumerate_srings(G))
    return out


def test_cayley_round_trip(rng):
    pool = _sample_srings()
    picks = rng.choice(len(pool), size=50, replace=False)
    for i in picks:
        A = pool[int(i)]
        X = to_cayley_scheme(A)
        assert X.rank == A.rank and validate(X) is None
        assert from_cayley_scheme(X, A.group) == A
    G = gr.dihedral(8)
    X = to_cayley_scheme(group_ring(G))
    assert X.rank == 8


def test_cayley_convention_is_g_times_h_inverse():
    # with X = {g : (g, e) in R} the pair (g, h) has the class of g h^-1
    G = gr.dihedral(6)
    A = sring_from_partition(G, [[0], [1, 2], [3], [4], [5]], check=False)
    X = to_cayley_scheme(A, check=False)
    for g, h in itertools.product(range(6), repeat=2):
        assert X.color[g, h] == X.color[int(G.mul[g, G.inv[h]]), 0]


def test_from_cayley_scheme_rejects_non_invariant():
    G = gr.cyclic(5)
    X = orbital_scheme(PermGroup.symmetric(5))
    assert from_cayley_scheme(X, G) == trivial_sring(G)
    # a C5-scheme relabeled by a non-affine map is not invariant under the right action
    D = orbital_scheme(PermGroup.dihedral(5))
    p = np.array([0, 2, 1, 3, 4])
    from schurkit.scheme import AssociationScheme
    Z = AssociationScheme(D.color[p[:, None], p[None, :]])
    with pytest.raises(SRingError):
        from_cayley_scheme(Z, G)


def test_sring_invariants():
    for A in _sample_srings():
        assert sum(len(c) for c in A.classes) == A.group.order
        G = A.group
        for i, c in enumerate(A.classes):
            j = int(A.class_of[G.inv[c[0]]])
            assert A.structure_constants()[i, j, 0] == len(c)


def test_group_ring_schurian():
    for G in (gr.cyclic(6), gr.dihedral(8)):
        assert is_schurian(group_ring(G)).schurian


def test_schurity_certificate_replay():
    for A in enumerate_srings(gr.dihedral(8)):
        v = is_schurian(A)
        assert v.schurian
        assert sring_from_action(v.aut, A.group) == A


def test_non_schurian_split_certificate():
    A = difference_set_sring(paley_difference_set(19))
    v = is_schurian(A)
    assert not v.schurian
    c, a, b = v.split
    X = v.scheme
    assert X.color[a] == X.color[b] == c
    from schurkit.perm import pair_orbits
    orb = pair_orbits(v.aut)
    assert orb[a] != orb[b]


def test_schurity_stable_under_relabeling(rng):
    for q in (7, 19):
        A = difference_set_sring(paley_difference_set(q))
        perm = np.concatenate([[0], 1 + rng.permutation(A.group.order - 1)])
        B = relabel_sring(A, perm)
        assert validate_sring(B) is None
        assert is_schurian(A).schurian == is_schurian(B).schurian


@pytest.mark.parametrize("q, verdict", [(7, True), (11, True), (19, False), (23, False)])
def test_paley_verdicts(q, verdict):
    assert is_schurian(difference_set_sring(paley_difference_set(q))).schurian is verdict


def test_difference_set_sring_shape():
    ds = paley_difference_set(7)
    A = difference_set_sring(ds)
    assert A.rank == 4 and [len(c) for c in A.classes] == [1, 6, 3, 4]
    assert validate(to_cayley_scheme(A)) is None
    assert A.product(1, 1) == {0: 6, 1: 5}
    assert difference_set_sring(paley_difference_set(11)).product(1, 2) == {2: 4, 3: 5}


def _all_sets():
    return [paley_difference_set(q) for q in (7, 11, 19, 23)] + \
        [singer_difference_set(q, d) for q, d in ((2, 2), (2, 3), (3, 2))]


@pytest.mark.parametrize("ds", _all_sets(), ids=lambda d: d.name)
def test_difference_set_identities(ds):
    A = difference_set_sring(ds)
    for name, (got, expected) in difference_set_identities(A, ds).items():
        assert got == expected, name
    n, k, lam = ds.params
    # every product of basic sets has |X||Y| terms in total
    sizes = [len(c) for c in A.classes]
    xy = A.product(2, 3)
    assert sum(v * sizes[c] for c, v in xy.items()) == k * (n - k)
    assert xy == {1: k - lam}


def test_difference_set_identities_against_brute_force():
    ds = paley_difference_set(11)
    A = difference_set_sring(ds)
    G = A.group
    for i, j in itertools.product(range(4), repeat=2):
        counts = brute_product(G, A.classes[i], A.classes[j])
        assert A.product(i, j) == {k: int(counts[c[0]]) for k, c in enumerate(A.classes) if counts[c[0]]}


def _c6_parts():
    G = gr.cyclic(6)
    N = [0, 3]
    NG, embed = gr.induced_subgroup(G, N)
    Q, proj = gr.quotient(G, N)
    return G, N, NG, embed, Q, proj


def test_wreath_sring_c6():
    G, N, NG, embed, Q, proj = _c6_parts()
    W = wreath_sring(G, N, group_ring(NG), trivial_sring(Q), proj, embed)
    assert validate_sring(W) is None
    assert W.rank == group_ring(NG).rank + trivial_sring(Q).rank - 1 == 3
    assert sorted(W.classes) == [[0], [1, 2, 4, 5], [3]]


def test_wreath_sring_trivial_top():
    G = gr.cyclic(6)
    NG, embed = gr.induced_subgroup(G, range(6))
    Q, proj = gr.quotient(G, range(6))
    A = sring_from_partition(NG, [[0], [1, 5], [2, 4], [3]])
    W = wreath_sring(G, range(6), A, trivial_sring(Q), proj, embed)
    assert W.classes == A.classes


def test_wreath_sring_rejects_mismatch():
    G, N, NG, embed, Q, proj = _c6_parts()
    with pytest.raises(SRingError):
        wreath_sring(G, [0, 2, 4], group_ring(NG), trivial_sring(Q), proj, embed)
