"""Schur rings over finite groups, association schemes, and schurity tests."""
from .perm import Perm, PermGroup
from .groups import FiniteGroup
from .scheme import AssociationScheme, fusion, orbital_scheme, wreath
from .autsearch import aut_scheme, automorphism_search, find_regular_subgroup, isomorphism
from .sring import SRing, is_schurian, scheme_schurity, sring_from_partition, validate_sring
from .designs import DifferenceSet, dev, paley_difference_set, singer_difference_set, transitivity_profile
from .enumerate import brute_force_srings, enumerate_srings, schurity_census

__version__ = "0.1.0"

__all__ = [
    "Perm", "PermGroup", "FiniteGroup", "AssociationScheme", "fusion", "orbital_scheme", "wreath",
    "aut_scheme", "automorphism_search", "find_regular_subgroup", "isomorphism",
    "SRing", "is_schurian", "scheme_schurity", "sring_from_partition", "validate_sring",
    "DifferenceSet", "dev", "paley_difference_set", "singer_difference_set", "transitivity_profile",
    "brute_force_srings", "enumerate_srings", "schurity_census",
]
