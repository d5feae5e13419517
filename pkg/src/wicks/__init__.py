"""Quadratic words and their surfaces, with genus detection in free and
finite groups."""
from .words import Letter, Word, Alphabet, free_reduce, cyclic_reduce, cyclic_normal_form, commutator, product
from .quadratic import signature, is_quadratic, is_orientable, is_redundant, specialisations
from .surface import build_graph, graph_genus, vertex_link, link_table
from .wicks_enum import WicksForm, canonicalize, enumerate_wicks, is_wicks_form
from .extension import Extension, double_edges, insert_cycles, validate_labelling, hamiltonian_label
from .oracle import BudgetExceeded, FiniteGroupOracle, FreeGroupOracle, parse_group
from .detect import (brute_force_genus, genus_minus_free, genus_plus_free, genus_tuple, is_commutator_free,
                     is_commutator_oracle, is_square_oracle, is_two_squares_free, match_wicks, search_genus,
                     verify_certificate, GenusCertificate)

__version__ = "0.1.0"
