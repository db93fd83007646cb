"""Inverse automata over involutive alphabets, Cayley-graph
constellations, Gaschütz mod-p extension layers, alternating-group
completions, and exact dissolver / disconnection / closure decisions
for finite A-generated groups."""

from .words import (ASCII_LETTERS, EMPTY, Alphabet, Word, concat, format_word,
                    invert, parse_word, power, reduce, word)
from .automata import (InverseAutomaton, LabeledGraph, Subgraph, amalgam,
                       as_inverse_automaton, bouquet, canonical, core_of_words,
                       embed_check, fold, full_subgraph, induced_subgraph, member,
                       path_word, pointed_isomorphic, product_automaton,
                       rank_from_core, read_aut, span_from_base, subgraph_automaton,
                       to_dot, transition_group, trim, write_aut)
from .perms import (AlternatingCertificate, PermGroupGens, Permutation,
                    alternating_certificate, format_cycles, from_cycles,
                    generated_order, is_primitive, is_prime, is_transitive,
                    parse_cycles, prime_power_cycle)
from .groups import (AbelianQuotient, CyclicSpec, ExtensionSpec, KleinSpec,
                     MaterializedGroup, Morphism, OrderBoundError, PermSpec,
                     ProductSpec, abelianization, canonical_morphism,
                     commutator_subgroup, identity_morphism, kernel_elements,
                     materialize, normal_closure, product_A, subgroup_closure,
                     traversal_vector)
from .gaschuetz import (CenterInfo, EdgeVector, GaschuetzElement, GaschuetzLayer,
                        StructureReport, Tower, TowerSpec, build_tower, center,
                        coprime_structure_checks, gaschutz_group,
                        layer_abelianization, order_formula)
from .constellations import (Constellation, MaxConstellationPair, MinimalCut,
                             amalgams_of, assemble_AG, chain_letter, delta_a,
                             maximal_constellations, minimal_cut_sets)
from .completion import (CompletionPlan, PredissolverReport,
                         complete_to_alternating, predissolver_certificate,
                         smallest_prime_greater)
from .dissolve import (DissolveReport, KeyLemmaReport, RankReport,
                       counting_lifts_check, cycle_space_rows,
                       detecting_edges_check, disconnection_equivalence,
                       dissolve_all, dissolves_linear, dissolves_materialized,
                       is_dissolver, is_weak_dissolver, key_lemma_report,
                       reachable_lift, schreier_rank_check)
from .closure import (closure_at_level, closure_chain, extendible_at_level,
                      product_membership_at_level, schreier_graph, subgroup_image)

__version__ = "0.1.0"
