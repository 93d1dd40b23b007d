"""Quantified constraint satisfaction over reflexive tournaments.

Graph primitives, homomorphism search, the cylinder gadget and spill sets,
the reduction builder, the QCSP solvers and the verification suites.
"""

from .errors import (
    BudgetExceeded, CapExceeded, EngineRefused, GraphError, NotAPolymorphism, NotATournament,
    NotStronglyConnected, NotTransitive, PaperCheckFailure, QctError, SentenceSyntaxError,
)
from .graph import (
    Digraph, LabeledGraph, SccChain, Tournament, chain_tournament, check_reflexive_tournament,
    enumerate_tournaments, hamilton_cycle, make_digraph, power, product_with_constants,
    reflexive_directed_cycle, scc_chain, transitive_tournament,
)
from .morphisms import (
    HomConstraints, Mapping, endomorphism_class, enumerate_homs, find_hom, pair_endo_trivial,
    polymorphisms, retraction_to,
)
from .gadgets import build_cyl, full_spill_nonretract_search, spill
from .qcsp import Atom, ConstantFalse, QcspSentence, eliminate_equality, parse_sentence, serialize, solve_game
from .tractable import Answer, Classification, classify, solve, solve_q2sat, tt2_implication_form
from .reductions import ReductionConfig, build_reduction, canonical_query, qcsp_containment
from .certificate import HardnessCertificate, find_hardness_certificate, verify_certificate

__version__ = "0.1.0"

__all__ = [
    "Answer", "Atom", "BudgetExceeded", "CapExceeded", "Classification", "ConstantFalse", "Digraph",
    "EngineRefused", "GraphError", "HardnessCertificate", "HomConstraints", "LabeledGraph", "Mapping",
    "NotAPolymorphism", "NotATournament", "NotStronglyConnected", "NotTransitive", "PaperCheckFailure",
    "QcspSentence", "QctError", "ReductionConfig", "SccChain", "SentenceSyntaxError", "Tournament",
    "build_cyl", "build_reduction", "canonical_query", "chain_tournament", "check_reflexive_tournament",
    "classify", "eliminate_equality", "endomorphism_class", "enumerate_homs", "enumerate_tournaments",
    "find_hardness_certificate", "find_hom", "full_spill_nonretract_search", "hamilton_cycle",
    "make_digraph", "pair_endo_trivial", "parse_sentence", "polymorphisms", "power",
    "product_with_constants", "qcsp_containment", "reflexive_directed_cycle", "retraction_to",
    "scc_chain", "serialize", "solve", "solve_game", "solve_q2sat", "spill", "transitive_tournament",
    "tt2_implication_form", "verify_certificate",
]
