"""Piecewise testability and piecewise-testable separability of regular
languages, with bounded search oracles and a circuit-value instance builder.
"""

from .automata import (
    AlphabetMismatchError,
    AutomatonError,
    Dfa,
    Nfa,
    ParseError,
    Word,
    equivalent,
    language_empty,
    lift_alphabet,
    membership,
    minimize,
    parse_automaton,
    product_intersection,
    serialize_automaton,
    subset_construction,
    trim,
)
from .piecewise import (
    NontrivialCycle,
    NotMinimalError,
    PtVerdict,
    Triple,
    is_pt_dfa,
    is_pt_nfa,
    verify_pt_witness,
)
from .oracles import (
    Inconclusive,
    KProfile,
    KptSeparator,
    Tower,
    bounded_tower_exists,
    dual_deepening,
    profile_k,
    pt_bounded,
    reachable_profiles,
    separable_by_kpt,
    subsequence,
    verify_separator,
    verify_tower,
)
from .separability import (
    BlockProduct,
    PatternWitness,
    PumpAnchor,
    SepVerdict,
    build_block_product,
    decide_separability,
    expand_pattern,
    maximal_common_cycle_alphabet,
    towers_from_pattern,
    verify_pattern,
)
from .mcvp import (
    Circuit,
    CircuitError,
    Gate,
    build_certificate_dfa,
    build_padded_certificate_dfa,
    build_round_dfa,
    certificate_cycle_alphabet,
    evaluate,
    instance_pair,
    parse_circuit,
    random_circuit,
)

__version__ = "0.1.0"
