"""Exact engine for egalitarian judgment aggregation.

Computes MaxHam/MaxEq outcomes over logically constrained agendas, checks
egalitarian and strategyproofness axioms exhaustively at desk scale,
searches for strategic manipulations under set-preference extensions,
builds 1-in-3-SAT hardness gadgets, and emits ASP encodings.
"""

from .core import (
    Agenda,
    Domain,
    Judgment,
    Outcome,
    Profile,
    antipodal,
    hamming,
    majority_judgment,
    remove_agent,
)
from .constraints import enumerate_domain, evaluate, format_formula, parse_formula
from .rules import (
    MAXEQ_LEX_RULE,
    MAXEQ_RULE,
    MAXHAM_RULE,
    RuleSpec,
    ScoreBreakdown,
    apply_rule,
    exists_equidistant,
    inequity,
    max_eq,
    max_eq_lex,
    max_ham,
    maxdist,
    score_breakdown,
    table_rule,
)
from .preferences import extension_contract_holds, prefers, set_prefers
from .axioms import (
    AxiomReport,
    Witness,
    check_axiom,
    check_equity,
    check_majoritarian,
    check_maximin,
    check_pigou_dalton,
    check_sen_hammond,
)
from .manipulation import (
    INAPPLICABLE,
    ManipulationFinding,
    check_part_implies_antipodal,
    check_rule,
    find_antipodal,
    find_manipulation,
    find_manipulation_all,
    find_noshow,
)
from .gadgets import GadgetInstance, ThreeCnf, build_gadget, one_in_three_oracle, verify_gadget
from .asp import AspProgram, emit_manipulation_program, emit_outcome_program, parse_answer_sets
from .instances import Instance, load_instance, load_instance_text

__version__ = "0.1.0"

__all__ = [
    "Agenda", "Domain", "Judgment", "Outcome", "Profile",
    "antipodal", "hamming", "majority_judgment", "remove_agent",
    "enumerate_domain", "evaluate", "format_formula", "parse_formula",
    "MAXHAM_RULE", "MAXEQ_RULE", "MAXEQ_LEX_RULE", "RuleSpec", "ScoreBreakdown",
    "apply_rule", "exists_equidistant", "inequity", "max_eq", "max_eq_lex",
    "max_ham", "maxdist", "score_breakdown", "table_rule",
    "extension_contract_holds", "prefers", "set_prefers",
    "AxiomReport", "Witness", "check_axiom", "check_equity", "check_majoritarian",
    "check_maximin", "check_pigou_dalton", "check_sen_hammond",
    "INAPPLICABLE", "ManipulationFinding", "check_part_implies_antipodal",
    "check_rule", "find_antipodal", "find_manipulation", "find_manipulation_all",
    "find_noshow",
    "GadgetInstance", "ThreeCnf", "build_gadget", "one_in_three_oracle", "verify_gadget",
    "AspProgram", "emit_manipulation_program", "emit_outcome_program", "parse_answer_sets",
    "Instance", "load_instance", "load_instance_text",
    "__version__",
]
