"""Defeasible inference over nested metaphor-pretence spaces.

Reasoning happens inside a tree of spaces: literal knowledge lives in the
reality space at the root; each manifested metaphor gets a pretence cocoon
in which its vehicle vocabulary is treated as literally true. Rules
saturate each space forward, bidirectional conversion rules act as filters
between adjacent spaces, qualitative certainties propagate by weakest
link, and contradictions are adjudicated by certainty within one space.
"""

from .certainty import (
    UNDECIDED,
    Adjudication,
    Certainty,
    CertaintyError,
    adjudicate,
    combine,
)
from .engine import (
    Engine,
    EngineLimits,
    LimitExceeded,
    ProofAnswer,
    QueryAnswer,
    RunResult,
    TraceStep,
    Verdict,
    run_scenario,
    trace_of,
)
from .kb import (
    ConversionRule,
    Diagnostic,
    Domain,
    Fact,
    KnowledgeBase,
    Metaphor,
    Rule,
    Scenario,
    has_errors,
    lint_kb,
    parse_kb,
    parse_kb_texts,
    parse_prop_text,
    parse_scenario,
    render_kb,
    render_scenario,
)
from .spaces import (
    MetaphorPretence,
    Provenance,
    Reality,
    SimulationPretence,
    Space,
    SpaceError,
    SpaceTree,
    StoredProposition,
)
from .terms import (
    Atom,
    Compound,
    Proposition,
    Substitution,
    Term,
    Var,
    is_ground,
    prop_text,
    rename_apart,
    term_text,
    unify,
    unify_props,
)
from .trace import render_trace

__all__ = [
    "Adjudication",
    "Atom",
    "Certainty",
    "CertaintyError",
    "Compound",
    "ConversionRule",
    "Diagnostic",
    "Domain",
    "Engine",
    "EngineLimits",
    "Fact",
    "KnowledgeBase",
    "LimitExceeded",
    "Metaphor",
    "MetaphorPretence",
    "ProofAnswer",
    "Proposition",
    "Provenance",
    "QueryAnswer",
    "Reality",
    "Rule",
    "RunResult",
    "Scenario",
    "SimulationPretence",
    "Space",
    "SpaceError",
    "SpaceTree",
    "StoredProposition",
    "Substitution",
    "Term",
    "TraceStep",
    "UNDECIDED",
    "Var",
    "Verdict",
    "adjudicate",
    "combine",
    "has_errors",
    "is_ground",
    "lint_kb",
    "parse_kb",
    "parse_kb_texts",
    "parse_prop_text",
    "parse_scenario",
    "prop_text",
    "render_kb",
    "render_scenario",
    "render_trace",
    "rename_apart",
    "run_scenario",
    "term_text",
    "trace_of",
    "unify",
    "unify_props",
]
