"""Consequence-based ALC reasoning with glass-box axiom pinpointing."""

from .core import (
    BOT,
    And,
    Bot,
    Clause,
    ExClause,
    ExLeft,
    Exists,
    Forall,
    ForallItem,
    LabelledAxiom,
    Literal,
    Name,
    Not,
    Ontology,
    Or,
    Top,
    conjunction,
    derivable,
    disjunction,
    format_concept,
    signature,
)
from .normalize import NormalizedOntology, normalize, original_projection
from .pinpoint import (
    PinpointingState,
    PinpointingTrace,
    Repairs,
    justifications,
    pin_saturate,
    pinpointing_formula,
    repairs,
)
from .reasoner import Reasoner
from .saturate import saturate, subsumes

__all__ = [
    "BOT",
    "And",
    "Bot",
    "Clause",
    "ExClause",
    "ExLeft",
    "Exists",
    "Forall",
    "ForallItem",
    "LabelledAxiom",
    "Literal",
    "Name",
    "Not",
    "NormalizedOntology",
    "Ontology",
    "Or",
    "PinpointingState",
    "PinpointingTrace",
    "Reasoner",
    "Repairs",
    "Top",
    "conjunction",
    "derivable",
    "disjunction",
    "format_concept",
    "justifications",
    "normalize",
    "original_projection",
    "pin_saturate",
    "pinpointing_formula",
    "repairs",
    "saturate",
    "signature",
    "subsumes",
]
