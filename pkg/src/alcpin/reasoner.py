"""One object per ontology, answering every query from a single pinpointing run."""

from __future__ import annotations

import re
from functools import cached_property
from typing import Optional

from . import mono
from .core import BOT, Ontology, State, derivable, signature
from .normalize import NormalizedOntology, normalize, original_projection
from .pinpoint import (
    GoalNotEntailedError,
    PinpointingSaturator,
    PinpointingState,
    PinpointingTrace,
    Repairs,
    goal_label,
    repairs_from_justifications,
)
from .saturate import Saturator, entailed_in


NAME_SYNTAX = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class UnknownConceptError(KeyError):
    def __str__(self):
        return f"unknown concept name {self.args[0]!r}"


class Reasoner:
    """Classification, subsumption and pinpointing queries over one ontology.

    The classical and the pinpointing state are each computed once, on first
    use, and shared by all queries over the signature. A query naming a
    concept outside the signature gets a run of its own, with a context for
    that name.
    """

    def __init__(self, ontology: Ontology, *, order: str = "fifo", seed: Optional[int] = None):
        self.ontology = ontology
        self.order = order
        self.seed = seed
        self.names, self.roles = signature(ontology)
        self._classical: dict = {}
        self._pinpointing: dict = {}

    @cached_property
    def normalized(self) -> NormalizedOntology:
        return normalize(self.ontology)

    def _goal(self, lhs: str, rhs: str):
        for name in (lhs, rhs):
            if name != BOT and (not isinstance(name, str) or not NAME_SYNTAX.match(name)):
                raise UnknownConceptError(name)
        if lhs in self.names and (rhs == BOT or rhs in self.names):
            return None
        return derivable(lhs, rhs)

    def _classical_run(self, goal=None) -> Saturator:
        if goal not in self._classical:
            self._classical[goal] = Saturator(
                self.normalized, goal, order=self.order, seed=self.seed
            ).run()
        return self._classical[goal]

    def _pinpointing_run(self, goal=None) -> PinpointingSaturator:
        if goal not in self._pinpointing:
            self._pinpointing[goal] = PinpointingSaturator(
                self.normalized, goal, order=self.order, seed=self.seed
            ).run()
        return self._pinpointing[goal]

    @property
    def state(self) -> State:
        return self._classical_run().state

    @property
    def pstate(self) -> PinpointingState:
        return self._pinpointing_run().pstate

    @property
    def trace(self) -> PinpointingTrace:
        """Trace of the most recent pinpointing run (the shared one if none ran yet)."""
        if not self._pinpointing:
            self._pinpointing_run()
        return list(self._pinpointing.values())[-1].trace

    def subsumes(self, lhs: str, rhs: str) -> bool:
        return entailed_in(self._classical_run(self._goal(lhs, rhs)).index, lhs, rhs)

    def classify(self) -> list[tuple[str, str]]:
        """Entailed ``(A, B)`` and ``(A, BOT)`` pairs over the signature, ``A != B``."""
        index = self._classical_run().index
        names = sorted(self.names, key=mono.natural_key)
        return [
            (a, b)
            for a in names
            for b in names + [BOT]
            if a != b and entailed_in(index, a, b)
        ]

    def explain(self, lhs: str, rhs: str) -> mono.Formula:
        """Pinpointing formula over the ontology's own axiom names."""
        pstate = self._pinpointing_run(self._goal(lhs, rhs)).pstate
        ac = goal_label(pstate, lhs, rhs)
        return original_projection(mono.from_antichain(ac), self.normalized)

    def justifications(self, lhs: str, rhs: str) -> mono.Antichain:
        return mono.minimal_models(self.explain(lhs, rhs))

    def repairs(self, lhs: str, rhs: str) -> Repairs:
        justs = self.justifications(lhs, rhs)
        if not justs:
            raise GoalNotEntailedError(f"{lhs} [= {_rhs_text(rhs)} is not entailed")
        return repairs_from_justifications(justs, self.ontology.labels)


def _rhs_text(rhs: str) -> str:
    return "bot" if rhs == BOT else rhs
