"""Glass-box pinpointing on top of the saturation rules.

Every item carries one monotone label, kept as an antichain of minimal models.
A rule instance is pinpointing applicable when the conjunction of its premise
labels does not entail the conjunction of its conclusion labels (absent items
count as false); applying it disjoins the premise conjunction into each
conclusion label. At the fixpoint the label of an item is a pinpointing
formula for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

from . import mono
from .core import Item, Ontology, State, derivable
from .mono import FALSE_AC, Antichain, ac_and_all, ac_entails, ac_or, ac_satisfied
from .normalize import NormalizedOntology, normalize, original_projection
from .saturate import Agenda, NotApplicableError, RuleIndex, RuleInstance, context_names, goal_items


class PinpointingState(Mapping):
    """Immutable map from items to their labels (antichains).

    ``told`` holds the seed labels of the normalized ontology; side premises
    of rule instances are read from it.
    """

    def __init__(self, labels: Mapping[Item, Antichain] = (), told: Optional[Mapping[Item, Antichain]] = None):
        self._labels = dict(labels)
        self.told = dict(told) if told is not None else {}

    def __getitem__(self, item):
        return self._labels[item]

    def __iter__(self):
        return iter(self._labels)

    def __len__(self):
        return len(self._labels)

    def label(self, item: Item) -> Antichain:
        return self._labels.get(item, FALSE_AC)

    def formula(self, item: Item) -> mono.Formula:
        return mono.from_antichain(self.label(item))

    def fm(self, items: Iterable[Item]) -> Antichain:
        return ac_and_all(self.label(i) for i in items)

    def premise_label(self, instance: RuleInstance) -> Antichain:
        """``fm(B0)``: context premises by current label, side premises by seed."""
        return ac_and_all(
            [self.label(p) for p in instance.context_premises]
            + [self.told.get(p, self.label(p)) for p in instance.side_premises]
        )

    def project(self, valuation: Iterable[str]) -> State:
        v = frozenset(valuation)
        return frozenset(it for it, lab in self._labels.items() if ac_satisfied(lab, v))

    def state(self) -> State:
        return frozenset(self._labels)

    def __repr__(self):
        body = ", ".join(f"{it}: {mono.format_antichain(l)}" for it, l in self._labels.items())
        return f"PinpointingState({{{body}}})"


def pin_applicable(instance: RuleInstance, pstate: PinpointingState) -> bool:
    return not ac_entails(pstate.premise_label(instance), pstate.fm(instance.conclusions))


def pin_apply(instance: RuleInstance, pstate: PinpointingState) -> PinpointingState:
    if not pin_applicable(instance, pstate):
        raise NotApplicableError(str(instance))
    premise = pstate.premise_label(instance)
    labels = dict(pstate.items())
    for c in instance.conclusions:
        labels[c] = ac_or(pstate.label(c), premise)
    return PinpointingState(labels, pstate.told)


@dataclass
class TraceStep:
    step: int
    rule: int
    premises: tuple
    premise_label: Antichain
    item: Item
    old: Optional[Antichain]  # None: item was absent
    new: Antichain


@dataclass
class PinpointingTrace:
    steps: list = field(default_factory=list)
    applications: int = 0
    label_weakenings: int = 0
    additions: int = 0

    def labels_of(self, item: Item) -> list:
        """Successive labels ``item`` took during the run."""
        return [s.new for s in self.steps if s.item == item]

    def lines(self) -> Iterator[str]:
        for s in self.steps:
            prem = "; ".join(map(str, s.premises)) or "-"
            old = "absent" if s.old is None else mono.format_antichain(s.old)
            yield "\t".join(
                [
                    str(s.step),
                    str(s.rule),
                    prem,
                    mono.format_antichain(s.premise_label),
                    str(s.item),
                    old,
                    mono.format_antichain(s.new),
                ]
            )


class StrictProgressError(AssertionError):
    pass


class PinpointingSaturator:
    def __init__(
        self,
        normalized: NormalizedOntology,
        goal: Optional[Item] = None,
        *,
        order: str = "fifo",
        seed: Optional[int] = None,
        record: bool = True,
    ):
        self.normalized = normalized
        self.index = RuleIndex(context_names(normalized, goal))
        self.agenda = Agenda(order, seed)
        self.labels: dict = {}
        self.told = {it: normalized.seed_antichain(it) for it in normalized.items}
        self.trace = PinpointingTrace()
        self.record = record

    def run(self) -> "PinpointingSaturator":
        for item in self.normalized.items:
            self.labels[item] = self.told[item]
            self.index.add(item, told=True)
        self.agenda.extend(self.index.initial_instances())
        for item in self.normalized.items:
            self.agenda.extend(self.index.instances_with(item))
        labels, told = self.labels, self.told
        while self.agenda:
            inst = self.agenda.pop()
            premise = ac_and_all(
                [labels[p] for p in inst.context_premises] + [told[p] for p in inst.side_premises]
            )
            if not premise:
                continue
            current = ac_and_all(labels.get(c, FALSE_AC) for c in inst.conclusions)
            if ac_entails(premise, current):
                continue
            self.trace.applications += 1
            changed = []
            added = set()
            for c in inst.conclusions:
                old = labels.get(c)
                new = premise if old is None else ac_or(old, premise)
                if old == new:
                    continue
                labels[c] = new
                changed.append(c)
                if old is None:
                    self.index.add(c)
                    added.add(c)
                    self.trace.additions += 1
                else:
                    if not ac_entails(old, new) or ac_entails(new, old):
                        raise StrictProgressError(f"label of {c} did not strictly weaken")
                    self.trace.label_weakenings += 1
                if self.record:
                    self.trace.steps.append(
                        TraceStep(self.trace.applications, inst.rule, inst.premises, premise, c, old, new)
                    )
            if not changed:
                raise StrictProgressError(f"pinpointing application of {inst} changed nothing")
            for c in changed:
                self.agenda.extend(self.index.instances_with(c, as_side=c in added))
        return self

    @property
    def pstate(self) -> PinpointingState:
        return PinpointingState(self.labels, self.told)


def pin_saturate(
    normalized: NormalizedOntology,
    goal: Optional[Item] = None,
    *,
    order: str = "fifo",
    seed: Optional[int] = None,
    record: bool = True,
) -> tuple[PinpointingState, PinpointingTrace]:
    run = PinpointingSaturator(normalized, goal, order=order, seed=seed, record=record).run()
    return run.pstate, run.trace


def goal_label(pstate: PinpointingState, lhs: str, rhs: str) -> Antichain:
    out = FALSE_AC
    for g in goal_items(lhs, rhs):
        out = ac_or(out, pstate.label(g))
    return out


def pinpointing_antichain(ontology: Ontology, lhs: str, rhs: str, **kw) -> Antichain:
    normalized = normalize(ontology)
    pstate, _ = pin_saturate(normalized, derivable(lhs, rhs), record=False, **kw)
    return goal_label(pstate, lhs, rhs)


def pinpointing_formula(ontology: Ontology, lhs: str, rhs: str, **kw) -> mono.Formula:
    """A monotone formula over axiom labels satisfied exactly by the entailing sub-ontologies."""
    normalized = normalize(ontology)
    pstate, _ = pin_saturate(normalized, derivable(lhs, rhs), record=False, **kw)
    phi = mono.from_antichain(goal_label(pstate, lhs, rhs))
    return original_projection(phi, normalized)


def justifications(ontology: Ontology, lhs: str, rhs: str, **kw) -> Antichain:
    return mono.minimal_models(pinpointing_formula(ontology, lhs, rhs, **kw))


class GoalNotEntailedError(ValueError):
    pass


@dataclass(frozen=True)
class Repairs:
    diagnoses: Antichain
    repairs: Antichain


def repairs_from_justifications(justs: Antichain, labels: Iterable[str]) -> Repairs:
    if not justs:
        raise GoalNotEntailedError("goal is not entailed; nothing to repair")
    diagnoses = mono.minimal_hitting_sets(justs)
    universe = frozenset(labels)
    return Repairs(diagnoses, frozenset(universe - d for d in diagnoses))


def repairs(ontology: Ontology, lhs: str, rhs: str, **kw) -> Repairs:
    """Diagnoses (minimal axiom sets to delete) and repairs (maximal non-entailing subsets)."""
    return repairs_from_justifications(justifications(ontology, lhs, rhs, **kw), ontology.labels)


def project(pstate: PinpointingState, valuation: Iterable[str]) -> State:
    return pstate.project(valuation)
