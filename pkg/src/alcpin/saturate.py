"""Consequence-based saturation for ALC.

The seven rules, in the notation of the items in :mod:`alcpin.core`::

    1  ∅                                            -> H ⊓ A ⊑ A
    2  H ⊓ ¬A ⊑ N ⊔ A                               -> H ⊓ ¬A ⊑ N
    3  H ⊑ N1 ⊔ A1 ... H ⊑ Nn ⊔ An,  A1⊓..⊓An ⊑ N    -> H ⊑ N1 ⊔ .. ⊔ Nn ⊔ N
    4  H ⊑ N ⊔ A,  A ⊑ ∃r.B                          -> H ⊑ N ⊔ ∃r.B
    5  H ⊑ M ⊔ ∃r.K,  K ⊑ N ⊔ A,  ∃r.A ⊑ B            -> H ⊑ M ⊔ B ⊔ ∃r.(K ⊓ ¬A)
    6  H ⊑ M ⊔ ∃r.K,  K ⊑ ⊥                          -> H ⊑ M
    7  H ⊑ M ⊔ ∃r.K,  H ⊑ N ⊔ A,  A ⊑ ∀r.B            -> H ⊑ M ⊔ N ⊔ ∃r.(K ⊓ B)

Rule 1 is instantiated for a finite set of contexts: ``{X}`` for every name of
the input signature (no premises), and every filler ``K`` of a present
existential item (with that item as premise). Rule 3 with ``n = 0`` (a side
premise ``⊤ ⊑ N``) reaches the same contexts in the same way. Making context
creation an explicit premise keeps the rule set monotone in the state, which
is what lets labelled runs project onto classical ones.
"""

from __future__ import annotations

import heapq
import random
from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Optional

from .core import (
    BOT,
    Clause,
    ExClause,
    ExLeft,
    ForallItem,
    Item,
    Literal,
    Ontology,
    State,
    conjunction,
    derivable,
    disjunction,
    is_positive,
    item_names,
)
from .normalize import NormalizedOntology, normalize

RULES = {
    1: "∅ → H⊓A ⊑ A",
    2: "H⊓¬A ⊑ N⊔A → H⊓¬A ⊑ N",
    3: "H ⊑ Ni⊔Ai (i≤n), ⊓Ai ⊑ N → H ⊑ ⊔Ni⊔N",
    4: "H ⊑ N⊔A, A ⊑ ∃r.B → H ⊑ N⊔∃r.B",
    5: "H ⊑ M⊔∃r.K, K ⊑ N⊔A, ∃r.A ⊑ B → H ⊑ M⊔B⊔∃r.(K⊓¬A)",
    6: "H ⊑ M⊔∃r.K, K ⊑ ⊥ → H ⊑ M",
    7: "H ⊑ M⊔∃r.K, H ⊑ N⊔A, A ⊑ ∀r.B → H ⊑ M⊔N⊔∃r.(K⊓B)",
}


@dataclass(frozen=True)
class RuleInstance:
    """A ground rule instance.

    The last ``told`` premises are side premises; they must be items of the
    normalized ontology, and pinpointing reads their seed label.
    """

    rule: int
    premises: tuple
    conclusions: tuple
    told: int = 0

    @property
    def context_premises(self) -> tuple:
        return self.premises[: len(self.premises) - self.told]

    @property
    def side_premises(self) -> tuple:
        return self.premises[len(self.premises) - self.told :]

    def __str__(self):
        prem = ", ".join(map(str, self.premises)) or "∅"
        concl = ", ".join(map(str, self.conclusions))
        return f"[{self.rule}] {prem} -> {concl}"


class NotApplicableError(ValueError):
    pass


class SaturationLimitError(RuntimeError):
    """The state grew past the ``max_items`` budget given to the saturator."""


def applicable(instance: RuleInstance, state: State) -> bool:
    return all(p in state for p in instance.premises) and not all(
        c in state for c in instance.conclusions
    )


def apply(instance: RuleInstance, state: State) -> State:
    if not applicable(instance, state):
        raise NotApplicableError(str(instance))
    return frozenset(state) | frozenset(instance.conclusions)


def _is_side4(e: ExClause) -> bool:
    # A ⊑ ∃r.B with A, B names
    return (
        len(e.H) == 1
        and not e.N
        and len(e.K) == 1
        and is_positive(e.H)
        and is_positive(e.K)
    )


def _only(conj) -> str:
    (lit,) = conj
    return lit.name


class RuleIndex:
    """Items of a state, indexed for matching the rule premises.

    Only items added with ``told=True`` serve as side premises.
    """

    def __init__(self, names: Iterable[str] = (), prune: bool = False):
        self.items: dict = {}
        self.told: set = set()
        # Classical runs only need one instance per new conclusion.
        self.prune = prune
        self.eager = frozenset(conjunction(x) for x in names)
        self.clauses_by_H = defaultdict(list)
        self.clauses_by_H_name = defaultdict(list)  # (H, A) -> clauses H ⊑ ..A..
        self.clauses_by_name = defaultdict(list)  # A -> clauses with A on the right
        self.contexts_by_name = defaultdict(dict)  # A -> {H: None}
        self.side3_by_name = defaultdict(list)  # A -> positive-H clauses with A ∈ H
        self.side3_top = []  # ⊤ ⊑ N
        self.ex_by_K = defaultdict(list)
        self.ex_by_H_role = defaultdict(list)
        self.ex_by_role = defaultdict(list)
        self.side4_by_A = defaultdict(list)
        self.exleft_by_rA = defaultdict(list)
        self.forall_by_A = defaultdict(list)

    def __contains__(self, item):
        return item in self.items

    def __len__(self):
        return len(self.items)

    def add(self, item: Item, told: bool = False) -> None:
        if item in self.items:
            return
        self.items[item] = None
        if told:
            self.told.add(item)
        if isinstance(item, Clause):
            H = item.H
            self.clauses_by_H[H].append(item)
            for a in item.M:
                self.clauses_by_H_name[(H, a)].append(item)
                self.clauses_by_name[a].append(item)
                self.contexts_by_name[a][H] = None
            if told and is_positive(H):
                if H:
                    for lit in H:
                        self.side3_by_name[lit.name].append(item)
                else:
                    self.side3_top.append(item)
        elif isinstance(item, ExClause):
            self.ex_by_K[item.K].append(item)
            self.ex_by_H_role[(item.H, item.role)].append(item)
            self.ex_by_role[item.role].append(item)
            if told and _is_side4(item):
                self.side4_by_A[_only(item.H)].append(item)
        elif isinstance(item, ExLeft):
            if told:
                self.exleft_by_rA[(item.role, item.A)].append(item)
        elif isinstance(item, ForallItem):
            if told:
                self.forall_by_A[item.A].append(item)
        else:
            raise TypeError(f"not an item: {item!r}")

    # -- instance enumeration ------------------------------------------------

    def initial_instances(self) -> Iterator[RuleInstance]:
        for ctx in sorted(self.eager, key=_conj_key):
            yield RuleInstance(1, (), (Clause(ctx, disjunction(_only(ctx))),))

    def instances_with(self, item: Item, as_side: bool = True) -> Iterator[RuleInstance]:
        """Every rule instance having ``item`` among its premises, all premises present.

        With ``as_side=False`` only instances using ``item`` as a context premise
        are produced.
        """
        side = as_side and item in self.told
        if isinstance(item, Clause):
            yield from self._with_clause(item, side)
        elif isinstance(item, ExClause):
            yield from self._with_exclause(item, side)
        elif isinstance(item, ExLeft):
            if side:
                yield from self._with_exleft(item)
        elif side:
            yield from self._with_forall(item)

    def _filler_contexts(self):
        for K, exs in list(self.ex_by_K.items()):
            if K not in self.eager and exs:
                yield K, exs

    def _rule3(self, H, side: Clause, fixed: Optional[tuple] = None):
        names = sorted(l.name for l in side.H)
        pools = []
        for i, a in enumerate(names):
            if fixed is not None and fixed[0] == i:
                pools.append((fixed[1],))
            else:
                pools.append(self.clauses_by_H_name.get((H, a), ()))
        if self.prune:
            # fold the pools, keeping one premise tuple per partial disjunction
            partial = {side.M: ()}
            for a, pool in zip(names, pools):
                grown = {}
                for m, combo in partial.items():
                    for c in pool:
                        grown.setdefault(m | (c.M - {a}), combo + (c,))
                partial = grown
            for m, combo in partial.items():
                concl = Clause(H, m)
                if concl not in self.items:
                    yield RuleInstance(3, combo + (side,), (concl,), 1)
            return
        for combo in product(*pools):
            M = set(side.M)
            for a, c in zip(names, combo):
                M |= c.M - {a}
            yield RuleInstance(3, tuple(combo) + (side,), (Clause(H, frozenset(M)),), 1)

    def _with_clause(self, c: Clause, side: bool) -> Iterator[RuleInstance]:
        H, M = c.H, c.M
        # rule 2
        for lit in H:
            if lit.negated and lit.name in M:
                yield RuleInstance(2, (c,), (Clause(H, M - {lit.name}),))
        # rule 3, c as one of the context premises
        sides = {}
        for a in sorted(M):
            sides.update(dict.fromkeys(self.side3_by_name.get(a, ())))
        for t in sides:
            names = sorted(l.name for l in t.H)
            for i, b in enumerate(names):
                if b in M:
                    yield from self._rule3(H, t, (i, c))
        # rule 3, c as the side premise
        if side and is_positive(H):
            if not H:
                for ctx in sorted(self.eager, key=_conj_key):
                    yield RuleInstance(3, (c,), (Clause(ctx, M),), 1)
                for K, exs in self._filler_contexts():
                    for e in list(exs):
                        yield RuleInstance(3, (e, c), (Clause(K, M),), 1)
            else:
                names = sorted(l.name for l in H)
                ctxs = set(self.contexts_by_name.get(names[0], ()))
                for a in names[1:]:
                    ctxs &= self.contexts_by_name.get(a, {}).keys()
                for ctx in sorted(ctxs, key=_conj_key):
                    yield from self._rule3(ctx, c)
        for a in sorted(M):
            # rule 4
            for s in list(self.side4_by_A.get(a, ())):
                yield RuleInstance(4, (c, s), (ExClause(H, M - {a}, s.role, s.K),), 1)
            # rule 5, c as K ⊑ N ⊔ A
            for e in list(self.ex_by_K.get(H, ())):
                for x in list(self.exleft_by_rA.get((e.role, a), ())):
                    yield RuleInstance(
                        5,
                        (e, c, x),
                        (ExClause(e.H, e.N | {x.B}, e.role, H | {Literal(a, True)}),),
                        1,
                    )
            # rule 7, c as H ⊑ N ⊔ A
            for f in list(self.forall_by_A.get(a, ())):
                for e in list(self.ex_by_H_role.get((H, f.role), ())):
                    yield RuleInstance(
                        7,
                        (e, c, f),
                        (ExClause(H, e.N | (M - {a}), f.role, e.K | {Literal(f.B)}),),
                        1,
                    )
        # rule 6
        if not M:
            for e in list(self.ex_by_K.get(H, ())):
                yield RuleInstance(6, (e, c), (Clause(e.H, e.N),))

    def _with_exclause(self, e: ExClause, side: bool) -> Iterator[RuleInstance]:
        H, N, r, K = e.H, e.N, e.role, e.K
        # rule 1 (and rule 3 with n = 0) for the filler context
        if K not in self.eager:
            for lit in sorted(K):
                if not lit.negated:
                    yield RuleInstance(1, (e,), (Clause(K, disjunction(lit.name)),))
            for t in list(self.side3_top):
                yield RuleInstance(3, (e, t), (Clause(K, t.M),), 1)
        # rule 4, e as A ⊑ ∃r.B
        if side and _is_side4(e):
            a = _only(H)
            for c in list(self.clauses_by_name.get(a, ())):
                yield RuleInstance(4, (c, e), (ExClause(c.H, c.M - {a}, r, K),), 1)
        for c in list(self.clauses_by_H.get(K, ())):
            # rule 5
            for a in sorted(c.M):
                for x in list(self.exleft_by_rA.get((r, a), ())):
                    yield RuleInstance(
                        5, (e, c, x), (ExClause(H, N | {x.B}, r, K | {Literal(a, True)}),), 1
                    )
            # rule 6
            if not c.M:
                yield RuleInstance(6, (e, c), (Clause(H, N),))
        # rule 7
        for c in list(self.clauses_by_H.get(H, ())):
            for a in sorted(c.M):
                for f in list(self.forall_by_A.get(a, ())):
                    if f.role == r:
                        yield RuleInstance(
                            7, (e, c, f), (ExClause(H, N | (c.M - {a}), r, K | {Literal(f.B)}),), 1
                        )

    def _with_exleft(self, x: ExLeft) -> Iterator[RuleInstance]:
        for e in list(self.ex_by_role.get(x.role, ())):
            for c in list(self.clauses_by_H_name.get((e.K, x.A), ())):
                yield RuleInstance(
                    5, (e, c, x), (ExClause(e.H, e.N | {x.B}, e.role, e.K | {Literal(x.A, True)}),), 1
                )

    def _with_forall(self, f: ForallItem) -> Iterator[RuleInstance]:
        for c in list(self.clauses_by_name.get(f.A, ())):
            for e in list(self.ex_by_H_role.get((c.H, f.role), ())):
                yield RuleInstance(
                    7, (e, c, f), (ExClause(c.H, e.N | (c.M - {f.A}), f.role, e.K | {Literal(f.B)}),), 1
                )


def _conj_key(h):
    return sorted((l.name, l.negated) for l in h)


# ---------------------------------------------------------------------------
# Scheduling
# ---------------------------------------------------------------------------


class Agenda:
    """Pending rule instances.

    ``fifo`` pops the oldest instance of the lowest-numbered rule, so cheap
    rules drain first and runs are reproducible; ``random`` pops uniformly
    with a seeded generator. Instances already pending are not queued twice.
    """

    def __init__(self, order: str = "fifo", seed: Optional[int] = None):
        if order not in ("fifo", "random"):
            raise ValueError(f"unknown order {order!r}")
        self.order = order
        self.rng = random.Random(seed)
        self._heap: list = []
        self._list: list = []
        self._pending: set = set()
        self._seq = 0

    def push(self, inst: RuleInstance) -> None:
        if inst in self._pending:
            return
        self._pending.add(inst)
        if self.order == "fifo":
            self._seq += 1
            heapq.heappush(self._heap, (inst.rule, self._seq, inst))
        else:
            self._list.append(inst)

    def extend(self, insts: Iterable[RuleInstance]) -> None:
        for inst in insts:
            self.push(inst)

    def pop(self) -> RuleInstance:
        if self.order == "fifo":
            inst = heapq.heappop(self._heap)[2]
        else:
            i = self.rng.randrange(len(self._list))
            self._list[i], self._list[-1] = self._list[-1], self._list[i]
            inst = self._list.pop()
        self._pending.discard(inst)
        return inst

    def __bool__(self):
        return bool(self._pending)


# ---------------------------------------------------------------------------
# Classical saturation
# ---------------------------------------------------------------------------


def context_names(
    normalized: NormalizedOntology, goal: Optional[Item] = None, extra: Iterable[str] = ()
) -> frozenset:
    """Names that get an eager singleton context: the input signature, the goal's names and ``extra``."""
    names = set(normalized.original_names) | set(extra)
    if goal is not None:
        names |= item_names(goal)
    return frozenset(names)


class Saturator:
    """Applies the rules to a normalized ontology until no instance is applicable."""

    def __init__(
        self,
        normalized: NormalizedOntology,
        goal: Optional[Item] = None,
        *,
        order: str = "fifo",
        seed: Optional[int] = None,
        early_exit: bool = False,
        stop_items: Iterable[Item] = (),
        max_items: Optional[int] = None,
        names: Iterable[str] = (),
    ):
        self.normalized = normalized
        self.max_items = max_items
        self.goal = goal
        self.index = RuleIndex(context_names(normalized, goal, names), prune=True)
        self.agenda = Agenda(order, seed)
        self.early_exit = early_exit
        self.stop_items = set(stop_items) | ({goal} if goal is not None else set())
        self.applications = 0

    def _add(self, item: Item) -> None:
        self.index.add(item)
        self._schedule(item)

    def _schedule(self, item: Item) -> None:
        index = self.index
        self.agenda.extend(
            inst
            for inst in index.instances_with(item)
            if any(c not in index.items for c in inst.conclusions)
        )

    def run(self) -> "Saturator":
        for item in self.normalized.items:
            self.index.add(item, told=True)
        self.agenda.extend(self.index.initial_instances())
        for item in self.normalized.items:
            self._schedule(item)
        while self.agenda:
            if self.early_exit and any(g in self.index for g in self.stop_items):
                break
            inst = self.agenda.pop()
            new = [c for c in inst.conclusions if c not in self.index]
            if not new:
                continue
            self.applications += 1
            for c in new:
                self._add(c)
            if self.max_items is not None and len(self.index) > self.max_items:
                raise SaturationLimitError(f"state exceeded {self.max_items} items")
        return self

    @property
    def state(self) -> State:
        return frozenset(self.index.items)


def saturate(
    normalized: NormalizedOntology,
    goal: Optional[Item] = None,
    *,
    order: str = "fifo",
    seed: Optional[int] = None,
    early_exit: bool = False,
    names: Iterable[str] = (),
) -> State:
    """Saturated state; ``names`` adds singleton contexts beyond the signature and the goal."""
    return Saturator(normalized, goal, order=order, seed=seed, early_exit=early_exit, names=names).run().state


def goal_items(lhs: str, rhs: str) -> tuple:
    """Items whose presence certifies ``lhs ⊑ rhs``: the goal itself, or ``lhs ⊑ ⊥``."""
    goal = derivable(lhs, rhs)
    bottom = derivable(lhs, BOT)
    return (goal,) if goal == bottom else (goal, bottom)


def entailed_in(state, lhs: str, rhs: str) -> bool:
    return any(g in state for g in goal_items(lhs, rhs))


def subsumes(ontology: Ontology, lhs: str, rhs: str, *, early_exit: bool = True) -> bool:
    goals = goal_items(lhs, rhs)
    sat = Saturator(normalize(ontology), goals[0], early_exit=early_exit, stop_items=goals).run()
    return entailed_in(sat.index, lhs, rhs)


def rule_instances(
    state: Iterable[Item],
    told: Optional[Iterable[Item]] = None,
    names: Optional[Iterable[str]] = None,
) -> Iterator[RuleInstance]:
    """The instances applicable to ``state``, each once.

    ``told`` are the ontology items allowed as side premises (default: every
    item of the state). Rule 1 is instantiated for the singleton contexts of
    ``names`` (default: every name occurring in the state).
    """
    items = list(state)
    told = set(items) if told is None else set(told)
    if names is None:
        names = set()
        for it in items:
            names |= item_names(it)
    index = RuleIndex(names)
    for it in items:
        index.add(it, told=it in told)
    frozen = frozenset(items)
    seen = set()
    candidates = list(index.initial_instances())
    for it in items:
        candidates.extend(index.instances_with(it))
    for inst in candidates:
        if inst not in seen and applicable(inst, frozen):
            seen.add(inst)
            yield inst
