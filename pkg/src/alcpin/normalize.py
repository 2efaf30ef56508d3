"""Structural transformation of labelled TBoxes into the four normal forms.

Every produced item remembers which input axioms generated it; when several
axioms produce the same item its seed is the disjunction of their labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import mono
from .core import (
    BOT,
    And,
    Clause,
    ExClause,
    ExLeft,
    Exists,
    ForallItem,
    Item,
    Name,
    Not,
    Ontology,
    conjunction,
    disjunction,
    item_names,
    signature,
)

FRESH_PREFIX = "_N"

# Negation normal form, as tuples:
#   ("top",) ("bot",) ("name", A) ("neg", A)
#   ("and", parts) ("or", parts) ("some", r, X) ("all", r, X)
TOP = ("top",)
BOTTOM = ("bot",)


def _mk_and(parts):
    out = []
    for p in parts:
        if p == BOTTOM:
            return BOTTOM
        if p == TOP:
            continue
        for q in p[1] if p[0] == "and" else (p,):
            if q not in out:
                out.append(q)
    for q in out:
        if q[0] == "name" and ("neg", q[1]) in out:
            return BOTTOM
    if not out:
        return TOP
    return out[0] if len(out) == 1 else ("and", tuple(out))


def _mk_or(parts):
    out = []
    for p in parts:
        if p == TOP:
            return TOP
        if p == BOTTOM:
            continue
        for q in p[1] if p[0] == "or" else (p,):
            if q not in out:
                out.append(q)
    for q in out:
        if q[0] == "name" and ("neg", q[1]) in out:
            return TOP
    if not out:
        return BOTTOM
    return out[0] if len(out) == 1 else ("or", tuple(out))


def _mk_some(role, filler):
    return BOTTOM if filler == BOTTOM else ("some", role, filler)


def _mk_all(role, filler):
    return TOP if filler == TOP else ("all", role, filler)


def to_nnf(c, positive: bool = True):
    if isinstance(c, Name):
        if c.name == BOT:
            return BOTTOM if positive else TOP
        return ("name", c.name) if positive else ("neg", c.name)
    if isinstance(c, Not):
        return to_nnf(c.arg, not positive)
    if isinstance(c, And):
        parts = (to_nnf(c.left, positive), to_nnf(c.right, positive))
        return _mk_and(parts) if positive else _mk_or(parts)
    if isinstance(c, Exists):
        filler = to_nnf(c.filler, positive)
        return _mk_some(c.role, filler) if positive else _mk_all(c.role, filler)
    raise TypeError(f"not a concept: {c!r}")


def _negate(x):
    kind = x[0]
    if kind == "top":
        return BOTTOM
    if kind == "bot":
        return TOP
    if kind == "name":
        return ("neg", x[1])
    if kind == "neg":
        return ("name", x[1])
    if kind == "and":
        return _mk_or(_negate(p) for p in x[1])
    if kind == "or":
        return _mk_and(_negate(p) for p in x[1])
    if kind == "some":
        return _mk_all(x[1], _negate(x[2]))
    return _mk_some(x[1], _negate(x[2]))


@dataclass
class NormalizedOntology:
    """Normal-form items with their seeds (sets of input labels read disjunctively)."""

    items: tuple
    seeds: dict
    fresh_names: frozenset
    names: frozenset
    roles: frozenset
    labels: frozenset
    item_vars: dict = field(default_factory=dict)
    original_names: frozenset = frozenset()

    def seed_antichain(self, item: Item) -> mono.Antichain:
        return frozenset(frozenset({v}) for v in self.seeds[item])

    def seed_formula(self, item: Item) -> mono.Formula:
        return mono.disj(sorted(self.seeds[item], key=mono.natural_key))

    def project(self, valuation: Iterable[str]) -> "NormalizedOntology":
        """Keep the items whose seed the valuation satisfies; the signature is unchanged."""
        v = set(valuation)
        kept = tuple(it for it in self.items if self.seeds[it] & v)
        return NormalizedOntology(
            items=kept,
            seeds={it: self.seeds[it] for it in kept},
            fresh_names=self.fresh_names,
            names=self.names,
            roles=self.roles,
            labels=self.labels & v,
            item_vars={},
            original_names=self.original_names,
        )

    def with_item_variables(self, prefix: str = "_n") -> "NormalizedOntology":
        """Same items, each seeded by its own fresh variable.

        ``item_vars`` maps each such variable back to the original seed, which
        is what :func:`original_projection` substitutes.
        """
        seeds, item_vars = {}, {}
        for i, it in enumerate(self.items, 1):
            var = f"{prefix}{i}"
            seeds[it] = frozenset({var})
            item_vars[var] = self.seed_formula(it)
        return NormalizedOntology(
            items=self.items,
            seeds=seeds,
            fresh_names=self.fresh_names,
            names=self.names,
            roles=self.roles,
            labels=frozenset(item_vars),
            item_vars=item_vars,
            original_names=self.original_names,
        )


class _Normalizer:
    def __init__(self, reserved: set[str]):
        self.reserved = reserved
        self.counter = 0
        self.fresh: list[str] = []
        self.out: dict = {}
        self.label = None
        # Fresh names are shared between equal subconcepts. Reusing one under a
        # new label re-emits its definition so the seeds record every user.
        self.defined: dict = {}
        self.recorders: list = []

    def fresh_name(self) -> str:
        while True:
            self.counter += 1
            name = f"{FRESH_PREFIX}{self.counter}"
            if name not in self.reserved:
                self.fresh.append(name)
                return name

    def emit(self, item: Item) -> None:
        self.out.setdefault(item, set()).add(self.label)
        for rec in self.recorders:
            rec.append(item)

    def _define(self, x, positive: bool) -> str:
        key = (x, positive)
        if key in self.defined:
            f, items = self.defined[key]
            for it in items:
                self.emit(it)
            return f
        f = self.fresh_name()
        rec: list = []
        self.recorders.append(rec)
        try:
            if positive:
                self.gci(("name", f), x)
            else:
                self.gci(x, ("name", f))
        finally:
            self.recorders.pop()
        self.defined[key] = (f, rec)
        return f

    def left_name(self, x) -> str:
        """A name implied by ``x``, to stand for it on a left-hand side."""
        return x[1] if x[0] == "name" else self._define(x, False)

    def right_name(self, x) -> str:
        """A name implying ``x``, to stand for it on a right-hand side."""
        return x[1] if x[0] == "name" else self._define(x, True)

    def gci(self, lhs, rhs) -> None:
        if lhs == BOTTOM or rhs == TOP:
            return
        if rhs[0] == "and":
            for part in rhs[1]:
                self.gci(lhs, part)
            return
        if lhs[0] == "or":
            for part in lhs[1]:
                self.gci(part, rhs)
            return
        if lhs[0] == "some":
            a = self.left_name(lhs[2])
            b = self.right_name(rhs)
            self.emit(ExLeft(lhs[1], a, b))
            return
        if lhs[0] == "all":
            # ∀r.X ⊑ R  iff  ⊤ ⊑ ∃r.¬X ⊔ R
            self.gci(TOP, _mk_or([_mk_some(lhs[1], _negate(lhs[2])), rhs]))
            return
        if rhs[0] in ("some", "all"):
            a = self.left_name(lhs)
            b = self.right_name(rhs[2])
            if rhs[0] == "some":
                self.emit(ExClause(conjunction(a), disjunction(), rhs[1], conjunction(b)))
            else:
                self.emit(ForallItem(a, rhs[1], b))
            return
        H: list[str] = []
        M: list[str] = []
        for part in lhs[1] if lhs[0] == "and" else (lhs,):
            kind = part[0]
            if kind == "name":
                H.append(part[1])
            elif kind == "neg":
                M.append(part[1])
            elif kind == "all":
                # moved across as ∃r.¬X; a name for ∀r.X would need a ⊤-clause
                M.append(self.right_name(_negate(part)))
            elif kind != "top":
                H.append(self.left_name(part))
        for part in rhs[1] if rhs[0] == "or" else (rhs,):
            kind = part[0]
            if kind == "name":
                M.append(part[1])
            elif kind == "neg":
                H.append(part[1])
            elif kind != "bot":
                M.append(self.right_name(part))
        self.emit(Clause(conjunction(*H), disjunction(*M)))


def normalize(ontology: Ontology) -> NormalizedOntology:
    names, roles = signature(ontology)
    norm = _Normalizer(set(names))
    for ax in ontology:
        norm.label = ax.label
        norm.gci(to_nnf(ax.lhs), to_nnf(ax.rhs))
    items = tuple(norm.out)
    all_names = set(names)
    for it in items:
        all_names |= item_names(it)
    return NormalizedOntology(
        items=items,
        seeds={it: frozenset(labels) for it, labels in norm.out.items()},
        fresh_names=frozenset(norm.fresh),
        names=frozenset(all_names),
        roles=roles,
        labels=ontology.labels,
        original_names=frozenset(names),
    )


class UnknownVariableError(KeyError):
    pass


def original_projection(phi: mono.Formula, normalized: NormalizedOntology | Mapping) -> mono.Formula:
    """Rewrite ``phi`` over original axiom labels.

    Variables standing for normalized items are replaced by their seeds;
    variables that already are original labels are kept.
    """
    if isinstance(normalized, NormalizedOntology):
        item_vars, labels = normalized.item_vars, normalized.labels
    else:
        item_vars, labels = normalized, frozenset()
    mapping = {}
    for v in mono.variables(phi):
        if v in item_vars:
            mapping[v] = item_vars[v]
        elif v in labels:
            mapping[v] = mono.Var(v)
        else:
            raise UnknownVariableError(v)
    return mono.substitute(phi, mapping)
