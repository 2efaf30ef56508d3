"""ALC concepts, labelled ontologies and the normal-form items used during saturation."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, NamedTuple, Union

# Reserved name standing for the contradiction; never part of a signature.
BOT = "_bot"


def intern_name(name: str) -> str:
    return sys.intern(name)


# ---------------------------------------------------------------------------
# Concepts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Name:
    name: str

    def __post_init__(self):
        object.__setattr__(self, "name", intern_name(self.name))


@dataclass(frozen=True)
class Not:
    arg: "Concept"


@dataclass(frozen=True)
class And:
    left: "Concept"
    right: "Concept"


@dataclass(frozen=True)
class Exists:
    role: str
    filler: "Concept"

    def __post_init__(self):
        object.__setattr__(self, "role", intern_name(self.role))


Concept = Union[Name, Not, And, Exists]


def Bot() -> Concept:
    b = Name(BOT)
    return And(b, Not(b))


def Top() -> Concept:
    return Not(Bot())


def Or(left: Concept, right: Concept) -> Concept:
    return Not(And(Not(left), Not(right)))


def Forall(role: str, filler: Concept) -> Concept:
    return Not(Exists(role, Not(filler)))


def conjoin(parts: Iterable[Concept]) -> Concept:
    parts = list(parts)
    if not parts:
        return Top()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def is_bot(c: Concept) -> bool:
    return isinstance(c, And) and c.left == Name(BOT) and c.right == Not(Name(BOT))


def is_top(c: Concept) -> bool:
    return isinstance(c, Not) and is_bot(c.arg)


def subconcepts(c: Concept) -> Iterator[Concept]:
    yield c
    if isinstance(c, Not):
        yield from subconcepts(c.arg)
    elif isinstance(c, And):
        yield from subconcepts(c.left)
        yield from subconcepts(c.right)
    elif isinstance(c, Exists):
        yield from subconcepts(c.filler)


def concept_names(c: Concept) -> set[str]:
    return {s.name for s in subconcepts(c) if isinstance(s, Name) and s.name != BOT}


def role_names(c: Concept) -> set[str]:
    return {s.role for s in subconcepts(c) if isinstance(s, Exists)}


def concept_depth(c: Concept) -> int:
    if isinstance(c, Name):
        return 0
    if isinstance(c, Not):
        return 1 + concept_depth(c.arg)
    if isinstance(c, And):
        return 1 + max(concept_depth(c.left), concept_depth(c.right))
    return 1 + concept_depth(c.filler)


# ---------------------------------------------------------------------------
# Pretty printing (surface syntax of the cli module)
# ---------------------------------------------------------------------------

# Quantifiers swallow everything to their right, so they sit below "or".
_PREC_QUANT, _PREC_OR, _PREC_AND, _PREC_UNARY = 0, 1, 2, 3


def _or_parts(c: Concept):
    # not (not X and not Y)  ->  (X, Y)
    if isinstance(c, Not) and isinstance(c.arg, And):
        a, b = c.arg.left, c.arg.right
        if isinstance(a, Not) and isinstance(b, Not):
            return a.arg, b.arg
    return None


def _forall_parts(c: Concept):
    if isinstance(c, Not) and isinstance(c.arg, Exists) and isinstance(c.arg.filler, Not):
        return c.arg.role, c.arg.filler.arg
    return None


def _fmt(c: Concept) -> tuple[str, int]:
    if is_bot(c):
        return "bot", _PREC_UNARY
    if is_top(c):
        return "top", _PREC_UNARY
    if isinstance(c, Name):
        return c.name, _PREC_UNARY
    parts = _or_parts(c)
    if parts is not None:
        left = _wrap(parts[0], _PREC_OR)
        right = _wrap(parts[1], _PREC_AND)
        return f"{left} or {right}", _PREC_OR
    fa = _forall_parts(c)
    if fa is not None:
        return f"only {fa[0]}. {_wrap(fa[1], _PREC_QUANT)}", _PREC_QUANT
    if isinstance(c, Not):
        return f"not {_wrap(c.arg, _PREC_UNARY)}", _PREC_UNARY
    if isinstance(c, And):
        left = _wrap(c.left, _PREC_AND)
        right = _wrap(c.right, _PREC_UNARY)
        return f"{left} and {right}", _PREC_AND
    return f"some {c.role}. {_wrap(c.filler, _PREC_QUANT)}", _PREC_QUANT


def _wrap(c: Concept, min_prec: int) -> str:
    text, prec = _fmt(c)
    return text if prec >= min_prec else f"({text})"


def format_concept(c: Concept) -> str:
    """Render a concept in the surface syntax; the output parses back to ``c``."""
    return _fmt(c)[0]


# ---------------------------------------------------------------------------
# Ontologies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabelledAxiom:
    lhs: Concept
    rhs: Concept
    label: str

    def __str__(self):
        return f"{self.label}: {format_concept(self.lhs)} [= {format_concept(self.rhs)}"


class DuplicateLabelError(ValueError):
    pass


class Ontology:
    """A finite set of GCIs, each carrying a unique axiom identifier."""

    def __init__(self, axioms: Iterable[LabelledAxiom] = ()):
        self._axioms: dict[str, LabelledAxiom] = {}
        for ax in axioms:
            self.add(ax)

    def add(self, axiom: LabelledAxiom) -> None:
        old = self._axioms.get(axiom.label)
        if old is not None:
            if old == axiom:
                return
            raise DuplicateLabelError(f"axiom label {axiom.label!r} already in use")
        self._axioms[axiom.label] = axiom

    @property
    def axioms(self) -> tuple[LabelledAxiom, ...]:
        return tuple(self._axioms.values())

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(self._axioms)

    def __getitem__(self, label: str) -> LabelledAxiom:
        return self._axioms[label]

    def __iter__(self):
        return iter(self._axioms.values())

    def __len__(self):
        return len(self._axioms)

    def __contains__(self, label):
        return label in self._axioms

    def __eq__(self, other):
        return isinstance(other, Ontology) and set(self) == set(other)

    def __hash__(self):
        return hash(frozenset(self))

    def __repr__(self):
        return f"Ontology({list(self._axioms.values())!r})"

    def restrict(self, labels: Iterable[str]) -> "Ontology":
        """The sub-ontology whose labels lie in ``labels`` (a valuation's projection)."""
        keep = set(labels)
        return Ontology(ax for lab, ax in self._axioms.items() if lab in keep)


def signature(ontology: Ontology) -> tuple[frozenset[str], frozenset[str]]:
    names: set[str] = set()
    roles: set[str] = set()
    for ax in ontology:
        for c in (ax.lhs, ax.rhs):
            names |= concept_names(c)
            roles |= role_names(c)
    return frozenset(names), frozenset(roles)


# ---------------------------------------------------------------------------
# Normal-form items
# ---------------------------------------------------------------------------


class Literal(NamedTuple):
    name: str
    negated: bool = False

    def __str__(self):
        return f"~{self.name}" if self.negated else self.name


Conjunction = FrozenSet[Literal]
Disjunction = FrozenSet[str]


def conjunction(*parts) -> Conjunction:
    """Build a conjunction from names (``"A"``, ``"~A"``) or literals."""
    out = []
    for p in parts:
        if isinstance(p, Literal):
            out.append(p)
        elif p.startswith("~"):
            out.append(Literal(intern_name(p[1:]), True))
        else:
            out.append(Literal(intern_name(p), False))
    return frozenset(out)


def disjunction(*names: str) -> Disjunction:
    return frozenset(intern_name(n) for n in names)


def _lit_key(lit: Literal):
    return (lit.name, lit.negated)


def _fmt_conj(h: Conjunction) -> str:
    if not h:
        return "top"
    return " & ".join(str(l) for l in sorted(h, key=_lit_key))


def _fmt_disj(m: Disjunction) -> list[str]:
    return sorted(m)


@dataclass(frozen=True)
class Clause:
    """``H ⊑ M``: a conjunction of literals below a disjunction of names (empty = ⊥)."""

    H: Conjunction
    M: Disjunction

    def __str__(self):
        rhs = " | ".join(_fmt_disj(self.M)) or "bot"
        return f"{_fmt_conj(self.H)} [= {rhs}"


@dataclass(frozen=True)
class ExClause:
    """``H ⊑ N ⊔ ∃r.K``."""

    H: Conjunction
    N: Disjunction
    role: str
    K: Conjunction

    def __str__(self):
        rhs = _fmt_disj(self.N) + [f"some {self.role}.({_fmt_conj(self.K)})"]
        return f"{_fmt_conj(self.H)} [= {' | '.join(rhs)}"


@dataclass(frozen=True)
class ForallItem:
    """``A ⊑ ∀r.B``."""

    A: str
    role: str
    B: str

    def __str__(self):
        return f"{self.A} [= only {self.role}.{self.B}"


@dataclass(frozen=True)
class ExLeft:
    """``∃r.A ⊑ B``."""

    role: str
    A: str
    B: str

    def __str__(self):
        return f"some {self.role}.{self.A} [= {self.B}"


Item = Union[Clause, ExClause, ForallItem, ExLeft]
State = FrozenSet[Item]


def item_names(item: Item) -> set[str]:
    if isinstance(item, Clause):
        return {l.name for l in item.H} | set(item.M)
    if isinstance(item, ExClause):
        return {l.name for l in item.H} | set(item.N) | {l.name for l in item.K}
    return {item.A, item.B}


def is_positive(h: Conjunction) -> bool:
    return not any(l.negated for l in h)


def derivable(goal_lhs: str, goal_rhs: str) -> Clause:
    """The item certifying ``goal_lhs ⊑ goal_rhs``; ``BOT`` on the right gives ``A ⊑ ⊥``."""
    rhs = disjunction() if goal_rhs == BOT else disjunction(goal_rhs)
    return Clause(conjunction(goal_lhs), rhs)


def _conj_concept(h: Conjunction) -> Concept:
    return conjoin(Not(Name(l.name)) if l.negated else Name(l.name) for l in sorted(h, key=_lit_key))


def _disj_concept(names) -> Concept:
    out = None
    for n in sorted(names):
        out = Name(n) if out is None else Or(out, Name(n))
    return Bot() if out is None else out


def item_gci(item: Item) -> tuple[Concept, Concept]:
    """``(lhs, rhs)`` concepts of a normal-form item."""
    if isinstance(item, Clause):
        return _conj_concept(item.H), _disj_concept(item.M)
    if isinstance(item, ExClause):
        ex = Exists(item.role, _conj_concept(item.K))
        rhs = ex if not item.N else Or(_disj_concept(item.N), ex)
        return _conj_concept(item.H), rhs
    if isinstance(item, ForallItem):
        return Name(item.A), Forall(item.role, Name(item.B))
    return Exists(item.role, Name(item.A)), Name(item.B)
