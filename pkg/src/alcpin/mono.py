"""Monotone Boolean formulas over axiom identifiers.

Two representations live here. Formula trees (``Var``, ``AndN``, ``OrN`` and the
two constants) keep whatever structure they were built with and are what users
see. Antichains -- frozensets of minimal models, each model a frozenset of
variable names -- are the canonical form: two monotone formulas are equivalent
exactly when their antichains are equal. The pinpointing engine works on
antichains directly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import AbstractSet, FrozenSet, Iterable, Union

Valuation = AbstractSet[str]
Model = FrozenSet[str]
Antichain = FrozenSet[Model]

EMPTY_MODEL: Model = frozenset()
TRUE_AC: Antichain = frozenset({EMPTY_MODEL})
FALSE_AC: Antichain = frozenset()


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class AndN:
    args: tuple


@dataclass(frozen=True)
class OrN:
    args: tuple


Formula = Union[Var, TrueF, FalseF, AndN, OrN]
TRUE = TrueF()
FALSE = FalseF()


def _as_formula(x) -> Formula:
    return Var(x) if isinstance(x, str) else x


def conj(parts: Iterable) -> Formula:
    """Flattened conjunction; strings are taken as variables."""
    args = []
    for p in map(_as_formula, parts):
        if isinstance(p, FalseF):
            return FALSE
        if isinstance(p, TrueF):
            continue
        args.extend(p.args if isinstance(p, AndN) else (p,))
    if not args:
        return TRUE
    if len(args) == 1:
        return args[0]
    return AndN(tuple(args))


def disj(parts: Iterable) -> Formula:
    """Flattened disjunction; strings are taken as variables."""
    args = []
    for p in map(_as_formula, parts):
        if isinstance(p, TrueF):
            return TRUE
        if isinstance(p, FalseF):
            continue
        args.extend(p.args if isinstance(p, OrN) else (p,))
    if not args:
        return FALSE
    if len(args) == 1:
        return args[0]
    return OrN(tuple(args))


def variables(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Var):
        return frozenset({phi.name})
    if isinstance(phi, (AndN, OrN)):
        return frozenset().union(*(variables(a) for a in phi.args))
    return frozenset()


def evaluate(phi: Formula, valuation: Valuation) -> bool:
    if isinstance(phi, Var):
        return phi.name in valuation
    if isinstance(phi, TrueF):
        return True
    if isinstance(phi, FalseF):
        return False
    if isinstance(phi, AndN):
        return all(evaluate(a, valuation) for a in phi.args)
    return any(evaluate(a, valuation) for a in phi.args)


# ---------------------------------------------------------------------------
# Antichains
# ---------------------------------------------------------------------------


def minimize(sets: Iterable[AbstractSet[str]]) -> Antichain:
    """Keep only the inclusion-minimal members."""
    ordered = sorted({frozenset(s) for s in sets}, key=len)
    kept: list[Model] = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return frozenset(kept)


def ac_or(a: Antichain, b: Antichain) -> Antichain:
    if not a:
        return b
    if not b:
        return a
    return minimize(a | b)


def ac_and(a: Antichain, b: Antichain) -> Antichain:
    if not a or not b:
        return FALSE_AC
    if a == TRUE_AC:
        return b
    if b == TRUE_AC:
        return a
    return minimize(x | y for x in a for y in b)


def ac_and_all(acs: Iterable[Antichain]) -> Antichain:
    out = TRUE_AC
    for ac in acs:
        out = ac_and(out, ac)
        if not out:
            break
    return out


def ac_satisfied(ac: Antichain, valuation: Valuation) -> bool:
    return any(m <= valuation for m in ac)


def ac_entails(a: Antichain, b: Antichain) -> bool:
    """Every minimal model of ``a`` contains a minimal model of ``b``."""
    return all(any(mb <= ma for mb in b) for ma in a)


def minimal_models(phi: Formula) -> Antichain:
    if isinstance(phi, Var):
        return frozenset({frozenset({phi.name})})
    if isinstance(phi, TrueF):
        return TRUE_AC
    if isinstance(phi, FalseF):
        return FALSE_AC
    if isinstance(phi, AndN):
        return ac_and_all(minimal_models(a) for a in phi.args)
    out = FALSE_AC
    for a in phi.args:
        out = ac_or(out, minimal_models(a))
    return out


def entails(phi: Formula, psi: Formula) -> bool:
    return all(evaluate(psi, m) for m in minimal_models(phi))


def equivalent(phi: Formula, psi: Formula) -> bool:
    return minimal_models(phi) == minimal_models(psi)


def minimal_hitting_sets(family: Iterable[AbstractSet[str]]) -> Antichain:
    """All inclusion-minimal sets meeting every member of ``family``.

    Berge's incremental dualization. The empty family is hit by the empty set;
    a family containing the empty set has no hitting set at all.
    """
    current: Antichain = TRUE_AC
    for member in sorted((frozenset(s) for s in family), key=lambda s: (len(s), sorted(s))):
        if not member:
            return FALSE_AC
        grown = []
        for h in current:
            if h & member:
                grown.append(h)
            else:
                grown.extend(h | {x} for x in member)
        current = minimize(grown)
    return current


def from_antichain(ac: Antichain) -> Formula:
    """Minimal-model DNF with variables and disjuncts in natural order."""
    models = sorted((sorted(m, key=natural_key) for m in ac), key=lambda m: [natural_key(v) for v in m])
    return disj(conj(m) for m in models)


def substitute(phi: Formula, mapping) -> Formula:
    """Replace variables by formulas; variables missing from ``mapping`` raise ``KeyError``."""
    if isinstance(phi, Var):
        return mapping[phi.name]
    if isinstance(phi, AndN):
        return conj(substitute(a, mapping) for a in phi.args)
    if isinstance(phi, OrN):
        return disj(substitute(a, mapping) for a in phi.args)
    return phi


# ---------------------------------------------------------------------------
# Text
# ---------------------------------------------------------------------------


def natural_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def format_formula(phi: Formula) -> str:
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, TrueF):
        return "true"
    if isinstance(phi, FalseF):
        return "false"
    op = " & " if isinstance(phi, AndN) else " | "
    parts = []
    for a in phi.args:
        s = format_formula(a)
        parts.append(f"({s})" if isinstance(a, (AndN, OrN)) else s)
    return op.join(parts)


def format_antichain(ac: Antichain) -> str:
    return format_formula(from_antichain(ac))


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(&)|(\|)|([A-Za-z_][A-Za-z0-9_'.-]*))")


class FormulaSyntaxError(ValueError):
    pass


def parse_formula(text: str) -> Formula:
    """Inverse of :func:`format_formula`; ``&`` binds tighter than ``|``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character at {pos}: {text[pos:]!r}")
        pos = m.end()
        kind = m.lastindex
        tokens.append((kind, m.group(kind)))
    tokens.append((0, None))
    i = 0

    def peek():
        return tokens[i][0]

    def disjunct():
        nonlocal i
        parts = [conjunct()]
        while peek() == 4:
            i += 1
            parts.append(conjunct())
        return disj(parts)

    def conjunct():
        nonlocal i
        parts = [atom()]
        while peek() == 3:
            i += 1
            parts.append(atom())
        return conj(parts)

    def atom():
        nonlocal i
        kind, val = tokens[i]
        i += 1
        if kind == 1:
            inner = disjunct()
            if peek() != 2:
                raise FormulaSyntaxError("missing ')'")
            i += 1
            return inner
        if kind == 5:
            return {"true": TRUE, "false": FALSE}.get(val, Var(val))
        raise FormulaSyntaxError(f"unexpected token {val!r}")

    out = disjunct()
    if peek() != 0:
        raise FormulaSyntaxError(f"trailing input {tokens[i][1]!r}")
    return out

