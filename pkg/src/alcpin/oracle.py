"""Independent checks for the reasoner.

* finite interpretations and the model-theoretic semantics of ALC;
* brute-force model enumeration and an exact bounded counter-model search
  (ground the TBox over a small domain, hand the CNF to a SAT solver);
* type elimination, a complete decision procedure for subsumption that shares
  no code with the saturation rules;
* black-box justification enumeration over sub-ontologies.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Iterable, Iterator, Optional

import numpy as np
from pysat.formula import IDPool
from pysat.solvers import Solver

from .core import (
    BOT,
    And,
    Clause,
    Concept,
    Exists,
    Item,
    LabelledAxiom,
    Name,
    Not,
    Ontology,
    item_gci,
    signature,
    subconcepts,
)
from .mono import Antichain
from .saturate import subsumes

MAX_DOMAIN = 3
MAX_BLACKBOX_AXIOMS = 12
MAX_TYPE_ATOMS = 22


class UnknownNameError(KeyError):
    pass


class BoundExceededError(ValueError):
    pass


@dataclass(frozen=True)
class Interpretation:
    domain: frozenset
    concept_ext: dict
    role_ext: dict

    def __post_init__(self):
        if not self.domain:
            raise ValueError("interpretation domain must be nonempty")

    def __hash__(self):
        return hash(
            (
                self.domain,
                frozenset((k, frozenset(v)) for k, v in self.concept_ext.items()),
                frozenset((k, frozenset(v)) for k, v in self.role_ext.items()),
            )
        )


def eval_concept(I: Interpretation, c: Concept) -> frozenset:
    if isinstance(c, Name):
        if c.name == BOT:
            return frozenset()
        try:
            return frozenset(I.concept_ext[c.name])
        except KeyError:
            raise UnknownNameError(c.name) from None
    if isinstance(c, Not):
        return I.domain - eval_concept(I, c.arg)
    if isinstance(c, And):
        return eval_concept(I, c.left) & eval_concept(I, c.right)
    if isinstance(c, Exists):
        if c.role not in I.role_ext:
            raise UnknownNameError(c.role)
        filler = eval_concept(I, c.filler)
        return frozenset(d for d, e in I.role_ext[c.role] if e in filler)
    raise TypeError(f"not a concept: {c!r}")


def satisfies_gci(I: Interpretation, lhs: Concept, rhs: Concept) -> bool:
    return eval_concept(I, lhs) <= eval_concept(I, rhs)


def is_model(I: Interpretation, ontology: Ontology) -> bool:
    return all(satisfies_gci(I, ax.lhs, ax.rhs) for ax in ontology)


def satisfies_clause(I: Interpretation, clause: Clause) -> bool:
    """``⋂H ⊆ ⋃M`` with ``¬A`` read as the complement of ``A``."""
    left = set(I.domain)
    for lit in clause.H:
        ext = I.concept_ext.get(lit.name, frozenset())
        left &= (I.domain - ext) if lit.negated else ext
    right = set()
    for a in clause.M:
        right |= I.concept_ext.get(a, frozenset())
    return left <= right


def _subsets(xs):
    for r in range(len(xs) + 1):
        yield from combinations(xs, r)


def enumerate_interpretations(names, roles, size: int) -> Iterator[Interpretation]:
    domain = frozenset(range(size))
    elems = sorted(domain)
    pairs = [(d, e) for d in elems for e in elems]
    names, roles = sorted(names), sorted(roles)
    concept_choices = [list(_subsets(elems)) for _ in names]
    role_choices = [list(_subsets(pairs)) for _ in roles]
    for cext in product(*concept_choices):
        cmap = {n: frozenset(x) for n, x in zip(names, cext)}
        for rext in product(*role_choices):
            yield Interpretation(domain, cmap, {r: frozenset(x) for r, x in zip(roles, rext)})


def enumerate_models(
    ontology: Ontology,
    max_domain: int = MAX_DOMAIN,
    *,
    names: Optional[Iterable[str]] = None,
    roles: Optional[Iterable[str]] = None,
    min_domain: int = 1,
) -> Iterator[Interpretation]:
    """Every model over the given signature with ``min_domain..max_domain`` elements.

    Plain brute force, no symmetry breaking. The signature defaults to the
    ontology's own.
    """
    if max_domain > MAX_DOMAIN:
        raise BoundExceededError(f"max_domain {max_domain} exceeds {MAX_DOMAIN}")
    sig_names, sig_roles = signature(ontology)
    names = sig_names if names is None else frozenset(names)
    roles = sig_roles if roles is None else frozenset(roles)
    for size in range(min_domain, max_domain + 1):
        for I in enumerate_interpretations(names, roles, size):
            if is_model(I, ontology):
                yield I


# ---------------------------------------------------------------------------
# Bounded counter-model search
# ---------------------------------------------------------------------------


class _Grounding:
    """Tseitin encoding of concept membership over a fixed finite domain."""

    def __init__(self, size: int):
        self.size = size
        self.pool = IDPool()
        self.clauses: list = []
        self.cache: dict = {}
        self.false = self.pool.id(("false",))
        self.clauses.append([-self.false])

    def atom(self, name: str, d: int) -> int:
        return self.pool.id(("c", name, d))

    def edge(self, role: str, d: int, e: int) -> int:
        return self.pool.id(("r", role, d, e))

    def lit(self, c: Concept, d: int) -> int:
        key = (c, d)
        if key in self.cache:
            return self.cache[key]
        if isinstance(c, Name):
            out = self.false if c.name == BOT else self.atom(c.name, d)
        elif isinstance(c, Not):
            out = -self.lit(c.arg, d)
        elif isinstance(c, And):
            a, b = self.lit(c.left, d), self.lit(c.right, d)
            out = self.pool.id(("and", c, d))
            self.clauses += [[-out, a], [-out, b], [out, -a, -b]]
        else:
            out = self.pool.id(("ex", c, d))
            terms = []
            for e in range(self.size):
                t = self.pool.id(("exe", c, d, e))
                r, f = self.edge(c.role, d, e), self.lit(c.filler, e)
                self.clauses += [[-t, r], [-t, f], [t, -r, -f]]
                terms.append(t)
            self.clauses.append([-out] + terms)
            self.clauses += [[out, -t] for t in terms]
        self.cache[key] = out
        return out

    def interpretation(self, model, names, roles) -> Interpretation:
        true = {v for v in model if v > 0}
        dom = range(self.size)
        return Interpretation(
            frozenset(dom),
            {n: frozenset(d for d in dom if self.atom(n, d) in true) for n in names},
            {
                r: frozenset((d, e) for d in dom for e in dom if self.edge(r, d, e) in true)
                for r in roles
            },
        )


def bounded_countermodel(
    ontology: Ontology, clauses: Clause | Iterable[Clause], max_domain: int = MAX_DOMAIN
) -> Optional[tuple[Interpretation, Clause]]:
    """A model of ``ontology`` with at most ``max_domain`` elements violating one of ``clauses``.

    Returns the model and the violated clause, or ``None`` when every model up
    to that size satisfies all of them. Exact: the TBox is grounded over each
    domain size and handed to a SAT solver.
    """
    clauses = [clauses] if isinstance(clauses, Clause) else list(clauses)
    if not clauses:
        return None
    names, roles = signature(ontology)
    names = set(names)
    for cl in clauses:
        names |= {l.name for l in cl.H} | set(cl.M)
    for size in range(1, max_domain + 1):
        g = _Grounding(size)
        for ax in ontology:
            for d in range(size):
                g.clauses.append([-g.lit(ax.lhs, d), g.lit(ax.rhs, d)])
        witnesses = []
        for k, cl in enumerate(clauses):
            for d in range(size):
                w = g.pool.id(("witness", k, d))
                for lit in cl.H:
                    a = g.atom(lit.name, d)
                    g.clauses.append([-w, -a if lit.negated else a])
                for name in cl.M:
                    g.clauses.append([-w, -g.atom(name, d)])
                witnesses.append((w, cl))
        g.clauses.append([w for w, _ in witnesses])
        with Solver(name="m22", bootstrap_with=g.clauses) as solver:
            if solver.solve():
                model = solver.get_model()
                true = {v for v in model if v > 0}
                violated = next(cl for w, cl in witnesses if w in true)
                return g.interpretation(model, names, roles), violated
    return None


def item_ontology(items: Iterable[Item], label_prefix: str = "i") -> Ontology:
    """The normal-form items as ordinary GCIs, so the oracles can read them."""
    return Ontology(
        LabelledAxiom(*item_gci(it), f"{label_prefix}{k}") for k, it in enumerate(items, 1)
    )


# ---------------------------------------------------------------------------
# Type elimination
# ---------------------------------------------------------------------------


def entails_by_types(ontology: Ontology, lhs: Concept, rhs: Concept) -> bool:
    """Decide ``ontology ⊨ lhs ⊑ rhs`` by eliminating unrealisable types.

    A type fixes the truth of every concept name and every existential
    subconcept; everything else is computed from those. A type survives while
    each of its existentials has a surviving witness type that is compatible
    with its universal constraints.
    """
    concepts = [lhs, rhs] + [c for ax in ontology for c in (ax.lhs, ax.rhs)]
    atoms: dict = {}
    for top in concepts:
        for c in subconcepts(top):
            if (isinstance(c, Name) and c.name != BOT) or isinstance(c, Exists):
                atoms.setdefault(c, len(atoms))
    k = len(atoms)
    if k > MAX_TYPE_ATOMS:
        raise BoundExceededError(f"{k} type atoms exceed {MAX_TYPE_ATOMS}")
    types = np.arange(1 << k, dtype=np.int64)
    cache: dict = {}

    def holds(c: Concept) -> np.ndarray:
        if c in cache:
            return cache[c]
        if c in atoms:
            v = ((types >> atoms[c]) & 1).astype(bool)
        elif isinstance(c, Name):
            v = np.zeros(len(types), dtype=bool)
        elif isinstance(c, Not):
            v = ~holds(c.arg)
        else:
            v = holds(c.left) & holds(c.right)
        cache[c] = v
        return v

    alive = np.ones(len(types), dtype=bool)
    for ax in ontology:
        alive &= ~holds(ax.lhs) | holds(ax.rhs)

    by_role: dict = {}
    for c in atoms:
        if isinstance(c, Exists):
            by_role.setdefault(c.role, []).append(c)
    role_masks = []
    for role, exs in by_role.items():
        E = np.zeros(len(types), dtype=np.int64)  # existentials asserted by a type
        S = np.zeros(len(types), dtype=np.int64)  # existentials a type would satisfy as successor
        for i, c in enumerate(exs):
            E |= holds(c).astype(np.int64) << i
            S |= holds(c.filler).astype(np.int64) << i
        role_masks.append((len(exs), E, S))

    changed = True
    while changed:
        changed = False
        for n, E, S in role_masks:
            realised = np.unique(S[alive])
            witnessed = np.zeros(len(types), dtype=np.int64)
            for s in realised.tolist():
                ok = (np.int64(s) & ~E) == 0
                witnessed |= np.where(ok, np.int64(s), np.int64(0))
            bad = alive & ((E & ~witnessed) != 0)
            if bad.any():
                alive &= ~bad
                changed = True
    return not (alive & holds(lhs) & ~holds(rhs)).any()


# ---------------------------------------------------------------------------
# Black-box justifications
# ---------------------------------------------------------------------------


def minas_blackbox(
    ontology: Ontology,
    lhs: str,
    rhs: str,
    *,
    decide: Optional[Callable[[Ontology, str, str], bool]] = None,
    bound: int = MAX_BLACKBOX_AXIOMS,
) -> Antichain:
    """Minimal entailing sub-ontologies, by asking ``decide`` about subsets.

    Subsets are visited by increasing size; supersets of justifications already
    found are skipped, so every entailing subset that is visited is minimal.
    """
    if len(ontology) > bound:
        raise BoundExceededError(f"{len(ontology)} axioms exceed black-box bound {bound}")
    decide = decide or subsumes
    labels = sorted(ontology.labels)
    if not decide(ontology, lhs, rhs):
        return frozenset()
    found: list = []
    for size in range(len(labels) + 1):
        for subset in combinations(labels, size):
            s = frozenset(subset)
            if any(j <= s for j in found):
                continue
            if decide(ontology.restrict(s), lhs, rhs):
                found.append(s)
    return frozenset(found)
