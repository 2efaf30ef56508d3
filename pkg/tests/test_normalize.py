from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alcpin import mono
from alcpin.cli import parse
from alcpin.core import (
    BOT,
    Clause,
    ExClause,
    ExLeft,
    ForallItem,
    LabelledAxiom,
    Name,
    Ontology,
    conjunction,
    disjunction,
    item_names,
    signature,
)
from alcpin.normalize import UnknownVariableError, normalize, original_projection
from alcpin.saturate import Saturator, entailed_in

from corpus import corpus
from strategies import names, roles


def items_of(text):
    n = normalize(parse(text).ontology)
    return {it: set(n.seeds[it]) for it in n.items}, n


def test_conjunction_on_the_right_splits(texa2):
    n = normalize(Ontology([texa2["a1"]]))
    assert {it: set(n.seeds[it]) for it in n.items} == {
        ExClause(conjunction("A"), disjunction(), "r", conjunction("A")): {"a1"},
        ForallItem("A", "r", "B"): {"a1"},
    }
    assert not n.fresh_names


def test_normal_axiom_is_a_fixpoint():
    got, n = items_of("a1: A [= some r. A")
    assert got == {ExClause(conjunction("A"), disjunction(), "r", conjunction("A")): {"a1"}}


def test_identical_items_merge_seeds():
    got, n = items_of("p: A [= B\nq: A [= B")
    item = Clause(conjunction("A"), disjunction("B"))
    assert got == {item: {"p", "q"}}
    assert mono.equivalent(n.seed_formula(item), mono.disj(["p", "q"]))


def test_complex_left_existential_gets_a_fresh_name():
    got, n = items_of("x: some r. (A and B) [= C")
    (fresh,) = n.fresh_names
    assert got == {
        Clause(conjunction("A", "B"), disjunction(fresh)): {"x"},
        ExLeft("r", fresh, "C"): {"x"},
    }
    assert fresh not in signature(parse("x: some r. (A and B) [= C").ontology)[0]


def test_bot_on_the_right_is_the_empty_disjunction():
    got, _ = items_of("x: A and B [= bot")
    assert got == {Clause(conjunction("A", "B"), disjunction()): {"x"}}


def test_fresh_names_are_deterministic():
    text = "x: only r. A [= B\ny: some s. (A or C) [= some r. (B and not C)"
    assert normalize(parse(text).ontology).items == normalize(parse(text).ontology).items


def test_original_projection():
    _, n = items_of("a1: A [= B")
    assert original_projection(mono.TRUE, n) == mono.TRUE
    phi = mono.conj(["a1"])
    assert original_projection(phi, n) == phi
    with pytest.raises(UnknownVariableError):
        original_projection(mono.Var("_n1"), n)


def test_original_projection_through_item_variables(texa2):
    n = normalize(texa2).with_item_variables()
    var = {v for v, seed in n.item_vars.items() if seed == mono.Var("a1")}
    phi = mono.conj(sorted(var) + [next(v for v, s in n.item_vars.items() if s == mono.Var("a4"))])
    assert mono.equivalent(original_projection(phi, n), mono.conj(["a1", "a4"]))


# Normal-form axioms, as the four item shapes and as GCIs.
_names = st.lists(names, min_size=1, max_size=3, unique=True)
normal_axioms = st.one_of(
    st.tuples(_names, st.lists(names, max_size=2, unique=True)).map(
        lambda p: ("clause", tuple(p[0]), tuple(p[1]))
    ),
    st.tuples(names, roles, names).map(lambda p: ("some",) + p),
    st.tuples(names, roles, names).map(lambda p: ("only",) + p),
    st.tuples(roles, names, names).map(lambda p: ("exleft",) + p),
)


def _as_text(ax):
    kind = ax[0]
    if kind == "clause":
        return f"{' and '.join(ax[1])} [= {' or '.join(ax[2]) or 'bot'}"
    if kind == "some":
        return f"{ax[1]} [= some {ax[2]}. {ax[3]}"
    if kind == "only":
        return f"{ax[1]} [= only {ax[2]}. {ax[3]}"
    return f"some {ax[1]}. {ax[2]} [= {ax[3]}"


def _as_item(ax):
    kind = ax[0]
    if kind == "clause":
        return Clause(conjunction(*ax[1]), disjunction(*ax[2]))
    if kind == "some":
        return ExClause(conjunction(ax[1]), disjunction(), ax[2], conjunction(ax[3]))
    if kind == "only":
        return ForallItem(ax[1], ax[2], ax[3])
    return ExLeft(ax[1], ax[2], ax[3])


@given(st.lists(normal_axioms, min_size=1, max_size=5, unique=True))
def test_normalizing_normal_axioms_is_identity(axioms):
    text = "\n".join(f"n{i}: {_as_text(ax)}" for i, ax in enumerate(axioms, 1))
    n = normalize(parse(text).ontology)
    expected = {}
    for i, ax in enumerate(axioms, 1):
        expected.setdefault(_as_item(ax), set()).add(f"n{i}")
    assert {it: set(n.seeds[it]) for it in n.items} == expected
    assert not n.fresh_names


def _in_normal_form(item) -> bool:
    if isinstance(item, Clause):
        return all(not lit.negated for lit in item.H)
    if isinstance(item, ExClause):
        return len(item.H) == 1 and not item.N and len(item.K) == 1 and not any(
            lit.negated for lit in item.H | item.K
        )
    return isinstance(item, (ForallItem, ExLeft))


@settings(max_examples=60)
@given(st.integers(0, len(corpus()) - 1))
def test_output_shapes_and_fresh_names(k):
    o = corpus()[k]
    n = normalize(o)
    sig = signature(o)[0]
    assert all(_in_normal_form(it) for it in n.items)
    assert not (n.fresh_names & sig)
    assert BOT not in n.names
    for it in n.items:
        assert n.seeds[it] and n.seeds[it] <= o.labels
        assert item_names(it) <= sig | n.fresh_names


@pytest.mark.parametrize("k", range(0, 200, 10))
def test_conservative_per_sub_ontology(k):
    o = corpus()[k]
    n = normalize(o)
    sig = sorted(signature(o)[0])
    labels = sorted(o.labels)
    for size in range(len(labels) + 1):
        for v in combinations(labels, size):
            projected = Saturator(n.project(v)).run().index
            direct = Saturator(normalize(o.restrict(v)), names=sig).run().index
            for a in sig:
                for b in sig + [BOT]:
                    assert entailed_in(projected, a, b) == entailed_in(direct, a, b), (k, v, a, b)


def test_seed_labels_come_from_the_input():
    o = Ontology([LabelledAxiom(Name("A"), Name("B"), "only")])
    n = normalize(o)
    assert n.labels == {"only"}
    assert n.original_names == {"A", "B"}
