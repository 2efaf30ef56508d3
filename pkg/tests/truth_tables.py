"""Exhaustive truth-table oracles for monotone formulas, independent of the antichain code."""

from __future__ import annotations

from itertools import combinations

from alcpin.mono import AndN, FalseF, OrN, TrueF, Var


def holds(phi, valuation) -> bool:
    if isinstance(phi, Var):
        return phi.name in valuation
    if isinstance(phi, TrueF):
        return True
    if isinstance(phi, FalseF):
        return False
    if isinstance(phi, AndN):
        return all(holds(a, valuation) for a in phi.args)
    if isinstance(phi, OrN):
        return any(holds(a, valuation) for a in phi.args)
    raise TypeError(phi)


def valuations(variables):
    variables = sorted(variables)
    for k in range(len(variables) + 1):
        for combo in combinations(variables, k):
            yield frozenset(combo)


def models(phi, variables):
    return [v for v in valuations(variables) if holds(phi, v)]


def minimal_models(phi, variables):
    ms = models(phi, variables)
    return frozenset(m for m in ms if not any(o < m for o in ms))


def entails(phi, psi, variables) -> bool:
    return all(holds(psi, v) for v in valuations(variables) if holds(phi, v))


def minimal_hitting_sets(family, universe):
    family = [frozenset(s) for s in family]
    hits = [v for v in valuations(universe) if all(v & s for s in family)]
    return frozenset(h for h in hits if not any(o < h for o in hits))
