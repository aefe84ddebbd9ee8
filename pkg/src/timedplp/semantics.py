"""Reference semantics by exhaustive choice enumeration.

The probability of a query is the total probability of all subsets of the
probabilistic facts whose induced least model satisfies it.  Models are
computed atom by atom along the acyclic ground dependency graph, so the
result is independent of rule order.  This is deliberately brute force; it
exists as the correctness oracle for the variable-elimination engine and
refuses to run beyond a small number of facts.
"""

from __future__ import annotations

from .errors import OracleError
from .ground import GroundProgram, SetDomain, _match_join, dependency_depths
from .syntax import (Body, Comparison, Equation, Lit, atom_sort_key,
                     atom_text, is_ground)

MAX_ENUMERATED_FACTS = 25


def least_fixpoint_model(rules, base=()) -> frozenset:
    """Least model of a stratified normal ground program over given facts."""
    depth = dependency_depths(rules)
    by_head: dict = {}
    for r in rules:
        by_head.setdefault(r.head, []).append(r.body)
    order = sorted(by_head, key=lambda a: (depth.get(a, 0), atom_sort_key(a)))
    true = set(base)
    for a in order:
        if a in true:
            continue
        for b in by_head[a]:
            if b.pos <= true and not (b.neg & true):
                true.add(a)
                break
    return frozenset(true)


def choice_probability(choice, facts: dict) -> float:
    """Product probability of picking exactly this subset of the facts."""
    chosen = set(choice)
    if not chosen <= set(facts):
        raise OracleError("choice contains atoms that are not probabilistic facts")
    p = 1.0
    for atom, pr in facts.items():
        p *= pr if atom in chosen else 1.0 - pr
    return p


def model_satisfies(model, lits=(), neg_elements=()) -> bool:
    """Truth of ground literals plus raw negative elements in a model."""
    for l in lits:
        if l.positive != (l.atom in model):
            return False
    if neg_elements:
        dom = SetDomain(model)
        for elem in neg_elements:
            if _match_join(elem, dom):
                return False
    return True


def _right_unique(model) -> tuple | None:
    seen: dict = {}
    for a in model:
        if isinstance(a, Equation):
            k = (a.lhs, a.time)
            other = seen.setdefault(k, a)
            if other.rhs != a.rhs:
                return (other, a)
    return None


def oracle_success_probability(pg: GroundProgram, query, *,
                               neg_elements=(), strict: bool = False,
                               max_facts: int = MAX_ENUMERATED_FACTS) -> float:
    """Query probability by enumerating all choices over the fact atoms.

    With ``strict`` on, every model is additionally checked to assign at
    most one value per functional term and time point, catching programs
    the guided pipeline must not be trusted on.
    """
    lits = tuple(query)
    for l in lits:
        if not isinstance(l, Lit):
            raise OracleError(f"query must consist of literals, got {l!r}")
    fact_atoms = sorted(pg.facts, key=atom_sort_key)
    if len(fact_atoms) > max_facts:
        raise OracleError(f"{len(fact_atoms)} probabilistic facts exceed the "
                          f"enumeration bound of {max_facts}")
    # precompute the evaluation order once; it is choice-independent
    depth = pg.depth or dependency_depths(pg.rules)
    by_head: dict = {}
    for r in pg.rules:
        by_head.setdefault(r.head, []).append(r.body)
    order = sorted(by_head, key=lambda a: (depth.get(a, 0), atom_sort_key(a)))

    total = 0.0
    n = len(fact_atoms)
    for mask in range(1 << n):
        true = {fact_atoms[i] for i in range(n) if mask >> i & 1}
        p = 1.0
        for i, atom in enumerate(fact_atoms):
            pr = pg.facts[atom]
            p *= pr if mask >> i & 1 else 1.0 - pr
        for a in order:
            if a in true:
                continue
            for b in by_head[a]:
                if b.pos <= true and not (b.neg & true):
                    true.add(a)
                    break
        if strict:
            clash = _right_unique(true)
            if clash:
                raise OracleError(
                    f"model violates right-uniqueness: {atom_text(clash[0])} "
                    f"and {atom_text(clash[1])} hold together")
        if model_satisfies(true, lits, neg_elements):
            total += p
    return total


def oracle_body_probability(pg: GroundProgram, body: Body, evidence=(), *,
                            strict: bool = False,
                            max_facts: int = MAX_ENUMERATED_FACTS) -> float:
    """Probability that a ground query body (which may still carry raw
    negative elements) holds together with the evidence literals."""
    lits = [Lit(True, a) for a in body.positives
            if not isinstance(a, Comparison)]
    lits += list(evidence)
    neg_single = [elem for elem in body.negatives
                  if len(elem) == 1 and not isinstance(elem[0], Comparison)
                  and is_ground(elem[0])]
    neg_multi = [elem for elem in body.negatives if elem not in neg_single]
    lits += [Lit(False, elem[0]) for elem in neg_single]
    return oracle_success_probability(pg, lits, neg_elements=neg_multi,
                                      strict=strict, max_facts=max_facts)
