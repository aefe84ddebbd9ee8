"""Stratification by time and by predicates.

Each non-fact rule needs a time anchor.  Either some positive body atom has
a variable time term N such that every other positive atom provably happens
at or before N, the head happens at N (case a) or strictly later (case b),
and every atom under ``\\+`` happens at or before N (case a) or strictly
before N (case b) -- or, when no positive atom has a variable time, the
rule anchors at its head, whose time must then be a fixed integer bounding
everything else.  Rules fire bottom-up at their anchor's timed stratum, so
the anchor guarantees that everything a rule consumes is already available.

The "provably at or before" check is syntactic and deliberately
conservative: N itself, N-k, time 0, or a distinct variable T constrained
by an explicit comparison against N in the same scope.  Anything else is
rejected as not time-constrained.

Predicate strata come from the strongly connected components of a call
graph.  Rules whose head lies strictly in the future contribute no head
edges (their output cannot influence the current time point), and atoms
under ``\\+`` that happen strictly before the anchor are ignored as well.
Remaining negated atoms must end up strictly below both the head and the
anchor, since their extension has to be complete when the rule fires.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import networkx as nx

from .builtins import eval_term, time_value
from .errors import StratError
from .syntax import (Body, Comparison, DistHead, Equation, Num, OrdinaryAtom,
                     Program, Rule, Struct, SumHead, Var, atom_text,
                     head_preds, head_time, is_ground, pred_of, rule_text)


@dataclass(frozen=True)
class RulePivot:
    """Time anchoring of one rule.

    ``candidates`` are indices of positive body atoms usable as anchors;
    ``pivot`` is the leftmost of them, or None when the rule anchors at its
    head.  ``head_case`` is 'a' (head at anchor time) or 'b' (strictly
    later).  ``neg_cases`` holds one 'a'/'b' label per ordinary atom of
    each negative element.
    """

    candidates: tuple
    pivot: int | None
    head_case: str
    neg_cases: tuple


@dataclass(frozen=True)
class CallGraph:
    nodes: frozenset
    pos_edges: frozenset  # (src, dst)
    neg_edges: frozenset


@dataclass(frozen=True)
class Stratification:
    strata: tuple  # tuple of frozenset of predicate names, lowest first
    index: dict    # predicate name -> stratum position

    def __str__(self):
        return " < ".join("{" + ", ".join(sorted(s)) + "}" for s in self.strata)


def _ordinary_positives(body: Body):
    return [(i, a) for i, a in enumerate(body.positives)
            if not isinstance(a, Comparison)]


def _comparison_facts(atoms) -> set:
    """Normalize comparisons into ('le'|'lt'|'eq', left, right) triples."""
    out = set()
    for a in atoms:
        if not isinstance(a, Comparison):
            continue
        l, r = a.left, a.right
        if a.op == "<=":
            out.add(("le", l, r))
        elif a.op == "<":
            out.add(("lt", l, r))
        elif a.op == ">=":
            out.add(("le", r, l))
        elif a.op == ">":
            out.add(("lt", r, l))
        elif a.op == "==":
            out.add(("eq", l, r))
            out.add(("eq", r, l))
    return out


def _time_rel(tau, n: Var, comps: set) -> str | None:
    """How a time term relates to the anchor variable: eq, le, lt or gt."""
    if tau == n:
        return "eq"
    if isinstance(tau, Num) and tau.value == 0:
        return "le"
    if isinstance(tau, Struct) and len(tau.args) == 2 and tau.args[0] == n \
            and isinstance(tau.args[1], Num):
        k = tau.args[1].value
        if tau.functor == "-" and k >= 1:
            return "lt"
        if tau.functor == "-" and k == 0:
            return "eq"
        if tau.functor == "+" and k >= 1:
            return "gt"
        if tau.functor == "+" and k == 0:
            return "eq"
    if isinstance(tau, Var):
        if ("eq", tau, n) in comps:
            return "eq"
        if ("lt", tau, n) in comps:
            return "lt"
        if ("le", tau, n) in comps:
            return "le"
        if ("lt", n, tau) in comps:
            return "gt"
    return None


def _ground_time(tau) -> int | None:
    if not is_ground(tau):
        return None
    v = eval_term(tau)
    return v.value if isinstance(v, Num) else None


def _anchor_at(rule: Rule, idx: int, ordinaries, comps: set) -> RulePivot | None:
    n = ordinaries[[i for i, _ in ordinaries].index(idx)][1].time
    for j, b in ordinaries:
        if j == idx:
            continue
        if _time_rel(b.time, n, comps) not in ("eq", "le", "lt"):
            return None
    h_rel = _time_rel(head_time(rule.head), n, comps)
    if h_rel == "eq":
        head_case = "a"
    elif h_rel == "gt":
        head_case = "b"
    else:
        return None
    neg_cases = []
    for elem in rule.body.negatives:
        local = comps | _comparison_facts(elem)
        labels = []
        for a in elem:
            if isinstance(a, Comparison):
                continue
            rel = _time_rel(a.time, n, local)
            if rel == "lt":
                labels.append("b")
            elif rel in ("eq", "le"):
                labels.append("a")
            else:
                return None
        neg_cases.append(tuple(labels))
    return RulePivot((idx,), idx, head_case, tuple(neg_cases))


def _anchor_at_head(rule: Rule, ordinaries, comps: set) -> RulePivot | None:
    h = _ground_time(head_time(rule.head))
    if h is None or h < 0:
        return None
    for _, b in ordinaries:
        t = _ground_time(b.time)
        if t is None or t > h:
            return None
    neg_cases = []
    for elem in rule.body.negatives:
        local = _comparison_facts(elem)
        labels = []
        for a in elem:
            if isinstance(a, Comparison):
                continue
            label = _head_anchor_neg_label(a.time, h, local)
            if label is None:
                return None
            labels.append(label)
        neg_cases.append(tuple(labels))
    return RulePivot((), None, "a", tuple(neg_cases))


def _head_anchor_neg_label(tau, h: int, comps: set) -> str | None:
    t = _ground_time(tau)
    if t is not None:
        if t < h:
            return "b"
        if t == h:
            return "a"
        return None
    if isinstance(tau, Var):
        # a local existential time bounded by an explicit integer comparison
        for kind, l, r in comps:
            if l != tau:
                continue
            c = _ground_time(r)
            if c is None:
                continue
            if kind == "eq":
                return _head_anchor_neg_label(Num(c), h, set())
            if kind == "le" and c < h:
                return "b"
            if kind == "le" and c == h:
                return "a"
            if kind == "lt" and c <= h:
                return "b"
    return None


def check_time_constrained(program: Program) -> tuple:
    """Assign a time anchor to every rule or fail with the offending rule."""
    out = []
    for rule in program.rules:
        ordinaries = _ordinary_positives(rule.body)
        if rule.is_fact():
            if _ground_time(head_time(rule.head)) is None:
                raise StratError(f"fact head has no integer time: {rule_text(rule)}")
            out.append(RulePivot((), None, "a", ()))
            continue
        comps = _comparison_facts(rule.body.positives)
        candidates = []
        anchored = {}
        for i, b in ordinaries:
            if not isinstance(b.time, Var):
                continue
            pv = _anchor_at(rule, i, ordinaries, comps)
            if pv is not None:
                candidates.append(i)
                anchored[i] = pv
        if candidates:
            first = anchored[candidates[0]]
            out.append(RulePivot(tuple(candidates), candidates[0],
                                 first.head_case, first.neg_cases))
            continue
        pv = _anchor_at_head(rule, ordinaries, comps)
        if pv is None:
            raise StratError(f"rule is not time-constrained: {rule_text(rule)}")
        out.append(pv)
    return tuple(out)


def build_call_graph(program: Program, pivots=None) -> CallGraph:
    if pivots is None:
        pivots = check_time_constrained(program)
    nodes, pos, neg = set(), set(), set()
    for rule, pv in zip(program.rules, pivots):
        hpreds = head_preds(rule.head)
        nodes.update(hpreds)
        ordinaries = _ordinary_positives(rule.body)
        nodes.update(pred_of(a) for _, a in ordinaries)
        for elem in rule.body.negatives:
            nodes.update(pred_of(a) for a in elem if not isinstance(a, Comparison))
        if pv.pivot is None:
            anchors = hpreds
        else:
            anchors = (pred_of(rule.body.positives[pv.pivot]),)
        if pv.head_case == "a":
            for _, b in ordinaries:
                for hp in hpreds:
                    pos.add((pred_of(b), hp))
        for elem, labels in zip(rule.body.negatives, pv.neg_cases):
            k = 0
            for a in elem:
                if isinstance(a, Comparison):
                    continue
                if labels[k] == "a":
                    # atoms possibly at the anchor time must be finished
                    # strictly below both the anchor and the head
                    for ap in anchors:
                        neg.add((pred_of(a), ap))
                    if pv.head_case == "a":
                        for hp in hpreds:
                            neg.add((pred_of(a), hp))
                k += 1
    return CallGraph(frozenset(nodes), frozenset(pos), frozenset(neg))


def stratify(program: Program, pivots=None) -> Stratification:
    graph = build_call_graph(program, pivots)
    g = nx.DiGraph()
    g.add_nodes_from(graph.nodes)
    g.add_edges_from(graph.pos_edges)
    g.add_edges_from(graph.neg_edges)
    comp_of = {}
    comps = []
    for scc in nx.strongly_connected_components(g):
        comps.append(frozenset(scc))
        for p in scc:
            comp_of[p] = len(comps) - 1
    for src, dst in graph.neg_edges:
        if comp_of[src] == comp_of[dst]:
            cycle = ", ".join(sorted(comps[comp_of[src]]))
            raise StratError(f"not stratifiable: negation cycle through {{{cycle}}}")
    # deterministic linear extension of the component DAG, least name first
    succs = [set() for _ in comps]
    indeg = [0] * len(comps)
    for src, dst in graph.pos_edges | graph.neg_edges:
        a, b = comp_of[src], comp_of[dst]
        if a != b and b not in succs[a]:
            succs[a].add(b)
            indeg[b] += 1
    heap = [(min(comps[i]), i) for i in range(len(comps)) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(i)
        for j in sorted(succs[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (min(comps[j]), j))
    if len(order) != len(comps):
        raise StratError("call graph has an unstratifiable cycle")
    strata = tuple(comps[i] for i in order)
    index = {p: k for k, s in enumerate(strata) for p in s}
    return Stratification(strata, index)


def strat(atom, stratification: Stratification) -> tuple:
    """Timed stratum (time point, predicate stratum) of a ground atom."""
    if isinstance(atom, (OrdinaryAtom, Equation)):
        pred = pred_of(atom)
    elif isinstance(atom, DistHead):
        pred = atom.lhs.functor
    else:
        raise StratError(f"no timed stratum for {atom!r}")
    if pred not in stratification.index:
        raise StratError(f"unknown predicate {pred!r} in {atom_text(atom)}")
    return (time_value(atom), stratification.index[pred])


def check_sbtp(program: Program):
    """Full admission check; returns (pivots, stratification)."""
    pivots = check_time_constrained(program)
    return pivots, stratify(program, pivots)
