"""Exact inference by variable elimination over a normal ground program.

A query probability is computed by resolving its literals top-down against
the ground rules, always picking a literal no other query literal depends
on (maximal in the ground dependency order).  That discipline, together
with making the rule bodies of every head mutually exclusive first, keeps
every probabilistic fact from being multiplied in more than once.
Intermediate results are memoized per call, and queries containing a
complementary pair or two values for one functional term are cut to zero
immediately.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from random import Random

from .errors import InferenceError
from .ground import (GroundProgram, GroundRule, NameRegistry, consistent,
                     dependency_depths, make_body)
from .syntax import (Lit, Num, OrdinaryAtom, Struct, atom_sort_key, atom_text,
                     is_ground, time_of)


@dataclass
class VEStats:
    expansions: int = 0
    cache_hits: int = 0
    pruned: int = 0


@dataclass
class DisjointProgram:
    """Ground program whose rules for any one head fire exclusively."""

    facts: dict
    det_facts: frozenset
    rules_by_head: dict
    depth: dict
    source: GroundProgram


def make_disjoint(pg: GroundProgram) -> DisjointProgram:
    """Make the rule bodies per head mutually exclusive via indicator atoms.

    Heads with a single rule keep it; for m >= 2 rules the i-th body is
    named by a fresh indicator and the head fires through exactly the first
    indicator that holds.  Probabilistic facts are untouched.
    """
    groups: dict = {}
    for r in pg.rules:
        groups.setdefault(r.head, []).append(r.body)
    names = NameRegistry()
    out: list = []
    for head in sorted(groups, key=atom_sort_key):
        bodies = groups[head]
        if len(bodies) == 1:
            out.append(GroundRule(head, bodies[0]))
            continue
        bodies = sorted(bodies, key=str)
        tag = names.tag(atom_text(head))
        chain: tuple = ()
        for i, b in enumerate(bodies, start=1):
            ind = OrdinaryAtom("$alt", time_of(head), (Struct(tag), Num(i)))
            out.append(GroundRule(ind, b))
            out.append(GroundRule(head, make_body({ind}, chain)))
            chain = chain + (ind,)
    det = frozenset(r.head for r in out if r.body.is_empty())
    by_head: dict = {}
    for r in out:
        if not r.body.is_empty():
            by_head.setdefault(r.head, []).append(r.body)
    by_head = {h: tuple(bs) for h, bs in by_head.items()}
    return DisjointProgram(facts=dict(pg.facts), det_facts=det,
                           rules_by_head=by_head,
                           depth=dependency_depths(out), source=pg)


def query_inconsistent(query) -> bool:
    """Complementary literals, or two values for one functional term at one
    time point, among the query literals."""
    return not consistent(query)


def ve_probability(pd: DisjointProgram, query, *, prune: bool = True,
                   use_cache: bool = True, rng: Random | None = None,
                   stats: VEStats | None = None) -> float:
    """Success probability of a ground normal query.

    ``prune`` switches the early inconsistency cut, ``use_cache`` the
    memoization; neither changes the result on admissible programs.  A
    random generator widens the choice among dependency-maximal literals,
    which must not change the result either.
    """
    lits = []
    for l in query:
        if not isinstance(l, Lit) or not is_ground(l.atom):
            raise InferenceError(f"query literals must be ground: {l}")
        lits.append(l)
    if stats is None:
        stats = VEStats()
    depth = pd.depth
    cache: dict = {}
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))

    def rank(l: Lit):
        return (depth.get(l.atom, 0), atom_sort_key(l.atom), l.positive)

    def pick(q: frozenset) -> Lit:
        if rng is None:
            return max(q, key=rank)
        top = max(depth.get(l.atom, 0) for l in q)
        return rng.choice(sorted((l for l in q if depth.get(l.atom, 0) == top),
                                 key=rank))

    def inner(q: frozenset) -> float:
        stats.expansions += 1
        if not q:
            return 1.0
        if prune and not consistent(q):
            stats.pruned += 1
            return 0.0
        if use_cache and q in cache:
            stats.cache_hits += 1
            return cache[q]
        lit = pick(q)
        rest = q - {lit}
        atom = lit.atom
        if not lit.positive:
            r = inner(rest) - inner(rest | {Lit(True, atom)})
        elif atom in pd.facts:
            r = pd.facts[atom] * inner(rest)
        elif atom in pd.det_facts:
            r = inner(rest)
        else:
            r = 0.0
            for body in pd.rules_by_head.get(atom, ()):
                r += inner(rest | body.literals())
        if use_cache:
            cache[q] = r
        return r

    p = inner(frozenset(lits))
    return min(1.0, max(0.0, p))
