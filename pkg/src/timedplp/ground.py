"""Bottom-up, query-guided grounding.

The grounder sweeps timed strata (time point, predicate stratum) in
increasing order.  At each stratum it fires every rule instance whose time
anchor lands exactly there, using only atoms derived at or below the
stratum; negative elements are compiled away against the frozen domain of
strictly earlier strata by enumerating minimal hitting sets of their
matches.  Heads are normalized on the fly: sum and distribution heads turn
into exclusive case rules driven by fresh probabilistic facts, so the
output program is normal (all negation on single ground literals, all rule
heads deterministic).

Query guidance threads a regressed query through the sweep: literals that
must hold in every model of the query are accumulated, and rule instances
whose bodies clash with them (complementary literals, or two different
values for one functional term at one time point) can never contribute to
a model of the query and are dropped.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter

from .builtins import (eval_atom, eval_ground_atom, eval_term, expand_range,
                       time_value)
from .errors import EvalError, GroundError
from .stratify import Stratification, check_time_constrained, strat, stratify
from .syntax import (ARITH_FUNCTORS, Comparison, DistHead, Equation, ListTerm,
                     Lit, Num, OrdinaryAtom, OrdinaryHead, Program, Real,
                     Struct, Var, atom_sort_key, atom_text, head_preds,
                     head_text, head_time, is_ground, lit_text, pred_of,
                     substitute, term_text)

TOL = 1e-9

#: iteration guard against diverging groundings (ever-growing terms)
MAX_STRATUM_PASSES = 100_000


# ---------------------------------------------------------------------------
# ground rules

@dataclass(frozen=True)
class NormalBody:
    pos: frozenset = frozenset()
    neg: frozenset = frozenset()

    def literals(self) -> frozenset:
        return frozenset(Lit(True, a) for a in self.pos) | \
            frozenset(Lit(False, a) for a in self.neg)

    def is_empty(self) -> bool:
        return not self.pos and not self.neg

    def __str__(self):
        parts = sorted(atom_text(a) for a in self.pos)
        parts += sorted("-" + atom_text(a) for a in self.neg)
        return ", ".join(parts)


EMPTY_BODY = NormalBody()


@dataclass(frozen=True)
class GroundRule:
    head: object
    body: NormalBody

    def __str__(self):
        if self.body.is_empty():
            return atom_text(self.head) + "."
        return f"{atom_text(self.head)} :- {self.body}."


def make_body(pos=(), neg=()) -> NormalBody:
    return NormalBody(frozenset(pos), frozenset(neg))


# ---------------------------------------------------------------------------
# domains and matching

class Domain:
    """Growing set of ground atoms bucketed by predicate and time point."""

    def __init__(self, stratification: Stratification):
        self.stratification = stratification
        self._buckets: dict = {}
        self._atoms: set = set()

    def __len__(self):
        return len(self._atoms)

    def __contains__(self, atom):
        return atom in self._atoms

    def atoms(self) -> frozenset:
        return frozenset(self._atoms)

    def add(self, atom) -> bool:
        if atom in self._atoms:
            return False
        self._atoms.add(atom)
        pred = pred_of(atom)
        if not pred.startswith("$"):
            self._buckets.setdefault(pred, {}).setdefault(time_value(atom), []) \
                .append(atom)
        return True

    def count_below(self, ts) -> int:
        n = 0
        for pred, by_time in self._buckets.items():
            cut = self._cutoff(pred, ts, strict=True)
            n += sum(len(v) for t, v in by_time.items() if t <= cut)
        return n

    def _cutoff(self, pred, ts, strict: bool) -> int:
        t, s = ts
        sidx = self.stratification.index.get(pred)
        if sidx is None:
            return -1
        if sidx < s or (not strict and sidx == s):
            return t
        return t - 1

    def view(self, ts=None, strict: bool = False) -> "DomainView":
        return DomainView(self, ts, strict)


class DomainView:
    """Read-only lens over a domain, optionally capped at a timed stratum."""

    def __init__(self, domain: Domain, ts, strict: bool):
        self._d = domain
        self._ts = ts
        self._strict = strict

    def candidates(self, pred: str, time: int | None):
        by_time = self._d._buckets.get(pred)
        if not by_time:
            return
        cut = None if self._ts is None else self._d._cutoff(pred, self._ts,
                                                            self._strict)
        if time is not None:
            if cut is None or time <= cut:
                yield from by_time.get(time, ())
            return
        for t in sorted(by_time):
            if cut is not None and t > cut:
                break
            yield from by_time[t]


class SetDomain:
    """Domain view over a fixed collection of ground atoms."""

    def __init__(self, atoms):
        self._buckets: dict = {}
        for a in atoms:
            self._buckets.setdefault(pred_of(a), {}) \
                .setdefault(time_value(a), []).append(a)

    def candidates(self, pred: str, time: int | None):
        by_time = self._buckets.get(pred)
        if not by_time:
            return
        if time is not None:
            yield from by_time.get(time, ())
            return
        for t in sorted(by_time):
            yield from by_time[t]


def match_term(pat, ground, bind: dict) -> dict | None:
    if isinstance(pat, Var):
        known = bind.get(pat.name)
        if known is None:
            b = dict(bind)
            b[pat.name] = ground
            return b
        return bind if known == ground else None
    if isinstance(pat, (Num, Real)):
        return bind if pat == ground else None
    if isinstance(pat, Struct):
        if pat.functor in ARITH_FUNCTORS:
            inst = substitute(pat, bind)
            if not is_ground(inst):
                raise GroundError(f"cannot match the non-ground interpreted "
                                  f"term {term_text(inst)}")
            return bind if eval_term(inst) == ground else None
        if not (isinstance(ground, Struct) and ground.functor == pat.functor
                and len(ground.args) == len(pat.args)):
            return None
        for p, g in zip(pat.args, ground.args):
            bind = match_term(p, g, bind)
            if bind is None:
                return None
        return bind
    if isinstance(pat, ListTerm):
        if not (isinstance(ground, ListTerm)
                and len(ground.items) == len(pat.items)):
            return None
        for p, g in zip(pat.items, ground.items):
            bind = match_term(p, g, bind)
            if bind is None:
                return None
        return bind
    raise GroundError(f"cannot match against pattern {pat!r}")


def match_atom(pat, ground, bind: dict) -> dict | None:
    if isinstance(pat, OrdinaryAtom):
        if not (isinstance(ground, OrdinaryAtom) and ground.pred == pat.pred
                and len(ground.args) == len(pat.args)):
            return None
        bind = match_term(pat.time, ground.time, bind)
        for p, g in zip(pat.args, ground.args):
            if bind is None:
                return None
            bind = match_term(p, g, bind)
        return bind
    if isinstance(pat, Equation):
        if not isinstance(ground, Equation):
            return None
        bind = match_term(pat.lhs, ground.lhs, bind)
        if bind is None:
            return None
        bind = match_term(pat.rhs, ground.rhs, bind)
        if bind is None:
            return None
        return match_term(pat.time, ground.time, bind)
    raise GroundError(f"cannot match atom pattern {pat!r}")


def _match_join(atoms, view, bind0: dict | None = None) -> list:
    """All ways to ground a sequence of atoms against a domain view.

    Interpreted atoms are checked as soon as their variables are bound; an
    atom still unresolved after all others flounders.  Returns (binding,
    matched ordinary/equation atoms) pairs in enumeration order.
    """
    atoms = tuple(atoms)
    results = []

    def flush(bind, pending):
        remaining = []
        for c in pending:
            inst = substitute(c, bind)
            if is_ground(inst):
                if not eval_atom(inst):
                    return None
            else:
                remaining.append(c)
        return remaining

    def go(i, bind, matched, pending):
        pending = flush(bind, pending)
        if pending is None:
            return
        if i == len(atoms):
            if pending:
                raise GroundError(f"interpreted atom cannot be evaluated "
                                  f"(unbound variables): {atom_text(pending[0])}")
            results.append((bind, tuple(matched)))
            return
        a = atoms[i]
        if isinstance(a, Comparison):
            go(i + 1, bind, matched, pending + [a])
            return
        t = substitute(a.time, bind)
        time = None
        if is_ground(t):
            tv = eval_term(t)
            if not isinstance(tv, Num):
                raise GroundError(f"non-integer time in {atom_text(a)}")
            time = tv.value
        for cand in view.candidates(pred_of(a), time):
            b2 = match_atom(a, cand, bind)
            if b2 is not None:
                go(i + 1, b2, matched + [cand], pending)

    go(0, dict(bind0 or {}), [], [])
    return results


def matchers(atoms, domain) -> list:
    """All grounding substitutions taking every ordinary/equation atom of
    the sequence into the domain, with interpreted atoms evaluating to
    true."""
    view = domain if hasattr(domain, "candidates") else SetDomain(domain)
    return [bind for bind, _ in _match_join(atoms, view)]


# ---------------------------------------------------------------------------
# hitting sets

def hitting_sets(family) -> list:
    """All subset-minimal sets containing at least one element from each
    sequence of the family.  The empty family has the single solution {}."""
    seqs = [tuple(dict.fromkeys(s)) for s in family]
    if not seqs:
        return [frozenset()]
    if any(not s for s in seqs):
        return []
    found: set = set()

    def rec(i, chosen):
        if i == len(seqs):
            found.add(chosen)
            return
        if any(d in chosen for d in seqs[i]):
            rec(i + 1, chosen)
            return
        for d in seqs[i]:
            rec(i + 1, chosen | {d})

    rec(0, frozenset())
    minimal = [h for h in found if not any(o < h for o in found)]
    return sorted(minimal, key=lambda h: (len(h), sorted(map(atom_sort_key, h))))


# ---------------------------------------------------------------------------
# body grounding

def ground_body(pos_atoms, neg_elements, bind, dneg) -> list:
    """Replace each negative element by its ground explanations over the
    frozen earlier domain, one result body per hitting set."""
    pos = frozenset(pos_atoms)
    choices = []
    for elem in neg_elements:
        seqs = set()
        dead = False
        for _, matched in _match_join(elem, dneg, bind):
            if not matched:
                # the element holds by interpreted atoms alone; negating it
                # makes the body unsatisfiable
                dead = True
                break
            seqs.add(tuple(matched))
        if dead:
            return []
        ordered = sorted(seqs, key=lambda s: tuple(map(atom_sort_key, s)))
        choices.append(hitting_sets(ordered))
    bodies = []
    seen = set()
    for combo in itertools.product(*choices):
        neg = frozenset().union(*combo) if combo else frozenset()
        if neg & pos:
            continue
        b = NormalBody(pos, neg)
        if b not in seen:
            seen.add(b)
            bodies.append(b)
    return bodies


# ---------------------------------------------------------------------------
# head normalization

class NameRegistry:
    """Content-addressed names for introduced atoms, so identical ground
    rules get identical names in every run they appear in."""

    def __init__(self):
        self._by_tag: dict = {}

    def tag(self, key: str) -> str:
        digest = "h" + hashlib.blake2b(key.encode(), digest_size=6).hexdigest()
        prev = self._by_tag.setdefault(digest, key)
        if prev != key:
            raise GroundError(f"internal name collision on {digest}")
        return digest


def _eval_prob(term) -> float:
    if term is None:
        return 1.0
    v = eval_term(term)
    if isinstance(v, (Num, Real)):
        return float(v.value)
    raise EvalError(f"probability expression is not numeric: {term_text(term)}")


def _dist_cases(head: DistHead) -> list:
    values = head.values
    if not isinstance(values, ListTerm):
        values = eval_term(values)
    if not isinstance(values, ListTerm):
        raise GroundError(f"distribution values must form a list: "
                          f"{head_text(head)}")
    items = expand_range(values).items
    if not items:
        raise GroundError(f"empty distribution: {head_text(head)}")
    weighted = all(isinstance(v, ListTerm) and len(v.items) == 2
                   and isinstance(v.items[1], (Num, Real)) for v in items)
    lhs = eval_term(head.lhs)
    cases = []
    for v in items:
        if weighted:
            value, w = v.items
            cases.append((float(w.value), Equation(lhs, value, head.time)))
        else:
            cases.append((1.0 / len(items), Equation(lhs, v, head.time)))
    return cases


def _intro_atom(pred: str, tag: str, time: Num, idx: int | None = None):
    args = (Struct(tag),) if idx is None else (Struct(tag), Num(idx))
    return OrdinaryAtom(pred, time, args)


def normalize_head(head, body: NormalBody, names: NameRegistry):
    """Expand one ground rule into normal rules plus probabilistic facts.

    Sum heads become exclusive cases: the i-th case fires when its own
    chance fact is chosen and no earlier case fired.  The chance is the
    annotated probability rescaled by the mass the earlier cases left
    over, which makes the marginal probability of each head atom equal its
    annotation.  Bare probabilistic facts pass through unchanged, as do
    rules with probability one.
    """
    if isinstance(head, OrdinaryHead):
        atom = eval_ground_atom(head.atom)
        pr = _eval_prob(head.prob)
        if pr > 1 + TOL or pr < -TOL:
            raise GroundError(f"probability out of range: {head_text(head)}")
        if pr >= 1 - TOL:
            return [GroundRule(atom, body)], []
        if pr <= TOL:
            return [], []
        if body.is_empty():
            return [], [(atom, pr)]
        tag = names.tag(f"{atom_text(atom)} <- {body}")
        tt = atom.time
        hb = _intro_atom("$head", tag, tt)
        case = _intro_atom("$case", tag, tt, 1)
        return [GroundRule(hb, body),
                GroundRule(atom, make_body({hb, case}))], [(case, pr)]

    if isinstance(head, DistHead):
        cases = _dist_cases(head)
    else:
        cases = [(_eval_prob(pr), a) for pr, a in head.cases]
    cases = [(pr, eval_ground_atom(a)) for pr, a in cases]
    if any(pr < -TOL or pr > 1 + TOL for pr, _ in cases):
        raise GroundError(f"case probability out of range: {head_text(head)}")
    total = sum(pr for pr, _ in cases)
    if total > 1 + TOL:
        raise GroundError(f"case probabilities sum to {total:.6g} > 1: "
                          f"{head_text(head)}")
    tt = cases[0][1].time
    key = " + ".join(f"{pr!r}::{atom_text(a)}" for pr, a in cases) + f" <- {body}"
    tag = names.tag(key)
    hb = _intro_atom("$head", tag, tt)
    rules = [GroundRule(hb, body)]
    facts = []
    avail = 1.0
    chain: tuple = ()
    for idx, (pr, atom) in enumerate(cases, start=1):
        if pr <= TOL:
            continue
        case = _intro_atom("$case", tag, tt, idx)
        rules.append(GroundRule(atom, make_body({hb, case}, chain)))
        scaled = pr / avail
        if scaled >= 1 - TOL:
            rules.append(GroundRule(case, EMPTY_BODY))
        else:
            facts.append((case, scaled))
        chain = chain + (case,)
        avail -= pr
    return rules, facts


# ---------------------------------------------------------------------------
# consistency and goal regression

def _as_lits(x) -> frozenset:
    if isinstance(x, NormalBody):
        return x.literals()
    return frozenset(x)


def consistent(a, b=()) -> bool:
    """No complementary literal pair and no two values for one functional
    term at one time point across both literal sets."""
    lits = _as_lits(a) | _as_lits(b)
    pos = {l.atom for l in lits if l.positive}
    for l in lits:
        if not l.positive and l.atom in pos:
            return False
    seen: dict = {}
    for at in pos:
        if isinstance(at, Equation):
            k = (at.lhs, at.time)
            if seen.setdefault(k, at.rhs) != at.rhs:
                return False
    return True


def regress(query, rules) -> frozenset:
    """Close a query under literals common to all rule bodies of each of
    its positive atoms.  Atoms that head any fact stay untouched (they may
    hold unconditionally), as do atoms without rules."""
    bodies: dict = {}
    fact_heads = set()
    for r in rules:
        if r.body.is_empty():
            fact_heads.add(r.head)
        else:
            bodies.setdefault(r.head, []).append(r.body.literals())
    out = set(query)
    work = [l.atom for l in out if l.positive]
    done: set = set()
    while work:
        a = work.pop()
        if a in done:
            continue
        done.add(a)
        if a in fact_heads:
            continue
        bs = bodies.get(a)
        if not bs:
            continue
        for l in frozenset.intersection(*bs) - out:
            out.add(l)
            if l.positive:
                work.append(l.atom)
    return frozenset(out)


# ---------------------------------------------------------------------------
# dependency depths over ground programs

def dependency_depths(rules) -> dict:
    """Longest-path depth of every atom in the ground dependency graph
    (edges from body atoms, positive or negated, to the head).  Raises on
    cycles, which are out of scope for this engine."""
    preds: dict = {}
    for r in rules:
        deps = preds.setdefault(r.head, set())
        deps.update(r.body.pos)
        deps.update(r.body.neg)
        for a in r.body.pos | r.body.neg:
            preds.setdefault(a, set())
    try:
        order = list(TopologicalSorter(preds).static_order())
    except CycleError as e:
        cyc = " -> ".join(atom_text(a) for a in e.args[1][:6])
        raise GroundError(f"ground program has a positive cycle: {cyc}") from None
    depth: dict = {}
    for a in order:
        depth[a] = max((depth[d] + 1 for d in preds.get(a, ())), default=0)
    return depth


# ---------------------------------------------------------------------------
# the grounder

@dataclass
class GroundProgram:
    """Normal ground program: probabilistic facts plus deterministic rules."""

    facts: dict
    rules: tuple
    stratification: Stratification
    atom_strat: dict
    domain: frozenset
    eot: int
    query: frozenset
    regressed: frozenset
    guided: bool
    pruned: int = 0
    depth: dict = field(default_factory=dict)

    def sorted_clauses(self) -> list:
        out = []
        for a, pr in self.facts.items():
            out.append((self.atom_strat[a], f"{pr!r} :: {atom_text(a)}."))
        for r in self.rules:
            out.append((self.atom_strat[r.head], str(r)))
        out.sort(key=lambda kv: (kv[0], kv[1]))
        return out

    def __str__(self):
        return "\n".join(text for _, text in self.sorted_clauses())


class _Grounder:
    def __init__(self, program: Program, query: frozenset, eot: int,
                 guided: bool, regression: bool):
        self.program = program
        self.pivots = check_time_constrained(program)
        self.strat = stratify(program, self.pivots)
        self.eot = eot
        self.guided = guided
        self.regression = regression
        self.names = NameRegistry()
        self.dom = Domain(self.strat)
        self.atom_strat: dict = {}
        self.rules: dict = {}
        self.facts: dict = {}
        self.query = query
        self.R = set(query)
        self.pruned = 0
        self.facts_fired: set = set()

    # -- bookkeeping ----------------------------------------------------

    def _note_atom(self, atom, fallback_strat):
        if pred_of(atom).startswith("$"):
            ts = fallback_strat
        else:
            ts = strat(atom, self.strat)
        self.dom.add(atom)
        self.atom_strat.setdefault(atom, ts)

    def _emit(self, new_rules, new_facts, fallback_strat) -> bool:
        changed = False
        for r in new_rules:
            if r not in self.rules:
                self.rules[r] = None
                self._note_atom(r.head, fallback_strat)
                changed = True
        for atom, pr in new_facts:
            old = self.facts.get(atom)
            if old is None:
                self.facts[atom] = pr
                self._note_atom(atom, fallback_strat)
                changed = True
            elif abs(old - pr) > TOL:
                raise GroundError(f"conflicting probabilities for fact "
                                  f"{atom_text(atom)}: {old!r} vs {pr!r}")
        return changed

    def _head_anchor(self, head) -> int:
        return min(self.strat.index[p] for p in head_preds(head))

    def _head_time_value(self, head, bind) -> int:
        t = eval_term(substitute(head_time(head), bind))
        if not isinstance(t, Num):
            raise GroundError(f"head time is not an integer: {head_text(head)}")
        return t.value

    # -- rule firing ------------------------------------------------------

    def _s_matchers(self, rule, pv, ts) -> list:
        positives = rule.body.positives
        view = self.dom.view(ts, strict=False)
        if pv.pivot is None:
            if self._head_anchor(rule.head) != ts[1]:
                return []
            if self._head_time_value(rule.head, {}) != ts[0]:
                return []
            return _match_join(positives, view)
        found: dict = {}
        for c in pv.candidates:
            anchor = positives[c]
            if self.strat.index[pred_of(anchor)] != ts[1]:
                continue
            rest = positives[:c] + positives[c + 1:]
            for cand in view.candidates(pred_of(anchor), ts[0]):
                b0 = match_atom(anchor, cand, {})
                if b0 is None:
                    continue
                assert strat(cand, self.strat) == ts
                for bind, matched in _match_join(rest, view, b0):
                    key = tuple(sorted((k, term_text(v))
                                       for k, v in bind.items()))
                    found.setdefault(key, (bind, matched + (cand,)))
        return list(found.values())

    def _fire(self, ridx, rule, pv, ts, dneg) -> bool:
        if rule.is_fact():
            if ridx in self.facts_fired:
                return False
            t = self._head_time_value(rule.head, {})
            if (t, self._head_anchor(rule.head)) != ts:
                return False
            self.facts_fired.add(ridx)
            if t > self.eot:
                return False
            return self._instantiate(rule.head, EMPTY_BODY)
        changed = False
        for bind, matched in self._s_matchers(rule, pv, ts):
            if self._head_time_value(rule.head, bind) > self.eot:
                continue
            head = substitute(rule.head, bind)
            for body in ground_body(matched, rule.body.negatives, bind, dneg):
                if self.guided and not consistent(body.literals(), self.R):
                    self.pruned += 1
                    continue
                if self._instantiate(head, body):
                    changed = True
        return changed

    def _instantiate(self, head, body: NormalBody) -> bool:
        new_rules, new_facts = normalize_head(head, body, self.names)
        fallback = (self._head_time_value(head, {}), self._head_anchor(head))
        return self._emit(new_rules, new_facts, fallback)

    # -- main sweep -------------------------------------------------------

    def run(self) -> GroundProgram:
        for n in range(self.eot + 1):
            for sidx in range(len(self.strat.strata)):
                ts = (n, sidx)
                frozen_below = self.dom.count_below(ts)
                dneg = self.dom.view(ts, strict=True)
                passes = 0
                while True:
                    passes += 1
                    if passes > MAX_STRATUM_PASSES:
                        raise GroundError("grounding diverged "
                                          "(domain keeps growing)")
                    changed = False
                    for ridx, (rule, pv) in enumerate(zip(self.program.rules,
                                                          self.pivots)):
                        if self._fire(ridx, rule, pv, ts, dneg):
                            changed = True
                    if not changed:
                        break
                if self.dom.count_below(ts) != frozen_below:
                    raise GroundError("internal: frozen domain changed "
                                      "during stratum")
                if self.regression:
                    visible = [r for r in self.rules
                               if self.atom_strat[r.head] <= ts]
                    self.R = set(regress(self.R, visible))
                    if self.guided and not consistent(self.R):
                        return self._finish(empty=True)
        return self._finish()

    def _finish(self, empty: bool = False) -> GroundProgram:
        rules = list(self.rules)
        facts = dict(self.facts)
        if empty:
            # the regressed query is unsatisfiable, so every model of the
            # query has probability zero; an empty program reflects that
            rules, facts = [], {}
        elif self.guided:
            rules, facts = self._sweep(rules, facts)
        overlap = {r.head for r in rules} & set(facts)
        if overlap:
            sample = atom_text(min(overlap, key=atom_sort_key))
            raise GroundError(f"atom {sample} is both a probabilistic fact "
                              f"and a rule head; unsupported")
        rules_sorted = tuple(sorted(
            rules, key=lambda r: (self.atom_strat[r.head], atom_text(r.head),
                                  str(r.body))))
        return GroundProgram(
            facts=facts, rules=rules_sorted, stratification=self.strat,
            atom_strat=dict(self.atom_strat), domain=self.dom.atoms(),
            eot=self.eot, query=self.query, regressed=frozenset(self.R),
            guided=self.guided, pruned=self.pruned,
            depth=dependency_depths(rules_sorted))

    def _sweep(self, rules, facts):
        """Drop rules clashing with the final regressed query or whose
        positive body can no longer be derived, then unused chance facts."""
        kept = [r for r in rules if consistent(r.body.literals(), self.R)]
        self.pruned += len(rules) - len(kept)
        derivable = set(facts)
        changed = True
        while changed:
            changed = False
            for r in kept:
                if r.head not in derivable and r.body.pos <= derivable:
                    derivable.add(r.head)
                    changed = True
        alive = [r for r in kept if r.body.pos <= derivable]
        self.pruned += len(kept) - len(alive)
        referenced = {a for r in alive for a in r.body.pos | r.body.neg}
        referenced |= {l.atom for l in self.R}
        return alive, {a: p for a, p in facts.items() if a in referenced}


def ground_program(program: Program, query=(), eot: int = 0, *,
                   guided: bool = True, regression: bool | None = None
                   ) -> GroundProgram:
    """Ground a program up to the end-of-time bound.

    With guidance on, rule instances inconsistent with the (regressed)
    query are pruned; the success probability of the query is unaffected.
    """
    if eot < 0:
        raise GroundError("end of time must be non-negative")
    lits = []
    for l in query:
        if not isinstance(l, Lit):
            raise GroundError(f"query must consist of literals, got {l!r}")
        if not is_ground(l.atom):
            raise GroundError(f"query literal is not ground: {lit_text(l)}")
        lits.append(Lit(l.positive, eval_ground_atom(l.atom)))
    if regression is None:
        regression = guided
    return _Grounder(program, frozenset(lits), eot, guided, regression).run()
