"""Command-line driver and the conditional-query pipeline.

Answering ``?- B | E`` runs three grounding stages: (a) ground for the
evidence alone to price it, (b) ground for the ground literals of (B, E)
to obtain a small domain, and (c) for every way of matching B's open
variables into that domain, ground once more for (B_gamma, E) and compute
its probability.  Reported answers are the bindings together with
P(B_gamma | E).
"""

from __future__ import annotations

import argparse
import json
import sys
import time as _time
from dataclasses import dataclass, field

from . import corpus
from .builtins import eval_ground_atom, time_value
from .errors import PlpError, QueryError
from .ground import ground_program, matchers
from .infer import VEStats, make_disjoint, ve_probability
from .semantics import oracle_success_probability
from .stratify import check_time_constrained, stratify
from .syntax import (Body, Comparison, ConditionalQuery, Lit, Num,
                     OrdinaryAtom, OrdinaryHead, Program, Rule, atom_text,
                     body_text, is_ground, parse_program, parse_query,
                     rule_text, substitute, term_text, vars_of)

PROB_TOL = 1e-12


@dataclass
class AnswerSet:
    """Answer substitutions with conditional probabilities, plus P(E)."""

    answers: list
    evidence_prob: float
    ground_rule_count: int = 0
    stats: VEStats = field(default_factory=VEStats)


def _ground_times(query: ConditionalQuery) -> list:
    times = []
    for a in query.evidence:
        times.append(time_value(a))
    for a in query.body.positives:
        if not isinstance(a, Comparison) and is_ground(a.time):
            times.append(time_value(a))
    for elem in query.body.negatives:
        for a in elem:
            if not isinstance(a, Comparison) and is_ground(a.time):
                times.append(time_value(a))
    return times


def default_eot(query: ConditionalQuery) -> int:
    times = _ground_times(query)
    return max(times) if times else 0


def _ground_query_lits(body: Body, evidence) -> list:
    lits = [Lit(True, eval_ground_atom(a)) for a in evidence]
    for a in body.positives:
        if not isinstance(a, Comparison) and is_ground(a):
            lits.append(Lit(True, eval_ground_atom(a)))
    for elem in body.negatives:
        if len(elem) == 1 and not isinstance(elem[0], Comparison) \
                and is_ground(elem[0]):
            lits.append(Lit(False, eval_ground_atom(elem[0])))
    return lits


def _fresh_query_rule(body: Body, n: int, eot: int) -> tuple:
    """Wrap a query body that still carries negative elements into a rule
    for a fresh head atom, so grounding can compile the negation away."""
    head = OrdinaryAtom("$query", Num(eot), (Num(n),))
    return Rule(OrdinaryHead(head), body, line=0), head


def _probability(pg, lits, *, use_oracle, prune, use_cache, stats) -> float:
    if use_oracle:
        return oracle_success_probability(pg, lits)
    return ve_probability(make_disjoint(pg), lits, prune=prune,
                          use_cache=use_cache, stats=stats)


def answer_conditional_query(program: Program, query: ConditionalQuery,
                             eot: int | None = None, *, guided: bool = True,
                             use_oracle: bool = False, prune: bool = True,
                             use_cache: bool = True,
                             include_zero: bool = False) -> AnswerSet:
    if eot is None:
        eot = default_eot(query)
    elif eot < default_eot(query):
        raise QueryError(f"end of time {eot} is below the latest query time "
                         f"{default_eot(query)}")
    stats = VEStats()
    evidence_lits = [Lit(True, eval_ground_atom(a)) for a in query.evidence]

    if evidence_lits:
        pg_a = ground_program(program, evidence_lits, eot, guided=guided)
        p_e = _probability(pg_a, evidence_lits, use_oracle=use_oracle,
                           prune=prune, use_cache=use_cache, stats=stats)
        if p_e <= PROB_TOL:
            raise QueryError("evidence has probability zero")
    else:
        p_e = 1.0

    stage_b_lits = _ground_query_lits(query.body, query.evidence)
    pg_b = ground_program(program, stage_b_lits, eot, guided=guided)

    open_vars = sorted(vars_of(query.body.positives))
    if open_vars:
        binds = matchers(query.body.positives, pg_b.domain)
    else:
        binds = [{}]

    seen_bodies = set()
    answers = []
    for bind in sorted(binds, key=lambda b: tuple(term_text(b[v])
                                                  for v in sorted(b))):
        body_g = substitute(query.body, bind)
        key = body_text(body_g)
        if key in seen_bodies:
            continue
        seen_bodies.add(key)
        multi_negs = [elem for elem in body_g.negatives
                      if len(elem) > 1 or isinstance(elem[0], Comparison)
                      or not is_ground(elem[0])]
        if multi_negs:
            rule, head = _fresh_query_rule(body_g, len(answers), eot)
            prog_c = Program(program.rules + (rule,))
            q_lits = [Lit(True, head)] + evidence_lits
        else:
            prog_c = program
            q_lits = _ground_query_lits(body_g, query.evidence)
        if prog_c is program and set(q_lits) == set(stage_b_lits):
            pg_c = pg_b
        else:
            pg_c = ground_program(prog_c, q_lits, eot, guided=guided)
        p = _probability(pg_c, q_lits, use_oracle=use_oracle, prune=prune,
                         use_cache=use_cache, stats=stats)
        visible = {v: bind[v] for v in open_vars if v in bind}
        answers.append((visible, min(1.0, max(0.0, p / p_e))))

    if not include_zero:
        answers = [(g, p) for g, p in answers if p > PROB_TOL]
    return AnswerSet(answers=answers, evidence_prob=p_e,
                     ground_rule_count=len(pg_b.rules), stats=stats)


# ---------------------------------------------------------------------------
# benchmarks

def run_benchmark(family: str, n: int, *, kind: str = "timesteps",
                  scenario: str = "sunny", guided: bool = True,
                  prune: bool = True, narrow: bool = False) -> dict:
    """Ground and answer one scaled corpus query, recording sizes and time."""
    if family == "markov":
        text = corpus.MARKOV
        qtext = corpus.markov_query(kind, n)
    elif family == "hmm":
        text = corpus.HMM_NARROW if narrow else corpus.HMM
        qtext = corpus.hmm_query(scenario, n, narrow=narrow)
    elif family == "urn":
        text = corpus.URN
        qtext = corpus.urn_query(n)
    else:
        raise ValueError(f"unknown benchmark family {family!r}")
    program = parse_program(text)
    query = parse_query(qtext)
    t0 = _time.perf_counter()
    result = answer_conditional_query(program, query, guided=guided,
                                      prune=prune)
    wall_ms = (_time.perf_counter() - t0) * 1000.0
    record = {
        "family": family,
        "n": n,
        "query": qtext,
        "guided": guided,
        "pruning": prune,
        "ground_rule_count": result.ground_rule_count,
        "wall_time_ms": round(wall_ms, 3),
        "evidence_prob": result.evidence_prob,
        "ve_expansions": result.stats.expansions,
    }
    if len(result.answers) == 1 and not result.answers[0][0]:
        record["probability"] = result.answers[0][1]
    else:
        record["answers"] = {
            ", ".join(f"{v}={term_text(t)}" for v, t in sorted(g.items())): p
            for g, p in result.answers}
    return record


# ---------------------------------------------------------------------------
# command line

def _format_bindings(bind: dict) -> str:
    if not bind:
        return "yes"
    return ", ".join(f"{v}={term_text(t)}" for v, t in sorted(bind.items()))


def _cmd_check(args) -> int:
    program = parse_program(_read(args.file))
    pivots = check_time_constrained(program)
    stratification = stratify(program, pivots)
    print("strata:", stratification)
    for i, (rule, pv) in enumerate(zip(program.rules, pivots), start=1):
        if rule.is_fact():
            print(f"rule {i}: fact {rule_text(rule)}")
            continue
        if pv.pivot is None:
            anchor = "head"
        else:
            anchor = atom_text(rule.body.positives[pv.pivot])
        labels = "".join(f" neg{j + 1}:({','.join(ls)})"
                         for j, ls in enumerate(pv.neg_cases))
        print(f"rule {i}: anchor {anchor}; head case ({pv.head_case});"
              f"{labels}  {rule_text(rule)}")
    return 0


def _parse_query_lits(text: str):
    q = parse_query(text)
    lits = _ground_query_lits(q.body, q.evidence)
    return q, lits


def _cmd_ground(args) -> int:
    program = parse_program(_read(args.file))
    if args.query:
        query, lits = _parse_query_lits(args.query)
        eot = args.eot if args.eot is not None else default_eot(query)
    else:
        lits = []
        eot = args.eot if args.eot is not None else 0
    t0 = _time.perf_counter()
    pg = ground_program(program, lits, eot, guided=not args.unguided)
    wall_ms = (_time.perf_counter() - t0) * 1000.0
    print(pg)
    if args.stats:
        print(json.dumps({
            "rule_count": len(pg.rules),
            "fact_count": len(pg.facts),
            "strata": len(pg.stratification.strata),
            "pruned": pg.pruned,
            "wall_time_ms": round(wall_ms, 3),
        }))
    return 0


def _cmd_query(args) -> int:
    program = parse_program(_read(args.file))
    query = parse_query(args.q)
    result = answer_conditional_query(
        program, query, eot=args.eot, guided=not args.unguided,
        use_oracle=args.oracle, prune=not args.no_ip,
        use_cache=not args.no_cache, include_zero=args.all)
    if args.json:
        print(json.dumps({
            "answers": [{"bindings": {v: term_text(t) for v, t in g.items()},
                         "prob": p} for g, p in result.answers],
            "evidence_prob": result.evidence_prob,
        }))
        return 0
    for bind, p in result.answers:
        print(f"{_format_bindings(bind)}  P={p:.15g}")
    if query.evidence:
        print(f"P(evidence)={result.evidence_prob:.15g}")
    if not result.answers:
        print("no answers")
    return 0


def _cmd_bench(args) -> int:
    record = run_benchmark(args.family, args.n, kind=args.kind,
                           scenario=args.scenario, guided=not args.unguided,
                           prune=not args.no_ip, narrow=args.narrow)
    print(json.dumps(record))
    return 0


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise PlpError(f"cannot read {path}: {e}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="timedplp",
        description="exact probabilistic inference over timed logic programs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="report strata and rule time anchors")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("ground", help="print the ground normal program")
    p.add_argument("file")
    p.add_argument("--query", help="query biasing the grounding, '?- B | E.'")
    p.add_argument("--eot", type=int, default=None, help="end-of-time bound")
    p.add_argument("--unguided", action="store_true")
    p.add_argument("--stats", action="store_true", help="append a JSON record")
    p.set_defaults(fn=_cmd_ground)

    p = sub.add_parser("query", help="answer a conditional query")
    p.add_argument("file")
    p.add_argument("--q", required=True, help="query text, '?- B | E.'")
    p.add_argument("--eot", type=int, default=None)
    p.add_argument("--oracle", action="store_true",
                   help="use exhaustive enumeration instead of elimination")
    p.add_argument("--no-ip", action="store_true",
                   help="disable early inconsistency pruning")
    p.add_argument("--no-cache", action="store_true",
                   help="disable memoization")
    p.add_argument("--unguided", action="store_true",
                   help="ground without query guidance")
    p.add_argument("--all", action="store_true",
                   help="include zero-probability answers")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_query)

    p = sub.add_parser("bench", help="run a built-in benchmark")
    p.add_argument("family", choices=["markov", "hmm", "urn"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", default="timesteps",
                   choices=["timesteps", "specificity", "timepoint"])
    p.add_argument("--scenario", default="sunny",
                   choices=["sunny", "rainy", "mixed"])
    p.add_argument("--narrow", action="store_true",
                   help="small observation supports")
    p.add_argument("--unguided", action="store_true")
    p.add_argument("--no-ip", action="store_true")
    p.set_defaults(fn=_cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except PlpError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # pragma: no cover - internal invariant failures
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
