"""Exact probabilistic logic programming over timed, stratified programs.

Programs are grounded bottom-up along their time/predicate stratification,
optionally guided by the query; probabilities come from a caching variable
elimination procedure, cross-checkable against an exhaustive enumeration
oracle.
"""

from .cli import AnswerSet, answer_conditional_query, main, run_benchmark
from .errors import (EvalError, GroundError, InferenceError, OracleError,
                     ParseError, PlpError, QueryError, StratError)
from .ground import (GroundProgram, GroundRule, NormalBody, consistent,
                     ground_body, ground_program, hitting_sets, matchers,
                     normalize_head, regress)
from .infer import (DisjointProgram, VEStats, make_disjoint,
                    query_inconsistent, ve_probability)
from .semantics import (choice_probability, least_fixpoint_model,
                        oracle_success_probability)
from .stratify import (Stratification, build_call_graph,
                       check_time_constrained, check_sbtp, strat, stratify)
from .syntax import (Body, ConditionalQuery, Lit, Program, Rule,
                     parse_program, parse_query, substitute)

__version__ = "0.1.0"

__all__ = [
    "AnswerSet", "Body", "ConditionalQuery", "DisjointProgram", "EvalError",
    "GroundError", "GroundProgram", "GroundRule", "InferenceError", "Lit",
    "NormalBody", "OracleError", "ParseError", "PlpError", "Program",
    "QueryError", "Rule", "StratError", "Stratification", "VEStats",
    "answer_conditional_query", "build_call_graph", "check_sbtp",
    "check_time_constrained", "choice_probability", "consistent",
    "ground_body", "ground_program", "hitting_sets", "least_fixpoint_model",
    "main", "make_disjoint", "matchers", "normalize_head",
    "oracle_success_probability", "parse_program", "parse_query",
    "query_inconsistent", "regress", "run_benchmark", "strat", "stratify",
    "substitute", "ve_probability",
]
