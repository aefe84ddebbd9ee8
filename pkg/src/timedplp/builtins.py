"""Evaluation of interpreted ground terms and atoms.

Integers and reals support ``+ - * /``; ``++`` appends lists and ``--``
removes one occurrence per element of its right operand (multiset
difference, so drawing a duplicated value consumes a single copy).
Comparisons ``< <= > >=`` are integer-only; ``==`` and ``\\=`` decide
syntactic (dis)equality of evaluated terms under unique names.
"""

from __future__ import annotations

from .errors import EvalError
from .syntax import (ARITH_FUNCTORS, Comparison, Equation, ListTerm, Num,
                     OrdinaryAtom, Range, Real, Struct, Term, is_ground,
                     term_text)


def eval_term(t: Term) -> Term:
    """Reduce a ground term to its unique irreducible form."""
    if isinstance(t, (Num, Real)):
        return t
    if isinstance(t, Struct):
        if t.functor in ARITH_FUNCTORS:
            if len(t.args) != 2:
                raise EvalError(f"builtin {t.functor!r} expects two arguments")
            return _apply(t.functor, eval_term(t.args[0]), eval_term(t.args[1]))
        return Struct(t.functor, tuple(eval_term(a) for a in t.args))
    if isinstance(t, ListTerm):
        return ListTerm(tuple(eval_term(a) for a in t.items))
    if isinstance(t, Range):
        raise EvalError("integer ranges may only appear inside distribution lists")
    raise EvalError(f"cannot evaluate non-ground term {term_text(t)}")


def _apply(op: str, a: Term, b: Term) -> Term:
    if op in ("++", "--"):
        if not (isinstance(a, ListTerm) and isinstance(b, ListTerm)):
            raise EvalError(f"{op!r} expects two lists, got "
                            f"{term_text(a)} {op} {term_text(b)}")
        if op == "++":
            return ListTerm(a.items + b.items)
        items = list(a.items)
        for x in b.items:
            try:
                items.remove(x)
            except ValueError:
                pass
        return ListTerm(tuple(items))
    if not (isinstance(a, (Num, Real)) and isinstance(b, (Num, Real))):
        raise EvalError(f"ill-sorted arithmetic: {term_text(a)} {op} {term_text(b)}")
    x, y = a.value, b.value
    if op == "+":
        r = x + y
    elif op == "-":
        r = x - y
    elif op == "*":
        r = x * y
    else:
        if y == 0:
            raise EvalError(f"division by zero: {term_text(a)} / {term_text(b)}")
        r = x / y
    if isinstance(r, int):
        return Num(r)
    return Real(r)


def eval_atom(a: Comparison) -> bool:
    """Decide a ground interpreted atom."""
    if not isinstance(a, Comparison):
        raise EvalError(f"not an interpreted atom: {a}")
    left, right = eval_term(a.left), eval_term(a.right)
    if a.op == "==":
        return left == right
    if a.op == "\\=":
        return left != right
    if not (isinstance(left, Num) and isinstance(right, Num)):
        raise EvalError(f"{a.op!r} compares integers only: "
                        f"{term_text(left)} {a.op} {term_text(right)}")
    x, y = left.value, right.value
    return {"<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y}[a.op]


def expand_range(values: ListTerm) -> ListTerm:
    """Evaluate a list, splicing each ``lo..hi`` into its integer segment."""
    out = []
    for item in values.items:
        if isinstance(item, Range):
            lo, hi = eval_term(item.lo), eval_term(item.hi)
            if not (isinstance(lo, Num) and isinstance(hi, Num)):
                raise EvalError(f"range bounds must be integers: {term_text(item)}")
            out.extend(Num(v) for v in range(lo.value, hi.value + 1))
        else:
            out.append(eval_term(item))
    return ListTerm(tuple(out))


def eval_ground_atom(a):
    """Canonicalize a ground ordinary/equation atom by evaluating its terms."""
    if isinstance(a, OrdinaryAtom):
        return OrdinaryAtom(a.pred, _eval_time(a.time),
                            tuple(eval_term(x) for x in a.args))
    if isinstance(a, Equation):
        lhs = eval_term(a.lhs)
        if not isinstance(lhs, Struct):
            raise EvalError(f"equation left side must stay functional: {a}")
        return Equation(lhs, eval_term(a.rhs), _eval_time(a.time))
    raise EvalError(f"cannot canonicalize {a!r}")


def _eval_time(t: Term) -> Num:
    v = eval_term(t)
    if not isinstance(v, Num):
        raise EvalError(f"time term must be an integer, got {term_text(v)}")
    return v


def time_value(a) -> int:
    """Integer time point of a ground ordinary/equation atom."""
    t = a.time
    if isinstance(t, Num):
        return t.value
    if not is_ground(t):
        raise EvalError(f"atom has a non-ground time term: {a}")
    return _eval_time(t).value
