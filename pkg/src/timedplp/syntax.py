"""Surface language and abstract syntax.

A program is a list of clauses terminated by ``.``.  Every ordinary atom
carries a dedicated integer time argument written ``a @ T``; atoms written
without ``@`` get the implicit time ``0``.  Clause heads come in three forms::

    0.5 :: p(X) @ T          ordinary head (probability omitted means 1.0)
    f ~ [v1, v2, [w, 0.3]] @ T    draw a value, uniformly or weighted
    0.6 :: a @ T + 0.4 :: b @ T   explicit sum of exclusive cases

Bodies are comma-separated positive atoms plus negative elements
``\\+ (a1, ..., ak)`` whose extra variables are implicitly existential.
``s = t @ T`` is an equation atom (functional, right-unique per time point);
``<  <=  >  >=  ==  \\=`` are interpreted comparisons; ``+ - * / ++ --`` and
``[lo..hi]`` appear inside terms.  ``%`` starts a line comment.

Queries are ``?- b1, ..., bk | e1, ..., em.`` with optional ground evidence
after ``|``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .errors import ParseError, QueryError

# ---------------------------------------------------------------------------
# terms

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Num:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Real:
    value: float

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Struct:
    functor: str
    args: tuple = ()

    def __str__(self):
        return term_text(self)


@dataclass(frozen=True)
class ListTerm:
    items: tuple = ()

    def __str__(self):
        return term_text(self)


@dataclass(frozen=True)
class Range:
    lo: "Term"
    hi: "Term"

    def __str__(self):
        return term_text(self)


Term = Union[Var, Num, Real, Struct, ListTerm, Range]

#: built-in term functors; everything else is an ordinary (free) symbol
ARITH_FUNCTORS = frozenset({"+", "-", "*", "/", "++", "--"})
#: built-in comparison predicates
CMP_OPS = frozenset({"<", "<=", ">", ">=", "==", "\\="})
#: predicate names reserved for atoms introduced by the engine itself
RESERVED_PREFIX = "$"


def is_interpreted(t: Term) -> bool:
    return isinstance(t, Struct) and t.functor in ARITH_FUNCTORS


# ---------------------------------------------------------------------------
# atoms and literals

@dataclass(frozen=True)
class OrdinaryAtom:
    pred: str
    time: Term
    args: tuple = ()

    def __str__(self):
        return atom_text(self)


@dataclass(frozen=True)
class Equation:
    """``lhs = rhs @ time`` with an ordinary functional term on the left."""

    lhs: Struct
    rhs: Term
    time: Term

    def __str__(self):
        return atom_text(self)


@dataclass(frozen=True)
class Comparison:
    op: str
    left: Term
    right: Term

    def __str__(self):
        return atom_text(self)


Atom = Union[OrdinaryAtom, Equation, Comparison]


def pred_of(atom: Atom):
    """Predicate symbol used for stratification; None for comparisons."""
    if isinstance(atom, OrdinaryAtom):
        return atom.pred
    if isinstance(atom, Equation):
        return atom.lhs.functor
    return None


def time_of(atom: Atom) -> Term:
    if isinstance(atom, Comparison):
        raise ValueError("comparison atoms carry no time")
    return atom.time


@dataclass(frozen=True)
class Lit:
    """Signed ground-able atom; negative literals never wrap comparisons."""

    positive: bool
    atom: Union[OrdinaryAtom, Equation]

    def __str__(self):
        return lit_text(self)

    def negated(self) -> "Lit":
        return Lit(not self.positive, self.atom)


# ---------------------------------------------------------------------------
# rule structure

@dataclass(frozen=True)
class Body:
    positives: tuple = ()
    #: each element is the tuple of atoms under one ``\+``
    negatives: tuple = ()

    def __str__(self):
        return body_text(self)

    def is_empty(self) -> bool:
        return not self.positives and not self.negatives


@dataclass(frozen=True)
class OrdinaryHead:
    atom: Union[OrdinaryAtom, Equation]
    prob: Term | None = None  # None means probability 1.0

    def __str__(self):
        return head_text(self)


@dataclass(frozen=True)
class DistHead:
    lhs: Struct
    values: Term
    time: Term

    def __str__(self):
        return head_text(self)


@dataclass(frozen=True)
class SumHead:
    #: pairs (probability expression, atom); atoms share the head time
    cases: tuple
    time: Term

    def __str__(self):
        return head_text(self)


Head = Union[OrdinaryHead, DistHead, SumHead]


@dataclass(frozen=True)
class Rule:
    head: Head
    body: Body
    line: int = 0

    def __str__(self):
        return rule_text(self)

    def is_fact(self) -> bool:
        return self.body.is_empty()


@dataclass(frozen=True)
class Program:
    rules: tuple

    def __str__(self):
        return "\n".join(rule_text(r) for r in self.rules)


@dataclass(frozen=True)
class ConditionalQuery:
    """Query body plus optional ground evidence, ``?- B | E``."""

    body: Body
    evidence: tuple = ()

    def __str__(self):
        s = "?- " + body_text(self.body)
        if self.evidence:
            s += " | " + ", ".join(atom_text(e) for e in self.evidence)
        return s + "."


def head_atoms(head: Head):
    if isinstance(head, OrdinaryHead):
        return (head.atom,)
    if isinstance(head, SumHead):
        return tuple(a for _, a in head.cases)
    return (Equation(head.lhs, Var("_"), head.time),)


def head_preds(head: Head) -> tuple:
    if isinstance(head, DistHead):
        return (head.lhs.functor,)
    return tuple(dict.fromkeys(pred_of(a) for a in head_atoms(head)))


def head_time(head: Head) -> Term:
    if isinstance(head, OrdinaryHead):
        return time_of(head.atom)
    return head.time


# ---------------------------------------------------------------------------
# variables, groundness, substitution

def vars_of(e) -> set:
    """Names of all variables occurring in a term / atom / body / head / rule."""
    out: set = set()
    _collect_vars(e, out)
    return out


def _collect_vars(e, out: set):
    if isinstance(e, Var):
        out.add(e.name)
    elif isinstance(e, (Num, Real)):
        pass
    elif isinstance(e, Struct):
        for a in e.args:
            _collect_vars(a, out)
    elif isinstance(e, ListTerm):
        for a in e.items:
            _collect_vars(a, out)
    elif isinstance(e, Range):
        _collect_vars(e.lo, out)
        _collect_vars(e.hi, out)
    elif isinstance(e, OrdinaryAtom):
        _collect_vars(e.time, out)
        for a in e.args:
            _collect_vars(a, out)
    elif isinstance(e, Equation):
        _collect_vars(e.lhs, out)
        _collect_vars(e.rhs, out)
        _collect_vars(e.time, out)
    elif isinstance(e, Comparison):
        _collect_vars(e.left, out)
        _collect_vars(e.right, out)
    elif isinstance(e, Lit):
        _collect_vars(e.atom, out)
    elif isinstance(e, Body):
        for a in e.positives:
            _collect_vars(a, out)
        for elem in e.negatives:
            for a in elem:
                _collect_vars(a, out)
    elif isinstance(e, OrdinaryHead):
        if e.prob is not None:
            _collect_vars(e.prob, out)
        _collect_vars(e.atom, out)
    elif isinstance(e, DistHead):
        _collect_vars(e.lhs, out)
        _collect_vars(e.values, out)
        _collect_vars(e.time, out)
    elif isinstance(e, SumHead):
        for pr, a in e.cases:
            _collect_vars(pr, out)
            _collect_vars(a, out)
    elif isinstance(e, Rule):
        _collect_vars(e.head, out)
        _collect_vars(e.body, out)
    elif isinstance(e, (tuple, list, frozenset, set)):
        for x in e:
            _collect_vars(x, out)
    else:
        raise TypeError(f"cannot collect variables from {type(e).__name__}")


def is_ground(e) -> bool:
    return not vars_of(e)


def substitute(e, subst: dict):
    """Apply a variable binding everywhere; unbound variables stay."""
    if isinstance(e, Var):
        return subst.get(e.name, e)
    if isinstance(e, (Num, Real)):
        return e
    if isinstance(e, Struct):
        return Struct(e.functor, tuple(substitute(a, subst) for a in e.args))
    if isinstance(e, ListTerm):
        return ListTerm(tuple(substitute(a, subst) for a in e.items))
    if isinstance(e, Range):
        return Range(substitute(e.lo, subst), substitute(e.hi, subst))
    if isinstance(e, OrdinaryAtom):
        return OrdinaryAtom(e.pred, substitute(e.time, subst),
                            tuple(substitute(a, subst) for a in e.args))
    if isinstance(e, Equation):
        return Equation(substitute(e.lhs, subst), substitute(e.rhs, subst),
                        substitute(e.time, subst))
    if isinstance(e, Comparison):
        return Comparison(e.op, substitute(e.left, subst), substitute(e.right, subst))
    if isinstance(e, Lit):
        return Lit(e.positive, substitute(e.atom, subst))
    if isinstance(e, Body):
        return Body(tuple(substitute(a, subst) for a in e.positives),
                    tuple(tuple(substitute(a, subst) for a in elem)
                          for elem in e.negatives))
    if isinstance(e, OrdinaryHead):
        pr = None if e.prob is None else substitute(e.prob, subst)
        return OrdinaryHead(substitute(e.atom, subst), pr)
    if isinstance(e, DistHead):
        return DistHead(substitute(e.lhs, subst), substitute(e.values, subst),
                        substitute(e.time, subst))
    if isinstance(e, SumHead):
        return SumHead(tuple((substitute(pr, subst), substitute(a, subst))
                             for pr, a in e.cases),
                       substitute(e.time, subst))
    if isinstance(e, Rule):
        return Rule(substitute(e.head, subst), substitute(e.body, subst), e.line)
    if isinstance(e, tuple):
        return tuple(substitute(x, subst) for x in e)
    raise TypeError(f"cannot substitute into {type(e).__name__}")


# ---------------------------------------------------------------------------
# canonical text (used for output, sorting and cache keys)

_PREC = {"+": 1, "-": 1, "++": 1, "--": 1, "*": 2, "/": 2}


def term_text(t: Term, prec: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Real):
        return repr(t.value)
    if isinstance(t, Struct):
        if t.functor in ARITH_FUNCTORS and len(t.args) == 2:
            p = _PREC[t.functor]
            s = f"{term_text(t.args[0], p)} {t.functor} {term_text(t.args[1], p + 1)}"
            return f"({s})" if prec > p else s
        if not t.args:
            return t.functor
        return f"{t.functor}({', '.join(term_text(a) for a in t.args)})"
    if isinstance(t, ListTerm):
        return f"[{', '.join(term_text(a) for a in t.items)}]"
    if isinstance(t, Range):
        return f"{term_text(t.lo, 2)}..{term_text(t.hi, 2)}"
    raise TypeError(f"not a term: {t!r}")


def atom_text(a: Atom) -> str:
    if isinstance(a, OrdinaryAtom):
        core = a.pred if not a.args else \
            f"{a.pred}({', '.join(term_text(x) for x in a.args)})"
        return f"{core} @ {term_text(a.time, 2)}"
    if isinstance(a, Equation):
        return f"{term_text(a.lhs)} = {term_text(a.rhs, 2)} @ {term_text(a.time, 2)}"
    if isinstance(a, Comparison):
        return f"{term_text(a.left, 2)} {a.op} {term_text(a.right, 2)}"
    raise TypeError(f"not an atom: {a!r}")


def lit_text(l: Lit) -> str:
    return atom_text(l.atom) if l.positive else "-" + atom_text(l.atom)


def body_text(b: Body) -> str:
    parts = [atom_text(a) for a in b.positives]
    for elem in b.negatives:
        if len(elem) == 1:
            parts.append(f"\\+ {atom_text(elem[0])}")
        else:
            parts.append(f"\\+ ({', '.join(atom_text(a) for a in elem)})")
    return ", ".join(parts)


def head_text(h: Head) -> str:
    if isinstance(h, OrdinaryHead):
        if h.prob is None:
            return atom_text(h.atom)
        return f"{term_text(h.prob, 2)} :: {atom_text(h.atom)}"
    if isinstance(h, DistHead):
        return (f"{term_text(h.lhs)} ~ {term_text(h.values, 2)}"
                f" @ {term_text(h.time, 2)}")
    if isinstance(h, SumHead):
        return " + ".join(f"{term_text(pr, 2)} :: {atom_text(a)}" for pr, a in h.cases)
    raise TypeError(f"not a head: {h!r}")


def rule_text(r: Rule) -> str:
    if r.body.is_empty():
        return head_text(r.head) + "."
    return f"{head_text(r.head)} :- {body_text(r.body)}."


def atom_sort_key(a: Atom):
    return atom_text(a)


def lit_sort_key(l: Lit):
    return (atom_text(l.atom), not l.positive)


# ---------------------------------------------------------------------------
# lexer

_SYMBOLS = ("?-", ":-", "::", "\\+", "\\=", "==", "<=", ">=", "++", "--",
            "..", "<", ">", "=", "+", "-", "*", "/", "@", "~", ",", ".",
            "(", ")", "[", "]", "|")


@dataclass(frozen=True)
class _Tok:
    kind: str  # int real name var sym eof
    value: object
    line: int
    col: int


def _lex(text: str):
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
                toks.append(_Tok("real", float(text[i:j]), line, col))
            else:
                toks.append(_Tok("int", int(text[i:j]), line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "var" if (c.isupper() or c == "_") else "name"
            toks.append(_Tok(kind, word, line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(_Tok("sym", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(_Tok("eof", None, line, col))
    return toks


# ---------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.pos = 0
        self.fresh = 0

    def peek(self, k=0) -> _Tok:
        j = min(self.pos + k, len(self.toks) - 1)
        return self.toks[j]

    def at_sym(self, *syms) -> bool:
        t = self.peek()
        return t.kind == "sym" and t.value in syms

    def advance(self) -> _Tok:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect_sym(self, sym) -> _Tok:
        t = self.peek()
        if not (t.kind == "sym" and t.value == sym):
            raise ParseError(f"expected {sym!r}, found {self._show(t)}", t.line, t.col)
        return self.advance()

    @staticmethod
    def _show(t: _Tok) -> str:
        return "end of input" if t.kind == "eof" else repr(t.value)

    def err(self, msg) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    # -- terms ---------------------------------------------------------

    def term(self) -> Term:
        return self.additive()

    def additive(self) -> Term:
        t = self.multiplicative()
        while self.at_sym("+", "-", "++", "--"):
            op = self.advance().value
            t = Struct(op, (t, self.multiplicative()))
        return t

    def multiplicative(self) -> Term:
        t = self.primary()
        while self.at_sym("*", "/"):
            op = self.advance().value
            t = Struct(op, (t, self.primary()))
        return t

    def primary(self) -> Term:
        t = self.peek()
        if t.kind == "int":
            self.advance()
            return Num(t.value)
        if t.kind == "real":
            self.advance()
            return Real(t.value)
        if t.kind == "var":
            self.advance()
            if t.value == "_":
                self.fresh += 1
                return Var(f"_G{self.fresh}")
            return Var(t.value)
        if t.kind == "name":
            self.advance()
            if self.at_sym("("):
                self.advance()
                args = [self.term()]
                while self.at_sym(","):
                    self.advance()
                    args.append(self.term())
                self.expect_sym(")")
                return Struct(t.value, tuple(args))
            return Struct(t.value)
        if self.at_sym("-"):
            nxt = self.peek(1)
            if nxt.kind in ("int", "real"):
                self.advance()
                self.advance()
                return Num(-nxt.value) if nxt.kind == "int" else Real(-nxt.value)
            raise self.err("unexpected '-'")
        if self.at_sym("("):
            self.advance()
            inner = self.term()
            self.expect_sym(")")
            return inner
        if self.at_sym("["):
            self.advance()
            items = []
            if not self.at_sym("]"):
                items.append(self.list_item())
                while self.at_sym(","):
                    self.advance()
                    items.append(self.list_item())
            self.expect_sym("]")
            return ListTerm(tuple(items))
        raise self.err(f"expected a term, found {self._show(t)}")

    def list_item(self) -> Term:
        t = self.term()
        if self.at_sym(".."):
            self.advance()
            return Range(t, self.term())
        return t

    # -- atoms ---------------------------------------------------------

    def atom(self) -> Atom:
        return self.finish_atom(self.term())

    def finish_atom(self, t: Term) -> Atom:
        tok = self.peek()
        if self.at_sym(*CMP_OPS):
            op = self.advance().value
            rhs = self.term()
            if self.at_sym("@"):
                raise self.err(f"comparison {op!r} carries no time argument")
            return Comparison(op, t, rhs)
        if self.at_sym("="):
            self.advance()
            rhs = self.term()
            time = self.opt_time()
            if not isinstance(t, Struct) or t.functor in ARITH_FUNCTORS:
                raise ParseError("left side of '=' must be an ordinary functional term",
                                 tok.line, tok.col)
            return Equation(t, rhs, time)
        if not isinstance(t, Struct) or t.functor in ARITH_FUNCTORS:
            raise ParseError(f"expected an atom, found term {term_text(t)!r}",
                             tok.line, tok.col)
        time = self.opt_time()
        return OrdinaryAtom(t.functor, time, t.args)

    def opt_time(self) -> Term:
        if self.at_sym("@"):
            self.advance()
            return self.term()
        return Num(0)

    # -- bodies --------------------------------------------------------

    def body(self, stop_syms) -> Body:
        positives, negatives = [], []
        while True:
            if self.at_sym("\\+"):
                self.advance()
                negatives.append(self.neg_element())
            elif self.at_sym("-") and self.peek(1).kind not in ("int", "real"):
                self.advance()
                a = self.atom()
                if isinstance(a, Comparison):
                    raise self.err("cannot negate an interpreted atom")
                negatives.append((a,))
            else:
                positives.append(self.atom())
            if self.at_sym(","):
                self.advance()
                continue
            break
        t = self.peek()
        if not (t.kind == "eof" or (t.kind == "sym" and t.value in stop_syms)):
            raise self.err(f"unexpected {self._show(t)} in body")
        return Body(tuple(positives), tuple(negatives))

    def neg_element(self) -> tuple:
        if self.at_sym("("):
            self.advance()
            atoms = [self.atom()]
            while self.at_sym(","):
                self.advance()
                atoms.append(self.atom())
            self.expect_sym(")")
        else:
            atoms = [self.atom()]
        if all(isinstance(a, Comparison) for a in atoms):
            raise self.err("negative element must contain an ordinary or equation atom")
        return tuple(atoms)

    # -- heads ---------------------------------------------------------

    def head(self) -> Head:
        end = self._head_end()
        span = self.toks[self.pos:end]
        depth0 = self._depth0_syms(span)
        if any(s == "~" for _, s in depth0):
            return self.dist_head()
        sep_count = sum(1 for _, s in depth0 if s == "::")
        if sep_count >= 2:
            return self.sum_head(end, depth0)
        return self.ordinary_head()

    def _head_end(self) -> int:
        depth = 0
        for j in range(self.pos, len(self.toks)):
            t = self.toks[j]
            if t.kind != "sym":
                continue
            if t.value in ("(", "["):
                depth += 1
            elif t.value in (")", "]"):
                depth -= 1
            elif depth == 0 and t.value in (":-", "."):
                return j
        t = self.toks[-1]
        raise ParseError("clause not terminated by '.'", t.line, t.col)

    @staticmethod
    def _depth0_syms(span):
        out, depth = [], 0
        for j, t in enumerate(span):
            if t.kind != "sym":
                continue
            if t.value in ("(", "["):
                depth += 1
            elif t.value in (")", "]"):
                depth -= 1
            elif depth == 0:
                out.append((j, t.value))
        return out

    def ordinary_head(self) -> OrdinaryHead:
        t = self.term()
        if self.at_sym("::"):
            self.advance()
            atom = self.atom()
            prob = t
        else:
            atom = self.finish_atom(t)
            prob = None
        if isinstance(atom, Comparison):
            raise self.err("head cannot be an interpreted atom")
        return OrdinaryHead(atom, prob)

    def dist_head(self) -> DistHead:
        tok = self.peek()
        lhs = self.term()
        if not isinstance(lhs, Struct) or lhs.functor in ARITH_FUNCTORS:
            raise ParseError("left side of '~' must be an ordinary functional term",
                             tok.line, tok.col)
        self.expect_sym("~")
        values = self.term()
        time = self.opt_time()
        return DistHead(lhs, values, time)

    def sum_head(self, end: int, depth0) -> SumHead:
        # a '+' separates summands iff a later depth-0 '::' needs it; the
        # separator for each '::' after the first is the last '+' before it
        sep_positions = []
        seps_used = -1
        first = True
        for j, s in depth0:
            if s != "::":
                continue
            if first:
                first = False
                continue
            before = [k for k, v in depth0 if v == "+" and seps_used < k < j]
            if not before:
                raise self.err("malformed sum head")
            seps_used = before[-1]
            sep_positions.append(before[-1])
        bounds = [self.pos] + [self.pos + k for k in sep_positions] + [end]
        cases = []
        times = []
        for i in range(len(bounds) - 1):
            lo = bounds[i] + (0 if i == 0 else 1)  # skip the '+' itself
            sub = _Parser(self.toks[lo:bounds[i + 1]] + [self.toks[-1]])
            sub.fresh = self.fresh
            pr = sub.term()
            sub.expect_sym("::")
            atom = sub.atom()
            if isinstance(atom, Comparison):
                raise sub.err("sum head case cannot be an interpreted atom")
            if sub.peek().kind != "eof":
                raise sub.err("malformed sum head case")
            self.fresh = sub.fresh
            cases.append((pr, atom))
            times.append(time_of(atom))
        t0 = times[0]
        if any(t != t0 for t in times):
            raise ParseError("sum head cases must share one time term",
                             self.peek().line, self.peek().col)
        if len(cases) < 2:
            raise self.err("sum head needs at least two cases")
        self.pos = end
        return SumHead(tuple(cases), t0)

    # -- clauses -------------------------------------------------------

    def clause(self) -> Rule:
        line = self.peek().line
        head = self.head()
        if self.at_sym(":-"):
            self.advance()
            body = self.body(stop_syms=(".",))
        else:
            body = Body()
        self.expect_sym(".")
        return Rule(head, body, line)

    def program(self) -> Program:
        rules = []
        while self.peek().kind != "eof":
            rules.append(self.clause())
        return Program(tuple(rules))

    def query(self) -> ConditionalQuery:
        self.expect_sym("?-")
        body = self.body(stop_syms=("|", "."))
        evidence = []
        if self.at_sym("|"):
            self.advance()
            evidence.append(self.atom())
            while self.at_sym(","):
                self.advance()
                evidence.append(self.atom())
        if self.at_sym("."):
            self.advance()
        t = self.peek()
        if t.kind != "eof":
            raise self.err(f"unexpected {self._show(t)} after query")
        return ConditionalQuery(body, tuple(evidence))


# ---------------------------------------------------------------------------
# entry points

def parse_program(text: str) -> Program:
    program = _Parser(_lex(text)).program()
    for rule in program.rules:
        _validate_rule(rule)
    return program


def parse_query(text: str) -> ConditionalQuery:
    q = _Parser(_lex(text)).query()
    if not q.body.positives and not q.body.negatives:
        raise QueryError("query body is empty")
    for e in q.evidence:
        if isinstance(e, Comparison):
            raise QueryError(f"evidence must be ordinary or equation atoms: {e}")
        if not is_ground(e):
            raise QueryError(f"evidence atom is not ground: {e}")
    return q


def _validate_rule(rule: Rule):
    body_vars = vars_of(rule.body.positives)
    head_vars = vars_of(rule.head)
    extra = head_vars - body_vars
    if extra:
        raise ParseError(
            f"rule at line {rule.line} is not range-restricted: head variable(s) "
            f"{', '.join(sorted(extra))} missing from the positive body")
    # a variable that is existential in one negative element may not leak
    # into another; shared existentials have no coherent reading
    seen: dict = {}
    for idx, elem in enumerate(rule.body.negatives):
        for v in vars_of(elem) - body_vars:
            if seen.setdefault(v, idx) != idx:
                raise ParseError(
                    f"rule at line {rule.line}: variable {v} is shared between "
                    f"negative elements but bound by neither body")
