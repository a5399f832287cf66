"""First-order formulas: linear terms, sumset atoms, connectives, quantifiers.

Concrete grammar (whitespace-insensitive):

* scalars: ``p`` or ``p/q`` over Q (optional leading ``-``); ``k`` over GF(p)
* atoms of terms: variables ``[a-z][a-z0-9]*`` or constants ``$name``
* terms: ``+``-separated ``scalar*atom`` summands; bare atoms mean
  coefficient one; the literal ``0`` is the empty sum
* formula atoms: ``t = t`` and ``Xn(t)`` with a decimal sumset index ``n``
* connectives ``!``, ``&``, ``|``, ``->``; quantifiers ``E v.`` / ``A v.``

``a -> b`` is sugar for ``(!a | b)``; the syntax tree has no implication
node.  The printer parenthesizes every binary connective, and parsing what
it prints reproduces the tree exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .errors import FormulaSyntaxError, NotQuantifierFree, UnboundSymbol
from .fields import FieldCtx, Scalar
from .model import ModelElement, in_Xn


# ---------------------------------------------------------------------------
# terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Term:
    """Normalized linear combination of variables and named constants."""

    field: FieldCtx
    vars: tuple  # sorted (name, scalar) pairs, scalars nonzero
    consts: tuple  # sorted (name, scalar) pairs, scalars nonzero

    @staticmethod
    def make(field: FieldCtx, vars: Mapping = (), consts: Mapping = ()) -> "Term":
        v = tuple(sorted((k, field.of(c)) for k, c in dict(vars).items() if not field.is_zero(field.of(c))))
        c = tuple(sorted((k, field.of(c)) for k, c in dict(consts).items() if not field.is_zero(field.of(c))))
        return Term(field, v, c)

    @staticmethod
    def zero(field: FieldCtx) -> "Term":
        return Term(field, (), ())

    @staticmethod
    def var(field: FieldCtx, name: str, coeff=1) -> "Term":
        return Term.make(field, {name: coeff})

    @staticmethod
    def const(field: FieldCtx, name: str, coeff=1) -> "Term":
        return Term.make(field, {}, {name: coeff})

    def is_zero(self) -> bool:
        return not self.vars and not self.consts

    def coeff_of_var(self, name: str) -> Scalar:
        return dict(self.vars).get(name, self.field.zero)

    def __add__(self, other: "Term") -> "Term":
        f = self.field
        v = dict(self.vars)
        for k, c in other.vars:
            v[k] = f.add(v.get(k, f.zero), c)
        c_ = dict(self.consts)
        for k, c in other.consts:
            c_[k] = f.add(c_.get(k, f.zero), c)
        return Term.make(f, v, c_)

    def scale(self, c) -> "Term":
        f = self.field
        c = f.of(c)
        return Term.make(f, {k: f.mul(c, x) for k, x in self.vars}, {k: f.mul(c, x) for k, x in self.consts})

    def __sub__(self, other: "Term") -> "Term":
        return self + other.scale(self.field.of(-1))

    def drop_var(self, name: str) -> "Term":
        return Term.make(self.field, {k: c for k, c in self.vars if k != name}, dict(self.consts))

    def substitute_var(self, name: str, replacement: "Term") -> "Term":
        c = self.coeff_of_var(name)
        if self.field.is_zero(c):
            return self
        return self.drop_var(name) + replacement.scale(c)

    def symbols(self) -> set:
        return {k for k, _ in self.vars} | {"$" + k for k, _ in self.consts}

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        f = self.field
        parts = []
        for name, c in self.vars:
            parts.append(name if c == f.one else f"{f.format(c)}*{name}")
        for name, c in self.consts:
            atom = "$" + name
            parts.append(atom if c == f.one else f"{f.format(c)}*{atom}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Xn:
    n: int
    term: Term

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("sumset index must be nonnegative")


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Or:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Eq, Xn, Not, And, Or, Exists, Forall]

TRUE_ATOM = None  # placeholder comment anchor; truth is Eq(0,0), falsity its negation


def true_formula(field: FieldCtx) -> Formula:
    return Eq(Term.zero(field), Term.zero(field))


def false_formula(field: FieldCtx) -> Formula:
    return Not(true_formula(field))


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Eq, Xn)):
        return True
    if isinstance(phi, Not):
        return is_quantifier_free(phi.child)
    if isinstance(phi, (And, Or)):
        return is_quantifier_free(phi.lhs) and is_quantifier_free(phi.rhs)
    return False


def free_symbols(phi: Formula) -> set:
    """Free variables (bare names) and constants ('$name')."""
    if isinstance(phi, Eq):
        return phi.lhs.symbols() | phi.rhs.symbols()
    if isinstance(phi, Xn):
        return phi.term.symbols()
    if isinstance(phi, Not):
        return free_symbols(phi.child)
    if isinstance(phi, (And, Or)):
        return free_symbols(phi.lhs) | free_symbols(phi.rhs)
    return free_symbols(phi.body) - {phi.var}


def substitute(phi: Formula, name: str, replacement: Term) -> Formula:
    if isinstance(phi, Eq):
        return Eq(phi.lhs.substitute_var(name, replacement), phi.rhs.substitute_var(name, replacement))
    if isinstance(phi, Xn):
        return Xn(phi.n, phi.term.substitute_var(name, replacement))
    if isinstance(phi, Not):
        return Not(substitute(phi.child, name, replacement))
    if isinstance(phi, And):
        return And(substitute(phi.lhs, name, replacement), substitute(phi.rhs, name, replacement))
    if isinstance(phi, Or):
        return Or(substitute(phi.lhs, name, replacement), substitute(phi.rhs, name, replacement))
    if phi.var == name:
        return phi
    return type(phi)(phi.var, substitute(phi.body, name, replacement))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def eval_term(term: Term, env: Mapping, field: FieldCtx) -> ModelElement:
    out = ModelElement.zero(field)
    for name, c in term.vars:
        if name not in env:
            raise UnboundSymbol(f"variable {name!r} not in environment")
        out = out + env[name].scale(c)
    for name, c in term.consts:
        key = "$" + name
        if key not in env:
            raise UnboundSymbol(f"constant ${name} not in environment")
        out = out + env[key].scale(c)
    return out


def eval_qf(phi: Formula, env: Mapping, field: FieldCtx | None = None) -> bool:
    """Evaluate a quantifier-free formula under an environment mapping
    variables and '$'-prefixed constants to model elements."""
    if field is None:
        try:
            field = next(iter(env.values())).field
        except StopIteration:
            raise UnboundSymbol("cannot infer the field from an empty environment; pass field=")
    if isinstance(phi, Eq):
        return eval_term(phi.lhs - phi.rhs, env, field).is_zero()
    if isinstance(phi, Xn):
        return in_Xn(eval_term(phi.term, env, field), phi.n)
    if isinstance(phi, Not):
        return not eval_qf(phi.child, env, field)
    if isinstance(phi, And):
        return eval_qf(phi.lhs, env, field) and eval_qf(phi.rhs, env, field)
    if isinstance(phi, Or):
        return eval_qf(phi.lhs, env, field) or eval_qf(phi.rhs, env, field)
    raise NotQuantifierFree(f"quantifier in quantifier-free evaluation: {print_formula(phi)}")


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def print_formula(phi: Formula) -> str:
    if isinstance(phi, Eq):
        return f"{phi.lhs} = {phi.rhs}"
    if isinstance(phi, Xn):
        return f"X{phi.n}({phi.term})"
    if isinstance(phi, Not):
        return f"!{_tight(phi.child)}"
    if isinstance(phi, And):
        return f"({_operand(phi.lhs)} & {_operand(phi.rhs)})"
    if isinstance(phi, Or):
        return f"({_operand(phi.lhs)} | {_operand(phi.rhs)})"
    if isinstance(phi, Exists):
        return f"E {phi.var}. {_tight(phi.body)}"
    if isinstance(phi, Forall):
        return f"A {phi.var}. {_tight(phi.body)}"
    raise TypeError(f"not a formula: {phi!r}")


def _tight(phi: Formula) -> str:
    """Render for positions where equations must not leak context: after !
    and as quantifier bodies."""
    text = print_formula(phi)
    if isinstance(phi, (Eq, Exists, Forall)):
        return f"({text})"
    return text


def _operand(phi: Formula) -> str:
    """Render as an operand of a binary connective: quantifiers would
    otherwise swallow the rest of the line."""
    text = print_formula(phi)
    if isinstance(phi, (Exists, Forall)):
        return f"({text})"
    return text


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<num>\d+)|(?P<xpred>X(?=\d))|(?P<quant>[EA](?![a-z0-9]))"
    r"|(?P<name>[a-z][a-z0-9]*)|(?P<sym>[()*+=!&|.$/-]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise FormulaSyntaxError(f"unexpected character {stripped[0]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, field: FieldCtx):
        self.text = text
        self.field = field
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.next()
        if text != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def fail(self, message: str):
        raise FormulaSyntaxError(message, self.peek()[2])

    # formula := quantified | implication
    def formula(self) -> Formula:
        kind, text, _ = self.peek()
        if kind == "quant":
            self.next()
            vkind, vname, vpos = self.next()
            if vkind != "name":
                raise FormulaSyntaxError("expected a variable after quantifier", vpos)
            self.expect(".")
            body = self.formula()
            return (Exists if text == "E" else Forall)(vname, body)
        return self.implication()

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "arrow":
            self.next()
            right = self.implication()
            return Or(Not(left), right)
        return left

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.peek()[1] == "|":
            self.next()
            out = Or(out, self.conjunction())
        return out

    def conjunction(self) -> Formula:
        out = self.unary()
        while self.peek()[1] == "&":
            self.next()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        kind, text, pos = self.peek()
        if text == "!":
            self.next()
            return Not(self.unary())
        if text == "(":
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        if kind == "quant":
            return self.formula()
        if kind == "xpred":
            self.next()
            nkind, ntext, npos = self.next()
            if nkind != "num":
                raise FormulaSyntaxError("expected a sumset index after X", npos)
            self.expect("(")
            term = self.term()
            self.expect(")")
            return Xn(int(ntext), term)
        # equation
        lhs = self.term()
        self.expect("=")
        rhs = self.term()
        return Eq(lhs, rhs)

    # term := addend (+ addend)*
    def term(self) -> Term:
        out = self.addend()
        while self.peek()[1] == "+":
            self.next()
            out = out + self.addend()
        return out

    def addend(self) -> Term:
        kind, text, pos = self.peek()
        if kind == "num" or text == "-":
            scalar = self.scalar()
            if self.peek()[1] == "*":
                self.next()
                return self.atom().scale(scalar)
            if self.field.is_zero(scalar):
                return Term.zero(self.field)
            raise FormulaSyntaxError("scalar summand without an atom (only 0 stands alone)", pos)
        return self.atom()

    def scalar(self) -> Scalar:
        sign = 1
        if self.peek()[1] == "-":
            self.next()
            sign = -1
        kind, text, pos = self.next()
        if kind != "num":
            raise FormulaSyntaxError("expected a number", pos)
        value = int(text)
        if self.peek()[1] == "/":
            self.next()
            dkind, dtext, dpos = self.next()
            if dkind != "num":
                raise FormulaSyntaxError("expected a denominator", dpos)
            if not self.field.is_infinite:
                raise FormulaSyntaxError("fractional scalars are not prime-field syntax", dpos)
            return self.field.of(Fraction(sign * value, int(dtext)))
        return self.field.of(sign * value)

    def atom(self) -> Term:
        kind, text, pos = self.next()
        if text == "$":
            nkind, name, npos = self.next()
            if nkind != "name":
                raise FormulaSyntaxError("expected a constant name after $", npos)
            return Term.const(self.field, name)
        if kind == "name":
            return Term.var(self.field, text)
        raise FormulaSyntaxError(f"expected a variable, constant or scalar, found {text!r}", pos)


def parse_term(text: str, field: FieldCtx) -> Term:
    p = _Parser(text, field)
    out = p.term()
    if p.peek()[0] != "end":
        p.fail(f"trailing input {p.peek()[1]!r}")
    return out


def parse_formula(text: str, field: FieldCtx) -> Formula:
    p = _Parser(text, field)
    out = p.formula()
    if p.peek()[0] != "end":
        p.fail(f"trailing input {p.peek()[1]!r}")
    return out
