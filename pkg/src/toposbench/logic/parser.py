"""Recursive-descent parser for the ASCII surface syntax.

Grammar (loosest to tightest):

    expr     := implies
    implies  := or ("=>" implies)?                      right associative
    or       := and ("\\/" and)*
    and      := unary ("/\\" unary)*
    unary    := "~" unary | quantifier | cmp
    quantifier := ("forall" | "exists") IDENT ":" type "." expr
    cmp      := setexpr (("=" | "in" | "subseteq") setexpr)?
    setexpr  := atom (("union" | "inter") atom)*
    atom     := "true" | "false" | "*" | "empty" "(" type ")"
              | "pi"N "(" expr ")" | IDENT ( "(" expr ("," expr)* ")" )?
              | "{" IDENT ":" type "|" expr "}"
              | "(" expr ("," expr)* ")"
    type     := ptype ("->" type)?                      right associative
    ptype    := btype ("*" btype)*
    btype    := "1" | "Omega" | "P" btype | IDENT | "(" type ")"

Input must be ASCII; anything else is rejected with a position.
"""

import re

from .syntax import (
    And, Bot, Compr, EmptySet, Eq, Exists, ExpT, Forall, Ground, Implies,
    Inter, Mem, NameRef, Not, OmegaT, Or, Power, ProductT, Proj, Star,
    Subseteq, Top, TupleT, Union, Unit,
)


class FormulaSyntaxError(Exception):
    def __init__(self, msg, line, col):
        self.line = line
        self.col = col
        super().__init__(f"{msg} at line {line}, column {col}")


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<imp>=>)
  | (?P<and>/\\)
  | (?P<or>\\/)
  | (?P<sym>[(){}|,.:=~*])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<num>[0-9]+)
""", re.VERBOSE)

KEYWORDS = {"forall", "exists", "in", "true", "false", "union", "inter",
            "subseteq", "empty", "P", "Omega"}


def _tokenize(text):
    for i, ch in enumerate(text):
        if ord(ch) > 127:
            line = text.count("\n", 0, i) + 1
            col = i - (text.rfind("\n", 0, i) + 1) + 1
            raise FormulaSyntaxError(f"non-ASCII character {ch!r}", line, col)
    tokens = []
    pos = 0
    line, linestart = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}",
                                     line, pos - linestart + 1)
        kind = m.lastgroup
        val = m.group()
        if kind == "ws":
            line += val.count("\n")
            if "\n" in val:
                linestart = m.start() + val.rfind("\n") + 1
        else:
            tokens.append((kind, val, line, m.start() - linestart + 1))
        pos = m.end()
    tokens.append(("eof", "", line, len(text) - linestart + 1))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg):
        _k, v, line, col = self.peek()
        shown = v or "end of input"
        raise FormulaSyntaxError(f"{msg}, found {shown!r}", line, col)

    def expect(self, val):
        k, v, _l, _c = self.peek()
        if v != val:
            self.error(f"expected {val!r}")
        return self.next()

    def at(self, val):
        return self.peek()[1] == val

    # ---- types

    def type_(self):
        t = self.ptype()
        if self.at("->"):
            self.next()
            return ExpT(t, self.type_())
        return t

    def ptype(self):
        t = self.btype()
        factors = [t]
        while self.at("*"):
            self.next()
            factors.append(self.btype())
        if len(factors) == 1:
            return t
        return ProductT(tuple(factors))

    def btype(self):
        k, v, line, col = self.peek()
        if v == "1":
            self.next()
            return Unit()
        if v == "Omega":
            self.next()
            return OmegaT()
        if v == "P":
            self.next()
            return Power(self.btype())
        if v == "(":
            self.next()
            t = self.type_()
            self.expect(")")
            return t
        if k == "ident":
            self.next()
            return Ground(v)
        self.error("expected a type")

    # ---- terms

    def expr(self):
        return self.implies()

    def implies(self):
        l = self.or_()
        if self.at("=>"):
            self.next()
            return Implies(lhs=l, rhs=self.implies(), pos=_pos(l))
        return l

    def or_(self):
        l = self.and_()
        while self.at("\\/"):
            self.next()
            l = Or(lhs=l, rhs=self.and_(), pos=_pos(l))
        return l

    def and_(self):
        l = self.unary()
        while self.at("/\\"):
            self.next()
            l = And(lhs=l, rhs=self.unary(), pos=_pos(l))
        return l

    def unary(self):
        k, v, line, col = self.peek()
        if v == "~":
            self.next()
            return Not(arg=self.unary(), pos=(line, col))
        if v in ("forall", "exists"):
            self.next()
            nk, name, nl, nc = self.peek()
            if nk != "ident" or name in KEYWORDS:
                self.error("expected a variable name")
            self.next()
            self.expect(":")
            ty = self.type_()
            self.expect(".")
            body = self.expr()
            cls = Forall if v == "forall" else Exists
            return cls(var=name, vartype=ty, body=body, pos=(line, col))
        return self.cmp()

    def cmp(self):
        l = self.setexpr()
        if self.at("="):
            self.next()
            return Eq(lhs=l, rhs=self.setexpr(), pos=_pos(l))
        if self.at("in"):
            self.next()
            return Mem(elem=l, setterm=self.setexpr(), pos=_pos(l))
        if self.at("subseteq"):
            self.next()
            return Subseteq(lhs=l, rhs=self.setexpr(), pos=_pos(l))
        return l

    def setexpr(self):
        l = self.atom()
        while self.at("union") or self.at("inter"):
            op = self.next()[1]
            cls = Union if op == "union" else Inter
            l = cls(lhs=l, rhs=self.atom(), pos=_pos(l))
        return l

    def atom(self):
        k, v, line, col = self.peek()
        pos = (line, col)
        if v == "true":
            self.next()
            return Top(pos=pos)
        if v == "false":
            self.next()
            return Bot(pos=pos)
        if v == "*":
            self.next()
            return Star(pos=pos)
        if v == "empty":
            self.next()
            self.expect("(")
            ty = self.type_()
            self.expect(")")
            return EmptySet(of=ty, pos=pos)
        if v == "{":
            self.next()
            nk, name, _nl, _nc = self.peek()
            if nk != "ident" or name in KEYWORDS:
                self.error("expected a variable name")
            self.next()
            self.expect(":")
            ty = self.type_()
            self.expect("|")
            body = self.expr()
            self.expect("}")
            return Compr(var=name, vartype=ty, body=body, pos=pos)
        if v == "(":
            self.next()
            items = [self.expr()]
            while self.at(","):
                self.next()
                items.append(self.expr())
            self.expect(")")
            if len(items) == 1:
                return items[0]
            return TupleT(items=tuple(items), pos=pos)
        if k == "ident":
            m = re.fullmatch(r"pi([0-9]+)", v)
            if m:
                self.next()
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Proj(i=int(m.group(1)), arg=arg, pos=pos)
            if v in KEYWORDS:
                self.error("unexpected keyword")
            self.next()
            if self.at("("):
                self.next()
                args = [self.expr()]
                while self.at(","):
                    self.next()
                    args.append(self.expr())
                self.expect(")")
                arg = args[0] if len(args) == 1 else TupleT(items=tuple(args), pos=pos)
                from .syntax import App
                return App(sym=v, arg=arg, pos=pos)
            return NameRef(name=v, pos=pos)
        self.error("expected a term")


def _pos(node):
    return getattr(node, "pos", None)


def parse_formula(text):
    """Parse surface text to an (untyped) term tree with source positions."""
    p = _Parser(_tokenize(text))
    t = p.expr()
    if p.peek()[0] != "eof":
        p.error("trailing input")
    return t
