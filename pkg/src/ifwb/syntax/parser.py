"""Recursive-descent parser for the ASCII formula and tree grammar.

    formula  := disj
    disj     := conj ('|' conj)*
    conj     := unary ('&' unary)*
    unary    := '~' unary | quant | primary
    quant    := ('A'|'E') IDENT slash? disj
              | '(' ('A'|'E') IDENT slash? ')' disj
    slash    := '/' '{' [IDENT (',' IDENT)*] '}' | '/' IDENT
    primary  := '(' formula ')' | '[]' | IDENT '(' terms ')' | term ('='|'!=') term

A quantifier's scope runs as far right as possible.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .formulas import And, Atom, Const, Eq, Gap, Neg, Or, Quant


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<gap>\[\s*\])|(?P<neq>!=)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<num>[0-9]+)"
    r"|(?P<punct>[()&|~=,{}/])"
)


def tokenize(text: str) -> list:
    out, pos, line, start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind == "gap":
            out.append(Token("gap", "[]", line, pos - start + 1))
            nls = m.group().count("\n")
            if nls:
                line += nls
                start = pos + m.group().rfind("\n") + 1
        elif kind not in ("ws", "comment"):
            text_ = m.group()
            out.append(Token(text_ if kind == "punct" else kind, text_, line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


class _Parser:
    def __init__(self, text: str, constants, allow_gaps: bool):
        self.toks = tokenize(text)
        self.i = 0
        self.constants = frozenset(constants)
        self.allow_gaps = allow_gaps
        self.bound: list = []
        self.gap_count = 0
        self.arities: dict = {}

    # token helpers
    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            self.error(f"expected {kind!r} but found {t.text or 'end of input'!r}")
        return self.next()

    # grammar
    def parse(self):
        f = self.disj()
        if self.peek().kind != "eof":
            self.error(f"unexpected {self.peek().text!r}")
        return f

    def disj(self):
        f = self.conj()
        while self.peek().kind == "|":
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek().kind == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def _is_quant_head(self, k: int = 0) -> bool:
        t, nxt = self.peek(k), self.peek(k + 1)
        return t.kind == "ident" and t.text in ("A", "E") and nxt.kind == "ident"

    def unary(self):
        t = self.peek()
        if t.kind == "~":
            self.next()
            return Neg(self.unary())
        if self._is_quant_head():
            return self.quant(parenthesized=False)
        if t.kind == "(" and self._is_quant_head(1) and self.peek(3).kind in ("/", ")"):
            self.next()
            return self.quant(parenthesized=True)
        return self.primary()

    def quant(self, parenthesized: bool):
        kind_tok = self.next()
        var_tok = self.expect("ident")
        var = var_tok.text
        slash = frozenset()
        if self.peek().kind == "/":
            slash_tok = self.next()
            slash = self.slash_set()
            if var in slash:
                self.error(f"slash set of {var} mentions its own variable", slash_tok)
        if parenthesized:
            self.expect(")")
        self.bound.append(var)
        try:
            body = self.disj()
        finally:
            self.bound.pop()
        return Quant(kind_tok.text, var, slash, body)

    def slash_set(self) -> frozenset:
        if self.peek().kind == "ident":
            return frozenset([self.next().text])
        self.expect("{")
        names = []
        if self.peek().kind != "}":
            names.append(self.expect("ident").text)
            while self.peek().kind == ",":
                self.next()
                names.append(self.expect("ident").text)
        self.expect("}")
        return frozenset(names)

    def primary(self):
        t = self.peek()
        if t.kind == "(":
            self.next()
            f = self.disj()
            self.expect(")")
            return f
        if t.kind == "gap":
            if not self.allow_gaps:
                self.error("gap token [] is only allowed in trees")
            self.next()
            g = Gap(self.gap_count)
            self.gap_count += 1
            return g
        if t.kind == "ident" and self.peek(1).kind == "(":
            name = self.next().text
            self.next()
            args = [self.term()]
            while self.peek().kind == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
            known = self.arities.setdefault(name, len(args))
            if known != len(args):
                self.error(f"relation {name} used with arity {len(args)} after arity {known}", t)
            return Atom(name, tuple(args))
        if t.kind in ("ident", "num"):
            left = self.term()
            op = self.peek()
            if op.kind not in ("=", "neq"):
                self.error(f"expected '=' or '!=' after term {left!s}")
            self.next()
            right = self.term()
            return Eq(left, right) if op.kind == "=" else Neg(Eq(left, right))
        self.error(f"unexpected {t.text or 'end of input'!r}")

    def term(self):
        t = self.peek()
        if t.kind == "num":
            self.next()
            return Const(t.text)
        if t.kind == "ident":
            self.next()
            if t.text in self.constants and t.text not in self.bound:
                return Const(t.text)
            return t.text
        self.error(f"expected a term but found {t.text or 'end of input'!r}")


def parse_formula(text: str, constants=()):
    """Parse a formula; identifiers in `constants` (and numerals) become constant terms."""
    return _Parser(text, constants, allow_gaps=False).parse()


def parse_tree(text: str):
    """Parse a positive initial tree written with [] gaps (numbered left to right)."""
    from .trees import PrefixTree

    p = _Parser(text, (), allow_gaps=True)
    root = p.parse()
    return PrefixTree(root)


def parse_any(text: str, constants=()):
    """Formula text or tree text, whichever it is."""
    p = _Parser(text, constants, allow_gaps=True)
    f = p.parse()
    return f, p.gap_count
