"""Concrete ASCII syntax: lexing, parsing, canonical printing.

Grammar (binary connectives are right-associative; quantifiers bind
tighter than binary connectives, so their body is a unary item):

    formula := iff
    iff     := implies ('<->' iff)?
    implies := or ('->' implies)?
    or      := and ('\\/' or)?
    and     := unary ('/\\' and)?
    unary   := '~' unary | quant | '(' formula ')' | atom
    quant   := ('A'|'E') NAME '.' unary
             | ('A'|'E') NAME 'in' term '.' unary
             | 'fam' NAME '[' NAME ']' 'in' term '.' unary
    atom    := term ('in' | '=') term
    term    := NAME | NAME '[' index ']' | literal
    index   := NAME | literal
    literal := NUMBER | '{' (literal (',' literal)*)? '}'

Decimal numbers abbreviate Zermelo numerals (0 is the empty set, n+1 the
singleton of n).  '#' starts a line comment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from .hf import HFSet, as_numeral, canonical, hf_text, zermelo_numeral
from .syntax import (
    And,
    Eq,
    Exists,
    ExistsIndex,
    FamilyApp,
    Forall,
    ForallFamily,
    ForallIndex,
    Formula,
    HFLiteral,
    Iff,
    Implies,
    Index,
    IndexConst,
    IndexVar,
    Mem,
    Node,
    Not,
    Or,
    RESERVED_WORDS,
    SetVar,
    Term,
    well_formed,
)

__all__ = [
    "SourceSpan",
    "ParseError",
    "ParsedFormula",
    "parse_formula",
    "parse_formula_with_spans",
    "print_formula",
    "term_text",
    "index_text",
    "load_formula_file",
    "tokenize",
    "Token",
]


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        return f"{self.message} (bytes {self.span.start}..{self.span.end})"


class Token(NamedTuple):
    kind: str
    text: str
    start: int
    end: int


_KEYWORDS = RESERVED_WORDS
_SYMBOLS = ["<->", "->", "/\\", "\\/", "~", "(", ")", "{", "}", "[", "]", ",", ".", "=", ";"]


def tokenize(text: str) -> list[Token]:
    if text.isascii():
        to_byte = None
    else:
        offsets = [0]
        for ch in text:
            offsets.append(offsets[-1] + len(ch.encode("utf-8")))
        to_byte = offsets.__getitem__

    def byte(pos: int) -> int:
        return pos if to_byte is None else to_byte(pos)

    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("NUM", text[i:j], byte(i), byte(j)))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "KW_" + word if word in _KEYWORDS else "NAME"
            tokens.append(Token(kind, word, byte(i), byte(j)))
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(sym, sym, byte(i), byte(i + len(sym))))
                i += len(sym)
                break
        else:
            raise ParseError(f"unknown token {c!r}", SourceSpan(byte(i), byte(i + 1)))
    tokens.append(Token("EOF", "", byte(n), byte(n)))
    return tokens


@dataclass
class ParsedFormula:
    formula: Formula
    spans: dict[int, SourceSpan]

    def span_of(self, node: Node) -> Optional[SourceSpan]:
        return self.spans.get(id(node))


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.spans: dict[int, SourceSpan] = {}

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            what = kind[3:] if kind.startswith("KW_") else kind
            raise ParseError(
                f"expected {what!r}, found {tok.text or 'end of input'!r}",
                SourceSpan(tok.start, tok.end),
            )
        return self.next()

    def record(self, node: Node, start: int, end: int) -> Node:
        self.spans[id(node)] = SourceSpan(start, end)
        return node

    # formula levels ------------------------------------------------------

    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        lhs = self.implies()
        if self.peek().kind == "<->":
            self.next()
            rhs = self.iff()
            return self.binary(Iff, lhs, rhs)
        return lhs

    def implies(self) -> Formula:
        lhs = self.or_()
        if self.peek().kind == "->":
            self.next()
            rhs = self.implies()
            return self.binary(Implies, lhs, rhs)
        return lhs

    def or_(self) -> Formula:
        lhs = self.and_()
        if self.peek().kind == "\\/":
            self.next()
            rhs = self.or_()
            return self.binary(Or, lhs, rhs)
        return lhs

    def and_(self) -> Formula:
        lhs = self.unary()
        if self.peek().kind == "/\\":
            self.next()
            rhs = self.and_()
            return self.binary(And, lhs, rhs)
        return lhs

    def binary(self, cons, lhs: Formula, rhs: Formula) -> Formula:
        start = self.spans[id(lhs)].start
        end = self.spans[id(rhs)].end
        return self.record(cons(lhs, rhs), start, end)

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "~":
            self.next()
            body = self.unary()
            return self.record(Not(body), tok.start, self.spans[id(body)].end)
        if tok.kind in ("KW_A", "KW_E"):
            return self.quantifier(tok)
        if tok.kind == "KW_fam":
            return self.family(tok)
        if tok.kind == "(":
            self.next()
            inner = self.formula()
            close = self.expect(")")
            # widen the span to include the parentheses
            self.spans[id(inner)] = SourceSpan(tok.start, close.end)
            return inner
        return self.atom()

    def quantifier(self, tok: Token) -> Formula:
        self.next()
        name = self.var_name()
        if self.peek().kind == "KW_in":
            self.next()
            index_set = self.term()
            self.expect(".")
            body = self.unary()
            cons = ForallIndex if tok.kind == "KW_A" else ExistsIndex
            return self.record(
                cons(name.text, index_set, body), tok.start, self.spans[id(body)].end
            )
        self.expect(".")
        body = self.unary()
        cons = Forall if tok.kind == "KW_A" else Exists
        return self.record(cons(name.text, body), tok.start, self.spans[id(body)].end)

    def family(self, tok: Token) -> Formula:
        self.next()
        fam = self.var_name()
        self.expect("[")
        idx = self.var_name()
        self.expect("]")
        self.expect("KW_in")
        index_set = self.term()
        self.expect(".")
        body = self.unary()
        return self.record(
            ForallFamily(fam.text, idx.text, index_set, body),
            tok.start,
            self.spans[id(body)].end,
        )

    def atom(self) -> Formula:
        lhs = self.term()
        tok = self.peek()
        if tok.kind == "KW_in":
            self.next()
            rhs = self.term()
            return self.binary(Mem, lhs, rhs)
        if tok.kind == "=":
            self.next()
            rhs = self.term()
            return self.binary(Eq, lhs, rhs)
        raise ParseError(
            f"expected 'in' or '=', found {tok.text or 'end of input'!r}",
            SourceSpan(tok.start, tok.end),
        )

    def var_name(self) -> Token:
        tok = self.peek()
        if tok.kind != "NAME":
            raise ParseError(
                f"expected a variable name, found {tok.text or 'end of input'!r}",
                SourceSpan(tok.start, tok.end),
            )
        return self.next()

    # terms ----------------------------------------------------------------

    def term(self) -> Term:
        tok = self.peek()
        if tok.kind == "NAME":
            self.next()
            if self.peek().kind == "[":
                self.next()
                index = self.index()
                close = self.expect("]")
                return self.record(FamilyApp(tok.text, index), tok.start, close.end)
            return self.record(SetVar(tok.text), tok.start, tok.end)
        if tok.kind in ("NUM", "{"):
            value, start, end = self.literal()
            return self.record(HFLiteral(value), start, end)
        raise ParseError(
            f"expected a term, found {tok.text or 'end of input'!r}",
            SourceSpan(tok.start, tok.end),
        )

    def index(self) -> Index:
        tok = self.peek()
        if tok.kind == "NAME":
            self.next()
            return IndexVar(tok.text)
        if tok.kind in ("NUM", "{"):
            value, _, _ = self.literal()
            return IndexConst(value)
        raise ParseError(
            f"expected an index, found {tok.text or 'end of input'!r}",
            SourceSpan(tok.start, tok.end),
        )

    def literal(self) -> tuple[HFSet, int, int]:
        tok = self.peek()
        if tok.kind == "NUM":
            self.next()
            return zermelo_numeral(int(tok.text)), tok.start, tok.end
        if tok.kind == "{":
            self.next()
            elems: list[HFSet] = []
            if self.peek().kind != "}":
                value, _, _ = self.literal()
                elems.append(value)
                while self.peek().kind == ",":
                    self.next()
                    value, _, _ = self.literal()
                    elems.append(value)
            close = self.expect("}")
            return canonical(elems), tok.start, close.end
        raise ParseError(
            f"expected a set literal, found {tok.text or 'end of input'!r}",
            SourceSpan(tok.start, tok.end),
        )


def parse_formula_with_spans(text: str) -> ParsedFormula:
    """Parse and well-formedness-check a formula, keeping node spans."""
    parser = _Parser(tokenize(text))
    phi = parser.formula()
    eof = parser.peek()
    if eof.kind != "EOF":
        raise ParseError(f"unexpected trailing input {eof.text!r}", SourceSpan(eof.start, eof.end))
    diag = well_formed(phi)
    if not diag:
        span = parser.spans.get(id(diag.offender), SourceSpan(0, eof.end))
        raise ParseError(diag.reason or "ill-formed formula", span)
    return ParsedFormula(phi, parser.spans)


def parse_formula(text: str) -> Formula:
    """Parse text into a well-formed Formula, or raise ParseError."""
    return parse_formula_with_spans(text).formula


def load_formula_file(path) -> Formula:
    """Read a .fast file: one formula, '#' line comments."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_formula(fh.read())


# ---------------------------------------------------------------------------
# Canonical printing.  Levels: iff=0, implies=1, or=2, and=3, unary=4.


def index_text(index: Index) -> str:
    if isinstance(index, IndexVar):
        return index.name
    return hf_text(index.value)


def term_text(t: Term) -> str:
    match t:
        case SetVar(name):
            return name
        case FamilyApp(family, index):
            return f"{family}[{index_text(index)}]"
        case HFLiteral(value):
            return hf_text(value)
    raise TypeError(f"not a term: {t!r}")


def _fmt(phi: Formula, level: int) -> str:
    def wrap(s: str, mine: int) -> str:
        return f"({s})" if level > mine else s

    match phi:
        case Mem(lhs, rhs):
            return f"{term_text(lhs)} in {term_text(rhs)}"
        case Eq(lhs, rhs):
            return f"{term_text(lhs)} = {term_text(rhs)}"
        case Iff(lhs, rhs):
            return wrap(f"{_fmt(lhs, 1)} <-> {_fmt(rhs, 0)}", 0)
        case Implies(lhs, rhs):
            return wrap(f"{_fmt(lhs, 2)} -> {_fmt(rhs, 1)}", 1)
        case Or(lhs, rhs):
            return wrap(f"{_fmt(lhs, 3)} \\/ {_fmt(rhs, 2)}", 2)
        case And(lhs, rhs):
            return wrap(f"{_fmt(lhs, 4)} /\\ {_fmt(rhs, 3)}", 3)
        case Not(body):
            return f"~ {_fmt(body, 4)}"
        case Forall(var, body):
            return f"A {var} . {_fmt(body, 4)}"
        case Exists(var, body):
            return f"E {var} . {_fmt(body, 4)}"
        case ForallFamily(family, index_var, index_set, body):
            return f"fam {family}[{index_var}] in {term_text(index_set)} . {_fmt(body, 4)}"
        case ExistsIndex(index_var, index_set, body):
            return f"E {index_var} in {term_text(index_set)} . {_fmt(body, 4)}"
        case ForallIndex(index_var, index_set, body):
            return f"A {index_var} in {term_text(index_set)} . {_fmt(body, 4)}"
    raise TypeError(f"not a formula: {phi!r}")


def print_formula(phi: Formula) -> str:
    """Canonical text: minimal parentheses for the precedence table above,
    numerals for Zermelo-numeral values, braces otherwise."""
    return _fmt(phi, 0)
