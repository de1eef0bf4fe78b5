"""Recursive-descent parser for the program and query grammar.

Grammar (``%`` starts a line comment)::

    program  ::= rule*
    rule     ::= head [":-" body] "."
    head     ::= atom ("v" atom)*
    body     ::= literal ("," literal)*
    literal  ::= ["not"] atom
    atom     ::= symbol ["(" [term ("," term)*] ")"]
    term     ::= VARIABLE | symbol ["(" term ("," term)* ")"] | list
    list     ::= "[" "]" | "[" term ("," term)* ["|" term] "]"
    query    ::= atom "?"

Symbols are lowercase identifiers, digit strings or double-quoted strings.
List sugar is desugared into ``cons/2`` and ``nil/0`` while parsing.
"""
from __future__ import annotations

import re
from typing import List, Optional, Tuple

from .errors import ArityClash, ParseError, ReservedPrefix
from .syntax import (
    Atom,
    Functional,
    Literal,
    Program,
    Query,
    Rule,
    Term,
    Variable,
    is_magic,
    make_list,
    nil,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<if>:-)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<number>[0-9]+)
  | (?P<string>"(?:\\.|[^"\\\n])*")
  | (?P<punct>[()\[\],.|?])
    """,
    re.VERBOSE,
)


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind, text, line, column):
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column

    def __repr__(self):
        return f"{self.kind}:{self.text!r}@{self.line}:{self.column}"


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            if kind == "punct":
                kind = chunk
            tokens.append(_Token(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


def _unquote(token: str) -> str:
    body = token[1:-1]
    return re.sub(r"\\(.)", r"\1", body)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> _Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def fail(self, *expected: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"unexpected {found}", t.line, t.column, expected)

    def expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            self.fail(repr(kind) if len(kind) == 1 else kind)
        t = self.tok
        self.i += 1
        return t

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    # -- pieces ------------------------------------------------------------

    def symbol(self) -> str:
        t = self.tok
        if t.kind in ("ident", "number"):
            self.i += 1
            return t.text
        if t.kind == "string":
            self.i += 1
            return _unquote(t.text)
        self.fail("symbol")

    def term(self) -> Term:
        t = self.tok
        if t.kind == "var":
            self.i += 1
            return Variable(t.text)
        if t.kind == "[":
            return self.list_term()
        if t.kind in ("ident", "number", "string"):
            name = self.symbol()
            if self.accept("("):
                args = [self.term()]
                while self.accept(","):
                    args.append(self.term())
                self.expect(")")
                return Functional(name, args)
            return Functional(name)
        self.fail("term")

    def list_term(self) -> Term:
        self.expect("[")
        if self.accept("]"):
            return nil()
        items = [self.term()]
        while self.accept(","):
            items.append(self.term())
        tail: Optional[Term] = None
        if self.accept("|"):
            tail = self.term()
        self.expect("]")
        return make_list(items, tail)

    def atom(self) -> Atom:
        if self.tok.kind not in ("ident", "string", "number"):
            self.fail("atom")
        name = self.symbol()
        args: List[Term] = []
        if self.accept("("):
            if not self.accept(")"):
                args.append(self.term())
                while self.accept(","):
                    args.append(self.term())
                self.expect(")")
        return Atom(name, args)

    def literal(self) -> Literal:
        t = self.tok
        if (
            t.kind == "ident"
            and t.text == "not"
            and self.peek().kind in ("ident", "string", "number")
        ):
            self.i += 1
            return Literal(self.atom(), False)
        return Literal(self.atom(), True)

    def rule(self) -> Rule:
        head = [self.atom()]
        while self.tok.kind == "ident" and self.tok.text == "v":
            self.i += 1
            head.append(self.atom())
        body: List[Literal] = []
        if self.accept("if"):
            body.append(self.literal())
            while self.accept(","):
                body.append(self.literal())
        if self.tok.kind != ".":
            if body:
                self.fail("','", "'.'")
            self.fail("'v'", "':-'", "'.'")
        self.i += 1
        return Rule(head, body)

    def program(self) -> List[Rule]:
        rules = []
        while self.tok.kind != "eof":
            rules.append(self.rule())
        return rules


def check_arities(rules, known=None) -> dict:
    """Raise ``ArityClash`` when a predicate appears at two arities."""
    arities = dict(known or {})
    for r in rules:
        for a in r.atoms:
            seen = arities.setdefault(a.predicate, a.arity)
            if seen != a.arity:
                raise ArityClash(a.predicate, seen, a.arity)
    return arities


def parse_program(text: str, *, allow_magic: bool = True) -> Program:
    """Parse program text into a ``Program``.

    With ``allow_magic=False`` predicates carrying the ``magic_`` prefix are
    rejected, as required for user-supplied input to the rewriting.
    """
    rules = _Parser(text).program()
    check_arities(rules)
    if not allow_magic:
        for r in rules:
            for a in r.atoms:
                if is_magic(a.predicate):
                    raise ReservedPrefix(a.predicate)
    return Program(rules)


def parse_query(text: str) -> Query:
    """Parse ``atom?``; the trailing question mark may be omitted."""
    p = _Parser(text)
    a = p.atom()
    p.accept("?")
    if p.tok.kind != "eof":
        p.fail("'?'")
    if not a.ground:
        t = p.tokens[0]
        raise ParseError(f"query {a} is not ground", t.line, t.column)
    return Query(a)


def parse_atom(text: str) -> Atom:
    p = _Parser(text)
    a = p.atom()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return a


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return t


def parse_rule(text: str) -> Rule:
    p = _Parser(text)
    r = p.rule()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return r


def desugar_lists(x) -> Term:
    """Turn list sugar into cons/nil terms.

    Accepts term text such as ``"[X|L]"`` or a Python list whose items are
    terms, term text, or nested Python lists.
    """
    if isinstance(x, str):
        return parse_term(x)
    if isinstance(x, (list, tuple)):
        return make_list([desugar_lists(i) for i in x])
    return x


def parse_rules(text: str) -> Tuple[Rule, ...]:
    return Program(_Parser(text).program()).rules
