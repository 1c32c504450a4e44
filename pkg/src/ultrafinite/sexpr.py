"""S-expression reader and printer with line/column tracking.

The reader is iterative so that deeply nested inputs (unary numerals,
long modus-ponens chains) never hit the interpreter's recursion limit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, source: str = "<input>"):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col
        self.source = source

    def __str__(self) -> str:
        return f"{self.source}:{self.line}:{self.col}: {self.message}"


@dataclass(frozen=True)
class Symbol:
    name: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __iter__(self):
        return iter(self.items)

    @property
    def head(self) -> str | None:
        if self.items and isinstance(self.items[0], Symbol):
            return self.items[0].name
        return None


SExpr = Union[Symbol, SList]

_DELIMS = set("() \t\r\n;")


def _tokens(text: str, source: str) -> Iterator[tuple[str, int, int]]:
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
        elif c in " \t\r":
            i += 1
            col += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, line, col
            i += 1
            col += 1
        elif c == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise ParseError("unterminated string", line, col, source)
                j += 1
            if j >= n:
                raise ParseError("unterminated string", line, col, source)
            yield text[i:j + 1], line, col
            col += j + 1 - i
            i = j + 1
        else:
            j = i
            while j < n and text[j] not in _DELIMS:
                j += 1
            yield text[i:j], line, col
            col += j - i
            i = j


def parse_all(text: str, source: str = "<input>") -> list[SExpr]:
    """Read every top-level expression in ``text``."""
    out: list[SExpr] = []
    stack: list[tuple[list, int, int]] = []
    for tok, line, col in _tokens(text, source):
        if tok == "(":
            stack.append(([], line, col))
        elif tok == ")":
            if not stack:
                raise ParseError("unexpected ')'", line, col, source)
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            (stack[-1][0] if stack else out).append(node)
        else:
            sym = Symbol(tok, line, col)
            (stack[-1][0] if stack else out).append(sym)
    if stack:
        _, l0, c0 = stack[-1]
        raise ParseError("unbalanced parenthesis: '(' never closed", l0, c0, source)
    return out


def parse_one(text: str, source: str = "<input>") -> SExpr:
    exprs = parse_all(text, source)
    if len(exprs) != 1:
        raise ParseError(f"expected exactly one expression, found {len(exprs)}", 1, 1, source)
    return exprs[0]


def to_text(expr: SExpr) -> str:
    """Print with single spaces; inverse of :func:`parse_one` up to whitespace."""
    parts: list[str] = []
    # explicit stack of (node, index-into-children)
    stack: list[tuple[SList, int]] = []
    node = expr
    while True:
        if isinstance(node, Symbol):
            parts.append(node.name)
        else:
            parts.append("(")
            stack.append((node, 0))
        node = None
        while stack:
            lst, i = stack[-1]
            if i < len(lst.items):
                if i > 0:
                    parts.append(" ")
                stack[-1] = (lst, i + 1)
                node = lst.items[i]
                break
            parts.append(")")
            stack.pop()
        if node is None:
            return "".join(parts)


def normalize_whitespace(text: str) -> str:
    """Canonical spacing of a text: what ``to_text(parse_one(text))`` returns."""
    return " ".join(to_text(e) for e in parse_all(text))


def sym(name: str) -> Symbol:
    return Symbol(name)


def lst(*items) -> SList:
    return SList(tuple(i if isinstance(i, (Symbol, SList)) else Symbol(str(i)) for i in items))
