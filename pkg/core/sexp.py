"""S-expression reader with source positions, used for cdsat-pt proof documents."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Union

from .exceptions import CdsatError
from .terms import FALSE, TRUE, AbsValue, RatValue


class SexpError(CdsatError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Atom:
    text: str
    line: int = 0
    col: int = 0

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int = 0
    col: int = 0

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, index):
        return self.items[index]

    def head(self) -> str:
        return self.items[0].text if self.items and isinstance(self.items[0], Atom) else ""

    def __str__(self):
        return to_text(self)


Sexp = Union[Atom, SList]


def tokenize(text: str):
    """Yield (token, line, col); comments run from ``;`` to end of line."""
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            yield ch, line, col
            i += 1
            col += 1
            continue
        if ch == "|":
            end = text.find("|", i + 1)
            if end < 0:
                raise SexpError("unterminated quoted symbol", line, col)
            yield text[i : end + 1], line, col
            col += end + 1 - i
            i = end + 1
            continue
        if ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise SexpError("unterminated string literal", line, col)
            yield text[i : end + 1], line, col
            col += end + 1 - i
            i = end + 1
            continue
        start = i
        while i < n and not text[i].isspace() and text[i] not in "();":
            i += 1
        yield text[start:i], line, col
        col += i - start


def read_all(text: str) -> List[Sexp]:
    stack: List[list] = [[]]
    opened = []
    for token, line, col in tokenize(text):
        if token == "(":
            stack.append([])
            opened.append((line, col))
        elif token == ")":
            if len(stack) == 1:
                raise SexpError("unexpected ')'", line, col)
            items = stack.pop()
            start_line, start_col = opened.pop()
            stack[-1].append(SList(tuple(items), start_line, start_col))
        else:
            stack[-1].append(Atom(token, line, col))
    if len(stack) > 1:
        line, col = opened[-1]
        raise SexpError("unbalanced '('", line, col)
    return stack[0]


def read_one(text: str) -> Sexp:
    items = read_all(text)
    if len(items) != 1:
        raise SexpError(f"expected one expression, found {len(items)}", 1, 1)
    return items[0]


def to_text(sexp: Sexp) -> str:
    if isinstance(sexp, Atom):
        return sexp.text
    return "(" + " ".join(to_text(s) for s in sexp.items) + ")"


def read_rational(sexp: Sexp):
    """Fraction for a numeral literal (``3``, ``1.5``, ``(/ 1 2)``, ``(- 3)``), else None."""
    if isinstance(sexp, Atom):
        text = sexp.text
        if text.isdigit():
            return Fraction(int(text))
        head, dot, tail = text.partition(".")
        if dot and head.isdigit() and tail.isdigit():
            return Fraction(text)
        return None
    if len(sexp) == 2 and sexp.head() == "-":
        inner = read_rational(sexp[1])
        return None if inner is None else -inner
    if len(sexp) == 3 and sexp.head() == "/":
        p, q = read_rational(sexp[1]), read_rational(sexp[2])
        if p is None or q is None or q == 0:
            return None
        return p / q
    return None


def read_value(sexp: Sexp, sorts):
    """A value literal: rational, ``true``/``false`` or ``(abs <Sort> <n>)``."""
    if isinstance(sexp, Atom) and sexp.text in ("true", "false"):
        return TRUE if sexp.text == "true" else FALSE
    if isinstance(sexp, SList) and len(sexp) == 3 and sexp.head() == "abs":
        sort_name, index = sexp[1], sexp[2]
        if not isinstance(sort_name, Atom) or sort_name.text not in sorts:
            raise SexpError(f"unknown sort in {to_text(sexp)}", sexp.line, sexp.col)
        if not isinstance(index, Atom) or not index.text.isdigit():
            raise SexpError(f"bad abstract index in {to_text(sexp)}", sexp.line, sexp.col)
        return AbsValue(sorts[sort_name.text], int(index.text))
    q = read_rational(sexp)
    if q is None:
        raise SexpError(f"not a value literal: {to_text(sexp)}", sexp.line, sexp.col)
    return RatValue(q)
