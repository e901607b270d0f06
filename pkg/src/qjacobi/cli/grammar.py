"""Text syntax for forms.

    expr    := signed (('+' | '-') signed)*
    signed  := ('-' | '+') signed | product
    product := power (('*' | '/') power)*
    power   := atom ('^' ['-'] INT)?
    atom    := INT | NAME | '(' expr ')'

Names are P, Pz, E4, E1, E2 and the constant c. Division is only by
nonzero rational constants; negative exponents only on c. The output of
``str(form)`` parses back to the same form.
"""

from __future__ import annotations

import re
from typing import List, NamedTuple

from ..algebra import C, E1, E2, E4, P, PZ, Form, Scalar

NAMES = {"P": P, "Pz": PZ, "E4": E4, "E1": E1, "E2": E2, "c": C}


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class _Token(NamedTuple):
    kind: str  # INT, NAME, OP, END
    value: str
    pos: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m.group(1) is not None:
            tokens.append(_Token("INT", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(_Token("NAME", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            tokens.append(_Token("OP", ch, m.start(3)))
        pos = m.end()
    tokens.append(_Token("END", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token = None):
        tok = tok or self.tok
        raise ParseError(message, tok.pos, self.text)

    def accept(self, op: str) -> bool:
        if self.tok.kind == "OP" and self.tok.value == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Form:
        if self.tok.kind == "END":
            self.error("empty expression")
        out = self.expr()
        if self.tok.kind != "END":
            self.error(f"unexpected {self.tok.value!r}")
        return out

    def expr(self) -> Form:
        out = self.signed()
        while True:
            if self.accept("+"):
                out = out + self.signed()
            elif self.accept("-"):
                out = out - self.signed()
            else:
                return out

    def signed(self) -> Form:
        if self.accept("-"):
            return -self.signed()
        if self.accept("+"):
            return self.signed()
        return self.product()

    def product(self) -> Form:
        out = self.power()
        while True:
            if self.accept("*"):
                out = out * self.power()
            elif self.tok.kind == "OP" and self.tok.value == "/":
                slash = self.tok
                self.i += 1
                divisor = self.power()
                if not divisor.is_rational_constant() or not divisor:
                    self.error("can only divide by a nonzero rational constant", slash)
                out = out / divisor
            else:
                return out

    def power(self) -> Form:
        start = self.tok
        base = self.atom()
        if not self.accept("^"):
            return base
        negative = self.accept("-")
        if self.tok.kind != "INT":
            self.error("expected an integer exponent")
        n = int(self.tok.value)
        self.i += 1
        if negative:
            if base != C:
                self.error("negative exponents are only allowed on c", start)
            return Form.constant(Scalar.c_power(-n))
        return base**n

    def atom(self) -> Form:
        tok = self.tok
        if tok.kind == "INT":
            self.i += 1
            return Form.constant(int(tok.value))
        if tok.kind == "NAME":
            if tok.value not in NAMES:
                self.error(f"unknown identifier {tok.value!r}")
            self.i += 1
            return NAMES[tok.value]
        if self.accept("("):
            inner = self.expr()
            if not self.accept(")"):
                self.error("expected ')'")
            return inner
        if tok.kind == "END":
            self.error("unexpected end of input")
        self.error(f"unexpected {tok.value!r}")


def parse(text: str) -> Form:
    return _Parser(text).parse()
