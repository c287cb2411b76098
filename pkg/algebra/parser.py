"""
Expression parser for Moment Bounds
Turns constraint strings such as "1 - 0.25*x1^2 - x2^2" into Polynomials

Grammar (whitespace is insignificant):

    expression := term { ("+" | "-") term }
    term       := unary { "*" unary }
    unary      := ("+" | "-") unary | power
    power      := atom [ "^" integer ]
    atom       := number | variable | "(" expression ")"
    number     := digits [ "." digits ] [ exponent ] | "." digits [ exponent ]
    exponent   := ("e" | "E") [ "+" | "-" ] digits
    integer    := digits
    variable   := letter { letter | digit | "_" }

"^" binds tighter than "*", which binds tighter than "+" and "-".
Implicit multiplication ("2x1") is rejected.
"""

import re
from typing import List, NamedTuple, Optional, Sequence

from .polynomial import Polynomial


class PolynomialSyntaxError(ValueError):
    """Raised for malformed expressions; `position` is the 0-based character offset"""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariableError(PolynomialSyntaxError):
    """Raised when an expression names a variable that was not declared"""

    def __init__(self, name: str, position: int, text: str = ""):
        self.name = name
        super().__init__(f"unknown variable '{name}'", position, text)


class Token(NamedTuple):
    kind: str
    value: str
    position: int


_TOKEN_RE = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^()])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        if match is None:
            raise PolynomialSyntaxError(f"unexpected character {text[position]!r}", position, text)
        kind = match.lastgroup
        if kind != "space":
            tokens.append(Token(kind, match.group(), position))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser over a token list"""

    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.n = len(variables)
        self.lookup = {name: index for index, name in enumerate(variables)}
        self.tokens = tokenize(text)
        self.cursor = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.cursor]

    def _advance(self) -> Token:
        token = self.tokens[self.cursor]
        self.cursor += 1
        return token

    def _accept(self, value: str) -> Optional[Token]:
        if self.current.kind == "op" and self.current.value == value:
            return self._advance()
        return None

    def _fail(self, message: str, token: Optional[Token] = None):
        token = token or self.current
        raise PolynomialSyntaxError(message, token.position, self.text)

    def parse(self) -> Polynomial:
        if self.current.kind == "end":
            self._fail("empty expression")
        result = self.expression()
        if self.current.kind != "end":
            self._fail(f"unexpected token {self.current.value!r}")
        return result

    def expression(self) -> Polynomial:
        result = self.term()
        while True:
            if self._accept("+"):
                result = result + self.term()
            elif self._accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> Polynomial:
        result = self.unary()
        while self._accept("*"):
            result = result * self.unary()
        return result

    def unary(self) -> Polynomial:
        if self._accept("-"):
            return -self.unary()
        if self._accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if not self._accept("^"):
            return base
        token = self.current
        if token.kind == "op" and token.value == "-":
            self._fail("negative exponents are not allowed")
        if token.kind != "number":
            self._fail("expected an integer exponent after '^'")
        if not token.value.isdigit():
            self._fail(f"fractional exponent {token.value!r} is not allowed")
        self._advance()
        return base ** int(token.value)

    def atom(self) -> Polynomial:
        token = self.current
        if token.kind == "number":
            self._advance()
            return Polynomial.constant(self.n, float(token.value))
        if token.kind == "name":
            self._advance()
            if token.value not in self.lookup:
                raise UnknownVariableError(token.value, token.position, self.text)
            return Polynomial.variable(self.n, self.lookup[token.value])
        if self._accept("("):
            inner = self.expression()
            if not self._accept(")"):
                self._fail("expected ')'")
            return inner
        if token.kind == "end":
            self._fail("unexpected end of expression")
        self._fail(f"unexpected token {token.value!r}")


def parse(text: str, variables: Sequence[str]) -> Polynomial:
    """
    Parse an expression string into an expanded Polynomial

    Args:
        text: Expression over the declared variables
        variables: Ordered variable names; position k becomes coordinate x_k

    Returns:
        The expanded sparse polynomial
    """
    if len(set(variables)) != len(variables):
        raise ValueError(f"variable names must be unique, got {list(variables)}")
    return _Parser(text, variables).parse()
