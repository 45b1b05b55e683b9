"""Polynomial text grammar.

::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('-' | '+') factor | atom ('^' INT)?
    atom   := NUMBER | NUMBER '/' NUMBER | NAME | '(' expr ')'

Variables are ``x1 ... xn`` unless an explicit ``names`` list is passed.
Canonical output lists terms in graded-lex descending order, e.g.
``x1^2*x2 - 1/2*x3``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from lapinv._scalar import ONE, to_scalar
from lapinv.errors import ParseError
from lapinv.poly import Polynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")
_DEFAULT_VAR = re.compile(r"x([1-9][0-9]*)$")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise ParseError(f"unexpected character {ch!r}", text, start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, resolve):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.resolve = resolve

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok=None):
        tok = tok or self.peek()
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ParseError(f"syntax error: {msg}, found {what}", self.text, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            self.error("expected operator")
        return node

    # nodes are callables nvars -> Polynomial, built once variable count is known
    def expr(self):
        parts = [(1, self.term())]
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            sign = 1 if self.take()[1] == "+" else -1
            parts.append((sign, self.term()))
        return ("sum", parts)

    def term(self):
        factors = [self.factor()]
        while self.peek()[:2] == ("op", "*"):
            self.take()
            factors.append(self.factor())
        return ("prod", factors)

    def factor(self):
        tok = self.peek()
        if tok[:2] == ("op", "-"):
            self.take()
            return ("neg", self.factor())
        if tok[:2] == ("op", "+"):
            self.take()
            return self.factor()
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            exp_tok = self.peek()
            if exp_tok[:2] == ("op", "-"):
                raise ParseError("negative exponent", self.text, exp_tok[2])
            if exp_tok[0] != "num":
                self.error("expected integer exponent")
            self.take()
            return ("pow", base, int(exp_tok[1]))
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            if self.peek()[:2] == ("op", "/"):
                self.take()
                den = self.peek()
                if den[0] != "num":
                    self.error("expected integer denominator")
                self.take()
                if int(den[1]) == 0:
                    raise ParseError("zero denominator", self.text, den[2])
                return ("const", Fraction(int(tok[1]), int(den[1])))
            return ("const", Fraction(int(tok[1])))
        if tok[0] == "name":
            self.take()
            index = self.resolve(tok[1])
            if index is None:
                raise ParseError(f"unknown variable {tok[1]!r}", self.text, tok[2])
            return ("var", index)
        if tok[:2] == ("op", "("):
            self.take()
            node = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return node
        self.error("expected a number, variable or '('")


def _build(node, nvars: int) -> Polynomial:
    kind = node[0]
    if kind == "const":
        return Polynomial.constant(node[1], nvars)
    if kind == "var":
        return Polynomial.variable(node[1], nvars)
    if kind == "neg":
        return -_build(node[1], nvars)
    if kind == "pow":
        return _build(node[1], nvars) ** node[2]
    if kind == "prod":
        out = _build(node[1][0], nvars)
        for f in node[1][1:]:
            out = out * _build(f, nvars)
        return out
    out = Polynomial.zero(nvars)
    for sign, t in node[1]:
        b = _build(t, nvars)
        out = out + b if sign > 0 else out - b
    return out


def _max_var(node) -> int:
    kind = node[0]
    if kind == "var":
        return node[1]
    if kind == "const":
        return -1
    if kind in ("neg", "pow"):
        return _max_var(node[1])
    if kind == "prod":
        return max(_max_var(f) for f in node[1])
    return max(_max_var(t) for _, t in node[1])


def parse_polynomial(text: str, nvars: int | None = None, names: Sequence[str] | None = None) -> Polynomial:
    """Parse ``text`` into a :class:`Polynomial`.

    With ``names`` the i-th name denotes variable i and ``nvars`` defaults to
    ``len(names)``. Otherwise variables are ``x1, x2, ...`` and ``nvars``
    defaults to the largest index that occurs.
    """
    if names is not None:
        lookup = {name: i for i, name in enumerate(names)}
        resolve = lookup.get
        if nvars is None:
            nvars = len(names)
    else:

        def resolve(name):
            m = _DEFAULT_VAR.match(name)
            if not m:
                return None
            k = int(m.group(1))
            if nvars is not None and k > nvars:
                return None
            return k - 1

    tree = _Parser(text, resolve).parse()
    if nvars is None:
        nvars = max(_max_var(tree) + 1, 1)
    return _build(tree, nvars)


def default_names(nvars: int, prefix: str = "x") -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(nvars)]


def format_monomial(exp, names: Sequence[str]) -> str:
    parts = []
    for i, a in enumerate(exp):
        if a == 1:
            parts.append(names[i])
        elif a > 1:
            parts.append(f"{names[i]}^{a}")
    return "*".join(parts)


def format_polynomial(p: Polynomial, names: Sequence[str] | None = None) -> str:
    if names is None:
        names = default_names(p.nvars)
    if not p:
        return "0"
    out = []
    for idx, (exp, c) in enumerate(p.items()):
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(exp, names)
        frac = Fraction(int(a.numerator), int(a.denominator))
        coef = str(frac.numerator) if frac.denominator == 1 else f"{frac.numerator}/{frac.denominator}"
        if not mono:
            body = coef
        elif a == ONE:
            body = mono
        else:
            body = f"{coef}*{mono}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def parse_scalar(text) -> object:
    """Parse ``'3/2'``, ``'-4'`` or an int into an exact scalar."""
    if isinstance(text, str):
        try:
            f = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"invalid rational {text!r}", str(text), 0) from exc
        if "." in text or "e" in text.lower():
            raise ParseError(f"rationals must be written as p/q, got {text!r}", text, 0)
        return to_scalar(f)
    return to_scalar(text)
