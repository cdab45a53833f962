"""Expression language for naming ring objects the way the tables do.

Grammar:
    Expr   := Term ('+' Term)*
    Term   := Factor (('*')? Factor)*
    Factor := INT | LABEL | '(' Expr ')'

Juxtaposition counts as multiplication only when one side is a
parenthesized group, matching the typography of expressions like
"Gamma(1+3r)"; two bare names need an explicit '*'.  Labels resolve in the
target ring's basis or its shorthand table (Gamma, Lambda, Pi, Phi); a
bare integer k means k copies of the unit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .rings import FusionRing, ObjectVector


class ObjectExprError(ValueError):
    """Syntax or name error in an object expression."""

    def __init__(self, message: str, pos: int) -> None:
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sym:
    name: str
    pos: int


@dataclass(frozen=True)
class Add:
    terms: tuple


@dataclass(frozen=True)
class Mul:
    factors: tuple


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([+*()]))")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            rest = src[pos:]
            if rest.strip() == "":
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise ObjectExprError(f"unexpected character {src[bad]!r}", bad)
        if m.group(1):
            out.append(("INT", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("LABEL", m.group(2), m.start(2)))
        else:
            out.append((m.group(3), m.group(3), m.start(3)))
        pos = m.end()
    out.append(("END", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str) -> None:
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self):
        terms = [self.term()]
        while self.peek()[0] == "+":
            self.take()
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def term(self):
        first, paren = self.factor()
        factors = [first]
        prev_paren = paren
        while True:
            kind, _, pos = self.peek()
            if kind == "*":
                self.take()
                nxt, prev_paren = self.factor()
                factors.append(nxt)
            elif kind == "(":
                nxt, prev_paren = self.factor()
                factors.append(nxt)
            elif kind in ("INT", "LABEL") and prev_paren:
                nxt, prev_paren = self.factor()
                factors.append(nxt)
            elif kind in ("INT", "LABEL"):
                raise ObjectExprError(
                    "missing '*' between factors (juxtaposition needs parentheses)",
                    pos,
                )
            else:
                break
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self):
        kind, text, pos = self.take()
        if kind == "INT":
            return Num(int(text)), False
        if kind == "LABEL":
            return Sym(text, pos), False
        if kind == "(":
            inner = self.expr()
            kind2, _, pos2 = self.take()
            if kind2 != ")":
                raise ObjectExprError("expected ')'", pos2)
            return inner, True
        raise ObjectExprError(f"expected a number, name or '(': got {text or kind!r}", pos)


def parse_expr(src: str):
    """Parse to an AST without evaluating (labels unresolved)."""
    p = _Parser(src)
    tree = p.expr()
    kind, text, pos = p.peek()
    if kind != "END":
        raise ObjectExprError(f"trailing input {text!r}", pos)
    return tree


def parse_object(ring: FusionRing, src: str) -> ObjectVector:
    """Parse and evaluate an object expression over the given ring."""
    return _eval(parse_expr(src), ring)


def _eval(node, ring: FusionRing) -> ObjectVector:
    if isinstance(node, Num):
        return node.value * ring.unit_vector()
    if isinstance(node, Sym):
        if node.name in ring.labels:
            return ring.basis_vector(ring.labels.index(node.name))
        if node.name in ring.shorthands:
            return ring.vector(ring.shorthands[node.name])
        raise ObjectExprError(f"unknown label {node.name!r} in ring {ring.name!r}", node.pos)
    if isinstance(node, Add):
        out = _eval(node.terms[0], ring)
        for t in node.terms[1:]:
            out = out + _eval(t, ring)
        return out
    if isinstance(node, Mul):
        out = _eval(node.factors[0], ring)
        for f in node.factors[1:]:
            out = out * _eval(f, ring)
        return out
    raise TypeError(f"bad AST node {node!r}")


def format_object(vec: ObjectVector) -> str:
    """Canonical sum-of-terms form; parse_object inverts it exactly."""
    ring = vec.ring
    parts = []
    for i, c in enumerate(vec.coeffs):
        if c == 0:
            continue
        if i == ring.unit:
            parts.append(str(c))
        elif c == 1:
            parts.append(ring.labels[i])
        else:
            parts.append(f"{c}*{ring.labels[i]}")
    return " + ".join(parts) if parts else "0"
