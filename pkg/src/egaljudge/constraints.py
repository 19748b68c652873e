"""Propositional integrity constraints and admissible-domain enumeration.

Grammar (precedence low to high, `->` right-associative)::

    formula   := iff
    iff       := imp ("<->" imp)*
    imp       := or ("->" imp)?
    or        := and ("|" and)*
    and       := unary ("&" unary)*
    unary     := "!" unary | "(" formula ")" | "true" | "false" | IDENT

Identifiers match ``[A-Za-z][A-Za-z0-9_]*``; ``true`` and ``false`` are
reserved constants.  Parsing round-trips through :func:`format_formula`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional, Union

import numpy as np

from . import kernels
from .core import Agenda, Domain, Judgment, enumeration_cap
from .errors import (
    CapacityError,
    FormulaSyntaxError,
    InconsistentConstraintError,
    UnknownVariableError,
)


@dataclass(frozen=True)
class Var:
    label: str

    def variables(self) -> frozenset[str]:
        return frozenset({self.label})


@dataclass(frozen=True)
class Const:
    value: bool

    def variables(self) -> frozenset[str]:
        return frozenset()


@dataclass(frozen=True)
class Not:
    child: "Formula"

    def variables(self) -> frozenset[str]:
        return self.child.variables()


@dataclass(frozen=True)
class _Binary:
    left: "Formula"
    right: "Formula"

    def variables(self) -> frozenset[str]:
        return self.left.variables() | self.right.variables()


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Implies(_Binary):
    pass


class Iff(_Binary):
    pass


Formula = Union[Var, Const, Not, And, Or, Implies, Iff]

TRUE = Const(True)
FALSE = Const(False)

_TOKEN = re.compile(r"\s*(<->|->|[!&|()]|[A-Za-z][A-Za-z0-9_]*)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise FormulaSyntaxError(
                f"unexpected character {stripped[0]!r}", len(text) - len(stripped)
            )
        tokens.append((match.group(1), match.start(1)))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self) -> tuple[str, int]:
        if self.i >= len(self.tokens):
            raise FormulaSyntaxError("unexpected end of input", len(self.text))
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        node = self.iff()
        if self.i < len(self.tokens):
            tok, pos = self.tokens[self.i]
            raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)
        return node

    def iff(self) -> Formula:
        node = self.imp()
        while self.peek() == "<->":
            self.take()
            node = Iff(node, self.imp())
        return node

    def imp(self) -> Formula:
        node = self.or_()
        if self.peek() == "->":
            self.take()
            node = Implies(node, self.imp())  # right-associative
        return node

    def or_(self) -> Formula:
        node = self.and_()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.and_())
        return node

    def and_(self) -> Formula:
        node = self.unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        tok, pos = self.take()
        if tok == "!":
            return Not(self.unary())
        if tok == "(":
            node = self.iff()
            tok2, pos2 = self.take()
            if tok2 != ")":
                raise FormulaSyntaxError(f"expected ')', got {tok2!r}", pos2)
            return node
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", tok):
            return Var(tok)
        raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)


def parse_formula(text: str) -> Formula:
    """Parse constraint text into an AST (see the module grammar)."""
    return _Parser(text).parse()


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Var: 6, Const: 6}


def format_formula(f: Formula) -> str:
    """Render an AST back to text; parse(format(f)) == f."""

    def render(node: Formula, parent_prec: int) -> str:
        prec = _PREC[type(node)]
        if isinstance(node, Var):
            body = node.label
        elif isinstance(node, Const):
            body = "true" if node.value else "false"
        elif isinstance(node, Not):
            body = "!" + render(node.child, prec)
        else:
            op = {And: " & ", Or: " | ", Implies: " -> ", Iff: " <-> "}[type(node)]
            if isinstance(node, Implies):
                # right-associative: the left child needs strictly higher precedence
                body = render(node.left, prec + 1) + op + render(node.right, prec)
            else:
                body = render(node.left, prec) + op + render(node.right, prec + 1)
        return f"({body})" if prec < parent_prec else body

    return render(f, 0)


def evaluate_assignment(f: Formula, assignment: Mapping[str, bool]) -> bool:
    """Truth value of ``f`` under a label -> bool mapping."""
    if isinstance(f, Var):
        try:
            return bool(assignment[f.label])
        except KeyError:
            raise UnknownVariableError(f"no value for variable {f.label!r}") from None
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not evaluate_assignment(f.child, assignment)
    left = evaluate_assignment(f.left, assignment)
    right = evaluate_assignment(f.right, assignment)
    if isinstance(f, And):
        return left and right
    if isinstance(f, Or):
        return left or right
    if isinstance(f, Implies):
        return (not left) or right
    return left == right  # Iff


def evaluate(f: Formula, j: Judgment, agenda: Agenda) -> bool:
    """Truth value of ``f`` under the assignment issue k -> bit k of ``j``."""
    unknown = f.variables() - set(agenda.issues)
    if unknown:
        raise UnknownVariableError(f"formula mentions undeclared labels: {sorted(unknown)}")
    assignment = {label: bool(bit) for label, bit in zip(agenda.issues, j.bits)}
    return evaluate_assignment(f, assignment)


def _evaluate_columns(f: Formula, columns: Mapping[str, np.ndarray]) -> np.ndarray:
    """Vectorized evaluation over many assignments at once (bool arrays)."""
    if isinstance(f, Var):
        try:
            return columns[f.label]
        except KeyError:
            raise UnknownVariableError(f"no value for variable {f.label!r}") from None
    if isinstance(f, Const):
        template = next(iter(columns.values()))
        return np.full(template.shape, f.value, dtype=bool)
    if isinstance(f, Not):
        return ~_evaluate_columns(f.child, columns)
    left = _evaluate_columns(f.left, columns)
    right = _evaluate_columns(f.right, columns)
    if isinstance(f, And):
        return left & right
    if isinstance(f, Or):
        return left | right
    if isinstance(f, Implies):
        return ~left | right
    return left == right  # Iff


def enumerate_domain(agenda: Agenda, cap: Optional[int] = None) -> Domain:
    """Exactly the judgments satisfying the agenda's constraint.

    Without a constraint this is the full hypercube.  Raises
    :class:`CapacityError` when m exceeds the enumeration cap and
    :class:`InconsistentConstraintError` when nothing satisfies the
    constraint.
    """
    limit = enumeration_cap(cap)
    m = agenda.m
    if m > limit:
        raise CapacityError(f"enumeration over m={m} issues exceeds cap {limit}")
    words = np.arange(1 << m, dtype=np.uint64)
    if agenda.constraint is None:
        return Domain(m, words)
    bits = kernels.words_to_bits(words, m)
    columns = {label: bits[:, k].astype(bool) for k, label in enumerate(agenda.issues)}
    mask = _evaluate_columns(agenda.constraint, columns)
    selected = words[mask]
    if selected.size == 0:
        raise InconsistentConstraintError("constraint admits no judgment")
    return Domain(m, selected)
