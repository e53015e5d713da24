"""LTL syntax trees, a recursive-descent parser, negation normal form, and
evaluation of formulas over lasso words (finite prefix + repeating suffix)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Tuple


class LtlSyntaxError(ValueError):
    """Raised on malformed formula text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Formula:
    """Base class for all formula nodes."""


@dataclass(frozen=True)
class TrueBool(Formula):
    pass


@dataclass(frozen=True)
class FalseBool(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


TRUE = TrueBool()
FALSE = FalseBool()

_UNARY = {"!": Not, "X": Next, "F": Eventually, "G": Always}
_KEYWORDS = {"X", "U", "R", "F", "G", "true", "false"}

_TOKEN_RE = re.compile(r"\s*(&&|\|\||[!()]|[A-Za-z_][A-Za-z0-9_]*)")


def _tokenize(text: str) -> Iterator[Tuple[str, int]]:
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or not match.group(1):
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            if bad >= len(text):
                break
            raise LtlSyntaxError(f"unknown token {text[bad]!r}", bad)
        yield match.group(1), match.start(1)
        pos = match.end()
    yield "", len(text)


class _Parser:
    """Precedence-climbing parser: unary binds tightest, then U/R
    (right-associative), then &&, then ||."""

    def __init__(self, text: str):
        self.tokens: List[Tuple[str, int]] = list(_tokenize(text))
        self.index = 0

    def peek(self) -> Tuple[str, int]:
        return self.tokens[self.index]

    def advance(self) -> Tuple[str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, wanted: str) -> None:
        token, pos = self.advance()
        if token != wanted:
            shown = repr(token) if token else "end of input"
            raise LtlSyntaxError(f"expected {wanted!r}, found {shown}", pos)

    def parse(self) -> Formula:
        formula = self.parse_or()
        token, pos = self.peek()
        if token:
            raise LtlSyntaxError(f"unexpected token {token!r}", pos)
        return formula

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self.peek()[0] == "||":
            self.advance()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_until()
        while self.peek()[0] == "&&":
            self.advance()
            left = And(left, self.parse_until())
        return left

    def parse_until(self) -> Formula:
        left = self.parse_unary()
        token, _ = self.peek()
        if token == "U":
            self.advance()
            return Until(left, self.parse_until())
        if token == "R":
            self.advance()
            return Release(left, self.parse_until())
        return left

    def parse_unary(self) -> Formula:
        token, pos = self.peek()
        if token in _UNARY:
            self.advance()
            return _UNARY[token](self.parse_unary())
        if token == "(":
            self.advance()
            inner = self.parse_or()
            self.expect(")")
            return inner
        if token == "true":
            self.advance()
            return TRUE
        if token == "false":
            self.advance()
            return FALSE
        if token and token not in _KEYWORDS and token[0] not in "!()&|":
            self.advance()
            return Atom(token)
        shown = repr(token) if token else "end of input"
        raise LtlSyntaxError(f"expected a formula, found {shown}", pos)


def parse_formula(text: str) -> Formula:
    """Parse formula text into a syntax tree.

    Atoms match [A-Za-z_][A-Za-z0-9_]*; X U R F G true false are reserved.
    """
    return _Parser(text).parse()


def format_formula(f: Formula) -> str:
    """Render a formula as text that parses back to the same tree.

    Binary nodes are always parenthesized, so unary operators can be applied
    to the rendering of their operand without extra wrapping.
    """
    if isinstance(f, TrueBool):
        return "true"
    if isinstance(f, FalseBool):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return f"! {format_formula(f.operand)}"
    if isinstance(f, Next):
        return f"X {format_formula(f.operand)}"
    if isinstance(f, Eventually):
        return f"F {format_formula(f.operand)}"
    if isinstance(f, Always):
        return f"G {format_formula(f.operand)}"
    if isinstance(f, And):
        return f"({format_formula(f.left)} && {format_formula(f.right)})"
    if isinstance(f, Or):
        return f"({format_formula(f.left)} || {format_formula(f.right)})"
    if isinstance(f, Until):
        return f"({format_formula(f.left)} U {format_formula(f.right)})"
    if isinstance(f, Release):
        return f"({format_formula(f.left)} R {format_formula(f.right)})"
    raise TypeError(f"not a formula: {f!r}")


def atoms(f: Formula) -> frozenset:
    """Set of atomic proposition names appearing in the formula."""
    if isinstance(f, Atom):
        return frozenset([f.name])
    if isinstance(f, (TrueBool, FalseBool)):
        return frozenset()
    if isinstance(f, (Not, Next, Eventually, Always)):
        return atoms(f.operand)
    return atoms(f.left) | atoms(f.right)


def to_nnf(f: Formula) -> Formula:
    """Negation normal form: negation only on atoms, F/G rewritten to U/R."""
    return _nnf(f, negated=False)


def _nnf(f: Formula, negated: bool) -> Formula:
    if isinstance(f, TrueBool):
        return FALSE if negated else TRUE
    if isinstance(f, FalseBool):
        return TRUE if negated else FALSE
    if isinstance(f, Atom):
        return Not(f) if negated else f
    if isinstance(f, Not):
        return _nnf(f.operand, not negated)
    if isinstance(f, And):
        cls = Or if negated else And
        return cls(_nnf(f.left, negated), _nnf(f.right, negated))
    if isinstance(f, Or):
        cls = And if negated else Or
        return cls(_nnf(f.left, negated), _nnf(f.right, negated))
    if isinstance(f, Next):
        return Next(_nnf(f.operand, negated))
    if isinstance(f, Until):
        cls = Release if negated else Until
        return cls(_nnf(f.left, negated), _nnf(f.right, negated))
    if isinstance(f, Release):
        cls = Until if negated else Release
        return cls(_nnf(f.left, negated), _nnf(f.right, negated))
    if isinstance(f, Eventually):
        # F a == true U a, so the negation is false R (nnf of !a).
        if negated:
            return Release(FALSE, _nnf(f.operand, True))
        return Until(TRUE, _nnf(f.operand, False))
    if isinstance(f, Always):
        if negated:
            return Until(TRUE, _nnf(f.operand, True))
        return Release(FALSE, _nnf(f.operand, False))
    raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class LassoWord:
    """Infinite word prefix . suffix^omega over sets of proposition names."""

    prefix: Tuple[frozenset, ...]
    suffix: Tuple[frozenset, ...]

    def __post_init__(self):
        if len(self.suffix) == 0:
            raise ValueError("lasso suffix must be non-empty")
        for letter in self.prefix + self.suffix:
            if not isinstance(letter, frozenset):
                raise ValueError("lasso letters must be frozensets")

    @classmethod
    def of(cls, prefix, suffix) -> "LassoWord":
        """Build from any iterables of iterables of names."""
        return cls(
            tuple(frozenset(p) for p in prefix),
            tuple(frozenset(s) for s in suffix),
        )

    def letter(self, position: int) -> frozenset:
        if position < len(self.prefix):
            return self.prefix[position]
        return self.suffix[(position - len(self.prefix)) % len(self.suffix)]


def eval_lasso(f: Formula, word: LassoWord) -> bool:
    """Decide whether the infinite word satisfies the formula.

    Works on the finite quotient of the lasso: positions 0..N+L-1 where the
    last suffix position loops back to N. Until is a least fixpoint and
    Release a greatest fixpoint over that quotient, iterated to stability.
    """
    n_pre = len(word.prefix)
    total = n_pre + len(word.suffix)
    succ = [i + 1 for i in range(total)]
    succ[total - 1] = n_pre
    letters = [word.letter(i) for i in range(total)]
    cache: Dict[Formula, List[bool]] = {}

    def sat(g: Formula) -> List[bool]:
        hit = cache.get(g)
        if hit is not None:
            return hit
        if isinstance(g, TrueBool):
            out = [True] * total
        elif isinstance(g, FalseBool):
            out = [False] * total
        elif isinstance(g, Atom):
            out = [g.name in letters[i] for i in range(total)]
        elif isinstance(g, Not):
            inner = sat(g.operand)
            out = [not v for v in inner]
        elif isinstance(g, And):
            a, b = sat(g.left), sat(g.right)
            out = [a[i] and b[i] for i in range(total)]
        elif isinstance(g, Or):
            a, b = sat(g.left), sat(g.right)
            out = [a[i] or b[i] for i in range(total)]
        elif isinstance(g, Next):
            inner = sat(g.operand)
            out = [inner[succ[i]] for i in range(total)]
        elif isinstance(g, Until):
            out = _fix_until(sat(g.left), sat(g.right), succ)
        elif isinstance(g, Release):
            out = _fix_release(sat(g.left), sat(g.right), succ)
        elif isinstance(g, Eventually):
            out = _fix_until([True] * total, sat(g.operand), succ)
        elif isinstance(g, Always):
            out = _fix_release([False] * total, sat(g.operand), succ)
        else:
            raise TypeError(f"not a formula: {g!r}")
        cache[g] = out
        return out

    return sat(f)[0]


def _fix_until(hold: List[bool], goal: List[bool], succ: List[int]) -> List[bool]:
    current = list(goal)
    while True:
        updated = [goal[i] or (hold[i] and current[succ[i]]) for i in range(len(succ))]
        if updated == current:
            return current
        current = updated


def _fix_release(release: List[bool], keep: List[bool], succ: List[int]) -> List[bool]:
    current = list(keep)
    while True:
        updated = [keep[i] and (release[i] or current[succ[i]]) for i in range(len(succ))]
        if updated == current:
            return current
        current = updated
