"""Symbolic sequences over {a, A, b, B} and the small input DSL.

Grammar (whitespace is ignored between tokens):

    spec     = literal | family ;
    literal  = term { term } ;
    term     = symbol [ "^" integer ] ;
    symbol   = "a" | "A" | "b" | "B" ;            A and B are the inverses
    family   = "periodic(" literal ")"
             | "thm42(" rule "," rule ")"
             | "thm43(" rule ")" ;
    rule     = affine expression in k, nonnegative integer coefficients
               ("k", "2k", "2k+1", "k+3", ...), k-coefficient >= 1 ;

thm43(rule) expands to  b a^rule(1) b a^rule(2) b ...
thm42(r1, r2) expands to  b a^r1(1) b A^r2(1) b a^r1(2) b A^r2(2) ...
"""

from __future__ import annotations

import bisect
import itertools
import re
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import DSLSyntaxError, InvalidArgumentError
from .group import INVERSE, LETTER_INDEX

SYMBOLS = ("a", "A", "b", "B")


class SymbolicSequence:
    """A reduced finite or infinite symbol sequence, materialized lazily.

    `fn(i)` must be a pure function of the 0-based index.  Prefixes are cached
    and checked for forbidden adjacent pairs as they materialize.
    """

    def __init__(self, fn: Callable[[int], str], length: Optional[int] = None, text: str = ""):
        self._fn = fn
        self.length = length
        self.text = text
        self._cache: list[str] = []

    @classmethod
    def from_word(cls, word: str) -> "SymbolicSequence":
        for i in range(len(word) - 1):
            if INVERSE.get(word[i]) == word[i + 1]:
                raise InvalidArgumentError(
                    f"word not reduced: forbidden pair {word[i]}{word[i + 1]} at index {i}"
                )
        return cls(lambda i: word[i], len(word), text=word)

    @classmethod
    def periodic(cls, word: str) -> "SymbolicSequence":
        n = len(word)
        return cls(lambda i: word[i % n], None, text=f"periodic({word})")

    @property
    def is_finite(self) -> bool:
        return self.length is not None

    def symbol_at(self, i: int) -> str:
        if i < 0 or (self.length is not None and i >= self.length):
            raise InvalidArgumentError(f"index {i} out of range")
        cache = self._cache
        while len(cache) <= i:
            j = len(cache)
            x = self._fn(j)
            if x not in LETTER_INDEX:
                raise InvalidArgumentError(f"sequence produced unknown symbol {x!r} at index {j}")
            if cache and INVERSE[cache[-1]] == x:
                raise InvalidArgumentError(
                    f"sequence not reduced: forbidden pair {cache[-1]}{x} at index {j - 1}"
                )
            cache.append(x)
        return cache[i]

    def __getitem__(self, i: int) -> str:
        return self.symbol_at(i)

    def prefix(self, n: int) -> str:
        if self.length is not None and n > self.length:
            raise InvalidArgumentError(
                f"prefix length {n} exceeds sequence length {self.length}"
            )
        if n <= 0:
            return ""
        self.symbol_at(n - 1)
        return "".join(self._cache[:n])

    def shift(self, m: int = 1) -> "SymbolicSequence":
        if m < 0:
            raise InvalidArgumentError("shift must be nonnegative")
        if self.length is not None and self.length - m <= 0:
            raise InvalidArgumentError("cannot shift an exhausted finite sequence")
        length = None if self.length is None else self.length - m
        return SymbolicSequence(
            lambda i: self.symbol_at(i + m), length, text=f"shift^{m}({self.text})"
        )

    def __repr__(self):
        return f"SymbolicSequence({self.text or '<fn>'})"


def shift(s: SymbolicSequence) -> SymbolicSequence:
    """Drop the first symbol."""
    return s.shift(1)


@dataclass(frozen=True)
class AffineRule:
    """k -> coef*k + const with coef >= 1, so run lengths strictly increase."""

    coef: int
    const: int

    def __call__(self, k: int) -> int:
        return self.coef * k + self.const

    def render(self) -> str:
        head = "k" if self.coef == 1 else f"{self.coef}k"
        return head if self.const == 0 else f"{head}+{self.const}"


@dataclass(frozen=True)
class FamilySpec:
    """Parsed DSL input: a literal word or one of the named families."""

    kind: str  # literal | periodic | thm42 | thm43
    word: Optional[str] = None
    rule1: Optional[AffineRule] = None
    rule2: Optional[AffineRule] = None

    def render(self) -> str:
        if self.kind == "literal":
            return _render_word(self.word)
        if self.kind == "periodic":
            return f"periodic({_render_word(self.word)})"
        if self.kind == "thm43":
            return f"thm43({self.rule1.render()})"
        return f"thm42({self.rule1.render()},{self.rule2.render()})"

    def sequence(self) -> SymbolicSequence:
        if self.kind == "literal":
            s = SymbolicSequence.from_word(self.word)
            s.text = self.render()
            return s
        if self.kind == "periodic":
            s = SymbolicSequence.periodic(self.word)
            s.text = self.render()
            return s
        runs = self.run_symbols()
        fn = _RunLookup(runs)
        return SymbolicSequence(fn, None, text=self.render())

    def run_symbols(self) -> Callable[[int], tuple[str, int]]:
        """Iterator factory over (symbol, run length): b 1, a^r..., b 1, ..."""
        if self.kind == "thm43":
            rule = self.rule1

            def gen():
                for k in itertools.count(1):
                    yield ("b", 1)
                    yield ("a", rule(k))

            return gen
        if self.kind == "thm42":
            r1, r2 = self.rule1, self.rule2

            def gen():
                for k in itertools.count(1):
                    yield ("b", 1)
                    yield ("a", r1(k))
                    yield ("b", 1)
                    yield ("A", r2(k))

            return gen
        raise InvalidArgumentError(f"{self.kind} spec has no run structure")

    def run_lengths(self, count: int) -> list[int]:
        """Lengths of the first `count` letter runs of the expansion."""
        if self.kind in ("thm42", "thm43"):
            gen = self.run_symbols()()
            return [n for _, n in itertools.islice(gen, count)]
        word = self.word if self.kind == "literal" else self.word * (count + 1)
        runs = [len(list(g)) for _, g in itertools.groupby(word)]
        return runs[:count]


class _RunLookup:
    """Index -> symbol through cached cumulative run boundaries."""

    def __init__(self, gen_factory):
        self._gen = gen_factory()
        self._bounds: list[int] = [0]
        self._syms: list[str] = []

    def __call__(self, i: int) -> str:
        while self._bounds[-1] <= i:
            sym, n = next(self._gen)
            self._syms.append(sym)
            self._bounds.append(self._bounds[-1] + n)
        j = bisect.bisect_right(self._bounds, i) - 1
        return self._syms[j]


def _render_word(word: str) -> str:
    out = []
    for sym, grp in itertools.groupby(word):
        n = len(list(grp))
        out.append(sym if n == 1 else f"{sym}^{n}")
    return "".join(out)


_TOKEN_FAMILY = re.compile(r"(periodic|thm42|thm43)\(")
_TOKEN_TERM = re.compile(r"([aAbB])(?:\s*\^\s*(\d+))?")
_TOKEN_RULE = re.compile(r"(?:(\d+)\s*)?k(?:\s*\+\s*(\d+))?")


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _parse_literal(text: str, pos: int, stop: str = "") -> tuple[str, int]:
    out = []
    pos = _skip_ws(text, pos)
    while pos < len(text) and (not stop or text[pos] not in stop):
        m = _TOKEN_TERM.match(text, pos)
        if not m:
            raise DSLSyntaxError(f"expected symbol a/A/b/B, found {text[pos]!r}", pos)
        sym, exp = m.group(1), m.group(2)
        n = int(exp) if exp else 1
        if n < 1:
            raise DSLSyntaxError("exponent must be a positive integer", pos)
        out.append(sym * n)
        pos = _skip_ws(text, m.end())
    word = "".join(out)
    if not word:
        raise DSLSyntaxError("empty literal", pos)
    return word, pos


def _check_reduced(word: str, origin: int, wrap: bool = False) -> None:
    for i in range(len(word) - 1):
        if INVERSE[word[i]] == word[i + 1]:
            raise DSLSyntaxError(
                f"non-reduced expansion: {word[i]}{word[i + 1]} at expansion index {i}", origin
            )
    if wrap and len(word) >= 1 and INVERSE[word[-1]] == word[0]:
        raise DSLSyntaxError(
            f"non-reduced periodic wrap: {word[-1]}{word[0]} at expansion index {len(word) - 1}",
            origin,
        )


def _parse_rule(text: str, pos: int) -> tuple[AffineRule, int]:
    pos = _skip_ws(text, pos)
    m = _TOKEN_RULE.match(text, pos)
    if not m:
        raise DSLSyntaxError("expected affine rule in k such as 'k', '2k', '2k+1'", pos)
    coef = int(m.group(1)) if m.group(1) else 1
    const = int(m.group(2)) if m.group(2) else 0
    if coef < 1:
        raise DSLSyntaxError("rule must be strictly increasing: k-coefficient must be >= 1", pos)
    return AffineRule(coef, const), _skip_ws(text, m.end())


def _expect(text: str, pos: int, ch: str) -> int:
    pos = _skip_ws(text, pos)
    if pos >= len(text) or text[pos] != ch:
        found = text[pos] if pos < len(text) else "end of input"
        raise DSLSyntaxError(f"expected {ch!r}, found {found!r}", pos)
    return pos + 1


def parse_family(text: str) -> FamilySpec:
    """Parse a sequence spec; raises DSLSyntaxError with a position on failure."""
    if not isinstance(text, str):
        raise DSLSyntaxError("input must be a string", 0)
    pos = _skip_ws(text, 0)
    m = _TOKEN_FAMILY.match(text, pos)
    if m:
        name = m.group(1)
        inner = m.end()
        if name == "periodic":
            word, p = _parse_literal(text, inner, stop=")")
            p = _expect(text, p, ")")
            _check_reduced(word, inner, wrap=True)
            spec = FamilySpec("periodic", word=word)
        elif name == "thm43":
            rule, p = _parse_rule(text, inner)
            p = _expect(text, p, ")")
            spec = FamilySpec("thm43", rule1=rule)
        else:
            r1, p = _parse_rule(text, inner)
            p = _expect(text, p, ",")
            r2, p = _parse_rule(text, p)
            p = _expect(text, p, ")")
            spec = FamilySpec("thm42", rule1=r1, rule2=r2)
        p = _skip_ws(text, p)
        if p != len(text):
            raise DSLSyntaxError(f"trailing input {text[p:]!r}", p)
        return spec
    word, p = _parse_literal(text, pos)
    if p != len(text):
        raise DSLSyntaxError(f"trailing input {text[p:]!r}", p)
    _check_reduced(word, pos)
    return FamilySpec("literal", word=word)
