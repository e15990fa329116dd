"""The two-generator Schottky group and its reduced-word combinatorics.

Four congruent circles orthogonal to the unit circle sit at centers c, -c,
ic, -ic with common Euclidean radius r and c = sqrt(1 + r^2).  The generator
g_a = (cz + 1)/(z + c) preserves the real axis and carries the circle at -c
onto the circle at +c (exterior to interior); g_b is its conjugate by a
quarter turn and pairs the imaginary-axis circles the same way.

Letters: 'a', 'b' are the generators, 'A', 'B' their inverses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .errors import ConfigurationRejectedError, InvalidArgumentError
from .hyperbolic import (
    Arc,
    BoundaryPoint,
    Geodesic,
    MoebiusMap,
    OrthoCircle,
    apply_circle,
)

LETTERS = ("a", "A", "b", "B")
INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}
LETTER_INDEX = {x: i for i, x in enumerate(LETTERS)}
# successor letters in enumeration order, skipping the inverse
ALLOWED_NEXT = {x: tuple(y for y in LETTERS if y != INVERSE[x]) for x in LETTERS}


def is_reduced(word: str) -> bool:
    return all(x in LETTER_INDEX for x in word) and not any(
        INVERSE[word[i]] == word[i + 1] for i in range(len(word) - 1)
    )


def validate_word(word: str) -> None:
    for i, x in enumerate(word):
        if x not in LETTER_INDEX:
            raise InvalidArgumentError(f"unknown letter {x!r} at index {i}")
    for i in range(len(word) - 1):
        if INVERSE[word[i]] == word[i + 1]:
            raise InvalidArgumentError(
                f"word not reduced: forbidden pair {word[i]}{word[i + 1]} at index {i}"
            )


def invert_word(word: str) -> str:
    return "".join(INVERSE[x] for x in reversed(word))


def reduce_concat(w1: str, w2: str) -> str:
    """Free reduction of the concatenation of two reduced words."""
    left = list(w1)
    i = 0
    while left and i < len(w2) and left[-1] == INVERSE[w2[i]]:
        left.pop()
        i += 1
    return "".join(left) + w2[i:]


def enumerate_words(max_len: int, first_letters: tuple[str, ...] = LETTERS) -> Iterator[str]:
    """All nonempty reduced words of length <= max_len, shortest first and
    lexicographic (a < A < b < B) within each length."""
    if max_len < 1:
        raise InvalidArgumentError("max_len must be >= 1")
    level = [x for x in first_letters]
    yield from level
    for _ in range(max_len - 1):
        nxt = []
        for w in level:
            for y in ALLOWED_NEXT[w[-1]]:
                nxt.append(w + y)
        yield from nxt
        level = nxt


def word_count(max_len: int) -> int:
    """Number of nonempty reduced words of length <= max_len: 2*(3^L - 1)."""
    return 4 * (3**max_len - 1) // 2


class SchottkyGroup:
    """Immutable bundle of circles, generator maps and labeled geodesics."""

    def __init__(self, radius: float = 0.8):
        if not radius > 0.0:
            raise ConfigurationRejectedError(f"r > 0 violated: r={radius!r}")
        c = math.sqrt(1.0 + radius * radius)
        adjacent = c * math.sqrt(2.0)
        # strict disjointness: tangent circles (r = 1) are rejected too
        if not adjacent > 2.0 * radius + 1e-9:
            raise ConfigurationRejectedError(
                f"c*sqrt(2) > 2*r violated: c*sqrt(2)={adjacent!r} <= 2*r={2.0 * radius!r}"
            )
        if not 2.0 * c > 2.0 * radius + 1e-9:
            raise ConfigurationRejectedError(
                f"2*c > 2*r violated: 2*c={2.0 * c!r} <= 2*r={2.0 * radius!r}"
            )
        self.radius = radius
        self.center_dist = c
        self.circles = {
            "a": OrthoCircle(complex(c, 0.0), radius),
            "A": OrthoCircle(complex(-c, 0.0), radius),
            "b": OrthoCircle(complex(0.0, c), radius),
            "B": OrthoCircle(complex(0.0, -c), radius),
        }
        r = radius
        ga = MoebiusMap(c / r, 1.0 / r, 1.0 / r, c / r)
        gb = MoebiusMap(c / r, 1j / r, -1j / r, c / r)
        self.maps = {"a": ga, "A": ga.inverse(), "b": gb, "B": gb.inverse()}
        self.arcs = {x: self.circles[x].boundary_arc() for x in LETTERS}
        # positive side of the geodesic under circle 'a' is the inside of that
        # circle; the primed geodesics inherit their side through g_a^{-1}, g_b^{-1}
        geod_a = Geodesic(
            BoundaryPoint(self.arcs["a"].start), BoundaryPoint(self.arcs["a"].end), True
        )
        geod_b = Geodesic(
            BoundaryPoint(self.arcs["b"].start), BoundaryPoint(self.arcs["b"].end), True
        )
        self.geodesics = {
            "a": geod_a,
            "b": geod_b,
            "A": geod_a.transform(self.maps["A"]),
            "B": geod_b.transform(self.maps["B"]),
        }
        self._span_cache: list[float] = []
        self._ratio_max = 0.0

    @classmethod
    def from_config(cls, config: dict) -> "SchottkyGroup":
        if not isinstance(config, dict) or "radius" not in config:
            raise InvalidArgumentError('config must be a JSON object like {"radius": 0.8}')
        radius = config["radius"]
        if not isinstance(radius, (int, float)) or isinstance(radius, bool):
            raise InvalidArgumentError(f"radius must be a number, got {radius!r}")
        return cls(float(radius))

    def word_to_map(self, word: str) -> MoebiusMap:
        """Left-to-right composition: word 'xy' acts as g_x(g_y(z))."""
        validate_word(word)
        m = MoebiusMap.identity()
        for x in word:
            m = m.compose(self.maps[x])
        return m

    def translate_geodesic(self, word: str, g: Geodesic) -> Geodesic:
        return g.transform(self.word_to_map(word))

    def nested_arc(self, word: str) -> Arc:
        """Boundary arc of the circle (x_1...x_{n-1})(circle of x_n).

        For a reduced word these arcs nest strictly: the arc of a word lies
        inside the arc of every proper prefix extension stage.
        """
        validate_word(word)
        if not word:
            raise InvalidArgumentError("nested_arc needs a nonempty word")
        m = self.word_to_map(word[:-1])
        return m.apply_arc(self.arcs[word[-1]])

    def nested_circle(self, word: str) -> OrthoCircle:
        validate_word(word)
        if not word:
            raise InvalidArgumentError("nested_circle needs a nonempty word")
        return apply_circle(self.word_to_map(word[:-1]), self.circles[word[-1]])

    def in_fundamental_domain(self, z: complex) -> bool:
        """Interior of the disc, exterior of all four circles."""
        if abs(z) >= 1.0:
            return False
        return all(not self.circles[x].contains(z) for x in LETTERS)

    # -- contraction bookkeeping (used by the pruned word scan) --

    def max_arc_span(self, depth: int) -> float:
        """Upper bound for the span of any depth-`depth` nested arc.

        Depths up to 6 are computed exactly by breadth-first search; beyond
        that the exact level-6 maximum is decayed by the worst parent-child
        span ratio ever observed, padded by 5 percent.
        """
        if depth < 1:
            return 2.0 * math.pi
        self._fill_span_cache()
        exact = self._span_cache
        if depth <= len(exact):
            return exact[depth - 1]
        lam = min(1.0, self.lambda_max() * 1.05)
        return exact[-1] * lam ** (depth - len(exact))

    def lambda_max(self) -> float:
        """Worst parent-to-child nested-arc span ratio over the first levels."""
        self._fill_span_cache()
        return self._ratio_max

    def _fill_span_cache(self, depth: int = 6) -> None:
        if self._span_cache:
            return
        spans: list[float] = []
        ratio_max = 0.0
        level = [(MoebiusMap.identity(), None, None)]
        for _ in range(depth):
            worst = 0.0
            nxt = []
            for m, last, parent_span in level:
                letters = LETTERS if last is None else ALLOWED_NEXT[last]
                for y in letters:
                    span = m.apply_arc(self.arcs[y]).span
                    worst = max(worst, span)
                    if parent_span is not None:
                        ratio_max = max(ratio_max, span / parent_span)
                    nxt.append((m.compose(self.maps[y]), y, span))
            spans.append(worst)
            level = nxt
        self._span_cache = spans
        self._ratio_max = ratio_max


def build_group(radius: float = 0.8) -> SchottkyGroup:
    """Construct the group; rejects radii whose circles meet."""
    return SchottkyGroup(radius)
