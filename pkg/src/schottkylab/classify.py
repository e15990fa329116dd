"""Finite-depth classification of limit points given by symbol sequences.

The recurrence checker is a semi-decision: failure to find a block again by
depth D proves nothing by itself.  For the structured families with strictly
growing runs the checker is upgraded to a decision by a run-length
certificate.  The conical probe measures how far the orbit of the basepoint
strays from the ray toward the limit point, entirely in pulled-back frames
so arbitrary depths stay numerically sane.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .coding import decode
from .errors import InvalidArgumentError
from .group import INVERSE, SchottkyGroup
from .hyperbolic import distance_origin_to_ray
from .sequences import FamilySpec, SymbolicSequence

CONICAL_THRESHOLD = 5.0


@dataclass(frozen=True)
class RecurrenceVerdict:
    """Whether the block x_N ... x_{N+k} reappears by depth D (1-based indices)."""

    block_start: int
    window: int
    depth: int
    block: str
    positions: tuple[int, ...]  # every m > N with x_{N+i} = x_{m+i}, 0 <= i <= k

    @property
    def recurs(self) -> bool:
        return bool(self.positions)

    @property
    def outcome(self) -> str:
        return "recurs-at" if self.recurs else "no-recurrence-found"

    def to_json_dict(self) -> dict:
        return {
            "block_start": self.block_start,
            "window": self.window,
            "depth": self.depth,
            "block": self.block,
            "outcome": self.outcome,
            "positions": list(self.positions),
        }


def check_controlled(
    seq: SymbolicSequence, block_start: int, max_window: int, depth: int
) -> list[RecurrenceVerdict]:
    """Recurrence verdicts for every window 1 <= k <= max_window.

    Indices are 1-based.  A verdict lists all positions m with
    block_start < m <= depth - k at which the block reappears.
    """
    if block_start < 1 or max_window < 1:
        raise InvalidArgumentError("block_start and max_window must be >= 1")
    if seq.is_finite and seq.length < depth:
        depth = seq.length
    if depth <= block_start + max_window:
        raise InvalidArgumentError("depth must exceed block_start + max_window")
    text = seq.prefix(depth)
    verdicts = []
    for k in range(1, max_window + 1):
        block = text[block_start - 1 : block_start + k]
        positions = []
        m = text.find(block, block_start)
        while m != -1:
            positions.append(m + 1)
            m = text.find(block, m + 1)
        v = RecurrenceVerdict(block_start, k, depth, block, tuple(positions))
        _verify_positions(text, v)
        verdicts.append(v)
    return verdicts


def _verify_positions(text: str, v: RecurrenceVerdict) -> None:
    for m in v.positions:
        for i in range(v.window + 1):
            if text[m - 1 + i] != v.block[i]:
                raise InvalidArgumentError(
                    f"verdict corrupt: position {m} does not reproduce the block"
                )


@dataclass(frozen=True)
class NonRecurrenceCertificate:
    """A block that provably never reappears, by strict run growth.

    The block is the first complete a-run (or A-run) flanked by its two b's;
    any later occurrence would need a later run of exactly the same length,
    but the family's run lengths strictly increase.
    """

    family: str
    block: str
    reason: str

    def verify(self, seq: SymbolicSequence, depth: int = 10_000) -> bool:
        text = seq.prefix(depth)
        return text.find(self.block, 1) == -1

    def to_json_dict(self) -> dict:
        return {"family": self.family, "block": self.block, "reason": self.reason}


def certify_family_nonrecurrence(spec: FamilySpec) -> Optional[NonRecurrenceCertificate]:
    """Certificate for thm42/thm43 specs with strictly increasing rules;
    None for literal and periodic specs (not applicable)."""
    if spec.kind not in ("thm42", "thm43"):
        return None
    rule = spec.rule1
    if rule.coef < 1:
        raise InvalidArgumentError("family rule is not strictly increasing")
    first_run = rule(1)
    block = "b" + "a" * first_run + "b"
    reason = (
        f"a-runs have lengths {rule.render()} for k = 1, 2, ...; the block needs a run of "
        f"exactly {first_run}, and every run after the first is strictly longer"
    )
    return NonRecurrenceCertificate(spec.render(), block, reason)


@dataclass(frozen=True)
class ConicalProbe:
    """Distances from the orbit of 0 along the sequence to the ray toward p."""

    distances: tuple[float, ...]
    tail_minima: tuple[float, ...]  # tail_minima[n] = min(distances[n:])
    threshold: float
    summary: str  # bounded-evidence | unbounded-evidence

    @property
    def bounded_evidence(self) -> bool:
        return self.summary == "bounded-evidence"

    def to_json_dict(self) -> dict:
        return {
            "depth": len(self.distances),
            "threshold": self.threshold,
            "summary": self.summary,
            "max_distance": max(self.distances),
            "last_quartile_min": min(self.distances[3 * len(self.distances) // 4 :]),
        }


def conical_probe(
    group: SchottkyGroup,
    seq: SymbolicSequence,
    depth: int,
    threshold: float = CONICAL_THRESHOLD,
) -> ConicalProbe:
    """distance(word(x_1..x_n)(0), ray 0 -> p) for n = 1..depth.

    Computed as distance(0, pulled-back ray): the basepoint pulls back through
    the inverse prefix (kept projectively normalized) and the ray endpoint
    pulls back to the decode of the shifted sequence, which is an order-one
    computation at every depth.
    """
    if depth < 2:
        raise InvalidArgumentError("depth must be >= 2")
    if seq.is_finite:
        raise InvalidArgumentError("conical probe needs an infinite sequence")
    inv_a, inv_b = 1.0 + 0j, 0j
    inv_c, inv_d = 0j, 1.0 + 0j
    distances = []
    for n in range(1, depth + 1):
        x = seq.symbol_at(n - 1)
        g = group.maps[INVERSE[x]]
        inv_a, inv_b, inv_c, inv_d = (
            g.m11 * inv_a + g.m12 * inv_c,
            g.m11 * inv_b + g.m12 * inv_d,
            g.m21 * inv_a + g.m22 * inv_c,
            g.m21 * inv_b + g.m22 * inv_d,
        )
        s = max(abs(inv_a), abs(inv_b), abs(inv_c), abs(inv_d))
        inv_a, inv_b, inv_c, inv_d = inv_a / s, inv_b / s, inv_c / s, inv_d / s
        q = inv_b / inv_d  # pulled-back basepoint
        u = decode(group, seq.shift(n), epsilon=1e-12).point
        distances.append(distance_origin_to_ray(q, u.angle))
    tail = []
    running = math.inf
    for d in reversed(distances):
        running = min(running, d)
        tail.append(running)
    tail.reverse()
    quart = distances[3 * len(distances) // 4 :]
    summary = "bounded-evidence" if min(quart) < threshold else "unbounded-evidence"
    return ConicalProbe(tuple(distances), tuple(tail), threshold, summary)


def per_run_maxima(spec: FamilySpec, distances: tuple[float, ...], runs: int) -> list[float]:
    """Max probe distance within each of the first `runs` letter runs.

    Run boundaries come from the family's own run structure; run j covers the
    crossings strictly after the j-th first-letter crossing up to and
    including the (j+1)-th.
    """
    seq = spec.sequence()
    first = seq.symbol_at(0)
    marks = [i + 1 for i in range(len(distances)) if seq.symbol_at(i) == first]
    out = []
    for j in range(min(runs, len(marks) - 1)):
        lo, hi = marks[j], marks[j + 1]
        out.append(max(distances[lo - 1 : hi]))
    return out


class Evidence(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE_CERTIFIED = "negative-certified"
    NEGATIVE_EVIDENCE = "negative-evidence"
    UNKNOWN = "unknown"


CHAIN = ("controlled", "concentration", "separation", "conical")


@dataclass(frozen=True)
class SequenceVerdicts:
    sequence_text: str
    controlled: Evidence = Evidence.UNKNOWN
    concentration: Evidence = Evidence.UNKNOWN
    separation: Evidence = Evidence.UNKNOWN
    conical: Evidence = Evidence.UNKNOWN

    def stage(self, name: str) -> Evidence:
        return getattr(self, name)


@dataclass(frozen=True)
class HierarchyViolation:
    sequence_text: str
    upstream: str
    downstream: str
    severity: str  # certified | evidence

    def to_json_dict(self) -> dict:
        return {
            "sequence": self.sequence_text,
            "upstream": self.upstream,
            "downstream": self.downstream,
            "severity": self.severity,
        }


@dataclass(frozen=True)
class HierarchyReport:
    violations: tuple[HierarchyViolation, ...]
    checked: int

    def to_json_dict(self) -> dict:
        return {
            "checked": self.checked,
            "violations": [v.to_json_dict() for v in self.violations],
        }


def hierarchy_check(entries: list[SequenceVerdicts]) -> HierarchyReport:
    """Flag evidence against controlled => concentration => separation => conical.

    A positive witness upstream combined with a certified negative downstream
    is a hard violation; combined with a mere negative-evidence verdict it is
    still flagged (severity "evidence") since the implication chain leaves no
    room for it.
    """
    violations = []
    for entry in entries:
        for i in range(len(CHAIN) - 1):
            up, down = CHAIN[i], CHAIN[i + 1]
            if entry.stage(up) is not Evidence.POSITIVE:
                continue
            downstream = entry.stage(down)
            if downstream is Evidence.NEGATIVE_CERTIFIED:
                violations.append(HierarchyViolation(entry.sequence_text, up, down, "certified"))
            elif downstream is Evidence.NEGATIVE_EVIDENCE:
                violations.append(HierarchyViolation(entry.sequence_text, up, down, "evidence"))
    return HierarchyReport(tuple(violations), len(entries))
