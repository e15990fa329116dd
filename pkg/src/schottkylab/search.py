"""Depth-limited witness searches over the group.

A witness search scans reduced words in length-then-lexicographic order
(alphabet a < A < b < B, the identity first) and returns the first word whose
image data satisfies the task's containments, or an exhaustion certificate.
The scan is a breadth-first sweep over numpy arrays of matrices, one level
per word length, so exhaustive runs to length 12-14 stay cheap.

Optional sound pruning: once the nested arc of a prefix no longer meets the
padded target arc, every long continuation of that prefix maps the bulk of
the test set into that nested arc and can never satisfy the containments.
Short continuations can still escape through the exceptional preimage of the
final letter's partner arc, whose angular size shrinks geometrically with
the remaining length, so a dying branch is kept alive just long enough to
cover them.  Witnesses are re-verified scalar-side, independently of the
scan, before they are reported.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .coding import decode
from .errors import InvalidArgumentError
from .group import INVERSE, LETTER_INDEX, LETTERS, SchottkyGroup
from .hyperbolic import TAU, Arc, BoundaryPoint, Geodesic, ccw_span
from .sequences import SymbolicSequence

ACCEPT_MARGIN = -1e-10  # containments may touch the boundary within 1e-10
_WRAP_PAD = 1e-7  # window for reading tiny negative offsets across the 0/2pi seam

_INV_IDX = np.array([LETTER_INDEX[INVERSE[x]] for x in LETTERS], dtype=np.int8)
_RANK = np.full((4, 4), -1, dtype=np.int8)
for _l, _x in enumerate(LETTERS):
    _r = 0
    for _y, _ly in enumerate(LETTERS):
        if _ly != INVERSE[_x]:
            _RANK[_l, _y] = _r
            _r += 1


def signed_ccw(ref: float, x: float) -> float:
    """ccw offset from ref to x in [-_WRAP_PAD, 2*pi - _WRAP_PAD).

    Angles a hair clockwise of ref read as small negatives instead of 2*pi,
    so boundary-touching containments keep honest signed margins.
    """
    d = math.fmod(x - ref + _WRAP_PAD, TAU)
    if d < 0.0:
        d += TAU
    return d - _WRAP_PAD


def membership_margin(arc: Arc, theta: float) -> float:
    """Signed depth of an angle inside an arc (negative outside)."""
    d = signed_ccw(arc.start, theta)
    if 0.0 <= d <= arc.span:
        return min(d, arc.span - d)
    if d < 0.0:
        return d
    return -min(d - arc.span, TAU - d)


def containment_margin(outer: Arc, inner: Arc) -> float:
    """Signed margin of inner inside outer (negative when it pokes out)."""
    d0 = signed_ccw(outer.start, inner.start)
    return min(d0, outer.span - d0 - inner.span)


@dataclass(frozen=True)
class ScanOutcome:
    word: Optional[str]
    examined: int


def _keepalive(group: SchottkyGroup, needed_span: float) -> int:
    """Levels a dying branch must survive: continuations of length l can only
    matter while the depth-l arc bound still reaches needed_span."""
    keep = 0
    for ell in range(1, 64):
        if group.max_arc_span(ell) >= needed_span - 1e-12:
            keep = ell
        else:
            break
    return keep + 1  # safety level


def _gen_matrices(group: SchottkyGroup) -> np.ndarray:
    g = np.empty((4, 2, 2), dtype=np.complex128)
    for i, x in enumerate(LETTERS):
        m = group.maps[x]
        g[i] = [[m.m11, m.m12], [m.m21, m.m22]]
    return g


def _apply_angles(mats: np.ndarray, angles: np.ndarray) -> np.ndarray:
    u = np.exp(1j * angles)
    num = mats[:, 0, 0, None] * u + mats[:, 0, 1, None]
    den = mats[:, 1, 0, None] * u + mats[:, 1, 1, None]
    return np.mod(np.angle(num / den), TAU)


def scan_words(
    group: SchottkyGroup,
    max_len: int,
    probe_angles: list[float],
    predicate: Callable[[np.ndarray], np.ndarray],
    verify: Callable[[str], bool],
    prune_arc: Optional[Arc] = None,
    prune_span: float = 0.0,
    first_letters: tuple[str, ...] = LETTERS,
    include_identity: bool = True,
) -> ScanOutcome:
    """First word (length-lex order) passing predicate and verify.

    predicate maps an (N, k) array of image angles of the probe angles to a
    boolean mask; verify re-checks a candidate word scalar-side.  With
    prune_arc set, branches whose nested arc stops meeting the padded target
    are dropped once continuations shorter than the keepalive horizon are
    exhausted; prune_span is the angular size the exceptional escape would
    need to cover (span of U, or the endpoint gap for separation tasks).
    """
    probes = np.asarray(probe_angles, dtype=np.float64)
    examined = 0
    if include_identity:
        examined += 1
        mask = predicate(probes[None, :])
        if bool(mask[0]) and verify(""):
            return ScanOutcome("", examined)

    gens = _gen_matrices(group)
    pruning = prune_arc is not None
    if pruning:
        keep_budget = _keepalive(group, prune_span)
        pad = 1e-9
        pstart, pspan = prune_arc.start, prune_arc.span
        base_arcs = np.array(
            [[group.arcs[x].start, group.arcs[x].end] for x in LETTERS], dtype=np.float64
        )

    # level 1
    first_idx = np.array([LETTER_INDEX[x] for x in first_letters], dtype=np.int64)
    mats = gens[first_idx].copy()
    last = first_idx.astype(np.int8)
    letters = last.copy()
    parents = np.full(len(first_idx), -1, dtype=np.int64)
    if pruning:
        ttl = np.full(len(first_idx), keep_budget, dtype=np.int16)
        arcs_now = base_arcs[first_idx]
        alive = _arc_overlap(arcs_now, pstart, pspan, pad)
        ttl[~alive] = keep_budget - 1
        keep = ttl >= 0
        mats, last, letters, parents, ttl = (
            mats[keep], last[keep], letters[keep], parents[keep], ttl[keep]
        )
    history = [(letters.copy(), parents.copy())]

    def reconstruct(level: int, idx: int) -> str:
        out = []
        for lev in range(level, 0, -1):
            lets, pars = history[lev - 1]
            out.append(LETTERS[lets[idx]])
            idx = pars[idx]
        return "".join(reversed(out))

    level = 1
    while True:
        if len(mats) == 0:
            return ScanOutcome(None, examined)
        examined += len(mats)
        imgs = _apply_angles(mats, probes)
        mask = predicate(imgs)
        if mask.any():
            for idx in np.flatnonzero(mask):
                word = reconstruct(level, int(idx))
                if verify(word):
                    return ScanOutcome(word, examined)
        if level == max_len:
            return ScanOutcome(None, examined)
        # children, in lexicographic order: slot = 3*parent + rank(letter)
        n = len(mats)
        cm = np.empty((3 * n, 2, 2), dtype=np.complex128)
        clast = np.empty(3 * n, dtype=np.int8)
        cletter = np.empty(3 * n, dtype=np.int8)
        cparent = np.empty(3 * n, dtype=np.int64)
        if pruning:
            cttl = np.empty(3 * n, dtype=np.int16)
            carcs = np.empty((3 * n, 2), dtype=np.float64)
        base = 3 * np.arange(n, dtype=np.int64)
        for iy in range(4):
            sel = np.flatnonzero(last != _INV_IDX[iy])
            if len(sel) == 0:
                continue
            slots = base[sel] + _RANK[last[sel], iy]
            cm[slots] = mats[sel] @ gens[iy]
            clast[slots] = iy
            cletter[slots] = iy
            cparent[slots] = sel
            if pruning:
                ends = _apply_angles(mats[sel], base_arcs[iy])
                carcs[slots] = ends
        if pruning:
            alive = _arc_overlap(carcs, pstart, pspan, pad)
            cttl = np.where(alive, keep_budget, ttl[cparent] - 1).astype(np.int16)
            keep = cttl >= 0
            cm, clast, cletter, cparent, cttl = (
                cm[keep], clast[keep], cletter[keep], cparent[keep], cttl[keep]
            )
            ttl = cttl
        mats, last = cm, clast
        history.append((cletter.copy(), cparent.copy()))
        level += 1


def _arc_overlap(arcs: np.ndarray, tstart: float, tspan: float, pad: float) -> np.ndarray:
    """Rows (start, end) of ccw arcs vs the fixed arc (tstart, tspan), padded."""
    s = arcs[:, 0]
    spans = np.mod(arcs[:, 1] - s, TAU)
    d1 = np.mod(tstart - pad - s, TAU)
    d2 = np.mod(s - tstart + pad, TAU)
    return (d1 < spans + 2 * pad) | (d2 < tspan + 2 * pad)


def scan_words_parallel(
    group: SchottkyGroup,
    max_len: int,
    probe_angles: list[float],
    predicate,
    verify,
    prune_arc: Optional[Arc] = None,
    prune_span: float = 0.0,
) -> ScanOutcome:
    """Partition the scan by first letter; merge to the length-lex minimum.

    Returns exactly the serial result: each partition yields its own first
    hit, and the minimum over partitions under (length, first-letter rank,
    in-level position) is the global minimum.  The identity is checked once
    up front.
    """
    probes = np.asarray(probe_angles, dtype=np.float64)
    examined = 1
    if bool(predicate(probes[None, :])[0]) and verify(""):
        return ScanOutcome("", examined)

    def run_one(letter: str) -> ScanOutcome:
        return scan_words(
            group, max_len, probe_angles, predicate, verify,
            prune_arc=prune_arc, prune_span=prune_span,
            first_letters=(letter,), include_identity=False,
        )

    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(run_one, LETTERS))
    best = None
    for letter, res in zip(LETTERS, results):
        examined += res.examined
        if res.word is not None:
            key = (len(res.word), LETTER_INDEX[letter])
            if best is None or key < best[0]:
                best = (key, res.word)
    return ScanOutcome(best[1] if best else None, examined)


@dataclass(frozen=True)
class ConcentrationTask:
    """Can U be concentrated into V at p (optionally with control)?"""

    p: BoundaryPoint
    u: Arc
    v: Arc
    control: bool = False
    max_len: int = 12
    sequence_text: str = ""

    def __post_init__(self):
        if not self.u.contains_point(self.p):
            raise InvalidArgumentError("task invalid: p must lie in U")
        if not self.v.contains_point(self.p):
            raise InvalidArgumentError("task invalid: p must lie in V")
        if self.max_len < 1:
            raise InvalidArgumentError("max_len must be >= 1")


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of a depth-limited search, with re-verified containments."""

    kind: str  # concentration | separation | controlled-chain
    outcome: str  # witness | exhausted
    word: Optional[str]
    max_len: int
    words_examined: int
    verification: dict = field(default_factory=dict)
    direction: Optional[str] = None  # separation: left-to-right | right-to-left
    match_position: Optional[int] = None  # controlled-chain: the index m

    @property
    def found(self) -> bool:
        return self.outcome == "witness"

    def to_json_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "outcome": self.outcome,
            "word": self.word,
            "max_len": self.max_len,
            "words_examined": self.words_examined,
            "verification": dict(sorted(self.verification.items())),
        }
        if self.direction is not None:
            out["direction"] = self.direction
        if self.match_position is not None:
            out["match_position"] = self.match_position
        return out


def search_concentration(
    group: SchottkyGroup, task: ConcentrationTask, parallel: bool = False, prune: bool = True
) -> WitnessReport:
    """First word w with p in w(U) and w(U) inside V (plus p in w(V) under
    control), scanning all reduced words of length <= max_len."""
    p = task.p.angle
    u0, u1 = task.u.start, task.u.end
    v = task.v
    probes = [u0, u1] + ([v.start, v.end] if task.control else [])
    vstart, vspan = v.start, v.span

    def predicate(imgs: np.ndarray) -> np.ndarray:
        s, e = imgs[:, 0], imgs[:, 1]
        span_img = np.mod(e - s, TAU)
        dp = np.mod(p - s + _WRAP_PAD, TAU) - _WRAP_PAD
        ok = (dp >= ACCEPT_MARGIN) & (dp <= span_img - ACCEPT_MARGIN)
        d0 = np.mod(s - vstart + _WRAP_PAD, TAU) - _WRAP_PAD
        ok &= (d0 >= ACCEPT_MARGIN) & (d0 + span_img <= vspan - ACCEPT_MARGIN)
        if task.control:
            vs, ve = imgs[:, 2], imgs[:, 3]
            vsp = np.mod(ve - vs, TAU)
            dpv = np.mod(p - vs + _WRAP_PAD, TAU) - _WRAP_PAD
            ok &= (dpv >= ACCEPT_MARGIN) & (dpv <= vsp - ACCEPT_MARGIN)
        return ok

    def verify(word: str) -> bool:
        return _verify_concentration(group, task, word) is not None

    scan = scan_words_parallel if parallel else scan_words
    kwargs = dict(prune_arc=v, prune_span=task.u.span) if prune else {}
    res = scan(group, task.max_len, probes, predicate, verify, **kwargs)
    if res.word is None:
        return WitnessReport("concentration", "exhausted", None, task.max_len, res.examined)
    verification = _verify_concentration(group, task, res.word)
    return WitnessReport(
        "concentration", "witness", res.word, task.max_len, res.examined, verification
    )


def _verify_concentration(group, task: ConcentrationTask, word: str) -> Optional[dict]:
    m = group.word_to_map(word)
    img_u = m.apply_arc(task.u)
    margins = {
        "p_in_image_u": membership_margin(img_u, task.p.angle),
        "image_u_in_v": containment_margin(task.v, img_u),
    }
    if task.control:
        img_v = m.apply_arc(task.v)
        margins["p_in_image_v"] = membership_margin(img_v, task.p.angle)
    if all(v >= ACCEPT_MARGIN for v in margins.values()):
        return margins
    return None


def search_separation(
    group: SchottkyGroup,
    p: BoundaryPoint,
    lam: Geodesic,
    v: Arc,
    max_len: int = 12,
    parallel: bool = False,
    prune: bool = True,
) -> WitnessReport:
    """First word moving both endpoints of lam into V on opposite sides of p.

    The recorded direction is that of the translated geodesic, oriented from
    the image of lam.e1 to the image of lam.e2, as it crosses the ray 0 -> p:
    left-to-right when the image of e1 lies on the counterclockwise side.
    """
    if not v.contains_point(p):
        raise InvalidArgumentError("target arc must contain p")
    if v.span >= TAU - 1e-9:
        raise InvalidArgumentError("degenerate target arc")
    e1, e2 = lam.e1.angle, lam.e2.angle
    gap = min(ccw_span(e1, e2), ccw_span(e2, e1))
    sides = Arc(e1, e2).contains(p.angle) != Arc(e2, e1).contains(p.angle)
    if not sides:
        raise InvalidArgumentError("lambda endpoints must separate p")
    vstart, vspan = v.start, v.span
    pa = p.angle

    dp_fixed = ccw_span(vstart, pa)

    def predicate(imgs: np.ndarray) -> np.ndarray:
        f1, f2 = imgs[:, 0], imgs[:, 1]
        d1 = np.mod(f1 - vstart + _WRAP_PAD, TAU) - _WRAP_PAD
        d2 = np.mod(f2 - vstart + _WRAP_PAD, TAU) - _WRAP_PAD
        inside = (
            (d1 >= ACCEPT_MARGIN) & (d1 <= vspan - ACCEPT_MARGIN)
            & (d2 >= ACCEPT_MARGIN) & (d2 <= vspan - ACCEPT_MARGIN)
        )
        lo = np.minimum(d1, d2)
        hi = np.maximum(d1, d2)
        return inside & (lo < dp_fixed) & (dp_fixed < hi)

    def verify(word: str) -> bool:
        return _verify_separation(group, p, lam, v, word) is not None

    scan = scan_words_parallel if parallel else scan_words
    kwargs = dict(prune_arc=v, prune_span=gap) if prune else {}
    res = scan(group, max_len, [e1, e2], predicate, verify, **kwargs)
    if res.word is None:
        return WitnessReport("separation", "exhausted", None, max_len, res.examined)
    verification = _verify_separation(group, p, lam, v, res.word)
    m = group.word_to_map(res.word)
    f1 = m.apply_angle(e1)
    direction = "left-to-right" if ccw_span(p.angle, f1) < math.pi else "right-to-left"
    return WitnessReport(
        "separation", "witness", res.word, max_len, res.examined, verification, direction
    )


def _verify_separation(group, p, lam, v, word) -> Optional[dict]:
    m = group.word_to_map(word)
    f1 = m.apply_angle(lam.e1.angle)
    f2 = m.apply_angle(lam.e2.angle)
    m1 = membership_margin(v, f1)
    m2 = membership_margin(v, f2)
    d1, d2 = ccw_span(v.start, f1), ccw_span(v.start, f2)
    dp = ccw_span(v.start, p.angle)
    between = min(dp - min(d1, d2), max(d1, d2) - dp)
    # the sub-arc of V between the images, containing p, sits inside V by
    # construction; record its containment margin explicitly as the
    # equivalence check between the two formulations
    sub = Arc(f1, f2) if Arc(f1, f2).contains(p.angle) else Arc(f2, f1)
    margins = {
        "image_e1_in_v": m1,
        "image_e2_in_v": m2,
        "p_between_margin": between,
        "p_arc_in_v": containment_margin(v, sub),
    }
    if m1 >= ACCEPT_MARGIN and m2 >= ACCEPT_MARGIN and between > 0:
        return margins
    return None


def search_controlled_chain(
    group: SchottkyGroup,
    seq: SymbolicSequence,
    k: int,
    min_m: int,
    max_depth: int,
) -> WitnessReport:
    """Constructive controlled-concentration witness from a block recurrence.

    Finds the first m >= min_m with x_{1+i} = x_{m+i} for 0 <= i <= k; the
    witness is the prefix word x_1 ... x_{m-1}, which carries the first
    translate chain onto the one at m.  Verified geometrically: the witness
    maps the first arc onto the arc at m and keeps the limit point inside the
    image of the (1+k)-th arc."""
    if k < 0:
        raise InvalidArgumentError("window k must be >= 0")
    if min_m < 2:
        min_m = 2
    if seq.is_finite and seq.length < max_depth:
        max_depth = seq.length
    if max_depth < min_m + k:
        raise InvalidArgumentError("max_depth too small for the requested window")
    text = seq.prefix(max_depth)
    block = text[: k + 1]
    examined = 0
    pos = None
    m = min_m
    while m + k <= max_depth:
        examined += 1
        if text[m - 1 : m + k] == block:
            pos = m
            break
        m += 1
    if pos is None:
        return WitnessReport("controlled-chain", "exhausted", None, max_depth, examined)
    word = text[: pos - 1]
    gamma = group.word_to_map(word)
    u1 = group.nested_arc(text[:1])
    um = group.nested_arc(text[:pos])
    u1k = group.nested_arc(text[: 2 + k])
    img_u1 = gamma.apply_arc(u1)
    img_u1k = gamma.apply_arc(u1k)
    p = decode(group, seq, epsilon=1e-12 if not seq.is_finite else 2.0).point
    margins = {
        "image_u1_start_vs_um": _angle_gap(img_u1.start, um.start),
        "image_u1_end_vs_um": _angle_gap(img_u1.end, um.end),
        "p_in_image_u1k": membership_margin(img_u1k, p.angle),
    }
    ok = (
        margins["image_u1_start_vs_um"] <= 1e-9
        and margins["image_u1_end_vs_um"] <= 1e-9
        and margins["p_in_image_u1k"] >= ACCEPT_MARGIN
    )
    outcome = "witness" if ok else "exhausted"
    return WitnessReport(
        "controlled-chain", outcome, word if ok else None, max_depth, examined,
        margins, match_position=pos,
    )


def _angle_gap(t1: float, t2: float) -> float:
    d = ccw_span(t1, t2)
    return min(d, TAU - d)
