"""Two directions of the boundary coding.

decode: symbol sequence -> limit point, by shrinking the nested arcs cut off
by the image circles of the word prefixes.  encode: boundary point -> symbol
sequence, by repeatedly identifying the generator arc containing the point
and pulling back by that generator.  ray_crossing_sequence recomputes the
same symbols geometrically, as transverse crossings of the ray from 0 with
the labeled translates, and reports crossing points and angles.

Deep prefixes are handled in a pulled-back frame: instead of pushing the ray
forward (whose points saturate against the unit circle), each step pulls the
ray back by one inverse generator, where all quantities stay order one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    AmbiguousCrossingError,
    EncodingToleranceError,
    InvalidArgumentError,
    NeedsMorePrefixError,
    NotALimitPointError,
)
from .group import INVERSE, LETTERS, SchottkyGroup
from .hyperbolic import Arc, BoundaryPoint, MoebiusMap, ccw_span, norm_angle
from .sequences import SymbolicSequence

DEFAULT_EPSILON = 1e-9
DEFAULT_MAX_DEPTH = 200


@dataclass(frozen=True)
class DecodeResult:
    point: BoundaryPoint
    depth: int
    diameter: float


def _arc_diameter(span: float) -> float:
    """Euclidean diameter of the circle cutting off an arc of the given span."""
    if span >= math.pi:
        return 2.0
    return 2.0 * math.tan(0.5 * span)


def decode(
    group: SchottkyGroup,
    seq: SymbolicSequence,
    epsilon: float = DEFAULT_EPSILON,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> DecodeResult:
    """Limit point of the nested-arc chain of `seq`.

    Infinite sequences stop at the first prefix whose carrying circle has
    Euclidean diameter below epsilon.  Finite words are always consumed in
    full (the returned point then lies in the word's own cylinder arc, so
    re-encoding recovers every letter); epsilon must still be reached by the
    final arc, otherwise NeedsMorePrefixError reports the reached diameter.
    """
    if not epsilon > 0.0:
        raise InvalidArgumentError("epsilon must be positive")
    m = MoebiusMap.identity()
    finite = seq.is_finite
    limit = seq.length if finite else max_depth
    if limit < 1:
        raise InvalidArgumentError("sequence is empty")
    mid = diam = None
    for n in range(limit):
        x = seq.symbol_at(n)
        base = group.arcs[x]
        s = m.apply_angle(base.start)
        e = m.apply_angle(base.end)
        span = ccw_span(s, e)
        if span > math.pi:
            span = 0.0  # true span below float resolution; endpoints crossed over
        mid = norm_angle(s + 0.5 * span)
        diam = _arc_diameter(span)
        if not finite and diam < epsilon:
            return DecodeResult(BoundaryPoint(mid), n + 1, diam)
        m = m.compose(group.maps[x])
    if diam < epsilon:
        return DecodeResult(BoundaryPoint(mid), limit, diam)
    raise NeedsMorePrefixError(diam, limit)


def decode_family_point(group: SchottkyGroup, seq: SymbolicSequence, epsilon: float = 1e-12):
    """Convenience: the BoundaryPoint only."""
    return decode(group, seq, epsilon).point


def encode(group: SchottkyGroup, p: BoundaryPoint, max_len: int, tol: float = 1e-13) -> str:
    """First max_len symbols of the crossing sequence of the ray 0 -> p.

    Raises NotALimitPointError when the iterate falls in an ordinary gap
    between the generator arcs, EncodingToleranceError when it sits within
    tol of an arc endpoint.
    """
    if max_len < 1:
        raise InvalidArgumentError("max_len must be >= 1")
    theta = p.angle
    out = []
    for step in range(max_len):
        hit = None
        for x in LETTERS:
            arc = group.arcs[x]
            d = ccw_span(arc.start, theta)
            if d < arc.span:
                margin = min(d, arc.span - d)
                if margin < tol:
                    raise EncodingToleranceError(step + 1, margin)
                hit = x
                break
        if hit is None:
            raise NotALimitPointError(step + 1, theta)
        out.append(hit)
        theta = group.maps[INVERSE[hit]].apply_angle(theta)
    return "".join(out)


@dataclass(frozen=True)
class Crossing:
    symbol: str
    point: complex  # crossing location in the disc
    angle: float  # angle from the oriented translate tangent to the ray, in (0, pi)


class _ProjectiveMatrix:
    """2x2 complex matrix kept at unit max-entry; only the action matters."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=1.0 + 0j, b=0j, c=0j, d=1.0 + 0j):
        self.a, self.b, self.c, self.d = a, b, c, d

    def left_mul(self, m: MoebiusMap) -> None:
        a, b, c, d = self.a, self.b, self.c, self.d
        self.a = m.m11 * a + m.m12 * c
        self.b = m.m11 * b + m.m12 * d
        self.c = m.m21 * a + m.m22 * c
        self.d = m.m21 * b + m.m22 * d
        s = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        self.a /= s
        self.b /= s
        self.c /= s
        self.d /= s

    def right_mul(self, m: MoebiusMap) -> None:
        a, b, c, d = self.a, self.b, self.c, self.d
        self.a = a * m.m11 + b * m.m21
        self.b = a * m.m12 + b * m.m22
        self.c = c * m.m11 + d * m.m21
        self.d = c * m.m12 + d * m.m22
        s = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        self.a /= s
        self.b /= s
        self.c /= s
        self.d /= s

    def apply(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)


def _ray_tangent_at(q: complex, u: complex, at: complex) -> complex:
    """Unit tangent of the oriented geodesic q -> u at a point `at` on it."""
    cross = u.real * q.imag - u.imag * q.real
    chord = u - q
    if abs(cross) < 1e-13 * max(abs(q), 1.0):
        return chord / abs(chord)
    b2 = 0.5 * (1.0 + abs(q) ** 2)
    det = u.real * q.imag - u.imag * q.real
    mx = (q.imag - u.imag * b2) / det
    my = (u.real * b2 - q.real) / det
    m = complex(mx, my)
    v = at - m
    t = 1j * v / abs(v)
    # orient toward u along the shorter way around the carrying circle
    sgn = (u - m).real * v.imag - (u - m).imag * v.real
    return -t if sgn > 0 else t


def _circle_intersection_in_disc(mc: complex, rc: float, q: complex, u: complex) -> complex:
    """Intersection of circle (mc, rc) with the geodesic from q to boundary u.

    Returns the intersection point inside the unit disc lying between q and u.
    Raises AmbiguousCrossingError if they do not meet transversally.
    """
    cross = u.real * q.imag - u.imag * q.real
    if abs(cross) < 1e-13 * max(abs(q), 1.0):
        # ray is (part of) a diameter: intersect the line t*u with the circle
        beta = (u.conjugate() * mc).real
        disc = beta * beta - (abs(mc) ** 2 - rc * rc)
        if disc <= 0.0:
            raise AmbiguousCrossingError("ray misses the translate circle")
        t = beta - math.sqrt(disc)
        return t * u
    b2 = 0.5 * (1.0 + abs(q) ** 2)
    det = cross
    mr = complex((q.imag - u.imag * b2) / det, (u.real * b2 - q.real) / det)
    rr = math.sqrt(max(abs(mr) ** 2 - 1.0, 0.0))
    dvec = mc - mr
    d2 = abs(dvec) ** 2
    if d2 < 1e-26:
        raise AmbiguousCrossingError("ray and translate circle coincide within tolerance")
    d = math.sqrt(d2)
    a = (d2 + rr * rr - rc * rc) / (2.0 * d)
    h2 = rr * rr - a * a
    if h2 <= 0.0:
        raise AmbiguousCrossingError("ray meets the translate circle tangentially or not at all")
    h = math.sqrt(h2)
    base = mr + a * dvec / d
    off = 1j * dvec / d * h
    p1, p2 = base + off, base - off
    return p1 if abs(p1) < abs(p2) else p2


def ray_crossing_sequence(
    group: SchottkyGroup, p: BoundaryPoint, max_crossings: int
) -> list[Crossing]:
    """Crossings of the geodesic ray 0 -> p with the labeled translates.

    Symbols agree with encode(p, max_crossings); points are ordered outward
    from 0; each angle is measured at the crossing from the translate's
    oriented tangent (positive side on its left) to the oriented ray, so it
    lies in (0, pi) for a transverse crossing.
    """
    if max_crossings < 1:
        raise InvalidArgumentError("max_crossings must be >= 1")
    theta = p.angle
    inv = _ProjectiveMatrix()  # pulled-back frame: inverse of the prefix word
    fwd = _ProjectiveMatrix()  # prefix word itself, for reporting points
    out: list[Crossing] = []
    prev_t = 0.0
    for step in range(max_crossings):
        hit = None
        for x in LETTERS:
            arc = group.arcs[x]
            d = ccw_span(arc.start, theta)
            if d < arc.span:
                margin = min(d, arc.span - d)
                if margin < 1e-13:
                    raise EncodingToleranceError(step + 1, margin)
                hit = x
                break
        if hit is None:
            raise NotALimitPointError(step + 1, theta)
        circle = group.circles[hit]
        q = inv.apply(0j)  # pulled-back ray start
        u = cmath.exp(1j * theta)  # pulled-back ray end, = current target
        pt_local = _circle_intersection_in_disc(circle.center, circle.radius, q, u)
        ray_dir = _ray_tangent_at(q, u, pt_local)
        normal = (pt_local - circle.center) / abs(pt_local - circle.center)
        if hit in ("a", "b"):
            normal = -normal  # positive side of an unbarred translate is the inside
        tangent = -1j * normal  # positive normal sits on the left of the tangent
        cosang = max(-1.0, min(1.0, (ray_dir * tangent.conjugate()).real))
        angle = math.acos(cosang)
        if angle < 1e-9 or angle > math.pi - 1e-9:
            raise AmbiguousCrossingError(f"tangential crossing at step {step + 1}")
        # positive crossing iff the ray runs with the positive normal
        positive = (ray_dir * normal.conjugate()).real > 0.0
        if positive != (hit in ("a", "b")):
            raise AmbiguousCrossingError(
                f"crossing sign disagrees with symbol {hit!r} at step {step + 1}"
            )
        pt_global = fwd.apply(pt_local)
        t = abs(pt_global)
        if t < prev_t - 1e-9:
            raise AmbiguousCrossingError("crossing points are out of order")
        prev_t = t
        out.append(Crossing(hit, pt_global, angle))
        theta = group.maps[INVERSE[hit]].apply_angle(theta)
        inv.left_mul(group.maps[INVERSE[hit]])
        fwd.right_mul(group.maps[hit])
    return out
