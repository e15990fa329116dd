"""Poincare-disc geometry: Mobius maps, boundary points, arcs, geodesics.

All boundary data is kept as angles in [0, 2*pi) so that orientation and
membership tests reduce to exact interval arithmetic mod 2*pi; complex
numbers appear only transiently when a map is applied.  Every type here is
an immutable value and every operation is pure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    AmbiguousConfigurationError,
    InvalidArgumentError,
)

TAU = 2.0 * math.pi

# angle comparisons (canonical representatives, endpoint coincidence)
ANGLE_TOL = 1e-12
# geometric verifications (pairing checks, containment margins)
GEOM_TOL = 1e-10


def norm_angle(theta: float) -> float:
    """Canonical representative in [0, 2*pi)."""
    t = math.fmod(theta, TAU)
    if t < 0.0:
        t += TAU
    return t if t < TAU else 0.0


def ccw_span(start: float, end: float) -> float:
    """Counterclockwise angular distance from start to end, in [0, 2*pi)."""
    return norm_angle(end - start)


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of S^1, stored as its angle in [0, 2*pi)."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", norm_angle(self.angle))

    @classmethod
    def from_complex(cls, z: complex) -> "BoundaryPoint":
        return cls(cmath.phase(z))

    def to_complex(self) -> complex:
        return cmath.exp(1j * self.angle)

    def approx_eq(self, other: "BoundaryPoint", tol: float = ANGLE_TOL) -> bool:
        d = ccw_span(self.angle, other.angle)
        return d <= tol or TAU - d <= tol


@dataclass(frozen=True)
class Arc:
    """Open counterclockwise arc from start to end (angles in radians).

    The arc is the set of angles t with 0 < ccw_span(start, t) < span.
    start == end is rejected; an Arc is always a proper subset of S^1.
    """

    start: float
    end: float

    def __post_init__(self):
        object.__setattr__(self, "start", norm_angle(self.start))
        object.__setattr__(self, "end", norm_angle(self.end))
        if ccw_span(self.start, self.end) <= ANGLE_TOL or ccw_span(self.end, self.start) <= ANGLE_TOL:
            raise InvalidArgumentError(
                f"degenerate arc: endpoints {self.start!r}, {self.end!r} coincide within tolerance"
            )

    @classmethod
    def from_points(cls, start: BoundaryPoint, end: BoundaryPoint) -> "Arc":
        return cls(start.angle, end.angle)

    @property
    def proper(self) -> bool:
        return True  # enforced by construction

    @property
    def span(self) -> float:
        return ccw_span(self.start, self.end)

    @property
    def midpoint(self) -> BoundaryPoint:
        return BoundaryPoint(self.start + 0.5 * self.span)

    def contains(self, theta: float, margin: float = 0.0) -> bool:
        """Membership of an angle; margin > 0 shrinks the arc, margin < 0 pads it."""
        d = ccw_span(self.start, norm_angle(theta))
        return margin < d < self.span - margin

    def contains_point(self, p: BoundaryPoint, margin: float = 0.0) -> bool:
        return self.contains(p.angle, margin)

    def contains_arc(self, inner: "Arc", margin: float = 0.0) -> bool:
        """inner lies in self, both endpoints at signed depth >= margin."""
        d0 = ccw_span(self.start, inner.start)
        return d0 >= margin and d0 + inner.span <= self.span - margin

    def overlaps(self, other: "Arc") -> bool:
        return (
            ccw_span(self.start, other.start) < self.span
            or ccw_span(other.start, self.start) < other.span
        )

    def complement(self) -> "Arc":
        return Arc(self.end, self.start)


def _normalize_entries(m11: complex, m12: complex, m21: complex, m22: complex):
    det = m11 * m22 - m12 * m21
    if abs(det) < 1e-30:
        raise InvalidArgumentError("matrix is singular; cannot normalize to unit determinant")
    s = cmath.sqrt(det)
    return m11 / s, m12 / s, m21 / s, m22 / s


@dataclass(frozen=True)
class MoebiusMap:
    """Fractional linear map z -> (m11 z + m12)/(m21 z + m22), unit determinant.

    Entries are renormalized on construction, so long products do not drift.
    """

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def __post_init__(self):
        a, b, c, d = _normalize_entries(self.m11, self.m12, self.m21, self.m22)
        object.__setattr__(self, "m11", a)
        object.__setattr__(self, "m12", b)
        object.__setattr__(self, "m21", c)
        object.__setattr__(self, "m22", d)

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def apply(self, z: complex) -> complex:
        return (self.m11 * z + self.m12) / (self.m21 * z + self.m22)

    def apply_angle(self, theta: float) -> float:
        u = cmath.exp(1j * theta)
        return norm_angle(cmath.phase((self.m11 * u + self.m12) / (self.m21 * u + self.m22)))

    def apply_boundary(self, p: BoundaryPoint) -> BoundaryPoint:
        return BoundaryPoint(self.apply_angle(p.angle))

    def apply_arc(self, arc: Arc) -> Arc:
        # disc-preserving maps are orientation-preserving on S^1, so the ccw
        # image of a ccw arc is the arc between the endpoint images
        return Arc(self.apply_angle(arc.start), self.apply_angle(arc.end))

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.m22, -self.m12, -self.m21, self.m11)

    def is_identity(self, tol: float = GEOM_TOL) -> bool:
        for sign in (1.0, -1.0):
            if (
                abs(self.m11 - sign) <= tol
                and abs(self.m12) <= tol
                and abs(self.m21) <= tol
                and abs(self.m22 - sign) <= tol
            ):
                return True
        return False

    def disc_preserving_defect(self) -> float:
        """Deviation from SU(1,1) form (m22 = conj(m11), m21 = conj(m12))."""
        return max(abs(self.m22 - self.m11.conjugate()), abs(self.m21 - self.m12.conjugate()))


def compose(f: MoebiusMap, g: MoebiusMap) -> MoebiusMap:
    """Group law: compose(f, g) acts as z -> f(g(z))."""
    return f.compose(g)


def apply_boundary(f: MoebiusMap, p: BoundaryPoint) -> BoundaryPoint:
    return f.apply_boundary(p)


@dataclass(frozen=True)
class OrthoCircle:
    """Euclidean circle orthogonal to S^1; its disc part is a geodesic."""

    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise InvalidArgumentError(f"circle radius must be positive, got {self.radius!r}")

    @classmethod
    def from_boundary_angles(cls, t1: float, t2: float) -> "OrthoCircle":
        """The unique circle orthogonal to S^1 through e^{i t1}, e^{i t2}."""
        u = cmath.exp(1j * t1)
        v = cmath.exp(1j * t2)
        denom = 1.0 + (u * v.conjugate()).real
        if abs(denom) < 1e-14:
            raise InvalidArgumentError(
                "boundary points are antipodal within tolerance; the geodesic is a diameter"
            )
        m = (u + v) / denom
        r2 = abs(m) ** 2 - 1.0
        if r2 <= 0.0:
            raise InvalidArgumentError("degenerate circle through boundary points")
        return cls(m, math.sqrt(r2))

    def orthogonality_defect(self) -> float:
        return abs(abs(self.center) ** 2 - 1.0 - self.radius**2)

    @property
    def euclidean_diameter(self) -> float:
        return 2.0 * self.radius

    def boundary_arc(self) -> Arc:
        """The arc of S^1 cut off by the circle (the side away from 0)."""
        am = abs(self.center)
        half = math.acos(min(1.0, 1.0 / am))
        mid = cmath.phase(self.center)
        return Arc(mid - half, mid + half)

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return abs(z - self.center) < self.radius - margin

    def point_at(self, psi: float) -> complex:
        return self.center + self.radius * cmath.exp(1j * psi)

    def sample_points(self, n: int = 3) -> list[complex]:
        return [self.point_at(TAU * k / n) for k in range(n)]


def apply_circle(f: MoebiusMap, c: OrthoCircle) -> OrthoCircle:
    """Image of a circle orthogonal to S^1 under a disc-preserving map.

    Computed through the two boundary intersection points, which is exact for
    this class of circles and avoids the pole bookkeeping of the general
    circle-image formula.
    """
    arc = c.boundary_arc()
    return OrthoCircle.from_boundary_angles(f.apply_angle(arc.start), f.apply_angle(arc.end))


@dataclass(frozen=True)
class Geodesic:
    """Geodesic of the disc given by its boundary endpoints, plus a side flag.

    The positive side is the complementary arc swept counterclockwise from e1
    to e2 when positive_from_e1 is set, otherwise the other arc.  Transport
    under a disc map keeps the flag because the maps preserve orientation.
    """

    e1: BoundaryPoint
    e2: BoundaryPoint
    positive_from_e1: bool = True

    def __post_init__(self):
        d = ccw_span(self.e1.angle, self.e2.angle)
        if min(d, TAU - d) < 1e-10:
            raise InvalidArgumentError("geodesic endpoints must be distinct beyond 1e-10 rad")

    @property
    def positive_arc(self) -> Arc:
        if self.positive_from_e1:
            return Arc(self.e1.angle, self.e2.angle)
        return Arc(self.e2.angle, self.e1.angle)

    @property
    def negative_arc(self) -> Arc:
        return self.positive_arc.complement()

    @property
    def is_diameter(self) -> bool:
        return abs(ccw_span(self.e1.angle, self.e2.angle) - math.pi) < 1e-12

    def circle(self) -> OrthoCircle:
        return OrthoCircle.from_boundary_angles(self.e1.angle, self.e2.angle)

    def transform(self, f: MoebiusMap) -> "Geodesic":
        return Geodesic(f.apply_boundary(self.e1), f.apply_boundary(self.e2), self.positive_from_e1)

    def on_positive_side(self, z: complex) -> bool:
        """Which side of the geodesic an interior point lies on."""
        if abs(z) >= 1.0:
            raise InvalidArgumentError("side test needs an interior point")
        if self.is_diameter:
            u = self.e1.to_complex()
            cross = u.real * z.imag - u.imag * z.real
            # left of the oriented chord e1 -> e2 is the arc ccw from e1
            left = cross > 0.0
            return left == self.positive_from_e1
        c = self.circle()
        inside = abs(z - c.center) < c.radius
        # the inside of the circle corresponds to the cut-off (minor) arc
        minor = c.boundary_arc()
        pos = self.positive_arc
        minor_is_positive = minor.contains(pos.midpoint.angle)
        return inside == minor_is_positive


def hyperbolic_distance(z: complex, w: complex) -> float:
    """Distance in the Poincare metric (curvature -1)."""
    if abs(z) >= 1.0 or abs(w) >= 1.0:
        raise InvalidArgumentError("hyperbolic_distance needs points inside the open disc")
    num = 2.0 * abs(z - w) ** 2
    den = (1.0 - abs(z) ** 2) * (1.0 - abs(w) ** 2)
    return math.acosh(1.0 + num / den)


def geodesics_cross(g1: Geodesic, g2: Geodesic) -> bool:
    """True iff the endpoint pairs are linked on S^1."""
    angles = [g1.e1.angle, g1.e2.angle, g2.e1.angle, g2.e2.angle]
    for i in range(4):
        for j in range(i + 1, 4):
            d = ccw_span(angles[i], angles[j])
            if min(d, TAU - d) < GEOM_TOL:
                raise AmbiguousConfigurationError(
                    f"geodesic endpoints coincide within tolerance: {angles[i]!r} ~ {angles[j]!r}"
                )
    a = Arc(g1.e1.angle, g1.e2.angle)
    return a.contains(g2.e1.angle) != a.contains(g2.e2.angle)


def _lorentz_point(z: complex):
    s = 1.0 - abs(z) ** 2
    return (2.0 * z.real / s, 2.0 * z.imag / s, (1.0 + abs(z) ** 2) / s)


def _geodesic_normal(t1: float, t2: float):
    """Unit spacelike Lorentz normal of the geodesic with boundary angles t1, t2."""
    u = (math.cos(t1), math.sin(t1), 1.0)
    v = (math.cos(t2), math.sin(t2), 1.0)
    # J * (u x v) with J = diag(1, 1, -1)
    n = (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        -(u[0] * v[1] - u[1] * v[0]),
    )
    norm2 = n[0] ** 2 + n[1] ** 2 - n[2] ** 2
    if norm2 <= 0.0:
        raise InvalidArgumentError("degenerate geodesic: coincident endpoints")
    s = math.sqrt(norm2)
    return (n[0] / s, n[1] / s, n[2] / s)


def distance_point_to_geodesic(z: complex, g: Geodesic) -> float:
    """Distance from an interior point to the full geodesic."""
    if abs(z) >= 1.0:
        raise InvalidArgumentError("distance_point_to_geodesic needs an interior point")
    x = _lorentz_point(z)
    n = _geodesic_normal(g.e1.angle, g.e2.angle)
    inner = x[0] * n[0] + x[1] * n[1] - x[2] * n[2]
    return math.asinh(abs(inner))


def distance_origin_to_geodesic_angles(t1: float, t2: float) -> float:
    """Fast path for distance from 0 to the geodesic with boundary angles t1, t2."""
    delta = ccw_span(t1, t2)
    half = 0.5 * delta
    s = math.sin(half)
    if s < 1e-300:
        raise InvalidArgumentError("degenerate geodesic: coincident endpoints")
    return math.asinh(abs(math.cos(half)) / s)


def distance_origin_to_ray(q: complex, u_angle: float) -> float:
    """Distance from 0 to the geodesic ray from interior-ish q to boundary angle u.

    Points q with |q| within 1e-12 of the boundary are treated as boundary
    directions (the pulled-back basepoint of a long word saturates there).
    """
    u = cmath.exp(1j * u_angle)
    aq = abs(q)
    if aq >= 1.0 - 1e-12:
        return distance_origin_to_geodesic_angles(cmath.phase(q), u_angle)
    cross = u.real * q.imag - u.imag * q.real
    if abs(cross) < 1e-14 * max(aq, 1e-300):
        # q sits on the diameter through u: the ray covers 0 iff q is on the
        # far side of the origin
        along = q.real * u.real + q.imag * u.imag
        if along <= 0.0:
            return 0.0
        return 2.0 * math.atanh(aq)
    # circle through q orthogonal to S^1 hitting the boundary at u:
    # Re(m conj(u)) = 1,  Re(m conj(q)) = (1 + |q|^2)/2
    b2 = 0.5 * (1.0 + aq * aq)
    det = u.real * q.imag - u.imag * q.real
    mx = (q.imag * 1.0 - u.imag * b2) / det
    my = (u.real * b2 - q.real * 1.0) / det
    m = complex(mx, my)
    am = abs(m)
    rho = math.sqrt(max(am * am - 1.0, 0.0))
    if rho == 0.0:
        return 2.0 * math.atanh(aq)
    # foot of the perpendicular from 0 is the in-disc arc midpoint, on the ray
    # iff q and u subtend opposite signs around it
    foot = m * (1.0 - rho / am)
    def _psi(x: complex) -> float:
        v = x - m
        ref = -m
        return math.atan2(
            ref.real * v.imag - ref.imag * v.real,
            ref.real * v.real + ref.imag * v.imag,
        )
    if _psi(q) * _psi(u) <= 0.0:
        e = 1.0 / (am + rho)  # = am - rho without cancellation
        return 2.0 * math.atanh(e)
    return 2.0 * math.atanh(aq)
