"""Deterministic SVG pictures of the disc, its translate geodesics and rays.

Fixed 1000x1000 px viewport; the closed unit disc maps to a 480 px radius
about (500, 500), leaving a 20 px margin.  Geodesics are drawn as the
in-disc arc of their carrying circle (an SVG path arc), which meets the
boundary circle orthogonally by construction.  Element order follows word
enumeration order, and all coordinates are written with four decimals, so
identical scenes render byte-identically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import RenderDepthError
from .group import LETTERS, SchottkyGroup, enumerate_words
from .hyperbolic import Arc, Geodesic, OrthoCircle, apply_circle

SIZE = 1000
MARGIN = 20
RADIUS_PX = (SIZE - 2 * MARGIN) / 2  # 480
CENTER = SIZE / 2
DEPTH_GUARD = 8
LABEL_OFFSET_PX = 9.0


def _px(z: complex) -> tuple[float, float]:
    # mathematical orientation: positive imaginary axis points up
    return (CENTER + RADIUS_PX * z.real, CENTER - RADIUS_PX * z.imag)


def _fmt(x: float) -> str:
    s = f"{x:.4f}"
    return "0.0000" if s == "-0.0000" else s


@dataclass(frozen=True)
class GeodesicElement:
    circle: OrthoCircle
    label: Optional[str] = None
    label_anchor: Optional[complex] = None
    css: str = "geodesic"


@dataclass(frozen=True)
class RayElement:
    angle: float


@dataclass(frozen=True)
class MarkerElement:
    point: complex
    css: str = "marker"


@dataclass
class RenderScene:
    """Element lists in draw order; build with translate_scene or by hand."""

    depth: int = 0
    geodesics: list[GeodesicElement] = field(default_factory=list)
    rays: list[RayElement] = field(default_factory=list)
    markers: list[MarkerElement] = field(default_factory=list)


def projected_circle_count(depth: int) -> int:
    """4 base circles plus one new circle per reduced word of length <= depth."""
    return 4 + sum(4 * 3 ** (ell - 1) for ell in range(1, depth + 1))


def translate_scene(group: SchottkyGroup, depth: int, label_depth: int = 1) -> RenderScene:
    """The four generator circles and, per reduced word w of length <= depth,
    the translate w(circle of w's last letter), labeled on its positive side
    up to label_depth."""
    if depth > DEPTH_GUARD:
        raise RenderDepthError(depth, projected_circle_count(depth))
    scene = RenderScene(depth=depth)
    for x in LETTERS:
        geod = group.geodesics[x]
        scene.geodesics.append(
            GeodesicElement(
                group.circles[x],
                label=_letter_label(x),
                label_anchor=_label_anchor(group.circles[x], geod),
            )
        )
    if depth < 1:
        return scene
    for word in enumerate_words(depth):
        last = word[-1]
        m = group.word_to_map(word)
        circle = apply_circle(m, group.circles[last])
        label = None
        anchor = None
        if len(word) <= label_depth:
            geod = group.geodesics[last].transform(m)
            label = _letter_label(last)
            anchor = _label_anchor(circle, geod)
        scene.geodesics.append(GeodesicElement(circle, label, anchor))
    return scene


def _letter_label(letter: str) -> str:
    return "a" if letter in ("a", "A") else "b"


def _label_anchor(circle: OrthoCircle, geod: Geodesic) -> complex:
    """A point just off the arc midpoint, on the positive side of the geodesic."""
    m = circle.center
    foot = m * (1.0 - circle.radius / abs(m))  # in-disc arc midpoint
    step = (LABEL_OFFSET_PX / RADIUS_PX) * (m / abs(m))
    inward = foot + step  # toward the circle center: inside the circle
    outward = foot - step
    if abs(inward) < 1.0 and geod.on_positive_side(inward):
        return inward
    return outward


def _arc_path(circle: OrthoCircle) -> str:
    arc = circle.boundary_arc()
    p1 = _px(cmath.exp(1j * arc.start))
    p2 = _px(cmath.exp(1j * arc.end))
    r = circle.radius * RADIUS_PX
    # the in-disc arc always subtends less than pi, so large-arc-flag is 0;
    # in pixel coordinates (y flipped) the sweep from the ccw-start boundary
    # point runs clockwise, which is sweep flag 1... determined by sampling
    mid = circle.center * (1.0 - circle.radius / abs(circle.center))
    sweep = _sweep_flag(p1, p2, _px(mid))
    return (
        f"M {_fmt(p1[0])} {_fmt(p1[1])} "
        f"A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {_fmt(p2[0])} {_fmt(p2[1])}"
    )


def _sweep_flag(p1, p2, pmid) -> int:
    # choose the sweep whose arc passes on the same side as pmid
    cross = (p2[0] - p1[0]) * (pmid[1] - p1[1]) - (p2[1] - p1[1]) * (pmid[0] - p1[0])
    return 1 if cross < 0 else 0


def render_scene(scene: RenderScene) -> str:
    """Serialize to SVG 1.1; byte-identical for identical scenes."""
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">\n',
        f'<circle class="boundary" cx="{_fmt(CENTER)}" cy="{_fmt(CENTER)}" '
        f'r="{_fmt(RADIUS_PX)}" fill="none" stroke="black" stroke-width="1.5"/>\n',
    ]
    for ray in scene.rays:
        p = _px(cmath.exp(1j * ray.angle))
        parts.append(
            f'<line class="ray" x1="{_fmt(CENTER)}" y1="{_fmt(CENTER)}" '
            f'x2="{_fmt(p[0])}" y2="{_fmt(p[1])}" stroke="red" stroke-width="1"/>\n'
        )
    for g in scene.geodesics:
        parts.append(
            f'<path class="{g.css}" d="{_arc_path(g.circle)}" '
            f'fill="none" stroke="blue" stroke-width="0.8"/>\n'
        )
    for g in scene.geodesics:
        if g.label is not None and g.label_anchor is not None:
            ax, ay = _px(g.label_anchor)
            parts.append(
                f'<text class="label" x="{_fmt(ax)}" y="{_fmt(ay)}" font-size="14" '
                f'text-anchor="middle" dominant-baseline="middle">{g.label}</text>\n'
            )
    for mk in scene.markers:
        mx, my = _px(mk.point)
        parts.append(
            f'<circle class="{mk.css}" cx="{_fmt(mx)}" cy="{_fmt(my)}" r="3" fill="red"/>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts)


def scene_for_sequence(
    group: SchottkyGroup,
    seq_arcs: list[Arc],
    ray_angle: float,
    lam: Optional[Geodesic] = None,
    depth: int = 2,
) -> RenderScene:
    """Figure-style overlay: the translate picture plus the ray to the limit
    point, the nested-arc endpoints, and an optional marked geodesic."""
    scene = translate_scene(group, depth)
    scene.rays.append(RayElement(ray_angle))
    for arc in seq_arcs:
        scene.markers.append(MarkerElement(cmath.exp(1j * arc.start)))
        scene.markers.append(MarkerElement(cmath.exp(1j * arc.end)))
    if lam is not None:
        scene.geodesics.append(GeodesicElement(lam.circle(), css="geodesic-highlight"))
    return scene
