import itertools
import math

import numpy as np
import pytest

from schottkylab import (
    ConfigurationRejectedError,
    InvalidArgumentError,
    build_group,
    enumerate_words,
    is_reduced,
    word_count,
)
from schottkylab.group import ALLOWED_NEXT, INVERSE, LETTERS, SchottkyGroup, reduce_concat
from conftest import random_reduced_word


def test_center_distance(group):
    assert group.center_dist == pytest.approx(math.sqrt(1.64), abs=1e-12)


def test_inner_axis_point_maps_across(group):
    # algebraic identity (1 - c^2 + c r)/r = c - r for the inner real-axis points
    c, r = group.center_dist, group.radius
    img = group.maps["a"].apply(complex(-(c - r), 0.0))
    assert abs(img - complex(c - r, 0.0)) < 1e-12


def test_ga_multiplier_at_attracting_fixed_point(group):
    # derivative at z = 1 is (c - 1)/(c + 1)
    c = group.center_dist
    expect = (c - 1.0) / (c + 1.0)
    h = 1e-7
    ga = group.maps["a"]
    deriv = (ga.apply(1.0 + h + 0j) - ga.apply(1.0 + 0j)) / h
    assert abs(deriv - expect) < 1e-6
    assert expect == pytest.approx(0.1231, abs=1e-4)


def test_endpoint_matching_quadratic(group):
    # the boundary endpoints of the paired circles have real parts -1/c, +1/c;
    # the root in (0, 1) of t^2 - t(c + 1/c) + 1 = 0 is exactly 1/c
    c = group.center_dist
    t = 1.0 / c
    assert t * t - t * (c + 1.0 / c) + 1.0 == pytest.approx(0.0, abs=1e-14)
    arc_src = group.arcs["A"]
    arc_dst = group.arcs["a"]
    for theta in (arc_src.start, arc_src.end):
        assert math.cos(theta) == pytest.approx(-t, abs=1e-12)
        img = group.maps["a"].apply_angle(theta)
        assert math.cos(img) == pytest.approx(t, abs=1e-12)
        gap = min(
            abs(img - arc_dst.start) % (2 * math.pi),
            abs(img - arc_dst.end) % (2 * math.pi),
        )
        assert gap < 1e-10


def test_circle_certificates(group):
    for x in LETTERS:
        assert group.circles[x].orthogonality_defect() < 1e-12
    centers = [group.circles[x].center for x in LETTERS]
    for z1, z2 in itertools.combinations(centers, 2):
        assert abs(z1 - z2) > 2 * group.radius  # disjoint circles


def test_configuration_rejection_reports_inequality():
    with pytest.raises(ConfigurationRejectedError) as exc:
        build_group(1.0)
    assert "c*sqrt(2) > 2*r violated" in str(exc.value)
    with pytest.raises(ConfigurationRejectedError):
        build_group(-0.2)


def test_from_config():
    g = SchottkyGroup.from_config({"radius": 0.5})
    assert g.radius == 0.5
    with pytest.raises(InvalidArgumentError):
        SchottkyGroup.from_config({})
    with pytest.raises(InvalidArgumentError):
        SchottkyGroup.from_config({"radius": "big"})


def test_enumerate_words_counts():
    assert len(list(enumerate_words(1))) == 4
    assert len(list(enumerate_words(2))) == 16
    assert len(list(enumerate_words(5))) == 484
    assert word_count(5) == 484


def test_enumerate_words_order_and_validity():
    words = list(enumerate_words(3))
    assert words[:8] == ["a", "A", "b", "B", "aa", "ab", "aB", "AA"]
    assert len(set(words)) == len(words)
    for w in words:
        assert is_reduced(w)
    lengths = [len(w) for w in words]
    assert lengths == sorted(lengths)
    by_len = {}
    for w in words:
        by_len.setdefault(len(w), []).append(w)
    order = {x: i for i, x in enumerate(LETTERS)}
    for ws in by_len.values():
        keys = [[order[x] for x in w] for w in ws]
        assert keys == sorted(keys)


def test_word_to_map_cases(group):
    assert group.word_to_map("").is_identity()
    with pytest.raises(InvalidArgumentError):
        group.word_to_map("aA")
    with pytest.raises(InvalidArgumentError):
        group.word_to_map("ax")
    m = group.word_to_map("ab")
    expect = group.maps["a"].apply(group.maps["b"].apply(0j))
    assert abs(m.apply(0j) - expect) < 1e-10


def test_reduce_concat():
    assert reduce_concat("ab", "Ba") == "aa"
    assert reduce_concat("a", "A") == ""
    assert reduce_concat("", "ba") == "ba"


def test_translate_geodesic_identity(group):
    g = group.geodesics["a"]
    out = group.translate_geodesic("", g)
    assert out.e1.approx_eq(g.e1) and out.e2.approx_eq(g.e2)
    assert out.positive_from_e1 == g.positive_from_e1


def test_translate_geodesic_pairing_side(group):
    # g_a carries the primed geodesic onto the unprimed one; the transported
    # positive side is the inside of the circle at +c
    out = group.translate_geodesic("a", group.geodesics["A"])
    inner_edge = group.center_dist - group.radius  # closest point of the +c circle
    assert out.on_positive_side(complex(inner_edge + 0.01, 0.0))
    assert not out.on_positive_side(complex(inner_edge - 0.01, 0.0))


def test_translate_positive_side_is_transported(group, rng):
    for _ in range(25):
        w = random_reduced_word(rng, rng.randint(1, 6))
        g = group.geodesics[rng.choice(LETTERS)]
        m = group.word_to_map(w)
        out = g.transform(m)
        # image of a positive-side sample lands on the positive side
        arc = g.positive_arc
        sample_angle = arc.start + arc.span / 2
        z = 0.99 * complex(math.cos(sample_angle), math.sin(sample_angle))
        if not g.on_positive_side(z):
            z = 0.2 * z  # near-center fallback for exterior-side geodesics
        if g.on_positive_side(z):
            assert out.on_positive_side(m.apply(z))


def test_primed_geodesic_positive_side_is_exterior(group):
    # transport makes the positive side of the primed geodesic its exterior,
    # which contains the origin
    assert group.geodesics["A"].on_positive_side(0j)
    assert group.geodesics["B"].on_positive_side(0j)
    assert not group.geodesics["a"].on_positive_side(0j)


def test_pingpong_nesting_and_contraction(group):
    # radii strictly decrease along every reduced chain; ratios beyond the
    # first level stay below the measured lambda_max < 0.9
    lam = group.lambda_max()
    assert lam < 0.9
    for word in enumerate_words(5):
        if len(word) < 2:
            continue
        inner = group.nested_circle(word)
        outer = group.nested_circle(word[:-1])
        assert inner.radius < outer.radius
        assert abs(inner.center - outer.center) + inner.radius <= outer.radius + 1e-12
        if len(word) > 2:
            assert inner.radius / outer.radius <= lam * 1.05 + 1e-9


def test_freeness_at_desk_scale(group):
    # distinct reduced words up to length 6 move the origin to points
    # at least 1e-6 apart
    pts = []
    for w in enumerate_words(6):
        m = group.word_to_map(w)
        pts.append(m.apply(0j))
    pts.append(0j)  # identity
    arr = np.array(pts)
    diff = np.abs(arr[:, None] - arr[None, :])
    np.fill_diagonal(diff, 1.0)
    assert diff.min() >= 1e-6


def test_fundamental_domain(group):
    assert group.in_fundamental_domain(0j)
    for w in enumerate_words(6):
        z = group.word_to_map(w).apply(0j)
        assert any(group.circles[x].contains(z) for x in LETTERS)


def test_nested_arc_matches_circle(group):
    for w in ("a", "ab", "bab", "BBa"):
        arc = group.nested_arc(w)
        circ_arc = group.nested_circle(w).boundary_arc()
        assert arc.midpoint.approx_eq(circ_arc.midpoint, 1e-9)


def test_allowed_next_consistency():
    for x in LETTERS:
        assert INVERSE[x] not in ALLOWED_NEXT[x]
        assert len(ALLOWED_NEXT[x]) == 3
