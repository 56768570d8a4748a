import math

import numpy as np
import pytest

from ahlfors_h0 import lens_lune as ll
from ahlfors_h0.sphere_geom import (
    AmbiguousAntipodal,
    AntipodalVertices,
    CircularArc,
    GeodesicChord,
    GeometryError,
    LunePosition,
    QuadratureFailure,
    Side,
    SpherePoint,
    contour_area,
    dist,
    in_lune,
    lens_boundary,
    lune_boundary,
    polygon_curve,
    side_of_chord,
    spherical_polygon_area,
    spherical_triangle_area,
    stereographic,
    unstereographic,
)


def P(z):
    return stereographic(z)


def test_chart_poles():
    assert np.allclose(P(0).vec, [0, 0, -1])
    assert np.allclose(P("inf").vec, [0, 0, 1])
    assert np.allclose(P(1).vec, [1, 0, 0])


@pytest.mark.parametrize("z", [0.3 - 0.2j, 2.5 + 4j, -1e-3j, 1e6 + 1j])
def test_chart_round_trip(z):
    w = unstereographic(P(z))
    assert abs(w - z) <= 1e-12 * max(1.0, abs(z))


def test_known_distances():
    assert dist(P(0), P("inf")) == pytest.approx(math.pi, abs=1e-15)
    assert dist(P(0), P(1)) == pytest.approx(math.pi / 2, abs=1e-15)
    assert dist(P(1), P(-1)) == pytest.approx(math.pi, abs=1e-15)


def test_small_distance_accuracy():
    # atan2 keeps full relative accuracy where acos would lose half the digits
    d = dist(P(0), P(1e-9))
    assert d == pytest.approx(2e-9, rel=1e-12)


def test_chord_rejects_bad_endpoints():
    with pytest.raises(GeometryError):
        GeodesicChord(P(0), P(0))
    with pytest.raises(AntipodalVertices):
        GeodesicChord(P(0), P("inf"))


def test_side_of_chord():
    ch = GeodesicChord(P(0), P(1))
    assert side_of_chord(P(0.5j), ch) is Side.LEFT
    assert side_of_chord(P(-0.5j), ch) is Side.RIGHT
    assert side_of_chord(P(0.5), ch) is Side.ON
    with pytest.raises(AmbiguousAntipodal):
        side_of_chord(P("inf"), ch)


def test_chord_contains_is_linear_in_offset():
    ch = GeodesicChord(P(0), P(1))
    mid = SpherePoint.from_vector([1.0, 0.0, -1.0])
    assert ch.contains(mid)
    off = SpherePoint.from_vector([1.0, 1e-6, -1.0])
    assert not ch.contains(off)
    assert not ch.contains(P(-0.5))


def test_lune_membership():
    arc = CircularArc(GeodesicChord(P(0), P(1)), math.pi / 3)
    assert in_lune(P(0.5 + 0.1j), arc) is LunePosition.INTERIOR
    assert in_lune(P(0.5 - 0.1j), arc) is LunePosition.OUTSIDE
    assert in_lune(P(0.5), arc) is LunePosition.BOUNDARY_CHORD
    assert in_lune(P(0), arc) is LunePosition.BOUNDARY_CHORD
    assert in_lune(P(2), arc) is LunePosition.OUTSIDE
    mid = arc.sample(3)[1]
    assert in_lune(mid, arc) is LunePosition.BOUNDARY_ARC


def test_half_circle_arc_bulges_left():
    arc = CircularArc(GeodesicChord(P(0), P(1)), math.pi / 2)
    mid = arc.sample(3)[1]
    assert side_of_chord(mid, arc.chord) is Side.LEFT
    assert arc.length == pytest.approx(ll.lune_length(math.pi / 2, math.pi / 2), abs=1e-14)


def test_octant_triangle():
    t = spherical_triangle_area(P(0), P(1), P(1j))
    assert not t.degenerate
    assert t.area == pytest.approx(math.pi / 2, abs=1e-14)
    assert spherical_triangle_area(P(0), P(1j), P(1)).area == pytest.approx(4 * math.pi - math.pi / 2, abs=1e-13)
    assert spherical_polygon_area([P(0), P(1), P(1j)]) == pytest.approx(math.pi / 2, abs=1e-13)


def test_collinear_triangle_flagged():
    t = spherical_triangle_area(P(0), P(0.5), P(1))
    assert t.degenerate and t.area == 0.0


def test_contour_area_of_octant():
    assert contour_area(polygon_curve([P(0), P(1), P(1j)])) == pytest.approx(math.pi / 2, abs=1e-9)


@pytest.mark.parametrize("delta,theta", [(math.pi / 2, math.pi / 2), (1.1, 0.6), (0.3, 1.2)])
def test_lens_contour_matches_closed_form(delta, theta):
    a = stereographic(-math.tan(delta / 4))
    b = stereographic(math.tan(delta / 4))
    ch = GeodesicChord(a, b)
    assert ch.length == pytest.approx(delta, abs=1e-14)
    assert contour_area(lens_boundary(ch, theta)) == pytest.approx(ll.A_lens(delta, theta), abs=1e-8)
    assert contour_area(lune_boundary(ch, theta)) == pytest.approx(ll.lune_area(delta, theta), abs=1e-8)
    assert lens_boundary(ch, theta).length == pytest.approx(ll.L_lens(delta, theta), abs=1e-12)


def test_arc_length_matches_polyline():
    arc = CircularArc(GeodesicChord(P(0.1), P(0.7j)), 1.0)
    pts = arc.sample(20001)
    poly = sum(dist(p, q) for p, q in zip(pts, pts[1:]))
    assert poly == pytest.approx(arc.length, rel=1e-8)


def test_major_arc_length():
    arc = CircularArc(GeodesicChord(P(-0.3), P(0.3)), 2.5)
    d = arc.chord.length
    assert arc.length == pytest.approx(ll.lune_length(d, 2.5, allow_major=True), abs=1e-13)


def test_contour_through_infinity_refused():
    # the outer arc from i to 1 on the line x + y = 1 runs through infinity
    ch = GeodesicChord(P(1j), P(1))
    with pytest.raises(QuadratureFailure):
        contour_area(lune_boundary(ch, 3 * math.pi / 4))


def test_open_curve_refused():
    from ahlfors_h0.sphere_geom import PiecewiseCircularCurve

    c = PiecewiseCircularCurve([CircularArc(GeodesicChord(P(0), P(1)), 0.3)])
    with pytest.raises(GeometryError):
        contour_area(c)
