import math

import pytest

from ahlfors_h0 import lens_lune as ll
from ahlfors_h0.functionals import FOUR_PI, Configuration, r_value
from ahlfors_h0.sphere_geom import contour_area, rotation_matrix, stereographic
from ahlfors_h0.surface_builder import (
    INSIDE,
    OUTSIDE,
    BoundaryPartition,
    DegenerateConfiguration,
    build_solution,
    deg_max_estimate,
    r_of_solution,
    validate_s0,
)

E3 = Configuration.of([0, 1, "inf"])
C4 = Configuration.of([0, 1, 1j, "inf"])


def test_pair_over_unit_chord():
    part = BoundaryPartition.from_curvature([0, 1], ll.theta_to_circle(math.pi / 2, 0.5).k, (0, 1))
    assert part.thetas == pytest.approx((0.5, 0.5), abs=1e-14)
    assert validate_s0(part, E3).ok
    sol = build_solution(part, E3)
    assert [f.kind for f in sol.triangles] == ["slit"]
    assert sol.triangles[0].area == FOUR_PI
    # infinity is the only point off the slit
    assert sol.stats.nbar == 1
    assert r_of_solution(sol) == pytest.approx(ll.A_lens(math.pi / 2, 0.5), abs=1e-13)
    assert sol.stats.L == pytest.approx(ll.L_lens(math.pi / 2, 0.5), abs=1e-14)
    assert deg_max_estimate(sol) == 2


def test_triangle_matches_contour_area():
    part = BoundaryPartition.from_curvature([0, 1, 1j], 0.3, (0, 1, 2))
    assert validate_s0(part, C4).ok
    sol = build_solution(part, C4)
    assert sol.stats.nbar == 0
    area = contour_area(part.boundary_curve())
    assert sol.stats.A == pytest.approx(area, abs=1e-9)
    assert r_of_solution(sol) == pytest.approx((C4.q - 2) * area, abs=1e-8)
    assert deg_max_estimate(sol) == 1


def test_lunes_bulge_outwards():
    part = BoundaryPartition.from_curvature([0, 1, 1j], 0.5)
    sol = build_solution(part, C4)
    outside_edge = stereographic(0.5 - 0.05j)
    inside_edge = stereographic(0.5 + 0.05j)
    lune = sol.lunes[0]
    assert lune.classify(outside_edge.vec) == INSIDE
    assert lune.classify(inside_edge.vec) == OUTSIDE
    assert sol.triangles[0].classify(inside_edge.vec) == INSIDE


def test_rotation_invariance_of_ledger():
    part = BoundaryPartition.from_curvature([0, 1, 1j], 0.3)
    rot = rotation_matrix([1.0, 2.0, -0.5], 0.77)
    a = build_solution(part, C4)
    b = build_solution(part.rotated(rot), C4.rotated(rot))
    assert a.stats.nbar == b.stats.nbar
    assert a.stats.A == pytest.approx(b.stats.A, abs=1e-12)


def test_antipodal_diagonal_becomes_half_circle():
    part = BoundaryPartition((0, 1, "inf", 1j), (0.1,) * 4, (0, 1, 3, 2))
    assert validate_s0(part, C4).ok
    sol = build_solution(part, C4)
    assert [f.kind for f in sol.triangles] == ["slit", "digon"]
    assert sol.triangles[1].area == pytest.approx(math.pi, abs=1e-13)
    assert len(sol.diagonals[0]) == 3
    assert sol.diag_hits == (1,)
    assert r_of_solution(sol) == pytest.approx(r_value(sol.stats), abs=1e-12)
    assert deg_max_estimate(sol) <= 6


def test_collinear_triangle_needs_flag():
    c = Configuration.of([0, 0.5, 1])
    part = BoundaryPartition((0, 0.5, 1), (0.2,) * 3)
    with pytest.raises(DegenerateConfiguration):
        build_solution(part, c)
    sol = build_solution(part, c, allow_degenerate=True)
    assert sol.triangles[0].kind == "slit"
    assert sol.degenerate_rules


def test_collinear_round_trip_is_hemisphere():
    # three points 2 pi / 3 apart on the equator: the path runs once round the circle
    pts = [[math.cos(2 * math.pi * i / 3), math.sin(2 * math.pi * i / 3), 0.0] for i in range(3)]
    c = Configuration.of(pts)
    sol = build_solution(BoundaryPartition(pts, (0.2,) * 3), c, allow_degenerate=True)
    assert sol.triangles[0].kind == "hemisphere"
    assert sol.triangles[0].area == 2 * math.pi
    assert r_of_solution(sol) == pytest.approx(r_value(sol.stats), abs=1e-12)


@pytest.mark.parametrize(
    "verts,thetas,cfg,cond",
    [
        ((0, 1, 1j), (0.3, 0.3, 1.7), C4, 8),
        ((0, 1, 1j), (0.3, 0.6, 0.3), C4, 7),
        ((0, "inf", 1), (0.3, 0.3, 0.3), C4, 2),
        ((0, 1), (0.0, 0.0), Configuration.of([0, 1, 0.5]), 5),
        ((0, 2, 1j), (0.1, 0.1, 0.1), C4, 1),
    ],
)
def test_validation_names_the_condition(verts, thetas, cfg, cond):
    rep = validate_s0(BoundaryPartition(verts, thetas), cfg)
    assert not rep.ok
    assert cond in rep.conditions()


def test_validation_rejects_repeated_vertex():
    rep = validate_s0(BoundaryPartition((0, 1, 0, 1j), (0.1,) * 4), C4)
    assert 3 in rep.conditions()


def test_point_inside_lune_is_counted():
    c = Configuration.of([0, 1, 0.5 - 0.1j])
    part = BoundaryPartition.from_curvature([0, 1], ll.theta_to_circle(math.pi / 2, 1.2).k)
    sol = build_solution(part, c)
    assert sol.lune_nbar[0] == 1
    assert r_of_solution(sol) == pytest.approx(r_value(sol.stats), abs=1e-12)
