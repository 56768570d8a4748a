import math

import numpy as np
import pytest

from ahlfors_h0 import lens_lune as ll
from ahlfors_h0.extremal_search import (
    SearchOptions,
    TupleProblem,
    WrongQ,
    best_empty_disk_ratio,
    compute_H0,
    entry_theta,
    enumerate_tuples,
    is_collinear,
    optimize_curvature,
    q3_closed_form,
)
from ahlfors_h0.functionals import FOUR_PI, Configuration, delta_Eq
from ahlfors_h0.sphere_geom import CircularArc, GeodesicChord, SpherePoint, rotation_matrix, stereographic, vdist
from ahlfors_h0.surface_builder import BoundaryPartition, build_solution, r_of_solution

E3 = Configuration.of([0, 1, "inf"])


def test_tuple_counts_for_three_points():
    c = Configuration.of([0, 1, 1j])
    pairs = [t for t in enumerate_tuples(c, 2, 2)]
    triples = [t for t in enumerate_tuples(c, 3, 3)]
    assert len(pairs) == 3
    assert len(triples) == 2
    assert set(triples) == {(0, 1, 2), (0, 2, 1)}


def test_antipodal_pairs_excluded():
    assert (0, 2) not in set(enumerate_tuples(E3))
    assert all(len(t) == 2 for t in enumerate_tuples(E3))


def test_tuple_order_is_deterministic():
    c = Configuration.of([0, 1, 1j, 2 + 1j])
    assert list(enumerate_tuples(c)) == list(enumerate_tuples(c))


def test_entry_angle_matches_circle_through_three_points():
    a, b = stereographic(0).vec, stereographic(1).vec
    w = stereographic(0.5 + 0.2j).vec
    th = entry_theta(a, b, w)
    # the arc with that cusp angle passes through w
    arc = CircularArc(GeodesicChord(stereographic(0), stereographic(1)), th)
    c, r = arc.circle
    assert abs(vdist(w, c) - r) < 1e-12


def test_closest_pair_reduces_to_lens_family():
    th_star, h_star = ll.max_h_theta(FOUR_PI, 3, math.pi / 2)
    cand = optimize_curvature((0, 1), E3)
    assert cand.value == pytest.approx(h_star, abs=1e-10)
    assert cand.thetas[0] == pytest.approx(th_star, abs=1e-9)
    for t in np.linspace(0.0, math.pi / 2, 7):
        k = ll.theta_to_circle(math.pi / 2, float(t)).k
        sol = build_solution(BoundaryPartition.from_curvature([0, 1], k), E3)
        val = (r_of_solution(sol) + FOUR_PI) / sol.stats.L
        assert val == pytest.approx(ll.h_family(FOUR_PI, 3, math.pi / 2, float(t)), abs=1e-10)


def test_piecewise_optimum_against_dense_grid():
    rng = np.random.default_rng(3)
    pts = [SpherePoint.from_vector(v) for v in rng.normal(size=(5, 3))]
    c = Configuration.of(pts)
    checked = 0
    for labels in list(enumerate_tuples(c))[:12]:
        try:
            prob = TupleProblem(c, labels)
        except ValueError:
            continue
        cand = optimize_curvature(labels, c, problem=prob)
        best = prob.value_at_zero()
        for lo, hi, counts, _, _ in prob.pieces():
            ks = np.linspace(lo, hi, 10**5 + 1)[1:]
            best = max(best, float(np.max(prob.objective(ks, counts))))
        assert cand.value >= best - 1e-6
        assert cand.value <= best + 1e-6
        checked += 1
    assert checked >= 5


def test_zero_curvature_always_considered():
    c = Configuration.of([0, 1, 1j])
    prob = TupleProblem(c, (0, 1))
    # two edges of length pi / 2, so the geodesic perimeter is pi
    assert prob.value_at_zero() == pytest.approx((prob.R_polygon + FOUR_PI) / math.pi, rel=1e-14)
    assert prob.value_at_zero() == pytest.approx(4.0, rel=1e-14)


def test_e3_search():
    rep = compute_H0(E3)
    th, h = ll.max_h_theta(FOUR_PI, 3, math.pi / 2)
    assert rep.H0 == pytest.approx(h, abs=1e-10)
    assert {w.labels for w in rep.winners} == {(0, 1), (1, 2)}
    assert rep.simplest.Q == 2
    assert rep.simplest.degmax == 2
    assert len(rep.simplest_ties) == 2
    assert rep.diagnostics["anomalies"] == []
    assert rep.diagnostics["winner_curvature_spread"] <= 1e-8
    # the common curvature is (q - 2) / H0 at the optimum
    assert rep.simplest.k == pytest.approx(1 / rep.H0, rel=1e-10)


def test_search_is_deterministic():
    c = Configuration.of([0, 1, 0.3 + 0.8j, -2 + 1j])
    a, b = compute_H0(c), compute_H0(c)
    assert a.H0 == b.H0
    assert [w.labels for w in a.winners] == [w.labels for w in b.winners]
    assert [w.k for w in a.winners] == [w.k for w in b.winners]


def test_search_is_rotation_invariant():
    c = Configuration.of([0, 1, 0.3 + 0.8j, -2 + 1j])
    rot = rotation_matrix([0.2, -1.0, 0.4], 2.1)
    assert compute_H0(c.rotated(rot)).H0 == pytest.approx(compute_H0(c).H0, rel=1e-9)


def test_sanity_bounds_on_random_sets():
    rng = np.random.default_rng(11)
    for q in (3, 4):
        pts = [SpherePoint.from_vector(v) for v in rng.normal(size=(q, 3))]
        c = Configuration.of(pts)
        rep = compute_H0(c)
        d = rep.diagnostics
        assert rep.H0 <= d["dufresnoy_bound"]
        assert rep.H0 > d["best_empty_disk_ratio"]
        assert all(w.k > 0 for w in rep.winners)
        # never below the best lens over a closest pair
        assert rep.H0 >= ll.max_h_theta(FOUR_PI, q, delta_Eq(c))[1] - 1e-9


def test_qprime_range_restricts_search():
    c = Configuration.of([0, 1, 0.3 + 0.8j, -2 + 1j])
    rep = compute_H0(c, SearchOptions(qprime_min=3, qprime_max=3))
    assert all(cand.Q == 3 for cand in rep.candidates)


def test_empty_disk_for_e3_is_hemisphere():
    ratio, rho = best_empty_disk_ratio(E3)
    assert rho == pytest.approx(math.pi / 2)
    assert ratio == pytest.approx(1.0)


def test_q3_closed_form_labels():
    r = q3_closed_form(E3)
    assert r.label == "exact"
    assert r.pair in {(0, 1), (1, 2)}
    assert q3_closed_form(Configuration.of([0, 1, 1j])).label == "lower bound"
    with pytest.raises(WrongQ):
        q3_closed_form(Configuration.of([0, 1, 1j, "inf"]))


def test_equally_spaced_collinear_triple():
    pts = [[math.cos(2 * math.pi * i / 3), math.sin(2 * math.pi * i / 3), 0.0] for i in range(3)]
    c = Configuration.of(pts)
    assert is_collinear(c)
    r = q3_closed_form(c)
    assert r.H0 == pytest.approx(ll.max_h_theta(FOUR_PI, 3, 2 * math.pi / 3)[1])
    assert compute_H0(c).H0 == pytest.approx(r.H0, abs=1e-8)


def test_small_gap_triple_has_unique_simplest_class():
    # 0, r, infinity with d(0, r) < pi / 2
    c = Configuration.of([0, 0.5, "inf"])
    rep = compute_H0(c)
    assert rep.simplest.labels == (0, 1)
    assert len(rep.simplest_ties) == 1
    assert rep.H0 == pytest.approx(q3_closed_form(c).H0, abs=1e-8)
