import math

import numpy as np
import pytest

from ahlfors_h0 import lens_lune as ll

FOUR_PI = 4 * math.pi
HP = math.pi / 2


def test_half_circle_lens_length_and_area():
    assert ll.L_lens(HP, HP) == pytest.approx(math.sqrt(2) * math.pi, abs=1e-12)
    assert ll.A_lens(HP, HP) == pytest.approx(2 * math.pi - math.sqrt(2) * math.pi, abs=1e-12)
    assert ll.disk_area_from_perimeter(ll.L_lens(HP, HP)) == pytest.approx(ll.A_lens(HP, HP), abs=1e-12)


@pytest.mark.parametrize("delta", [0.01, 0.5, 1.5, 3.0])
def test_geodesic_lens_is_doubled_chord(delta):
    assert ll.L_lens(delta, 0.0) == pytest.approx(2 * delta, rel=1e-14)
    assert ll.A_lens(delta, 0.0) == 0.0


def test_length_matches_circle_geometry():
    c = ll.theta_to_circle(0.8, 0.3)
    assert ll.L_lens(0.8, 0.3) == pytest.approx(2 * c.arc_length, abs=1e-10)


def test_half_circle_circle_params():
    c = ll.theta_to_circle(HP, HP)
    assert c.k == pytest.approx(1.0, abs=1e-15)
    assert c.r == pytest.approx(math.pi / 4, abs=1e-15)
    assert c.arc_length == pytest.approx(ll.L_lens(HP, HP) / 2, abs=1e-14)


def test_geodesic_circle_params():
    c = ll.theta_to_circle(1.0, 0.0)
    assert c.k == 0.0 and c.r == HP
    assert ll.curvature_to_theta(1.0, 0.0) == 0.0


def test_curvature_round_trip_grid():
    worst = 0.0
    for d in np.linspace(0.01, math.pi - 0.01, 100):
        for t in np.linspace(0.0, HP, 100):
            k = ll.theta_to_circle(float(d), float(t)).k
            worst = max(worst, abs(ll.curvature_to_theta(float(d), k) - t))
    assert worst <= 1e-12


def test_curvature_above_half_circle_rejected():
    with pytest.raises(ll.DomainError):
        ll.curvature_to_theta(1.0, 1.01 * ll.k_max(1.0))


def test_snap_at_half_circle():
    d = 2.1
    assert ll.curvature_to_theta(d, ll.k_max(d)) == HP


@pytest.mark.parametrize("bad", [(0.0, 0.3), (math.pi, 0.3), (1.0, -0.1), (1.0, 1.6)])
def test_domain(bad):
    with pytest.raises(ll.DomainError):
        ll.L_lens(*bad)


def test_major_extension_is_continuous():
    d = 1.3
    below = ll.L_lens(d, HP - 1e-9, allow_major=True)
    above = ll.L_lens(d, HP + 1e-9, allow_major=True)
    assert above > below and above - below < 1e-8


def test_h_family_known_values():
    assert ll.h_family(FOUR_PI, 3, HP, 0.0) == pytest.approx(4.0, abs=1e-12)
    assert ll.h_family(FOUR_PI, 3, HP, HP) == pytest.approx(3 * math.sqrt(2) - 1, abs=1e-12)


@pytest.mark.parametrize("q", [3, 5, 9])
def test_h_family_without_offset(q):
    d, t = 0.9, 0.7
    assert ll.h_family(0.0, q, d, t) == pytest.approx((q - 2) * ll.A_lens(d, t) / ll.L_lens(d, t), rel=1e-13)


def test_max_h_theta_interior_gain():
    th, h = ll.max_h_theta(FOUR_PI, 3, HP)
    assert 0 < th < HP
    assert h > 4.0


def test_max_h_theta_against_dense_grid():
    ts = np.linspace(0, HP, 10**6 + 1)
    a = math.tan(HP / 2)
    s = np.sqrt(np.sin(ts) ** 2 + a * a)
    at = np.arctan2(s, np.cos(ts))
    h = (math.pi + ts) * s / (a * at) - np.sin(ts) / a
    th, hs = ll.max_h_theta(FOUR_PI, 3, HP)
    assert abs(hs - h.max()) < 1e-6
    assert hs >= h.max() - 1e-15


def test_optimum_satisfies_curvature_identity():
    # at an interior optimum h sin(theta) = (q - 2) tan(delta / 2)
    for A0, q, d in [(FOUR_PI, 3, HP), (FOUR_PI, 5, 0.7), (2.0, 4, 2.2)]:
        th, h = ll.max_h_theta(A0, q, d)
        if th >= HP:
            # h still increasing at the half circle, so the maximum sits on the endpoint
            assert h * math.sin(th) < (q - 2) * math.tan(d / 2)
            continue
        assert h * math.sin(th) == pytest.approx((q - 2) * math.tan(d / 2), rel=1e-10)


def test_max_h_theta_negative_offset():
    A0, q, d = -50.0, 3, 1.0
    th, h = ll.max_h_theta(A0, q, d)
    grid = [ll.h_family(A0, q, d, float(t)) for t in np.linspace(0, HP, 20001)]
    assert h >= max(grid) - 1e-12
    assert abs(h - max(grid)) < 1e-6


def test_disk_area_endpoints():
    assert ll.disk_area_from_perimeter(0.0) == 0.0
    assert ll.disk_area_from_perimeter(2 * math.pi) == pytest.approx(2 * math.pi, abs=1e-15)
    with pytest.raises(ll.DomainError):
        ll.disk_area_from_perimeter(7.0)


def test_disk_ratio_critical_diameter():
    d = ll.disk_critical_delta(3)
    assert d == pytest.approx(2 * math.acos(1 / 3), abs=1e-15)
    assert abs(ll.dh_disk(3, 0, d)) < 1e-14
    assert ll.dh_disk(3, 0, d - 0.1) < 0 < ll.dh_disk(3, 0, d + 0.1)


def test_disk_ratio_increases_with_points_inside():
    for d in np.linspace(0.05, math.pi - 0.05, 50):
        for q in (3, 6):
            for n in range(1, q + 1):
                assert ll.dh_disk(q, n, float(d)) > 0


def test_disk_ratio_matches_ratio_form():
    # (R + 4 pi) / L with R = (q - 2) A - 4 pi n for a cap of diameter d
    q, n, d = 4, 1, 1.7
    A = 2 * math.pi * (1 - math.cos(d / 2))
    L = 2 * math.pi * math.sin(d / 2)
    assert ll.h_disk(q, n, d) == pytest.approx(((q - 2) * A - FOUR_PI * n + FOUR_PI) / L, rel=1e-13)
    assert ll.h_disk(q, n, d) == pytest.approx(ll.h_family(FOUR_PI * (1 - n), q, d, HP), rel=1e-12)


def test_equal_perimeter_theta():
    t = ll.equal_perimeter_theta(1.0, ll.L_lens(1.0, 0.8))
    assert t == pytest.approx(0.8, abs=1e-11)
    with pytest.raises(ll.DomainError):
        ll.equal_perimeter_theta(1.0, 1.5)


def test_golden_max_finds_endpoint():
    x, fx = ll.golden_max(lambda t: t, 0.0, 1.0)
    assert x == 1.0 and fx == 1.0


def test_lens_spec_checks_domain():
    s = ll.LensSpec(1.0, 0.5)
    assert s.length == ll.L_lens(1.0, 0.5)
    with pytest.raises(ll.DomainError):
        ll.LensSpec(1.0, 2.0)
