"""Randomised property suites for the closed forms and the ledger.

Each suite draws its instances from a numpy Generator seeded by the caller,
so a (suite, seed, trials) triple always replays the same instances.  A
suite returns a SuiteResult whose ``worst`` is the largest amount by which
any checked inequality was violated (negative means every check had that
much room to spare).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import lens_lune as ll
from .functionals import (
    FOUR_PI,
    BranchDatum,
    Configuration,
    RHViolation,
    SurfaceStats,
    branch_data,
    flag_patterns,
    rh_audit,
    sew_ledger,
    slit_sphere_R,
    slit_sphere_stats,
)
from .sphere_geom import (
    CircularArc,
    GeodesicChord,
    PiecewiseCircularCurve,
    SpherePoint,
    contour_area,
    lens_boundary,
    slerp,
    stereographic,
)
from .surface_builder import fibonacci_sphere, on_open_path

TOL = 1e-9


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    checks: int = 0
    failures: int = 0
    worst: float = -math.inf
    skipped: int = 0
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.checks > 0

    def check(self, excess: float, tol: float = TOL, note: str = "") -> None:
        """Record one inequality; ``excess`` > tol is a failure."""
        self.checks += 1
        if excess > self.worst:
            self.worst = excess
        if not excess <= tol:
            self.failures += 1
            if len(self.notes) < 5:
                self.notes.append(note or f"excess {excess:.3g}")

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "trials": self.trials,
            "checks": self.checks,
            "failures": self.failures,
            "worst": self.worst,
            "skipped": self.skipped,
            "passed": self.passed,
            "notes": list(self.notes),
        }


def lune_theta_for_length(delta: float, length: float, major: bool = False) -> float:
    """Cusp angle of the lune over a chord of length delta whose arc has the given length."""
    top = math.pi - 1e-12 if major else ll.HALF_PI
    lo = ll.HALF_PI if major else 0.0

    def g(t):
        return ll.lune_length(delta, t, allow_major=True) - length

    glo, ghi = g(lo), g(top)
    if glo > 0 or ghi < 0:
        raise ll.DomainError("no cusp angle gives that arc length")
    if glo == 0:
        return lo
    if ghi == 0:
        return top
    return brentq(g, lo, top, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


# ------------------------------------------------------------------ lens suites


def suite_area(rng: np.random.Generator, trials: int = 1000) -> SuiteResult:
    """Equal perimeter, shorter chord, larger cusp angle: strictly more area."""
    res = SuiteResult("area")
    while res.trials < trials:
        d1 = rng.uniform(0.05, math.pi - 0.05)
        d2 = rng.uniform(0.02, d1)
        t1 = rng.uniform(0.0, ll.HALF_PI)
        L1 = ll.L_lens(d1, t1)
        if not L1 < ll.L_lens(d2, ll.HALF_PI):
            res.skipped += 1
            continue
        t2 = ll.equal_perimeter_theta(d2, L1)
        res.trials += 1
        res.check(ll.A_lens(d1, t1) - ll.A_lens(d2, t2), note=f"d1={d1!r} t1={t1!r} d2={d2!r}")
        res.check(t1 - t2, note=f"theta order d1={d1!r} t1={t1!r} d2={d2!r}")
    return res


def suite_area2(rng: np.random.Generator, trials: int = 1000, shrink: float = 1e-3) -> SuiteResult:
    """An interior optimum improves when the chord shrinks at fixed perimeter."""
    res = SuiteResult("area2")
    while res.trials < trials:
        q = int(rng.integers(3, 9))
        A0 = rng.uniform(-FOUR_PI, 2 * FOUR_PI)
        d0 = rng.uniform(0.05, math.pi - 0.05)
        t0, h0 = ll.max_h_theta(A0, q, d0, grid=64)
        if not (1e-6 < t0 < ll.HALF_PI - 1e-6):
            res.skipped += 1
            continue
        L0 = ll.L_lens(d0, t0)
        d = d0 * (1 - shrink)
        if not L0 < ll.L_lens(d, ll.HALF_PI):
            res.skipped += 1
            continue
        td = ll.equal_perimeter_theta(d, L0)
        res.trials += 1
        res.check(h0 - ll.h_family(A0, q, d, td), note=f"A0={A0!r} q={q} d0={d0!r}")
    return res


def suite_disk(rng: np.random.Generator, trials: int = 1000, step: float = 1e-6) -> SuiteResult:
    """Derivative of the disk ratio: formula against central differences, and its sign pattern."""
    res = SuiteResult("disk")
    for _ in range(trials):
        q = int(rng.integers(3, 13))
        nbar = int(rng.integers(0, q + 1))
        d = rng.uniform(0.01, math.pi - 0.01)
        res.trials += 1
        dh = ll.dh_disk(q, nbar, d)
        fd = (ll.h_disk(q, nbar, d + step) - ll.h_disk(q, nbar, d - step)) / (2 * step)
        res.check(abs(fd - dh) / max(1.0, abs(dh)) - 1e-5, tol=0.0, note=f"fd q={q} n={nbar} d={d!r}")
        crit = ll.disk_critical_delta(q)
        if nbar == 0 and abs(d - crit) < 1e-4:
            continue
        expect = -1.0 if (nbar == 0 and d < crit) else 1.0
        # the sign of (q-2) - (q-2n) cos(d/2) is read off the numerator to dodge the 1/sin^2 scale
        num = (q - 2) - (q - 2 * nbar) * math.cos(d / 2)
        res.check(-expect * num, tol=0.0, note=f"sign q={q} n={nbar} d={d!r}")
        res.check(-expect * fd, tol=0.0, note=f"fd sign q={q} n={nbar} d={d!r}")
    return res


def suite_two_circle(rng: np.random.Generator, trials: int = 1000, grid: int = 200) -> SuiteResult:
    """Splitting a perimeter L into two disks: total area decreases as the split evens out."""
    res = SuiteResult("two-circle")
    for _ in range(trials):
        L = rng.uniform(1e-3, 2 * math.pi - 1e-6)
        xs = np.linspace(0.0, L / 2, grid + 1)
        vals = [ll.disk_area_from_perimeter(float(x)) + ll.disk_area_from_perimeter(float(L - x)) for x in xs]
        res.trials += 1
        worst = max(b - a for a, b in zip(vals, vals[1:]))
        res.check(worst, tol=0.0, note=f"L={L!r}")
    return res


def _lune_pair_area(d1, d2, l1, l2, major=False):
    t1 = lune_theta_for_length(d1, l1, major)
    t2 = lune_theta_for_length(d2, l2, major)
    return ll.lune_area(d1, t1, True) + ll.lune_area(d2, t2, True)


def suite_two_curvature(rng: np.random.Generator, trials: int = 1000, rel_step: float = 1e-4) -> SuiteResult:
    """Moving arc length to the more curved of two lunes lowers their total area."""
    res = SuiteResult("two-curvature")
    while res.trials < trials:
        d1, d2 = rng.uniform(0.1, math.pi - 0.1, 2)
        t1, t2 = rng.uniform(0.05, ll.HALF_PI - 0.05, 2)
        k1, k2 = math.sin(t1) / math.tan(d1 / 2), math.sin(t2) / math.tan(d2 / 2)
        if k1 < k2:
            d1, d2, t1, t2, k1, k2 = d2, d1, t2, t1, k2, k1
        if k1 == k2:
            res.skipped += 1
            continue
        l1, l2 = ll.lune_length(d1, t1), ll.lune_length(d2, t2)
        room = min(l1 - d1, l2 - d2, ll.lune_length(d1, ll.HALF_PI) - l1, ll.lune_length(d2, ll.HALF_PI) - l2)
        eps = min(rel_step * min(l1, l2), 0.5 * room)
        plus = _lune_pair_area(d1, d2, l1 + eps, l2 - eps)
        minus = _lune_pair_area(d1, d2, l1 - eps, l2 + eps)
        res.trials += 1
        res.check(plus - minus, note=f"d=({d1!r},{d2!r}) t=({t1!r},{t2!r})")
    return res


def suite_two_curvature_major(rng: np.random.Generator, trials: int = 1000, rel_step: float = 1e-3) -> SuiteResult:
    """Two major arcs of equal curvature: any length transfer increases the total area."""
    res = SuiteResult("two-curvature-major")
    while res.trials < trials:
        d1, d2 = rng.uniform(0.2, math.pi - 0.2, 2)
        t1 = rng.uniform(ll.HALF_PI + 0.05, math.pi - 0.1)
        k = math.sin(t1) / math.tan(d1 / 2)
        s2 = k * math.tan(d2 / 2)
        if not s2 < math.sin(0.1):
            res.skipped += 1
            continue
        t2 = math.pi - math.asin(s2)
        l1 = ll.lune_length(d1, t1, True)
        l2 = ll.lune_length(d2, t2, True)
        room = min(
            min(l - ll.lune_length(d, ll.HALF_PI), ll.lune_length(d, math.pi - 1e-12, True) - l)
            for d, l in ((d1, l1), (d2, l2))
        )
        eps = min(rel_step * min(l1, l2), 0.5 * room)
        base = _lune_pair_area(d1, d2, l1, l2, major=True)
        res.trials += 1
        for sgn in (1, -1):
            moved = _lune_pair_area(d1, d2, l1 + sgn * eps, l2 - sgn * eps, major=True)
            res.check(base - moved, note=f"d=({d1!r},{d2!r}) t1={t1!r}")
    return res


# ------------------------------------------------------------------ curves


def random_arc_polygon(rng: np.random.Generator, n: int | None = None) -> PiecewiseCircularCurve:
    """Convex geodesic polygon inscribed in a small circle, each side bulged outwards.

    The vertices sit on the image of a chart circle around the origin, so the
    whole curve stays well away from infinity and encloses the origin side.
    """
    n = n or int(rng.integers(3, 8))
    centre = complex(*rng.uniform(-0.25, 0.25, 2))
    radius = rng.uniform(0.05, 0.7)
    angles = np.sort(rng.uniform(0, 2 * math.pi, n))
    pts = [stereographic(centre + radius * complex(math.cos(a), math.sin(a))) for a in angles]
    segs = []
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        theta = rng.uniform(0.0, ll.HALF_PI) if rng.random() < 0.8 else 0.0
        segs.append(CircularArc(GeodesicChord(b, a), theta, reversed=True))
    return PiecewiseCircularCurve(segs)


def suite_isoperimetric(rng: np.random.Generator, trials: int = 1000) -> SuiteResult:
    """Enclosed area never beats the disk with the same perimeter."""
    res = SuiteResult("isoperimetric")
    while res.trials < trials:
        try:
            curve = random_arc_polygon(rng)
        except ValueError:
            res.skipped += 1
            continue
        L = curve.length
        if not L < 2 * math.pi:
            res.skipped += 1
            continue
        A = contour_area(curve)
        res.trials += 1
        res.check(A - ll.disk_area_from_perimeter(L), tol=1e-6, note=f"L={L!r} A={A!r}")
        res.check(-A, tol=1e-9, note=f"negative area {A!r}")
    return res


def suite_lens_oracle(rng: np.random.Generator, trials: int = 200) -> SuiteResult:
    """Closed-form lens area and length against quadrature and circle geometry."""
    res = SuiteResult("lens-oracle")
    south = SpherePoint(0.0, 0.0, -1.0).vec
    for _ in range(trials):
        d = rng.uniform(0.1, math.pi - 0.1)
        t = rng.uniform(0.01, ll.HALF_PI)
        # chord centred on the origin, direction random; keeps infinity outside the lens
        phi = rng.uniform(0, 2 * math.pi)
        axis = np.array([math.cos(phi), math.sin(phi), 0.0])
        a = SpherePoint.from_vector(slerp(south, axis, -d / 2 / (math.pi / 2)))
        b = SpherePoint.from_vector(slerp(south, axis, d / 2 / (math.pi / 2)))
        chord = GeodesicChord(a, b)
        area = contour_area(lens_boundary(chord, t), target=1e-11)
        circ = ll.theta_to_circle(d, t)
        res.trials += 1
        res.check(abs(ll.A_lens(d, t) - area) - 1e-8, tol=0.0, note=f"area d={d!r} t={t!r}")
        res.check(abs(ll.L_lens(d, t) / 2 - circ.arc_length) - 1e-10, tol=0.0, note=f"length d={d!r} t={t!r}")
    return res


# ------------------------------------------------------------------ ledger


def suite_rh(rng: np.random.Generator | None = None, trials: int = 0, max_degree: int = 10, qs=(3, 4, 5, 7)) -> SuiteResult:
    """Exhaustive branch data for small degrees.  ``rng`` and ``trials`` are unused."""
    res = SuiteResult("rh")
    for q in qs:
        config = Configuration(tuple(_spread(q)))
        for d in range(1, max_degree + 1):
            for mults in branch_data(d):
                for flags in flag_patterns(mults):
                    try:
                        audit = rh_audit(BranchDatum(d, mults, flags), config)
                    except RHViolation:
                        res.skipped += 1
                        continue
                    res.trials += 1
                    res.check(float(audit.nbar_min - audit.nbar), tol=0.0, note=f"nbar d={d} {mults} {flags}")
                    res.check(audit.R - audit.R_max, tol=0.0, note=f"R d={d} {mults} {flags}")
                    hits_equality = audit.R == audit.R_max
                    res.check(0.0 if hits_equality == audit.equality else 1.0, tol=0.0, note=f"equality d={d} {mults} {flags}")
            # a sum off by one must be refused
            try:
                rh_audit(BranchDatum(d, (2,) * (2 * d - 1), (False,) * (2 * d - 1)), config)
                res.check(1.0, tol=0.0, note=f"bad total accepted at d={d}")
            except RHViolation:
                res.check(-1.0, tol=0.0)
    return res


def _spread(q: int) -> list:
    """q points on the sphere, Fibonacci lattice, so the separation bound holds."""
    return [SpherePoint.from_vector(v) for v in fibonacci_sphere(q)]


def suite_ledger(rng: np.random.Generator, trials: int = 100) -> SuiteResult:
    """Sewing two lunes reproduces the lens; slit spheres agree with the direct ledger."""
    res = SuiteResult("ledger")
    for _ in range(trials):
        d = rng.uniform(0.05, math.pi - 0.05)
        t = rng.uniform(0.0, ll.HALF_PI)
        q = int(rng.integers(3, 9))
        lune = SurfaceStats(A=ll.lune_area(d, t), L=ll.lune_length(d, t) + d, nbar=0, q=q)
        sewn = sew_ledger(lune, lune, d, 0)
        lens = SurfaceStats(A=ll.A_lens(d, t), L=ll.L_lens(d, t), nbar=0, q=q)
        res.trials += 1
        res.check(abs(sewn.A - lens.A), tol=0.0, note=f"sewn area d={d!r} t={t!r}")
        res.check(abs(sewn.L - lens.L) - 4 * np.finfo(float).eps * lens.L, tol=0.0, note=f"sewn length d={d!r} t={t!r}")
        res.check(abs(sewn.R - lens.R), tol=0.0)

        pts, interior, ends, glen = _slit_instance(rng, q)
        config = Configuration(tuple(pts))
        direct = slit_sphere_stats(config, glen, interior, ends).R
        res.check(abs(direct - slit_sphere_R(config, interior, ends)), tol=0.0, note=f"slit q={q}")
    return res


def _slit_instance(rng, q):
    """A random chord plus q points, some placed on it; returns the hit counts."""
    while True:
        a = SpherePoint.from_vector(rng.normal(size=3))
        b = SpherePoint.from_vector(rng.normal(size=3))
        glen = float(math.acos(np.clip(a.vec @ b.vec, -1, 1)))
        if not 0.3 < glen < math.pi - 0.3:
            continue
        ends = int(rng.integers(0, 3))
        interior = int(rng.integers(0, q - ends + 1))
        pts = [a, b][:ends]
        ts = np.sort(rng.uniform(0.1, 0.9, interior))
        pts += [SpherePoint.from_vector(slerp(a.vec, b.vec, float(s))) for s in ts]
        while len(pts) < q:
            pts.append(SpherePoint.from_vector(rng.normal(size=3)))
        try:
            Configuration(tuple(pts))
        except ValueError:
            continue
        hits_int = sum(on_open_path(p.vec, [a.vec, b.vec], 1e-9) for p in pts)
        hits_end = sum(min(np.linalg.norm(p.vec - a.vec), np.linalg.norm(p.vec - b.vec)) < 1e-12 for p in pts)
        if hits_int != interior or hits_end != ends:
            continue
        return pts, interior, ends, glen


def suite_lens_lune_identities(rng: np.random.Generator, trials: int = 1000) -> SuiteResult:
    """Quotient and expanded ratio forms, curvature round trips, monotone L and A."""
    res = SuiteResult("lens-identities")
    for _ in range(trials):
        d = rng.uniform(0.01, math.pi - 0.01)
        t = rng.uniform(0.0, ll.HALF_PI)
        res.trials += 1
        c = ll.theta_to_circle(d, t)
        res.check(abs(ll.curvature_to_theta(d, c.k) - t) - 1e-12, tol=0.0)
        res.check(abs(math.sin(d / 2) - math.sin(c.r) * math.sin(c.phi / 2)) - 1e-12, tol=0.0)
        t2 = min(ll.HALF_PI, t + 1e-3)
        if t2 > t:
            res.check(ll.L_lens(d, t) - ll.L_lens(d, t2), tol=0.0)
            res.check(ll.A_lens(d, t) - ll.A_lens(d, t2), tol=0.0)
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "area": suite_area,
    "area2": suite_area2,
    "disk": suite_disk,
    "two-circle": suite_two_circle,
    "two-curvature": suite_two_curvature,
    "two-curvature-major": suite_two_curvature_major,
    "isoperimetric": suite_isoperimetric,
    "lens-oracle": suite_lens_oracle,
    "lens-identities": suite_lens_lune_identities,
    "ledger": suite_ledger,
    "rh": suite_rh,
}


def run_suite(name: str, seed: int = 0, trials: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rng = np.random.default_rng(seed)
    fn = SUITES[name]
    return fn(rng) if trials is None else fn(rng, trials)
