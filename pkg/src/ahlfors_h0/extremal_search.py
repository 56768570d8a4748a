"""Finite search for H0(E_q) over equal-curvature arc polygons.

For a vertex tuple the boundary is fixed once the common curvature k is
chosen, and the value of the standard surface is

    f(k) = (R(k) + 4 pi) / L(k).

The point counts inside the lunes only change at curvatures where an arc
passes through a point of E_q, so [0, k_max] splits into finitely many
pieces on which f is smooth.  On each piece dA/dL = 1/k for every lune, so

    f'(k) has the sign of (q - 2) - k f(k)

which makes every stationary point with f > 0 a strict maximum, and at such
a point f = (q - 2) / k.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np
from scipy.optimize import brentq

from . import lens_lune as ll
from .functionals import FOUR_PI, Configuration, SurfaceStats, delta_Eq, dufresnoy_bound
from .lens_lune import golden_max
from .sphere_geom import TOL_ON, chord_frame, cross3, unstereographic, vdist
from .surface_builder import (
    BoundaryPartition,
    DegenerateConfiguration,
    build_solution,
    deg_max_estimate,
    r_of_solution,
    validate_s0,
)


class NoFeasibleCurvature(ValueError):
    pass


class WrongQ(ValueError):
    pass


@dataclass
class Candidate:
    labels: tuple
    partition: BoundaryPartition
    k: float
    value: float
    stats: SurfaceStats
    attained: bool = True
    degmax: Optional[int] = None

    @property
    def Q(self) -> int:
        return len(self.labels)

    @property
    def R(self) -> float:
        return self.stats.R

    @property
    def thetas(self) -> tuple:
        return self.partition.thetas


@dataclass
class SearchOptions:
    qprime_min: int = 2
    qprime_max: Optional[int] = None
    allow_degenerate: bool = False
    rel_tol: float = 1e-9
    degmax_samples: int = 4096
    seed: int = 0


@dataclass
class SearchReport:
    H0: float
    winners: list
    simplest: Candidate
    simplest_ties: list
    candidates: list
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------- tuples


def enumerate_tuples(config: Configuration, qprime_min: int = 2, qprime_max: Optional[int] = None) -> Iterator[tuple]:
    """Index tuples of distinct points, one per class under cyclic rotation.

    Each class is represented by the rotation starting at its smallest
    index; reversed tuples are separate classes.  Tuples with an antipodal
    consecutive pair are dropped.
    """
    q = config.q
    hi = q if qprime_max is None else qprime_max
    if not (2 <= qprime_min <= hi <= q):
        raise ValueError(f"need 2 <= qprime_min <= qprime_max <= {q}")
    E = config.vectors
    far = [[vdist(E[i], E[j]) >= math.pi - TOL_ON for j in range(q)] for i in range(q)]
    for m in range(qprime_min, hi + 1):
        for first in range(q):
            for rest in itertools.permutations(range(first + 1, q), m - 1):
                t = (first,) + rest
                if any(far[t[i]][t[(i + 1) % m]] for i in range(m)):
                    continue
                yield t


# ---------------------------------------------------------------- one tuple


def entry_theta(a: np.ndarray, b: np.ndarray, w: np.ndarray) -> float:
    """Cusp angle of the arc over chord a -> b (bulging left) that passes through w.

    In a chart with a at 0 and b on the positive axis the arc is a circle
    through 0 and b, and the inscribed angle at w equals pi minus the cusp
    angle.
    """
    R = chord_frame(a, b)
    t = unstereographic(R @ b).real
    z = unstereographic(R @ w)
    psi = abs(np.angle((0 - z) / (t - z)))
    return math.pi - psi


class TupleProblem:
    """Everything about a vertex tuple that does not depend on k."""

    def __init__(self, config: Configuration, labels: tuple, allow_degenerate: bool = False, tol: float = TOL_ON):
        self.config = config
        self.labels = tuple(labels)
        self.tol = tol
        self.q = config.q
        E = config.vectors
        self.verts = [E[i] for i in labels]
        m = self.m = len(labels)
        self.deltas = np.array([vdist(self.verts[j], self.verts[(j + 1) % m]) for j in range(m)])
        self.tan_half = np.tan(self.deltas / 2)
        self.k_max = float(np.min(1.0 / self.tan_half))
        # polygon part via a k = 0 build
        base = build_solution(
            BoundaryPartition(tuple(self.verts), (0.0,) * m, self.labels), config, allow_degenerate, tol
        )
        self.base = base
        self.R_polygon = base.R_polygon
        self.chord_hits = np.array(base.chord_hits)
        # curvature at which each bulge-side point enters each lune
        self.entries: list[list[float]] = []
        for j in range(m):
            a, b = self.verts[j], self.verts[(j + 1) % m]
            ks = []
            for i in range(config.q):
                w = E[i]
                if vdist(w, a) <= tol or vdist(w, b) <= tol:
                    continue
                # bulge side of edge j is the right of a -> b
                s = float(np.dot(w, cross3(a, b)) / np.linalg.norm(cross3(a, b)))
                if s <= tol:
                    continue
                th = entry_theta(b, a, w)
                if th <= math.pi / 2 + 1e-15:
                    ks.append(math.sin(th) / self.tan_half[j])
            self.entries.append(sorted(ks))
        self.breakpoints = sorted({k for ks in self.entries for k in ks if 0 < k < self.k_max})

    def counts(self, k_inside: float) -> np.ndarray:
        """Lune point counts for curvatures in the open piece containing k_inside."""
        return np.array([sum(1 for e in ks if e < k_inside) for ks in self.entries])

    def pieces(self) -> list[tuple[float, float, np.ndarray, bool, bool]]:
        """(lo, hi, counts, lo_open, hi_open) for the smooth pieces of (0, k_max]."""
        cuts = [0.0] + self.breakpoints + [self.k_max]
        out = []
        for lo, hi in zip(cuts, cuts[1:]):
            if hi - lo <= 0:
                continue
            out.append((lo, hi, self.counts(0.5 * (lo + hi)), True, hi != self.k_max))
        return out

    def thetas(self, k):
        return ll.sine_to_theta(np.multiply.outer(np.asarray(k, dtype=float), self.tan_half))

    def objective(self, k, counts: np.ndarray):
        """f(k) with the lune counts frozen; accepts scalars or arrays of k > 0."""
        k = np.asarray(k, dtype=float)
        th = self.thetas(k)
        a = self.tan_half
        ss = np.sqrt(np.sin(th) ** 2 + a * a)
        at = np.where(th >= math.pi / 2, math.pi / 2, np.arctan2(ss, np.cos(th)))
        Lj = 2 * a / ss * at
        Aj = 2 * th - Lj * np.sin(th) / a
        L = Lj.sum(axis=-1)
        R = self.R_polygon + ((self.q - 2) * Aj).sum(axis=-1) - FOUR_PI * (counts + self.chord_hits).sum()
        return (R + FOUR_PI) / L

    def value_at_zero(self) -> float:
        return (self.R_polygon + FOUR_PI) / float(self.deltas.sum())

    def stats_at(self, k: float, counts: np.ndarray) -> SurfaceStats:
        th = self.thetas(k)
        A = sum(f.area for f in self.base.triangles) + sum(
            ll.lune_area(float(d), float(t)) for d, t in zip(self.deltas, th)
        )
        L = sum(ll.lune_length(float(d), float(t)) for d, t in zip(self.deltas, th))
        nbar = sum(self.base.tri_nbar) + sum(self.base.diag_hits) + int(counts.sum() + self.chord_hits.sum())
        return SurfaceStats(A=A, L=L, nbar=nbar, q=self.q)


def _maximise_piece(prob: TupleProblem, lo: float, hi: float, counts, grid: int = 32):
    q2 = prob.q - 2

    def f(k):
        return float(prob.objective(k, counts))

    a = max(lo, 1e-300)
    ks = np.linspace(a, hi, grid + 1)
    vals = prob.objective(ks, counts)
    i = int(np.argmax(vals))
    blo, bhi = float(ks[max(0, i - 1)]), float(ks[min(grid, i + 1)])
    x, fx = golden_max(f, blo, bhi, tol=1e-13 * max(1.0, hi))

    def g(k):
        return k * f(k) - q2

    # polish on the stationarity condition f = (q - 2) / k
    if blo < x < bhi:
        step = max(1e-12, 1e-6 * (bhi - blo))
        for _ in range(12):
            u, v = max(blo, x - step), min(bhi, x + step)
            if g(u) < 0 < g(v):
                xr = brentq(g, u, v, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=300)
                fr = f(xr)
                if fr >= fx - 1e-14 * (1 + abs(fx)):
                    x, fx = xr, fr
                break
            step *= 4
    if vals[i] > fx:
        x, fx = float(ks[i]), float(vals[i])
    return x, fx


def optimize_curvature(
    labels: tuple,
    config: Configuration,
    tol: float = TOL_ON,
    allow_degenerate: bool = False,
    problem: Optional[TupleProblem] = None,
) -> Candidate:
    """Best common curvature for one vertex tuple.

    k = 0 (geodesic polygon) is always evaluated.  A supremum reached at a
    curvature where an arc runs through a point of E_q is reported with
    attained=False, its value being the limit from the feasible side.
    """
    prob = problem or TupleProblem(config, labels, allow_degenerate, tol)
    best: Optional[tuple] = None
    for lo, hi, counts, lo_open, hi_open in prob.pieces():
        x, fx = _maximise_piece(prob, lo, hi, counts)
        at_edge = (x <= lo and lo_open) or (x >= hi and hi_open)
        if at_edge and x >= hi:
            x = hi
        key = (fx, -x)
        if best is None or key > best[0]:
            best = (key, x, fx, counts, not at_edge)
    verts = tuple(prob.verts)
    zero_val = prob.value_at_zero()
    if best is None or zero_val > best[2]:
        part = BoundaryPartition(verts, (0.0,) * prob.m, labels)
        if not validate_s0(part, config, tol).ok:
            if best is None:
                raise NoFeasibleCurvature(f"tuple {labels} has no feasible curvature")
        else:
            sol = build_solution(part, config, allow_degenerate, tol)
            R = r_of_solution(sol)
            return Candidate(labels, part, 0.0, (R + FOUR_PI) / sol.stats.L, sol.stats)
    _, k, fx, counts, attained = best
    part = BoundaryPartition.from_curvature(verts, k, labels)
    if attained:
        rep = validate_s0(part, config, tol)
        if not rep.ok:
            attained = False
    stats = prob.stats_at(k, counts)
    if attained:
        sol = build_solution(part, config, allow_degenerate, tol)
        R = r_of_solution(sol)
        val = (R + FOUR_PI) / sol.stats.L
        if abs(val - fx) > 1e-9 * (1 + abs(fx)):
            raise ll.InternalMismatch(f"objective {fx!r} disagrees with built surface {val!r}")
        stats = sol.stats
    return Candidate(labels, part, k, fx, stats, attained=attained)


# ---------------------------------------------------------------- whole search


def best_empty_disk_ratio(config: Configuration) -> tuple[float, float]:
    """Largest R/L over closed disks of radius <= pi/2 with no point of E_q inside.

    Such a disk of radius rho gives (q-2)(1-cos rho)/sin rho = (q-2) tan(rho/2).
    Candidate centres are the circumcentres of point triples (both poles)
    and pair midpoints.  Returns (ratio, rho).
    """
    E = config.vectors
    q = config.q
    centres = []
    for i, j, k in itertools.combinations(range(q), 3):
        n = cross3(E[j] - E[i], E[k] - E[i])
        nn = np.linalg.norm(n)
        if nn > 1e-14:
            centres += [n / nn, -n / nn]
    for i, j in itertools.combinations(range(q), 2):
        s = E[i] + E[j]
        if np.linalg.norm(s) > 1e-14:
            centres.append(s / np.linalg.norm(s))
    rho = 0.0
    for c in centres:
        r = min(min(vdist(c, e) for e in E), math.pi / 2)
        rho = max(rho, r)
    return (q - 2) * math.tan(rho / 2), rho


def compute_H0(config: Configuration, options: Optional[SearchOptions] = None) -> SearchReport:
    opt = options or SearchOptions()
    t0 = time.perf_counter()
    q = config.q
    cands: list[Candidate] = []
    skipped, failed = [], []
    n_breaks = 0
    for labels in enumerate_tuples(config, opt.qprime_min, opt.qprime_max or q):
        try:
            prob = TupleProblem(config, labels, opt.allow_degenerate)
        except DegenerateConfiguration as exc:
            skipped.append((labels, str(exc)))
            continue
        n_breaks += len(prob.breakpoints)
        try:
            cands.append(optimize_curvature(labels, config, allow_degenerate=opt.allow_degenerate, problem=prob))
        except NoFeasibleCurvature as exc:
            failed.append((labels, str(exc)))
    if not cands:
        raise NoFeasibleCurvature("no tuple produced a feasible surface")
    H0 = max(c.value for c in cands)
    winners = [c for c in cands if c.value >= H0 - opt.rel_tol * abs(H0)]
    anomalies = []
    for c in winners:
        if c.k <= 0:
            anomalies.append(f"winner {c.labels} has a geodesic boundary")
        if not c.attained:
            anomalies.append(f"winner {c.labels} is a supremum not attained inside the family")
        sol = build_solution(c.partition, config, opt.allow_degenerate) if c.attained else None
        if sol is not None:
            c.degmax = deg_max_estimate(sol, opt.degmax_samples, opt.seed)
    disk_ratio, disk_rho = best_empty_disk_ratio(config)
    if not H0 > disk_ratio:
        anomalies.append(f"H0={H0!r} does not beat the best empty disk {disk_ratio!r}")
    bound = dufresnoy_bound(config)
    if H0 > bound:
        anomalies.append(f"H0={H0!r} exceeds the Dufresnoy bound {bound!r}")
    simplest, ties = _simplest(winners, opt.rel_tol)
    diag = {
        "tuples_evaluated": len(cands),
        "tuples_skipped_degenerate": [list(s[0]) for s in skipped],
        "tuples_infeasible": [list(s[0]) for s in failed],
        "breakpoints": n_breaks,
        "delta_Eq": delta_Eq(config),
        "dufresnoy_bound": bound,
        "best_empty_disk_ratio": disk_ratio,
        "best_empty_disk_radius": disk_rho,
        "winner_curvature_spread": max(c.k for c in winners) - min(c.k for c in winners),
        "anomalies": anomalies,
        "seconds": time.perf_counter() - t0,
    }
    return SearchReport(H0, winners, simplest, ties, cands, diag)


def _simplest(winners: list, rel_tol: float):
    Qmin = min(c.Q for c in winners)
    pool = [c for c in winners if c.Q == Qmin]
    Lmin = min(c.stats.L for c in pool)
    pool = [c for c in pool if c.stats.L <= Lmin * (1 + rel_tol)]
    dmin = min((c.degmax if c.degmax is not None else 10**9) for c in pool)
    ties = [c for c in pool if (c.degmax if c.degmax is not None else 10**9) == dmin]
    return ties[0], ties


def is_collinear(config: Configuration, tol: float = TOL_ON) -> bool:
    """True if all points lie on one great circle."""
    E = config.vectors
    for i, j in itertools.combinations(range(config.q), 2):
        n = cross3(E[i], E[j])
        nn = np.linalg.norm(n)
        if nn > 1e-6:
            n /= nn
            return bool(np.all(np.abs(E @ n) <= tol))
    return True


@dataclass
class Q3Result:
    H0: float
    theta_star: float
    pair: tuple
    label: str  # "exact" or "lower bound"


def q3_closed_form(config: Configuration) -> Q3Result:
    """Lens value over the closest pair for q = 3."""
    if config.q != 3:
        raise WrongQ(f"needs exactly three points, got {config.q}")
    E = config.vectors
    pairs = sorted(itertools.combinations(range(3), 2), key=lambda p: vdist(E[p[0]], E[p[1]]))
    pair = pairs[0]
    delta = vdist(E[pair[0]], E[pair[1]])
    th, h = ll.max_h_theta(FOUR_PI, 3, delta)
    return Q3Result(h, th, pair, "exact" if is_collinear(config) else "lower bound")
