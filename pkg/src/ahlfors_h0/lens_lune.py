"""Closed forms for symmetric lenses, single lunes and disks.

A lens over a geodesic chord of length delta is two lunes glued along the
chord, each bounded by a circular arc meeting the chord at the cusp angle
theta.  Throughout, a = tan(delta/2) and s = sqrt(sin^2 theta + a^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

TWO_PI = 2 * math.pi
HALF_PI = math.pi / 2
GOLDEN = (math.sqrt(5) - 1) / 2


class DomainError(ValueError):
    pass


class InternalMismatch(ArithmeticError):
    pass


@dataclass(frozen=True)
class LensSpec:
    delta: float
    theta: float

    def __post_init__(self):
        _check(self.delta, self.theta)

    @property
    def length(self) -> float:
        return L_lens(self.delta, self.theta)

    @property
    def area(self) -> float:
        return A_lens(self.delta, self.theta)


@dataclass(frozen=True)
class ArcCircleParams:
    r: float
    phi: float
    k: float

    @property
    def arc_length(self) -> float:
        return self.phi * math.sin(self.r)


def _check(delta: float, theta: float, allow_major: bool = False) -> None:
    if not (0.0 < delta < math.pi):
        raise DomainError(f"delta must lie in (0, pi), got {delta!r}")
    top = math.pi if allow_major else HALF_PI
    if not (0.0 <= theta <= top):
        raise DomainError(f"theta must lie in [0, {top:.6g}], got {theta!r}")


def _arctan_part(theta: float, s: float) -> float:
    if theta == HALF_PI:
        return HALF_PI
    # atan2 continues the closed form past pi/2 for major arcs
    return math.atan2(s, math.cos(theta))


def L_lens(delta: float, theta: float, allow_major: bool = False) -> float:
    """Boundary length of the symmetric lens."""
    _check(delta, theta, allow_major)
    a = math.tan(delta / 2)
    s = math.sqrt(math.sin(theta) ** 2 + a * a)
    return 4 * a / s * _arctan_part(theta, s)


def A_lens(delta: float, theta: float, allow_major: bool = False) -> float:
    """Area of the symmetric lens, 4 theta - L sin(theta) / tan(delta/2)."""
    L = L_lens(delta, theta, allow_major)
    return 4 * theta - L * math.sin(theta) / math.tan(delta / 2)


def lune_length(delta: float, theta: float, allow_major: bool = False) -> float:
    return L_lens(delta, theta, allow_major) / 2


def lune_area(delta: float, theta: float, allow_major: bool = False) -> float:
    return A_lens(delta, theta, allow_major) / 2


def h_family(A0: float, q: int, delta: float, theta: float) -> float:
    """(A0 + (q-2) A_lens) / L_lens, cross-checked against the expanded form."""
    if q < 3:
        raise DomainError("q must be at least 3")
    _check(delta, theta)
    a = math.tan(delta / 2)
    s = math.sqrt(math.sin(theta) ** 2 + a * a)
    at = _arctan_part(theta, s)
    L = 4 * a / s * at
    A = 4 * theta - L * math.sin(theta) / a
    quotient = (A0 + (q - 2) * A) / L
    expanded = (A0 / 4 + (q - 2) * theta) * s / (a * at) - (q - 2) * math.sin(theta) / a
    gap = abs(quotient - expanded)
    if gap > 1e-9 * (1.0 + abs(quotient)):
        raise InternalMismatch(f"h_family forms disagree by {gap:.3g}")
    return quotient


def theta_to_circle(delta: float, theta: float) -> ArcCircleParams:
    """Radius, central angle and geodesic curvature of the arc with cusp angle theta."""
    _check(delta, theta)
    k = math.sin(theta) / math.tan(delta / 2)
    r = math.atan2(1.0, k)
    ratio = min(1.0, math.sin(delta / 2) / math.sin(r))
    return ArcCircleParams(r=r, phi=2 * math.asin(ratio), k=k)


def k_max(delta: float) -> float:
    """Curvature of the half-circle arc over a chord of length delta."""
    return 1.0 / math.tan(delta / 2)


def curvature_to_theta(delta: float, k: float) -> float:
    if not (0.0 < delta < math.pi):
        raise DomainError(f"delta must lie in (0, pi), got {delta!r}")
    if k < 0:
        raise DomainError("curvature must be non-negative")
    s = k * math.tan(delta / 2)
    if s - 1.0 > 1e-12:
        raise DomainError(f"k={k!r} exceeds the half-circle curvature {k_max(delta)!r}")
    return float(sine_to_theta(s))


SINE_SNAP = 8 * np.finfo(float).eps


def sine_to_theta(s):
    """arcsin on [0, 1] with values within a few ulp of 1 sent to pi/2.

    asin has infinite slope at 1, so one ulp of rounding in k tan(delta/2)
    would otherwise move a half circle by about 1.5e-8 in theta.
    """
    s = np.clip(s, 0.0, 1.0)
    return np.where(s >= 1.0 - SINE_SNAP, HALF_PI, np.arcsin(s))


def disk_area_from_perimeter(L: float) -> float:
    """Area 2 pi - sqrt(4 pi^2 - L^2) of a disk with perimeter L (hemisphere at most)."""
    if not (0.0 <= L <= TWO_PI):
        raise DomainError(f"perimeter must lie in [0, 2 pi], got {L!r}")
    # rationalised to avoid cancellation for small L
    return L * L / (TWO_PI + math.sqrt(max(0.0, TWO_PI**2 - L * L)))


def _disk_check(q: int, nbar: int, delta: float) -> None:
    if q < 3:
        raise DomainError("q must be at least 3")
    if nbar < 0 or int(nbar) != nbar:
        raise DomainError("nbar must be a non-negative integer")
    if not (0.0 < delta < math.pi):
        raise DomainError(f"delta must lie in (0, pi), got {delta!r}")


def h_disk(q: int, nbar: int, delta: float) -> float:
    """(R + 4 pi) / L for a disk of spherical diameter delta holding nbar points."""
    _disk_check(q, nbar, delta)
    u = delta / 2
    return (q - 2 * nbar - (q - 2) * math.cos(u)) / math.sin(u)


def dh_disk(q: int, nbar: int, delta: float) -> float:
    _disk_check(q, nbar, delta)
    u = delta / 2
    return ((q - 2) - (q - 2 * nbar) * math.cos(u)) / (2 * math.sin(u) ** 2)


def disk_critical_delta(q: int) -> float:
    """Where dh_disk vanishes for an empty disk."""
    return 2 * math.acos((q - 2) / q)


def golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200):
    """Golden-section search for a maximum of a unimodal f on [lo, hi].

    Returns (x, f(x)); the endpoints are compared at the end so a maximum on
    the boundary is not missed.
    """
    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
    best = max([(f1, x1), (f2, x2), (f(lo), lo), (f(hi), hi)])
    return best[1], best[0]


def parabolic_step(f: Callable[[float], float], x: float, h: float, lo: float, hi: float):
    """One three-point parabolic refinement around x; keeps x if it does not improve."""
    xa, xb = max(lo, x - h), min(hi, x + h)
    if xb - xa < 1e-15 or xa == x or xb == x:
        return x, f(x)
    fa, fx, fb = f(xa), f(x), f(xb)
    den = (x - xa) * (fx - fb) - (x - xb) * (fx - fa)
    if den == 0:
        return x, fx
    num = (x - xa) ** 2 * (fx - fb) - (x - xb) ** 2 * (fx - fa)
    xn = x - 0.5 * num / den
    if not (xa <= xn <= xb):
        return x, fx
    fn = f(xn)
    return (xn, fn) if fn > fx else (x, fx)


def max_h_theta(A0: float, q: int, delta: float, tol: float = 1e-12, grid: int = 256):
    """Maximise theta -> h_family(A0, q, delta, theta) over [0, pi/2].

    A coarse grid brackets the best cell, golden-section search narrows it,
    and a root solve on the stationarity condition polishes the result
    (parabolic step as fallback).  Returns (theta_star, h_star).
    """
    _check(delta, 0.0)

    def f(t):
        return h_family(A0, q, delta, t)

    ts = np.linspace(0.0, HALF_PI, grid + 1)
    vals = [f(float(t)) for t in ts]
    i = int(np.argmax(vals))
    lo, hi = float(ts[max(0, i - 1)]), float(ts[min(grid, i + 1)])
    x, fx = golden_max(f, lo, hi, tol=tol)
    a = math.tan(delta / 2)

    # dA/dL = 1/k along the family, so h' has the sign of (q-2) tan(delta/2) - h sin(theta);
    # its root pins the stationary point far below the sqrt(eps) floor of golden section
    def g(t):
        return f(t) * math.sin(t) - (q - 2) * a

    x, fx = _polish_root(g, f, x, fx, lo, hi)
    if vals[i] > fx:
        return float(ts[i]), vals[i]
    return x, fx


def _polish_root(g, f, x, fx, lo, hi):
    step = max(1e-9, 1e-6 * (hi - lo))
    for _ in range(8):
        a, b = max(lo, x - step), min(hi, x + step)
        ga, gb = g(a), g(b)
        if ga < 0 < gb:
            xr = brentq(g, a, b, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)
            fr = f(xr)
            return (xr, fr) if fr >= fx - 1e-14 * (1 + abs(fx)) else (x, fx)
        step *= 8
    return parabolic_step(f, x, step, lo, hi)


def equal_perimeter_theta(delta: float, length: float, tol: float = 1e-12) -> float:
    """theta in [0, pi/2] with L_lens(delta, theta) = length, by bisection.

    Raises DomainError when the length is outside [2 delta, L_lens(delta, pi/2)].
    """
    lo, hi = 0.0, HALF_PI
    Llo, Lhi = L_lens(delta, lo), L_lens(delta, hi)
    if not (Llo - 1e-14 <= length <= Lhi + 1e-14):
        raise DomainError("no cusp angle gives that perimeter")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if L_lens(delta, mid) < length:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
