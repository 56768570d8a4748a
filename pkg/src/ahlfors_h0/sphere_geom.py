"""Points, chords, circular arcs and area on the unit Riemann sphere.

Points are unit 3-vectors.  The extended complex plane is attached through
the stereographic map

    z = x + iy  ->  (2x, 2y, |z|^2 - 1) / (|z|^2 + 1)

so 0 is the south pole, infinity the north pole, and the pulled-back metric
is 2|dz| / (1 + |z|^2).  With this chart, a point p lies to the LEFT of the
oriented geodesic a -> b exactly when the triple product p . (a x b) is
negative (the half plane Im z > 0 is left of the segment 0 -> 1).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np
from scipy import integrate

TOL_ON = 1e-9
MAX_PANELS = 2**16
INF = complex(math.inf, 0.0)


class GeometryError(ValueError):
    pass


class AmbiguousAntipodal(GeometryError):
    pass


class AntipodalVertices(GeometryError):
    pass


class QuadratureFailure(ArithmeticError):
    pass


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if not np.isfinite(n) or n == 0.0:
        raise GeometryError(f"cannot normalise {v!r}")
    return v / n


def is_infinite(z) -> bool:
    if isinstance(z, str):
        return z.strip().lower() in ("inf", "infinity", "∞")
    return cmath.isinf(complex(z))


def stereographic(z) -> "SpherePoint":
    """Map an extended complex number (or the string "inf") onto the sphere."""
    if is_infinite(z):
        return SpherePoint(0.0, 0.0, 1.0)
    z = complex(z)
    r2 = abs(z) ** 2
    if abs(z) <= 1.0:
        d = 1.0 + r2
        return SpherePoint.from_vector((2 * z.real / d, 2 * z.imag / d, (r2 - 1.0) / d))
    # w = 1/z keeps |z| ~ 1e200 finite
    w = 1.0 / z
    s2 = abs(w) ** 2
    d = 1.0 + s2
    return SpherePoint.from_vector((2 * w.real / d, -2 * w.imag / d, (1.0 - s2) / d))


def unstereographic(p) -> complex:
    """Inverse chart; the north pole comes back as INF."""
    x, y, t = _as_vec(p)
    if t <= 0.0:
        return complex(x, y) / (1.0 - t)
    den = complex(x, -y)
    if den == 0:
        return INF
    return (1.0 + t) / den


@dataclass(frozen=True)
class SpherePoint:
    x: float
    y: float
    z: float

    def __post_init__(self):
        n = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(n - 1.0) > 1e-12:
            raise GeometryError(f"not a unit vector (|u| = {n!r}); use SpherePoint.from_vector")

    @classmethod
    def from_vector(cls, v) -> "SpherePoint":
        u = _unit(v)
        return cls(float(u[0]), float(u[1]), float(u[2]))

    @classmethod
    def from_complex(cls, z) -> "SpherePoint":
        return stereographic(z)

    @cached_property
    def vec(self) -> np.ndarray:
        v = np.array([self.x, self.y, self.z])
        v.flags.writeable = False
        return v

    def to_complex(self) -> complex:
        return unstereographic(self.vec)

    def antipode(self) -> "SpherePoint":
        return SpherePoint(-self.x, -self.y, -self.z)

    def rotated(self, matrix) -> "SpherePoint":
        return SpherePoint.from_vector(np.asarray(matrix) @ self.vec)

    def __repr__(self):
        z = self.to_complex()
        if cmath.isinf(z):
            return "SpherePoint(inf)"
        return f"SpherePoint({z.real:.6g}{z.imag:+.6g}i)"


PointLike = Union[SpherePoint, Sequence[float], np.ndarray]


def _as_vec(p: PointLike) -> np.ndarray:
    if isinstance(p, SpherePoint):
        return p.vec
    return np.asarray(p, dtype=float)


def as_point(p) -> SpherePoint:
    """Accept a SpherePoint, a 3-vector, a complex number or "inf"."""
    if isinstance(p, SpherePoint):
        return p
    if isinstance(p, str) or np.isscalar(p):
        return stereographic(p)
    v = np.asarray(p, dtype=float)
    if v.shape == (3,):
        return SpherePoint.from_vector(v)
    raise GeometryError(f"cannot interpret {p!r} as a point")


def cross3(u, v) -> np.ndarray:
    # np.cross carries heavy per-call overhead for single 3-vectors
    ux, uy, uz = u.tolist() if isinstance(u, np.ndarray) else u
    vx, vy, vz = v.tolist() if isinstance(v, np.ndarray) else v
    return np.array([uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx])


def vdist(u, v) -> float:
    ux, uy, uz = u.tolist() if isinstance(u, np.ndarray) else u
    vx, vy, vz = v.tolist() if isinstance(v, np.ndarray) else v
    cx, cy, cz = uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx
    # atan2 form stays accurate near 0 and near pi
    return math.atan2(math.sqrt(cx * cx + cy * cy + cz * cz), ux * vx + uy * vy + uz * vz)


def dist(p: PointLike, q: PointLike) -> float:
    """Spherical distance in [0, pi]."""
    return vdist(_as_vec(p), _as_vec(q))


def slerp(u: np.ndarray, v: np.ndarray, s: float) -> np.ndarray:
    """Point at fraction s along the minor geodesic u -> v."""
    d = vdist(u, v)
    if d == 0.0:
        return u.copy()
    e = _unit(v - np.dot(u, v) * u)
    return math.cos(s * d) * u + math.sin(s * d) * e


def chord_frame(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Rotation R with R a = south pole and R b on the positive real axis of the chart."""
    e3 = -a
    e1 = _unit(b - np.dot(b, a) * a)
    e2 = cross3(e3, e1)
    return np.vstack([e1, e2, e3])


def rotation_matrix(axis, angle: float) -> np.ndarray:
    k = _unit(axis)
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + math.sin(angle) * K + (1 - math.cos(angle)) * (K @ K)


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    ON = "on"


class LunePosition(str, Enum):
    INTERIOR = "interior"
    BOUNDARY_ARC = "boundary_arc"
    BOUNDARY_CHORD = "boundary_chord"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class GeodesicChord:
    a: SpherePoint
    b: SpherePoint

    def __post_init__(self):
        d = dist(self.a, self.b)
        if d <= TOL_ON:
            raise GeometryError("chord endpoints coincide")
        if d >= math.pi - TOL_ON:
            raise AntipodalVertices("chord endpoints are antipodal")

    @property
    def length(self) -> float:
        return dist(self.a, self.b)

    def reversed(self) -> "GeodesicChord":
        return GeodesicChord(self.b, self.a)

    @cached_property
    def left_pole(self) -> np.ndarray:
        # unit normal n with n . p > 0 for points left of a -> b
        return _unit(cross3(self.b.vec, self.a.vec))

    def contains(self, p: PointLike, tol: float = TOL_ON) -> bool:
        """True if p lies on the closed segment (within tol)."""
        u = _as_vec(p)
        if abs(float(np.dot(u, self.left_pole))) > math.sin(tol):
            return False
        # on the great circle; the distance sum only exceeds the length off the segment
        return vdist(self.a.vec, u) + vdist(u, self.b.vec) - self.length <= tol

    def interior_contains(self, p: PointLike, tol: float = TOL_ON) -> bool:
        u = _as_vec(p)
        if vdist(u, self.a.vec) <= tol or vdist(u, self.b.vec) <= tol:
            return False
        return self.contains(u, tol)


def signed_offset(p: PointLike, chord: GeodesicChord) -> float:
    """Signed distance from p to the great circle of the chord, positive on the left."""
    s = float(np.dot(_as_vec(p), chord.left_pole))
    return math.asin(max(-1.0, min(1.0, s)))


def side_of_chord(p: PointLike, chord: GeodesicChord, tol: float = TOL_ON) -> Side:
    u = _as_vec(p)
    for e in (chord.a.vec, chord.b.vec):
        if vdist(u, -e) <= tol:
            raise AmbiguousAntipodal("point is antipodal to a chord endpoint")
    s = signed_offset(u, chord)
    if abs(s) <= tol:
        return Side.ON
    return Side.LEFT if s > 0 else Side.RIGHT


@dataclass(frozen=True)
class CircularArc:
    """Arc over ``chord`` bulging to the left of chord.a -> chord.b.

    ``theta`` is the cusp angle between chord and arc at either endpoint;
    0 gives the chord itself, pi/2 a half circle, pi the complementary half
    of the great circle.  With ``reversed`` set the arc is traversed from
    chord.b to chord.a; the bulge side is unchanged.
    """

    chord: GeodesicChord
    theta: float
    reversed: bool = False

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise GeometryError(f"theta must lie in [0, pi], got {self.theta!r}")

    @property
    def start(self) -> SpherePoint:
        return self.chord.b if self.reversed else self.chord.a

    @property
    def end(self) -> SpherePoint:
        return self.chord.a if self.reversed else self.chord.b

    @property
    def is_minor(self) -> bool:
        return self.theta <= math.pi / 2

    def flipped(self) -> "CircularArc":
        return CircularArc(self.chord, self.theta, not self.reversed)

    @cached_property
    def circle(self) -> tuple[np.ndarray, float]:
        """(centre, radius) of the carrying circle, radius in (0, pi/2]."""
        a, b = self.chord.a.vec, self.chord.b.vec
        half = self.chord.length / 2
        m = _unit(a + b)
        n = self.chord.left_pole
        k = math.sin(self.theta) / math.tan(half)
        r = math.atan2(1.0, k)
        cb = min(1.0, math.cos(r) / math.cos(half))
        beta = math.acos(cb)
        if self.theta < math.pi / 2:
            beta = -beta
        return math.cos(beta) * m + math.sin(beta) * n, r

    @cached_property
    def central_angle(self) -> float:
        if self.theta == 0.0:
            return 0.0
        c, r = self.circle
        a = self.chord.a.vec
        e1 = _unit(a - np.dot(a, c) * c)
        e2 = cross3(c, e1)
        b = self.chord.b.vec
        ang = math.atan2(float(np.dot(b, e2)), float(np.dot(b, e1))) % (2 * math.pi)
        # the minor arc of the circle lies on the right of the chord when theta < pi/2
        return ang if (self.theta <= math.pi / 2) == (ang <= math.pi) else 2 * math.pi - ang

    @property
    def length(self) -> float:
        if self.theta == 0.0:
            return self.chord.length
        return self.central_angle * math.sin(self.circle[1])

    def _param(self):
        """Return (f, df, t1) with f(t) a point of the arc for t in [0, t1], going a -> b."""
        a, b = self.chord.a.vec, self.chord.b.vec
        if self.theta == 0.0:
            d = self.chord.length
            e = _unit(b - np.dot(a, b) * a)

            def f(t):
                return math.cos(t) * a + math.sin(t) * e

            def df(t):
                return -math.sin(t) * a + math.cos(t) * e

            return f, df, d
        c, r = self.circle
        e1 = _unit(a - np.dot(a, c) * c)
        e2 = cross3(c, e1)
        span = self.central_angle
        cr, sr = math.cos(r), math.sin(r)
        # walk the way whose midpoint is on the bulge side
        mid = cr * c + sr * (math.cos(span / 2) * e1 + math.sin(span / 2) * e2)
        sgn = 1.0 if np.dot(mid, self.chord.left_pole) > 0 else -1.0

        def f(t):
            return cr * c + sr * (math.cos(sgn * t) * e1 + math.sin(sgn * t) * e2)

        def df(t):
            return sr * sgn * (-math.sin(sgn * t) * e1 + math.cos(sgn * t) * e2)

        return f, df, span

    def sample(self, n: int) -> list[SpherePoint]:
        return arc_endpoints_sample(self, n)


def arc_endpoints_sample(arc: CircularArc, n: int) -> list[SpherePoint]:
    """n points equally spaced in t along alpha(t) = t_d sin(theta - t)/sin(theta) e^{it}.

    alpha runs in a chart where the chord is [0, tan(delta/2)], from the far
    end back to 0, so the list is reversed to follow the arc's own direction.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    a, b = arc.chord.a.vec, arc.chord.b.vec
    th = arc.theta
    if th == 0.0 or th == math.pi:
        pts = [slerp(a, b, s) for s in np.linspace(0.0, 1.0, n)]
        if th == math.pi:
            # the other half of the great circle, through -a and -b
            d = arc.chord.length
            e = -_unit(b - np.dot(a, b) * a)
            pts = [math.cos(t) * a + math.sin(t) * e for t in np.linspace(0.0, 2 * math.pi - d, n)]
    else:
        R = chord_frame(a, b)
        td = math.tan(arc.chord.length / 2)
        pts = []
        for t in np.linspace(th, 0.0, n):
            w = td * math.sin(th - t) / math.sin(th) * cmath.exp(1j * t)
            pts.append(R.T @ stereographic(w).vec)
        pts[0], pts[-1] = a.copy(), b.copy()
    out = [SpherePoint.from_vector(p) for p in pts]
    return out[::-1] if arc.reversed else out


def in_lune(p: PointLike, arc: CircularArc, tol: float = TOL_ON) -> LunePosition:
    """Classify p against the closed lune bounded by ``arc`` and its chord."""
    u = _as_vec(p)
    chord = arc.chord
    if vdist(u, chord.a.vec) <= tol or vdist(u, chord.b.vec) <= tol:
        return LunePosition.BOUNDARY_CHORD
    s = signed_offset(u, chord)
    if abs(s) <= tol:
        if chord.contains(u, tol):
            return LunePosition.BOUNDARY_CHORD
        # the closed lune meets the chord's great circle only in the chord,
        # except for theta = pi where the arc is the rest of that circle
        if arc.theta >= math.pi - tol:
            return LunePosition.BOUNDARY_ARC
        return LunePosition.OUTSIDE
    if s < 0 or arc.theta <= tol:
        return LunePosition.OUTSIDE
    c, r = arc.circle
    e = vdist(u, c) - r
    if abs(e) <= tol:
        return LunePosition.BOUNDARY_ARC
    return LunePosition.INTERIOR if e < 0 else LunePosition.OUTSIDE


class TriangleArea(NamedTuple):
    area: float
    degenerate: bool


def spherical_triangle_area(a: PointLike, b: PointLike, c: PointLike, tol: float = TOL_ON) -> TriangleArea:
    """Area of the region left of the closed geodesic path a -> b -> c -> a.

    Returns a value in [0, 4 pi); a clockwise triangle gives the large
    complementary region.  Collinear input gives area 0 and degenerate=True.
    """
    u, v, w = _as_vec(a), _as_vec(b), _as_vec(c)
    for x, y in ((u, v), (v, w), (w, u)):
        if vdist(x, -y) <= tol:
            raise AntipodalVertices("triangle has antipodal vertices")
    det = float(np.dot(u, cross3(v, w)))
    # collinearity measured as the distance of the farthest vertex from the opposite great circle
    worst = 0.0
    for x, y, z in ((u, v, w), (v, w, u), (w, u, v)):
        n = cross3(x, y)
        nn = np.linalg.norm(n)
        if nn > tol:
            worst = max(worst, abs(math.asin(max(-1.0, min(1.0, float(np.dot(z, n)) / nn)))))
    if worst <= tol:
        return TriangleArea(0.0, True)
    e = 2.0 * math.atan2(det, 1.0 + np.dot(u, v) + np.dot(v, w) + np.dot(w, u))
    return TriangleArea(-e if e < 0 else 4 * math.pi - e, False)


def tangent_toward(v: np.ndarray, x: np.ndarray) -> np.ndarray:
    return _unit(x - np.dot(x, v) * v)


def spherical_polygon_area(vertices: Iterable[PointLike]) -> float:
    """Area left of a closed geodesic polygon, by Gauss-Bonnet, in [0, 4 pi).

    Vertices may sit in the middle of a straight run (turning angle 0), which
    is how a half great circle is passed in.
    """
    vs = [_as_vec(p) for p in vertices]
    n = len(vs)
    turn = 0.0
    for i in range(n):
        prev, v, nxt = vs[i - 1], vs[i], vs[(i + 1) % n]
        t_in = -tangent_toward(v, prev)
        t_out = tangent_toward(v, nxt)
        turn += math.atan2(-float(np.dot(cross3(t_in, t_out), v)), float(np.dot(t_in, t_out)))
    return (2 * math.pi - turn) % (4 * math.pi)


class PiecewiseCircularCurve:
    """Consecutive circular arcs, endpoints matched within 1e-10."""

    def __init__(self, segments: Sequence[CircularArc], match_tol: float = 1e-10):
        self.segments = tuple(segments)
        if not self.segments:
            raise GeometryError("empty curve")
        for s, t in zip(self.segments, self.segments[1:]):
            if dist(s.end, t.start) > match_tol:
                raise GeometryError("consecutive arcs do not meet")
        self.match_tol = match_tol

    @property
    def is_closed(self) -> bool:
        return dist(self.segments[-1].end, self.segments[0].start) <= self.match_tol

    @property
    def length(self) -> float:
        return sum(s.length for s in self.segments)

    def reversed(self) -> "PiecewiseCircularCurve":
        return PiecewiseCircularCurve([s.flipped() for s in reversed(self.segments)], self.match_tol)

    def rotated(self, matrix) -> "PiecewiseCircularCurve":
        segs = []
        for s in self.segments:
            ch = GeodesicChord(s.chord.a.rotated(matrix), s.chord.b.rotated(matrix))
            segs.append(CircularArc(ch, s.theta, s.reversed))
        return PiecewiseCircularCurve(segs, self.match_tol)

    def __add__(self, other: "PiecewiseCircularCurve") -> "PiecewiseCircularCurve":
        return PiecewiseCircularCurve(self.segments + other.segments, self.match_tol)


def polygon_curve(vertices: Sequence[PointLike]) -> PiecewiseCircularCurve:
    pts = [as_point(p) for p in vertices]
    segs = [CircularArc(GeodesicChord(pts[i], pts[(i + 1) % len(pts)]), 0.0) for i in range(len(pts))]
    return PiecewiseCircularCurve(segs)


def _segment_area(arc: CircularArc, target: float) -> tuple[float, float]:
    f, df, t1 = arc._param()

    # (X1 dX2 - X2 dX1) / (1 - X3) is the pull-back of 2 Im(conj z dz)/(1+|z|^2)
    def g(t):
        x = f(t)
        dx = df(t)
        return (x[0] * dx[1] - x[1] * dx[0]) / (1.0 - x[2])

    probe = [f(t)[2] for t in np.linspace(0.0, t1, 65)]
    if max(probe) > 1.0 - 1e-10:
        raise QuadratureFailure("curve passes through infinity; rotate it first")
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(g, 0.0, t1, epsabs=target / 10, epsrel=1e-13, limit=MAX_PANELS)
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(str(exc)) from exc
    if arc.reversed:
        val = -val
    return val, err


def contour_area(curve: PiecewiseCircularCurve, target: float = 1e-9) -> float:
    """Signed area enclosed by a closed curve, as the integral of
    (2/i) conj(z) dz / (1 + |z|^2) in the standard chart.

    The anticlockwise unit circle gives 2 pi.  For a Jordan curve the value
    is the area of the region on its left, provided infinity is not in it.
    """
    if not curve.is_closed:
        raise GeometryError("contour_area needs a closed curve")
    total = 0.0
    err_total = 0.0
    for seg in curve.segments:
        v, e = _segment_area(seg, target / max(1, len(curve.segments)))
        total += v
        err_total += e
    if err_total > target:
        raise QuadratureFailure(f"error estimate {err_total:.3g} above target {target:.3g}")
    return total


def lune_boundary(chord: GeodesicChord, theta: float) -> PiecewiseCircularCurve:
    """Anticlockwise boundary of the lune left of the chord: a -> b along the chord, back along the arc."""
    return PiecewiseCircularCurve(
        [CircularArc(chord, 0.0), CircularArc(chord, theta, reversed=True)]
    )


def lens_boundary(chord: GeodesicChord, theta: float) -> PiecewiseCircularCurve:
    """Anticlockwise boundary of the symmetric lens with cusp angle 2 theta over the chord."""
    rev = chord.reversed()
    return PiecewiseCircularCurve(
        [CircularArc(rev, theta, reversed=True), CircularArc(chord, theta, reversed=True)]
    )
