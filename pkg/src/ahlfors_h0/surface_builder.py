"""Build the standard surface bounded by an equal-curvature polygon of arcs.

Given vertices p_1..p_m of E_q and cusp angles, the surface is a fan of
geodesic triangles T_j = (p_1, p_j, p_{j+1}) sewn along the diagonals
l_j = p_1 p_j, plus one lune K_j glued on the outside of each edge.  Edges
run p_j -> p_{j+1}; each lune sits on the RIGHT of its edge, so for an
anticlockwise polygon the lunes bulge outwards.  As a CircularArc (which
bulges left of its own chord) the boundary arc C_j is therefore stored over
the reversed chord p_{j+1} -> p_j and traversed backwards.

The surface only exists as faces and a ledger; no gluing is performed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.transform import Rotation

from . import lens_lune as ll
from .functionals import FOUR_PI, Configuration, SurfaceStats, r_value
from .lens_lune import InternalMismatch
from .sphere_geom import (
    TOL_ON,
    CircularArc,
    GeodesicChord,
    LunePosition,
    PiecewiseCircularCurve,
    SpherePoint,
    _unit,
    as_point,
    cross3,
    in_lune,
    spherical_polygon_area,
    spherical_triangle_area,
    tangent_toward,
    vdist,
)

INSIDE, ON, OUTSIDE = 1, 0, -1


class DegenerateConfiguration(ValueError):
    pass


# ---------------------------------------------------------------- segments


def seg_distance(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """Distance from x to the minor geodesic segment [a, b]."""
    n = cross3(a, b)
    nn = np.linalg.norm(n)
    if nn < 1e-15:
        return min(vdist(x, a), vdist(x, b))
    n = n / nn
    s = float(np.dot(x, n))
    proj = x - s * n
    pn = np.linalg.norm(proj)
    if pn > 1e-15:
        proj = proj / pn
        if vdist(a, proj) + vdist(proj, b) <= vdist(a, b) + 1e-13:
            return abs(math.asin(max(-1.0, min(1.0, s))))
    return min(vdist(x, a), vdist(x, b))


def path_distance(x: np.ndarray, path: Sequence[np.ndarray]) -> float:
    return min(seg_distance(x, path[i], path[i + 1]) for i in range(len(path) - 1))


def on_open_path(x: np.ndarray, path: Sequence[np.ndarray], tol: float = TOL_ON) -> bool:
    """True if x lies on the path but is not one of its two ends."""
    if vdist(x, path[0]) <= tol or vdist(x, path[-1]) <= tol:
        return False
    return path_distance(x, path) <= tol


def _left_offset(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    n = _unit(cross3(b, a))
    return math.asin(max(-1.0, min(1.0, float(np.dot(x, n)))))


# ---------------------------------------------------------------- faces


@dataclass(frozen=True)
class Face:
    """One piece of the decomposition.

    kind is "triangle", "slit" (sphere minus a geodesic path), "hemisphere"
    (a collinear triangle whose path runs once around a great circle),
    "digon" (the face next to a diagonal replaced by a half great circle)
    or "lune".
    """

    kind: str
    index: int
    area: float
    path: tuple  # boundary vertices (vectors); closed implicitly for polygons
    ccw: bool = True
    arc: Optional[CircularArc] = None
    rule: str = ""

    def classify(self, x: np.ndarray, tol: float = TOL_ON) -> int:
        if self.kind == "lune":
            pos = in_lune(x, self.arc, tol)
            if pos is LunePosition.INTERIOR:
                return INSIDE
            return OUTSIDE if pos is LunePosition.OUTSIDE else ON
        if self.kind == "slit":
            return ON if path_distance(x, self.path) <= tol else INSIDE
        if self.kind == "hemisphere":
            a, b = self.path[0], self.path[1]
            s = _left_offset(x, a, b)
            return ON if abs(s) <= tol else (INSIDE if s > 0 else OUTSIDE)
        if self.kind == "digon":
            return self._classify_digon(x, tol)
        a, b, c = self.path
        offs = (_left_offset(x, a, b), _left_offset(x, b, c), _left_offset(x, c, a))
        if self.ccw:
            m = min(offs)
            if m > tol:
                return INSIDE
            return ON if m >= -tol and _near_polygon(x, self.path, tol) else OUTSIDE
        m = max(offs)
        if m < -tol:
            return OUTSIDE
        return ON if m <= tol and _near_polygon(x, self.path, tol) else INSIDE

    def _classify_digon(self, x, tol):
        # path = (p1, via, antipode of p1, far); region 0 < azimuth < azimuth(far) around p1
        p1, via, _, far = self.path
        if path_distance(x, (p1, via, -p1)) <= tol or path_distance(x, (-p1, far, p1)) <= tol:
            return ON
        e1 = tangent_toward(p1, via)
        e2 = cross3(e1, p1)
        az = math.atan2(float(np.dot(x, e2)), float(np.dot(x, e1))) % (2 * math.pi)
        top = math.atan2(float(np.dot(far, e2)), float(np.dot(far, e1))) % (2 * math.pi)
        return INSIDE if 0.0 < az < top else OUTSIDE


def _near_polygon(x, verts, tol):
    closed = list(verts) + [verts[0]]
    return path_distance(x, closed) <= tol


# ---------------------------------------------------------------- partition


@dataclass(frozen=True)
class BoundaryPartition:
    """Vertex tuple p_1..p_m (edge j joins p_j to p_{j+1}, cyclically) and cusp angles."""

    vertices: tuple
    thetas: tuple
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(as_point(p) for p in self.vertices))
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))
        object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_curvature(cls, vertices: Sequence, k: float, labels: Sequence = ()) -> "BoundaryPartition":
        pts = [as_point(p) for p in vertices]
        m = len(pts)
        thetas = []
        for j in range(m):
            d = vdist(pts[j].vec, pts[(j + 1) % m].vec)
            thetas.append(ll.curvature_to_theta(d, k))
        return cls(tuple(pts), tuple(thetas), tuple(labels))

    @property
    def qprime(self) -> int:
        return len(self.vertices)

    def edge(self, j: int) -> tuple[SpherePoint, SpherePoint]:
        m = self.qprime
        return self.vertices[j % m], self.vertices[(j + 1) % m]

    @property
    def deltas(self) -> tuple[float, ...]:
        return tuple(vdist(a.vec, b.vec) for a, b in (self.edge(j) for j in range(self.qprime)))

    @property
    def curvatures(self) -> tuple[float, ...]:
        return tuple(
            math.sin(t) / math.tan(d / 2) if 0 < d < math.pi else math.nan for t, d in zip(self.thetas, self.deltas)
        )

    def arc(self, j: int) -> CircularArc:
        """Boundary arc C_j from p_j to p_{j+1}, bulging to the right of that edge."""
        a, b = self.edge(j)
        return CircularArc(GeodesicChord(b, a), self.thetas[j], reversed=True)

    def boundary_curve(self) -> PiecewiseCircularCurve:
        return PiecewiseCircularCurve([self.arc(j) for j in range(self.qprime)])

    def length(self) -> float:
        return sum(
            ll.lune_length(d, t) if t > 0 else d for d, t in zip(self.deltas, self.thetas)
        )

    def rotated(self, matrix) -> "BoundaryPartition":
        return BoundaryPartition(tuple(p.rotated(matrix) for p in self.vertices), self.thetas, self.labels)


@dataclass(frozen=True)
class Violation:
    condition: int
    message: str
    index: Optional[int] = None


@dataclass(frozen=True)
class ValidityReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions(self) -> set:
        return {v.condition for v in self.violations}


def validate_s0(partition: BoundaryPartition, config: Configuration, tol: float = TOL_ON) -> ValidityReport:
    """Check the membership conditions for the finite candidate family.

    Condition numbers: 1 vertices from E_q and 2 <= m <= q, 2 consecutive
    distance < pi, 3 distinct vertices, 5 no E_q point on an open arc,
    6 each arc in an open hemisphere, 7 equal curvature, 8 minor or half
    arcs.  The degree bound (4) is certified by deg_max_estimate.
    """
    out: list[Violation] = []
    try:
        _validate(partition, config, tol, out)
    except Exception as exc:  # never raise; report instead
        out.append(Violation(0, f"validation aborted: {exc!r}"))
    return ValidityReport(tuple(out))


def _validate(partition, config, tol, out):
    verts = partition.vertices
    m = len(verts)
    E = config.vectors
    if not (2 <= m <= config.q):
        out.append(Violation(1, f"tuple length {m} outside [2, {config.q}]"))
    for i, p in enumerate(verts):
        if min(vdist(p.vec, e) for e in E) > tol:
            out.append(Violation(1, "vertex is not a point of E_q", i))
    if len(partition.thetas) != m:
        out.append(Violation(1, "one cusp angle per edge required"))
        return
    for i in range(m):
        for j in range(i + 1, m):
            if vdist(verts[i].vec, verts[j].vec) <= tol:
                out.append(Violation(3, f"vertices {i} and {j} coincide", i))
    if m < 2 or any(v.condition == 3 for v in out):
        return
    deltas = partition.deltas
    bad_edges = set()
    for j, d in enumerate(deltas):
        if d >= math.pi - tol:
            out.append(Violation(2, "consecutive vertices antipodal", j))
            bad_edges.add(j)
    for j, t in enumerate(partition.thetas):
        if t > math.pi / 2 + 1e-12:
            out.append(Violation(8, f"arc {j} is major (theta = {t:.6g})", j))
        if t < 0:
            out.append(Violation(8, "negative cusp angle", j))
    ks = [k for j, k in enumerate(partition.curvatures) if j not in bad_edges]
    if ks and max(ks) - min(ks) > 1e-10 * (1 + max(abs(k) for k in ks)):
        out.append(Violation(7, f"curvatures differ: {min(ks):.12g} .. {max(ks):.12g}"))
    for j in range(m):
        if j in bad_edges or not (0 <= partition.thetas[j] <= math.pi):
            continue
        arc = partition.arc(j)
        a, b = partition.edge(j)
        for w in E:
            if vdist(w, a.vec) <= tol or vdist(w, b.vec) <= tol:
                continue
            if arc.theta == 0.0:
                hit = on_open_path(w, (a.vec, b.vec), tol)
            else:
                hit = in_lune(w, arc, tol) is LunePosition.BOUNDARY_ARC
            if hit:
                out.append(Violation(5, "a point of E_q lies on the open arc", j))
        if arc.theta <= math.pi / 2 and not _in_open_hemisphere(arc):
            out.append(Violation(6, "arc not inside an open hemisphere", j))


def _in_open_hemisphere(arc: CircularArc, n: int = 257) -> bool:
    pts = np.array([p.vec for p in arc.sample(n)])
    a, b = arc.chord.a.vec, arc.chord.b.vec
    witness = _unit(_unit(a + b) + pts[n // 2])
    return bool(np.min(pts @ witness) > 0)


# ---------------------------------------------------------------- solution


@dataclass(frozen=True)
class SolutionSurface:
    partition: BoundaryPartition
    q: int
    triangles: tuple  # Face per j = 2..m-1 (or the slit for m = 2)
    lunes: tuple  # Face or None per edge
    J: tuple
    tri_nbar: tuple
    lune_nbar: tuple
    chord_hits: tuple
    diagonals: tuple  # paths l_3..l_{m-1}
    diag_hits: tuple
    stats: SurfaceStats
    degenerate_rules: tuple = field(default=())

    @property
    def faces(self) -> tuple:
        return self.triangles + tuple(f for f in self.lunes if f is not None)

    @property
    def R_polygon(self) -> float:
        q = self.q
        return sum((q - 2) * f.area - FOUR_PI * n for f, n in zip(self.triangles, self.tri_nbar)) - FOUR_PI * sum(
            self.diag_hits
        )


def _count_inside(face: Face, E: np.ndarray, tol: float) -> int:
    return sum(1 for w in E if face.classify(w, tol) == INSIDE)


def _count_open_path(path, E, tol) -> int:
    return sum(1 for w in E if on_open_path(w, path, tol))


def _triangle_face(j, p1, pj, pk, allow_degenerate, tol, rules):
    ta = spherical_triangle_area(p1, pj, pk, tol)
    if not ta.degenerate:
        return Face("triangle", j, ta.area, (p1, pj, pk), ccw=ta.area < 2 * math.pi)
    if not allow_degenerate:
        raise DegenerateConfiguration(f"triangle T_{j + 1} is collinear")
    total = vdist(p1, pj) + vdist(pj, pk) + vdist(pk, p1)
    if abs(total - 2 * math.pi) <= 1e-7:
        rules.append(f"T_{j + 1}: path runs once round a great circle, area 2 pi")
        return Face("hemisphere", j, 2 * math.pi, (p1, pj, pk), rule="hemisphere")
    # out-and-back path: the face is the sphere minus the longest of the three segments
    segs = [(p1, pj), (pj, pk), (pk, p1)]
    longest = max(segs, key=lambda s: vdist(*s))
    rules.append(f"T_{j + 1}: collinear, interior is the sphere minus a segment, area 4 pi")
    return Face("slit", j, 4 * math.pi, longest, rule="slit")


def build_solution(
    partition: BoundaryPartition,
    config: Configuration,
    allow_degenerate: bool = False,
    tol: float = TOL_ON,
) -> SolutionSurface:
    """Assemble triangles, diagonals and lunes with their E_q counts and ledger."""
    verts = [p.vec for p in partition.vertices]
    m = len(verts)
    q = config.q
    E = config.vectors
    if m < 2:
        raise DegenerateConfiguration("need at least two vertices")
    p1 = verts[0]
    rules: list[str] = []

    def antipodal(u, v):
        return vdist(u, -v) <= tol

    # diagonals l_j = p1 p_j for j = 3..m-1 (0-based indices 2..m-2)
    diag_paths = {}
    for i in range(2, m - 1):
        if antipodal(verts[i], p1):
            diag_paths[i] = (p1, verts[i - 1], verts[i])
            rules.append(f"l_{i + 1}: antipodal diagonal replaced by the half circle through p_{i}")
        else:
            diag_paths[i] = (p1, verts[i])

    triangles = []
    if m == 2:
        triangles.append(Face("slit", 1, 4 * math.pi, (p1, verts[1])))
    else:
        for i in range(1, m - 1):
            pj, pk = verts[i], verts[i + 1]
            if i + 1 in diag_paths and len(diag_paths[i + 1]) == 3:
                triangles.append(Face("slit", i, 4 * math.pi, diag_paths[i + 1], rule="slit"))
            elif i in diag_paths and len(diag_paths[i]) == 3:
                path = (p1, verts[i - 1], pj, pk)
                area = spherical_polygon_area(path)
                triangles.append(Face("digon", i, area, path, rule="digon"))
            else:
                triangles.append(_triangle_face(i, p1, pj, pk, allow_degenerate, tol, rules))

    tri_nbar = tuple(_count_inside(f, E, tol) for f in triangles)
    diagonals = tuple(diag_paths[i] for i in sorted(diag_paths))
    diag_hits = tuple(_count_open_path(p, E, tol) for p in diagonals)

    lunes, lune_nbar, chord_hits, J = [], [], [], []
    deltas = partition.deltas
    A_lunes = 0.0
    for j in range(m):
        a, b = verts[j], verts[(j + 1) % m]
        chord_hits.append(_count_open_path((a, b), E, tol))
        th = partition.thetas[j]
        if th > 0:
            arc = partition.arc(j)
            area = ll.lune_area(deltas[j], th)
            face = Face("lune", j, area, (b, a), arc=arc)
            lunes.append(face)
            lune_nbar.append(_count_inside(face, E, tol))
            J.append(j)
            A_lunes += area
        else:
            lunes.append(None)
            lune_nbar.append(0)

    A = sum(f.area for f in triangles) + A_lunes
    nbar = sum(tri_nbar) + sum(diag_hits) + sum(lune_nbar[j] + chord_hits[j] for j in J)
    stats = SurfaceStats(A=A, L=partition.length(), nbar=nbar, q=q)
    return SolutionSurface(
        partition=partition,
        q=q,
        triangles=tuple(triangles),
        lunes=tuple(lunes),
        J=tuple(J),
        tri_nbar=tri_nbar,
        lune_nbar=tuple(lune_nbar),
        chord_hits=tuple(chord_hits),
        diagonals=diagonals,
        diag_hits=diag_hits,
        stats=stats,
        degenerate_rules=tuple(rules),
    )


def r_of_solution(sol: SolutionSurface) -> float:
    """R from the fan formula, audited against (q-2) A - 4 pi nbar of the whole surface."""
    q = sol.q
    R = sol.R_polygon
    for j in sol.J:
        face = sol.lunes[j]
        R += (q - 2) * face.area - FOUR_PI * sol.lune_nbar[j] - FOUR_PI * sol.chord_hits[j]
    aggregate = r_value(sol.stats)
    if abs(R - aggregate) > 1e-9 * (1 + abs(R)):
        raise InternalMismatch(f"fan formula R={R!r} but aggregate R={aggregate!r}")
    return R


def fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    phi = math.pi * (3 - math.sqrt(5)) * i
    rho = np.sqrt(1 - z * z)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def deg_max_estimate(sol: SolutionSurface, samples: int = 4096, seed: int = 0, tol: float = TOL_ON) -> int:
    """Largest number of faces covering a sampled point off all face boundaries.

    The sample is a Fibonacci lattice under a seeded random rotation plus
    points just either side of every boundary arc.  It is a lower bound on
    the true maximal multiplicity, exact when the sample meets every cell.
    """
    rot = Rotation.random(random_state=seed).as_matrix()
    pts = list(fibonacci_sphere(samples) @ rot.T)
    part = sol.partition
    for j in range(part.qprime):
        arc = part.arc(j)
        for p in arc.sample(33)[1:-1]:
            v = p.vec
            if arc.theta > 0:
                c, _ = arc.circle
                nrm = tangent_toward(v, c)
            else:
                nrm = arc.chord.left_pole
            for eps in (3 * tol, -3 * tol, 1e-6, -1e-6):
                pts.append(_unit(v + eps * nrm))
    faces = sol.faces
    best = 0
    for x in pts:
        count = 0
        for f in faces:
            c = f.classify(x, tol)
            if c == ON:
                count = -1
                break
            count += c == INSIDE
        best = max(best, count)
    bound = 2 * part.qprime - 2
    if best > bound:
        raise InternalMismatch(f"estimated deg_max {best} exceeds 2q'-2 = {bound}")
    return best
