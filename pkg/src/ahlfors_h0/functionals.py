"""Ledger arithmetic for covering surfaces: R, H, sewing, slit spheres, branching."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .sphere_geom import TOL_ON, SpherePoint, as_point, vdist

FOUR_PI = 4 * math.pi


class ConfigurationError(ValueError):
    pass


class ZeroPerimeter(ZeroDivisionError):
    pass


class LedgerViolation(ValueError):
    pass


class RHViolation(ValueError):
    pass


@dataclass(frozen=True)
class Configuration:
    """The finite target set E_q."""

    points: tuple[SpherePoint, ...]

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 3:
            raise ConfigurationError(f"need at least 3 points, got {len(pts)}")
        for (i, p), (j, r) in itertools.combinations(enumerate(pts), 2):
            if vdist(p.vec, r.vec) <= TOL_ON:
                raise ConfigurationError(f"points {i} and {j} coincide")
        if delta_Eq(self) > 2 * math.pi / 3 + 1e-12:
            raise ConfigurationError("minimum separation exceeds 2 pi / 3, which no point set allows")

    @classmethod
    def of(cls, points: Iterable) -> "Configuration":
        return cls(tuple(points))

    @property
    def q(self) -> int:
        return len(self.points)

    @property
    def vectors(self) -> np.ndarray:
        return np.array([p.vec for p in self.points])

    def rotated(self, matrix) -> "Configuration":
        return Configuration(tuple(p.rotated(matrix) for p in self.points))


@dataclass(frozen=True)
class SurfaceStats:
    A: float
    L: float
    nbar: int
    q: int

    def __post_init__(self):
        if self.nbar < 0 or int(self.nbar) != self.nbar:
            raise LedgerViolation("nbar must be a non-negative integer")
        if self.A < -1e-12 or self.L < -1e-12:
            raise LedgerViolation("area and length must be non-negative")

    @property
    def R(self) -> float:
        return r_value(self)

    @property
    def H(self) -> float:
        return h_value(self)


def r_value(stats: SurfaceStats) -> float:
    return (stats.q - 2) * stats.A - FOUR_PI * stats.nbar


def h_value(stats: SurfaceStats) -> float:
    if stats.L <= 0:
        raise ZeroPerimeter("H needs a positive boundary length")
    return r_value(stats) / stats.L


def sew_ledger(s1: SurfaceStats, s2: SurfaceStats, gamma_len: float, gamma_interior_hits: int) -> SurfaceStats:
    """Stats of two surfaces glued along a common boundary arc gamma.

    Points of E_q inside gamma become interior points of the result.
    """
    if s1.q != s2.q:
        raise LedgerViolation("cannot sew ledgers for different point sets")
    if gamma_len < 0 or gamma_len > min(s1.L, s2.L) + 1e-12:
        raise LedgerViolation("sewing arc longer than a boundary")
    if gamma_interior_hits < 0:
        raise LedgerViolation("negative hit count")
    return SurfaceStats(
        A=s1.A + s2.A,
        L=max(0.0, s1.L + s2.L - 2 * gamma_len),
        nbar=s1.nbar + s2.nbar + gamma_interior_hits,
        q=s1.q,
    )


def sewn_R(R1: float, R2: float, gamma_interior_hits: int) -> float:
    return R1 + R2 - FOUR_PI * gamma_interior_hits


def slit_sphere_R(config: Configuration, gamma_interior_hits: int, gamma_endpoint_hits: int) -> float:
    """R of the sphere slit along a geodesic gamma."""
    if gamma_endpoint_hits not in (0, 1, 2):
        raise LedgerViolation("a slit has two endpoints")
    if gamma_interior_hits < 0 or gamma_interior_hits + gamma_endpoint_hits > config.q:
        raise LedgerViolation("more hits than points")
    return FOUR_PI * gamma_interior_hits + FOUR_PI * gamma_endpoint_hits - 2 * FOUR_PI


def slit_sphere_stats(config: Configuration, gamma_len: float, gamma_interior_hits: int, gamma_endpoint_hits: int) -> SurfaceStats:
    nbar = config.q - gamma_interior_hits - gamma_endpoint_hits
    return SurfaceStats(A=FOUR_PI, L=2 * gamma_len, nbar=nbar, q=config.q)


def delta_Eq(config) -> float:
    pts = config.points if isinstance(config, Configuration) else [as_point(p) for p in config]
    return min(vdist(p.vec, r.vec) for p, r in itertools.combinations(pts, 2))


def dufresnoy_bound(config: Configuration) -> float:
    return (config.q - 2) * 6 * math.pi / delta_Eq(config)


@dataclass(frozen=True)
class BranchDatum:
    """Branch multiplicities v >= 2 of a degree-d self-cover of the sphere.

    ``in_Eq[i]`` says whether the i-th branch point lies over E_q.
    """

    degree: int
    multiplicities: tuple[int, ...]
    in_Eq: tuple[bool, ...]

    def __post_init__(self):
        if len(self.multiplicities) != len(self.in_Eq):
            raise RHViolation("one flag per branch point")


class RHAudit(NamedTuple):
    nbar_min: int
    R_max: float
    nbar: int
    R: float
    equality: bool


def rh_audit(b: BranchDatum, config: Configuration) -> RHAudit:
    d = b.degree
    q = config.q
    if d < 1:
        raise RHViolation("degree must be positive")
    if any(v < 2 or v > d for v in b.multiplicities):
        raise RHViolation("multiplicities must lie in [2, d]")
    if sum(v - 1 for v in b.multiplicities) != 2 * d - 2:
        raise RHViolation(f"total branching {sum(v - 1 for v in b.multiplicities)} != 2d - 2 = {2 * d - 2}")
    over = sum(v - 1 for v, f in zip(b.multiplicities, b.in_Eq) if f)
    if over > q * (d - 1):
        raise RHViolation("more branching over E_q than its fibres can carry")
    nbar = q * d - over
    # integer count first so the -8 pi equality case is exact
    R = FOUR_PI * ((q - 2) * d - nbar)
    return RHAudit(
        nbar_min=(q - 2) * d + 2,
        R_max=FOUR_PI * -2,
        nbar=nbar,
        R=R,
        equality=all(b.in_Eq),
    )


def partitions_of(total: int, largest: int) -> Iterable[tuple[int, ...]]:
    """Partitions of ``total`` into parts in [1, largest], non-increasing."""
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), 0, -1):
        for rest in partitions_of(total - first, first):
            yield (first,) + rest


def branch_data(d: int) -> Iterable[tuple[int, ...]]:
    """All multisets of multiplicities v >= 2, v <= d with sum(v - 1) = 2d - 2."""
    for part in partitions_of(2 * d - 2, d - 1):
        yield tuple(p + 1 for p in part)


def flag_patterns(mults: Sequence[int]) -> Iterable[tuple[bool, ...]]:
    """Flag assignments up to permutation of equal multiplicities."""
    groups = [len(list(g)) for _, g in itertools.groupby(mults)]
    for counts in itertools.product(*(range(m + 1) for m in groups)):
        flags: list[bool] = []
        for m, c in zip(groups, counts):
            flags += [True] * c + [False] * (m - c)
        yield tuple(flags)
