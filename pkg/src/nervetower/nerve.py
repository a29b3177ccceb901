"""Finite carriers, covers, Čech and Vietoris nerves, refinement maps.

A finite carrier stands in for the space: every intersection question about
cover members becomes a set computation on sample points.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Hashable, Iterable, Sequence

from .simplicial import SimplicialComplex, SimplicialMap

Point = Hashable

DEFAULT_DIM_CAP = 4


class CoverError(ValueError):
    """A cover or cover tower violates its invariants."""


class NotARefinement(CoverError):
    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"set {index} of the finer cover lies in no set of the coarser cover")


@dataclass(frozen=True)
class Carrier:
    """Ordered finite point set, optionally with a (semi)metric table."""

    points: tuple[Point, ...]
    metric: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(set(self.points)) != len(self.points):
            raise CoverError("duplicate point ids in carrier")
        if self.metric is not None:
            metric = tuple(tuple(float(x) for x in row) for row in self.metric)
            n = len(self.points)
            if len(metric) != n or any(len(r) != n for r in metric):
                raise CoverError("metric table must be square over the carrier points")
            for i in range(n):
                if metric[i][i] != 0:
                    raise CoverError(f"metric: d(x, x) != 0 at point {self.points[i]!r}")
                for j in range(n):
                    if metric[i][j] < 0 or metric[i][j] != metric[j][i]:
                        raise CoverError("metric must be symmetric and non-negative")
            object.__setattr__(self, "metric", metric)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def satisfies_triangle_inequality(self) -> bool:
        """False for a mere semimetric; both are accepted."""
        if self.metric is None:
            return True
        d, n = self.metric, len(self.points)
        return all(d[i][k] <= d[i][j] + d[j][k] + 1e-12
                   for i in range(n) for j in range(n) for k in range(n))


@dataclass(frozen=True)
class Cover:
    """Indexed family of nonempty point sets whose union is the carrier."""

    carrier: Carrier
    sets: tuple[frozenset, ...]

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        known = set(self.carrier.points)
        covered = set()
        for i, s in enumerate(sets):
            if not s:
                raise CoverError(f"set {i} is empty")
            stray = s - known
            if stray:
                raise CoverError(f"set {i} contains points outside the carrier: {sorted(map(str, stray))}")
            covered |= s
        missing = known - covered
        if missing:
            raise CoverError(f"points not covered: {sorted(map(str, missing))}")

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[Point]], points: Sequence[Point] | None = None) -> Cover:
        sets = [list(s) for s in sets]
        if points is None:
            seen: dict = {}
            for s in sets:
                for p in s:
                    seen.setdefault(p, None)
            points = list(seen)
        return cls(Carrier(tuple(points)), tuple(sets))

    def __len__(self) -> int:
        return len(self.sets)

    def memberships(self) -> list[list[int]]:
        """For each carrier point, the indices of the sets containing it."""
        where = {p: [] for p in self.carrier.points}
        for i, s in enumerate(self.sets):
            for p in s:
                where[p].append(i)
        return [where[p] for p in self.carrier.points]


def cech_nerve(cover: Cover, dim_cap: int | None = DEFAULT_DIM_CAP) -> SimplicialComplex:
    """One vertex per cover set, one simplex per subfamily with a common point."""
    return SimplicialComplex(range(len(cover)), cover.memberships(), dim_cap=dim_cap)


def vietoris_nerve(cover: Cover, dim_cap: int | None = DEFAULT_DIM_CAP) -> SimplicialComplex:
    """One vertex per point, one simplex per point set lying in a single cover set."""
    order = {p: i for i, p in enumerate(cover.carrier.points)}
    return SimplicialComplex(
        cover.carrier.points,
        [sorted(s, key=order.__getitem__) for s in cover.sets],
        dim_cap=dim_cap,
    )


def refinement_assignment(fine: Cover, coarse: Cover) -> tuple[int, ...]:
    """For each fine set, the smallest index of a coarse set containing it."""
    if set(fine.carrier.points) != set(coarse.carrier.points):
        raise CoverError("covers live on different carriers")
    out = []
    for i, s in enumerate(fine.sets):
        j = next((j for j, t in enumerate(coarse.sets) if s <= t), None)
        if j is None:
            raise NotARefinement(i)
        out.append(j)
    return tuple(out)


def refines(fine: Cover, coarse: Cover) -> bool:
    try:
        refinement_assignment(fine, coarse)
    except NotARefinement:
        return False
    return True


def refinement_projection(
    fine: Cover,
    coarse: Cover,
    dim_cap: int | None = DEFAULT_DIM_CAP,
    *,
    source: SimplicialComplex | None = None,
    target: SimplicialComplex | None = None,
) -> SimplicialMap:
    """Canonical projection between Čech nerves (smallest-index tie-break)."""
    assign = refinement_assignment(fine, coarse)
    source = source if source is not None else cech_nerve(fine, dim_cap)
    target = target if target is not None else cech_nerve(coarse, dim_cap)
    return SimplicialMap(source, target, dict(enumerate(assign)))


def vietoris_projection(fine: Cover, coarse: Cover, dim_cap: int | None = DEFAULT_DIM_CAP) -> SimplicialMap:
    """The identity on points, as a map of Vietoris nerves."""
    refinement_assignment(fine, coarse)
    return SimplicialMap(
        vietoris_nerve(fine, dim_cap),
        vietoris_nerve(coarse, dim_cap),
        {p: p for p in fine.carrier.points},
    )


# --------------------------------------------------------------------------
# Circle covers
# --------------------------------------------------------------------------


def circle_carrier(resolution: int) -> Carrier:
    """Uniform sample of the circle: point k sits at angle 2*pi*k/resolution."""
    if resolution < 1:
        raise CoverError("resolution must be positive")
    return Carrier(tuple(range(resolution)))


def _in_arc(k: int, resolution: int, i: int, m: int) -> bool:
    # angle k/resolution turns lies in the open arc ((4i-3)/16m, (4i+5)/16m) mod 1
    x = 16 * m * k
    lo, hi = (4 * i - 3) * resolution, (4 * i + 5) * resolution
    span = 16 * m * resolution
    return any(lo < x + s * span < hi for s in (-1, 0, 1))


def circle_cover(m: int, samples_per_arc: int = 8, resolution: int | None = None) -> Cover:
    """The 4m open arcs

        U(i, m) = { theta : 2pi(i-1)/4m + 2pi/16m < theta < 2pi(i+1)/4m + 2pi/16m },

    0 <= i < 4m, restricted to a uniform sample of the circle.

    The default sample has ``2 * m * samples_per_arc`` points, about
    ``samples_per_arc`` per arc; pass ``resolution`` to share one sample
    between several covers.  Membership is decided in exact integer
    arithmetic.  Raises CoverError when the sample misses an arc or the
    overlap of two consecutive arcs.
    """
    if m < 1:
        raise CoverError("m must be >= 1")
    if resolution is None:
        if samples_per_arc < 1:
            raise CoverError("samples_per_arc must be positive")
        resolution = 2 * m * samples_per_arc
    n = 4 * m
    sets = [frozenset(k for k in range(resolution) if _in_arc(k, resolution, i, m)) for i in range(n)]
    for i, s in enumerate(sets):
        if not s:
            raise CoverError(f"arc {i} of circle_cover({m}) contains no sample point")
        if not s & sets[(i + 1) % n]:
            raise CoverError(f"arcs {i} and {(i + 1) % n} of circle_cover({m}) share no sample point")
    return Cover(circle_carrier(resolution), tuple(sets))


def common_circle_resolution(ms: Iterable[int], samples_per_arc: int = 8) -> int:
    """A sample size adequate for every circle_cover(m), m in ms, at once."""
    lcm = 1
    for m in ms:
        lcm = lcm * m // gcd(lcm, m)
    return 2 * lcm * samples_per_arc


def ball_cover(carrier: Carrier, radius: float) -> Cover:
    """Open balls of the given radius around every carrier point."""
    if carrier.metric is None:
        raise CoverError("ball covers need a metric")
    d = carrier.metric
    pts = carrier.points
    return Cover(carrier, tuple(
        frozenset(pts[j] for j in range(len(pts)) if d[i][j] < radius) for i in range(len(pts))
    ))


# --------------------------------------------------------------------------
# Towers of covers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverTower:
    """Covers lambda_0, lambda_1, ... with lambda_0 the whole carrier.

    ``witnesses[i-1][k]`` is the index of a set of lambda_{i-1} containing
    set k of lambda_i.  Missing witnesses are filled in with the
    smallest-index choice.
    """

    covers: tuple[Cover, ...]
    witnesses: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        covers = tuple(self.covers)
        if not covers:
            raise CoverError("a cover tower needs at least one cover")
        object.__setattr__(self, "covers", covers)
        first = covers[0]
        if len(first.sets) != 1 or first.sets[0] != frozenset(first.carrier.points):
            raise CoverError("the first cover of a tower must be the whole carrier")
        for c in covers[1:]:
            if set(c.carrier.points) != set(first.carrier.points):
                raise CoverError("all covers of a tower must share one carrier")
        if self.witnesses is None:
            wit = tuple(refinement_assignment(covers[i], covers[i - 1]) for i in range(1, len(covers)))
        else:
            wit = tuple(tuple(int(x) for x in w) for w in self.witnesses)
            if len(wit) != len(covers) - 1:
                raise CoverError(f"expected {len(covers) - 1} witnesses, got {len(wit)}")
            for i, w in enumerate(wit, start=1):
                fine, coarse = covers[i], covers[i - 1]
                if len(w) != len(fine):
                    raise CoverError(f"witness {i - 1} has {len(w)} entries for {len(fine)} sets")
                for k, j in enumerate(w):
                    if not 0 <= j < len(coarse) or not fine.sets[k] <= coarse.sets[j]:
                        raise NotARefinement(k, f"witness {i - 1}: set {k} is not contained in set {j}")
        object.__setattr__(self, "witnesses", wit)

    @classmethod
    def from_covers(cls, covers: Sequence[Cover]) -> CoverTower:
        """Prepend the one-set cover lambda_0 and infer witnesses."""
        carrier = covers[0].carrier
        whole = Cover(carrier, (frozenset(carrier.points),))
        return cls((whole, *covers))

    def __len__(self) -> int:
        return len(self.covers)

    def nerves(self, dim_cap: int | None = DEFAULT_DIM_CAP) -> list[SimplicialComplex]:
        return [cech_nerve(c, dim_cap) for c in self.covers]

    def projections(self, dim_cap: int | None = DEFAULT_DIM_CAP) -> tuple[list[SimplicialComplex], list[SimplicialMap]]:
        nerves = self.nerves(dim_cap)
        maps = [
            SimplicialMap(nerves[i], nerves[i - 1], dict(enumerate(self.witnesses[i - 1])))
            for i in range(1, len(nerves))
        ]
        return nerves, maps
