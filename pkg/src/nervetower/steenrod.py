"""Homology towers of nerve towers, Čech (co)homology and Steenrod homology.

Steenrod homology sits in the Milnor sequence

    0 -> lim^1 H~_{n+1}(K_i) -> H^st_n -> lim H~_n(K_i) -> 0,

so a report degree is exact whenever the lim^1 term vanishes, and carries
both ends otherwise.  Čech cohomology is the direct limit of H^n(K_i) along
the dual bonds.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from .exact_algebra import FGAbelianGroup, Homomorphism
from .nerve import (
    DEFAULT_DIM_CAP,
    CoverTower,
    circle_cover,
    common_circle_resolution,
    refinement_projection,
)
from .simplicial import (
    DimensionCapError,
    SimplicialComplex,
    SimplicialMap,
    _check_modulus,
    induced_cohom,
    induced_hom,
)
from .tower import (
    DEFAULT_WINDOW,
    ColimResult,
    DirectedSystem,
    GroupTower,
    Lim1Class,
    LimResult,
    MLStatus,
    analyze,
    direct_limit,
    mittag_leffler,
)

SCHEMA_VERSION = 1


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("NERVETOWER_THREADS", "1")))
    except ValueError:
        return 1


def _map_stages(fn: Callable, items: Sequence) -> list:
    workers = _workers()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class PeriodicNerveTail:
    """Continuation of a nerve tower past its last complex K_N.

    ``bond`` and ``equivalence`` both map a complex K_{N+1} to K_N, and the
    equivalence must induce isomorphisms on homology.  The tower is then
    continued forever by identifying K_{N+1} with K_N through the
    equivalence, so the tail endomorphism on H_n(K_N) is
    ``bond_* o (equivalence_*)^-1``.
    """

    bond: SimplicialMap
    equivalence: SimplicialMap

    def __post_init__(self):
        if self.bond.source != self.equivalence.source or self.bond.target != self.equivalence.target:
            raise ValueError("tail bond and equivalence must have the same source and target")

    @property
    def complex(self) -> SimplicialComplex:
        return self.bond.source


@dataclass(frozen=True)
class NerveTower:
    """Complexes K_0, ..., K_N with bonds ``bonds[i]: K_{i+1} -> K_i``."""

    complexes: tuple[SimplicialComplex, ...]
    bonds: tuple[SimplicialMap, ...] = ()
    tail: PeriodicNerveTail | None = None

    def __post_init__(self):
        object.__setattr__(self, "complexes", tuple(self.complexes))
        object.__setattr__(self, "bonds", tuple(self.bonds))
        if not self.complexes:
            raise ValueError("a nerve tower needs at least one complex")
        if len(self.bonds) != len(self.complexes) - 1:
            raise ValueError(f"{len(self.complexes)} complexes need {len(self.complexes) - 1} bonds")
        for i, b in enumerate(self.bonds):
            if b.source != self.complexes[i + 1] or b.target != self.complexes[i]:
                raise ValueError(f"bond {i} does not map complex {i + 1} to complex {i}")
        if self.tail is not None and self.tail.bond.target != self.complexes[-1]:
            raise ValueError("tail maps must land in the last complex")

    @classmethod
    def from_cover_tower(cls, ct: CoverTower, dim_cap: int | None = DEFAULT_DIM_CAP,
                         tail: PeriodicNerveTail | None = None) -> NerveTower:
        nerves, maps = ct.projections(dim_cap)
        return cls(tuple(nerves), tuple(maps), tail)

    @property
    def depth(self) -> int:
        return len(self.complexes) - 1

    @property
    def dim_cap(self) -> int | None:
        caps = [K.dim_cap for K in self.complexes if K.dim_cap is not None]
        return min(caps) if caps else None

    @property
    def dimension(self) -> int:
        return max(K.dimension for K in self.complexes)

    def _check_degree(self, n: int) -> None:
        ks = list(self.complexes) + ([self.tail.complex] if self.tail else [])
        for i, K in enumerate(ks):
            try:
                K.check_degree(n)
            except DimensionCapError as exc:
                name = "tail complex" if i == len(self.complexes) else f"stage {i}"
                raise DimensionCapError(f"{name}: {exc}") from None


# --------------------------------------------------------------------------
# Towers of groups
# --------------------------------------------------------------------------


def homology_tower(t: NerveTower, n: int, m: int = 0, reduced: bool = True) -> GroupTower:
    _check_modulus(m)
    t._check_degree(n)
    stages = _map_stages(lambda K: K.homology_data(n, m, reduced).group, t.complexes)
    bonds = _map_stages(lambda f: induced_hom(f, n, m, reduced), t.bonds)
    tail = None
    if t.tail is not None:
        eq = induced_hom(t.tail.equivalence, n, m, reduced)
        if not eq.is_isomorphism():
            raise ValueError(f"tail equivalence is not an isomorphism on H_{n}")
        tail = induced_hom(t.tail.bond, n, m, reduced) @ eq.inverse()
    return GroupTower(tuple(stages), tuple(bonds), tail, truncated=t.tail is None)


def cohomology_system(t: NerveTower, n: int, m: int = 0, reduced: bool = True) -> DirectedSystem:
    _check_modulus(m)
    t._check_degree(n)
    stages = _map_stages(lambda K: K.cohomology_data(n, m, reduced).group, t.complexes)
    maps = _map_stages(lambda f: induced_cohom(f, n, m, reduced), t.bonds)
    tail = None
    if t.tail is not None:
        eq = induced_cohom(t.tail.equivalence, n, m, reduced)
        if not eq.is_isomorphism():
            raise ValueError(f"tail equivalence is not an isomorphism on H^{n}")
        tail = eq.inverse() @ induced_cohom(t.tail.bond, n, m, reduced)
    return DirectedSystem(tuple(stages), tuple(maps), tail, truncated=t.tail is None)


# --------------------------------------------------------------------------
# Reports
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SteenrodEntry:
    """One degree of a Steenrod report.

    ``status`` is ``exact`` (lim^1 vanishes, value = Čech homology),
    ``truncated`` (lim^1 vanishes but the limit is only known on computed
    stages), ``extension_unresolved`` (both Milnor ends reported) or
    ``inconclusive``.
    """

    n: int
    cech_homology: LimResult
    lim1_above: Lim1Class
    status: str
    group: FGAbelianGroup | None = None
    annotation: str = ""

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "cech_homology": self.cech_homology.to_dict(),
            "lim1_class": self.lim1_above.value,
            "steenrod_status": self.status,
            "steenrod": None if self.group is None else self.group.to_dict(),
            "steenrod_text": None if self.group is None else str(self.group),
            "annotation": self.annotation,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> SteenrodEntry:
        g = d.get("steenrod")
        return cls(d["n"], LimResult.from_dict(d["cech_homology"]), Lim1Class(d["lim1_class"]),
                   d["steenrod_status"], None if g is None else FGAbelianGroup.from_dict(g),
                   d.get("annotation", ""))


@dataclass(frozen=True)
class CechCohomEntry:
    n: int
    value: ColimResult

    @property
    def stable_at(self) -> int | None:
        return self.value.stable_at

    def to_dict(self) -> dict:
        return {"n": self.n, "cech_cohomology": self.value.to_dict()}

    @classmethod
    def from_dict(cls, d: Mapping) -> CechCohomEntry:
        return cls(d["n"], ColimResult.from_dict(d["cech_cohomology"]))


def _assemble(n: int, lim: LimResult, above: GroupTower | None, window: int) -> SteenrodEntry:
    if above is None:
        lim1, note = Lim1Class.ZERO, ""
    else:
        a = analyze(above, window)
        lim1, note = a.lim1, a.annotation
    if lim1 is Lim1Class.ZERO:
        status = "exact" if lim.exact else "truncated"
        return SteenrodEntry(n, lim, lim1, status, lim.group, note)
    if lim1 is Lim1Class.NONZERO_UNCOUNTABLE:
        return SteenrodEntry(n, lim, lim1, "extension_unresolved", None, note)
    return SteenrodEntry(n, lim, lim1, "inconclusive", None, note)


def _above(t: NerveTower, n: int, m: int, reduced: bool) -> GroupTower | None:
    """The H_{n+1} tower, or None when every complex is too small to carry it."""
    if n + 1 > t.dimension and all(not K.truncated for K in t.complexes):
        return None
    return homology_tower(t, n + 1, m, reduced)


def steenrod_homology(t: NerveTower, n: int, m: int = 0, reduced: bool = True,
                      window: int = DEFAULT_WINDOW) -> SteenrodEntry:
    lim = analyze(homology_tower(t, n, m, reduced), window).lim
    return _assemble(n, lim, _above(t, n, m, reduced), window)


def cech_cohomology(t: NerveTower, n: int, m: int = 0, reduced: bool = True,
                    window: int = DEFAULT_WINDOW) -> CechCohomEntry:
    return CechCohomEntry(n, direct_limit(cohomology_system(t, n, m, reduced), window))


@dataclass(frozen=True)
class MovabilityResult:
    movable: bool
    statuses: tuple[MLStatus, ...]


def movability_proxy(t: NerveTower, max_degree: int, m: int = 0, reduced: bool = True,
                     window: int = DEFAULT_WINDOW) -> MovabilityResult:
    """Whether every homology tower up to max_degree is Mittag-Leffler.

    When it is, the Milnor sequence collapses below max_degree; that is
    checked here rather than assumed.
    """
    statuses = tuple(mittag_leffler(homology_tower(t, n, m, reduced), window) for n in range(max_degree + 1))
    movable = all(s.holds for s in statuses)
    if movable:
        for n in range(max_degree):
            e = steenrod_homology(t, n, m, reduced, window)
            if e.status not in ("exact", "truncated") or e.group != e.cech_homology.group:
                raise AssertionError(f"degree {n}: Milnor sequence did not collapse")
    return MovabilityResult(movable, statuses)


@dataclass(frozen=True)
class SteenrodReport:
    space: str
    homology: tuple[SteenrodEntry, ...]
    cohomology: tuple[CechCohomEntry, ...]
    modulus: int = 0
    reduced: bool = True
    window: int = DEFAULT_WINDOW
    dim_cap: int | None = DEFAULT_DIM_CAP
    schema_version: int = SCHEMA_VERSION
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "space": self.space,
            "params": dict(self.params),
            "coefficients": self.modulus,
            "reduced": self.reduced,
            "window": self.window,
            "caps": {"dim_cap": self.dim_cap},
            "homology": [e.to_dict() for e in self.homology],
            "cohomology": [e.to_dict() for e in self.cohomology],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> SteenrodReport:
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema version {d.get('schema_version')!r}")
        return cls(
            d["space"],
            tuple(SteenrodEntry.from_dict(e) for e in d["homology"]),
            tuple(CechCohomEntry.from_dict(e) for e in d["cohomology"]),
            d["coefficients"], d["reduced"], d["window"], d["caps"]["dim_cap"],
            d["schema_version"], dict(d.get("params", {})),
        )

    @property
    def has_inexact(self) -> bool:
        return (any(e.status in ("inconclusive", "truncated") for e in self.homology)
                or any(e.value.kind == "truncated" for e in self.cohomology))


def default_max_degree(t: NerveTower) -> int:
    top = t.dimension
    cap = t.dim_cap
    if cap is not None and any(K.truncated for K in t.complexes):
        top = min(top, cap - 1)
    return max(top, 0)


def steenrod_report(t: NerveTower, max_degree: int | None = None, m: int = 0, reduced: bool = True,
                    window: int = DEFAULT_WINDOW, space: str = "custom",
                    params: Mapping[str, Any] | None = None) -> SteenrodReport:
    """Steenrod homology and Čech cohomology for degrees 0..max_degree."""
    _check_modulus(m)
    if window < 1:
        raise ValueError("window must be >= 1")
    if max_degree is None:
        max_degree = default_max_degree(t)
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    hom = [steenrod_homology(t, n, m, reduced, window) for n in range(max_degree + 1)]
    coh = [cech_cohomology(t, n, m, reduced, window) for n in range(max_degree + 1)]
    return SteenrodReport(space, tuple(hom), tuple(coh), m, reduced, window, t.dim_cap,
                          params=dict(params or {}))


# --------------------------------------------------------------------------
# Built-in spaces
# --------------------------------------------------------------------------


def cycle_complex(n: int) -> SimplicialComplex:
    """The n-cycle C_n on vertices 0..n-1 (n >= 3)."""
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return SimplicialComplex(range(n), [(j, (j + 1) % n) for j in range(n)])


def solenoid(p: int = 2, depth: int = 5) -> NerveTower:
    """Cycles C_{4p^i}, i = 0..depth, wrapped p times onto each other."""
    if p < 2 or depth < 0:
        raise ValueError("solenoid needs p >= 2 and depth >= 0")
    sizes = [4 * p ** i for i in range(depth + 2)]
    cs = [cycle_complex(s) for s in sizes]
    bonds = [SimplicialMap(cs[i + 1], cs[i], {j: j % sizes[i] for j in range(sizes[i + 1])})
             for i in range(depth)]
    last, extra = cs[depth], cs[depth + 1]
    tail = PeriodicNerveTail(
        SimplicialMap(extra, last, {j: j % sizes[depth] for j in range(sizes[depth + 1])}),
        SimplicialMap(extra, last, {j: j // p for j in range(sizes[depth + 1])}),
    )
    return NerveTower(tuple(cs[: depth + 1]), tuple(bonds), tail)


def circle_constant(depth: int = 3, dim_cap: int | None = DEFAULT_DIM_CAP) -> NerveTower:
    """Nerve of the four-arc circle cover, repeated with identity bonds."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    from .nerve import cech_nerve

    K = cech_nerve(circle_cover(1), dim_cap)
    ident = SimplicialMap.identity(K)
    return NerveTower((K,) * (depth + 1), (ident,) * depth, PeriodicNerveTail(ident, ident))


def circle_lemma_tower(ms: Sequence[int] = (1, 2, 4, 8), samples_per_arc: int = 8,
                       dim_cap: int | None = DEFAULT_DIM_CAP) -> NerveTower:
    """Čech nerves of circle_cover(m) for m in ms, on one shared sample.

    The tower starts with the one-set cover; it continues past the last m
    with circle_cover(2 * m_last), whose refinement projection serves as
    both tail bond and tail equivalence.  Consecutive covers must refine.
    """
    ms = [int(m) for m in ms]
    if not ms or any(m < 1 for m in ms):
        raise ValueError("ms must be a non-empty sequence of positive integers")
    res = common_circle_resolution(ms + [2 * ms[-1]], samples_per_arc)
    covers = [circle_cover(m, resolution=res) for m in ms]
    ct = CoverTower.from_covers(covers)
    nerves, maps = ct.projections(dim_cap)
    extra = circle_cover(2 * ms[-1], resolution=res)
    proj = refinement_projection(extra, covers[-1], dim_cap, target=nerves[-1])
    return NerveTower(tuple(nerves), tuple(maps), PeriodicNerveTail(proj, proj))


def cantor(depth: int = 5) -> NerveTower:
    """2^i discrete points with pair-collapse bonds; no periodic tail."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    cs = [SimplicialComplex(range(2 ** i)) for i in range(depth + 1)]
    bonds = [SimplicialMap(cs[i + 1], cs[i], {j: j // 2 for j in range(2 ** (i + 1))}) for i in range(depth)]
    return NerveTower(tuple(cs), tuple(bonds))


def point() -> NerveTower:
    K = SimplicialComplex([0])
    ident = SimplicialMap.identity(K)
    return NerveTower((K,), (), PeriodicNerveTail(ident, ident))


SPACES: dict[str, tuple[Callable[..., NerveTower], str]] = {
    "circle_constant": (circle_constant, "circle, constant four-arc nerve tower (depth=3)"),
    "circle_lemma_tower": (circle_lemma_tower, "circle, nerves of the 4m-arc covers (ms=[1,2,4,8])"),
    "solenoid": (solenoid, "p-adic solenoid, cycles C_{4p^i} (p=2, depth=5)"),
    "cantor": (cantor, "Cantor set, 2^i points, truncated (depth=5)"),
    "point": (point, "one point"),
}


def builtin_space(name: str, params: Mapping[str, Any] | None = None) -> NerveTower:
    if name not in SPACES:
        raise ValueError(f"unknown space {name!r}; known: {', '.join(sorted(SPACES))}")
    try:
        return SPACES[name][0](**dict(params or {}))
    except TypeError as exc:
        raise ValueError(f"invalid parameters for {name}: {exc}") from None
