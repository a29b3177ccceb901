"""Inverse and direct systems of finitely generated abelian groups.

A tower ``G_0 <- G_1 <- ... <- G_N`` comes in one of three flavours:

* with a periodic tail ``f: G_N -> G_N`` the tower continues forever by f;
  Mittag-Leffler, lim and lim^1 are then decided exactly;
* ``truncated=False`` and no tail: a finite diagram, whose limit is G_N;
* ``truncated=True`` and no tail: a prefix of an unknown tower; answers are
  read off the computed stages and flagged as truncated or inconclusive.

Exactness for periodic tails rests on the free part: for the matrix A of f
on ``G_N / torsion`` write its characteristic polynomial as
``x^a * prod q_i^e_i`` over Z.  The images of A^k stabilize iff every
``q_i(0)`` is a unit, and ``∩ im A^k`` is a lattice of rank
``sum deg(q_i) e_i`` over the factors with ``q_i(0) = ±1``.  The torsion
part is finite, so it is always Mittag-Leffler and its limit is the
eventual image.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import gcd

import sympy

from .exact_algebra import (
    FGAbelianGroup,
    Homomorphism,
    IntMatrix,
    Subquotient,
    hom_image,
    subgroup_quotient,
)

DEFAULT_WINDOW = 8


class Lim1Class(str, Enum):
    ZERO = "zero"
    NONZERO_UNCOUNTABLE = "nonzero_uncountable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class MLStatus:
    """Mittag-Leffler verdict: ``holds``, ``fails`` or ``inconclusive``."""

    kind: str
    stable_at: int | None = None
    witness: int | None = None
    detail: str = ""
    window: int | None = None

    @property
    def holds(self) -> bool:
        return self.kind == "holds"

    @property
    def fails(self) -> bool:
        return self.kind == "fails"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "stable_at": self.stable_at, "witness": self.witness,
                "detail": self.detail, "window": self.window}

    @classmethod
    def from_dict(cls, d: dict) -> MLStatus:
        return cls(d["kind"], d.get("stable_at"), d.get("witness"), d.get("detail", ""), d.get("window"))


@dataclass(frozen=True)
class LimResult:
    kind: str  # "exact" | "truncated"
    group: FGAbelianGroup
    window: int | None = None

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    def __str__(self) -> str:
        return str(self.group) if self.exact else f"{self.group} (truncated, window {self.window})"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "group": self.group.to_dict(), "text": str(self.group), "window": self.window}

    @classmethod
    def from_dict(cls, d: dict) -> LimResult:
        return cls(d["kind"], FGAbelianGroup.from_dict(d["group"]), d.get("window"))


@dataclass(frozen=True)
class ColimResult:
    """``exact``/``truncated`` carry a group; ``localized`` is Z[1/inverted]^rank + torsion."""

    kind: str
    group: FGAbelianGroup | None = None
    rank: int = 0
    inverted: int = 1
    torsion: tuple[int, ...] = ()
    window: int | None = None
    stable_at: int | None = None

    def __str__(self) -> str:
        if self.kind == "localized":
            parts = [f"Z/{t}" for t in self.torsion]
            loc = f"Z[1/{self.inverted}]"
            parts.append(loc if self.rank == 1 else f"{loc}^{self.rank}")
            return " + ".join(parts)
        if self.kind == "truncated":
            return f"{self.group} (truncated, window {self.window})"
        return str(self.group)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "text": str(self), "window": self.window, "stable_at": self.stable_at}
        if self.kind == "localized":
            d.update(rank=self.rank, inverted=self.inverted, torsion=list(self.torsion))
        else:
            d["group"] = self.group.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ColimResult:
        if d["kind"] == "localized":
            return cls("localized", None, d["rank"], d["inverted"], tuple(d["torsion"]),
                       d.get("window"), d.get("stable_at"))
        return cls(d["kind"], FGAbelianGroup.from_dict(d["group"]), window=d.get("window"),
                   stable_at=d.get("stable_at"))


@dataclass(frozen=True)
class TowerAnalysis:
    ml: MLStatus
    lim: LimResult
    lim1: Lim1Class
    annotation: str = ""

    def to_dict(self) -> dict:
        return {"ml": self.ml.to_dict(), "lim": self.lim.to_dict(), "lim1": self.lim1.value,
                "annotation": self.annotation}

    @classmethod
    def from_dict(cls, d: dict) -> TowerAnalysis:
        return cls(MLStatus.from_dict(d["ml"]), LimResult.from_dict(d["lim"]), Lim1Class(d["lim1"]),
                   d.get("annotation", ""))


def _check_endomorphism(f: Homomorphism | None, group: FGAbelianGroup, what: str) -> None:
    if f is not None and (f.source != group or f.target != group):
        raise ValueError(f"{what} must be an endomorphism of the last stage {group}")


@dataclass(frozen=True)
class GroupTower:
    """``bonds[i]: stages[i+1] -> stages[i]``; optional periodic tail on the last stage."""

    stages: tuple[FGAbelianGroup, ...]
    bonds: tuple[Homomorphism, ...] = ()
    tail: Homomorphism | None = None
    truncated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "bonds", tuple(self.bonds))
        if not self.stages:
            raise ValueError("a tower needs at least one stage")
        if len(self.bonds) != len(self.stages) - 1:
            raise ValueError(f"{len(self.stages)} stages need {len(self.stages) - 1} bonds")
        for i, b in enumerate(self.bonds):
            if b.source != self.stages[i + 1] or b.target != self.stages[i]:
                raise ValueError(f"bond {i} does not map stage {i + 1} to stage {i}")
        _check_endomorphism(self.tail, self.stages[-1], "tail")

    @classmethod
    def periodic(cls, group: FGAbelianGroup, f: Homomorphism) -> GroupTower:
        return cls((group,), (), f)

    @property
    def depth(self) -> int:
        return len(self.stages) - 1

    def composite(self, j: int, i: int) -> Homomorphism:
        """The bonding map ``G_j -> G_i`` for explicit stages ``j >= i``."""
        h = Homomorphism.identity(self.stages[j])
        for k in range(j - 1, i - 1, -1):
            h = self.bonds[k] @ h
        return h

    def drop_first(self) -> GroupTower:
        if self.depth == 0:
            return self
        return GroupTower(self.stages[1:], self.bonds[1:], self.tail, self.truncated)


@dataclass(frozen=True)
class DirectedSystem:
    """``maps[i]: stages[i] -> stages[i+1]``; optional periodic tail on the last stage."""

    stages: tuple[FGAbelianGroup, ...]
    maps: tuple[Homomorphism, ...] = ()
    tail: Homomorphism | None = None
    truncated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.stages:
            raise ValueError("a directed system needs at least one stage")
        if len(self.maps) != len(self.stages) - 1:
            raise ValueError(f"{len(self.stages)} stages need {len(self.stages) - 1} maps")
        for i, f in enumerate(self.maps):
            if f.source != self.stages[i] or f.target != self.stages[i + 1]:
                raise ValueError(f"map {i} does not map stage {i} to stage {i + 1}")
        _check_endomorphism(self.tail, self.stages[-1], "tail")


# --------------------------------------------------------------------------
# Periodic tails
# --------------------------------------------------------------------------


def _blocks(f: Homomorphism) -> tuple[Homomorphism, list[list[int]]]:
    """Torsion restriction and free-quotient matrix of an endomorphism."""
    G = f.source
    k = len(G.torsion)
    M = f.matrix.tolist()
    T = FGAbelianGroup(0, G.torsion)
    f_t = Homomorphism(T, T, IntMatrix.from_rows([row[:k] for row in M[:k]], cols=k))
    A = [row[k:] for row in M[k:]]
    return f_t, A


def _eventual_image(f: Homomorphism) -> FGAbelianGroup:
    """Stable image of an endomorphism of a finite group."""
    power = Homomorphism.identity(f.source)
    order = f.source.order
    while True:
        nxt = f @ power
        img = hom_image(nxt)
        if img.order == order:
            return hom_image(power)
        power, order = nxt, img.order


@lru_cache(maxsize=256)
def _charpoly_split(rows: tuple[tuple[int, ...], ...]) -> tuple[int, int]:
    """(degree of the unit-constant part, product of |q(0)| over non-unit factors)."""
    if not rows:
        return 0, 1
    x = sympy.Symbol("x")
    poly = sympy.Matrix(rows).charpoly(x).as_expr()
    unit_degree, drop = 0, 1
    for q, e in sympy.factor_list(poly, x)[1]:
        q = sympy.Poly(q, x)
        c = int(q.eval(0))
        if c == 0:
            continue
        if abs(c) == 1:
            unit_degree += q.degree() * e
        else:
            drop *= abs(c) ** e
    return unit_degree, drop


@dataclass(frozen=True)
class _Tail:
    ml_holds: bool
    drop: int  # index of im f^{k+1} in im f^k for large k
    lim: FGAbelianGroup
    stable_steps: int | None
    free_matrix: tuple[tuple[int, ...], ...]


def _analyze_tail(f: Homomorphism) -> _Tail:
    G = f.source
    f_t, A = _blocks(f)
    key = tuple(tuple(r) for r in A)
    unit_degree, drop = _charpoly_split(key)
    torsion_lim = _eventual_image(f_t) if f_t.source.ngens else FGAbelianGroup()
    lim = FGAbelianGroup(unit_degree, torsion_lim.torsion)
    holds = drop == 1
    stable = None
    if holds:
        bound = G.free_rank + sum(t.bit_length() for t in G.torsion) + 2
        power = Homomorphism.identity(G)
        for k in range(bound + 1):
            nxt = f @ power
            if subgroup_quotient(G, power.matrix.columns(), nxt.matrix.columns()).is_trivial:
                stable = k
                break
            power = nxt
    return _Tail(holds, drop, lim, stable, key)


def _annotation(tail: _Tail) -> str:
    if tail.ml_holds:
        return ""
    if len(tail.free_matrix) == 1:
        n = abs(tail.free_matrix[0][0])
        return f"lim^1 is the {n}-adic integers modulo Z (uncountable, not finitely generated)"
    return "lim^1 is uncountable and not finitely generated"


# --------------------------------------------------------------------------
# Inverse limits
# --------------------------------------------------------------------------


def _same_image(t: GroupTower, i: int, j: int) -> bool:
    """Whether im(G_{j+1} -> G_i) equals im(G_j -> G_i)."""
    a = t.composite(j, i)
    b = t.composite(j + 1, i)
    return subgroup_quotient(t.stages[i], a.matrix.columns(), b.matrix.columns()).is_trivial


def mittag_leffler(t: GroupTower, window: int = DEFAULT_WINDOW) -> MLStatus:
    if window < 1:
        raise ValueError("window must be >= 1")
    N = t.depth
    if t.tail is not None:
        tail = _analyze_tail(t.tail)
        if tail.ml_holds:
            return MLStatus("holds", stable_at=N + tail.stable_steps)
        return MLStatus(
            "fails", witness=N,
            detail=f"images of the periodic tail drop by index {tail.drop} at every step",
        )
    if not t.truncated:
        return MLStatus("holds", stable_at=N, detail="finite diagram")
    if all(G.is_finite for G in t.stages):
        return MLStatus("holds", detail="all stages finite", window=window)
    # a heuristic on computed stages: the last step must not shrink any image
    d = min(N, window)
    if d >= 2 and all(_same_image(t, i, d - 1) for i in range(d)):
        return MLStatus("holds", stable_at=d - 1, detail="images stable on computed stages", window=window)
    return MLStatus("inconclusive", window=window)


def inverse_limit(t: GroupTower, window: int = DEFAULT_WINDOW) -> LimResult:
    if window < 1:
        raise ValueError("window must be >= 1")
    if t.tail is not None:
        return LimResult("exact", _analyze_tail(t.tail).lim)
    if not t.truncated:
        return LimResult("exact", t.stages[-1])
    return LimResult("truncated", t.stages[min(t.depth, window)], window)


def _lim1_from(ml: MLStatus) -> Lim1Class:
    if ml.holds:
        return Lim1Class.ZERO
    if ml.fails:
        return Lim1Class.NONZERO_UNCOUNTABLE
    return Lim1Class.INCONCLUSIVE


def lim_one(t: GroupTower, window: int = DEFAULT_WINDOW) -> Lim1Class:
    """Zero iff Mittag-Leffler; otherwise uncountable (finitely generated stages)."""
    return _lim1_from(mittag_leffler(t, window))


def analyze(t: GroupTower, window: int = DEFAULT_WINDOW) -> TowerAnalysis:
    ml = mittag_leffler(t, window)
    note = _annotation(_analyze_tail(t.tail)) if ml.fails else ""
    return TowerAnalysis(ml, inverse_limit(t, window), _lim1_from(ml), note)


# --------------------------------------------------------------------------
# Direct limits
# --------------------------------------------------------------------------


def _iso_from(d: DirectedSystem, lowest: int) -> int:
    """Smallest k >= lowest such that maps k, ..., N-1 are all isomorphisms."""
    k = len(d.maps)
    while k > lowest and d.maps[k - 1].is_isomorphism():
        k -= 1
    return k


def _colim_tail(g: Homomorphism) -> tuple[str, int, int, tuple[int, ...]]:
    """Colimit of ``G --g--> G --g--> ...`` as (kind, rank, inverted, torsion)."""
    g_t, A = _blocks(g)
    torsion = _eventual_image(g_t).torsion if g_t.source.ngens else ()
    r = len(A)
    if not r:
        return "exact", 0, 1, torsion
    Am = IntMatrix.from_rows(A, cols=r)
    P = IntMatrix.identity(r)
    for _ in range(r):
        P = Am @ P
    stable = Subquotient(P, IntMatrix.zeros(r, 0))
    s = stable.group.free_rank
    if not s:
        return "exact", 0, 1, torsion
    B = IntMatrix.from_columns(
        [list(stable.coordinates(Am.apply(stable.lift(k)))) for k in range(s)], s
    )
    g0 = 0
    for x in B.entries:
        g0 = gcd(g0, x)
    W = IntMatrix(s, s, tuple(x // g0 for x in B.entries))
    if abs(W.det()) != 1:
        return "unsupported", s, 0, torsion
    return ("exact" if g0 == 1 else "localized"), s, g0, torsion


def direct_limit(d: DirectedSystem, window: int = DEFAULT_WINDOW) -> ColimResult:
    if window < 1:
        raise ValueError("window must be >= 1")
    N = len(d.stages) - 1
    last = d.stages[-1]
    if d.tail is not None:
        kind, rank, inverted, torsion = _colim_tail(d.tail)
        stable_at = _iso_from(d, 0) if d.tail.is_isomorphism() else None
        if kind == "exact":
            return ColimResult("exact", FGAbelianGroup(rank, torsion), stable_at=stable_at)
        if kind == "localized":
            return ColimResult("localized", None, rank, inverted, torsion)
        return ColimResult("truncated", last, window=window)
    if not d.truncated:
        return ColimResult("exact", last, stable_at=_iso_from(d, 0))
    k = _iso_from(d, max(0, N - window))
    if k < N:
        return ColimResult("exact", last, stable_at=k)
    return ColimResult("truncated", last, window=window)
