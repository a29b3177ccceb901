"""Finite abstract simplicial complexes, simplicial maps and their (co)homology."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from .chains import Chain, ChainComplex, HomologyData
from .exact_algebra import FGAbelianGroup, Homomorphism, IntMatrix

Vertex = Hashable


class DimensionCapError(ValueError):
    """Degree requested at or above the cap of a truncated complex."""


class InvalidSimplicialMap(ValueError):
    pass


def _check_modulus(m: int) -> None:
    if m == 1 or m < 0:
        raise ValueError(f"coefficient modulus must be 0 (integers) or >= 2, got {m}")


class SimplicialComplex:
    """A finite abstract simplicial complex with a fixed vertex order.

    Simplices are closed under faces automatically.  With ``dim_cap`` set,
    simplices above that dimension are dropped; ``truncated`` records
    whether anything was actually dropped, in which case homology is only
    meaningful below the cap.
    """

    def __init__(
        self,
        vertices: Iterable[Vertex],
        simplices: Iterable[Iterable[Vertex]] = (),
        dim_cap: int | None = None,
    ):
        self.vertices: tuple[Vertex, ...] = tuple(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        if dim_cap is not None and dim_cap < 0:
            raise ValueError("dim_cap must be non-negative")
        self.dim_cap = dim_cap
        self.truncated = False
        size_cap = None if dim_cap is None else dim_cap + 1
        faces: set[tuple[int, ...]] = {(i,) for i in range(len(self.vertices))}
        seen_max: set[tuple[int, ...]] = set()
        for s in simplices:
            try:
                key = tuple(sorted({self.index[v] for v in s}))
            except KeyError as exc:
                raise ValueError(f"simplex uses unknown vertex {exc.args[0]!r}") from None
            if not key or key in seen_max or key in faces:
                continue
            seen_max.add(key)
            top = len(key)
            if size_cap is not None and top > size_cap:
                self.truncated = True
                top = size_cap
            for k in range(2, top + 1):
                faces.update(combinations(key, k))
        by_dim: dict[int, list[tuple[int, ...]]] = {}
        for f in faces:
            by_dim.setdefault(len(f) - 1, []).append(f)
        self._simplices = {d: sorted(fs) for d, fs in by_dim.items()}
        self._pos = {d: {s: i for i, s in enumerate(fs)} for d, fs in self._simplices.items()}
        self._cache: dict = {}

    @property
    def dimension(self) -> int:
        return max(self._simplices, default=-1)

    def simplices(self, d: int) -> list[tuple[int, ...]]:
        """d-simplices as sorted tuples of vertex positions."""
        return self._simplices.get(d, [])

    def count(self, d: int) -> int:
        return len(self._simplices.get(d, ()))

    def counts(self) -> list[int]:
        return [self.count(d) for d in range(self.dimension + 1)]

    def simplex_index(self, simplex: Sequence[int]) -> int | None:
        return self._pos.get(len(simplex) - 1, {}).get(tuple(simplex))

    def contains(self, vertices: Iterable[Vertex]) -> bool:
        key = tuple(sorted({self.index[v] for v in vertices}))
        return self.simplex_index(key) is not None

    def maximal_simplices(self) -> list[tuple[Vertex, ...]]:
        covered: set[tuple[int, ...]] = set()
        out = []
        for d in range(self.dimension, -1, -1):
            for s in self.simplices(d):
                if s not in covered:
                    out.append(tuple(self.vertices[i] for i in s))
                if d:
                    covered.update(s[:i] + s[i + 1:] for i in range(d + 1))
        return out

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.counts()))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertices == other.vertices and self._simplices == other._simplices

    def __hash__(self) -> int:
        return hash((self.vertices, tuple(len(v) for v in self._simplices.values())))

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self.vertices)} vertices, counts={self.counts()})"

    def check_degree(self, n: int) -> None:
        if self.truncated and n >= self.dim_cap:
            raise DimensionCapError(
                f"degree {n} is not computable below dimension cap {self.dim_cap}"
            )

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "simplices": [list(s) for s in self.maximal_simplices()],
        }

    @classmethod
    def from_dict(cls, data: Mapping, dim_cap: int | None = None) -> SimplicialComplex:
        return cls(data["vertices"], data.get("simplices", ()), dim_cap=dim_cap)

    # chain complexes -------------------------------------------------------

    def chain_complex(self, reduced: bool = False) -> ChainComplex:
        key = ("chains", reduced)
        if key not in self._cache:
            sizes, bd = {}, {}
            for d in range(self.dimension + 1):
                sizes[d] = self.count(d)
                cols = []
                for s in self.simplices(d):
                    col: Chain = {}
                    if d:
                        for i in range(d + 1):
                            col[self._pos[d - 1][s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
                    elif reduced:
                        col[0] = 1
                    cols.append(col)
                bd[d] = cols
            if reduced:
                sizes[-1] = 1
                bd[-1] = [{}]
            self._cache[key] = ChainComplex(sizes, bd)
        return self._cache[key]

    def cochain_complex(self, reduced: bool = False) -> ChainComplex:
        """Cochains graded by ``-n`` so that coboundaries lower the grading."""
        key = ("cochains", reduced)
        if key not in self._cache:
            sizes, bd = {}, {}
            top = self.dimension
            for d in range(top + 1):
                sizes[-d] = self.count(d)
                cols: list[Chain] = [{} for _ in range(self.count(d))]
                for j, s in enumerate(self.simplices(d + 1)):
                    for i in range(d + 2):
                        cols[self._pos[d][s[:i] + s[i + 1:]]][j] = -1 if i % 2 else 1
                bd[-d] = cols
            if reduced:
                sizes[1] = 1
                bd[1] = [{v: 1 for v in range(self.count(0))}]
            self._cache[key] = ChainComplex(sizes, bd)
        return self._cache[key]

    def homology_data(self, n: int, m: int = 0, reduced: bool = False) -> HomologyData:
        _check_modulus(m)
        if n < 0:
            raise ValueError("degree must be non-negative")
        self.check_degree(n)
        return self.chain_complex(reduced).homology(n, m)

    def cohomology_data(self, n: int, m: int = 0, reduced: bool = False) -> HomologyData:
        _check_modulus(m)
        if n < 0:
            raise ValueError("degree must be non-negative")
        self.check_degree(n)
        return self.cochain_complex(reduced).homology(-n, m)


def boundary_matrix(K: SimplicialComplex, n: int) -> IntMatrix:
    """Boundary from n-chains to (n-1)-chains; zero rows in degree 0."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    return K.chain_complex().boundary_matrix(n)


def homology(K: SimplicialComplex, n: int, m: int = 0, reduced: bool = False) -> FGAbelianGroup:
    """H_n(K; Z/m), with m = 0 meaning integer coefficients."""
    return K.homology_data(n, m, reduced).group


def cohomology(K: SimplicialComplex, n: int, m: int = 0, reduced: bool = False) -> FGAbelianGroup:
    return K.cohomology_data(n, m, reduced).group


def betti_numbers(K: SimplicialComplex, m: int = 0) -> list[FGAbelianGroup]:
    return [homology(K, n, m) for n in range(K.dimension + 1)]


class SimplicialMap:
    """Vertex map between complexes sending simplices to simplices."""

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, vertex_map: Mapping[Vertex, Vertex]):
        self.source = source
        self.target = target
        try:
            self.vertex_map = {v: vertex_map[v] for v in source.vertices}
        except KeyError as exc:
            raise InvalidSimplicialMap(f"vertex {exc.args[0]!r} has no image") from None
        try:
            self._pos = tuple(target.index[self.vertex_map[v]] for v in source.vertices)
        except KeyError as exc:
            raise InvalidSimplicialMap(f"image {exc.args[0]!r} is not a target vertex") from None
        for d in range(1, source.dimension + 1):
            for s in source.simplices(d):
                img = tuple(sorted({self._pos[i] for i in s}))
                if target.simplex_index(img) is None:
                    names = [source.vertices[i] for i in s]
                    raise InvalidSimplicialMap(f"simplex {names} is not sent to a simplex")
        self._cache: dict = {}

    @classmethod
    def identity(cls, K: SimplicialComplex) -> SimplicialMap:
        return cls(K, K, {v: v for v in K.vertices})

    @classmethod
    def constant(cls, source: SimplicialComplex, target: SimplicialComplex, vertex: Vertex) -> SimplicialMap:
        return cls(source, target, {v: vertex for v in source.vertices})

    def __call__(self, v: Vertex) -> Vertex:
        return self.vertex_map[v]

    def compose(self, other: SimplicialMap) -> SimplicialMap:
        """``self ∘ other``."""
        if other.target != self.source:
            raise InvalidSimplicialMap("cannot compose: complexes do not match")
        return SimplicialMap(other.source, self.target,
                             {v: self.vertex_map[other.vertex_map[v]] for v in other.source.vertices})

    def to_pairs(self) -> list[list]:
        return [[v, self.vertex_map[v]] for v in self.source.vertices]

    def chain_map(self, d: int) -> dict[int, tuple[int, int]]:
        """Sparse chain map in degree d: source simplex -> (target simplex, sign).

        Simplices whose image is degenerate are absent (they map to 0).
        """
        if d not in self._cache:
            out = {}
            for j, s in enumerate(self.source.simplices(d)):
                img = [self._pos[i] for i in s]
                if len(set(img)) < len(img):
                    continue
                order = sorted(range(len(img)), key=img.__getitem__)
                sign = _permutation_sign(order)
                out[j] = (self.target.simplex_index(tuple(sorted(img))), sign)
            self._cache[d] = out
        return self._cache[d]

    def push(self, d: int, chain: Mapping[int, int]) -> Chain:
        cm = self.chain_map(d)
        out: Chain = {}
        for j, a in chain.items():
            hit = cm.get(j)
            if hit is not None:
                k, s = hit
                w = out.get(k, 0) + s * a
                if w:
                    out[k] = w
                else:
                    del out[k]
        return out

    def pull(self, d: int, cochain: Mapping[int, int]) -> Chain:
        out: Chain = {}
        for j, (k, s) in self.chain_map(d).items():
            a = cochain.get(k)
            if a:
                out[j] = s * a
        return out


def _permutation_sign(order: Sequence[int]) -> int:
    seen = [False] * len(order)
    sign = 1
    for i in range(len(order)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = order[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def induced_hom(f: SimplicialMap, n: int, m: int = 0, reduced: bool = False) -> Homomorphism:
    """The map ``f_*: H_n(source) -> H_n(target)`` in normal-form bases."""
    src = f.source.homology_data(n, m, reduced)
    tgt = f.target.homology_data(n, m, reduced)
    cols = [tgt.coordinates(f.push(n, src.representative(k))) for k in range(src.group.ngens)]
    return Homomorphism(src.group, tgt.group, IntMatrix.from_columns(cols, tgt.group.ngens))


def induced_cohom(f: SimplicialMap, n: int, m: int = 0, reduced: bool = False) -> Homomorphism:
    """The map ``f^*: H^n(target) -> H^n(source)``."""
    src = f.target.cohomology_data(n, m, reduced)
    tgt = f.source.cohomology_data(n, m, reduced)
    cols = [tgt.coordinates(f.pull(n, src.representative(k))) for k in range(src.group.ngens)]
    return Homomorphism(src.group, tgt.group, IntMatrix.from_columns(cols, tgt.group.ngens))


@dataclass(frozen=True)
class MappingCone:
    complex: SimplicialComplex
    target_inclusion: SimplicialMap
    source_inclusion: SimplicialMap
    apex: str = "*"


def mapping_cone(f: SimplicialMap) -> MappingCone:
    """Simplicial mapping cone: the mapping cylinder of f with the source end coned off.

    The cylinder uses the source vertex order: for a source simplex
    v_0 < ... < v_k it contains ``{v_0..v_i} + f{v_i..v_k}`` for each i.
    Vertices are renamed ``t:<id>`` (target), ``s:<id>`` (source) and ``*``.
    """
    K, L = f.source, f.target
    tv = {v: f"t:{v}" for v in L.vertices}
    sv = {v: f"s:{v}" for v in K.vertices}
    vertices = [tv[v] for v in L.vertices] + [sv[v] for v in K.vertices] + ["*"]
    simplices = [[tv[v] for v in s] for s in L.maximal_simplices()]
    for d in range(K.dimension + 1):
        for s in K.simplices(d):
            verts = [K.vertices[i] for i in s]
            for i in range(len(verts)):
                simplices.append([sv[v] for v in verts[: i + 1]] + [tv[f(v)] for v in verts[i:]])
            simplices.append([sv[v] for v in verts] + ["*"])
    C = SimplicialComplex(vertices, simplices)
    return MappingCone(
        C,
        SimplicialMap(L, C, tv),
        SimplicialMap(K, C, sv),
    )
