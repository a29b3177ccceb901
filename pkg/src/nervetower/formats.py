"""JSON file formats for complexes, covers, towers and reports.

Every parser raises FormatError with a location: the line and column of a
syntax error, or a path such as ``covers[2].sets[0]`` for a value that
parses but violates the format.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .exact_algebra import FGAbelianGroup, Homomorphism, IntMatrix
from .nerve import Carrier, Cover, CoverTower
from .simplicial import SimplicialComplex, SimplicialMap
from .steenrod import NerveTower, PeriodicNerveTail
from .tower import GroupTower


class FormatError(ValueError):
    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None


def load(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FormatError(str(p), exc.strerror or str(exc)) from None
    return loads(text, str(p))


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _expect(value: Any, kind: type | tuple, where: str, what: str) -> Any:
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise FormatError(where, f"expected {what}")
    return value


def _vertex(value: Any, where: str) -> int | str:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise FormatError(where, "ids must be integers or strings")
    return value


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(where, "expected an integer")
    return value


def _wrap(where: str, fn, *args):
    try:
        return fn(*args)
    except FormatError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(where, str(exc)) from None


# --------------------------------------------------------------------------
# Complexes and maps
# --------------------------------------------------------------------------


def parse_complex(d: Any, where: str = "", dim_cap: int | None = None) -> SimplicialComplex:
    _expect(d, dict, where or "complex", "an object with 'vertices' and 'simplices'")
    verts = _expect(d.get("vertices"), list, f"{where}.vertices".lstrip("."), "a list of vertex ids")
    verts = [_vertex(v, f"{where}.vertices[{i}]".lstrip(".")) for i, v in enumerate(verts)]
    simps = _expect(d.get("simplices", []), list, f"{where}.simplices".lstrip("."), "a list of simplices")
    out = []
    for i, s in enumerate(simps):
        w = f"{where}.simplices[{i}]".lstrip(".")
        _expect(s, list, w, "a list of vertex ids")
        out.append([_vertex(v, w) for v in s])
    return _wrap(where or "complex", SimplicialComplex, verts, out, dim_cap)


def complex_to_dict(K: SimplicialComplex) -> dict:
    return K.to_dict()


def parse_vertex_map(pairs: Any, source: SimplicialComplex, target: SimplicialComplex,
                     where: str) -> SimplicialMap:
    _expect(pairs, list, where, "a list of [source, target] pairs")
    vmap = {}
    for i, p in enumerate(pairs):
        w = f"{where}[{i}]"
        if not isinstance(p, list) or len(p) != 2:
            raise FormatError(w, "expected a [source, target] pair")
        vmap[_vertex(p[0], w)] = _vertex(p[1], w)
    return _wrap(where, SimplicialMap, source, target, vmap)


# --------------------------------------------------------------------------
# Covers
# --------------------------------------------------------------------------


def parse_cover(d: Any, where: str = "") -> Cover:
    _expect(d, dict, where or "cover", "an object with 'points' and 'sets'")
    pts = _expect(d.get("points"), list, f"{where}.points".lstrip("."), "a list of point ids")
    pts = [_vertex(p, f"{where}.points[{i}]".lstrip(".")) for i, p in enumerate(pts)]
    metric = d.get("metric")
    if metric is not None:
        _expect(metric, list, f"{where}.metric".lstrip("."), "a square table of numbers")
    carrier = _wrap(f"{where}.metric".lstrip(".") if metric is not None else where or "cover",
                    Carrier, tuple(pts), metric)
    sets = _expect(d.get("sets"), list, f"{where}.sets".lstrip("."), "a list of point sets")
    out = []
    for i, s in enumerate(sets):
        w = f"{where}.sets[{i}]".lstrip(".")
        _expect(s, list, w, "a list of point ids")
        out.append(frozenset(_vertex(p, w) for p in s))
    return _wrap(where or "cover", Cover, carrier, tuple(out))


def cover_to_dict(c: Cover) -> dict:
    d: dict = {
        "points": list(c.carrier.points),
        "sets": [sorted(s, key=c.carrier.points.index) for s in c.sets],
    }
    if c.carrier.metric is not None:
        d["metric"] = [list(r) for r in c.carrier.metric]
    return d


def parse_cover_tower(d: Any) -> CoverTower:
    _expect(d, dict, "tower", "an object with 'covers'")
    covers = _expect(d.get("covers"), list, "covers", "a list of covers")
    parsed = [parse_cover(c, f"covers[{i}]") for i, c in enumerate(covers)]
    return _wrap("covers", CoverTower, tuple(parsed), d.get("witnesses"))


# --------------------------------------------------------------------------
# Group towers
# --------------------------------------------------------------------------


def _matrix(value: Any, rows: int, cols: int, where: str) -> IntMatrix:
    _expect(value, list, where, f"a {rows}x{cols} integer matrix (list of rows)")
    if len(value) != rows:
        raise FormatError(where, f"expected {rows} rows, got {len(value)}")
    out = []
    for i, r in enumerate(value):
        _expect(r, list, f"{where}[{i}]", "a row of integers")
        if len(r) != cols:
            raise FormatError(f"{where}[{i}]", f"expected {cols} entries, got {len(r)}")
        out.append([_int(x, f"{where}[{i}]") for x in r])
    return IntMatrix.from_rows(out, cols=cols)


def parse_group(d: Any, where: str) -> FGAbelianGroup:
    _expect(d, dict, where, "an object with 'rank' and 'torsion'")
    rank = _int(d.get("rank", 0), f"{where}.rank")
    tors = _expect(d.get("torsion", []), list, f"{where}.torsion", "a list of integers")
    tors = [_int(t, f"{where}.torsion") for t in tors]
    if rank < 0:
        raise FormatError(f"{where}.rank", "rank must be non-negative")
    return _wrap(where, FGAbelianGroup, rank, tuple(tors))


def parse_group_tower(d: Any) -> GroupTower:
    """Stages are normal-form groups; column j of a matrix is the image of generator j."""
    _expect(d, dict, "tower", "an object with 'stages' and 'bonds'")
    raw = _expect(d.get("stages"), list, "stages", "a list of groups")
    stages = [parse_group(s, f"stages[{i}]") for i, s in enumerate(raw)]
    bonds = _expect(d.get("bonds", []), list, "bonds", "a list of matrices")
    if len(bonds) != max(len(stages) - 1, 0):
        raise FormatError("bonds", f"{len(stages)} stages need {len(stages) - 1} bonds")
    homs = []
    for i, b in enumerate(bonds):
        src, tgt = stages[i + 1], stages[i]
        m = _matrix(b, tgt.ngens, src.ngens, f"bonds[{i}]")
        homs.append(_wrap(f"bonds[{i}]", Homomorphism, src, tgt, m))
    tail = None
    if d.get("tail") is not None:
        t = _expect(d["tail"], dict, "tail", "null or an object with 'matrix'")
        G = stages[-1]
        tail = _wrap("tail", Homomorphism, G, G, _matrix(t.get("matrix"), G.ngens, G.ngens, "tail.matrix"))
    truncated = _expect(d.get("truncated", False), bool, "truncated", "a boolean")
    return _wrap("tower", GroupTower, tuple(stages), tuple(homs), tail, truncated)


def group_tower_to_dict(t: GroupTower) -> dict:
    return {
        "stages": [g.to_dict() for g in t.stages],
        "bonds": [b.matrix.tolist() for b in t.bonds],
        "tail": None if t.tail is None else {"matrix": t.tail.matrix.tolist()},
        "truncated": t.truncated,
    }


# --------------------------------------------------------------------------
# Nerve towers
# --------------------------------------------------------------------------


def parse_nerve_tower(d: Any, dim_cap: int | None = None) -> NerveTower:
    """Either {"complexes", "bonds", "tail"} or a cover tower {"covers", ...}."""
    _expect(d, dict, "tower", "an object")
    if "covers" in d:
        return NerveTower.from_cover_tower(parse_cover_tower(d), dim_cap)
    raw = _expect(d.get("complexes"), list, "complexes", "a list of complexes")
    cs = [parse_complex(c, f"complexes[{i}]", dim_cap) for i, c in enumerate(raw)]
    bonds = _expect(d.get("bonds", []), list, "bonds", "a list of vertex maps")
    if len(bonds) != max(len(cs) - 1, 0):
        raise FormatError("bonds", f"{len(cs)} complexes need {len(cs) - 1} bonds")
    maps = [parse_vertex_map(b, cs[i + 1], cs[i], f"bonds[{i}]") for i, b in enumerate(bonds)]
    tail = None
    if d.get("tail") is not None:
        t = _expect(d["tail"], dict, "tail", "null or an object with 'complex', 'bond', 'equivalence'")
        K = parse_complex(t.get("complex"), "tail.complex", dim_cap)
        tail = _wrap("tail", PeriodicNerveTail,
                     parse_vertex_map(t.get("bond"), K, cs[-1], "tail.bond"),
                     parse_vertex_map(t.get("equivalence"), K, cs[-1], "tail.equivalence"))
    return _wrap("tower", NerveTower, tuple(cs), tuple(maps), tail)


def nerve_tower_to_dict(t: NerveTower) -> dict:
    return {
        "complexes": [K.to_dict() for K in t.complexes],
        "bonds": [f.to_pairs() for f in t.bonds],
        "tail": None if t.tail is None else {
            "complex": t.tail.complex.to_dict(),
            "bond": t.tail.bond.to_pairs(),
            "equivalence": t.tail.equivalence.to_pairs(),
        },
    }
