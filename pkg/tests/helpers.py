"""Shared test fixtures and brute-force oracles.

The oracles deliberately avoid the library's reduction code: homology is
read from dense boundary matrices, group orders from element enumeration.
"""

from __future__ import annotations

import random
from itertools import combinations, product
from math import gcd

from nervetower.exact_algebra import FGAbelianGroup, Homomorphism, IntMatrix, smith_normal_form
from nervetower.simplicial import SimplicialComplex, SimplicialMap, boundary_matrix
from nervetower.tower import GroupTower


# --------------------------------------------------------------------------
# Classical complexes
# --------------------------------------------------------------------------


def rp2() -> SimplicialComplex:
    tris = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
            (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    return SimplicialComplex(range(1, 7), tris)


def torus7() -> SimplicialComplex:
    """The 7-vertex (Möbius) torus."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return SimplicialComplex(range(7), tris)


def _grid_surface(twist: bool, n: int = 3) -> SimplicialComplex:
    def vid(i: int, j: int) -> tuple[int, int]:
        if j == n:
            j, i = 0, ((n - i) % n if twist else i)
        return (i % n, j)

    tris = []
    for i, j in product(range(n), repeat=2):
        a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
        tris += [(a, b, c), (a, c, d)]
    return SimplicialComplex(sorted({v for t in tris for v in t}), tris)


def klein_bottle() -> SimplicialComplex:
    """3x3 grid on the square, sides glued with one reversal."""
    return _grid_surface(True)


def torus_grid() -> SimplicialComplex:
    return _grid_surface(False)


def sphere(n: int) -> SimplicialComplex:
    """Boundary of the (n+1)-simplex."""
    return SimplicialComplex(range(n + 2), combinations(range(n + 2), n + 1))


def cycle(n: int) -> SimplicialComplex:
    return SimplicialComplex(range(n), [(i, (i + 1) % n) for i in range(n)])


# --------------------------------------------------------------------------
# Random objects
# --------------------------------------------------------------------------


def random_complex(rng: random.Random, max_vertices: int = 8, max_dim: int = 3,
                   max_simplices: int = 8) -> SimplicialComplex:
    nv = rng.randint(1, max_vertices)
    simps = []
    for _ in range(rng.randint(0, max_simplices)):
        k = rng.randint(1, min(nv, max_dim + 1))
        simps.append(rng.sample(range(nv), k))
    return SimplicialComplex(range(nv), simps)


def random_map(rng: random.Random, max_vertices: int = 8) -> SimplicialMap:
    """A simplicial map K -> L with L = f(K) plus random extra simplices."""
    K = random_complex(rng, max_vertices)
    nt = rng.randint(1, max_vertices)
    vmap = {v: rng.randrange(nt) for v in K.vertices}
    simps = [[vmap[K.vertices[i]] for i in s] for d in range(K.dimension + 1) for s in K.simplices(d)]
    for _ in range(rng.randint(0, 4)):
        simps.append(rng.sample(range(nt), rng.randint(1, min(nt, 3))))
    L = SimplicialComplex(range(nt), simps)
    return SimplicialMap(K, L, vmap)


FINITE_GROUPS = [FGAbelianGroup(0, t) for t in
                 [(), (2,), (3,), (4,), (2, 2), (5,), (6,), (8,), (2, 4), (9,), (2, 2, 2),
                  (3, 3), (12,), (2, 6), (16,), (2, 8), (4, 4), (2, 2, 4), (2, 2, 2, 2), (32,), (2, 16)]]


def random_hom(rng: random.Random, G: FGAbelianGroup, H: FGAbelianGroup, bound: int = 4) -> Homomorphism:
    """Uniformly-ish random well-defined homomorphism G -> H."""
    cols = []
    for o in G.orders:
        col = []
        for t in H.orders:
            if t == 0:
                col.append(0 if o else rng.randint(-bound, bound))
            elif o == 0:
                col.append(rng.randrange(t))
            else:
                step = t // gcd(t, o)
                col.append(step * rng.randrange(t // step))
        cols.append(col)
    return Homomorphism(G, H, IntMatrix.from_columns(cols, H.ngens))


def random_group(rng: random.Random, max_rank: int = 2) -> FGAbelianGroup:
    t = rng.choice(FINITE_GROUPS[:12])
    return FGAbelianGroup(rng.randint(0, max_rank), t.torsion)


# --------------------------------------------------------------------------
# Oracles
# --------------------------------------------------------------------------


def minors_gcd(rows: list[list[int]], k: int) -> int:
    m, n = len(rows), len(rows[0]) if rows else 0
    g = 0
    for ri in combinations(range(m), k):
        for ci in combinations(range(n), k):
            g = gcd(g, _det([[rows[i][j] for j in ci] for i in ri]))
    return g


def _det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    return sum((-1) ** j * a[0][j] * _det([r[:j] + r[j + 1:] for r in a[1:]]) for j in range(n) if a[0][j])


def dense_homology(K: SimplicialComplex, n: int, m: int = 0) -> FGAbelianGroup:
    """H_n from the dense boundary matrices and Smith forms (Z or Z/p for prime p)."""
    out_b = boundary_matrix(K, n)
    in_b = boundary_matrix(K, n + 1)
    cells = K.count(n)
    if m:
        r_out = _rank_mod_p(out_b.tolist(), m) if n else 0
        r_in = _rank_mod_p(in_b.tolist(), m)
        return FGAbelianGroup(0, (m,) * (cells - r_out - r_in))
    r_out = smith_normal_form(out_b).rank if n else 0
    d = smith_normal_form(in_b).diagonal
    tors = tuple(x for x in d if x > 1)
    return FGAbelianGroup(cells - r_out - len([x for x in d if x]), tors)


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    a = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(a[0]) if a else 0
    while rank < len(a) and col < ncols:
        piv = next((i for i in range(rank, len(a)) if a[i][col]), None)
        if piv is None:
            col += 1
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], -1, p)
        a[rank] = [x * inv % p for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
        col += 1
    return rank


def apply(h: Homomorphism, x: tuple[int, ...]) -> tuple[int, ...]:
    return h(list(x))


def order_profile(elements: list[tuple[int, ...]], add, zero) -> dict[int, int]:
    """Number of elements of each order; determines a finite abelian group."""
    prof: dict[int, int] = {}
    for e in elements:
        k, acc = 1, e
        while acc != zero:
            acc = add(acc, e)
            k += 1
        prof[k] = prof.get(k, 0) + 1
    return prof


def group_profile(G: FGAbelianGroup) -> dict[int, int]:
    zero = (0,) * G.ngens
    return order_profile(G.elements(), lambda a, b: G.reduce([x + y for x, y in zip(a, b)]), zero)


def les_exact(f: SimplicialMap, m: int = 0) -> list[str]:
    """Violations of exactness of the reduced cofiber sequence of f.

    Checked without the connecting map: i_* f_* = 0, ker i_* = im f_* at
    H_n(target), and coker(i_*: H_n(L) -> H_n(C)) = ker(f_*: H_{n-1}(K) -> H_{n-1}(L)),
    which is what exactness at H_n(C) and H_{n-1}(K) leaves for the
    connecting map to realize.
    """
    from nervetower.exact_algebra import _kernel_lattice, hom_cokernel, hom_kernel, subgroup_quotient
    from nervetower.simplicial import induced_hom, mapping_cone

    cone = mapping_cone(f)
    i = cone.target_inclusion
    top = cone.complex.dimension
    problems = []
    prev_f = None
    for n in range(top + 1):
        fs = induced_hom(f, n, m, reduced=True)
        is_ = induced_hom(i, n, m, reduced=True)
        if not (is_ @ fs).is_zero():
            problems.append(f"H_{n}: i_* f_* != 0")
        L = fs.target
        ker = _kernel_lattice(is_).columns()
        im = fs.matrix.columns()
        if not subgroup_quotient(L, im + ker, im).is_trivial:
            problems.append(f"H_{n}(target): ker i_* is not inside im f_*")
        expected = hom_kernel(prev_f) if prev_f is not None else FGAbelianGroup()
        if hom_cokernel(is_) != expected:
            problems.append(f"H_{n}(cone): coker i_* = {hom_cokernel(is_)} but ker f_* = {expected}")
        prev_f = fs
    return problems


# --------------------------------------------------------------------------
# Towers
# --------------------------------------------------------------------------


def random_finite_tower(rng: random.Random, with_tail: bool) -> GroupTower:
    depth = rng.randint(0, 6)
    stages = [rng.choice(FINITE_GROUPS) for _ in range(depth + 1)]
    bonds = [random_hom(rng, stages[i + 1], stages[i]) for i in range(depth)]
    tail = random_hom(rng, stages[-1], stages[-1]) if with_tail else None
    return GroupTower(tuple(stages), tuple(bonds), tail)


def enumerate_threads(t: GroupTower) -> list[tuple]:
    """All compatible tuples (x_0, ..., x_D) whose top entry extends forever."""
    G = t.stages[-1]
    top = set(G.elements())
    if t.tail is not None:
        while True:
            nxt = {t.tail(list(x)) for x in top}
            if nxt == top:
                break
            top = nxt
    threads = []
    for x in sorted(top):
        tup = [x]
        for b in reversed(t.bonds):
            tup.append(b(list(tup[-1])))
        threads.append(tuple(reversed(tup)))
    return threads


def random_tower(rng: random.Random) -> GroupTower:
    depth = rng.randint(1, 4)
    stages = [random_group(rng) for _ in range(depth + 1)]
    bonds = [random_hom(rng, stages[i + 1], stages[i], 3) for i in range(depth)]
    return GroupTower(tuple(stages), tuple(bonds), random_hom(rng, stages[-1], stages[-1], 3))


def unrolled(t: GroupTower, extra: int) -> GroupTower:
    stages = list(t.stages) + [t.stages[-1]] * extra
    bonds = list(t.bonds) + [t.tail] * extra
    return GroupTower(tuple(stages), tuple(bonds), None, truncated=True)
