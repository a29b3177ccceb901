from __future__ import annotations

import random

import pytest

from nervetower.exact_algebra import FGAbelianGroup, IntMatrix
from nervetower.simplicial import (
    DimensionCapError,
    InvalidSimplicialMap,
    SimplicialComplex,
    SimplicialMap,
    betti_numbers,
    boundary_matrix,
    cohomology,
    homology,
    induced_cohom,
    induced_hom,
    mapping_cone,
)

from helpers import cycle, dense_homology, klein_bottle, les_exact, random_complex, random_map, rp2, sphere, torus7

Z = FGAbelianGroup(1)
Z2 = FGAbelianGroup(0, (2,))
ZERO = FGAbelianGroup()


def test_closure_and_counts():
    K = SimplicialComplex("abc", ["abc"])
    assert K.counts() == [3, 3, 1]
    assert K.maximal_simplices() == [("a", "b", "c")]
    assert SimplicialComplex.from_dict(K.to_dict()) == K


def test_unknown_vertex_rejected():
    with pytest.raises(ValueError):
        SimplicialComplex([0, 1], [[0, 2]])


@pytest.mark.parametrize("seed", range(20))
def test_boundary_squares_to_zero(seed):
    K = random_complex(random.Random(seed), 8, 4, 10)
    for n in range(1, K.dimension):
        assert (boundary_matrix(K, n) @ boundary_matrix(K, n + 1)).is_zero()


@pytest.mark.parametrize("seed", range(30))
def test_euler_characteristic_and_dense_oracle(seed):
    K = random_complex(random.Random(seed), 8, 3, 10)
    hs = [homology(K, n) for n in range(K.dimension + 1)]
    assert sum((-1) ** n * h.free_rank for n, h in enumerate(hs)) == K.euler_characteristic()
    for n, h in enumerate(hs):
        assert h == dense_homology(K, n)
        assert homology(K, n, 2) == dense_homology(K, n, 2)
        assert homology(K, n, 3) == dense_homology(K, n, 3)


def test_classical_table():
    assert betti_numbers(rp2()) == [Z, Z2, ZERO]
    assert betti_numbers(torus7()) == [Z, FGAbelianGroup(2), Z]
    assert betti_numbers(klein_bottle()) == [Z, FGAbelianGroup(1, (2,)), ZERO]
    assert homology(klein_bottle(), 2, 2) == Z2
    assert [cohomology(rp2(), n) for n in range(3)] == [Z, ZERO, Z2]
    assert [homology(rp2(), n, 2) for n in range(3)] == [Z2] * 3


def test_reduced_and_spheres():
    for n in range(4):
        S = sphere(n)
        for k in range(n + 1):
            expect = Z if k == n else ZERO
            assert homology(S, k, reduced=True) == expect
            assert cohomology(S, k, reduced=True) == expect
    pt = SimplicialComplex([0])
    assert homology(pt, 0) == Z and homology(pt, 0, reduced=True) == ZERO


@pytest.mark.parametrize("seed", range(15))
def test_universal_coefficients(seed):
    K = random_complex(random.Random(100 + seed), 7, 3, 9)
    for n in range(K.dimension + 1):
        h, c = homology(K, n), cohomology(K, n)
        assert c.free_rank == h.free_rank
        below = homology(K, n - 1).torsion if n else ()
        assert c.torsion == below


def test_modulus_validation():
    with pytest.raises(ValueError):
        homology(cycle(4), 1, 1)
    with pytest.raises(ValueError):
        homology(cycle(4), 1, -3)


def test_dimension_cap():
    K = SimplicialComplex(range(5), [range(5)], dim_cap=2)
    assert K.truncated and K.dimension == 2
    assert homology(K, 1) == ZERO
    with pytest.raises(DimensionCapError):
        homology(K, 2)


def test_invalid_map_rejected():
    with pytest.raises(InvalidSimplicialMap):
        SimplicialMap(cycle(4), SimplicialComplex(range(4), [(0, 1), (2, 3)]), {i: i for i in range(4)})


def test_degree_maps_on_cycles():
    f = SimplicialMap(cycle(8), cycle(4), {i: i % 4 for i in range(8)})
    assert induced_hom(f, 1).matrix == IntMatrix.from_rows([[2]])
    assert induced_cohom(f, 1).matrix == IntMatrix.from_rows([[2]])
    g = SimplicialMap(cycle(8), cycle(4), {i: i // 2 for i in range(8)})
    assert abs(induced_hom(g, 1).matrix[0, 0]) == 1
    # a reflection has degree -1
    r = SimplicialMap(cycle(4), cycle(4), {i: (-i) % 4 for i in range(4)})
    assert induced_hom(r, 1).matrix[0, 0] == -induced_hom(SimplicialMap.identity(cycle(4)), 1).matrix[0, 0]


@pytest.mark.parametrize("seed", range(25))
def test_functoriality(seed):
    rng = random.Random(seed)
    f = random_map(rng)
    L = f.target
    g = SimplicialMap(L, SimplicialComplex(["x"]), {v: "x" for v in L.vertices}) if seed % 2 else SimplicialMap.identity(L)
    for n in range(f.source.dimension + 1):
        for m in (0, 2):
            assert induced_hom(g.compose(f), n, m) == induced_hom(g, n, m) @ induced_hom(f, n, m)
            assert induced_cohom(g.compose(f), n, m) == induced_cohom(f, n, m) @ induced_cohom(g, n, m)
    ident = induced_hom(SimplicialMap.identity(L), 1)
    assert ident.matrix == IntMatrix.identity(ident.source.ngens)


def test_cone_examples():
    tri = cycle(3)
    pt = SimplicialComplex([0])
    C = mapping_cone(SimplicialMap.constant(tri, pt, 0)).complex
    assert [homology(C, n, reduced=True) for n in range(3)] == [ZERO, ZERO, Z]
    edge = SimplicialComplex([0, 1], [(0, 1)])
    C = mapping_cone(SimplicialMap(pt, edge, {0: 0})).complex
    assert all(homology(C, n, reduced=True).is_trivial for n in range(C.dimension + 1))


@pytest.mark.parametrize("seed", range(40))
@pytest.mark.parametrize("m", [0, 2])
def test_cofiber_long_exact_sequence(seed, m):
    assert les_exact(random_map(random.Random(seed)), m) == []


def test_chain_representatives_are_cycles():
    K = torus7()
    data = K.homology_data(1)
    d1 = boundary_matrix(K, 1)
    for k in range(data.group.ngens):
        z = data.representative(k)
        v = [z.get(i, 0) for i in range(K.count(1))]
        assert not any(d1.apply(v))
        assert data.coordinates(z) == tuple(int(i == k) for i in range(data.group.ngens))
