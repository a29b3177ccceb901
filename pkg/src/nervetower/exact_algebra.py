"""Exact integer linear algebra and finitely generated abelian groups.

Everything here works with Python integers, so no intermediate can
overflow.  Groups are kept in invariant-factor normal form

    G = Z/t_1 + ... + Z/t_k + Z^r,   t_i >= 2,  t_i | t_{i+1},

and always carry the standard generator basis: the k cyclic torsion
generators first, followed by the r free generators.  Homomorphism
matrices are written in these bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Iterable, Sequence


class MalformedHomomorphism(ValueError):
    """A matrix that does not respect the relations of its source group."""


# --------------------------------------------------------------------------
# Matrices
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major.  Zero-size shapes are allowed."""

    rows: int
    cols: int
    entries: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        entries = tuple(int(x) for x in self.entries)
        if not entries and self.rows * self.cols:
            entries = (0,) * (self.rows * self.cols)
        if len(entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        columns = [list(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise ValueError("column length does not match row count")
        return cls.from_rows(
            [[c[i] for c in columns] for i in range(rows)], cols=len(columns)
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            out[i][i] = d
        return cls.from_rows(out, cols=cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def tolist(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[int]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix.from_rows(
            [self.column(j) for j in range(self.cols)], cols=self.rows
        )

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return IntMatrix.from_rows(_matmul(self.tolist(), other.tolist(), other.cols), cols=other.cols)

    def apply(self, vector: Sequence[int]) -> list[int]:
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        c = self.cols
        e = self.entries
        return [sum(e[i * c + j] * vector[j] for j in range(c) if vector[j]) for i in range(self.rows)]

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        a, b = self.tolist(), other.tolist()
        return IntMatrix.from_rows([a[i] + b[i] for i in range(self.rows)], cols=self.cols + other.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


def _matmul(a: list[list[int]], b: list[list[int]], bcols: int) -> list[list[int]]:
    out = []
    for row in a:
        acc = [0] * bcols
        for k, x in enumerate(row):
            if x:
                brow = b[k]
                for j in range(bcols):
                    if brow[j]:
                        acc[j] += x * brow[j]
        out.append(acc)
    return out


def _as_matrix(a) -> IntMatrix:
    if isinstance(a, IntMatrix):
        return a
    return IntMatrix.from_rows(a)


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with U, V unimodular and D diagonal."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


class _Smith:
    """Working state of one Smith reduction (lists of lists, mutated in place)."""

    def __init__(self, a: list[list[int]], rows: int, cols: int):
        self.m, self.n = rows, cols
        self.A = [list(r) for r in a]
        self.U = [[int(i == j) for j in range(rows)] for i in range(rows)]
        self.Ui = [[int(i == j) for j in range(rows)] for i in range(rows)]
        self.V = [[int(i == j) for j in range(cols)] for i in range(cols)]
        self.Vi = [[int(i == j) for j in range(cols)] for i in range(cols)]
        self.rank = 0
        self._run()

    # row i <- row i + q * row t   (A, U);  inverse tracks column ops on Ui
    def _row_add(self, i: int, t: int, q: int) -> None:
        A, U, Ui = self.A, self.U, self.Ui
        ra, rt = A[i], A[t]
        for j in range(self.n):
            if rt[j]:
                ra[j] += q * rt[j]
        ua, ut = U[i], U[t]
        for j in range(self.m):
            if ut[j]:
                ua[j] += q * ut[j]
        for r in Ui:
            if r[i]:
                r[t] -= q * r[i]

    # column j <- column j + q * column t   (A, V);  inverse tracks row ops on Vi
    def _col_add(self, j: int, t: int, q: int) -> None:
        for r in self.A:
            if r[t]:
                r[j] += q * r[t]
        for r in self.V:
            if r[t]:
                r[j] += q * r[t]
        vj, vt = self.Vi[j], self.Vi[t]
        for k in range(self.n):
            if vj[k]:
                vt[k] -= q * vj[k]

    def _row_swap(self, i: int, t: int) -> None:
        if i == t:
            return
        for M in (self.A, self.U):
            M[i], M[t] = M[t], M[i]
        for r in self.Ui:
            r[i], r[t] = r[t], r[i]

    def _col_swap(self, j: int, t: int) -> None:
        if j == t:
            return
        for M in (self.A, self.V):
            for r in M:
                r[j], r[t] = r[t], r[j]
        self.Vi[j], self.Vi[t] = self.Vi[t], self.Vi[j]

    def _row_negate(self, t: int) -> None:
        self.A[t] = [-x for x in self.A[t]]
        self.U[t] = [-x for x in self.U[t]]
        for r in self.Ui:
            r[t] = -r[t]

    def _pivot(self, t: int) -> tuple[int, int] | None:
        best, where = 0, None
        for i in range(t, self.m):
            row = self.A[i]
            for j in range(t, self.n):
                x = row[j]
                if x and (where is None or abs(x) < best):
                    best, where = abs(x), (i, j)
                    if best == 1:
                        return where
        return where

    def _run(self) -> None:
        A = self.A
        t = 0
        while t < min(self.m, self.n):
            while True:
                where = self._pivot(t)
                if where is None:
                    self.rank = t
                    return
                self._row_swap(where[0], t)
                self._col_swap(where[1], t)
                p = A[t][t]
                dirty = False
                for i in range(t + 1, self.m):
                    if A[i][t]:
                        self._row_add(i, t, -(A[i][t] // p))
                        dirty = dirty or A[i][t] != 0
                for j in range(t + 1, self.n):
                    if A[t][j]:
                        self._col_add(j, t, -(A[t][j] // p))
                        dirty = dirty or A[t][j] != 0
                if dirty:
                    continue
                bad = next(
                    (i for i in range(t + 1, self.m)
                     if any(A[i][j] % p for j in range(t + 1, self.n))),
                    None,
                )
                if bad is None:
                    break
                self._row_add(t, bad, 1)
            if A[t][t] < 0:
                self._row_negate(t)
            t += 1
        self.rank = t

    @property
    def diagonal(self) -> list[int]:
        return [self.A[i][i] for i in range(min(self.m, self.n))]


def _smith(a: IntMatrix) -> _Smith:
    return _Smith(a.tolist(), a.rows, a.cols)


def smith_normal_form(A) -> SmithForm:
    """Smith normal form with unimodular transforms, ``U A V = D``.

    Pivots are the nonzero entries of least absolute value (lowest row,
    then lowest column, on ties), so U and V are reproducible.

    >>> smith_normal_form([[2, 4], [6, 8]]).diagonal
    [2, 4]
    """
    A = _as_matrix(A)
    s = _smith(A)
    return SmithForm(
        IntMatrix.from_rows(s.U, cols=A.rows),
        IntMatrix.from_rows(s.A, cols=A.cols),
        IntMatrix.from_rows(s.V, cols=A.cols),
    )


# --------------------------------------------------------------------------
# Groups
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class FGAbelianGroup:
    """Finitely generated abelian group ``Z/t_1 + ... + Z/t_k + Z^free_rank``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        torsion = tuple(int(t) for t in self.torsion)
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {torsion} is not a divisibility chain")
        if any(t < 2 for t in torsion):
            raise ValueError("torsion coefficients must be >= 2")
        object.__setattr__(self, "torsion", torsion)

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> FGAbelianGroup:
        """Normal form of a direct sum of cyclic groups; order 0 means Z."""
        orders = [abs(int(o)) for o in orders]
        return cokernel(IntMatrix.diagonal(orders))

    @classmethod
    def trivial(cls) -> FGAbelianGroup:
        return cls()

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def orders(self) -> tuple[int, ...]:
        """Order of each standard generator, 0 for free generators."""
        return self.torsion + (0,) * self.free_rank

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        return reduce(lambda a, b: a * b, self.torsion, 1)

    def relation_matrix(self) -> IntMatrix:
        """Columns t_i e_i, one per torsion generator."""
        n = self.ngens
        return IntMatrix.from_columns(
            [[t if i == j else 0 for i in range(n)] for j, t in enumerate(self.torsion)], n
        )

    def reduce(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates: torsion entries reduced into [0, t)."""
        return tuple(x % o if o else x for x, o in zip(vector, self.orders))

    def elements(self) -> list[tuple[int, ...]]:
        """All elements of a finite group, as coordinate tuples."""
        if self.free_rank:
            raise ValueError("cannot enumerate an infinite group")
        out = [()]
        for t in self.torsion:
            out = [e + (k,) for e in out for k in range(t)]
        return out

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_dict(cls, data: dict) -> FGAbelianGroup:
        return cls(int(data.get("rank", 0)), tuple(data.get("torsion", ())))


Z = FGAbelianGroup(1)


def cokernel(A) -> FGAbelianGroup:
    """``Z^rows / im(A)`` in normal form."""
    A = _as_matrix(A)
    s = _smith(A)
    diag = s.diagonal[: s.rank]
    return FGAbelianGroup(A.rows - s.rank, tuple(d for d in diag if d > 1))


# --------------------------------------------------------------------------
# Lattices
# --------------------------------------------------------------------------


def kernel_basis(A, modulus: int = 0) -> IntMatrix:
    """Basis (as columns) of ``{x : A x = 0 mod modulus}``; modulus 0 is exact."""
    A = _as_matrix(A)
    s = _smith(A)
    diag = s.diagonal
    cols = []
    for i in range(A.cols):
        scale = 1
        if i < s.rank:
            if not modulus:
                continue
            scale = modulus // gcd(diag[i], modulus)
        cols.append([row[i] * scale for row in s.V])
    return IntMatrix.from_columns(cols, A.cols)


def solve_integer(A, b: Sequence[int]) -> list[int] | None:
    """Some integer x with ``A x = b``, or None when no integer solution exists."""
    A = _as_matrix(A)
    if len(b) != A.rows:
        raise ValueError("right-hand side length does not match row count")
    s = _smith(A)
    c = [sum(u * x for u, x in zip(row, b)) for row in s.U]
    y = [0] * A.cols
    for i, ci in enumerate(c):
        if i < s.rank:
            q, r = divmod(ci, s.A[i][i])
            if r:
                return None
            y[i] = q
        elif ci:
            return None
    return [sum(v * yy for v, yy in zip(row, y)) for row in s.V]


class Subquotient:
    """The group ``span(gens) / span(rels)`` for lattices in ``Z^dim``.

    ``span(rels)`` must lie inside ``span(gens)``.  The instance keeps the
    change of basis to the normal form so vectors can be sent to normal
    coordinates and normal generators lifted back to ``Z^dim``.
    """

    def __init__(self, gens: IntMatrix, rels: IntMatrix):
        if gens.rows != rels.rows:
            raise ValueError("generators and relations live in different lattices")
        self.dim = gens.rows
        s = _smith(gens)
        self._U = s.U
        self._d = s.diagonal[: s.rank]
        self._Uinv = s.Ui
        r = s.rank
        coords = []
        for col in rels.columns():
            c = self._coords(col)
            if c is None:
                raise ValueError("relations are not contained in the generated lattice")
            coords.append(c)
        C = IntMatrix.from_columns(coords, r)
        t = _smith(C)
        d2 = t.diagonal[: t.rank]
        keep = [i for i in range(r) if i >= t.rank or d2[i] != 1]
        self.group = FGAbelianGroup(r - t.rank, tuple(d2[i] for i in keep if i < t.rank))
        self._keep = keep
        self._U2 = t.U
        self._U2inv = t.Ui

    def _coords(self, v: Sequence[int]) -> list[int] | None:
        out = []
        for i, row in enumerate(self._U):
            x = sum(u * y for u, y in zip(row, v) if y)
            if i < len(self._d):
                q, rem = divmod(x, self._d[i])
                if rem:
                    return None
                out.append(q)
            elif x:
                return None
        return out

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        """Normal-form coordinates of a lattice vector from ``span(gens)``."""
        c = self._coords(v)
        if c is None:
            raise ValueError("vector is not in the generated lattice")
        y = [sum(u * x for u, x in zip(self._U2[i], c) if x) for i in self._keep]
        return self.group.reduce(y)

    def lift(self, k: int) -> list[int]:
        """A vector of ``Z^dim`` representing standard generator k."""
        j = self._keep[k]
        c = [row[j] for row in self._U2inv]
        out = [0] * self.dim
        for i, ci in enumerate(c):
            if ci:
                w = ci * self._d[i]
                for a in range(self.dim):
                    x = self._Uinv[a][i]
                    if x:
                        out[a] += w * x
        return out


# --------------------------------------------------------------------------
# Homomorphisms
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Homomorphism:
    """A map of normal-form groups; column j is the image of source generator j."""

    source: FGAbelianGroup
    target: FGAbelianGroup
    matrix: IntMatrix = field(default=None)

    def __post_init__(self):
        m = self.matrix
        if m is None:
            m = IntMatrix.zeros(self.target.ngens, self.source.ngens)
        m = _as_matrix(m)
        if m.shape != (self.target.ngens, self.source.ngens):
            raise MalformedHomomorphism(
                f"matrix shape {m.shape} does not fit {self.source} -> {self.target}"
            )
        cols = []
        for j, o in enumerate(self.source.orders):
            col = m.column(j)
            if o:
                for i, to in enumerate(self.target.orders):
                    if (o * col[i]) % to if to else o * col[i]:
                        raise MalformedHomomorphism(
                            f"generator {j} of order {o} is sent to an element of "
                            f"infinite or incompatible order"
                        )
            cols.append(self.target.reduce(col))
        object.__setattr__(self, "matrix", IntMatrix.from_columns(cols, self.target.ngens))

    @classmethod
    def identity(cls, group: FGAbelianGroup) -> Homomorphism:
        return cls(group, group, IntMatrix.identity(group.ngens))

    @classmethod
    def zero(cls, source: FGAbelianGroup, target: FGAbelianGroup) -> Homomorphism:
        return cls(source, target)

    @classmethod
    def scalar(cls, group: FGAbelianGroup, k: int) -> Homomorphism:
        return cls(group, group, IntMatrix.diagonal([k] * group.ngens))

    def __call__(self, vector: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce(self.matrix.apply(list(vector)))

    def compose(self, other: Homomorphism) -> Homomorphism:
        """``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("cannot compose: groups do not match")
        return Homomorphism(other.source, self.target, self.matrix @ other.matrix)

    def __matmul__(self, other: Homomorphism) -> Homomorphism:
        return self.compose(other)

    def _image_lattice(self) -> IntMatrix:
        return self.matrix.hstack(self.target.relation_matrix())

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_isomorphism(self) -> bool:
        return (
            self.source == self.target
            and hom_kernel(self).is_trivial
            and hom_cokernel(self).is_trivial
        )

    def inverse(self) -> Homomorphism:
        if not self.is_isomorphism():
            raise ValueError("homomorphism is not invertible")
        big = self._image_lattice()
        n = self.target.ngens
        cols = []
        for k in range(n):
            x = solve_integer(big, [int(i == k) for i in range(n)])
            cols.append(x[: self.source.ngens])
        return Homomorphism(self.target, self.source, IntMatrix.from_columns(cols, self.source.ngens))


def hom_cokernel(h: Homomorphism) -> FGAbelianGroup:
    return cokernel(h._image_lattice())


def hom_image(h: Homomorphism) -> FGAbelianGroup:
    return Subquotient(h._image_lattice(), h.target.relation_matrix()).group


def _kernel_lattice(h: Homomorphism) -> IntMatrix:
    a = h.source.ngens
    big = h._image_lattice()
    K = kernel_basis(big)
    return IntMatrix.from_columns([col[:a] for col in K.columns()], a)


def hom_kernel(h: Homomorphism) -> FGAbelianGroup:
    return Subquotient(_kernel_lattice(h), h.source.relation_matrix()).group


def subgroup_quotient(group: FGAbelianGroup, big: Sequence[Sequence[int]], small: Sequence[Sequence[int]]) -> FGAbelianGroup:
    """``<big> / <small>`` inside ``group``, generators given as coordinate vectors.

    ``<small>`` must be contained in ``<big>``.
    """
    n = group.ngens
    R = group.relation_matrix()
    gens = IntMatrix.from_columns(list(big), n).hstack(R)
    rels = IntMatrix.from_columns(list(small), n).hstack(R)
    return Subquotient(gens, rels).group


def image_generators(h: Homomorphism) -> list[list[int]]:
    return h.matrix.columns()
