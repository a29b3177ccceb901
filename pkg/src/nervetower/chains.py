"""Sparse free chain complexes and homology with explicit representatives.

A complex is reduced by repeatedly cancelling a cell pair (sigma, tau) whose
incidence is a unit (+-1).  This is a chain homotopy equivalence over Z, so
it commutes with reducing coefficients mod m.  The projection and inclusion
chain maps are logged, which lets us move cycles between the original and
the reduced complex; homology of the (small) reduced complex is then read
off with dense Smith forms.
"""

from __future__ import annotations

from typing import Mapping

from .exact_algebra import FGAbelianGroup, IntMatrix, Subquotient, kernel_basis

Chain = dict[int, int]


def _axpy(target: Chain, a: int, x: Mapping[int, int]) -> None:
    """target += a * x, dropping zeros."""
    for k, v in x.items():
        w = target.get(k, 0) + a * v
        if w:
            target[k] = w
        else:
            target.pop(k, None)


class ChainComplex:
    """Free chain complex given by sparse boundary columns.

    ``boundary[d][j]`` maps face index (in degree d-1) to coefficient for
    cell j of degree d.  Degrees may be any integers; the boundary lowers
    degree by one.
    """

    def __init__(self, sizes: Mapping[int, int], boundary: Mapping[int, list[Chain]]):
        self.sizes = dict(sizes)
        self.boundary = {d: [dict(c) for c in cols] for d, cols in boundary.items()}
        for d, cols in self.boundary.items():
            if len(cols) != self.sizes.get(d, 0):
                raise ValueError(f"degree {d}: {len(cols)} columns for {self.sizes.get(d, 0)} cells")
        self._reduced: _Reduction | None = None

    def size(self, d: int) -> int:
        return self.sizes.get(d, 0)

    def boundary_matrix(self, d: int) -> IntMatrix:
        rows, cols = self.size(d - 1), self.size(d)
        out = [[0] * cols for _ in range(rows)]
        for j, col in enumerate(self.boundary.get(d, ())):
            for i, v in col.items():
                out[i][j] = v
        return IntMatrix.from_rows(out, cols=cols)

    def reduction(self) -> _Reduction:
        if self._reduced is None:
            self._reduced = _Reduction(self)
        return self._reduced

    def homology(self, d: int, modulus: int = 0) -> HomologyData:
        return self.reduction().homology(d, modulus)


class _Reduction:
    def __init__(self, cc: ChainComplex):
        degrees = sorted(d for d, n in cc.sizes.items() if n)
        self.cols: dict[int, dict[int, Chain]] = {}
        self.rows: dict[int, dict[int, set[int]]] = {}
        for d in degrees:
            self.cols[d] = {j: dict(c) for j, c in enumerate(cc.boundary.get(d, [{}] * cc.size(d)))}
            self.rows.setdefault(d, {j: set() for j in range(cc.size(d))})
        for d in degrees:
            below = self.rows.setdefault(d - 1, {})
            for j, col in self.cols[d].items():
                for i in col:
                    below.setdefault(i, set()).add(j)
        # log entries: (d, sigma, tau, eps, boundary of sigma, tau-row of degree d)
        self.log: list[tuple[int, int, int, int, Chain, Chain]] = []
        self._run()
        self._cache: dict[tuple[int, int], HomologyData] = {}

    def _run(self) -> None:
        progress = True
        while progress:
            progress = False
            for d in sorted(self.cols, reverse=True):
                cols = self.cols[d]
                if d - 1 not in self.cols:
                    continue
                cofaces = self.rows[d - 1]
                for sigma in sorted(cols):
                    col = cols.get(sigma)
                    if not col:
                        continue
                    best = None
                    for tau, v in col.items():
                        if v in (1, -1):
                            key = (len(cofaces[tau]), tau)
                            if best is None or key < best[0]:
                                best = (key, tau)
                    if best is not None:
                        self._cancel(d, sigma, best[1])
                        progress = True

    def _cancel(self, d: int, sigma: int, tau: int) -> None:
        cols, cofaces = self.cols[d], self.rows[d - 1]
        col_sigma = dict(cols[sigma])
        eps = col_sigma[tau]
        row_tau = {rho: cols[rho][tau] for rho in cofaces[tau] if rho != sigma}
        self.log.append((d, sigma, tau, eps, col_sigma, row_tau))
        for rho, a in row_tau.items():
            col = cols[rho]
            for f, v in col_sigma.items():
                w = col.get(f, 0) - a * eps * v
                if w:
                    if f not in col:
                        cofaces[f].add(rho)
                    col[f] = w
                elif f in col:
                    del col[f]
                    cofaces[f].discard(rho)
        for f in col_sigma:
            cofaces[f].discard(sigma)
        del cols[sigma]
        for rho in self.rows[d].pop(sigma, ()):
            self.cols[d + 1][rho].pop(sigma, None)
        if d - 1 in self.cols:
            for g in self.cols[d - 1].pop(tau):
                self.rows[d - 2][g].discard(tau)
        del cofaces[tau]

    def alive(self, d: int) -> list[int]:
        return sorted(self.cols.get(d, {}))

    def project(self, d: int, chain: Mapping[int, int]) -> Chain:
        """Image of a degree-d chain in the reduced complex."""
        z = {k: v for k, v in chain.items() if v}
        for (e, sigma, tau, eps, col_sigma, _row) in self.log:
            if e - 1 == d:
                a = z.get(tau)
                if a:
                    _axpy(z, -a * eps, col_sigma)
            elif e == d:
                z.pop(sigma, None)
        return z

    def include(self, d: int, chain: Mapping[int, int]) -> Chain:
        """Image of a reduced degree-d chain back in the original complex."""
        x = {k: v for k, v in chain.items() if v}
        for (e, sigma, tau, eps, _col, row_tau) in reversed(self.log):
            if e == d:
                a = sum(x.get(rho, 0) * c for rho, c in row_tau.items())
                if a:
                    x[sigma] = x.get(sigma, 0) - a * eps
        return x

    def _dense_boundary(self, d: int) -> IntMatrix:
        src, tgt = self.alive(d), self.alive(d - 1)
        pos = {c: i for i, c in enumerate(tgt)}
        out = [[0] * len(src) for _ in tgt]
        for j, c in enumerate(src):
            for f, v in self.cols[d][c].items():
                out[pos[f]][j] = v
        return IntMatrix.from_rows(out, cols=len(src))

    def homology(self, d: int, modulus: int = 0) -> HomologyData:
        key = (d, modulus)
        if key not in self._cache:
            self._cache[key] = HomologyData(self, d, modulus)
        return self._cache[key]


class HomologyData:
    """Homology of one degree with normal-form coordinates and representatives."""

    def __init__(self, red: _Reduction, d: int, modulus: int = 0):
        self._red = red
        self.degree = d
        self.modulus = modulus
        self.cells = red.alive(d)
        self._pos = {c: i for i, c in enumerate(self.cells)}
        n = len(self.cells)
        out_b = red._dense_boundary(d)
        in_b = red._dense_boundary(d + 1)
        gens = kernel_basis(out_b, modulus) if out_b.rows else IntMatrix.identity(n)
        rels = in_b
        if modulus:
            rels = rels.hstack(IntMatrix.diagonal([modulus] * n))
        self._sub = Subquotient(gens, rels)
        self.group: FGAbelianGroup = self._sub.group

    def coordinates(self, cycle: Mapping[int, int]) -> tuple[int, ...]:
        """Normal-form coordinates of the class of a cycle of the original complex."""
        z = self._red.project(self.degree, cycle)
        v = [0] * len(self.cells)
        for k, a in z.items():
            v[self._pos[k]] = a
        if self.modulus:
            v = [x % self.modulus for x in v]
        return self._sub.coordinates(v)

    def representative(self, k: int) -> Chain:
        """A cycle of the original complex representing standard generator k."""
        v = self._sub.lift(k)
        x = {self.cells[i]: a for i, a in enumerate(v) if a}
        return self._red.include(self.degree, x)
