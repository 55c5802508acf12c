"""Exact integer-lattice engine.

Smith and Hermite normal forms, cokernel torsion invariants, sublattice
indices, and membership tests in divisible-group images.  Everything here is
exact: Python integers (arbitrary precision) and fractions.Fraction for
values modulo one.  No floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def mod1(x: Fraction | int) -> Fraction:
    """Representative of x in [0, 1), i.e. x modulo the integers."""
    return Fraction(x) % 1


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major storage, arbitrary precision entries."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows*cols")

    @staticmethod
    def from_rows(rows_data) -> "IntMatrix":
        rows = list(rows_data)
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat: list[int] = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in r)
        return IntMatrix(nrows, ncols, tuple(flat))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        a, b = self.to_rows(), other.to_rows()
        flat = []
        for i in range(self.rows):
            ra = a[i]
            for j in range(other.cols):
                flat.append(sum(ra[k] * b[k][j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(flat))

    def apply(self, vec):
        """Matrix times column vector; entries may be ints or Fractions."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum(self.at(i, j) * vec[j] for j in range(self.cols)) for i in range(self.rows)
        )

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            self.at(i, j) == (1 if i == j else 0)
            for i in range(self.rows)
            for j in range(self.cols)
        )


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ source @ V = D with U, V unimodular and D diagonal, d_i | d_{i+1}."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d != 0)


@dataclass(frozen=True)
class FiniteAbelianStructure:
    """Invariant factors (> 1, divisibility chain) plus free rank."""

    invariant_factors: tuple[int, ...]
    free_rank: int

    def __post_init__(self):
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisibility chain")
        if any(f <= 1 for f in self.invariant_factors):
            raise ValueError("invariant factors must exceed 1")

    @property
    def torsion_order(self) -> int:
        n = 1
        for f in self.invariant_factors:
            n *= f
        return n

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0


def _smallest_pivot(a: list[list[int]], k: int, nrows: int, ncols: int):
    """Position of the smallest-absolute nonzero entry in the trailing block.

    Ties are broken scanning rows before columns, which pins down U and V.
    """
    best = None
    for i in range(k, nrows):
        for j in range(k, ncols):
            v = a[i][j]
            if v != 0 and (best is None or abs(v) < abs(a[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_normal_form(M: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms, U @ M @ V = D."""
    nrows, ncols = M.rows, M.cols
    a = M.to_rows()
    u = IntMatrix.identity(nrows).to_rows()
    v = IntMatrix.identity(ncols).to_rows()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def addmul_row(dst, src, q):
        # row dst += q * row src
        ad, asrc = a[dst], a[src]
        for t in range(ncols):
            ad[t] += q * asrc[t]
        ud, usrc = u[dst], u[src]
        for t in range(nrows):
            ud[t] += q * usrc[t]

    def addmul_col(dst, src, q):
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    k = 0
    limit = min(nrows, ncols)
    while k < limit:
        pos = _smallest_pivot(a, k, nrows, ncols)
        if pos is None:
            break
        while True:
            i, j = pos
            if i != k:
                swap_rows(k, i)
            if j != k:
                swap_cols(k, j)
            if a[k][k] < 0:
                negate_row(k)
            pivot = a[k][k]
            dirty = False
            for i in range(k + 1, nrows):
                if a[i][k] != 0:
                    addmul_row(i, k, -(a[i][k] // pivot))
                    if a[i][k] != 0:
                        dirty = True
            for j in range(k + 1, ncols):
                if a[k][j] != 0:
                    addmul_col(j, k, -(a[k][j] // pivot))
                    if a[k][j] != 0:
                        dirty = True
            if dirty:
                pos = _smallest_pivot(a, k, nrows, ncols)
                continue
            # column/row k are clear; enforce pivot | trailing block
            culprit = None
            for i in range(k + 1, nrows):
                for j in range(k + 1, ncols):
                    if a[i][j] % pivot != 0:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            addmul_row(k, culprit, 1)
            pos = _smallest_pivot(a, k, nrows, ncols)
        k += 1

    D = IntMatrix.from_rows(a) if nrows and ncols else IntMatrix(nrows, ncols, ())
    U = IntMatrix.from_rows(u) if nrows else IntMatrix(0, 0, ())
    V = IntMatrix.from_rows(v) if ncols else IntMatrix(0, 0, ())
    factors = tuple(a[i][i] for i in range(limit)) if limit else ()
    return SmithDecomposition(D=D, U=U, V=V, invariant_factors=factors)


def hermite_normal_form(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    Returns the nonzero echelon rows: positive pivots, entries above each
    pivot reduced into [0, pivot).  Canonical for the row lattice.
    """
    h = [list(r) for r in rows]
    nrows = len(h)
    r_idx = 0
    for col in range(ncols):
        while True:
            piv = None
            for i in range(r_idx, nrows):
                if h[i][col] != 0 and (piv is None or abs(h[i][col]) < abs(h[piv][col])):
                    piv = i
            if piv is None:
                break
            h[r_idx], h[piv] = h[piv], h[r_idx]
            done = True
            for i in range(r_idx + 1, nrows):
                if h[i][col] != 0:
                    q = h[i][col] // h[r_idx][col]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r_idx])]
                    if h[i][col] != 0:
                        done = False
            if done:
                break
        if piv is None:
            continue
        if h[r_idx][col] < 0:
            h[r_idx] = [-x for x in h[r_idx]]
        p = h[r_idx][col]
        for i in range(r_idx):
            q = h[i][col] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r_idx])]
        r_idx += 1
        if r_idx == nrows:
            break
    return [r for r in h[:r_idx]]


def reduce_mod_row_lattice(vec, hnf_rows) -> tuple[int, ...]:
    """Canonical representative of vec modulo a full-rank HNF row lattice."""
    v = list(vec)
    n = len(v)
    if len(hnf_rows) != n:
        raise ValueError("lattice must have full rank for canonical reduction")
    pivots = []
    for r in hnf_rows:
        j = next(i for i, x in enumerate(r) if x != 0)
        pivots.append(j)
    for r, j in zip(hnf_rows, pivots):
        q = v[j] // r[j]
        if q:
            for t in range(n):
                v[t] -= q * r[t]
    return tuple(v)


def unimodular_inverse(M: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    dec = smith_normal_form(M)
    if not dec.D.is_identity():
        raise ValueError("matrix is not unimodular")
    return dec.V @ dec.U


def integer_kernel_basis(M: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the saturated integer kernel {x : M x = 0}."""
    dec = smith_normal_form(M)
    r = dec.rank
    return [dec.V.column(j) for j in range(r, M.cols)]


def cokernel_structure(M: IntMatrix) -> FiniteAbelianStructure:
    """Invariant factors and free rank of Z^rows / (column lattice of M)."""
    dec = smith_normal_form(M)
    factors = tuple(d for d in dec.invariant_factors if d > 1)
    return FiniteAbelianStructure(invariant_factors=factors, free_rank=M.rows - dec.rank)


def p_rank(structure: FiniteAbelianStructure, p: int) -> int:
    """Number of invariant factors divisible by p (largest embedded mu_p power)."""
    return sum(1 for f in structure.invariant_factors if f % p == 0)


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def sublattice_p_index(vectors, dim: int, p: int) -> int | None:
    """p-adic valuation of [Z^dim : span(vectors)], or None when infinite.

    Zero means the vectors are p-spanning.
    """
    vecs = [tuple(int(x) for x in v) for v in vectors]
    for v in vecs:
        if len(v) != dim:
            raise ValueError("vector length mismatch")
    if not vecs:
        return None if dim > 0 else 0
    M = IntMatrix.from_rows(vecs).transpose()
    dec = smith_normal_form(M)
    if dec.rank < dim:
        return None
    return sum(valuation(d, p) for d in dec.invariant_factors if d != 0)


def torsion_image_membership(v, W: IntMatrix) -> bool:
    """Is v in the image of (Q/Z)^cols under W, inside (Q/Z)^rows?

    v is a vector of fractions modulo 1, length W.rows.  Via Smith form:
    transform by U and require zeroes beyond the rank; the nonzero invariant
    factors act surjectively on the divisible group Q/Z.
    """
    if len(v) != W.rows:
        raise ValueError("vector length must match row count")
    dec = smith_normal_form(W)
    y = dec.U.apply([mod1(x) for x in v])
    return all(mod1(y[i]) == 0 for i in range(dec.rank, W.rows))
