#!/usr/bin/env python3
"""
Dense Linear Algebra over a Coefficient Ring

Row reduction, kernels, solving and determinants for small dense matrices whose
entries live in one of the Ring kinds from exact.py. Pivoting always takes the
first nonzero entry in the column, so results are reproducible run to run.

Matrices are lists of rows. Nothing here mutates its arguments.
"""

from typing import List, Optional, Sequence, Tuple

from errors import ArityMismatchError, NotAFieldError, SingularMatrixError
from exact import Ring

Matrix = List[List]
Vector = List


def _require_field(ring: Ring, what: str):
    if not ring.is_field:
        raise NotAFieldError(f"{what} needs a field, got {ring.tag}")


def identity(ring: Ring, n: int) -> Matrix:
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def zeros(ring: Ring, rows: int, cols: int) -> Matrix:
    return [[ring.zero] * cols for _ in range(rows)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def coerce_matrix(ring: Ring, a: Sequence[Sequence]) -> Matrix:
    return [[ring.coerce(x) for x in row] for row in a]


def mat_mul(ring: Ring, a: Matrix, b: Matrix) -> Matrix:
    if a and len(a[0]) != len(b):
        raise ArityMismatchError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x?")
    bt = transpose(b)
    return [[ring.reduce(sum((x * y for x, y in zip(row, col)), ring.zero)) for col in bt]
            for row in a]


def mat_vec(ring: Ring, a: Matrix, v: Vector) -> Vector:
    if a and len(a[0]) != len(v):
        raise ArityMismatchError(f"matrix has {len(a[0])} columns, vector has {len(v)} entries")
    return [ring.reduce(sum((x * y for x, y in zip(row, v)), ring.zero)) for row in a]


def mat_add(ring: Ring, a: Matrix, b: Matrix) -> Matrix:
    return [[ring.reduce(x + y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(ring: Ring, a: Matrix, c) -> Matrix:
    return [[ring.reduce(x * c) for x in row] for row in a]


def rref(ring: Ring, a: Matrix) -> Tuple[Matrix, List[int], Matrix]:
    """Reduced row echelon form R, pivot columns, and T with T*A = R."""
    _require_field(ring, "row reduction")
    m = len(a)
    n = len(a[0]) if a else 0
    r = [list(row) for row in a]
    t = identity(ring, m)
    pivots: List[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        piv = next((i for i in range(row, m) if not ring.is_zero(r[i][col])), None)
        if piv is None:
            continue
        r[row], r[piv] = r[piv], r[row]
        t[row], t[piv] = t[piv], t[row]
        inv = ring.inv(r[row][col])
        r[row] = [ring.reduce(x * inv) for x in r[row]]
        t[row] = [ring.reduce(x * inv) for x in t[row]]
        for i in range(m):
            if i != row and not ring.is_zero(r[i][col]):
                f = r[i][col]
                r[i] = [ring.reduce(x - f * y) for x, y in zip(r[i], r[row])]
                t[i] = [ring.reduce(x - f * y) for x, y in zip(t[i], t[row])]
        pivots.append(col)
        row += 1
    return r, pivots, t


def rank(ring: Ring, a: Matrix) -> int:
    if not a:
        return 0
    return len(rref(ring, a)[1])


def nullspace(ring: Ring, a: Matrix, ncols: Optional[int] = None) -> List[Vector]:
    """Basis of {x : A x = 0}, one vector per free column."""
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if not a:
        return [[ring.one if i == j else ring.zero for i in range(n)] for j in range(n)]
    r, pivots, _ = rref(ring, a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ring.zero] * n
        v[f] = ring.one
        for i, p in enumerate(pivots):
            v[p] = ring.reduce(-r[i][f])
        basis.append(v)
    return basis


def solve(ring: Ring, a: Matrix, b: Vector) -> Optional[Vector]:
    """One solution of A x = b (free variables zero), or None if inconsistent."""
    return LinearSolver(ring, a).solve(b)


def inverse(ring: Ring, a: Matrix) -> Matrix:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ArityMismatchError("inverse of a non-square matrix")
    r, pivots, t = rref(ring, a)
    if len(pivots) < n:
        raise SingularMatrixError(f"matrix has rank {len(pivots)} < {n}")
    return t


def determinant(ring: Ring, a: Matrix):
    """Gaussian elimination over a field, Bareiss over ZZ."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ArityMismatchError("determinant of a non-square matrix")
    if n == 0:
        return ring.one
    if ring.kind == 'ZZ':
        return bareiss_determinant(a)
    _require_field(ring, "determinant")
    m = [list(row) for row in a]
    det = ring.one
    for col in range(n):
        piv = next((i for i in range(col, n) if not ring.is_zero(m[i][col])), None)
        if piv is None:
            return ring.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = ring.reduce(-det)
        det = ring.reduce(det * m[col][col])
        inv = ring.inv(m[col][col])
        for i in range(col + 1, n):
            if not ring.is_zero(m[i][col]):
                f = ring.reduce(m[i][col] * inv)
                m[i] = [ring.reduce(x - f * y) for x, y in zip(m[i], m[col])]
    return det


def bareiss_determinant(a: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(a)
    if n == 0:
        return 1
    m = [[int(x) for x in row] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def eigenspace(ring: Ring, a: Matrix, eigenvalue) -> List[Vector]:
    """Kernel of A - lambda I."""
    n = len(a)
    shifted = [[ring.reduce(a[i][j] - (eigenvalue if i == j else ring.zero)) for j in range(n)]
               for i in range(n)]
    return nullspace(ring, shifted)


def restrict_to_subspace(ring: Ring, a: Matrix, basis: List[Vector]) -> Matrix:
    """Matrix of v -> v*A on the row space spanned by `basis` (assumed invariant).

    Returns M with basis[i]*A = sum_j M[i][j] basis[j].
    """
    images = [[ring.reduce(sum((v[k] * a[k][j] for k in range(len(v))), ring.zero))
               for j in range(len(a[0]))] for v in basis]
    bt = transpose(basis)
    solver = LinearSolver(ring, bt)
    out = []
    for img in images:
        coords = solver.solve(img)
        if coords is None:
            raise ValueError("subspace is not invariant under the matrix")
        out.append(coords)
    return out


class LinearSolver:
    """Solves A x = b for many right-hand sides with one elimination."""

    def __init__(self, ring: Ring, a: Matrix):
        self.ring = ring
        self.nrows = len(a)
        self.ncols = len(a[0]) if a else 0
        if a:
            self.r, self.pivots, self.t = rref(ring, a)
        else:
            self.r, self.pivots, self.t = [], [], []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, b: Vector) -> Optional[Vector]:
        ring = self.ring
        if len(b) != self.nrows:
            raise ArityMismatchError(f"right-hand side has {len(b)} entries, expected {self.nrows}")
        c = mat_vec(ring, self.t, [ring.coerce(x) for x in b]) if self.t else []
        for i in range(self.rank, self.nrows):
            if not ring.is_zero(c[i]):
                return None
        x = [ring.zero] * self.ncols
        for i, p in enumerate(self.pivots):
            x[p] = c[i]
        return x
