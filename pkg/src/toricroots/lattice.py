"""Exact integer lattice arithmetic.

Lattice points are plain tuples of Python ints (``Vector``); rational points
are tuples of ``Fraction``. Nothing here touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[int, ...]
RationalVector = tuple[Fraction, ...]


class LatticeError(ValueError):
    pass


def vector(coords: Iterable) -> Vector:
    out = []
    for c in coords:
        if isinstance(c, bool) or int(c) != c:
            raise LatticeError(f"non-integer lattice coordinate {c!r}")
        out.append(int(c))
    if not out:
        raise LatticeError("lattice vectors must have positive rank")
    return tuple(out)


def rational_vector(coords: Iterable) -> RationalVector:
    out = tuple(Fraction(c) for c in coords)
    if not out:
        raise LatticeError("vectors must have positive rank")
    return out


def pairing(n: Sequence, m: Sequence):
    if len(n) != len(m):
        raise LatticeError(f"rank mismatch: {len(n)} vs {len(m)}")
    return sum(a * b for a, b in zip(n, m))


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(k, v: Sequence) -> tuple:
    return tuple(k * a for a in v)


def content(v: Sequence[int]) -> int:
    g = 0
    for c in v:
        g = gcd(g, c)
    return g


def primitive(v: Sequence[int]) -> Vector:
    """Shortest lattice vector on the ray through ``v``."""
    g = content(v)
    if g == 0:
        raise LatticeError("zero vector has no primitive part")
    return tuple(c // g for c in v)


def primitive_rational(v: Sequence) -> Vector:
    """Clear denominators of a rational vector, then take the primitive part."""
    den = 1
    for c in v:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    return primitive([int(Fraction(c) * den) for c in v])


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def bezout(r: int, q: int) -> tuple[int, int]:
    """Canonical ``(u, v)`` with ``r*u + q*v == 1``.

    The pair is unique once we demand ``0 <= v < |r|``; for ``r == 0`` we
    return ``(0, sign(q))``.
    """
    if gcd(r, q) != 1:
        raise LatticeError(f"bezout needs coprime input, got gcd({r}, {q}) = {gcd(r, q)}")
    if r == 0:
        return 0, q
    _, _, y = ext_gcd(r, q)
    v = y % abs(r)
    u, rem = divmod(1 - q * v, r)
    assert rem == 0
    return u, v


def dual_unit(m: Sequence[int]) -> Vector:
    """Some integer ``w`` with ``<w, m> == 1``; ``m`` must be primitive."""
    if content(m) != 1:
        raise LatticeError(f"{tuple(m)} is not primitive")
    w = [0] * len(m)
    g = 0
    # running combination: sum(w_i m_i) == g after each step
    for i, c in enumerate(m):
        g2, x, y = ext_gcd(g, c)
        w = [x * wi for wi in w]
        w[i] = y
        g = g2
    return tuple(w)


def _echelon(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    mat = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r][c]
        mat[r] = [x / p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    return len(_echelon(rows, ncols if ncols is not None else len(rows[0]))[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Primitive integer basis of the rational solutions of ``rows @ x == 0``.

    The basis spans the rational kernel; it need not be a lattice basis of
    the saturated kernel once the kernel has dimension above one.
    """
    red, pivots = _echelon(list(rows), ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(primitive_rational(x))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Unique exact solution of ``rows @ x == rhs``, or None.

    None covers both an inconsistent system and a non-unique solution.
    """
    ncols = len(rows[0]) if rows else 0
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = _echelon(aug, ncols + 1)
    if ncols in pivots or len(pivots) != ncols:
        return None
    return [row[ncols] for row in red]


def det(matrix: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    a = [list(row) for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise LatticeError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(matrix: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    red, pivots = _echelon(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise LatticeError("matrix is singular")
    return [row[n:] for row in red]


def transpose(matrix: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*matrix)]


def is_saturated(basis: Sequence[Sequence[int]]) -> bool:
    """Whether independent ``basis`` spans a saturated sublattice (gcd of maximal minors is 1)."""
    basis = [list(b) for b in basis]
    k, n = len(basis), len(basis[0])
    if rank(basis, n) != k:
        return False
    g = 0
    for cols in combinations(range(n), k):
        g = gcd(g, det([[b[j] for j in cols] for b in basis]))
        if g == 1:
            return True
    return g == 1


def kernel_generator(basis: Sequence[Sequence[int]]) -> Vector:
    """Primitive ``m`` orthogonal to a saturated corank-one sublattice of N.

    Sign convention: the first nonzero coordinate of ``m`` is positive.
    """
    basis = [vector(b) for b in basis]
    if not basis:
        raise LatticeError("empty basis")
    n = len(basis[0])
    if any(len(b) != n for b in basis):
        raise LatticeError("basis vectors of different ranks")
    if len(basis) != n - 1 or rank(basis, n) != n - 1:
        raise LatticeError(f"basis does not span a corank-1 sublattice of rank-{n} lattice")
    (m,) = nullspace(basis, n)
    if next(c for c in m if c) < 0:
        m = tuple(-c for c in m)
    # index of the span inside the saturated hyperplane = gcd of maximal minors
    minors = [det([[b[j] for j in range(n) if j != i] for b in basis]) for i in range(n)]
    if content(minors) != 1:
        raise LatticeError(f"sublattice is not saturated (index {content(minors)})")
    return m


def orthogonal_basis(m: Sequence[int]) -> list[Vector]:
    """A lattice basis of ``{n : <n, m> == 0}`` for primitive ``m``.

    Column operations reduce ``m`` to a unit vector; the remaining columns of
    the accumulated unimodular matrix span the orthogonal complement.
    """
    m = list(vector(m))
    if content(m) != 1:
        raise LatticeError(f"{tuple(m)} is not primitive")
    n = len(m)
    cols = [[int(i == j) for i in range(n)] for j in range(n)]  # cols[j] is column j
    while sum(1 for c in m if c) > 1:
        nz = [j for j in range(n) if m[j]]
        j0 = min(nz, key=lambda j: abs(m[j]))
        for j in nz:
            if j != j0:
                k = m[j] // m[j0]
                m[j] -= k * m[j0]
                cols[j] = [x - k * y for x, y in zip(cols[j], cols[j0])]
    pivot = next(j for j in range(n) if m[j])
    return [tuple(cols[j]) for j in range(n) if j != pivot]


@dataclass(frozen=True)
class LatticeMap:
    """Integer matrix acting on column vectors: ``rank_out x rank_in``."""

    matrix: tuple[Vector, ...]

    def __post_init__(self):
        rows = tuple(vector(r) for r in self.matrix)
        if len({len(r) for r in rows}) != 1:
            raise LatticeError("ragged matrix")
        object.__setattr__(self, "matrix", rows)

    @property
    def rank_in(self) -> int:
        return len(self.matrix[0])

    @property
    def rank_out(self) -> int:
        return len(self.matrix)

    def __call__(self, v: Sequence[int]) -> Vector:
        if len(v) != self.rank_in:
            raise LatticeError(f"rank mismatch: map expects {self.rank_in}, got {len(v)}")
        return tuple(pairing(row, v) for row in self.matrix)

    def transpose(self) -> "LatticeMap":
        return LatticeMap(tuple(tuple(c) for c in zip(*self.matrix)))
