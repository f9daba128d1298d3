"""Exact dense linear algebra over arbitrary-precision rationals.

Everything here is bit-exact: entries are ``fractions.Fraction`` (always
reduced, positive denominator), elimination is plain Gauss-Jordan with
row pivoting, and determinants use the fraction-free Bareiss scheme on a
denominator-cleared integer matrix.  Matrix sizes in this package stay
tiny (n <= ~20), so cubic algorithms are fine.

Matrices are immutable after construction and safe to share.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(x) -> Fraction:
    """Coerce ints, strings like ``-2/5``, and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class LinAlgError(ValueError):
    """Dimension mismatch or a singular matrix where invertibility is required."""


class Matrix:
    """Dense rational matrix, row-major, immutable."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Iterable[Iterable]) -> None:
        e = tuple(tuple(rat(x) for x in row) for row in entries)
        if not e or not e[0]:
            raise LinAlgError("matrix must have at least one row and one column")
        if any(len(row) != len(e[0]) for row in e):
            raise LinAlgError("ragged rows")
        self.rows = len(e)
        self.cols = len(e[0])
        self._e = e

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[ZERO] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, values: Sequence) -> "Matrix":
        vals = [rat(v) for v in values]
        n = len(vals)
        return cls([[vals[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "Matrix":
        cols = [tuple(rat(x) for x in c) for c in columns]
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        return self._e[i]

    def column(self, j: int) -> tuple:
        return tuple(self._e[i][j] for i in range(self.rows))

    def tolist(self) -> list:
        return [list(r) for r in self._e]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self._e == other._e

    def __hash__(self):
        return hash(self._e)

    def __repr__(self) -> str:
        return f"Matrix({self.tolist()!r})"

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            [
                [self._e[i][j] + other._e[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            [
                [self._e[i][j] - other._e[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = rat(c)
        return Matrix([[c * x for x in row] for row in self._e])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinAlgError(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix(
            [
                [
                    sum((self._e[i][k] * other._e[k][j] for k in range(self.cols)), ZERO)
                    for j in range(other.cols)
                ]
                for i in range(self.rows)
            ]
        )

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def transpose(self) -> "Matrix":
        return Matrix([self.column(j) for j in range(self.cols)])

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self._e[i][j] == self._e[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._e for x in row)

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product, returning a plain tuple of Fractions."""
        vv = [rat(x) for x in v]
        if len(vv) != self.cols:
            raise LinAlgError("vector length does not match column count")
        return tuple(
            sum((self._e[i][j] * vv[j] for j in range(self.cols)), ZERO)
            for i in range(self.rows)
        )

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch: {self.shape} vs {other.shape}")

    # -- elimination ----------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple]:
        """Reduced row echelon form and the tuple of pivot column indices.

        Row pivoting only (largest |entry|, then lowest row index), so the
        result is the canonical RREF of the row space.
        """
        m = [list(r) for r in self._e]
        pivots = []
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            best = None
            for i in range(r, self.rows):
                if m[i][c] != 0 and (best is None or abs(m[i][c]) > abs(m[best][c])):
                    best = i
            if best is None:
                continue
            m[r], m[best] = m[best], m[r]
            piv = m[r][c]
            m[r] = [x / piv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return Matrix(m), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list:
        """Basis of the kernel, one vector per free column, ascending order."""
        R, pivots = self.rref()
        pivset = set(pivots)
        free = [j for j in range(self.cols) if j not in pivset]
        basis = []
        for j in free:
            v = [ZERO] * self.cols
            v[j] = ONE
            for r, c in enumerate(pivots):
                v[c] = -R._e[r][j]
            basis.append(tuple(v))
        return basis

    def solve(self, b: Sequence) -> Optional[tuple]:
        """One exact solution of ``A x = b`` with free variables set to 0.

        Returns None when the system is inconsistent.
        """
        bb = [rat(x) for x in b]
        if len(bb) != self.rows:
            raise LinAlgError("right-hand side length does not match row count")
        aug = Matrix([list(self._e[i]) + [bb[i]] for i in range(self.rows)])
        R, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [ZERO] * self.cols
        for r, c in enumerate(pivots):
            x[c] = R._e[r][self.cols]
        return tuple(x)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise LinAlgError("only square matrices can be inverted")
        n = self.rows
        aug = Matrix(
            [
                list(self._e[i]) + [ONE if i == j else ZERO for j in range(n)]
                for i in range(n)
            ]
        )
        R, pivots = aug.rref()
        if tuple(pivots) != tuple(range(n)):
            raise LinAlgError("matrix is singular")
        return Matrix([R._e[i][n:] for i in range(n)])

    def det(self) -> Fraction:
        """Exact determinant via Bareiss on a denominator-cleared copy."""
        if self.rows != self.cols:
            raise LinAlgError("determinant of a non-square matrix")
        n = self.rows
        den = 1
        m: list[list[int]] = []
        for row in self._e:
            scale = math.lcm(*(x.denominator for x in row))
            den *= scale
            m.append([int(x * scale) for x in row])
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if swap is None:
                    return ZERO
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return Fraction(sign * m[n - 1][n - 1], den)

    def leading_principal_minors(self) -> list:
        return [
            Matrix([row[: k + 1] for row in self._e[: k + 1]]).det()
            for k in range(min(self.rows, self.cols))
        ]

    def is_positive_definite(self) -> bool:
        """Sylvester criterion on exact leading principal minors."""
        return self.is_symmetric() and all(d > 0 for d in self.leading_principal_minors())


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise LinAlgError("vstack with mismatched column counts")
    return Matrix([row for b in blocks for row in b._e])


def solve(A: Matrix, b: Sequence) -> tuple[Optional[tuple], list]:
    """Full solution set of ``A x = b``: a particular solution and a kernel basis."""
    return A.solve(b), A.nullspace()
