"""Dense exact matrices over the rationals and the elimination kernels.

Everything is computed exactly with Fraction entries; there is no
floating point anywhere in the package. The row-reduction kernel is
either the compiled twin (lieq._rref_c) or the pure-Python fallback,
chosen at import time; set LIEQ_PURE_KERNEL=1 to force the fallback.
"""

from __future__ import annotations

import os
from fractions import Fraction

if os.environ.get("LIEQ_PURE_KERNEL"):
    from . import _rref_py as _kernel
else:
    try:
        from . import _rref_c as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _rref_py as _kernel

KERNEL_BACKEND: str = _kernel.BACKEND

Vector = tuple  # tuple of Fraction


class SingularMatrix(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Matrix:
    """Immutable dense matrix with Fraction entries, row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        self.data = tuple(tuple(_frac(x) for x in row) for row in data)
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        for row in self.data:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        z = Fraction(0)
        return cls([[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns) -> "Matrix":
        cols = [list(c) for c in columns]
        n = len(cols[0])
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Matrix[{body}]"

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ]
        )

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in row] for row in self.data])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            bt = list(zip(*other.data))
            return Matrix(
                [
                    [sum(a * b for a, b in zip(row, col)) for col in bt]
                    for row in self.data
                ]
            )
        return self.scale(other)

    def scale(self, s) -> "Matrix":
        s = _frac(s)
        return Matrix([[s * a for a in row] for row in self.data])

    def apply(self, vec) -> Vector:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.data)

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.data)))

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.data)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def _same_shape(self, other: "Matrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def rref(self):
        """Reduced row echelon form: (Matrix of nonzero rows, pivot columns)."""
        reduced, pivots = _kernel.rref([list(row) for row in self.data])
        if not reduced:
            return Matrix.zero(0, self.cols) if self.cols else Matrix([]), []
        return Matrix(reduced), list(pivots)

    def rank(self) -> int:
        _, pivots = _kernel.rref([list(row) for row in self.data])
        return len(pivots)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise SingularMatrix("not square")
        n = self.rows
        aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
               for i, row in enumerate(self.data)]
        reduced, pivots = _kernel.rref(aug)
        if pivots != list(range(n)):
            raise SingularMatrix("matrix is singular")
        return Matrix([row[n:] for row in reduced])


def rank(m: Matrix) -> int:
    """Rank over the rationals, exact."""
    return m.rank()


def nullspace(m: Matrix):
    """Reduced-echelon basis of the right kernel, ordered by pivot column.

    The returned vectors, stacked as rows, form a reduced echelon matrix
    whose pivots sit at the free columns of m.
    """
    reduced, pivots = _kernel.rref([list(row) for row in m.data])
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -reduced[r][f]
        basis.append(tuple(v))
    return basis


def matrix_power(m: Matrix, k: int) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("not square")
    result = Matrix.identity(m.rows)
    base = m
    while k:
        if k & 1:
            result = result * base
        base = base * base if k > 1 else base
        k >>= 1
    return result


def is_nilpotent_matrix(a: Matrix) -> bool:
    """True iff a^N = 0 for N = size, decided exactly by squaring."""
    if a.rows != a.cols:
        raise ValueError("nilpotency needs a square matrix")
    n = a.rows
    if n == 0:
        return True
    power = a
    steps = 1
    while steps < n:
        if power.is_zero():
            return True
        power = power * power
        steps *= 2
    return power.is_zero()


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(s, v):
    s = _frac(s)
    return tuple(s * a for a in v)


def zero_vec(n: int) -> Vector:
    return (Fraction(0),) * n


def basis_vec(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))
