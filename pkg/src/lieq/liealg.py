"""Structure-constant Lie algebras over the rationals.

A LieAlgebra stores only the brackets [e_i, e_j] with i < j; the
opposite order is derived by antisymmetry. Subspaces carry a canonical
reduced-echelon basis so that equality of subspaces is equality of the
stored data. All values are immutable by convention and every operation
is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import (
    Matrix,
    SingularMatrix,
    basis_vec,
    nullspace,
    vec_add,
)
from .rationals import rat, rat_str


class NotAnIdeal(ValueError):
    pass


class LieAlgebra:
    """Lie algebra given by its dimension, basis names and sparse brackets.

    brackets maps (i, j) with 0-based i < j to {k: coeff} meaning
    [e_i, e_j] = sum coeff * e_k. Input pairs with i > j are folded in by
    antisymmetry, zero coefficients are dropped.
    """

    __slots__ = ("dim", "basis_names", "brackets")

    def __init__(self, dim, brackets, basis_names=None):
        self.dim = dim
        if basis_names is None:
            basis_names = tuple(f"e{i + 1}" for i in range(dim))
        self.basis_names = tuple(basis_names)
        if len(self.basis_names) != dim:
            raise ValueError("basis_names length must equal dim")
        table = {}
        for (i, j), terms in brackets.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValueError(f"bracket index out of range: {(i, j)}")
            if i == j:
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            items = terms.items() if isinstance(terms, dict) else terms
            slot = table.setdefault((i, j), {})
            for k, c in items:
                c = rat(c) * sign
                c += slot.get(k, Fraction(0))
                if c:
                    slot[k] = c
                elif k in slot:
                    del slot[k]
        self.brackets = {key: dict(val) for key, val in table.items() if val}

    def bracket_basis(self, i: int, j: int) -> dict:
        """[e_i, e_j] as a sparse {k: coeff} map, any index order."""
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        return {k: -c for k, c in self.brackets.get((j, i), {}).items()}

    def bracket(self, x, y):
        """Bilinear antisymmetric evaluation of [x, y] on coefficient vectors."""
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("dimension mismatch")
        out = [Fraction(0)] * self.dim
        for (i, j), terms in self.brackets.items():
            coef = x[i] * y[j] - x[j] * y[i]
            if coef:
                for k, c in terms.items():
                    out[k] += coef * c
        return tuple(out)

    def adjoint_matrix(self, x) -> Matrix:
        """Matrix of ad_x : y -> [x, y] in the algebra basis."""
        if len(x) != self.dim:
            raise ValueError("dimension mismatch")
        cols = [self.bracket(x, basis_vec(self.dim, j)) for j in range(self.dim)]
        return Matrix.from_columns(cols) if self.dim else Matrix([])

    def basis_vector(self, i: int):
        return basis_vec(self.dim, i)

    def __eq__(self, other):
        return (
            isinstance(other, LieAlgebra)
            and self.dim == other.dim
            and self.basis_names == other.basis_names
            and self.brackets == other.brackets
        )

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, names={list(self.basis_names)})"

    def bracket_table(self):
        """Sorted iterable of ((i, j), {k: coeff}) with i < j, for display/tests."""
        return sorted((key, dict(val)) for key, val in self.brackets.items())

    def to_json_dict(self) -> dict:
        entries = []
        for (i, j), terms in self.bracket_table():
            entries.append(
                {
                    "i": i + 1,
                    "j": j + 1,
                    "terms": [
                        {"k": k + 1, "c": rat_str(c)} for k, c in sorted(terms.items())
                    ],
                }
            )
        return {"dim": self.dim, "basis": list(self.basis_names), "brackets": entries}

    @classmethod
    def from_json_dict(cls, payload: dict) -> "LieAlgebra":
        brackets = {}
        for entry in payload["brackets"]:
            i, j = entry["i"] - 1, entry["j"] - 1
            brackets[(i, j)] = {t["k"] - 1: rat(t["c"]) for t in entry["terms"]}
        return cls(payload["dim"], brackets, payload["basis"])


def abelian_algebra(dim: int, prefix: str = "a") -> LieAlgebra:
    return LieAlgebra(dim, {}, tuple(f"{prefix}{i + 1}" for i in range(dim)))


class Subspace:
    """Linear subspace with a canonical reduced-echelon basis."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, vectors=()):
        self.ambient_dim = ambient_dim
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise ValueError("vector length must equal ambient_dim")
        if vectors:
            reduced, _ = Matrix(vectors).rref()
            self.basis = tuple(tuple(row) for row in reduced.data)
        else:
            self.basis = ()

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, [basis_vec(ambient_dim, i) for i in range(ambient_dim)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vec) -> bool:
        v = list(vec)
        for row in self.basis:
            pivot = next(i for i, x in enumerate(row) if x == 1)
            if v[pivot]:
                coef = v[pivot]
                for i in range(self.ambient_dim):
                    v[i] -= coef * row[i]
        return all(x == 0 for x in v)

    def reduce(self, vec):
        """Canonical representative of vec modulo the subspace."""
        v = list(vec)
        for row in self.basis:
            pivot = next(i for i, x in enumerate(row) if x == 1)
            if v[pivot]:
                coef = v[pivot]
                for i in range(self.ambient_dim):
                    v[i] -= coef * row[i]
        return tuple(v)

    def pivot_columns(self):
        return [next(i for i, x in enumerate(row) if x == 1) for row in self.basis]

    def annihilator_rows(self):
        """Functionals phi (as row vectors) with phi(v) = 0 for all v here."""
        if not self.basis:
            return [basis_vec(self.ambient_dim, i) for i in range(self.ambient_dim)]
        return nullspace(Matrix(self.basis))

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim} of {self.ambient_dim})"


@dataclass(frozen=True)
class JacobiReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def check_jacobi(g: LieAlgebra) -> JacobiReport:
    """Evaluate [[e_i,e_j],e_k] + cyclic for all i<j<k, exactly."""
    bad = []
    n = g.dim
    basis = [basis_vec(n, i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            bij = g.bracket(basis[i], basis[j])
            for k in range(j + 1, n):
                acc = g.bracket(bij, basis[k])
                acc = vec_add(acc, g.bracket(g.bracket(basis[j], basis[k]), basis[i]))
                acc = vec_add(acc, g.bracket(g.bracket(basis[k], basis[i]), basis[j]))
                if any(x != 0 for x in acc):
                    bad.append((i, j, k))
    return JacobiReport(tuple(bad))


def product_span(g: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    """Canonical span of all [x, y] with x in a's basis, y in b's basis."""
    vectors = []
    for x in a.basis:
        for y in b.basis:
            v = g.bracket(x, y)
            if any(c != 0 for c in v):
                vectors.append(v)
    return Subspace(g.dim, vectors)


def centralizer(g: LieAlgebra, s: Subspace) -> Subspace:
    """{x : [x, v] = 0 for all v in s}, solved as one exact linear system."""
    if s.dim == 0:
        return Subspace.full(g.dim)
    rows = []
    for v in s.basis:
        ad_v = g.adjoint_matrix(v)
        # [x, v] = -ad_v(x); stack the rows of ad_v as constraints on x
        rows.extend(list(row) for row in ad_v.data)
    kernel = nullspace(Matrix(rows))
    return Subspace(g.dim, kernel)


def quotient(g: LieAlgebra, ideal: Subspace) -> LieAlgebra:
    """Quotient algebra on the coordinate complement of the ideal.

    Raises NotAnIdeal unless [g, ideal] lies in the ideal.
    """
    n = g.dim
    for j in range(n):
        ej = basis_vec(n, j)
        for v in ideal.basis:
            if not ideal.contains(g.bracket(ej, v)):
                raise NotAnIdeal("subspace is not an ideal")
    pivots = set(ideal.pivot_columns())
    complement = [i for i in range(n) if i not in pivots]
    index_of = {orig: new for new, orig in enumerate(complement)}
    brackets = {}
    for a_pos, a_orig in enumerate(complement):
        for b_pos in range(a_pos + 1, len(complement)):
            b_orig = complement[b_pos]
            w = ideal.reduce(g.bracket(basis_vec(n, a_orig), basis_vec(n, b_orig)))
            terms = {index_of[i]: c for i, c in enumerate(w) if c}
            if terms:
                brackets[(a_pos, b_pos)] = terms
    names = tuple(g.basis_names[i] for i in complement)
    return LieAlgebra(len(complement), brackets, names)


def change_basis(g: LieAlgebra, p: Matrix, basis_names=None) -> LieAlgebra:
    """Structure constants in the basis e'_k = sum_j e_j P[j][k]."""
    if p.rows != g.dim or p.cols != g.dim:
        raise ValueError("change of basis matrix has wrong shape")
    p_inv = p.inverse()
    n = g.dim
    brackets = {}
    for a in range(n):
        col_a = p.column(a)
        for b in range(a + 1, n):
            w = g.bracket(col_a, p.column(b))
            coords = p_inv.apply(w)
            terms = {k: c for k, c in enumerate(coords) if c}
            if terms:
                brackets[(a, b)] = terms
    return LieAlgebra(n, brackets, basis_names or g.basis_names)


@dataclass(frozen=True)
class SeriesProfile:
    """Dimension sequences of the derived, lower and upper central series.

    Each list ends at the first stabilized value; the repeated tail is
    printed once.
    """

    DS: tuple
    CS: tuple
    US: tuple

    def __str__(self):
        fmt = lambda seq: "[" + ",".join(str(d) for d in seq) + "]"
        return f"DS={fmt(self.DS)} CS={fmt(self.CS)} US={fmt(self.US)}"


def _truncate(dims):
    out = [dims[0]]
    for d in dims[1:]:
        if d == out[-1]:
            break
        out.append(d)
    return tuple(out)


def series_profile(g: LieAlgebra) -> SeriesProfile:
    full = Subspace.full(g.dim)

    ds = [g.dim]
    current = full
    while True:
        current = product_span(g, current, current)
        ds.append(current.dim)
        if ds[-1] == ds[-2]:
            break

    cs = [g.dim]
    current = full
    while True:
        current = product_span(g, current, full)
        cs.append(current.dim)
        if cs[-1] == cs[-2]:
            break

    # upper central series via preimages: z_k = {x : [x, g] <= z_{k-1}}
    us = []
    z = Subspace.zero(g.dim)
    while True:
        ann = z.annihilator_rows()
        rows = []
        for j in range(g.dim):
            ad_j = g.adjoint_matrix(basis_vec(g.dim, j))
            for phi in ann:
                rows.append([sum(phi[r] * ad_j[r, c] for r in range(g.dim))
                             for c in range(g.dim)])
        z_next = Subspace(g.dim, nullspace(Matrix(rows))) if rows else full
        us.append(z_next.dim)
        if z_next.dim == z.dim:
            break
        z = z_next

    return SeriesProfile(_truncate(ds), _truncate(cs), _truncate(us))
