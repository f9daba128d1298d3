"""Lie algebras given by structure equations on a coframe.

The differential is the left-invariant one: for constant-coefficient forms
dω(X, Y) = −ω([X, Y]) on 1-forms, extended to all degrees as an
anti-derivation.  There is no ½ factor here; d² = 0 is then literally the
Jacobi identity, and the structure constants of the nilpotent examples stay
integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .forms import DegreeError, Form, Vector
from .linalg import Matrix

ZERO = Fraction(0)


class JacobiError(ValueError):
    """Structure equations that do not satisfy the Jacobi identity."""

    def __init__(self, witness: tuple[int, int, int], residual: Vector) -> None:
        self.witness = witness
        self.residual = residual
        i, j, k = witness
        super().__init__(
            f"Jacobi identity fails on basis triple ({i + 1}, {j + 1}, {k + 1})"
        )


def default_names(n: int, stem: str = "w") -> tuple[str, ...]:
    return tuple(f"{stem}{i + 1}" for i in range(n))


class LieAlgebra:
    """Finite-dimensional Lie algebra with exact structure constants.

    Brackets are stored as [X_i, X_j] for i < j; antisymmetry is built in.
    Construction certifies Jacobi and raises :class:`JacobiError` otherwise.
    """

    __slots__ = ("n", "names", "_brackets", "_d_one_forms")

    def __init__(
        self,
        n: int,
        brackets: Mapping[tuple[int, int], Sequence],
        names: Sequence[str] | None = None,
    ) -> None:
        self.n = n
        self.names = tuple(names) if names is not None else default_names(n)
        if len(self.names) != n:
            raise ValueError("coframe name count does not match dimension")
        table: dict[tuple[int, int], Vector] = {}
        for (i, j), coeffs in brackets.items():
            if not 0 <= i < j < n:
                raise ValueError(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < n")
            v = coeffs if isinstance(coeffs, Vector) else Vector(coeffs)
            if v.n != n:
                raise ValueError("bracket value dimension mismatch")
            if not v.is_zero():
                table[(i, j)] = v
        self._brackets = table
        self._d_one_forms = tuple(self._compute_d_one_form(k) for k in range(n))
        self._certify_jacobi()

    @classmethod
    def abelian(cls, n: int, names: Sequence[str] | None = None) -> "LieAlgebra":
        return cls(n, {}, names)

    @classmethod
    def from_structure_equations(
        cls,
        n: int,
        equations: Mapping[int, Form] | Iterable[tuple[int, Form]],
        names: Sequence[str] | None = None,
    ) -> "LieAlgebra":
        """Build from the 2-forms dω_k; c^k_{ij} = −(dω_k)(X_i, X_j)."""
        eq = dict(equations.items() if isinstance(equations, Mapping) else equations)
        for k, form in eq.items():
            if not 0 <= k < n:
                raise ValueError(f"coframe index {k} out of range")
            if form.degree != 2 or form.n != n:
                raise ValueError(f"structure equation for index {k} must be a 2-form on dimension {n}")
        brackets: dict[tuple[int, int], list] = {}
        for k, form in eq.items():
            for (i, j), c in form.coeffs.items():
                col = brackets.setdefault((i, j), [ZERO] * n)
                col[k] = -c
        return cls(n, brackets, names)

    def bracket_basis(self, i: int, j: int) -> Vector:
        """[X_i, X_j] for arbitrary index order."""
        if i == j:
            return Vector.zero(self.n)
        if i < j:
            v = self._brackets.get((i, j))
            return v if v is not None else Vector.zero(self.n)
        return -self.bracket_basis(j, i)

    def bracket(self, v: Vector, w: Vector) -> Vector:
        out = Vector.zero(self.n)
        for (i, j), b in self._brackets.items():
            c = v[i] * w[j] - v[j] * w[i]
            if c != 0:
                out = out + b.scale(c)
        return out

    def _compute_d_one_form(self, k: int) -> Form:
        if self.n < 2:
            # no 2-forms exist; placeholder is never read since d needs degree < n
            return Form.zero(self.n, self.n)
        coeffs = {}
        for (i, j), b in self._brackets.items():
            if b[k] != 0:
                coeffs[(i, j)] = -b[k]
        return Form(self.n, 2, coeffs)

    def d_one_form(self, k: int) -> Form:
        return self._d_one_forms[k]

    def differential(self, a: Form) -> Form:
        """Chevalley-Eilenberg differential; input degree must be below n."""
        if a.n != self.n:
            raise ValueError("form dimension does not match algebra")
        if a.degree >= self.n:
            raise DegreeError(f"differential of a degree-{a.degree} form in dimension {self.n}")
        result = Form.zero(self.n, a.degree + 1)
        for idx, c in a.coeffs.items():
            for pos, i in enumerate(idx):
                # d(w_{i1}^...^w_{ip}) picks up (-1)^pos from moving d past pos factors
                left = Form.monomial(self.n, idx[:pos]) if pos else Form.constant(self.n, 1)
                right = (
                    Form.monomial(self.n, idx[pos + 1 :])
                    if pos + 1 < len(idx)
                    else Form.constant(self.n, 1)
                )
                term = left.wedge(self._d_one_forms[i]).wedge(right)
                sign = -1 if pos % 2 else 1
                result = result + term.scale(sign * c)
        return result

    def _certify_jacobi(self) -> None:
        for i, j, k in combinations(range(self.n), 3):
            r = (
                self.bracket(self.bracket_basis(i, j), Vector.basis(self.n, k))
                + self.bracket(self.bracket_basis(j, k), Vector.basis(self.n, i))
                + self.bracket(self.bracket_basis(k, i), Vector.basis(self.n, j))
            )
            if not r.is_zero():
                raise JacobiError((i, j, k), r)

    def structure_equations(self) -> dict[int, Form]:
        """The nonzero dω_k, recovering the construction input."""
        return {k: f for k, f in enumerate(self._d_one_forms) if not f.is_zero()}

    def nonzero_brackets(self) -> dict[tuple[int, int], Vector]:
        return dict(self._brackets)

    def derived_subalgebra(self) -> "Distribution":
        return Distribution.from_vectors(self.n, list(self._brackets.values()))

    def center(self) -> "Distribution":
        # v is central iff bracket(v, X_j) = 0 for all j: a stacked linear system
        rows = []
        for j in range(self.n):
            cols = [self.bracket_basis(i, j) for i in range(self.n)]
            for k in range(self.n):
                rows.append([cols[i][k] for i in range(self.n)])
        return Distribution.from_vectors(self.n, [Vector(v) for v in Matrix(rows).nullspace()])

    def lower_central_series(self) -> list["Distribution"]:
        """g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ ... down to the first repetition or zero."""
        series = [Distribution.full(self.n)]
        while True:
            prev = series[-1]
            gens = [self.bracket(Vector.basis(self.n, i), v) for i in range(self.n) for v in prev.basis]
            nxt = Distribution.from_vectors(self.n, gens)
            if nxt.dim == prev.dim:
                break
            series.append(nxt)
            if nxt.dim == 0:
                break
        return series

    def nilpotency_depth(self) -> int | None:
        """Smallest s with g^{s+1} = 0, or None if not nilpotent."""
        series = self.lower_central_series()
        if series[-1].dim != 0:
            return None
        return len(series) - 1


class Distribution:
    """Subspace with a canonical reduced-row-echelon basis, so equality is decidable."""

    __slots__ = ("n", "basis")

    def __init__(self, n: int, basis: Sequence[Vector]) -> None:
        self.n = n
        self.basis = tuple(basis)

    @classmethod
    def from_vectors(cls, n: int, vectors: Sequence[Vector]) -> "Distribution":
        nonzero = [v for v in vectors if not v.is_zero()]
        if not nonzero:
            return cls(n, ())
        reduced, pivots = Matrix([list(v.coeffs) for v in nonzero]).rref()
        return cls(n, tuple(Vector(reduced.row(r)) for r in range(len(pivots))))

    @classmethod
    def full(cls, n: int) -> "Distribution":
        return cls(n, tuple(Vector.basis(n, i) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "Distribution":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Vector) -> bool:
        if v.is_zero():
            return True
        if self.dim == 0:
            return False
        stacked = Matrix([list(b.coeffs) for b in self.basis] + [list(v.coeffs)])
        return stacked.rank() == self.dim

    def contains_distribution(self, other: "Distribution") -> bool:
        return all(self.contains(v) for v in other.basis)

    def intersection(self, other: "Distribution") -> "Distribution":
        if self.dim == 0 or other.dim == 0:
            return Distribution.zero(self.n)
        # x in both spans: x = A^T a = B^T b, so (a, b) is in the nullspace of [A^T | -B^T]
        cols = []
        for v in self.basis:
            cols.append(list(v.coeffs))
        for v in other.basis:
            cols.append([-c for c in v.coeffs])
        stacked = Matrix(cols).transpose()
        vectors = []
        for sol in stacked.nullspace():
            x = Vector.zero(self.n)
            for a, v in zip(sol[: self.dim], self.basis):
                x = x + v.scale(a)
            vectors.append(x)
        return Distribution.from_vectors(self.n, vectors)

    def sum(self, other: "Distribution") -> "Distribution":
        return Distribution.from_vectors(self.n, list(self.basis) + list(other.basis))

    def __eq__(self, other) -> bool:
        return isinstance(other, Distribution) and self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, self.basis))

    def render(self, frame_names: Sequence[str]) -> str:
        if self.dim == 0:
            return "0"
        parts = []
        for v in self.basis:
            terms = []
            for i, c in enumerate(v.coeffs):
                if c == 0:
                    continue
                if c == 1:
                    terms.append(f"+ {frame_names[i]}")
                elif c == -1:
                    terms.append(f"- {frame_names[i]}")
                elif c < 0:
                    terms.append(f"- {-c} {frame_names[i]}")
                else:
                    terms.append(f"+ {c} {frame_names[i]}")
            joined = " ".join(terms)
            parts.append(joined[2:] if joined.startswith("+ ") else joined.replace("- ", "-", 1))
        return "span{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class SubalgebraCheck:
    ok: bool
    witness_pair: tuple[Vector, Vector] | None = None
    residual: Vector | None = None


def is_subalgebra(L: LieAlgebra, D: Distribution) -> SubalgebraCheck:
    """Bracket closure of span(D); on failure carries the offending pair and residual.

    The residual is the component of the bracket outside span(D), computed by
    subtracting the span projection obtained from an exact solve.
    """
    for a in range(D.dim):
        for b in range(a + 1, D.dim):
            u, v = D.basis[a], D.basis[b]
            w = L.bracket(u, v)
            if D.contains(w):
                continue
            A = Matrix([list(x.coeffs) for x in D.basis]).transpose()
            sol = A.solve(list(w.coeffs))
            if sol is None:
                residual = w
            else:
                inside = Vector.zero(L.n)
                for c, x in zip(sol, D.basis):
                    inside = inside + x.scale(c)
                residual = w - inside
            return SubalgebraCheck(False, (u, v), residual)
    return SubalgebraCheck(True)


def restricted_algebra(L: LieAlgebra, D: Distribution) -> LieAlgebra:
    """The bracket of L written in D's canonical basis; requires closure."""
    check = is_subalgebra(L, D)
    if not check.ok:
        raise ValueError("distribution is not a subalgebra")
    m = D.dim
    if m == 0:
        return LieAlgebra.abelian(0)
    A = Matrix([list(v.coeffs) for v in D.basis]).transpose()
    brackets: dict[tuple[int, int], list] = {}
    for i in range(m):
        for j in range(i + 1, m):
            w = L.bracket(D.basis[i], D.basis[j])
            sol = A.solve(list(w.coeffs))
            if sol is None:
                raise ValueError("bracket left the subalgebra despite closure check")
            if any(c != 0 for c in sol):
                brackets[(i, j)] = list(sol)
    return LieAlgebra(m, brackets, default_names(m, "e"))


def is_heisenberg3(L: LieAlgebra) -> bool:
    """Three-dimensional, nilpotent, non-abelian: derived algebra is a central line."""
    if L.n != 3:
        return False
    derived = L.derived_subalgebra()
    return derived.dim == 1 and L.center().contains_distribution(derived)
