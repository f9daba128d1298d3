"""Exterior algebra on a based n-dimensional space with rational coefficients.

A degree-p form is stored sparsely as a map from strictly increasing index
tuples to nonzero rationals.  Evaluation follows the determinant convention:
on a basis monomial it is the determinant of the p x p selection matrix, so

    (a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X)

with no 1/p! factors anywhere.  The geometric pairing constant that relates
2-forms to metrics lives elsewhere (see :mod:`contactpairs.metrics`); the
wedge itself is purely algebraic.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .linalg import Matrix, rat

ZERO = Fraction(0)
ONE = Fraction(1)


class DegreeError(ValueError):
    """Degree out of range for the requested operation."""


class Vector:
    """Element of the frame dual to the coframe, as n exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable) -> None:
        self.coeffs = tuple(rat(x) for x in coeffs)

    @classmethod
    def zero(cls, n: int) -> "Vector":
        return cls([ZERO] * n)

    @classmethod
    def basis(cls, n: int, i: int) -> "Vector":
        return cls([ONE if j == i else ZERO for j in range(n)])

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def __add__(self, other: "Vector") -> "Vector":
        return Vector(a + b for a, b in zip(self.coeffs, other.coeffs, strict=True))

    def __sub__(self, other: "Vector") -> "Vector":
        return Vector(a - b for a, b in zip(self.coeffs, other.coeffs, strict=True))

    def __neg__(self) -> "Vector":
        return self.scale(-1)

    def scale(self, c) -> "Vector":
        c = rat(c)
        return Vector(c * a for a in self.coeffs)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vector) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Vector({[str(c) for c in self.coeffs]})"


def _merge_monomials(a: tuple, b: tuple):
    """Concatenate two increasing tuples; returns (tuple, sign) or None if repeated."""
    if set(a) & set(b):
        return None
    merged = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining len(a) - i entries of a
            sign *= -1 if (len(a) - i) % 2 else 1
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return tuple(merged), sign


class Form:
    """Alternating p-form with sparse rational coefficients on increasing tuples."""

    __slots__ = ("n", "degree", "coeffs")

    def __init__(self, n: int, degree: int, coeffs: Mapping[tuple, object] | None = None) -> None:
        if not 0 <= degree <= n:
            raise DegreeError(f"degree {degree} out of range for dimension {n}")
        self.n = n
        self.degree = degree
        clean: dict[tuple, Fraction] = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise DegreeError(f"monomial {idx} does not have degree {degree}")
            if any(not 0 <= i < n for i in idx) or any(
                idx[a] >= idx[a + 1] for a in range(len(idx) - 1)
            ):
                raise ValueError(f"monomial {idx} is not strictly increasing in range")
            c = rat(c)
            if c != 0:
                clean[idx] = c
        self.coeffs = clean

    @classmethod
    def zero(cls, n: int, degree: int) -> "Form":
        return cls(n, degree, {})

    @classmethod
    def monomial(cls, n: int, idx: Sequence[int], coeff=ONE) -> "Form":
        """Basis monomial with the index tuple sorted into increasing order.

        A repeated index yields the zero form; an odd permutation flips the
        coefficient sign.
        """
        idx = list(idx)
        if len(set(idx)) != len(idx):
            return cls.zero(n, len(idx))
        sign = 1
        for a in range(1, len(idx)):
            b = a
            while b > 0 and idx[b - 1] > idx[b]:
                idx[b - 1], idx[b] = idx[b], idx[b - 1]
                sign = -sign
                b -= 1
        return cls(n, len(idx), {tuple(idx): sign * rat(coeff)})

    @classmethod
    def basis_one_form(cls, n: int, i: int) -> "Form":
        return cls.monomial(n, (i,))

    @classmethod
    def constant(cls, n: int, value) -> "Form":
        return cls(n, 0, {(): value})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Form)
            and self.n == other.n
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.n, self.degree, tuple(sorted(self.coeffs.items()))))

    def __repr__(self) -> str:
        return f"Form(n={self.n}, degree={self.degree}, {self.coeffs!r})"

    def _check_compatible(self, other: "Form") -> None:
        if self.n != other.n:
            raise DegreeError("forms live on spaces of different dimension")
        if self.degree != other.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "Form") -> "Form":
        self._check_compatible(other)
        coeffs = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            coeffs[idx] = coeffs.get(idx, ZERO) + c
        return Form(self.n, self.degree, coeffs)

    def __sub__(self, other: "Form") -> "Form":
        return self + other.scale(-1)

    def __neg__(self) -> "Form":
        return self.scale(-1)

    def scale(self, c) -> "Form":
        c = rat(c)
        return Form(self.n, self.degree, {idx: c * v for idx, v in self.coeffs.items()})

    def wedge(self, other: "Form") -> "Form":
        if self.n != other.n:
            raise DegreeError("forms live on spaces of different dimension")
        deg = self.degree + other.degree
        if deg > self.n:
            raise DegreeError(
                f"wedge of degrees {self.degree} and {other.degree} exceeds dimension {self.n}"
            )
        coeffs: dict[tuple, Fraction] = {}
        for ia, ca in self.coeffs.items():
            for ib, cb in other.coeffs.items():
                merged = _merge_monomials(ia, ib)
                if merged is None:
                    continue
                idx, sign = merged
                coeffs[idx] = coeffs.get(idx, ZERO) + sign * ca * cb
        return Form(self.n, deg, coeffs)

    def wedge_power(self, p: int) -> "Form":
        """p-fold wedge of a form with itself; p = 0 gives the constant 1."""
        if p < 0:
            raise DegreeError("negative wedge power")
        result = Form.constant(self.n, ONE)
        for _ in range(p):
            result = result.wedge(self)
        return result

    def interior(self, v: Vector) -> "Form":
        """Contraction: (i_v a)(w2, ..., wp) = a(v, w2, ..., wp)."""
        if self.degree == 0:
            raise DegreeError("interior product of a degree-0 form")
        if v.n != self.n:
            raise DegreeError("vector dimension does not match form")
        coeffs: dict[tuple, Fraction] = {}
        for idx, c in self.coeffs.items():
            for a, i in enumerate(idx):
                if v[i] == 0:
                    continue
                rest = idx[:a] + idx[a + 1 :]
                sign = -1 if a % 2 else 1
                coeffs[rest] = coeffs.get(rest, ZERO) + sign * v[i] * c
        return Form(self.n, self.degree - 1, coeffs)

    def evaluate(self, *vectors: Vector) -> Fraction:
        """Multilinear alternating evaluation; determinant convention on monomials."""
        if len(vectors) != self.degree:
            raise DegreeError(
                f"degree-{self.degree} form evaluated on {len(vectors)} vectors"
            )
        total = ZERO
        for idx, c in self.coeffs.items():
            sel = Matrix([[v[i] for v in vectors] for i in idx]) if idx else None
            total += c * (sel.det() if sel is not None else ONE)
        return total

    def skew_matrix(self) -> Matrix:
        """For a 2-form, the skew matrix O with O[i][j] = value on (X_i, X_j)."""
        if self.degree != 2:
            raise DegreeError("skew matrix only defined for 2-forms")
        m = [[ZERO] * self.n for _ in range(self.n)]
        for (i, j), c in self.coeffs.items():
            m[i][j] = c
            m[j][i] = -c
        return Matrix(m)

    def covector(self) -> tuple:
        """For a 1-form, its n coefficients as a tuple."""
        if self.degree != 1:
            raise DegreeError("covector only defined for 1-forms")
        return tuple(self.coeffs.get((i,), ZERO) for i in range(self.n))

    def render(self, names: Sequence[str]) -> str:
        """Canonical text: monomials ordered lexicographically, e.g. 'w3^w4 + 1/2 w5^w6'."""
        if not self.coeffs:
            return "0"
        if self.degree == 0:
            return str(self.coeffs[()])
        parts = []
        for idx in sorted(self.coeffs):
            c = self.coeffs[idx]
            mono = "^".join(names[i] for i in idx)
            mag = abs(c)
            body = mono if mag == 1 else f"{mag} {mono}"
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def one_form_from_covector(n: int, coeffs: Sequence) -> Form:
    return Form(n, 1, {(i,): c for i, c in enumerate(coeffs)})


def all_monomials(n: int, degree: int):
    return combinations(range(n), degree)
