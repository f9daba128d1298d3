"""Contact pairs on a Lie algebra: type detection, Reeb vector fields,
characteristic distributions, and the certification of every defining identity.

A pair of 1-forms (α₁, α₂) has type (h, k) when α₁∧(dα₁)^h∧α₂∧(dα₂)^k is a
volume form while (dα₁)^{h+1} and (dα₂)^{k+1} vanish.  All computations are
exact; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .checks import CheckList
from .forms import Form, Vector
from .liealg import Distribution, LieAlgebra, is_subalgebra
from .linalg import Matrix

ZERO = Fraction(0)
ONE = Fraction(1)


class PairError(ValueError):
    """The two 1-forms do not define a contact pair; carries a reason code."""

    def __init__(self, reason: str, message: str) -> None:
        self.reason = reason
        super().__init__(message)


@dataclass(frozen=True)
class ContactPair:
    """A certified contact pair with all derived data.

    Built by :func:`build_contact_pair`; fields are exact and immutable.
    """

    L: LieAlgebra
    alpha1: Form
    alpha2: Form
    h: int
    k: int
    Z1: Vector
    Z2: Vector
    TF1: Distribution
    TF2: Distribution
    TG1: Distribution
    TG2: Distribution

    @property
    def n(self) -> int:
        return self.L.n

    def d_alpha1(self) -> Form:
        return self.L.differential(self.alpha1)

    def d_alpha2(self) -> Form:
        return self.L.differential(self.alpha2)

    def top_wedge(self) -> Form:
        da1, da2 = self.d_alpha1(), self.d_alpha2()
        return (
            self.alpha1.wedge(da1.wedge_power(self.h))
            .wedge(self.alpha2)
            .wedge(da2.wedge_power(self.k))
        )

    def alpha_covectors(self) -> tuple[tuple, tuple]:
        return self.alpha1.covector(), self.alpha2.covector()


def _max_nonzero_power(form: Form) -> int:
    """Largest p with form^p != 0; the 2-forms here are nilpotent so p <= n/2."""
    p = 0
    power = Form.constant(form.n, ONE)
    while True:
        if form.degree * (p + 1) > form.n:
            return p
        nxt = power.wedge(form)
        if nxt.is_zero():
            return p
        power = nxt
        p += 1


def detect_type(L: LieAlgebra, alpha1: Form, alpha2: Form) -> tuple[int, int]:
    """The pair type (h, k), or a :class:`PairError` naming the broken condition."""
    n = L.n
    for name, a in (("alpha1", alpha1), ("alpha2", alpha2)):
        if a.degree != 1 or a.n != n:
            raise PairError("bad_form", f"{name} must be a 1-form on dimension {n}")
    if n % 2 != 0:
        raise PairError("odd_dimension", f"dimension {n} is odd; a type (h,k) pair needs 2h+2k+2")
    da1 = L.differential(alpha1)
    da2 = L.differential(alpha2)
    h = _max_nonzero_power(da1)
    k = _max_nonzero_power(da2)
    if alpha1.wedge(da1.wedge_power(h)).is_zero():
        raise PairError(
            "alpha1_degenerate",
            f"alpha1 ^ (d alpha1)^{h} vanishes although (d alpha1)^{h + 1} = 0",
        )
    if alpha2.wedge(da2.wedge_power(k)).is_zero():
        raise PairError(
            "alpha2_degenerate",
            f"alpha2 ^ (d alpha2)^{k} vanishes although (d alpha2)^{k + 1} = 0",
        )
    if 2 * h + 2 * k + 2 != n:
        raise PairError(
            "type_mismatch",
            f"forced powers give type ({h},{k}) but 2h+2k+2 = {2 * h + 2 * k + 2} != n = {n}",
        )
    top = alpha1.wedge(da1.wedge_power(h)).wedge(alpha2).wedge(da2.wedge_power(k))
    if top.is_zero():
        raise PairError(
            "degenerate_top_form",
            f"alpha1 ^ (d alpha1)^{h} ^ alpha2 ^ (d alpha2)^{k} vanishes",
        )
    return h, k


def _reeb_system(alpha1: Form, alpha2: Form, da1: Form, da2: Form) -> Matrix:
    """Rows: alpha1, alpha2, then the skew matrices of both differentials."""
    n = alpha1.n
    rows = [list(alpha1.covector()), list(alpha2.covector())]
    for da in (da1, da2):
        rows.extend(da.skew_matrix().tolist())
    return Matrix(rows)


def reeb_vector_fields(L: LieAlgebra, alpha1: Form, alpha2: Form) -> tuple[Vector, Vector]:
    """The unique Z₁, Z₂ with αᵢ(Z_j) = δᵢⱼ and i_{Z_j} dαᵢ = 0."""
    n = L.n
    da1 = L.differential(alpha1)
    da2 = L.differential(alpha2)
    A = _reeb_system(alpha1, alpha2, da1, da2)
    if A.rank() != n:
        raise PairError("reeb_not_unique", "Reeb system is underdetermined; pair condition violated")
    out = []
    for which in (0, 1):
        rhs = [ONE if which == 0 else ZERO, ZERO if which == 0 else ONE] + [ZERO] * (2 * n)
        sol = A.solve(rhs)
        if sol is None:
            raise PairError(
                "reeb_inconsistent", "Reeb system is inconsistent; pair condition violated"
            )
        out.append(Vector(sol))
    return out[0], out[1]


def _kernel_of_two_form(form: Form) -> Distribution:
    O = form.skew_matrix()
    return Distribution.from_vectors(form.n, [Vector(v) for v in O.nullspace()])


def _kernel_of_one_form(form: Form) -> Distribution:
    row = Matrix([list(form.covector())])
    return Distribution.from_vectors(form.n, [Vector(v) for v in row.nullspace()])


def characteristic_distributions(
    L: LieAlgebra, alpha1: Form, alpha2: Form
) -> tuple[Distribution, Distribution, Distribution, Distribution]:
    """TFᵢ = ker αᵢ ∩ ker dαᵢ and TGᵢ = ker dαᵢ ∩ ker α₁ ∩ ker α₂."""
    da1 = L.differential(alpha1)
    da2 = L.differential(alpha2)
    ker_a1 = _kernel_of_one_form(alpha1)
    ker_a2 = _kernel_of_one_form(alpha2)
    ker_da1 = _kernel_of_two_form(da1)
    ker_da2 = _kernel_of_two_form(da2)
    TF1 = ker_a1.intersection(ker_da1)
    TF2 = ker_a2.intersection(ker_da2)
    TG1 = ker_da1.intersection(ker_a1).intersection(ker_a2)
    TG2 = ker_da2.intersection(ker_a1).intersection(ker_a2)
    return TF1, TF2, TG1, TG2


def build_contact_pair(L: LieAlgebra, alpha1: Form, alpha2: Form) -> ContactPair:
    """Detect, solve, and assemble; raises :class:`PairError` on any failure."""
    h, k = detect_type(L, alpha1, alpha2)
    Z1, Z2 = reeb_vector_fields(L, alpha1, alpha2)
    TF1, TF2, TG1, TG2 = characteristic_distributions(L, alpha1, alpha2)
    for name, D in (("TF1", TF1), ("TF2", TF2)):
        res = is_subalgebra(L, D)
        if not res.ok:
            raise PairError(
                "not_integrable",
                f"{name} is not bracket-closed; residual {res.residual!r}",
            )
    return ContactPair(L, alpha1, alpha2, h, k, Z1, Z2, TF1, TF2, TG1, TG2)


def _restricted_two_form_rank(form: Form, D: Distribution) -> int:
    if D.dim == 0:
        return 0
    O = form.skew_matrix()
    B = Matrix.from_columns([list(v.coeffs) for v in D.basis])
    return (B.transpose() @ O @ B).rank()


def pair_checks(pair: ContactPair) -> CheckList:
    """Every defining and derived identity of the pair, certified exactly."""
    L, n, h, k = pair.L, pair.n, pair.h, pair.k
    a1, a2 = pair.alpha1, pair.alpha2
    da1, da2 = pair.d_alpha1(), pair.d_alpha2()
    out = CheckList()

    out.add("pair.top_wedge_nonzero", not pair.top_wedge().is_zero(),
            f"alpha1^(d alpha1)^{h}^alpha2^(d alpha2)^{k} is a volume form")
    out.add("pair.d_alpha1_power_vanishes",
            da1.wedge_power(h + 1).is_zero() if 2 * (h + 1) <= n else True,
            f"(d alpha1)^{h + 1} = 0")
    out.add("pair.d_alpha2_power_vanishes",
            da2.wedge_power(k + 1).is_zero() if 2 * (k + 1) <= n else True,
            f"(d alpha2)^{k + 1} = 0")

    for (i, a), (j, Z) in (
        ((1, a1), (1, pair.Z1)), ((1, a1), (2, pair.Z2)),
        ((2, a2), (1, pair.Z1)), ((2, a2), (2, pair.Z2)),
    ):
        want = ONE if i == j else ZERO
        out.add(f"pair.alpha{i}(Z{j})", a.evaluate(Z) == want, f"expected {want}")
    for (i, da), (j, Z) in (
        ((1, da1), (1, pair.Z1)), ((1, da1), (2, pair.Z2)),
        ((2, da2), (1, pair.Z1)), ((2, da2), (2, pair.Z2)),
    ):
        out.add(f"pair.i_Z{j}_d_alpha{i}", da.interior(Z).is_zero(), "contraction vanishes")

    out.add("pair.reeb_unique",
            _reeb_system(a1, a2, da1, da2).rank() == n,
            "defining linear system has a zero-dimensional kernel")

    out.add("pair.dim_TF1", pair.TF1.dim == 2 * k + 1, f"dim TF1 = {pair.TF1.dim}, expected {2 * k + 1}")
    out.add("pair.dim_TF2", pair.TF2.dim == 2 * h + 1, f"dim TF2 = {pair.TF2.dim}, expected {2 * h + 1}")
    out.add("pair.dim_TG1", pair.TG1.dim == 2 * k, f"dim TG1 = {pair.TG1.dim}, expected {2 * k}")
    out.add("pair.dim_TG2", pair.TG2.dim == 2 * h, f"dim TG2 = {pair.TG2.dim}, expected {2 * h}")

    out.add("pair.TF_splitting",
            pair.TF1.intersection(pair.TF2).dim == 0 and pair.TF1.sum(pair.TF2).dim == n,
            "TF1 + TF2 is a direct-sum decomposition of the whole space")
    out.add("pair.TF1_equals_TG1_plus_Z2",
            pair.TG1.sum(Distribution.from_vectors(n, [pair.Z2])) == pair.TF1,
            "TF1 = TG1 + span(Z2)")
    out.add("pair.TF2_equals_TG2_plus_Z1",
            pair.TG2.sum(Distribution.from_vectors(n, [pair.Z1])) == pair.TF2,
            "TF2 = TG2 + span(Z1)")

    for name, D in (("TF1", pair.TF1), ("TF2", pair.TF2)):
        res = is_subalgebra(L, D)
        out.add(f"pair.{name}_integrable", res.ok,
                "bracket-closed" if res.ok else f"residual {res.residual!r}")

    for name, a, da, D in (("alpha1_on_TF1", a1, da1, pair.TF1), ("alpha2_on_TF2", a2, da2, pair.TF2)):
        vanish = all(a.evaluate(v) == 0 for v in D.basis) and _restricted_two_form_rank(da, D) == 0
        out.add(f"pair.{name}_vanishes", vanish, "alpha_i and d alpha_i vanish on TF_i")

    out.add("pair.d_alpha1_symplectic_on_TG2",
            _restricted_two_form_rank(da1, pair.TG2) == pair.TG2.dim,
            "restriction has full rank")
    out.add("pair.d_alpha2_symplectic_on_TG1",
            _restricted_two_form_rank(da2, pair.TG1) == pair.TG1.dim,
            "restriction has full rank")

    closed1 = a1.wedge(da1.wedge_power(h))
    closed2 = a2.wedge(da2.wedge_power(k))
    out.add("pair.alpha1_top_closed",
            closed1.degree >= n or L.differential(closed1).is_zero(),
            f"d(alpha1^(d alpha1)^{h}) = 0")
    out.add("pair.alpha2_top_closed",
            closed2.degree >= n or L.differential(closed2).is_zero(),
            f"d(alpha2^(d alpha2)^{k}) = 0")

    out.add("pair.induced_contact_on_TF1",
            _restricted_top_value(closed2, pair.TF1) != 0,
            "alpha2 restricts to a contact form on the leaves of F1")
    out.add("pair.induced_contact_on_TF2",
            _restricted_top_value(closed1, pair.TF2) != 0,
            "alpha1 restricts to a contact form on the leaves of F2")
    return out


def _restricted_top_value(form: Form, D: Distribution) -> Fraction:
    """Evaluate a degree-(dim D) form on D's canonical basis tuple."""
    if form.degree != D.dim:
        return ZERO
    return form.evaluate(*D.basis)
