"""Riemannian layer: Levi-Civita connection, second fundamental form, mean
curvature, the Rummler closedness criterion, and the volume-element identity.

Everything is exact rational.  Square roots are avoided throughout: mean
curvature uses an orthogonal (not orthonormal) basis with exact squared
norms, and characteristic forms carry their normalization as a squared
scale factor that is only resolved when it happens to be a perfect square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .checks import Check, CheckList
from .forms import Form, Vector
from .liealg import Distribution, LieAlgebra
from .linalg import Matrix
from .metrics import McpCertificate, MetricTensor
from .pairs import ContactPair

ZERO = Fraction(0)
ONE = Fraction(1)


class LeviCivitaError(ValueError):
    """Levi-Civita construction failed an exact identity it must satisfy."""


class Connection:
    """Levi-Civita coefficients: ∇_{Xᵢ}Xⱼ = Σ_k Γ^k_{ij} X_k, exact."""

    __slots__ = ("L", "g", "gamma")

    def __init__(self, L: LieAlgebra, g: MetricTensor, gamma: tuple[tuple[Vector, ...], ...]) -> None:
        self.L = L
        self.g = g
        self.gamma = gamma

    def nabla_basis(self, i: int, j: int) -> Vector:
        return self.gamma[i][j]

    def nabla(self, u: Vector, v: Vector) -> Vector:
        """Bilinear extension; constant coefficients make this tensorial."""
        out = Vector.zero(self.L.n)
        for i, ci in enumerate(u.coeffs):
            if ci == 0:
                continue
            for j, cj in enumerate(v.coeffs):
                if cj == 0:
                    continue
                out = out + self.gamma[i][j].scale(ci * cj)
        return out


def levi_civita(L: LieAlgebra, g: MetricTensor) -> Connection:
    """Koszul formula: 2g(∇_{Xᵢ}Xⱼ, X_l) = g([Xᵢ,Xⱼ],X_l) − g([Xⱼ,X_l],Xᵢ) + g([X_l,Xᵢ],Xⱼ).

    Torsion-freeness and metric compatibility are asserted at construction.
    """
    n = L.n
    basis = [Vector.basis(n, i) for i in range(n)]
    inv = g.G.inverse()
    gamma_rows = []
    for i in range(n):
        row = []
        for j in range(n):
            rhs = []
            for l in range(n):
                val = (
                    g.inner(L.bracket_basis(i, j), basis[l])
                    - g.inner(L.bracket_basis(j, l), basis[i])
                    + g.inner(L.bracket_basis(l, i), basis[j])
                )
                rhs.append(val / 2)
            row.append(Vector(inv.apply(rhs)))
        gamma_rows.append(tuple(row))
    conn = Connection(L, g, tuple(gamma_rows))
    for c in connection_checks(conn).checks:
        if not c.ok:
            raise LeviCivitaError(f"{c.name}: {c.detail}")
    return conn


def connection_checks(conn: Connection) -> CheckList:
    """Torsion-free and metric-compatible, as exact identities over the basis."""
    L, g = conn.L, conn.g
    n = L.n
    out = CheckList()
    torsion_ok = True
    witness = ""
    for i in range(n):
        for j in range(i + 1, n):
            diff = conn.nabla_basis(i, j) - conn.nabla_basis(j, i)
            if diff != L.bracket_basis(i, j):
                torsion_ok = False
                witness = f"pair (X{i + 1}, X{j + 1})"
                break
        if not torsion_ok:
            break
    out.add("connection.torsion_free", torsion_ok, witness or "antisymmetrization gives the brackets")
    compat_ok = True
    witness = ""
    basis = [Vector.basis(n, i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            for l in range(n):
                s = g.inner(conn.nabla_basis(i, j), basis[l]) + g.inner(basis[j], conn.nabla_basis(i, l))
                if s != 0:
                    compat_ok = False
                    witness = f"triple (X{i + 1}, X{j + 1}, X{l + 1})"
                    break
            if not compat_ok:
                break
        if not compat_ok:
            break
    out.add("connection.metric_compatible", compat_ok, witness or "nabla g = 0")
    return out


def _orthogonal_basis(g: MetricTensor, D: Distribution) -> list[Vector]:
    """Exact Gram-Schmidt without normalization; keeps everything rational."""
    out: list[Vector] = []
    for b in D.basis:
        w = b
        for o in out:
            w = w - o.scale(g.inner(b, o) / g.norm_sq(o))
        out.append(w)
    return out


def _normal_projection(g: MetricTensor, D: Distribution, w: Vector) -> Vector:
    """Component of w orthogonal to span(D), via exact normal equations."""
    if D.dim == 0:
        return w
    B = Matrix.from_columns([list(v.coeffs) for v in D.basis])
    gram = B.transpose() @ g.G @ B
    rhs = (B.transpose() @ g.G).apply(w.coeffs)
    x = gram.solve(list(rhs))
    if x is None:
        raise ValueError("Gram matrix singular; distribution basis dependent")
    tangent = Vector.zero(w.n)
    for c, v in zip(x, D.basis):
        tangent = tangent + v.scale(c)
    return w - tangent


def second_fundamental_form(
    conn: Connection, D: Distribution
) -> dict[tuple[int, int], Vector]:
    """II(bᵢ, bⱼ) = normal component of ∇_{bᵢ}bⱼ over the canonical D basis."""
    g = conn.g
    out = {}
    for i, u in enumerate(D.basis):
        for j, v in enumerate(D.basis):
            out[(i, j)] = _normal_projection(g, D, conn.nabla(u, v))
    return out


def totally_geodesic_check(conn: Connection, D: Distribution) -> tuple[bool, tuple[int, int] | None]:
    ii = second_fundamental_form(conn, D)
    for (i, j), val in sorted(ii.items()):
        if not val.is_zero():
            return False, (i, j)
    return True, None


def mean_curvature(conn: Connection, D: Distribution) -> Vector:
    """H = Σᵢ II(oᵢ, oᵢ)/|oᵢ|² over an exact g-orthogonal basis of D."""
    g = conn.g
    n = conn.L.n
    H = Vector.zero(n)
    for o in _orthogonal_basis(g, D):
        ii = _normal_projection(g, D, conn.nabla(o, o))
        H = H + ii.scale(ONE / g.norm_sq(o))
    return H


@dataclass(frozen=True)
class ScaledForm:
    """base · sqrt(scale_sq): an exact form up to a positive square-root factor.

    Closedness and vanishing statements about the scaled form are decided on
    ``base`` alone since the factor is a nonzero constant.
    """

    base: Form
    scale_sq: Fraction

    def exact_form(self) -> Form | None:
        """The scaled form as an exact Form when scale_sq is a perfect square."""
        num, den = self.scale_sq.numerator, self.scale_sq.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn != num or rd * rd != den:
            return None
        return self.base.scale(Fraction(rn, rd))

    def coefficient_sq(self, idx: tuple) -> Fraction:
        c = self.base.coeffs.get(tuple(idx), ZERO)
        return c * c * self.scale_sq


def characteristic_form(g: MetricTensor, D: Distribution) -> ScaledForm:
    """The p-form vanishing on D-orthogonal vectors and giving leafwise volume.

    Built as the wedge of the g-duals of an exact orthogonal basis, scaled by
    1/sqrt(∏|oᵢ|²); sign is canonical: positive on the canonical basis tuple.
    """
    n = g.n
    ortho = _orthogonal_basis(g, D)
    base = Form.constant(n, ONE)
    norm_prod = ONE
    for o in ortho:
        base = base.wedge(Form(n, 1, {(i,): c for i, c in enumerate(g.dual_covector(o)) if c != 0}))
        norm_prod *= g.norm_sq(o)
    return ScaledForm(base, ONE / norm_prod)


def rummler_minimal(L: LieAlgebra, D: Distribution, chi: ScaledForm | Form) -> tuple[bool, int | None]:
    """Closedness of the characteristic form in leaf directions.

    True iff dχ(b₁, ..., b_p, X_j) = 0 for the canonical D basis and every
    frame vector X_j; the witness is the first failing frame index.
    """
    base = chi.base if isinstance(chi, ScaledForm) else chi
    p = D.dim
    if base.degree != p:
        raise ValueError("characteristic form degree does not match distribution")
    if p >= L.n:
        return True, None
    dchi = L.differential(base)
    for j in range(L.n):
        val = dchi.evaluate(*D.basis, Vector.basis(L.n, j))
        if val != 0:
            return False, j
    return True, None


@dataclass
class FoliationReport:
    """Minimality data for one distribution under one metric."""

    name: str
    dim: int
    mean_curvature: Vector
    minimal: bool
    totally_geodesic: bool
    tg_witness: tuple[int, int] | None
    rummler_minimal: bool
    rummler_witness: int | None
    characteristic: ScaledForm
    oracles_agree: bool


def foliation_report(conn: Connection, D: Distribution, name: str) -> FoliationReport:
    """Both minimality oracles plus the totally-geodesic verdict for D."""
    H = mean_curvature(conn, D)
    minimal = H.is_zero()
    tg, tg_wit = totally_geodesic_check(conn, D)
    chi = characteristic_form(conn.g, D)
    rm, rm_wit = rummler_minimal(conn.L, D, chi)
    return FoliationReport(
        name=name,
        dim=D.dim,
        mean_curvature=H,
        minimal=minimal,
        totally_geodesic=tg,
        tg_witness=tg_wit,
        rummler_minimal=rm,
        rummler_witness=rm_wit,
        characteristic=chi,
        oracles_agree=(minimal == rm),
    )


class VolumeError(ValueError):
    """Volume identity requested outside its hypotheses."""


@dataclass
class VolumeIdentity:
    """Both sides of the volume-element comparison, squared to stay rational.

    lhs_sq = det G is the squared Riemannian volume coefficient; rhs_coeff is
    ((−1)^{h+k} / (2^{h+k} h! k!)) times the top-wedge coefficient.  Equality
    is asserted up to orientation via rhs_coeff² = lhs_sq.
    """

    lhs_sq: Fraction
    rhs_coeff: Fraction
    constant: Fraction
    ok: bool


def volume_identity(pair: ContactPair, g: MetricTensor, certificate: McpCertificate) -> VolumeIdentity:
    """dV = ((−1)^{h+k}/(2^{h+k} h! k!))·α₁∧(dα₁)^h∧α₂∧(dα₂)^k, up to sign."""
    if not certificate.decomposable:
        raise VolumeError("volume identity requires a decomposable structure tensor")
    h, k, n = pair.h, pair.k, pair.n
    det_g = g.G.det()
    constant = Fraction((-1) ** (h + k), (2 ** (h + k)) * math.factorial(h) * math.factorial(k))
    top = pair.top_wedge()
    coeff = top.coeffs.get(tuple(range(n)), ZERO)
    rhs = constant * coeff
    return VolumeIdentity(lhs_sq=det_g, rhs_coeff=rhs, constant=constant, ok=(rhs * rhs == det_g))
