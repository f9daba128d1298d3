"""Metrics and the structure tensor of a contact pair.

Exact layer: given a rational metric g, the endomorphism φ is pinned by
g(X, φY) = κ·(dα₁ + dα₂)(X, Y), i.e. P = G⁻¹(κΩ) with Ω the skew matrix of
dα₁ + dα₂ under the determinant evaluation convention.  All certificate
identities (structure tensor, compatibility, associated, decomposability,
orthogonality) are checked bit-exactly.

Float layer: polarization builds an associated metric from any positive
definite seed, and φ-bases are produced by Gram-Schmidt.  Square roots make
these float-only; outputs are certified a posteriori against a tolerance.

κ defaults to ½, which reproduces the classical contact-metric conventions;
with κ = 1 the six-dimensional nilpotent example stops being associated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .checks import Check, CheckList
from .forms import Form, Vector
from .liealg import Distribution, LieAlgebra
from .linalg import LinAlgError, Matrix
from .pairs import ContactPair

DEFAULT_KAPPA = Fraction(1, 2)
DEFAULT_TOL = 1e-9
SQRT_THRESHOLD = 1e-13
SQRT_MAX_ITER = 200

ZERO = Fraction(0)
ONE = Fraction(1)


class MetricError(ValueError):
    """Not symmetric or not positive definite."""


class PolarizationError(RuntimeError):
    """Iterative square root failed to converge or a restriction degenerated."""


class BasisError(RuntimeError):
    """Near-dependence during Gram-Schmidt in float mode."""


class MetricTensor:
    """Symmetric positive definite rational matrix, certified at construction."""

    __slots__ = ("G",)

    def __init__(self, G: Matrix) -> None:
        if G.rows != G.cols:
            raise MetricError("metric matrix must be square")
        if G != G.transpose():
            raise MetricError("metric matrix must be exactly symmetric")
        if not G.is_positive_definite():
            raise MetricError("metric matrix is not positive definite (leading principal minors)")
        self.G = G

    @classmethod
    def from_diagonal(cls, values) -> "MetricTensor":
        return cls(Matrix.diagonal(values))

    @property
    def n(self) -> int:
        return self.G.rows

    def inner(self, u: Vector, v: Vector) -> Fraction:
        gu = self.G.apply(u.coeffs)
        return sum((a * b for a, b in zip(gu, v.coeffs)), ZERO)

    def norm_sq(self, v: Vector) -> Fraction:
        return self.inner(v, v)

    def dual_covector(self, v: Vector) -> tuple:
        return self.G.apply(v.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, MetricTensor) and self.G == other.G

    def __hash__(self):
        return hash(self.G)

    def __repr__(self) -> str:
        return f"MetricTensor({self.G.tolist()!r})"


class PhiTensor:
    """Endomorphism acting on frame vectors by its matrix P."""

    __slots__ = ("P",)

    def __init__(self, P: Matrix) -> None:
        if P.rows != P.cols:
            raise ValueError("phi matrix must be square")
        self.P = P

    @property
    def n(self) -> int:
        return self.P.rows

    def apply(self, v: Vector) -> Vector:
        return Vector(self.P.apply(v.coeffs))

    def rank(self) -> int:
        return self.P.rank()

    def __eq__(self, other) -> bool:
        return isinstance(other, PhiTensor) and self.P == other.P

    def __hash__(self):
        return hash(self.P)

    def __repr__(self) -> str:
        return f"PhiTensor({self.P.tolist()!r})"


def pairing_form(pair: ContactPair) -> Form:
    return pair.d_alpha1() + pair.d_alpha2()


def pairing_skew_matrix(pair: ContactPair) -> Matrix:
    return pairing_form(pair).skew_matrix()


def phi_from_metric(pair: ContactPair, g: MetricTensor, kappa: Fraction = DEFAULT_KAPPA) -> PhiTensor:
    """The unique P with g(X, PY) = κ(dα₁+dα₂)(X,Y): P = G⁻¹(κΩ)."""
    omega = pairing_skew_matrix(pair)
    try:
        inv = g.G.inverse()
    except LinAlgError as e:
        raise MetricError("metric matrix is singular") from e
    return PhiTensor(inv @ omega.scale(kappa))


def _outer(u: Vector, w) -> Matrix:
    return Matrix([[u[i] * w[j] for j in range(len(w))] for i in range(u.n)])


def structure_tensor_checks(pair: ContactPair, phi: PhiTensor) -> CheckList:
    """Eq-level identities φ² = −Id + α₁⊗Z₁ + α₂⊗Z₂, φZᵢ = 0, αᵢ∘φ = 0, rank n−2."""
    n = pair.n
    a1, a2 = pair.alpha_covectors()
    P = phi.P
    out = CheckList()
    want = Matrix.identity(n).scale(-1) + _outer(pair.Z1, a1) + _outer(pair.Z2, a2)
    sq = P @ P
    witness = ""
    if sq != want:
        bad = next(
            (i, j) for i in range(n) for j in range(n) if sq[i, j] != want[i, j]
        )
        witness = f"entry {bad} differs: {sq[bad]} vs {want[bad]}"
    out.add("phi.square_identity", sq == want,
            witness or "phi^2 = -Id + alpha1 (x) Z1 + alpha2 (x) Z2")
    out.add("phi.kills_Z1", phi.apply(pair.Z1).is_zero(), "phi(Z1) = 0")
    out.add("phi.kills_Z2", phi.apply(pair.Z2).is_zero(), "phi(Z2) = 0")
    for idx, a in ((1, a1), (2, a2)):
        composed = tuple(
            sum((a[i] * P[i, j] for i in range(n)), ZERO) for j in range(n)
        )
        out.add(f"phi.alpha{idx}_circ_phi", all(c == 0 for c in composed),
                f"alpha{idx} o phi = 0")
    out.add("phi.rank", phi.rank() == n - 2, f"rank {phi.rank()}, expected {n - 2}")
    return out


def is_structure_tensor(pair: ContactPair, phi: PhiTensor) -> bool:
    return structure_tensor_checks(pair, phi).all_ok()


def compatibility_check(pair: ContactPair, g: MetricTensor, phi: PhiTensor) -> Check:
    """g(φX, φY) = g(X, Y) − α₁(X)α₁(Y) − α₂(X)α₂(Y) as exact matrices."""
    a1, a2 = pair.alpha_covectors()
    a1v, a2v = Vector(a1), Vector(a2)
    lhs = phi.P.transpose() @ g.G @ phi.P
    rhs = g.G - _outer(a1v, a1) - _outer(a2v, a2)
    if lhs == rhs:
        return Check("metric.compatible", True, "phi^T G phi = G - a1 a1^T - a2 a2^T")
    n = pair.n
    bad = next((i, j) for i in range(n) for j in range(n) if lhs[i, j] != rhs[i, j])
    return Check("metric.compatible", False,
                 f"entry {bad} differs: {lhs[bad]} vs {rhs[bad]}")


def reeb_duality_check(pair: ContactPair, g: MetricTensor) -> Check:
    """g(X, Zᵢ) = αᵢ(X), i.e. G·Zᵢ equals the covector of αᵢ."""
    a1, a2 = pair.alpha_covectors()
    ok1 = g.G.apply(pair.Z1.coeffs) == tuple(a1)
    ok2 = g.G.apply(pair.Z2.coeffs) == tuple(a2)
    detail = "G Z_i = alpha_i for i = 1, 2" if ok1 and ok2 else (
        f"G Z1 {'=' if ok1 else '!='} alpha1; G Z2 {'=' if ok2 else '!='} alpha2"
    )
    return Check("metric.reeb_duality", ok1 and ok2, detail)


def decomposability_check(
    pair: ContactPair, phi: PhiTensor, assert_tg_equality: bool = False
) -> Check:
    """φ(TFᵢ) ⊆ TFᵢ; for a certified structure tensor also φ(TGᵢ) = TGᵢ."""
    for name, D in (("TF1", pair.TF1), ("TF2", pair.TF2)):
        for v in D.basis:
            image = phi.apply(v)
            if not D.contains(image):
                return Check(
                    "phi.decomposable", False,
                    f"phi({_render_witness(v)}) leaves {name}",
                )
    if assert_tg_equality:
        for name, D in (("TG1", pair.TG1), ("TG2", pair.TG2)):
            image = Distribution.from_vectors(pair.n, [phi.apply(v) for v in D.basis])
            if image != D:
                return Check("phi.decomposable", False, f"phi({name}) != {name}")
    return Check("phi.decomposable", True, "phi preserves TF1 and TF2")


def _render_witness(v: Vector) -> str:
    terms = [f"{c}*X{i + 1}" for i, c in enumerate(v.coeffs) if c != 0]
    return " + ".join(terms) if terms else "0"


def orthogonality_check(g: MetricTensor, TF1: Distribution, TF2: Distribution) -> Check:
    """uᵀ G v = 0 over all canonical basis pairs of the two distributions."""
    for i, u in enumerate(TF1.basis):
        for j, v in enumerate(TF2.basis):
            val = g.inner(u, v)
            if val != 0:
                return Check(
                    "metric.orthogonal_foliations", False,
                    f"g({_render_witness(u)}, {_render_witness(v)}) = {val}",
                )
    return Check("metric.orthogonal_foliations", True, "TF1 and TF2 are g-orthogonal")


@dataclass
class McpCertificate:
    """Verdicts for one (pair, metric, κ) triple, with per-identity details."""

    kappa: Fraction
    compatible: bool
    associated: bool
    decomposable: bool
    orthogonal_foliations: bool
    checks: CheckList

    def all_flags(self) -> dict[str, bool]:
        return {
            "compatible": self.compatible,
            "associated": self.associated,
            "decomposable": self.decomposable,
            "orthogonal_foliations": self.orthogonal_foliations,
        }


def check_associated(
    pair: ContactPair,
    g: MetricTensor,
    kappa: Fraction = DEFAULT_KAPPA,
    declared_phi: PhiTensor | None = None,
) -> tuple[PhiTensor, McpCertificate]:
    """Derive φ from (g, κ) and fill the full certificate.

    associated = Reeb duality + derived φ is a structure tensor.  The pairing
    identity g(X, φY) = κ(dα₁+dα₂)(X, Y) holds by construction of φ, so it is
    not a separate verdict.  The equivalence cross-check (decomposable iff
    orthogonal, given associated) is recorded as its own check.
    """
    checks = CheckList()
    phi = phi_from_metric(pair, g, kappa)
    duality = reeb_duality_check(pair, g)
    checks.checks.append(duality)
    st = structure_tensor_checks(pair, phi)
    checks.extend(st)
    compat = compatibility_check(pair, g, phi)
    checks.checks.append(compat)
    associated = duality.ok and st.all_ok()
    checks.add("metric.associated", associated,
               "g(X, phi Y) = kappa (d alpha1 + d alpha2)(X, Y) with valid phi"
               if associated else "Reeb duality or structure tensor identity failed")
    decomp = decomposability_check(pair, phi, assert_tg_equality=st.all_ok())
    checks.checks.append(decomp)
    orth = orthogonality_check(g, pair.TF1, pair.TF2)
    checks.checks.append(orth)
    if associated:
        checks.add("metric.decomposable_iff_orthogonal",
                   decomp.ok == orth.ok,
                   f"decomposable = {decomp.ok}, orthogonal = {orth.ok}")
    if declared_phi is not None:
        checks.add("phi.matches_metric_derived", declared_phi == phi,
                   "declared phi equals G^-1 (kappa Omega)" if declared_phi == phi
                   else "declared phi differs from the metric-derived endomorphism")
    return phi, McpCertificate(
        kappa=kappa,
        compatible=compat.ok,
        associated=associated,
        decomposable=decomp.ok,
        orthogonal_foliations=orth.ok,
        checks=checks,
    )


# --- float layer -----------------------------------------------------------


def matrix_to_float(m: Matrix) -> np.ndarray:
    return np.array([[float(x) for x in m.row(i)] for i in range(m.rows)], dtype=float)


def vector_to_float(v: Vector) -> np.ndarray:
    return np.array([float(x) for x in v.coeffs], dtype=float)


def sqrtm_spd(M: np.ndarray, threshold: float = SQRT_THRESHOLD, max_iter: int = SQRT_MAX_ITER) -> np.ndarray:
    """Denman-Beavers square root of a symmetric positive definite matrix."""
    Y = M.copy()
    Z = np.eye(M.shape[0])
    for _ in range(max_iter):
        try:
            Y_next = 0.5 * (Y + np.linalg.inv(Z))
            Z_next = 0.5 * (Z + np.linalg.inv(Y))
        except np.linalg.LinAlgError as e:
            raise PolarizationError("square root iteration hit a singular iterate; input is not positive definite") from e
        delta = float(np.max(np.abs(Y_next - Y)))
        Y, Z = Y_next, Z_next
        if delta < threshold:
            return Y
    raise PolarizationError(
        f"square root iteration did not reach {threshold} within {max_iter} steps"
    )


@dataclass
class AssociateResult:
    """Float-mode associated metric and structure tensor with residuals.

    ``residuals`` holds the max-abs violation of every certificate identity;
    ``volume_coefficient`` is sqrt(det G), for cross-metric volume comparison.
    """

    G: np.ndarray
    P: np.ndarray
    kappa: Fraction
    residuals: dict[str, float]
    volume_coefficient: float

    def max_residual(self) -> float:
        return max(self.residuals.values())


def _float_basis_matrix(vectors) -> np.ndarray:
    return np.column_stack([vector_to_float(v) for v in vectors])


def build_associated_metric(
    pair: ContactPair,
    seed: MetricTensor,
    kappa: Fraction = DEFAULT_KAPPA,
    threshold: float = SQRT_THRESHOLD,
    max_iter: int = SQRT_MAX_ITER,
) -> AssociateResult:
    """Polarization on each TGᵢ with the symplectic form dα_j (j ≠ i).

    In a seed-orthonormal frame C of TGᵢ the form becomes a skew matrix Ω̂;
    S = sqrt(−Ω̂²) is the positive part of its polar decomposition and
    J = Ω̂ S⁻¹ the compatible complex structure.  The output metric block is
    κS in that frame, which is exactly the scaling making g(u, Jv) = κΩ̂(u, v),
    and g is extended by g(Zᵢ, ·) = αᵢ.  Returns float tensors plus residuals.
    """
    if kappa <= 0:
        raise MetricError("kappa must be positive")
    n = pair.n
    seed_f = matrix_to_float(seed.G)
    omega1 = matrix_to_float(pair.d_alpha1().skew_matrix())
    omega2 = matrix_to_float(pair.d_alpha2().skew_matrix())
    kf = float(kappa)

    blocks = []  # (C columns, metric block, J block)
    for D, omega_f in ((pair.TG1, omega2), (pair.TG2, omega1)):
        if D.dim == 0:
            blocks.append((np.zeros((n, 0)), np.zeros((0, 0)), np.zeros((0, 0))))
            continue
        B = _float_basis_matrix(D.basis)
        S_seed = B.T @ seed_f @ B
        try:
            L = np.linalg.cholesky(S_seed)
        except np.linalg.LinAlgError as e:
            raise PolarizationError("seed metric restriction is not positive definite") from e
        C = B @ np.linalg.inv(L).T
        omega_hat = C.T @ omega_f @ C
        if abs(np.linalg.det(omega_hat)) < 1e-12:
            raise PolarizationError("pairing form restriction to TG is degenerate")
        S = sqrtm_spd(-omega_hat @ omega_hat, threshold, max_iter)
        J = omega_hat @ np.linalg.inv(S)
        blocks.append((C, kf * S, J))

    (C1, G1, J1), (C2, G2, J2) = blocks
    Z1f, Z2f = vector_to_float(pair.Z1), vector_to_float(pair.Z2)
    B_total = np.column_stack([C1, C2, Z1f, Z2f])
    m1, m2 = G1.shape[0], G2.shape[0]
    G_hat = np.zeros((n, n))
    G_hat[:m1, :m1] = G1
    G_hat[m1 : m1 + m2, m1 : m1 + m2] = G2
    G_hat[m1 + m2 :, m1 + m2 :] = np.eye(2)
    J_hat = np.zeros((n, n))
    J_hat[:m1, :m1] = J1
    J_hat[m1 : m1 + m2, m1 : m1 + m2] = J2

    B_inv = np.linalg.inv(B_total)
    G = B_inv.T @ G_hat @ B_inv
    G = 0.5 * (G + G.T)
    P = B_total @ J_hat @ B_inv

    residuals = associated_residuals(pair, G, P, kappa)
    vol = float(np.sqrt(abs(np.linalg.det(G))))
    return AssociateResult(G=G, P=P, kappa=kappa, residuals=residuals, volume_coefficient=vol)


def associated_residuals(pair: ContactPair, G: np.ndarray, P: np.ndarray, kappa: Fraction) -> dict[str, float]:
    """Max-abs violations of every certificate identity, in float."""
    n = pair.n
    a1 = np.array([float(c) for c in pair.alpha1.covector()])
    a2 = np.array([float(c) for c in pair.alpha2.covector()])
    Z1f, Z2f = vector_to_float(pair.Z1), vector_to_float(pair.Z2)
    omega = matrix_to_float(pairing_skew_matrix(pair))
    kf = float(kappa)

    def mx(a) -> float:
        return float(np.max(np.abs(a))) if np.size(a) else 0.0

    res = {
        "symmetry": mx(G - G.T),
        "reeb_duality": max(mx(G @ Z1f - a1), mx(G @ Z2f - a2)),
        "pairing": mx(G @ P - kf * omega),
        "structure_tensor": mx(P @ P + np.eye(n) - np.outer(Z1f, a1) - np.outer(Z2f, a2)),
        "phi_kills_reeb": max(mx(P @ Z1f), mx(P @ Z2f)),
        "compatibility": mx(P.T @ G @ P - (G - np.outer(a1, a1) - np.outer(a2, a2))),
        "positive_definite": max(0.0, -float(np.min(np.linalg.eigvalsh(G)))),
    }
    decomp = 0.0
    orth = 0.0
    for D_self, D_other in ((pair.TF1, pair.TF2), (pair.TF2, pair.TF1)):
        if D_self.dim == 0 or D_other.dim == 0:
            continue
        Bs = _float_basis_matrix(D_self.basis)
        Bo = _float_basis_matrix(D_other.basis)
        images = P @ Bs
        # component outside span(D_self) via least squares projection
        coeffs, *_ = np.linalg.lstsq(Bs, images, rcond=None)
        decomp = max(decomp, mx(images - Bs @ coeffs))
        orth = max(orth, mx(Bs.T @ G @ Bo))
    res["decomposable"] = decomp
    res["orthogonal_foliations"] = orth
    return res


@dataclass
class PhiBasis:
    """Orthonormal frame adapted to φ, produced in float mode."""

    vectors: list[np.ndarray]
    labels: list[str]
    grouped: bool
    gram_residual: float
    block_residual: float


def phi_basis(
    pair: ContactPair,
    g: MetricTensor,
    phi: PhiTensor,
    tol: float = DEFAULT_TOL,
) -> PhiBasis:
    """{Z₁, X₁, φX₁, ..., Z₂, Y₁, φY₁, ...} by iterated orthogonal complements.

    The Xs are drawn from TG₂ and the Ys from TG₁ when φ is decomposable, so
    each block spans its TFᵢ; otherwise the pairs are drawn from TG₁ + TG₂
    combined and only {Z₁, Z₂} lead the list.  Starting vectors are the first
    canonical TG basis vectors not yet spanned, so output is deterministic.
    """
    n = pair.n
    Gf = matrix_to_float(g.G)
    Pf = matrix_to_float(phi.P)
    grouped = decomposability_check(pair, phi).ok

    def gdot(u, v) -> float:
        return float(u @ Gf @ v)

    def extend_with_pairs(block: list[np.ndarray], candidates: list[np.ndarray], pairs: int) -> None:
        for _ in range(pairs):
            u = None
            for cand in candidates:
                w = cand.copy()
                for b in block:
                    w = w - gdot(w, b) * b
                if gdot(w, w) > tol:
                    u = w
                    break
            if u is None:
                raise BasisError("no independent candidate left during Gram-Schmidt")
            norm = np.sqrt(gdot(u, u))
            if norm < tol:
                raise BasisError("near-dependent vector during Gram-Schmidt")
            u = u / norm
            v = Pf @ u
            vnorm = np.sqrt(gdot(v, v))
            if vnorm < tol:
                raise BasisError("phi image degenerated during basis construction")
            block.append(u)
            block.append(v / vnorm)

    Z1f, Z2f = vector_to_float(pair.Z1), vector_to_float(pair.Z2)
    tg1 = [vector_to_float(v) for v in pair.TG1.basis]
    tg2 = [vector_to_float(v) for v in pair.TG2.basis]
    vectors: list[np.ndarray] = []
    labels: list[str] = []
    if grouped:
        block1 = [Z1f / np.sqrt(gdot(Z1f, Z1f))]
        extend_with_pairs(block1, tg2, pair.h)
        block2 = [Z2f / np.sqrt(gdot(Z2f, Z2f))]
        extend_with_pairs(block2, tg1, pair.k)
        vectors = block1 + block2
        labels = (
            ["Z1"] + [f"{'X' if i % 2 == 0 else 'phi X'}{i // 2 + 1}" for i in range(2 * pair.h)]
            + ["Z2"] + [f"{'Y' if i % 2 == 0 else 'phi Y'}{i // 2 + 1}" for i in range(2 * pair.k)]
        )
    else:
        vectors = [Z1f / np.sqrt(gdot(Z1f, Z1f)), Z2f / np.sqrt(gdot(Z2f, Z2f))]
        extend_with_pairs(vectors, tg1 + tg2, pair.h + pair.k)
        labels = ["Z1", "Z2"] + [
            f"{'X' if i % 2 == 0 else 'phi X'}{i // 2 + 1}" for i in range(2 * (pair.h + pair.k))
        ]

    Bm = np.column_stack(vectors)
    gram_residual = float(np.max(np.abs(Bm.T @ Gf @ Bm - np.eye(n))))

    block_residual = 0.0
    if grouped:
        split = 1 + 2 * pair.h
        for sub, D in ((vectors[:split], pair.TF2), (vectors[split:], pair.TF1)):
            BD = _float_basis_matrix(D.basis)
            for v in sub:
                coeffs, *_ = np.linalg.lstsq(BD, v, rcond=None)
                block_residual = max(block_residual, float(np.max(np.abs(v - BD @ coeffs))))
    return PhiBasis(vectors, labels, grouped, gram_residual, block_residual)
