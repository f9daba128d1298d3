import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contactpairs.foliations import (
    LeviCivitaError,
    ScaledForm,
    VolumeError,
    characteristic_form,
    connection_checks,
    foliation_report,
    levi_civita,
    mean_curvature,
    rummler_minimal,
    second_fundamental_form,
    totally_geodesic_check,
    volume_identity,
)
from contactpairs.forms import Form, Vector
from contactpairs.liealg import Distribution, LieAlgebra, is_subalgebra
from contactpairs.metrics import MetricTensor, check_associated
from contactpairs.pairs import build_contact_pair

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


def nilpotent6():
    n = 6
    return LieAlgebra.from_structure_equations(
        n,
        {
            0: Form.monomial(n, (2, 3)),
            1: Form.monomial(n, (4, 5)),
            3: Form.monomial(n, (2, 4)),
            4: Form.monomial(n, (2, 5)),
        },
    )


def nilpotent6_setup():
    L = nilpotent6()
    pair = build_contact_pair(L, Form.basis_one_form(6, 0), Form.basis_one_form(6, 1))
    g = MetricTensor.from_diagonal([1, 1, HALF, HALF, HALF, HALF])
    return L, pair, g


def test_levi_civita_certifies():
    L, pair, g = nilpotent6_setup()
    conn = levi_civita(L, g)
    assert connection_checks(conn).all_ok()


def test_koszul_frozen_values():
    # the two Christoffel pairings every associated-metric computation leans on
    L, pair, g = nilpotent6_setup()
    conn = levi_civita(L, g)
    e = lambda i: Vector.basis(6, i)
    assert abs(g.inner(conn.nabla(e(3), e(2)), e(4))) == QUARTER
    assert abs(g.inner(conn.nabla(e(4), e(5)), e(2))) == QUARTER


def test_connection_bilinear():
    L, pair, g = nilpotent6_setup()
    conn = levi_civita(L, g)
    u = Vector([1, 0, 2, 0, 0, 0])
    v = Vector([0, 3, 0, 0, 1, 0])
    lhs = conn.nabla(u, v)
    rhs = Vector.zero(6)
    for i in range(6):
        for j in range(6):
            c = u[i] * v[j]
            if c != 0:
                rhs = rhs + conn.nabla_basis(i, j).scale(c)
    assert lhs == rhs


def test_abelian_connection_is_flat():
    L = LieAlgebra.abelian(3)
    g = MetricTensor.from_diagonal([1, 2, 3])
    conn = levi_civita(L, g)
    for i in range(3):
        for j in range(3):
            assert conn.nabla_basis(i, j).is_zero()


def test_characteristic_foliations_minimal_but_not_geodesic():
    L, pair, g = nilpotent6_setup()
    conn = levi_civita(L, g)
    for D in (pair.TF1, pair.TF2):
        rep = foliation_report(conn, D, "D")
        assert rep.mean_curvature.is_zero()
        assert rep.minimal and rep.rummler_minimal and rep.oracles_agree
        assert not rep.totally_geodesic
        assert rep.tg_witness is not None


def test_characteristic_form_frozen_values():
    L, pair, g = nilpotent6_setup()
    chi1 = characteristic_form(g, pair.TF1)
    assert chi1.scale_sq == 4
    assert chi1.base == Form.monomial(6, (1, 4, 5), QUARTER)
    assert chi1.exact_form() == Form.monomial(6, (1, 4, 5), HALF)
    chi2 = characteristic_form(g, pair.TF2)
    assert chi2.exact_form() == Form.monomial(6, (0, 2, 3), HALF)


def test_scaled_form_square_root_handling():
    base = Form.monomial(4, (0, 1), Fraction(1, 3))
    s = ScaledForm(base, Fraction(2))
    assert s.exact_form() is None
    assert s.coefficient_sq((0, 1)) == Fraction(2, 9)
    assert ScaledForm(base, Fraction(9, 4)).exact_form() == base.scale(Fraction(3, 2))


def test_totally_geodesic_on_product_metric():
    # two commuting heisenberg blocks with a block metric: leaves are geodesic
    L = LieAlgebra.from_structure_equations(
        6, {2: Form.monomial(6, (0, 1)), 5: Form.monomial(6, (3, 4))}
    )
    pair = build_contact_pair(L, Form.basis_one_form(6, 2), Form.basis_one_form(6, 5))
    g = MetricTensor.from_diagonal([HALF, HALF, 1, HALF, HALF, 1])
    conn = levi_civita(L, g)
    for D in (pair.TF1, pair.TF2):
        ok, witness = totally_geodesic_check(conn, D)
        assert ok and witness is None
        assert mean_curvature(conn, D).is_zero()


def test_mean_curvature_detects_non_minimal():
    # [X1, X2] = X2 makes span{X2} a non-minimal line: nabla_{X2}X2 = X1
    L = LieAlgebra(2, {(0, 1): Vector.basis(2, 1)})
    g = MetricTensor.from_diagonal([1, 1])
    conn = levi_civita(L, g)
    D = Distribution.from_vectors(2, [Vector.basis(2, 1)])
    H = mean_curvature(conn, D)
    assert H == Vector.basis(2, 0)
    chi = characteristic_form(g, D)
    rm, witness = rummler_minimal(L, D, chi)
    assert not rm
    assert witness is not None
    rep = foliation_report(conn, D, "line")
    assert not rep.minimal and not rep.rummler_minimal and rep.oracles_agree


def test_volume_identity_on_nilpotent6_data():
    L, pair, g = nilpotent6_setup()
    phi, cert = check_associated(pair, g, HALF)
    vol = volume_identity(pair, g, cert)
    assert vol.lhs_sq == Fraction(1, 16)
    assert vol.constant == QUARTER
    assert vol.rhs_coeff == QUARTER
    assert vol.ok


def test_volume_identity_requires_decomposable():
    L, pair, g = nilpotent6_setup()
    phi, cert = check_associated(pair, MetricTensor.from_diagonal([1] * 6), HALF)
    assert not cert.associated
    cert.decomposable = False
    with pytest.raises(VolumeError):
        volume_identity(pair, g, cert)


def _bracket_closed_coordinate_distributions(L, max_count=40):
    out = []
    for r in range(1, L.n):
        for subset in itertools.combinations(range(L.n), r):
            D = Distribution.from_vectors(L.n, [Vector.basis(L.n, i) for i in subset])
            if is_subalgebra(L, D).ok:
                out.append(D)
                if len(out) >= max_count:
                    return out
    return out


def test_minimality_oracles_agree_on_coordinate_subalgebras():
    L, pair, g = nilpotent6_setup()
    conn = levi_civita(L, g)
    dists = _bracket_closed_coordinate_distributions(L)
    assert len(dists) >= 20
    for D in dists:
        rep = foliation_report(conn, D, "D")
        assert rep.oracles_agree, D.render(L.names)


diag_entries = st.lists(
    st.fractions(min_value=Fraction(1, 3), max_value=3, max_denominator=3),
    min_size=6, max_size=6,
)


@given(diag_entries)
@settings(max_examples=20, deadline=None)
def test_oracles_agree_under_random_diagonal_metrics(diag):
    L = nilpotent6()
    g = MetricTensor.from_diagonal(diag)
    conn = levi_civita(L, g)
    assert connection_checks(conn).all_ok()
    for D in _bracket_closed_coordinate_distributions(L, max_count=12):
        rep = foliation_report(conn, D, "D")
        assert rep.oracles_agree, (diag, D.render(L.names))


@given(diag_entries)
@settings(max_examples=15, deadline=None)
def test_mean_curvature_weighted_trace_oracle(diag):
    # H computed over the canonical basis with the inverse Gram weights must
    # match the orthogonal-basis definition
    L = nilpotent6()
    g = MetricTensor.from_diagonal(diag)
    conn = levi_civita(L, g)
    e = lambda i: Vector.basis(6, i)
    D = Distribution.from_vectors(6, [e(1), e(4), e(5)])
    ii = second_fundamental_form(conn, D)
    from contactpairs.linalg import Matrix

    gram = Matrix([[g.inner(u, v) for v in D.basis] for u in D.basis])
    ginv = gram.inverse()
    H = Vector.zero(6)
    for i in range(D.dim):
        for j in range(D.dim):
            H = H + ii[(i, j)].scale(ginv[i, j])
    assert H == mean_curvature(conn, D)
