import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contactpairs.forms import (
    DegreeError,
    Form,
    Vector,
    all_monomials,
    one_form_from_covector,
)
from contactpairs.linalg import Matrix

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def vectors(n):
    return st.lists(rationals, min_size=n, max_size=n).map(Vector)


def forms(n, degree):
    monos = list(all_monomials(n, degree))
    return st.lists(rationals, min_size=len(monos), max_size=len(monos)).map(
        lambda cs: Form(n, degree, dict(zip(monos, cs)))
    )


def test_vector_arithmetic():
    v = Vector([1, 2, 3])
    w = Vector.basis(3, 1)
    assert (v + w)[1] == 3
    assert (v - v).is_zero()
    assert (-v).scale(-1) == v
    assert Vector.zero(3).is_zero()


def test_monomial_normalization():
    # out-of-order index tuples pick up the permutation sign
    a = Form.monomial(4, (2, 0))
    b = Form.monomial(4, (0, 2))
    assert a == -b
    assert Form.monomial(4, (1, 1)).is_zero()


def test_pair_evaluation_convention():
    n = 3
    w0 = Form.basis_one_form(n, 0)
    w1 = Form.basis_one_form(n, 1)
    x = Vector([2, 3, 0])
    y = Vector([5, 7, 0])
    lhs = w0.wedge(w1).evaluate(x, y)
    assert lhs == x[0] * y[1] - y[0] * x[1]
    assert lhs == -w0.wedge(w1).evaluate(y, x)


def test_wedge_degree_overflow():
    n = 2
    area = Form.basis_one_form(n, 0).wedge(Form.basis_one_form(n, 1))
    with pytest.raises(DegreeError):
        area.wedge(Form.basis_one_form(n, 0))


def test_wedge_power():
    n = 4
    omega = Form.monomial(n, (0, 1)) + Form.monomial(n, (2, 3))
    assert omega.wedge_power(0) == Form.constant(n, 1)
    assert omega.wedge_power(1) == omega
    sq = omega.wedge_power(2)
    assert sq == Form.monomial(n, (0, 1, 2, 3), 2)


def test_skew_matrix_round_trip():
    n = 3
    omega = Form.monomial(n, (0, 1), Fraction(2)) + Form.monomial(n, (1, 2), Fraction(-1, 3))
    O = omega.skew_matrix()
    assert O.transpose() == -O
    for i in range(n):
        for j in range(n):
            e_i, e_j = Vector.basis(n, i), Vector.basis(n, j)
            assert omega.evaluate(e_i, e_j) == O[i, j]


def test_covector_round_trip():
    alpha = one_form_from_covector(4, [1, 0, Fraction(-1, 2), 3])
    assert alpha.covector() == (1, 0, Fraction(-1, 2), 3)
    with pytest.raises(DegreeError):
        Form.zero(4, 2).covector()


def test_render():
    n = 6
    f = Form.monomial(n, (2, 3)) + Form.monomial(n, (4, 5), Fraction(1, 2))
    names = [f"w{i + 1}" for i in range(n)]
    assert f.render(names) == "w3^w4 + 1/2 w5^w6"
    assert Form.zero(n, 2).render(names) == "0"
    assert (-Form.monomial(n, (0,))).render(names) == "-w1"


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(forms(n, 1), forms(n, 1))))
def test_one_forms_anticommute(pair):
    a, b = pair
    assert a.wedge(b) == -b.wedge(a)
    assert a.wedge(a).is_zero()


@given(st.integers(3, 5).flatmap(lambda n: st.tuples(forms(n, 1), forms(n, 2))))
def test_wedge_graded_commutativity(pair):
    a, b = pair
    assert a.wedge(b) == b.wedge(a).scale((-1) ** (a.degree * b.degree))


@given(st.integers(3, 5).flatmap(lambda n: st.tuples(forms(n, 1), forms(n, 1), forms(n, 1))))
def test_wedge_associative_and_bilinear(triple):
    a, b, c = triple
    assert a.wedge(b.wedge(c)) == a.wedge(b).wedge(c)
    assert (a + b).wedge(c) == a.wedge(c) + b.wedge(c)


@given(st.integers(2, 4).flatmap(
    lambda n: st.tuples(
        st.integers(1, min(3, n)).flatmap(lambda p: forms(n, p)),
        st.just(n),
    )
))
@settings(max_examples=60)
def test_evaluate_matches_determinant_oracle(case):
    form, n = case
    p = form.degree
    vs = [Vector.basis(n, i % n) for i in range(p)]
    # evaluate on a monomial basis agrees with the selection determinant
    for idx, coeff in [(i, c) for i, c in _terms(form)]:
        sel = Matrix([[1 if j == k else 0 for j in range(n)] for k in idx]) if idx else None
        assert sel is None or sel.rows == p
    # full check against the multilinear expansion on random frame subsets
    for subset in itertools.combinations(range(n), p):
        args = [Vector.basis(n, i) for i in subset]
        expected = dict(_terms(form)).get(subset, Fraction(0))
        assert form.evaluate(*args) == expected


def _terms(form):
    return [(idx, form.evaluate(*[Vector.basis(form.n, i) for i in idx]))
            for idx in all_monomials(form.n, form.degree)]


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(*( [forms(n, 1)] * 3 ))))
@settings(max_examples=40)
def test_decomposable_evaluation_is_gram_determinant(trip):
    a, b, c = trip
    n = a.n
    vs = [Vector.basis(n, i) for i in range(min(3, n))]
    if len(vs) < 3:
        return
    w = a.wedge(b).wedge(c)
    gram = Matrix([[f.evaluate(v) for v in vs] for f in (a, b, c)])
    assert w.evaluate(*vs) == gram.det()


@given(st.integers(3, 5).flatmap(lambda n: st.tuples(forms(n, 2), vectors(n), vectors(n), vectors(n))))
@settings(max_examples=60)
def test_evaluate_alternating_and_multilinear(case):
    f, u, v, w = case
    assert f.evaluate(u, v) == -f.evaluate(v, u)
    assert f.evaluate(u + w, v) == f.evaluate(u, v) + f.evaluate(w, v)
    assert f.evaluate(u.scale(3), v) == 3 * f.evaluate(u, v)
    assert f.evaluate(u, u) == 0


@given(st.integers(3, 5).flatmap(
    lambda n: st.tuples(forms(n, 1), forms(n, 2), vectors(n))
))
@settings(max_examples=60)
def test_interior_product_antiderivation(case):
    a, b, v = case
    lhs = a.wedge(b).interior(v)
    rhs = b.scale(a.evaluate(v)) - a.wedge(b.interior(v))
    assert lhs == rhs


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(forms(n, 2), vectors(n), vectors(n))))
def test_interior_evaluates_with_slot_filled(case):
    f, u, v = case
    assert f.interior(u).evaluate(v) == f.evaluate(u, v)


def test_all_monomials_counts():
    import math

    for n in range(1, 6):
        for p in range(0, n + 1):
            assert len(list(all_monomials(n, p))) == math.comb(n, p)
