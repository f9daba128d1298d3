from fractions import Fraction

import pytest

from contactpairs.catalog import (
    BUILTIN_SOURCES,
    UnknownBuiltinError,
    builtin,
    builtin_names,
    builtin_source,
)
from contactpairs.dsl import DslError, parse, render
from contactpairs.forms import Form
from contactpairs.linalg import Matrix

HALF = Fraction(1, 2)


def test_parse_nilpotent6_instance():
    spec = builtin("bande-hadjar-6d")
    assert spec.name == "nilpotent6"
    assert spec.n == 6
    assert spec.coframe == ("w1", "w2", "w3", "w4", "w5", "w6")
    assert sorted(spec.equations) == [0, 1, 3, 4]
    assert spec.equations[0] == Form.monomial(6, (2, 3))
    assert spec.equations[4] == Form.monomial(6, (2, 5))
    assert spec.alpha1.covector() == (1, 0, 0, 0, 0, 0)
    assert spec.alpha2.covector() == (0, 1, 0, 0, 0, 0)
    assert spec.metric == Matrix.diagonal([1, 1, HALF, HALF, HALF, HALF])
    assert spec.phi.column(3) == (0, 0, 1, 0, 0, 0)
    assert spec.phi.column(2) == (0, 0, 0, -1, 0, 0)
    assert spec.kappa == HALF
    assert spec.tol is None


def test_parse_algebra_only_instance():
    spec = builtin("heisenberg3")
    assert spec.alpha1 is None and spec.alpha2 is None
    assert spec.metric is None and spec.phi is None and spec.kappa is None


def test_builtin_registry():
    assert builtin_names() == ["abelian2", "bande-hadjar-6d", "heisenberg3", "heisenberg3x3"]
    with pytest.raises(UnknownBuiltinError) as err:
        builtin_source("nope")
    assert "available" in str(err.value)


def test_round_trip_is_fixpoint_on_builtins():
    for name, source in BUILTIN_SOURCES.items():
        spec = parse(source)
        rendered = render(spec)
        assert rendered == source, name
        assert parse(rendered) == spec, name


def test_render_parse_idempotent_on_nontrivial_input():
    src = """
algebra weird {
  dim 4;
  basis a b c d;
  d a = 2 b^c - 1/3 c^d;
  d b = 0;
}
pair { alpha1 = a - 2 c; alpha2 = 1/2 d; }
metric { a*a + b*b + c*c + d*d + 1/3 a*d }
config { kappa = 2/3; tol = 1e-7; }
"""
    spec = parse(src)
    assert spec.equations[0] == Form.monomial(4, (1, 2), 2) + Form.monomial(4, (2, 3), Fraction(-1, 3))
    assert 1 not in spec.equations
    assert spec.metric[0, 3] == Fraction(1, 6)
    assert spec.tol == 1e-7
    once = render(spec)
    assert parse(once) == spec
    assert render(parse(once)) == once


def test_cross_term_convention():
    spec = parse("""
algebra a { dim 2; basis w1 w2; }
metric { w1*w1 + w2*w2 + 3 w1*w2 }
""")
    assert spec.metric[0, 1] == Fraction(3, 2)
    assert spec.metric[1, 0] == Fraction(3, 2)


def test_scalar_group_distribution():
    spec = parse("""
algebra a { dim 3; basis w1 w2 w3; d w3 = 2 (w1^w2 - 1/2 w1^w3); }
""")
    assert spec.equations[2] == Form.monomial(3, (0, 1), 2) - Form.monomial(3, (0, 2))


def test_reversed_wedge_normalizes():
    spec = parse("algebra a { dim 3; basis w1 w2 w3; d w3 = w2^w1; }")
    assert spec.equations[2] == Form.monomial(3, (0, 1), -1)


def test_comments_and_blank_lines():
    spec = parse("""
# a comment
algebra a {  # trailing comment
  dim 2;
  basis w1 w2;  # another
}
""")
    assert spec.n == 2


def test_phi_defaults_missing_columns_to_zero():
    spec = parse("""
algebra a { dim 2; basis w1 w2; }
phi { X1 -> X2; }
""")
    assert spec.phi.column(0) == (0, 1)
    assert spec.phi.column(1) == (0, 0)


def located(src):
    with pytest.raises(DslError) as err:
        parse(src)
    e = err.value
    assert e.line >= 1 and e.col >= 1
    assert f"line {e.line}, column {e.col}" in str(e)
    return e


def test_error_missing_semicolon():
    e = located("algebra a {\n  dim 2\n  basis w1 w2;\n}")
    assert e.line == 3
    assert "';'" in e.expected


def test_error_unexpected_character():
    e = located("algebra a { dim 2; basis w1 w2; } @")
    assert "unexpected character" in str(e)


def test_error_unknown_block():
    e = located("volume { }")
    assert e.line == 1
    assert "'algebra'" in e.expected


def test_error_missing_algebra():
    e = located("pair { alpha1 = w1; alpha2 = w2; }")
    assert "no algebra block" in str(e)


def test_error_duplicate_block():
    e = located("algebra a { dim 1; basis w1; }\nalgebra b { dim 1; basis w1; }")
    assert "duplicate algebra block" in str(e)
    assert e.line == 2


def test_error_basis_count_mismatch():
    e = located("algebra a { dim 3; basis w1 w2; }")
    assert "basis lists 2 names for dim 3" in str(e)


def test_error_duplicate_coframe_name():
    located("algebra a { dim 2; basis w1 w1; }")


def test_error_undeclared_name():
    e = located("algebra a { dim 2; basis w1 w2; d w1 = w1^w3; }")
    assert "undeclared coframe name 'w3'" in str(e)


def test_error_zero_denominator():
    e = located("algebra a { dim 2; basis w1 w2; }\nconfig { kappa = 1/0; }")
    assert "zero denominator" in str(e)
    assert e.line == 2


def test_error_float_outside_tol():
    e = located("algebra a { dim 2; basis w1 w2; }\nmetric { 0.5 w1*w1 }")
    assert "float literals are only allowed for tol" in str(e)


def test_error_mixed_operators():
    e = located("algebra a { dim 3; basis w1 w2 w3; d w3 = w1^w2*w3; }")
    assert "cannot mix" in str(e)


def test_error_pair_missing_alpha2():
    e = located("algebra a { dim 2; basis w1 w2; }\npair { alpha1 = w1; }")
    assert "missing alpha2" in str(e)


def test_error_metric_wrong_operator():
    e = located("algebra a { dim 2; basis w1 w2; }\nmetric { w1^w2 }")
    assert "sum of products" in str(e)


def test_error_unterminated_block():
    e = located("algebra a { dim 2; basis w1 w2;")
    assert "unexpected end of input" in str(e)


def test_error_phi_bad_frame_name():
    e = located("algebra a { dim 2; basis w1 w2; }\nphi { X9 -> 0; }")
    assert "undeclared frame name 'X9'" in str(e)
