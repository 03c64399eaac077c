from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from f0sullivan.graded_poly import (AlgebraError, DegreeError, GradedSignature, INHOMOGENEOUS,
                                    ParseError, SignatureMismatch, add, coeff_wrt, coefficients_wrt,
                                    cohomological_degree, deg_in, format_element, mul, parse,
                                    substitute)

SIG = GradedSignature.of(("x1", 2), ("x2", 2), ("x3", 2), ("x4", 2), ("y1", 3), ("y2", 3))
MIXED = GradedSignature.of(("x1", 2), ("x2", 4), ("y1", 3), ("y2", 5), ("y3", 7))


def P(text, sig=SIG):
    return parse(sig, text)


def test_additive_inverse_and_doubling():
    assert add(P("x1"), P("-x1")) == SIG.zero()
    assert add(P("x1^2"), P("x1^2")) == P("2*x1^2")


def test_odd_generators_anticommute_in_sums():
    assert add(P("y1*y2"), P("y2*y1")) == SIG.zero()


def test_odd_square_vanishes_and_swap_sign():
    assert mul(P("y1"), P("y1")) == SIG.zero()
    assert mul(P("y2"), P("y1")) == P("-y1*y2")


def test_mixed_square():
    assert mul(P("x1 + y1"), P("x1 + y1")) == P("x1^2 + 2*x1*y1")


def test_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        add(P("x1"), parse(MIXED, "x1"))


def test_substitute_examples():
    assert substitute(P("x3^2 - x2^2"), "x3", P("x2")) == SIG.zero()
    assert substitute(P("x3^2 - x2^2 + x1^2"), "x3", P("-x2")) == P("x1^2")
    assert substitute(P("x1^2"), "x3", P("x2")) == P("x1^2")


def test_substitute_rejects_bad_input():
    with pytest.raises(AlgebraError):
        substitute(P("y1"), "y1", P("y2"))
    with pytest.raises(DegreeError):
        substitute(P("x3"), "x3", P("x1^2"))
    with pytest.raises(AlgebraError):
        substitute(P("x3"), "x3", P("x1 + x1^2"))


def test_coeff_wrt_examples():
    th1, th0 = P("x1*x2 + x3"), P("x2 - x1")
    assert coeff_wrt(th1 * P("x4") + th0, "x4", 1) == th1
    assert coeff_wrt(P("x2^3"), "x4", 0) == P("x2^3")
    assert coeff_wrt(P("(x2 + x4)^2"), "x4", 1) == P("2*x2")


def test_deg_in_examples():
    assert deg_in(P("x3^2 + x2*x3"), "x3") == 2
    assert deg_in(SIG.zero(), "x3") == -1
    assert deg_in(P("x1^5"), "x3") == 0


def test_cohomological_degree_examples():
    assert cohomological_degree(parse(MIXED, "x1^2")) == 4
    assert cohomological_degree(parse(MIXED, "x1*y1")) == 5
    assert cohomological_degree(parse(MIXED, "x1 + x1^2")) is INHOMOGENEOUS


def test_parser_grammar():
    assert P("x2^2 + x1^2*x2 - 3/2*x1^4") == P("x1^2*x2 + x2^2") - Fraction(3, 2) * P("x1^4")
    assert P("  2 *x1 ") == 2 * P("x1")
    for bad in ("", "x1 +", "x9", "x1 ^ y1", "x1 $ x2", "x1/x2"):
        with pytest.raises(ParseError):
            P(bad)


def test_format_round_trip_examples():
    for text in ("x2^2 + x1^2*x2 - 3/2*x1^4", "y1*y2 - x1*y1", "0", "-7"):
        p = P(text, MIXED) if "y" not in text else P(text)
        assert parse(p.sig, format_element(p)) == p


# -- properties -------------------------------------------------------------------

def _element(sig, max_exp=4):
    odd = [g.odd for g in sig.generators]
    mono = st.tuples(*[st.integers(0, 1) if o else st.integers(0, max_exp) for o in odd])
    coef = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.lists(st.tuples(mono, coef), max_size=4).map(
        lambda terms: sum((sig.monomial(m, c) for m, c in terms), sig.zero()))


def _homogeneous(sig, degree_choices):
    """Random homogeneous elements of MIXED by taking the homogeneous part."""
    from f0sullivan.graded_poly import homogeneous_part
    return st.tuples(_element(sig, 3), st.sampled_from(degree_choices)).map(
        lambda t: homogeneous_part(t[0], t[1]))


elements = _element(MIXED)


@given(_homogeneous(MIXED, list(range(0, 16))), _homogeneous(MIXED, list(range(0, 16))))
def test_graded_commutativity(a, b):
    da, db = cohomological_degree(a), cohomological_degree(b)
    if da is None or db is None:
        assert a * b == MIXED.zero() or b * a == a * b
        return
    assert a * b == (-1) ** (da * db) * (b * a)


@given(elements, elements, elements)
def test_associativity_and_distributivity(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


EVEN = GradedSignature.of(("x1", 2), ("x2", 2), ("x3", 2), ("x4", 4))
even_elements = _element(EVEN, 3)


@given(even_elements)
def test_substitute_identity(p):
    assert substitute(p, "x3", EVEN.gen("x3")) == p


@given(even_elements, even_elements, st.sampled_from(["x1 + x2", "x2 - 3*x1", "0", "2/3*x3"]))
def test_substitute_is_an_algebra_map(p, q, expr):
    e = parse(EVEN, expr)
    assert substitute(p * q, "x3", e) == substitute(p, "x3", e) * substitute(q, "x3", e)
    assert substitute(p + q, "x3", e) == substitute(p, "x3", e) + substitute(q, "x3", e)


@given(elements, st.sampled_from(["x1", "x2"]))
def test_coefficients_reassemble(p, v):
    x = MIXED.gen(v)
    total = MIXED.zero()
    for k in range(max(deg_in(p, v), 0) + 1):
        c = coeff_wrt(p, v, k)
        assert deg_in(c, v) <= 0
        total = total + c * x ** k
    assert total == p
    assert len(coefficients_wrt(p, v)) == max(deg_in(p, v) + 1, 1) or not p


@given(even_elements, even_elements, st.sampled_from(["x1", "x3", "x4"]))
def test_degree_of_product(p, q, v):
    if p and q:
        assert deg_in(p * q, v) == deg_in(p, v) + deg_in(q, v)


@given(elements)
def test_format_round_trip(p):
    assert parse(MIXED, format_element(p)) == p
