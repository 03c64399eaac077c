from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import even_sig
from f0sullivan.f0_model import build_f0
from f0sullivan.graded_poly import AlgebraError, parse
from f0sullivan.ideal import prop22_check
from f0sullivan.selfeq import (DecompositionFailure, EvenMap, Roles, SelfEquivalenceError, decompose_by_A,
                               decompose_by_linear_system, decompose_recursive, derive_constraints,
                               make_selfeq, theta_expand, triviality_check, u_decomposition, verify_prop31)
from f0sullivan.selfeq.constraints import coefficient_formulas, ratio_prediction, top_row_ratios_hold
from f0sullivan.selfeq.formulas import FormulaError, coefficient, formula_table, shift_difference, top_E_general
from f0sullivan.selfeq.selfequiv import prop31_prediction
from f0sullivan.selfeq.theta import ThetaError

S4 = even_sig(2, 2, 2, 2)


def P(text, sig=S4):
    return parse(sig, text)


@pytest.fixture(scope="module")
def M():
    return build_f0([2, 4], ["x1^2", "x2^2 + x1^2*x2"])


@pytest.fixture(scope="module")
def squares():
    return build_f0([2, 2], ["x1^2", "x2^2"])


# -- make_selfeq and the cofactor rows -------------------------------------------------

def test_identity_is_valid(squares):
    alpha = make_selfeq(squares, [])
    assert alpha.all_A_zero() and alpha.lines() == []
    ud = u_decomposition(alpha)
    assert ud.ok and all(not u for row in ud.rows for u in row)


def test_worked_model_cofactor(M):
    alpha = make_selfeq(M, {"x2": "x1^2"}, {"y2": "y2 + (2*x2 + 2*x1^2)*y1"})
    ud = u_decomposition(alpha)
    assert ud.ok
    assert ud.rows[1][0] == parse(M.sig, "2*x2 + 2*x1^2")
    assert ud.lines() == ["U[2][1] = 2*x1^2 + 2*x2"]


def test_cofactors_reassemble(M):
    alpha = make_selfeq(M, {"x2": "-3*x1^2"}, {"y2": "y2 + (-6*x2 + 6*x1^2)*y1"})
    ud = u_decomposition(alpha)
    for j, row in enumerate(ud.rows):
        total = M.sig.zero()
        for u, p in zip(row, M.P):
            total = total + u * p
        assert total == alpha(M.P[j]) - M.P[j]


def test_missing_y_image_breaks_cochain_condition(M):
    with pytest.raises(SelfEquivalenceError, match="not a cochain map at y2"):
        make_selfeq(M, {"x2": "x1^2"})


@pytest.mark.parametrize("A,match", [
    ({"x2": "3*x1"}, "not decomposable"),
    ({"x1": "x1"}, "not decomposable"),
    ({"x2": "x1^2"}, "not homogeneous"),
    ({"x5": "x1^2"}, "unknown even generators"),
])
def test_invalid_shifts_rejected(squares, A, match):
    with pytest.raises(SelfEquivalenceError, match=match):
        make_selfeq(squares, A)


def test_shift_list_form_matches_mapping(M):
    a = make_selfeq(M, ["0", "x1^2"], {"y2": "y2 + (2*x2 + 2*x1^2)*y1"})
    b = make_selfeq(M, {"x2": "x1^2"}, {"y2": "y2 + (2*x2 + 2*x1^2)*y1"})
    assert a == b
    with pytest.raises(SelfEquivalenceError, match="more A_i"):
        make_selfeq(M, ["0", "0", "0"])


def test_y_image_must_be_y_plus_decomposable(squares):
    with pytest.raises(SelfEquivalenceError, match="decomposable"):
        make_selfeq(squares, {}, {"y1": "2*y1"})


@given(st.integers(-5, 5).filter(bool))
def test_odd_generator_in_shift_rejected(c):
    model = build_f0([2, 2, 6], ["x1^2", "x2^2", "x3^2"])
    with pytest.raises(SelfEquivalenceError, match="odd generator") as info:
        make_selfeq(model, {"x3": f"{c}*y1*y2"})
    assert info.value.generator == "x3"


def test_fixing_p1_is_reported(M):
    # an algebra map on the x's that rescales x1 moves P1
    alpha = EvenMap(M.sig, {"x1": M.sig.gen("x1")})
    alpha.model = M
    ud = u_decomposition(alpha)
    assert not ud.ok and "alpha(P1) != P1" in ud.failures


# -- theta expansions ------------------------------------------------------------------

def test_theta_table_layout_r3():
    p = P("x1^2*x3^3 + x1^2*x2*x3^2 + x1^2*x2^2*x3 + 5*x1^2*x2^3 + x1^4*x2 + x1^5")
    exp = theta_expand(p, "x4")
    assert exp.s == 0
    t = exp.top
    assert t.r == 3 and t.top_row() == [1, 1, 1, 5]
    assert t.layout() == [
        "lambda[0,3]=1 @ x1^2*x3^3; lambda[1,2]=1 @ x1^2*x2*x3^2; "
        "lambda[2,1]=1 @ x1^2*x2^2*x3; lambda[3,0]=5 @ x1^2*x2^3",
        "0",
        "lambda[1,0]=1 @ x1^4*x2",
        "rho=1 @ x1^5",
    ]
    assert t.b == 5 and t.rho == 1


def test_theta_exponents_follow_degrees():
    sig = even_sig(2, 4, 6, 8)
    exp = theta_expand(parse(sig, "x3^2*x4 + x1*x2*x3*x4 + x1^10"), "x4")
    t = exp.table(1)
    assert t.r == 2 and t.a[(0, 2)] == 0 and t.a[(1, 1)] == 1 and t.a[(2, 0)] == 2
    assert exp.table(0).b == 10
    assert exp.divisibility == {"x2/x1": True, "x3/x1": True, "(x3-x2)/x1": True}


def test_theta_of_pure_pivot_power():
    exp = theta_expand(P("x4^2"), "x4")
    assert exp.s == 2 and [str(t) for t in exp.thetas] == ["0", "0", "1"]
    assert exp.reassemble() == P("x4^2")


def test_theta_of_worked_model_second_relation(M):
    exp = theta_expand(M.P[1], "x2", Roles("x1", "x3", "x4"))
    assert [str(t) for t in exp.thetas] == ["0", "x1^2", "1"]


@pytest.mark.parametrize("text", ["x1^2 + x2", "0"])
def test_theta_rejects_bad_input(text):
    with pytest.raises((ThetaError, AlgebraError)):
        theta_expand(P(text), "x4")


# -- the pivot recursion ---------------------------------------------------------------

def test_pivot_recursion_s1():
    p = P("x2*x4 + x2*x3")
    amap = EvenMap(S4, {"x4": P("x1")})
    exp = theta_expand(p, "x4")
    assert prop31_prediction(exp, P("x1"), 0) == exp.theta(0) - exp.theta(1) * P("x1")
    # alpha does not fix P1 here; the recursion still describes alpha(theta_i) only when it does
    x3_shift = EvenMap(S4, {"x4": P("x1"), "x3": P("-x1")})
    assert x3_shift(p) == p
    assert all(verify_prop31(x3_shift, exp).values())
    assert not all(verify_prop31(amap, exp).values())


def test_pivot_recursion_s2():
    sig = S4
    p = P("x2*x4^2 + x1*x3*x4")
    exp = theta_expand(p, "x4")
    A4 = P("x1")
    assert prop31_prediction(exp, A4, 0) == exp.theta(0) - exp.theta(1) * A4 + exp.theta(2) * A4 ** 2
    assert prop31_prediction(exp, A4, 1) == exp.theta(1) - 2 * exp.theta(2) * A4
    assert prop31_prediction(exp, A4, 2) == exp.theta(2)
    # x4 - x3 is fixed by x3 -> x3 + x1, x4 -> x4 + x1
    inv = P("x2*x4^2 - 2*x2*x3*x4 + x2*x3^2 + x1*x2*x4 - x1*x2*x3 + x1^3")
    amap = EvenMap(sig, {"x3": P("x1"), "x4": P("x1")})
    assert amap(inv) == inv
    result = verify_prop31(amap, theta_expand(inv, "x4"))
    assert result == {0: True, 1: True, 2: True}


# -- coefficient closed forms ----------------------------------------------------------

def test_top_x3_coefficient_r2():
    theta = P("3*x1^2*x3^2 + 5*x1^2*x2*x3 + 7*x1^2*x2^2")
    roles = Roles()
    A2, A3 = P("x1"), P("4*x1")
    brute = coefficient(shift_difference(theta, roles, A2, A3), roles, 0, 1)
    assert brute == 2 * 3 * P("x1^2") * A3 + 5 * P("x1^2") * A2 == P("29*x1^3")
    from f0sullivan.selfeq.theta import theta_table
    assert top_E_general(theta_table(theta), S4, roles, A2, A3) == brute


def test_zero_shift_gives_zero_table():
    theta = P("3*x1^2*x3^2 + 5*x1^2*x2*x3 + 7*x1^2*x2^2 + x1^4")
    table = formula_table(theta, Roles(), 0, Fraction(-5, 6))
    assert table.ok and table.entries
    assert all(not closed and not brute for _, closed, brute in table.entries)


@pytest.mark.parametrize("omega,D", [(1, -1), (2, Fraction(1, 3)), (-3, 2)])
def test_closed_forms_match_expansion(omega, D):
    theta = P("x3^3 - 2*x2*x3^2 + 4*x2^2*x3 + x2^3 + 6*x1*x3^2 - x1*x2*x3 + 2*x1^2*x2 + x1^3")
    table = formula_table(theta, Roles(), omega, D)
    assert table.ok, table.mismatches()


def test_formulas_undefined_without_leading_coefficient():
    exp = theta_expand(P("x3^2*x4 + x1^2*x4"), "x4")
    cs = derive_constraints(EvenMap(S4, {}), exp)
    with pytest.raises(FormulaError):
        coefficient_formulas(exp, cs)


# -- constraint analysis ---------------------------------------------------------------

SQUARE = "x3^2*x4 + 2*x2*x3*x4 + x2^2*x4"


def test_ratio_constant_example():
    exp = theta_expand(P(SQUARE), "x4")
    cs = derive_constraints(EvenMap(S4, {}), exp)
    assert cs.route == "case-2" and cs.r == 2
    assert cs.lam0 == 1 and cs.lam1 == 2 and cs.D == -1
    assert cs.A_red == P("2*x2 + 2*x3") and cs.A_poly == P("2*x1*x2 + 2*x1*x3")
    assert cs.ok and cs.verdict == "trivial: all A nil"


def test_third_top_coefficient_forced():
    # C(2,2) * 1 * (2/2)^2 = 1
    assert ratio_prediction(Fraction(1), 2, 2, Fraction(1)) == 1
    t = theta_expand(P(SQUARE), "x4").top
    assert top_row_ratios_hold(t, Fraction(1))
    bad = theta_expand(P("x3^2*x4 + 2*x2*x3*x4 + 3*x2^2*x4"), "x4").top
    assert not top_row_ratios_hold(bad, Fraction(1))


@pytest.mark.parametrize("omega", [1, 2, Fraction(-1, 2)])
def test_nontrivial_shift_passes_every_check(omega):
    exp = theta_expand(P(SQUARE), "x4")
    amap = EvenMap(S4, {"x2": omega * P("x1"), "x3": -omega * P("x1")})
    cs = derive_constraints(amap, exp)
    assert cs.ok, cs.violations
    assert cs.omega == omega and cs.verdict == "nontrivial: A2 != 0"
    for table in coefficient_formulas(exp, cs).values():
        assert table.ok


def test_shift_with_pivot_move():
    exp = theta_expand(P("x3^2*x4 + 4*x2*x3*x4 + 4*x2^2*x4 - 3*x2*x3^2 - 12*x2^2*x3 - 12*x2^3"), "x4")
    amap = EvenMap(S4, {"x2": P("x1"), "x3": P("-2*x1"), "x4": P("3*x1")})
    assert amap(exp.P) == exp.P
    cs = derive_constraints(amap, exp)
    assert cs.ok, cs.violations
    assert cs.D == -2 and cs.gamma == 3
    assert cs.checks["A4 matches its derived value"]


def test_inconsistent_shift_is_reported():
    exp = theta_expand(P(SQUARE), "x4")
    amap = EvenMap(S4, {"x2": P("x1"), "x3": P("x1")})
    cs = derive_constraints(amap, exp)
    assert cs.route == "invalid" and not cs.ok


def test_vanishing_second_coefficient_forces_a3_zero():
    exp = theta_expand(P("x3^2*x4 + x1^2*x4"), "x4")
    cs = derive_constraints(EvenMap(S4, {}), exp)
    assert cs.route == "case-1" and cs.lam0 == 1 and cs.lam1 == 0
    assert cs.checks["A3 = 0"] and cs.verdict == "trivial: all A nil"
    # theta_s lies in Q[x1, x3]
    assert "x2" not in exp.theta(exp.s).variables()


def test_case_one_shift_in_absent_variable_is_not_forced():
    # x2 does not occur in P1, so any A2 = c x1 fixes it
    exp = theta_expand(P("x3^2*x4 + x1^2*x4"), "x4")
    cs = derive_constraints(EvenMap(S4, {"x2": P("3*x1")}), exp)
    assert cs.route == "case-1" and cs.ok
    assert cs.forced_zero is False and cs.verdict == "nontrivial A in case 1"
    assert "top row forces A2 = A3 = 0: no" in cs.lines()


def test_case_one_forced_cascade():
    # lambda[0,r] = 0 with the top row x2*x3 + x2^2
    exp = theta_expand(P("x2*x3*x4 + x2^2*x4"), "x4")
    cs = derive_constraints(EvenMap(S4, {}), exp)
    assert cs.route == "case-1" and cs.lam0 == 0 and cs.forced_zero is True
    assert cs.ok and cs.verdict == "trivial: all A nil"


def test_constraint_lines_are_stable():
    exp = theta_expand(P(SQUARE), "x4")
    cs = derive_constraints(EvenMap(S4, {"x2": P("x1"), "x3": P("-x1")}), exp)
    lines = cs.lines()
    assert lines[0] == "route: case-2"
    assert "D = -1" in lines and "omega = 1" in lines
    assert all(not line.endswith("FAIL") for line in lines)


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4),
       st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool))
def test_routing_invariant_under_scaling(l0, l1, l2, c):
    assume(l0 or l1 or l2)
    p = P(f"{l0}*x3^2*x4 + {l1}*x2*x3*x4 + {l2}*x2^2*x4 + x1^2*x4")
    ident = EvenMap(S4, {})
    a = derive_constraints(ident, theta_expand(p, "x4"))
    b = derive_constraints(ident, theta_expand(c * p, "x4"))
    assert a.route == b.route
    assert a.D == b.D


# -- decompositions --------------------------------------------------------------------

A_DIFF = "x3 - x2"


@pytest.mark.parametrize("route", [decompose_by_A, decompose_by_linear_system, decompose_recursive])
def test_difference_of_squares(route):
    d = route(P("x3^2 - x2^2 + x1^2"), P(A_DIFF))
    assert (d.B, d.e, d.Q) == (P("x3 + x2"), 2, P("1"))
    assert d.verify()


def test_exact_multiple():
    d = decompose_by_A(P("x3^2 - x2*x3"), P(A_DIFF))
    assert d.B == P("x3") and not d.Q and d.exact_multiple


def test_x3_free_target():
    d = decompose_by_A(P("x2^3"), P(A_DIFF))
    assert not d.B and d.e == 0 and d.Q == P("x2^3")


def test_decomposition_accepts_constraint_set():
    exp = theta_expand(P(SQUARE), "x4")
    cs = derive_constraints(EvenMap(S4, {}), exp)
    d = decompose_by_A(P("x3^2 + x1*x2"), cs)
    assert d.A == P("2*x2 + 2*x3") and d.verify()


@pytest.mark.parametrize("A", ["x3^2 - x2^2", "x2*x3 - x1^2", "x2 - x1"])
def test_decomposition_rejects_bad_a(A):
    with pytest.raises(DecompositionFailure):
        decompose_by_A(P("x3^2"), P(A))


def _poly(draw, sig, degree, names, coef=st.integers(-4, 4)):
    from f0sullivan.selfeq.decompose import _monomials
    weights = [sig[n].degree for n in names]
    out = sig.zero()
    for exps in _monomials(weights, degree):
        c = draw(coef)
        if c:
            m = [0] * len(sig)
            for n, e in zip(names, exps):
                m[sig.index(n)] = e
            out = out + sig.monomial(m, c)
    return out


@st.composite
def decomposable(draw):
    d = draw(st.integers(2, 4))
    e = draw(st.integers(0, d - 1))
    B = _poly(draw, S4, 2 * (d - 1), ["x1", "x2", "x3", "x4"])
    Q = _poly(draw, S4, 2 * (d - e), ["x2", "x4"])
    Q = Q + draw(st.integers(1, 3)) * P("x2") ** (d - e)
    Q = Q + _poly(draw, S4, 2 * (d - e) - 2, ["x2", "x4"]) * P("x1")
    return B, e, Q


@given(decomposable())
def test_decomposition_recovers_random_data(data):
    B, e, Q = data
    A = P(A_DIFF)
    target = A * B + P("x1") ** e * Q
    d = decompose_by_A(target, A)
    assert d.verify()
    assert (d.B, d.e, d.Q) == (B, e, Q)
    assert decompose_recursive(target, A) == d or decompose_recursive(target, A).verify()


@given(decomposable())
def test_decomposition_routes_agree(data):
    B, e, Q = data
    A = P(A_DIFF)
    target = A * B + P("x1") ** e * Q
    a, b = decompose_by_A(target, A), decompose_by_linear_system(target, A)
    assert (a.B, a.e, a.Q) == (b.B, b.e, b.Q)


@st.composite
def criterion_triples(draw):
    Ps = []
    for _ in range(3):
        d = draw(st.integers(2, 3))
        e = draw(st.integers(1, d - 1))
        B = _poly(draw, S4, 2 * (d - 1), ["x1", "x2", "x3", "x4"])
        Q = _poly(draw, S4, 2 * (d - e), ["x1", "x2", "x4"])
        Ps.append(P(A_DIFF) * B + P("x1") ** e * Q)
    return Ps


@settings(max_examples=25)
@given(criterion_triples())
def test_criterion_hypotheses_imply_nonregular(Ps):
    assume(all(Ps))
    report, cert = prop22_check(*Ps, P(A_DIFF), 1)
    assume(report.ok)
    assert report.conclusion == "not-regular"
    assert cert is not None and not cert.regular


# -- homotopy to the identity when every shift vanishes --------------------------------

def test_identity_certified(squares):
    res = triviality_check(make_selfeq(squares, []))
    assert res.certified
    assert [y for y, _ in res.primitives] == ["y1", "y2"]
    assert all(not u for _, u in res.primitives)


def test_coboundary_perturbation_certified():
    model = build_f0([2, 2, 2], ["x1^2", "x2^2", "x3^6"])
    alpha = make_selfeq(model, [], {"y3": "y3 + x3^2*(x1^2*y2 - x2^2*y1)"})
    res = triviality_check(alpha)
    assert res.certified
    u = dict(res.primitives)["y3"]
    assert u == parse(model.sig, "x3^2*y1*y2")
    assert all(res.certificates)


def test_nonzero_shift_inconclusive(M):
    alpha = make_selfeq(M, {"x2": "x1^2"}, {"y2": "y2 + (2*x2 + 2*x1^2)*y1"})
    res = triviality_check(alpha)
    assert res.verdict == "inconclusive" and not res.certified
