import random

import pytest
from hypothesis import example, given, strategies as st

from f0sullivan.dga import (DifferentialError, HomotopyFailure, Morphism,
                            ResourceLimit, apply_differential, bar, build_cylinder, check_homotopy,
                            cohomology_dimension, e_theta, hat, homotopy_from_primitive, identity,
                            is_cochain_map, make_cochain_algebra, reflexivity_certificate,
                            solve_coboundary)
from f0sullivan.f0_model import build_f0
from f0sullivan.graded_poly import AlgebraError, GradedSignature, cohomological_degree, parse
from conftest import random_model


def s2_model():
    sig = GradedSignature.of(("x", 2), ("y", 3))
    return make_cochain_algebra(sig, {"y": parse(sig, "x^2")})


def test_valid_and_invalid_differentials():
    alg = s2_model()
    assert alg.d(alg.sig.gen("y")) == parse(alg.sig, "x^2")
    sig = GradedSignature.of(("x", 2), ("y", 3), ("z", 4))
    with pytest.raises(DifferentialError, match=r"d\^2 != 0 at z"):
        make_cochain_algebra(sig, {"y": parse(sig, "x^2"), "z": parse(sig, "x*y")})
    sig = GradedSignature.of(("x", 2), ("y", 3))
    with pytest.raises(DifferentialError):
        make_cochain_algebra(sig, {"y": parse(sig, "x")})
    with pytest.raises(DifferentialError):
        make_cochain_algebra(GradedSignature.of(("t", 1)), {})


def test_leibniz_examples():
    m = build_f0([2, 2], ["x1^2", "x2^2"])
    alg, sig = m.algebra, m.sig
    assert apply_differential(alg, parse(sig, "y1*y2")) == parse(sig, "x1^2*y2 - y1*x2^2")
    assert apply_differential(alg, parse(sig, "x1^2")) == sig.zero()
    assert apply_differential(alg, parse(sig, "(x1 + 3*x2)*y1")) == parse(sig, "(x1 + 3*x2)*x1^2")


def model_M():
    return build_f0([2, 4], ["x1^2", "x2^2 + x1^2*x2"])


def test_cochain_map_examples():
    m = model_M()
    assert is_cochain_map(identity(m.algebra))
    sig = m.sig
    good = Morphism(m.algebra, m.algebra, {"x2": parse(sig, "x2 + x1^2"),
                                             "y2": parse(sig, "y2 + (2*x2 + 2*x1^2)*y1")})
    assert is_cochain_map(good)
    bad = Morphism(m.algebra, m.algebra, {"x2": parse(sig, "x2 + x1^2")})
    v = is_cochain_map(bad)
    assert not v and v.where == "y2"


def test_cylinder_of_s2():
    cyl = build_cylinder(s2_model())
    degs = {g.name: g.degree for g in cyl.sig.generators}
    assert degs == {"x": 2, "x_bar": 1, "x_hat": 2, "y": 3, "y_bar": 2, "y_hat": 3}
    g = cyl.sig.gen
    assert cyl.D(g("x_bar")) == g("x_hat")
    assert cyl.D(g("y_hat")) == cyl.sig.zero()
    assert cyl.S(g("x") ** 2) == 2 * g("x_bar") * g("x")
    assert cyl.S(g("x_bar")) == cyl.sig.zero() and cyl.S(g("y_hat")) == cyl.sig.zero()


def test_e_theta_on_s2():
    cyl = build_cylinder(s2_model())
    g = cyl.sig.gen
    assert e_theta(cyl, "y") == g("y") + g("y_hat") + 2 * g("x") * g("x_bar") + g("x_bar") * g("x_hat")
    assert e_theta(cyl, "x") == g("x") + g("x_hat")


def test_reflexivity_certificate():
    m = model_M()
    cyl = build_cylinder(m.algebra)
    alpha = identity(m.algebra)
    assert check_homotopy(cyl, reflexivity_certificate(alpha), alpha, alpha)


def test_primitive_homotopy_and_perturbation():
    m = build_f0([2, 2, 2], ["x1^2", "x2^2", "x3^6"])
    alg, sig = m.algebra, m.sig
    u = parse(sig, "x3^2*y1*y2")
    alpha = identity(alg)
    beta = Morphism(alg, alg, {"y3": sig.gen("y3") + alg.d(u)})
    cert = homotopy_from_primitive(alpha, beta, "y3", u)
    assert cert and cert.F[bar("y3")] == u and cert.F[hat("y3")] == alg.d(u)
    cyl = build_cylinder(alg)
    F = dict(cert.F)
    F[bar("y3")] = 2 * u
    fail = check_homotopy(cyl, F, alpha, beta)
    assert isinstance(fail, HomotopyFailure)
    assert (fail.invariant, fail.generator) == ("D-compatibility", bar("y3"))


def test_trivial_primitive_certificate():
    m = model_M()
    alpha = identity(m.algebra)
    cert = homotopy_from_primitive(alpha, alpha, "y2", m.sig.zero())
    assert cert and not cert.F[bar("y2")] and not cert.F[hat("y2")]


def test_primitive_contract_violations():
    m = model_M()
    alg, sig = m.algebra, m.sig
    alpha = identity(alg)
    beta = Morphism(alg, alg, {"y2": sig.gen("y2") + parse(sig, "x1^2*y1")})
    with pytest.raises(AlgebraError):
        homotopy_from_primitive(alpha, beta, "y2", sig.zero())
    with pytest.raises(AlgebraError):
        homotopy_from_primitive(alpha, beta, "y1", sig.zero())


def test_cohomology_examples():
    alg = s2_model()
    assert [cohomology_dimension(alg, d) for d in range(5)] == [1, 0, 1, 0, 0]
    m = build_f0([2, 2], ["x1^2", "x2^2"])
    assert [cohomology_dimension(m.algebra, d) for d in range(7)] == [1, 0, 2, 0, 1, 0, 0]
    with pytest.raises(ResourceLimit):
        cohomology_dimension(m.algebra, 40, cap=10)


def test_solve_coboundary_examples():
    alg = s2_model()
    sig = alg.sig
    assert solve_coboundary(alg, parse(sig, "x^2")) == sig.gen("y")
    assert solve_coboundary(alg, parse(sig, "x")) is None
    assert solve_coboundary(alg, sig.zero()) == sig.zero()
    with pytest.raises(AlgebraError):
        solve_coboundary(alg, sig.gen("y"))


# -- random models ------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(40))
def test_cylinder_differential_squares_to_zero(seed):
    cyl = build_cylinder(random_model(random.Random(seed)))
    for g in cyl.sig.generators:
        assert not cyl.D(cyl.D(cyl.sig.gen(g.name)))


@pytest.mark.parametrize("seed", range(40))
def test_e_theta_terminates_within_degree(seed):
    alg = random_model(random.Random(seed))
    cyl = build_cylinder(alg)
    for g in alg.sig.generators:
        total, steps = e_theta(cyl, g.name, return_steps=True)
        assert steps <= g.degree
        assert cohomological_degree(total) == g.degree


@given(st.lists(st.integers(-1, 1), min_size=8, max_size=8))
@example([1, 0, 0, 1, 1, 0, 0, 1])
@example([0, 1, 1, 0, 0, 1, 1, 0])
@example([-1, 0, 0, 1, 1, 0, 0, 1])
@example([1, 0, 0, 1, 1, 0, 0, 0])
def test_reflexivity_certificate_passes_exactly_for_cochain_maps(c):
    m = build_f0([2, 2], ["x1^2", "x2^2"])
    g = m.sig.gen
    alpha = Morphism(m.algebra, m.algebra, {
        "x1": c[0] * g("x1") + c[1] * g("x2"), "x2": c[2] * g("x1") + c[3] * g("x2"),
        "y1": c[4] * g("y1") + c[5] * g("y2"), "y2": c[6] * g("y1") + c[7] * g("y2")})
    cyl = build_cylinder(m.algebra)
    cert = check_homotopy(cyl, reflexivity_certificate(alpha), alpha, alpha)
    assert bool(cert) == bool(is_cochain_map(alpha))
    if not cert:
        assert cert.invariant == "D-compatibility"


@pytest.mark.parametrize("seed", range(20))
def test_solve_coboundary_soundness_and_completeness(seed):
    rng = random.Random(seed)
    m = build_f0([2, 2], ["x1^2", "x2^2"])
    alg, sig = m.algebra, m.sig
    deg = rng.choice([3, 5, 7, 9])
    from f0sullivan.dga import monomial_basis
    basis = monomial_basis(sig, deg - 1)
    w = sig.zero()
    for mono in rng.sample(basis, min(3, len(basis))):
        w = w + sig.monomial(mono, rng.randint(-3, 3))
    z = alg.d(w)
    u = solve_coboundary(alg, z)
    assert u is not None and alg.d(u) == z
    # even-degree cocycles in low degree: x1 is a cocycle, not a coboundary, and H^2 != 0
    assert solve_coboundary(alg, sig.gen("x1")) is None
    assert cohomology_dimension(alg, 2) > 0
