"""Seeded randomized checks of the binomial identities, coefficient formulas,
lambda-table lemmas and decompositions used by the self-equivalence analysis.

Every trial draws from its own generator seeded by (seed, family, index), so the
report is reproducible and trials may be run in any order.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from ..graded_poly import AlgebraError, Element, GradedSignature, coeff_wrt
from ..linalg import nullspace
from .constraints import (a_polynomial, lower_row_ratios_hold, top_coefficient_prediction,
                          top_row_forces_zero, top_row_ratios_hold)
from .decompose import (_monomials, decompose_by_A, decompose_by_linear_system,
                        decompose_recursive, quotient_trace, x1_valuation)
from .formulas import coefficient, formula_table, general_top_check, shift_difference
from .selfequiv import EvenMap, pivot_expansion_prediction, verify_prop31
from .theta import Roles, build_theta, theta_expand, theta_table

ROLES = Roles()
COEF = 10


@dataclass
class IdentityReport:
    seed: int
    trials: int
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        out = [f"seed: {self.seed}", f"trials: {self.trials}"]
        for fam, (passed, total) in self.counts.items():
            out.append(f"{fam}: {passed}/{total}")
        out.extend(f"failure: {f}" for f in self.failures)
        out.append(f"result: {'PASS' if self.ok else 'FAIL'}")
        return out


def _rng(seed, family, idx) -> random.Random:
    return random.Random(f"{seed}:{family}:{idx}")


def _nonzero(rng, bound=COEF) -> int:
    return rng.choice([k for k in range(-bound, bound + 1) if k])


def _random_poly(rng, sig, degree, names=None, terms=4, exclude=()) -> Element:
    """Random homogeneous polynomial of the given degree in the named generators."""
    names = names or [g.name for g in sig.generators]
    weights = [sig[n].degree for n in names]
    monos = _monomials(weights, degree)
    monos = [m for m in monos if not any(m[names.index(x)] for x in exclude if x in names)]
    out = sig.zero()
    for m in rng.sample(monos, min(terms, len(monos))):
        full = [0] * len(sig)
        for n, e in zip(names, m):
            full[sig.index(n)] = e
        out = out + sig.monomial(full, _nonzero(rng))
    return out


def _sig4(rng) -> GradedSignature:
    """|x1| = 2 <= |x2| <= |x3| <= |x4|, all even."""
    d2 = rng.choice([2, 4])
    d3 = rng.choice([d for d in (2, 4, 6) if d >= d2])
    d4 = rng.choice([d for d in (2, 4, 6) if d >= d3])
    return GradedSignature.of(("x1", 2), ("x2", d2), ("x3", d3), ("x4", d4))


def _x1pow(sig, name):
    return sig.gen("x1") ** (sig[name].degree // sig["x1"].degree)


# -- families -------------------------------------------------------------------------

def binomial_alternating(rng) -> bool:
    ms = list(range(1, 13)) + [rng.randint(13, 40)]
    return all(sum((-1) ** k * comb(m, k) for k in range(m + 1)) == 0 for m in ms)


def binomial_product(rng) -> bool:
    j = rng.randint(0, 10)
    for i in range(j + 1):
        for k in range(j - i + 1):
            if comb(i + k, k) * comb(j, j - i - k) != comb(j, i) * comb(j - i, k):
                return False
    return True


def _invariant_P1(rng, sig):
    """Random P1 in x1, I23, I24, I34 (fixed by x_i -> x_i + c_i x1^(|x_i|/|x1|))."""
    c = {n: _nonzero(rng) for n in ("x2", "x3", "x4")}
    A = {n: c[n] * _x1pow(sig, n) for n in c}
    x = {n: sig.gen(n) for n in ("x1", "x2", "x3", "x4")}
    inv = [x["x1"],
           A["x2"] * x["x3"] - A["x3"] * x["x2"],
           A["x2"] * x["x4"] - A["x4"] * x["x2"],
           A["x3"] * x["x4"] - A["x4"] * x["x3"]]
    w = [2, sig["x2"].degree + sig["x3"].degree, sig["x2"].degree + sig["x4"].degree,
         sig["x3"].degree + sig["x4"].degree]
    target = rng.randint(1, 3) * w[3] + 2 * rng.randint(0, 2)
    monos = [m for m in _monomials(w, target) if 1 <= m[2] + m[3] <= 4]
    P = sig.zero()
    for m in rng.sample(monos, min(3, len(monos))):
        t = sig.const(_nonzero(rng))
        for base, e in zip(inv, m):
            t = t * base ** e
        P = P + t
    return P, EvenMap(sig, A)


def pivot_identity(rng) -> bool:
    sig = _sig4(rng)
    P, amap = _invariant_P1(rng, sig)
    if not P:
        return True
    if amap(P) != P:
        return False
    exp = theta_expand(P, "x4", ROLES)
    return all(verify_prop31(_Holder(amap), exp).values())


class _Holder:
    def __init__(self, amap):
        self.x_map = amap


def _random_table_theta(rng, sig, r, extra=None):
    extra = rng.randint(0, 2) if extra is None else extra
    degree = r * sig["x3"].degree + 2 * extra
    lam = {}
    for m in range(1, r + 1):
        for i in range(m + 1):
            if rng.random() < 0.7 or (m == r and i == 0):
                lam[(i, m - i)] = rng.randint(-COEF, COEF)
    rho = rng.randint(-COEF, COEF)
    return build_theta(sig, lam, rho, degree, ROLES)


def formulas(rng) -> bool:
    sig = _sig4(rng)
    theta = _random_table_theta(rng, sig, rng.randint(1, 4))
    omega = Fraction(rng.randint(-COEF, COEF), rng.randint(1, 3))
    D = Fraction(rng.randint(-COEF, COEF), rng.randint(1, 3))
    if not formula_table(theta, ROLES, omega, D).ok:
        return False
    A2 = rng.randint(-COEF, COEF) * _x1pow(sig, "x2")
    A3 = rng.randint(-COEF, COEF) * _x1pow(sig, "x3")
    return general_top_check(theta, ROLES, A2, A3)


def invariant_theta(rng, sig, r, omega, D, extra):
    """A random theta of (x2, x3)-degree r fixed by x2 -> x2 + A2, x3 -> x3 + A3.

    Found as a random point of the nullspace of the columns alpha(m) - m over every
    slot monomial m (and the pure x1 power).
    """
    degree = r * sig["x3"].degree + 2 * extra
    A2 = omega * _x1pow(sig, "x2")
    A3 = omega * D * _x1pow(sig, "x3")
    slots = [(i, m - i) for m in range(r, -1, -1) for i in range(m + 1)]
    monos = [build_theta(sig, {s: 1} if s != (0, 0) else {}, 1 if s == (0, 0) else 0, degree, ROLES)
             for s in slots]
    cols = [shift_difference(mono, ROLES, A2, A3).terms for mono in monos]
    basis = nullspace(cols)
    theta = sig.zero()
    for vec in basis:
        c = rng.randint(-COEF, COEF)
        for coef, mono in zip(vec, monos):
            if coef:
                theta = theta + c * coef * mono
    return theta


def row_ratios(rng) -> bool:
    sig = _sig4(rng)
    r = rng.randint(2, 4)
    omega = _nonzero(rng)
    D = Fraction(_nonzero(rng), rng.randint(1, 3))
    for _ in range(20):
        theta = invariant_theta(rng, sig, r, omega, D, rng.randint(0, 2))
        t = theta_table(theta, ROLES)
        if t is not None and t.r == r and t.lam_at(0, r):
            break
    else:
        raise AlgebraError("could not draw an invariant table with lambda[0,r] != 0")
    lam0, lam1 = t.lam_at(0, r), t.lam_at(1, r - 1)
    if not lam1 or -lam1 / (r * lam0) != D:
        return False
    ratio = lam1 / (r * lam0)
    nonzero_top = all(t.lam_at(i, r - i) for i in range(r + 1))
    return top_row_ratios_hold(t, ratio) and lower_row_ratios_hold(t, ratio) and nonzero_top


def case1_cascade(rng) -> bool:
    """lambda[1,r-1] = 0: A3 = 0 is forced, and then any nonzero higher lambda forces A2 = 0."""
    sig = _sig4(rng)
    r = rng.randint(2, 4)
    degree = r * sig["x3"].degree
    lam = {(0, r): _nonzero(rng), (1, r - 1): 0}
    higher = rng.random() < 0.75
    for i in range(2, r + 1):
        lam[(i, r - i)] = rng.randint(-COEF, COEF) if higher else 0
    if higher and not any(lam[(i, r - i)] for i in range(2, r + 1)):
        lam[(r, 0)] = _nonzero(rng)
    theta = build_theta(sig, lam, 0, degree, ROLES)
    t = theta_table(theta, ROLES)
    forced = top_row_forces_zero(t, sig, ROLES)
    # independent route: the x3^(r-1) coefficient is r lambda_0 x1^a A3, so A3 = 0;
    # with A3 = 0 and A2 = x1^(|x2|/|x1|) the degree r-1 part must vanish
    if coefficient(shift_difference(theta, ROLES, sig.zero(), _x1pow(sig, "x3")), ROLES, 0, r - 1) == 0:
        return False
    diff = shift_difference(theta, ROLES, _x1pow(sig, "x2"), sig.zero())
    survives = any(coefficient(diff, ROLES, p, r - 1 - p) for p in range(r))
    # with A2 surviving, the cascade would need every higher lambda to be zero
    return forced == higher and survives == higher


def quotient_chain(rng) -> bool:
    sig = _sig4(rng)
    Phi = _random_table_theta(rng, sig, rng.randint(1, 4))
    omega = _nonzero(rng)
    D = Fraction(_nonzero(rng), rng.randint(1, 2))
    A2 = omega * _x1pow(sig, "x2")
    A3 = omega * D * _x1pow(sig, "x3")
    U = shift_difference(Phi, ROLES, A2, A3)
    delta = sig.gen("x1") ** ((sig["x3"].degree - sig["x2"].degree) // 2)
    A_red = sig.gen("x3") - D * delta * sig.gen("x2")
    return quotient_trace(Phi, U, ROLES, omega, D, A_red).ok


def pivot_expansion(rng) -> bool:
    """alpha(P) - P collected by pivot powers, and the x3^r x4^(s-1) coefficient."""
    sig = _sig4(rng)
    s = rng.randint(1, 4)
    d4 = sig["x4"].degree
    top = rng.randint(1, 3) * sig["x3"].degree + s * d4
    phis = []
    for j in range(s + 1):
        phis.append(_random_poly(rng, sig, top - j * d4, ["x1", "x2", "x3"], terms=3))
    if not phis[s]:
        phis[s] = sig.gen("x1") ** ((top - s * d4) // 2)
    x4 = sig.gen("x4")
    P = sig.zero()
    for j, ph in enumerate(phis):
        P = P + ph * x4 ** j
    A = {n: rng.randint(-COEF, COEF) * _x1pow(sig, n) for n in ("x2", "x3", "x4")}
    amap = EvenMap(sig, A)
    if pivot_expansion_prediction(phis, amap, "x4") != amap(P) - P:
        return False
    exp = theta_expand(P, "x4", ROLES)
    r = exp.top.r
    brute = coefficient(coeff_wrt(amap(P) - P, "x4", s - 1), ROLES, 0, r)
    return top_coefficient_prediction(exp, ROLES, A["x2"], A["x3"], A["x4"]) == brute


def decomposition(rng) -> bool:
    """Rebuild (B, e, Q) from P = A B + x1^e Q by three independent routes."""
    sig = _sig4(rng)
    r = rng.randint(1, 3)
    lam0, lam1 = _nonzero(rng), _nonzero(rng)
    _, A = a_polynomial(sig, ROLES, r, lam0, lam1)
    dA = sig["x3"].degree
    dP = dA + 2 * rng.randint(0, 3) + sig["x4"].degree * rng.randint(0, 1)
    B = _random_poly(rng, sig, dP - dA, terms=3)
    exact = rng.random() < 0.1
    e = rng.randint(0, (dP - 2) // 2)
    Q = sig.zero()
    if not exact:
        Q = _random_poly(rng, sig, dP - 2 * e, ["x1", "x2", "x4"], terms=3)
        if not Q or x1_valuation(Q) > 0:
            free = _random_poly(rng, sig, dP - 2 * e, ["x2", "x4"], terms=1)
            if free:
                Q = Q + free
            else:
                e, Q = dP // 2, sig.const(_nonzero(rng))
    P = A * B + sig.gen("x1") ** e * Q
    d = decompose_by_A(P, A, ROLES)
    if not d.verify():
        return False
    if Q:
        if (d.B, d.e, d.Q) != (B, e, Q):
            return False
    elif not d.exact_multiple or d.B != B:
        return False
    lin = decompose_by_linear_system(P, A, ROLES)
    rec = decompose_recursive(P, A, ROLES)
    return (lin.B, lin.e, lin.Q) == (d.B, d.e, d.Q) == (rec.B, rec.e, rec.Q)


FAMILIES: dict[str, Callable] = {
    "binomial alternating sums": binomial_alternating,
    "binomial product identity": binomial_product,
    "pivot coefficient identity": pivot_identity,
    "coefficient closed forms": formulas,
    "row ratio lemmas": row_ratios,
    "case-1 cascade": case1_cascade,
    "quotient coefficient chain": quotient_chain,
    "pivot expansion": pivot_expansion,
    "decomposition round trip": decomposition,
}


def run_family(name: str, seed: int, trials: int) -> tuple[int, list[str]]:
    fn = FAMILIES[name]
    passed, failures = 0, []
    for idx in range(trials):
        try:
            ok = fn(_rng(seed, name, idx))
        except AlgebraError as exc:
            ok = False
            failures.append(f"{name} #{idx}: {exc}")
        else:
            if not ok:
                failures.append(f"{name} #{idx}")
        passed += bool(ok)
    return passed, failures


def verify_identities(seed: int, trials: int, families=None) -> IdentityReport:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    report = IdentityReport(seed, trials)
    for name in families or FAMILIES:
        passed, failures = run_family(name, seed, trials)
        report.counts[name] = (passed, trials)
        report.failures.extend(failures)
    return report
