"""Closed forms for the coefficients of alpha(theta) - theta, checked against expansion.

Here alpha moves x2 and x3 by A2 = omega * x1^(|x2|/|x1|) and A3 = omega * D *
x1^(|x3|/|x1|) and fixes x1.  For a theta with table lambda (total degree r in
x2, x3) the coefficient of x2^p x3^q in alpha(theta) - theta has a closed form in
omega, D and the lambdas; so does the coefficient of x2^(r-i) after x3 is replaced
by the root D * x1^delta * x2 of the A-polynomial.  Every closed form below is
paired with the value read off the expanded polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from ..graded_poly import AlgebraError, Element, apply_map, coeff_wrt, substitute_unchecked
from .theta import Roles, ThetaTable, theta_table


class FormulaError(AlgebraError):
    pass


def x1_power(sig, roles: Roles, numerator: int) -> Element | None:
    """x1^(numerator/|x1|), or None when that exponent is not a natural number."""
    w1 = sig[roles.x1].degree
    if numerator < 0 or numerator % w1:
        return None
    return sig.gen(roles.x1) ** (numerator // w1)


def _scaled(sig, roles, c: Fraction, numerator: int, what: str) -> Element:
    if not c:
        return sig.zero()
    p = x1_power(sig, roles, numerator)
    if p is None:
        raise FormulaError(f"{what}: nonzero coefficient but no integral x1 exponent")
    return c * p


def row_sum(t: ThetaTable, m: int, D: Fraction) -> Fraction:
    """S_m = sum_k lambda_{k,m-k} D^(m-k): row m evaluated at the root, up to x1 powers."""
    return sum((t.lam_at(k, m - k) * D ** (m - k) for k in range(m + 1)), Fraction(0))


def closed_E(t: ThetaTable, sig, roles: Roles, omega, D, i: int) -> Element:
    """Coefficient of x3^i (no x2)."""
    r = t.r
    c = Fraction(0)
    for j in range(r - i):
        inner = sum((comb(r - j - s, i) * t.lam_at(s, r - j - s) * D ** (r - i - j - s)
                     for s in range(r - i - j + 1)), Fraction(0))
        c += omega ** (r - i - j) * inner
    return _scaled(sig, roles, c, t.degree - i * sig[roles.x3].degree, f"E[{i}]")


def closed_F(t: ThetaTable, sig, roles: Roles, omega, D, i: int) -> Element:
    """Coefficient of x2^i (no x3)."""
    r = t.r
    c = Fraction(0)
    for j in range(r - i):
        inner = sum((comb(r - j - s, i) * t.lam_at(r - j - s, s) * D ** s
                     for s in range(r - i - j + 1)), Fraction(0))
        c += omega ** (r - i - j) * inner
    return _scaled(sig, roles, c, t.degree - i * sig[roles.x2].degree, f"F[{i}]")


def closed_G(t: ThetaTable, sig, roles: Roles, omega, D, sigma: int, i: int) -> Element:
    """Coefficient of x2^sigma x3^(i - sigma)."""
    r = t.r
    c = Fraction(0)
    for j in range(r - i):
        inner = Fraction(0)
        for u in range(r - j - i + 1):
            inner += (comb(sigma + u, sigma) * comb(r - j - sigma - u, i - sigma)
                      * t.lam_at(sigma + u, r - j - sigma - u) * D ** (r - i - j - u))
        c += omega ** (r - i - j) * inner
    num = t.degree - sigma * sig[roles.x2].degree - (i - sigma) * sig[roles.x3].degree
    return _scaled(sig, roles, c, num, f"G[{sigma},{i - sigma}]")


def closed_free(t: ThetaTable, sig, roles: Roles, omega, D) -> Element:
    r = t.r
    c = sum((omega ** (r - j) * row_sum(t, r - j, D) for j in range(r)), Fraction(0))
    return _scaled(sig, roles, c, t.degree, "free term")


def closed_after_root(t: ThetaTable, sig, roles: Roles, omega, D, i: int) -> Element:
    """Coefficient of x2^(r-i) once x3 is replaced by D x1^delta x2, for 1 <= i <= r."""
    r = t.r
    c = sum((omega ** (i - j) * comb(r - j, r - i) * row_sum(t, r - j, D) for j in range(i)),
            Fraction(0))
    return _scaled(sig, roles, c, t.degree - (r - i) * sig[roles.x2].degree, f"root[{r - i}]")


def top_E_general(t: ThetaTable, sig, roles: Roles, A2: Element, A3: Element) -> Element:
    """Coefficient of x3^(r-1) for arbitrary A2, A3 in Q[x1]."""
    r = t.r
    out = sig.zero()
    for i, c, A in ((0, r * t.lam_at(0, r), A3), (1, t.lam_at(1, r - 1), A2)):
        if c:
            out = out + c * sig.gen(roles.x1) ** t.a[(i, r - i)] * A
    return out


def top_F_general(t: ThetaTable, sig, roles: Roles, A2: Element, A3: Element) -> Element:
    """Coefficient of x2^(r-1) for arbitrary A2, A3 in Q[x1]."""
    r = t.r
    out = sig.zero()
    for i, c, A in ((r, r * t.lam_at(r, 0), A2), (r - 1, t.lam_at(r - 1, 1), A3)):
        if c:
            out = out + c * sig.gen(roles.x1) ** t.a[(i, r - i)] * A
    return out


# -- brute force ---------------------------------------------------------------------

def shift_difference(theta: Element, roles: Roles, A2: Element, A3: Element) -> Element:
    """alpha(theta) - theta for x2 -> x2 + A2, x3 -> x3 + A3."""
    sig = theta.sig
    images = {roles.x2: sig.gen(roles.x2) + A2}
    if roles.x3 in sig:
        images[roles.x3] = sig.gen(roles.x3) + A3
    return apply_map(theta, images) - theta


def coefficient(p: Element, roles: Roles, i: int, j: int) -> Element:
    """Coefficient of x2^i x3^j, an element of Q[x1] when p lies in Q[x1, x2, x3]."""
    q = coeff_wrt(p, roles.x2, i)
    return coeff_wrt(q, roles.x3, j) if roles.x3 in p.sig else (q if j == 0 else p.sig.zero())


def shifts(sig, roles: Roles, omega, D) -> tuple[Element, Element]:
    """A2 = omega x1^(|x2|/|x1|) and A3 = omega D x1^(|x3|/|x1|)."""
    p2 = x1_power(sig, roles, sig[roles.x2].degree)
    p3 = x1_power(sig, roles, sig[roles.x3].degree)
    if p2 is None or p3 is None:
        raise FormulaError("|x2| and |x3| must be multiples of |x1|")
    return Fraction(omega) * p2, Fraction(omega) * Fraction(D) * p3


def root(sig, roles: Roles, D) -> Element:
    """D x1^((|x3| - |x2|)/|x1|) x2."""
    p = x1_power(sig, roles, sig[roles.x3].degree - sig[roles.x2].degree)
    if p is None:
        raise FormulaError("(|x3| - |x2|)/|x1| must be a natural number")
    return Fraction(D) * p * sig.gen(roles.x2)


# -- the table ---------------------------------------------------------------------------

@dataclass
class FormulaTable:
    r: int
    entries: list = field(default_factory=list)

    def add(self, label: str, closed: Element, brute: Element) -> None:
        self.entries.append((label, closed, brute))

    def mismatches(self) -> list[str]:
        return [label for label, c, b in self.entries if c != b]

    @property
    def ok(self) -> bool:
        return not self.mismatches()

    def lines(self) -> list[str]:
        return [f"{label}: {'ok' if c == b else 'MISMATCH'} ({c})" for label, c, b in self.entries]


def formula_table(theta: Element, roles, omega, D) -> FormulaTable:
    """All closed forms for one theta, each with its expanded counterpart."""
    roles = Roles.of(roles)
    sig = theta.sig
    t = theta_table(theta, roles)
    if t is None:
        raise FormulaError("theta must lie in Q[x1, x2, x3]")
    omega, D = Fraction(omega), Fraction(D)
    table = FormulaTable(t.r)
    if t.r < 1:
        return table
    A2, A3 = shifts(sig, roles, omega, D)
    diff = shift_difference(theta, roles, A2, A3)
    r = t.r
    # nothing survives in total degree >= r
    for tot in range(r, r + 1):
        for p in range(tot + 1):
            table.add(f"vanishing[{p},{tot - p}]", sig.zero(), coefficient(diff, roles, p, tot - p))
    table.add("E[r-1] general", top_E_general(t, sig, roles, A2, A3), coefficient(diff, roles, 0, r - 1))
    table.add("F[r-1] general", top_F_general(t, sig, roles, A2, A3), coefficient(diff, roles, r - 1, 0))
    for i in range(1, r):
        table.add(f"E[{i}]", closed_E(t, sig, roles, omega, D, i), coefficient(diff, roles, 0, i))
        table.add(f"F[{i}]", closed_F(t, sig, roles, omega, D, i), coefficient(diff, roles, i, 0))
    for i in range(2, r):
        for s in range(1, i):
            table.add(f"G[{s},{i - s}]", closed_G(t, sig, roles, omega, D, s, i),
                      coefficient(diff, roles, s, i - s))
    table.add("free", closed_free(t, sig, roles, omega, D), coefficient(diff, roles, 0, 0))
    at_root = substitute_unchecked(diff, roles.x3, root(sig, roles, D))
    for i in range(1, r + 1):
        table.add(f"root[{r - i}]", closed_after_root(t, sig, roles, omega, D, i),
                  coeff_wrt(at_root, roles.x2, r - i))
    return table


def general_top_check(theta: Element, roles, A2: Element, A3: Element) -> bool:
    """The x3^(r-1) and x2^(r-1) coefficients for independent A2, A3 in Q[x1]."""
    roles = Roles.of(roles)
    t = theta_table(theta, roles)
    if t is None or t.r < 1:
        return True
    diff = shift_difference(theta, roles, A2, A3)
    r = t.r
    return (top_E_general(t, theta.sig, roles, A2, A3) == coefficient(diff, roles, 0, r - 1)
            and top_F_general(t, theta.sig, roles, A2, A3) == coefficient(diff, roles, r - 1, 0))
