"""Expansion of a polynomial in powers of a pivot variable, with coefficient tables.

P = sum_k theta_k * pivot^k.  Each theta_k in Q[x1, x2, x3] is homogeneous, so it
is determined by rational numbers lambda_{i,j} (coefficient of x1^a x2^i x3^j) and
rho (coefficient of the pure x1 power), the x1 exponents being forced by degree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..graded_poly import (AlgebraError, Element, INHOMOGENEOUS, coefficients_wrt,
                           cohomological_degree)


class ThetaError(AlgebraError):
    pass


@dataclass(frozen=True)
class Roles:
    """Which generators play the parts of x1, x2, x3 (x3 may be absent)."""
    x1: str = "x1"
    x2: str = "x2"
    x3: str = "x3"

    @classmethod
    def of(cls, roles) -> "Roles":
        if isinstance(roles, Roles):
            return roles
        return cls(*roles)


@dataclass(frozen=True)
class ThetaTable:
    """lambda/rho data of one homogeneous theta in Q[x1, x2, x3].

    ``a`` maps every slot (i, j) with i + j <= r to its x1 exponent, or None
    when the exponent would be negative or fractional (the slot is absent).
    """
    degree: int | None
    r: int
    lam: dict
    rho: Fraction
    a: dict
    b: int | None

    def lam_at(self, i: int, j: int) -> Fraction:
        return self.lam.get((i, j), Fraction(0))

    def exponent(self, i: int, j: int) -> int | None:
        return self.a.get((i, j))

    def rows(self) -> list[list[tuple[int, int]]]:
        """Slots grouped by total degree m = r, r-1, ..., 1."""
        return [[(i, m - i) for i in range(m + 1)] for m in range(self.r, 0, -1)]

    def top_row(self) -> list[Fraction]:
        return [self.lam_at(i, self.r - i) for i in range(self.r + 1)]

    def layout(self, roles: Roles = Roles()) -> list[str]:
        """One line per row, nonzero slots only, in the row order of ``rows``."""
        out = []
        for row in self.rows():
            parts = []
            for i, j in row:
                c = self.lam_at(i, j)
                if c:
                    parts.append(f"lambda[{i},{j}]={c} @ {_mono(roles, self.a[(i, j)], i, j)}")
            out.append("; ".join(parts) if parts else "0")
        if self.rho:
            out.append(f"rho={self.rho} @ {roles.x1}^{self.b}")
        return out


def _mono(roles: Roles, a, i, j) -> str:
    bits = []
    for name, e in ((roles.x1, a), (roles.x2, i), (roles.x3, j)):
        if e:
            bits.append(name if e == 1 else f"{name}^{e}")
    return "*".join(bits) or "1"


@dataclass(frozen=True)
class ThetaExpansion:
    P: Element
    pivot: str
    roles: Roles
    thetas: tuple
    tables: tuple
    divisibility: dict = field(default_factory=dict)

    @property
    def s(self) -> int:
        return len(self.thetas) - 1

    def theta(self, k: int) -> Element:
        if 0 <= k < len(self.thetas):
            return self.thetas[k]
        return self.P.sig.zero()

    def table(self, k: int) -> ThetaTable | None:
        return self.tables[k]

    @property
    def top(self) -> ThetaTable:
        t = self.tables[self.s]
        if t is None:
            raise ThetaError("the leading coefficient is not a polynomial in x1, x2, x3")
        return t

    def reassemble(self) -> Element:
        sig = self.P.sig
        x = sig.gen(self.pivot)
        out = sig.zero()
        for k, th in enumerate(self.thetas):
            out = out + th * x ** k
        return out


def _deg(sig, name):
    return sig[name].degree if name in sig else None


def theta_table(theta: Element, roles=Roles()) -> ThetaTable | None:
    """Table of a homogeneous theta, or None if theta involves other variables."""
    roles = Roles.of(roles)
    sig = theta.sig
    allowed = {n for n in (roles.x1, roles.x2, roles.x3) if n in sig}
    if not theta.variables() <= allowed:
        return None
    if roles.x1 not in sig:
        raise ThetaError(f"{roles.x1} is not a generator")
    if not theta:
        return ThetaTable(None, -1, {}, Fraction(0), {}, None)
    d = cohomological_degree(theta)
    if d is INHOMOGENEOUS:
        raise ThetaError("theta is not homogeneous")
    w1, w2, w3 = _deg(sig, roles.x1), _deg(sig, roles.x2), _deg(sig, roles.x3)
    i1 = sig.index(roles.x1)
    i2 = sig.index(roles.x2) if w2 is not None else None
    i3 = sig.index(roles.x3) if w3 is not None else None
    found = {}
    for m, c in theta.terms.items():
        i = m[i2] if i2 is not None else 0
        j = m[i3] if i3 is not None else 0
        found[(i, j)] = (m[i1], c)
    r = max(i + j for i, j in found)
    a, lam = {}, {}
    for tot in range(r + 1):
        for i in range(tot + 1):
            j = tot - i
            if (i and w2 is None) or (j and w3 is None):
                a[(i, j)] = None
                continue
            num = d - i * (w2 or 0) - j * (w3 or 0)
            a[(i, j)] = num // w1 if num >= 0 and num % w1 == 0 else None
    for (i, j), (e, c) in found.items():
        if a[(i, j)] != e:
            # cannot happen for homogeneous input; guards the bookkeeping
            raise ThetaError(f"exponent slot ({i},{j}) is inconsistent with the degree")
        if (i, j) != (0, 0):
            lam[(i, j)] = Fraction(c)
    rho = Fraction(found[(0, 0)][1]) if (0, 0) in found else Fraction(0)
    return ThetaTable(d, r, lam, rho, a, a.get((0, 0)))


def theta_expand(P: Element, pivot: str = "x4", roles=Roles()) -> ThetaExpansion:
    """Write P = sum_k theta_k pivot^k and tabulate every theta_k."""
    roles = Roles.of(roles)
    if not P:
        raise ThetaError("cannot expand the zero polynomial")
    if P.contains_odd():
        raise ThetaError("P involves an odd generator")
    dP = cohomological_degree(P)
    if dP is INHOMOGENEOUS:
        raise ThetaError("P is not homogeneous")
    sig = P.sig
    thetas = tuple(coefficients_wrt(P, pivot))
    wp = sig[pivot].degree
    for k, th in enumerate(thetas):
        if th and cohomological_degree(th) + k * wp != dP:
            raise AssertionError("degree bookkeeping of the expansion failed")
    tables = tuple(theta_table(th, roles) for th in thetas)
    return ThetaExpansion(P, pivot, roles, thetas, tables, degree_facts(sig, roles))


def degree_facts(sig, roles=Roles()) -> dict:
    """Integrality of the degree ratios that the coefficient formulas rely on."""
    roles = Roles.of(roles)
    w1, w2, w3 = _deg(sig, roles.x1), _deg(sig, roles.x2), _deg(sig, roles.x3)
    out = {"x2/x1": w2 is not None and w2 % w1 == 0}
    if w3 is not None and w2 is not None:
        out["x3/x1"] = w3 % w1 == 0
        out["(x3-x2)/x1"] = (w3 - w2) % w1 == 0
    return out


def build_theta(sig, lam: dict, rho, degree: int, roles=Roles()) -> Element:
    """The theta with the given table; slots whose exponent is absent must be zero."""
    roles = Roles.of(roles)
    w1, w2 = sig[roles.x1].degree, sig[roles.x2].degree
    w3 = sig[roles.x3].degree if roles.x3 in sig else 0
    x1, x2 = sig.gen(roles.x1), sig.gen(roles.x2)
    x3 = sig.gen(roles.x3) if roles.x3 in sig else sig.one()
    out = sig.zero()
    items = list(lam.items()) + ([((0, 0), rho)] if rho else [])
    for (i, j), c in items:
        if not c:
            continue
        num = degree - i * w2 - j * w3
        if num < 0 or num % w1:
            raise ThetaError(f"slot ({i},{j}) has no integral x1 exponent in degree {degree}")
        out = out + Fraction(c) * x1 ** (num // w1) * x2 ** i * x3 ** j
    return out


def table_slots(r: int) -> Sequence[tuple[int, int]]:
    return [(i, m - i) for m in range(r, 0, -1) for i in range(m + 1)]
