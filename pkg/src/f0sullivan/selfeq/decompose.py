"""Decompositions P = A*B + x1^e*Q for a polynomial A linear in x3.

A has the shape c*x1^a*x3 + (terms free of x3), so inside Q[x1, x2, ...] it has the
single root x3 = root with root free of x3.  Replacing x3 by the root kills A*B,
which gives x1^e*Q = P(x3 -> root) directly; B is then an exact quotient.  The
two facts are checked separately, so a returned decomposition is always sound.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from ..graded_poly import (AlgebraError, Element, INHOMOGENEOUS, coeff_wrt, coefficients_wrt,
                           cohomological_degree, deg_in, format_element, substitute_unchecked)
from ..ideal import divide_exact, is_regular_sequence
from ..linalg import Echelon
from .theta import Roles, ThetaExpansion, theta_table


class DecompositionFailure(AlgebraError):
    pass


@dataclass(frozen=True)
class Decomposition:
    P: Element
    A: Element
    B: Element
    e: int
    Q: Element
    x1: str = "x1"
    x3: str = "x3"

    @property
    def exact_multiple(self) -> bool:
        return not self.Q

    def verify(self) -> bool:
        sig = self.P.sig
        if self.P != self.A * self.B + sig.gen(self.x1) ** self.e * self.Q:
            return False
        if self.x3 in sig and deg_in(self.Q, self.x3) > 0:
            return False
        return not self.Q or x1_valuation(self.Q, self.x1) == 0

    def lines(self) -> list[str]:
        return [f"B = {format_element(self.B)}", f"e = {self.e}", f"Q = {format_element(self.Q)}"]


def x1_valuation(p: Element, x1: str = "x1") -> int | None:
    """Largest k with x1^k dividing p; None for zero."""
    if not p:
        return None
    i = p.sig.index(x1)
    return min(m[i] for m in p.terms)


def divide_by_x1_power(p: Element, k: int, x1: str = "x1") -> Element:
    i = p.sig.index(x1)
    terms = {}
    for m, c in p.terms.items():
        mm = list(m)
        mm[i] -= k
        if mm[i] < 0:
            raise AlgebraError(f"{x1}^{k} does not divide the polynomial")
        terms[tuple(mm)] = c
    return Element(p.sig, terms)


def linear_root(A: Element, roles=Roles()) -> Element:
    """The root of A in x3, required to be a polynomial: A = c x1^a (x3 - root)."""
    roles = Roles.of(roles)
    if not A or deg_in(A, roles.x3) != 1:
        raise DecompositionFailure("A must have degree 1 in x3")
    lead = coeff_wrt(A, roles.x3, 1)
    if len(lead.terms) != 1 or lead.variables() - {roles.x1}:
        raise DecompositionFailure("the x3-coefficient of A must be c*x1^a")
    rest = coeff_wrt(A, roles.x3, 0)
    r = divide_exact(-rest, lead)
    if r is None:
        raise DecompositionFailure("the root of A is not a polynomial")
    return r


def decompose_by_A(P: Element, A, roles=Roles()) -> Decomposition:
    """P = A*B + x1^e*Q with Q free of x3 and (Q != 0) not divisible by x1.

    ``A`` is the polynomial itself or any object with an ``A_red`` attribute.
    When A divides P the result has Q = 0 and e = 0.
    """
    roles = Roles.of(roles)
    A = getattr(A, "A_red", A)
    if A.sig != P.sig:
        raise AlgebraError("P and A live in different signatures")
    rt = linear_root(A, roles)
    R = substitute_unchecked(P, roles.x3, rt)
    B = divide_exact(P - R, A)
    if B is None:
        raise DecompositionFailure("P - P(x3 -> root) is not divisible by A")
    if not R:
        d = Decomposition(P, A, B, 0, R, roles.x1, roles.x3)
    else:
        e = x1_valuation(R, roles.x1)
        d = Decomposition(P, A, B, e, divide_by_x1_power(R, e, roles.x1), roles.x1, roles.x3)
    if not d.verify():
        raise AssertionError("decomposition failed to re-verify")
    return d


# -- independent route: linear algebra over the coefficients --------------------------

def _monomials(weights, d):
    n = len(weights)
    out = []

    def rec(i, left, prefix):
        if i == n - 1:
            if left % weights[i] == 0:
                out.append(tuple(prefix) + (left // weights[i],))
            return
        for e in range(left // weights[i] + 1):
            prefix.append(e)
            rec(i + 1, left - e * weights[i], prefix)
            prefix.pop()
    if d >= 0:
        rec(0, d, [])
    return out


def decompose_by_linear_system(P: Element, A: Element, roles=Roles()) -> Decomposition:
    """Same decomposition found by solving for the coefficients of B and Q.

    Scans e downward from its largest possible value; the first e with a solution
    is the answer.  Needs homogeneous P and A over even generators only.
    """
    roles = Roles.of(roles)
    sig = P.sig
    if any(sig.odd_mask):
        raise AlgebraError("only even signatures are supported here")
    dP, dA = cohomological_degree(P), cohomological_degree(A)
    if dP is INHOMOGENEOUS or dA is INHOMOGENEOUS or dA is None:
        raise AlgebraError("P and A must be homogeneous")
    if not P:
        return Decomposition(P, A, sig.zero(), 0, sig.zero(), roles.x1, roles.x3)
    weights = sig.degrees
    i1, i3 = sig.index(roles.x1), sig.index(roles.x3)
    w1 = weights[i1]
    b_monos = [m for m in _monomials(weights, dP - dA) if m[i3] < max(deg_in(P, roles.x3), 1)]
    b_cols = {("B", m): (A * sig.monomial(m)).terms for m in b_monos}
    target = dict(P.terms)
    ech_b = Echelon()
    for tag, col in b_cols.items():
        ech_b.insert(col, tag)
    if ech_b.solve(target) is not None:
        B = Element(sig, {m: c for (kind, m), c in ech_b.solve(target).items()})
        return Decomposition(P, A, B, 0, sig.zero(), roles.x1, roles.x3)
    for e in range(dP // w1, -1, -1):
        cols = dict(b_cols)
        for m in _monomials(weights, dP - e * w1):
            if m[i3] == 0:
                mm = list(m)
                mm[i1] += e
                cols[("Q", m)] = {tuple(mm): Fraction(1)}
        ech = Echelon()
        for tag, col in cols.items():
            ech.insert(col, tag)
        x = ech.solve(target)
        if x is not None:
            B = Element(sig, {m: c for (kind, m), c in x.items() if kind == "B"})
            Q = Element(sig, {m: c for (kind, m), c in x.items() if kind == "Q"})
            return Decomposition(P, A, B, e, Q, roles.x1, roles.x3)
    raise DecompositionFailure("no decomposition with a polynomial B")


# -- recursion over the remaining variables ------------------------------------------

def decompose_recursive(P: Element, A: Element, roles=Roles(), pivots: Sequence[str] | None = None
                        ) -> Decomposition:
    """Expand in the last pivot, decompose each coefficient, then reassemble.

    B = sum B_j pivot^j, e = min e_j and Q = sum Q_j x1^(e_j - e) pivot^j.  Pieces
    that are exact multiples of A contribute to B only.
    """
    roles = Roles.of(roles)
    sig = P.sig
    if pivots is None:
        used = {roles.x1, roles.x2, roles.x3} | A.variables()
        pivots = [g.name for g in sig.generators if not g.odd and g.name not in used]
    pivots = [v for v in pivots if deg_in(P, v) > 0]
    if not pivots:
        return decompose_by_A(P, A, roles)
    v = pivots[-1]
    x = sig.gen(v)
    parts = [decompose_by_A_or_zero(c, A, roles, pivots[:-1]) for c in coefficients_wrt(P, v)]
    B = sig.zero()
    for j, d in enumerate(parts):
        B = B + d.B * x ** j
    es = [d.e for d in parts if d.Q]
    if not es:
        out = Decomposition(P, A, B, 0, sig.zero(), roles.x1, roles.x3)
    else:
        e = min(es)
        x1 = sig.gen(roles.x1)
        Q = sig.zero()
        for j, d in enumerate(parts):
            if d.Q:
                Q = Q + d.Q * x1 ** (d.e - e) * x ** j
        out = Decomposition(P, A, B, e, Q, roles.x1, roles.x3)
    if not out.verify():
        raise AssertionError("reassembled decomposition failed to re-verify")
    return out


def decompose_by_A_or_zero(P, A, roles, pivots):
    if not P:
        z = P.sig.zero()
        return Decomposition(P, A, z, 0, z, roles.x1, roles.x3)
    return decompose_recursive(P, A, roles, pivots)


# -- theta_k decompositions and the quotient-form bookkeeping --------------------------

def theta_decompositions(exp: ThetaExpansion, constraints) -> list[Decomposition | None]:
    """theta_k = A E_k + x1^(d_k) R_k for each k (None where theta_k is zero)."""
    out = []
    for th in exp.thetas:
        out.append(decompose_by_A(th, constraints, exp.roles) if th else None)
    return out


@dataclass
class QuotientTrace:
    """Bookkeeping for Phi = A Theta + x1^e Psi, given alpha(Phi) - Phi = A B + U.

    ``mu[k]`` is the x2^k coefficient of U at the root, ``S[m]`` the row sums of
    Phi's table, ``M`` the largest m with S[m] != 0.
    """
    mu: dict
    S: dict
    M: int | None
    predicted_e: int | None
    decomposition: Decomposition
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def quotient_trace(Phi: Element, U: Element, roles, omega, D, A_red: Element) -> QuotientTrace:
    """Check the coefficient chain linking U at the root to the rows of Phi."""
    from .formulas import root as root_of
    roles = Roles.of(roles)
    sig = Phi.sig
    omega, D = Fraction(omega), Fraction(D)
    t = theta_table(Phi, roles)
    if t is None:
        raise AlgebraError("Phi must lie in Q[x1, x2, x3]")
    rt = root_of(sig, roles, D)
    U_root = substitute_unchecked(U, roles.x3, rt)
    top = max(t.r, deg_in(U_root, roles.x2), 0)
    mu = {}
    for k in range(top + 1):
        c = coeff_wrt(U_root, roles.x2, k)
        mu[k] = Fraction(0) if not c else next(iter(c.terms.values()))
        if len(c.terms) > 1:
            raise AssertionError("coefficient at the root is not a single x1 power")
    from .formulas import row_sum
    S = {m: row_sum(t, m, D) for m in range(1, t.r + 1)}
    checks = {}
    chain = all(mu[k] == sum((comb(m, k) * omega ** (m - k) * S[m] for m in S if m > k), Fraction(0))
                for k in range(top + 1))
    checks["mu chain"] = chain
    nonzero = [m for m in S if S[m]]
    M = max(nonzero) if nonzero else None
    if M is not None and omega:
        checks["leading row sum"] = S[M] == mu[M - 1] / (M * omega)
    w1, w2 = sig[roles.x1].degree, sig[roles.x2].degree
    if M is not None:
        predicted = (t.degree - M * w2) // w1
    elif t.rho:
        predicted = t.b
    else:
        predicted = None
    d = decompose_by_A(Phi, A_red, roles)
    checks["exponent"] = (d.e == predicted) if predicted is not None else d.exact_multiple
    checks["Psi free of x3"] = deg_in(d.Q, roles.x3) <= 0
    return QuotientTrace(mu, S, M, predicted, d, checks)


# -- three-polynomial non-regularity criterion ------------------------------------------

@dataclass
class HypothesisReport:
    items: list = field(default_factory=list)
    exponents: tuple = ()
    order: tuple = (0, 1, 2)
    decompositions: list = field(default_factory=list)
    conclusion: str = ""

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.items.append((name, ok, detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.items)

    def failed(self) -> list[str]:
        return [name for name, ok, _ in self.items if not ok]

    def lines(self) -> list[str]:
        out = []
        for name, ok, detail in self.items:
            out.append(f"hypothesis {name}: {'pass' if ok else 'fail'}" + (f" ({detail})" if detail else ""))
        if self.exponents:
            out.append("exponents: " + ", ".join(str(a) for a in self.exponents))
            out.append("order: " + ", ".join(f"P{i + 1}" for i in self.order))
        if self.conclusion:
            out.append(f"conclusion: {self.conclusion}")
        return out


def nonregularity_hypotheses(P1: Element, P2: Element, P3: Element, A: Element, chi, roles=Roles(),
                             exponents=None):
    """Check the four hypotheses on (P1, P2, P3, A, chi); if they hold, run the regularity test.

    Hypotheses: (1) P_i - x1^(a_i) Q_i is a multiple of A; (2) every Q_i is free of x3
    and Q1 is nonzero and not divisible by x1; (3) (|x3| - |x2|)/|x1| is an integer;
    (4) A lies in Q[x1, x2][x3] and chi x1^delta x2 is a root of A.  Without explicit
    exponents a_i the largest possible ones are used; the triple is then ordered by
    exponent (stable) so that a1 is the smallest.  Returns (report, certificate or None).
    """
    roles = Roles.of(roles)
    sig = P1.sig
    P = [P1, P2, P3]
    report = HypothesisReport()
    evens = [g for g in sig.generators if not g.odd]
    if len(evens) < 4:
        raise AlgebraError("need at least four even generators")
    w1, w2, w3 = (sig[n].degree for n in (roles.x1, roles.x2, roles.x3))
    delta_ok = w3 >= w2 and (w3 - w2) % w1 == 0
    report.add("(3) degree ratio", delta_ok, f"(|x3|-|x2|)/|x1| = {Fraction(w3 - w2, w1)}")
    root = None
    if delta_ok:
        root = Fraction(chi) * sig.gen(roles.x1) ** ((w3 - w2) // w1) * sig.gen(roles.x2)
    shape_ok = A.variables() <= {roles.x1, roles.x2, roles.x3} and deg_in(A, roles.x3) >= 1
    root_ok = root is not None and shape_ok and not substitute_unchecked(A, roles.x3, root)
    report.add("(4) root of A", root_ok,
               "" if root_ok else "chi*x1^delta*x2 is not a root of A in Q[x1,x2][x3]")
    if not root_ok:
        report.conclusion = "hypotheses fail"
        return report, None
    a_given = list(exponents) if exponents is not None else None
    R = [substitute_unchecked(p, roles.x3, root) for p in P]
    Bs, Qs, es = [], [], []
    ok1 = True
    for i, (p, r) in enumerate(zip(P, R)):
        B = divide_exact(p - r, A)
        if B is None:
            ok1 = False
            Bs.append(None)
        else:
            Bs.append(B)
        if a_given is not None:
            e = a_given[i]
            try:
                q = divide_by_x1_power(r, e, roles.x1)
            except AlgebraError:
                ok1 = False
                q = None
        else:
            e = x1_valuation(r, roles.x1) if r else 0
            q = divide_by_x1_power(r, e, roles.x1) if r else r
        es.append(e)
        Qs.append(q)
    report.add("(1) multiples of A", ok1,
               "" if ok1 else "some P_i - x1^a_i Q_i is not a multiple of A")
    if not ok1:
        report.conclusion = "hypotheses fail"
        return report, None
    order = sorted(range(3), key=lambda i: es[i]) if a_given is None else [0, 1, 2]
    report.order = tuple(order)
    report.exponents = tuple(es[i] for i in order)
    Qo = [Qs[i] for i in order]
    free = all(deg_in(q, roles.x3) <= 0 for q in Qo)
    q1_ok = bool(Qo[0]) and x1_valuation(Qo[0], roles.x1) == 0
    detail = []
    if not free:
        detail.append("some Q_i involves x3")
    if not q1_ok:
        detail.append("Q1 is zero or divisible by x1")
    report.add("(2) remainders", free and q1_ok, "; ".join(detail))
    report.decompositions = [Decomposition(P[i], A, Bs[i], es[i], Qs[i], roles.x1, roles.x3)
                             for i in order]
    if not report.ok:
        report.conclusion = "hypotheses fail"
        return report, None
    cert = is_regular_sequence([P[i] for i in order])
    report.conclusion = "not-regular" if not cert.regular else "regular (criterion contradicted)"
    return report, cert
