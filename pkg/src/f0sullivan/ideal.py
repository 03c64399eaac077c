"""Ideals in the even subalgebra: Groebner bases, division, quotients, regularity.

The engine works on sparse dicts ``exponent tuple -> Fraction`` over the even
generators of a signature and converts back to ``Element`` at the boundary.
Buchberger's algorithm uses the Gebauer-Moeller pair update and the normal
selection strategy, so results are deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .graded_poly import (AlgebraError, Element, GradedSignature, INHOMOGENEOUS,
                          cohomological_degree, format_element)

INFINITE = math.inf


class OddVariableError(AlgebraError):
    pass


# -- monomial orders --------------------------------------------------------------

def grevlex_key(weights: Sequence[int]) -> Callable:
    w = tuple(weights)

    def key(m):
        return (sum(a * b for a, b in zip(m, w)), tuple(-e for e in reversed(m)))
    return key


def lex_key(weights: Sequence[int] = ()) -> Callable:
    def key(m):
        return tuple(m)
    return key


def elimination_key(weights: Sequence[int], block: int) -> Callable:
    """Block order: the first ``block`` variables are eliminated."""
    first = grevlex_key(weights[:block])
    rest = grevlex_key(weights[block:])

    def key(m):
        return (first(m[:block]), rest(m[block:]))
    return key


ORDERS = {"grevlex": grevlex_key, "lex": lex_key}


# -- sparse polynomial helpers --------------------------------------------------------

def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _shift_scale(p: dict, shift, c) -> dict:
    return {tuple(x + y for x, y in zip(m, shift)): c * v for m, v in p.items()}


def _axpy_shift(y: dict, c, shift, p: dict) -> None:
    """y += c * x^shift * p."""
    for m, v in p.items():
        k = tuple(a + b for a, b in zip(m, shift))
        s = y.get(k, 0) + c * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


def _mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, x in p.items():
        for b, y in q.items():
            k = tuple(i + j for i, j in zip(a, b))
            s = out.get(k, 0) + x * y
            if s:
                out[k] = s
            else:
                out.pop(k)
    return out


def _add_into(y: dict, p: dict, c=1) -> None:
    for m, v in p.items():
        s = y.get(m, 0) + c * v
        if s:
            y[m] = s
        else:
            y.pop(m, None)


class _Ring:
    """Conversion between Elements and the sparse even-variable representation."""

    def __init__(self, sig: GradedSignature):
        self.sig = sig
        self.pos = [i for i, g in enumerate(sig.generators) if not g.odd]
        self.weights = [sig.generators[i].degree for i in self.pos]
        self.n = len(self.pos)
        if not self.n:
            raise AlgebraError("signature has no even generators")

    def to_sparse(self, p: Element) -> dict:
        if p.sig != self.sig:
            raise AlgebraError("element lives in another signature")
        out = {}
        mask = self.sig.odd_mask
        for m, c in p.terms.items():
            if any(e and o for e, o in zip(m, mask)):
                raise OddVariableError(f"odd generator in {format_element(p)}")
            out[tuple(m[i] for i in self.pos)] = Fraction(c)
        return out

    def to_element(self, p: dict) -> Element:
        size = len(self.sig)
        terms = {}
        for m, c in p.items():
            full = [0] * size
            for i, e in zip(self.pos, m):
                full[i] = e
            terms[tuple(full)] = c
        return Element(self.sig, terms)


# -- division -------------------------------------------------------------------

def _reduce(p: dict, basis: list, lms: list, key, track: bool):
    """Full reduction of p by a list of monic polynomials.

    Returns (remainder, quotients) with p = sum q_i * basis_i + remainder.
    """
    p = dict(p)
    rem: dict = {}
    quots = [dict() for _ in basis] if track else None
    while p:
        m = max(p, key=key)
        c = p[m]
        for i, lm in enumerate(lms):
            if _divides(lm, m):
                shift = _sub(m, lm)
                _axpy_shift(p, -c, shift, basis[i])
                if track:
                    quots[i][shift] = quots[i].get(shift, 0) + c
                break
        else:
            rem[m] = p.pop(m)
    return rem, quots


# -- Buchberger -------------------------------------------------------------------

def _buchberger(polys: list[dict], key, nvars: int, lift: bool):
    """Reduced Groebner basis of the sparse polynomials (all nonzero).

    With ``lift`` each basis element comes with its expression in the inputs.
    """
    k = len(polys)
    store: list[dict] = []
    reps: list[list[dict]] = []
    lms: list = []

    def add(p, rep):
        lm = max(p, key=key)
        inv = 1 / p[lm]
        p = {m: c * inv for m, c in p.items()}
        if lift:
            rep = [{m: c * inv for m, c in r.items()} for r in rep]
        store.append(p)
        reps.append(rep)
        lms.append(lm)
        return len(store) - 1

    G: list[int] = []
    B: list[tuple[int, int]] = []

    def update(h):
        nonlocal G, B
        lh = lms[h]
        C = [(g, h) for g in G]
        D = []
        while C:
            g, _ = C.pop(0)
            lg = lms[g]
            l_gh = _lcm(lg, lh)
            if _coprime(lg, lh):
                D.append((g, h))
                continue
            redundant = False
            for (g2, _h) in C + D:
                if _divides(_lcm(lms[g2], lh), l_gh):
                    redundant = True
                    break
            if not redundant:
                D.append((g, h))
        E = [(g, hh) for (g, hh) in D if not _coprime(lms[g], lh)]
        newB = []
        for (g1, g2) in B:
            l12 = _lcm(lms[g1], lms[g2])
            if (not _divides(lh, l12) or _lcm(lms[g1], lh) == l12
                    or _lcm(lms[g2], lh) == l12):
                newB.append((g1, g2))
        B = newB + E
        G = [g for g in G if not _divides(lh, lms[g])] + [h]

    def current():
        return [store[g] for g in G], [lms[g] for g in G]

    for j, p in enumerate(polys):
        rep = [dict() for _ in range(k)]
        rep[j] = {(0,) * nvars: Fraction(1)}
        basis, blms = current()
        r, quots = _reduce(p, basis, blms, key, lift)
        if not r:
            continue
        if lift:
            rep = _rep_minus(rep, quots, [reps[g] for g in G])
        update(add(r, rep))

    while B:
        B.sort(key=lambda pr: (key(_lcm(lms[pr[0]], lms[pr[1]])), pr))
        i, j = B.pop(0)
        L = _lcm(lms[i], lms[j])
        si, sj = _sub(L, lms[i]), _sub(L, lms[j])
        s = _shift_scale(store[i], si, Fraction(1))
        _axpy_shift(s, Fraction(-1), sj, store[j])
        rep = None
        if lift:
            rep = [_shift_scale(a, si, Fraction(1)) for a in reps[i]]
            for a, b in zip(rep, reps[j]):
                _axpy_shift(a, Fraction(-1), sj, b)
        basis, blms = current()
        r, quots = _reduce(s, basis, blms, key, lift)
        if r:
            if lift:
                rep = _rep_minus(rep, quots, [reps[g] for g in G])
            update(add(r, rep))

    # interreduce to the reduced basis
    order = sorted(G, key=lambda g: key(lms[g]))
    final, final_reps, final_lms = [], [], []
    for idx, g in enumerate(order):
        others = [store[h] for h in order if h != g]
        olms = [lms[h] for h in order if h != g]
        orep = [reps[h] for h in order if h != g]
        r, quots = _reduce(store[g], others, olms, key, lift)
        rep = reps[g]
        if lift:
            rep = _rep_minus(rep, quots, orep)
        lm = max(r, key=key)
        inv = 1 / r[lm]
        final.append({m: c * inv for m, c in r.items()})
        final_lms.append(lm)
        if lift:
            final_reps.append([{m: c * inv for m, c in a.items()} for a in rep])
    return final, final_lms, (final_reps if lift else None)


def _rep_minus(rep, quots, basis_reps):
    rep = [dict(a) for a in rep]
    for q, brep in zip(quots, basis_reps):
        if not q:
            continue
        for a, b in zip(rep, brep):
            _add_into(a, _mul(q, b), -1)
    return rep


# -- public types -------------------------------------------------------------------

@dataclass(frozen=True)
class DivisionResult:
    remainder: Element
    cofactors: list

    def check(self, p: Element, basis: list) -> bool:
        total = self.remainder
        for u, g in zip(self.cofactors, basis):
            total = total + u * g
        return total == p


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple
    basis: tuple
    order: str
    sig: GradedSignature
    lift: tuple | None = field(default=None, repr=False)
    _lms: tuple = field(default=(), repr=False)

    @property
    def ring(self) -> _Ring:
        return _Ring(self.sig)

    def key(self):
        return ORDERS[self.order](_Ring(self.sig).weights)

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant() and bool(self.basis[0])

    def leading_exponents(self) -> list[tuple]:
        return list(self._lms)

    def leading_monomials(self) -> list[Element]:
        ring = _Ring(self.sig)
        return [ring.to_element({m: Fraction(1)}) for m in self._lms]

    def reduce(self, p: Element) -> DivisionResult:
        return divide_with_cofactors(p, self)

    def normal_form(self, p: Element) -> Element:
        ring = _Ring(self.sig)
        basis = [ring.to_sparse(b) for b in self.basis]
        r, _ = _reduce(ring.to_sparse(p), basis, list(self._lms), self.key(), False)
        return ring.to_element(r)

    def contains(self, p: Element) -> bool:
        return not self.normal_form(p)

    def generator_cofactors(self, p: Element) -> list | None:
        """Cofactors of p over the original generators, or None if p is not in the ideal."""
        if self.lift is None:
            raise AlgebraError("basis was computed without lift data")
        res = divide_with_cofactors(p, self)
        if res.remainder:
            return None
        out = [self.sig.zero() for _ in self.generators]
        for q, row in zip(res.cofactors, self.lift):
            if not q:
                continue
            for i, a in enumerate(row):
                out[i] = out[i] + q * a
        return out


def groebner(gens: Sequence[Element], order: str = "grevlex", lift: bool = False) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = list(gens)
    if not gens:
        raise AlgebraError("need at least one generator")
    sig = gens[0].sig
    ring = _Ring(sig)
    sparse = [ring.to_sparse(g) for g in gens]
    if any(not s for s in sparse):
        raise AlgebraError("generators must be nonzero")
    key = ORDERS[order](ring.weights)
    basis, lms, reps = _buchberger(sparse, key, ring.n, lift)
    lift_rows = None
    if lift:
        lift_rows = tuple(tuple(ring.to_element(a) for a in row) for row in reps)
    return GroebnerBasis(tuple(gens), tuple(ring.to_element(b) for b in basis), order, sig,
                         lift_rows, tuple(lms))


def divide_with_cofactors(p: Element, gb: GroebnerBasis) -> DivisionResult:
    """p = sum cofactor_i * basis_i + remainder, remainder fully reduced."""
    ring = _Ring(gb.sig)
    basis = [ring.to_sparse(b) for b in gb.basis]
    r, quots = _reduce(ring.to_sparse(p), basis, list(gb._lms), gb.key(), True)
    return DivisionResult(ring.to_element(r), [ring.to_element(q) for q in quots])


def ideal_quotient(gens: Sequence[Element], f: Element) -> GroebnerBasis:
    """Groebner basis of (gens) : f, via elimination of t in t*I + (1-t)*f."""
    if not f:
        raise AlgebraError("ideal quotient by zero")
    gens = [g for g in gens if g]
    sig = f.sig
    ring = _Ring(sig)
    fs = ring.to_sparse(f)
    if not gens:
        # (0) : f is the zero ideal
        return GroebnerBasis((), (), "grevlex", sig, None, ())
    one_t = lambda p: {(1,) + m: c for m, c in p.items()}
    no_t = lambda p: {(0,) + m: c for m, c in p.items()}
    polys = [one_t(ring.to_sparse(g)) for g in gens]
    h = no_t(fs)
    _add_into(h, one_t(fs), -1)
    polys.append(h)
    key = elimination_key([1] + ring.weights, 1)
    basis, lms, _ = _buchberger(polys, key, ring.n + 1, False)
    inter = [{m[1:]: c for m, c in b.items()} for b in basis if all(m[0] == 0 for m in b)]
    flm = max(fs, key=grevlex_key(ring.weights))
    quotients = []
    for g in inter:
        q, rem = _exact_divide(g, fs, flm, grevlex_key(ring.weights))
        if rem:
            raise AssertionError("elimination produced an element outside (f)")
        quotients.append(ring.to_element(q))
    return groebner(quotients)


def _exact_divide(g: dict, f: dict, flm, key):
    r, quots = _reduce(g, [{m: c / f[flm] for m, c in f.items()}], [flm], key, True)
    q = {m: c / f[flm] for m, c in quots[0].items()}
    return q, r


def divide_exact(p: Element, f: Element) -> Element | None:
    """p / f if f divides p in the even polynomial ring, else None."""
    ring = _Ring(p.sig)
    fs = ring.to_sparse(f)
    if not fs:
        raise ZeroDivisionError("division by zero")
    key = grevlex_key(ring.weights)
    q, r = _exact_divide(ring.to_sparse(p), fs, max(fs, key=key), key)
    if r:
        return None
    return ring.to_element(q)


# -- standard monomials and dimensions --------------------------------------------------------

def _pure_powers(lms, n) -> dict:
    out = {}
    for m in lms:
        nz = [i for i, e in enumerate(m) if e]
        if len(nz) == 1:
            i = nz[0]
            out[i] = min(out.get(i, m[i]), m[i])
    return out


def standard_exponents(gb: GroebnerBasis) -> list[tuple] | None:
    """All standard monomials (exponent tuples over even variables), or None if infinite."""
    n = _Ring(gb.sig).n
    if gb.is_unit():
        return []
    if not gb.basis:
        return None
    pure = _pure_powers(gb._lms, n)
    if len(pure) < n:
        return None
    out = []
    lms = list(gb._lms)

    def rec(i, prefix):
        if i == n:
            m = tuple(prefix)
            if not any(_divides(l, m) for l in lms):
                out.append(m)
            return
        for e in range(pure[i]):
            prefix.append(e)
            partial = tuple(prefix) + (0,) * (n - i - 1)
            if not any(_divides(l, partial) for l in lms):
                rec(i + 1, prefix)
            prefix.pop()
    rec(0, [])
    return sorted(out, key=grevlex_key(_Ring(gb.sig).weights))


def quotient_dimension(gens: Sequence[Element]):
    """dim_Q of Q[x]/(gens): a nonnegative integer or INFINITE."""
    gens = [g for g in gens if g]
    if not gens:
        return INFINITE
    std = standard_exponents(groebner(gens))
    return INFINITE if std is None else len(std)


def _monomials_of_degree(weights, d):
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
    if d < 0:
        return out
    rec(0, d, [])
    return out


def quotient_degree_dimensions(gens: Sequence[Element], d_max: int) -> dict[int, int]:
    """Dimension of each graded piece of Q[x]/(gens) for degrees 0..d_max (homogeneous gens)."""
    gens = [g for g in gens if g]
    sig = gens[0].sig if gens else None
    if sig is None:
        raise AlgebraError("need at least one generator")
    ring = _Ring(sig)
    gb = groebner(gens)
    lms = list(gb._lms)
    out = {}
    for d in range(d_max + 1):
        out[d] = sum(1 for m in _monomials_of_degree(ring.weights, d)
                     if not any(_divides(l, m) for l in lms))
    return out


# -- regular sequences ------------------------------------------------------------------

@dataclass(frozen=True)
class RegularityCertificate:
    verdict: str
    witness_index: int | None = None
    witness: Element | None = None
    pure_powers: tuple = ()
    zero_dimensional: bool | None = None

    @property
    def regular(self) -> bool:
        return self.verdict == "regular"

    def report(self) -> list[str]:
        lines = [f"verdict: {self.verdict}"]
        if self.witness is not None:
            lines.append(f"witness-index: {self.witness_index}")
            lines.append(f"witness: {format_element(self.witness)}")
        if self.pure_powers:
            lines.append("pure-powers: " + ", ".join(format_element(p) for p in self.pure_powers))
        return lines


def is_regular_sequence(P: Sequence[Element]) -> RegularityCertificate:
    """Iterated ideal-quotient test; for n elements in n variables also checks zero-dimensionality."""
    P = list(P)
    if not P:
        raise AlgebraError("empty sequence")
    sig = P[0].sig
    ring = _Ring(sig)
    for p in P:
        ring.to_sparse(p)
    if not P[0]:
        return RegularityCertificate("not-regular", 1, sig.one())
    verdict = None
    for i in range(1, len(P)):
        prev = P[:i]
        gb_prev = groebner(prev)
        if not P[i]:
            if gb_prev.is_unit():
                continue
            verdict = RegularityCertificate("not-regular", i + 1, sig.one())
            break
        quot = ideal_quotient(prev, P[i])
        for q in quot.basis:
            nf = gb_prev.normal_form(q)
            if nf:
                verdict = RegularityCertificate("not-regular", i + 1, nf)
                break
        if verdict:
            break
    zero_dim = None
    pure = ()
    if len(P) == ring.n and all(cohomological_degree(p) is not INHOMOGENEOUS for p in P):
        gb = groebner(P)
        powers = _pure_powers(gb._lms, ring.n)
        zero_dim = gb.is_unit() or len(powers) == ring.n
        if zero_dim and not gb.is_unit():
            pure = tuple(ring.to_element({tuple(e if j == i else 0 for j in range(ring.n)): Fraction(1)})
                         for i, e in sorted(powers.items()))
        if (verdict is None) != zero_dim:
            raise AssertionError("regularity paths disagree")
    if verdict is not None:
        return RegularityCertificate(verdict.verdict, verdict.witness_index, verdict.witness,
                                     (), zero_dim)
    return RegularityCertificate("regular", None, None, pure, zero_dim)


def verify_witness(P: Sequence[Element], cert: RegularityCertificate) -> bool:
    """Re-check a not-regular witness with freshly computed bases in two orders."""
    if cert.regular or cert.witness is None:
        return False
    i = cert.witness_index
    prev = list(P[:i - 1])
    Q = cert.witness
    if not prev:
        return not P[0] and bool(Q)
    for order in ("lex", "grevlex"):
        gb = groebner(prev, order=order)
        if not gb.contains(Q * P[i - 1]) or gb.contains(Q):
            return False
    return True


def prop22_check(P1: Element, P2: Element, P3: Element, A: Element, chi, roles=("x1", "x2", "x3"),
                 exponents=None):
    """Check the hypotheses of the three-polynomial non-regularity criterion, then run the
    regularity engine.  Returns (hypothesis report, certificate or None)."""
    from .selfeq.decompose import nonregularity_hypotheses
    return nonregularity_hypotheses(P1, P2, P3, A, chi, roles, exponents)
