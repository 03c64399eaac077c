"""Models Lambda(x_1..x_n; y_1..y_n) with d x_i = 0 and d y_i = P_i for a regular sequence P."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .dga import CochainAlgebra, DEFAULT_MONOMIAL_CAP, cohomology_dimension
from .graded_poly import (AlgebraError, Element, Generator, GradedSignature, INHOMOGENEOUS,
                          cohomological_degree, format_element, parse, restrict)
from .ideal import RegularityCertificate, is_regular_sequence, quotient_degree_dimensions


class F0Error(AlgebraError):
    pass


class NotRegular(F0Error):
    def __init__(self, certificate: RegularityCertificate):
        super().__init__("P is not a regular sequence: " + "; ".join(certificate.report()))
        self.certificate = certificate


@dataclass(frozen=True)
class F0Model:
    algebra: CochainAlgebra
    P: tuple
    x_names: tuple
    y_names: tuple
    regularity: RegularityCertificate
    renaming: dict = field(default_factory=dict, compare=False)

    @property
    def sig(self) -> GradedSignature:
        return self.algebra.sig

    @property
    def n(self) -> int:
        return len(self.x_names)

    @property
    def x_degrees(self) -> list[int]:
        return [self.sig[x].degree for x in self.x_names]

    @property
    def P_degrees(self) -> list[int]:
        return [self.sig[y].degree + 1 for y in self.y_names]

    @property
    def top_degree(self) -> int:
        """Degree of the top class of the cohomology ring."""
        return sum(p - x for p, x in zip(self.P_degrees, self.x_degrees))

    def is_normalized(self) -> bool:
        xd, pd = self.x_degrees, self.P_degrees
        return xd == sorted(xd) and pd == sorted(pd)


def _default_names(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def _check_P(P: Sequence[Element]) -> list[int]:
    degs = []
    for i, p in enumerate(P):
        if not p:
            raise F0Error(f"P{i + 1} is zero")
        if p.contains_odd():
            raise F0Error(f"P{i + 1} involves an odd generator")
        d = cohomological_degree(p)
        if d is INHOMOGENEOUS:
            raise F0Error(f"P{i + 1} is not homogeneous")
        if d % 2:
            raise F0Error(f"P{i + 1} has odd degree {d}")
        degs.append(d)
    return degs


def _assemble(x_gens: Sequence[Generator], P_even: Sequence[Element], y_names=None) -> F0Model:
    n = len(x_gens)
    y_names = list(y_names or _default_names("y", n))
    degs = _check_P(P_even)
    sig = GradedSignature(tuple(x_gens) + tuple(Generator(y, d - 1) for y, d in zip(y_names, degs)))
    P = tuple(restrict(p, sig) for p in P_even)
    cert = is_regular_sequence(list(P))
    if not cert.regular:
        raise NotRegular(cert)
    alg = CochainAlgebra(sig, {y: p for y, p in zip(y_names, P)})
    return F0Model(alg, P, tuple(g.name for g in x_gens), tuple(y_names), cert)


def build_f0(x_degrees: Sequence[int], P_texts: Sequence, normalized: bool = True) -> F0Model:
    """Model with x_i of the given degrees and d y_i = P_i, normalized by default."""
    n = len(x_degrees)
    if n < 1:
        raise F0Error("need at least one even generator")
    if len(P_texts) != n:
        raise F0Error("need exactly one P for each even generator")
    gens = []
    for name, d in zip(_default_names("x", n), x_degrees):
        if d % 2:
            raise F0Error(f"{name} must have even degree, got {d}")
        gens.append(Generator(name, d))
    even_sig = GradedSignature(tuple(gens))
    P = [parse(even_sig, t) if isinstance(t, str) else restrict(t, even_sig) for t in P_texts]
    _check_P(P)
    if normalized:
        gens, P, renaming = _normalized_data(gens, P)
    else:
        renaming = {}
    model = _assemble(gens, P)
    object.__setattr__(model, "renaming", renaming)
    return model


def _normalized_data(x_gens: Sequence[Generator], P: Sequence[Element]):
    """Stable sort of x by degree (with renaming to x1..xn), then of P by degree."""
    n = len(x_gens)
    order = sorted(range(n), key=lambda i: x_gens[i].degree)
    new_names = _default_names("x", n)
    new_gens = [Generator(new_names[k], x_gens[i].degree) for k, i in enumerate(order)]
    renaming = {x_gens[i].name: new_names[k] for k, i in enumerate(order)}
    new_sig = GradedSignature(tuple(new_gens))
    old_sig = P[0].sig
    moved = []
    for p in P:
        terms = {}
        for m, c in p.terms.items():
            out = [0] * n
            for i, e in enumerate(m):
                if e:
                    out[new_sig.index(renaming[old_sig.generators[i].name])] = e
            terms[tuple(out)] = c
        moved.append(Element(new_sig, terms))
    degs = [cohomological_degree(p) for p in moved]
    porder = sorted(range(n), key=lambda i: degs[i])
    return new_gens, [moved[i] for i in porder], renaming


def normalize(model: F0Model) -> F0Model:
    """Re-index so that degrees of the x's and of the P's are nondecreasing."""
    sig = model.sig
    x_gens = [sig[x] for x in model.x_names]
    even_sig = GradedSignature(tuple(x_gens))
    P = [restrict(p, even_sig) for p in model.P]
    gens, P2, renaming = _normalized_data(x_gens, P)
    out = _assemble(gens, P2)
    object.__setattr__(out, "renaming", renaming)
    return out


def from_algebra(alg: CochainAlgebra) -> F0Model:
    """Recognize an algebra of the required shape (keeps names and order)."""
    sig = alg.sig
    evens = [g for g in sig.generators if not g.odd]
    odds = [g for g in sig.generators if g.odd]
    if len(evens) != len(odds):
        raise F0Error(f"{len(evens)} even but {len(odds)} odd generators")
    for g in evens:
        if alg.differential[g.name]:
            raise F0Error(f"d {g.name} must be 0")
    P = []
    for g in odds:
        p = alg.differential[g.name]
        if not p:
            raise F0Error(f"d {g.name} must be nonzero")
        if p.contains_odd():
            raise F0Error(f"d {g.name} involves an odd generator")
        P.append(p)
    cert = is_regular_sequence(P)
    if not cert.regular:
        raise NotRegular(cert)
    return F0Model(alg, tuple(P), tuple(g.name for g in evens), tuple(g.name for g in odds), cert)


# -- cohomology checks -------------------------------------------------------------

def hilbert_series(x_degrees: Sequence[int], P_degrees: Sequence[int], d_max: int) -> list[int]:
    """Coefficients of prod(1 - t^|P|) / prod(1 - t^|x|) up to t^d_max."""
    coeffs = [0] * (d_max + 1)
    coeffs[0] = 1
    for p in P_degrees:
        for d in range(d_max, p - 1, -1):
            coeffs[d] -= coeffs[d - p]
    for x in x_degrees:
        for d in range(x, d_max + 1):
            coeffs[d] += coeffs[d - x]
    return coeffs


@dataclass(frozen=True)
class CohomologyReport:
    ok: bool
    dims: dict
    quotient_dims: dict
    hilbert: list
    first_failure: int | None = None

    def lines(self) -> list[str]:
        out = [f"H^{d} = {v}" for d, v in self.dims.items()]
        out.append("status: pass" if self.ok else f"status: fail at degree {self.first_failure}")
        return out


def verify_f0_cohomology(model: F0Model, d_max: int, cap: int = DEFAULT_MONOMIAL_CAP) -> CohomologyReport:
    """H^odd = 0 and H^even matches the quotient ring, degree by degree up to d_max."""
    if d_max < 0:
        raise F0Error("d_max must be nonnegative")
    even_sig = GradedSignature(tuple(model.sig[x] for x in model.x_names))
    P_even = [restrict(p, even_sig) for p in model.P]
    qdims = quotient_degree_dimensions(P_even, d_max)
    hil = hilbert_series(model.x_degrees, model.P_degrees, d_max)
    dims = {}
    first = None
    for d in range(d_max + 1):
        h = cohomology_dimension(model.algebra, d, cap)
        dims[d] = h
        expected = qdims[d]
        if first is None and (h != expected or hil[d] != expected):
            first = d
    return CohomologyReport(first is None, dims, qdims, hil, first)


def describe(model: F0Model) -> list[str]:
    lines = []
    for x in model.x_names:
        lines.append(f"generator {x} degree {model.sig[x].degree} even")
    for y, p in zip(model.y_names, model.P):
        lines.append(f"generator {y} degree {model.sig[y].degree} odd")
    for y, p in zip(model.y_names, model.P):
        lines.append(f"d {y} = {format_element(p)}")
    return lines
