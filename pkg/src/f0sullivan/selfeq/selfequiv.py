"""Self-equivalences alpha with alpha(x_i) = x_i + A_i of an F0 model."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence

from ..dga import (DEFAULT_MONOMIAL_CAP, Morphism, build_cylinder,
                   homotopy_from_primitive, identity, is_cochain_map, solve_coboundary)
from ..f0_model import F0Model
from ..graded_poly import AlgebraError, Element, apply_map, format_element, is_homogeneous, parse
from ..ideal import groebner
from .theta import ThetaExpansion


class SelfEquivalenceError(AlgebraError):
    def __init__(self, message: str, generator: str | None = None):
        super().__init__(message)
        self.generator = generator


class EvenMap:
    """An algebra map on the even generators, x -> x + A_x (others fixed)."""

    def __init__(self, sig, shifts: Mapping[str, Element]):
        self.sig = sig
        self.shifts = {k: v for k, v in shifts.items() if v}
        for name in self.shifts:
            if sig[name].odd:
                raise AlgebraError(f"{name} is odd")
        self.images = {n: sig.gen(n) + a for n, a in self.shifts.items()}

    def A(self, name: str) -> Element:
        return self.shifts.get(name, self.sig.zero())

    def __call__(self, p: Element) -> Element:
        return apply_map(p, self.images) if self.images else p

    @property
    def x_map(self) -> "EvenMap":
        return self


def _decomposable(p: Element) -> bool:
    """Every monomial is a product of at least two generators."""
    return all(sum(m) >= 2 for m in p.terms)


@dataclass(frozen=True)
class SelfEquivalence:
    model: F0Model
    A: dict
    y_images: dict
    morphism: Morphism = field(compare=False, repr=False)

    @property
    def sig(self):
        return self.model.sig

    @property
    def x_map(self) -> EvenMap:
        return EvenMap(self.sig, self.A)

    def all_A_zero(self) -> bool:
        return not any(self.A.values())

    def __call__(self, p: Element) -> Element:
        return self.morphism(p)

    def lines(self) -> list[str]:
        out = []
        for g in self.sig.generators:
            img = self.morphism.images[g.name]
            if img != self.sig.gen(g.name):
                out.append(f"alpha {g.name} = {format_element(img)}")
        return out


def make_selfeq(model: F0Model, A, y_images: Mapping | None = None) -> SelfEquivalence:
    """Validate alpha(x_i) = x_i + A_i together with the given images of the y's.

    ``A`` is a list aligned with the x's or a mapping by name; texts are parsed.
    """
    sig = model.sig
    if isinstance(A, Mapping):
        A_map = dict(A)
    else:
        A = list(A)
        if len(A) > model.n:
            raise SelfEquivalenceError("more A_i than even generators")
        A_map = {x: a for x, a in zip(model.x_names, A)}
    shifts = {}
    for x in model.x_names:
        a = A_map.pop(x, None)
        if a is None:
            a = sig.zero()
        elif isinstance(a, str):
            a = parse(sig, a)
        shifts[x] = a
    if A_map:
        raise SelfEquivalenceError(f"unknown even generators {sorted(A_map)}")
    images = {}
    for x, a in shifts.items():
        if not is_homogeneous(a, sig[x].degree):
            raise SelfEquivalenceError(f"A for {x} is not homogeneous of degree {sig[x].degree}", x)
        if a.contains_odd():
            detail = "nonzero" if model.algebra.d(a) else "zero"
            raise SelfEquivalenceError(
                f"A for {x} contains a monomial with an odd generator (its differential is {detail})", x)
        if not _decomposable(a):
            raise SelfEquivalenceError(f"A for {x} is not decomposable", x)
        images[x] = sig.gen(x) + a
    if shifts[model.x_names[0]]:
        raise SelfEquivalenceError(f"A for {model.x_names[0]} must vanish", model.x_names[0])
    ys = {}
    for y, img in (y_images or {}).items():
        if y not in model.y_names:
            raise SelfEquivalenceError(f"{y} is not an odd generator of the model", y)
        img = parse(sig, img) if isinstance(img, str) else img
        if not _decomposable(img - sig.gen(y)):
            raise SelfEquivalenceError(f"image of {y} is not {y} plus a decomposable element", y)
        ys[y] = img
    images.update(ys)
    try:
        morphism = Morphism(model.algebra, model.algebra, images)
    except AlgebraError as exc:
        raise SelfEquivalenceError(str(exc)) from exc
    verdict = is_cochain_map(morphism)
    if not verdict:
        raise SelfEquivalenceError(f"not a cochain map at {verdict.where}", verdict.where)
    full_y = {y: morphism.images[y] for y in model.y_names}
    return SelfEquivalence(model, shifts, full_y, morphism)


# -- cofactors of alpha(P_j) - P_j --------------------------------------------------------

@dataclass(frozen=True)
class UDecomposition:
    rows: tuple
    failures: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self, names: Sequence[str] | None = None) -> list[str]:
        out = []
        for j, row in enumerate(self.rows, start=1):
            for i, u in enumerate(row, start=1):
                if u:
                    out.append(f"U[{j}][{i}] = {format_element(u)}")
        out.extend(f"failure: {f}" for f in self.failures)
        return out


def u_decomposition(alpha) -> UDecomposition:
    """alpha(P_j) - P_j = sum_{i<j} U[j][i] P_i, one row per j (row 1 is empty)."""
    model = alpha.model
    P = list(model.P)
    rows, failures = [], []
    for j, Pj in enumerate(P):
        diff = alpha(Pj) - Pj
        if j == 0:
            rows.append(())
            if diff:
                failures.append("alpha(P1) != P1")
            continue
        gb = groebner(P[:j], lift=True)
        cof = gb.generator_cofactors(diff)
        if cof is None:
            failures.append(f"alpha(P{j + 1}) - P{j + 1} is not in (P1..P{j})")
            rows.append(tuple(model.sig.zero() for _ in range(j)))
            continue
        recon = model.sig.zero()
        for u, p in zip(cof, P[:j]):
            recon = recon + u * p
        if recon != diff:
            raise AssertionError("cofactors do not reconstruct alpha(P_j) - P_j")
        rows.append(tuple(cof))
    return UDecomposition(tuple(rows), tuple(failures))


# -- the pivot recursion ---------------------------------------------------------------

def prop31_prediction(exp: ThetaExpansion, A4: Element, i: int) -> Element:
    """theta_i + sum_{k=1}^{s-i} (-1)^k C(k+i, k) theta_{k+i} A4^k."""
    out = exp.theta(i)
    for k in range(1, exp.s - i + 1):
        out = out + (-1) ** k * comb(k + i, k) * exp.theta(k + i) * A4 ** k
    return out


def verify_prop31(alpha, exp: ThetaExpansion) -> dict[int, bool]:
    """For each i, whether alpha(theta_i) equals the prediction from the pivot shift."""
    amap = alpha.x_map
    A4 = amap.A(exp.pivot)
    return {i: amap(exp.theta(i)) == prop31_prediction(exp, A4, i) for i in range(exp.s + 1)}


def pivot_expansion_prediction(phis: Sequence[Element], amap: EvenMap, pivot: str) -> Element:
    """alpha(P) - P for P = sum phi_j pivot^j, collected by powers of the pivot.

    The coefficient of pivot^(m-j) is alpha(phi_{m-j}) - phi_{m-j} plus
    sum_{s=1}^{j} C(m-j+s, s) alpha(phi_{m-j+s}) A^s.
    """
    sig = phis[0].sig
    A = amap.A(pivot)
    x = sig.gen(pivot)
    m = len(phis) - 1
    out = (amap(phis[m]) - phis[m]) * x ** m
    for j in range(1, m + 1):
        c = amap(phis[m - j]) - phis[m - j]
        for s in range(1, j + 1):
            c = c + comb(m - j + s, s) * amap(phis[m - j + s]) * A ** s
        out = out + c * x ** (m - j)
    return out


# -- homotopy to the identity when all A_i vanish ----------------------------------------

@dataclass(frozen=True)
class TrivialityResult:
    verdict: str
    certificates: tuple = ()
    primitives: tuple = ()
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.verdict == "homotopic to identity"

    def lines(self) -> list[str]:
        out = [f"verdict: {self.verdict}"]
        if self.reason:
            out.append(f"reason: {self.reason}")
        for (y, u), cert in zip(self.primitives, self.certificates):
            out.append(f"step {y}: u = {format_element(u)}, certificate {'ok' if cert else 'FAILED'}")
        return out


def triviality_check(alpha: SelfEquivalence, cap: int = DEFAULT_MONOMIAL_CAP) -> TrivialityResult:
    """Chain of homotopies id = alpha_0 ~ alpha_1 ~ ... ~ alpha_n = alpha.

    alpha_k agrees with alpha on the first k odd generators (in degree order) and
    with the identity elsewhere; consecutive maps differ at one y by the cocycle
    alpha(y) - y, whose primitive gives the explicit homotopy.
    """
    if not alpha.all_A_zero():
        return TrivialityResult("inconclusive", reason="some A_i is nonzero")
    model = alpha.model
    alg = model.algebra
    cyl = build_cylinder(alg)
    order = sorted(model.y_names, key=lambda y: alg.sig[y].degree)
    current = identity(alg)
    certs, prims = [], []
    for y in order:
        z = alpha.morphism.images[y] - alg.sig.gen(y)
        nxt_images = dict(current.images)
        nxt_images[y] = alpha.morphism.images[y]
        nxt = Morphism(alg, alg, nxt_images)
        if alg.d(z):
            raise AlgebraError(f"alpha({y}) - {y} is not a cocycle")
        u = solve_coboundary(alg, z, cap)
        if u is None:
            raise AlgebraError(f"alpha({y}) - {y} is not a coboundary; odd cohomology is nonzero")
        cert = homotopy_from_primitive(current, nxt, y, u, cyl)
        certs.append(cert)
        prims.append((y, u))
        if not cert:
            return TrivialityResult("failed", tuple(certs), tuple(prims), cert.describe())
        current = nxt
    return TrivialityResult("homotopic to identity", tuple(certs), tuple(prims))
