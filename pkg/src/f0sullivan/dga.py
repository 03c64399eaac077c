"""Free graded-commutative cochain algebras, morphisms, cylinders and cohomology."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .graded_poly import (AlgebraError, Element, Generator, GradedSignature, INHOMOGENEOUS,
                          apply_map, cohomological_degree, format_element, is_homogeneous)
from .linalg import Echelon

DEFAULT_MONOMIAL_CAP = 20000


class DifferentialError(AlgebraError):
    def __init__(self, message: str, generator: str | None = None):
        super().__init__(message)
        self.generator = generator


class ResourceLimit(AlgebraError):
    pass


@dataclass(frozen=True)
class Verdict:
    ok: bool
    where: str | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok


# -- derivations ----------------------------------------------------------------------

def apply_derivation(p: Element, images: Mapping[str, Element], target: GradedSignature | None = None,
                     cache: dict | None = None) -> Element:
    """Extend a map on generators to a derivation of odd degree.

    d(ab) = d(a) b + (-1)^{|a|} a d(b); generators without an image go to 0.
    The images live in ``target`` (defaults to the source signature), which
    must contain every source generator under the same name.
    """
    sig = p.sig
    target = target or sig
    acc: dict = {}
    for m, c in p.terms.items():
        key = m
        if cache is not None and key in cache:
            dm = cache[key]
        else:
            dm = _derive_monomial(sig, m, images, target)
            if cache is not None:
                cache[key] = dm
        for k, v in dm.terms.items():
            s = acc.get(k, 0) + c * v
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
    return Element(target, acc)


def _embed_monomial(sig, target, exps) -> Element:
    if sig == target:
        return sig.monomial(exps)
    out = target.one()
    for g, e in zip(sig.generators, exps):
        if e:
            out = out * target.gen(g.name) ** e
    return out


def _derive_monomial(sig, m, images, target) -> Element:
    total = target.zero()
    n = len(m)
    prefix_deg = 0
    for i in range(n):
        e = m[i]
        if not e:
            continue
        g = sig.generators[i]
        img = images.get(g.name)
        if img is not None and img:
            pre = tuple(m[j] if j < i else 0 for j in range(n))
            post = tuple(m[j] if j > i else 0 for j in range(n))
            mid = tuple(e - 1 if j == i else 0 for j in range(n))
            term = _embed_monomial(sig, target, pre) * (img * e)
            if e > 1:
                term = term * _embed_monomial(sig, target, mid)
            term = term * _embed_monomial(sig, target, post)
            if prefix_deg % 2:
                term = -term
            total = total + term
        prefix_deg += e * g.degree
    return total


# -- cochain algebras -----------------------------------------------------------------

class CochainAlgebra:
    """(Lambda V, d): a signature plus the differential on generators."""

    def __init__(self, sig: GradedSignature, differential: Mapping[str, Element],
                 simply_connected: bool = True):
        self.sig = sig
        diff = {}
        for name, img in differential.items():
            if name not in sig:
                raise DifferentialError(f"differential given for unknown generator {name}", name)
            if img.sig != sig:
                raise DifferentialError(f"d {name} lives in another signature", name)
            diff[name] = img
        self.differential = {g.name: diff.get(g.name, sig.zero()) for g in sig.generators}
        self._cache: dict = {}
        for g in sig.generators:
            if simply_connected and g.degree == 1:
                raise DifferentialError(f"generator {g.name} has degree 1", g.name)
            img = self.differential[g.name]
            if not is_homogeneous(img, g.degree + 1):
                raise DifferentialError(
                    f"d {g.name} must be homogeneous of degree {g.degree + 1}", g.name)
        for g in sig.generators:
            dd = self.d(self.differential[g.name])
            if dd:
                raise DifferentialError(f"d^2 != 0 at {g.name}", g.name)

    def d(self, p: Element) -> Element:
        return apply_derivation(p, self.differential, cache=self._cache)

    def __repr__(self):
        lines = [f"d {n} = {format_element(v)}" for n, v in self.differential.items()]
        return "CochainAlgebra(" + "; ".join(lines) + ")"


def make_cochain_algebra(sig: GradedSignature, diff: Mapping[str, Element]) -> CochainAlgebra:
    return CochainAlgebra(sig, diff)


def apply_differential(alg: CochainAlgebra, p: Element) -> Element:
    return alg.d(p)


@dataclass(frozen=True)
class Morphism:
    source: CochainAlgebra
    target: CochainAlgebra
    images: Mapping[str, Element]

    def __post_init__(self):
        full = {}
        for g in self.source.sig.generators:
            img = self.images.get(g.name)
            if img is None:
                img = self.target.sig.gen(g.name)
            if img.sig != self.target.sig:
                raise AlgebraError(f"image of {g.name} lives in another signature")
            if not is_homogeneous(img, g.degree):
                raise AlgebraError(f"image of {g.name} is not homogeneous of degree {g.degree}")
            full[g.name] = img
        extra = set(self.images) - set(full)
        if extra:
            raise AlgebraError(f"images given for unknown generators {sorted(extra)}")
        object.__setattr__(self, "images", full)

    def __call__(self, p: Element) -> Element:
        return apply_map(p, self.images, self.target.sig)

    def __eq__(self, other):
        return isinstance(other, Morphism) and self.images == other.images

    def __hash__(self):
        return hash(tuple(sorted(self.images.items(), key=lambda t: t[0])))


def identity(alg: CochainAlgebra) -> Morphism:
    return Morphism(alg, alg, {})


def is_cochain_map(m: Morphism) -> Verdict:
    """alpha(d g) = d(alpha(g)) for every generator g, in signature order."""
    for g in m.source.sig.generators:
        lhs = m(m.source.differential[g.name])
        rhs = m.target.d(m.images[g.name])
        if lhs != rhs:
            return Verdict(False, g.name, f"alpha(d {g.name}) != d(alpha({g.name}))")
    return Verdict(True)


# -- cylinder -------------------------------------------------------------------------

def bar(name: str) -> str:
    return f"{name}_bar"


def hat(name: str) -> str:
    return f"{name}_hat"


class CylinderAlgebra:
    """Lambda(V, V_bar, V_hat) with D(v)=dv, D(v_bar)=v_hat, D(v_hat)=0 and S(v)=v_bar."""

    def __init__(self, base: CochainAlgebra):
        self.base = base
        gens = []
        for g in base.sig.generators:
            gens.append(g)
            gens.append(Generator(bar(g.name), g.degree - 1))
            gens.append(Generator(hat(g.name), g.degree))
        self.sig = GradedSignature(tuple(gens))
        diff = {}
        s_images = {}
        for g in base.sig.generators:
            diff[g.name] = self.embed(base.differential[g.name])
            diff[bar(g.name)] = self.sig.gen(hat(g.name))
            s_images[g.name] = self.sig.gen(bar(g.name))
        self.algebra = CochainAlgebra(self.sig, diff, simply_connected=False)
        self.s_images = s_images
        self._s_cache: dict = {}

    def embed(self, p: Element) -> Element:
        """Include an element of the base algebra."""
        idx = [self.sig.index(g.name) for g in self.base.sig.generators]
        size = len(self.sig)
        terms = {}
        for m, c in p.terms.items():
            full = [0] * size
            for i, e in zip(idx, m):
                full[i] = e
            terms[tuple(full)] = c
        return Element(self.sig, terms)

    def D(self, p: Element) -> Element:
        return self.algebra.d(p)

    def S(self, p: Element) -> Element:
        return apply_derivation(p, self.s_images, cache=self._s_cache)

    @property
    def extended_generators(self) -> list[Generator]:
        return list(self.sig.generators)


def build_cylinder(alg: CochainAlgebra) -> CylinderAlgebra:
    return CylinderAlgebra(alg)


def e_theta(cyl: CylinderAlgebra, v: str, return_steps: bool = False):
    """v + v_hat + sum_{n>=1} (S D)^n(v) / n!, iterated until the term vanishes."""
    g = cyl.base.sig[v]
    term = cyl.sig.gen(v)
    total = term + cyl.sig.gen(hat(v))
    n = 0
    while True:
        term = cyl.S(cyl.D(term))
        if not term:
            break
        n += 1
        if n > g.degree:
            raise AssertionError(f"e^theta iteration for {v} did not terminate")
        total = total + term / math.factorial(n)
    return (total, n) if return_steps else total


# -- homotopies -----------------------------------------------------------------------

@dataclass(frozen=True)
class HomotopyCertificate:
    F: Mapping[str, Element]
    alpha: Morphism
    alpha_prime: Morphism
    ok: bool = True

    def dump(self) -> list[str]:
        return [f"F({n}) = {format_element(v)}" for n, v in self.F.items()]


@dataclass(frozen=True)
class HomotopyFailure:
    invariant: str
    generator: str
    detail: str = ""
    ok: bool = False

    def __bool__(self):
        return False

    def describe(self) -> str:
        return f"{self.invariant} fails at {self.generator}" + (f": {self.detail}" if self.detail else "")


def check_homotopy(cyl: CylinderAlgebra, F: Mapping[str, Element], alpha: Morphism,
                   alpha_prime: Morphism):
    """Verify a cylinder map F: F(v)=alpha(v), F D = d F, F(e^theta(v)) = alpha'(v)."""
    base = cyl.base
    full = {}
    for g in cyl.sig.generators:
        img = F.get(g.name, base.sig.zero())
        if img.sig != base.sig:
            return HomotopyFailure("signature", g.name, "image lives in another signature")
        if not is_homogeneous(img, g.degree):
            return HomotopyFailure("degree", g.name, f"image is not of degree {g.degree}")
        full[g.name] = img

    def apply_F(p: Element) -> Element:
        return apply_map(p, full, base.sig)

    for g in base.sig.generators:
        if full[g.name] != alpha.images[g.name]:
            return HomotopyFailure("initial-end", g.name, "F(v) != alpha(v)")
    for g in cyl.sig.generators:
        lhs = apply_F(cyl.D(cyl.sig.gen(g.name)))
        rhs = base.d(full[g.name])
        if lhs != rhs:
            return HomotopyFailure("D-compatibility", g.name, "F(D w) != d F(w)")
    for g in base.sig.generators:
        if apply_F(e_theta(cyl, g.name)) != alpha_prime.images[g.name]:
            return HomotopyFailure("terminal-end", g.name, "F(e^theta(v)) != alpha'(v)")
    return HomotopyCertificate(full, alpha, alpha_prime)


def reflexivity_certificate(alpha: Morphism) -> Mapping[str, Element]:
    """F with F(v)=alpha(v) and all barred and hatted generators sent to 0."""
    return dict(alpha.images)


def homotopy_from_primitive(alpha: Morphism, alpha_prime: Morphism, v_top: str, u: Element,
                            cyl: CylinderAlgebra | None = None):
    """Explicit homotopy for maps that differ only at one generator by a coboundary.

    Requires alpha and alpha' to agree away from v_top, v_top to be absent
    from the differential of every generator, and alpha'(v) - alpha(v) = d u.
    Then F(w) = alpha(w), F(v_hat) = d u, F(v_bar) = u and F vanishes on the
    other barred and hatted generators.
    """
    alg = alpha.source
    cyl = cyl or build_cylinder(alg)
    for g in alg.sig.generators:
        if g.name != v_top and alpha.images[g.name] != alpha_prime.images[g.name]:
            raise AlgebraError(f"maps differ at {g.name}, not only at {v_top}")
    idx = alg.sig.index(v_top)
    for g in alg.sig.generators:
        if any(m[idx] for m in alg.differential[g.name].terms):
            raise AlgebraError(f"{v_top} appears in d {g.name}")
    z = alpha.images[v_top]
    z2 = alpha_prime.images[v_top]
    if z2 - z != alg.d(u):
        raise AlgebraError("alpha'(v) - alpha(v) != d u")
    F = dict(alpha.images)
    F[hat(v_top)] = z2 - z
    F[bar(v_top)] = u
    return check_homotopy(cyl, F, alpha, alpha_prime)


# -- cohomology ----------------------------------------------------------------------

def monomial_basis(sig: GradedSignature, d: int, cap: int = DEFAULT_MONOMIAL_CAP) -> list[tuple]:
    """Exponent vectors of all monomials of degree d (odd exponents <= 1)."""
    gens = sig.generators
    n = len(gens)
    out: list[tuple] = []
    if d < 0:
        return out

    def rec(i, left, prefix):
        if i == n:
            if left == 0:
                out.append(tuple(prefix))
                if len(out) > cap:
                    raise ResourceLimit(f"more than {cap} monomials in degree {d}")
            return
        g = gens[i]
        top = 1 if g.odd else left // g.degree
        for e in range(min(top, left // g.degree) + 1):
            prefix.append(e)
            rec(i + 1, left - e * g.degree, prefix)
            prefix.pop()
    rec(0, d, [])
    return out


def differential_rank(alg: CochainAlgebra, d: int, cap: int = DEFAULT_MONOMIAL_CAP) -> int:
    """Rank of d restricted to degree d."""
    ech = Echelon()
    for m in monomial_basis(alg.sig, d, cap):
        img = alg.d(alg.sig.monomial(m))
        if img:
            ech.insert(img.terms)
    return ech.rank


def cohomology_dimension(alg: CochainAlgebra, d: int, cap: int = DEFAULT_MONOMIAL_CAP) -> int:
    if d < 0:
        raise AlgebraError("degree must be nonnegative")
    size = len(monomial_basis(alg.sig, d, cap))
    return size - differential_rank(alg, d, cap) - (differential_rank(alg, d - 1, cap) if d else 0)


def solve_coboundary(alg: CochainAlgebra, z: Element, cap: int = DEFAULT_MONOMIAL_CAP) -> Element | None:
    """u with d u = z, or None when the cocycle z is not a coboundary."""
    if not z:
        return alg.sig.zero()
    deg = cohomological_degree(z)
    if deg is INHOMOGENEOUS:
        raise AlgebraError("z must be homogeneous")
    if alg.d(z):
        raise AlgebraError("z is not a cocycle")
    ech = Echelon()
    for m in monomial_basis(alg.sig, deg - 1, cap):
        img = alg.d(alg.sig.monomial(m))
        if img:
            ech.insert(img.terms, m)
    x = ech.solve(z.terms)
    if x is None:
        return None
    u = Element(alg.sig, dict(x))
    assert alg.d(u) == z
    return u
