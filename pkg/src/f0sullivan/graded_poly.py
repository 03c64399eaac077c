"""Exact arithmetic in a free graded-commutative algebra.

Even generators commute, odd generators anticommute and square to zero.
Coefficients are ``fractions.Fraction``.  A monomial is stored as a tuple of
exponents indexed by the signature order; its canonical reading is the ordered
product of generators, so the sign produced by sorting odd factors is folded
into the coefficient.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Number = Union[int, Fraction]


class AlgebraError(ValueError):
    """Raised for contract violations in the graded algebra."""


class SignatureMismatch(AlgebraError):
    pass


class DegreeError(AlgebraError):
    pass


class ParseError(AlgebraError):
    pass


class _Inhomogeneous:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INHOMOGENEOUS"


INHOMOGENEOUS = _Inhomogeneous()


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    parity: str = ""

    def __post_init__(self):
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", self.name):
            raise AlgebraError(f"invalid generator name {self.name!r}")
        if not isinstance(self.degree, int) or self.degree <= 0:
            raise DegreeError(f"generator {self.name} needs a positive degree")
        expected = "odd" if self.degree % 2 else "even"
        if not self.parity:
            object.__setattr__(self, "parity", expected)
        elif self.parity != expected:
            raise DegreeError(
                f"generator {self.name}: parity {self.parity} does not match degree {self.degree}"
            )

    @property
    def odd(self) -> bool:
        return self.parity == "odd"


@dataclass(frozen=True)
class GradedSignature:
    generators: tuple[Generator, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise AlgebraError("a signature needs at least one generator")
        index = {}
        for i, g in enumerate(gens):
            if g.name in index:
                raise AlgebraError(f"duplicate generator name {g.name}")
            index[g.name] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def of(cls, *specs: tuple[str, int]) -> "GradedSignature":
        """Build from (name, degree) pairs."""
        return cls(tuple(Generator(n, d) for n, d in specs))

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.generators)

    def __contains__(self, name) -> bool:
        if isinstance(name, Generator):
            name = name.name
        return name in self._index

    def __getitem__(self, name: str) -> Generator:
        return self.generators[self.index(name)]

    def index(self, g: Union[str, Generator]) -> int:
        name = g.name if isinstance(g, Generator) else g
        try:
            return self._index[name]
        except KeyError:
            raise AlgebraError(f"unknown generator {name}") from None

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g.degree for g in self.generators)

    @property
    def odd_mask(self) -> tuple[bool, ...]:
        return tuple(g.odd for g in self.generators)

    def even_generators(self) -> list[Generator]:
        return [g for g in self.generators if not g.odd]

    def odd_generators(self) -> list[Generator]:
        return [g for g in self.generators if g.odd]

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return self.const(1)

    def const(self, c: Number) -> "Element":
        c = Fraction(c)
        return Element(self, {(0,) * len(self): c} if c else {})

    def gen(self, g: Union[str, Generator]) -> "Element":
        i = self.index(g)
        exps = [0] * len(self)
        exps[i] = 1
        return Element(self, {tuple(exps): Fraction(1)})

    def gens(self) -> list["Element"]:
        return [self.gen(g) for g in self.generators]

    def monomial(self, exps: Iterable[int], coeff: Number = 1) -> "Element":
        exps = tuple(exps)
        if len(exps) != len(self):
            raise AlgebraError("exponent vector has the wrong length")
        for e, odd in zip(exps, self.odd_mask):
            if e < 0 or (odd and e > 1):
                raise AlgebraError(f"invalid exponent vector {exps}")
        c = Fraction(coeff)
        return Element(self, {exps: c} if c else {})

    def parse(self, text: str) -> "Element":
        return parse(self, text)

    def sort_key(self, exps: tuple[int, ...]):
        """Key that increases with the monomial order.

        Weighted graded reverse lexicographic order on the even part, then the
        odd part compared lexicographically.
        """
        return _sort_key(self, exps)


def _sort_key(sig: GradedSignature, exps):
    degs = sig.degrees
    mask = sig.odd_mask
    even_deg = 0
    rev = []
    odd = []
    for e, d, o in zip(exps, degs, mask):
        if o:
            odd.append(e)
        else:
            even_deg += e * d
            rev.append(-e)
    rev.reverse()
    return (even_deg, tuple(rev), tuple(odd))


def _mul_monomials(mask, a, b):
    """Return (sign, product exponents) or (0, None) if an odd factor repeats."""
    sign = 1
    later_odd_in_a = 0
    # walk from the last generator down, counting odd factors of a seen so far
    n = len(a)
    out = [0] * n
    for i in range(n - 1, -1, -1):
        ea, eb = a[i], b[i]
        if mask[i]:
            if ea and eb:
                return 0, None
            if eb and later_odd_in_a % 2:
                sign = -sign
            if ea:
                later_odd_in_a += 1
        out[i] = ea + eb
    return sign, tuple(out)


class Element:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("sig", "terms", "_hash")

    def __init__(self, sig: GradedSignature, terms: Mapping[tuple, Fraction]):
        self.sig = sig
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    # -- construction helpers -------------------------------------------------
    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.sig != self.sig:
                raise SignatureMismatch("elements live in different signatures")
            return other
        if isinstance(other, (int, Fraction)):
            return self.sig.const(other)
        return NotImplemented

    # -- ring operations ------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Element(self.sig, terms)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.sig, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self.sig.zero()
        mask = self.sig.odd_mask
        has_odd = any(mask)
        terms: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if has_odd:
                    sign, m = _mul_monomials(mask, ma, mb)
                    if not sign:
                        continue
                    c = ca * cb if sign > 0 else -(ca * cb)
                else:
                    m = tuple(x + y for x, y in zip(ma, mb))
                    c = ca * cb
                terms[m] = terms.get(m, 0) + c
        return Element(self.sig, terms)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            inv = 1 / Fraction(other)
            return Element(self.sig, {m: c * inv for m, c in self.terms.items()})
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise AlgebraError("only nonnegative integer powers are supported")
        result = self.sig.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.sig.const(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.sig == other.sig and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.sig), Fraction(0))

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        """Terms from the largest monomial down."""
        return sorted(self.terms.items(), key=lambda t: self.sig.sort_key(t[0]), reverse=True)

    def leading_monomial(self) -> tuple:
        if not self.terms:
            raise AlgebraError("zero has no leading monomial")
        return max(self.terms, key=self.sig.sort_key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def variables(self) -> set[str]:
        names = self.sig.names
        return {names[i] for m in self.terms for i, e in enumerate(m) if e}

    def contains_odd(self) -> bool:
        mask = self.sig.odd_mask
        return any(e and o for m in self.terms for e, o in zip(m, mask))

    def degree(self):
        return cohomological_degree(self)

    def __repr__(self):
        return f"Element({self})"

    def __str__(self):
        return format_element(self)


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(sig: GradedSignature, exps) -> str:
    parts = []
    for g, e in zip(sig.generators, exps):
        if e == 1:
            parts.append(g.name)
        elif e > 1:
            parts.append(f"{g.name}^{e}")
    return "*".join(parts)


def format_element(p: Element) -> str:
    """Canonical text: terms in decreasing monomial order, e.g. ``x2^2 + x1^2*x2 - 3/2*x1^4``."""
    if not p.terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        mono = format_monomial(p.sig, m)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = _fmt_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(a)}*{mono}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# -- free functions -------------------------------------------------------------

def _check_same(a: Element, b: Element):
    if a.sig != b.sig:
        raise SignatureMismatch("elements live in different signatures")


def add(a: Element, b: Element) -> Element:
    _check_same(a, b)
    return a + b


def mul(a: Element, b: Element) -> Element:
    _check_same(a, b)
    return a * b


def cohomological_degree(p: Element):
    """Common degree of the terms, ``INHOMOGENEOUS`` if they differ, None for zero."""
    if not p.terms:
        return None
    degs = p.sig.degrees
    seen = {sum(e * d for e, d in zip(m, degs)) for m in p.terms}
    if len(seen) > 1:
        return INHOMOGENEOUS
    return seen.pop()


def is_homogeneous(p: Element, degree: int | None = None) -> bool:
    """Zero counts as homogeneous of every degree."""
    d = cohomological_degree(p)
    if d is None:
        return True
    if d is INHOMOGENEOUS:
        return False
    return degree is None or d == degree


def monomial_degree(sig: GradedSignature, exps) -> int:
    return sum(e * d for e, d in zip(exps, sig.degrees))


def homogeneous_part(p: Element, degree: int) -> Element:
    degs = p.sig.degrees
    return Element(p.sig, {m: c for m, c in p.terms.items()
                           if sum(e * d for e, d in zip(m, degs)) == degree})


def deg_in(p: Element, var: Union[str, Generator]) -> int:
    """Degree in one generator; -1 for the zero element."""
    if not p.terms:
        return -1
    i = p.sig.index(var)
    return max(m[i] for m in p.terms)


def coeff_wrt(p: Element, var: Union[str, Generator], k: int) -> Element:
    """The c_k in p = sum_k c_k * var^k, with var written on the right."""
    sig = p.sig
    i = sig.index(var)
    mask = sig.odd_mask
    terms = {}
    for m, c in p.terms.items():
        if m[i] != k:
            continue
        if mask[i] and k:
            # move var past the odd factors that follow it
            if sum(m[j] for j in range(i + 1, len(m)) if mask[j]) % 2:
                c = -c
        mm = list(m)
        mm[i] = 0
        terms[tuple(mm)] = c
    return Element(sig, terms)


def coefficients_wrt(p: Element, var: Union[str, Generator]) -> list[Element]:
    """[c_0, ..., c_d] with d = deg_in(p, var); empty for zero."""
    return [coeff_wrt(p, var, k) for k in range(deg_in(p, var) + 1)]


def apply_map(p: Element, images: Mapping[str, Element], target: GradedSignature | None = None) -> Element:
    """Image of p under the algebra map sending each generator to its image.

    Generators missing from ``images`` map to the generator of the same name in
    the target signature.  The map is applied factor by factor in signature
    order, so the Koszul signs of the images are respected.
    """
    sig = p.sig
    target = target or sig
    gen_images = []
    for g in sig.generators:
        img = images.get(g.name)
        if img is None:
            img = target.gen(g.name)
        elif img.sig != target:
            raise SignatureMismatch(f"image of {g.name} lives in another signature")
        gen_images.append(img)
    powers: dict = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            powers[key] = gen_images[i] ** e
        return powers[key]

    acc: dict = {}
    for m, c in p.terms.items():
        term = target.const(c)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
                if not term.terms:
                    break
        for mm, cc in term.terms.items():
            acc[mm] = acc.get(mm, 0) + cc
    return Element(target, acc)


def substitute(p: Element, var: Union[str, Generator], expr: Element) -> Element:
    """Replace an even generator by a homogeneous element of the same degree."""
    sig = p.sig
    g = sig[var.name if isinstance(var, Generator) else var]
    if g.odd:
        raise AlgebraError("substitution for odd generators is not supported")
    if expr.sig != sig:
        raise SignatureMismatch("substituted expression lives in another signature")
    d = cohomological_degree(expr)
    if d is INHOMOGENEOUS:
        raise DegreeError("substituted expression is inhomogeneous")
    if d is not None and d != g.degree:
        raise DegreeError(f"substituted expression has degree {d}, expected {g.degree}")
    return substitute_unchecked(p, g.name, expr)


def substitute_unchecked(p: Element, var: str, expr: Element) -> Element:
    """Substitution for an even generator without the degree check."""
    sig = p.sig
    i = sig.index(var)
    if sig.generators[i].odd:
        raise AlgebraError("substitution for odd generators is not supported")
    even_only = not any(sig.odd_mask)
    powers = {0: sig.one()}
    acc: dict = {}
    for m, c in p.terms.items():
        e = m[i]
        if e not in powers:
            powers[e] = expr ** e
        rest = list(m)
        rest[i] = 0
        rest = tuple(rest)
        if even_only:
            for mm, cc in powers[e].terms.items():
                key = tuple(a + b for a, b in zip(rest, mm))
                acc[key] = acc.get(key, 0) + c * cc
        else:
            # var is even, so the monomial is exactly rest * var^e
            for k, v in (Element(sig, {rest: c}) * powers[e]).terms.items():
                acc[k] = acc.get(k, 0) + v
    return Element(sig, acc)


def restrict(p: Element, target: GradedSignature) -> Element:
    """Re-express p over a signature containing all of its variables by name."""
    names = p.sig.names
    pos = [target.index(n) if n in target else None for n in names]
    terms = {}
    for m, c in p.terms.items():
        out = [0] * len(target)
        for i, e in enumerate(m):
            if e:
                if pos[i] is None:
                    raise SignatureMismatch(f"generator {names[i]} missing from target")
                out[pos[i]] = e
        if any(o for o in target.odd_mask):
            # reordering odd factors may introduce a sign
            sign = _reorder_sign(p.sig, m, pos)
            c = c * sign
        terms[tuple(out)] = terms.get(tuple(out), 0) + c
    return Element(target, terms)


def _reorder_sign(sig, m, pos) -> int:
    odd_positions = [pos[i] for i, e in enumerate(m) if e and sig.odd_mask[i]]
    inv = 0
    for a in range(len(odd_positions)):
        for b in range(a + 1, len(odd_positions)):
            if odd_positions[a] > odd_positions[b]:
                inv += 1
    return -1 if inv % 2 else 1


# -- parsing --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("name", name))
        elif op is not None:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {text!r}")
            tokens.append(("op", op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, sig: GradedSignature, text: str):
        self.sig = sig
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> Element:
        if not self.tokens:
            raise ParseError("empty polynomial")
        e = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return e

    def expr(self) -> Element:
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> Element:
        acc = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.power()
            elif kind == "op" and val == "/":
                self.take()
                d = self.power()
                if not d.is_constant() or d.is_zero():
                    raise ParseError(f"can only divide by a nonzero constant in {self.text!r}")
                acc = acc / d.constant_term()
            else:
                return acc

    def power(self) -> Element:
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be a nonnegative integer in {self.text!r}")
            return base ** val
        return base

    def atom(self) -> Element:
        kind, val = self.take()
        if kind == "num":
            return self.sig.const(val)
        if kind == "name":
            if val not in self.sig:
                raise ParseError(f"unknown generator {val!r}")
            return self.sig.gen(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "op" and val == "-":
            return -self.power()
        raise ParseError(f"unexpected token in {self.text!r}")


def parse(sig: GradedSignature, text: str) -> Element:
    """Parse polynomial text such as ``x2^2 + x1^2*x2 - 3/2*x1^4``."""
    return _Parser(sig, text).parse()
