import sympy
from hypothesis import HealthCheck, settings

from f0sullivan.dga import CochainAlgebra
from f0sullivan.graded_poly import Element, GradedSignature, restrict
from f0sullivan.selfeq.decompose import _monomials

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def to_sympy(p: Element, symbols=None):
    """Even-generator element as a sympy expression (odd generators unsupported)."""
    sig = p.sig
    symbols = symbols or sympy.symbols([g.name for g in sig.generators])
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(symbols, m):
            t *= s ** e
        expr += t
    return expr


def even_sig(*degrees, prefix="x") -> GradedSignature:
    return GradedSignature.of(*((f"{prefix}{i + 1}", d) for i, d in enumerate(degrees)))


def random_model(rng):
    """Pure Sullivan-type algebra: d x = 0 and d y_i a random polynomial in the x's."""
    nx = rng.randint(1, 3)
    xs = [(f"x{i + 1}", rng.choice([2, 2, 4])) for i in range(nx)]
    ny = rng.randint(1, 3)
    evens = GradedSignature.of(*xs)
    ys, diffs = [], []
    for j in range(ny):
        d = rng.choice([4, 6, 8])
        monos = _monomials([w for _, w in xs], d)
        p = evens.zero()
        for m in rng.sample(monos, min(2, len(monos))):
            p = p + evens.monomial(m, rng.randint(-3, 3))
        if not p:
            continue
        ys.append((f"y{j + 1}", d - 1))
        diffs.append(p)
    sig = GradedSignature.of(*(xs + ys))
    return CochainAlgebra(sig, {y: restrict(p, sig) for (y, _), p in zip(ys, diffs)})
