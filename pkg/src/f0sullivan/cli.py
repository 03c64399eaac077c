"""Command-line driver.

Exit codes: 0 for success or a positive verdict, 1 for a negative or
inconclusive verdict or a validation failure, 2 for usage and parse errors.
"""
from __future__ import annotations

import argparse
import sys

from .dga import (DEFAULT_MONOMIAL_CAP, DifferentialError, Morphism, ResourceLimit, build_cylinder,
                  check_homotopy, cohomology_dimension, homotopy_from_primitive, is_cochain_map,
                  reflexivity_certificate, solve_coboundary)
from .f0_model import F0Error, NotRegular, from_algebra, verify_f0_cohomology
from .graded_poly import AlgebraError, format_element
from .modelfile import ModelFileError, load_map, load_model
from .selfeq.constraints import coefficient_formulas, derive_constraints
from .selfeq.decompose import DecompositionFailure, decompose_by_A
from .selfeq.identities import verify_identities
from .selfeq.selfequiv import SelfEquivalenceError, make_selfeq, triviality_check, u_decomposition
from .selfeq.theta import Roles, theta_expand

OK, NEGATIVE, USAGE = 0, 1, 2


class _Out:
    def __init__(self, stream):
        self.stream = stream

    def __call__(self, *lines):
        for line in lines:
            self.stream.write(line + "\n")


def _algebra(args, out):
    mf = load_model(args.file)
    try:
        return mf.algebra()
    except DifferentialError as exc:
        out(str(exc))
        return None
    except AlgebraError as exc:
        out(f"invalid differential: {exc}")
        return None


def cmd_check(args, out) -> int:
    alg = _algebra(args, out)
    if alg is None:
        out("status: invalid")
        return NEGATIVE
    out("differential: ok")
    try:
        model = from_algebra(alg)
    except NotRegular as exc:
        out("shape: not F0", "regular sequence: fails", *exc.certificate.report(), "status: invalid")
        return NEGATIVE
    except F0Error as exc:
        out(f"shape: not F0 ({exc})", "status: invalid")
        return NEGATIVE
    out(f"shape: F0, n = {model.n}")
    out(*model.regularity.report())
    out(f"normalized: {'yes' if model.is_normalized() else 'no'}")
    out("status: ok")
    return OK


def cmd_cohomology(args, out) -> int:
    alg = _algebra(args, out)
    if alg is None:
        return NEGATIVE
    try:
        for d in range(args.max_degree + 1):
            out(f"H^{d} = {cohomology_dimension(alg, d, args.monomial_cap)}")
        try:
            model = from_algebra(alg)
        except F0Error:
            return OK
        report = verify_f0_cohomology(model, args.max_degree, args.monomial_cap)
    except ResourceLimit as exc:
        out(f"resource limit: {exc}")
        return NEGATIVE
    if report.ok:
        out("F0 check: pass (odd degrees vanish, even degrees match the quotient ring)")
        return OK
    out(f"F0 check: fail at degree {report.first_failure}")
    return NEGATIVE


def _morphism(alg, path, label, out):
    images = load_map(path, alg.sig)
    try:
        m = Morphism(alg, alg, images)
    except AlgebraError as exc:
        out(f"{label}: {exc}")
        return None
    v = is_cochain_map(m)
    if not v:
        out(f"{label} is not a cochain map at {v.where}")
        return None
    return m


def cmd_homotopic(args, out) -> int:
    alg = _algebra(args, out)
    if alg is None:
        return NEGATIVE
    alpha = _morphism(alg, args.alpha, "alpha", out)
    beta = _morphism(alg, args.beta, "beta", out)
    if alpha is None or beta is None:
        out("verdict: invalid")
        return NEGATIVE
    cyl = build_cylinder(alg)
    if alpha == beta:
        cert = check_homotopy(cyl, reflexivity_certificate(alpha), alpha, beta)
        out("verdict: homotopic" if cert else f"verdict: failed ({cert.describe()})")
        if cert:
            out(*cert.dump())
        return OK if cert else NEGATIVE
    diff = [g.name for g in alg.sig.generators if alpha.images[g.name] != beta.images[g.name]]
    used = set()
    for img in alg.differential.values():
        used |= img.variables()
    if used & set(diff):
        out("verdict: inconclusive (the maps differ on a generator that occurs in a differential)")
        return NEGATIVE
    diff.sort(key=lambda n: alg.sig[n].degree)
    current = alpha
    steps = []
    try:
        for v in diff:
            nxt = Morphism(alg, alg, {**current.images, v: beta.images[v]})
            z = beta.images[v] - alpha.images[v]
            if alg.d(z):
                out(f"verdict: inconclusive (beta({v}) - alpha({v}) is not a cocycle)")
                return NEGATIVE
            u = solve_coboundary(alg, z, args.monomial_cap)
            if u is None:
                if len(diff) == 1:
                    out(f"verdict: not homotopic (beta({v}) - alpha({v}) is not a coboundary)")
                else:
                    out(f"verdict: inconclusive (beta({v}) - alpha({v}) is not a coboundary)")
                return NEGATIVE
            cert = homotopy_from_primitive(current, nxt, v, u, cyl)
            if not cert:
                out(f"verdict: failed ({cert.describe()})")
                return NEGATIVE
            steps.append((v, u, cert))
            current = nxt
    except ResourceLimit as exc:
        out(f"verdict: inconclusive (resource limit: {exc})")
        return NEGATIVE
    out("verdict: homotopic" if len(steps) == 1 else f"verdict: homotopic through {len(steps)} certificates")
    for v, u, cert in steps:
        out(f"step {v}: u = {format_element(u)}")
        out(*("  " + line for line in cert.dump()))
    return OK


def cmd_analyze(args, out) -> int:
    alg = _algebra(args, out)
    if alg is None:
        return NEGATIVE
    try:
        model = from_algebra(alg)
    except F0Error as exc:
        out(f"not an F0 model: {exc}")
        return NEGATIVE
    images = load_map(args.map, alg.sig)
    A = {x: images[x] - alg.sig.gen(x) for x in model.x_names if x in images}
    ys = {y: images[y] for y in model.y_names if y in images}
    try:
        alpha = make_selfeq(model, A, ys)
    except SelfEquivalenceError as exc:
        out(f"invalid self-equivalence: {exc}")
        return NEGATIVE
    out(*alpha.lines())
    ud = u_decomposition(alpha)
    out(*ud.lines())
    if not ud.ok:
        return NEGATIVE
    status = OK
    cs = None
    if model.n == 4:
        roles = Roles(*model.x_names[:3])
        try:
            exp = theta_expand(model.P[0], model.x_names[3], roles)
            cs = derive_constraints(alpha, exp, cap=args.monomial_cap)
        except AlgebraError as exc:
            out(f"constraint analysis failed: {exc}")
            return NEGATIVE
        out(*cs.lines(triviality=False))
        if not cs.ok:
            status = NEGATIVE
        if cs.route == "case-1" and cs.verdict.startswith("trivial"):
            out("trivial by the case-1 route")
        if cs.route == "case-2" and cs.A_red is not None:
            for k, table in coefficient_formulas(exp, cs).items():
                out(f"closed forms for theta_{k}: {'ok' if table.ok else 'MISMATCH'}")
                if not table.ok:
                    status = NEGATIVE
            for j, P in enumerate(model.P, start=1):
                try:
                    d = decompose_by_A(P, cs.A_red, roles)
                except DecompositionFailure as exc:
                    out(f"P{j}: no decomposition ({exc})")
                    continue
                out(f"P{j}: " + ", ".join(d.lines()))
    if alpha.all_A_zero():
        out("trivial, all A nil")
        res = cs.triviality if cs is not None and cs.triviality is not None \
            else triviality_check(alpha, args.monomial_cap)
        out(*res.lines())
        return status if res.certified else NEGATIVE
    if cs is None:
        out(f"A nonzero; the constraint analysis needs four generator pairs (found {model.n})")
    return status


def cmd_verify_lemmas(args, out) -> int:
    report = verify_identities(args.seed, args.trials)
    out(*report.lines())
    return OK if report.ok else NEGATIVE


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _nonnegative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="f0sullivan", description="Exact computations with F0 Sullivan models.")
    p.add_argument("--monomial-cap", type=_positive, default=DEFAULT_MONOMIAL_CAP,
                   help="largest monomial basis a linear solve may enumerate")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="validate a model file")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("cohomology", help="cohomology dimensions up to a degree")
    c.add_argument("file")
    c.add_argument("--max-degree", type=_nonnegative, required=True)
    c.set_defaults(func=cmd_cohomology)

    c = sub.add_parser("homotopic", help="decide homotopy of two maps constructively")
    c.add_argument("file")
    c.add_argument("--alpha", required=True)
    c.add_argument("--beta", required=True)
    c.set_defaults(func=cmd_homotopic)

    c = sub.add_parser("analyze", help="constraint and decomposition report for a self-map")
    c.add_argument("file")
    c.add_argument("--map", required=True)
    c.set_defaults(func=cmd_analyze)

    c = sub.add_parser("verify-lemmas", help="seeded randomized identity checks")
    c.add_argument("--seed", type=_nonnegative, default=1)
    c.add_argument("--trials", type=_positive, default=100)
    c.set_defaults(func=cmd_verify_lemmas)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    out = _Out(stdout)
    try:
        return args.func(args, out)
    except (ModelFileError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
