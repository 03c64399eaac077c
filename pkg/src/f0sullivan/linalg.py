"""Exact sparse Gaussian elimination over the rationals.

Vectors are dicts mapping a column key to a nonzero Fraction.  Column keys only
need to be mutually comparable so that pivots are chosen deterministically.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

Vector = dict


def _axpy(y: dict, a: Fraction, x: Mapping) -> None:
    """y += a * x, in place, dropping zeros."""
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


class Echelon:
    """Incremental row echelon form with optional combination tracking.

    Each inserted vector carries a tag; for every pivot row we remember which
    combination of tags produced it, which turns span membership into an
    explicit linear solve.
    """

    def __init__(self, order=None):
        self.pivots: dict = {}
        self.combos: dict = {}
        self._key = order

    def _lead(self, v: Mapping):
        return min(v, key=self._key) if self._key else min(v)

    def reduce(self, v: Mapping, combo: Mapping | None = None) -> tuple[dict, dict]:
        """Reduce v against the pivots; returns (residue, combination used).

        After the call: original v = residue + sum(coeff * inserted[tag]) where
        the sum is over the returned combination (when tracking).
        """
        v = dict(v)
        combo = dict(combo or {})
        done: dict = {}
        while v:
            c = self._lead(v)
            row = self.pivots.get(c)
            if row is None:
                done[c] = v.pop(c)
                continue
            a = v[c]
            _axpy(v, -a, row)
            _axpy(combo, -a, self.combos[c])
        return done, combo

    def insert(self, v: Mapping, tag: Hashable | None = None) -> bool:
        """Add a vector; returns True if it increased the rank."""
        start = {tag: Fraction(1)} if tag is not None else {}
        v = dict(v)
        combo = dict(start)
        while v:
            c = self._lead(v)
            row = self.pivots.get(c)
            if row is None:
                inv = 1 / Fraction(v[c])
                v = {k: x * inv for k, x in v.items()}
                combo = {k: x * inv for k, x in combo.items()}
                self.pivots[c] = v
                self.combos[c] = combo
                return True
            a = v[c]
            _axpy(v, -a, row)
            _axpy(combo, -a, self.combos[c])
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, target: Mapping) -> dict | None:
        """Tag coefficients x with sum x[tag] * inserted[tag] = target, or None."""
        v = dict(target)
        x: dict = {}
        while v:
            c = self._lead(v)
            row = self.pivots.get(c)
            if row is None:
                return None
            a = v[c]
            _axpy(v, -a, row)
            _axpy(x, a, self.combos[c])
        return x


def rank(vectors: Iterable[Mapping]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.insert(v)
    return ech.rank


def solve(columns: Mapping[Hashable, Mapping], target: Mapping) -> dict | None:
    """Find x with sum_j x[j] * columns[j] = target (exact), or None."""
    ech = Echelon()
    for tag, col in columns.items():
        ech.insert(col, tag)
    return ech.solve(target)


def nullspace(columns: list[Mapping]) -> list[list[Fraction]]:
    """Basis of {x : sum_j x_j * columns[j] = 0}, as dense coefficient lists."""
    n = len(columns)
    ech = Echelon()
    basis = []
    for j, col in enumerate(columns):
        start = {j: Fraction(1)}
        residue, combo = ech.reduce(col, start)
        if residue:
            ech.insert(col, j)
        else:
            basis.append([combo.get(i, Fraction(0)) for i in range(n)])
    return basis
