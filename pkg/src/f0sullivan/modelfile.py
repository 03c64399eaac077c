"""Text formats for cochain algebras and for algebra maps.

Model file::

    # comment
    generator x degree 2 even
    generator y degree 3 odd
    d y = x^2

Map file, one line per moved generator (others map to themselves)::

    alpha x2 = x2 + x1^2
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .dga import CochainAlgebra
from .graded_poly import AlgebraError, Element, Generator, GradedSignature, format_element, parse


class ModelFileError(AlgebraError):
    def __init__(self, message: str, line: int | None = None, source: str = ""):
        where = f"{source or '<input>'}:{line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


_GEN = re.compile(r"generator\s+([A-Za-z_][A-Za-z0-9_]*)\s+degree\s+(\d+)\s+(even|odd)\s*$")
_DIFF = re.compile(r"d\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)$")
_ALPHA = re.compile(r"alpha\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)$")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


@dataclass(frozen=True)
class ModelFile:
    path: str
    sig: GradedSignature
    differential: dict

    def algebra(self) -> CochainAlgebra:
        return CochainAlgebra(self.sig, self.differential)

    def text(self) -> str:
        return format_model(self.sig, self.differential)


def parse_model(text: str, source: str = "") -> ModelFile:
    """Generators come first; every ``d`` line refers to a declared generator."""
    gens, diffs = [], []
    seen_diff = set()
    for no, line in _lines(text):
        m = _GEN.match(line)
        if m:
            if diffs:
                raise ModelFileError("generator declared after a differential", no, source)
            name, deg, parity = m.group(1), int(m.group(2)), m.group(3)
            if deg < 1:
                raise ModelFileError(f"degree of {name} must be positive", no, source)
            if (deg % 2 == 1) != (parity == "odd"):
                raise ModelFileError(f"{name}: degree {deg} does not match parity {parity}", no, source)
            if any(g.name == name for g in gens):
                raise ModelFileError(f"duplicate generator {name}", no, source)
            gens.append(Generator(name, deg))
            continue
        m = _DIFF.match(line)
        if m:
            if m.group(1) in seen_diff:
                raise ModelFileError(f"second differential for {m.group(1)}", no, source)
            seen_diff.add(m.group(1))
            diffs.append((no, m.group(1), m.group(2)))
            continue
        raise ModelFileError(f"cannot parse line {line!r}", no, source)
    if not gens:
        raise ModelFileError("no generators declared", None, source)
    sig = GradedSignature(tuple(gens))
    differential = {}
    for no, name, poly in diffs:
        if name not in sig:
            raise ModelFileError(f"differential of undeclared generator {name}", no, source)
        try:
            differential[name] = parse(sig, poly)
        except AlgebraError as exc:
            raise ModelFileError(str(exc), no, source) from exc
    return ModelFile(source, sig, differential)


def load_model(path) -> ModelFile:
    p = Path(path)
    return parse_model(p.read_text(encoding="utf-8"), str(p))


def format_model(sig: GradedSignature, differential: dict) -> str:
    lines = [f"generator {g.name} degree {g.degree} {'odd' if g.odd else 'even'}" for g in sig]
    for g in sig:
        img = differential.get(g.name)
        if img:
            lines.append(f"d {g.name} = {format_element(img)}")
    return "\n".join(lines) + "\n"


def parse_map(text: str, sig: GradedSignature, source: str = "") -> dict[str, Element]:
    images = {}
    for no, line in _lines(text):
        m = _ALPHA.match(line)
        if not m:
            raise ModelFileError(f"cannot parse line {line!r}", no, source)
        name = m.group(1)
        if name not in sig:
            raise ModelFileError(f"unknown generator {name}", no, source)
        if name in images:
            raise ModelFileError(f"second image for {name}", no, source)
        try:
            images[name] = parse(sig, m.group(2))
        except AlgebraError as exc:
            raise ModelFileError(str(exc), no, source) from exc
    return images


def load_map(path, sig: GradedSignature) -> dict[str, Element]:
    p = Path(path)
    return parse_map(p.read_text(encoding="utf-8"), sig, str(p))


def format_map(sig: GradedSignature, images: dict) -> str:
    lines = []
    for g in sig:
        img = images.get(g.name)
        if img is not None and img != sig.gen(g.name):
            lines.append(f"alpha {g.name} = {format_element(img)}")
    return "\n".join(lines) + ("\n" if lines else "")

