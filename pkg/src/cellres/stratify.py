"""Compatible Z^n-stratifications psi on a periodic cell complex."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Callable, Mapping, Sequence

from .cellcomplex import PeriodicCellComplex, _fmt

KINDS = ("ceiling", "anderson", "lcm", "fh_p2")


class CompatibilityError(ValueError):
    pass


@dataclass(frozen=True)
class Stratification:
    """Labels psi(sigma) in Z^n for the canonical representative of each cell class.

    ``point_label`` (when present) evaluates psi at an arbitrary point q of
    L_R; it is used for the interior-constancy check.
    """

    kind: str
    shift: tuple[Fraction, ...]
    labels: tuple[tuple[int, ...], ...]
    point_label: Callable | None = field(default=None, compare=False, repr=False)

    def label_at(self, C: PeriodicCellComplex, cell: int, offset: Sequence[int]) -> tuple[int, ...]:
        """psi(sigma + v) = psi(sigma) + iota(v)."""
        return tuple(a + b for a, b in zip(self.labels[cell], C.lattice.embed(offset)))

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        out = {"kind": self.kind, "shift": [_fmt(x) for x in self.shift],
               "labels": [list(l) for l in self.labels]}
        if names is not None:
            out["monomials"] = [render_monomial(l, names) for l in self.labels]
        return out


def variable_names(n: int, lawrence_m: int | None = None) -> list[str]:
    """x1..xm, y1..ym for Lawrence lattices, otherwise x1..xn."""
    if lawrence_m is not None and 2 * lawrence_m == n:
        return [f"x{i + 1}" for i in range(lawrence_m)] + [f"y{i + 1}" for i in range(lawrence_m)]
    return [f"x{i + 1}" for i in range(n)]


def _power(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def render_monomial(exp: Sequence[int], names: Sequence[str]) -> str:
    """Laurent monomial such as ``x3*y4/(x4*y3)``; the empty monomial is ``1``."""
    num = [_power(nm, e) for nm, e in zip(names, exp) if e > 0]
    den = [_power(nm, -e) for nm, e in zip(names, exp) if e < 0]
    top = "*".join(num) if num else "1"
    if not den:
        return top
    bottom = den[0] if len(den) == 1 else "(" + "*".join(den) + ")"
    return f"{top}/{bottom}"


def _join(vectors):
    return tuple(max(c) for c in zip(*vectors))


def _vertex_max(C: PeriodicCellComplex, vertex_label: Callable) -> tuple[tuple[int, ...], ...]:
    """Label of each class = componentwise max of its vertex labels (computed geometrically)."""
    labels = []
    for c in C.cells:
        labels.append(_join([vertex_label(v) for v in c.vertices]))
    return tuple(labels)


def ceiling(C: PeriodicCellComplex) -> Stratification:
    """psi(q) = ceil(iota(q) + s), evaluated at a relative-interior point of each cell."""

    def at(q):
        return tuple(ceil(x) for x in C.ambient(q))

    labels = []
    for c in C.cells:
        a, b = at(c.interior_point()), at(c.sample_point())
        if a != b:
            raise CompatibilityError(f"ceiling is not constant on cell {c.index}: {a} vs {b}")
        labels.append(a)
    return Stratification("ceiling", C.shift, tuple(labels), at)


def anderson(C: PeriodicCellComplex) -> Stratification:
    """Vertex label (floor(a), -floor(a)) with a the first block of the shifted ambient point."""
    L = C.lattice
    if not L.is_lawrence():
        raise CompatibilityError("the Anderson stratification needs a Lawrence lattice {(v, -v)}")
    m = L.n // 2

    def vertex_label(q):
        a = [floor(x) for x in C.ambient(q)[:m]]
        return tuple(a) + tuple(-x for x in a)

    return Stratification("anderson", C.shift, _vertex_max(C, vertex_label))


def lcm_from_vertices(C: PeriodicCellComplex, vertex_labels: Mapping[int, Sequence[int]]) -> Stratification:
    """Extend per-class vertex labels to all cells by componentwise max over closure vertices."""
    L = C.lattice
    vclass = {}
    for c in C.cells_of_dim(0):
        if c.index not in vertex_labels:
            raise ValueError(f"no label given for vertex class {c.index}")
        vclass[c.vertices[0]] = tuple(int(x) for x in vertex_labels[c.index])

    def vertex_label(p):
        off = tuple(floor(x) for x in p)
        base = tuple(x - o for x, o in zip(p, off))
        return tuple(a + b for a, b in zip(vclass[base], L.embed(off)))

    return Stratification("lcm", C.shift, _vertex_max(C, vertex_label))


@dataclass
class CompatibilityReport:
    passed: bool
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"status": "PASS" if self.passed else "FAIL", "witnesses": self.violations}


def check_compatible(C: PeriodicCellComplex, psi: Stratification) -> CompatibilityReport:
    """Closure monotonicity on every facet relation plus interior constancy where evaluable."""
    bad = []
    for c in C.cells:
        for f in c.facets:
            lab = psi.label_at(C, f.cell, f.offset)
            if any(x > y for x, y in zip(lab, psi.labels[c.index])):
                bad.append({"cell": c.index, "facet": f.cell, "offset": list(f.offset),
                            "facet_label": list(lab), "cell_label": list(psi.labels[c.index])})
        if psi.point_label is not None:
            for q in (c.interior_point(), c.sample_point()):
                got = psi.point_label(q)
                if tuple(got) != tuple(psi.labels[c.index]):
                    bad.append({"cell": c.index, "point": [_fmt(x) for x in q],
                                "point_label": list(got), "cell_label": list(psi.labels[c.index])})
    return CompatibilityReport(not bad, bad)
