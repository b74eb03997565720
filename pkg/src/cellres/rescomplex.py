"""Graded free complexes F_psi (extended to S = k[x1..xn]) from stratified periodic complexes."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .cellcomplex import PeriodicCellComplex, build_periodic_complex
from .exactmath import integer_points, UnboundedError
from .lattice import LatticeEmbedding, QuotientGrading, quotient_grading
from .poly import Poly
from .stratify import CompatibilityError, Stratification, ceiling, render_monomial, variable_names


@dataclass(frozen=True)
class Generator:
    cell: int | None
    degree: tuple[int, ...] | None  # psi(sigma) in Z^n
    eta: tuple[int, ...] | None  # quotient degree
    coarse: tuple[int, ...] | None = None  # degree under the user coarsening


@dataclass(frozen=True)
class GradedFreeComplex:
    """terms[i] lists generators of F_i; differentials[i-1] is the matrix of F_i -> F_{i-1}."""

    n: int
    terms: tuple[tuple[Generator, ...], ...]
    differentials: tuple[tuple[tuple[Poly, ...], ...], ...]
    names: tuple[str, ...]

    def ranks(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self.terms)

    def matrix(self, i: int) -> tuple[tuple[Poly, ...], ...]:
        return self.differentials[i - 1]


def build_resolution(C: PeriodicCellComplex, psi: Stratification, G: QuotientGrading | None = None) -> GradedFreeComplex:
    """Entry (tau, sigma) = sum over facets tau+v of sigma of eps * x^(psi(sigma) - psi(tau) - iota(v))."""
    L = C.lattice
    if G is None:
        G = quotient_grading(L)
    n = L.n
    terms = []
    pos = {}
    for k in range(C.top_dim + 1):
        gens = []
        for c in C.cells_of_dim(k):
            lab = psi.labels[c.index]
            pos[c.index] = len(gens)
            gens.append(Generator(c.index, lab, G.evaluate(lab), G.coarse(lab)))
        terms.append(tuple(gens))
    diffs = []
    for k in range(1, C.top_dim + 1):
        rows, cols = len(terms[k - 1]), len(terms[k])
        acc = [[[] for _ in range(cols)] for _ in range(rows)]
        for c in C.cells_of_dim(k):
            for f in c.facets:
                exp = tuple(a - b for a, b in zip(psi.labels[c.index], psi.label_at(C, f.cell, f.offset)))
                if any(x < 0 for x in exp):
                    raise CompatibilityError(
                        f"negative exponent {exp} for facet {f.cell}+{f.offset} of cell {c.index}")
                acc[pos[f.cell]][pos[c.index]].append((exp, f.sign))
        diffs.append(tuple(tuple(Poly(n, e) for e in row) for row in acc))
    names = tuple(variable_names(n, L.lawrence_m))
    return GradedFreeComplex(n, tuple(terms), tuple(diffs), names)


def _matmul(A, B, n):
    if not A or not B:
        return []
    if len(A[0]) != len(B):
        raise ValueError(f"cannot compose {len(A)}x{len(A[0])} with {len(B)}x{len(B[0]) if B else 0}")
    out = []
    for i in range(len(A)):
        row = []
        for j in range(len(B[0])):
            s = Poly(n)
            for k in range(len(B)):
                if A[i][k] and B[k][j]:
                    s = s + A[i][k] * B[k][j]
            row.append(s)
        out.append(row)
    return out


def check_d_squared(F: GradedFreeComplex) -> tuple[bool, dict | None]:
    """Symbolic check that consecutive differentials compose to zero."""
    for i in range(1, len(F.differentials)):
        A, B = F.differentials[i - 1], F.differentials[i]
        if len(A) and len(B) and len(A[0]) != len(B):
            raise ValueError(f"d_{i} has {len(A[0])} columns but d_{i + 1} has {len(B)} rows")
        prod_ = _matmul(A, B, F.n)
        for r, row in enumerate(prod_):
            for c, p in enumerate(row):
                if p:
                    return False, {"index": i, "row": r, "col": c, "entry": p.render(F.names)}
    return True, None


# ------------------------------------------------------------------ minimality

@dataclass
class MinimalityReport:
    algebraic: bool
    topological: bool
    witnesses: list = field(default_factory=list)

    @property
    def minimal(self) -> bool:
        return self.algebraic and self.topological

    def to_json(self) -> dict:
        return {"algebraic": self.algebraic, "topological": self.topological, "witnesses": self.witnesses}


def minimality(F: GradedFreeComplex, C: PeriodicCellComplex, psi: Stratification) -> MinimalityReport:
    """Algebraic test (no unit entries) and fibre-component test on a window of translates."""
    wit = []
    algebraic = True
    for i, M in enumerate(F.differentials, start=1):
        for r, row in enumerate(M):
            for c, p in enumerate(row):
                if p.constant_term():
                    algebraic = False
                    wit.append({"test": "algebraic", "index": i, "row": r, "col": c, "entry": p.render(F.names)})
    # union-find over translated cells, joining facet pairs with equal labels
    d = C.d
    box = list(product(range(-2, 3), repeat=d))
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in C.cells:
        for v in box:
            parent[(c.index, v)] = (c.index, v)
    for c in C.cells:
        for v in box:
            lab = psi.label_at(C, c.index, v)
            for f in c.facets:
                w = tuple(a + b for a, b in zip(v, f.offset))
                if (f.cell, w) in parent and psi.label_at(C, f.cell, w) == lab:
                    parent[find((f.cell, w))] = find((c.index, v))
    comps = Counter(find(x) for x in parent)
    topological = True
    zero = (0,) * d
    for c in C.cells:
        root = find((c.index, zero))
        if comps[root] > 1:
            topological = False
            members = sorted(x for x in parent if find(x) == root)
            wit.append({"test": "topological", "cell": c.index, "label": list(psi.labels[c.index]),
                        "component": [[m[0], list(m[1])] for m in members]})
    return MinimalityReport(algebraic, topological, wit)


# ------------------------------------------------------------ monomial modules

def ml_membership(w: Sequence[int], L: LatticeEmbedding, bound: int | None = None) -> bool:
    """Is x^w in M_L, i.e. is there v in L with w - v >= 0?  Decided by lattice-point enumeration."""
    return ml_witness(w, L, bound) is not None


def ml_witness(w: Sequence[int], L: LatticeEmbedding, bound: int | None = None) -> tuple[int, ...] | None:
    """Some c in Z^d with iota(c) <= w, or None."""
    d = L.d
    A = [list(L.iota.row(i)) for i in range(L.n)]
    b = list(w)
    if bound is not None:
        for k in range(d):
            e = [0] * d
            e[k] = 1
            A += [e, [-x for x in e]]
            b += [bound, bound]
    try:
        pts = integer_points(A, b, d)
    except UnboundedError as e:
        raise UnboundedError(f"search region for {tuple(w)} is unbounded along {e.direction}; supply a bound",
                             e.direction) from None
    return pts[0] if pts else None


@dataclass(frozen=True)
class MonomialModule:
    """Generators as exponent vectors; ``ambient`` is "cosets" (modulo L) or "laurent" (in Z^n)."""

    lattice: LatticeEmbedding
    ambient: str
    generators: tuple[tuple[int, ...], ...]

    def divides(self, u: Sequence[int], w: Sequence[int]) -> bool:
        diff = tuple(a - b for a, b in zip(w, u))
        if self.ambient == "laurent":
            return all(x >= 0 for x in diff)
        return ml_membership(diff, self.lattice)

    def contains(self, w: Sequence[int]) -> bool:
        return any(self.divides(g, w) for g in self.generators)

    def render(self, names: Sequence[str] | None = None) -> list[str]:
        names = names or variable_names(self.lattice.n, self.lattice.lawrence_m)
        return [render_monomial(g, names) for g in self.generators]


def _irredundant(gens, L: LatticeEmbedding, ambient: str) -> tuple[tuple[int, ...], ...]:
    G = quotient_grading(L)
    uniq, seen = [], set()
    for g in gens:
        key = G.evaluate(g) if ambient == "cosets" else tuple(g)
        if key not in seen:
            seen.add(key)
            uniq.append(tuple(g))
    M = MonomialModule(L, ambient, tuple(uniq))
    keep = [g for g in uniq if not any(h != g and M.divides(h, g) for h in uniq)]
    return tuple(keep)


def monomial_module_generators(C: PeriodicCellComplex, psi: Stratification, G: QuotientGrading | None = None,
                               ambient: str = "cosets") -> MonomialModule:
    """Generators of M_psi tensor S (cosets) or of M_psi on one fundamental domain (laurent)."""
    labels = [psi.labels[c.index] for c in C.cells_of_dim(0)]
    return MonomialModule(C.lattice, ambient, _irredundant(labels, C.lattice, ambient))


def closure_generators(L: LatticeEmbedding) -> MonomialModule:
    """Coset generators of the saturation: ceilings of the vertices of the standard complex."""
    C = build_periodic_complex(L)
    return monomial_module_generators(C, ceiling(C))


# ------------------------------------------------------------- comparisons

def _degree_key(g: Generator, use_coarse: bool):
    return g.coarse if use_coarse else (g.eta if g.eta is not None else g.degree)


def compare_graded_iso(F: GradedFreeComplex, Fref: GradedFreeComplex) -> bool:
    """Search for degree-preserving signed permutations carrying F's differentials onto Fref's."""
    return find_graded_iso(F, Fref) is not None


def find_graded_iso(F: GradedFreeComplex, Fref: GradedFreeComplex):
    """Per index, a list pairing each Fref generator with (F generator, sign); None if no match."""
    if F.n != Fref.n or F.ranks() != Fref.ranks():
        return None
    use_coarse = all(g.coarse is not None for t in F.terms + Fref.terms for g in t)
    for t, tr in zip(F.terms, Fref.terms):
        if Counter(_degree_key(g, use_coarse) for g in t) != Counter(_degree_key(g, use_coarse) for g in tr):
            return None
    top = len(F.terms)

    def index_maps(i, prev):
        """Yield maps for index i: list over ref gens of (F gen, sign)."""
        gens, ref = F.terms[i], Fref.terms[i]
        if i == 0:
            # any degree-preserving signed permutation
            yield from _signed_perms(gens, ref, use_coarse)
            return
        D, R = F.differentials[i - 1], Fref.differentials[i - 1]
        cands = []
        for l, rg in enumerate(ref):
            opts = []
            for m, g in enumerate(gens):
                if _degree_key(g, use_coarse) != _degree_key(rg, use_coarse):
                    continue
                for s in (1, -1):
                    if all(R[k][l] == (D[pk][m] * (s * sk)) for k, (pk, sk) in enumerate(prev)):
                        opts.append((m, s))
            if not opts:
                return
            cands.append(opts)
        yield from _matchings(cands)

    def rec(i, acc):
        if i == top:
            return acc
        prev = acc[-1] if acc else None
        for mp in index_maps(i, prev):
            res = rec(i + 1, acc + [mp])
            if res is not None:
                return res
        return None

    return rec(0, [])


def _matchings(cands, used=None, k=0):
    used = used or frozenset()
    if k == len(cands):
        yield []
        return
    for m, s in cands[k]:
        if m in used:
            continue
        for rest in _matchings(cands, used | {m}, k + 1):
            yield [(m, s)] + rest


def _signed_perms(gens, ref, use_coarse):
    cands = [[(m, s) for m, g in enumerate(gens) if _degree_key(g, use_coarse) == _degree_key(rg, use_coarse)
              for s in (1, -1)] for rg in ref]
    yield from _matchings(cands)


def betti_table(F: GradedFreeComplex) -> dict[tuple[int, tuple[int, ...]], int]:
    """Counts of twists a (term S(a), i.e. generator degree -a) per homological index.

    Uses the coarse degree when a coarsening is set, otherwise the quotient degree.
    """
    out: Counter = Counter()
    for i, t in enumerate(F.terms):
        for g in t:
            deg = g.coarse if g.coarse is not None else g.eta
            out[(i, tuple(-x for x in deg))] += 1
    return dict(sorted(out.items()))


def from_matrices(names: Sequence[str], twists: Sequence[Sequence[Sequence[int]]],
                  matrices: Sequence[Sequence[Sequence[str]]]) -> GradedFreeComplex:
    """Reference complex from displayed data: twists per term (S(a) notation) and polynomial strings."""
    from .poly import parse_poly
    n = len(names)
    terms = tuple(tuple(Generator(None, None, None, tuple(-x for x in a)) for a in t) for t in twists)
    diffs = tuple(tuple(tuple(parse_poly(e, names) for e in row) for row in M) for M in matrices)
    for i, M in enumerate(diffs, start=1):
        if len(M) != len(terms[i - 1]) or any(len(r) != len(terms[i]) for r in M):
            raise ValueError(f"matrix {i} does not fit the term ranks")
    return GradedFreeComplex(n, terms, diffs, tuple(names))


# ------------------------------------------------------------------ rendering

def _twist_str(g: Generator) -> str:
    deg = g.coarse if g.coarse is not None else g.eta
    return "S(" + ",".join(str(-x) for x in deg) + ")"


def term_summary(F: GradedFreeComplex) -> list[str]:
    out = []
    for t in F.terms:
        cnt = Counter(_twist_str(g) for g in t)
        parts = [k if v == 1 else f"{k}^{v}" for k, v in cnt.items()]
        out.append(" + ".join(parts) if parts else "0")
    return out


def render_text(F: GradedFreeComplex) -> str:
    lines = ["terms:"]
    for i, s in enumerate(term_summary(F)):
        lines.append(f"  F{i} = {s}")
    for i, M in enumerate(F.differentials, start=1):
        lines.append(f"d{i} =")
        cells = [[p.render(F.names) for p in row] for row in M]
        width = max((len(x) for r in cells for x in r), default=1)
        for r in cells:
            lines.append("[ " + "  ".join(x.rjust(width) for x in r) + " ]")
    return "\n".join(lines) + "\n"


def to_json(F: GradedFreeComplex) -> dict:
    return {
        "n": F.n,
        "variables": list(F.names),
        "terms": [[{"cell": g.cell, "degree": list(g.degree) if g.degree is not None else None,
                    "eta": list(g.eta) if g.eta is not None else None,
                    "coarse": list(g.coarse) if g.coarse is not None else None} for g in t] for t in F.terms],
        "differentials": [
            {"index": i, "rows": len(M), "cols": len(M[0]) if M else len(F.terms[i]),
             "entries": [[r, c, [[coef, list(e)] for e, coef in p.terms()]]
                         for r, row in enumerate(M) for c, p in enumerate(row) if p]}
            for i, M in enumerate(F.differentials, start=1)],
    }


def to_macaulay2(F: GradedFreeComplex, coarsening=None) -> str:
    """Macaulay2 script building the complex and asserting d^2 = 0 (not executed here).

    With a coarsening matrix the ring gets its columns as variable degrees and
    the free modules get the coarse twists; otherwise the ring is standard graded.
    """
    names = [nm[0] + "_" + nm[1:] for nm in F.names]
    graded = coarsening is not None and all(g.coarse is not None for t in F.terms for g in t)
    lines = ["-- cellular free complex"]
    if graded:
        dl = ",".join("{" + ",".join(map(str, c)) + "}" for c in coarsening.columns())
        lines.append(f"S = QQ[{','.join(names)}, Degrees => {{{dl}}}];")
    else:
        lines.append(f"S = QQ[{','.join(names)}];")
    for i, t in enumerate(F.terms):
        if graded and t:
            mod = "S^{" + ",".join("{" + ",".join(str(-x) for x in g.coarse) + "}" for g in t) + "}"
        else:
            mod = f"S^{len(t)}"
        lines.append(f"F{i} = {mod};")
    for i, M in enumerate(F.differentials, start=1):
        rows = ["{" + ", ".join(p.render(names) for p in row) + "}" for row in M]
        lines.append(f"d{i} = map(F{i - 1}, F{i}, {{{', '.join(rows)}}});")
    if F.differentials:
        lines.append("C = chainComplex(" + ", ".join(f"d{i}" for i in range(1, len(F.differentials) + 1)) + ");")
        lines.append("assert(C.dd^2 == 0)")
    return "\n".join(lines) + "\n"
