"""L-equivariant polyhedral cell complexes on L_R = R^d.

Points of L_R are written in basis coordinates q in R^d, so L itself is Z^d
and the ambient point is iota(q) + shift.  A complex is stored by its cell
classes modulo Z^d: the canonical representative of a class is the translate
whose lexicographically smallest vertex lies in [0,1)^d.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import floor, ceil
from typing import Iterable, Sequence

from .exactmath import (IntMatrix, RatVector, det, rank, solve, nullspace, integer_points,
                        UnboundedError, recession_direction, to_fraction_vector)
from .lattice import LatticeEmbedding

Point = tuple[Fraction, ...]
Offset = tuple[int, ...]


@dataclass(frozen=True)
class Facet:
    cell: int  # index of the facet's class
    offset: Offset  # the facet is (canonical rep of `cell`) + offset
    sign: int


@dataclass(frozen=True)
class CellClass:
    index: int
    dim: int
    vertices: tuple[Point, ...]  # canonical representative, sorted
    basis: tuple[Point, ...]  # orientation: ordered direction basis
    facets: tuple[Facet, ...]

    @property
    def reference(self) -> Point:
        return self.vertices[0]

    def interior_point(self) -> Point:
        k = len(self.vertices)
        return tuple(sum(c) / k for c in zip(*self.vertices))

    def sample_point(self) -> Point:
        """A second relative-interior point, distinct from the barycentre when dim > 0."""
        k = len(self.vertices)
        w = [Fraction(i + 1) for i in range(k)]
        tot = sum(w)
        return tuple(sum(wi * c for wi, c in zip(w, col)) / tot for col in zip(*self.vertices))


@dataclass(frozen=True)
class PeriodicCellComplex:
    lattice: LatticeEmbedding
    shift: RatVector
    cells: tuple[CellClass, ...]

    @property
    def d(self) -> int:
        return self.lattice.d

    @property
    def top_dim(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    def cells_of_dim(self, k: int) -> list[CellClass]:
        return [c for c in self.cells if c.dim == k]

    def counts(self) -> tuple[int, ...]:
        return tuple(len(self.cells_of_dim(k)) for k in range(self.top_dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** c.dim for c in self.cells)

    def ambient(self, q: Sequence) -> tuple:
        """iota(q) + shift."""
        return tuple(x + s for x, s in zip(self.lattice.embed(q), self.shift))

    def check_d_squared(self) -> list[tuple[int, int, Offset, int]]:
        """Nonzero coefficients of d(d(sigma)) as (sigma, rho, offset, coeff); empty iff d^2 = 0."""
        bad = []
        for c in self.cells:
            acc: dict[tuple[int, Offset], int] = {}
            for f in c.facets:
                for g in self.cells[f.cell].facets:
                    key = (g.cell, _add(f.offset, g.offset))
                    acc[key] = acc.get(key, 0) + f.sign * g.sign
            bad += [(c.index, k[0], k[1], v) for k, v in sorted(acc.items()) if v]
        return bad

    def to_json(self) -> dict:
        return {
            "n": self.lattice.n,
            "d": self.d,
            "iota": self.lattice.iota.tolist(),
            "shift": [_fmt(x) for x in self.shift],
            "cells": [{
                "id": c.index,
                "dim": c.dim,
                "vertices": [[_fmt(x) for x in v] for v in c.vertices],
                "facets": [[f.cell, list(f.offset), f.sign] for f in c.facets],
            } for c in self.cells],
        }


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


# --------------------------------------------------------------- polytope faces

def affine_dim(points: Sequence[Point]) -> int:
    if not points:
        return -1
    o = points[0]
    return rank([_sub(p, o) for p in points[1:]]) if len(points) > 1 else 0


def direction_basis(vertices: Sequence[Point]) -> tuple[Point, ...]:
    """Greedy basis of the direction space from edge vectors off the reference vertex.

    ``vertices`` must be sorted; differences are taken in that order.
    """
    o = vertices[0]
    basis: list[Point] = []
    for v in vertices[1:]:
        w = _sub(v, o)
        if rank(basis + [w]) > len(basis):
            basis.append(w)
    return tuple(basis)


def _coords(basis: Sequence[Point], w: Point) -> RatVector:
    """Coordinates of w in the span of ``basis``."""
    cols = list(zip(*basis))  # d rows, k columns
    x = solve([list(r) for r in cols], list(w))
    if x is None:
        raise ValueError("vector not in span")
    return x


def polytope_facets(vertices: Sequence[Point]) -> list[tuple[Point, ...]]:
    """Facets of conv(vertices) as sorted vertex tuples (vertices must be the vertex set)."""
    verts = sorted(set(vertices))
    k = affine_dim(verts)
    if k <= 0:
        return []
    o = verts[0]
    basis = direction_basis(verts)
    local = [_coords(basis, _sub(v, o)) for v in verts]
    if k == 1:
        lo = min(range(len(verts)), key=lambda i: local[i])
        hi = max(range(len(verts)), key=lambda i: local[i])
        return sorted([(verts[lo],), (verts[hi],)])
    found = set()
    for combo in combinations(range(len(verts)), k):
        base = local[combo[0]]
        diffs = [_sub(local[i], base) for i in combo[1:]]
        if rank(diffs) < k - 1:
            continue
        ns = nullspace(diffs, k)
        if len(ns) != 1:
            continue
        nrm = ns[0]
        vals = [sum(a * b for a, b in zip(nrm, _sub(p, base))) for p in local]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            tight = tuple(verts[i] for i in range(len(verts)) if vals[i] == 0)
            if affine_dim(tight) == k - 1:
                found.add(tight)
    return sorted(found)


def _check_vertex_set(vertices: Sequence[Point]) -> None:
    """Every listed point must be a vertex of the convex hull."""
    verts = sorted(set(vertices))
    k = affine_dim(verts)
    if k <= 0:
        if len(verts) != 1:
            raise ValueError("degenerate cell")
        return
    if k == 1:
        if len(verts) != 2:
            raise ValueError(f"edge with {len(verts)} collinear points is not a vertex set")
        return
    on_facets = set()
    facets = polytope_facets(verts)
    for f in facets:
        _check_vertex_set(f)
        on_facets.update(f)
    if on_facets != set(verts):
        raise ValueError("cell is not convex in vertex position: some point is interior to the hull")


def _all_faces(top: Iterable[tuple[Point, ...]]) -> set[tuple[Point, ...]]:
    seen: set[tuple[Point, ...]] = set()
    stack = [tuple(sorted(set(c))) for c in top]
    while stack:
        c = stack.pop()
        if c in seen:
            continue
        seen.add(c)
        stack.extend(polytope_facets(c))
    for c in list(seen):
        for v in c:
            seen.add((v,))
    return seen


def _canonical(cell: tuple[Point, ...]) -> tuple[tuple[Point, ...], Offset]:
    """Translate so the smallest vertex lies in [0,1)^d; returns (canonical, offset)."""
    ref = cell[0]
    off = tuple(floor(x) for x in ref)
    return tuple(_sub(v, off) for v in cell), off


def _orientation_sign(sigma_basis, tau_basis, outward) -> int:
    vecs = [outward] + list(tau_basis)
    M = [_coords(sigma_basis, v) for v in vecs]
    s = det(M)
    if s == 0:
        raise ValueError("degenerate facet orientation")
    return 1 if s > 0 else -1


def assemble(L: LatticeEmbedding, shift: Sequence, top_cells: Iterable[Sequence[Point]]) -> PeriodicCellComplex:
    """Build the complex generated (under faces and Z^d translation) by the given cells."""
    faces = _all_faces(tuple(sorted(set(to_fraction_vector(v) for v in c))) for c in top_cells)
    classes = {}
    for f in faces:
        can, _ = _canonical(f)
        classes[can] = affine_dim(can)
    order = sorted(classes, key=lambda c: (classes[c], c))
    index = {c: i for i, c in enumerate(order)}
    cells = []
    for i, c in enumerate(order):
        k = classes[c]
        basis = direction_basis(c)
        facets = []
        if k >= 1:
            bary = tuple(sum(x) / len(c) for x in zip(*c))
            for f in polytope_facets(c):
                fcan, off = _canonical(f)
                fb = tuple(sum(x) / len(f) for x in zip(*f))
                sign = _orientation_sign(basis, direction_basis(fcan), _sub(fb, bary))
                facets.append(Facet(index[fcan], off, sign))
        facets.sort(key=lambda f: (f.cell, f.offset))
        cells.append(CellClass(i, k, c, basis, tuple(facets)))
    return PeriodicCellComplex(L, tuple(Fraction(x) for x in shift), tuple(cells))


# ------------------------------------------------------ periodic arrangement

def _families(L: LatticeEmbedding, shift: Sequence[Fraction]):
    """Distinct hyperplane families {q : a.q + s in Z}, zero forms dropped."""
    fams = set()
    for i in range(L.n):
        a = L.iota.row(i)
        if not any(a):
            continue
        s = Fraction(shift[i]) % 1
        # normalise sign: first nonzero coefficient positive
        if next(x for x in a if x) < 0:
            a = tuple(-x for x in a)
            s = (-s) % 1
        fams.add((tuple(a), s))
    return sorted(fams)


def _chamber_diameter(fams, d: int) -> int:
    """Integer bound on the sup-norm diameter of any chamber."""
    best = None
    for sub in combinations(range(len(fams)), d):
        B = [list(fams[i][0]) for i in sub]
        if det(B) == 0:
            continue
        inv_cols = [solve(B, [int(r == c) for r in range(d)]) for c in range(d)]
        # row k of B^{-1} is (inv_cols[0][k], ..., inv_cols[d-1][k])
        D = max(sum(abs(inv_cols[c][k]) for c in range(d)) for k in range(d))
        best = D if best is None else min(best, D)
    if best is None:
        raise ValueError("forms do not span the dual space")
    return ceil(best)


def _arrangement_vertices(fams, d: int, lo: int, hi: int) -> list[Point]:
    verts = set()
    for sub in combinations(range(len(fams)), d):
        B = [list(fams[i][0]) for i in sub]
        if det(B) == 0:
            continue
        ranges = []
        for i in sub:
            a, s = fams[i]
            mn = sum(min(x * lo, x * hi) for x in a) + s
            mx = sum(max(x * lo, x * hi) for x in a) + s
            ranges.append(range(ceil(mn), floor(mx) + 1))
        for js in product(*ranges):
            rhs = [j - fams[i][1] for j, i in zip(js, sub)]
            q = solve(B, rhs)
            if all(lo <= x <= hi for x in q):
                verts.add(q)
    return sorted(verts)


def _level(fam, q) -> Fraction:
    a, s = fam
    return sum(x * y for x, y in zip(a, q)) + s


def _chambers(fams, d: int) -> list[tuple[Point, ...]]:
    """Closures of all chambers incident to a vertex in [0,1)^d, as vertex tuples."""
    D = _chamber_diameter(fams, d)
    window = _arrangement_vertices(fams, d, -D - 1, D + 2)
    levels = {v: [_level(f, v) for f in fams] for v in window}
    out = set()
    for v in window:
        if not all(0 <= x < 1 for x in v):
            continue
        lv = levels[v]
        choices = [(t - 1, t) if t.denominator == 1 else (floor(t),) for t in lv]
        for fl in product(*choices):
            verts = tuple(w for w in window
                          if all(f <= t <= f + 1 for f, t in zip(fl, levels[w])))
            if len(verts) > d and affine_dim(verts) == d:
                out.add(verts)
    return sorted(out)


def build_periodic_complex(L: LatticeEmbedding, shift: Sequence | None = None) -> PeriodicCellComplex:
    """Standard cell structure of L_R + shift cut by {p_i in Z}, modulo Z^d."""
    shift = tuple(Fraction(x) for x in (shift if shift is not None else [0] * L.n))
    if len(shift) != L.n:
        raise ValueError(f"shift has length {len(shift)}, expected {L.n}")
    d = L.d
    if d == 0:
        return PeriodicCellComplex(L, shift, (CellClass(0, 0, ((),), (), ()),))
    rows = [L.iota.row(i) for i in range(L.n)]
    if rank(rows) < d:
        direction = recession_direction([list(r) for r in rows] + [[-x for x in r] for r in rows], d)
        raise UnboundedError(f"forms do not span the dual space; cells are unbounded along {direction}",
                             direction)
    fams = _families(L, shift)
    return assemble(L, shift, _chambers(fams, d))


def build_custom_complex(L: LatticeEmbedding, vertices: Sequence[Sequence], cells: Sequence[tuple[int, Sequence[tuple[int, Sequence[int]]]]],
                         shift: Sequence | None = None) -> PeriodicCellComplex:
    """Periodic complex from user cells.

    ``vertices`` are points of [0,1)^d; each cell is ``(dim, [(vertex index,
    offset), ...])`` and stands for the polytope with those translated vertices.
    """
    d = L.d
    shift = tuple(Fraction(x) for x in (shift if shift is not None else [0] * L.n))
    verts = [to_fraction_vector(v) for v in vertices]
    for v in verts:
        if len(v) != d or not all(0 <= x < 1 for x in v):
            raise ValueError(f"vertex {v} is not a point of [0,1)^{d}")
    top = []
    for dim, members in cells:
        pts = tuple(sorted(set(_add(verts[i], tuple(off)) for i, off in members)))
        if len(pts) != len(members):
            raise ValueError("cell lists a vertex twice")
        if affine_dim(pts) != dim:
            raise ValueError(f"cell declared of dimension {dim} spans dimension {affine_dim(pts)}")
        _check_vertex_set(pts)
        top.append(pts)
    C = assemble(L, shift, top)
    if d >= 1:
        _check_tiling(C)
    if d >= 1 and C.euler_characteristic() != 0:
        raise ValueError("cell data does not close up to a periodic complex (Euler characteristic is not 0)")
    return C


def _check_tiling(C: PeriodicCellComplex) -> None:
    """Top cells have dimension d and every codimension-one class lies on exactly two of them."""
    d = C.d
    if C.top_dim != d:
        raise ValueError(f"cells do not tile R^{d}: top dimension is {C.top_dim}")
    uses = {c.index: 0 for c in C.cells_of_dim(d - 1)}
    for c in C.cells_of_dim(d):
        for f in c.facets:
            uses[f.cell] += 1
    bad = [i for i, k in uses.items() if k != 2]
    if bad:
        raise ValueError(f"cells do not tile R^{d}: class {bad[0]} bounds {uses[bad[0]]} top cells")
    # every lower cell must sit in the boundary of some cell one dimension up
    faces = {f.cell for c in C.cells for f in c.facets}
    stray = [c.index for c in C.cells if c.dim < d and c.index not in faces]
    if stray:
        raise ValueError(f"cells do not tile R^{d}: class {stray[0]} is not a face of any top cell")


# ------------------------------------------------------------ finite complexes

@dataclass(frozen=True)
class FiniteComplex:
    """Finite subcomplex of L_R: cells (class, offset) per dimension and boundary matrices."""

    cells: tuple[tuple[tuple[int, Offset], ...], ...]
    boundaries: tuple[IntMatrix, ...]  # boundaries[k-1] : C_k -> C_{k-1}

    def is_empty(self) -> bool:
        return not any(self.cells)

    def sizes(self) -> list[int]:
        return [len(c) for c in self.cells]

    def homology(self):
        from .exactmath import integer_homology
        return integer_homology(list(self.boundaries), self.sizes())


def finite_subcomplex(C: PeriodicCellComplex, members: Iterable[tuple[int, Offset]]) -> FiniteComplex:
    """Boundary matrices of a face-closed finite set of translated cells."""
    members = set(members)
    top = C.top_dim
    bydim = [sorted(m for m in members if C.cells[m[0]].dim == k) for k in range(top + 1)]
    while len(bydim) > 1 and not bydim[-1]:
        bydim.pop()
    idx = [{m: i for i, m in enumerate(b)} for b in bydim]
    mats = []
    for k in range(1, len(bydim)):
        M = [[0] * len(bydim[k]) for _ in range(len(bydim[k - 1]))]
        for j, (c, off) in enumerate(bydim[k]):
            for f in C.cells[c].facets:
                key = (f.cell, _add(off, f.offset))
                if key not in idx[k - 1]:
                    raise ValueError(f"cell {c}+{off} has facet {key} outside the subcomplex")
                M[idx[k - 1][key]][j] += f.sign
        mats.append(IntMatrix(M, len(bydim[k - 1]), len(bydim[k])))
    return FiniteComplex(tuple(tuple(b) for b in bydim), tuple(mats))


def sublevel_complex(C: PeriodicCellComplex, psi, u: Sequence[int], window: int | None = None) -> FiniteComplex:
    """All translates sigma + v with psi(sigma) + iota(v) <= u, with their boundary maps.

    Without ``window`` the sublevel set must be bounded (L pointed); with it the
    search for v is restricted to the box |v_i| <= window.
    """
    L = C.lattice
    d = L.d
    A = [list(L.iota.row(i)) for i in range(L.n)]
    extra_A, extra_b = [], []
    if window is not None:
        for k in range(d):
            e = [0] * d
            e[k] = 1
            extra_A += [e, [-x for x in e]]
            extra_b += [window, window]
    members = []
    for c in C.cells:
        b = [ui - li for ui, li in zip(u, psi.labels[c.index])]
        try:
            pts = integer_points(A + extra_A, b + extra_b, d)
        except UnboundedError as e:
            raise UnboundedError(f"sublevel set at {tuple(u)} is unbounded along lattice direction {e.direction}; "
                                 "supply a window", e.direction) from None
        members += [(c.index, v) for v in pts]
    return finite_subcomplex(C, members)


# ----------------------------------------------------------- the P^2 staircase

# columns (1,-1,0,-1,1,0) and (0,-1,1,0,1,-1): q -> (g(q), -g(q)) with
# g(q) = (q1, -q1-q2, q2)
FH_P2_BASIS = ((1, 0), (-1, -1), (0, 1), (-1, 0), (1, 1), (0, -1))


def _plane_point(q) -> tuple[Fraction, Fraction, Fraction]:
    q1, q2 = Fraction(q[0]), Fraction(q[1])
    return (q1, -q1 - q2, q2)


def staircase_lift(q) -> tuple[Fraction, Fraction, Fraction]:
    """Point of the staircase surface lying over q along the direction (1,1,1).

    The surface is the boundary of {p : sum ceil(p_i) <= 0}; the lift is
    base + t(1,1,1) with t the largest value keeping the ceiling sum <= 0.
    """
    base = _plane_point(q)

    def f(t):
        return sum(ceil(b + t) for b in base)

    cands = [k - b for b in base for k in range(floor(b) - 2, floor(b) + 3)]
    t = max(c for c in cands if f(c) <= 0)
    return tuple(b + t for b in base)


def _project(p) -> Point:
    m = Fraction(sum(p), 3)
    return (Fraction(p[0]) - m, Fraction(p[2]) - m)


def fh_p2_complex():
    """Rhombille complex on L_R for the P^2 diagonal and its staircase labels.

    The rhombi are the projections of the unit squares {p_i = 0, p_j, p_k in
    [-1, 0]} of the staircase surface.
    """
    from .lattice import embedding_from_basis
    from .stratify import Stratification, CompatibilityError

    L = embedding_from_basis(FH_P2_BASIS, lawrence_m=3)
    squares = []
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        corners = []
        for a, b in product((0, -1), repeat=2):
            p = [0, 0, 0]
            p[j], p[k] = a, b
            corners.append(_project(p))
        squares.append(corners)
    verts, cells = [], []
    for sq in squares:
        members = []
        for q in sq:
            off = tuple(floor(x) for x in q)
            frac = _sub(q, off)
            if frac not in verts:
                verts.append(frac)
            members.append((verts.index(frac), off))
        cells.append((2, members))
    C = build_custom_complex(L, verts, cells)

    def at(q):
        g = staircase_lift(q)
        return tuple(ceil(x) for x in g) + tuple(ceil(-x) for x in g)

    labels = []
    for c in C.cells:
        a, b = at(c.interior_point()), at(c.sample_point())
        if a != b:
            raise CompatibilityError(f"staircase labels not constant on cell {c.index}")
        labels.append(a)
    return C, Stratification("fh_p2", C.shift, tuple(labels), at)
