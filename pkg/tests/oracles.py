"""Brute-force arrangement enumeration used to cross-check the periodic complex builder.

Works directly with the hyperplanes {q : (iota q + s)_i = j} inside a window of
translates, without polytope facet machinery.
"""
from collections import Counter
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from math import ceil, floor


def _forms(L, shift):
    return [(L.iota.row(i), Fraction(shift[i])) for i in range(L.n) if any(L.iota.row(i))]


def _canon_point(p):
    off = tuple(floor(x) for x in p)
    return tuple(x - o for x, o in zip(p, off)), off


def _canon_cell(pts):
    pts = tuple(sorted(pts))
    base, off = _canon_point(pts[0])
    return tuple(tuple(x - o for x, o in zip(p, off)) for p in pts), off


def arrangement_1d(L, shift, lo=-1, hi=2):
    """Vertex classes, edge classes and the signed incidence multiset for d = 1."""
    pts = set()
    for (a,), s in _forms(L, shift):
        # a q + s = j
        for j in range(floor(min(a * lo, a * hi) + s) - 1, ceil(max(a * lo, a * hi) + s) + 2):
            q = (j - s) / a
            if lo <= q <= hi:
                pts.add((q,))
    pts = sorted(pts)
    verts = {_canon_point(p)[0] for p in pts}
    edges = {}
    for p, r in zip(pts, pts[1:]):
        cell, off = _canon_cell([p, r])
        if 0 <= p[0] < 1:
            edges[cell] = [(cell[1], +1), (cell[0], -1)]
    incid = Counter()
    for cell, bd in edges.items():
        for v, sgn in bd:
            vc, voff = _canon_point(v)
            incid[(cell, vc, voff, sgn)] += 1
    return sorted(verts), sorted(edges), incid


def _solve2(r1, r2):
    (a, b, c), (d, e, f) = r1, r2
    det = a * e - b * d
    if det == 0:
        return None
    return (Fraction(c * e - b * f, det), Fraction(a * f - c * d, det))


def _angle_cmp(u, v):
    def half(w):
        return 0 if (w[1] > 0 or (w[1] == 0 and w[0] > 0)) else 1
    hu, hv = half(u), half(v)
    if hu != hv:
        return hu - hv
    cr = u[0] * v[1] - u[1] * v[0]
    return -1 if cr > 0 else (1 if cr < 0 else 0)


def _lex_positive(r):
    return r[0] > 0 or (r[0] == 0 and r[1] > 0)


def arrangement_2d(L, shift, lo=-1, hi=2):
    """(vertex classes, edge classes with signed incidences, number of 2-cell classes) for d = 2."""
    lines = []
    for (a1, a2), s in _forms(L, shift):
        vals = [a1 * x + a2 * y for x in (lo - 1, hi + 1) for y in (lo - 1, hi + 1)]
        for j in range(floor(min(vals) + s) - 1, ceil(max(vals) + s) + 2):
            lines.append((a1, a2, j - s))  # a1 q1 + a2 q2 = j - s
    lines = sorted(set(lines))
    inwin = lambda p: all(lo - 1 <= x <= hi + 1 for x in p)
    verts_on = {ln: set() for ln in lines}
    through = {}
    for l1, l2 in combinations(lines, 2):
        p = _solve2(l1, l2)
        if p is None or not inwin(p):
            continue
        verts_on[l1].add(p)
        verts_on[l2].add(p)
        through.setdefault(p, set()).update([l1, l2])
    vclasses = sorted({_canon_point(p)[0] for p in through})
    edges = {}
    for ln, pts in verts_on.items():
        a1, a2, _ = ln
        dirv = (-a2, a1)
        order = sorted(pts, key=lambda p: p[0] * dirv[0] + p[1] * dirv[1])
        for p, r in zip(order, order[1:]):
            first, second = sorted([p, r])
            if all(0 <= x < 1 for x in first):
                cell, _ = _canon_cell([p, r])
                edges[cell] = [(second, +1), (first, -1)]
    incid = Counter()
    for cell, bd in edges.items():
        for v, sgn in bd:
            vc, voff = _canon_point(v)
            incid[(cell, vc, voff, sgn)] += 1
    # 2-cells: one per sector at its lexicographically smallest vertex
    faces = 0
    for p, lns in through.items():
        if not all(0 <= x < 1 for x in p):
            continue
        rays = []
        for a1, a2, _ in lns:
            rays += [(-a2, a1), (a2, -a1)]
        uniq = []
        for r in sorted(rays, key=cmp_to_key(_angle_cmp)):
            if not uniq or _angle_cmp(uniq[-1], r) != 0:
                uniq.append(r)
        for r1, r2 in zip(uniq, uniq[1:] + uniq[:1]):
            if _lex_positive(r1) and _lex_positive(r2):
                faces += 1
    return vclasses, sorted(edges), incid, faces


def complex_incidences(C, dim):
    """Signed incidence multiset of the built complex in the oracle's format."""
    incid = Counter()
    for c in C.cells_of_dim(dim):
        for f in c.facets:
            fc = C.cells[f.cell]
            key_cell = fc.vertices[0] if dim == 1 else fc.vertices
            incid[(c.vertices, key_cell, f.offset, f.sign)] += 1
    return incid
