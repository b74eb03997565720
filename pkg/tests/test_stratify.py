from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cellres.cellcomplex import build_periodic_complex
from cellres.lattice import embedding_from_basis, lawrence_lift
from cellres.stratify import (CompatibilityError, Stratification, anderson, ceiling, check_compatible,
                              lcm_from_vertices, render_monomial, variable_names)

from display_data import HIRZEBRUCH_RAYS, XY4

POINT = [[1, 0], [0, 1], [-1, 2], [0, -1]]
HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def diag():
    return build_periodic_complex(lawrence_lift(HIRZEBRUCH_RAYS))


def vertex_class(C, q):
    return next(c for c in C.cells_of_dim(0) if c.vertices[0] == q)


def test_ceiling_recursion_point():
    C = build_periodic_complex(embedding_from_basis(POINT))
    psi = ceiling(C)
    assert psi.labels[vertex_class(C, (0, HALF)).index] == (0, 1, 1, 0)
    assert psi.labels[vertex_class(C, (0, 0)).index] == (0, 0, 0, 0)


def test_ceiling_half_integer_vertex_diag(diag):
    psi = ceiling(diag)
    assert psi.labels[vertex_class(diag, (0, HALF)).index] == (0, 1, 1, 0, 0, 0, -1, 1)


def test_anderson_vertex_labels(diag):
    A = anderson(diag)
    assert A.labels[vertex_class(diag, (0, HALF)).index] == (0, 0, 1, -1, 0, 0, -1, 1)
    # vertex at (1, 1/2) is the class above translated by (1, 0)
    c = vertex_class(diag, (0, HALF)).index
    lab = A.label_at(diag, c, (1, 0))
    assert render_monomial(lab, XY4) == "x1*y4/(x4*y1)"
    assert A.labels[vertex_class(diag, (0, 0)).index] == (0,) * 8


def test_anderson_rejects_non_lawrence():
    C = build_periodic_complex(embedding_from_basis(POINT))
    with pytest.raises(CompatibilityError, match="Lawrence"):
        anderson(C)


def test_anderson_block_antisymmetry(diag):
    A = anderson(diag)
    for c in diag.cells_of_dim(0):
        lab = A.labels[c.index]
        assert lab[4:] == tuple(-x for x in lab[:4])


def test_lcm_all_zero_cube():
    C = build_periodic_complex(embedding_from_basis([[1, 0], [0, 1]]))
    psi = lcm_from_vertices(C, {c.index: (0, 0) for c in C.cells_of_dim(0)})
    # translated vertices carry iota(v), so higher cells pick up their far corner
    assert psi.labels[0] == (0, 0)
    assert psi.labels == ceiling(C).labels
    assert sorted(psi.labels) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_lcm_reproduces_anderson(diag):
    A = anderson(diag)
    vl = {c.index: A.labels[c.index] for c in diag.cells_of_dim(0)}
    assert lcm_from_vertices(diag, vl).labels == A.labels


def test_lcm_edge_max():
    # Z^1 in Z^2 along the diagonal: one vertex, one edge from 0 to 1
    C = build_periodic_complex(embedding_from_basis([[1], [0]]))
    psi = lcm_from_vertices(C, {0: (0, 1)})
    # edge vertices carry (0,1) and (0,1) + iota(1) = (1,1)
    assert psi.labels[1] == (1, 1)


def test_lcm_missing_label():
    C = build_periodic_complex(embedding_from_basis([[1], [0]]))
    with pytest.raises(ValueError, match="no label"):
        lcm_from_vertices(C, {})


def test_compatible_ceiling_and_anderson(diag):
    assert check_compatible(diag, ceiling(diag)).passed
    assert check_compatible(diag, anderson(diag)).passed


def test_compatibility_violation_reported(diag):
    psi = ceiling(diag)
    labels = list(psi.labels)
    v = vertex_class(diag, (0, HALF)).index
    labels[v] = tuple(x + 5 for x in labels[v])
    bad = Stratification("ceiling", psi.shift, tuple(labels))
    rep = check_compatible(diag, bad)
    assert not rep.passed
    assert any(w.get("facet") == v for w in rep.violations)


def test_render_monomial():
    assert render_monomial((0, 0, 1, -1, 0, 0, -1, 1), XY4) == "x3*y4/(x4*y3)"
    assert render_monomial((0,) * 8, XY4) == "1"
    assert render_monomial((0, 0, 0, 0, 0, 0, -2, 0), XY4) == "1/y3^2"
    assert variable_names(4, 2) == ["x1", "x2", "y1", "y2"]
    assert variable_names(3) == ["x1", "x2", "x3"]


def test_stratification_json(diag):
    j = anderson(diag).to_json(XY4)
    assert j["kind"] == "anderson" and j["monomials"][1] == "x3*y4/(x4*y3)"


lattices = st.sampled_from([POINT, [[1, 0], [0, 1], [-1, 2], [0, -1], [-1, 0], [0, -1], [1, -2], [0, 1]],
                            [[2, 1], [1, -3], [0, 1]], [[1], [-1], [-1], [1]]])
shifts = st.lists(st.fractions(min_value=-1, max_value=1, max_denominator=4), min_size=8, max_size=8)


@settings(max_examples=30, deadline=None)
@given(lattices, shifts)
def test_ceiling_properties(basis, s):
    L = embedding_from_basis(basis)
    C = build_periodic_complex(L, s[:L.n])
    psi = ceiling(C)
    assert check_compatible(C, psi).passed
    for c in C.cells:
        for p in (c.interior_point(), c.sample_point()):
            amb = C.ambient(p)
            assert all(0 <= lab - x < 1 for lab, x in zip(psi.labels[c.index], amb))
        for f in c.facets:
            assert all(a <= b for a, b in zip(psi.label_at(C, f.cell, f.offset), psi.labels[c.index]))
