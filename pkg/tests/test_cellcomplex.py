from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cellres.cellcomplex import (build_custom_complex, build_periodic_complex, fh_p2_complex, finite_subcomplex,
                                 polytope_facets, staircase_lift, sublevel_complex, assemble)
from cellres.exactmath import IntMatrix, UnboundedError, is_acyclic
from cellres.lattice import LatticeEmbedding, embedding_from_basis, lawrence_lift
from cellres.stratify import anderson, ceiling

from oracles import arrangement_1d, arrangement_2d, complex_incidences
from display_data import AND_FAILURE_DEGREE, HIRZEBRUCH_RAYS, NONEX_BASIS, NONEX_SHIFT

POINT = [[1, 0], [0, 1], [-1, 2], [0, -1]]


def test_point_embedding_counts():
    C = build_periodic_complex(embedding_from_basis(POINT))
    assert C.counts() == (2, 5, 3)


def test_p1_diagonal_counts():
    assert build_periodic_complex(embedding_from_basis(NONEX_BASIS)).counts() == (1, 1)


def test_p2_diagonal_counts():
    C = build_periodic_complex(lawrence_lift([[1, 0], [0, 1], [-1, -1]]))
    assert C.counts() == (1, 3, 2) and C.euler_characteristic() == 0


def test_rank_deficient_forms_rejected():
    # forms (1,1), (2,2) have rank 1 < d = 2; such an iota is not injective, so build it by hand
    bad = LatticeEmbedding(IntMatrix([[1, 1], [2, 2]]), True)
    with pytest.raises(UnboundedError) as ei:
        build_periodic_complex(bad)
    d = ei.value.direction
    assert d is not None and d[0] + d[1] == 0


def test_shift_length_checked():
    with pytest.raises(ValueError, match="length"):
        build_periodic_complex(embedding_from_basis(POINT), [0, 0])


def test_zero_lattice():
    C = build_periodic_complex(LatticeEmbedding(IntMatrix.zeros(3, 0), True))
    assert C.counts() == (1,)


def test_custom_nonex_complex():
    L = embedding_from_basis(NONEX_BASIS)
    C = build_custom_complex(L, [(0,), (Fraction(1, 2),)],
                             [(1, [(0, (0,)), (1, (0,))]), (1, [(1, (0,)), (0, (1,))])], NONEX_SHIFT)
    assert C.counts() == (2, 2)
    assert C.to_json() == build_periodic_complex(L, NONEX_SHIFT).to_json()


def test_custom_cube_matches_standard():
    L = embedding_from_basis([[1, 0], [0, 1]])
    C = build_custom_complex(L, [(0, 0)], [(2, [(0, (0, 0)), (0, (1, 0)), (0, (0, 1)), (0, (1, 1))])])
    assert C.to_json() == build_periodic_complex(L).to_json()


def test_custom_rejects_nonconvex():
    L = embedding_from_basis([[1, 0], [0, 1]])
    with pytest.raises(ValueError, match="convex"):
        build_custom_complex(L, [(0, 0), (Fraction(1, 2), Fraction(1, 2))],
                             [(2, [(0, (0, 0)), (0, (1, 0)), (0, (0, 1)), (0, (1, 1)), (1, (0, 0))])])


def test_custom_rejects_wrong_dimension():
    L = embedding_from_basis([[1, 0], [0, 1]])
    with pytest.raises(ValueError, match="dimension"):
        build_custom_complex(L, [(0, 0)], [(2, [(0, (0, 0)), (0, (1, 0))])])


def test_custom_rejects_open_complex():
    L = embedding_from_basis([[1, 0], [0, 1]])
    with pytest.raises(ValueError, match="tile"):
        build_custom_complex(L, [(0, 0)], [(1, [(0, (0, 0)), (0, (1, 0))])])


def test_fh_complex_counts_and_origin():
    C, psi = fh_p2_complex()
    assert C.counts() == (3, 6, 3) and C.euler_characteristic() == 0
    assert psi.labels[0] == (0,) * 6 and C.cells[0].vertices == ((0, 0),)


def test_staircase_lift_on_surface():
    from math import ceil
    for q in [(0, 0), (Fraction(1, 3), Fraction(1, 3)), (Fraction(2, 7), Fraction(-5, 3))]:
        g = staircase_lift(q)
        assert sum(ceil(x) for x in g) <= 0
        assert sum(ceil(x + Fraction(1, 1000)) for x in g) > 0
        # lift moves along (1,1,1) from the plane point (q1, -q1-q2, q2)
        assert g[0] - q[0] == g[1] + q[0] + q[1] == g[2] - q[1]


def test_polytope_facets_square():
    sq = [(Fraction(a), Fraction(b)) for a in (0, 1) for b in (0, 1)]
    assert len(polytope_facets(sq)) == 4


def test_sublevel_anderson_two_vertices():
    C = build_periodic_complex(lawrence_lift(HIRZEBRUCH_RAYS))
    S = sublevel_complex(C, anderson(C), AND_FAILURE_DEGREE)
    assert S.sizes() == [2]


def test_sublevel_empty_below_labels():
    C = build_periodic_complex(lawrence_lift(HIRZEBRUCH_RAYS))
    S = sublevel_complex(C, ceiling(C), (-1,) * 8)
    assert S.is_empty()


def test_sublevel_unbounded_needs_window():
    L = embedding_from_basis([[1], [0]])
    C = build_periodic_complex(L)
    with pytest.raises(UnboundedError, match="window"):
        sublevel_complex(C, ceiling(C), (0, 0))
    S = sublevel_complex(C, ceiling(C), (0, 0), window=3)
    assert is_acyclic(S.homology())


def test_finite_subcomplex_requires_closure():
    C = build_periodic_complex(embedding_from_basis(NONEX_BASIS))
    with pytest.raises(ValueError, match="outside"):
        finite_subcomplex(C, [(1, (0,))])


def test_translation_invariance():
    C = build_periodic_complex(lawrence_lift(HIRZEBRUCH_RAYS))
    v = (3, -2)
    moved = [tuple(tuple(x + o for x, o in zip(p, v)) for p in c.vertices) for c in C.cells_of_dim(2)]
    assert assemble(C.lattice, C.shift, moved).to_json() == C.to_json()


# ---------------------------------------------------------- generic properties

def check_structure(C):
    assert C.check_d_squared() == []
    if C.d >= 1:
        assert C.euler_characteristic() == 0
    for c in C.cells:
        assert all(x >= 0 and x < 1 for x in c.vertices[0])
        seen = set()
        for f in c.facets:
            assert f.sign in (1, -1)
            assert (f.cell, f.offset) not in seen
            seen.add((f.cell, f.offset))
            assert C.cells[f.cell].dim == c.dim - 1


def check_vertices_tight(C):
    # each vertex satisfies with equality exactly the hyperplanes through it, and a
    # cell's interior point lies on exactly the hyperplanes containing all its vertices
    L = C.lattice
    for c in C.cells:
        def tight(q):
            amb = C.ambient(q)
            return {(i, amb[i]) for i in range(L.n) if any(L.iota.row(i)) and amb[i].denominator == 1}
        common = set.intersection(*(tight(v) for v in c.vertices))
        assert tight(c.interior_point()) == common
        assert tight(c.sample_point()) == common


small_lattices = st.sampled_from([
    (POINT, None), (None, HIRZEBRUCH_RAYS), (None, [[1, 0], [0, 1], [-1, -1]]),
    (NONEX_BASIS, None), ([[1, 0], [0, 1]], None), ([[2, 1], [1, -3], [0, 1]], None),
    ([[1, 1], [1, -1]], None), ([[3], [-2]], None),
])
shifts = st.lists(st.fractions(min_value=-1, max_value=1, max_denominator=5), min_size=8, max_size=8)


@settings(max_examples=40, deadline=None)
@given(small_lattices, shifts)
def test_complex_properties(lat, s):
    basis, rays = lat
    L = embedding_from_basis(basis) if basis else lawrence_lift(rays)
    C = build_periodic_complex(L, s[:L.n])
    check_structure(C)
    check_vertices_tight(C)


@settings(max_examples=40, deadline=None)
@given(small_lattices, shifts)
def test_matches_brute_force_oracle(lat, s):
    basis, rays = lat
    L = embedding_from_basis(basis) if basis else lawrence_lift(rays)
    s = s[:L.n]
    C = build_periodic_complex(L, s)
    if L.d == 1:
        V, E, inc = arrangement_1d(L, s)
        assert C.counts() == (len(V), len(E))
    else:
        V, E, inc, F = arrangement_2d(L, s)
        assert C.counts() == (len(V), len(E), F)
    assert [c.vertices[0] for c in C.cells_of_dim(0)] == V
    assert complex_incidences(C, 1) == inc


def test_complex_json_deterministic():
    L = lawrence_lift(HIRZEBRUCH_RAYS)
    assert build_periodic_complex(L).to_json() == build_periodic_complex(L).to_json()
    j = build_periodic_complex(L).to_json()
    assert j["cells"][1]["vertices"] == [["0", "1/2"]]
