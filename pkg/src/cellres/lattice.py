"""Sublattices L of Z^n, given by a basis matrix iota (n x d), and the grading Z^n -> Z^n/L."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exactmath import IntMatrix, hnf, kernel_basis, snf, rank, inverse_unimodular, solve


@dataclass(frozen=True)
class LatticeEmbedding:
    """Inclusion iota: Z^d -> Z^n with image L.

    ``lawrence_m`` is set when L is a Lawrence lifting {(v, -v)} in Z^{2m}.
    """

    iota: IntMatrix
    saturated: bool
    lawrence_m: int | None = None

    @property
    def n(self) -> int:
        return self.iota.rows

    @property
    def d(self) -> int:
        return self.iota.cols

    def embed(self, q: Sequence) -> tuple:
        """iota applied to a point of Z^d or R^d."""
        return self.iota.apply(q)

    def is_lawrence(self) -> bool:
        if self.n % 2:
            return False
        m = self.n // 2
        return all(c[i + m] == -c[i] for c in self.iota.columns() for i in range(m))


def _dependent_column(B: IntMatrix) -> int | None:
    cols = B.columns()
    for j in range(len(cols)):
        if rank(cols[: j + 1]) < j + 1:
            return j
    return None


def _is_saturated(B: IntMatrix) -> bool:
    D, _, _ = snf(B)
    return all(D[i, i] == 1 for i in range(B.cols))


def embedding_from_basis(B: IntMatrix | Sequence[Sequence[int]], lawrence_m: int | None = None) -> LatticeEmbedding:
    """Wrap a basis matrix (columns = basis of L); saturation is detected via SNF."""
    if not isinstance(B, IntMatrix):
        B = IntMatrix(B)
    j = _dependent_column(B)
    if j is not None:
        raise ValueError(f"basis is rank-deficient: column {j} depends on the previous columns")
    L = LatticeEmbedding(B, _is_saturated(B), lawrence_m)
    if lawrence_m is None and L.d > 0 and L.is_lawrence():
        L = LatticeEmbedding(B, L.saturated, L.n // 2)
    return L


def lattice_from_toric_embedding(phi_star: IntMatrix, nu: IntMatrix) -> LatticeEmbedding:
    """L = ker(phi_star) pushed into Z^n by the ray matrix nu (rows are rays).

    ``phi_star`` is the matrix of M_X -> M_Y acting on column vectors of M_X,
    so it has nu.cols columns.  A 0 x k matrix is the zero map to Z^0.
    """
    if phi_star.cols != nu.cols:
        raise ValueError(f"phi_star has {phi_star.cols} columns but nu has {nu.cols}")
    K = kernel_basis(phi_star)
    iota = nu @ K
    if rank(iota.columns()) < iota.cols:
        raise ValueError("nu restricted to ker(phi_star) is not injective")
    return embedding_from_basis(iota)


def lawrence_lift(nu_Y: IntMatrix | Sequence[Sequence[int]]) -> LatticeEmbedding:
    """Lawrence lifting {(v, -v) : v in image(nu_Y)} in Z^{2m}; iota = [nu_Y; -nu_Y]."""
    if not isinstance(nu_Y, IntMatrix):
        nu_Y = IntMatrix(nu_Y)
    if rank(nu_Y.tolist()) < nu_Y.cols:
        raise ValueError("ray matrix is rank-deficient (Y has a torus factor)")
    rows = nu_Y.tolist() + [[-x for x in r] for r in nu_Y.tolist()]
    return embedding_from_basis(IntMatrix(rows, 2 * nu_Y.rows, nu_Y.cols), lawrence_m=nu_Y.rows)


def saturate(L: LatticeEmbedding) -> LatticeEmbedding:
    """Saturation (L tensor Q) cap Z^n, with a basis in column Hermite form."""
    if L.d == 0:
        return L
    D, P, Q = snf(L.iota)
    Pinv = inverse_unimodular(P)
    B = IntMatrix.from_columns([Pinv.col(j) for j in range(L.d)], rows=L.n)
    H, _ = hnf(B)
    return LatticeEmbedding(H, True, L.lawrence_m if L.is_lawrence() else None)


def same_lattice(A: LatticeEmbedding, B: LatticeEmbedding) -> bool:
    """Equality of column spans over Z."""
    if A.n != B.n or A.d != B.d:
        return False
    return hnf(A.iota)[0] == hnf(B.iota)[0]


@dataclass(frozen=True)
class QuotientGrading:
    """eta: Z^n -> Z^r + sum Z/t_i, from the Smith form of iota.

    ``eta_free`` (r x n) gives the free coordinates; ``eta_torsion`` pairs a
    row map with its modulus.  ``coarsening`` is an optional user matrix G with
    G iota = 0 (e.g. a Pic identification).
    """

    lattice: LatticeEmbedding
    eta_free: IntMatrix
    eta_torsion: tuple[tuple[tuple[int, ...], int], ...]
    coarsening: IntMatrix | None = None

    @property
    def free_rank(self) -> int:
        return self.eta_free.rows

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(t for _, t in self.eta_torsion)

    def evaluate(self, u: Sequence[int]) -> tuple[int, ...]:
        """Quotient degree of u: free coordinates followed by torsion residues."""
        free = self.eta_free.apply(u)
        tors = tuple(sum(a * x for a, x in zip(row, u)) % t for row, t in self.eta_torsion)
        return tuple(free) + tors

    def coarse(self, u: Sequence[int]) -> tuple[int, ...] | None:
        if self.coarsening is None:
            return None
        return tuple(self.coarsening.apply(u))

    def same_class(self, u: Sequence[int], w: Sequence[int]) -> bool:
        return self.evaluate(u) == self.evaluate(w)


def quotient_grading(L: LatticeEmbedding, coarsening: IntMatrix | Sequence[Sequence[int]] | None = None) -> QuotientGrading:
    if coarsening is not None and not isinstance(coarsening, IntMatrix):
        coarsening = IntMatrix(coarsening, cols=L.n) if len(coarsening) else IntMatrix.zeros(0, L.n)
    if coarsening is not None:
        if coarsening.cols != L.n:
            raise ValueError(f"coarsening has {coarsening.cols} columns, expected {L.n}")
        for j, c in enumerate(L.iota.columns()):
            if any(coarsening.apply(c)):
                raise ValueError(f"coarsening does not annihilate column {j} of iota: {list(c)}")
    D, P, _ = snf(L.iota)
    tors = tuple((P.row(i), D[i, i]) for i in range(L.d) if D[i, i] > 1)
    free = IntMatrix([P.row(i) for i in range(L.d, L.n)], L.n - L.d, L.n)
    return QuotientGrading(L, free, tors, coarsening)


def solve_in_lattice(L: LatticeEmbedding, u: Sequence[int]) -> tuple[int, ...] | None:
    """Coordinates c in Z^d with iota c = u, or None if u is not in L."""
    if L.d == 0:
        return () if not any(u) else None
    x = solve(L.iota.tolist(), list(u))
    if x is None or any(v.denominator != 1 for v in x):
        return None
    return tuple(int(v) for v in x)
