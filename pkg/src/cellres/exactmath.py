"""Exact integer and rational linear algebra.

Everything here works on Python ints and ``fractions.Fraction``; there is no
floating point anywhere in the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, ceil
from typing import Iterable, Sequence

Number = int | Fraction
RatVector = tuple[Fraction, ...]


class IntMatrix:
    """Immutable dense integer matrix that remembers its shape (even 0xk)."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]], rows: int | None = None, cols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            if not data:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(data[0])
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("ragged matrix data")
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> "IntMatrix":
        if rows is None:
            if not columns:
                raise ValueError("row count required for a matrix with no columns")
            rows = len(columns[0])
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def transpose(self) -> "IntMatrix":
        return IntMatrix([[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         self.cols, self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        oc = other.columns()
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in oc] for r in self._data],
                         self.rows, other.cols)

    def apply(self, v: Sequence[Number]) -> tuple:
        """Matrix-vector product, works for int or Fraction vectors."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum((a * x for a, x in zip(r, v)), 0) for r in self._data)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self._data == other._data)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"


# ---------------------------------------------------------------- HNF / SNF

def _swap_cols(m, a, b):
    for r in m:
        r[a], r[b] = r[b], r[a]


def _addmul_col(m, dst, src, k):
    # column dst += k * column src
    if k:
        for r in m:
            r[dst] += k * r[src]


def _neg_col(m, c):
    for r in m:
        r[c] = -r[c]


def hnf(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column Hermite normal form.

    Returns ``(H, U)`` with ``H = A @ U``, ``U`` unimodular, ``H`` in column
    echelon form with positive pivots and entries left of each pivot reduced
    into ``[0, pivot)``.  Columns of ``U`` matching zero columns of ``H`` are a
    basis of the kernel of ``A``.
    """
    m, n = A.rows, A.cols
    H = A.tolist()
    U = IntMatrix.identity(n).tolist()
    k = 0
    for i in range(m):
        if k >= n:
            break
        while True:
            nz = [j for j in range(k, n) if H[i][j] != 0]
            if not nz:
                break
            p = min(nz, key=lambda j: (abs(H[i][j]), j))
            if p != k:
                _swap_cols(H, p, k)
                _swap_cols(U, p, k)
            done = True
            for j in range(k + 1, n):
                if H[i][j]:
                    q = H[i][j] // H[i][k]
                    _addmul_col(H, j, k, -q)
                    _addmul_col(U, j, k, -q)
                    if H[i][j]:
                        done = False
            if done:
                break
        if H[i][k] == 0:
            continue
        if H[i][k] < 0:
            _neg_col(H, k)
            _neg_col(U, k)
        piv = H[i][k]
        for j in range(k):
            q = H[i][j] // piv
            _addmul_col(H, j, k, -q)
            _addmul_col(U, j, k, -q)
        k += 1
    return IntMatrix(H, m, n), IntMatrix(U, n, n)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Integer basis of ker A (as columns), read off the column HNF."""
    H, U = hnf(A)
    cols = [j for j in range(A.cols) if all(H[i, j] == 0 for i in range(A.rows))]
    return IntMatrix.from_columns([U.col(j) for j in cols], rows=A.cols)


def snf(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form.

    Returns ``(D, P, Q)`` with ``D = P @ A @ Q`` diagonal, nonnegative and
    ``D[i,i] | D[i+1,i+1]``; ``P`` and ``Q`` unimodular.
    """
    m, n = A.rows, A.cols
    D = A.tolist()
    P = IntMatrix.identity(m).tolist()
    Q = IntMatrix.identity(n).tolist()

    def swap_rows(a, b):
        D[a], D[b] = D[b], D[a]
        P[a], P[b] = P[b], P[a]

    def addmul_row(dst, src, k):
        if k:
            D[dst] = [x + k * y for x, y in zip(D[dst], D[src])]
            P[dst] = [x + k * y for x, y in zip(P[dst], P[src])]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not nz:
                break
            _, pi, pj = min(nz)
            if pi != t:
                swap_rows(pi, t)
            if pj != t:
                _swap_cols(D, pj, t)
                _swap_cols(Q, pj, t)
            piv = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    addmul_row(i, t, -(D[i][t] // piv))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // piv
                    _addmul_col(D, j, t, -q)
                    _addmul_col(Q, j, t, -q)
                    if D[t][j]:
                        clean = False
            if not clean:
                continue
            # divisibility: fold a non-divisible row into the pivot row
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % piv), None)
            if bad is None:
                break
            addmul_row(t, bad[0], 1)
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            P[t] = [-x for x in P[t]]
    return IntMatrix(D, m, n), IntMatrix(P, m, m), IntMatrix(Q, n, n)


def invariant_factors(A: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    D, _, _ = snf(A)
    return [D[i, i] for i in range(min(A.rows, A.cols)) if D[i, i] != 0]


def det(M: Sequence[Sequence[Number]]) -> Number:
    """Determinant of a square matrix by exact Gaussian elimination."""
    n = len(M)
    a = [[Fraction(x) for x in row] for row in M]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        out *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    out *= sign
    return int(out) if out.denominator == 1 else out


def inverse_unimodular(U: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    n = U.rows
    aug = [[Fraction(x) for x in U.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, _ = _rref(aug, n)
    inv = [[x for x in red[i][n:]] for i in range(n)]
    if any(x.denominator != 1 for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return IntMatrix([[int(x) for x in r] for r in inv], n, n)


# ------------------------------------------------------- rational linear algebra

def _rref(rows: Sequence[Sequence[Number]], ncols: int | None = None):
    """Reduced row echelon form over Q; pivots searched in the first ncols columns."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return a, []
    width = len(a[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(width):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows: Sequence[Sequence[Number]]) -> int:
    """Rank over Q of a matrix given by rows."""
    if not rows or not len(rows[0]):
        return 0
    return len(_rref(rows)[1])


def solve(A: Sequence[Sequence[Number]], b: Sequence[Number]) -> RatVector | None:
    """Some rational x with A x = b, or None if inconsistent."""
    if not A:
        return None if any(b) else ()
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    red, piv = _rref(aug, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = red[i][n]
    return tuple(x)


def nullspace(A: Sequence[Sequence[Number]], n: int) -> list[RatVector]:
    """Basis of the rational nullspace of A (A has n columns)."""
    if not A:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    red, piv = _rref(A, n)
    free = [c for c in range(n) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -red[i][f]
        out.append(tuple(v))
    return out


def to_fraction_vector(v: Iterable[Number | str]) -> RatVector:
    return tuple(Fraction(x) for x in v)


def ceil_vec(v: Iterable[Number]) -> tuple[int, ...]:
    return tuple(ceil(x) for x in v)


def floor_vec(v: Iterable[Number]) -> tuple[int, ...]:
    return tuple(floor(x) for x in v)


def primitive(v: Sequence[Number]) -> tuple[int, ...]:
    """Smallest positive integer multiple of a rational vector with coprime entries."""
    from math import gcd, lcm
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


# ------------------------------------------------------------------ polyhedra

class UnboundedError(ValueError):
    """A polyhedron expected to be bounded has a recession direction."""

    def __init__(self, message: str, direction=None):
        super().__init__(message)
        self.direction = direction


def _fm_eliminate(ineqs: list[tuple[tuple[Fraction, ...], Fraction]]):
    """Fourier-Motzkin: drop the last variable from a system ``a.x <= b``."""
    pos, neg, out = [], [], set()
    for a, b in ineqs:
        c = a[-1]
        if c > 0:
            pos.append((tuple(x / c for x in a[:-1]), b / c))
        elif c < 0:
            neg.append((tuple(x / -c for x in a[:-1]), b / -c))
        else:
            out.add((a[:-1], b))
    for ap, bp in pos:
        for an, bn in neg:
            out.add((tuple(x + y for x, y in zip(ap, an)), bp + bn))
    return sorted(out)


def _interval(ineqs) -> tuple[Fraction | None, Fraction | None] | None:
    """Bounds for a single variable; None if infeasible."""
    lo = hi = None
    for a, b in ineqs:
        c = a[0]
        if c > 0:
            hi = b / c if hi is None else min(hi, b / c)
        elif c < 0:
            lo = b / c if lo is None else max(lo, b / c)
        elif b < 0:
            return None
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def _normalise(A, b, dim):
    return [(tuple(Fraction(x) for x in row), Fraction(bi)) for row, bi in zip(A, b)]


def _project_to_first(ineqs, dim):
    systems = [ineqs]
    for _ in range(dim - 1):
        systems.append(_fm_eliminate(systems[-1]))
    return systems


def feasible_point(A: Sequence[Sequence[Number]], b: Sequence[Number], dim: int) -> RatVector | None:
    """A rational point of {x : A x <= b}, or None if the polyhedron is empty."""
    ineqs = _normalise(A, b, dim)
    if dim == 0:
        return () if all(bi >= 0 for _, bi in ineqs) else None
    systems = _project_to_first(ineqs, dim)
    x: list[Fraction] = []
    # systems[k] involves variables 0 .. dim-1-k
    for k in range(dim - 1, -1, -1):
        sub = [(a[len(x):], bb - sum(ai * xi for ai, xi in zip(a, x))) for a, bb in systems[k]]
        iv = _interval(sub)
        if iv is None:
            return None
        lo, hi = iv
        if lo is not None and hi is not None:
            v = (lo + hi) / 2
        elif lo is not None:
            v = lo
        elif hi is not None:
            v = hi
        else:
            v = Fraction(0)
        x.append(v)
    return tuple(x)


def recession_direction(A: Sequence[Sequence[Number]], dim: int) -> tuple[int, ...] | None:
    """A nonzero integer x with A x <= 0, or None if the recession cone is zero."""
    for k in range(dim):
        for s in (1, -1):
            e = [0] * dim
            e[k] = -s
            x = feasible_point(list(A) + [e], [0] * len(A) + [-1], dim)
            if x is not None:
                return primitive(x)
    return None


def integer_points(A: Sequence[Sequence[Number]], b: Sequence[Number], dim: int) -> list[tuple[int, ...]]:
    """All integer points of the bounded polyhedron {x in R^dim : A x <= b}, sorted.

    Raises UnboundedError (carrying a recession direction) if the polyhedron is
    unbounded in some variable.
    """
    ineqs = _normalise(A, b, dim)
    if dim == 0:
        return [()] if all(bi >= 0 for _, bi in ineqs) else []
    systems = _project_to_first(ineqs, dim)
    out: list[tuple[int, ...]] = []

    def rec(k, prefix):
        sub = [(a[len(prefix):], bb - sum(ai * xi for ai, xi in zip(a, prefix))) for a, bb in systems[k]]
        iv = _interval(sub)
        if iv is None:
            return
        lo, hi = iv
        if lo is None or hi is None:
            raise UnboundedError("unbounded polyhedron", recession_direction(A, dim))
        for v in range(ceil(lo), floor(hi) + 1):
            if k == 0:
                out.append(tuple(prefix) + (v,))
            else:
                rec(k - 1, prefix + [v])

    rec(dim - 1, [])
    return out


# ------------------------------------------------------------------- homology

@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple[int, ...] = ()

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion


HomologyProfile = tuple[HomologyGroup, ...]


def integer_homology(boundaries: Sequence[IntMatrix], sizes: Sequence[int] | None = None) -> HomologyProfile:
    """Integral homology of a chain complex.

    ``boundaries[i]`` is the matrix of d_{i+1}: C_{i+1} -> C_i.  ``sizes`` gives
    the ranks of C_0, C_1, ...; it is only required when there are no
    boundary matrices.
    """
    if sizes is None:
        if not boundaries:
            raise ValueError("sizes required when no boundary matrices are given")
        sizes = [boundaries[0].rows] + [B.cols for B in boundaries]
    sizes = list(sizes)
    if len(boundaries) != len(sizes) - 1:
        raise ValueError("expected one boundary matrix per consecutive pair of chain groups")
    for i, B in enumerate(boundaries):
        if B.rows != sizes[i] or B.cols != sizes[i + 1]:
            raise ValueError(f"boundary {i + 1} has shape {B.rows}x{B.cols}, expected {sizes[i]}x{sizes[i + 1]}")
    for i in range(len(boundaries) - 1):
        if not (boundaries[i] @ boundaries[i + 1]).is_zero():
            raise ValueError(f"d_{i + 1} o d_{i + 2} is not zero")
    facs = [invariant_factors(B) for B in boundaries]
    ranks = [len(f) for f in facs]
    out = []
    for i, c in enumerate(sizes):
        r_out = ranks[i - 1] if i >= 1 else 0  # rank of d_i
        r_in = ranks[i] if i < len(ranks) else 0  # rank of d_{i+1}
        tors = tuple(x for x in facs[i] if x > 1) if i < len(facs) else ()
        out.append(HomologyGroup(c - r_out - r_in, tors))
    return tuple(out)


def reduced(profile: HomologyProfile) -> HomologyProfile:
    """Reduced homology of a nonempty complex."""
    if not profile or profile[0].rank == 0:
        return profile
    return (HomologyGroup(profile[0].rank - 1, profile[0].torsion),) + tuple(profile[1:])


def is_acyclic(profile: HomologyProfile) -> bool:
    """True iff the reduced homology vanishes (complex nonempty)."""
    return all(g.is_zero() for g in reduced(profile))
