"""Exact linear algebra over the rationals and the integers.

Every cohomology dimension computed by this package is the rank of a
matrix over Q, and every lattice question (smoothness, saturation,
quotient coordinates) is a Smith normal form.  No floating point anywhere.

Rank and echelon forms funnel through the elimination core selected in
:mod:`trophodge._core` (compiled when available, pure Python otherwise).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from trophodge._core import echelonize


def _as_fraction_rows(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def _int_rows(rows):
    """Clear denominators row by row; preserves row space."""
    out = []
    for row in rows:
        lcm = 1
        for x in row:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        out.append([int(x * lcm) for x in row])
    return out


def _rref(rows, ncols):
    """Reduced row echelon form over Q.

    Returns (pivots, reduced_rows) with unit pivots; rows are tuples of
    Fraction.  Forward elimination is fraction-free on an integer scaling
    of the input, back substitution is done over Q on the small echelon
    system.
    """
    mat = _int_rows(_as_fraction_rows(rows))
    nrows = len(mat)
    if nrows == 0 or ncols == 0:
        return [], []
    r, pivots = echelonize(mat, nrows, ncols)
    ech = [[Fraction(x) for x in mat[i]] for i in range(r)]
    for i in reversed(range(r)):
        piv = pivots[i]
        val = ech[i][piv]
        ech[i] = [x / val for x in ech[i]]
        for k in range(i):
            factor = ech[k][piv]
            if factor:
                ech[k] = [a - factor * b for a, b in zip(ech[k], ech[i])]
    return pivots, [tuple(row) for row in ech]


class QMatrix:
    """Immutable dense matrix over Q (row-major)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        entries = _as_fraction_rows(entries)
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError("entry shape does not match rows x cols")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("QMatrix is immutable")

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = list(rows)
        if cols is None:
            if not rows:
                raise ValueError("cannot infer cols from an empty row list")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    def __eq__(self, other):
        return (
            isinstance(other, QMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols})"

    def transpose(self):
        return QMatrix(
            self.cols, self.rows,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = [
            [sum(a * b for a, b in zip(row, col)) for col in ot]
            for row in self.entries
        ]
        return QMatrix(self.rows, other.cols, out)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return QMatrix(
            self.rows, self.cols,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
        )

    def __neg__(self):
        return QMatrix(self.rows, self.cols, [[-x for x in row] for row in self.entries])

    def scale(self, c):
        c = Fraction(c)
        return QMatrix(self.rows, self.cols, [[c * x for x in row] for row in self.entries])

    def apply(self, vec):
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * Fraction(b) for a, b in zip(row, vec)) for row in self.entries)

    def is_zero(self):
        return all(x == 0 for row in self.entries for x in row)

    def rank(self):
        mat = _int_rows(self.entries)
        if not mat or self.cols == 0:
            return 0
        r, _ = echelonize(mat, self.rows, self.cols)
        return r

    def rref(self):
        """(pivots, rows) of the reduced row echelon form."""
        return _rref(self.entries, self.cols)

    def kernel_basis(self):
        """Basis of the right null space as a QSubspace of Q^cols."""
        pivots, red = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        vecs = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for i, p in enumerate(pivots):
                v[p] = -red[i][f]
            vecs.append(v)
        return QSubspace.span(vecs, self.cols)

    def column_span(self):
        return QSubspace.span(list(zip(*self.entries)) if self.rows else [], self.rows)

    def solve(self, b):
        """One solution x of self @ x = b, or None if inconsistent."""
        return self.solve_many([b])[0]

    def solve_many(self, bs):
        """Solutions of self @ x = b for several right-hand sides at once.

        One elimination serves all systems; inconsistent ones give None.
        """
        bs = [list(b) for b in bs]
        if any(len(b) != self.rows for b in bs):
            raise ValueError("rhs length mismatch")
        k = len(bs)
        aug = [
            list(row) + [b[i] for b in bs] for i, row in enumerate(self.entries)
        ]
        pivots, red = _rref(aug, self.cols + k)
        if any(p >= self.cols for p in pivots):
            # some system is inconsistent; its pivot row contaminates the
            # joint elimination, so redo the systems one by one
            if k == 1:
                return [None]
            return [self.solve(b) for b in bs]
        out = []
        for j in range(k):
            x = [Fraction(0)] * self.cols
            for i, p in enumerate(pivots):
                x[p] = red[i][self.cols + j]
            out.append(tuple(x))
        return out


class QSubspace:
    """Subspace of Q^n with a canonical (RREF) basis."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim, basis):
        basis = _as_fraction_rows(basis)
        if any(len(v) != ambient_dim for v in basis):
            raise ValueError("basis vector length mismatch")
        if basis and QMatrix.from_rows(basis, ambient_dim).rank() != len(basis):
            raise ValueError("basis vectors are linearly dependent")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, *a):
        raise AttributeError("QSubspace is immutable")

    @classmethod
    def span(cls, vectors, ambient_dim):
        vectors = [v for v in _as_fraction_rows(vectors) if any(x != 0 for x in v)]
        if not vectors:
            return cls(ambient_dim, ())
        _, red = _rref(vectors, ambient_dim)
        return cls(ambient_dim, red)

    @classmethod
    def zero(cls, ambient_dim):
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim):
        return cls(ambient_dim, QMatrix.identity(ambient_dim).entries)

    @property
    def dim(self):
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, QSubspace)
            and self.ambient_dim == other.ambient_dim
            and QSubspace.span(self.basis, self.ambient_dim).basis
            == QSubspace.span(other.basis, other.ambient_dim).basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"QSubspace(dim {self.dim} in Q^{self.ambient_dim})"

    def matrix(self):
        return QMatrix(self.dim, self.ambient_dim, self.basis)

    def coordinates(self, vec):
        """Coordinates of vec in the canonical basis, or None if outside."""
        if not self.basis:
            return () if all(Fraction(x) == 0 for x in vec) else None
        return self.matrix().transpose().solve(vec)

    def coordinates_many(self, vecs):
        if not self.basis:
            return [
                () if all(Fraction(x) == 0 for x in v) else None for v in vecs
            ]
        return self.matrix().transpose().solve_many(vecs)

    def contains(self, vec):
        return self.coordinates(vec) is not None

    def contains_subspace(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return all(self.contains(v) for v in other.basis)

    def sum(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return QSubspace.span(list(self.basis) + list(other.basis), self.ambient_dim)

    def intersection(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        if not self.basis or not other.basis:
            return QSubspace.zero(self.ambient_dim)
        stacked = QMatrix.from_rows(
            [list(u) for u in self.basis] + [list(v) for v in other.basis],
            self.ambient_dim,
        ).transpose()
        vecs = []
        for coeffs in stacked.kernel_basis().basis:
            v = [Fraction(0)] * self.ambient_dim
            for c, u in zip(coeffs[: self.dim], self.basis):
                for k in range(self.ambient_dim):
                    v[k] += c * u[k]
            vecs.append(v)
        return QSubspace.span(vecs, self.ambient_dim)


def sparse_rank(rows) -> int:
    """Exact rank of a sparse rational matrix.

    ``rows`` is a list of {column: nonzero Fraction} dicts.  Pivots are
    chosen to limit fill-in (shortest row, then rarest column), which
    keeps incidence-style matrices near linear; entries stay Fractions.
    """
    rows = [dict(r) for r in rows if r]
    col_rows = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    alive = set(range(len(rows)))
    rank_ = 0
    while alive:
        i = min(alive, key=lambda j: (len(rows[j]), j))
        if not rows[i]:
            alive.discard(i)
            continue
        c = min(rows[i], key=lambda col: (len(col_rows[col]), col))
        piv = rows[i][c]
        rank_ += 1
        targets = [j for j in col_rows[c] if j != i and j in alive]
        for j in targets:
            f = rows[j][c] / piv
            rj = rows[j]
            for col, val in rows[i].items():
                new = rj.get(col, Fraction(0)) - f * val
                if new:
                    rj[col] = new
                    col_rows.setdefault(col, set()).add(j)
                else:
                    if col in rj:
                        del rj[col]
                        col_rows[col].discard(j)
        for col in rows[i]:
            col_rows[col].discard(i)
        alive.discard(i)
    return rank_


def rank(m: QMatrix) -> int:
    return m.rank()


def kernel_basis(m: QMatrix) -> QSubspace:
    return m.kernel_basis()


def quotient_dim(V: QSubspace, W: QSubspace) -> int:
    """dim V/W, rejecting W not contained in V."""
    if not V.contains_subspace(W):
        raise ValueError("W is not a subspace of V")
    return V.dim - W.dim


class ZMatrix:
    """Immutable dense integer matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        entries = tuple(tuple(int(x) for x in row) for row in entries)
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError("entry shape does not match rows x cols")
        for row in entries:
            for x in row:
                if not isinstance(x, int):
                    raise TypeError("ZMatrix entries must be integers")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("ZMatrix is immutable")

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cannot infer cols from an empty row list")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        return (
            isinstance(other, ZMatrix)
            and (self.rows, self.cols, self.entries)
            == (other.rows, other.cols, other.entries)
        )

    def __repr__(self):
        return f"ZMatrix({self.rows}x{self.cols})"

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.entries]
        return ZMatrix(self.rows, other.cols, out)

    def to_q(self):
        return QMatrix(self.rows, self.cols, self.entries)

    def determinant(self):
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        mat = [list(row) for row in self.entries]
        sign = 1
        denom = 1
        for c in range(n):
            p = next((i for i in range(c, n) if mat[i][c] != 0), None)
            if p is None:
                return 0
            if p != c:
                mat[c], mat[p] = mat[p], mat[c]
                sign = -sign
            piv = mat[c][c]
            for i in range(c + 1, n):
                mic = mat[i][c]
                for j in range(c, n):
                    mat[i][j] = (mat[i][j] * piv - mic * mat[c][j]) // denom
            denom = piv
        return sign * mat[n - 1][n - 1]


def smith_normal_form(m: ZMatrix):
    """(U, D, V) with U @ m @ V = D diagonal, U, V unimodular, d_i | d_{i+1}.

    Deterministic: the pivot is always the smallest-magnitude nonzero
    entry of the working block, first occurrence in row-major order.
    """
    A = [list(row) for row in m.entries]
    R, C = m.rows, m.cols
    U = [[1 if i == j else 0 for j in range(R)] for i in range(R)]
    V = [[1 if i == j else 0 for j in range(C)] for i in range(C)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(R, C):
        best = None
        for i in range(t, R):
            for j in range(t, C):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            piv = A[t][t]
            done = True
            for i in range(t + 1, R):
                if A[i][t] != 0:
                    q = A[i][t] // piv
                    add_row(i, t, -q)
                    if A[i][t] != 0:
                        swap_rows(t, i)
                        done = False
                        break
            if not done:
                continue
            for j in range(t + 1, C):
                if A[t][j] != 0:
                    q = A[t][j] // piv
                    add_col(j, t, -q)
                    if A[t][j] != 0:
                        swap_cols(t, j)
                        done = False
                        break
            if done:
                piv = A[t][t]
                bad = None
                for i in range(t + 1, R):
                    for j in range(t + 1, C):
                        if A[i][j] % piv != 0:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    Um = ZMatrix(R, R, U)
    Vm = ZMatrix(C, C, V)
    return Um, ZMatrix(R, C, A), Vm


def lex_subsets(n, p):
    """Lexicographically sorted p-subsets of range(n)."""
    return list(itertools.combinations(range(n), p))


def _minor(rows, row_idx, col_idx):
    sub = [[rows[i][j] for j in col_idx] for i in row_idx]
    d = Fraction(1)
    n = len(row_idx)
    mat = [list(r) for r in sub]
    sign = 1
    for c in range(n):
        p = next((i for i in range(c, n) if mat[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            mat[c], mat[p] = mat[p], mat[c]
            sign = -sign
        piv = mat[c][c]
        for i in range(c + 1, n):
            f = mat[i][c] / piv
            for j in range(c, n):
                mat[i][j] -= f * mat[c][j]
        d *= piv
    return sign * d


def wedge_vector(vectors, n, p):
    """Plucker coordinates of v_1 ^ ... ^ v_p in the lex p-subset basis of Q^n."""
    if len(vectors) != p:
        raise ValueError("need exactly p vectors")
    vectors = _as_fraction_rows(vectors)
    return tuple(
        _minor(vectors, range(p), cols) for cols in lex_subsets(n, p)
    )


def wedge_power(V: QSubspace, p: int) -> QSubspace:
    """The p-th exterior power, in lex p-subset coordinates of wedge^p Q^n."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    n = V.ambient_dim
    amb = math.comb(n, p)
    if p == 0:
        return QSubspace.span([(1,)], 1)
    if p > V.dim:
        return QSubspace.zero(amb)
    vecs = [
        wedge_vector([V.basis[i] for i in sub], n, p)
        for sub in lex_subsets(V.dim, p)
    ]
    return QSubspace.span(vecs, amb)


def wedge_matrix(A: QMatrix, p: int) -> QMatrix:
    """Matrix of wedge^p(A): wedge^p Q^cols -> wedge^p Q^rows, lex bases."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    row_subs = lex_subsets(A.rows, p)
    col_subs = lex_subsets(A.cols, p)
    if p == 0:
        return QMatrix.identity(1)
    ent = [
        [_minor(A.entries, rs, cs) for cs in col_subs]
        for rs in row_subs
    ]
    return QMatrix(len(row_subs), len(col_subs), ent)
