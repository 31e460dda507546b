"""Exact integer / rational linear algebra.

Matrices are plain lists of rows.  Entries are coerced to ``Fraction`` (or
``int`` where the routine is integral), so nothing here ever touches floating
point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

MAX_DIM = 500

Matrix = list[list[Fraction]]


class MatrixSizeError(ValueError):
    """Raised for matrices outside the supported desk-scale envelope."""


def _check_size(rows: int, cols: int) -> None:
    if rows > MAX_DIM or cols > MAX_DIM:
        raise MatrixSizeError(f"{rows}x{cols} matrix exceeds the {MAX_DIM}x{MAX_DIM} limit")


def to_fraction_matrix(M: Sequence[Sequence]) -> Matrix:
    rows = [[Fraction(v) for v in row] for row in M]
    if rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
        _check_size(len(rows), width)
    return rows


def shape(M: Sequence[Sequence]) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [matvec(Bt, row) for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    nz = [(j, v) for j, v in enumerate(x) if v]
    return [sum(row[j] * v for j, v in nz if row[j]) for row in A]


def submatrix(M: Sequence[Sequence], rows: Sequence[int], cols: Sequence[int]) -> list[list]:
    return [[M[i][j] for j in cols] for i in rows]


def format_matrix(M: Sequence[Sequence]) -> str:
    """Render an exact matrix as an aligned grid of ``p/q`` strings."""
    cells = [[str(Fraction(v)) for v in row] for row in M]
    if not cells:
        return ""
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def determinant(M: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n, m = shape(M)
    if n != m:
        raise ValueError(f"determinant of a non-square {n}x{m} matrix")
    _check_size(n, m)
    if n == 0:
        return Fraction(1)
    # Clear denominators so the elimination runs over the integers.
    F = to_fraction_matrix(M)
    scale = 1
    for row in F:
        for v in row:
            scale = scale * v.denominator // gcd(scale, v.denominator)
    A = [[int(v * scale) for v in row] for row in F]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return Fraction(sign * A[n - 1][n - 1], scale ** n)


def rref(M: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form with deterministic (leftmost, topmost) pivots."""
    A = to_fraction_matrix(M)
    rows, cols = shape(A)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def _integral_rows(M: Sequence[Sequence]) -> Optional[list[list[int]]]:
    rows = []
    for row in M:
        out = []
        for v in row:
            if isinstance(v, int):
                out.append(v)
            elif isinstance(v, Fraction) and v.denominator == 1:
                out.append(v.numerator)
            else:
                return None
        rows.append(out)
    return rows


def _int_rank(A: list[list[int]]) -> int:
    """Rank by division-free elimination, rows kept primitive to bound growth."""
    rows = [r for r in A if any(r)]
    rk = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        pr = rows[rk]
        a = pr[c]
        for i in range(rk + 1, len(rows)):
            b = rows[i][c]
            if b:
                new = [a * x - b * y for x, y in zip(rows[i], pr)]
                g = 0
                for x in new:
                    if x:
                        g = gcd(g, x)
                        if g == 1:
                            break
                rows[i] = [x // g for x in new] if g > 1 else new
        rk += 1
        if rk == len(rows):
            break
    return rk


def rank(M: Sequence[Sequence]) -> int:
    if not M or not M[0]:
        return 0
    ints = _integral_rows(M)
    if ints is not None:
        return _int_rank(ints)
    # eliminate along the shorter side
    if len(M) > len(M[0]):
        M = transpose(M)
    return len(rref(M)[1])


def fraction_free_solve(A: Sequence[Sequence[int]], Bm: Sequence[Sequence[int]]
                        ) -> Optional[tuple[int, list[list[int]]]]:
    """Integer Gauss-Jordan: returns ``(d, Y)`` with ``A (Y / d) = Bm``, or None if A is singular.

    ``A`` is square with integer entries; every division in the
    Bareiss-style update is exact, and ``d = +-det A``.
    """
    n = len(A)
    T = [list(map(int, a)) + list(map(int, b)) for a, b in zip(A, Bm)]
    width = len(T[0]) if T else 0
    prev = 1
    for k in range(n):
        if T[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if T[i][k]), None)
            if swap is None:
                return None
            T[k], T[swap] = T[swap], T[k]
        pk = T[k]
        akk = pk[k]
        for i in range(n):
            if i == k:
                continue
            ri = T[i]
            aik = ri[k]
            T[i] = [(akk * ri[j] - aik * pk[j]) // prev for j in range(width)]
        prev = akk
    d = prev
    return d, [row[n:] for row in T]


def primitive(v: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to coprime integers, first nonzero positive."""
    den = 1
    for x in v:
        x = Fraction(x)
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        g = -g
    return [x // g for x in ints]


def kernel_basis(M: Sequence[Sequence], ncols: Optional[int] = None) -> list[list[int]]:
    """Basis of the right null space, each vector primitive integral.

    ``ncols`` must be given when ``M`` has no rows.
    """
    if not M:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(M)
    cols = len(R[0])
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -R[r][f]
        basis.append(primitive(v))
    return basis


def solve_exact(M: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """Some solution of ``M x = b`` (free variables zero), or None if inconsistent."""
    rows, cols = shape(M)
    if rows != len(b):
        raise ValueError("right-hand side length mismatch")
    if rows == 0:
        return [Fraction(0)] * (cols or 0)
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, p in enumerate(pivots):
        x[p] = R[r][cols]
    return x


def inverse(M: Sequence[Sequence]) -> Matrix:
    n, m = shape(M)
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


# --------------------------------------------------------------------------
# Smith normal form and homology


@dataclass(frozen=True)
class SnfResult:
    invariant_factors: tuple[int, ...]
    rank: int
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]
    D: tuple[tuple[int, ...], ...] = field(repr=False)


def smith_normal_form(M: Sequence[Sequence[int]]) -> SnfResult:
    """Return U, V unimodular with U*M*V = D diagonal and d_1 | d_2 | ...

    Pivots are chosen by minimal absolute value among the remaining block.
    """
    rows, cols = shape(M)
    _check_size(rows, cols)
    for row in M:
        for v in row:
            if Fraction(v).denominator != 1:
                raise ValueError("Smith normal form needs an integer matrix")
    D = [[int(v) for v in row] for row in M]
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(rows, cols):
        entries = [(abs(D[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if D[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, rows):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        done = False
            if done:
                # divisibility: pivot must divide the rest of the block
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if D[i][j] % D[t][t]), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            # move the smallest remaining entry of the pivot row/column into place
            cand = [(abs(D[i][t]), i, t) for i in range(t, rows) if D[i][t]]
            cand += [(abs(D[t][j]), t, j) for j in range(t, cols) if D[t][j]]
            _, pi, pj = min(cand)
            swap_rows(t, pi)
            swap_cols(t, pj)
        if D[t][t] < 0:
            D[t] = [-v for v in D[t]]
            U[t] = [-v for v in U[t]]
        t += 1
    factors = tuple(D[i][i] for i in range(min(rows, cols)) if D[i][i])
    return SnfResult(
        invariant_factors=factors,
        rank=len(factors),
        U=tuple(map(tuple, U)),
        V=tuple(map(tuple, V)),
        D=tuple(map(tuple, D)),
    )


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple[int, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return self.betti == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def homology(K, p: int) -> HomologyGroup:
    """H_p(K; Z) from Smith normal forms of the boundary matrices."""
    from .complex import boundary_matrix

    if not 0 <= p <= K.dimension:
        raise ValueError(f"homology dimension {p} outside [0, {K.dimension}]")
    n_p = K.count(p)
    if p == 0:
        rank_p = 0
    else:
        rank_p = smith_normal_form(boundary_matrix(K, p).dense()).rank
    if p < K.dimension:
        snf = smith_normal_form(boundary_matrix(K, p + 1).dense())
        rank_next, factors = snf.rank, snf.invariant_factors
    else:
        rank_next, factors = 0, ()
    return HomologyGroup(
        betti=n_p - rank_p - rank_next,
        torsion=tuple(d for d in factors if d > 1),
    )
