"""Exact simplex solver and vertex enumeration for OHCP instances.

The tableau is dense over ``Fraction``.  Because the columns of ``x+`` and
``x-`` form a signed identity, the starting basis (``x+_j`` when
``c_j >= 0``, otherwise ``x-_j``) is primal feasible and no phase one is
needed.  Bland's rule keeps every run finite and deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterator, Optional, Sequence

from . import linalg
from .lp import OhcpInstance, SolutionVector, ZERO, is_concise

DEFAULT_VERTEX_LIMIT = 10_000


class BudgetExceeded(RuntimeError):
    """A vertex or search budget ran out before an enumeration finished."""


@dataclass(frozen=True)
class LpResult:
    solution: SolutionVector
    objective: Fraction
    basis: tuple[int, ...]
    duals: tuple[Fraction, ...]
    pivots: int


def solve(inst: OhcpInstance) -> LpResult:
    """Optimal vertex of the instance by the primal simplex method with Bland's rule."""
    m, size = inst.m, inst.size
    A = inst.A
    f = inst.f
    if m == 0:
        return LpResult(SolutionVector.zero(0, inst.n), ZERO, (), (), 0)
    basis = [j if inst.c[j] >= 0 else m + j for j in range(m)]
    # B^{-1} is diagonal with entries +-1, so the starting tableau is a row scaling of A.
    T = []
    for j in range(m):
        s = 1 if inst.c[j] >= 0 else -1
        T.append([Fraction(s * a) for a in A[j]] + [abs(inst.c[j])])
    pivots = 0
    while True:
        cb = [f[b] for b in basis]
        entering = None
        for k in range(size):
            if k in basis:
                continue
            red = f[k] - sum((cb[r] * T[r][k] for r in range(m) if T[r][k]), ZERO)
            if red < 0:
                entering = k
                break
        if entering is None:
            break
        best = None
        for r in range(m):
            a = T[r][entering]
            if a > 0:
                key = (T[r][size] / a, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            raise RuntimeError("objective unbounded below; weights must be nonnegative")
        r = best[1]
        piv = T[r][entering]
        T[r] = [v / piv for v in T[r]]
        for i in range(m):
            if i != r and T[i][entering]:
                factor = T[i][entering]
                T[i] = [a - factor * b for a, b in zip(T[i], T[r])]
        basis[r] = entering
        pivots += 1
    vals = [ZERO] * size
    for r, b in enumerate(basis):
        vals[b] = T[r][size]
    z = SolutionVector(inst.m, inst.n, tuple(vals))
    if not is_concise(z):
        raise AssertionError("simplex returned a non-concise vertex")
    duals = _duals(inst, basis)
    return LpResult(z, inst.objective(z), tuple(basis), tuple(duals), pivots)


def _duals(inst: OhcpInstance, basis: Sequence[int]) -> list[Fraction]:
    """Solve pi^T A_basis = f_basis."""
    cols = [[row[b] for row in inst.A] for b in basis]  # rows = basis columns of A
    pi = linalg.solve_exact(cols, [inst.f[b] for b in basis])
    if pi is None:
        raise AssertionError("singular optimal basis")
    return pi


# --------------------------------------------------------------------------
# Vertex characterisation in coefficient space


def vertex_from_y(inst: OhcpInstance, y: Sequence[Fraction]) -> SolutionVector:
    x = [ci + sum((inst.B[j][k] * y[k] for k in range(inst.n) if y[k]), ZERO)
         for j, ci in enumerate(inst.c)]
    return SolutionVector.from_coefficients(x, y)


def is_vertex_y(inst: OhcpInstance, y: Sequence[Fraction], x: Optional[Sequence[Fraction]] = None) -> bool:
    """Rank test: B on (rows where x vanishes) x supp(y) has full column rank."""
    if x is None:
        x = vertex_from_y(inst, y).p_coefficients
    supp = [k for k in range(inst.n) if y[k] != 0]
    if not supp:
        return True
    zero_rows = [j for j in range(inst.m) if x[j] == 0]
    if len(zero_rows) < len(supp):
        return False
    return linalg.rank(linalg.submatrix(inst.B, zero_rows, supp)) == len(supp)


def _affine_vertices(n: int, y0: list[Fraction], K: list[list[Fraction]],
                     hyperplanes: list[tuple[list[Fraction], Fraction]],
                     accept, limit: int) -> tuple[list[tuple[Fraction, ...]], bool]:
    """Points y = y0 + K t where ``d = len(K)`` independent hyperplanes meet.

    Each hyperplane is ``(a, b)`` meaning ``a . y = b``.  Returns the
    distinct accepted points and whether ``limit`` was reached.
    """
    d = len(K)
    found: dict[tuple[Fraction, ...], None] = {}
    if d == 0:
        y = tuple(y0)
        return ([y] if accept(y) else []), False
    # restrict each hyperplane to t-space: (a.K) t = b - a.y0
    restricted = []
    for a, b in hyperplanes:
        row = [sum((a[k] * K[j][k] for k in range(n) if a[k]), ZERO) for j in range(d)]
        if any(row):
            restricted.append((row, b - sum((a[k] * y0[k] for k in range(n) if a[k]), ZERO)))
    for combo in combinations(range(len(restricted)), d):
        M = [restricted[h][0] for h in combo]
        t = linalg.solve_exact(M, [restricted[h][1] for h in combo])
        if t is None or linalg.rank(M) < d:
            continue
        y = tuple(y0[k] + sum((t[j] * K[j][k] for j in range(d)), ZERO) for k in range(n))
        if y in found:
            continue
        if accept(y):
            found[y] = None
            if len(found) >= limit:
                return list(found), True
    return list(found), False


@dataclass(frozen=True)
class VertexEnumeration:
    vertices: tuple[SolutionVector, ...]
    objective: Fraction
    limit_hit: bool


def enumerate_optimal_vertices(inst: OhcpInstance, limit: int = DEFAULT_VERTEX_LIMIT) -> VertexEnumeration:
    """All optimal vertices, found as the vertices of the optimal face.

    Complementary slackness with the optimal duals ``pi`` pins down the
    face: rows with ``|pi_j| < w_j`` have zero coefficient, rows with
    ``pi_j = w_j`` (resp. ``-w_j``) have nonnegative (resp. nonpositive)
    coefficient.  The face is parametrised over y and its vertices are the
    points where the active constraints reach full rank.
    """
    if limit < 1:
        raise ValueError("limit must be positive")
    res = solve(inst)
    m, n = inst.m, inst.n
    if n == 0:
        return VertexEnumeration((res.solution,), res.objective, False)
    pi = res.duals
    forced, signs = [], {}
    for j in range(m):
        wj = inst.w[j]
        if wj == 0:
            signs[j] = 0
        elif pi[j] == wj:
            signs[j] = 1
        elif pi[j] == -wj:
            signs[j] = -1
        else:
            forced.append(j)
    B = [[Fraction(v) for v in row] for row in inst.B]
    if forced:
        BF = [B[j] for j in forced]
        y0 = linalg.solve_exact(BF, [-inst.c[j] for j in forced])
        if y0 is None:
            raise AssertionError("optimal face is empty")
        K = [[Fraction(v) for v in vec] for vec in linalg.kernel_basis(BF)]
    else:
        y0 = [ZERO] * n
        K = [[Fraction(int(i == k)) for i in range(n)] for k in range(n)]

    hyperplanes = []
    for j in signs:
        hyperplanes.append((B[j], -inst.c[j]))
    for k in range(n):
        hyperplanes.append(([Fraction(int(i == k)) for i in range(n)], ZERO))

    def accept(y):
        x = [inst.c[j] + sum((B[j][k] * y[k] for k in range(n) if y[k]), ZERO) for j in range(m)]
        for j in forced:
            if x[j] != 0:
                return False
        for j, s in signs.items():
            if s * x[j] < 0:
                return False
        return is_vertex_y(inst, y, x)

    ys, hit = _affine_vertices(n, list(y0), K, hyperplanes, accept, limit)
    verts = sorted((vertex_from_y(inst, y) for y in ys), key=lambda z: z.values)
    for z in verts:
        if inst.objective(z) != res.objective:
            raise AssertionError("enumerated vertex is not optimal")
    return VertexEnumeration(tuple(verts), res.objective, hit)


# --------------------------------------------------------------------------
# Brute-force oracle


def brute_force_vertices(inst: OhcpInstance) -> Iterator[SolutionVector]:
    """Every vertex of P_A, from all independent column supports of A."""
    A = inst.A
    m, size = inst.m, inst.size
    seen = set()
    for k in range(0, m + 1):
        for supp in combinations(range(size), k):
            cols = linalg.submatrix(A, range(m), supp)
            if k and linalg.rank(cols) < k:
                continue
            sol = linalg.solve_exact(cols, list(inst.c)) if k else (
                [] if not any(inst.c) else None)
            if sol is None or any(v <= 0 for v in sol):
                continue
            vals = [ZERO] * size
            for idx, v in zip(supp, sol):
                vals[idx] = v
            key = tuple(vals)
            if key not in seen:
                seen.add(key)
                yield SolutionVector(inst.m, inst.n, key)


def brute_force_optimum(inst: OhcpInstance) -> Fraction:
    return min(inst.objective(z) for z in brute_force_vertices(inst))


# --------------------------------------------------------------------------
# Vertices of the projection onto X and their lifts


def projection_vertex_coefficients(B: Sequence[Sequence[int]], c: Sequence,
                                   budget: Optional[int] = None) -> list[tuple[Fraction, ...]]:
    """p-coefficient vectors of the vertices of P restricted to X.

    A point with p-coefficients ``x`` lies in the projection iff
    ``W x = W c`` for a basis ``W`` of the left null space of ``B``; it is
    a vertex iff the columns of ``W`` on supp(x) are independent.
    """
    return _projection_vertices_all(B, [list(c)], budget)[0]


def _projection_vertices_all(B: Sequence[Sequence[int]], inputs: list[list],
                             budget: Optional[int] = None) -> list[list[tuple[Fraction, ...]]]:
    """Projection vertices for several integral inputs sharing one boundary matrix.

    Every r-subset S of rows with ``W_S`` nonsingular (r = dim of the left
    null space) yields one candidate per input, ``x_S = W_S^{-1} W c``.
    Smaller supports show up through several S and are deduplicated.
    """
    m = len(B)
    W = linalg.kernel_basis(linalg.transpose(B), ncols=m) if m else []
    r = len(W)
    if r == 0:
        # B has full row rank, so the projection is all of X and only x = 0 is a vertex
        return [[tuple([ZERO] * m)] for _ in inputs]
    if budget is not None and comb(m, r) > budget:
        raise BudgetExceeded(f"projection enumeration needs {comb(m, r)} bases, budget is {budget}")
    T = [[sum(wr[j] * int(c[j]) for j in range(m) if c[j]) for c in inputs] for wr in W]
    results: list[dict] = [dict() for _ in inputs]
    examined = 0
    for S in combinations(range(m), r):
        examined += 1
        if budget is not None and examined > budget:
            raise BudgetExceeded(f"projection enumeration exceeded {budget} bases")
        sol = linalg.fraction_free_solve([[W[i][j] for j in S] for i in range(r)], T)
        if sol is None:
            continue
        d, Y = sol
        for idx in range(len(inputs)):
            key = tuple((S[t], Fraction(Y[t][idx], d)) for t in range(r) if Y[t][idx])
            results[idx][key] = None
    out = []
    for res in results:
        verts = []
        for key in res:
            x = [ZERO] * m
            for j, v in key:
                x[j] = v
            verts.append(tuple(x))
        out.append(sorted(verts))
    return out


def basic_lifts(inst: OhcpInstance, x: Sequence[Fraction], limit: int = DEFAULT_VERTEX_LIMIT
                ) -> list[SolutionVector]:
    """All vertices of P_A whose p-coefficients equal ``x``."""
    n = inst.n
    rhs = [Fraction(x[j]) - inst.c[j] for j in range(inst.m)]
    if n == 0:
        return [SolutionVector.from_coefficients(x, [])] if not any(rhs) else []
    B = [[Fraction(v) for v in row] for row in inst.B]
    y0 = linalg.solve_exact(B, rhs)
    if y0 is None:
        return []
    K = [[Fraction(v) for v in vec] for vec in linalg.kernel_basis(B)]
    hyperplanes = [([Fraction(int(i == k)) for i in range(n)], ZERO) for k in range(n)]
    ys, _ = _affine_vertices(n, list(y0), K, hyperplanes,
                             lambda y: is_vertex_y(inst, y, x), limit)
    return sorted((SolutionVector.from_coefficients(x, y) for y in ys), key=lambda z: z.values)
