"""Unit nulls, elementary fractional vertices and the neutralization tests.

Throughout, ``cert`` is an MNTU certificate of a boundary matrix ``B``
with square part ``M`` on rows ``Int`` (interior) and columns ``Q``.  The
set of kernel elements whose q-coefficients live on ``Q`` is spanned by
the unit nulls; the element with interior p-coefficients ``p`` has
q-coefficients ``M^{-1} p`` on ``Q``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .complex import SimplicialComplex, boundary_matrix
from .lp import (OhcpInstance, SolutionVector, ZERO, canonicalize_concise, identity_solution,
                 instance_from_matrix, is_basic_solution, is_basic_solution_X, is_concise,
                 project_to_X)
from .simplex import BudgetExceeded, is_vertex_y
from .tu import MntuCertificate, SearchBudgetExceeded, search_mntus

DEFAULT_RADIUS = 2
DEFAULT_BUDGET = 200_000


# --------------------------------------------------------------------------
# Unit nulls and m(z)


def _m_columns(cert: MntuCertificate) -> list[list[int]]:
    """B restricted to the certificate's columns, as rows (m x k)."""
    return linalg.transpose(cert.columns)


def _null_coefficients(cert: MntuCertificate, p_int: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    """(p, q) coefficients of the kernel element with interior p-coefficients ``p_int``.

    The q-part is returned on the certificate's columns only.
    """
    yQ = linalg.solve_exact(cert.matrix, list(p_int))
    if yQ is None:
        raise AssertionError("MNTU matrix is singular")
    BQ = _m_columns(cert)
    p = linalg.matvec(BQ, yQ)
    return [Fraction(v) for v in p], yQ


def _full_q(cert: MntuCertificate, n: int, yQ: Sequence[Fraction]) -> list[Fraction]:
    y = [ZERO] * n
    for j, v in zip(cert.cols, yQ):
        y[j] = v
    return y


@dataclass(frozen=True)
class UnitNull:
    row: int
    vector: SolutionVector

    @property
    def p_coefficients(self) -> tuple[Fraction, ...]:
        return self.vector.p_coefficients

    @property
    def q_coefficients(self) -> tuple[Fraction, ...]:
        return self.vector.q_coefficients


def unit_null(inst: OhcpInstance, cert: MntuCertificate, i: int) -> UnitNull:
    """Kernel element with interior p-coefficients e_i and q-support Q.

    Solves ``M v = 2 e_i`` (integral since det M = +-2) and halves it.
    """
    if i not in cert.rows:
        raise ValueError(f"row {i} is not an interior row of the certificate")
    pos = cert.rows.index(i)
    rhs = [2 if t == pos else 0 for t in range(len(cert.rows))]
    v = linalg.solve_exact(cert.matrix, rhs)
    if v is None or any(abs(x) != 1 for x in v):
        raise AssertionError("twice a unit null must have entries +-1")
    yQ = [x / 2 for x in v]
    p = linalg.matvec(_m_columns(cert), yQ)
    y = _full_q(cert, inst.n, yQ)
    vec = SolutionVector.from_coefficients(p, y)
    if any(linalg.matvec(inst.A, vec.values)):
        raise AssertionError("unit null is not in the kernel")
    for r in cert.rows:
        if vec.p_coefficients[r] != (1 if r == i else 0):
            raise AssertionError("unit null has wrong interior p-coefficients")
    return UnitNull(i, vec)


def _place(reference: SolutionVector, p: Sequence[Fraction], q: Sequence[Fraction],
           zero_rule: str) -> SolutionVector:
    """Lay coefficients out so the result is linearly concise with ``reference``.

    Where the reference vanishes on both entries of a pair, ``zero_rule``
    decides: ``"nonpositive"`` keeps both entries <= 0, ``"nonnegative"``
    keeps both >= 0.
    """
    m, n = reference.m, reference.n
    vals = [ZERO] * (2 * (m + n))
    pairs = [(j, m + j, p[j]) for j in range(m)] + \
            [(2 * m + k, 2 * m + n + k, q[k]) for k in range(n)]
    for a, b, v in pairs:
        if v == 0:
            continue
        if reference[a] != 0:
            vals[a] = v
        elif reference[b] != 0:
            vals[b] = -v
        elif zero_rule == "nonpositive":
            if v > 0:
                vals[b] = -v
            else:
                vals[a] = v
        else:
            if v > 0:
                vals[a] = v
            else:
                vals[b] = -v
    return SolutionVector(m, n, tuple(vals))


def m_of(z: SolutionVector, cert: MntuCertificate) -> SolutionVector:
    """The element of the unit-null span matching z's interior p-coefficients.

    Placed linearly concise with z; entries where z vanishes are <= 0.
    """
    if not is_concise(z):
        raise ValueError("m(z) needs a concise vector")
    zp = z.p_coefficients
    p, yQ = _null_coefficients(cert, [zp[r] for r in cert.rows])
    return _place(z, p, _full_q(cert, z.n, yQ), "nonpositive")


def elementary_fractional_vertex(inst: OhcpInstance, cert: MntuCertificate, i: int,
                                 sign: int = 1) -> SolutionVector:
    """z^i = z^I - m(z^I) for the elementary input ``sign * e_i``."""
    if i not in cert.rows:
        raise ValueError(f"row {i} is not an interior row of the certificate")
    elem = inst.elementary(i, sign)
    zI = identity_solution(elem)
    z = zI - m_of(zI, cert)
    if not z.is_nonnegative() or not is_concise(z):
        raise AssertionError("elementary fractional vertex is not a canonical point")
    if not is_basic_solution(elem, z):
        raise AssertionError("elementary fractional vertex is not basic")
    pc, qc = z.p_coefficients, z.q_coefficients
    if any(pc[r] for r in cert.rows):
        raise AssertionError("interior p-coefficients must vanish")
    if any(v for k, v in enumerate(qc) if k not in cert.cols):
        raise AssertionError("q-support escapes the certificate columns")
    return z


# --------------------------------------------------------------------------
# Neutralizing chains


@dataclass(frozen=True)
class NeutralizingChain:
    row: int
    k: SolutionVector
    difference: SolutionVector      # k - m(k)
    interior_sum: int
    y: tuple[int, ...]


def find_neutralizing_chain(inst: OhcpInstance, cert: MntuCertificate, i: int,
                            radius: int = DEFAULT_RADIUS) -> Optional[NeutralizingChain]:
    """First integral kernel element meeting the neutralizing conditions, or None.

    An integral kernel element is fixed by its q-coefficients y.  Both
    ``k - m(k)`` (p-part ``B y - B_Q M^{-1} (B y)_Int``) and the parity of
    the interior p-coefficient sum depend only on y outside Q, so y is set
    to zero on Q and the remaining coordinates run over ``[-radius, radius]``
    in the order 0, 1, -1, 2, -2, ...  Partial assignments are pruned once
    a row's value is final.
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    if i not in cert.rows:
        raise ValueError(f"row {i} is not an interior row of the certificate")
    B = inst.B
    m, n = inst.m, inst.n
    Q = set(cert.cols)
    R = [k for k in range(n) if k not in Q]
    zi = elementary_fractional_vertex(inst, cert, i, 1)
    bound = [abs(v) for v in zi.p_coefficients]
    # D_R = B_R - B_Q M^{-1} B_{Int,R}
    X = linalg.matmul(linalg.inverse(cert.matrix), [[B[r][k] for k in R] for r in cert.rows])
    corr = linalg.matmul(_m_columns(cert), X) if R else [[] for _ in range(m)]
    D = [[B[r][k] - corr[r][t] for t, k in enumerate(R)] for r in range(m)]
    parity = [sum(B[r][k] for r in cert.rows) % 2 for k in R]
    last_col = []
    for r in range(m):
        nz = [t for t in range(len(R)) if D[r][t] != 0]
        last_col.append(nz[-1] if nz else -1)
    done_at: dict[int, list[int]] = {}
    for r in range(m):
        done_at.setdefault(last_col[r], []).append(r)
    order = [0]
    for v in range(1, radius + 1):
        order += [v, -v]
    values = [0] * len(R)
    partial = [ZERO] * m

    def dfs(t: int) -> Optional[list[int]]:
        if t == len(R):
            if sum(values[s] * parity[s] for s in range(len(R))) % 2 == 1 and any(partial):
                return list(values)
            return None
        for v in order:
            values[t] = v
            if v:
                for r in range(m):
                    if D[r][t]:
                        partial[r] += v * D[r][t]
            ok = all(abs(partial[r]) <= bound[r] for r in done_at.get(t, []))
            found = dfs(t + 1) if ok else None
            if v:
                for r in range(m):
                    if D[r][t]:
                        partial[r] -= v * D[r][t]
            if found is not None:
                return found
        values[t] = 0
        return None

    yR = dfs(0)
    if yR is None:
        return None
    y = [0] * n
    for k, v in zip(R, yR):
        y[k] = v
    x = linalg.matvec(B, y)
    kvec = SolutionVector.from_coefficients(x, y)
    mk = m_of(kvec, cert)
    diff = kvec - mk
    interior_sum = sum(x[r] for r in cert.rows)
    chain = NeutralizingChain(i, kvec, diff, int(interior_sum), tuple(y))
    _check_neutralizing(inst, cert, zi, chain)
    return chain


def _check_neutralizing(inst, cert, zi: SolutionVector, chain: NeutralizingChain) -> None:
    if not chain.k.is_integral() or any(linalg.matvec(inst.A, chain.k.values)):
        raise AssertionError("neutralizing chain must be an integral kernel element")
    if chain.interior_sum % 2 != 1:
        raise AssertionError("interior coefficient sum must be odd")
    dp = chain.difference.p_coefficients
    if not any(dp):
        raise AssertionError("k - m(k) vanishes on X")
    zp = zi.p_coefficients
    if any(abs(a) > abs(b) for a, b in zip(dp, zp)):
        raise AssertionError("k - m(k) is not dominated by z^i")


def neutralized_vertex_decomposition(z_i: SolutionVector, chain: NeutralizingChain
                                     ) -> tuple[SolutionVector, SolutionVector]:
    """Two integral points whose x-parts average to the x-part of ``z_i``."""
    dp = chain.difference.p_coefficients
    dq = chain.difference.q_coefficients
    zp = z_i.p_coefficients
    if any(abs(a) > abs(b) for a, b in zip(dp, zp)):
        raise ValueError("certificate does not match the vertex")
    d = _place(z_i, dp, dq, "nonnegative")
    z1 = canonicalize_concise(z_i + d)
    z2 = canonicalize_concise(z_i - d)
    if not (z1.is_integral() and z2.is_integral()):
        raise ValueError("certificate does not match the vertex: endpoints are not integral")
    xi = project_to_X(z_i)
    mid = tuple((a + b) / 2 for a, b in zip(project_to_X(z1), project_to_X(z2)))
    if mid != xi:
        raise AssertionError("midpoint identity failed")
    return z1, z2


# --------------------------------------------------------------------------
# Decision procedures


@dataclass(frozen=True)
class Cell:
    cert: int          # index into the report's certificate list
    row: int
    sign: int
    verdict: str       # "neutralized" | "not-neutralized" | "unknown"
    chain: Optional[NeutralizingChain] = None
    witness: Optional[SolutionVector] = None


@dataclass(frozen=True)
class Witness:
    row: int
    sign: int
    vertex: SolutionVector


@dataclass(frozen=True)
class NeutralizationReport:
    procedure: str
    q: int
    verdict: str       # "yes" | "yes (vacuous)" | "no" | "unknown"
    certificates: tuple[MntuCertificate, ...]
    cells: tuple[Cell, ...]
    witness: Optional[Witness] = None
    radius: Optional[int] = None
    budget: Optional[int] = None
    work: int = 0
    notes: tuple[str, ...] = field(default=())

    @property
    def definite(self) -> bool:
        return self.verdict in ("yes", "yes (vacuous)", "no")


def _boundary(K: SimplicialComplex, q: int) -> list[list[int]]:
    if not 1 <= q <= K.dimension:
        raise ValueError(f"no boundary matrix in dimension {q}")
    return boundary_matrix(K, q).dense()


def _mntus_or_none(B, budget):
    try:
        res = search_mntus(B, budget=max(budget, 1) * 10)
    except SearchBudgetExceeded:
        return None
    return list(res.certificates)


class _Lifter:
    """Basic lifts of p-coefficient vectors for one boundary matrix."""

    def __init__(self, B):
        self.B = [[Fraction(v) for v in row] for row in B]
        self.m = len(B)
        self.n = len(B[0]) if B else 0
        _, piv = linalg.rref(linalg.transpose(self.B)) if self.n else (None, [])
        self.rows = piv
        self.inv = linalg.inverse([self.B[r] for r in piv]) if len(piv) == self.n and self.n else None
        self.kernel = [[Fraction(v) for v in vec] for vec in linalg.kernel_basis(self.B)] if self.n else []

    def lifts(self, inst: OhcpInstance, x: Sequence[Fraction], limit: int) -> list[SolutionVector]:
        from .simplex import basic_lifts
        if self.inv is not None:
            rhs = [x[r] - inst.c[r] for r in self.rows]
            y = linalg.matvec(self.inv, rhs)
            if not is_vertex_y(inst, y, x):
                return []
            return [SolutionVector.from_coefficients(x, y)]
        return basic_lifts(inst, x, limit)


def decide_by_projection(K: SimplicialComplex, q: int, budget: int = DEFAULT_BUDGET) -> NeutralizationReport:
    """Decide neutralization by looking for a nonintegral vertex whose x-part is a vertex.

    The elementary instances ``+-e_i`` cover all integral inputs.  Each
    certificate's own fractional vertex is tried first; if none is a vertex
    in projection, every vertex of every projected elementary polytope is
    lifted and checked for integrality.
    """
    return decide_by_projection_matrix(_boundary(K, q), q, budget)


def decide_by_projection_matrix(B, q: int, budget: int = DEFAULT_BUDGET) -> NeutralizationReport:
    from .simplex import _projection_vertices_all
    m = len(B)
    certs = _mntus_or_none(B, budget)
    if certs is None:
        return NeutralizationReport("projection", q, "unknown", (), (), budget=budget,
                                    notes=("certificate search budget exhausted",))
    if not certs:
        return NeutralizationReport("projection", q, "yes (vacuous)", (), (), budget=budget,
                                    notes=("boundary matrix is totally unimodular",))
    base = instance_from_matrix(B, [0] * m)
    cells = []
    witness = None
    for ci, cert in enumerate(certs):
        for r in cert.rows:
            for sign in (1, -1):
                zi = elementary_fractional_vertex(base, cert, r, sign)
                elem = base.elementary(r, sign)
                if is_basic_solution_X(elem, project_to_X(zi)):
                    cells.append(Cell(ci, r, sign, "not-neutralized", witness=zi))
                    if witness is None:
                        witness = Witness(r, sign, zi)
                else:
                    cells.append(Cell(ci, r, sign, "unknown"))
    if witness is not None:
        return NeutralizationReport("projection", q, "no", tuple(certs), tuple(cells), witness,
                                    budget=budget, work=len(cells))
    try:
        # vertices for -e_i are the negations of those for +e_i
        positive = _projection_vertices_all(
            B, [[1 if t == r else 0 for t in range(m)] for r in range(m)], budget)
    except BudgetExceeded:
        return NeutralizationReport("projection", q, "unknown", tuple(certs), tuple(cells),
                                    budget=budget, notes=("projection enumeration budget exhausted",))
    lifter = _Lifter(B)
    work = 0
    for r in range(m):
        for sign in (1, -1):
            elem = base.elementary(r, sign)
            for xp in positive[r]:
                x = xp if sign == 1 else tuple(-v for v in xp)
                for z in lifter.lifts(elem, x, budget):
                    work += 1
                    if work > budget:
                        return NeutralizationReport(
                            "projection", q, "unknown", tuple(certs), tuple(cells),
                            budget=budget, work=work, notes=("lift enumeration budget exhausted",))
                    if not z.is_integral():
                        return NeutralizationReport("projection", q, "no", tuple(certs), tuple(cells),
                                                    Witness(r, sign, z), budget=budget, work=work)
    cells = [Cell(c.cert, c.row, c.sign, "neutralized") for c in cells]
    return NeutralizationReport("projection", q, "yes", tuple(certs), tuple(cells), None,
                                budget=budget, work=work)


def decide_by_definition(K: SimplicialComplex, q: int, radius: int = DEFAULT_RADIUS,
                         budget: int = DEFAULT_BUDGET) -> NeutralizationReport:
    """Search for a neutralizing chain for every certificate and interior row.

    Only positive answers are definite: a search that runs out of radius
    yields "unknown".
    """
    return decide_by_definition_matrix(_boundary(K, q), q, radius, budget)


def decide_by_definition_matrix(B, q: int, radius: int = DEFAULT_RADIUS,
                                budget: int = DEFAULT_BUDGET) -> NeutralizationReport:
    m = len(B)
    certs = _mntus_or_none(B, budget)
    if certs is None:
        return NeutralizationReport("definition", q, "unknown", (), (), radius=radius, budget=budget,
                                    notes=("certificate search budget exhausted",))
    if not certs:
        return NeutralizationReport("definition", q, "yes (vacuous)", (), (), radius=radius,
                                    budget=budget, notes=("boundary matrix is totally unimodular",))
    base = instance_from_matrix(B, [0] * m)
    cells = []
    for ci, cert in enumerate(certs):
        for r in cert.rows:
            chain = find_neutralizing_chain(base, cert, r, radius)
            verdict = "neutralized" if chain is not None else "unknown"
            for sign in (1, -1):
                cells.append(Cell(ci, r, sign, verdict, chain=chain))
    verdict = "yes" if all(c.verdict == "neutralized" for c in cells) else "unknown"
    return NeutralizationReport("definition", q, verdict, tuple(certs), tuple(cells),
                                radius=radius, budget=budget, work=len(cells))


def h1_trivial_shortcut(K: SimplicialComplex) -> Optional[str]:
    """"neutralized" when H1(K; Z) = 0 for a 2-complex, otherwise no conclusion."""
    if K.dimension != 2:
        raise ValueError(f"the shortcut needs a 2-complex, got dimension {K.dimension}")
    return "neutralized" if linalg.homology(K, 1).is_trivial else None
