"""The OHCP linear program and the algebra of its solution vectors.

An instance over a boundary matrix ``B`` (m x n) has constraint matrix
``A = [I  -I  -B  B]`` and variables ``z = (x+, x-, y+, y-)`` of length
``2(m+n)``.  The objective is ``(w, w, 0, 0) . z``.  Feasibility says the
net p-chain ``x+ - x-`` equals ``c + B (y+ - y-)``.

Entry ``i`` and its *opposite* entry are the two coordinates that carry
the same simplex with opposite sign.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from . import linalg
from .complex import Chain, SimplicialComplex, boundary_matrix

ZERO = Fraction(0)
ONE = Fraction(1)


# --------------------------------------------------------------------------
# Instances


@dataclass(frozen=True)
class OhcpInstance:
    """One OHCP LP: boundary matrix ``B``, integral input ``c``, weights ``w``."""

    B: tuple[tuple[int, ...], ...]
    c: tuple[Fraction, ...]
    w: tuple[Fraction, ...]
    p: Optional[int] = None
    complex: Optional[SimplicialComplex] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        m = len(self.c)
        if len(self.B) != m:
            raise ValueError(f"input chain has length {m}, boundary matrix has {len(self.B)} rows")
        if len(self.w) != m:
            raise ValueError(f"weight vector has length {len(self.w)}, expected {m}")
        if any(v < 0 for v in self.w):
            raise ValueError("weights must be nonnegative")
        if any(Fraction(v).denominator != 1 for v in self.c):
            raise ValueError("input chain must be integral")

    @property
    def m(self) -> int:
        return len(self.c)

    @property
    def n(self) -> int:
        return len(self.B[0]) if self.B else 0

    @property
    def size(self) -> int:
        """Number of LP columns, 2(m+n)."""
        return 2 * (self.m + self.n)

    @cached_property
    def A(self) -> list[list[int]]:
        m, n = self.m, self.n
        rows = []
        for j in range(m):
            row = [0] * (2 * (m + n))
            row[j] = 1
            row[m + j] = -1
            for k in range(n):
                b = self.B[j][k]
                if b:
                    row[2 * m + k] = -b
                    row[2 * m + n + k] = b
            rows.append(row)
        return rows

    @property
    def f(self) -> tuple[Fraction, ...]:
        return self.w + self.w + (ZERO,) * (2 * self.n)

    @cached_property
    def kernel(self) -> list[list[int]]:
        """Primitive integral basis of Ker(A) from generic elimination."""
        return linalg.kernel_basis(self.A)

    @cached_property
    def left_null(self) -> list[list[int]]:
        """Primitive integral basis of {w : w^T B = 0}, one vector per row."""
        return linalg.kernel_basis(linalg.transpose(self.B), ncols=self.m) if self.m else []

    def with_input(self, c: Sequence) -> "OhcpInstance":
        other = OhcpInstance(self.B, tuple(Fraction(v) for v in c), self.w, self.p, self.complex)
        # cached data that depends only on B carries over
        for key in ("A", "kernel", "left_null"):
            if key in self.__dict__:
                other.__dict__[key] = self.__dict__[key]
        return other

    def elementary(self, i: int, sign: int = 1) -> "OhcpInstance":
        """The instance with input chain ``sign * e_i`` (sign is +1 or -1)."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        c = [0] * self.m
        c[i] = sign
        return self.with_input(c)

    def objective(self, z: "SolutionVector") -> Fraction:
        return sum((fi * zi for fi, zi in zip(self.f, z.values)), ZERO)

    def residual(self, z: "SolutionVector") -> list[Fraction]:
        return [lhs - ci for lhs, ci in zip(linalg.matvec(self.A, z.values), self.c)]

    def satisfies_equations(self, z: "SolutionVector") -> bool:
        return z.m == self.m and z.n == self.n and not any(self.residual(z))

    def is_feasible(self, z: "SolutionVector") -> bool:
        return self.satisfies_equations(z) and z.is_nonnegative()


def instance_from_matrix(B: Sequence[Sequence[int]], c: Sequence, w: Optional[Sequence] = None,
                         p: Optional[int] = None, complex: Optional[SimplicialComplex] = None
                         ) -> OhcpInstance:
    Bt = tuple(tuple(int(v) for v in row) for row in B)
    for row in Bt:
        if any(v not in (-1, 0, 1) for v in row):
            raise ValueError("boundary matrix entries must lie in {0, +1, -1}")
    m = len(Bt)
    if len(c) != m:
        raise ValueError(f"input chain has length {len(c)}, expected {m}")
    wt = tuple(Fraction(v) for v in (w if w is not None else [1] * m))
    return OhcpInstance(Bt, tuple(Fraction(v) for v in c), wt, p, complex)


def formulate(K: SimplicialComplex, p: int, c, w: Optional[Sequence] = None) -> OhcpInstance:
    """Build the OHCP LP for p-chain ``c`` on ``K`` (``c`` a Chain or a dense vector)."""
    B = boundary_matrix(K, p + 1).dense()
    m = K.count(p)
    if isinstance(c, Chain):
        if c.dimension != p:
            raise ValueError(f"input is a {c.dimension}-chain, expected a {p}-chain")
        c = c.to_vector(m)
    if len(c) != m:
        raise ValueError(f"input chain has length {len(c)}, expected {m}")
    return instance_from_matrix(B, c, w, p, K)


# --------------------------------------------------------------------------
# Solution vectors


@dataclass(frozen=True)
class SolutionVector:
    """A point of R^{2(m+n)} laid out as (x+, x-, y+, y-)."""

    m: int
    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != 2 * (self.m + self.n):
            raise ValueError(f"solution vector has length {len(vals)}, expected {2 * (self.m + self.n)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, m: int, n: int) -> "SolutionVector":
        return cls(m, n, (ZERO,) * (2 * (m + n)))

    @classmethod
    def from_coefficients(cls, x: Sequence, y: Sequence) -> "SolutionVector":
        """Canonical nonnegative concise vector with the given p- and q-coefficients."""
        m, n = len(x), len(y)
        vals = [ZERO] * (2 * (m + n))
        for j, v in enumerate(x):
            v = Fraction(v)
            vals[j if v > 0 else m + j] = abs(v)
        for k, v in enumerate(y):
            v = Fraction(v)
            vals[2 * m + k if v > 0 else 2 * m + n + k] = abs(v)
        return cls(m, n, tuple(vals))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __add__(self, other: "SolutionVector") -> "SolutionVector":
        self._check(other)
        return SolutionVector(self.m, self.n, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "SolutionVector") -> "SolutionVector":
        self._check(other)
        return SolutionVector(self.m, self.n, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "SolutionVector":
        return self.scaled(-1)

    def scaled(self, alpha) -> "SolutionVector":
        a = Fraction(alpha)
        return SolutionVector(self.m, self.n, tuple(a * v for v in self.values))

    def _check(self, other: "SolutionVector") -> None:
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("solution vectors belong to different instances")

    # block accessors
    @property
    def x_plus(self) -> tuple[Fraction, ...]:
        return self.values[: self.m]

    @property
    def x_minus(self) -> tuple[Fraction, ...]:
        return self.values[self.m: 2 * self.m]

    @property
    def y_plus(self) -> tuple[Fraction, ...]:
        return self.values[2 * self.m: 2 * self.m + self.n]

    @property
    def y_minus(self) -> tuple[Fraction, ...]:
        return self.values[2 * self.m + self.n:]

    def opposite(self, i: int) -> int:
        return opposite_index(self.m, self.n, i)

    def is_x_coordinate(self, i: int) -> bool:
        return i < 2 * self.m

    @property
    def p_coefficients(self) -> tuple[Fraction, ...]:
        return tuple(a - b for a, b in zip(self.x_plus, self.x_minus))

    @property
    def q_coefficients(self) -> tuple[Fraction, ...]:
        return tuple(a - b for a, b in zip(self.y_plus, self.y_minus))

    @property
    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v != 0]

    def is_zero(self) -> bool:
        return not any(self.values)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)

    def equivalent(self, other: "SolutionVector") -> bool:
        """Same p- and q-coefficients."""
        return (self.p_coefficients == other.p_coefficients
                and self.q_coefficients == other.q_coefficients)


def opposite_index(m: int, n: int, i: int) -> int:
    if i < m:
        return i + m
    if i < 2 * m:
        return i - m
    if i < 2 * m + n:
        return i + n
    if i < 2 * (m + n):
        return i - n
    raise IndexError(i)


def _pairs(m: int, n: int):
    for j in range(m):
        yield j, m + j
    for k in range(n):
        yield 2 * m + k, 2 * m + n + k


def identity_solution(inst: OhcpInstance) -> SolutionVector:
    """The concise feasible vector with every y-coordinate zero."""
    return SolutionVector.from_coefficients(inst.c, [0] * inst.n)


def is_concise(z: SolutionVector) -> bool:
    return all(z[a] == 0 or z[b] == 0 for a, b in _pairs(z.m, z.n))


def canonicalize_concise(z: SolutionVector) -> SolutionVector:
    """The unique nonnegative concise vector equivalent to ``z``."""
    vals = list(z.values)
    for a, b in _pairs(z.m, z.n):
        d = vals[a] - vals[b]
        vals[a], vals[b] = (d, ZERO) if d > 0 else (ZERO, -d)
    return SolutionVector(z.m, z.n, tuple(vals))


def is_linearly_concise(vectors: Sequence[SolutionVector]) -> bool:
    """Every linear combination of ``vectors`` is concise.

    A generic combination is nonzero on the union of the supports, so the
    set is linearly concise exactly when no opposite pair meets that union
    twice.
    """
    if not vectors:
        return True
    m, n = vectors[0].m, vectors[0].n
    used = set()
    for v in vectors:
        used.update(v.support)
    return all(not (a in used and b in used) for a, b in _pairs(m, n))


# --------------------------------------------------------------------------
# Kernel basis N and basic-solution tests


@dataclass(frozen=True)
class KernelBasisN:
    """Structured basis of Ker(A), one column per generator.

    Columns come in three blocks: the m opposite x-pairs, the n opposite
    y-pairs, and for each q-simplex k the pair (B_k in x+, e_k in y+).
    """

    m: int
    n: int
    matrix: tuple[tuple[int, ...], ...] = field(repr=False)

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.matrix]

    @property
    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.m + 2 * self.n)]


def kernel_basis_N(inst: OhcpInstance) -> KernelBasisN:
    m, n = inst.m, inst.n
    size = 2 * (m + n)
    cols = []
    for i in range(m):
        v = [0] * size
        v[i] = v[m + i] = 1
        cols.append(v)
    for k in range(n):
        v = [0] * size
        v[2 * m + k] = v[2 * m + n + k] = 1
        cols.append(v)
    for k in range(n):
        v = [0] * size
        for j in range(m):
            v[j] = inst.B[j][k]
        v[2 * m + k] = 1
        cols.append(v)
    return KernelBasisN(m, n, tuple(map(tuple, linalg.transpose(cols))))


def _require_equations(inst: OhcpInstance, z: SolutionVector) -> None:
    if (z.m, z.n) != (inst.m, inst.n):
        raise ValueError("solution vector does not match the instance dimensions")
    if any(inst.residual(z)):
        raise ValueError("vector does not satisfy A z = c")


def is_basic_solution(inst: OhcpInstance, z: SolutionVector) -> bool:
    """Columns of A on the support of ``z`` are linearly independent."""
    _require_equations(inst, z)
    supp = z.support
    if not supp:
        return True
    cols = linalg.submatrix(inst.A, range(inst.m), supp)
    return linalg.rank(cols) == len(supp)


def is_basic_by_kernel(inst: OhcpInstance, z: SolutionVector,
                       basis: Optional[Sequence[Sequence[int]]] = None) -> bool:
    """Kernel-witness test: every nonzero kernel element is active somewhere z vanishes.

    ``basis`` lists kernel generators (defaults to a basis computed by
    elimination on A).  A nonzero kernel element vanishing on all zero
    coordinates of ``z`` exists iff the generators restricted to those
    coordinates have rank below the kernel dimension.
    """
    _require_equations(inst, z)
    gens = [list(v) for v in (basis if basis is not None else inst.kernel)]
    if not gens:
        return True
    zeros = [i for i, v in enumerate(z.values) if v == 0]
    if not zeros:
        return False
    restricted = [[g[i] for g in gens] for i in zeros]
    return linalg.rank(restricted) == len(gens)


def kernel_witness(inst: OhcpInstance, z: SolutionVector) -> Optional[SolutionVector]:
    """A nonzero element of Ker(A) supported inside supp(z), or None."""
    supp = z.support
    if not supp:
        return None
    local = linalg.kernel_basis(linalg.submatrix(inst.A, range(inst.m), supp), ncols=len(supp))
    if not local:
        return None
    vals = [ZERO] * inst.size
    for idx, v in zip(supp, local[0]):
        vals[idx] = Fraction(v)
    return SolutionVector(inst.m, inst.n, tuple(vals))


# --------------------------------------------------------------------------
# Kernel decompositions


@dataclass(frozen=True)
class KernelDecomposition:
    zC: SolutionVector
    zD: SolutionVector
    z1: SolutionVector


def decompose_against_basic(inst: OhcpInstance, z0: SolutionVector, zK: SolutionVector,
                            max_rounds: Optional[int] = None) -> Optional[KernelDecomposition]:
    """Split ``zK`` into ``zC + zD`` so that ``z0 + zC`` is basic.

    Returns None when ``z0 + zK`` is already basic.  Each round takes a
    kernel element supported in the current point and removes the
    y-coordinate with the smallest ratio, so at most 2n rounds run.
    """
    _require_equations(inst, z0)
    if any(linalg.matvec(inst.A, zK.values)):
        raise ValueError("zK is not in the kernel of A")
    if not is_basic_solution(inst, z0):
        raise ValueError("z0 is not a basic solution")
    if not is_linearly_concise([z0, zK]):
        raise ValueError("{z0, zK} is not linearly concise")
    z1 = z0 + zK
    if is_basic_solution(inst, z1):
        return None
    zD = SolutionVector.zero(inst.m, inst.n)
    ycoords = range(2 * inst.m, inst.size)
    rounds = max_rounds if max_rounds is not None else 2 * inst.n + 1
    for _ in range(rounds):
        zN = kernel_witness(inst, z1)
        if zN is None:
            return KernelDecomposition(zC=zK - zD, zD=zD, z1=z1)
        ratios = [(abs(z1[j] / zN[j]), j) for j in ycoords if zN[j] != 0]
        if not ratios:
            raise ValueError("kernel witness has no y-coordinate; input is not concise")
        _, j = min(ratios)
        alpha = z1[j] / zN[j]
        step = zN.scaled(alpha)
        zD = zD + step
        z1 = z1 - step
    raise RuntimeError("kernel decomposition did not terminate")


def decompose_into_elementary(inst: OhcpInstance, z: SolutionVector) -> list[list[Fraction]]:
    """Matrix Z (2(m+n) x m) whose column j solves the elementary instance e_j, with Z c = z.

    Columns start as the identity solutions of the elementary instances
    (placed on the same side as the identity solution of ``inst``) and
    absorb kernel fragments of ``z - z^I`` one coordinate at a time.
    """
    if not is_basic_solution(inst, z):
        raise ValueError("z is not a basic solution")
    zI = identity_solution(inst)
    if not is_linearly_concise([z, zI]):
        raise ValueError("{z, identity} is not linearly concise")
    m, n = inst.m, inst.n
    cols: list[SolutionVector] = []
    for j in range(m):
        vals = [ZERO] * inst.size
        if inst.c[j] >= 0:
            vals[j] = ONE
        else:
            vals[m + j] = -ONE
        cols.append(SolutionVector(m, n, tuple(vals)))
    zK = z - zI
    z0 = zI
    used: set[int] = set()
    while not zK.is_zero():
        # A fragment peeled onto one column can also move x-coordinates of
        # other columns, so a coordinate cancelled in z need not be
        # cancelled in its own elementary instance.  Such a candidate makes
        # no progress (z^C = 0) and the next one is tried instead.  When
        # every candidate stalls, the direct construction below takes over.
        candidates = [i for i in range(2 * m) if z0[i] != 0 and z[i] == 0 and i not in used]
        if not candidates:
            raise RuntimeError("no cancelled x-coordinate; z is not basic")
        for i in candidates:
            j = i % m
            cj = inst.c[j]
            if cj == 0:
                raise RuntimeError("cancelled coordinate has zero input coefficient")
            sub = inst.with_input([cj if r == j else 0 for r in range(m)])
            dec = decompose_against_basic(sub, cols[j].scaled(cj), zK)
            if dec is None or not dec.zC.is_zero():
                break
        else:
            return _elementary_by_square_system(inst, z, zI)
        used.add(i)
        if dec is None:
            cols[j] = cols[j] + zK.scaled(1 / cj)
            zK = SolutionVector.zero(m, n)
            break
        cols[j] = cols[j] + dec.zC.scaled(1 / cj)
        zK = dec.zD
        z0 = z0 + dec.zC
    Z = [[cols[j][r] for j in range(m)] for r in range(inst.size)]
    if linalg.matvec(Z, inst.c) != list(z.values):
        raise RuntimeError("elementary decomposition failed to reproduce z")
    return Z


def _place_like(refs: Sequence[SolutionVector], p: Sequence, q: Sequence) -> SolutionVector:
    """Lay coefficients into the entries used by the first reference that uses the pair.

    Pairs no reference uses take the first entry.
    """
    m, n = refs[0].m, refs[0].n
    vals = [ZERO] * (2 * (m + n))
    for a, b in _pairs(m, n):
        v = p[a] if a < m else q[a - 2 * m]
        if v == 0:
            continue
        owner = next((r for r in refs if r[a] != 0 or r[b] != 0), None)
        if owner is not None and owner[a] == 0:
            vals[b] = -v
        else:
            vals[a] = v
    return SolutionVector(m, n, tuple(vals))


def _elementary_by_square_system(inst: OhcpInstance, z: SolutionVector,
                                 zI: SolutionVector) -> list[list[Fraction]]:
    """Elementary decomposition read off a nonsingular square block of B.

    With S the y-support of the basic z and R0 its zero rows, B[R0, S] has
    full column rank.  For rows T of R0 with B[T, S] invertible, column j
    in T gets y^j = -B[T, S]^-1 e_j; every other column is the identity.
    Each column vanishes on T, so it is basic, and the columns add up to z.
    """
    m, n = inst.m, inst.n
    x, y = z.p_coefficients, z.q_coefficients
    S = [k for k in range(n) if y[k] != 0]
    T: list[int] = []
    for r in (r for r in range(m) if x[r] == 0):
        if len(T) == len(S):
            break
        if linalg.rank(linalg.submatrix(inst.B, T + [r], S)) == len(T) + 1:
            T.append(r)
    if len(T) != len(S):
        raise RuntimeError("zero rows of z do not pin down its y-support; z is not basic")
    inv = linalg.inverse(linalg.submatrix(inst.B, T, S)) if S else []
    cols = []
    for j in range(m):
        yj = [ZERO] * n
        if j in T:
            t = T.index(j)
            for s_pos, k in enumerate(S):
                yj[k] = -inv[s_pos][t]
        xj = [int(r == j) + v for r, v in enumerate(linalg.matvec(inst.B, yj))]
        cols.append(_place_like([z, zI], xj, yj))
    Z = [[cols[j][r] for j in range(m)] for r in range(inst.size)]
    if linalg.matvec(Z, inst.c) != list(z.values):
        raise RuntimeError("elementary decomposition failed to reproduce z")
    return Z


def strip_integral_y(inst: OhcpInstance, z: SolutionVector) -> tuple[OhcpInstance, SolutionVector]:
    """Move every integral q-coefficient of ``z`` into the input chain.

    Returns the rewritten instance (input ``c + B y_J``) and the solution
    with those y-coordinates cleared; the x-part is unchanged.
    """
    if z.is_integral():
        raise ValueError("solution is integral; nothing to strip")
    _require_equations(inst, z)
    q = z.q_coefficients
    yJ = [v if v != 0 and v.denominator == 1 else ZERO for v in q]
    if not any(yJ):
        return inst, z
    c0 = [ci + sum((inst.B[r][k] * yJ[k] for k in range(inst.n)), ZERO)
          for r, ci in enumerate(inst.c)]
    vals = list(z.values)
    for k, v in enumerate(yJ):
        if v != 0:
            vals[2 * inst.m + k] = ZERO
            vals[2 * inst.m + inst.n + k] = ZERO
    return inst.with_input(c0), SolutionVector(inst.m, inst.n, tuple(vals))


# --------------------------------------------------------------------------
# Projection to the x-coordinates


def project_to_X(z: SolutionVector) -> tuple[Fraction, ...]:
    return z.values[: 2 * z.m]


def projected_kernel_generators(inst: OhcpInstance) -> list[list[int]]:
    """Rows of a 2m x (m+n) matrix whose columns span Ker(A) restricted to X."""
    m, n = inst.m, inst.n
    G = []
    for j in range(m):
        G.append([int(j == i) for i in range(m)] + list(inst.B[j]))
    for j in range(m):
        G.append([int(j == i) for i in range(m)] + [0] * n)
    return G


def in_projection(inst: OhcpInstance, x: Sequence) -> bool:
    """Whether ``x`` (length 2m) is the x-part of a point of P_A."""
    m = inst.m
    if len(x) != 2 * m or any(Fraction(v) < 0 for v in x):
        return False
    diff = [Fraction(x[j]) - Fraction(x[m + j]) - inst.c[j] for j in range(m)]
    return not any(linalg.matvec(inst.left_null, diff))


def is_basic_solution_X(inst: OhcpInstance, x: Sequence) -> bool:
    """No nonzero element of Ker(A) restricted to X is supported inside supp(x).

    The restricted kernel is spanned by the opposite x-pairs and by the
    columns of B placed in the x+ block.  For a concise ``x`` a nonzero
    element inside the support exists iff some nonzero vector of col(B)
    lives on supp(x), i.e. iff the left-null-space basis restricted to
    supp(x) has dependent columns.
    """
    if not in_projection(inst, x):
        raise ValueError("x is not the projection of a feasible point")
    m = inst.m
    if any(x[j] != 0 and x[m + j] != 0 for j in range(m)):
        return False
    supp = [j for j in range(m) if x[j] != 0 or x[m + j] != 0]
    if not supp:
        return True
    W = inst.left_null
    if len(supp) > len(W):
        return False
    return linalg.rank([[row[j] for j in supp] for row in W]) == len(supp)


def is_basic_solution_X_by_generators(inst: OhcpInstance, x: Sequence) -> bool:
    """Same test computed directly from the spanning set of the restricted kernel."""
    if not in_projection(inst, x):
        raise ValueError("x is not the projection of a feasible point")
    G = projected_kernel_generators(inst)
    zeros = [G[i] for i, v in enumerate(x) if v == 0]
    return linalg.rank(G) == linalg.rank(zeros)
