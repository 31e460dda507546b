"""Total unimodularity of boundary matrices.

Minimal violations (MNTU submatrices) are found as induced b-odd circuits
of the signed bipartite row/column graph.  For boundary matrices of
triangles (q = 2) every MNTU submatrix has exactly two nonzeros per row
and column, so the induced simple cycles are the whole story.  For higher
q a column may meet a submatrix in four rows, and a budgeted search over
Eulerian column/row subsets covers that case.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from . import linalg
from .complex import SimplicialComplex, boundary_matrix

DEFAULT_BUDGET = 2_000_000


class SearchBudgetExceeded(RuntimeError):
    pass


# --------------------------------------------------------------------------
# Bipartite graph


@dataclass(frozen=True)
class BipartiteIncidenceGraph:
    """Rows are vertices ``('r', i)``, columns are ``('c', j)``; edges carry +-1."""

    rows: int
    cols: int
    weights: dict = field(repr=False)  # (i, j) -> +-1

    @property
    def edge_count(self) -> int:
        return len(self.weights)

    def row_neighbours(self, i: int) -> list[int]:
        return [j for (r, j) in self.weights if r == i]

    def col_neighbours(self, j: int) -> list[int]:
        return [i for (i, c) in self.weights if c == j]


def bipartite_graph(B: Sequence[Sequence[int]]) -> BipartiteIncidenceGraph:
    weights = {}
    for i, row in enumerate(B):
        for j, v in enumerate(row):
            if v not in (-1, 0, 1):
                raise ValueError(f"entry {v} at ({i}, {j}) is outside {{0, +1, -1}}")
            if v:
                weights[(i, j)] = v
    rows = len(B)
    cols = len(B[0]) if rows else 0
    return BipartiteIncidenceGraph(rows, cols, weights)


# --------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class MntuCertificate:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]
    determinant: int
    circuit: tuple[tuple[str, int], ...]  # alternating ('r', i), ('c', j), ... closed implicitly
    exterior_rows: tuple[int, ...]
    columns: tuple[tuple[int, ...], ...] = field(repr=False, default=())  # full columns of B on cols
    is_cmntus: Optional[bool] = None

    @property
    def interior_rows(self) -> tuple[int, ...]:
        return self.rows

    @property
    def size(self) -> int:
        return len(self.rows)

    def circuit_edges(self) -> list[tuple[int, int]]:
        walk = list(self.circuit) + [self.circuit[0]]
        edges = []
        for a, b in zip(walk, walk[1:]):
            (ka, va), (kb, vb) = a, b
            edges.append((va, vb) if ka == "r" else (vb, va))
        return edges

    def with_cmntus(self, flag: bool) -> "MntuCertificate":
        return MntuCertificate(self.rows, self.cols, self.matrix, self.determinant,
                               self.circuit, self.exterior_rows, self.columns, flag)


def circuit_weight(B: Sequence[Sequence[int]], edges: Sequence[tuple[int, int]]) -> int:
    return sum(B[i][j] for i, j in edges)


def is_b_odd(B, edges) -> bool:
    return circuit_weight(B, edges) % 4 == 2


def _make_certificate(B, rows, cols, circuit) -> MntuCertificate:
    rows = tuple(sorted(rows))
    cols = tuple(sorted(cols))
    M = tuple(tuple(B[i][j] for j in cols) for i in rows)
    det = linalg.determinant(M)
    rowset = set(rows)
    exterior = tuple(i for i in range(len(B)) if i not in rowset and any(B[i][j] for j in cols))
    columns = tuple(tuple(row[j] for row in B) for j in cols)
    return MntuCertificate(rows, cols, M, int(det), tuple(circuit), exterior, columns)


def is_induced_circuit(B, circuit: Sequence[tuple[str, int]]) -> bool:
    """The circuit uses every nonzero entry of B on its row and column sets."""
    rows = {v for k, v in circuit if k == "r"}
    cols = {v for k, v in circuit if k == "c"}
    walk = list(circuit) + [circuit[0]]
    used = set()
    for a, b in zip(walk, walk[1:]):
        e = (a[1], b[1]) if a[0] == "r" else (b[1], a[1])
        if e in used or B[e[0]][e[1]] == 0:
            return False
        used.add(e)
    present = {(i, j) for i in rows for j in cols if B[i][j]}
    return used == present


# --------------------------------------------------------------------------
# Induced cycle search


def induced_cycles(G: BipartiteIncidenceGraph, budget: int = DEFAULT_BUDGET):
    """Yield every chordless simple cycle as a vertex list starting at its least vertex.

    Vertices are ordered rows first, then columns.  Each cycle is produced
    once (the second vertex is smaller than the last).
    """
    adj: dict[tuple[str, int], set] = {}
    for (i, j) in G.weights:
        adj.setdefault(("r", i), set()).add(("c", j))
        adj.setdefault(("c", j), set()).add(("r", i))

    def key(v):
        return (0 if v[0] == "r" else 1, v[1])

    steps = 0
    for s in sorted(adj, key=key):
        ks = key(s)

        def extend(path):
            nonlocal steps
            last = path[-1]
            interior = path[1:-1]
            for u in sorted(adj[last], key=key):
                steps += 1
                if steps > budget:
                    raise SearchBudgetExceeded(f"cycle search exceeded {budget} steps")
                if key(u) <= ks or u in path:
                    continue
                if any(u in adj[v] for v in interior):
                    continue
                if len(path) > 1 and s in adj[u]:
                    if len(path) >= 3 and key(path[1]) < key(u):
                        yield path + [u]
                    continue
                yield from extend(path + [u])
        yield from extend([s])


def _eulerian_circuit(edges: list[tuple[int, int]]) -> list[tuple[str, int]]:
    """Hierholzer walk over row/column vertices, deterministic."""
    adj: dict = {}
    for i, j in sorted(edges):
        adj.setdefault(("r", i), []).append(("c", j))
        adj.setdefault(("c", j), []).append(("r", i))
    for v in adj:
        adj[v].sort(reverse=True)
    used = set()
    start = min(adj)
    stack, walk = [start], []
    while stack:
        v = stack[-1]
        while adj[v] and frozenset((v, adj[v][-1])) in used:
            adj[v].pop()
        if adj[v]:
            u = adj[v].pop()
            used.add(frozenset((v, u)))
            stack.append(u)
        else:
            walk.append(stack.pop())
    walk.pop()
    return walk[::-1]


@dataclass(frozen=True)
class MntuSearch:
    certificates: tuple[MntuCertificate, ...]
    complete: bool


def find_mntus(B: Sequence[Sequence[int]], budget: int = DEFAULT_BUDGET) -> list[MntuCertificate]:
    """All MNTU submatrices of a boundary matrix, CMNTUS flags filled in."""
    return list(search_mntus(B, budget).certificates)


def search_mntus(B: Sequence[Sequence[int]], budget: int = DEFAULT_BUDGET,
                 raise_on_budget: bool = True) -> MntuSearch:
    G = bipartite_graph(B)
    found: dict[tuple, MntuCertificate] = {}
    complete = True
    try:
        for cyc in induced_cycles(G, budget):
            rows = [v for k, v in cyc if k == "r"]
            cols = [v for k, v in cyc if k == "c"]
            walk = cyc + [cyc[0]]
            edges = [(a[1], b[1]) if a[0] == "r" else (b[1], a[1]) for a, b in zip(walk, walk[1:])]
            if not is_b_odd(B, edges):
                continue
            cert = _make_certificate(B, rows, cols, cyc)
            found.setdefault((cert.rows, cert.cols), cert)
        max_col = max((sum(1 for row in B if row[j]) for j in range(G.cols)), default=0)
        if max_col >= 4:
            for cert in _eulerian_subset_search(B, budget, found):
                found.setdefault((cert.rows, cert.cols), cert)
    except SearchBudgetExceeded:
        if raise_on_budget:
            raise
        complete = False
    certs = sorted(found.values(), key=lambda c: (len(c.cols), c.cols, c.rows))
    flagged = tuple(c.with_cmntus(classify_cmntus(c, B, certs)) for c in certs)
    return MntuSearch(flagged, complete)


def _eulerian_subset_search(B, budget, known):
    """MNTU submatrices in which some column has four or more nonzeros.

    Scans column subsets by size; rows are chosen among those meeting the
    columns at least twice, and a candidate must be Eulerian with
    determinant +-2 and contain no smaller violation.
    """
    m = len(B)
    n = len(B[0]) if m else 0
    minimal = [(set(c.rows), set(c.cols)) for c in known.values()]
    steps = 0
    for k in range(2, min(m, n) + 1):
        for cols in combinations(range(n), k):
            cand_rows = [i for i in range(m) if sum(1 for j in cols if B[i][j]) >= 2]
            if len(cand_rows) < k:
                continue
            for rows in combinations(cand_rows, k):
                steps += 1
                if steps > budget:
                    raise SearchBudgetExceeded(f"subset search exceeded {budget} steps")
                if any(sum(1 for j in cols if B[i][j]) % 2 for i in rows):
                    continue
                if any(sum(1 for i in rows if B[i][j]) % 2 or
                       not any(B[i][j] for i in rows) for j in cols):
                    continue
                if any(r <= set(rows) and c <= set(cols) for r, c in minimal):
                    continue
                M = [[B[i][j] for j in cols] for i in rows]
                if abs(linalg.determinant(M)) < 2:
                    continue
                edges = [(i, j) for i in rows for j in cols if B[i][j]]
                if circuit_weight(B, edges) % 4 != 2:
                    continue
                minimal.append((set(rows), set(cols)))
                yield _make_certificate(B, rows, cols, _eulerian_circuit(edges))


def classify_cmntus(cert: MntuCertificate, B, all_certs: Sequence[MntuCertificate]) -> bool:
    """True iff no other MNTUS uses a subset of this one's columns.

    For a columnwise minimal certificate the exterior rows must each meet
    the columns an odd number of times; a violation is reported as an error.
    """
    mine = set(cert.cols)
    for other in all_certs:
        if (other.rows, other.cols) == (cert.rows, cert.cols):
            continue
        if set(other.cols) <= mine:
            return False
    for i in cert.exterior_rows:
        if sum(1 for j in cert.cols if B[i][j]) % 2 == 0:
            raise AssertionError(f"columnwise minimal certificate has even exterior row {i}")
    return True


def exterior_row_counts(cert: MntuCertificate, B) -> dict[int, int]:
    return {i: sum(1 for j in cert.cols if B[i][j]) for i in cert.exterior_rows}


def is_totally_unimodular(B: Sequence[Sequence[int]], size_cap: Optional[int] = None,
                          oracle: bool = False, budget: int = DEFAULT_BUDGET) -> bool:
    """TU test by MNTU search, or by exhaustive determinant scan when ``oracle``."""
    if oracle:
        return not brute_force_mntus(B, size_cap)
    bipartite_graph(B)  # validates entries
    return not find_mntus(B, budget)


def relative_torsion_free(K: SimplicialComplex, p: int) -> bool:
    """No relative torsion in dimension p, which holds iff the (p+1)-boundary matrix is TU."""
    if p + 1 > K.dimension:
        raise ValueError(f"no {p + 1}-simplices in a complex of dimension {K.dimension}")
    return is_totally_unimodular(boundary_matrix(K, p + 1).dense())


# --------------------------------------------------------------------------
# Brute-force oracle


def _int_det(M: list[list[int]]) -> int:
    """Bareiss determinant for small integer matrices."""
    A = [row[:] for row in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            ri, rk = A[i], A[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * A[-1][-1] if n else 1


def brute_force_mntus(B: Sequence[Sequence[int]], size_cap: Optional[int] = None
                      ) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every minimally non-TU square submatrix, by determinant scan.

    Submatrices are scanned by increasing size.  One with a row or column
    holding fewer than two nonzeros cannot be minimally non-TU (expanding
    along it reduces to a smaller minor), so it is skipped.  A submatrix
    with |det| >= 2 is minimal when it contains no violation found earlier.
    """
    m = len(B)
    n = len(B[0]) if m else 0
    cap = min(m, n) if size_cap is None else min(size_cap, m, n)
    found: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for k in range(1, cap + 1):
        for cols in combinations(range(n), k):
            live = [i for i in range(m) if sum(1 for j in cols if B[i][j]) >= 2] if k > 1 \
                else [i for i in range(m) if B[i][cols[0]]]
            for rows in combinations(live, k):
                if k > 1 and any(sum(1 for i in rows if B[i][j]) < 2 for j in cols):
                    continue
                M = [[B[i][j] for j in cols] for i in rows]
                if abs(_int_det(M)) < 2:
                    continue
                rs, cs = set(rows), set(cols)
                if any(set(r) <= rs and set(c) <= cs for r, c in found):
                    continue
                found.append((rows, cols))
    return found


# --------------------------------------------------------------------------
# Orientation-reversing chains


@dataclass(frozen=True)
class OrientationReversingChain:
    simplices: tuple[int, ...]       # q-simplex (column) indices in cyclic order
    shared_faces: tuple[int, ...]    # shared_faces[t] is common to simplices[t] and simplices[t+1]
    entry_sum: int


def extract_orientation_reversing_chain(cert: MntuCertificate, B) -> OrientationReversingChain:
    """Read the circuit as a cyclic chain of q-simplices glued along p-faces."""
    circ = list(cert.circuit)
    if len(circ) < 4 or len(circ) % 2:
        raise ValueError("malformed circuit")
    # rotate so the walk starts at a column vertex
    start = next(t for t, v in enumerate(circ) if v[0] == "c")
    circ = circ[start:] + circ[:start]
    simplices = tuple(v for k, v in circ[0::2])
    faces = tuple(v for k, v in circ[1::2])
    if any(k != "c" for k, _ in circ[0::2]) or any(k != "r" for k, _ in circ[1::2]):
        raise ValueError("circuit does not alternate between columns and rows")
    k = len(simplices)
    used = set()
    total = 0
    for t in range(k):
        tau = faces[t]
        for sigma in (simplices[t], simplices[(t + 1) % k]):
            if B[tau][sigma] == 0:
                raise ValueError(f"row {tau} is not a face of column {sigma}")
            if (tau, sigma) in used:
                raise ValueError("circuit reuses a boundary entry")
            used.add((tau, sigma))
            total += B[tau][sigma]
    if total % 4 != 2:
        raise ValueError("circuit is not b-odd")
    return OrientationReversingChain(simplices, faces, total)
