"""Oriented simplicial complexes, chains and boundary matrices."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence


def permutation_sign(seq: Sequence[int]) -> int:
    """Parity of the permutation sorting ``seq`` (+1 even, -1 odd)."""
    sign = 1
    seen = list(seq)
    for i in range(len(seen)):
        for j in range(i + 1, len(seen)):
            if seen[i] > seen[j]:
                sign = -sign
    return sign


@dataclass(frozen=True, order=True)
class Simplex:
    """Canonical oriented simplex: ascending vertices plus an orientation sign."""

    vertices: tuple[int, ...]
    sign: int = 1

    @classmethod
    def from_vertices(cls, vertices: Iterable[int]) -> "Simplex":
        verts = tuple(int(v) for v in vertices)
        if len(set(verts)) != len(verts):
            raise ValueError(f"repeated vertex in simplex {list(verts)}")
        if any(v < 0 for v in verts):
            raise ValueError(f"negative vertex label in {list(verts)}")
        return cls(tuple(sorted(verts)), permutation_sign(verts))

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    def __str__(self) -> str:
        return "".join(map(str, self.vertices)) if all(v < 10 for v in self.vertices) \
            else "-".join(map(str, self.vertices))


class SimplicialComplex:
    """Finite abstract simplicial complex closed under faces.

    Simplices of each dimension are kept as sorted vertex tuples; the index of
    a simplex is its position in that lexicographic order.
    """

    def __init__(self, maximal_simplices: Iterable[Sequence[int]]):
        tops = []
        for line, verts in enumerate(maximal_simplices, start=1):
            verts = tuple(int(v) for v in verts)
            if not verts:
                continue
            if len(set(verts)) != len(verts):
                raise ValueError(f"simplex {line}: repeated vertex in {list(verts)}")
            if any(v < 0 for v in verts):
                raise ValueError(f"simplex {line}: negative vertex label in {list(verts)}")
            tops.append(tuple(sorted(verts)))
        faces: dict[int, set[tuple[int, ...]]] = {}
        for s in tops:
            for k in range(1, len(s) + 1):
                faces.setdefault(k - 1, set()).update(combinations(s, k))
        self._simplices: tuple[tuple[tuple[int, ...], ...], ...] = tuple(
            tuple(sorted(faces.get(d, ()))) for d in range(len(faces))
        )
        self._index = tuple({s: i for i, s in enumerate(level)} for level in self._simplices)
        self._maximal = tuple(sorted(set(tops)))

    @property
    def dimension(self) -> int:
        return len(self._simplices) - 1

    @property
    def maximal_simplices(self) -> tuple[tuple[int, ...], ...]:
        return self._maximal

    def simplices(self, d: int) -> tuple[tuple[int, ...], ...]:
        if 0 <= d < len(self._simplices):
            return self._simplices[d]
        return ()

    def count(self, d: int) -> int:
        return len(self.simplices(d))

    def index(self, vertices: Sequence[int]) -> int:
        key = tuple(sorted(vertices))
        d = len(key) - 1
        try:
            return self._index[d][key]
        except (IndexError, KeyError):
            raise KeyError(f"simplex {list(vertices)} is not in the complex") from None

    def __contains__(self, vertices) -> bool:
        key = tuple(sorted(vertices))
        d = len(key) - 1
        return 0 <= d < len(self._index) and key in self._index[d]

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self._simplices)

    def __repr__(self) -> str:
        return f"SimplicialComplex(f_vector={self.f_vector()})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self._simplices == other._simplices

    def __hash__(self) -> int:
        return hash(self._simplices)


def build_complex(maximal_simplices: Iterable[Sequence[int]]) -> SimplicialComplex:
    return SimplicialComplex(maximal_simplices)


@dataclass(frozen=True)
class BoundaryMatrix:
    """Sparse {0, +-1} matrix of the q-boundary map: rows p-simplices, columns q-simplices."""

    p: int
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], int] = field(repr=False)

    @property
    def q(self) -> int:
        return self.p + 1

    @property
    def m(self) -> int:
        return self.rows

    @property
    def n(self) -> int:
        return self.cols

    def dense(self) -> list[list[int]]:
        M = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            M[i][j] = v
        return M

    def column(self, j: int) -> dict[int, int]:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def nnz(self) -> int:
        return len(self.entries)


def boundary_matrix(K: SimplicialComplex, q: int) -> BoundaryMatrix:
    """Matrix of the q-th boundary map under the alternating-sign convention."""
    if not 1 <= q <= K.dimension:
        raise ValueError(f"boundary dimension {q} outside [1, {K.dimension}]")
    entries = {}
    for j, sigma in enumerate(K.simplices(q)):
        for k in range(len(sigma)):
            face = sigma[:k] + sigma[k + 1:]
            entries[(K.index(face), j)] = -1 if k % 2 else 1
    return BoundaryMatrix(p=q - 1, rows=K.count(q - 1), cols=K.count(q), entries=entries)


@dataclass(frozen=True)
class Chain:
    """Sparse rational chain over the p-simplices of a complex (index -> coefficient)."""

    dimension: int
    coefficients: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(i): Fraction(c) for i, c in self.coefficients.items() if c != 0}
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    def __getitem__(self, i: int) -> Fraction:
        return self.coefficients.get(i, Fraction(0))

    def __add__(self, other: "Chain") -> "Chain":
        return chain_add(self, other)

    def __neg__(self) -> "Chain":
        return chain_scale(self, -1)

    def __sub__(self, other: "Chain") -> "Chain":
        return chain_add(self, chain_scale(other, -1))

    def __rmul__(self, scalar) -> "Chain":
        return chain_scale(self, scalar)

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients.values())

    def to_vector(self, length: int) -> list[Fraction]:
        v = [Fraction(0)] * length
        for i, c in self.coefficients.items():
            v[i] = c
        return v

    @classmethod
    def from_vector(cls, dimension: int, vector: Sequence) -> "Chain":
        return cls(dimension, {i: c for i, c in enumerate(vector) if c})


def make_chain(K: SimplicialComplex, p: int, terms: Iterable[tuple[object, Sequence[int]]]) -> Chain:
    """Chain from ``(coefficient, vertex sequence)`` terms; vertex order sets orientation."""
    coeffs: dict[int, Fraction] = {}
    for coef, verts in terms:
        s = Simplex.from_vertices(verts)
        if s.dimension != p:
            raise ValueError(f"simplex {list(verts)} has dimension {s.dimension}, expected {p}")
        i = K.index(s.vertices)
        coeffs[i] = coeffs.get(i, Fraction(0)) + s.sign * Fraction(coef)
    return Chain(p, coeffs)


def chain_add(a: Chain, b: Chain) -> Chain:
    if a.dimension != b.dimension:
        raise ValueError(f"cannot add a {a.dimension}-chain and a {b.dimension}-chain")
    out = dict(a.coefficients)
    for i, c in b.coefficients.items():
        out[i] = out.get(i, Fraction(0)) + c
    return Chain(a.dimension, out)


def chain_scale(a: Chain, scalar) -> Chain:
    s = Fraction(scalar)
    return Chain(a.dimension, {i: s * c for i, c in a.coefficients.items()})


def apply_boundary(K: SimplicialComplex, chain: Chain) -> Chain:
    if chain.dimension < 1:
        raise ValueError("the boundary of a 0-chain is not defined here")
    B = boundary_matrix(K, chain.dimension)
    out: dict[int, Fraction] = {}
    for (i, j), v in B.entries.items():
        c = chain.coefficients.get(j)
        if c:
            out[i] = out.get(i, Fraction(0)) + v * c
    return Chain(chain.dimension - 1, out)
