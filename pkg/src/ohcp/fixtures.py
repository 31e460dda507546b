"""Built-in corpus of small complexes with their expected properties.

The Möbius-strip variants labelled ``analog`` are stand-ins built to show
the same phenomena as the classic pinched-strip pictures (a strip touching
itself at a vertex, along an edge, a strip with an odd disk attached, a
strip nested inside a larger non-minimal one).  They are not copies of any
particular drawing.  Every expectation below was computed by the brute-force
oracles and is re-checked by ``verify_corpus``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .complex import SimplicialComplex, boundary_matrix, build_complex
from .linalg import homology
from .neutral import DEFAULT_BUDGET, DEFAULT_RADIUS, decide_by_definition, decide_by_projection, \
    h1_trivial_shortcut
from .report import dumps
from .textio import format_complex, parse_complex
from .tu import find_mntus

MANIFEST = "manifest.json"


def zigzag_strip(n: int) -> list[tuple[int, ...]]:
    """Triangles {j, j+1, j+2} mod n; a Möbius strip when n is odd and n >= 5."""
    return [tuple(sorted((j % n, (j + 1) % n, (j + 2) % n))) for j in range(n)]


def identify(triangles, mapping: dict[int, int]) -> list[tuple[int, ...]]:
    """Glue vertices by ``mapping``; rejects gluings that collapse or merge triangles."""
    out = []
    for t in triangles:
        g = tuple(sorted(mapping.get(v, v) for v in t))
        if len(set(g)) < len(g):
            raise ValueError(f"gluing collapses simplex {t}")
        out.append(g)
    if len(set(out)) < len(out):
        raise ValueError("gluing merges two simplices")
    return out


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    simplices: tuple[tuple[int, ...], ...]
    kind: str                      # "standard" or "analog"
    provenance: str
    q: int
    expected: dict[str, Any] = field(default_factory=dict)

    def complex(self) -> SimplicialComplex:
        return build_complex(self.simplices)

    @property
    def file(self) -> str:
        return f"{self.name}.complex"


MOBIUS5 = ((1, 2, 3), (2, 3, 4), (3, 4, 5), (1, 4, 5), (1, 2, 5))
FILLED_CORE = MOBIUS5 + ((0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5))
RP2 = ((0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
       (1, 2, 4), (1, 3, 4), (1, 3, 5), (2, 3, 5), (2, 4, 5))

FIXTURES: tuple[Fixture, ...] = (
    Fixture("triangle", "a single filled triangle", ((0, 1, 2),), "standard",
            "trivial: one simplex", 2,
            {"f_vector": [3, 3, 1], "homology": ["Z", "0", "0"], "tu": True, "mntus": 0,
             "non_cmntus": 0, "projection": "yes (vacuous)", "definition": "yes (vacuous)",
             "h1_shortcut": "neutralized"}),
    Fixture("hollow_triangle", "the boundary of a triangle (a circle)",
            ((0, 1), (1, 2), (0, 2)), "standard", "trivial: graph incidence matrix", 1,
            {"f_vector": [3, 3], "homology": ["Z", "Z"], "tu": True, "mntus": 0,
             "non_cmntus": 0, "projection": "yes (vacuous)", "definition": "yes (vacuous)"}),
    Fixture("square", "two triangles sharing a diagonal", ((0, 1, 2), (0, 2, 3)), "standard",
            "computed: determinant scan", 2,
            {"f_vector": [4, 5, 2], "homology": ["Z", "0", "0"], "tu": True, "mntus": 0,
             "non_cmntus": 0, "projection": "yes (vacuous)", "definition": "yes (vacuous)",
             "h1_shortcut": "neutralized"}),
    Fixture("tetrahedron", "boundary of the tetrahedron (a 2-sphere)",
            ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)), "standard",
            "computed: Smith normal form and determinant scan", 2,
            {"f_vector": [4, 6, 4], "homology": ["Z", "0", "Z"], "tu": True, "mntus": 0,
             "non_cmntus": 0, "projection": "yes (vacuous)", "definition": "yes (vacuous)",
             "h1_shortcut": "neutralized"}),
    Fixture("mobius5", "five-triangle Möbius strip", MOBIUS5, "standard",
            "computed: determinant scan and vertex enumeration", 2,
            {"f_vector": [5, 10, 5], "homology": ["Z", "Z", "0"], "tu": False, "mntus": 1,
             "non_cmntus": 0, "projection": "no", "definition": "unknown", "h1_shortcut": None}),
    Fixture("filled_core", "Möbius strip with a cone over its core circle",
            FILLED_CORE, "standard", "computed: projection enumeration and lattice search", 2,
            {"f_vector": [6, 15, 10], "homology": ["Z", "0", "0"], "tu": False, "mntus": 16,
             "non_cmntus": 5, "projection": "yes", "definition": "yes",
             "h1_shortcut": "neutralized"}),
    Fixture("rp2", "six-vertex projective plane", RP2, "standard",
            "computed: Smith normal form and projection enumeration", 2,
            {"f_vector": [6, 15, 10], "homology": ["Z", "Z/2", "0"], "tu": False, "mntus": 26,
             "non_cmntus": 10, "projection": "no", "definition": "unknown", "h1_shortcut": None}),
    Fixture("pinched_vertex", "analog: an 11-triangle strip touching itself at one vertex",
            tuple(identify(zigzag_strip(11), {5: 0})), "analog",
            "analog of the vertex-pinched strip; verdicts computed", 2,
            {"f_vector": [10, 22, 11], "homology": ["Z", "Z^2", "0"], "tu": False, "mntus": 1,
             "non_cmntus": 0, "projection": "no", "definition": "unknown", "h1_shortcut": None}),
    Fixture("pinched_edge", "analog: a 9-triangle strip glued to itself along an edge",
            tuple(identify(zigzag_strip(9), {4: 0, 6: 1})), "analog",
            "analog of the edge-pinched strip; determinant scan", 2,
            {"f_vector": [7, 15, 9], "homology": ["Z", "0", "0"], "tu": True, "mntus": 0,
             "non_cmntus": 0, "projection": "yes (vacuous)", "definition": "yes (vacuous)",
             "h1_shortcut": "neutralized"}),
    Fixture("odd_disk", "analog: Möbius strip plus a triangle bounded by one core edge",
            MOBIUS5 + ((1, 2, 4),), "analog",
            "analog of the odd-disk strip; projection enumeration and lattice search", 2,
            {"f_vector": [5, 10, 6], "homology": ["Z", "0", "0"], "tu": False, "mntus": 1,
             "non_cmntus": 0, "projection": "yes", "definition": "yes",
             "h1_shortcut": "neutralized"}),
    Fixture("pinched_vertex_disk",
            "analog: the vertex-pinched strip plus a triangle across its core",
            tuple(identify(zigzag_strip(11), {5: 0})) + ((0, 1, 3),), "analog",
            "analog of the vertex-pinched strip made neutralized by one triangle; lattice search",
            2,
            {"f_vector": [10, 22, 12], "homology": ["Z", "Z", "0"], "tu": False, "mntus": 1,
             "non_cmntus": 0, "projection": "unknown", "definition": "yes", "h1_shortcut": None}),
    Fixture("nested_strip", "analog: 9-triangle strip pinched so that it contains a smaller strip",
            tuple(identify(zigzag_strip(9), {4: 0})), "analog",
            "analog of the nested-strip picture; determinant scan", 2,
            {"f_vector": [8, 17, 9], "homology": ["Z", "Z", "0"], "tu": False, "mntus": 2,
             "non_cmntus": 1, "projection": "no", "definition": "unknown", "h1_shortcut": None}),
)


def get(name: str) -> Fixture:
    for f in FIXTURES:
        if f.name == name:
            return f
    raise KeyError(f"no fixture named {name!r}")


def manifest() -> dict:
    return {
        "fixtures": [
            {"name": f.name, "file": f.file, "description": f.description, "kind": f.kind,
             "provenance": f.provenance, "q": f.q, "expected": f.expected}
            for f in FIXTURES
        ]
    }


def write_corpus(directory: str | Path) -> dict:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for f in FIXTURES:
        (out / f.file).write_text(format_complex(f.complex()), encoding="utf-8")
    data = manifest()
    (out / MANIFEST).write_text(dumps(data), encoding="utf-8")
    return data


def observe(K: SimplicialComplex, q: int, radius: int = DEFAULT_RADIUS,
            budget: int = DEFAULT_BUDGET, keys: Optional[set[str]] = None) -> dict[str, Any]:
    """Recompute every manifest property of ``K`` with the library pipeline."""
    B = boundary_matrix(K, q).dense()
    certs = find_mntus(B)
    got: dict[str, Any] = {
        "f_vector": list(K.f_vector()),
        "homology": [str(homology(K, p)) for p in range(K.dimension + 1)],
        "tu": not certs,
        "mntus": len(certs),
        "non_cmntus": sum(1 for c in certs if not c.is_cmntus),
    }
    if keys is None or "projection" in keys:
        got["projection"] = decide_by_projection(K, q, budget).verdict
    if keys is None or "definition" in keys:
        got["definition"] = decide_by_definition(K, q, radius, budget).verdict
    if K.dimension == 2 and q == 2:
        got["h1_shortcut"] = h1_trivial_shortcut(K)
    return got


def verify_fixture(f: Fixture, K: Optional[SimplicialComplex] = None, radius: int = DEFAULT_RADIUS,
                   budget: int = DEFAULT_BUDGET) -> dict[str, Any]:
    K = K if K is not None else f.complex()
    got = observe(K, f.q, radius, budget, set(f.expected))
    mismatches = {k: {"expected": v, "observed": got.get(k)}
                  for k, v in f.expected.items() if got.get(k) != v}
    return {"name": f.name, "ok": not mismatches, "mismatches": mismatches}


def verify_corpus(directory: str | Path, radius: int = DEFAULT_RADIUS,
                  budget: int = DEFAULT_BUDGET) -> list[dict[str, Any]]:
    """Re-read a written corpus and check each manifest expectation."""
    d = Path(directory)
    data = json.loads((d / MANIFEST).read_text(encoding="utf-8"))
    results = []
    for entry in data["fixtures"]:
        f = get(entry["name"])
        K = parse_complex((d / entry["file"]).read_text(encoding="utf-8"), source=entry["file"])
        if K != f.complex():
            results.append({"name": f.name, "ok": False,
                            "mismatches": {"complex": "file does not round-trip"}})
            continue
        results.append(verify_fixture(f, K, radius, budget))
    return results
