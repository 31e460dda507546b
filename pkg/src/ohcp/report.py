"""JSON-ready views of library results.

Rationals are written as exact strings (``"3"``, ``"-1/2"``) and simplices
as vertex lists, so reports are stable across runs and easy to diff.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any, Optional, Sequence

from .complex import SimplicialComplex
from .linalg import HomologyGroup
from .lp import SolutionVector
from .neutral import NeutralizationReport, NeutralizingChain
from .tu import MntuCertificate, exterior_row_counts, extract_orientation_reversing_chain


def rational(v) -> str:
    return str(Fraction(v))


def digest(*texts: str) -> str:
    h = hashlib.sha256()
    for t in texts:
        data = t.encode("utf-8")
        h.update(len(data).to_bytes(8, "big"))
        h.update(data)
    return h.hexdigest()


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def homology_json(H: HomologyGroup) -> dict:
    return {"betti": H.betti, "torsion": list(H.torsion), "trivial": H.is_trivial, "group": str(H)}


def coefficients_json(K: SimplicialComplex, d: int, values: Sequence) -> list[dict]:
    simplices = K.simplices(d)
    return [{"simplex": list(simplices[i]), "coefficient": rational(v)}
            for i, v in enumerate(values) if v]


def solution_json(K: SimplicialComplex, p: int, z: SolutionVector) -> dict:
    return {
        "chain": coefficients_json(K, p, z.p_coefficients),
        "filling": coefficients_json(K, p + 1, z.q_coefficients),
        "integral": z.is_integral(),
    }


def certificate_json(K: SimplicialComplex, q: int, cert: MntuCertificate, B) -> dict:
    rows, cols = K.simplices(q - 1), K.simplices(q)
    orc = extract_orientation_reversing_chain(cert, B)
    return {
        "rows": [list(rows[i]) for i in cert.rows],
        "columns": [list(cols[j]) for j in cert.cols],
        "determinant": cert.determinant,
        "circuit": [list(rows[v] if k == "r" else cols[v]) for k, v in cert.circuit],
        "exterior_rows": [{"simplex": list(rows[i]), "count": c}
                          for i, c in sorted(exterior_row_counts(cert, B).items())],
        "cmntus": cert.is_cmntus,
        "orientation_reversing_chain": [list(cols[j]) for j in orc.simplices],
        "entry_sum": orc.entry_sum,
    }


def _chain_json(K: SimplicialComplex, q: int, chain: Optional[NeutralizingChain]) -> Optional[dict]:
    if chain is None:
        return None
    return {
        "filling": coefficients_json(K, q, chain.y),
        "interior_sum": rational(chain.interior_sum),
        "difference": coefficients_json(K, q - 1, chain.difference.p_coefficients),
    }


def neutralization_json(K: SimplicialComplex, rep: NeutralizationReport, B) -> dict:
    rows = K.simplices(rep.q - 1)
    out = {
        "procedure": rep.procedure,
        "verdict": rep.verdict,
        "certificates": [certificate_json(K, rep.q, c, B) for c in rep.certificates],
        "cells": [
            {
                "certificate": cell.cert,
                "row": list(rows[cell.row]),
                "sign": cell.sign,
                "verdict": cell.verdict,
                **({"chain": _chain_json(K, rep.q, cell.chain)} if cell.chain is not None else {}),
            }
            for cell in rep.cells
        ],
        "budget": rep.budget,
        "work": rep.work,
        "notes": list(rep.notes),
    }
    if rep.radius is not None:
        out["radius"] = rep.radius
    if rep.witness is not None:
        out["witness"] = {
            "row": list(rows[rep.witness.row]),
            "sign": rep.witness.sign,
            "vertex": solution_json(K, rep.q - 1, rep.witness.vertex),
        }
    return out
