"""Plain-text readers and writers for complexes, chains and weight files.

Complex files hold one maximal simplex per line as whitespace-separated
vertex labels.  Chain and weight files hold ``value v0 v1 ... vp`` per line,
where ``value`` is an integer, a decimal or a ``p/q`` rational.  In every
format ``#`` starts a comment and blank lines are skipped.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional, Sequence

from .complex import Chain, SimplicialComplex, Simplex, build_complex


class ParseError(ValueError):
    """Malformed input; carries the file name, line number and bad token."""

    def __init__(self, source: str, line: int, token: str, reason: str):
        self.source = source
        self.line = line
        self.token = token
        self.reason = reason
        super().__init__(f"{source}:{line}: {reason} (token {token!r})")


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield number, body.split()


def _label(token: str, source: str, line: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(source, line, token, "vertex label is not an integer") from None
    if value < 0:
        raise ParseError(source, line, token, "vertex label is negative")
    return value


def _number(token: str, source: str, line: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(source, line, token, "not an integer or p/q rational") from None


def _vertices(tokens: Sequence[str], source: str, line: int) -> tuple[int, ...]:
    verts = tuple(_label(t, source, line) for t in tokens)
    seen = set()
    for t, v in zip(tokens, verts):
        if v in seen:
            raise ParseError(source, line, t, "repeated vertex in simplex")
        seen.add(v)
    return verts


def parse_complex(text: str, source: str = "<complex>") -> SimplicialComplex:
    """Build a complex from the text format; raises ParseError on bad lines."""
    tops = [_vertices(tokens, source, line) for line, tokens in _lines(text)]
    if not tops:
        raise ParseError(source, 0, "", "no simplices found")
    return build_complex(tops)


def format_complex(K: SimplicialComplex) -> str:
    return "".join(" ".join(map(str, s)) + "\n" for s in K.maximal_simplices)


def _weighted_lines(text: str, source: str, expected: Optional[int]):
    for line, tokens in _lines(text):
        if len(tokens) < 2:
            raise ParseError(source, line, tokens[0], "expected a value followed by vertex labels")
        value = _number(tokens[0], source, line)
        verts = _vertices(tokens[1:], source, line)
        if expected is not None and len(verts) != expected + 1:
            raise ParseError(source, line, tokens[-1],
                             f"simplex has dimension {len(verts) - 1}, expected {expected}")
        yield line, tokens, value, verts


def parse_chain(text: str, K: SimplicialComplex, p: Optional[int] = None,
                source: str = "<chain>") -> Chain:
    """Read ``coef v0 .. vp`` lines; the vertex order fixes the orientation.

    When ``p`` is None the dimension is taken from the first line.  An empty
    file is the zero chain, which needs an explicit ``p``.
    """
    coeffs: dict[int, Fraction] = {}
    dim = p
    for line, tokens, coef, verts in _weighted_lines(text, source, p):
        if dim is None:
            dim = len(verts) - 1
        elif len(verts) != dim + 1:
            raise ParseError(source, line, tokens[-1],
                             f"simplex has dimension {len(verts) - 1}, expected {dim}")
        s = Simplex.from_vertices(verts)
        if s.vertices not in K:
            raise ParseError(source, line, " ".join(tokens[1:]), "simplex is not in the complex")
        if coef.denominator != 1:
            raise ParseError(source, line, tokens[0], "chain coefficients must be integers")
        i = K.index(s.vertices)
        coeffs[i] = coeffs.get(i, Fraction(0)) + s.sign * coef
    if dim is None:
        raise ParseError(source, 0, "", "empty chain file needs an explicit dimension")
    return Chain(dim, coeffs)


def format_chain(K: SimplicialComplex, chain: Chain) -> str:
    simplices = K.simplices(chain.dimension)
    return "".join(f"{c} " + " ".join(map(str, simplices[i])) + "\n"
                   for i, c in chain.coefficients.items())


def parse_weights(text: str, K: SimplicialComplex, p: int, default: Fraction = Fraction(1),
                  source: str = "<weights>") -> list[Fraction]:
    """Read ``w v0 .. vp`` lines; unlisted p-simplices get ``default``."""
    w = [Fraction(default)] * K.count(p)
    seen: set[int] = set()
    for line, tokens, value, verts in _weighted_lines(text, source, p):
        key = tuple(sorted(verts))
        if key not in K:
            raise ParseError(source, line, " ".join(tokens[1:]), "simplex is not in the complex")
        if value < 0:
            raise ParseError(source, line, tokens[0], "weights must be nonnegative")
        i = K.index(key)
        if i in seen:
            raise ParseError(source, line, " ".join(tokens[1:]), "weight given twice")
        seen.add(i)
        w[i] = value
    return w


def format_weights(K: SimplicialComplex, p: int, w: Sequence[Fraction]) -> str:
    return "".join(f"{v} " + " ".join(map(str, s)) + "\n" for s, v in zip(K.simplices(p), w))


def read_text(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")
