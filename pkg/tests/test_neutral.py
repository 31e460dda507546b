import random
from fractions import Fraction

import pytest

from ohcp import linalg
from ohcp.lp import (SolutionVector, identity_solution, instance_from_matrix, is_basic_solution,
                     is_basic_solution_X, is_concise, project_to_X)
from ohcp.neutral import (NeutralizingChain, _check_neutralizing, decide_by_definition,
                          decide_by_projection, elementary_fractional_vertex,
                          find_neutralizing_chain, h1_trivial_shortcut, m_of,
                          neutralized_vertex_decomposition, unit_null)
from ohcp.simplex import enumerate_optimal_vertices
from ohcp.tu import find_mntus

from conftest import F, boundary, complex_of

HALF = F(1, 2)


def setup(name):
    K = complex_of(name)
    B = boundary(K, 2)
    base = instance_from_matrix(B, [0] * len(B), p=1, complex=K)
    return K, B, base, find_mntus(B)


def core_certificate(K, certs):
    strip = {(1, 2, 3), (2, 3, 4), (3, 4, 5), (1, 4, 5), (1, 2, 5)}
    return next(c for c in certs if {K.simplices(2)[j] for j in c.cols} == strip)


def test_mobius_unit_nulls():
    K, B, base, (cert,) = setup("mobius5")
    for i in cert.rows:
        u = unit_null(base, cert, i)
        q = u.q_coefficients
        assert all(abs(q[j]) == HALF for j in cert.cols)
        assert all(q[j] == 0 for j in range(base.n) if j not in cert.cols)
        assert [u.p_coefficients[r] for r in cert.rows] == [int(r == i) for r in cert.rows]
        assert not any(linalg.matvec(base.A, u.vector.values))


def test_unit_null_rejects_exterior_row():
    K, B, base, (cert,) = setup("mobius5")
    with pytest.raises(ValueError):
        unit_null(base, cert, cert.exterior_rows[0])


def _q_sum(nulls, rows):
    n = len(nulls[rows[0]].q_coefficients)
    return [sum((nulls[r].q_coefficients[k] for r in rows), F(0)) for k in range(n)]


@pytest.mark.parametrize("name", ["mobius5", "nested_strip", "filled_core"])
def test_unit_null_parity_suite(name):
    K, B, base, certs = setup(name)
    rng = random.Random(7)
    for cert in certs[:3]:
        nulls = {i: unit_null(base, cert, i) for i in cert.rows}
        for a in cert.rows:
            for b in cert.rows:
                if a == b:
                    continue
                s = _q_sum(nulls, [a, b])
                d = [x - y for x, y in zip(nulls[a].q_coefficients, nulls[b].q_coefficients)]
                assert all(v in (-1, 0, 1) for v in s + d)                          # P1
                assert all((s[k] == 0) == (d[k] != 0) for k in cert.cols)          # P2
        for _ in range(200 // max(1, len(certs[:3]))):
            size = rng.randint(1, 2 * len(cert.rows))
            rows = [rng.choice(cert.rows) for _ in range(size)]
            s = _q_sum(nulls, rows)
            if size % 2 == 0:
                assert all(v.denominator == 1 for v in s)                          # P3
            else:
                assert all(v.denominator == 2 for v in s if v)                     # P4
                assert all(v != 0 for k, v in enumerate(s) if k in cert.cols)


def test_m_of_examples():
    K, B, base, (cert,) = setup("mobius5")
    zero = m_of(identity_solution(base.elementary(cert.exterior_rows[0])), cert)
    assert zero.is_zero()
    i = cert.rows[0]
    zI = identity_solution(base.elementary(i))
    m = m_of(zI, cert)
    u = unit_null(base, cert, i)
    assert m.p_coefficients == u.p_coefficients and m.q_coefficients == u.q_coefficients
    # where z vanishes on both entries of a pair, m(z) is nonpositive there
    for j in range(2 * base.m):
        if zI[j] == 0 and zI[(j + base.m) % (2 * base.m)] == 0:
            assert m[j] <= 0


def test_m_of_depends_only_on_coefficients():
    K, B, base, (cert,) = setup("mobius5")
    rng = random.Random(2)
    for _ in range(20):
        x = [F(rng.randint(-2, 2)) for _ in range(base.m)]
        y = [F(rng.randint(-1, 1), 2) for _ in range(base.n)]
        z = SolutionVector.from_coefficients(x, y)
        # an equivalent concise vector: flip which side carries nothing
        w = SolutionVector(z.m, z.n, z.values)
        a, b = m_of(z, cert), m_of(w, cert)
        assert a.p_coefficients == b.p_coefficients and a.q_coefficients == b.q_coefficients
    with pytest.raises(ValueError):
        m_of(SolutionVector(base.m, base.n, (1,) + (0,) * (base.m - 1) + (1,) +
                            (0,) * (base.size - base.m - 1)), cert)


def test_mobius_elementary_vertex():
    K, B, base, (cert,) = setup("mobius5")
    i = K.index((1, 2))
    zi = elementary_fractional_vertex(base, cert, i)
    pc = zi.p_coefficients
    assert all(pc[r] == 0 for r in cert.rows)
    assert all(abs(pc[r]) == HALF for r in cert.exterior_rows)
    elem = base.elementary(i)
    assert elem.is_feasible(zi) and is_basic_solution(elem, zi)
    zneg = elementary_fractional_vertex(base, cert, i, -1)
    assert zneg != zi and base.elementary(i, -1).is_feasible(zneg)


@pytest.mark.parametrize("name", ["mobius5", "filled_core", "rp2", "pinched_vertex", "odd_disk",
                                  "nested_strip", "pinched_vertex_disk"])
def test_elementary_vertices_on_every_row(name):
    K, B, base, certs = setup(name)
    for cert in certs:
        for i in cert.rows:
            for sign in (1, -1):
                zi = elementary_fractional_vertex(base, cert, i, sign)
                assert is_concise(zi) and not zi.is_integral()
                assert set(k for k, v in enumerate(zi.q_coefficients) if v) <= set(cert.cols)


@pytest.mark.parametrize("name", ["mobius5", "filled_core"])
def test_fractional_vertex_is_the_only_one_on_cmntus_columns(name):
    K, B, base, certs = setup(name)
    for cert in [c for c in certs if c.is_cmntus and len(c.cols) <= 5][:2]:
        BQ = [[row[j] for j in cert.cols] for row in B]
        for i in cert.rows[:2]:
            sub = instance_from_matrix(BQ, [int(r == i) for r in range(len(B))], [0] * len(B))
            enum = enumerate_optimal_vertices(sub)      # zero weights: every vertex is optimal
            assert not enum.limit_hit
            frac = [z for z in enum.vertices if not z.is_integral()]
            zi = elementary_fractional_vertex(base, cert, i)
            assert len(frac) == 1
            assert frac[0].p_coefficients == zi.p_coefficients
            assert list(frac[0].q_coefficients) == [zi.q_coefficients[j] for j in cert.cols]


def test_no_neutralizing_chain_on_bare_strip():
    K, B, base, (cert,) = setup("mobius5")
    for i in cert.rows:
        assert find_neutralizing_chain(base, cert, i, radius=3) is None


def test_filled_core_neutralizing_chain():
    K, B, base, certs = setup("filled_core")
    cert = core_certificate(K, certs)
    i = K.index((1, 2))
    chain = find_neutralizing_chain(base, cert, i, radius=2)
    assert chain is not None
    assert chain.interior_sum % 2 == 1
    assert chain.k.is_integral() and not any(linalg.matvec(base.A, chain.k.values))
    cone = {(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5)}
    used = {K.simplices(2)[k] for k, v in enumerate(chain.y) if v}
    assert used & cone
    zi = elementary_fractional_vertex(base, cert, i)
    assert any(chain.difference.p_coefficients)
    assert all(abs(a) <= abs(b) for a, b in
               zip(chain.difference.p_coefficients, zi.p_coefficients))


def test_even_interior_sum_is_rejected():
    K, B, base, certs = setup("filled_core")
    cert = core_certificate(K, certs)
    i = K.index((1, 2))
    chain = find_neutralizing_chain(base, cert, i)
    zi = elementary_fractional_vertex(base, cert, i)
    doubled = NeutralizingChain(i, chain.k.scaled(2), chain.difference.scaled(2),
                                2 * chain.interior_sum, tuple(2 * v for v in chain.y))
    with pytest.raises(AssertionError):
        _check_neutralizing(base, cert, zi, doubled)


def test_neutralized_vertex_decomposition():
    K, B, base, certs = setup("filled_core")
    cert = core_certificate(K, certs)
    i = K.index((1, 2))
    zi = elementary_fractional_vertex(base, cert, i)
    chain = find_neutralizing_chain(base, cert, i)
    z1, z2 = neutralized_vertex_decomposition(zi, chain)
    assert z1.is_integral() and z2.is_integral()
    elem = base.elementary(i)
    x1, x2, xi = project_to_X(z1), project_to_X(z2), project_to_X(zi)
    assert all((a + b) / 2 == c for a, b, c in zip(x1, x2, xi))
    for z in (z1, z2):
        assert elem.satisfies_equations(z) and z.is_nonnegative()
    other = elementary_fractional_vertex(base, certs[-1], certs[-1].rows[-1])
    if any(abs(a) > abs(b) for a, b in zip(chain.difference.p_coefficients, other.p_coefficients)):
        with pytest.raises(ValueError):
            neutralized_vertex_decomposition(other, chain)


def test_projection_procedure_verdicts():
    K = complex_of("mobius5")
    rep = decide_by_projection(K, 2)
    assert rep.verdict == "no" and rep.witness is not None
    elem = instance_from_matrix(boundary(K, 2), [0] * 10).elementary(rep.witness.row,
                                                                    rep.witness.sign)
    assert not rep.witness.vertex.is_integral()
    assert is_basic_solution_X(elem, project_to_X(rep.witness.vertex))
    rep = decide_by_projection(complex_of("filled_core"), 2)
    assert rep.verdict == "yes" and rep.witness is None
    assert all(c.verdict == "neutralized" for c in rep.cells)
    assert decide_by_projection(complex_of("square"), 2).verdict == "yes (vacuous)"


def test_definition_procedure_verdicts():
    assert decide_by_definition(complex_of("pinched_edge"), 2).verdict == "yes (vacuous)"
    rep = decide_by_definition(complex_of("filled_core"), 2, radius=2)
    assert rep.verdict == "yes"
    assert all(c.chain is not None for c in rep.cells)
    assert decide_by_definition(complex_of("mobius5"), 2, radius=3).verdict == "unknown"
    with pytest.raises(ValueError):
        find_neutralizing_chain(instance_from_matrix([[1]], [0]), None, 0, radius=0)


def test_projection_budget_gives_unknown():
    rep = decide_by_projection(complex_of("filled_core"), 2, budget=5)
    assert rep.verdict == "unknown" and rep.notes


def test_h1_shortcut():
    assert h1_trivial_shortcut(complex_of("filled_core")) == "neutralized"
    assert h1_trivial_shortcut(complex_of("mobius5")) is None
    assert h1_trivial_shortcut(complex_of("rp2")) is None
    with pytest.raises(ValueError):
        h1_trivial_shortcut(complex_of("hollow_triangle"))


def test_tu_elementary_vertices_have_unit_coefficients():
    K = complex_of("square")
    B = boundary(K, 2)
    for i in range(len(B)):
        inst = instance_from_matrix(B, [int(r == i) for r in range(len(B))], [0] * len(B))
        for z in enumerate_optimal_vertices(inst).vertices:
            assert all(v in (-1, 0, 1) for v in z.p_coefficients)
