from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import strategies as st

from ohcp import fixtures
from ohcp.complex import boundary_matrix, build_complex
from ohcp.lp import formulate

F = Fraction


def complex_of(name):
    return fixtures.get(name).complex()


def mobius_instance(c_edge=(1, 2), exterior_weight=F(1, 20)):
    """Möbius-5 with input edge ``c_edge``, weight 1 on interior edges."""
    K = complex_of("mobius5")
    interior = {(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)}
    w = [F(1) if e in interior else exterior_weight for e in K.simplices(1)]
    c = [0] * K.count(1)
    c[K.index(c_edge)] = 1
    return K, formulate(K, 1, c, w)


@pytest.fixture
def mobius():
    return mobius_instance()


@st.composite
def small_complexes(draw, max_vertices=6, min_triangles=1, max_triangles=7):
    """Random pure 2-complexes on a handful of vertices."""
    nv = draw(st.integers(3, max_vertices))
    all_tris = list(combinations(range(nv), 3))
    tris = draw(st.lists(st.sampled_from(all_tris), min_size=min_triangles,
                         max_size=max_triangles, unique=True))
    return build_complex(tris)


def boundary(K, q):
    return boundary_matrix(K, q).dense()


def random_feasible_point(inst, rng, basic_bias=0.5):
    """A point of P_A: random small y, x = c + B y, plus random slack on some pairs.

    With probability ``basic_bias`` the point is a canonical vertex candidate
    (y supported on at most two columns, no slack), which is often basic.
    """
    from ohcp.lp import SolutionVector
    from ohcp.simplex import vertex_from_y
    n, m = inst.n, inst.m
    y = [F(0)] * n
    if rng.random() < basic_bias:
        for k in rng.sample(range(n), min(n, rng.randint(0, 2))):
            y[k] = F(rng.choice([-2, -1, 1, 2]), rng.choice([1, 1, 2]))
        return vertex_from_y(inst, y)
    for k in range(n):
        if rng.random() < 0.5:
            y[k] = F(rng.randint(-4, 4), rng.choice([1, 2, 3]))
    z = list(vertex_from_y(inst, y).values)
    for j in range(m + n):
        if rng.random() < 0.15:
            a, b = (j, m + j) if j < m else (2 * m + (j - m), 2 * m + n + (j - m))
            t = F(rng.randint(1, 3), rng.choice([1, 2]))
            z[a] += t
            z[b] += t
    return SolutionVector(m, n, tuple(z))


# PASS/FAIL lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
