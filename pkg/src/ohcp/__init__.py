"""Optimal homologous chains over the integers by exact linear programming.

The package builds boundary matrices of simplicial complexes, solves the
OHCP linear program with an exact rational simplex method, finds the
minimally non-totally-unimodular submatrices of a boundary matrix and
decides whether a complex is NTU neutralized.
"""
from .complex import (BoundaryMatrix, Chain, Simplex, SimplicialComplex, apply_boundary,
                      boundary_matrix, build_complex, chain_add, chain_scale, make_chain)
from .linalg import homology, smith_normal_form
from .lp import (OhcpInstance, SolutionVector, canonicalize_concise, decompose_against_basic,
                 decompose_into_elementary, formulate, identity_solution, is_basic_solution,
                 is_basic_solution_X, is_concise, project_to_X, strip_integral_y)
from .neutral import (decide_by_definition, decide_by_projection, elementary_fractional_vertex,
                      find_neutralizing_chain, h1_trivial_shortcut, m_of,
                      neutralized_vertex_decomposition, unit_null)
from .simplex import enumerate_optimal_vertices, solve
from .tu import (bipartite_graph, classify_cmntus, extract_orientation_reversing_chain,
                 find_mntus, is_totally_unimodular, relative_torsion_free)

__version__ = "0.1.0"
