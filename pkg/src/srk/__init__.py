"""Exact-arithmetic toolkit for C^r finite element and superspline spaces.

Builds the weighted-moment degrees of freedom of smooth elements on
simplicial triangulations, assembles the glued finite element space and the
superspline space as exact rational null spaces, checks local unisolvency,
compares the two spaces, and decides extendability of restriction maps,
producing explicit witnesses when a map fails to be onto.
"""

from .bernstein import BBPoly, compositions, from_cartesian
from .bubble import (BubbleSpace, ContinuityVector, check_bubble_shift,
                     enumerate_bubble, shift_continuity_vector)
from .dofs import (DofFunctional, DofSet, NormalFrame, UnisolvencyVerdict,
                   apply_dof, dof_set_for_cell, face_dofs, normal_frame,
                   unisolvency_check)
from .exact import (RatMatrix, Rational, nullspace, rank, rational_str, solve,
                    solve_unique, span_equal)
from .extend import (ExtendVerdict, Witness, WitnessReport, check_a1, check_a2,
                     extension_feasible, restriction_onto, verify_witness,
                     witness_k_rd, witness_rd_rs)
from .simplicial import (BUILTIN_MESH_NAMES, BarycentricFrame, MeshError,
                         Simplex, Triangulation, barycentric_frame,
                         builtin_mesh, is_subtriangulation, qua_cell,
                         reference_mesh, star)
from .spaces import (SpaceBasis, assemble_fe_space, assemble_superspline,
                     fe_extend, fe_member, n_local, restrict_space,
                     spaces_equal, superspline_member, vector_blocks,
                     vector_from_blocks)

__version__ = "0.1.0"

__all__ = [
    "BBPoly", "BUILTIN_MESH_NAMES", "BarycentricFrame", "BubbleSpace",
    "ContinuityVector", "DofFunctional", "DofSet", "ExtendVerdict",
    "MeshError", "NormalFrame", "RatMatrix", "Rational", "Simplex",
    "SpaceBasis", "Triangulation", "UnisolvencyVerdict", "Witness",
    "WitnessReport", "apply_dof", "assemble_fe_space", "assemble_superspline",
    "barycentric_frame", "builtin_mesh", "check_a1", "check_a2",
    "check_bubble_shift", "compositions", "dof_set_for_cell",
    "enumerate_bubble", "extension_feasible", "face_dofs", "fe_extend",
    "fe_member", "from_cartesian", "is_subtriangulation", "n_local",
    "normal_frame", "nullspace", "qua_cell", "rank", "rational_str",
    "reference_mesh", "restrict_space", "restriction_onto",
    "shift_continuity_vector", "solve", "solve_unique", "spaces_equal",
    "span_equal", "star", "superspline_member", "unisolvency_check",
    "vector_blocks", "vector_from_blocks", "verify_witness", "witness_k_rd",
    "witness_rd_rs", "__version__",
]
