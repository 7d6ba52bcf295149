"""Global finite element and superspline spaces as exact null spaces.

A global coefficient vector stacks one block of barycentric monomial
coefficients per cell, cells in canonical order.  The finite element space
matches every shared-face functional across the star of the face; the
superspline space matches every Cartesian derivative trace up to the order
attached to the face's codimension.  Both are computed as exact rational
null spaces of their constraint rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .bernstein import BBPoly, compositions
from .bubble import ContinuityVector, as_continuity
from .dofs import (DofFunctional, apply_dof, dof_row_on_cell, dof_set_for_cell,
                   face_dofs, unisolvency_check)
from .exact import Echelon, RatMatrix, solve_unique, span_equal
from .simplicial import Simplex, Triangulation, is_subtriangulation


def n_local(d: int, k: int) -> int:
    """dim P_k on a d-simplex."""
    return len(compositions(k, d + 1))


def vector_blocks(T: Triangulation, k: int, vec: Sequence) -> list[BBPoly]:
    """Split a global coefficient vector into one polynomial per cell."""
    N = n_local(T.dim, k)
    if len(vec) != N * len(T.cells):
        raise ValueError("coefficient vector length does not match the mesh")
    out = []
    for i, c in enumerate(T.cells):
        out.append(BBPoly.from_vector(T.frame(c), k, vec[i * N:(i + 1) * N]))
    return out


def vector_from_blocks(T: Triangulation, k: int, polys: Sequence[BBPoly]) -> list[Fraction]:
    if len(polys) != len(T.cells):
        raise ValueError("one polynomial per cell required")
    out: list[Fraction] = []
    for c, p in zip(T.cells, polys):
        if p.simplex != c:
            raise ValueError("polynomial blocks are out of order")
        if p.k != k:
            raise ValueError("polynomial degree does not match")
        out.extend(p.to_vector())
    return out


def _shared_proper_faces(T: Triangulation):
    for dim in range(T.dim - 1, -1, -1):
        for F in T.faces(dim):
            if len(T.star(F)) >= 2:
                yield F


def fe_constraint_rows(T: Triangulation, r, k: int) -> list[list]:
    """Single-valuedness of every shared-face functional across its star."""
    r = as_continuity(r)
    N = n_local(T.dim, k)
    total = N * len(T.cells)
    rows = []
    for F in _shared_proper_faces(T):
        members = T.star(F)
        k0 = T.cell_index(members[0])
        frame0 = T.frame(members[0])
        for l in face_dofs(F, T, r, k):
            vals0 = dof_row_on_cell(l, frame0, k)
            for cell in members[1:]:
                ci = T.cell_index(cell)
                vals = dof_row_on_cell(l, T.frame(cell), k)
                row = [0] * total
                row[ci * N:(ci + 1) * N] = vals
                base = k0 * N
                for j, v in enumerate(vals0):
                    if v:
                        row[base + j] = row[base + j] - v
                rows.append(row)
    return rows


def _trace_fragments(T: Triangulation, cell: Simplex, F: Simplex, beta, k: int):
    """Per trace coefficient, the linear map from cell coefficients.

    Returns a dict mapping each face multi-index gamma to the length-N row of
    the functional c -> trace coefficient of the beta-derivative at gamma.
    """
    frame = T.frame(cell)
    N = n_local(T.dim, k)
    frags: dict[tuple, list] = {}
    for j, alpha in enumerate(compositions(k, T.dim + 1)):
        q = BBPoly.monomial(frame, alpha).derivative_multi(beta).trace(F)
        for gamma, v in q.coeffs.items():
            row = frags.get(gamma)
            if row is None:
                row = [0] * N
                frags[gamma] = row
            row[j] = row[j] + v
    return frags


def superspline_constraint_rows(T: Triangulation, r, k: int) -> list[list]:
    """Equality of derivative traces on shared faces, coefficient by coefficient."""
    r = as_continuity(r)
    d = T.dim
    N = n_local(d, k)
    total = N * len(T.cells)
    rows = []
    for F in _shared_proper_faces(T):
        s = d - F.dim
        members = T.star(F)
        k0 = T.cell_index(members[0])
        for n in range(r.order(s) + 1):
            for beta in compositions(n, d):
                frags0 = _trace_fragments(T, members[0], F, beta, k)
                for cell in members[1:]:
                    ci = T.cell_index(cell)
                    frags = _trace_fragments(T, cell, F, beta, k)
                    for gamma in sorted(set(frags0) | set(frags)):
                        row = [0] * total
                        f = frags.get(gamma)
                        if f is not None:
                            row[ci * N:(ci + 1) * N] = f
                        f0 = frags0.get(gamma)
                        if f0 is not None:
                            base = k0 * N
                            for j, v in enumerate(f0):
                                if v:
                                    row[base + j] = row[base + j] - v
                        rows.append(row)
    return rows


@dataclass(frozen=True)
class SpaceBasis:
    """A basis of a global space, plus the assembly bookkeeping."""

    triangulation: Triangulation
    r: ContinuityVector
    k: int
    kind: str  # "fe" | "spline"
    basis: tuple
    n_unknowns: int
    n_constraints: int
    rank: int
    local_status: Optional[str] = None

    @property
    def dim(self) -> int:
        return len(self.basis)


def _assemble(T: Triangulation, r, k: int, kind: str) -> SpaceBasis:
    r = as_continuity(r)
    if r.d != T.dim:
        raise ValueError("continuity vector length must equal the mesh dimension")
    if kind == "fe":
        rows = fe_constraint_rows(T, r, k)
        local = unisolvency_check(T.cells[0], T, r, k).status
    elif kind == "spline":
        rows = superspline_constraint_rows(T, r, k)
        local = None
    else:
        raise ValueError(f"unknown space kind {kind!r}")
    total = n_local(T.dim, k) * len(T.cells)
    ech = Echelon(total)
    for row in rows:
        ech.add_row(row)
    basis = tuple(tuple(v) for v in ech.nullspace_basis())
    return SpaceBasis(triangulation=T, r=r, k=k, kind=kind, basis=basis,
                      n_unknowns=total, n_constraints=len(rows), rank=ech.rank,
                      local_status=local)


def assemble_fe_space(T: Triangulation, r, k: int) -> SpaceBasis:
    """The space glued by single-valued shared-face functionals."""
    return _assemble(T, r, k, "fe")


def assemble_superspline(T: Triangulation, r, k: int) -> SpaceBasis:
    """The space with single-valued derivative traces on shared faces."""
    return _assemble(T, r, k, "spline")


def restrict_space(S: SpaceBasis, Tsub: Triangulation) -> list[list]:
    """Cut every basis vector down to the subtriangulation's cell blocks."""
    T = S.triangulation
    if not is_subtriangulation(Tsub, T):
        raise ValueError("not a subtriangulation")
    N = n_local(T.dim, S.k)
    picks = [T.cell_index(c) for c in Tsub.cells]
    out = []
    for vec in S.basis:
        restricted: list = []
        for ci in picks:
            restricted.extend(vec[ci * N:(ci + 1) * N])
        out.append(restricted)
    return out


def spaces_equal(A: SpaceBasis, B: SpaceBasis) -> bool:
    """Exact subspace equality via rank comparisons of the joined bases."""
    if A.triangulation is not B.triangulation and \
            A.triangulation.to_json_dict() != B.triangulation.to_json_dict():
        raise ValueError("spaces live on different triangulations")
    if A.r != B.r or A.k != B.k:
        raise ValueError("spaces have different parameters")
    return span_equal(A.basis, B.basis)


def satisfies_rows(rows: Sequence[Sequence], vec: Sequence) -> bool:
    zero = Fraction(0)
    for row in rows:
        if sum((a * b for a, b in zip(row, vec) if a), zero):
            return False
    return True


def superspline_member(T: Triangulation, r, k: int, vec: Sequence) -> bool:
    return satisfies_rows(superspline_constraint_rows(T, r, k), vec)


def fe_member(T: Triangulation, r, k: int, vec: Sequence) -> bool:
    return satisfies_rows(fe_constraint_rows(T, r, k), vec)


def fe_extend(u: Sequence, Tsub: Triangulation, T: Triangulation, r, k: int) -> list:
    """Extend by prescribing functionals: kept on the sub-mesh, zero elsewhere.

    Every cell of T is solved from its own functional values, so the result
    restricts to ``u`` exactly and lies in the glued space on T.
    """
    r = as_continuity(r)
    if not is_subtriangulation(Tsub, T):
        raise ValueError("not a subtriangulation")
    if not fe_member(Tsub, r, k, u):
        raise ValueError("input does not satisfy the sub-mesh constraints")
    N = n_local(T.dim, k)
    sub_polys = vector_blocks(Tsub, k, u)
    out: list = []
    for K in T.cells:
        dofs = dof_set_for_cell(K, T, r, k)
        if len(dofs) != N:
            raise ValueError("functional count does not match the local dimension")
        frame = T.frame(K)
        matrix_rows = []
        target = []
        for l in dofs:
            matrix_rows.append(dof_row_on_cell(l, frame, k))
            if Tsub.has_face(l.face):
                donor = Tsub.star(l.face)[0]
                value = apply_dof(l, sub_polys[Tsub.cell_index(donor)])
            else:
                value = Fraction(0)
            target.append(value)
        coeffs = solve_unique(RatMatrix(matrix_rows), target)
        out.extend(coeffs)
    return out
