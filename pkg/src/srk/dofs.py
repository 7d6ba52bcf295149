"""Degrees of freedom: normal frames, weighted face moments, unisolvency.

A functional is attached to a face F of codimension s: it differentiates a
cell polynomial theta_i times along each of s pairwise-orthogonal rational
normals of F, restricts to F, weighs with one bubble monomial and takes the
volume-normalized integral.  For a vertex this degenerates to a point value
of the derivative; for the cell itself, to a plain weighted moment.

The normals are deliberately not unit length: rational scaling keeps all
arithmetic exact and rescales each functional by a positive constant that
depends only on the face and theta, which changes neither spans, nor
single-valuedness constraints, nor unisolvency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .bernstein import BBPoly, compositions
from .bubble import as_continuity, enumerate_bubble
from .exact import Echelon
from .simplicial import Simplex, Triangulation


@dataclass(frozen=True)
class NormalFrame:
    """Pairwise-orthogonal rational normal vectors of a face."""

    face: Simplex
    normals: tuple


def _primitive(vec: list[Fraction]) -> Optional[tuple]:
    if all(x == 0 for x in vec):
        return None
    den = math.lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def _project_out(v: list[Fraction], basis: Sequence[Sequence]) -> list[Fraction]:
    for u in basis:
        num = sum(Fraction(a) * b for a, b in zip(u, v))
        if num:
            den = sum(Fraction(a) * a for a in u)
            f = num / den
            v = [x - f * Fraction(a) for x, a in zip(v, u)]
    return v


def normal_frame(F: Simplex, T: Triangulation) -> NormalFrame:
    """Gram-Schmidt of the coordinate axes against the face's tangent space.

    Axes are tried in index order; each accepted normal is reduced to a
    primitive integer vector with positive leading entry, so the frame is
    deterministic.
    """
    d = T.dim
    pts = T.points(F)
    s = d - (len(pts) - 1)
    if s < 1:
        raise ValueError("the face must have codimension at least 1")
    tangents: list[tuple] = []
    for j in range(1, len(pts)):
        edge = [b - a for a, b in zip(pts[0], pts[j])]
        reduced = _primitive(_project_out([Fraction(x) for x in edge], tangents))
        if reduced is None:
            raise ValueError(f"degenerate face {F}")
        tangents.append(reduced)
    normals: list[tuple] = []
    for axis in range(d):
        if len(normals) == s:
            break
        v = [Fraction(0)] * d
        v[axis] = Fraction(1)
        reduced = _primitive(_project_out(v, tangents + normals))
        if reduced is not None:
            normals.append(reduced)
    if len(normals) != s:
        raise ValueError(f"degenerate face {F}")
    return NormalFrame(face=F, normals=tuple(normals))


@dataclass(frozen=True)
class DofFunctional:
    """One degree of freedom: face, normal-derivative order, bubble weight."""

    face: Simplex
    s: int
    n: int
    theta: tuple
    sigma: tuple
    frame: Optional[NormalFrame]
    ordinal: int = field(default=-1, compare=False)


def apply_dof(l: DofFunctional, u: BBPoly) -> Fraction:
    """Exact value of the functional on a cell polynomial containing its face."""
    if not u.simplex.contains(l.face):
        raise ValueError(f"{l.face} is not a face of {u.simplex}")
    q = u
    if l.frame is not None:
        for normal, times in zip(l.frame.normals, l.theta):
            for _ in range(times):
                q = q.directional_derivative(normal)
    tr = q.trace(l.face)
    if any(l.sigma):
        tr = tr.multiply(BBPoly.monomial(tr.frame, l.sigma))
    return tr.integrate_normalized()


def face_dofs(F: Simplex, T: Triangulation, r, k: int,
              frame_factory: Callable[[Simplex, Triangulation], NormalFrame] = normal_frame,
              ) -> list[DofFunctional]:
    """All functionals attached to one face, in (n, theta, sigma) order."""
    r = as_continuity(r)
    d = T.dim
    if r.d != d:
        raise ValueError("continuity vector length must equal the mesh dimension")
    s = d - F.dim
    frame = frame_factory(F, T) if s >= 1 else None
    out = []
    for n in range(r.order(s) + 1):
        thetas = compositions(n, s) if s > 0 else (((),) if n == 0 else ())
        for theta in thetas:
            for sigma in enumerate_bubble(d, s, r, k, n).indices:
                out.append(DofFunctional(face=F, s=s, n=n, theta=tuple(theta),
                                         sigma=sigma, frame=frame))
    return out


class DofSet:
    """Functionals of a cell or triangulation, in canonical order with ids."""

    def __init__(self, functionals: Sequence[DofFunctional]):
        self.functionals = tuple(
            DofFunctional(face=l.face, s=l.s, n=l.n, theta=l.theta,
                          sigma=l.sigma, frame=l.frame, ordinal=i)
            for i, l in enumerate(functionals)
        )

    def __len__(self):
        return len(self.functionals)

    def __iter__(self):
        return iter(self.functionals)

    def per_face_dim_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for l in self.functionals:
            counts[l.face.dim] = counts.get(l.face.dim, 0) + 1
        return counts


def dof_set_for_cell(K: Simplex, T: Triangulation, r, k: int,
                     frame_factory: Callable[..., NormalFrame] = normal_frame,
                     ) -> DofSet:
    """All functionals of every face of K, faces ordered by (dim desc, ids)."""
    functionals = []
    for dim in range(K.dim, -1, -1):
        for F in K.faces(dim):
            functionals.extend(face_dofs(F, T, r, k, frame_factory=frame_factory))
    return DofSet(functionals)


@dataclass(frozen=True)
class UnisolvencyVerdict:
    status: str  # "unisolvent" | "count_mismatch" | "rank_deficient"
    dof_count: int
    dim_pk: int
    rank: int
    per_face_dim: dict

    @property
    def unisolvent(self) -> bool:
        return self.status == "unisolvent"


def dof_row_on_cell(l: DofFunctional, cell_frame, k: int) -> list[Fraction]:
    """The functional applied to every barycentric monomial of degree k."""
    n = len(cell_frame.points)
    return [apply_dof(l, BBPoly.monomial(cell_frame, alpha))
            for alpha in compositions(k, n)]


def unisolvency_check(K: Simplex, T: Triangulation, r, k: int,
                      frame_factory: Callable[..., NormalFrame] = normal_frame,
                      ) -> UnisolvencyVerdict:
    """Count-and-rank test of the cell's functionals against P_k."""
    dofs = dof_set_for_cell(K, T, r, k, frame_factory=frame_factory)
    frame = T.frame(K)
    dim_pk = len(compositions(k, T.dim + 1))
    ech = Echelon(dim_pk)
    for l in dofs:
        ech.add_row(dof_row_on_cell(l, frame, k))
    rank = ech.rank
    count = len(dofs)
    if count != dim_pk:
        status = "count_mismatch"
    elif rank < dim_pk:
        status = "rank_deficient"
    else:
        status = "unisolvent"
    return UnisolvencyVerdict(status=status, dof_count=count, dim_pk=dim_pk,
                              rank=rank, per_face_dim=dofs.per_face_dim_counts())
