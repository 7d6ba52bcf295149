"""Extendability of space mappings: admissibility checks and witnesses.

A space mapping is extendable when restriction onto every subtriangulation
is onto.  This module decides that for concrete (sub)mesh pairs by exact
rank computations, and constructs the two families of certificates for the
negative direction: a low-degree witness on the vertex-touch mesh (for
k <= 2 r_d) and a continuity-gap witness on the orthant mesh (for
r_s <= 2 r_{s-1} - 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .bernstein import BBPoly
from .bubble import ContinuityVector, as_continuity
from .exact import Echelon
from .simplicial import (Simplex, Triangulation, builtin_mesh,
                         is_subtriangulation, qua_cell)
from .spaces import (SpaceBasis, assemble_fe_space, assemble_superspline,
                     fe_constraint_rows, n_local, restrict_space,
                     superspline_constraint_rows, superspline_member)


def check_a1(r, k: int) -> bool:
    """Degree bound k >= 2 r_d + 1 together with the doubling chain."""
    r = as_continuity(r)
    return k >= 2 * r.order(r.d) + 1 and check_a2(r)


def check_a2(r) -> bool:
    """The doubling chain r_d >= 2 r_{d-1} >= ... >= 2^{d-1} r_1."""
    r = as_continuity(r)
    return all(r.order(s + 1) >= 2 * r.order(s) for s in range(1, r.d))


@dataclass(frozen=True)
class ExtendVerdict:
    onto: bool
    dim_sub: int
    image_rank: int
    dim_full: int
    kind: str
    witness: Optional[tuple] = None


def restriction_onto(T: Triangulation, Tsub: Triangulation, r, k: int,
                     kind: str = "spline") -> ExtendVerdict:
    """Is restriction from T onto the space on Tsub?  Witness when not."""
    if not is_subtriangulation(Tsub, T):
        raise ValueError("not a subtriangulation")
    if kind not in ("fe", "spline"):
        raise ValueError(f"unknown space kind {kind!r}")
    assemble = assemble_fe_space if kind == "fe" else assemble_superspline
    full = assemble(T, r, k)
    sub = assemble(Tsub, r, k)
    image = restrict_space(full, Tsub)
    ech = Echelon(sub.n_unknowns)
    for vec in image:
        ech.add_row(vec)
    image_rank = ech.rank
    onto = image_rank == sub.dim
    witness = None
    if not onto:
        for vec in sub.basis:
            if not ech.reduces_to_zero(vec):
                witness = tuple(vec)
                break
    return ExtendVerdict(onto=onto, dim_sub=sub.dim, image_rank=image_rank,
                         dim_full=full.dim, kind=kind, witness=witness)


def extension_feasible(T: Triangulation, Tsub: Triangulation, r, k: int,
                       u: Sequence, kind: str = "spline") -> bool:
    """Does any member of the space on T restrict to ``u`` on Tsub?

    Solved as exact linear feasibility: the blocks over Tsub's cells are
    pinned to ``u`` and the constraint rows are eliminated over the
    remaining blocks with an augmented right-hand side.
    """
    if not is_subtriangulation(Tsub, T):
        raise ValueError("not a subtriangulation")
    if kind == "fe":
        rows = fe_constraint_rows(T, r, k)
    elif kind == "spline":
        rows = superspline_constraint_rows(T, r, k)
    else:
        raise ValueError(f"unknown space kind {kind!r}")
    N = n_local(T.dim, k)
    total = N * len(T.cells)
    if len(u) != N * len(Tsub.cells):
        raise ValueError("coefficient vector length does not match the sub-mesh")
    fixed: dict[int, Fraction] = {}
    for pos, cell in enumerate(Tsub.cells):
        ci = T.cell_index(cell)
        for j in range(N):
            fixed[ci * N + j] = Fraction(u[pos * N + j])
    free_cols = [c for c in range(total) if c not in fixed]
    where = {c: i for i, c in enumerate(free_cols)}
    nfree = len(free_cols)
    ech = Echelon(nfree + 1)
    for row in rows:
        rhs = Fraction(0)
        reduced = [0] * (nfree + 1)
        for c, v in enumerate(row):
            if not v:
                continue
            pin = fixed.get(c)
            if pin is None:
                reduced[where[c]] = v
            elif pin:
                rhs -= v * pin
        reduced[nfree] = rhs
        if ech.add_row(reduced) == nfree:
            return False
    return True


@dataclass(frozen=True)
class WitnessReport:
    member_of_sub: bool
    extendable: bool


def verify_witness(T: Triangulation, Tsub: Triangulation, r, k: int,
                   u: Sequence) -> WitnessReport:
    """Exact membership of ``u`` in the sub-mesh space, and extendability."""
    member = superspline_member(Tsub, r, k, u)
    feasible = extension_feasible(T, Tsub, r, k, u, kind="spline")
    return WitnessReport(member_of_sub=member, extendable=feasible)


@dataclass(frozen=True)
class Witness:
    triangulation: Triangulation
    sub: Triangulation
    r: ContinuityVector
    k: int
    vector: tuple


def witness_k_rd(d: int, r, k: int) -> Witness:
    """Non-extendable member when the degree is too low (k <= 2 r_d).

    On the vertex-touch mesh the two outer cells are disjoint, so the
    balanced vertex-degree product placed on one of them is trivially smooth
    on the pair, yet its derivative data at the two touch vertices cannot be
    matched by a single polynomial on the middle cell.
    """
    r = as_continuity(r)
    if r.d != d:
        raise ValueError("continuity vector length must equal the dimension")
    rd = r.order(d)
    if k > 2 * rd:
        raise ValueError("the low-degree witness needs k <= 2 r_d")
    k0 = k // 2
    k1 = k - k0
    T, Tsub = builtin_mesh("vertex-touch", d)
    mid_frame = T.frame(Simplex(range(d + 1)))
    outer = Tsub.cells[1]  # the reflection through e_1; cell (0,...) sorts first
    outer_frame = T.frame(outer)
    lam0 = BBPoly.affine(outer_frame, mid_frame.gradients[0], mid_frame.offsets[0])
    lam1 = BBPoly.affine(outer_frame, mid_frame.gradients[1], mid_frame.offsets[1])
    u1 = lam0.power(k0).multiply(lam1.power(k1))
    N = n_local(d, k)
    vec = [Fraction(0)] * N + u1.to_vector()
    if not superspline_member(Tsub, r, k, vec):
        raise AssertionError("constructed witness is not smooth on the pair")
    return Witness(triangulation=T, sub=Tsub, r=r, k=k, vector=tuple(vec))


def witness_rd_rs(d: int, s: int, r, k: Optional[int] = None) -> Witness:
    """Non-extendable member when a continuity gap is too small.

    Requires r_s <= 2 r_{s-1} - 1 while every later gap doubles.  The witness
    lives on the two opposite orthant cells that flip the first s axes; its
    restriction data on the shared face forces contradictory coefficients in
    any orthant in between.
    """
    r = as_continuity(r)
    if r.d != d:
        raise ValueError("continuity vector length must equal the dimension")
    if not 2 <= s <= d:
        raise ValueError("need 2 <= s <= d")
    if r.order(s) > 2 * r.order(s - 1) - 1:
        raise ValueError("witness needs r_s <= 2 r_{s-1} - 1")
    for t in range(s + 1, d + 1):
        if r.order(t) < 2 * r.order(t - 1):
            raise ValueError("witness needs r_t >= 2 r_{t-1} for t > s")
    rd = r.order(d)
    degree = 2 * rd - r.order(s) + 1
    if k is None:
        k = 2 * rd + 1
    if k < degree:
        raise ValueError(f"degree k must be at least {degree}")
    T, _ = builtin_mesh("qua", d)
    flip = [1] * s + [0] * (d - s)
    mm_index = qua_cell(T, flip)
    pp_index = qua_cell(T, [0] * d)
    pair = T.subcomplex(sorted([pp_index, mm_index]))
    mm_cell = T.cells[mm_index]
    frame = T.frame(mm_cell)
    rbar = r.order(s) - r.order(s - 1) + 1
    poly = _axis_power(frame, s - 2, r.order(s - 1))
    poly = poly.multiply(_axis_power(frame, s - 1, rbar))
    for i in range(s, d):  # zero-based axis i is coordinate x_{i+1}
        poly = poly.multiply(_axis_power(frame, i, r.order(i + 1) - r.order(i)))
    tail = rd - r.order(s)
    if tail:
        grad = [Fraction(0)] * d
        for i in range(s, d):
            grad[i] = Fraction(-1)
        one_minus = BBPoly.affine(frame, grad, 1)
        poly = poly.multiply(one_minus.power(tail))
    poly = poly.elevate(k)
    N = n_local(d, k)
    vec = [Fraction(0)] * N + poly.to_vector()
    if not superspline_member(pair, r, k, vec):
        raise AssertionError("constructed witness is not smooth on the pair")
    return Witness(triangulation=T, sub=pair, r=r, k=k, vector=tuple(vec))


def _axis_power(frame, axis: int, power: int) -> BBPoly:
    d = frame.ambient_dim
    grad = [Fraction(0)] * d
    grad[axis] = Fraction(1)
    return BBPoly.affine(frame, grad, 0).power(power)
