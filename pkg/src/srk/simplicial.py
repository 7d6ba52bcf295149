"""Simplicial complexes: triangulations, stars, barycentric frames, mesh I/O.

Vertices carry global integer ids; a face is identified by its strictly
increasing id tuple, so two cells sharing a face agree on its identity and
on the vertex order of its barycentric coordinates.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exact import RatMatrix, rational_str, solve


class MeshError(ValueError):
    """Raised when a vertex/cell table does not describe a valid complex."""


class Simplex:
    """A subsimplex, identified by its strictly increasing vertex ids."""

    __slots__ = ("vertex_ids",)

    def __init__(self, vertex_ids: Iterable[int]):
        ids = tuple(int(v) for v in vertex_ids)
        if any(a >= b for a, b in zip(ids, ids[1:])):
            raise MeshError(f"vertex ids must be strictly increasing, got {ids}")
        if not ids:
            raise MeshError("a simplex needs at least one vertex")
        self.vertex_ids = ids

    @property
    def dim(self) -> int:
        return len(self.vertex_ids) - 1

    def faces(self, dim: int) -> list["Simplex"]:
        return [Simplex(c) for c in itertools.combinations(self.vertex_ids, dim + 1)]

    def contains(self, other: "Simplex") -> bool:
        return set(other.vertex_ids) <= set(self.vertex_ids)

    def __eq__(self, other):
        return isinstance(other, Simplex) and self.vertex_ids == other.vertex_ids

    def __hash__(self):
        return hash(self.vertex_ids)

    def __lt__(self, other):
        return self.vertex_ids < other.vertex_ids

    def __repr__(self):
        return f"Simplex{self.vertex_ids}"


class BarycentricFrame:
    """Affine forms of a simplex: one rational (gradient, offset) per vertex.

    The forms satisfy lambda_i(V_j) = delta_ij on the simplex's vertices and
    sum to 1 on its affine hull.  For a lower-dimensional simplex the
    gradients are taken in the tangent space of the simplex, which makes the
    construction canonical; a single vertex gets the constant form 1.
    """

    __slots__ = ("simplex", "points", "gradients", "offsets", "_face_frames")

    def __init__(self, simplex: Simplex, points: Sequence[Sequence[Fraction]]):
        self.simplex = simplex
        self.points = tuple(tuple(Fraction(x) for x in p) for p in points)
        if len(self.points) != len(simplex.vertex_ids):
            raise MeshError("one coordinate point per vertex required")
        self.gradients, self.offsets = self._solve_forms()
        self._face_frames: dict[tuple, BarycentricFrame] = {}

    def _solve_forms(self):
        pts = self.points
        m = len(pts) - 1
        if m == 0:
            return ((tuple(Fraction(0) for _ in pts[0]),), (Fraction(1),))
        edges = [tuple(b - a for a, b in zip(pts[0], pts[j])) for j in range(1, m + 1)]
        gram = RatMatrix([[_dot(e1, e2) for e2 in edges] for e1 in edges])
        gradients, offsets = [], []
        for i in range(m + 1):
            rhs = [(1 if i == j else 0) - (1 if i == 0 else 0) for j in range(1, m + 1)]
            coeff = solve(gram, rhs)
            if coeff is None:
                raise MeshError(f"degenerate simplex {self.simplex}")
            g = tuple(
                sum(c * e[t] for c, e in zip(coeff, edges)) for t in range(len(pts[0]))
            )
            off = (Fraction(1) if i == 0 else Fraction(0)) - _dot(g, pts[0])
            gradients.append(g)
            offsets.append(off)
        return tuple(gradients), tuple(offsets)

    @property
    def dim(self) -> int:
        return len(self.points) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.points[0])

    def lambda_at(self, point: Sequence) -> list[Fraction]:
        pt = [Fraction(x) for x in point]
        return [_dot(g, pt) + c for g, c in zip(self.gradients, self.offsets)]

    def directional(self, v: Sequence) -> list[Fraction]:
        """Derivative of every form along the direction v (a constant each)."""
        vv = [Fraction(x) for x in v]
        return [_dot(g, vv) for g in self.gradients]

    def face_frame(self, positions: Sequence[int]) -> "BarycentricFrame":
        """Canonical frame of the face spanned by the given vertex positions."""
        pos = tuple(positions)
        if pos == tuple(range(len(self.points))):
            return self
        cached = self._face_frames.get(pos)
        if cached is None:
            ids = tuple(self.simplex.vertex_ids[p] for p in pos)
            cached = BarycentricFrame(Simplex(ids), [self.points[p] for p in pos])
            self._face_frames[pos] = cached
        return cached


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


class Triangulation:
    """A pure d-dimensional simplicial complex with rational vertex coordinates.

    Validation at load time: every cell is a nondegenerate d-simplex and the
    intersection of any two cells is a common face of both.  The face lattice
    holds every subsimplex of every cell, deduplicated by id tuple.
    """

    def __init__(self, dim: int, vertices: Sequence[Sequence], cells: Iterable[Iterable[int]],
                 validate: bool = True):
        if dim < 1:
            raise MeshError("ambient dimension must be >= 1")
        self.dim = dim
        self.vertices = tuple(tuple(Fraction(x) for x in v) for v in vertices)
        for v in self.vertices:
            if len(v) != dim:
                raise MeshError("vertex coordinate length does not match dimension")
        cell_list = []
        for cell in cells:
            ids = tuple(sorted(int(i) for i in cell))
            if len(set(ids)) != len(ids):
                raise MeshError(f"repeated vertex in cell {ids}")
            if len(ids) != dim + 1:
                raise MeshError(f"cell {ids} does not have {dim + 1} vertices")
            if ids[0] < 0 or ids[-1] >= len(self.vertices):
                raise MeshError(f"cell {ids} references an unknown vertex")
            cell_list.append(Simplex(ids))
        if len({c.vertex_ids for c in cell_list}) != len(cell_list):
            raise MeshError("duplicate cells")
        if not cell_list:
            raise MeshError("a triangulation needs at least one cell")
        self.cells = tuple(sorted(cell_list))
        self._cell_index = {c.vertex_ids: i for i, c in enumerate(self.cells)}
        self._frames: dict[tuple, BarycentricFrame] = {}

        if validate:
            for c in self.cells:
                self.frame(c)  # raises on affine dependence
            self._check_pairwise_faces()

        lattice: dict[int, set] = {s: set() for s in range(dim + 1)}
        for c in self.cells:
            for size in range(1, dim + 2):
                for sub in itertools.combinations(c.vertex_ids, size):
                    lattice[size - 1].add(sub)
        self.face_lattice = {
            s: tuple(Simplex(ids) for ids in sorted(members))
            for s, members in lattice.items()
        }
        stars: dict[tuple, list] = {}
        for c in self.cells:
            for size in range(1, dim + 2):
                for sub in itertools.combinations(c.vertex_ids, size):
                    stars.setdefault(sub, []).append(c)
        self._stars = {ids: tuple(cs) for ids, cs in stars.items()}

    # -- geometry ---------------------------------------------------------

    def coords(self, vertex_id: int) -> tuple:
        return self.vertices[vertex_id]

    def points(self, s: Simplex) -> list[tuple]:
        return [self.vertices[i] for i in s.vertex_ids]

    def frame(self, s: Simplex) -> BarycentricFrame:
        cached = self._frames.get(s.vertex_ids)
        if cached is None:
            cached = BarycentricFrame(s, self.points(s))
            self._frames[s.vertex_ids] = cached
        return cached

    def _check_pairwise_faces(self):
        for c1, c2 in itertools.combinations(self.cells, 2):
            if not self._intersection_is_common_face(c1, c2):
                raise MeshError(
                    f"cells {c1.vertex_ids} and {c2.vertex_ids} do not meet in a common face"
                )

    def _intersection_is_common_face(self, c1: Simplex, c2: Simplex) -> bool:
        # The intersection of two closed full-dimensional simplices is a
        # bounded polytope cut out by their 2(d+1) barycentric half-spaces;
        # every extreme point solves d of the boundary hyperplanes.  The
        # complex is valid iff each such feasible point uses only shared
        # vertices on both sides.
        d = self.dim
        shared = set(c1.vertex_ids) & set(c2.vertex_ids)
        f1, f2 = self.frame(c1), self.frame(c2)
        planes = [(g, off) for g, off in zip(f1.gradients, f1.offsets)]
        planes += [(g, off) for g, off in zip(f2.gradients, f2.offsets)]
        for combo in itertools.combinations(range(len(planes)), d):
            mat = RatMatrix([planes[i][0] for i in combo])
            rhs = [-planes[i][1] for i in combo]
            x = solve(mat, rhs)
            if x is None:
                continue
            lam1 = f1.lambda_at(x)
            lam2 = f2.lambda_at(x)
            if any(v < 0 for v in lam1) or any(v < 0 for v in lam2):
                continue
            for vid, lam in zip(c1.vertex_ids, lam1):
                if vid not in shared and lam != 0:
                    return False
            for vid, lam in zip(c2.vertex_ids, lam2):
                if vid not in shared and lam != 0:
                    return False
        return True

    # -- combinatorics ----------------------------------------------------

    def faces(self, dim: int) -> tuple:
        return self.face_lattice.get(dim, ())

    def has_face(self, s: Simplex) -> bool:
        return s.vertex_ids in self._stars

    def star(self, s: Simplex) -> tuple:
        got = self._stars.get(s.vertex_ids)
        if got is None:
            raise MeshError(f"{s} is not a face of this triangulation")
        return got

    def cell_index(self, s: Simplex) -> int:
        idx = self._cell_index.get(s.vertex_ids)
        if idx is None:
            raise MeshError(f"{s} is not a cell of this triangulation")
        return idx

    def subcomplex(self, cell_indices: Sequence[int]) -> "Triangulation":
        """The pure subcomplex spanned by the chosen cells (same vertex table)."""
        picked = [self.cells[i].vertex_ids for i in cell_indices]
        return Triangulation(self.dim, self.vertices, picked, validate=False)

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": [[rational_str(x) for x in v] for v in self.vertices],
            "cells": [list(c.vertex_ids) for c in self.cells],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Triangulation":
        try:
            dim = int(obj["dim"])
            vertices = [[Fraction(x) for x in v] for v in obj["vertices"]]
            cells = obj["cells"]
        except (KeyError, TypeError, ValueError) as exc:
            raise MeshError(f"malformed mesh object: {exc}") from exc
        return cls(dim, vertices, cells)

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def star(F: Simplex, T: Triangulation) -> tuple:
    """All d-cells of T containing F, in lexicographic cell order."""
    return T.star(F)


def is_subtriangulation(Tp: Triangulation, T: Triangulation) -> bool:
    """True iff every cell of Tp is a cell of T with consistent coordinates."""
    if Tp.dim != T.dim:
        return False
    used = set()
    for c in Tp.cells:
        if c.vertex_ids not in T._cell_index:
            return False
        used.update(c.vertex_ids)
    return all(Tp.vertices[i] == T.vertices[i] for i in used)


def barycentric_frame(F: Simplex, T: Triangulation) -> BarycentricFrame:
    """Exact affine forms with lambda_i(V_j) = delta_ij on F's vertices."""
    return T.frame(F)


def reference_mesh(d: int) -> Triangulation:
    """One standard d-simplex conv{0, e_1, ..., e_d} as a triangulation."""
    verts = [[Fraction(0)] * d]
    for i in range(d):
        e = [Fraction(0)] * d
        e[i] = Fraction(1)
        verts.append(e)
    return Triangulation(d, verts, [list(range(d + 1))])


BUILTIN_MESH_NAMES = ("intervals3", "singular-vertex-2d", "qua", "vertex-touch")


def builtin_mesh(name: str, d: int) -> tuple[Triangulation, Triangulation]:
    """A catalog mesh together with its distinguished subtriangulation."""
    if d < 1:
        raise MeshError("d must be >= 1")
    if name == "intervals3":
        if d != 1:
            raise MeshError("intervals3 is one-dimensional")
        T = Triangulation(1, [[-1], [0], [1], [2]], [[0, 1], [1, 2], [2, 3]])
        sub = [T.cell_index(Simplex(ids)) for ids in [(0, 1), (2, 3)]]
        return T, T.subcomplex(sub)
    if name == "singular-vertex-2d":
        if d != 2:
            raise MeshError("singular-vertex-2d is two-dimensional")
        verts = [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]]
        cells = [[0, 1, 3], [0, 2, 4], [0, 1, 4]]
        T = Triangulation(2, verts, cells)
        sub = [T.cell_index(Simplex(ids)) for ids in [(0, 1, 3), (0, 2, 4)]]
        return T, T.subcomplex(sub)
    if name == "qua":
        T = _qua_mesh(d)
        first = qua_cell(T, [0] * d)
        last = qua_cell(T, [1] * d)
        return T, T.subcomplex(sorted([first, last]))
    if name == "vertex-touch":
        return _vertex_touch_mesh(d)
    raise MeshError(f"unknown builtin mesh {name!r}")


def _qua_mesh(d: int) -> Triangulation:
    # Triangulation of the L^1 unit ball: vertex 0 is the origin and the
    # vertices 2i-1 / 2i are +e_i / -e_i; one cell per orthant.
    verts = [[Fraction(0)] * d]
    for i in range(d):
        plus = [Fraction(0)] * d
        plus[i] = Fraction(1)
        minus = [Fraction(0)] * d
        minus[i] = Fraction(-1)
        verts.append(plus)
        verts.append(minus)
    cells = []
    for signs in itertools.product((0, 1), repeat=d):
        cells.append([0] + [2 * i + 1 + signs[i] for i in range(d)])
    return Triangulation(d, verts, cells)


def qua_cell(T: Triangulation, signs: Sequence[int]) -> int:
    """Cell index of the orthant with the given sign pattern (0 -> +e_i)."""
    ids = tuple(sorted([0] + [2 * i + 1 + signs[i] for i in range(len(signs))]))
    return T.cell_index(Simplex(ids))


def _vertex_touch_mesh(d: int) -> tuple[Triangulation, Triangulation]:
    # Middle cell K = standard simplex; K0 and K1 are its point reflections
    # through V_0 = origin and V_1 = e_1, so K0 and K1 are disjoint while
    # each touches K in exactly one vertex.
    zero = [Fraction(0)] * d

    def e(i, scale=1):
        v = [Fraction(0)] * d
        v[i] = Fraction(scale)
        return v

    verts = [zero] + [e(i) for i in range(d)]
    k_ids = list(range(d + 1))
    k0_ids = [0]
    for i in range(d):
        verts.append(e(i, -1))
        k0_ids.append(len(verts) - 1)
    k1_ids = [1]
    verts.append(e(0, 2))
    k1_ids.append(len(verts) - 1)
    for i in range(1, d):
        v = e(0, 2)
        v[i] = Fraction(-1)
        verts.append(v)
        k1_ids.append(len(verts) - 1)
    T = Triangulation(d, verts, [k_ids, k0_ids, k1_ids])
    sub = [T.cell_index(Simplex(sorted(k0_ids))), T.cell_index(Simplex(sorted(k1_ids)))]
    return T, T.subcomplex(sorted(sub))
