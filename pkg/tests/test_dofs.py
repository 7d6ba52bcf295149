import itertools
import math
import random
from fractions import Fraction

import pytest

from srk import (RatMatrix, Simplex, Triangulation, nullspace, reference_mesh,
                 builtin_mesh)
from srk.bernstein import BBPoly, compositions
from srk.dofs import (NormalFrame, apply_dof, dof_set_for_cell, face_dofs,
                      normal_frame, unisolvency_check)

from conftest import chain_mesh, rand_fraction


def brute_force_dof_count(d, r_values, k):
    """Independent count: enumerate weights per face straight from the rules."""
    def r_of(t):
        return 0 if t == 0 else r_values[t - 1]

    def bubble_dim(s, n):
        slots = d - s + 1
        count = 0
        for sigma in itertools.product(range(k - n + 1), repeat=slots):
            if sum(sigma) != k - n:
                continue
            good = True
            for size in range(1, slots):
                for subset in itertools.combinations(range(slots), size):
                    if sum(sigma[i] for i in subset) <= r_of(size + s) - n:
                        good = False
                        break
                if not good:
                    break
            count += good
        return count

    total = 0
    per_dim = {}
    for s in range(d + 1):
        face_dim = d - s
        n_faces = math.comb(d + 1, face_dim + 1)
        per_face = 0
        for n in range(r_of(s) + 1):
            thetas = math.comb(n + s - 1, s - 1) if s else (1 if n == 0 else 0)
            per_face += thetas * bubble_dim(s, n)
        per_dim[face_dim] = per_face * n_faces
        total += per_face * n_faces
    return total, per_dim


class TestNormalFrame:
    def test_horizontal_edge_in_plane(self):
        T = Triangulation(2, [[0, 0], [1, 0], [0, 1]], [[0, 1, 2]])
        nf = normal_frame(Simplex([0, 1]), T)
        assert nf.normals == ((0, 1),)

    def test_vertex_on_line(self):
        T = chain_mesh([0, 1])
        nf = normal_frame(Simplex([0]), T)
        assert nf.normals == ((1,),)

    def test_edge_along_last_axis_in_space(self):
        T = Triangulation(3, [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
                          [[0, 1, 2, 3]])
        nf = normal_frame(Simplex([0, 3]), T)
        assert nf.normals == ((1, 0, 0), (0, 1, 0))

    def test_orthogonality_invariants(self):
        T, _ = builtin_mesh("qua", 3)
        for dim in (0, 1, 2):
            for F in T.faces(dim):
                nf = normal_frame(F, T)
                assert len(nf.normals) == 3 - dim
                for a, b in itertools.combinations(nf.normals, 2):
                    assert sum(x * y for x, y in zip(a, b)) == 0
                pts = T.points(F)
                for j in range(1, len(pts)):
                    edge = [q - p for p, q in zip(pts[0], pts[j])]
                    for nvec in nf.normals:
                        assert sum(x * y for x, y in zip(nvec, edge)) == 0


class TestApplyDof:
    def test_vertex_value_of_one(self):
        T = reference_mesh(2)
        dofs = face_dofs(Simplex([0]), T, (0, 0), 2)
        assert len(dofs) == 1
        one = BBPoly(T.frame(T.cells[0]), 2,
                     {a: math.comb(2, a[0]) * math.comb(2 - a[0], a[1]) * 1
                      for a in compositions(2, 3)})
        # partition of unity written at degree 2
        assert apply_dof(dofs[0], one) == 1

    def test_hermite_slope_at_left_endpoint(self):
        T = chain_mesh([0, 1])
        dofs = face_dofs(Simplex([0]), T, (1,), 3)
        slope = [l for l in dofs if l.n == 1]
        assert len(slope) == 1 and slope[0].frame.normals == ((1,),)
        u = BBPoly.monomial(T.frame(T.cells[0]), (0, 1)).elevate(3)  # u = x
        assert apply_dof(slope[0], u) == 1

    def test_edge_moment_of_flat_function_is_zero(self):
        T = reference_mesh(2)
        edge = Simplex([1, 2])
        dofs = [l for l in face_dofs(edge, T, (1, 2), 5) if l.n == 1]
        assert len(dofs) == 1 and dofs[0].sigma == (2, 2)
        const = BBPoly(T.frame(T.cells[0]), 5,
                       {a: Fraction(math.factorial(5), math.prod(
                           math.factorial(x) for x in a)) for a in compositions(5, 3)})
        assert apply_dof(dofs[0], const) == 0  # constant has no normal slope

    def test_face_must_belong_to_cell(self):
        T = chain_mesh([0, 1, 2])
        dofs = face_dofs(Simplex([2]), T, (1,), 3)
        u = BBPoly.monomial(T.frame(T.cells[0]), (3, 0))
        with pytest.raises(ValueError):
            apply_dof(dofs[0], u)


class TestDofCounts:
    @pytest.mark.parametrize("d,r,k,expected", [
        (1, (1,), 3, 4),
        (2, (1, 2), 5, 21),
        (2, (1, 1), 5, 24),
        (2, (2, 4), 9, 55),
    ])
    def test_counts_match_independent_enumeration(self, d, r, k, expected):
        T = reference_mesh(d)
        dofs = dof_set_for_cell(T.cells[0], T, r, k)
        brute_total, brute_per_dim = brute_force_dof_count(d, r, k)
        assert len(dofs) == expected == brute_total
        assert dofs.per_face_dim_counts() == {
            dim: cnt for dim, cnt in brute_per_dim.items() if cnt
        }

    def test_breakdown_of_24(self):
        _, per_dim = brute_force_dof_count(2, (1, 1), 5)
        assert per_dim[0] == 9 and per_dim[1] == 15 and per_dim[2] == 0

    def test_canonical_ordering(self):
        T = reference_mesh(2)
        dofs = dof_set_for_cell(T.cells[0], T, (1, 2), 5)
        keys = [(l.face.dim, l.face.vertex_ids, l.n, l.theta, l.sigma) for l in dofs]
        expected = sorted(keys, key=lambda t: (-t[0], t[1], t[2], t[3], t[4]))
        assert keys == expected
        assert [l.ordinal for l in dofs] == list(range(len(dofs)))


class TestUnisolvency:
    def test_argyris_family(self):
        T = reference_mesh(2)
        v = unisolvency_check(T.cells[0], T, (1, 2), 5)
        assert v.unisolvent and v.dof_count == v.rank == v.dim_pk == 21

    def test_equal_orders_overdetermined(self):
        T = reference_mesh(2)
        v = unisolvency_check(T.cells[0], T, (1, 1), 5)
        assert v.status == "count_mismatch"
        assert (v.dof_count, v.dim_pk) == (24, 21)

    def test_linear_lagrange(self):
        T = reference_mesh(1)
        v = unisolvency_check(T.cells[0], T, (0,), 1)
        assert v.unisolvent and v.dof_count == 2

    def test_quintic_order_two_family(self):
        T = reference_mesh(2)
        v = unisolvency_check(T.cells[0], T, (2, 4), 9)
        assert v.unisolvent and v.dof_count == 55
        assert v.per_face_dim == {0: 45, 1: 9, 2: 1}

    def test_frame_scaling_changes_nothing(self):
        T = reference_mesh(2)

        def scaled(F, mesh, _factors=itertools.cycle((2, 3, 5))):
            base = normal_frame(F, mesh)
            f = next(_factors)
            return NormalFrame(face=base.face,
                               normals=tuple(tuple(f * x for x in v)
                                             for v in base.normals))

        plain = unisolvency_check(T.cells[0], T, (1, 2), 5)
        rescaled = unisolvency_check(T.cells[0], T, (1, 2), 5, frame_factory=scaled)
        assert plain.status == rescaled.status == "unisolvent"
        assert plain.rank == rescaled.rank

    def test_geometry_independence_of_counts_and_verdict(self):
        skew = Triangulation(2, [[0, 0], [3, 1], [1, 2]], [[0, 1, 2]])
        ref = reference_mesh(2)
        for r, k in (((1, 2), 5), ((1, 1), 5)):
            a = unisolvency_check(ref.cells[0], ref, r, k)
            b = unisolvency_check(skew.cells[0], skew, r, k)
            assert a.status == b.status
            assert a.dof_count == b.dof_count
            assert a.per_face_dim == b.per_face_dim


class TestSharedFaceContinuity:
    def test_matched_pairs_have_equal_derivative_traces(self):
        # two triangles sharing the diagonal; match every functional on the
        # shared edge and its vertices, then compare all order<=1 traces
        T = Triangulation(2, [[0, 0], [1, 0], [0, 1], [1, 1]],
                          [[0, 1, 2], [1, 2, 3]])
        r, k = (1, 2), 5
        edge = Simplex([1, 2])
        shared = face_dofs(edge, T, r, k)
        for v_id in (1, 2):
            shared = shared + face_dofs(Simplex([v_id]), T, r, k)
        cell_a, cell_b = T.cells
        frame_a, frame_b = T.frame(cell_a), T.frame(cell_b)
        alphas = compositions(k, 3)
        rows = []
        for l in shared:
            row = [apply_dof(l, BBPoly.monomial(frame_a, a)) for a in alphas]
            row += [-apply_dof(l, BBPoly.monomial(frame_b, a)) for a in alphas]
            rows.append(row)
        kernel = nullspace(RatMatrix(rows))
        rng = random.Random(47)
        for _ in range(5):
            vec = [Fraction(0)] * (2 * len(alphas))
            for b in kernel:
                w = rand_fraction(rng)
                vec = [x + w * y for x, y in zip(vec, b)]
            u_a = BBPoly.from_vector(frame_a, k, vec[:len(alphas)])
            u_b = BBPoly.from_vector(frame_b, k, vec[len(alphas):])
            for beta in ((0, 0), (1, 0), (0, 1)):
                assert u_a.derivative_multi(beta).trace(edge) == \
                    u_b.derivative_multi(beta).trace(edge)
