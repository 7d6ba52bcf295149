import itertools
import random
from fractions import Fraction

import pytest

from srk import builtin_mesh
from srk.bernstein import from_cartesian
from srk.extend import (check_a1, check_a2, extension_feasible,
                        restriction_onto, verify_witness, witness_k_rd,
                        witness_rd_rs)
from srk.spaces import assemble_fe_space, n_local, vector_blocks

from conftest import rand_fraction


def brute_force_a1(r, k):
    # evaluate the scaled chain r_d, 2 r_{d-1}, 4 r_{d-2}, ... directly
    d = len(r)
    chain = [2 ** (d - 1 - i) * r[i] for i in range(d)]
    non_increasing = all(a >= b for a, b in zip(chain[::-1], chain[::-1][1:]))
    return k >= 2 * r[-1] + 1 and non_increasing


def brute_force_a2(r):
    d = len(r)
    chain = [2 ** (d - 1 - i) * r[i] for i in range(d)]
    return all(a >= b for a, b in zip(chain[::-1], chain[::-1][1:]))


class TestAdmissibility:
    def test_known_cases(self):
        assert check_a1((1, 2), 5)
        assert not check_a1((1, 1), 5)
        assert not check_a1((1,), 2)
        assert check_a2((1, 2))
        assert not check_a2((1, 1))
        assert check_a2((0, 0, 0))

    def test_against_brute_force_sweep(self):
        for d in range(1, 4):
            for r in itertools.combinations_with_replacement(range(5), d):
                assert check_a2(r) == brute_force_a2(r)
                for k in range(0, 12, 3):
                    assert check_a1(r, k) == brute_force_a1(r, k)


class TestRestrictionOnto:
    def test_interval_catalog_cases(self):
        T, Tsub = builtin_mesh("intervals3", 1)
        cases = [((0,), 0, False), ((0,), 1, True), ((1,), 2, False),
                 ((1,), 3, True)]
        for r, k, onto in cases:
            v = restriction_onto(T, Tsub, r, k)
            assert v.onto is onto, (r, k)
            assert v.onto == (v.image_rank == v.dim_sub)
            if not onto:
                assert v.witness is not None

    def test_singular_vertex_cases(self):
        T, Tsub = builtin_mesh("singular-vertex-2d", 2)
        assert not restriction_onto(T, Tsub, (1, 1), 5).onto
        assert restriction_onto(T, Tsub, (1, 2), 5).onto

    def test_fe_restriction_always_onto(self):
        for name, d, r, k in (("intervals3", 1, (0,), 1),
                              ("intervals3", 1, (1,), 3),
                              ("vertex-touch", 1, (1,), 3),
                              ("qua", 1, (1,), 3),
                              ("singular-vertex-2d", 2, (1, 2), 5)):
            T, Tsub = builtin_mesh(name, d)
            v = restriction_onto(T, Tsub, r, k, kind="fe")
            assert v.onto, (name, r, k)

    def test_witness_soundness(self):
        for name, d, r, k in (("intervals3", 1, (0,), 0),
                              ("intervals3", 1, (1,), 2),
                              ("singular-vertex-2d", 2, (1, 1), 5)):
            T, Tsub = builtin_mesh(name, d)
            v = restriction_onto(T, Tsub, r, k)
            assert not v.onto
            report = verify_witness(T, Tsub, r, k, v.witness)
            assert report.member_of_sub and not report.extendable


class TestVerifyWitness:
    def test_paper_pair_from_quadratic_splines(self):
        # 0 on one outer interval, x on the other: smooth on the pair but
        # admits no smooth quadratic completion across the middle interval
        T, Tsub = builtin_mesh("intervals3", 1)
        N = n_local(1, 2)
        x_poly = from_cartesian(Tsub.frame(Tsub.cells[0]), {(1,): Fraction(1)},
                                degree=2)
        u = x_poly.to_vector() + [Fraction(0)] * N
        report = verify_witness(T, Tsub, (1,), 2, u)
        assert report.member_of_sub and not report.extendable

    def test_zero_vector_is_always_extendable(self):
        T, Tsub = builtin_mesh("singular-vertex-2d", 2)
        u = [Fraction(0)] * (2 * n_local(2, 5))
        report = verify_witness(T, Tsub, (1, 1), 5, u)
        assert report.member_of_sub and report.extendable

    def test_non_member_is_reported(self):
        T, Tsub = builtin_mesh("qua", 2)
        # jump across the shared vertex: value 1 on one cell, 0 on the other
        N = n_local(2, 1)
        one = from_cartesian(Tsub.frame(Tsub.cells[0]), {(0, 0): Fraction(1)},
                             degree=1)
        u = one.to_vector() + [Fraction(0)] * N
        report = verify_witness(T, Tsub, (0, 0), 1, u)
        assert not report.member_of_sub


class TestLowDegreeWitness:
    def test_one_dimensional_quadratic(self):
        w = witness_k_rd(1, (1,), 2)
        assert w.k == 2
        blocks = vector_blocks(w.sub, 2, w.vector)
        assert blocks[0].is_zero()
        outer = blocks[1]
        # the balanced product evaluates to x(1-x) on the far interval
        for x in (Fraction(3, 2), Fraction(2)):
            assert outer.evaluate([x]) == x * (1 - x)
        report = verify_witness(w.triangulation, w.sub, w.r, w.k, w.vector)
        assert report.member_of_sub and not report.extendable

    def test_two_dimensional_case(self):
        w = witness_k_rd(2, (1, 2), 4)
        report = verify_witness(w.triangulation, w.sub, w.r, w.k, w.vector)
        assert report.member_of_sub and not report.extendable

    def test_degree_guard(self):
        with pytest.raises(ValueError):
            witness_k_rd(1, (1,), 3)


class TestContinuityGapWitness:
    def test_planar_gap_polynomial(self):
        w = witness_rd_rs(2, 2, (1, 1), k=5)
        blocks = vector_blocks(w.sub, 5, w.vector)
        assert blocks[0].is_zero()
        rng = random.Random(53)
        for _ in range(5):
            pt = [rand_fraction(rng) for _ in range(2)]
            assert blocks[1].evaluate(pt) == pt[0] * pt[1]

    def test_gap_witness_degrees(self):
        w = witness_rd_rs(3, 3, (1, 2, 3), k=4)
        blocks = vector_blocks(w.sub, 4, w.vector)
        rng = random.Random(59)
        for _ in range(5):
            pt = [rand_fraction(rng) for _ in range(3)]
            assert blocks[1].evaluate(pt) == pt[1] ** 2 * pt[2] ** 2

        w = witness_rd_rs(3, 2, (1, 1, 2), k=4)
        blocks = vector_blocks(w.sub, 4, w.vector)
        for _ in range(5):
            pt = [rand_fraction(rng) for _ in range(3)]
            assert blocks[1].evaluate(pt) == pt[0] * pt[1] * pt[2] * (1 - pt[2])

    def test_sub_mesh_is_the_opposite_orthant_pair(self):
        w = witness_rd_rs(2, 2, (1, 1), k=5)
        ids = [c.vertex_ids for c in w.sub.cells]
        assert ids == [(0, 1, 3), (0, 2, 4)]

    def test_preconditions(self):
        with pytest.raises(ValueError):
            witness_rd_rs(2, 2, (1, 2))  # the gap doubles, no witness exists
        with pytest.raises(ValueError):
            witness_rd_rs(3, 2, (1, 1, 1))  # later gap fails to double
        with pytest.raises(ValueError):
            witness_rd_rs(2, 1, (1, 1))  # s starts at 2
        with pytest.raises(ValueError):
            witness_rd_rs(2, 2, (1, 1), k=1)  # degree below the witness


class TestDegreeFreeCrossValidation:
    def test_doubling_vector_extends_at_reduction_degree(self):
        # chain holds: restriction is onto at the canonical degree 2 r_d + 1
        T, Tsub = builtin_mesh("qua", 2)
        r = (1, 2)
        assert check_a2(r)
        assert restriction_onto(T, Tsub, r, 2 * 2 + 1).onto

    def test_gap_vector_fails_at_witness_degree(self):
        r = (1, 1)
        assert not check_a2(r)
        w = witness_rd_rs(2, 2, r)  # defaults to degree 2 r_d + 1 = 3
        assert w.k == 3
        report = verify_witness(w.triangulation, w.sub, w.r, w.k, w.vector)
        assert report.member_of_sub and not report.extendable


def test_extension_feasible_matches_restriction_images(rng):
    # any restricted member must be feasible; the verdict witness must not be
    T, Tsub = builtin_mesh("intervals3", 1)
    r, k = (1,), 2
    v = restriction_onto(T, Tsub, r, k)
    full = [list(vec) for vec in
            __import__("srk.spaces", fromlist=["assemble_superspline"])
            .assemble_superspline(T, r, k).basis]
    from srk.spaces import restrict_space, assemble_superspline

    basis = assemble_superspline(T, r, k)
    for vec in restrict_space(basis, Tsub):
        assert extension_feasible(T, Tsub, r, k, vec)
    assert not extension_feasible(T, Tsub, r, k, v.witness)
