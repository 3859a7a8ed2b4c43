import random
from fractions import Fraction

import pytest

from logsymplectic.poisson import pfaffian
from logsymplectic.ring import LaurentPoly, VarSpec, poly_from_string
from logsymplectic.toric import (
    betti_torus,
    certify,
    deformation_tangent_dim,
    log_hodge_numbers,
    make_toric,
    random_2general_toric,
    random_skew,
)

from conftest import EXPLICIT_GRID


class TestMakeToric:
    def test_smallest_block(self):
        t = make_toric([[0, 1], [-1, 0]])
        vs = t.structure.var_spec
        assert vs.total_vars == 2 and vs.divisor_vars == 2
        assert t.structure.bivector.coefficient((1, 2)) == poly_from_string("x1*x2", vs)

    def test_explicit(self):
        t = make_toric(EXPLICIT_GRID)
        assert t.n == 2
        assert pfaffian(t.matrix) == 8

    def test_non_skew_rejected(self):
        with pytest.raises(ValueError):
            make_toric([[0, 1], [1, 0]])

    def test_odd_size_rejected(self):
        with pytest.raises(ValueError):
            make_toric([[0]])


class TestCertify:
    def test_explicit_report(self):
        rep = certify(make_toric(EXPLICIT_GRID))
        assert rep["pfaffian"] == "8"
        assert rep["nonsingular"] and rep["jacobi_holds"]
        dd = rep["degeneracy_divisor"]
        assert dd["multiplicities"] == {"1": 1, "2": 1, "3": 1, "4": 1}
        assert dd["simple_normal_crossings"]
        assert rep["general_position"] == {"1": True, "2": True, "3": True, "4": False}
        assert rep["certificates_verified"]
        assert rep["log_symplectic_2_general"]

    def test_zero_matrix_degenerate(self):
        rep = certify(make_toric([[0] * 4 for _ in range(4)]))
        assert not rep["nonsingular"]
        assert rep["degeneracy_divisor"] is None
        assert not rep["log_symplectic_2_general"]

    def test_block_diagonal_not_three_general(self):
        grid = [
            [0, 2, 0, 0],
            [-2, 0, 0, 0],
            [0, 0, 0, 3],
            [0, 0, -3, 0],
        ]
        rep = certify(make_toric(grid))
        assert rep["nonsingular"]
        assert rep["general_position"]["3"] is False
        assert rep["general_position"]["4"] is False

    def test_surface_case_never_two_general(self):
        rep = certify(make_toric([[0, 1], [-1, 0]]))
        assert rep["nonsingular"]
        assert rep["general_position"]["2"] is False
        assert not rep["log_symplectic_2_general"]

    def test_random_mostly_two_general(self):
        rng = random.Random(1234)
        draws = 40
        hits = 0
        for _ in range(draws):
            rep = certify(make_toric(random_skew(rng, 4)))
            assert rep["certificates_verified"]
            hits += rep["general_position"]["2"]
        assert hits >= int(draws * 0.95)


class TestDimensionBookkeeping:
    def test_betti_row(self):
        assert [betti_torus(4, i) for i in range(5)] == [1, 4, 6, 4, 1]

    def test_betti_edges(self):
        assert betti_torus(6, 0) == 1
        assert sum(betti_torus(6, i) for i in range(7)) == 2**6
        with pytest.raises(ValueError):
            betti_torus(4, 5)

    def test_log_hodge(self):
        assert log_hodge_numbers(4, 0, 2) == 6
        assert log_hodge_numbers(4, 1, 2) == 0
        assert log_hodge_numbers(4, 3, 1) == 0
        assert log_hodge_numbers(4, 0, 0) == 1
        with pytest.raises(ValueError):
            log_hodge_numbers(4, 0, 5)

    def test_deformation_tangent(self):
        assert deformation_tangent_dim(2) == 6
        assert deformation_tangent_dim(3) == 15
        with pytest.raises(ValueError):
            deformation_tangent_dim(1)

    def test_three_routes_agree(self):
        for n in (2, 3, 4):
            pair_count = sum(1 for i in range(1, 2 * n + 1) for j in range(i + 1, 2 * n + 1))
            assert deformation_tangent_dim(n) == betti_torus(2 * n, 2) == pair_count


class TestRandomFixtures:
    def test_random_skew_shape(self):
        rng = random.Random(7)
        grid = random_skew(rng, 6)
        for i in range(6):
            assert grid[i][i] == 0
            for j in range(6):
                assert grid[i][j] == -grid[j][i]

    def test_rejection_sampler_deterministic(self):
        a = random_2general_toric(random.Random(99))
        b = random_2general_toric(random.Random(99))
        assert a.matrix == b.matrix
        rep = certify(a)
        assert rep["general_position"]["2"] and rep["nonsingular"]
