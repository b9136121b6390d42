"""
Tests for exact integer linear algebra
"""

import random

import pytest

from core.errors import PreconditionError
from core.intlinalg import (AbelianInvariants, IntMatrix, Lattice, Subquotient, elementary_divisors,
                            homology_of_pair, homology_presentation, homology_with_relations, integer_rank,
                            kernel_basis, kernel_modulo, rank_mod_p, rank_mod_p_columns, smith_normal_form,
                            xgcd, _smith_dense)


@pytest.mark.parametrize("a, b", [(240, 46), (-12, 18), (0, 5), (7, 0), (0, 0)])
def test_xgcd(a, b):
    x, y, g = xgcd(a, b)
    assert x * a + y * b == g
    assert g >= 0
    if a or b:
        assert a % g == 0 and b % g == 0


class TestIntMatrix:
    def test_constructors_agree(self):
        dense = IntMatrix.from_dense([[1, 0, 2], [0, -3, 0]])
        triplets = IntMatrix.from_triplets(2, 3, [(0, 0, 1), (0, 2, 1), (0, 2, 1), (1, 1, -3)])
        columns = IntMatrix.from_columns(2, [[1, 0], {1: -3}, [2, 0]])
        assert dense == triplets == columns
        assert dense.nonzero_count() == 3
        assert dense.to_dense() == [[1, 0, 2], [0, -3, 0]]

    def test_product_and_apply(self):
        A = IntMatrix.from_dense([[1, 2], [3, 4]])
        B = IntMatrix.from_dense([[0, 1], [1, 0]])
        assert (A @ B).to_dense() == [[2, 1], [4, 3]]
        assert A.apply([1, -1]) == [-1, -1]
        assert A.apply({1: 2}) == [4, 8]
        assert A.transpose().to_dense() == [[1, 3], [2, 4]]

    def test_shape_errors(self):
        with pytest.raises(PreconditionError):
            IntMatrix.from_dense([[1, 2]]) @ IntMatrix.from_dense([[1, 2]])
        with pytest.raises(PreconditionError):
            IntMatrix.from_triplets(1, 1, [(1, 0, 1)])

    def test_json_forms(self):
        A = IntMatrix.from_dense([[0, 5], [7, 0]])
        assert IntMatrix.from_json(A.to_json(sparse=True)) == A
        assert IntMatrix.from_json(A.to_json(sparse=False)) == A

    def test_layout_follows_settings(self, settings):
        A = IntMatrix.identity(10)
        assert A.layout == "dense"
        settings.set_sparse_layout(0.5, 5)
        assert A.layout == "sparse"


class TestSmithNormalForm:
    def test_known_example(self):
        A = IntMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        snf = smith_normal_form(A)
        assert snf.diagonal == (2, 6, 12)
        assert snf.U @ A @ snf.V == snf.S
        assert snf.U @ snf.U_inv == IntMatrix.identity(3)
        assert snf.V @ snf.V_inv == IntMatrix.identity(3)

    def test_rectangular_with_zero_rows(self):
        A = IntMatrix.from_dense([[2, 0, 0], [0, 3, 0]])
        snf = smith_normal_form(A)
        assert snf.diagonal == (1, 6)
        assert snf.rank == 2
        assert snf.U @ A @ snf.V == snf.S

    def test_elementary_divisors(self):
        assert elementary_divisors(IntMatrix.from_dense([[2, 0], [0, 3]])) == [1, 6]
        assert elementary_divisors(IntMatrix.zero(3, 2)) == []
        assert integer_rank(IntMatrix.from_dense([[1, 2], [2, 4]])) == 1

    def test_sparse_and_dense_paths_agree(self, settings):
        data = [[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0], [1, 0, 1, 0]]
        dense = elementary_divisors(IntMatrix.from_dense(data))
        settings.set_sparse_layout(0.9, 2)
        sparse = elementary_divisors(IntMatrix.from_dense(data))
        assert dense == sparse == [1, 1, 3]


class TestRanksAndKernels:
    def test_rank_mod_p(self):
        A = IntMatrix.from_dense([[1, 1], [1, -1]])
        assert rank_mod_p(A, 2) == 1
        assert rank_mod_p(A, 3) == 2

    def test_rank_mod_p_needs_prime(self):
        with pytest.raises(PreconditionError):
            rank_mod_p(IntMatrix.identity(2), 4)

    def test_kernel_basis(self):
        A = IntMatrix.from_dense([[1, 2, 3], [2, 4, 6]])
        basis = kernel_basis(A)
        assert len(basis) == 2
        for vec in basis:
            assert A.apply(vec) == [0, 0]
        assert Lattice(3, basis) == Lattice(3, [[2, -1, 0], [3, 0, -1]])

    def test_kernel_basis_with_torsion_core(self):
        A = IntMatrix.from_dense([[2, 4]])
        assert Lattice(2, kernel_basis(A)) == Lattice(2, [[2, -1]])

    def test_kernel_modulo(self):
        A = IntMatrix.from_dense([[2]])
        assert Lattice(1, kernel_modulo(A, [4])) == Lattice(1, [[2]])
        assert Lattice(1, kernel_modulo(A, [2])) == Lattice(1, [[1]])
        with pytest.raises(PreconditionError):
            kernel_modulo(A, [2, 2])


class TestLattices:
    def test_membership(self):
        L = Lattice(2, [[2, 0], [0, 3]])
        assert [4, 3] in L
        assert [1, 0] not in L
        assert L.rank == 2
        coeffs = L.solve([4, 9])
        assert coeffs is not None
        combined = [sum(c * b[i] for c, b in zip(coeffs, L.basis())) for i in range(2)]
        assert combined == [4, 9]

    def test_gcd_merge(self):
        L = Lattice(1, [[4], [6]])
        assert L.basis() == [[2]]

    def test_equality(self):
        assert Lattice(2, [[1, 1], [0, 1]]) == Lattice(2, [[1, 0], [0, 1]])
        assert Lattice(2, [[2, 0]]) != Lattice(2, [[1, 0]])

    def test_subquotient(self):
        sq = Subquotient(2, [[1, 0], [0, 1]], [[2, 0], [0, 3]])
        assert sq.orders == (6,)
        assert sq.invariants == AbelianInvariants(0, (6,))
        assert sq.coordinates([2, 0]) == [0]
        assert sq.coordinates([0, 3]) == [0]
        assert sq.coordinates([1, 1]) != [0]

    def test_subquotient_needs_relations_inside(self):
        with pytest.raises(PreconditionError):
            Subquotient(1, [[2]], [[1]])


class TestAbelianInvariants:
    def test_from_diagonal(self):
        inv = AbelianInvariants.from_diagonal([2, 3, 0, 1])
        assert inv == AbelianInvariants(1, (6,))
        assert str(inv) == "Z x Z/6"
        assert inv.primary() == [2, 3]
        assert inv.primary_str() == "Z x C2 x C3"
        assert inv.order() is None

    def test_from_primary(self):
        inv = AbelianInvariants.from_primary([2, 4, 3])
        assert inv.torsion == (2, 12)
        assert inv.order() == 24
        assert inv.exponent() == 12
        assert inv.p_part(2) == AbelianInvariants(0, (2, 4))
        assert inv.p_part(5).is_trivial()

    def test_trivial(self):
        inv = AbelianInvariants()
        assert str(inv) == "0"
        assert inv.primary_str() == "Trivial"
        assert inv.exponent() == 1

    def test_direct_sum(self):
        total = AbelianInvariants(0, (2,)).direct_sum(AbelianInvariants(1, (6,)))
        assert total == AbelianInvariants(1, (2, 6))

    @pytest.mark.parametrize("torsion", [(2, 3), (1,), (4, 2)])
    def test_rejects_bad_chains(self, torsion):
        with pytest.raises(PreconditionError):
            AbelianInvariants(0, torsion)

    def test_to_dict(self):
        assert AbelianInvariants(2, (2, 4)).to_dict() == {"free_rank": 2, "torsion": [2, 4]}


class TestHomology:
    def test_homology_of_pair(self):
        # Z <-0- Z <-2- Z
        assert homology_of_pair(IntMatrix.zero(0, 1), IntMatrix.from_dense([[2]])) == AbelianInvariants(0, (2,))
        assert homology_of_pair(IntMatrix.zero(0, 1), IntMatrix.zero(1, 0)) == AbelianInvariants(1)

    def test_nonzero_composite_rejected(self):
        with pytest.raises(PreconditionError):
            homology_of_pair(IntMatrix.from_dense([[1]]), IntMatrix.from_dense([[1]]))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(PreconditionError):
            homology_of_pair(IntMatrix.zero(1, 2), IntMatrix.zero(3, 1))

    def test_with_relations(self):
        # chain group Z/4 with incoming map 2
        result = homology_with_relations(IntMatrix.zero(0, 1), IntMatrix.from_dense([[2]]), ([], [4]))
        assert result == AbelianInvariants(0, (2,))

    def test_relations_must_be_respected(self):
        # 1 -> Z/2 is not defined on Z/3
        with pytest.raises(PreconditionError):
            homology_presentation(IntMatrix.from_dense([[1]]), IntMatrix.zero(1, 0), [2], [3])

    def test_presentation_generators(self):
        d_n = IntMatrix.from_dense([[1, -1]])
        d_next = IntMatrix.from_dense([[2], [2]])
        sq = homology_presentation(d_n, d_next)
        assert sq.invariants == AbelianInvariants(0, (2,))
        for gen in sq.generators:
            assert d_n.apply(gen) == [0]


def random_complex(rng, a, m, b):
    """Random A (a x m) and B (m x b) with A @ B == 0, built through a unimodular change of basis"""
    r = rng.randint(0, m)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    U_inv = [row[:] for row in U]
    for _ in range(3 * m):
        i, j = rng.sample(range(m), 2) if m > 1 else (0, 0)
        if i == j:
            break
        c = rng.randint(-2, 2)
        # U <- U (I + c E_ij), U_inv <- (I - c E_ij) U_inv
        for row in U:
            row[j] += c * row[i]
        U_inv[i] = [x - c * y for x, y in zip(U_inv[i], U_inv[j])]
    top = [[rng.choice([0, 0, 1, -1, 2, 3, 6]) for _ in range(b)] for _ in range(r)]
    B = [[sum(U[i][k] * top[k][j] for k in range(r)) for j in range(b)] for i in range(m)]
    right = [[rng.choice([0, 1, -1, 2, 4]) for _ in range(m - r)] for _ in range(a)]
    A = [[sum(right[i][k - r] * U_inv[k][j] for k in range(r, m)) for j in range(m)] for i in range(a)]
    return IntMatrix.from_dense(A, m), IntMatrix.from_dense(B, b)


def smith_diagonal(M):
    return _smith_dense(M.to_dense(), M.rows, M.cols)[0]


def expected_homology(A, B):
    rank_a = len(smith_diagonal(A))
    divisors = smith_diagonal(B)
    return AbelianInvariants.from_diagonal([d for d in divisors if d > 1], A.cols - rank_a - len(divisors))


class TestRandomComplexes:
    @pytest.mark.parametrize("seed", range(25))
    @pytest.mark.parametrize("sparse", [False, True])
    def test_homology_matches_smith_form(self, settings, seed, sparse):
        if sparse:
            settings.set_sparse_layout(1.01, 0)
        rng = random.Random(seed)
        A, B = random_complex(rng, rng.randint(1, 5), rng.randint(1, 6), rng.randint(1, 5))
        assert (A @ B).is_zero()
        expected = expected_homology(A, B)
        assert homology_of_pair(A, B) == expected
        assert homology_presentation(A, B).invariants == expected

    @pytest.mark.parametrize("seed", range(25))
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_rank_mod_p_counts_units_of_smith_form(self, seed, p):
        rng = random.Random(1000 + seed)
        rows, cols = rng.randint(1, 7), rng.randint(1, 7)
        M = IntMatrix.from_dense([[rng.choice([0, 0, 1, -1, 2, 3, 4, 6]) for _ in range(cols)]
                                  for _ in range(rows)], cols)
        expected = sum(1 for d in smith_diagonal(M) if d % p)
        assert rank_mod_p(M, p) == expected
        columns = [M.column(j) for j in range(cols)]
        assert rank_mod_p_columns(iter(columns), p, limit=expected) == expected


def test_rank_mod_p_columns_stops_at_limit():
    columns = [{0: 1}, {1: 1}, {0: 1, 1: 1}, {2: 1}]
    assert rank_mod_p_columns(iter(columns), 2) == 3
    assert rank_mod_p_columns(iter(columns), 2, limit=2) == 2
    assert rank_mod_p_columns(iter(columns), 2, limit=0) == 0
