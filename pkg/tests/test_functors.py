"""
Tests for coefficient modules, the tensor and Hom complexes and group (co)homology
"""

import pytest

from core import functors, groups
from core.errors import FeasibilityError, ParseError, PreconditionError
from core.functors import GModule
from core.intlinalg import AbelianInvariants, IntMatrix
from core.resolutions import BarResolution, CyclicResolution, NormalizedBarResolution

Z = AbelianInvariants(1)
ZERO = AbelianInvariants()


def cyc(*torsion):
    return AbelianInvariants(0, tuple(torsion))


def sign_module(G):
    """Z with every generator acting by -1"""
    return GModule(G, (0,), [IntMatrix.from_dense([[-1]])] * len(G.generators), "Z-")


class TestGModule:
    def test_trivial_modules(self, s3):
        assert GModule.integers(s3).is_free_trivial()
        M = GModule.cyclic_trivial(s3, 4, 2)
        assert M.rank == 2
        assert M.label() == "Z/4^2"
        assert M.invariants() == cyc(4, 4)
        assert GModule.zero_module(s3).rank == 0

    def test_action_table(self):
        A = sign_module(groups.cyclic(2))
        assert A.action(2).to_dense() == [[-1]]
        assert A.action(1) == IntMatrix.identity(1)
        assert A.inverse_action(2).to_dense() == [[-1]]

    def test_rejects_non_action(self, c3):
        with pytest.raises(PreconditionError):
            sign_module(c3)

    def test_rejects_relation_violation(self, c2):
        # e_0 has order 2 but its image does not
        with pytest.raises(PreconditionError):
            GModule(c2, (2, 4), [IntMatrix.from_dense([[1, 0], [1, 1]])])

    def test_wrong_action_count(self, s3):
        with pytest.raises(PreconditionError):
            GModule(s3, (0,), [IntMatrix.identity(1)])

    def test_entries_reduced_mod_relations(self, c2):
        M = GModule(c2, (3,), [IntMatrix.from_dense([[4]])])
        assert M.action(2).to_dense() == [[1]]
        assert M.is_trivial_action()

    def test_direct_sum(self, c2):
        total = GModule.integers(c2).direct_sum(sign_module(c2))
        assert total.rank == 2
        assert total.action(2).to_dense() == [[1, 0], [0, -1]]

    def test_restrict(self, s3, c2):
        sign = groups.homomorphism(s3, c2, [1, 2])
        A = sign_module(c2).restrict(sign)
        assert A.group is s3
        assert A.action(s3.generator_indices[1]).to_dense() == [[-1]]
        assert A.action(s3.generator_indices[0]).to_dense() == [[1]]

    def test_fixed_submodule(self, c2):
        regular = GModule(c2, (0, 0), [IntMatrix.from_dense([[0, 1], [1, 0]])])
        fixed, inclusion = regular.fixed_submodule(c2.indices())
        assert fixed.rank == 1
        column = inclusion.column_vector(0)
        assert column in ([1, 1], [-1, -1])

    def test_over_quotient(self, s3):
        A3, inc = groups.subgroup(s3, [s3.generators[0]])
        Q, projection = groups.quotient_group(s3, inc)
        sign = GModule(s3, (0,), [IntMatrix.identity(1), IntMatrix.from_dense([[-1]])])
        down = sign.over_quotient(projection)
        assert down.group is Q
        assert not down.is_trivial_action()

    def test_over_quotient_needs_trivial_kernel_action(self, s3):
        A = GModule(s3, (0,), [IntMatrix.identity(1), IntMatrix.from_dense([[-1]])])
        _, projection = groups.quotient_group(s3, s3.indices())
        with pytest.raises(PreconditionError):
            A.over_quotient(projection)


class TestChainComplexes:
    def test_tensor_complex_squares_to_zero(self, s3):
        C = functors.tensor_with_integers(NormalizedBarResolution(s3, 3))
        assert C.check(1) and C.check(2)

    def test_hom_complex_squares_to_zero(self, s3):
        C = functors.hom_with_module(NormalizedBarResolution(s3, 3), GModule.cyclic_trivial(s3, 2))
        assert C.check(1) and C.check(2)

    def test_degree_range(self, c3):
        C = functors.tensor_with_integers(CyclicResolution(c3, 3))
        with pytest.raises(PreconditionError):
            C.homology(3)

    def test_module_group_must_match(self, s3, c3):
        with pytest.raises(PreconditionError):
            functors.tensor_with_module(BarResolution(s3, 2), GModule.integers(c3))


class TestCyclicClosedForms:
    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 12])
    @pytest.mark.parametrize("n", range(11))
    def test_homology(self, m, n):
        G = groups.cyclic(m)
        expected = Z if n == 0 else cyc(m) if n % 2 else ZERO
        assert functors.group_homology(G, n) == expected

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 12])
    @pytest.mark.parametrize("n", range(11))
    def test_cohomology(self, m, n):
        G = groups.cyclic(m)
        expected = Z if n == 0 else ZERO if n % 2 else cyc(m)
        assert functors.group_cohomology(G, n) == expected

    @pytest.mark.parametrize("kind", ["bar", "normalized_bar"])
    @pytest.mark.parametrize("m", [2, 3, 4])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_bar_resolutions_agree_with_cyclic(self, kind, m, n):
        G = groups.cyclic(m)
        assert functors.group_homology(G, n, resolution_kind=kind) == \
            functors.group_homology(G, n, resolution_kind="cyclic")

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_mod_p_coefficients(self, n):
        G = groups.cyclic(4)
        assert functors.group_homology(G, n, GModule.cyclic_trivial(G, 2)) == cyc(2)

    @pytest.mark.parametrize("n, expected", [(0, cyc(2)), (1, ZERO), (2, cyc(2)), (3, ZERO)])
    def test_sign_module_homology(self, c2, n, expected):
        A = sign_module(c2)
        assert functors.group_homology(c2, n, A) == expected
        assert functors.group_homology(c2, n, A, "bar") == expected

    @pytest.mark.parametrize("n, expected", [(0, ZERO), (1, cyc(2)), (2, ZERO), (3, cyc(2))])
    def test_sign_module_cohomology(self, c2, n, expected):
        assert functors.group_cohomology(c2, n, sign_module(c2)) == expected


class TestSmallGroups:
    @pytest.mark.parametrize("kind", ["bar", "normalized_bar"])
    def test_h3_of_s3(self, s3, kind):
        assert functors.group_homology(s3, 3, resolution_kind=kind) == cyc(6)

    @pytest.mark.parametrize("n, expected", [(0, Z), (1, cyc(2)), (2, ZERO), (3, cyc(6))])
    def test_s3_homology(self, s3, n, expected):
        assert functors.group_homology(s3, n) == expected

    def test_homogeneous_agrees(self, s3):
        assert functors.group_homology(s3, 1, resolution_kind="homogeneous") == cyc(2)
        assert functors.group_homology(s3, 2, resolution_kind="homogeneous") == ZERO

    @pytest.mark.parametrize("n, expected", [(0, Z), (1, ZERO), (2, cyc(2)), (3, ZERO)])
    def test_s3_cohomology(self, s3, n, expected):
        assert functors.group_cohomology(s3, n) == expected

    @pytest.mark.parametrize("build, expected", [
        (lambda: groups.symmetric(3), ZERO),
        (lambda: groups.klein_four(), cyc(2)),
        (lambda: groups.quaternion(), ZERO),
        (lambda: groups.dihedral(4), cyc(2)),
        (lambda: groups.alternating(4), cyc(2)),
        (lambda: groups.cyclic(6), ZERO),
    ])
    def test_schur_multipliers(self, build, expected):
        assert functors.schur_multiplier(build()) == expected

    @pytest.mark.parametrize("build", [
        lambda: groups.cyclic(4),
        lambda: groups.symmetric(3),
        lambda: groups.symmetric(4),
        lambda: groups.dihedral(4),
        lambda: groups.quaternion(),
        lambda: groups.klein_four(),
        lambda: groups.alternating(4),
        lambda: groups.direct_product(groups.cyclic(2), groups.cyclic(3)),
    ])
    def test_first_homology_is_abelianization(self, build):
        G = build()
        assert functors.group_homology(G, 1) == groups.abelianization_invariants(G)

    def test_klein_four_mod_two(self, v4):
        A = GModule.cyclic_trivial(v4, 2)
        assert functors.group_cohomology(v4, 1, A) == cyc(2, 2)
        assert functors.group_cohomology(v4, 2, A) == cyc(2, 2, 2)

    def test_direct_sum_coefficients(self, c2):
        A = GModule.integers(c2).direct_sum(GModule.cyclic_trivial(c2, 2))
        assert functors.group_homology(c2, 1, A) == cyc(2, 2)

    def test_negative_degree(self, s3):
        with pytest.raises(PreconditionError):
            functors.group_homology(s3, -1)

    def test_explicit_resolution_argument(self, s3, c3):
        R = NormalizedBarResolution(s3, 2)
        assert functors.group_homology(s3, 1, resolution=R) == cyc(2)
        with pytest.raises(PreconditionError):
            functors.group_homology(s3, 2, resolution=R)
        with pytest.raises(PreconditionError):
            functors.group_homology(c3, 1, resolution=R)


class TestLaws:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_order_annihilates_homology(self, s3, n):
        exponent = functors.group_homology(s3, n).exponent()
        assert s3.order % exponent == 0

    @pytest.mark.parametrize("n", [1, 2])
    def test_order_annihilates_cohomology(self, n):
        G = groups.dihedral(4)
        assert G.order % functors.group_cohomology(G, n).exponent() == 0

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_coprime_coefficients_vanish(self, c3, n):
        assert functors.group_homology(c3, n, GModule.cyclic_trivial(c3, 2)).is_trivial()

    @pytest.mark.parametrize("m", [5, 7])
    @pytest.mark.parametrize("n", [1, 2])
    def test_coprime_coefficients_vanish_s3(self, s3, m, n):
        assert functors.group_homology(s3, n, GModule.cyclic_trivial(s3, m)).is_trivial()
        assert functors.group_cohomology(s3, n, GModule.cyclic_trivial(s3, m)).is_trivial()


class TestFeasibility:
    def test_budget_refusal(self, settings, s3):
        settings.set_nonzero_budget(10)
        with pytest.raises(FeasibilityError) as info:
            functors.group_homology(s3, 2, resolution_kind="bar")
        assert info.value.degree is not None
        assert info.value.estimate > 10

    def test_budget_from_environment(self, monkeypatch, s3):
        monkeypatch.setenv("HOMOCALC_BUDGET", "10")
        with pytest.raises(FeasibilityError):
            functors.group_homology(s3, 2, resolution_kind="bar")

    def test_schur_multiplier_of_a5_refused_under_budget(self, settings):
        settings.set_nonzero_budget(100_000)
        with pytest.raises(FeasibilityError) as info:
            functors.schur_multiplier(groups.alternating(5))
        assert info.value.degree == 3
        assert info.value.rank == 59 ** 3

    def test_estimate(self, s3):
        R = NormalizedBarResolution(s3, 3)
        assert functors.estimate_nonzeros(R, 2) == 25 * 3
        assert functors.estimate_nonzeros(R, 0) == 0


class TestPoincareSeries:
    def test_expand_rational(self):
        assert functors.expand_rational("1/(1-x)", 4) == [1, 1, 1, 1]
        assert functors.expand_rational("1/(1-x)^2", 4) == [2, 3, 4, 5]
        assert functors.expand_rational("(x^2+1)/(x^4-x^3-x+1)", 5) == [1, 2, 3, 3, 4]

    def test_expand_rational_errors(self):
        with pytest.raises(ParseError):
            functors.expand_rational("1/(", 3)
        with pytest.raises(PreconditionError):
            functors.expand_rational("1/(2-x)", 3)

    @pytest.mark.parametrize("m, p", [(2, 2), (3, 3)])
    def test_cyclic_series(self, m, p):
        series = functors.poincare_dims(groups.cyclic(m), p, 5)
        assert series.dims == [1, 1, 1, 1, 1]
        assert series.complete
        assert series.matches("1/(1-x)")

    def test_s3_at_three(self, s3):
        assert functors.poincare_dims(s3, 3, 3).dims == [0, 0, 1]

    def test_s3_at_two(self, s3):
        assert functors.poincare_dims(s3, 2, 3).dims == [1, 1, 1]

    def test_klein_four(self, v4):
        series = functors.poincare_dims(v4, 2, 3)
        assert series.dims == [2, 3, 4]
        assert series.matches("1/(1-x)^2")

    def test_truncation(self, settings, s3):
        settings.set_nonzero_budget(100)
        series = functors.poincare_dims(s3, 2, 4)
        assert series.dims == [1]
        assert series.truncated_at == 2
        assert not series.complete
        assert series.to_dict()["truncated_at"] == 2

    def test_rank_cap_keeps_prefix(self, settings, s3):
        settings.set_max_resolution_rank(200)
        series = functors.poincare_dims(s3, 2, 6)
        assert series.dims == [1, 1]
        assert series.truncated_at == 3
        assert not series.complete
        assert "rank 625" in series.reason

    def test_rank_cap_below_first_degree(self, settings, s3):
        settings.set_max_resolution_rank(20)
        series = functors.poincare_dims(s3, 2, 4)
        assert series.dims == []
        assert series.truncated_at == 1

    def test_ranks_mod_p_are_cached(self, s3):
        complex_ = functors.tensor_with_integers(NormalizedBarResolution(s3, 4))
        assert complex_.rank_mod_p(2, 2) == 1
        assert set(complex_._ranks_mod_p) == {(1, 2), (2, 2), (3, 2)}
        assert complex_.rank_mod_p(3, 2) == 1
        assert complex_._maps == {}

    def test_symmetric_five_prefix(self):
        series = functors.poincare_dims(groups.symmetric(5), 2, 2)
        assert series.dims == [1, 2]
        assert series.matches("(x^2 + 1)/(x^4 - x^3 - x + 1)")

    def test_needs_prime(self, s3):
        with pytest.raises(PreconditionError):
            functors.poincare_dims(s3, 6, 2)


def test_result_record():
    record = functors.result_record("S3", 3, "Z", "normalized_bar", cyc(6))
    assert record["invariants"] == {"free_rank": 0, "torsion": [6]}
    assert record["primary"] == [2, 3]
