"""
Tests for H^1 and H^2 from explicit cocycle systems
"""

import pytest

from core import cocycles, functors, groups
from core.errors import FeasibilityError
from core.functors import GModule
from core.intlinalg import AbelianInvariants, IntMatrix


def cyc(*torsion):
    return AbelianInvariants(0, tuple(torsion))


def swap_module(G, swapping):
    """(Z/3)^2 with the generators at the given positions exchanging the two factors"""
    swap = IntMatrix.from_dense([[0, 1], [1, 0]])
    actions = [swap if pos in swapping else IntMatrix.identity(2) for pos in range(len(G.generators))]
    return GModule(G, (3, 3), actions, "(Z/3)^2 swapped")


COEFFICIENTS = [0, 2, 3, 4, 6]


def coefficient_module(G, m):
    return GModule.integers(G) if m == 0 else GModule.cyclic_trivial(G, m)


@pytest.mark.parametrize("normalized", [False, True])
class TestAgreement:
    @pytest.mark.parametrize("m", COEFFICIENTS)
    def test_h1(self, small_group, m, normalized):
        A = coefficient_module(small_group, m)
        assert cocycles.h1_via_cocycles(small_group, A, normalized) == \
            functors.group_cohomology(small_group, 1, A)

    @pytest.mark.parametrize("m", COEFFICIENTS)
    def test_h2(self, small_group, m, normalized):
        A = coefficient_module(small_group, m)
        assert cocycles.h2_via_cocycles(small_group, A, normalized) == \
            functors.group_cohomology(small_group, 2, A)

    @pytest.mark.parametrize("build, swapping", [
        (lambda: groups.cyclic(2), {0}),
        (lambda: groups.cyclic(4), {0}),
        (lambda: groups.symmetric(3), {1}),
    ])
    def test_swapped_pair(self, build, swapping, normalized):
        G = build()
        A = swap_module(G, swapping)
        for n, oracle in ((1, cocycles.h1_via_cocycles), (2, cocycles.h2_via_cocycles)):
            assert oracle(G, A, normalized) == functors.group_cohomology(G, n, A)

    def test_twisted_coefficients(self, normalized):
        c2 = groups.cyclic(2)
        sign = GModule(c2, (0,), [IntMatrix.from_dense([[-1]])])
        assert cocycles.h1_via_cocycles(c2, sign, normalized) == cyc(2)
        assert cocycles.h2_via_cocycles(c2, sign, normalized).is_trivial()


def test_known_values(v4):
    A = GModule.cyclic_trivial(v4, 2)
    assert cocycles.h1_via_cocycles(v4, A) == cyc(2, 2)
    assert cocycles.h2_via_cocycles(v4, A) == cyc(2, 2, 2)
    assert cocycles.h2_via_cocycles(groups.cyclic(2), GModule.integers(groups.cyclic(2))) == cyc(2)


def test_system_shapes(s3):
    A = GModule.cyclic_trivial(s3, 2)
    system = cocycles.cocycle_system_h1(s3, A)
    assert system.variables == 6
    assert system.relations.rows == 36
    assert system.coboundaries_are_cocycles()
    normalized = cocycles.cocycle_system_h2(s3, A, normalized=True)
    assert normalized.variables == 25
    assert normalized.coboundaries_are_cocycles()


def test_group_cap(settings, s3):
    settings.set_cocycle_group_cap(4)
    with pytest.raises(FeasibilityError):
        cocycles.h2_via_cocycles(s3, GModule.integers(s3))


def test_variable_cap(settings, s3):
    settings.set_cocycle_variable_cap(5)
    with pytest.raises(FeasibilityError):
        cocycles.h1_via_cocycles(s3, GModule.integers(s3))
