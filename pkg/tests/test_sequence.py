import pytest

from mixmult.hilbert import DegenerateSystemError, MultiIdealSystem, graded_piece_length
from mixmult.monomial import InputError, MonomialSubquotient, VariableContext
from mixmult.sequence import (
    ElementCandidate,
    FcClass,
    chain_systems,
    check_weak_fc,
    drop_index_system,
    filter_regular_identity,
    find_weak_fc,
    quotient_system,
)

XY = VariableContext(["x", "y"])
M = XY.maximal_ideal()
R = MonomialSubquotient(XY.unit_ideal())
X_ELEMENT = ElementCandidate((1, 0), 1)


def cyclic(*gens):
    return MonomialSubquotient.cyclic(XY.ideal(*gens))


@pytest.fixture()
def maximal_system():
    return MultiIdealSystem(M, [M], R)


class TestElementCandidate:
    def test_parse(self):
        system = MultiIdealSystem(M, [XY.ideal("x"), XY.ideal("y")], R)
        assert ElementCandidate.parse(system, "y") == ElementCandidate((0, 1), 2)
        assert ElementCandidate.parse(system, "x*y") == ElementCandidate((1, 1), 1)
        assert ElementCandidate.parse(system, "x*y", index=2) == ElementCandidate((1, 1), 2)
        assert ElementCandidate.parse(system, [2, 0]) == ElementCandidate((2, 0), 1)

    def test_not_in_any_ideal(self):
        system = MultiIdealSystem(M, [XY.ideal("x")], R)
        with pytest.raises(InputError):
            ElementCandidate.parse(system, "y")
        with pytest.raises(InputError):
            ElementCandidate.parse(system, "x", index=2)

    def test_pretty(self, maximal_system):
        assert X_ELEMENT.pretty(maximal_system) == "x ∈ I_1"


class TestCheckWeakFc:
    def test_regular_element(self, maximal_system):
        report = check_weak_fc(maximal_system, X_ELEMENT)
        assert report.cond_i
        assert report.cond_ii is True
        assert report.cond_iii
        assert report.classification is FcClass.FC
        assert report.is_weak_fc
        assert report.windows == [(2, 5), (5, 8)]

    def test_kernel_inside_saturation(self):
        system = MultiIdealSystem(M, [XY.ideal("x")], cyclic("x*y"))
        report = check_weak_fc(system, X_ELEMENT)
        # 0 : x = (y)/(x*y) equals 0 : I^∞
        assert report.cond_i
        assert report.cond_ii is True
        assert report.is_weak_fc

    def test_zero_divisor(self):
        system = MultiIdealSystem(M, [M], cyclic("x^2"))
        report = check_weak_fc(system, X_ELEMENT)
        assert not report.cond_i
        assert report.classification is FcClass.NONE
        assert not report.is_weak_fc

    def test_intersection_along_primary_ideal(self):
        # With n_0 >= 2 the monomial y^n_0 * x^(2 n_1 + 2 + n_2) lies in y^2 R but not in y^2 J^n_0 I^n
        system = MultiIdealSystem(XY.ideal("y", "x^2"), [XY.ideal("x^2", "y^2"), XY.ideal("x")], R)
        report = check_weak_fc(system, ElementCandidate((0, 2), 1))
        assert report.cond_i
        assert report.cond_ii is False
        assert report.classification is FcClass.NONE
        assert report.windows == [(4, 7), (7, 10)]

    def test_foreign_element(self):
        system = MultiIdealSystem(M, [XY.ideal("x")], R)
        with pytest.raises(InputError):
            check_weak_fc(system, ElementCandidate((0, 1), 1))


class TestFilterRegularIdentity:
    def test_maximal_ideal(self, maximal_system):
        assert filter_regular_identity(maximal_system, X_ELEMENT)

    def test_degenerate_quotient(self):
        system = MultiIdealSystem(M, [XY.ideal("x")], R)
        assert quotient_system(system, X_ELEMENT).is_degenerate
        assert filter_regular_identity(system, X_ELEMENT)

    def test_zero_divisor(self):
        system = MultiIdealSystem(M, [M], cyclic("x^2"))
        # The quotient keeps length 1 while the differences of the base vanish
        assert not filter_regular_identity(system, X_ELEMENT)

    def test_intersection_along_primary_ideal(self):
        # Pieces of N/y^2 N have length 4 where the differences of the base are 2
        system = MultiIdealSystem(XY.ideal("y", "x^2"), [XY.ideal("x^2", "y^2"), XY.ideal("x")], R)
        assert not filter_regular_identity(system, ElementCandidate((0, 2), 1))

    def test_degenerate_system(self):
        system = MultiIdealSystem(M, [XY.ideal("x")], cyclic("x"))
        assert system.is_degenerate
        assert not filter_regular_identity(system, X_ELEMENT)

    def test_finite_length_saturation(self):
        system = MultiIdealSystem(M, [M], MonomialSubquotient.cyclic(M))
        assert not filter_regular_identity(system, X_ELEMENT)

    def test_quotient_lengths_are_differences(self, maximal_system, subtests):
        candidates = find_weak_fc(maximal_system, 1, 2)
        assert candidates
        for candidate in candidates:
            quotient = quotient_system(maximal_system, candidate)
            for n0 in range(3, 6):
                for n1 in range(3, 6):
                    with subtests.test(candidate=candidate, n0=n0, n1=n1):
                        expected = graded_piece_length(maximal_system, n0, [n1]) - graded_piece_length(
                            maximal_system,
                            n0,
                            [n1 - 1],
                        )
                        assert graded_piece_length(quotient, n0, [n1]) == expected


class TestDerivedSystems:
    def test_quotient_system(self, maximal_system):
        assert quotient_system(maximal_system, X_ELEMENT).module == cyclic("x")

        system = MultiIdealSystem(M, [M], MonomialSubquotient(XY.ideal("x"), XY.ideal("x^2")))
        quotient = quotient_system(system, ElementCandidate((0, 1), 1))
        assert quotient.module == MonomialSubquotient(XY.ideal("x"), XY.ideal("x^2", "x*y"))

        system = MultiIdealSystem(M, [M], cyclic("x*y"))
        assert quotient_system(system, X_ELEMENT).module == cyclic("x")

    def test_drop_index_system(self, maximal_system):
        assert drop_index_system(maximal_system, 1, 0) == MultiIdealSystem(M, [], R)
        assert drop_index_system(maximal_system, 1, 2) == MultiIdealSystem(M, [], MonomialSubquotient(M**2))

    def test_drop_index_keeps_other_ideals(self):
        system = MultiIdealSystem(M, [XY.ideal("x"), XY.ideal("y")], R)
        dropped = drop_index_system(system, 1, 1)
        assert dropped.ideals == (XY.ideal("y"),)
        assert dropped.module == MonomialSubquotient(XY.ideal("x"))

    @pytest.mark.parametrize(("index", "v"), [(0, 1), (2, 1), (1, -1)])
    def test_drop_index_invalid(self, maximal_system, index, v):
        with pytest.raises(InputError):
            drop_index_system(maximal_system, index, v)

    def test_chain_systems(self, maximal_system):
        systems = chain_systems(maximal_system, [X_ELEMENT, ElementCandidate((0, 1), 1)])
        assert [system.module for system in systems] == [R, cyclic("x"), cyclic("x", "y")]


class TestFindWeakFc:
    def test_maximal_ideal(self, maximal_system):
        found = find_weak_fc(maximal_system, 1, 1)
        assert X_ELEMENT in found
        assert ElementCandidate((0, 1), 1) in found

    def test_principal_ideal(self):
        system = MultiIdealSystem(M, [XY.ideal("x^2")], R)
        assert ElementCandidate((2, 0), 1) in find_weak_fc(system, 1, 2)

    def test_degenerate(self):
        system = MultiIdealSystem(M, [XY.ideal("x")], cyclic("x"))
        with pytest.raises(DegenerateSystemError):
            find_weak_fc(system, 1, 2)

    def test_bound_below_generators(self):
        system = MultiIdealSystem(M, [XY.ideal("x^2")], R)
        with pytest.raises(InputError):
            find_weak_fc(system, 1, 1)

    def test_found_elements_satisfy_length_identity(self, maximal_system):
        system = MultiIdealSystem(XY.ideal("y", "x^2"), [XY.ideal("x^2", "y^2"), XY.ideal("x")], R)
        assert ElementCandidate((0, 2), 1) not in find_weak_fc(system, 1, 2)
        for candidate in find_weak_fc(maximal_system, 1, 2):
            assert filter_regular_identity(maximal_system, candidate)
