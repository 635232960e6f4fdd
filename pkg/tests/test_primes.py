import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixmult.hilbert import DegenerateSystemError, MultiIdealSystem
from mixmult.monomial import MonomialIdeal, MonomialSubquotient, VariableContext
from mixmult.primes import (
    EmptySpectrumError,
    InfiniteLengthError,
    MonomialPrime,
    annihilator,
    build_pi,
    dimension,
    has_positive_height,
    localization_length,
    minimal_primes,
)

XY = VariableContext(["x", "y"])
XYZ = VariableContext(["x", "y", "z"])


def prime(context, *names):
    return MonomialPrime(context, (context.names.index(name) for name in names))


def cyclic(context, *gens):
    return MonomialSubquotient.cyclic(context.ideal(*gens))


proper_ideals = st.lists(
    st.tuples(*[st.integers(min_value=0, max_value=3)] * 3).filter(any),
    max_size=5,
).map(lambda gens: MonomialIdeal(XYZ, gens))


class TestAnnihilator:
    def test_examples(self):
        assert annihilator(cyclic(XY, "x*y")) == XY.ideal("x*y")
        assert annihilator(MonomialSubquotient(XY.ideal("x"), XY.ideal("x^2"))) == XY.ideal("x")
        assert annihilator(cyclic(XY)).is_zero

    def test_zero_module(self):
        assert annihilator(MonomialSubquotient(XY.zero_ideal())).is_unit


class TestMinimalPrimes:
    def test_examples(self):
        assert minimal_primes(XYZ.ideal("x*y", "x*z")) == [prime(XYZ, "x"), prime(XYZ, "y", "z")]
        assert minimal_primes(XY.ideal("x^2", "x*y")) == [prime(XY, "x")]
        assert minimal_primes(XY.zero_ideal()) == [prime(XY)]

    def test_unit_ideal(self):
        with pytest.raises(EmptySpectrumError):
            minimal_primes(XY.unit_ideal())

    def test_pretty(self):
        assert prime(XYZ, "z", "x").pretty() == "(x, z)"
        assert prime(XYZ).pretty() == "(0)"
        assert prime(XYZ, "y").coheight == 2

    @settings(max_examples=80, deadline=None)
    @given(ideal=proper_ideals)
    def test_matches_brute_force(self, ideal):
        containing = [
            frozenset(subset)
            for size in range(4)
            for subset in itertools.combinations(range(3), size)
            if MonomialPrime(XYZ, subset).contains(ideal)
        ]
        minimal = {subset for subset in containing if not any(other < subset for other in containing)}
        assert {found.variables for found in minimal_primes(ideal)} == minimal


class TestDimension:
    def test_examples(self):
        assert dimension(cyclic(XY, "x*y")) == 1
        assert dimension(cyclic(XY)) == 2
        assert dimension(cyclic(XY, "x", "y")) == 0
        assert dimension(MonomialSubquotient(XY.ideal("x"), XY.ideal("x"))) == -1

    def test_subquotient(self):
        # (x)/(x*y) is isomorphic to k[x]
        assert dimension(MonomialSubquotient(XY.ideal("x"), XY.ideal("x*y"))) == 1


class TestLocalizationLength:
    def test_examples(self):
        assert localization_length(cyclic(XY, "x*y"), prime(XY, "y")) == 1
        assert localization_length(cyclic(XY, "x^2*y^3"), prime(XY, "x")) == 2
        assert localization_length(cyclic(XY), prime(XY)) == 1

    def test_non_minimal_prime(self):
        with pytest.raises(InfiniteLengthError):
            localization_length(cyclic(XY, "x*y"), prime(XY, "x", "y"))

    @settings(max_examples=60, deadline=None)
    @given(ideal=proper_ideals.filter(lambda ideal: not ideal.is_zero))
    def test_matches_enumeration(self, ideal):
        module = MonomialSubquotient.cyclic(ideal)
        for minimal in minimal_primes(ideal):
            positions = sorted(minimal.variables)
            projected = [tuple(gen[position] for position in positions) for gen in ideal.gens]
            expected = sum(
                1
                for point in itertools.product(range(8), repeat=len(positions))
                if not any(all(a >= b for a, b in zip(point, gen, strict=True)) for gen in projected)
            )
            assert localization_length(module, minimal) == expected


class TestBuildPi:
    def test_examples(self):
        maximal = XY.maximal_ideal()
        system = MultiIdealSystem(maximal, [XY.ideal("x")], cyclic(XY, "x*y"))
        assert [(component.prime, component.local_length) for component in build_pi(system)] == [(prime(XY, "y"), 1)]

        system = MultiIdealSystem(maximal, [maximal], cyclic(XY))
        assert [(component.prime, component.local_length) for component in build_pi(system)] == [(prime(XY), 1)]

        system = MultiIdealSystem(maximal, [XY.ideal("y")], cyclic(XY, "x^2", "x*y"))
        assert [(component.prime, component.local_length) for component in build_pi(system)] == [(prime(XY, "x"), 1)]

    def test_multiple_components(self):
        # R/(x^2*y) has the primes (x) of length 2 and (y) of length 1, neither contains z
        system = MultiIdealSystem(XYZ.maximal_ideal(), [XYZ.ideal("z")], cyclic(XYZ, "x^2*y"))
        components = build_pi(system)
        assert [(component.prime, component.local_length) for component in components] == [
            (prime(XYZ, "x"), 2),
            (prime(XYZ, "y"), 1),
        ]
        assert all(not component.prime.contains(system.product) for component in components)

    def test_degenerate(self):
        system = MultiIdealSystem(XY.maximal_ideal(), [XY.ideal("x")], cyclic(XY, "x"))
        with pytest.raises(DegenerateSystemError):
            build_pi(system)

    def test_positive_height(self):
        maximal = XY.maximal_ideal()
        assert not has_positive_height(MultiIdealSystem(maximal, [XY.ideal("x")], cyclic(XY, "x*y")))
        assert has_positive_height(MultiIdealSystem(maximal, [maximal], cyclic(XY)))
