"""Minimal primes, dimension and localization of monomial subquotients.

Monomial primes are generated by subsets of the variables. The minimal primes of a monomial ideal are the minimal
transversals of the supports of its generators, so everything here is exact set arithmetic.
"""

import logging
from collections.abc import Iterable
from typing import TYPE_CHECKING, NamedTuple

from .monomial import (
    InputError,
    MixmultError,
    MonomialIdeal,
    MonomialSubquotient,
    NonArtinianError,
    VariableContext,
    colon,
    monomials_between,
)

if TYPE_CHECKING:
    from .hilbert import MultiIdealSystem

_logger = logging.getLogger(__name__)


class EmptySpectrumError(MixmultError):
    def __init__(self, ideal: MonomialIdeal) -> None:
        super().__init__(f"The unit ideal {ideal.pretty()} has no minimal primes")
        self.ideal = ideal


class InfiniteLengthError(MixmultError):
    def __init__(self, module: MonomialSubquotient, prime: "MonomialPrime") -> None:
        super().__init__(
            f"{module.pretty()} has infinite length at {prime.pretty()}: the prime is not minimal over the annihilator",
        )
        self.module = module
        self.prime = prime


class MonomialPrime:
    """Prime ideal generated by a subset of the variables; the zero prime has no variables"""

    __slots__ = ["context", "variables"]

    def __init__(self, context: VariableContext, variables: Iterable[int]) -> None:
        self.context = context
        self.variables = frozenset(variables)
        if any(position < 0 or position >= context.s for position in self.variables):
            msg = f"Variable positions {sorted(self.variables)} are out of range for {context!r}"
            raise InputError(msg)

    @property
    def height(self) -> int:
        return len(self.variables)

    @property
    def coheight(self) -> int:
        return self.context.s - self.height

    @property
    def names(self) -> list[str]:
        return [self.context.names[position] for position in sorted(self.variables)]

    def ideal(self) -> MonomialIdeal:
        return MonomialIdeal(self.context, (self.context.variable(position) for position in self.variables))

    def contains(self, ideal: MonomialIdeal) -> bool:
        """Every generator of the ideal involves one of the prime's variables"""
        return all(any(gen[position] for position in self.variables) for gen in ideal.gens)

    def pretty(self) -> str:
        return "(" + (", ".join(self.names) or "0") + ")"

    def _key(self) -> tuple[int, tuple[int, ...]]:
        return self.height, tuple(sorted(self.variables))

    def __lt__(self, other: "MonomialPrime") -> bool:
        return self._key() < other._key()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MonomialPrime) and (self.context, self.variables) == (other.context, other.variables)

    def __hash__(self) -> int:
        return hash((self.context, self.variables))

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self.pretty()}"


class PrimeComponent(NamedTuple):
    prime: MonomialPrime
    local_length: int


def annihilator(module: MonomialSubquotient) -> MonomialIdeal:
    if module.upper.is_zero:
        return module.context.unit_ideal()
    return colon(module.lower, module.upper)


def _minimal_sets(sets: Iterable[frozenset[int]]) -> list[frozenset[int]]:
    unique = set(sets)
    return [candidate for candidate in unique if not any(other < candidate for other in unique)]


def minimal_primes(ideal: MonomialIdeal) -> list[MonomialPrime]:
    """Minimal primes over a monomial ideal, sorted by height.

    The supports of the generators form a hypergraph whose minimal transversals are the minimal primes.
    Transversals are grown edge by edge and pruned to the minimal ones after every step.
    """
    if ideal.is_unit:
        raise EmptySpectrumError(ideal)
    supports = _minimal_sets(
        frozenset(position for position, exponent in enumerate(gen) if exponent) for gen in ideal.gens
    )
    transversals = [frozenset[int]()]
    for edge in sorted(supports, key=sorted):
        grown = []
        for transversal in transversals:
            if transversal & edge:
                grown.append(transversal)
            else:
                grown.extend(transversal | {position} for position in edge)
        transversals = _minimal_sets(grown)
    return sorted(MonomialPrime(ideal.context, transversal) for transversal in transversals)


def dimension(module: MonomialSubquotient) -> int:
    """Krull dimension; the zero module has dimension -1"""
    if module.is_zero:
        return -1
    return module.context.s - min(prime.height for prime in minimal_primes(annihilator(module)))


def localization_length(module: MonomialSubquotient, prime: MonomialPrime) -> int:
    """Length of the module localized at a monomial prime.

    Inverting the variables outside the prime amounts to setting them to one, which leaves a monomial
    subquotient in the remaining variables whose standard monomials are counted.
    """
    if module.is_zero:
        return 0
    if not prime.variables:
        return int(module.lower.is_zero)
    context = module.context
    positions = sorted(prime.variables)
    local = context.restrict(positions)

    def project(ideal: MonomialIdeal) -> MonomialIdeal:
        return MonomialIdeal(local, (tuple(gen[position] for position in positions) for gen in ideal.gens))

    try:
        return monomials_between(project(module.upper), local.zero_ideal(), project(module.lower))
    except NonArtinianError as error:
        raise InfiniteLengthError(module, prime) from error


def has_positive_height(system: "MultiIdealSystem") -> bool:
    """Whether the product of the ideals avoids every minimal prime of the annihilator of N"""
    product = system.product
    return all(not prime.contains(product) for prime in minimal_primes(annihilator(system.module)))


def build_pi(system: "MultiIdealSystem") -> list[PrimeComponent]:
    """Minimal primes of the annihilator of N that avoid the ideal product and have the dimension of the saturation.

    The attached lengths are localizations of N itself; they agree with those of the saturation at these primes.
    """
    system.require_nondegenerate()
    target = dimension(system.saturated_module)
    product = system.product
    components = [
        PrimeComponent(prime, localization_length(system.module, prime))
        for prime in minimal_primes(annihilator(system.module))
        if not prime.contains(product) and prime.coheight == target
    ]
    _logger.debug("Components of %s: %s", system, components)
    return components
