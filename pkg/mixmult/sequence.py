"""Filter-regular and (FC)-elements of fiber modules and the systems derived from them.

An element ``x ∈ I_i`` is weak-FC for N when

(i) ``0_N : x ⊆ 0_N : I^∞`` and
(ii) ``xN ∩ J^{n_0} I_1^{n_1} ⋯ I_i^{n_i+1} ⋯ I_d^{n_d} N = x J^{n_0} I_1^{n_1} ⋯ I_d^{n_d} N`` for all large
``(n_0, n)``;

it is FC when moreover (iii) ``dim N / (xN : I^∞) = dim N / (0_N : I^∞) - 1``.
Condition (ii) quantifies over all large degrees, so it is tested on two adjacent windows and may stay undecided.
"""

import logging
from collections.abc import Sequence
from enum import StrEnum
from typing import NamedTuple, Self

import more_itertools
from pydantic import BaseModel

from .grid import Window
from .hilbert import FitOptions, MultiIdealSystem, NonStabilizedError, fit_bhattacharya, graded_piece_length
from .monomial import ExponentVector, InputError, MonomialIdeal, MonomialSpec, colon, ideal_power
from .primes import dimension
from .tools import shift

_logger = logging.getLogger(__name__)


class ElementCandidate(NamedTuple):
    """A monomial ``x`` together with the 1-based index ``i`` of the ideal ``I_i`` it is taken from"""

    monomial: ExponentVector
    index: int

    @classmethod
    def parse(cls, system: MultiIdealSystem, spec: MonomialSpec, index: int | None = None) -> Self:
        """Read a candidate; without an index the first ideal containing the monomial is used"""
        monomial = system.context.monomial(spec)
        if index is None:
            index = more_itertools.first_true(
                range(1, system.d + 1),
                default=0,
                pred=lambda position: monomial in system.ideals[position - 1],
            )
            if not index:
                msg = f"{system.context.format_monomial(monomial)} lies in none of the ideals of {system.pretty()}"
                raise InputError(msg)
        candidate = cls(monomial, index)
        candidate.validate(system)
        return candidate

    def validate(self, system: MultiIdealSystem) -> None:
        if not 1 <= self.index <= system.d:
            msg = f"Ideal index {self.index} is out of range 1..{system.d}"
            raise InputError(msg)
        if self.monomial not in system.ideals[self.index - 1]:
            msg = (
                f"{system.context.format_monomial(self.monomial)} is not an element of "
                f"I_{self.index} = {system.ideals[self.index - 1].pretty()}"
            )
            raise InputError(msg)

    def ideal(self, system: MultiIdealSystem) -> MonomialIdeal:
        """The principal ideal ``(x)``"""
        return MonomialIdeal(system.context, (self.monomial,))

    def pretty(self, system: MultiIdealSystem) -> str:
        return f"{system.context.format_monomial(self.monomial)} ∈ I_{self.index}"


class FcClass(StrEnum):
    NONE = "none"
    WEAK_FC = "weak-FC"
    FC = "FC"
    INCONCLUSIVE = "inconclusive"


class FcReport(BaseModel):
    candidate: str
    index: int
    cond_i: bool
    cond_ii: bool | None
    cond_iii: bool
    windows: list[tuple[int, int]]
    classification: FcClass

    @property
    def is_weak_fc(self) -> bool:
        return self.classification in (FcClass.WEAK_FC, FcClass.FC)


def _intersection_window(system: MultiIdealSystem, candidate: ElementCandidate, side: int) -> Window:
    """First window of condition (ii): beyond the degree bound of the system and of the candidate"""
    return Window(max(system.degree_bound, sum(candidate.monomial) + max(system.box)), side)


def _intersection_holds(system: MultiIdealSystem, candidate: ElementCandidate, window: Window) -> bool:
    module = system.module
    ideal_i = system.ideals[candidate.index - 1]
    x_upper = candidate.ideal(system) * module.upper + module.lower
    for point in window.points(system.arity):
        power = module.upper
        for axis, exponent in enumerate(point):
            power = ideal_power(system.ideal_at(axis), exponent) * power
        if x_upper & (ideal_i * power + module.lower) != candidate.ideal(system) * power + module.lower:
            _logger.debug("Intersection condition of %s fails at %s", candidate.pretty(system), point)
            return False
    return True


def check_weak_fc(
    system: MultiIdealSystem,
    candidate: ElementCandidate,
    options: FitOptions | None = None,
) -> FcReport:
    options = options or FitOptions()
    candidate.validate(system)
    module = system.module
    product = system.product
    x = candidate.ideal(system)

    cond_i = colon(module.lower, x) & module.upper <= system.saturated_module.lower

    first = _intersection_window(system, candidate, options.window)
    second = first >> 1
    outcomes = (_intersection_holds(system, candidate, first), _intersection_holds(system, candidate, second))
    cond_ii: bool | None = outcomes[0] if outcomes[0] == outcomes[1] else None
    _logger.debug("Intersection windows %s and %s of %s: %s", first, second, candidate.pretty(system), outcomes)

    cond_iii = dimension(module.quotient_by(x).saturated(product)) == dimension(system.saturated_module) - 1

    if not cond_i or cond_ii is False:
        classification = FcClass.NONE
    elif cond_ii is None:
        classification = FcClass.INCONCLUSIVE
    else:
        classification = FcClass.FC if cond_iii else FcClass.WEAK_FC
    return FcReport(
        candidate=system.context.format_monomial(candidate.monomial),
        index=candidate.index,
        cond_i=cond_i,
        cond_ii=cond_ii,
        cond_iii=cond_iii,
        windows=[first.bounds(), second.bounds()],
        classification=classification,
    )


def quotient_system(system: MultiIdealSystem, candidate: ElementCandidate) -> MultiIdealSystem:
    """The system of ``N / xN``"""
    candidate.validate(system)
    return system.with_module(system.module.quotient_by(candidate.ideal(system)))


def drop_index_system(system: MultiIdealSystem, index: int, v: int) -> MultiIdealSystem:
    """The system ``(J, I without I_index, I_index^v N)``"""
    if not 1 <= index <= system.d:
        msg = f"Ideal index {index} is out of range 1..{system.d}"
        raise InputError(msg)
    if v < 0:
        msg = f"The power of the dropped ideal must be non-negative, got {v}"
        raise InputError(msg)
    dropped = system.ideals[index - 1]
    return MultiIdealSystem(
        system.primary,
        system.ideals[: index - 1] + system.ideals[index:],
        system.module.multiplied(ideal_power(dropped, v)),
    )


def filter_regular_identity(
    system: MultiIdealSystem,
    candidate: ElementCandidate,
    options: FitOptions | None = None,
) -> bool:
    """Whether the pieces of ``N / xN`` have the lengths ``ℓ(M_n) - ℓ(M_{n - e_i})`` on a stable window.

    The window lies past the stabilization offsets of both the base and the quotient system. A degenerate system,
    or one whose fiber module has no leading form, admits no filter-regular element and gives False.
    """
    options = options or FitOptions()
    candidate.validate(system)
    if system.is_degenerate or dimension(system.saturated_module) < 1:
        _logger.debug("%s admits no filter-regular element", system.pretty())
        return False
    quotient = quotient_system(system, candidate)
    base = fit_bhattacharya(system, options)
    start = base.offset + base.q
    if not quotient.is_degenerate and dimension(quotient.saturated_module) >= 1:
        reduced = fit_bhattacharya(quotient, options)
        start = max(start, reduced.offset + reduced.q)
    for point in Window(start, base.q).points(system.arity):
        before = shift(point, candidate.index, -1)
        expected = graded_piece_length(system, point[0], point[1:]) - graded_piece_length(system, before[0], before[1:])
        if graded_piece_length(quotient, point[0], point[1:]) != expected:
            _logger.debug("Length identity of %s fails at %s", candidate.pretty(system), point)
            return False
    return True


def find_weak_fc(
    system: MultiIdealSystem,
    index: int,
    degree_bound: int,
    options: FitOptions | None = None,
) -> list[ElementCandidate]:
    """All monomials of ``I_index`` up to the degree bound that are weak-FC, in order of degree.

    Every monomial returned also satisfies the length identity of `filter_regular_identity`.
    """
    options = options or FitOptions()
    if not 1 <= index <= system.d:
        msg = f"Ideal index {index} is out of range 1..{system.d}"
        raise InputError(msg)
    system.require_nondegenerate()
    ideal = system.ideals[index - 1]
    if degree_bound < ideal.max_degree:
        msg = f"The degree bound {degree_bound} is below the generator degree {ideal.max_degree} of I_{index}"
        raise InputError(msg)
    found = []
    for degree in range(degree_bound + 1):
        for monomial in system.context.monomials_of_degree(degree):
            if monomial not in ideal:
                continue
            candidate = ElementCandidate(monomial, index)
            if not check_weak_fc(system, candidate, options).is_weak_fc:
                continue
            try:
                identity = filter_regular_identity(system, candidate, options)
            except NonStabilizedError as error:
                _logger.warning("Skipping %s: %s", candidate.pretty(system), error)
                continue
            if not identity:
                _logger.warning("Skipping %s: weak-FC but the length identity fails", candidate.pretty(system))
                continue
            found.append(candidate)
    _logger.debug("Weak-FC monomials of I_%d up to degree %d: %s", index, degree_bound, found)
    return found


def chain_systems(system: MultiIdealSystem, candidates: Sequence[ElementCandidate]) -> list[MultiIdealSystem]:
    """The systems of ``N, N/x_1N, N/(x_1, x_2)N, …``"""
    systems = [system]
    for candidate in candidates:
        systems.append(quotient_system(systems[-1], candidate))
    return systems
