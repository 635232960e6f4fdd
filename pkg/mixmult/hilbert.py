"""Fiber modules of monomial ideal systems and their multi-graded Hilbert polynomials.

A system ``(J, [I_1, …, I_d], N)`` defines the fiber module whose piece in degree ``(n_0, n_1, …, n_d)`` is
``J^{n_0} I_1^{n_1} ⋯ I_d^{n_d} N / J^{n_0+1} I_1^{n_1} ⋯ I_d^{n_d} N``. Its length is eventually a polynomial of
total degree ``q - 1`` where ``q`` is the dimension of ``N / (0_N : I^∞)``. The polynomial is recovered by exact
interpolation on a tensor grid. The grid starts at the degree bound of the system and is moved outwards until
the following disjoint grids confirm the fit.
The normalized coefficients of the leading form are the mixed multiplicities.
"""

import functools
import itertools
import logging
import math
import operator
from collections.abc import Callable, Mapping, Sequence
from fractions import Fraction
from typing import Any, Self, TypeVar

import sympy
from pydantic import BaseModel, ConfigDict, Field

from .grid import Window
from .monomial import (
    ExponentVector,
    InputError,
    MixmultError,
    MonomialIdeal,
    MonomialSubquotient,
    VariableContext,
    ideal_power,
    monomials_between,
    primarity_exponents,
)
from .primes import dimension
from .tools import MultiIndex, compositions, factorial_product, format_key, format_rational, keyed, shift

_logger = logging.getLogger(__name__)

T = TypeVar("T")


class FitOptions(BaseModel):
    """Parameters of the stabilization protocol"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    offset: int = Field(default=1, ge=0, description="Smallest sampling offset, raised to the degree bound of a system")
    cap: int = Field(default=64, ge=1, description="Largest sampling offset that is tried")
    window: int = Field(default=3, ge=1, description="Side of the windows of the intersection test for weak-FC")
    checks: int = Field(default=2, ge=1, description="Number of disjoint windows a fit must reproduce")


class DegenerateSystemError(InputError):
    """Raise when the standing hypothesis I ⊄ √Ann N fails, or nothing is left to measure."""

    def __init__(self, system: "MultiIdealSystem", reason: str) -> None:
        super().__init__(f"Degenerate system {system.pretty()}: {reason}")
        self.system = system


class NonStabilizedError(MixmultError):
    def __init__(self, description: str, offset: int, cap: int) -> None:
        super().__init__(f"Length grid of {description} is not polynomial up to offset {offset} (cap {cap})")
        self.description = description
        self.offset = offset
        self.cap = cap


@functools.lru_cache(maxsize=256)
def _saturation(module: MonomialSubquotient, ideal: MonomialIdeal) -> MonomialSubquotient:
    return module.saturated(ideal)


class MultiIdealSystem:
    """The data ``(J, [I_1, …, I_d], N)``; ``J`` is called `primary` and must be primary to the maximal ideal"""

    __slots__ = ["primary", "ideals", "module", "box"]

    def __init__(self, primary: MonomialIdeal, ideals: Sequence[MonomialIdeal], module: MonomialSubquotient) -> None:
        for ideal in (primary, *ideals):
            if ideal.context != module.context:
                msg = f"{ideal.pretty()} and {module.pretty()} live in different rings"
                raise InputError(msg)
        if primary.is_unit:
            msg = "J must be a proper ideal"
            raise InputError(msg)
        self.primary = primary
        self.ideals = tuple(ideals)
        self.module = module
        # The powers of the variables in J bound every graded piece
        self.box: ExponentVector = primarity_exponents(primary)

    @property
    def context(self) -> VariableContext:
        return self.module.context

    @property
    def d(self) -> int:
        return len(self.ideals)

    @property
    def arity(self) -> int:
        return self.d + 1

    @property
    def product(self) -> MonomialIdeal:
        """The ideal I = I_1 ⋯ I_d, the unit ideal for d = 0"""
        return functools.reduce(operator.mul, self.ideals, self.context.unit_ideal())

    @property
    def saturated_module(self) -> MonomialSubquotient:
        return _saturation(self.module, self.product)

    @property
    def is_degenerate(self) -> bool:
        return self.saturated_module.is_zero

    def require_nondegenerate(self) -> None:
        if self.is_degenerate:
            raise DegenerateSystemError(
                self,
                "the ideal product lies in the radical of the annihilator of N, so the hypothesis I ⊄ √Ann N fails",
            )

    @property
    def degree_bound(self) -> int:
        """Largest generator degree of J, the ideals, U and L plus the largest pure power of J"""
        ideals = (self.primary, *self.ideals, self.module.upper, self.module.lower)
        return max(ideal.max_degree for ideal in ideals) + max(self.box)

    def ideal_at(self, axis: int) -> MonomialIdeal:
        """The ideal of a grading axis: J for axis 0, I_axis otherwise"""
        return self.primary if axis == 0 else self.ideals[axis - 1]

    def with_module(self, module: MonomialSubquotient) -> Self:
        return type(self)(self.primary, self.ideals, module)

    def with_ideals(self, ideals: Sequence[MonomialIdeal]) -> Self:
        return type(self)(self.primary, ideals, self.module)

    def saturated(self) -> Self:
        return self.with_module(self.saturated_module)

    def pretty(self) -> str:
        ideals = ", ".join(ideal.pretty() for ideal in self.ideals)
        return f"(J={self.primary.pretty()}, I=[{ideals}], N={self.module.pretty()})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MultiIdealSystem) and (self.primary, self.ideals, self.module) == (
            other.primary,
            other.ideals,
            other.module,
        )

    def __hash__(self) -> int:
        return hash((self.primary, self.ideals, self.module))

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self.pretty()}"


class _FiberGenerators:
    """Memoized ideals ``J^{n_0} I_1^{n_1} ⋯ I_d^{n_d} U``, each built from a neighbour by one multiplication"""

    def __init__(self, system: MultiIdealSystem) -> None:
        self.system = system
        self._ideals: dict[MultiIndex, MonomialIdeal] = {}

    def __getitem__(self, index: MultiIndex) -> MonomialIdeal:
        cached = self._ideals.get(index)
        if cached is not None:
            return cached
        axis = next((axis for axis, entry in enumerate(index) if entry), None)
        if axis is None:
            ideal = self.system.module.upper
        else:
            ideal = self.system.ideal_at(axis) * self[shift(index, axis, -1)]
        self._ideals[index] = ideal
        return ideal

    def length(self, index: MultiIndex) -> int:
        return monomials_between(self[index], self[shift(index, 0)], self.system.module.lower, box=self.system.box)


@functools.lru_cache(maxsize=64)
def _fiber(system: MultiIdealSystem) -> _FiberGenerators:
    return _FiberGenerators(system)


def graded_piece_length(system: MultiIdealSystem, n0: int, n: Sequence[int]) -> int:
    """Length of the fiber module piece of degree ``(n0, n)``"""
    if len(n) != system.d:
        msg = f"Expected {system.d} ideal degrees, got {len(n)}"
        raise InputError(msg)
    if n0 < 0 or any(entry < 0 for entry in n):
        msg = f"Degrees must be non-negative, got {(n0, *n)}"
        raise InputError(msg)
    return _fiber(system).length((n0, *n))


class LengthTable:
    """Graded piece lengths on a tensor window"""

    __slots__ = ["entries", "window"]

    def __init__(self, entries: Mapping[MultiIndex, int], window: Window) -> None:
        self.entries = dict(entries)
        self.window = window

    @property
    def offset(self) -> int:
        return self.window.start

    def to_json(self) -> dict[str, Any]:
        return {"window": list(self.window.bounds()), "entries": keyed(self.entries)}

    def rows(self) -> list[tuple[str, int]]:
        return [(format_key(index), length) for index, length in self.entries.items()]


def length_table(system: MultiIdealSystem, window: Window) -> LengthTable:
    fiber = _fiber(system)
    return LengthTable({point: fiber.length(point) for point in window.points(system.arity)}, window)


class ExactPolynomial:
    """Polynomial with exact rational coefficients in the variables ``n0, …, n{arity-1}``"""

    __slots__ = ["arity", "poly"]

    def __init__(self, coefficients: Mapping[MultiIndex, Fraction | int], arity: int) -> None:
        self.arity = arity
        gens = sympy.symbols(f"n0:{arity}")
        terms = {
            exponents: sympy.Rational(value.numerator, value.denominator)
            for exponents, value in ((key, Fraction(raw)) for key, raw in coefficients.items())
            if value
        }
        if terms:
            self.poly = sympy.Poly.from_dict(terms, *gens, domain=sympy.QQ)
        else:
            self.poly = sympy.Poly(0, *gens, domain=sympy.QQ)

    @classmethod
    def from_expr(cls, expr: sympy.Expr, arity: int) -> Self:
        poly = sympy.Poly(expr, *sympy.symbols(f"n0:{arity}"), domain=sympy.QQ)
        return cls({tuple(monom): Fraction(int(coeff.p), int(coeff.q)) for monom, coeff in poly.terms()}, arity)

    @property
    def coefficients(self) -> dict[MultiIndex, Fraction]:
        return {
            tuple(monom): Fraction(int(coeff.p), int(coeff.q)) for monom, coeff in self.poly.terms() if coeff != 0
        }

    @property
    def total_degree(self) -> int:
        """Total degree, -1 for the zero polynomial"""
        return max((sum(exponents) for exponents in self.coefficients), default=-1)

    def homogeneous_part(self, degree: int) -> Self:
        return type(self)(
            {exponents: value for exponents, value in self.coefficients.items() if sum(exponents) == degree},
            self.arity,
        )

    def difference(self, axis: int) -> Self:
        """The polynomial ``P(n) - P(n - e_axis)``"""
        expr = self.poly.as_expr()
        variable = self.poly.gens[axis]
        return self.from_expr(sympy.expand(expr - expr.subs(variable, variable - 1)), self.arity)

    def text(self) -> str:
        return str(self.poly.as_expr())

    def to_json(self) -> dict[str, str]:
        items = sorted(self.coefficients.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)
        return {format_key(exponents): format_rational(value) for exponents, value in items}

    def __call__(self, *point: int) -> Fraction:
        return sum(
            (
                value * math.prod(coordinate**exponent for coordinate, exponent in zip(point, exponents, strict=True))
                for exponents, value in self.coefficients.items()
            ),
            Fraction(0),
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ExactPolynomial)
            and self.arity == other.arity
            and self.coefficients == other.coefficients
        )

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.coefficients.items())))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.text()})"


def _interpolate(samples: Mapping[MultiIndex, int], side: int, arity: int) -> dict[MultiIndex, Fraction]:
    """Coefficients of the unique polynomial of per-variable degree below `side` through the tensor-grid samples"""
    exponents = list(itertools.product(range(side), repeat=arity))
    points = list(samples)
    matrix = sympy.Matrix(
        [
            [math.prod(coordinate**power for coordinate, power in zip(point, row, strict=True)) for row in exponents]
            for point in points
        ],
    )
    solution = matrix.LUsolve(sympy.Matrix([samples[point] for point in points]))
    return {
        row: Fraction(int(value.p), int(value.q)) for row, value in zip(exponents, solution, strict=True) if value != 0
    }


def _normalized_table(polynomial: ExactPolynomial, degree: int) -> dict[MultiIndex, int] | None:
    """Coefficients of the given top degree times the factorials, if they are non-negative integers not all zero"""
    if polynomial.total_degree != degree:
        return None
    coefficients = polynomial.coefficients
    table = {}
    for index in compositions(degree, polynomial.arity):
        value = coefficients.get(index, Fraction(0)) * factorial_product(index)
        if value.denominator != 1 or value < 0:
            return None
        table[index] = int(value)
    return table if any(table.values()) else None


def _stabilized_fit(
    evaluate: Callable[[MultiIndex], int],
    arity: int,
    side: int,
    options: FitOptions,
    description: str,
    accept: Callable[[ExactPolynomial], T | None],
    bound: int = 0,
) -> tuple[ExactPolynomial, Window, T]:
    """Fit a polynomial to an eventually polynomial function.

    Sampling starts at the larger of the configured offset and `bound`. The polynomial through a tensor grid of
    the given side is taken when it reproduces the next `options.checks` grids and `accept` extracts something
    from it. Otherwise the offset is doubled until it passes the cap.
    """
    offset = max(options.offset, bound)
    tried = offset
    while offset <= options.cap:
        tried = offset
        sample = Window(offset, side)
        polynomial = ExactPolynomial(
            _interpolate({point: evaluate(point) for point in sample.points(arity)}, side, arity),
            arity,
        )
        checks = (sample >> step for step in range(1, options.checks + 1))
        if all(polynomial(*point) == evaluate(point) for check in checks for point in check.points(arity)):
            accepted = accept(polynomial)
            if accepted is not None:
                _logger.debug("Length grid of %s is polynomial from offset %d on", description, offset)
                return polynomial, sample, accepted
        _logger.debug("Length grid of %s is not yet polynomial at offset %d", description, offset)
        offset = max(1, 2 * offset)
    raise NonStabilizedError(description, tried, options.cap)


def vanishing_table(degree: int, arity: int) -> dict[MultiIndex, int]:
    """The table of a system below its natural degree, where all mixed multiplicities are zero by convention"""
    return dict.fromkeys(compositions(degree, arity), 0)


class BhattacharyaResult:
    """Fitted Hilbert polynomial of a fiber module together with its mixed multiplicities.

    ``mixed`` maps ``(k_0, k_1, …, k_d)`` with ``k_0 + … + k_d = q - 1`` to ``e(J^[k_0+1], I^[k]; N)``.
    """

    __slots__ = ["polynomial", "q", "offset", "leading_form", "mixed"]

    def __init__(self, polynomial: ExactPolynomial, q: int, offset: int, mixed: Mapping[MultiIndex, int]) -> None:
        self.polynomial = polynomial
        self.q = q
        self.offset = offset
        self.leading_form = polynomial.homogeneous_part(q - 1)
        self.mixed = dict(mixed)

    @property
    def arity(self) -> int:
        return self.polynomial.arity

    @property
    def tilde_e(self) -> int:
        return sum(self.mixed.values())

    def table_at(self, degree: int) -> dict[MultiIndex, int]:
        """Mixed multiplicities of the given total degree; zero above the natural degree ``q - 1``"""
        if degree > self.q - 1:
            return vanishing_table(degree, self.arity)
        if degree < self.q - 1:
            msg = f"Mixed multiplicities of total degree {degree} are undefined for dimension {self.q}"
            raise InputError(msg)
        return dict(self.mixed)

    def mixed_multiplicity(self, index: MultiIndex) -> int:
        if len(index) != self.arity:
            msg = f"Expected an index of length {self.arity}, got {index}"
            raise InputError(msg)
        return self.table_at(sum(index))[index]

    def to_json(self) -> dict[str, Any]:
        return {
            "q": self.q,
            "offset": self.offset,
            "polynomial": self.polynomial.to_json(),
            "polynomial_text": self.polynomial.text(),
            "leading_form": self.leading_form.to_json(),
            "mixed": keyed(self.mixed),
            "tilde_e": self.tilde_e,
            "rees_multiplicity": {
                "value": self.tilde_e,
                "source": "sum of the mixed multiplicities of the fiber module",
            },
        }


def fit_bhattacharya(system: MultiIdealSystem, options: FitOptions | None = None) -> BhattacharyaResult:
    options = options or FitOptions()
    system.require_nondegenerate()
    q = dimension(system.saturated_module)
    if q < 1:
        raise DegenerateSystemError(system, "N / (0_N : I^∞) has finite length, so there is no leading form")
    polynomial, sample, table = _stabilized_fit(
        _fiber(system).length,
        system.arity,
        q,
        options,
        system.pretty(),
        functools.partial(_normalized_table, degree=q - 1),
        system.degree_bound,
    )
    return BhattacharyaResult(polynomial, q, sample.start, table)


def hilbert_polynomial(system: MultiIdealSystem, options: FitOptions | None = None) -> ExactPolynomial:
    """Fit the Hilbert polynomial of the fiber module without presupposing its degree.

    The only bound used is the number of variables, which exceeds the dimension of every module.
    """
    options = options or FitOptions()
    system.require_nondegenerate()
    polynomial, _, _ = _stabilized_fit(
        _fiber(system).length,
        system.arity,
        system.context.s,
        options,
        system.pretty(),
        lambda polynomial: polynomial,
        system.degree_bound,
    )
    return polynomial


def samuel_multiplicity(
    primary: MonomialIdeal,
    module: MonomialSubquotient,
    options: FitOptions | None = None,
) -> int:
    """Multiplicity of N with respect to the primary ideal J"""
    result = fit_bhattacharya(MultiIdealSystem(primary, (), module), options)
    return result.mixed[(result.q - 1,)]


def rees_multiplicity(system: MultiIdealSystem, options: FitOptions | None = None) -> int:
    """Multiplicity of the Rees module of N̄ with respect to J and the irrelevant ideal.

    It equals the sum of the mixed multiplicities of the fiber module, which is how it is computed here.
    """
    return fit_bhattacharya(system, options).tilde_e


def hilbert_samuel_fit(
    ideals: Sequence[MonomialIdeal],
    module: MonomialSubquotient,
    options: FitOptions | None = None,
) -> dict[MultiIndex, int]:
    """Mixed multiplicities of primary ideals in the classical sense.

    The colength ``ℓ(N / I_1^{n_1} ⋯ I_d^{n_d} N)`` is eventually a polynomial of total degree ``dim N``;
    its top coefficients times the factorials are returned.
    """
    options = options or FitOptions()
    if not ideals:
        msg = "At least one ideal is needed"
        raise InputError(msg)
    for ideal in ideals:
        if ideal.context != module.context or ideal.is_unit:
            msg = f"{ideal.pretty()} must be a proper ideal of the ring of {module.pretty()}"
            raise InputError(msg)
        primarity_exponents(ideal)
    q = dimension(module)
    if q < 1:
        msg = f"{module.pretty()} has finite length"
        raise InputError(msg)

    def colength(index: MultiIndex) -> int:
        inner = functools.reduce(
            operator.mul,
            (ideal_power(ideal, power) for ideal, power in zip(ideals, index, strict=True)),
            module.upper,
        )
        return monomials_between(module.upper, inner, module.lower)

    degrees = [ideal.max_degree for ideal in (*ideals, module.upper, module.lower)]
    bound = max(degrees) + max(max(primarity_exponents(ideal)) for ideal in ideals)
    description = f"the colengths of {', '.join(ideal.pretty() for ideal in ideals)} on {module.pretty()}"
    _, _, table = _stabilized_fit(
        colength,
        len(ideals),
        q + 1,
        options,
        description,
        functools.partial(_normalized_table, degree=q),
        bound,
    )
    return table
