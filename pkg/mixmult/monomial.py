"""Monomials, monomial ideals and monomial subquotients.

All ideals live in a polynomial ring ``k[x_1, …, x_s]`` localized at the maximal ideal of the variables.
Monomials are exponent vectors and every ideal is kept on its minimal generating set, so two ideals are equal
exactly when their generator tuples are equal.
Lengths of artinian pieces are counts of monomials, which are enumerated with vectorized divisibility tests.
"""

import itertools
import re
from collections.abc import Iterable, Iterator, Sequence
from functools import lru_cache
from typing import Any

import numpy as np
import numpy.typing as npt
from more_itertools import chunked

from .tools import compositions

ExponentVector = tuple[int, ...]
MonomialSpec = str | Sequence[int]

# Exponents at or above this bound switch the divisibility kernel to Python integers
_INT64_BOUND = 2**62
# Upper bound for the number of cells in one broadcast comparison block
_BLOCK_CELLS = 1 << 21

variable_re = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
factor_re = re.compile(r"\s*(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*(?P<exponent>[0-9]+))?\s*")


class MixmultError(Exception):
    """Base class of all errors raised by mixmult"""


class InputError(MixmultError, ValueError):
    """Raise when the given data cannot describe a valid instance."""


class NonArtinianError(MixmultError):
    """Raise when a piece between two ideals has infinitely many monomials."""

    def __init__(self, monomial: str, variable: str) -> None:
        super().__init__(
            f"Non-artinian piece: the multiples of {monomial} by powers of {variable} never enter the upper ideal",
        )
        self.monomial = monomial
        self.variable = variable


class VariableContext:
    """Ordered variables of the ambient polynomial ring"""

    __slots__ = ["names", "_positions"]

    def __init__(self, names: Iterable[str]) -> None:
        self.names = tuple(names)
        if not self.names:
            msg = "A variable context needs at least one variable"
            raise InputError(msg)
        if len(set(self.names)) != len(self.names):
            msg = f"Variable names must be distinct: {', '.join(self.names)}"
            raise InputError(msg)
        for name in self.names:
            if not variable_re.fullmatch(name):
                msg = f"Invalid variable name '{name}'"
                raise InputError(msg)
        self._positions = {name: position for position, name in enumerate(self.names)}

    @property
    def s(self) -> int:
        return len(self.names)

    def check(self, vector: Sequence[int]) -> None:
        if len(vector) != self.s:
            msg = f"Exponent vector {tuple(vector)} does not have length {self.s}"
            raise InputError(msg)
        if any(not isinstance(entry, int) or isinstance(entry, bool) or entry < 0 for entry in vector):
            msg = f"Exponent vector {tuple(vector)} must consist of non-negative integers"
            raise InputError(msg)

    def parse_monomial(self, text: str) -> ExponentVector:
        """Parse monomials like ``x^2*y``; ``1`` is the trivial monomial"""
        exponents = [0] * self.s
        if text.strip() == "1":
            return tuple(exponents)
        for factor in text.split("*"):
            match = factor_re.fullmatch(factor)
            if match is None:
                msg = f"Monomial '{text}' has invalid format"
                raise InputError(msg)
            name = match.group("name")
            if name not in self._positions:
                msg = f"Unknown variable '{name}' in monomial '{text}'"
                raise InputError(msg)
            exponents[self._positions[name]] += int(match.group("exponent") or 1)
        return tuple(exponents)

    def monomial(self, spec: MonomialSpec) -> ExponentVector:
        """Accept either the text syntax or an exponent array"""
        if isinstance(spec, str):
            return self.parse_monomial(spec)
        vector = tuple(spec)
        self.check(vector)
        return vector

    def format_monomial(self, vector: ExponentVector) -> str:
        factors = [
            name if exponent == 1 else f"{name}^{exponent}"
            for name, exponent in zip(self.names, vector, strict=True)
            if exponent
        ]
        return "*".join(factors) or "1"

    def ideal(self, *specs: MonomialSpec) -> "MonomialIdeal":
        return MonomialIdeal(self, (self.monomial(spec) for spec in specs))

    def zero_ideal(self) -> "MonomialIdeal":
        return MonomialIdeal(self)

    def unit_ideal(self) -> "MonomialIdeal":
        return MonomialIdeal(self, [(0,) * self.s])

    def maximal_ideal(self) -> "MonomialIdeal":
        return MonomialIdeal(self, (self.variable(position) for position in range(self.s)))

    def variable(self, position: int) -> ExponentVector:
        return tuple(int(other == position) for other in range(self.s))

    def restrict(self, positions: Iterable[int]) -> "VariableContext":
        """Context of the given subset of variables, in their original order"""
        return VariableContext(self.names[position] for position in sorted(positions))

    def monomials_of_degree(self, degree: int) -> Iterator[ExponentVector]:
        return compositions(degree, self.s)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VariableContext) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.names)})"


def _sort_key(vector: ExponentVector) -> tuple[int, tuple[int, ...]]:
    return sum(vector), tuple(-entry for entry in vector)


def _as_array(vectors: Sequence[ExponentVector], width: int) -> npt.NDArray[Any]:
    small = all(entry < _INT64_BOUND for vector in vectors for entry in vector)
    return np.array(vectors, dtype=np.int64 if small else object).reshape(len(vectors), width)


def _divisible(points: Sequence[ExponentVector], gens: Sequence[ExponentVector], width: int) -> npt.NDArray[np.bool_]:
    """Mark every point that is a multiple of at least one generator"""
    if not points or not gens:
        return np.zeros(len(points), dtype=bool)
    gen_array = _as_array(gens, width)
    rows = max(1, _BLOCK_CELLS // (len(gens) * width))
    blocks = [
        (_as_array(block, width)[:, None, :] >= gen_array[None, :, :]).all(axis=2).any(axis=1)
        for block in chunked(points, rows)
    ]
    return np.concatenate(blocks).astype(bool)


def _minimize(vectors: Iterable[ExponentVector], width: int) -> tuple[ExponentVector, ...]:
    unique = sorted(set(vectors), key=_sort_key)
    kept: list[ExponentVector] = []
    # A proper divisor has strictly smaller degree, so each degree layer is only tested against earlier layers
    for _, layer in itertools.groupby(unique, key=sum):
        candidates = list(layer)
        mask = _divisible(candidates, kept, width)
        kept.extend(vector for vector, divisible in zip(candidates, mask, strict=True) if not divisible)
    return tuple(kept)


class MonomialIdeal:
    """Monomial ideal on its minimal generating set.

    Operators: ``a * b`` is the product, ``a ** n`` the power, ``a + b`` the sum, ``a & b`` the intersection,
    ``m in a`` tests membership of an exponent vector and ``a <= b`` tests containment.
    The zero ideal has no generators, the unit ideal has the single generator ``(0, …, 0)``.
    """

    __slots__ = ["context", "gens"]

    def __init__(self, context: VariableContext, gens: Iterable[ExponentVector] = ()) -> None:
        self.context = context
        self.gens = _minimize(gens, context.s)

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return any(not any(gen) for gen in self.gens)

    @property
    def max_degree(self) -> int:
        return max((sum(gen) for gen in self.gens), default=0)

    def to_strings(self) -> list[str]:
        return [self.context.format_monomial(gen) for gen in self.gens]

    def pretty(self) -> str:
        if self.is_zero:
            return "(0)"
        return "(" + ", ".join(self.to_strings()) + ")"

    def __contains__(self, vector: ExponentVector) -> bool:
        return membership(vector, self)

    def __le__(self, other: "MonomialIdeal") -> bool:
        _require_same_context(self, other)
        return all(gen in other for gen in self.gens)

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return ideal_product(self, other)

    def __pow__(self, exponent: int) -> "MonomialIdeal":
        return ideal_power(self, exponent)

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return ideal_sum(self, other)

    def __and__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return intersect(self, other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MonomialIdeal) and self.context == other.context and self.gens == other.gens

    def __hash__(self) -> int:
        return hash((self.context, self.gens))

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self.pretty()}"

    def __str__(self) -> str:
        return self.pretty()


def _require_same_context(*ideals: MonomialIdeal) -> VariableContext:
    context = ideals[0].context
    for ideal in ideals[1:]:
        if ideal.context != context:
            msg = f"Ideals live in different rings: {context!r} and {ideal.context!r}"
            raise InputError(msg)
    return context


def normalize(context: VariableContext, gens: Iterable[Sequence[int]]) -> MonomialIdeal:
    """Reduce a set of exponent vectors to the minimal generators of the ideal they span"""
    vectors = [tuple(vector) for vector in gens]
    for vector in vectors:
        context.check(vector)
    return MonomialIdeal(context, vectors)


def membership(vector: ExponentVector, ideal: MonomialIdeal) -> bool:
    return any(all(entry >= bound for entry, bound in zip(vector, gen, strict=True)) for gen in ideal.gens)


def ideal_product(first: MonomialIdeal, second: MonomialIdeal) -> MonomialIdeal:
    context = _require_same_context(first, second)
    return MonomialIdeal(
        context,
        (tuple(a + b for a, b in zip(left, right, strict=True)) for left in first.gens for right in second.gens),
    )


@lru_cache(maxsize=1024)
def ideal_power(ideal: MonomialIdeal, exponent: int) -> MonomialIdeal:
    if exponent < 0:
        msg = f"Ideal powers need a non-negative exponent, got {exponent}"
        raise InputError(msg)
    result = ideal.context.unit_ideal()
    for _ in range(exponent):
        result = ideal_product(result, ideal)
    return result


def ideal_sum(first: MonomialIdeal, second: MonomialIdeal) -> MonomialIdeal:
    context = _require_same_context(first, second)
    return MonomialIdeal(context, first.gens + second.gens)


def intersect(first: MonomialIdeal, second: MonomialIdeal) -> MonomialIdeal:
    context = _require_same_context(first, second)
    return MonomialIdeal(
        context,
        (tuple(max(a, b) for a, b in zip(left, right, strict=True)) for left in first.gens for right in second.gens),
    )


def colon(ideal: MonomialIdeal, divisor: MonomialIdeal) -> MonomialIdeal:
    """The ideal quotient ``ideal : divisor``"""
    context = _require_same_context(ideal, divisor)
    if divisor.is_zero:
        msg = f"Cannot take the colon of {ideal.pretty()} by the zero ideal"
        raise InputError(msg)
    result: MonomialIdeal | None = None
    for gen in divisor.gens:
        part = MonomialIdeal(
            context,
            (tuple(max(a - b, 0) for a, b in zip(vector, gen, strict=True)) for vector in ideal.gens),
        )
        result = part if result is None else intersect(result, part)
    assert result is not None  # noqa: S101 - the divisor has generators
    return result


def saturate(ideal: MonomialIdeal, divisor: MonomialIdeal) -> MonomialIdeal:
    """The saturation ``ideal : divisor^∞``"""
    current = ideal
    while True:
        following = colon(current, divisor)
        if following == current:
            return current
        current = following


def primarity_exponents(ideal: MonomialIdeal) -> ExponentVector:
    """For each variable the least exponent ``e`` with ``x^e`` in the ideal"""
    context = ideal.context
    exponents = []
    for position, name in enumerate(context.names):
        powers = [
            gen[position]
            for gen in ideal.gens
            if all(entry == 0 for other, entry in enumerate(gen) if other != position)
        ]
        if not powers:
            msg = f"{ideal.pretty()} is not primary to the maximal ideal: it contains no power of {name}"
            raise InputError(msg)
        exponents.append(min(powers))
    return tuple(exponents)


def is_primary(ideal: MonomialIdeal) -> bool:
    """Whether the ideal is primary to the maximal ideal"""
    if ideal.is_unit:
        return False
    try:
        primarity_exponents(ideal)
    except InputError:
        return False
    return True


def _closure_box(upper: MonomialIdeal, blockers: Sequence[ExponentVector]) -> ExponentVector:
    """Per variable, how far a generator of `upper` must be pushed until it is divisible by a blocker"""
    context = upper.context
    box = [0] * context.s
    for gen in upper.gens:
        for position in range(context.s):
            reach = [
                max(blocker[position] - gen[position], 0)
                for blocker in blockers
                if all(blocker[other] <= gen[other] for other in range(context.s) if other != position)
            ]
            if not reach:
                raise NonArtinianError(context.format_monomial(gen), context.names[position])
            box[position] = max(box[position], min(reach))
    return tuple(box)


def monomials_between(
    upper: MonomialIdeal,
    inner: MonomialIdeal,
    lower: MonomialIdeal,
    box: ExponentVector | None = None,
) -> int:
    """Count the monomials in `upper` that lie neither in `inner` nor in `lower`.

    Every counted monomial is a generator of `upper` times a monomial inside `box`.
    Without an explicit box, the smallest sufficient box is computed from the generators;
    if some direction never closes the count is infinite and :py:class:`NonArtinianError` is raised.

    :param box: exclusive per-variable exponent bounds, e.g. the primarity exponents of ``J`` when ``inner = J·upper``
    """
    context = _require_same_context(upper, inner, lower)
    if upper.is_zero:
        return 0
    if box is None:
        box = _closure_box(upper, inner.gens + lower.gens)
    offsets = list(itertools.product(*(range(bound) for bound in box)))
    candidates = list(
        {tuple(a + b for a, b in zip(gen, offset, strict=True)) for gen in upper.gens for offset in offsets},
    )
    blocked = _divisible(candidates, inner.gens, context.s) | _divisible(candidates, lower.gens, context.s)
    return int(np.count_nonzero(~blocked))


class MonomialSubquotient:
    """The module ``upper / lower`` for monomial ideals with ``lower ⊆ upper``"""

    __slots__ = ["upper", "lower"]

    def __init__(self, upper: MonomialIdeal, lower: MonomialIdeal | None = None) -> None:
        if lower is None:
            lower = upper.context.zero_ideal()
        _require_same_context(upper, lower)
        if not lower <= upper:
            msg = f"{lower.pretty()} is not contained in {upper.pretty()}"
            raise InputError(msg)
        self.upper = upper
        self.lower = lower

    @classmethod
    def cyclic(cls, lower: MonomialIdeal) -> "MonomialSubquotient":
        """The module ``R / lower``"""
        return cls(lower.context.unit_ideal(), lower)

    @property
    def context(self) -> VariableContext:
        return self.upper.context

    @property
    def is_zero(self) -> bool:
        return self.upper <= self.lower

    def quotient_by(self, ideal: MonomialIdeal) -> "MonomialSubquotient":
        """The module ``N / ideal·N``"""
        return MonomialSubquotient(self.upper, self.lower + ideal * self.upper)

    def saturated(self, ideal: MonomialIdeal) -> "MonomialSubquotient":
        """The module ``N / (0_N : ideal^∞)``"""
        return MonomialSubquotient(self.upper, saturate(self.lower, ideal) & self.upper)

    def multiplied(self, ideal: MonomialIdeal) -> "MonomialSubquotient":
        """The submodule ``ideal·N``"""
        upper = ideal * self.upper
        return MonomialSubquotient(upper, self.lower & upper)

    def pretty(self) -> str:
        if self.upper.is_unit:
            return f"R/{self.lower.pretty()}"
        return f"{self.upper.pretty()}/{self.lower.pretty()}"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MonomialSubquotient) and (self.upper, self.lower) == (other.upper, other.lower)

    def __hash__(self) -> int:
        return hash((self.upper, self.lower))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.pretty()})"
