"""Miscellaneous helper functions"""

import math
from collections.abc import Iterator, Mapping
from fractions import Fraction

MultiIndex = tuple[int, ...]


def compositions(total: int, parts: int) -> Iterator[MultiIndex]:
    """Enumerate all tuples of `parts` non-negative integers summing to `total`.

    The tuples come in lexicographically decreasing order, so ``(1, 0)`` precedes ``(0, 1)``.
    """
    if total < 0 or parts < 0:
        return
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in compositions(total - head, parts - 1):
            yield (head, *tail)


def factorial_product(index: MultiIndex) -> int:
    return math.prod(math.factorial(entry) for entry in index)


def shift(index: MultiIndex, axis: int, steps: int = 1) -> MultiIndex:
    """Move a multi-index along one axis"""
    return tuple(entry + steps if position == axis else entry for position, entry in enumerate(index))


def format_key(index: MultiIndex) -> str:
    return ",".join(str(entry) for entry in index)


def format_rational(value: Fraction | int) -> str:
    """Render an exact rational as ``p`` or ``p/q``"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def keyed(table: Mapping[MultiIndex, int]) -> dict[str, int]:
    """Use string keys for a table of multi-indices, as in JSON reports"""
    return {format_key(index): value for index, value in table.items()}
