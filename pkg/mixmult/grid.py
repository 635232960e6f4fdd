"""Index windows used as the axes of sampling grids"""

import itertools
from collections.abc import Iterator
from typing import Self

from .tools import MultiIndex


class Window:
    """Run of ``size`` consecutive indices starting at ``start``"""

    __slots__ = ["start", "size"]

    def __init__(self, start: int, size: int = 1) -> None:
        if start < 0:
            msg = "`start` value must not be negative"
            raise ValueError(msg)
        if size < 1:
            msg = "`size` value must be positive"
            raise ValueError(msg)
        self.start = start
        self.size = size

    @property
    def stop(self) -> int:
        return self.start + self.size

    def to_range(self) -> range:
        return range(self.start, self.stop)

    def points(self, arity: int) -> Iterator[MultiIndex]:
        """The tensor grid of this window in `arity` dimensions"""
        return itertools.product(self.to_range(), repeat=arity)

    def bounds(self) -> tuple[int, int]:
        return self.start, self.stop

    def __rshift__(self, steps: int) -> Self:
        """The window `steps` sizes further, disjoint from this one for positive steps"""
        return type(self)(self.start + steps * self.size, self.size)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Window) and (self.start, self.size) == (other.start, other.size)

    def __hash__(self) -> int:
        return hash((self.start, self.size))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.start}, {self.size})"
