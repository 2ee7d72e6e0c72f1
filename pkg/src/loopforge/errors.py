"""Exception hierarchy shared by every loopforge module."""

from __future__ import annotations


class LoopError(Exception):
    """Base class for all loopforge errors."""


class MalformedInput(LoopError, ValueError):
    """A table document has the wrong shape, non-integers or out-of-range entries."""


class NotLatin(LoopError, ValueError):
    """A row or column of a multiplication table repeats a value."""

    def __init__(self, axis: str, index: int, value: int, positions: tuple[int, int]):
        self.axis = axis
        self.index = index
        self.value = value
        self.positions = positions
        super().__init__(
            f"not a Latin square: {axis} {index} contains {value} at "
            f"positions {positions[0]} and {positions[1]}"
        )


class NoIdentity(LoopError, ValueError):
    """A Latin square has no two-sided identity element."""


class SizeCap(LoopError):
    """A constructor would exceed the configured order cap."""


class NotAssociative(LoopError, ValueError):
    def __init__(self, witness: tuple[int, int, int]):
        self.witness = witness
        super().__init__(f"table is not associative: (ab)c != a(bc) at {witness}")


class NotPowerAssociative(LoopError, ValueError):
    pass


class NoInverse(LoopError, ValueError):
    pass


class NotNormal(LoopError, ValueError):
    pass


class NotMoufang(LoopError, ValueError):
    pass


class GroupCap(LoopError):
    """Permutation group closure exceeded the element cap."""


class WeightCap(LoopError, ValueError):
    pass


class BudgetExceeded(LoopError):
    """An enumeration would need more evaluations than the budget allows."""


class MissingVariable(LoopError, KeyError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"assignment does not cover variable x{index}")

    def __str__(self) -> str:
        return self.args[0]


class TermSyntaxError(LoopError, ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


class InternalError(LoopError, AssertionError):
    """Two independent computations of the same object disagreed."""
