"""Coverage sets, shared type aliases and the exception hierarchy."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

FloatArray = npt.NDArray[np.float64]
"""Type alias for real vectors: configurations, workspace points, directions."""


class IrisError(Exception):
    """Base class for all iris_inspect errors."""


class OutOfBounds(IrisError, ValueError):
    """A workspace point lies outside the workspace bounds."""


class InvalidEndpoint(IrisError, ValueError):
    """A motion endpoint is in collision."""


class ModelMismatch(IrisError, ValueError):
    """A configuration does not match the robot model layout."""


class OutOfRange(IrisError, ValueError):
    """An interpolation parameter lies outside [0, 1]."""


class NoSuchVertex(IrisError, LookupError):
    """A vertex id is not part of the graph."""


class BadEdge(IrisError, ValueError):
    """An edge is not incident to the vertex a path pair ends at."""


class VertexMismatch(IrisError, ValueError):
    """Two path pairs were combined although they end at different vertices."""


class InvalidStart(IrisError, ValueError):
    """The start configuration is in collision."""


class DegenerateScene(IrisError, ValueError):
    """The scene has nothing to inspect."""


class TooLarge(IrisError, ValueError):
    """An exhaustive computation exceeds its state-space guard."""


class InvalidPlan(IrisError, ValueError):
    """A plan uses an edge that does not exist."""


class ScenarioError(IrisError, ValueError):
    """A scenario or graph file could not be parsed or validated.

    Args:
        message: Human-readable description.
        line: 1-based line number for syntax errors.
        key: Dotted key path (``section.key``) for semantic errors.
    """

    def __init__(self, message: str, *, line: int | None = None, key: str | None = None) -> None:
        self.line = line
        self.key = key
        if line is not None:
            message = f"line {line}: {message}"
        elif key is not None:
            message = f"{key}: {message}"
        super().__init__(message)


class InvariantViolation(IrisError, AssertionError):
    """A debug audit found a broken search invariant."""


@dataclass(frozen=True, slots=True)
class CoverageSet:
    """Fixed-width bit-vector over POI indices.

    Bit ``i`` is set iff POI ``i`` is covered. Sets of different widths never mix.

    Example:
        ```python
        a = CoverageSet.from_indices([0, 2], width=4)
        b = CoverageSet.from_indices([1], width=4)
        len(a | b)  # 3
        (a | b).issuperset(a)  # True
        ```
    """

    bits: int
    width: int

    @classmethod
    def empty(cls, width: int) -> CoverageSet:
        """Return the empty set of the given width."""
        return cls(0, width)

    @classmethod
    def full(cls, width: int) -> CoverageSet:
        """Return the set holding every index below ``width``."""
        return cls((1 << width) - 1, width)

    @classmethod
    def from_indices(cls, indices: Iterable[int], width: int) -> CoverageSet:
        """Build a set from POI indices.

        Raises:
            ValueError: If an index lies outside ``[0, width)``.
        """
        bits = 0
        for index in indices:
            i = int(index)
            if not 0 <= i < width:
                msg = f"POI index {i} outside coverage width {width}"
                raise ValueError(msg)
            bits |= 1 << i
        return cls(bits, width)

    @classmethod
    def from_mask(cls, mask: npt.NDArray[np.bool_]) -> CoverageSet:
        """Build a set from a boolean mask whose length is the width."""
        return cls.from_indices(np.flatnonzero(mask).tolist(), len(mask))

    def _check(self, other: CoverageSet) -> None:
        if self.width != other.width:
            msg = f"Coverage widths differ: {self.width} vs {other.width}"
            raise ValueError(msg)

    def __or__(self, other: CoverageSet) -> CoverageSet:
        self._check(other)
        return CoverageSet(self.bits | other.bits, self.width)

    def __and__(self, other: CoverageSet) -> CoverageSet:
        self._check(other)
        return CoverageSet(self.bits & other.bits, self.width)

    def issuperset(self, other: CoverageSet) -> bool:
        """Return True iff every index of ``other`` is in this set."""
        self._check(other)
        return other.bits & ~self.bits == 0

    def issubset(self, other: CoverageSet) -> bool:
        """Return True iff every index of this set is in ``other``."""
        return other.issuperset(self)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, index: object) -> bool:
        return isinstance(index, int) and 0 <= index < self.width and bool(self.bits >> index & 1)

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def indices(self) -> list[int]:
        """Return the covered POI indices in ascending order."""
        return list(self)

    def __repr__(self) -> str:
        return f"CoverageSet({self.indices()}, width={self.width})"
