"""Degree sequences and their basic predicates.

Vertices are labelled 1..n and identity is positional: entry i is the degree
demanded at vertex i, so permuting a sequence changes which object it denotes.
All realization machinery in the other modules relies on that convention.
"""

from __future__ import annotations

import enum
import operator
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DimensionError, DomainError

__all__ = [
    "DegreeSequence",
    "DegreeMatrix",
    "SequenceClass",
    "is_graphical",
    "is_tree_sequence",
    "classify",
    "sum_sequences",
]


class SequenceClass(str, enum.Enum):
    """Shape classes used by the packing algorithms to pick a branch."""

    NOT_TREE = "not-tree"
    PATH = "path"
    STAR = "star"
    OTHER_TREE = "other-tree"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


def _as_int_tuple(values: Iterable[object], what: str) -> tuple[int, ...]:
    try:
        return tuple(operator.index(v) for v in values)
    except TypeError as exc:
        raise DomainError(f"{what} must be integers, got {values!r}") from exc


@dataclass(frozen=True)
class DegreeSequence:
    """A positional list of vertex degrees; vertex ``v`` (1-based) demands ``degrees[v-1]``."""

    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        degrees = _as_int_tuple(self.degrees, "degrees")
        if not degrees:
            raise DomainError("a degree sequence needs at least one vertex")
        if any(d < 0 for d in degrees):
            raise DomainError(f"degrees must be non-negative, got {degrees}")
        object.__setattr__(self, "degrees", degrees)

    @property
    def n(self) -> int:
        return len(self.degrees)

    def __len__(self) -> int:
        return len(self.degrees)

    def __iter__(self) -> Iterator[int]:
        return iter(self.degrees)

    def degree(self, v: int) -> int:
        """Degree demanded at vertex ``v`` (1-based)."""
        if not 1 <= v <= self.n:
            raise DomainError(f"vertex {v} out of range 1..{self.n}")
        return self.degrees[v - 1]

    def total(self) -> int:
        return sum(self.degrees)

    def leaf_vertices(self) -> tuple[int, ...]:
        """Vertices demanded to have degree exactly 1."""
        return tuple(v for v, d in enumerate(self.degrees, 1) if d == 1)

    def internal_vertices(self) -> tuple[int, ...]:
        """Vertices demanded to have degree 2 or more."""
        return tuple(v for v, d in enumerate(self.degrees, 1) if d > 1)

    @classmethod
    def from_text(cls, text: str) -> "DegreeSequence":
        """Parse the comma-separated wire form, e.g. ``"2,2,1,1"``."""
        items = [part.strip() for part in text.split(",")]
        if any(not part for part in items):
            raise DomainError(f"malformed degree sequence text: {text!r}")
        try:
            return cls(tuple(int(part) for part in items))
        except ValueError as exc:
            raise DomainError(f"malformed degree sequence text: {text!r}") from exc

    def to_text(self) -> str:
        return ",".join(str(d) for d in self.degrees)


@dataclass(frozen=True)
class DegreeMatrix:
    """A stack of degree sequences over a common vertex set, one row per colour."""

    rows: tuple[DegreeSequence, ...]

    def __post_init__(self) -> None:
        rows = tuple(
            row if isinstance(row, DegreeSequence) else DegreeSequence(tuple(row))
            for row in self.rows
        )
        if not rows:
            raise DomainError("a degree matrix needs at least one row")
        n = rows[0].n
        if any(row.n != n for row in rows):
            raise DimensionError("all rows of a degree matrix must have the same length")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return self.rows[0].n

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def to_lists(self) -> list[list[int]]:
        return [list(row.degrees) for row in self.rows]

    @classmethod
    def from_lists(cls, rows: Iterable[Iterable[int]]) -> "DegreeMatrix":
        return cls(tuple(DegreeSequence(tuple(row)) for row in rows))


def is_graphical(seq: DegreeSequence) -> bool:
    """Whether some simple vertex-labelled graph has exactly these degrees.

    Erdos-Gallai test on the descending sort: even degree sum plus the n
    prefix inequalities. Total function; zeros are fine (isolated vertices).
    """
    degs = sorted(seq.degrees, reverse=True)
    n = len(degs)
    if degs[0] >= n:
        return False
    if sum(degs) % 2 != 0:
        return False
    prefix = 0
    for k in range(1, n + 1):
        prefix += degs[k - 1]
        tail = sum(min(d, k) for d in degs[k:])
        if prefix > k * (k - 1) + tail:
            return False
    return True


def is_tree_sequence(seq: DegreeSequence) -> bool:
    """Whether the sequence is realizable by a tree: n >= 2, all positive, sum 2n-2."""
    return seq.n >= 2 and min(seq.degrees) >= 1 and seq.total() == 2 * seq.n - 2


def classify(seq: DegreeSequence) -> SequenceClass:
    """Most specific shape class of a sequence.

    Star is checked before path so the ambiguous small cases ((1,1) on n=2,
    any n=3 tree sequence) report ``star`` - the branch that rules out
    packing, hence the conservative answer.
    """
    if not is_tree_sequence(seq):
        return SequenceClass.NOT_TREE
    if max(seq.degrees) == seq.n - 1:
        return SequenceClass.STAR
    if max(seq.degrees) <= 2:
        return SequenceClass.PATH
    return SequenceClass.OTHER_TREE


def sum_sequences(first: DegreeSequence, second: DegreeSequence) -> DegreeSequence:
    """Positionwise sum of two sequences of equal length."""
    if first.n != second.n:
        raise DimensionError(f"length mismatch: {first.n} vs {second.n}")
    return DegreeSequence(tuple(d + f for d, f in zip(first.degrees, second.degrees)))
