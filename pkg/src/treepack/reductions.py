"""Hardness gadgets: answer-preserving transformations between packing instances.

Three transformations chain a bipartite pair instance down to a simple pair
whose first sequence is a tree sequence, preserving throughout whether
edge-disjoint realizations exist. A small backtracking decider certifies the
preservation on desk-scale instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .degseq import DegreeSequence, is_tree_sequence
from .errors import DimensionError, DomainError, InternalInvariantError, ResourceGuardError

__all__ = [
    "BipartitePairInstance",
    "SimplePairInstance",
    "bipartite_to_simple",
    "add_dominating_vertex",
    "add_pendant_gadget",
    "reduce_to_tree_sequence",
    "brute_force_disjoint_decision",
]


@dataclass(frozen=True)
class SimplePairInstance:
    """Two degree sequences over a common labelled vertex set."""

    first: DegreeSequence
    second: DegreeSequence

    def __post_init__(self) -> None:
        first = self.first if isinstance(self.first, DegreeSequence) else DegreeSequence(tuple(self.first))
        second = self.second if isinstance(self.second, DegreeSequence) else DegreeSequence(tuple(self.second))
        if first.n != second.n:
            raise DimensionError(f"length mismatch: {first.n} vs {second.n}")
        object.__setattr__(self, "first", first)
        object.__setattr__(self, "second", second)

    @property
    def n(self) -> int:
        return self.first.n

    def to_json_dict(self) -> dict:
        return {"D": list(self.first.degrees), "F": list(self.second.degrees)}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SimplePairInstance":
        try:
            return cls(DegreeSequence(tuple(doc["D"])), DegreeSequence(tuple(doc["F"])))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed pair instance: {doc!r}") from exc


@dataclass(frozen=True)
class BipartitePairInstance:
    """Two bipartite degree-sequence pairs over classes of sizes left/right."""

    left_size: int
    right_size: int
    first: tuple[tuple[int, ...], tuple[int, ...]]
    second: tuple[tuple[int, ...], tuple[int, ...]]

    def __post_init__(self) -> None:
        first = (tuple(self.first[0]), tuple(self.first[1]))
        second = (tuple(self.second[0]), tuple(self.second[1]))
        for name, pair in (("first", first), ("second", second)):
            left, right = pair
            if len(left) != self.left_size or len(right) != self.right_size:
                raise DimensionError(f"{name} class lists do not match the class sizes")
            if any(d < 0 for d in left + right):
                raise DomainError(f"{name} has a negative degree")
            if sum(left) != sum(right):
                raise DomainError(f"{name} class sums differ: {sum(left)} vs {sum(right)}")
            if any(d > self.right_size for d in left) or any(d > self.left_size for d in right):
                raise DomainError(f"{name} has a degree exceeding the opposite class size")
        object.__setattr__(self, "first", first)
        object.__setattr__(self, "second", second)

    def to_json_dict(self) -> dict:
        return {
            "n1": self.left_size,
            "n2": self.right_size,
            "D": [list(self.first[0]), list(self.first[1])],
            "F": [list(self.second[0]), list(self.second[1])],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "BipartitePairInstance":
        try:
            return cls(
                doc["n1"],
                doc["n2"],
                (tuple(doc["D"][0]), tuple(doc["D"][1])),
                (tuple(doc["F"][0]), tuple(doc["F"][1])),
            )
        except (KeyError, TypeError, IndexError) as exc:
            raise DomainError(f"malformed bipartite instance: {doc!r}") from exc


def bipartite_to_simple(inst: BipartitePairInstance) -> SimplePairInstance:
    """Collapse a bipartite pair to a simple pair by saturating one class per side.

    The first sequence gains a clique on the left class (add left_size - 1 to
    each left degree), the second a clique on the right class; any realization
    must then contain those cliques, so deleting them recovers a bipartite
    realization and the answer is preserved.
    """
    n1, n2 = inst.left_size, inst.right_size
    first = tuple(d + n1 - 1 for d in inst.first[0]) + inst.first[1]
    second = inst.second[0] + tuple(d + n2 - 1 for d in inst.second[1])
    return SimplePairInstance(DegreeSequence(first), DegreeSequence(second))


def add_dominating_vertex(inst: SimplePairInstance) -> SimplePairInstance:
    """Append a vertex adjacent to everything in the first graph, isolated in the second.

    Every degree of the first sequence grows by 1 and the new vertex demands
    n, forcing it to dominate; the second sequence gains a 0. Answers are
    preserved, and the first output sequence has no zero entries.
    """
    n = inst.n
    first = tuple(d + 1 for d in inst.first.degrees) + (n,)
    second = inst.second.degrees + (0,)
    return SimplePairInstance(DegreeSequence(first), DegreeSequence(second))


def add_pendant_gadget(inst: SimplePairInstance) -> SimplePairInstance:
    """Append two vertices raising the first sequence's sum by exactly 2.

    The second graph gets a dominating vertex over the original part, which
    forces the first graph to spend the new near-isolated pair on a single
    pendant edge; iterating therefore walks the first sequence's sum up to the
    tree threshold without disturbing the answer.
    """
    n = inst.n
    first = inst.first.degrees + (1, 1)
    second = tuple(f + 1 for f in inst.second.degrees) + (n, 0)
    return SimplePairInstance(DegreeSequence(first), DegreeSequence(second))


def reduce_to_tree_sequence(inst: SimplePairInstance) -> SimplePairInstance:
    """Transform until the first sequence is a tree degree sequence, preserving the answer.

    Normalization first: while the first sequence has a zero or its sum is
    below 2n - 2, add a dominating vertex (one pass clears the zeros and makes
    the deficit non-negative). The remaining excess must be even; each pendant
    step then shrinks it by exactly 2.
    """
    while min(inst.first.degrees) == 0 or inst.first.total() < 2 * inst.n - 2:
        inst = add_dominating_vertex(inst)
    excess = inst.first.total() - (2 * inst.n - 2)
    if excess % 2 != 0:
        raise DomainError(
            f"excess {excess} is odd after normalization; no tree sequence is reachable"
        )
    for _ in range(excess // 2):
        inst = add_pendant_gadget(inst)
    if not is_tree_sequence(inst.first):  # pragma: no cover - arithmetic guarantee
        raise InternalInvariantError("pendant iteration missed the tree threshold")
    return inst


# --- exhaustive certification ---------------------------------------------------


def _residual_graphical(residual: list[int], start: int) -> bool:
    """Erdos-Gallai check on the not-yet-wired suffix; conservative prune."""
    degs = sorted((residual[v] for v in range(start, len(residual))), reverse=True)
    if not degs:
        return True
    if sum(degs) % 2 != 0:
        return False
    k_max = len(degs)
    if degs[0] >= k_max:
        return False
    prefix = 0
    for k in range(1, k_max + 1):
        prefix += degs[k - 1]
        tail = sum(min(d, k) for d in degs[k:])
        if prefix > k * (k - 1) + tail:
            return False
    return True


def _graph_realizations(
    degrees: tuple[int, ...], allowed: frozenset[tuple[int, int]]
) -> Iterator[frozenset[tuple[int, int]]]:
    """All simple graphs with the given positional degrees using only allowed edges.

    Canonical recursion: vertices are wired in increasing order, each choosing
    its full set of higher-indexed partners in one step, so every graph is
    produced exactly once.
    """
    n = len(degrees)
    residual = list(degrees)
    chosen: list[tuple[int, int]] = []

    def rec(v: int) -> Iterator[frozenset[tuple[int, int]]]:
        if v == n + 1:
            yield frozenset(chosen)
            return
        need = residual[v - 1]
        if need == 0:
            yield from rec(v + 1)
            return
        candidates = [
            u for u in range(v + 1, n + 1) if residual[u - 1] > 0 and (v, u) in allowed
        ]
        if len(candidates) < need:
            return
        for combo in itertools.combinations(candidates, need):
            for u in combo:
                residual[u - 1] -= 1
            residual[v - 1] = 0
            if _residual_graphical(residual, v):
                chosen.extend((v, u) for u in combo)
                yield from rec(v + 1)
                del chosen[len(chosen) - need :]
            residual[v - 1] = need
            for u in combo:
                residual[u - 1] += 1

    yield from rec(1)


def brute_force_disjoint_decision(inst: SimplePairInstance, guard_n: int = 7) -> bool:
    """Whether edge-disjoint simple graphs realizing the two sequences exist.

    Backtracking over realizations of the first sequence, testing the second
    on the complement of each. Degree-0 vertices are simply isolated. Guarded:
    the search is exponential and meant for certification at desk scale.
    """
    if inst.n > guard_n:
        raise ResourceGuardError(
            f"brute-force decision guarded at n <= {guard_n}, got n = {inst.n}"
        )
    n = inst.n
    all_pairs = frozenset((u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1))
    for g1 in _graph_realizations(inst.first.degrees, all_pairs):
        complement = all_pairs - g1
        if next(_graph_realizations(inst.second.degrees, complement), None) is not None:
            return True
    return False
