"""Labelled trees with prescribed degrees: codes, counting, enumeration, sampling.

The workhorse is the classical bijection between trees on 1..n and integer
codes of length n-2 in which vertex v appears exactly degree(v)-1 times.
Everything here - exact counts, exhaustive enumeration, uniform random
generation, edge probabilities - is phrased through that bijection.
"""

from __future__ import annotations

import heapq
import itertools
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .degseq import DegreeSequence, is_tree_sequence
from .errors import DomainError

__all__ = [
    "LabeledTree",
    "PruferCode",
    "prufer_decode",
    "prufer_encode",
    "count_trees",
    "enumerate_trees",
    "enumerate_caterpillars",
    "random_tree",
    "is_caterpillar",
    "edge_probability",
]

Edge = tuple[int, int]


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class LabeledTree:
    """A tree on vertices 1..n stored as a frozenset of (min, max) edges."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        n = operator.index(self.n)
        if n < 1:
            raise DomainError("a tree needs at least one vertex")
        edges = set()
        for edge in self.edges:
            u, v = edge
            u, v = operator.index(u), operator.index(v)
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise DomainError(f"edge {edge} out of range 1..{n}")
            edges.add(_norm_edge(u, v))
        if len(edges) != len(self.edges):
            raise DomainError("repeated edge in tree input")
        if len(edges) != n - 1:
            raise DomainError(f"a tree on {n} vertices needs {n - 1} edges, got {len(edges)}")
        if not _connected(n, edges):
            raise DomainError("edge set is not connected")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(edges))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def degree(self, v: int) -> int:
        if not 1 <= v <= self.n:
            raise DomainError(f"vertex {v} out of range 1..{self.n}")
        return sum(1 for e in self.edges if v in e)

    def degree_sequence(self) -> DegreeSequence:
        degs = [0] * self.n
        for u, v in self.edges:
            degs[u - 1] += 1
            degs[v - 1] += 1
        return DegreeSequence(tuple(degs))

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for nbrs in adj.values():
            nbrs.sort()
        return adj

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": [[u, v] for u, v in self.sorted_edges()]}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "LabeledTree":
        try:
            n = doc["n"]
            edges = [tuple(e) for e in doc["edges"]]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed tree document: {doc!r}") from exc
        return cls(n, frozenset(edges))

    def to_text(self) -> str:
        """Wire form: header line ``n=<int>``, then one ``u v`` line per edge."""
        lines = [f"n={self.n}"]
        lines.extend(f"{u} {v}" for u, v in self.sorted_edges())
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "LabeledTree":
        lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
        if not lines or not lines[0].startswith("n="):
            raise DomainError("tree text must start with an 'n=<int>' header")
        try:
            n = int(lines[0][2:])
            edges = []
            for line in lines[1:]:
                u, v = line.split()
                edges.append((int(u), int(v)))
        except ValueError as exc:
            raise DomainError(f"malformed tree text: {text!r}") from exc
        return cls(n, frozenset(edges))


def _connected(n: int, edges: Iterable[Edge]) -> bool:
    parent = list(range(n + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    components = n
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            components -= 1
    return components == 1


@dataclass(frozen=True)
class PruferCode:
    """Length n-2 code over 1..n; vertex v appears degree(v)-1 times in it."""

    n: int
    code: tuple[int, ...]

    def __post_init__(self) -> None:
        n = operator.index(self.n)
        if n < 2:
            raise DomainError("codes are defined for trees on at least 2 vertices")
        code = tuple(operator.index(s) for s in self.code)
        if len(code) != n - 2:
            raise DomainError(f"code for n={n} must have length {n - 2}, got {len(code)}")
        if any(not 1 <= s <= n for s in code):
            raise DomainError(f"code entries must lie in 1..{n}: {code}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "code", code)

    def degree_sequence(self) -> DegreeSequence:
        degs = [1] * self.n
        for s in self.code:
            degs[s - 1] += 1
        return DegreeSequence(tuple(degs))


def prufer_decode(code: PruferCode) -> LabeledTree:
    """The unique tree whose code this is.

    Standard decoding: repeatedly join the smallest current leaf to the next
    code symbol, then join the last two remaining vertices.
    """
    n = code.n
    degree = [0] * (n + 1)
    for v in range(1, n + 1):
        degree[v] = 1
    for s in code.code:
        degree[s] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for s in code.code:
        leaf = heapq.heappop(leaves)
        edges.append(_norm_edge(leaf, s))
        degree[leaf] -= 1
        degree[s] -= 1
        if degree[s] == 1:
            heapq.heappush(leaves, s)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append(_norm_edge(u, v))
    return LabeledTree(n, frozenset(edges))


def prufer_encode(tree: LabeledTree) -> PruferCode:
    """Inverse of :func:`prufer_decode`: peel smallest leaves, record their neighbours."""
    n = tree.n
    if n < 2:
        raise DomainError("codes are defined for trees on at least 2 vertices")
    adj = {v: set(nbrs) for v, nbrs in tree.adjacency().items()}
    leaves = [v for v in range(1, n + 1) if len(adj[v]) == 1]
    heapq.heapify(leaves)
    code = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        neighbour = next(iter(adj[leaf]))
        code.append(neighbour)
        adj[neighbour].discard(leaf)
        adj[leaf].clear()
        if len(adj[neighbour]) == 1:
            heapq.heappush(leaves, neighbour)
    return PruferCode(n, tuple(code))


def _require_tree_sequence(seq: DegreeSequence) -> None:
    if not is_tree_sequence(seq):
        raise DomainError(f"not a tree degree sequence: {seq.degrees}")


def count_trees(seq: DegreeSequence) -> int:
    """Exact number of trees realizing ``seq``: (n-2)! / prod (d_v - 1)!."""
    _require_tree_sequence(seq)
    result = math.factorial(seq.n - 2)
    for d in seq.degrees:
        result //= math.factorial(d - 1)
    return result


def _code_multiset(seq: DegreeSequence) -> list[int]:
    symbols = []
    for v, d in enumerate(seq.degrees, 1):
        symbols.extend([v] * (d - 1))
    return symbols


def _multiset_permutations(symbols: list[int]) -> Iterator[tuple[int, ...]]:
    """Distinct permutations of a multiset in lexicographic order."""
    counts = {s: symbols.count(s) for s in sorted(set(symbols))}
    length = len(symbols)
    prefix: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for s in counts:
            if counts[s] > 0:
                counts[s] -= 1
                prefix.append(s)
                yield from rec()
                prefix.pop()
                counts[s] += 1

    if length == 0:
        yield ()
    else:
        yield from rec()


def enumerate_trees(seq: DegreeSequence) -> Iterator[LabeledTree]:
    """Every tree realizing ``seq`` exactly once, in lexicographic code order.

    Exhaustive by design: the intended playground is n of ten or so.
    """
    _require_tree_sequence(seq)
    n = seq.n
    for code in _multiset_permutations(_code_multiset(seq)):
        yield prufer_decode(PruferCode(n, code))


def _generator_from(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    try:
        return np.random.default_rng(operator.index(seed))
    except (TypeError, ValueError) as exc:
        raise DomainError(f"seed must be a non-negative integer, got {seed!r}") from exc


def random_tree(seq: DegreeSequence, seed: int | np.random.Generator) -> LabeledTree:
    """A uniform random tree realizing ``seq``, deterministic given ``seed``.

    Uniformity comes from shuffling the fixed code multiset: every distinct
    code corresponds to the same number of orderings, so a uniform shuffle is
    uniform over codes, i.e. over trees. ``seed`` may also be a numpy
    Generator, in which case its stream is consumed.
    """
    _require_tree_sequence(seq)
    rng = _generator_from(seed)
    symbols = np.array(_code_multiset(seq), dtype=np.int64)
    code = rng.permutation(symbols)
    return prufer_decode(PruferCode(seq.n, tuple(int(s) for s in code)))


def is_caterpillar(tree: LabeledTree) -> bool:
    """Whether the non-leaf vertices induce a path (at most one non-leaf also counts)."""
    adj = tree.adjacency()
    internal = {v for v, nbrs in adj.items() if len(nbrs) >= 2}
    if len(internal) <= 1:
        return True
    # The induced subgraph on internal vertices of a tree is itself a tree,
    # so it is a path iff no internal vertex has 3 internal neighbours.
    return all(sum(1 for u in adj[v] if u in internal) <= 2 for v in internal)


def edge_probability(seq: DegreeSequence, u: int, v: int) -> Fraction:
    """Probability that a uniform random realization of ``seq`` contains edge (u, v).

    Exact rational (d_u + d_v - 2) / (n - 2); equals the fraction of trees
    containing the edge, which the enumeration tests check literally.
    """
    _require_tree_sequence(seq)
    if seq.n < 3:
        raise DomainError("edge probabilities need at least 3 vertices")
    if u == v:
        raise DomainError("an edge needs two distinct endpoints")
    return Fraction(seq.degree(u) + seq.degree(v) - 2, seq.n - 2)


def enumerate_caterpillars(seq: DegreeSequence) -> Iterator[LabeledTree]:
    """Every caterpillar realizing ``seq`` exactly once, via spine enumeration.

    A caterpillar's internal vertices form its spine path, so realizations
    correspond to (spine order up to reversal, assignment of the leaf set to
    spine slots). Spine ends can host degree-1 extra leaves beyond their one
    spine neighbour, interior vertices degree-2 fewer.
    """
    _require_tree_sequence(seq)
    internal = list(seq.internal_vertices())
    leaves = list(seq.leaf_vertices())
    n = seq.n
    if len(internal) <= 1:
        # Unique realization: the single edge (n=2) or the star.
        if n == 2:
            yield LabeledTree(2, frozenset({(1, 2)}))
        else:
            centre = internal[0]
            yield LabeledTree(n, frozenset(_norm_edge(centre, v) for v in leaves))
        return

    def assignments(slots: list[int], pool: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
        if not slots:
            yield []
            return
        take = slots[0]
        for chosen in itertools.combinations(pool, take):
            rest = tuple(x for x in pool if x not in chosen)
            for tail in assignments(slots[1:], rest):
                yield [chosen] + tail

    for spine in itertools.permutations(internal):
        if spine[0] > spine[-1]:
            continue
        caps = [
            seq.degree(v) - (1 if i in (0, len(spine) - 1) else 2)
            for i, v in enumerate(spine)
        ]
        base = [_norm_edge(spine[i], spine[i + 1]) for i in range(len(spine) - 1)]
        for groups in assignments(caps, tuple(leaves)):
            edges = list(base)
            for host, group in zip(spine, groups):
                edges.extend(_norm_edge(host, leaf) for leaf in group)
            yield LabeledTree(n, frozenset(edges))


# --- batched decoding -------------------------------------------------------
#
# The estimators in the sampling module draw millions of random trees; doing
# that one heapq decode at a time is far too slow. For n <= 11 a tree fits in
# a single 64-bit edge bitmask (C(11,2) = 55), and the decode loop vectorizes
# across a whole batch of shuffled codes.

_MASK_MAX_N = 11


def _edge_bit_table(n: int) -> np.ndarray:
    """(n+1, n+1) table mapping vertex pairs to single-bit uint64 masks."""
    table = np.zeros((n + 1, n + 1), dtype=np.uint64)
    idx = 0
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            table[u, v] = table[v, u] = np.uint64(1) << np.uint64(idx)
            idx += 1
    return table


def _decode_codes_to_masks(codes: np.ndarray, n: int, bit_table: np.ndarray) -> np.ndarray:
    """Vectorized decode of a (batch, n-2) code array into edge bitmasks."""
    batch = codes.shape[0]
    rows = np.arange(batch)
    degree = np.ones((batch, n + 1), dtype=np.int16)
    np.add.at(degree, (rows[:, None], codes), 1)
    masks = np.zeros(batch, dtype=np.uint64)
    vertex_ids = np.arange(1, n + 1, dtype=np.int64)
    sentinel = n + 1
    for t in range(n - 2):
        s = codes[:, t]
        candidates = np.where(degree[:, 1:] == 1, vertex_ids, sentinel)
        leaf = candidates.min(axis=1)
        masks |= bit_table[leaf, s]
        degree[rows, leaf] -= 1
        degree[rows, s] -= 1
    candidates = np.where(degree[:, 1:] == 1, vertex_ids, sentinel)
    u = candidates.min(axis=1)
    candidates[rows, u - 1] = sentinel
    v = candidates.min(axis=1)
    masks |= bit_table[u, v]
    return masks


def _random_code_batch(seq: DegreeSequence, rng: np.random.Generator, count: int) -> np.ndarray:
    """(count, n-2) array of independently shuffled code multisets."""
    base = np.array(_code_multiset(seq), dtype=np.int64)
    tiled = np.tile(base, (count, 1))
    return rng.permuted(tiled, axis=1)
