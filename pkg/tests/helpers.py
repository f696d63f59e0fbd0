"""Shared brute-force oracles and instance generators for the test suite.

Everything here is deliberately independent of the algorithms under test:
graphs are enumerated from scratch, degree checks are recomputed directly,
and expected values are derived by exhaustion rather than by formulas.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

import numpy as np

from treepack import DegreeSequence, LabeledTree, enumerate_trees


def compositions(total: int, parts: int, minimum: int) -> Iterator[tuple[int, ...]]:
    """All ordered tuples of length ``parts`` with entries >= minimum summing to total."""
    if parts == 1:
        if total >= minimum:
            yield (total,)
        return
    for head in range(minimum, total - minimum * (parts - 1) + 1):
        for tail in compositions(total - head, parts - 1, minimum):
            yield (head,) + tail


def all_tree_sequences(n: int) -> Iterator[tuple[int, ...]]:
    yield from compositions(2 * n - 2, n, 1)


def no_common_leaf_pairs(n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ordered tree-sequence pairs with every positionwise sum at least 3."""
    for d in all_tree_sequences(n):
        lower = [max(1, 3 - di) for di in d]
        slack = (2 * n - 2) - sum(lower)
        if slack < 0:
            continue
        for extra in compositions(slack + n, n, 1):
            yield d, tuple(l + e - 1 for l, e in zip(lower, extra))


def complementary_pairs(n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ordered tree-sequence pairs where every vertex is a leaf in at least one."""
    for d in all_tree_sequences(n):
        leaves = [i for i, di in enumerate(d) if di == 1]
        for k in range(1, len(leaves) + 1):
            for support in itertools.combinations(leaves, k):
                for inner in compositions(n - 2 + k, k, 2):
                    f = [1] * n
                    for pos, val in zip(support, inner):
                        f[pos] = val
                    yield d, tuple(f)


@lru_cache(maxsize=None)
def graphical_degree_tuples(n: int) -> frozenset[tuple[int, ...]]:
    """Degree tuples of every simple graph on n labelled vertices, by exhaustion."""
    pairs = list(itertools.combinations(range(n), 2))
    seen: set[tuple[int, ...]] = set()
    for bits in range(1 << len(pairs)):
        degs = [0] * n
        for idx, (u, v) in enumerate(pairs):
            if bits >> idx & 1:
                degs[u] += 1
                degs[v] += 1
        seen.add(tuple(degs))
    return frozenset(seen)


def edge_index(n: int) -> dict[tuple[int, int], int]:
    idx, k = {}, 0
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            idx[(u, v)] = k
            k += 1
    return idx


_MASK_CACHE: dict[tuple[int, ...], np.ndarray] = {}


def tree_masks(degrees: tuple[int, ...]) -> np.ndarray:
    """Bitmask per realization of a tree sequence; cached across the suite."""
    cached = _MASK_CACHE.get(degrees)
    if cached is not None:
        return cached
    seq = DegreeSequence(degrees)
    idx = edge_index(seq.n)
    masks = np.array(
        [sum(1 << idx[e] for e in t.edges) for t in enumerate_trees(seq)],
        dtype=np.uint64,
    )
    _MASK_CACHE[degrees] = masks
    return masks


def disjoint_pair_exists(d: tuple[int, ...], f: tuple[int, ...]) -> bool:
    """Exhaustive oracle: is there an edge-disjoint ordered pair of tree realizations?"""
    md, mf = tree_masks(d), tree_masks(f)
    return bool((np.bitwise_and(md[:, None], mf[None, :]) == 0).any())


def count_disjoint_pairs(d: tuple[int, ...], f: tuple[int, ...]) -> int:
    md, mf = tree_masks(d), tree_masks(f)
    return int((np.bitwise_and(md[:, None], mf[None, :]) == 0).sum())


def pairwise_disjoint(trees) -> bool:
    return all(
        a.edges.isdisjoint(b.edges) for a, b in itertools.combinations(trees, 2)
    )


def realizes(tree: LabeledTree, degrees: tuple[int, ...]) -> bool:
    return tree.degree_sequence().degrees == tuple(degrees)


def bipartite_disjoint_exists(inst) -> bool:
    """Brute-force oracle for bipartite pair instances (small classes only)."""
    n1, n2 = inst.left_size, inst.right_size
    cells = [(i, j) for i in range(n1) for j in range(n2)]

    def realizations(rows: tuple[int, ...], cols: tuple[int, ...], allowed: frozenset):
        found = []
        for bits in range(1 << len(cells)):
            chosen = [cells[t] for t in range(len(cells)) if bits >> t & 1]
            if any(c not in allowed for c in chosen):
                continue
            r = [0] * n1
            c = [0] * n2
            for i, j in chosen:
                r[i] += 1
                c[j] += 1
            if tuple(r) == rows and tuple(c) == cols:
                found.append(frozenset(chosen))
        return found

    everything = frozenset(cells)
    for g1 in realizations(inst.first[0], inst.first[1], everything):
        if realizations(inst.second[0], inst.second[1], everything - g1):
            return True
    return False


def random_multi_rows(rng: np.random.Generator, max_m: int = 4, max_n: int = 14):
    """Random MultiInstance rows: disjoint parts, valid tree sequences per row."""
    m = int(rng.integers(1, max_m + 1))
    while True:
        sizes = [int(rng.integers(2, 5)) for _ in range(m)]
        if sum(sizes) <= max_n - 2:
            break
    low = max(sum(sizes), max(sizes) + 2, m + 2, 4)
    n = int(rng.integers(low, max_n + 1))
    verts = [int(v) for v in rng.permutation(np.arange(1, n + 1))]
    parts, pos = [], 0
    for s in sizes:
        parts.append(sorted(verts[pos : pos + s]))
        pos += s
    rows = []
    for i in range(m):
        size = sizes[i]
        total = n - 2 + size
        alloc = [2] * size
        if rng.integers(0, 2) == 0:
            alloc[int(rng.integers(0, size))] += total - 2 * size
        else:
            for _ in range(total - 2 * size):
                alloc[int(rng.integers(0, size))] += 1
        degs = [1] * n
        for v, dval in zip(parts[i], alloc):
            degs[v - 1] = dval
        rows.append(degs)
    return rows, n, m
