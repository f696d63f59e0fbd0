"""Constructive edge-disjoint packings of tree degree sequences.

Each packer verifies its own postconditions (positional degrees, pairwise
disjointness, shape claims) before returning; a violation raises
InternalInvariantError rather than handing back a bad object.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .degseq import (
    DegreeMatrix,
    DegreeSequence,
    SequenceClass,
    classify,
    is_graphical,
    is_tree_sequence,
    sum_sequences,
)
from .errors import (
    DimensionError,
    DomainError,
    InfeasibleError,
    InternalInvariantError,
)
from .sampling import analyze_pair
from .trees import (
    Edge,
    LabeledTree,
    PruferCode,
    _generator_from,
    enumerate_trees,
    is_caterpillar,
    prufer_decode,
    random_tree,
)

__all__ = [
    "PackingResult",
    "MultiInstance",
    "disjoint_hamiltonian_paths",
    "pack_caterpillars",
    "kundu_packable",
    "pack_complementary_leaves",
    "nonstar_restricted_tree",
    "pack_multi",
    "common_edges",
]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class PackingResult:
    """Pairwise edge-disjoint trees over a common vertex set, in input row order."""

    trees: tuple[LabeledTree, ...]

    def __post_init__(self) -> None:
        trees = tuple(self.trees)
        if not trees:
            raise DomainError("a packing needs at least one tree")
        n = trees[0].n
        if any(t.n != n for t in trees):
            raise DimensionError("all trees in a packing must share the vertex set")
        for a, b in itertools.combinations(trees, 2):
            if a.edges & b.edges:
                raise DomainError("trees in a packing must be pairwise edge-disjoint")
        object.__setattr__(self, "trees", trees)

    @property
    def n(self) -> int:
        return self.trees[0].n

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "trees": [[[u, v] for u, v in t.sorted_edges()] for t in self.trees],
        }


@dataclass(frozen=True)
class MultiInstance:
    """Input to :func:`pack_multi`: tree-sequence rows whose non-leaf sets are disjoint.

    ``parts[i]`` is the set of vertices with degree above 1 in row i;
    ``free_leaves`` are the vertices that are leaves in every row.
    """

    matrix: DegreeMatrix
    parts: tuple[frozenset[int], ...]
    free_leaves: frozenset[int]

    def __post_init__(self) -> None:
        derived = tuple(frozenset(row.internal_vertices()) for row in self.matrix.rows)
        if tuple(self.parts) != derived:
            raise DomainError("parts must be the per-row sets of non-leaf vertices")
        seen: set[int] = set()
        for i, part in enumerate(derived):
            if not is_tree_sequence(self.matrix.rows[i]):
                raise DomainError(f"row {i + 1} is not a tree degree sequence")
            if len(part) < 2:
                raise DomainError(f"row {i + 1} has fewer than 2 non-leaf vertices")
            if seen & part:
                raise DomainError("some vertex is a non-leaf in two rows")
            seen |= part
        free = frozenset(range(1, self.matrix.n + 1)) - seen
        if frozenset(self.free_leaves) != free:
            raise DomainError("free_leaves must be the vertices internal to no row")
        object.__setattr__(self, "parts", derived)
        object.__setattr__(self, "free_leaves", free)

    @classmethod
    def from_matrix(cls, matrix: DegreeMatrix) -> "MultiInstance":
        parts = tuple(frozenset(row.internal_vertices()) for row in matrix.rows)
        seen: set[int] = set()
        for part in parts:
            seen |= part
        free = frozenset(range(1, matrix.n + 1)) - seen
        return cls(matrix, parts, free)

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def num_rows(self) -> int:
        return self.matrix.num_rows


def common_edges(first: LabeledTree, second: LabeledTree) -> frozenset[Edge]:
    """Edges present in both trees."""
    if first.n != second.n:
        raise DimensionError(f"vertex-count mismatch: {first.n} vs {second.n}")
    return first.edges & second.edges


# --- two edge-disjoint Hamiltonian paths -------------------------------------


def _second_path_order(n: int) -> list[int]:
    """Hamiltonian path from 2 to 3 on 1..n using no consecutive-integer edge.

    Built inductively from 2,4,1,3: to go from n-1 to n vertices, split the
    first edge along the path whose endpoints both keep their distance from
    the new top label, and thread the new vertex through it.
    """
    order = [2, 4, 1, 3]
    for m in range(5, n + 1):
        for t in range(len(order) - 1):
            if order[t] < m - 1 and order[t + 1] < m - 1:
                order.insert(t + 1, m)
                break
        else:  # pragma: no cover - the induction always finds an edge
            raise InternalInvariantError("no insertable edge while extending the second path")
    return order


def disjoint_hamiltonian_paths(n: int) -> tuple[LabeledTree, LabeledTree]:
    """Two edge-disjoint Hamiltonian paths on 1..n with four distinct ends.

    The first path is 1,2,...,n; the second runs from 2 to 3 and avoids every
    consecutive-integer edge, which makes the disjointness immediate.
    """
    if n < 4:
        raise DomainError("two disjoint Hamiltonian paths need at least 4 vertices")
    first = LabeledTree(n, frozenset((i, i + 1) for i in range(1, n)))
    order = _second_path_order(n)
    second = LabeledTree(n, frozenset(_norm(a, b) for a, b in zip(order, order[1:])))
    return first, second


# --- caterpillar packing ------------------------------------------------------


def _select_reduction(labels: Sequence[int], x: dict[int, int], y: dict[int, int]):
    """Smallest i with x_i >= 3 and smallest j with (x_j, y_j) = (1, 2), if both exist."""
    i = min((v for v in labels if x[v] >= 3), default=None)
    if i is None:
        return None
    j = min((v for v in labels if x[v] == 1 and y[v] == 2), default=None)
    if j is None:
        return None
    return i, j


def _paths_branch(labels: Sequence[int], x: dict[int, int], y: dict[int, int]):
    """Both sequences are path-shaped: relabel the canonical disjoint path pair.

    Canonical label 1 and k carry the first sequence's leaf positions, labels
    2 and 3 the second's; everything else fills in increasing order. The four
    leaf positions are distinct because the sequences share no leaves.
    """
    k = len(labels)
    x_leaves = sorted(v for v in labels if x[v] == 1)
    y_leaves = sorted(v for v in labels if y[v] == 1)
    rest = sorted(set(labels) - set(x_leaves) - set(y_leaves))
    position = {1: x_leaves[0], k: x_leaves[1], 2: y_leaves[0], 3: y_leaves[1]}
    for label, v in zip(range(4, k), rest):
        position[label] = v
    first = {_norm(position[i], position[i + 1]) for i in range(1, k)}
    order = _second_path_order(k)
    second = {_norm(position[a], position[b]) for a, b in zip(order, order[1:])}
    return first, second


def _spine_plus_leaves(vertices: Sequence[int], edges: set[Edge]) -> list[int]:
    """The maximal path through all internal vertices of a caterpillar,
    extended by the smallest leaf neighbour at each end."""
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    internal = {v for v in vertices if len(adj[v]) >= 2}
    if len(internal) < 2:
        raise InternalInvariantError("caterpillar spine unexpectedly degenerate")
    inner_deg = {v: sum(1 for u in adj[v] if u in internal) for v in internal}
    ends = sorted(v for v in internal if inner_deg[v] == 1)
    spine = [ends[0]]
    prev = None
    while True:
        nxt = sorted(u for u in adj[spine[-1]] if u in internal and u != prev)
        if not nxt:
            break
        prev = spine[-1]
        spine.append(nxt[0])
    if set(spine) != internal:
        raise InternalInvariantError("internal vertices do not form a path")
    head = min(u for u in adj[spine[0]] if u not in internal)
    tail = min(u for u in adj[spine[-1]] if u not in internal)
    return [head] + spine + [tail]


def _pack_pair(labels: list[int], x: dict[int, int], y: dict[int, int]):
    """Recursive caterpillar packing; returns the two edge sets in input order."""
    if max(x.values()) <= 2 and max(y.values()) <= 2:
        return _paths_branch(labels, x, y)
    selection = _select_reduction(labels, x, y)
    if selection is not None:
        return _reduce_and_extend(labels, x, y, *selection)
    selection = _select_reduction(labels, y, x)
    if selection is None:  # pragma: no cover - impossible by the counting argument
        raise InternalInvariantError("no reduction index although a degree exceeds 2")
    second, first = _reduce_and_extend(labels, y, x, *selection)
    return first, second


def _reduce_and_extend(labels: list[int], x: dict[int, int], y: dict[int, int], i: int, j: int):
    """One inductive step: drop vertex j, pack recursively, then put it back.

    j rejoins the first tree as a leaf of i, and subdivides a spine edge of the
    second tree that avoids i, so both trees stay caterpillars and disjoint.
    """
    sub = [v for v in labels if v != j]
    x2 = {v: x[v] for v in sub}
    x2[i] -= 1
    y2 = {v: y[v] for v in sub}
    ex2, ey2 = _pack_pair(sub, x2, y2)
    ex = ex2 | {_norm(i, j)}
    path = _spine_plus_leaves(sub, ey2)
    for a, b in zip(path, path[1:]):
        if a != i and b != i:
            ey = (ey2 - {_norm(a, b)}) | {_norm(a, j), _norm(j, b)}
            break
    else:  # pragma: no cover - the spine path always has 3+ edges
        raise InternalInvariantError("no spine edge avoiding the reattachment vertex")
    return ex, ey


def _check_pair_inputs(first: DegreeSequence, second: DegreeSequence) -> None:
    if first.n != second.n:
        raise DimensionError(f"length mismatch: {first.n} vs {second.n}")
    if not is_tree_sequence(first):
        raise DomainError(f"first sequence is not a tree sequence: {first.degrees}")
    if not is_tree_sequence(second):
        raise DomainError(f"second sequence is not a tree sequence: {second.degrees}")


def _verify_realizes(tree: LabeledTree, seq: DegreeSequence, what: str) -> None:
    if tree.degree_sequence() != seq:
        raise InternalInvariantError(f"{what} does not realize its degree sequence")


def pack_caterpillars(first: DegreeSequence, second: DegreeSequence) -> PackingResult:
    """Edge-disjoint caterpillar realizations of two tree sequences with no common leaf.

    Requires min(first_v + second_v) >= 3. Induction: strip a leaf of the
    first sequence that is degree 2 in the second, pack the rest, reattach.
    The base case is two path shapes, handled by the Hamiltonian-path pair.
    """
    _check_pair_inputs(first, second)
    low = min(d + f for d, f in zip(first.degrees, second.degrees))
    if low < 3:
        raise DomainError("sequences share a leaf position (some d_v + f_v < 3)")
    labels = list(range(1, first.n + 1))
    e1, e2 = _pack_pair(
        labels,
        dict(zip(labels, first.degrees)),
        dict(zip(labels, second.degrees)),
    )
    t1 = LabeledTree(first.n, frozenset(e1))
    t2 = LabeledTree(second.n, frozenset(e2))
    _verify_realizes(t1, first, "first caterpillar")
    _verify_realizes(t2, second, "second caterpillar")
    if t1.edges & t2.edges:
        raise InternalInvariantError("caterpillar realizations share an edge")
    if not (is_caterpillar(t1) and is_caterpillar(t2)):
        raise InternalInvariantError("packed trees are not caterpillars")
    return PackingResult((t1, t2))


# --- Kundu decision -----------------------------------------------------------


def kundu_packable(first: DegreeSequence, second: DegreeSequence) -> bool:
    """Whether two tree sequences admit edge-disjoint tree realizations.

    Decision only: the criterion is graphicality of the positionwise sum.
    """
    _check_pair_inputs(first, second)
    return is_graphical(sum_sequences(first, second))


# --- complementary-leaf packing -------------------------------------------------


def _rejection_budget(p_lower) -> int:
    # 50 / p_lower attempts: failure probability under the true success rate
    # p >= p_lower is below exp(-50), so the exhaustive fallback is a formality.
    return -(-50 * p_lower.denominator // p_lower.numerator)


def pack_complementary_leaves(
    first: DegreeSequence,
    second: DegreeSequence,
    seed: int | np.random.Generator,
) -> PackingResult:
    """Edge-disjoint realizations when every vertex is a leaf in one of the inputs.

    Feasible exactly when neither sequence is a star. The construction is
    seeded rejection sampling over uniform random realizations - justified by
    the expected single shared edge - with an exhaustive deterministic
    fallback after 50/p_lower failed attempts.
    """
    _check_pair_inputs(first, second)
    if any(min(d, f) != 1 for d, f in zip(first.degrees, second.degrees)):
        raise DomainError("some vertex is a non-leaf in both sequences")
    if classify(first) is SequenceClass.STAR or classify(second) is SequenceClass.STAR:
        raise InfeasibleError("a star leaves no room for a second tree on its vertex set")
    analysis = analyze_pair(first, second)
    p_lower = analysis.disjoint_lower_bound
    if p_lower <= 0:  # pragma: no cover - excluded by the star check
        raise InternalInvariantError("collision bound vanished on a feasible instance")
    rng = _generator_from(seed)
    for _ in range(_rejection_budget(p_lower)):
        t1 = random_tree(first, rng)
        t2 = random_tree(second, rng)
        if not t1.edges & t2.edges:
            break
    else:
        t1, t2 = _exhaustive_disjoint_pair(first, second)
    _verify_realizes(t1, first, "first tree")
    _verify_realizes(t2, second, "second tree")
    if t1.edges & t2.edges:  # pragma: no cover
        raise InternalInvariantError("rejection sampling returned overlapping trees")
    return PackingResult((t1, t2))


def _exhaustive_disjoint_pair(first: DegreeSequence, second: DegreeSequence):
    for t1 in enumerate_trees(first):
        for t2 in enumerate_trees(second):
            if not t1.edges & t2.edges:
                return t1, t2
    raise InternalInvariantError(
        "no disjoint pair exists although the feasibility criterion holds"
    )  # pragma: no cover


# --- restricted non-star trees --------------------------------------------------


def _check_parts(seq: DegreeSequence, parts: Sequence[frozenset[int]]) -> None:
    leaves = set(seq.leaf_vertices())
    seen: set[int] = set()
    for part in parts:
        if len(part) < 2:
            raise DomainError("every part needs at least 2 vertices")
        if not part <= leaves:
            raise DomainError(f"part {sorted(part)} contains a non-leaf vertex")
        if seen & part:
            raise DomainError("parts must be pairwise disjoint")
        seen |= part


def nonstar_restricted_tree(
    seq: DegreeSequence, parts: Sequence[Iterable[int]]
) -> LabeledTree:
    """A realization whose restriction to internal-vertices + any one part is non-star.

    The internal vertices are laid out as a path (their degrees are all >= 2,
    so a path spine always fits), and every part gets attached to two distinct
    spine vertices whenever capacities allow, which keeps each restriction
    from collapsing to a star. With exactly two internal vertices the layout
    degenerates to the forced edge between them plus balanced attachment.
    """
    if not is_tree_sequence(seq):
        raise DomainError(f"not a tree degree sequence: {seq.degrees}")
    part_sets = [frozenset(p) for p in parts]
    m = len(part_sets) + 1
    n = seq.n
    if not n > m > 2:
        raise DomainError(f"need n > m > 2, got n={n}, m={m}")
    internal = list(seq.internal_vertices())
    if len(internal) < 2:
        raise DomainError("need at least 2 internal vertices")
    if max(seq.degrees) > n - m:
        raise DomainError(f"max degree {max(seq.degrees)} exceeds n - m = {n - m}")
    _check_parts(seq, part_sets)

    if len(internal) == 2:
        edges = _restricted_two_internal(seq, part_sets)
    else:
        edges = _restricted_spine(seq, part_sets)

    tree = LabeledTree(n, frozenset(edges))
    _verify_realizes(tree, seq, "restricted tree")
    for part in part_sets:
        if _restriction_is_star(tree, set(internal) | set(part)):
            raise InternalInvariantError("restriction to a part collapsed to a star")
    return tree


def _restriction_is_star(tree: LabeledTree, subset: set[int]) -> bool:
    induced = [e for e in tree.edges if e[0] in subset and e[1] in subset]
    if len(induced) != len(subset) - 1:
        raise InternalInvariantError("restriction is not a spanning subtree")
    degs: dict[int, int] = {v: 0 for v in subset}
    for u, v in induced:
        degs[u] += 1
        degs[v] += 1
    return max(degs.values()) == len(subset) - 1


def _restricted_two_internal(seq: DegreeSequence, parts: list[frozenset[int]]):
    """Exactly two internal vertices: their edge is forced and the two halves split m ways."""
    m = len(parts) + 1
    vi, vj = seq.internal_vertices()
    edges = {_norm(vi, vj)}
    used: set[int] = set()
    for part in parts:
        a, b = sorted(part)[:2]
        edges.add(_norm(vi, a))
        edges.add(_norm(vj, b))
        used.update((a, b))
    remainder = sorted(set(seq.leaf_vertices()) - used)
    take = seq.degree(vi) - m
    for leaf in remainder[:take]:
        edges.add(_norm(vi, leaf))
    for leaf in remainder[take:]:
        edges.add(_norm(vj, leaf))
    return edges


def _restricted_spine(seq: DegreeSequence, parts: list[frozenset[int]]):
    """Three or more internal vertices: path spine, two attachment hosts per part."""
    internal = sorted(seq.internal_vertices())
    by_weight = sorted(internal, key=lambda v: (-seq.degree(v), v))
    end_a, end_b = by_weight[0], by_weight[1]
    middle = [v for v in internal if v not in (end_a, end_b)]
    spine = [end_a] + middle + [end_b]
    capacity = {v: seq.degree(v) - 2 for v in spine}
    capacity[end_a] += 1
    capacity[end_b] += 1
    edges = {_norm(a, b) for a, b in zip(spine, spine[1:])}

    def grab_host(exclude: set[int]) -> int | None:
        preferred = [end_a, end_b] + middle
        for v in preferred:
            if capacity[v] > 0 and v not in exclude:
                return v
        return None

    attached: set[int] = set()
    for part in parts:
        ordered = sorted(part)
        host1 = grab_host(exclude=set())
        edges.add(_norm(host1, ordered[0]))
        capacity[host1] -= 1
        attached.add(ordered[0])
        host2 = grab_host(exclude={host1})
        if host2 is None:
            # Capacity-starved corner: fall back to the same host, which must
            # then be a spine end so the spine still supplies two independent
            # edges to the restriction.
            host2 = host1 if capacity[host1] > 0 else grab_host(exclude=set())
        edges.add(_norm(host2, ordered[1]))
        capacity[host2] -= 1
        attached.add(ordered[1])
    leftovers = sorted(set(seq.leaf_vertices()) - attached)
    for leaf in leftovers:
        host = next(v for v in spine if capacity[v] > 0)
        edges.add(_norm(host, leaf))
        capacity[host] -= 1
    return edges


# --- packing many trees ---------------------------------------------------------


def pack_multi(inst: MultiInstance, seed: int | np.random.Generator) -> PackingResult:
    """Pairwise edge-disjoint realizations of all rows of a MultiInstance.

    Feasible exactly when the largest degree is at most n - m. One row is a
    plain realization, two rows defer to the complementary-leaf packer, and
    three or more build restricted trial trees and then cancel parallel edges
    pair by pair, re-packing the two induced subtrees on the affected parts.
    """
    matrix = inst.matrix
    m, n = inst.num_rows, inst.n
    peak = max(max(row.degrees) for row in matrix.rows)
    if peak > n - m:
        raise InfeasibleError(
            f"max degree {peak} exceeds n - m = {n - m}; the summed sequence is not graphical"
        )
    rng = _generator_from(seed)
    if m == 1:
        tree = _canonical_realization(matrix.rows[0])
        _verify_realizes(tree, matrix.rows[0], "row 1")
        return PackingResult((tree,))
    if m == 2:
        return pack_complementary_leaves(matrix.rows[0], matrix.rows[1], rng)

    edge_sets: list[frozenset[Edge]] = []
    for i in range(m):
        others = [inst.parts[k] for k in range(m) if k != i]
        trial = nonstar_restricted_tree(matrix.rows[i], others)
        edge_sets.append(trial.edges)

    # Repairs never create new parallel edges (each touches only the edges
    # inside its own part union), so the set of pairs needing repair is fixed
    # up front by the trial trees.
    need = [
        (i, k)
        for i, k in itertools.combinations(range(m), 2)
        if edge_sets[i] & edge_sets[k]
    ]
    solved = _resolve_parallels(edge_sets, inst, need, rng)
    if solved is None:
        raise InternalInvariantError("parallel-edge repair search exhausted all choices")

    trees = tuple(LabeledTree(n, frozenset(es)) for es in solved)
    for row, tree in zip(matrix.rows, trees):
        _verify_realizes(tree, row, "packed row")
    for a, b in itertools.combinations(trees, 2):
        if a.edges & b.edges:
            raise InternalInvariantError("parallel edges survived the repair pass")
    return PackingResult(trees)


def _canonical_realization(seq: DegreeSequence) -> LabeledTree:
    symbols = []
    for v, d in enumerate(seq.degrees, 1):
        symbols.extend([v] * (d - 1))
    return prufer_decode(PruferCode(seq.n, tuple(symbols)))


def _induced_degrees(edges: set[Edge], subset: list[int]) -> DegreeSequence:
    members = set(subset)
    degs = {v: 0 for v in subset}
    for u, v in edges:
        if u in members and v in members:
            degs[u] += 1
            degs[v] += 1
    return DegreeSequence(tuple(degs[v] for v in subset))


_REPAIR_RANDOM_DRAWS = 24


def _restriction_is_star_degrees(
    edges: frozenset[Edge], part: frozenset[int], other: frozenset[int]
) -> bool:
    members = part | other
    degs = {v: 0 for v in members}
    for u, v in edges:
        if u in members and v in members:
            degs[u] += 1
            degs[v] += 1
    return max(degs.values()) == len(members) - 1


def _replacement_candidates(
    deg_i: DegreeSequence, deg_k: DegreeSequence, rng: np.random.Generator
):
    """Edge-disjoint realization pairs of a restricted pair, random ones first.

    A handful of sampled pairs almost always suffices; the exhaustive tail
    exists so the repair search is complete at desk scale.
    """
    seen: set[tuple[frozenset, frozenset]] = set()
    for _ in range(_REPAIR_RANDOM_DRAWS):
        repaired = pack_complementary_leaves(deg_i, deg_k, rng)
        key = (repaired.trees[0].edges, repaired.trees[1].edges)
        if key in seen:
            continue
        seen.add(key)
        yield repaired.trees[0], repaired.trees[1]
    for local_i in enumerate_trees(deg_i):
        for local_k in enumerate_trees(deg_k):
            if local_i.edges & local_k.edges:
                continue
            key = (local_i.edges, local_k.edges)
            if key not in seen:
                yield local_i, local_k


def _resolve_parallels(
    edge_sets: list[frozenset[Edge]],
    inst: MultiInstance,
    need: list[tuple[int, int]],
    rng: np.random.Generator,
) -> list[frozenset[Edge]] | None:
    """Backtracking repair of the pairs that share edges.

    One pair at a time, its two induced subtrees (a complementary non-star
    pair by the trial-tree guarantee) are replaced by edge-disjoint
    realizations drawn from the complementary-leaf packer. A replacement is
    rejected if it collapses the restriction of a still-unrepaired pair into
    a star, which would make that pair unrepairable; because a replacement
    also fixes how the high-degree vertices split their restricted degrees
    between spine and cross edges, a locally fine choice can still dead-end
    later, and the search then backtracks to an earlier pair. Cross edges of
    untouched pairs never move, so repaired pairs stay clean forever.
    """

    profile_subsets = {
        pair: sorted(inst.parts[pair[0]] | inst.parts[pair[1]]) for pair in need
    }

    def dfs(state: list[frozenset[Edge]], idx: int):
        if idx == len(need):
            return state
        i, k = need[idx]
        subset = sorted(inst.parts[i] | inst.parts[k])
        members = set(subset)
        deg_i = _induced_degrees(state[i], subset)
        deg_k = _induced_degrees(state[k], subset)

        def lift(row: int, local_tree: LabeledTree) -> frozenset[Edge]:
            inside = {e for e in state[row] if e[0] in members and e[1] in members}
            lifted = {_norm(subset[u - 1], subset[v - 1]) for u, v in local_tree.edges}
            return (state[row] - inside) | lifted

        # A future repair replaces its whole restriction, so the fate of the
        # remaining search depends on the candidate only through the degree
        # profiles it induces on the pending pairs; candidates inducing an
        # already-failed profile can be skipped wholesale.
        def signature(candidate: list[frozenset[Edge]]):
            parts = []
            for a, b in need[idx + 1 :]:
                if a in (i, k):
                    parts.append(
                        _induced_degrees(candidate[a], profile_subsets[(a, b)]).degrees
                    )
                if b in (i, k):
                    parts.append(
                        _induced_degrees(candidate[b], profile_subsets[(a, b)]).degrees
                    )
            return tuple(parts)

        failed_signatures: set[tuple] = set()
        for local_i, local_k in _replacement_candidates(deg_i, deg_k, rng):
            candidate = list(state)
            candidate[i] = lift(i, local_i)
            candidate[k] = lift(k, local_k)
            sig = signature(candidate)
            if sig in failed_signatures:
                continue
            if any(
                _restriction_is_star_degrees(candidate[a], inst.parts[a], inst.parts[b])
                or _restriction_is_star_degrees(candidate[b], inst.parts[b], inst.parts[a])
                for a, b in need[idx + 1 :]
            ):
                failed_signatures.add(sig)
                continue
            solved = dfs(candidate, idx + 1)
            if solved is not None:
                return solved
            failed_signatures.add(sig)
        return None

    return dfs(list(edge_sets), 0)
