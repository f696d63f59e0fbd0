"""Collision analysis, randomized approximate counting, and almost-uniform sampling.

Probabilities and counts stay exact rationals end to end; only the error
parameters (epsilon, delta) and total-variation outputs are floats. All
logarithms are natural.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .degseq import DegreeSequence, is_tree_sequence
from .errors import DimensionError, DomainError, InfeasibleError, ResourceGuardError
from .trees import (
    LabeledTree,
    _MASK_MAX_N,
    _generator_from,
    _decode_codes_to_masks,
    _edge_bit_table,
    _random_code_batch,
    count_trees,
    edge_probability,
    enumerate_trees,
    random_tree,
)

__all__ = [
    "PairAnalysis",
    "EstimateReport",
    "analyze_pair",
    "expected_common_general",
    "required_samples",
    "estimate_disjoint_count",
    "sample_disjoint_pair",
    "exact_disjoint_count",
    "tv_distance",
]

DEFAULT_BATCH_SIZE = 8192


@dataclass(frozen=True)
class PairAnalysis:
    """Exact collision accounting for a pair of sequences with separated non-leaves.

    ``internal_in_first`` holds the vertices that are non-leaves of the first
    sequence but leaves of the second; ``internal_in_second`` the reverse.
    Shared edges of two independent uniform realizations can only run between
    these two sets, which is what makes ``expected_common`` a product formula
    and ``disjoint_lower_bound`` a positive guarantee once both sets have two
    members.
    """

    internal_in_first: frozenset[int]
    internal_in_second: frozenset[int]
    expected_common: Fraction
    disjoint_lower_bound: Fraction


def _check_pair(first: DegreeSequence, second: DegreeSequence, min_n: int) -> None:
    if first.n != second.n:
        raise DimensionError(f"length mismatch: {first.n} vs {second.n}")
    if not is_tree_sequence(first):
        raise DomainError(f"first sequence is not a tree sequence: {first.degrees}")
    if not is_tree_sequence(second):
        raise DomainError(f"second sequence is not a tree sequence: {second.degrees}")
    if first.n < min_n:
        raise DomainError(f"need at least {min_n} vertices, got {first.n}")


def analyze_pair(first: DegreeSequence, second: DegreeSequence) -> PairAnalysis:
    """Expected shared-edge count and disjointness lower bound for a sequence pair.

    The expectation sums (d_u - 1)(f_v - 1) / (n - 2)^2 over u internal only
    in the first sequence and v internal only in the second; it equals exactly
    1 when every vertex is a leaf in at least one input. The lower bound uses
    the two heaviest vertices of each side and is 0 when a side has fewer
    than two.
    """
    _check_pair(first, second, min_n=4)
    n = first.n
    a_side = frozenset(
        v
        for v, (d, f) in enumerate(zip(first.degrees, second.degrees), 1)
        if d > 1 and f == 1
    )
    b_side = frozenset(
        v
        for v, (d, f) in enumerate(zip(first.degrees, second.degrees), 1)
        if d == 1 and f > 1
    )
    weight_a = sum(first.degree(v) - 1 for v in a_side)
    weight_b = sum(second.degree(v) - 1 for v in b_side)
    expected = Fraction(weight_a * weight_b, (n - 2) ** 2)
    if len(a_side) < 2 or len(b_side) < 2:
        bound = Fraction(0)
    else:
        top_a = sorted((first.degree(v) - 1 for v in a_side), reverse=True)[:2]
        top_b = sorted((second.degree(v) - 1 for v in b_side), reverse=True)[:2]
        bound = Fraction(
            top_a[0] * top_a[1] * top_b[0] * top_b[1],
            (n - 2) ** 2 * (n - 3) ** 2,
        )
    return PairAnalysis(a_side, b_side, expected, bound)


def expected_common_general(first: DegreeSequence, second: DegreeSequence) -> Fraction:
    """Exact expected number of shared edges for arbitrary leaf overlap.

    By linearity this is the sum over vertex pairs of the product of the two
    per-sequence edge probabilities; it agrees with the restricted product
    formula whenever that one applies.
    """
    _check_pair(first, second, min_n=3)
    n = first.n
    total = Fraction(0)
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            total += edge_probability(first, u, v) * edge_probability(second, u, v)
    return total


def required_samples(prob_lower: Fraction | float, epsilon: float, delta: float) -> int:
    """Sample count making the hit-rate estimator (1+epsilon)-accurate w.p. 1-delta.

    Ceiling of the larger of the two binomial tail bounds
    -2 log(delta/2) / (p eps^2) and -2 (1-p) log(delta/2) / (p^2 eps^2),
    evaluated at the pessimistic success rate ``prob_lower``.
    """
    p = float(prob_lower)
    if not 0 < p <= 1:
        raise DomainError(f"probability lower bound must be in (0, 1], got {prob_lower}")
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if not 0 < delta < 1:
        raise DomainError(f"delta must be in (0, 1), got {delta}")
    log_term = -math.log(delta / 2.0)
    lower_tail = 2.0 * log_term / (p * epsilon**2)
    upper_tail = 2.0 * (1.0 - p) * log_term / (p**2 * epsilon**2)
    return math.ceil(max(lower_tail, upper_tail))


@dataclass(frozen=True)
class EstimateReport:
    """Outcome of one randomized count estimation run, with its reproduction triple."""

    samples_used: int
    hits: int
    p_hat: Fraction
    count_estimate: Fraction
    epsilon: float
    delta: float
    seed: int
    workers: int
    batch_size: int

    def to_json_dict(self) -> dict:
        return {
            "samples_used": self.samples_used,
            "hits": self.hits,
            "p_hat": str(self.p_hat),
            "count_estimate": str(self.count_estimate),
            "epsilon": self.epsilon,
            "delta": self.delta,
            "seed": self.seed,
            "workers": self.workers,
            "batch_size": self.batch_size,
        }


def _check_complementary(first: DegreeSequence, second: DegreeSequence) -> PairAnalysis:
    _check_pair(first, second, min_n=4)
    if any(min(d, f) != 1 for d, f in zip(first.degrees, second.degrees)):
        raise DomainError("every vertex must be a leaf in at least one sequence")
    n = first.n
    if max(first.degrees) == n - 1 or max(second.degrees) == n - 1:
        raise DomainError("star sequences admit no disjoint pair to sample")
    return analyze_pair(first, second)


def _batch_rng(seed: int, batch_index: int) -> np.random.Generator:
    try:
        sequence = np.random.SeedSequence(entropy=seed, spawn_key=(batch_index,))
    except (TypeError, ValueError) as exc:
        raise DomainError(f"seed must be a non-negative integer, got {seed!r}") from exc
    return np.random.default_rng(sequence)


def _batch_hits(
    first: DegreeSequence, second: DegreeSequence, seed: int, batch_index: int, count: int
) -> int:
    """Disjoint pairs among ``count`` independent uniform pairs of realizations.

    Each batch owns an independent child stream of the master seed, so the
    total is identical for any worker count. Small vertex counts take the
    vectorized bitmask path; larger ones decode one tree at a time.
    """
    rng = _batch_rng(seed, batch_index)
    n = first.n
    if n <= _MASK_MAX_N:
        table = _edge_bit_table(n)
        codes1 = _random_code_batch(first, rng, count)
        codes2 = _random_code_batch(second, rng, count)
        masks1 = _decode_codes_to_masks(codes1, n, table)
        masks2 = _decode_codes_to_masks(codes2, n, table)
        return int(np.count_nonzero((masks1 & masks2) == 0))
    hits = 0
    for _ in range(count):
        t1 = random_tree(first, rng)
        t2 = random_tree(second, rng)
        if t1.edges.isdisjoint(t2.edges):
            hits += 1
    return hits


def estimate_disjoint_count(
    first: DegreeSequence,
    second: DegreeSequence,
    epsilon: float,
    delta: float,
    seed: int,
    workers: int = 1,
    batch_size: int = DEFAULT_BATCH_SIZE,
) -> EstimateReport:
    """Randomized (1+epsilon, delta) estimate of the number of disjoint ordered pairs.

    Draws the Chernoff-mandated number of independent uniform pairs, counts
    the edge-disjoint ones, and scales the hit rate by the two exact solution
    space sizes. Requires a complementary-leaf, star-free instance so the
    success rate has a positive computable lower bound.
    """
    analysis = _check_complementary(first, second)
    if workers < 1:
        raise DomainError(f"workers must be at least 1, got {workers}")
    if batch_size < 1:
        raise DomainError(f"batch size must be at least 1, got {batch_size}")
    samples = required_samples(analysis.disjoint_lower_bound, epsilon, delta)
    sizes = [
        min(batch_size, samples - start) for start in range(0, samples, batch_size)
    ]
    if workers == 1:
        hits = sum(
            _batch_hits(first, second, seed, b, size) for b, size in enumerate(sizes)
        )
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(
                pool.map(
                    lambda item: _batch_hits(first, second, seed, item[0], item[1]),
                    enumerate(sizes),
                )
            )
    p_hat = Fraction(hits, samples)
    estimate = p_hat * count_trees(first) * count_trees(second)
    return EstimateReport(
        samples_used=samples,
        hits=hits,
        p_hat=p_hat,
        count_estimate=estimate,
        epsilon=epsilon,
        delta=delta,
        seed=seed,
        workers=workers,
        batch_size=batch_size,
    )


def sample_disjoint_pair(
    first: DegreeSequence,
    second: DegreeSequence,
    epsilon: float,
    seed: int,
) -> tuple[LabeledTree, LabeledTree]:
    """An edge-disjoint ordered pair, within total variation epsilon of uniform.

    Rejection sampling: accepted pairs are exactly uniform over the solution
    set, and the budget of ceil(-log(eps)/p_lower) attempts caps the mixture
    weight of the fallback below epsilon. The fallback itself keeps rejecting
    until a disjoint pair appears (Las Vegas), so the output never leaves the
    solution set; only its distribution guarantee weakens past the budget.
    """
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must be in (0, 1), got {epsilon}")
    _check_pair(first, second, min_n=4)
    if any(min(d, f) != 1 for d, f in zip(first.degrees, second.degrees)):
        raise DomainError("every vertex must be a leaf in at least one sequence")
    n = first.n
    if max(first.degrees) == n - 1 or max(second.degrees) == n - 1:
        raise InfeasibleError("star sequences admit no disjoint pair")
    analysis = analyze_pair(first, second)
    budget = math.ceil(-math.log(epsilon) / float(analysis.disjoint_lower_bound))
    rng = _generator_from(seed)
    for _ in range(budget):
        t1 = random_tree(first, rng)
        t2 = random_tree(second, rng)
        if t1.edges.isdisjoint(t2.edges):
            return t1, t2
    while True:
        # Las Vegas fallback: identical draws, only the distribution guarantee
        # weakens, never the membership in the solution set.
        t1 = random_tree(first, rng)
        t2 = random_tree(second, rng)
        if t1.edges.isdisjoint(t2.edges):
            return t1, t2


def exact_disjoint_count(
    first: DegreeSequence, second: DegreeSequence, guard_n: int = 8
) -> int:
    """Exact number of edge-disjoint ordered realization pairs, by double enumeration.

    Desk-scale only: the full product of the two solution spaces is walked, so
    the vertex count is guarded.
    """
    _check_pair(first, second, min_n=2)
    if first.n > guard_n:
        raise ResourceGuardError(
            f"exact counting guarded at n <= {guard_n}, got n = {first.n}"
        )
    inner = [t.edges for t in enumerate_trees(second)]
    total = 0
    for outer_tree in enumerate_trees(first):
        outer = outer_tree.edges
        total += sum(1 for edges in inner if outer.isdisjoint(edges))
    return total


def tv_distance(p: Sequence[float], q: Sequence[float]) -> float:
    """Total variation distance: half the L1 distance between two distributions."""
    if len(p) != len(q):
        raise DimensionError(f"support size mismatch: {len(p)} vs {len(q)}")
    if not p:
        raise DomainError("distributions need a non-empty support")
    for name, dist in (("first", p), ("second", q)):
        total = math.fsum(dist)
        if abs(total - 1.0) > 1e-9:
            raise DomainError(f"{name} distribution sums to {total}, not 1")
        if any(x < 0 for x in dist):
            raise DomainError(f"{name} distribution has negative mass")
    return 0.5 * math.fsum(abs(a - b) for a, b in zip(p, q))
