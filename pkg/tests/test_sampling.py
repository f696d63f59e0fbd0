import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from treepack import (
    DegreeSequence,
    DimensionError,
    DomainError,
    InfeasibleError,
    ResourceGuardError,
    analyze_pair,
    count_trees,
    enumerate_trees,
    estimate_disjoint_count,
    exact_disjoint_count,
    expected_common_general,
    required_samples,
    sample_disjoint_pair,
    tv_distance,
)

from helpers import complementary_pairs, count_disjoint_pairs


def seq(*degrees):
    return DegreeSequence(tuple(degrees))


BASE_PAIR = (seq(2, 2, 1, 1), seq(1, 1, 2, 2))
SEVEN_PAIR = (seq(5, 2, 1, 1, 1, 1, 1), seq(1, 1, 4, 3, 1, 1, 1))


class TestAnalyzePair:
    def test_base_instance(self):
        analysis = analyze_pair(*BASE_PAIR)
        assert analysis.internal_in_first == frozenset({1, 2})
        assert analysis.internal_in_second == frozenset({3, 4})
        assert analysis.expected_common == 1
        assert analysis.disjoint_lower_bound == Fraction(1, 4)

    def test_star_pair_has_zero_bound(self):
        analysis = analyze_pair(seq(3, 1, 1, 1), seq(1, 3, 1, 1))
        assert analysis.expected_common == 1
        assert analysis.disjoint_lower_bound == 0

    def test_shared_internal_positions_fall_outside_both_sets(self):
        analysis = analyze_pair(seq(2, 2, 1, 1), seq(2, 2, 1, 1))
        assert analysis.internal_in_first == frozenset()
        assert analysis.internal_in_second == frozenset()
        assert analysis.expected_common == 0

    def test_expectation_is_one_for_complementary_pairs(self):
        for n in range(4, 8):
            for d, f in complementary_pairs(n):
                analysis = analyze_pair(DegreeSequence(d), DegreeSequence(f))
                assert analysis.expected_common == 1

    def test_preconditions(self):
        with pytest.raises(DomainError):
            analyze_pair(seq(2, 1, 1), seq(2, 1, 1))  # n < 4
        with pytest.raises(DimensionError):
            analyze_pair(seq(2, 2, 1, 1), seq(2, 2, 2, 1, 1))


class TestExpectedCommonGeneral:
    def test_examples(self):
        assert expected_common_general(seq(2, 1, 1), seq(2, 1, 1)) == 2
        assert expected_common_general(*BASE_PAIR) == 1
        assert expected_common_general(seq(3, 1, 1, 1), seq(1, 3, 1, 1)) == 1

    @pytest.mark.parametrize(
        "d,f",
        [
            ((2, 2, 1, 1), (2, 2, 1, 1)),
            ((3, 2, 1, 1, 1), (1, 2, 2, 2, 1)),
            ((3, 2, 2, 1, 1, 2, 1), (1, 3, 1, 2, 2, 1, 2)),
        ],
    )
    def test_agrees_with_full_enumeration(self, d, f):
        ds, fs = DegreeSequence(d), DegreeSequence(f)
        total_shared = sum(
            len(t1.edges & t2.edges)
            for t1 in enumerate_trees(ds)
            for t2 in enumerate_trees(fs)
        )
        pairs = count_trees(ds) * count_trees(fs)
        assert expected_common_general(ds, fs) == Fraction(total_shared, pairs)


class TestRequiredSamples:
    def test_frozen_values(self):
        assert required_samples(Fraction(1, 2), 0.1, 0.05) == 1476
        assert required_samples(Fraction(1, 4), 0.2, 0.1) == 1798

    def test_certain_success_uses_only_lower_tail(self):
        expected = math.ceil(-2 * math.log(0.025) / 0.1**2)
        assert required_samples(1, 0.1, 0.05) == expected

    def test_parameter_validation(self):
        with pytest.raises(DomainError):
            required_samples(0, 0.1, 0.1)
        with pytest.raises(DomainError):
            required_samples(Fraction(1, 2), -1.0, 0.1)
        with pytest.raises(DomainError):
            required_samples(Fraction(1, 2), 0.1, 1.5)


class TestEstimate:
    def test_report_arithmetic(self):
        report = estimate_disjoint_count(*BASE_PAIR, 0.2, 0.1, seed=5)
        assert 0 <= report.hits <= report.samples_used
        assert report.p_hat == Fraction(report.hits, report.samples_used)
        assert report.count_estimate == report.p_hat * 4  # N_D = N_F = 2

    def test_deterministic_and_worker_invariant(self):
        a = estimate_disjoint_count(*SEVEN_PAIR, 0.2, 0.1, seed=41)
        b = estimate_disjoint_count(*SEVEN_PAIR, 0.2, 0.1, seed=41)
        c = estimate_disjoint_count(*SEVEN_PAIR, 0.2, 0.1, seed=41, workers=3)
        assert a == b
        assert (a.hits, a.count_estimate) == (c.hits, c.count_estimate)

    def test_accuracy_on_base_instance(self):
        truth = exact_disjoint_count(*BASE_PAIR)
        assert truth == 2
        report = estimate_disjoint_count(*BASE_PAIR, 0.2, 0.1, seed=77)
        assert truth / 1.2 <= float(report.count_estimate) <= truth * 1.2

    def test_rejects_bad_instances(self):
        with pytest.raises(DomainError):
            estimate_disjoint_count(seq(2, 2, 1, 1), seq(2, 1, 1, 2), 0.2, 0.1, seed=0)
        with pytest.raises(DomainError):  # star input
            estimate_disjoint_count(seq(3, 1, 1, 1), seq(1, 2, 2, 1), 0.2, 0.1, seed=0)
        with pytest.raises(DomainError):
            estimate_disjoint_count(*BASE_PAIR, 0.2, 0.1, seed=0, workers=0)

    def test_json_fields(self):
        report = estimate_disjoint_count(*BASE_PAIR, 0.2, 0.1, seed=5, batch_size=512)
        doc = report.to_json_dict()
        assert doc["seed"] == 5
        assert doc["workers"] == 1
        assert doc["batch_size"] == 512
        assert doc["p_hat"] == str(report.p_hat)


class TestSampleDisjointPair:
    def test_postcondition_and_determinism(self):
        a1, a2 = sample_disjoint_pair(*SEVEN_PAIR, 0.05, seed=3)
        b1, b2 = sample_disjoint_pair(*SEVEN_PAIR, 0.05, seed=3)
        assert (a1, a2) == (b1, b2)
        assert a1.edges.isdisjoint(a2.edges)
        assert a1.degree_sequence() == SEVEN_PAIR[0]
        assert a2.degree_sequence() == SEVEN_PAIR[1]

    def test_base_instance_hits_solution_set(self):
        solutions = {
            (t1.edges, t2.edges)
            for t1 in enumerate_trees(BASE_PAIR[0])
            for t2 in enumerate_trees(BASE_PAIR[1])
            if t1.edges.isdisjoint(t2.edges)
        }
        assert len(solutions) == 2
        for s in range(25):
            t1, t2 = sample_disjoint_pair(*BASE_PAIR, 0.01, seed=s)
            assert (t1.edges, t2.edges) in solutions

    def test_star_is_infeasible(self):
        with pytest.raises(InfeasibleError):
            sample_disjoint_pair(seq(3, 1, 1, 1), seq(1, 2, 2, 1), 0.1, seed=0)

    def test_epsilon_validation(self):
        with pytest.raises(DomainError):
            sample_disjoint_pair(*BASE_PAIR, 1.5, seed=0)


class TestExactDisjointCount:
    def test_examples(self):
        assert exact_disjoint_count(*BASE_PAIR) == 2
        assert exact_disjoint_count(seq(2, 1, 1), seq(2, 1, 1)) == 0
        assert exact_disjoint_count(seq(3, 1, 1, 1), seq(1, 3, 1, 1)) == 0

    def test_guard(self):
        big = seq(*([2] * 8 + [1, 1]))
        other = seq(*([1, 1] + [2] * 8))
        with pytest.raises(ResourceGuardError):
            exact_disjoint_count(big, other)
        assert exact_disjoint_count(*SEVEN_PAIR, guard_n=7) == 6

    def test_agrees_with_bitmask_oracle(self):
        for n in range(4, 7):
            for d, f in itertools.islice(complementary_pairs(n), 0, None, 7):
                ds, fs = DegreeSequence(d), DegreeSequence(f)
                assert exact_disjoint_count(ds, fs) == count_disjoint_pairs(d, f)


class TestLowerBoundSoundness:
    def test_bound_below_true_rate(self):
        for n in range(4, 8):
            for d, f in complementary_pairs(n):
                if max(d) == n - 1 or max(f) == n - 1:
                    continue
                ds, fs = DegreeSequence(d), DegreeSequence(f)
                analysis = analyze_pair(ds, fs)
                rate = Fraction(
                    count_disjoint_pairs(d, f), count_trees(ds) * count_trees(fs)
                )
                assert rate >= analysis.disjoint_lower_bound > 0


class TestTvDistance:
    def test_examples(self):
        assert tv_distance([0.5, 0.5], [0.5, 0.5]) == 0
        assert tv_distance([1.0, 0.0], [0.0, 1.0]) == 1
        assert tv_distance([0.75, 0.25], [0.5, 0.5]) == 0.25

    def test_validation(self):
        with pytest.raises(DimensionError):
            tv_distance([1.0], [0.5, 0.5])
        with pytest.raises(DomainError):
            tv_distance([0.7, 0.2], [0.5, 0.5])
        with pytest.raises(DomainError):
            tv_distance([], [])

    def test_symmetry_and_range(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            p = rng.dirichlet(np.ones(6))
            q = rng.dirichlet(np.ones(6))
            d = tv_distance(list(p), list(q))
            assert abs(d - tv_distance(list(q), list(p))) < 1e-12
            assert 0 <= d <= 1


class TestMonteCarloSanity:
    @pytest.mark.parametrize(
        "d,f",
        [
            ((2, 2, 1, 1), (1, 1, 2, 2)),
            ((5, 2, 1, 1, 1, 1, 1), (1, 1, 4, 3, 1, 1, 1)),
            ((5, 4, 1, 1, 1, 1, 1, 1, 1), (1, 1, 4, 3, 3, 1, 1, 1, 1)),
        ],
    )
    def test_mean_shared_edges_matches_expectation(self, d, f):
        from treepack.trees import (
            _decode_codes_to_masks,
            _edge_bit_table,
            _random_code_batch,
        )

        ds, fs = DegreeSequence(d), DegreeSequence(f)
        expected = expected_common_general(ds, fs)
        n = ds.n
        rng = np.random.default_rng(2468)
        table = _edge_bit_table(n)
        draws = 100_000
        masks1 = _decode_codes_to_masks(_random_code_batch(ds, rng, draws), n, table)
        masks2 = _decode_codes_to_masks(_random_code_batch(fs, rng, draws), n, table)
        shared = np.bitwise_and(masks1, masks2)
        bits = np.unpackbits(shared.view(np.uint8)).sum()
        mean = bits / draws
        assert abs(mean - float(expected)) < 0.03
