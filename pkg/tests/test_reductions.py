import itertools

import numpy as np
import pytest

from treepack import (
    BipartitePairInstance,
    DegreeSequence,
    DimensionError,
    DomainError,
    ResourceGuardError,
    SimplePairInstance,
    add_dominating_vertex,
    add_pendant_gadget,
    bipartite_to_simple,
    brute_force_disjoint_decision,
    is_tree_sequence,
    reduce_to_tree_sequence,
)
from treepack.reductions import _graph_realizations

from helpers import (
    all_tree_sequences,
    bipartite_disjoint_exists,
    count_disjoint_pairs,
)


def inst(d, f):
    return SimplePairInstance(DegreeSequence(tuple(d)), DegreeSequence(tuple(f)))


def decision(d, f):
    return brute_force_disjoint_decision(inst(d, f))


class TestInstances:
    def test_simple_pair_validation(self):
        with pytest.raises(DimensionError):
            inst((1, 1), (1, 1, 0))

    def test_simple_pair_json(self):
        i = inst((2, 2, 2), (1, 1, 0))
        assert i.to_json_dict() == {"D": [2, 2, 2], "F": [1, 1, 0]}
        assert SimplePairInstance.from_json_dict(i.to_json_dict()) == i

    def test_bipartite_validation(self):
        with pytest.raises(DomainError):
            BipartitePairInstance(2, 2, ((3, 1), (2, 2)), ((1, 1), (1, 1)))  # degree > class size
        with pytest.raises(DomainError):
            BipartitePairInstance(2, 2, ((1, 1), (1, 0)), ((1, 1), (1, 1)))  # class sums differ
        with pytest.raises(DimensionError):
            BipartitePairInstance(2, 2, ((1, 1, 0), (1, 1)), ((1, 1), (1, 1)))

    def test_bipartite_json_roundtrip(self):
        b = BipartitePairInstance(2, 2, ((1, 1), (1, 1)), ((2, 0), (1, 1)))
        assert BipartitePairInstance.from_json_dict(b.to_json_dict()) == b


class TestBipartiteToSimple:
    def test_formula(self):
        b = BipartitePairInstance(2, 2, ((1, 1), (1, 1)), ((1, 1), (1, 1)))
        out = bipartite_to_simple(b)
        assert out.first.degrees == (2, 2, 1, 1)
        assert out.second.degrees == (1, 1, 2, 2)

    def test_left_class_of_one_adds_nothing(self):
        b = BipartitePairInstance(1, 2, ((2,), (1, 1)), ((0,), (0, 0)))
        out = bipartite_to_simple(b)
        assert out.first.degrees == (2, 1, 1)
        assert out.second.degrees == (0, 1, 1)

    def test_answer_preserved_on_all_ones(self):
        b = BipartitePairInstance(2, 2, ((1, 1), (1, 1)), ((1, 1), (1, 1)))
        out = bipartite_to_simple(b)
        assert bipartite_disjoint_exists(b) is True
        assert brute_force_disjoint_decision(out) is True


class TestDominatingVertex:
    def test_formula(self):
        out = add_dominating_vertex(inst((1, 1), (1, 1)))
        assert out.first.degrees == (2, 2, 2)
        assert out.second.degrees == (1, 1, 0)
        assert min(out.first.degrees) > 0

    def test_answer_false_preserved(self):
        assert decision((1, 1), (1, 1)) is False
        out = add_dominating_vertex(inst((1, 1), (1, 1)))
        assert brute_force_disjoint_decision(out) is False

    def test_answer_true_preserved_from_zero_degrees(self):
        out = add_dominating_vertex(inst((0, 0), (1, 1)))
        assert out.first.degrees == (1, 1, 2)
        assert out.second.degrees == (1, 1, 0)
        assert decision((0, 0), (1, 1)) is True
        assert brute_force_disjoint_decision(out) is True


class TestPendantGadget:
    def test_formula(self):
        out = add_pendant_gadget(inst((2, 2, 2), (1, 1, 0)))
        assert out.first.degrees == (2, 2, 2, 1, 1)
        assert out.second.degrees == (2, 2, 1, 3, 0)

    def test_answer_preserved(self):
        before = decision((2, 2, 2), (1, 1, 0))
        out = add_pendant_gadget(inst((2, 2, 2), (1, 1, 0)))
        assert brute_force_disjoint_decision(out) is before

    def test_trivial_formula_application(self):
        out = add_pendant_gadget(inst((1, 1), (0, 0)))
        assert out.first.degrees == (1, 1, 1, 1)
        assert out.second.degrees == (1, 1, 2, 0)


class TestReduceToTreeSequence:
    def test_single_pendant_step(self):
        out = reduce_to_tree_sequence(inst((2, 2, 2), (1, 1, 0)))
        assert out.first.degrees == (2, 2, 2, 1, 1)
        assert out.second.degrees == (2, 2, 1, 3, 0)
        assert is_tree_sequence(out.first)

    def test_identity_on_tree_sequences(self):
        out = reduce_to_tree_sequence(inst((2, 2, 1, 1), (1, 1, 2, 2)))
        assert out.first.degrees == (2, 2, 1, 1)
        assert out.second.degrees == (1, 1, 2, 2)

    def test_three_pendant_steps(self):
        out = reduce_to_tree_sequence(inst((3, 3, 3, 3), (1, 1, 1, 1)))
        assert out.n == 10
        assert out.first.total() == 18
        assert is_tree_sequence(out.first)

    def test_normalizes_zeros_and_deficits(self):
        out = reduce_to_tree_sequence(inst((0, 0), (1, 1)))
        assert is_tree_sequence(out.first)
        assert out.first.degrees == (1, 1, 2)

    def test_odd_excess_is_rejected(self):
        # odd degree sum survives normalization as an odd excess
        with pytest.raises(DomainError):
            reduce_to_tree_sequence(inst((1, 1, 1), (0, 0, 0)))

    def test_excess_shrinks_by_two_each_step(self):
        current = inst((4, 4, 2, 2), (1, 1, 1, 1))
        excess = current.first.total() - (2 * current.n - 2)
        while excess > 0:
            nxt = add_pendant_gadget(current)
            next_excess = nxt.first.total() - (2 * nxt.n - 2)
            assert next_excess == excess - 2
            current, excess = nxt, next_excess
        assert is_tree_sequence(current.first)


class TestBruteForceDecision:
    def test_examples(self):
        assert decision((2, 2, 1, 1), (1, 1, 2, 2)) is True
        assert decision((2, 1, 1), (2, 1, 1)) is False
        assert decision((1, 1), (1, 1)) is False

    def test_guard(self):
        with pytest.raises(ResourceGuardError):
            decision((1,) * 8, (1,) * 8)
        assert brute_force_disjoint_decision(inst((1,) * 8, (1,) * 8), guard_n=8) is True

    def test_non_graphical_is_false(self):
        assert decision((3, 1, 1), (1, 1, 1)) is False

    def test_realization_search_is_canonical(self):
        n = 4
        pairs = frozenset((u, v) for u in range(1, 5) for v in range(u + 1, 5))
        found = list(_graph_realizations((2, 2, 1, 1), pairs))
        assert len(found) == len(set(found)) == 2

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_cross_check_with_tree_pair_oracle(self, n):
        seqs = list(all_tree_sequences(n))
        for i, d in enumerate(seqs):
            for f in seqs[i::3]:
                tree_pairs = count_disjoint_pairs(d, f)
                graph_answer = decision(d, f)
                if tree_pairs > 0:
                    assert graph_answer  # a disjoint tree pair is a disjoint graph pair
                # Kundu: graphs exist iff trees exist for tree sequences
                assert graph_answer == (tree_pairs > 0)


def _transform_cases():
    """All degree-sequence pairs with n <= 3 and entries below n."""
    for n in (1, 2, 3):
        space = list(itertools.product(range(n), repeat=n))
        for d in space:
            for f in space:
                yield d, f


class TestAnswerPreservation:
    def test_exhaustive_small_instances(self):
        for d, f in _transform_cases():
            base = inst(d, f)
            before = brute_force_disjoint_decision(base)
            dom = add_dominating_vertex(base)
            assert brute_force_disjoint_decision(dom) is before
            pend = add_pendant_gadget(base)
            assert brute_force_disjoint_decision(pend) is before

    def test_random_corpus(self):
        rng = np.random.default_rng(1234)
        checked = 0
        while checked < 20:
            n = int(rng.integers(2, 5))
            d = tuple(int(x) for x in rng.integers(0, n, size=n))
            f = tuple(int(x) for x in rng.integers(0, n, size=n))
            if sum(d) % 2 or sum(f) % 2:
                continue
            base = inst(d, f)
            before = brute_force_disjoint_decision(base)
            for out in (add_dominating_vertex(base), add_pendant_gadget(base)):
                assert brute_force_disjoint_decision(out) is before
            checked += 1

    def test_bipartite_corpus(self):
        rng = np.random.default_rng(77)
        checked = 0
        while checked < 12:
            n1 = int(rng.integers(1, 4))
            n2 = int(rng.integers(1, 4))
            if n1 + n2 > 6:
                continue
            left = [int(x) for x in rng.integers(0, n2 + 1, size=n1)]
            gap = sum(left)
            right = []
            remaining = gap
            for t in range(n2 - 1):
                hi = min(n1, remaining)
                val = int(rng.integers(0, hi + 1))
                right.append(val)
                remaining -= val
            right.append(remaining)
            if remaining < 0 or remaining > n1:
                continue
            sleft = [int(x) for x in rng.integers(0, n2 + 1, size=n1)]
            sgap = sum(sleft)
            sright = []
            remaining = sgap
            for t in range(n2 - 1):
                hi = min(n1, remaining)
                val = int(rng.integers(0, hi + 1))
                sright.append(val)
                remaining -= val
            sright.append(remaining)
            if remaining < 0 or remaining > n1:
                continue
            b = BipartitePairInstance(
                n1, n2, (tuple(left), tuple(right)), (tuple(sleft), tuple(sright))
            )
            before = bipartite_disjoint_exists(b)
            out = bipartite_to_simple(b)
            assert brute_force_disjoint_decision(out) is before
            checked += 1
