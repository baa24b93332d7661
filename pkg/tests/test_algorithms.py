"""Tests for scores, thresholding, the iterative algorithm, wrappers and the registry."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algorithms.iterative import iterative_thresholding
from src.algorithms.registry import available_algorithms, get_selector, is_wrapper
from src.algorithms.scores import (
    ScoreVector,
    exact_argmax,
    phi_basic_scores,
    psi_closed_form,
    psi_scores,
    residual,
    residual_scores,
    top_t,
)
from src.algorithms.thresholding import (
    TOP_2K,
    TOP_K,
    TOP_M,
    SelectionRule,
    basic_thresholding,
    threshold_select,
)
from src.algorithms.wrappers import split_point, split_rows, then_thresholding
from src.core.bitmatrix import BitMatrix
from src.core.errors import (
    BaseOutputTooLargeError,
    IndexOutOfRangeError,
    InvalidParamsError,
    InvalidSpecError,
    NotEnoughItemsError,
    OutcomeOutOfRangeError,
)
from src.core.model import ItemSet, generate_instance, outcome
from src.core.rng import SplitMix64
from src.harness.montecarlo import mc_score_distribution


def m_thresh(A, y, k):
    return threshold_select(A, y, k, TOP_M)


def k_thresh(A, y, k):
    return threshold_select(A, y, k, TOP_K)


class TestScores:
    def test_psi_example(self, three_items):
        A, y = three_items
        assert psi_scores(A, y, 1).num.tolist() == [2, 0, 1]

    def test_psi_with_no_defectives(self):
        A = BitMatrix.from_dense([[1, 0, 1], [0, 1, 1]])
        assert psi_scores(A, np.zeros(2, dtype=np.int64), 0).num.tolist() == [0, 0, 0]

    def test_psi_rejects_out_of_range_outcomes(self, three_items):
        A, _ = three_items
        with pytest.raises(OutcomeOutOfRangeError):
            psi_scores(A, np.array([2, 0]), 1)

    def test_phi_example(self, three_items):
        A, y = three_items
        assert phi_basic_scores(A, y).as_fractions() == [Fraction(1), Fraction(0), Fraction(1, 2)]

    def test_zero_weight_column_scores_zero(self):
        A = BitMatrix.from_dense([[1, 0], [1, 0]])
        scores = phi_basic_scores(A, np.array([1, 1]))
        assert scores.value(1) == 0 and scores.den[1] == 1

    def test_residual_scores(self, three_items):
        A, y = three_items
        assert residual(A, y, ItemSet((2,))).tolist() == [0, -1]
        scores = residual_scores(A, y, ItemSet((2,)))
        assert scores.as_fractions() == [Fraction(0), Fraction(-1), Fraction(-1, 2)]
        assert residual_scores(A, y, ItemSet()) == phi_basic_scores(A, y)

    def test_residual_of_the_defective_set_vanishes(self, desk_instance):
        inst = desk_instance
        scores = residual_scores(inst.matrix, inst.outcome, inst.defectives)
        assert not scores.num.any()

    def test_psi_invariants_on_desk_instances(self):
        n, k, m = 200, 10, 100
        for seed in range(100):
            inst = generate_instance(n, k, m, seed)
            psi = psi_scores(inst.matrix, inst.outcome, k).num
            assert np.array_equal(psi, psi_closed_form(inst.matrix, inst.outcome, k))
            assert psi.min() >= 0 and psi.max() <= m * k
            assert psi[inst.defectives.as_array()].min() >= m

    def test_psi_moments(self):
        moments = mc_score_distribution(n=200, k=10, m=100, trials=100, seed=2024)
        assert abs(moments.non_defective.z_score) < 4
        assert abs(moments.defective.z_score) < 4
        assert moments.defective.count == 100 * 10

    def test_psi_of_a_single_defective_is_m(self):
        inst = generate_instance(n=12, k=1, m=9, seed=4)
        psi = psi_scores(inst.matrix, inst.outcome, 1).num
        assert psi[inst.defectives.items[0]] == 9


class TestTopT:
    def test_examples(self):
        assert top_t(ScoreVector.integers(np.array([2, 0, 1])), 2).items == (0, 2)
        assert top_t(ScoreVector.integers(np.array([1, 1, 0])), 1).items == (0,)
        assert top_t(ScoreVector.integers(np.array([1, 1, 0])), 0) == ItemSet()

    def test_exclusion_and_shortage(self):
        scores = ScoreVector.integers(np.array([5, 4, 3]))
        assert top_t(scores, 1, exclude=ItemSet((0,))).items == (1,)
        with pytest.raises(NotEnoughItemsError):
            top_t(scores, 3, exclude=ItemSet((0,)))

    def test_exclusion_outside_the_score_range(self):
        with pytest.raises(IndexOutOfRangeError):
            top_t(ScoreVector.integers(np.array([5, 4, 3])), 1, exclude=ItemSet((1, 3)))

    def test_ratio_ties(self):
        scores = ScoreVector.ratios(np.array([1, 2, 3]), np.array([2, 4, 5]))
        assert top_t(scores, 2).items == (0, 2)

    @settings(max_examples=80, deadline=None)
    @given(
        st.lists(st.tuples(st.integers(-6, 6), st.integers(1, 4)), min_size=1, max_size=25),
        st.data(),
    )
    def test_matches_a_sorted_reference(self, pairs, data):
        num = np.array([a for a, _ in pairs])
        den = np.array([b for _, b in pairs])
        t = data.draw(st.integers(0, len(pairs)))
        ranked = sorted(range(len(pairs)), key=lambda i: (-Fraction(int(num[i]), int(den[i])), i))
        assert top_t(ScoreVector.ratios(num, den), t).items == tuple(sorted(ranked[:t]))

    def test_exact_argmax_breaks_near_ties_exactly(self):
        big = 10**15
        num = np.array([big, big + 1, 3])
        den = np.array([big + 1, big + 2, 7])
        # big/(big+1) < (big+1)/(big+2)
        assert exact_argmax(num, den, np.zeros(3, dtype=bool)) == 1
        with pytest.raises(NotEnoughItemsError):
            exact_argmax(num, den, np.ones(3, dtype=bool))


class TestThresholding:
    def test_top_k_example(self, three_items):
        A, y = three_items
        assert threshold_select(A, y, 1, TOP_K).items == (0,)

    def test_top_m_clamps_to_n(self, three_items):
        A, y = three_items
        tall = BitMatrix.from_dense(np.vstack([A.dense, A.dense]))
        assert threshold_select(tall, np.concatenate([y, y]), 1, TOP_M) == ItemSet.full(3)

    def test_rule_sizes(self):
        assert TOP_K.resolve(100, 5, 40) == 5
        assert TOP_2K.resolve(8, 5, 40) == 8
        assert TOP_M.resolve(100, 5, 40) == 40
        assert SelectionRule.top_t(7).resolve(100, 5, 40) == 7
        with pytest.raises(InvalidParamsError):
            SelectionRule(TOP_K.kind, 3)

    def test_nested_outputs(self, desk_instance):
        inst = desk_instance
        small = threshold_select(inst.matrix, inst.outcome, inst.k, TOP_K)
        medium = threshold_select(inst.matrix, inst.outcome, inst.k, TOP_2K)
        large = threshold_select(inst.matrix, inst.outcome, inst.k, TOP_M)
        assert small.issubset(medium) and medium.issubset(large)
        assert (len(small), len(medium), len(large)) == (8, 16, 32)

    def test_k_equals_n_minus_one(self):
        inst = generate_instance(n=6, k=5, m=4, seed=1)
        chosen = threshold_select(inst.matrix, inst.outcome, 5, TOP_K)
        assert len(chosen) == 5
        assert chosen == threshold_select(inst.matrix, inst.outcome, 5, TOP_K)

    def test_basic_thresholding(self, three_items):
        A, y = three_items
        assert basic_thresholding(A, y, 1).items == (0,)

    def test_consistency_under_resampling(self):
        """If resampled columns are kept both times, the whole output is unchanged."""
        n, k, m = 40, 3, 20
        inst = generate_instance(n, k, m, seed=5)
        base = m_thresh(inst.matrix, inst.outcome, k)
        outsiders = [i for i in range(n) if i not in inst.defectives]
        stream = SplitMix64(17)
        compared = 0
        for _ in range(500):
            size = 1 + stream.below(4)
            picked = {outsiders[stream.below(len(outsiders))] for _ in range(size)}
            dense = inst.matrix.to_dense()
            for i in picked:
                dense[:, i] = stream.bits(m)
            resampled = BitMatrix.from_dense(dense)
            assert np.array_equal(outcome(resampled, inst.defectives), inst.outcome)
            again = m_thresh(resampled, inst.outcome, k)
            if picked <= set(base) and picked <= set(again):
                compared += 1
                assert again == base
        assert compared > 0


class TestIterative:
    def test_example(self, three_items):
        A, y = three_items
        assert iterative_thresholding(A, y, 1).items == (0,)

    def test_degenerate_sizes(self, three_items):
        A, y = three_items
        assert iterative_thresholding(A, y, 0) == ItemSet()
        assert iterative_thresholding(A, y, 3) == ItemSet.full(3)
        with pytest.raises(InvalidParamsError):
            iterative_thresholding(A, y, 4)

    @pytest.mark.parametrize("seed", range(10))
    def test_incremental_matches_recomputation(self, seed):
        inst = generate_instance(n=60, k=6, m=30, seed=seed)
        fast = iterative_thresholding(inst.matrix, inst.outcome, inst.k)
        slow = iterative_thresholding(inst.matrix, inst.outcome, inst.k, incremental=False)
        assert fast == slow and len(fast) == 6


class TestWrappers:
    def test_base_already_exact(self, desk_instance):
        inst = desk_instance
        head = inst.matrix.head_rows(inst.k)
        exact = then_thresholding(lambda A, y, k: inst.defectives, head, inst.outcome[: inst.k], inst.k)
        assert exact == inst.defectives

    def test_then_thresholding_example(self, three_items):
        A, y = three_items
        assert then_thresholding(k_thresh, A, y, 1).items == (0, 1)

    def test_empty_base_reduces_to_phi(self, desk_instance):
        inst = desk_instance
        head = inst.matrix.head_rows(inst.k)
        y = inst.outcome[: inst.k]
        out = then_thresholding(lambda A, y, k: ItemSet(), head, y, inst.k)
        assert out == top_t(phi_basic_scores(head, y), inst.k)

    def test_then_thresholding_errors(self, three_items):
        A, y = three_items
        with pytest.raises(InvalidParamsError):
            then_thresholding(k_thresh, A, y, 3)
        with pytest.raises(BaseOutputTooLargeError):
            then_thresholding(lambda A, y, k: ItemSet.full(3), A, y, 1)

    def test_split_point(self):
        assert split_point(1200, 4096, 1.0) == 1100
        assert split_point(50, 100, 0.0) == 50
        assert split_point(3, 4096, 5.0) == 1
        with pytest.raises(InvalidParamsError):
            split_point(10, 10, -1.0)

    def test_split_rows_without_holdout_is_the_base(self, desk_instance):
        inst = desk_instance
        assert split_rows(m_thresh, inst.matrix, inst.outcome, inst.k, 0.0) == m_thresh(
            inst.matrix, inst.outcome, inst.k
        )

    def test_split_rows_ignores_the_held_out_tests(self):
        n, k, m = 256, 16, 128
        m1 = split_point(m, n, 1.0)
        stream = SplitMix64(99)
        for trial in range(200):
            inst = generate_instance(n, k, m, seed=1000 + trial)
            first = split_rows(m_thresh, inst.matrix, inst.outcome, k, 1.0)
            dense = inst.matrix.to_dense()
            dense[m1:] = stream.bits((m - m1) * n).reshape(m - m1, n)
            resampled = BitMatrix.from_dense(dense)
            second = split_rows(m_thresh, resampled, outcome(resampled, inst.defectives), k, 1.0)
            assert first == second

    def test_k_then_thresholding_second_stage_consistency(self):
        """Resampled columns outside the base output but kept by the padding leave the output unchanged."""
        n, k, m = 40, 3, 20
        base_select = get_selector("k_thresh")
        wrapped = get_selector("k_thresh_then_thresh")
        compared = 0
        stream = SplitMix64(23)
        for seed in range(10):
            inst = generate_instance(n, k, m, seed=seed)
            base = base_select(inst.matrix, inst.outcome, k)
            final = wrapped(inst.matrix, inst.outcome, k)
            outsiders = [i for i in range(n) if i not in inst.defectives]
            for _ in range(50):
                size = 1 + stream.below(4)
                picked = {outsiders[stream.below(len(outsiders))] for _ in range(size)}
                dense = inst.matrix.to_dense()
                for i in picked:
                    dense[:, i] = stream.bits(m)
                resampled = BitMatrix.from_dense(dense)
                assert np.array_equal(outcome(resampled, inst.defectives), inst.outcome)
                base_again = base_select(resampled, inst.outcome, k)
                again = wrapped(resampled, inst.outcome, k)
                outside_base = not (picked & set(base)) and not (picked & set(base_again))
                if outside_base and picked <= set(final) and picked <= set(again):
                    compared += 1
                    assert again == final
        assert compared > 0


class TestRegistry:
    @pytest.mark.parametrize(
        "algorithm_id",
        ["k_thresh", "two_k_thresh", "m_thresh", "basic_thresh", "all_items", "iterative",
         "iterative_then_thresh", "k_thresh_then_thresh", "basic_then_thresh", "split_rows(m_thresh,1)"],
    )
    def test_known_ids_select(self, algorithm_id, desk_instance):
        inst = desk_instance
        selector = get_selector(algorithm_id)
        chosen = selector(inst.matrix, inst.outcome, inst.k)
        assert 0 < len(chosen) <= inst.n

    def test_split_ids_are_canonical(self):
        assert get_selector("split_rows(m_thresh)").algorithm_id == "split_rows(m_thresh,1)"
        assert get_selector("split_rows( iterative , 0.5 )").algorithm_id == "split_rows(iterative,0.5)"

    def test_unknown_ids(self):
        for bad in ("top_everything", "split_rows(nope,1)", "split_rows(m_thresh,-1)"):
            with pytest.raises(InvalidSpecError):
                get_selector(bad)

    def test_wrapper_flags(self):
        assert is_wrapper("iterative_then_thresh") and is_wrapper("split_rows(k_thresh,2)")
        assert not is_wrapper("m_thresh")
        assert "m_thresh" in available_algorithms()

    def test_run_captures_lab_errors(self):
        inst = generate_instance(n=10, k=4, m=5, seed=0)
        result = get_selector("split_rows(k_thresh,1)").run(inst.matrix, inst.outcome, inst.k)
        assert not result.success
        assert result.items == ItemSet()
        assert result.errors

    def test_run_reports_success(self, desk_instance):
        inst = desk_instance
        result = get_selector("m_thresh").run(inst.matrix, inst.outcome, inst.k)
        assert result.success and len(result.items) == inst.m
        assert result.execution_time_us >= 0
