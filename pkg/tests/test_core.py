"""Tests for the core package: random stream, bit matrix, instances and settings."""

from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.bitmatrix import BitMatrix
from src.core.errors import (
    IndexOutOfRangeError,
    InvalidParamsError,
    InvalidSpecError,
    OutcomeOutOfRangeError,
)
from src.core.model import (
    ItemSet,
    complementary,
    estimate_k,
    generate_instance,
    instance_from_json,
    instance_to_json,
    outcome,
)
from src.core.rng import SplitMix64, derive_seed, mix64, stable_id
from src.core.settings import DEFAULT_PRIME, load_settings

binary_matrices = st.integers(1, 9).flatmap(
    lambda rows: st.integers(1, 21).flatmap(
        lambda cols: st.lists(
            st.lists(st.integers(0, 1), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
)


class TestSplitMix64:
    def test_reference_outputs_seed_zero(self):
        stream = SplitMix64(0)
        assert stream.next_u64() == 0xE220A8397B1DCDAF
        assert stream.next_u64() == 0x6E789E6AA1B965F4
        assert stream.next_u64() == 0x06C45D188009454F

    def test_reference_outputs_seed_1234567(self):
        stream = SplitMix64(1234567)
        assert [stream.next_u64() for _ in range(3)] == [
            6457827717110365317,
            3203168211198807973,
            9817491932198370423,
        ]

    def test_vector_and_scalar_draws_agree(self):
        scalar = SplitMix64(99)
        vector = SplitMix64(99)
        expected = [scalar.next_u64() for _ in range(10)]
        assert [int(w) for w in vector.words(10)] == expected
        assert vector.position == scalar.position == 10

    def test_bits_are_lsb_first(self):
        word = SplitMix64(5).next_u64()
        bits = SplitMix64(5).bits(64)
        assert sum(int(b) << i for i, b in enumerate(bits)) == word

    def test_below_stays_in_range(self):
        stream = SplitMix64(3)
        draws = [stream.below(7) for _ in range(500)]
        assert set(draws) == set(range(7))

    def test_below_rejects_empty_range(self):
        with pytest.raises(ValueError):
            SplitMix64(0).below(0)

    def test_derive_seed_is_order_sensitive(self):
        assert derive_seed(1, 2, 3) != derive_seed(1, 3, 2)
        assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
        assert derive_seed(7) == 7

    def test_mix64_and_stable_id_are_64_bit(self):
        assert 0 <= mix64(2**70) < 2**64
        assert stable_id("m_thresh") == stable_id("m_thresh")
        assert stable_id("m_thresh") != stable_id("k_thresh")


class TestBitMatrix:
    def test_entry_layout(self):
        A = BitMatrix.from_dense([[1, 0, 1], [0, 1, 1]])
        assert A.shape == (2, 3)
        assert A.packed.tolist() == [[0b101], [0b110]]
        assert A.entry(0, 2) == 1 and A.entry(1, 0) == 0

    def test_rejects_non_binary_entries(self):
        with pytest.raises(InvalidParamsError):
            BitMatrix.from_dense([[0, 2]])

    def test_rejects_dirty_trailing_bits(self):
        with pytest.raises(InvalidParamsError):
            BitMatrix(rows=1, cols=3, packed=np.array([[0b1000]], dtype=np.uint8))

    def test_out_of_range_access(self):
        A = BitMatrix.ones(2, 2)
        with pytest.raises(IndexOutOfRangeError):
            A.entry(2, 0)
        with pytest.raises(IndexOutOfRangeError):
            A.column(5)

    def test_hex_rows(self):
        A = BitMatrix.from_dense([[1, 0, 0, 0, 1], [0, 1, 1, 1, 1]])
        assert A.to_hex_rows() == ["11", "e1"]
        assert BitMatrix.from_hex_rows(["11", "e1"], 5) == A

    @settings(max_examples=60, deadline=None)
    @given(binary_matrices)
    def test_kernels_match_dense_arithmetic(self, rows):
        dense = np.asarray(rows, dtype=np.int64)
        A = BitMatrix.from_dense(dense)
        rng = np.random.default_rng(len(rows))
        w = rng.integers(-9, 10, size=A.rows)
        mask = rng.integers(0, 2, size=A.cols)

        assert np.array_equal(A.column_weights, dense.sum(axis=0))
        assert np.array_equal(A.weighted_column_sums(w), dense.T @ w)
        assert np.array_equal(A.masked_row_sums(mask), dense @ mask)
        assert np.array_equal(A.column_overlaps(0), dense.T @ dense[:, 0])

    @settings(max_examples=40, deadline=None)
    @given(binary_matrices)
    def test_complement_is_an_involution(self, rows):
        A = BitMatrix.from_dense(rows)
        assert A.complement().complement() == A
        assert np.array_equal(A.complement().dense, 1 - A.dense)

    def test_head_rows_and_select_columns(self):
        A = BitMatrix.from_dense([[1, 0, 1], [0, 1, 1], [1, 1, 0]])
        assert A.head_rows(2) == BitMatrix.from_dense([[1, 0, 1], [0, 1, 1]])
        assert A.select_columns([2, 0]).tolist() == [[1, 1], [1, 0], [0, 1]]
        with pytest.raises(InvalidParamsError):
            A.head_rows(0)


class TestItemSet:
    def test_of_sorts_and_deduplicates(self):
        assert ItemSet.of([3, 1, 3]).items == (1, 3)

    def test_requires_strictly_increasing(self):
        with pytest.raises(InvalidParamsError):
            ItemSet((2, 1))

    def test_bounds_check(self):
        with pytest.raises(IndexOutOfRangeError):
            ItemSet.of([0, 5], n=5)

    def test_set_operations(self):
        s = ItemSet.of([1, 4])
        assert s.union([0, 4]).items == (0, 1, 4)
        assert s.issubset([0, 1, 4]) and 4 in s and 2 not in s
        assert s.indicator(5).tolist() == [0, 1, 0, 0, 1]


class TestInstances:
    def test_k_one_gives_binary_outcomes(self):
        inst = generate_instance(n=3, k=1, m=2, seed=42)
        assert set(inst.outcome.tolist()) <= {0, 1}

    def test_generation_is_deterministic(self):
        assert generate_instance(50, 5, 20, 9) == generate_instance(50, 5, 20, 9)
        assert generate_instance(50, 5, 20, 9) != generate_instance(50, 5, 20, 10)

    def test_outcome_identity(self, desk_instance):
        inst = desk_instance
        assert int(inst.outcome.min()) >= 0 and int(inst.outcome.max()) <= 8
        column_mass = sum(int(inst.matrix.column(i).sum()) for i in inst.defectives)
        assert int(inst.outcome.sum()) == column_mass
        assert len(inst.defectives) == 8

    def test_matrix_consumes_stream_row_major(self):
        inst = generate_instance(n=10, k=2, m=3, seed=123)
        bits = SplitMix64(123).bits(30).reshape(3, 10)
        assert np.array_equal(inst.matrix.dense, bits)

    def test_fair_bits(self):
        inst = generate_instance(n=100, k=5, m=100, seed=31)
        ones = int(inst.matrix.dense.sum()) / 10_000
        assert abs(ones - 0.5) <= 4 * (0.25 / 10_000) ** 0.5

    @pytest.mark.parametrize(("n", "k", "m"), [(5, 0, 3), (5, 5, 3), (5, 2, 0)])
    def test_invalid_parameters(self, n, k, m):
        with pytest.raises(InvalidParamsError):
            generate_instance(n, k, m, 0)

    def test_outcome_examples(self):
        A = BitMatrix.from_dense([[1, 0, 1], [0, 1, 1]])
        assert outcome(A, ItemSet((0,))).tolist() == [1, 0]
        assert outcome(A, ItemSet()).tolist() == [0, 0]
        assert outcome(BitMatrix.ones(2, 3), [0, 1, 2]).tolist() == [3, 3]
        with pytest.raises(IndexOutOfRangeError):
            outcome(A, [3])

    def test_complementary(self):
        A = BitMatrix.from_dense([[1, 0], [0, 1]])
        flipped, y_bar = complementary(A, np.array([1, 0]), 1)
        assert flipped == BitMatrix.from_dense([[0, 1], [1, 0]])
        assert y_bar.tolist() == [0, 1]
        with pytest.raises(OutcomeOutOfRangeError):
            complementary(A, np.array([2, 0]), 1)

    def test_complementary_of_all_ones(self):
        flipped, y_bar = complementary(BitMatrix.ones(2, 4), np.array([3, 1]), 4)
        assert not flipped.dense.any()
        assert y_bar.tolist() == [1, 3]

    def test_estimate_k(self):
        assert estimate_k([3, 5, 4]) == 8
        assert estimate_k([0, 0, 0]) == 0
        assert estimate_k([6, 6]) == 12
        # 2 * 5/4 = 2.5 rounds half to even
        assert estimate_k([1, 1, 1, 2]) == 2
        with pytest.raises(InvalidParamsError):
            estimate_k([])

    def test_json_document(self, desk_instance):
        text = instance_to_json(desk_instance)
        doc = json.loads(text)
        assert set(doc) == {"n", "k", "m", "seed", "matrix", "defectives", "outcome"}
        assert instance_from_json(text) == desk_instance

    def test_json_rejects_tampered_outcome(self, desk_instance):
        doc = json.loads(instance_to_json(desk_instance))
        doc["outcome"][0] += 1 if doc["outcome"][0] < 8 else -1
        with pytest.raises(InvalidSpecError):
            instance_from_json(json.dumps(doc))

    def test_json_rejects_bad_shape(self, desk_instance):
        doc = json.loads(instance_to_json(desk_instance))
        doc["matrix"] = doc["matrix"][:-1]
        with pytest.raises(InvalidSpecError):
            instance_from_json(json.dumps(doc))


class TestSettings:
    def test_defaults(self):
        cfg = load_settings()
        assert cfg.prime == DEFAULT_PRIME
        assert cfg.free_var_budget == 20
        assert cfg.workers == 1

    def test_yaml_file_then_env_then_overrides(self, tmp_path, monkeypatch):
        path = tmp_path / "lab.yaml"
        path.write_text("free_var_budget: 12\nworkers: 3\nlog_level: debug\n")
        cfg = load_settings(path)
        assert (cfg.free_var_budget, cfg.workers, cfg.log_level) == (12, 3, "DEBUG")

        monkeypatch.setenv("QGT_WORKERS", "5")
        assert load_settings(path).workers == 5
        assert load_settings(path, workers=2, log_level=None).workers == 2
