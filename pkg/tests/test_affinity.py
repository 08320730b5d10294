import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

import affinitykit as ak


def make_ds(*columns, names=None):
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    if names is None:
        names = tuple(f"f{i}" for i in range(data.shape[1]))
    return ak.FeatureDataset(data, names)


# Frozen via an independent average-rank / population-std script on the
# 4x3 table below: sigma_hat = [1, 1, 0], spearman(a, b) = 0.8.
CORR_FIXTURE = make_ds([1, 2, 3, 4], [1, 3, 2, 4], [2, 2, 2, 2], names=("a", "b", "c"))
CORR_EXPECTED = np.array([[0.0, 0.6, 1.0], [0.6, 0.0, 1.0], [1.0, 1.0, 0.0]])


class TestFeatureDataset:
    def test_valid(self):
        ds = make_ds([1, 2], [3, 4])
        assert ds.n_samples == 2 and ds.n_features == 2

    def test_single_sample_rejected(self):
        with pytest.raises(ak.EmptyDataset):
            ak.FeatureDataset(np.array([[1.0, 2.0]]), ("a", "b"))

    def test_nan_rejected(self):
        with pytest.raises(ak.NonFiniteInput):
            make_ds([1, np.nan], [3, 4])

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            make_ds([1, 2], [3, 4], names=("a", "a"))

    def test_empty_name_rejected(self):
        with pytest.raises(ValueError):
            make_ds([1, 2], [3, 4], names=("a", ""))

    def test_name_count_mismatch(self):
        with pytest.raises(ak.DimensionMismatch):
            make_ds([1, 2], [3, 4], names=("a", "b", "c"))


class TestAffinityMatrixType:
    def test_flags_inferred(self):
        a = ak.AffinityMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert a.nonnegative and a.zero_diagonal

    def test_nonnegative_claim_checked(self):
        with pytest.raises(ak.NegativeEntries):
            ak.AffinityMatrix(np.array([[0.0, -1.0], [1.0, 0.0]]), nonnegative=True)

    def test_zero_diagonal_claim_checked(self):
        with pytest.raises(ValueError):
            ak.AffinityMatrix(np.eye(2), zero_diagonal=True)

    def test_square_required(self):
        with pytest.raises(ak.DimensionMismatch):
            ak.AffinityMatrix(np.ones((2, 3)))

    def test_finite_required(self):
        with pytest.raises(ak.NonFiniteInput):
            ak.AffinityMatrix(np.array([[0.0, np.inf], [1.0, 0.0]]))


class TestCorrAffinity:
    def test_identical_columns_give_exact_zero(self):
        a = ak.build_corr_affinity(make_ds([1, 2, 3, 4], [1, 2, 3, 4]), beta=0.0)
        assert a.matrix[0, 1] == 0.0

    def test_anti_correlated_columns_give_exact_zero(self):
        a = ak.build_corr_affinity(make_ds([1, 2, 3, 4], [4, 3, 2, 1]), beta=0.0)
        assert a.matrix[0, 1] == 0.0

    def test_fixture_matches_independent_oracle(self):
        a = ak.build_corr_affinity(CORR_FIXTURE, beta=0.5)
        assert_allclose(a.matrix, CORR_EXPECTED, atol=1e-15)

    def test_constant_column_correlates_zero(self):
        a = ak.build_corr_affinity(make_ds([1, 2, 3, 4], [5, 5, 5, 5]), beta=0.0)
        assert a.matrix[0, 1] == 1.0

    def test_symmetric_bitwise_and_zero_diagonal(self):
        rng = np.random.default_rng(3)
        ds = ak.FeatureDataset(rng.normal(size=(9, 6)), tuple("abcdef"))
        a = ak.build_corr_affinity(ds, beta=0.3)
        assert_array_equal(a.matrix, a.matrix.T)
        assert_array_equal(np.diagonal(a.matrix), np.zeros(6))
        assert a.nonnegative and a.zero_diagonal

    def test_monotone_ties_preserved(self):
        # Ties use average ranks, so duplicating a value keeps rho intact.
        a = ak.build_corr_affinity(make_ds([1, 1, 2, 3], [5, 5, 6, 7]), beta=0.0)
        assert a.matrix[0, 1] == 0.0

    @given(
        st.lists(
            st.lists(st.integers(-5, 5), min_size=2, max_size=4),
            min_size=3,
            max_size=8,
        ),
        st.integers(0, 3),
    )
    @settings(max_examples=60)
    def test_spearman_monotone_transform_invariance(self, table, col_pick):
        rows = [r[: min(len(r) for r in table)] for r in table]
        data = np.asarray(rows, dtype=float)
        if data.shape[1] < 2:
            return
        ds = ak.FeatureDataset(data, tuple(f"f{i}" for i in range(data.shape[1])))
        col = col_pick % data.shape[1]
        transformed = data.copy()
        transformed[:, col] = np.exp(transformed[:, col])
        ds_t = ak.FeatureDataset(transformed, ds.feature_names)
        a = ak.build_corr_affinity(ds, beta=0.0)
        a_t = ak.build_corr_affinity(ds_t, beta=0.0)
        assert_allclose(a_t.matrix, a.matrix, atol=1e-12)

    def test_beta_domain(self):
        with pytest.raises(ValueError):
            ak.build_corr_affinity(CORR_FIXTURE, beta=1.5)

    def test_single_feature_rejected(self):
        with pytest.raises(ak.EmptyDataset):
            ak.build_corr_affinity(make_ds([1, 2, 3]))


class TestDotProductAffinity:
    def test_identity(self):
        a = ak.build_dot_product_affinity(np.eye(2), np.eye(2))
        assert isinstance(a, ak.AffinityMatrix)
        assert_array_equal(a.matrix, np.eye(2))
        # raw scores claim neither sign nor diagonal structure
        assert a.nonnegative is False and a.zero_diagonal is False

    def test_zero_query(self):
        a = ak.build_dot_product_affinity(np.zeros((2, 3)), np.ones((2, 3)))
        assert_array_equal(a.matrix, np.zeros((2, 2)))

    def test_hand_dot_products(self):
        out = ak.build_dot_product_affinity([[1.0, 2.0]], [[3.0, 4.0], [5.0, 6.0]])
        assert isinstance(out, np.ndarray)  # 1x2 is cross-attention shaped
        assert_array_equal(out, [[11.0, 17.0]])

    def test_transpose_swaps_arguments(self):
        rng = np.random.default_rng(11)
        q, k = rng.normal(size=(4, 3)), rng.normal(size=(4, 3))
        a = ak.build_dot_product_affinity(q, k).matrix
        b = ak.build_dot_product_affinity(k, q).matrix
        assert_allclose(a.T, b, atol=1e-12)

    def test_inner_dimension_mismatch(self):
        with pytest.raises(ak.DimensionMismatch):
            ak.build_dot_product_affinity(np.ones((2, 3)), np.ones((2, 4)))


class TestGaussianAffinity:
    def test_unit_diagonal(self):
        a = ak.build_gaussian_affinity(np.random.default_rng(0).normal(size=(5, 3)), 2.0)
        assert_array_equal(np.diagonal(a.matrix), np.ones(5))

    def test_distance_equal_to_bandwidth(self):
        h = 0.7
        a = ak.build_gaussian_affinity([[0.0], [h]], h)
        assert_allclose(a.matrix[0, 1], math.exp(-1.0), rtol=1e-15)

    def test_three_four_five_triangle(self):
        a = ak.build_gaussian_affinity([[0.0, 0.0], [3.0, 4.0]], 5.0)
        assert_allclose(a.matrix[0, 1], 0.36787944117144233, rtol=1e-15)

    def test_symmetric_and_in_unit_interval(self):
        x = np.random.default_rng(5).normal(size=(8, 4))
        a = ak.build_gaussian_affinity(x, 1.5)
        assert_array_equal(a.matrix, a.matrix.T)
        assert np.all(a.matrix > 0) and np.all(a.matrix <= 1)

    @given(st.permutations(list(range(5))))
    @settings(max_examples=30)
    def test_permutation_exact(self, perm):
        x = np.random.default_rng(9).normal(size=(5, 3))
        p = np.asarray(perm)
        a = ak.build_gaussian_affinity(x, 1.2).matrix
        a_p = ak.build_gaussian_affinity(x[p], 1.2).matrix
        assert_array_equal(a_p, a[np.ix_(p, p)])

    @pytest.mark.parametrize("h", [0.0, -1.0])
    def test_bandwidth_must_be_positive(self, h):
        with pytest.raises(ak.NonPositiveBandwidth):
            ak.build_gaussian_affinity([[0.0], [1.0]], h)


class TestGatScores:
    def test_zero_scorer(self):
        e = ak.build_gat_scores(np.ones((3, 2)), np.ones((2, 2)), np.zeros(4))
        assert_array_equal(e, np.zeros((3, 3)))

    def test_zero_transform(self):
        e = ak.build_gat_scores(np.ones((3, 2)), np.zeros((2, 2)), np.ones(4))
        assert_array_equal(e, np.zeros((3, 3)))

    def test_hand_concat_scorer(self):
        e = ak.build_gat_scores([[1.0], [2.0]], [[1.0]], [1.0, -1.0], slope=0.2)
        assert_allclose(e, [[0.0, -0.2], [1.0, 0.0]], atol=1e-15)

    def test_dimension_checks(self):
        with pytest.raises(ak.DimensionMismatch):
            ak.build_gat_scores(np.ones((3, 2)), np.ones((3, 2)), np.ones(4))
        with pytest.raises(ak.DimensionMismatch):
            ak.build_gat_scores(np.ones((3, 2)), np.ones((2, 2)), np.ones(3))

    def test_slope_domain(self):
        with pytest.raises(ValueError):
            ak.build_gat_scores(np.ones((2, 1)), np.ones((1, 1)), np.ones(2), slope=1.5)
