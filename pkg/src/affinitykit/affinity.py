"""Pairwise affinity construction.

Four builders cover the affinity definitions the rest of the library
composes: a statistical mix of rank correlation and variance for feature
graphs, raw dot products of query/key embeddings, a Gaussian distance
kernel, and the concatenation scorer used by graph attention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from ._validate import as_matrix, as_vector
from .errors import (
    DimensionMismatch,
    EmptyDataset,
    NegativeEntries,
    NonFiniteInput,
    NonPositiveBandwidth,
)


@dataclass(frozen=True)
class FeatureDataset:
    """Samples-by-features table with one name per feature column."""

    data: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2:
            raise DimensionMismatch(f"dataset must be 2-D, got shape {data.shape}")
        if data.shape[0] < 2:
            raise EmptyDataset("correlation needs at least 2 samples")
        if not np.all(np.isfinite(data)):
            raise NonFiniteInput("dataset contains NaN or infinite entries")
        names = tuple(str(n) for n in self.feature_names)
        if len(names) != data.shape[1]:
            raise DimensionMismatch(
                f"{len(names)} feature names for {data.shape[1]} columns"
            )
        if any(not n for n in names):
            raise ValueError("feature names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "feature_names", names)

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]

    @property
    def n_features(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class AffinityMatrix:
    """Square pairwise affinity matrix with optional validated guarantees.

    Flags left as ``None`` are inferred from the entries; flags passed as
    ``True`` are checked and raise when the data violates them.
    """

    matrix: np.ndarray
    nonnegative: bool | None = None
    zero_diagonal: bool | None = None

    def __post_init__(self):
        m = as_matrix(self.matrix, "affinity matrix")
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"affinity matrix must be square, got {m.shape}")
        if self.nonnegative is None:
            object.__setattr__(self, "nonnegative", bool(np.all(m >= 0)))
        elif self.nonnegative and np.any(m < 0):
            raise NegativeEntries("matrix flagged nonnegative has negative entries")
        diag = np.diagonal(m)
        if self.zero_diagonal is None:
            object.__setattr__(self, "zero_diagonal", bool(np.all(diag == 0)))
        elif self.zero_diagonal and np.any(diag != 0):
            raise ValueError("matrix flagged zero-diagonal has nonzero diagonal entries")
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def _spearman_matrix(data: np.ndarray) -> np.ndarray:
    """Pairwise Spearman correlations with average ranks for ties.

    A zero-variance column correlates 0 with everything by convention.
    Centered average ranks are exact quarter-integers for modest sample
    counts, so perfectly monotone pairs hit the Cauchy-Schwarz bound
    exactly and are snapped to +-1 rather than left one ulp short of it.
    """
    n = data.shape[0]
    ranks = rankdata(data, method="average", axis=0)
    centered = ranks - (n + 1) / 2.0
    gram = centered.T @ centered
    diag = np.diagonal(gram)
    den2 = np.outer(diag, diag)
    rho = np.zeros_like(gram)
    positive = den2 > 0
    rho[positive] = gram[positive] / np.sqrt(den2[positive])
    boundary = positive & (gram * gram >= den2)
    rho[boundary] = np.sign(gram[boundary])
    return rho


def build_corr_affinity(ds: FeatureDataset, beta: float = 0.5) -> AffinityMatrix:
    """Feature-graph affinity mixing rescaled variance and rank correlation.

    Off-diagonal entries are

        A_ij = beta * max(s_i, s_j) + (1 - beta) * (1 - |rho_ij|)

    where s is each column's standard deviation divided by the largest
    one (zero when every column is constant) and rho is the Spearman
    correlation. The diagonal is zero: scores downstream measure
    connectedness to *other* features, so self-loops are excluded.
    """
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    if ds.n_features < 2:
        raise EmptyDataset("affinity needs at least 2 features")
    sigma = ds.data.std(axis=0)
    sigma_max = sigma.max()
    sigma_hat = sigma / sigma_max if sigma_max > 0 else np.zeros_like(sigma)
    var_term = np.maximum.outer(sigma_hat, sigma_hat)
    rho = _spearman_matrix(ds.data)
    off = beta * var_term + (1.0 - beta) * (1.0 - np.abs(rho))
    # Mirror the strict upper triangle so symmetry is bitwise, not approximate.
    upper = np.triu(off, k=1)
    return AffinityMatrix(upper + upper.T, nonnegative=True, zero_diagonal=True)


def build_dot_product_affinity(Q, K) -> AffinityMatrix | np.ndarray:
    """Raw pairwise scores A_ij = q_i . k_j.

    Returns an :class:`AffinityMatrix` when the result is square; a plain
    array otherwise (cross-attention, where queries and keys differ in
    count). No guarantees are claimed about sign or diagonal.
    """
    q = as_matrix(Q, "Q")
    k = as_matrix(K, "K")
    if q.shape[1] != k.shape[1]:
        raise DimensionMismatch(
            f"inner dimensions differ: Q is {q.shape}, K is {k.shape}"
        )
    raw = q @ k.T
    if raw.shape[0] == raw.shape[1]:
        return AffinityMatrix(raw, nonnegative=False, zero_diagonal=False)
    return raw


def build_gaussian_affinity(X, h: float) -> AffinityMatrix:
    """Gaussian kernel A_ij = exp(-||x_i - x_j||^2 / h^2).

    The diagonal is exactly 1 (self-similarity); entries lie in (0, 1].
    Each pair's distance is computed independently, so permuting the rows
    of X permutes the output exactly.
    """
    x = as_matrix(X, "X")
    if not h > 0:
        raise NonPositiveBandwidth(f"bandwidth must be positive, got {h}")
    diff = x[:, None, :] - x[None, :, :]
    sq_dist = (diff * diff).sum(axis=-1)
    return AffinityMatrix(np.exp(-sq_dist / (h * h)), nonnegative=True, zero_diagonal=False)


def build_gat_scores(H, W, a, slope: float = 0.2) -> np.ndarray:
    """Concatenation scorer e_ij = LeakyReLU(a . [W h_i, W h_j]).

    Returns raw scores for every ordered pair; neighborhood masking is
    the normalizer's job. The scorer splits into a source and a target
    half, so the full matrix is one outer sum of two projected vectors.
    """
    h = as_matrix(H, "H")
    w = as_matrix(W, "W")
    avec = as_vector(a, "a")
    if w.shape[0] != h.shape[1]:
        raise DimensionMismatch(
            f"W rows ({w.shape[0]}) must match H columns ({h.shape[1]})"
        )
    f_out = w.shape[1]
    if avec.shape[0] != 2 * f_out:
        raise DimensionMismatch(
            f"scorer vector has length {avec.shape[0]}, expected {2 * f_out}"
        )
    if not 0.0 < slope < 1.0:
        raise ValueError(f"LeakyReLU slope must lie in (0, 1), got {slope}")
    projected = h @ w
    src = projected @ avec[:f_out]
    dst = projected @ avec[f_out:]
    scores = src[:, None] + dst[None, :]
    return np.where(scores >= 0, scores, slope * scores)
