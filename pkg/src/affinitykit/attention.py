"""The attention family, assembled from affinity + normalize + propagate.

Scaled dot-product attention, multi-head attention, the non-local block
in its embedded-Gaussian and dot-product variants, and the graph
attention layer. All parameters are caller-supplied inputs; nothing here
is trained.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np

from ._validate import as_matrix, as_vector
from .affinity import AffinityMatrix, build_dot_product_affinity, build_gat_scores
from .errors import DimensionMismatch
from .normalize import NeighborhoodMask, masked_softmax_rows, scale_scores, softmax_rows
from .propagate import single_hop_aggregate


@dataclass(frozen=True)
class AttentionConfig:
    """Head count and per-head key width for a multi-head block."""

    d_model: int
    heads: int
    d_k: int
    scale: bool = True

    def __post_init__(self):
        if min(self.d_model, self.heads, self.d_k) < 1:
            raise ValueError("d_model, heads and d_k must be positive")
        if self.d_model != self.heads * self.d_k:
            raise DimensionMismatch(
                f"d_model ({self.d_model}) must equal heads * d_k "
                f"({self.heads} * {self.d_k})"
            )


@dataclass(frozen=True)
class ProjectionSet:
    """Per-head query/key/value projections plus the output projection."""

    wq: tuple[np.ndarray, ...]
    wk: tuple[np.ndarray, ...]
    wv: tuple[np.ndarray, ...]
    wout: np.ndarray

    def __post_init__(self):
        for field in ("wq", "wk", "wv"):
            mats = tuple(as_matrix(m, field) for m in getattr(self, field))
            if not mats:
                raise DimensionMismatch(f"{field} needs at least one head")
            object.__setattr__(self, field, mats)
        if not len(self.wq) == len(self.wk) == len(self.wv):
            raise DimensionMismatch("wq, wk and wv must have one matrix per head")
        object.__setattr__(self, "wout", as_matrix(self.wout, "wout"))

    @property
    def heads(self) -> int:
        return len(self.wq)


@dataclass(frozen=True)
class NonLocalProjections:
    """Theta/phi/g embeddings of a non-local block; wz defaults to identity."""

    wtheta: np.ndarray
    wphi: np.ndarray
    wg: np.ndarray
    wz: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "wtheta", as_matrix(self.wtheta, "wtheta"))
        object.__setattr__(self, "wphi", as_matrix(self.wphi, "wphi"))
        object.__setattr__(self, "wg", as_matrix(self.wg, "wg"))
        if self.wz is not None:
            object.__setattr__(self, "wz", as_matrix(self.wz, "wz"))


@dataclass(frozen=True)
class GatParams:
    """Shared transform, value transform, scorer vector and LeakyReLU slope."""

    w: np.ndarray
    wprime: np.ndarray
    a: np.ndarray
    slope: float = 0.2

    def __post_init__(self):
        w = as_matrix(self.w, "w")
        wprime = as_matrix(self.wprime, "wprime")
        a = as_vector(self.a, "a")
        if wprime.shape[0] != w.shape[0]:
            raise DimensionMismatch("w and wprime must share their input width")
        if a.shape[0] != 2 * w.shape[1]:
            raise DimensionMismatch(
                f"scorer vector has length {a.shape[0]}, expected {2 * w.shape[1]}"
            )
        if not 0.0 < self.slope < 1.0:
            raise ValueError(f"slope must lie in (0, 1), got {self.slope}")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "wprime", wprime)
        object.__setattr__(self, "a", a)


def attention(Q, K, V, scale: bool = True) -> np.ndarray:
    """softmax(Q K^T / sqrt(d)) V, the scaled dot-product attention.

    Q may come from a different source than K and V (cross-attention);
    only the inner width must match. Every output coordinate is a convex
    combination of the corresponding V column.
    """
    q = as_matrix(Q, "Q")
    k = as_matrix(K, "K")
    v = as_matrix(V, "V")
    if k.shape[0] != v.shape[0]:
        raise DimensionMismatch(
            f"K has {k.shape[0]} rows but V has {v.shape[0]}"
        )
    scores = build_dot_product_affinity(q, k)
    if isinstance(scores, AffinityMatrix):
        scores = scores.matrix
    if scale:
        scores = scale_scores(scores, q.shape[1])
    return single_hop_aggregate(softmax_rows(scores), v)


def multi_head_attention(X, cfg: AttentionConfig, proj: ProjectionSet) -> np.ndarray:
    """Concatenated per-head attention followed by the output projection."""
    x = as_matrix(X, "X")
    if x.shape[1] != cfg.d_model:
        raise DimensionMismatch(
            f"X has width {x.shape[1]}, config expects d_model {cfg.d_model}"
        )
    if proj.heads != cfg.heads:
        raise DimensionMismatch(
            f"projection set has {proj.heads} heads, config expects {cfg.heads}"
        )
    for wq, wk, wv in zip(proj.wq, proj.wk, proj.wv):
        for mat in (wq, wk, wv):
            if mat.shape != (cfg.d_model, cfg.d_k):
                raise DimensionMismatch(
                    f"per-head projection must be {cfg.d_model} x {cfg.d_k}, got {mat.shape}"
                )
    if proj.wout.shape != (cfg.heads * cfg.d_k, cfg.d_model):
        raise DimensionMismatch(
            f"wout must be {cfg.heads * cfg.d_k} x {cfg.d_model}, got {proj.wout.shape}"
        )
    head_outputs = [
        attention(x @ wq, x @ wk, x @ wv, scale=cfg.scale)
        for wq, wk, wv in zip(proj.wq, proj.wk, proj.wv)
    ]
    return np.hstack(head_outputs) @ proj.wout


def non_local_block(
    X,
    proj: NonLocalProjections,
    variant: Literal["embedded_gaussian", "dot_product"] = "embedded_gaussian",
) -> np.ndarray:
    """Non-local aggregation with a residual connection.

    embedded_gaussian normalizes the pairwise scores with a row softmax;
    dot_product divides by the element count N instead. Minus the
    residual, the embedded-Gaussian variant is exactly scaled-free
    attention on the projected inputs.
    """
    x = as_matrix(X, "X")
    theta = x @ proj.wtheta
    phi = x @ proj.wphi
    g = x @ proj.wg
    scores = theta @ phi.T
    if variant == "embedded_gaussian":
        weights = softmax_rows(scores)
    elif variant == "dot_product":
        weights = scores / x.shape[0]
    else:
        raise ValueError(f"unknown non-local variant: {variant!r}")
    y = single_hop_aggregate(weights, g)
    if proj.wz is not None:
        y = y @ proj.wz
    if y.shape != x.shape:
        raise DimensionMismatch(
            f"residual add needs output shape {x.shape}, got {y.shape}"
        )
    return x + y


def gat_layer(
    H,
    params: GatParams,
    mask: NeighborhoodMask,
    activation: Callable[[np.ndarray], np.ndarray] | None = None,
) -> np.ndarray:
    """One graph attention layer: scorer, masked softmax, aggregation.

    The output nonlinearity defaults to the identity so structural
    equivalences stay exact; pass ``activation`` to opt in.
    """
    h = as_matrix(H, "H")
    scores = build_gat_scores(h, params.w, params.a, params.slope)
    weights = masked_softmax_rows(scores, mask)
    out = single_hop_aggregate(weights, h @ params.wprime)
    return activation(out) if activation is not None else out


def multi_head_gat(
    H,
    params: Sequence[GatParams],
    mask: NeighborhoodMask,
    mode: Literal["concat", "average"] = "concat",
    activation: Callable[[np.ndarray], np.ndarray] | None = None,
) -> np.ndarray:
    """Several GAT heads joined along features or averaged."""
    if not params:
        raise ValueError("at least one head is required")
    outputs = [gat_layer(H, p, mask, activation) for p in params]
    if mode == "concat":
        return np.hstack(outputs)
    if mode == "average":
        return np.mean(np.stack(outputs, axis=0), axis=0)
    raise ValueError(f"unknown multi-head mode: {mode!r}")
