"""Kernel feature maps turning L2/L1/chi2/js distances into cosine distance.

L2 and L1 use random Fourier features for the Gaussian and Laplacian kernels:
    f(x) = 1/sqrt(d') [sin(w_i.x), cos(w_i.x)]_{i=1..d'}
with w_i drawn N(0, 1/sigma^2) for L2 and Cauchy(0, 1/sigma) for L1 (the
Fourier transform of the Laplacian kernel is Cauchy; a Laplace draw would
not satisfy E[f(x).f(y)] = exp(-|x-y|_1/sigma)).

chi2 and js use the deterministic homogeneous kernel map: per coordinate
x_i > 0 the features
    sqrt(x_i L k(0)),  sqrt(2 x_i L k(rL)) cos(rL ln x_i),
                       sqrt(2 x_i L k(rL)) sin(rL ln x_i)    for r = 1..l
with k_chi2(lam) = sech(pi lam) and k_js(lam) = (2/ln 4) sech(pi lam)/(1+4 lam^2).
Inputs are L1-normalized first and the output is L2-normalized so the index
sees unit vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import ZERO_NORM, canonical_measure

DEFAULT_SAMPLING_INTERVAL = 0.4


@dataclass
class EmbeddingConfig:
    measure: str
    input_dim: int
    d_prime: int
    sigma: float | None = None
    sampling_interval: float = DEFAULT_SAMPLING_INTERVAL
    seed: int = 0

    def validate(self) -> None:
        self.measure = canonical_measure(self.measure)
        if self.measure == "cosine":
            raise ValueError("cosine needs no embedding")
        if self.input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        if self.d_prime < 1:
            raise ValueError("d_prime must be >= 1")
        if self.measure in ("l1", "l2"):
            if self.sigma is None or self.sigma <= 0:
                raise ValueError(f"{self.measure} embedding requires sigma > 0")
        else:
            if self.sampling_interval <= 0:
                raise ValueError("sampling_interval must be > 0")
            levels = self.d_prime / self.input_dim
            if self.d_prime % self.input_dim or levels < 3 or int(levels) % 2 == 0:
                raise ValueError(
                    f"chi2/js require d_prime = (2l+1)*input_dim with l >= 1; "
                    f"got d_prime={self.d_prime}, input_dim={self.input_dim} "
                    f"(nearest valid: {homogeneous_d_prime(self.input_dim, self.d_prime)})"
                )


def homogeneous_d_prime(d: int, requested: int) -> int:
    """Largest valid (2l+1)*d <= requested, with l >= 1; 3d as the floor."""
    l = max(1, (requested // d - 1) // 2)
    return (2 * l + 1) * d


class FeatureMap:
    """Deterministic feature map built from an EmbeddingConfig."""

    def __init__(self, config: EmbeddingConfig, frequencies: np.ndarray | None):
        self.config = config
        self.measure = config.measure
        self.frequencies = frequencies   # (d_prime, d) for l1/l2, None otherwise

    @property
    def output_dim(self) -> int:
        if self.measure in ("l1", "l2"):
            return 2 * self.config.d_prime
        return self.config.d_prime

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.apply_batch(np.asarray(x, dtype=np.float64)[None, :])[0]

    def apply_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.config.input_dim:
            raise ValueError(
                f"expected points of dimension {self.config.input_dim}, got shape {X.shape}"
            )
        if self.measure in ("l1", "l2"):
            phase = X @ self.frequencies.T
            scale = 1.0 / np.sqrt(self.config.d_prime)
            return np.hstack([np.sin(phase), np.cos(phase)]) * scale
        return _homogeneous_features(X, self.measure, self.config)


def build_feature_map(config: EmbeddingConfig) -> FeatureMap:
    config.validate()
    if config.measure == "l2":
        rng = np.random.default_rng(config.seed)
        W = rng.standard_normal((config.d_prime, config.input_dim)) / config.sigma
        return FeatureMap(config, W)
    if config.measure == "l1":
        rng = np.random.default_rng(config.seed)
        W = rng.standard_cauchy((config.d_prime, config.input_dim)) / config.sigma
        return FeatureMap(config, W)
    return FeatureMap(config, None)


def _kappa(measure: str, lam: np.ndarray) -> np.ndarray:
    sech = 1.0 / np.cosh(np.pi * lam)
    if measure == "chi2":
        return sech
    return (2.0 / np.log(4.0)) * sech / (1.0 + 4.0 * lam * lam)


def _homogeneous_features(X: np.ndarray, measure: str, config: EmbeddingConfig) -> np.ndarray:
    if (X < 0).any():
        i = int(np.flatnonzero((X < 0).any(axis=1))[0])
        raise ValueError(f"{measure} embedding requires non-negative features; point {i}")
    sums = X.sum(axis=1)
    if (sums < ZERO_NORM).any():
        i = int(np.flatnonzero(sums < ZERO_NORM)[0])
        raise ValueError(f"cannot L1-normalize point {i} for {measure} embedding")
    Xh = X / sums[:, None]

    L = config.sampling_interval
    l = (config.d_prime // config.input_dim - 1) // 2
    d = config.input_dim
    out = np.zeros((X.shape[0], config.d_prime))
    nz = Xh > 0
    xl = Xh * L
    log_nz = np.zeros_like(Xh)
    log_nz[nz] = np.log(Xh[nz])

    out[:, :d] = np.where(nz, np.sqrt(xl * _kappa(measure, np.zeros(1))), 0.0)
    for r in range(1, l + 1):
        amp = np.where(nz, np.sqrt(2.0 * xl * _kappa(measure, np.asarray(r * L))), 0.0)
        angle = r * L * log_nz
        out[:, (2 * r - 1) * d : 2 * r * d] = amp * np.cos(angle)
        out[:, 2 * r * d : (2 * r + 1) * d] = amp * np.sin(angle)

    norms = np.linalg.norm(out, axis=1)
    if (norms < ZERO_NORM).any():
        i = int(np.flatnonzero(norms < ZERO_NORM)[0])
        raise ValueError(f"degenerate embedding for point {i}")
    return out / norms[:, None]


def embedded_epsilon(eps: float, feature_map: FeatureMap) -> float:
    """Cosine-space radius matching an original-space eps.

    The index only consumes this in adaptive mode; candidate verification
    always uses original-space distances. chi2/js distances already equal
    1 - K so eps passes through.
    """
    if eps < 0:
        raise ValueError("eps must be >= 0")
    m = feature_map.measure
    if m == "l2":
        s = feature_map.config.sigma
        return float(1.0 - np.exp(-(eps * eps) / (2.0 * s * s)))
    if m == "l1":
        return float(1.0 - np.exp(-eps / feature_map.config.sigma))
    return float(eps)
