"""Blind deconvolution of discrete mixtures and GMM parameter estimation.

Pipeline: center the samples, estimate the third cumulant tensor, run
the overcomplete decomposition with rank d and overcompleteness 1, then
split each recovered scale w_i * rho_i^3 into mixing weight and mean
norm through the null right singular vector of the scaled component
matrix. For Gaussian mixtures with one shared covariance, the
covariance is backed out of the second moment afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cumulants import SampleSet, center, k3_fast, sample_mean, second_moment
from .decompose import DecompositionConfig, DecompositionResult, decompose
from .exceptions import NonPositiveSingularVector, RankTooLow
from .linalg import min_singular_pair
from .tensor import ComponentMatrix

_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class DiscreteMixtureParams:
    """Discrete distribution taking value means[:, i] with probability weights[i]."""

    weights: np.ndarray
    means: ComponentMatrix

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size != self.means.count:
            raise ValueError("weights must be one per mean column")
        if np.any(w <= 0):
            raise ValueError("weights must be strictly positive")
        if abs(w.sum() - 1.0) > 1e-10:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def dim(self):
        return self.means.dim

    @property
    def count(self):
        return self.means.count

    def norms(self):
        """Column 2-norms rho_i of the means."""
        return self.means.column_norms()

    def directions(self):
        """Unit-normalized mean columns."""
        return self.means.unit_normalized()


@dataclass(frozen=True)
class GmmParams:
    """Discrete mixture convolved with a shared N(0, Sigma) noise."""

    mixture: DiscreteMixtureParams
    covariance: np.ndarray

    def __post_init__(self):
        cov = np.asarray(self.covariance, dtype=np.float64)
        d = self.mixture.dim
        if cov.shape != (d, d):
            raise ValueError(f"covariance shape {cov.shape} does not match dim {d}")
        if np.max(np.abs(cov - cov.T)) > 1e-12:
            raise ValueError("covariance must be symmetric")
        cov = (cov + cov.T) / 2.0
        if np.min(np.linalg.eigvalsh(cov)) < -1e-8:
            raise ValueError("covariance eigenvalues must be >= -1e-8")
        cov.flags.writeable = False
        object.__setattr__(self, "covariance", cov)


@dataclass(frozen=True)
class DeconvolutionConfig:
    """Knobs of the deconvolution pipeline.

    epsilon is handed to the inner tensor decomposition (None selects
    the default 1e-3 / sqrt(d)). rho_max bounds the mean norms, w_min
    lower-bounds the weights, and tau is the conditioning threshold the
    instance is assumed to satisfy; tau and w_min are recorded for
    diagnostics and validation but do not steer the computation.
    """

    rho_max: float
    seed: int
    epsilon: float | None = None
    w_min: float = 0.01
    tau: float = 100.0
    max_attempts: int = 10000

    def __post_init__(self):
        if self.rho_max <= 0:
            raise ValueError("rho_max must be positive")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 0 < self.w_min < 1:
            raise ValueError("w_min must lie in (0, 1)")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")


def decouple(scaled_components: ComponentMatrix, xi):
    """Split columns a'_i = (w_i rho_i^3)^{1/3} a_i into weights and means.

    The null right singular vector of the scaled component matrix is
    proportional to the entrywise 2/3 power of the weight vector;
    weights follow by the 3/2 power and renormalization, means by
    rescaling each column with w_i^{-1/3}.
    """
    xi = np.asarray(xi, dtype=np.float64)
    d, n = scaled_components.dim, scaled_components.count
    if n != d:
        raise ValueError(f"need as many components as dimensions, got {n} in R^{d}")
    if xi.shape != (n,):
        raise ValueError(f"xi has length {xi.size}, expected {n}")

    mat = scaled_components.matrix
    svals = np.linalg.svd(mat, compute_uv=False)
    if d >= 2 and (svals[0] == 0.0 or svals[d - 2] <= d * _EPS * svals[0]):
        raise RankTooLow("scaled component matrix has numerical rank below d - 1")

    _, v = min_singular_pair(mat)
    if v.sum() < 0:
        v = -v
    if np.any(v <= 0):
        raise NonPositiveSingularVector(
            "minimum singular vector has non-positive entries; the recovered "
            "components are too inaccurate for weight recovery"
        )
    pow32 = v ** 1.5
    weights = pow32 / pow32.sum()
    means = ComponentMatrix(mat / np.cbrt(weights)[None, :])
    return weights, means


def blind_deconvolve(samples: SampleSet, cfg: DeconvolutionConfig):
    """Recover the discrete component of X = Z + noise from samples of X.

    The noise distribution is unknown; it only needs zero mean, zero
    third moment, and finite sixth moment. Returns the recovered
    mixture (means in the original frame) plus diagnostics with the
    achieved residual, attempt count, and centered-frame outputs.
    """
    d = samples.dim
    if d < 3:
        raise ValueError("deconvolution requires dimension at least 3")
    if samples.count < 3:
        raise ValueError("need at least 3 samples")
    if cfg.w_min > 1.0 / d:
        raise ValueError(f"w_min must be at most 1/d = {1.0 / d:.4g}")

    mean = sample_mean(samples)
    centered = center(samples)
    cumulant = k3_fast(centered)

    epsilon = cfg.epsilon if cfg.epsilon is not None else 1e-3 / np.sqrt(d)
    inner = DecompositionConfig(
        epsilon=epsilon,
        rank_n=d,
        overcompleteness_k=1,
        norm_bound_M=cfg.rho_max,
        seed=cfg.seed,
        max_attempts=cfg.max_attempts,
    )

    def mixture_plausible(directions, xi):
        # Alternative decompositions can fit the tensor as well as the
        # true one but decouple to parameters outside the declared
        # bounds; reject those candidates so the search keeps going.
        scaled = ComponentMatrix(directions.matrix * np.cbrt(xi)[None, :])
        try:
            weights, means_c = decouple(scaled, xi)
        except (NonPositiveSingularVector, RankTooLow):
            return False
        if np.min(weights) < 0.5 * cfg.w_min:
            return False
        if np.max(means_c.column_norms()) > 1.25 * cfg.rho_max:
            return False
        return True

    result = decompose(cumulant, inner, accept_extra=mixture_plausible)
    weights, means_centered = decouple(result.components, result.scales_xi)
    means = ComponentMatrix(means_centered.matrix + mean[:, None])

    diagnostics = {
        "residual_frobenius": result.residual_frobenius,
        "attempts_used": result.attempts_used,
        "xi": [float(v) for v in result.scales_xi],
        "epsilon": epsilon,
        "sample_mean": [float(v) for v in mean],
        "means_centered": [[float(v) for v in means_centered.column(i)]
                           for i in range(means_centered.count)],
        "means_singular_values": [
            float(s) for s in np.linalg.svd(means_centered.matrix, compute_uv=False)
        ],
        "weighted_mean_norm_centered": float(
            np.linalg.norm(means_centered.matrix @ weights)
        ),
    }
    return DiscreteMixtureParams(weights=weights, means=means), diagnostics


def covariance_backout(second_moment_matrix, weights, means: ComponentMatrix):
    """Shared covariance from the second moment of the centered mixture:
    Sigma = E[XX^T] - sum_i w_i mu_i mu_i^T."""
    s2 = np.asarray(second_moment_matrix, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    raw = s2 - (means.matrix * w[None, :]) @ means.matrix.T
    return (raw + raw.T) / 2.0


def psd_project(matrix):
    """Clamp negative eigenvalues of a symmetric matrix to zero."""
    m = np.asarray(matrix, dtype=np.float64)
    vals, vecs = np.linalg.eigh((m + m.T) / 2.0)
    clipped = np.clip(vals, 0.0, None)
    out = (vecs * clipped) @ vecs.T
    return (out + out.T) / 2.0


def estimate_gmm(samples: SampleSet, cfg: DeconvolutionConfig):
    """Estimate weights, means, and the shared covariance of a GMM.

    Runs blind deconvolution, then subtracts the recovered discrete
    second moment from the sample second moment in the centered frame.
    The returned GmmParams carries the PSD-projected covariance; the raw
    symmetrized estimate is in diagnostics["covariance_raw"].
    """
    mixture, diagnostics = blind_deconvolve(samples, cfg)
    centered = center(samples)
    s2 = second_moment(centered)
    means_centered = ComponentMatrix(np.column_stack(diagnostics["means_centered"]))
    raw = covariance_backout(s2, mixture.weights, means_centered)
    psd = psd_project(raw)
    diagnostics["covariance_raw"] = [[float(v) for v in row] for row in raw]
    diagnostics["covariance_psd"] = [[float(v) for v in row] for row in psd]
    return GmmParams(mixture=mixture, covariance=psd), diagnostics
