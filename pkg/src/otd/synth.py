"""Synthetic ground truth, noise injection, and recovery evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .exceptions import InfeasibleParameters
from .mixtures import DiscreteMixtureParams
from .cumulants import SampleSet
from .tensor import ComponentMatrix, SymTensor3, frobenius_distance

_NOISE_KINDS = ("none", "gaussian", "uniform_box", "laplace")


@dataclass(frozen=True)
class NoiseSpec:
    """Zero-mean noise with zero odd moments and finite sixth moment.

    kind is one of none / gaussian / uniform_box / laplace; param is the
    covariance matrix for gaussian, per-coordinate half widths for
    uniform_box, and per-coordinate scales for laplace.
    """

    kind: str
    param: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "none":
            object.__setattr__(self, "param", None)
            return
        arr = np.asarray(self.param, dtype=np.float64)
        if self.kind == "gaussian":
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ValueError("gaussian noise needs a square covariance")
            if np.max(np.abs(arr - arr.T)) > 1e-12:
                raise ValueError("gaussian covariance must be symmetric")
            if np.min(np.linalg.eigvalsh((arr + arr.T) / 2.0)) < -1e-12:
                raise ValueError("gaussian covariance must be PSD")
        else:
            if arr.ndim != 1 or np.any(arr <= 0):
                raise ValueError(f"{self.kind} noise needs positive per-coordinate scales")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "param", arr)

    @classmethod
    def none(cls):
        return cls(kind="none")

    @classmethod
    def gaussian(cls, covariance):
        return cls(kind="gaussian", param=covariance)

    @classmethod
    def uniform_box(cls, half_width):
        return cls(kind="uniform_box", param=np.atleast_1d(half_width))

    @classmethod
    def laplace(cls, scale):
        return cls(kind="laplace", param=np.atleast_1d(scale))

    def draw(self, rng, count, dim):
        if self.kind == "none":
            return np.zeros((count, dim))
        if self.kind == "gaussian":
            if self.param.shape != (dim, dim):
                raise ValueError("covariance dimension mismatch")
            vals, vecs = np.linalg.eigh(self.param)
            root = vecs * np.sqrt(np.clip(vals, 0.0, None))
            return rng.standard_normal((count, dim)) @ root.T
        param = self.param
        if param.size == 1:
            param = np.full(dim, float(param[0]))
        if param.shape != (dim,):
            raise ValueError("noise scale dimension mismatch")
        if self.kind == "uniform_box":
            return rng.uniform(-param, param, size=(count, dim))
        return rng.laplace(0.0, param, size=(count, dim))


@dataclass(frozen=True)
class MatchReport:
    """Optimal pairing of estimated columns with ground-truth columns.

    permutation[i] is the truth column matched to estimate column i;
    per_component_error[i] is the 2-norm gap under that pairing.
    """

    permutation: np.ndarray
    per_component_error: np.ndarray
    max_error: float
    mean_error: float

    def to_dict(self):
        return {
            "permutation": [int(p) for p in self.permutation],
            "per_component_error": [float(e) for e in self.per_component_error],
            "max_error": float(self.max_error),
            "mean_error": float(self.mean_error),
        }


def gen_components(d, n, structure, seed, tau=20.0, max_retries=100) -> ComponentMatrix:
    """Random component instances.

    random_unit draws n iid unit Gaussian directions (requires
    n <= d + floor((d - 2) / 2) so the overcomplete regime stays valid).
    deconvolution_style requires n = d and produces mean columns whose
    weighted sum is zero, regenerating until the robust Kruskal rank at
    the requested tau is at least d - 1.
    """
    if structure == "random_unit":
        if d < 1 or n < 1 or n > d + (d - 2) // 2:
            raise InfeasibleParameters(
                f"random_unit requires 1 <= n <= d + (d - 2) // 2, got d={d}, n={n}"
            )
        rng = np.random.default_rng(seed)
        cols = rng.standard_normal((d, n))
        return ComponentMatrix(cols / np.linalg.norm(cols, axis=0)[None, :])
    if structure == "deconvolution_style":
        if n != d:
            raise InfeasibleParameters(
                f"deconvolution_style requires n = d, got d={d}, n={n}"
            )
        mixture = gen_mixture(d, seed, weight_floor=0.5 / d,
                              norm_range=(1.0, 1.0), tau=tau,
                              max_retries=max_retries, fixed_unit_norms=True)
        return mixture.means
    raise ValueError(f"unknown structure {structure!r}")


def gen_mixture(d, seed, weight_floor=0.2, norm_range=(0.8, 1.5), tau=20.0,
                max_retries=100, fixed_unit_norms=False) -> DiscreteMixtureParams:
    """Deconvolution-style ground truth with d mean columns in R^d.

    Weights are at least weight_floor and sum to one. The first d - 1
    means have norms in norm_range (exactly one when fixed_unit_norms);
    the last mean closes the weighted sum to zero. Instances are
    regenerated until the robust Kruskal rank of the mean matrix at tau
    is at least d - 1 and, unless fixed_unit_norms, the closing mean
    norm also falls inside norm_range.
    """
    if d < 2:
        raise InfeasibleParameters("need dimension at least 2")
    if not 0 < weight_floor <= 1.0 / d:
        raise InfeasibleParameters(f"weight_floor must lie in (0, 1/d], got {weight_floor}")
    rng = np.random.default_rng(seed)
    lo, hi = norm_range
    for _ in range(max_retries):
        weights = weight_floor + (1.0 - d * weight_floor) * rng.dirichlet(np.ones(d))
        weights = weights / weights.sum()
        dirs = rng.standard_normal((d, d - 1))
        dirs /= np.linalg.norm(dirs, axis=0)[None, :]
        if fixed_unit_norms:
            first = dirs
        else:
            first = dirs * rng.uniform(lo, hi, size=d - 1)[None, :]
        closing = -(first @ weights[: d - 1]) / weights[d - 1]
        means = np.column_stack([first, closing])
        if not fixed_unit_norms:
            rho_last = np.linalg.norm(closing)
            if not lo <= rho_last <= hi:
                continue
        if robust_kruskal_rank(ComponentMatrix(means), tau) >= d - 1:
            return DiscreteMixtureParams(weights=weights, means=ComponentMatrix(means))
    raise InfeasibleParameters(
        f"could not build a deconvolution-style instance in {max_retries} draws"
    )


def robust_kruskal_rank(components: ComponentMatrix, tau) -> int:
    """Largest k such that every k-subset of columns has sigma_k >= 1/tau.

    Exhaustive over subsets; refuses more than 16 columns.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    mat = components.matrix if isinstance(components, ComponentMatrix) else np.asarray(components)
    d, n = mat.shape
    if n > 16:
        raise ValueError("exhaustive subset check limited to 16 columns")
    threshold = 1.0 / tau
    rank = 0
    for k in range(1, min(d, n) + 1):
        ok = all(
            np.linalg.svd(mat[:, list(subset)], compute_uv=False)[-1] >= threshold
            for subset in combinations(range(n), k)
        )
        if not ok:
            break
        rank = k
    return rank


def match_components(truth: ComponentMatrix, estimate: ComponentMatrix) -> MatchReport:
    """Optimal-assignment matching of estimate columns to truth columns."""
    if truth.dim != estimate.dim or truth.count != estimate.count:
        raise ValueError(
            f"shape mismatch: truth {truth.dim}x{truth.count}, "
            f"estimate {estimate.dim}x{estimate.count}"
        )
    diff = truth.matrix[:, :, None] - estimate.matrix[:, None, :]
    cost = np.linalg.norm(diff, axis=0)
    rows, cols = linear_sum_assignment(cost)
    permutation = np.empty(truth.count, dtype=int)
    errors = np.empty(truth.count)
    for t, e in zip(rows, cols):
        permutation[e] = t
        errors[e] = cost[t, e]
    return MatchReport(
        permutation=permutation,
        per_component_error=errors,
        max_error=float(errors.max()),
        mean_error=float(errors.mean()),
    )


def sample_mixture(params: DiscreteMixtureParams, noise: NoiseSpec, count, seed) -> SampleSet:
    """Draw count iid samples of Z + noise where Z takes the mean columns."""
    if count < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    idx = rng.choice(params.count, size=count, p=params.weights)
    rows = params.means.matrix[:, idx].T + noise.draw(rng, count, params.dim)
    return SampleSet(rows)


def perturb_tensor(tensor: SymTensor3, eps_in, seed) -> SymTensor3:
    """Add a symmetric Gaussian tensor rescaled to Frobenius norm eps_in."""
    if eps_in < 0:
        raise ValueError("eps_in must be nonnegative")
    if eps_in == 0:
        return tensor
    d = tensor.dim
    rng = np.random.default_rng(seed)
    noise = SymTensor3(rng.standard_normal((d, d, d)))
    scale = eps_in / noise.frobenius_norm()
    return SymTensor3(tensor.array + noise.array * scale)


def recovery_error(truth: ComponentMatrix, estimate: ComponentMatrix) -> float:
    """Max matched column error; convenience wrapper over match_components."""
    return match_components(truth, estimate).max_error


__all__ = [
    "NoiseSpec",
    "MatchReport",
    "gen_components",
    "gen_mixture",
    "robust_kruskal_rank",
    "match_components",
    "sample_mixture",
    "perturb_tensor",
    "recovery_error",
    "frobenius_distance",
]
