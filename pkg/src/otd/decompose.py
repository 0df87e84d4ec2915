"""Randomized decomposition of overcomplete symmetric order-3 tensors.

The search loop: draw random unit probes x, y, recover the r = n - k
best-conditioned directions by simultaneous diagonalization of the
slices T_x, T_y, fit their scales in closed form, deflate, recover the
remaining k directions from the residual tensor with fresh probes, and
accept when the reconstruction is epsilon-close to the input with all
scale magnitudes bounded by (2M)^3.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    AttemptsExhausted,
    ComplexSpectrum,
    ProbeDegenerate,
    RankDeficientComponents,
    SingularPencil,
    SvdNonConvergence,
    EigNonConvergence,
)
from .jennrich import JennrichConfig, diagonalize
from .linalg import pseudoinverse
from .tensor import (
    ComponentMatrix,
    SymTensor3,
    contract,
    deflate,
    frobenius_distance,
    from_components,
)

_RETRYABLE = (
    SingularPencil,
    ComplexSpectrum,
    RankDeficientComponents,
    ProbeDegenerate,
    SvdNonConvergence,
    EigNonConvergence,
)

_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class DecompositionConfig:
    """Inputs of the randomized decomposition.

    epsilon is the accepted reconstruction error in Frobenius norm,
    rank_n the total number of components n, overcompleteness_k the
    number of components beyond the well-conditioned rank r = n - k,
    and norm_bound_M an upper bound on the component 2-norms.
    """

    epsilon: float
    rank_n: int
    overcompleteness_k: int
    norm_bound_M: float
    seed: int
    max_attempts: int = 10000
    imag_tol: float = 1e-6
    cond_cap: float = 1e12

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.rank_n < 1:
            raise ValueError("rank_n must be at least 1")
        if not 0 <= self.overcompleteness_k <= self.rank_n - 1:
            raise ValueError("overcompleteness_k must satisfy 0 <= k <= n - 1")
        if self.norm_bound_M <= 0:
            raise ValueError("norm_bound_M must be positive")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class DecompositionResult:
    """Accepted decomposition: columns of `components` are xi_i^{1/3} a~_i."""

    components: ComponentMatrix
    scales_xi: np.ndarray
    residual_frobenius: float
    attempts_used: int
    probes: dict = field(default_factory=dict)


def estimate_scales(tensor: SymTensor3, x, components: ComponentMatrix) -> np.ndarray:
    """Closed-form scale recovery from one slice.

    With b_i the columns of (A^+)^T, returns
    xi_i = T(x, b_i, b_i) / <x, a_i>, the minimizer of
    || A diag(xi_i <x, a_i>) A^T - T_x || for consistent slices.
    """
    x = np.asarray(x, dtype=np.float64)
    mat = components.matrix
    if components.dim != tensor.dim:
        raise ValueError(
            f"component dim {components.dim} does not match tensor dim {tensor.dim}"
        )
    if x.shape != (tensor.dim,):
        raise ValueError(f"probe length {x.size} does not match dim {tensor.dim}")
    norms = np.linalg.norm(mat, axis=0)
    if np.any(np.abs(norms - 1.0) > 1e-6):
        raise ValueError("component columns must have unit norm")

    s = np.linalg.svd(mat, compute_uv=False)
    if s[0] == 0.0 or s[-1] <= max(mat.shape) * _EPS * s[0]:
        raise RankDeficientComponents(
            "component matrix is rank deficient at pseudoinverse tolerance"
        )
    dots = mat.T @ x
    if np.any(np.abs(dots) < 1e-12):
        raise ProbeDegenerate("probe nearly orthogonal to a component")

    duals = pseudoinverse(mat).T
    t_x = contract(tensor, x)
    quad = np.einsum("ji,jk,ki->i", duals, t_x, duals)
    return quad / dots


def _unit_probe(rng, dim):
    while True:
        z = rng.standard_normal(dim)
        norm = np.linalg.norm(z)
        if norm > 1e-12:
            return z / norm


def _attempt(tensor: SymTensor3, cfg: DecompositionConfig, attempt_index: int):
    """One full pass of the search loop; raises retryable errors."""
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=int(cfg.seed), spawn_key=(attempt_index,))
    )
    r = cfg.rank_n - cfg.overcompleteness_k
    k = cfg.overcompleteness_k

    x = _unit_probe(rng, tensor.dim)
    y = _unit_probe(rng, tensor.dim)
    first = diagonalize(
        contract(tensor, x),
        contract(tensor, y),
        JennrichConfig(rank=r, imag_tol=cfg.imag_tol, cond_cap=cfg.cond_cap),
    )
    xi_first = estimate_scales(tensor, x, first)

    if k == 0:
        directions = first
        xi = xi_first
        probes = {"x": x, "y": y, "x_prime": None, "y_prime": None}
    else:
        residual = deflate(tensor, first, xi_first)
        x2 = _unit_probe(rng, tensor.dim)
        y2 = _unit_probe(rng, tensor.dim)
        second = diagonalize(
            contract(residual, x2),
            contract(residual, y2),
            JennrichConfig(rank=k, imag_tol=cfg.imag_tol, cond_cap=cfg.cond_cap),
        )
        xi_second = estimate_scales(residual, x2, second)
        directions = ComponentMatrix(np.hstack([first.matrix, second.matrix]))
        xi = np.concatenate([xi_first, xi_second])
        probes = {"x": x, "y": y, "x_prime": x2, "y_prime": y2}

    reconstructed = from_components(directions, xi)
    resid = frobenius_distance(reconstructed, tensor)
    return directions, xi, resid, probes


def decompose(tensor: SymTensor3, cfg: DecompositionConfig, threads: int = 1,
              accept_extra=None) -> DecompositionResult:
    """Run the randomized search until acceptance or cfg.max_attempts.

    Acceptance requires residual <= cfg.epsilon and
    max_i |xi_i|^{1/3} <= 2 * cfg.norm_bound_M. Attempts depend only on
    (tensor, cfg, attempt index), so results are seed-deterministic and
    independent of `threads`; the accepted attempt is always the
    smallest-index one that satisfies both predicates.

    accept_extra, if given, is an additional deterministic predicate
    (directions, xi) -> bool that a candidate must pass; callers with
    application-side constraints (for example sign or weight bounds)
    use it to reject spurious alternative decompositions and keep
    searching.
    """
    if cfg.rank_n - cfg.overcompleteness_k > tensor.dim:
        raise ValueError(
            f"rank r = n - k = {cfg.rank_n - cfg.overcompleteness_k} "
            f"exceeds tensor dimension {tensor.dim}"
        )
    threads = max(1, int(threads))
    scale_cap = 2.0 * cfg.norm_bound_M

    failure_counts: dict[str, int] = {}
    best_resid = None
    best_bound = None

    def evaluate(index):
        try:
            return _attempt(tensor, cfg, index)
        except _RETRYABLE as exc:
            return exc

    def finish(index, outcome):
        directions, xi, resid, probes = outcome
        return DecompositionResult(
            components=ComponentMatrix(directions.matrix * np.cbrt(xi)[None, :]),
            scales_xi=xi,
            residual_frobenius=resid,
            attempts_used=index + 1,
            probes=probes,
        )

    def consider(outcome):
        nonlocal best_resid, best_bound
        if isinstance(outcome, Exception):
            name = type(outcome).__name__
            failure_counts[name] = failure_counts.get(name, 0) + 1
            return False
        directions, xi, resid, _ = outcome
        bound = float(np.max(np.cbrt(np.abs(xi))))
        if best_resid is None or resid < best_resid:
            best_resid = resid
            best_bound = bound
        if not (resid <= cfg.epsilon and bound <= scale_cap):
            return False
        if accept_extra is not None and not accept_extra(directions, xi):
            failure_counts["ValidatorRejected"] = (
                failure_counts.get("ValidatorRejected", 0) + 1
            )
            return False
        return True

    if threads == 1:
        for index in range(cfg.max_attempts):
            outcome = evaluate(index)
            if consider(outcome):
                return finish(index, outcome)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for start in range(0, cfg.max_attempts, threads):
                block = range(start, min(start + threads, cfg.max_attempts))
                outcomes = list(pool.map(evaluate, block))
                accepted = [
                    (i, o) for i, o in zip(block, outcomes) if consider(o)
                ]
                if accepted:
                    index, outcome = accepted[0]
                    return finish(index, outcome)

    raise AttemptsExhausted(
        f"no acceptable decomposition within {cfg.max_attempts} attempts "
        f"(best residual {best_resid!r}, epsilon {cfg.epsilon})",
        attempts=cfg.max_attempts,
        best_residual=best_resid,
        best_scale_bound=best_bound,
        failure_counts=failure_counts,
    )
