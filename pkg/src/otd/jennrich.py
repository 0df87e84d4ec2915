"""Simultaneous diagonalization of two matrix slices (Jennrich's algorithm).

Given two d x d slices that share the column structure
M_mu = A diag(mu) A^T, M_lambda = A diag(lambda) A^T, recover the r
directions spanned by the columns of A:

1. W = top-r left singular vectors of M_mu,
2. M = (W^T M_mu W) (W^T M_lambda W)^{-1},
3. eigendecompose M = P Lambda P^{-1},
4. return the columns of W P, unit-normalized with a deterministic sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ComplexSpectrum, SingularPencil
from .linalg import eig_nonsymmetric, svd
from .tensor import ComponentMatrix


@dataclass(frozen=True)
class JennrichConfig:
    rank: int
    imag_tol: float = 1e-6
    cond_cap: float = 1e12

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        if self.imag_tol < 0:
            raise ValueError("imag_tol must be nonnegative")
        if self.cond_cap <= 0:
            raise ValueError("cond_cap must be positive")


def diagonalize(m_mu, m_lambda, cfg: JennrichConfig) -> ComponentMatrix:
    """Recover cfg.rank unit directions from two slices.

    Raises
    ------
    SingularPencil
        if the projected second slice is not invertible at cfg.cond_cap.
    ComplexSpectrum
        if the ratio matrix has eigenvalues with a relative imaginary
        part above cfg.imag_tol (a bad probe; retry with new slices).
    """
    a = np.asarray(m_mu, dtype=np.float64)
    b = np.asarray(m_lambda, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"slices must be square and same shape, got {a.shape} and {b.shape}")
    d = a.shape[0]
    r = cfg.rank
    if r > d:
        raise ValueError(f"rank {r} exceeds dimension {d}")

    w = svd(a).left_vectors[:, :r]
    p_mu = w.T @ a @ w
    p_lam = w.T @ b @ w

    sv = np.linalg.svd(p_lam, compute_uv=False)
    if sv[-1] == 0.0 or sv[0] / sv[-1] > cfg.cond_cap:
        raise SingularPencil(
            f"projected pencil condition exceeds cap {cfg.cond_cap:.3g}"
        )
    ratio = np.linalg.solve(p_lam.T, p_mu.T).T

    pairs = eig_nonsymmetric(ratio)
    lam = pairs.eigenvalues
    scale = float(np.max(np.abs(lam)))
    if scale == 0.0:
        raise SingularPencil("ratio matrix has zero spectrum")
    if float(np.max(np.abs(lam.imag))) > cfg.imag_tol * scale:
        raise ComplexSpectrum(
            "eigenvalues have significant imaginary parts; retry with new probes"
        )

    order = np.argsort(-lam.real, kind="stable")
    vecs = np.real(pairs.eigenvectors)[:, order]
    out = w @ vecs
    norms = np.linalg.norm(out, axis=0)
    if np.any(norms < 1e-8):
        raise ComplexSpectrum("an eigenvector collapsed to zero after real projection")
    out = out / norms[None, :]
    for j in range(r):
        col = out[:, j]
        nz = np.nonzero(col)[0]
        if nz.size and col[nz[0]] < 0:
            out[:, j] = -col
    return ComponentMatrix(out)
