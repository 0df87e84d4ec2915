"""Dense decomposition contracts used by the decomposition algorithms.

Thin wrappers over LAPACK (via numpy) that pin down the conventions the
rest of the package relies on: full SVD with nonincreasing singular
values, eigenpairs with unit eigenvectors under a deterministic sign
convention, and pseudoinverse with an explicit rank cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import EigNonConvergence, SvdNonConvergence

_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class SvdResult:
    """Full SVD M = U diag(s) V^T with orthonormal U, V columns."""

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    def reconstruct(self):
        u, s, v = self.left_vectors, self.singular_values, self.right_vectors
        k = s.size
        return (u[:, :k] * s) @ v[:, :k].T


@dataclass(frozen=True)
class EigResult:
    """Eigenpairs of a (possibly nonsymmetric) real matrix.

    Eigenvectors are columns, unit 2-norm, rotated so the first nonzero
    entry is real and positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _canonical_phase(vectors):
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        lead = col[nz[0]]
        if np.iscomplexobj(out):
            out[:, j] = col * (np.conj(lead) / abs(lead))
        elif lead < 0:
            out[:, j] = -col
        out[:, j] /= np.linalg.norm(out[:, j])
    return out


def svd(matrix) -> SvdResult:
    """Full singular value decomposition of a real matrix."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise SvdNonConvergence(str(exc)) from exc
    return SvdResult(left_vectors=u, singular_values=s, right_vectors=vh.T)


def eig_nonsymmetric(matrix) -> EigResult:
    """Eigendecomposition of a real square matrix."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    try:
        values, vectors = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise EigNonConvergence(str(exc)) from exc
    return EigResult(eigenvalues=values, eigenvectors=_canonical_phase(vectors))


def pseudoinverse(matrix, rank_tol=None) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD.

    Singular values below rank_tol * sigma_1 are truncated. The default
    follows the usual numerical-rank convention max(m, n) * eps.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    if rank_tol is None:
        rank_tol = max(m.shape) * _EPS
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    try:
        return np.linalg.pinv(m, rcond=rank_tol)
    except np.linalg.LinAlgError as exc:
        raise SvdNonConvergence(str(exc)) from exc


def min_singular_pair(matrix):
    """Smallest singular value and an associated unit right singular vector."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    res = svd(m)
    sigma = float(res.singular_values[-1])
    vec = res.right_vectors[:, -1].copy()
    nz = np.nonzero(vec)[0]
    if nz.size and vec[nz[0]] < 0:
        vec = -vec
    return sigma, vec


def numerical_rank(matrix, rank_tol=None) -> int:
    """Number of singular values above rank_tol * sigma_1."""
    m = np.asarray(matrix, dtype=np.float64)
    if rank_tol is None:
        rank_tol = max(m.shape) * _EPS
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))
