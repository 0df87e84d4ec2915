"""Unbiased third-cumulant estimation (k-statistics) and moment helpers.

k3_naive evaluates the pattern-coefficient triple sum over all ordered
sample index triples; it exists as the brute-force oracle. k3_fast is
the algebraically equivalent one-pass form over centered samples and is
the production path. Their agreement is verified by test, not assumed.
"""

from __future__ import annotations

import json

import numpy as np

from .exceptions import FileFormatError
from .tensor import SymTensor3

_CHUNK = 65536


class SampleSet:
    """N samples of a d-dimensional random vector, one per row."""

    __slots__ = ("count", "dim", "rows")

    def __init__(self, rows):
        arr = np.asarray(rows, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d array of rows, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("sample set must have at least one row and one column")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample entries must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "count", arr.shape[0])
        object.__setattr__(self, "dim", arr.shape[1])
        object.__setattr__(self, "rows", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SampleSet is immutable")

    def __repr__(self):
        return f"SampleSet(count={self.count}, dim={self.dim})"


def sample_mean(samples: SampleSet) -> np.ndarray:
    return samples.rows.mean(axis=0)


def center(samples: SampleSet) -> SampleSet:
    """Translate every row by the sample mean."""
    return SampleSet(samples.rows - sample_mean(samples)[None, :])


def k3_naive(samples: SampleSet) -> SymTensor3:
    """Triple-sum form of the third k-statistic (oracle scale, N <= 40).

    k3(r,s,t) = (1/N) sum_{i,j,k} phi^(ijk) (x_i)_r (x_j)_s (x_k)_t with
    permutation-invariant coefficients phi^(iii) = 1, phi^(iij) = -1/(N-1),
    phi^(ijk) = 2/((N-1)(N-2)) for distinct indices.
    """
    n = samples.count
    if n < 3:
        raise ValueError("third k-statistics require at least 3 samples")
    if n > 40:
        raise ValueError("k3_naive is the O(N^3) oracle; use k3_fast for N > 40")
    idx = np.arange(n)
    i = idx[:, None, None]
    j = idx[None, :, None]
    k = idx[None, None, :]
    phi = np.full((n, n, n), 2.0 / ((n - 1) * (n - 2)))
    some_equal = (i == j) | (j == k) | (i == k)
    all_equal = (i == j) & (j == k)
    phi[some_equal] = -1.0 / (n - 1)
    phi[all_equal] = 1.0
    x = samples.rows
    arr = np.einsum("abc,ar,bs,ct->rst", phi, x, x, x, optimize=True) / n
    return SymTensor3(arr)


def k3_fast(samples: SampleSet) -> SymTensor3:
    """One-pass third k-statistic: N/((N-1)(N-2)) * sum_j (x_j - mean)^(x)3."""
    n = samples.count
    if n < 3:
        raise ValueError("third k-statistics require at least 3 samples")
    d = samples.dim
    centered = samples.rows - samples.rows.mean(axis=0)[None, :]
    acc = np.zeros((d, d, d))
    for start in range(0, n, _CHUNK):
        block = centered[start:start + _CHUNK]
        acc += np.einsum("ni,nj,nk->ijk", block, block, block, optimize=True)
    arr = acc * (n / ((n - 1.0) * (n - 2.0)))
    return SymTensor3(arr)


def second_moment(samples: SampleSet) -> np.ndarray:
    """(1/N) sum_j x_j x_j^T, returned exactly symmetric."""
    raw = samples.rows.T @ samples.rows / samples.count
    return (raw + raw.T) / 2.0


# ---------------------------------------------------------------------------
# Sample file formats.
#
# CSV: one row per sample, d comma-separated columns, optional header.
# JSON: {"dim": d, "rows": [[...], ...]}
# ---------------------------------------------------------------------------


def write_samples_csv(samples: SampleSet, path):
    np.savetxt(path, samples.rows, fmt="%.17g", delimiter=",")


def read_samples_csv(path) -> SampleSet:
    try:
        with open(path) as fh:
            first = fh.readline()
            if not first.strip():
                raise FileFormatError(f"sample file {path} is empty")
            skip = 0
            try:
                [float(tok) for tok in first.strip().split(",")]
            except ValueError:
                skip = 1
        rows = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    except OSError as exc:
        raise FileFormatError(f"cannot read sample file {path}: {exc}") from exc
    except ValueError as exc:
        raise FileFormatError(f"malformed sample file {path}: {exc}") from exc
    return SampleSet(rows)


def write_samples_json(samples: SampleSet, path):
    obj = {"dim": samples.dim,
           "rows": [[float(v) for v in row] for row in samples.rows]}
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True)
        fh.write("\n")


def read_samples_json(path) -> SampleSet:
    try:
        with open(path) as fh:
            obj = json.load(fh)
        d = int(obj["dim"])
        rows = np.asarray(obj["rows"], dtype=np.float64)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"cannot read sample file {path}: {exc}") from exc
    if rows.ndim != 2 or rows.shape[1] != d:
        raise FileFormatError(f"sample rows do not match dim {d}")
    return SampleSet(rows)
