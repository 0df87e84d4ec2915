"""Dense symmetric order-3 tensors and component matrices.

The tensor type stores the full d x d x d array. Construction always
symmetrizes: entries are averaged over the six index permutations and
then gathered from the sorted index triple, so reads are bit-identical
under any permutation of the indices.
"""

from __future__ import annotations

import json
from functools import lru_cache

import numpy as np

from .exceptions import FileFormatError

_TRANSPOSES = ((0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


@lru_cache(maxsize=64)
def _sorted_index_triples(dim):
    r = np.arange(dim)
    grids = np.meshgrid(r, r, r, indexing="ij")
    idx = np.stack([g.reshape(-1) for g in grids], axis=0)
    s = np.sort(idx, axis=0)
    return s[0], s[1], s[2]


def _is_bitwise_symmetric(arr):
    # The transpositions (1,0,2) and (0,2,1) generate all six permutations.
    return np.array_equal(arr, arr.transpose(1, 0, 2)) and np.array_equal(
        arr, arr.transpose(0, 2, 1)
    )


class SymTensor3:
    """Fully symmetric order-3 tensor over R^d with dense storage."""

    __slots__ = ("dim", "array")

    def __init__(self, values):
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim == 1:
            d = round(arr.size ** (1.0 / 3.0))
            if d**3 != arr.size:
                raise ValueError(f"flat tensor length {arr.size} is not a cube")
            arr = arr.reshape(d, d, d)
        if arr.ndim != 3 or len(set(arr.shape)) != 1:
            raise ValueError(f"expected a cube-shaped array, got shape {arr.shape}")
        if arr.shape[0] == 0:
            raise ValueError("tensor dimension must be positive")
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        d = arr.shape[0]
        if _is_bitwise_symmetric(arr):
            sym = arr.copy()
        else:
            acc = arr.copy()
            for perm in _TRANSPOSES:
                acc += arr.transpose(perm)
            avg = acc / 6.0
            i, j, k = _sorted_index_triples(d)
            sym = avg[i, j, k].reshape(d, d, d)
        sym.flags.writeable = False
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "array", sym)

    def __setattr__(self, name, value):
        raise AttributeError("SymTensor3 is immutable")

    @property
    def entries(self):
        """Flat row-major (i, j, k) view of the entries."""
        return self.array.reshape(-1)

    def frobenius_norm(self):
        return float(np.sqrt(np.sum(self.array * self.array)))

    def __repr__(self):
        return f"SymTensor3(dim={self.dim})"


class ComponentMatrix:
    """A d x n matrix whose columns are component vectors."""

    __slots__ = ("dim", "count", "matrix")

    def __init__(self, matrix):
        mat = np.asarray(matrix, dtype=np.float64)
        if mat.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {mat.shape}")
        if mat.shape[0] == 0:
            raise ValueError("component dimension must be positive")
        if not np.all(np.isfinite(mat)):
            raise ValueError("component entries must be finite")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "dim", mat.shape[0])
        object.__setattr__(self, "count", mat.shape[1])
        object.__setattr__(self, "matrix", mat)

    def __setattr__(self, name, value):
        raise AttributeError("ComponentMatrix is immutable")

    @classmethod
    def from_columns(cls, columns):
        return cls(np.column_stack([np.asarray(c, dtype=np.float64) for c in columns]))

    @property
    def columns(self):
        """Alias for the stored d x n matrix."""
        return self.matrix

    def column(self, i):
        return self.matrix[:, i]

    def column_norms(self):
        return np.linalg.norm(self.matrix, axis=0)

    def unit_normalized(self):
        norms = self.column_norms()
        if np.any(norms == 0.0):
            raise ValueError("cannot normalize a zero column")
        return ComponentMatrix(self.matrix / norms[None, :])

    def __repr__(self):
        return f"ComponentMatrix(dim={self.dim}, count={self.count})"


def from_components(components: ComponentMatrix, scales=None) -> SymTensor3:
    """Sum of scaled symmetric rank-1 tensors, sum_i s_i a_i (x) a_i (x) a_i."""
    mat = components.matrix
    n = components.count
    if scales is None:
        scales = np.ones(n)
    scales = np.asarray(scales, dtype=np.float64)
    if scales.shape != (n,):
        raise ValueError(
            f"scales has length {scales.size}, expected {n} (one per component)"
        )
    if n == 0:
        d = components.dim
        return SymTensor3(np.zeros((d, d, d)))
    arr = np.einsum("il,jl,kl,l->ijk", mat, mat, mat, scales, optimize=True)
    return SymTensor3(arr)


def contract(tensor: SymTensor3, x) -> np.ndarray:
    """Contract the first index against x: (T_x)_{jk} = sum_i T_{ijk} x_i."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (tensor.dim,):
        raise ValueError(f"vector length {x.size} does not match dim {tensor.dim}")
    return np.einsum("ijk,i->jk", tensor.array, x)


def trilinear(tensor: SymTensor3, x, u, v) -> float:
    """Evaluate T(x, u, v) = sum_{ijk} T_{ijk} x_i u_j v_k."""
    d = tensor.dim
    x = np.asarray(x, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    for vec in (x, u, v):
        if vec.shape != (d,):
            raise ValueError(f"vector length {vec.size} does not match dim {d}")
    return float(np.einsum("ijk,i,j,k->", tensor.array, x, u, v))


def frobenius_distance(t: SymTensor3, s: SymTensor3) -> float:
    """Frobenius norm of the entrywise difference."""
    if t.dim != s.dim:
        raise ValueError(f"tensor dims differ: {t.dim} vs {s.dim}")
    diff = t.array - s.array
    return float(np.sqrt(np.sum(diff * diff)))


def deflate(tensor: SymTensor3, components: ComponentMatrix, scales) -> SymTensor3:
    """Subtract the scaled rank-1 terms: T - sum_i s_i a_i^(x)3."""
    if components.dim != tensor.dim:
        raise ValueError(
            f"component dim {components.dim} does not match tensor dim {tensor.dim}"
        )
    if components.count == 0:
        return tensor
    removed = from_components(components, scales)
    return SymTensor3(tensor.array - removed.array)


# ---------------------------------------------------------------------------
# File formats.
#
# Tensor file:    {"dim": d, "entries": [d^3 reals, row-major (i, j, k)]}
# Component file: {"dim": d, "count": n, "columns": [[...], ...]}
# ---------------------------------------------------------------------------


def tensor_to_dict(tensor: SymTensor3) -> dict:
    return {"dim": tensor.dim, "entries": [float(v) for v in tensor.entries]}


def tensor_from_dict(obj) -> SymTensor3:
    try:
        d = int(obj["dim"])
        entries = np.asarray(obj["entries"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"malformed tensor object: {exc}") from exc
    if d <= 0 or entries.shape != (d**3,):
        raise FileFormatError(
            f"tensor entries length {entries.size} does not match dim {d}"
        )
    if not np.all(np.isfinite(entries)):
        raise FileFormatError("tensor entries must be finite")
    return SymTensor3(entries)


def write_tensor_json(tensor: SymTensor3, path):
    with open(path, "w") as fh:
        json.dump(tensor_to_dict(tensor), fh, sort_keys=True)
        fh.write("\n")


def read_tensor_json(path) -> SymTensor3:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot read tensor file {path}: {exc}") from exc
    return tensor_from_dict(obj)


def components_to_dict(components: ComponentMatrix) -> dict:
    return {
        "dim": components.dim,
        "count": components.count,
        "columns": [[float(v) for v in components.column(i)]
                    for i in range(components.count)],
    }


def components_from_dict(obj) -> ComponentMatrix:
    try:
        d = int(obj["dim"])
        n = int(obj["count"])
        cols = [np.asarray(c, dtype=np.float64) for c in obj["columns"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"malformed component object: {exc}") from exc
    if d <= 0 or len(cols) != n or any(c.shape != (d,) for c in cols):
        raise FileFormatError("component columns do not match dim/count")
    mat = np.column_stack(cols) if n else np.zeros((d, 0))
    if not np.all(np.isfinite(mat)):
        raise FileFormatError("component entries must be finite")
    return ComponentMatrix(mat)


def write_components_json(components: ComponentMatrix, path):
    with open(path, "w") as fh:
        json.dump(components_to_dict(components), fh, sort_keys=True)
        fh.write("\n")


def read_components_json(path) -> ComponentMatrix:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot read component file {path}: {exc}") from exc
    return components_from_dict(obj)
