"""Dense tensor-register plumbing: embedding local operators, reordering
factors, and partial traces.  All functions take explicit factor dimension
lists; nothing here knows about diagrams or protocols."""

from __future__ import annotations

import math

import numpy as np


def _dim(dims) -> int:
    return math.prod(dims)


def reorder_factors(mat: np.ndarray, dims, new_order) -> np.ndarray:
    """Reorder the tensor factors of a square matrix.

    ``new_order[s]`` is the current position of the factor that ends up in
    slot ``s`` of the result.
    """
    k = len(dims)
    new_order = list(new_order)
    if sorted(new_order) != list(range(k)):
        raise ValueError(f"not a factor permutation: {new_order}")
    t = mat.reshape(*dims, *dims)
    perm = new_order + [k + p for p in new_order]
    new_dims = [dims[p] for p in new_order]
    d = _dim(dims)
    return t.transpose(perm).reshape(d, d), new_dims


def reorder_vector(vec: np.ndarray, dims, new_order) -> np.ndarray:
    new_order = list(new_order)
    return vec.reshape(dims).transpose(new_order).reshape(-1)


def embed_operator(op: np.ndarray, positions, dims) -> np.ndarray:
    """Extend an operator acting on the listed factor positions (in that
    order) by the identity on all remaining factors."""
    positions = list(positions)
    k = len(dims)
    rest = [p for p in range(k) if p not in positions]
    expected = _dim(dims[p] for p in positions)
    if op.shape != (expected, expected):
        raise ValueError(f"operator shape {op.shape} does not match factors {positions}")
    full = np.kron(op, np.eye(_dim(dims[p] for p in rest), dtype=op.dtype))
    cur = positions + rest
    cur_dims = [dims[p] for p in cur]
    out, _ = reorder_factors(full, cur_dims, [cur.index(s) for s in range(k)])
    return out


def partial_trace(mat: np.ndarray, dims, drop) -> np.ndarray:
    """Trace out the listed factors; remaining factors keep their order."""
    drop = sorted(set(drop))
    k = len(dims)
    keep = [p for p in range(k) if p not in drop]
    t = mat.reshape(*dims, *dims)
    perm = keep + drop + [k + p for p in keep] + [k + p for p in drop]
    dk = _dim(dims[p] for p in keep)
    dd = _dim(dims[p] for p in drop)
    t = t.transpose(perm).reshape(dk, dd, dk, dd)
    return np.einsum("abcb->ac", t)


def psd_sqrt(mat: np.ndarray, cutoff_rel: float = 1e-12) -> np.ndarray:
    """Hermitian square root of a PSD matrix, zeroing eigenvalues below
    ``cutoff_rel`` times the largest."""
    vals, vecs = np.linalg.eigh((mat + mat.conj().T) / 2)
    top = max(vals.max(), 0.0)
    vals = np.where(vals > cutoff_rel * top, vals, 0.0)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def psd_inv_sqrt(mat: np.ndarray, cutoff_rel: float = 1e-12):
    """Pseudo-inverse square root on the numerically detected support.

    Returns the inverse root and the projector onto the support.
    """
    vals, vecs = np.linalg.eigh((mat + mat.conj().T) / 2)
    top = max(vals.max(), 0.0)
    on = vals > cutoff_rel * top
    inv = np.zeros_like(vals)
    inv[on] = 1.0 / np.sqrt(vals[on])
    root = (vecs * inv) @ vecs.conj().T
    support = (vecs * on.astype(float)) @ vecs.conj().T
    return root, support
