"""The box-adding incidence matrix R(n,d), the teleportation and estimation
matrices it factorizes, their dominant eigenpairs, and the protocol
conversions between the two parametrizations.

Matrix entries are kept as exact integers (scaled by d^2) alongside the float
form, so the factorization identities are testable without tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from math import factorial
from typing import Sequence

import numpy as np

from .young import DiagramIndex, YoungDiagram, add_box, enumerate_diagrams, mult, remove_box

KIND_PBT = "pbt"
KIND_EST = "est"


class EigensolverError(RuntimeError):
    """Power iteration failed to reach the requested residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class RMatrix:
    """0/1 incidence matrix of the depth-bounded box-adding relation, stored
    sparsely as row-position lists per column."""

    n: int
    d: int
    rows: DiagramIndex
    cols: DiagramIndex
    col_lists: tuple[tuple[int, ...], ...]

    def dense(self) -> np.ndarray:
        out = np.zeros((len(self.rows), len(self.cols)), dtype=np.int64)
        for c, rows in enumerate(self.col_lists):
            for r in rows:
                out[r, c] = 1
        return out


def build_R(n: int, d: int) -> RMatrix:
    if n < 0 or d < 1:
        raise ValueError("need n >= 0 and d >= 1")
    rows = enumerate_diagrams(n, d)
    cols = enumerate_diagrams(n + 1, d)
    col_lists = tuple(
        tuple(sorted(rows.position(alpha) for alpha in remove_box(mu)))
        for mu in cols
    )
    return RMatrix(n, d, rows, cols, col_lists)


@dataclass(frozen=True)
class FidelityMatrix:
    """Symmetric nonnegative matrix whose top eigenvalue is the optimal
    fidelity; entries are integer multiples of 1/d^2."""

    kind: str
    index: DiagramIndex
    d: int
    int_entries: np.ndarray

    @property
    def values(self) -> np.ndarray:
        return self.int_entries / float(self.d ** 2)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.index.n,
            "d": self.d,
            "denominator": self.d ** 2,
            "index": [a.to_list() for a in self.index],
            "entries": self.int_entries.tolist(),
        }


def build_M_pbt(N: int, d: int) -> FidelityMatrix:
    """Entries count shared one-box-removed diagrams between port labels."""
    if N < 1 or d < 2:
        raise ValueError("need N >= 1 and d >= 2")
    index = enumerate_diagrams(N, d)
    sets = [frozenset(remove_box(mu)) for mu in index]
    k = len(index)
    ints = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(i, k):
            ints[i, j] = ints[j, i] = len(sets[i] & sets[j])
    return FidelityMatrix(KIND_PBT, index, d, ints)


def build_M_est(n: int, d: int) -> FidelityMatrix:
    """Entries count shared depth-bounded one-box-added diagrams."""
    if n < 0 or d < 2:
        raise ValueError("need n >= 0 and d >= 2")
    index = enumerate_diagrams(n, d)
    sets = [frozenset(add_box(alpha, d)) for alpha in index]
    k = len(index)
    ints = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(i, k):
            ints[i, j] = ints[j, i] = len(sets[i] & sets[j])
    return FidelityMatrix(KIND_EST, index, d, ints)


@dataclass(frozen=True)
class CoefficientVector:
    """Nonnegative unit vector over a diagram index; parametrizes either the
    teleportation resource (role "w") or the estimation probe (role "v")."""

    role: str
    index: DiagramIndex
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if self.role not in ("w", "v"):
            raise ValueError(f"role must be 'w' or 'v', got {self.role!r}")
        if vals.shape != (len(self.index),):
            raise ValueError(f"vector length {vals.shape} does not match index size {len(self.index)}")
        if vals.min(initial=0.0) < -1e-12:
            raise ValueError(f"negative coefficient {vals.min():.3e}")
        nrm = float(np.linalg.norm(vals))
        if abs(nrm - 1.0) > 1e-9:
            raise ValueError(f"coefficient vector norm {nrm} is not 1")

    def to_json_dict(self) -> dict:
        return {
            "role": self.role,
            "n": self.index.n,
            "d": self.index.d,
            "index": [a.to_list() for a in self.index],
            "values": self.values.tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CoefficientVector":
        index = enumerate_diagrams(int(data["n"]), int(data["d"]))
        given = [YoungDiagram(tuple(rows)) for rows in data["index"]]
        if list(index) != given:
            raise ValueError("serialized index does not match the canonical order")
        return cls(data["role"], index, np.asarray(data["values"], dtype=float))


def unit_vector(role: str, index: DiagramIndex, values) -> CoefficientVector:
    """Clamp tiny negatives and normalize, then wrap."""
    vals = np.asarray(values, dtype=float)
    if vals.min(initial=0.0) < -1e-12:
        raise ValueError(f"negative coefficient {vals.min():.3e}")
    vals = np.maximum(vals, 0.0)
    nrm = float(np.linalg.norm(vals))
    if nrm == 0.0:
        raise ValueError("zero coefficient vector")
    return CoefficientVector(role, index, vals / nrm)


@dataclass(frozen=True)
class SpectralResult:
    eigenvalue: float
    vector: CoefficientVector
    iterations: int
    residual: float

    def to_json_dict(self) -> dict:
        return {
            "eigenvalue": self.eigenvalue,
            "vector": self.vector.values.tolist(),
            "iterations": self.iterations,
            "residual": self.residual,
        }


DENSE_FALLBACK_SIZE = 64


def max_eig(M: FidelityMatrix, tol: float = 1e-12, max_iter: int = 10 ** 6) -> SpectralResult:
    """Largest eigenvalue and unit Perron vector of a fidelity matrix.

    Deterministic symmetric power iteration from the all-ones vector (a valid
    start: the matrix is nonnegative with positive diagonal); residual test
    on ||Mx - lambda x||.  Falls back to a dense symmetric eigendecomposition
    for small matrices if the iteration stalls.
    """
    a = M.values
    k = a.shape[0]
    role = "w" if M.kind == KIND_PBT else "v"
    x = np.full(k, 1.0 / math.sqrt(k))
    z = a @ x
    lam = 0.0
    residual = math.inf
    for it in range(max_iter):
        lam = float(x @ z)
        residual = float(np.linalg.norm(z - lam * x))
        if residual <= tol:
            vec = unit_vector(role, M.index, x)
            return SpectralResult(lam, vec, it, residual)
        nrm = float(np.linalg.norm(z))
        if nrm == 0.0:
            break
        x = z / nrm
        z = a @ x
    if k <= DENSE_FALLBACK_SIZE:
        vals, vecs = np.linalg.eigh(a)
        lam = float(vals[-1])
        v = vecs[:, -1]
        if v.sum() < 0:
            v = -v
        residual = float(np.linalg.norm(a @ v - lam * v))
        vec = unit_vector(role, M.index, np.maximum(v, 0.0))
        return SpectralResult(lam, vec, max_iter, residual)
    raise EigensolverError(
        f"power iteration did not reach tol={tol} in {max_iter} iterations "
        f"(last residual {residual:.3e})", residual)


def _check_index(vec: CoefficientVector, n: int, d: int, what: str):
    if vec.index.n != n or vec.index.d != d:
        raise ValueError(
            f"{what} is indexed by (n={vec.index.n}, d={vec.index.d}), expected (n={n}, d={d})")


def fidelity_pbt(w: CoefficientVector, N: int, d: int) -> float:
    """Teleportation fidelity of the covariant protocol with coefficients w."""
    _check_index(w, N, d, "w")
    m = build_M_pbt(N, d).values
    return float(w.values @ m @ w.values)


def fidelity_est(v: CoefficientVector, n: int, d: int) -> float:
    """Estimation fidelity of the covariant probe with coefficients v."""
    _check_index(v, n, d, "v")
    m = build_M_est(n, d).values
    return float(v.values @ m @ v.values)


def w_to_v(w: CoefficientVector, n: int, d: int) -> CoefficientVector:
    """Convert a teleportation resource over n+1 boxes into an estimation
    probe over n boxes; the fidelity never decreases."""
    _check_index(w, n + 1, d, "w")
    r = build_R(n, d).dense().astype(float)
    return unit_vector("v", enumerate_diagrams(n, d), r @ w.values)


def v_to_w(v: CoefficientVector, n: int, d: int) -> CoefficientVector:
    """Convert an estimation probe over n boxes into a teleportation resource
    over n+1 boxes; the fidelity never decreases."""
    _check_index(v, n, d, "v")
    r = build_R(n, d).dense().astype(float)
    return unit_vector("w", enumerate_diagrams(n + 1, d), r.T @ v.values)


def optimal_vectors_small(n: int, d: int) -> tuple[CoefficientVector, CoefficientVector, float]:
    """The closed-form optimum for n <= d-1: coefficients proportional to the
    tableau counts, fidelity (n+1)/d^2."""
    if not 0 <= n <= d - 1:
        raise ValueError(f"closed form requires 0 <= n <= d-1, got n={n}, d={d}")
    idx_w = enumerate_diagrams(n + 1, d)
    idx_v = enumerate_diagrams(n, d)
    w_vals = np.array([mult(mu) for mu in idx_w], dtype=float) / math.sqrt(factorial(n + 1))
    v_vals = np.array([mult(alpha) for alpha in idx_v], dtype=float) / math.sqrt(factorial(n))
    w = CoefficientVector("w", idx_w, w_vals)
    v = CoefficientVector("v", idx_v, v_vals)
    return w, v, (n + 1) / d ** 2


@dataclass(frozen=True)
class ScalingRow:
    N: int
    fidelity: float
    scaled_gap: float


def scaling_table(d: int, N_list: Sequence[int], tol: float = 1e-12) -> list[ScalingRow]:
    """Fidelity and rescaled gap N^2 (1-F) for each port count."""
    out = []
    for N in N_list:
        if N < 2:
            raise ValueError("scaling table needs N >= 2")
        res = max_eig(build_M_pbt(N, d), tol=tol)
        out.append(ScalingRow(N, res.eigenvalue, N ** 2 * (1.0 - res.eigenvalue)))
    return out


def matrix_to_csv(M: FidelityMatrix) -> str:
    """CSV form: header row of serialized diagrams, exact integer entries."""
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(M.index.labels())
    for row in M.int_entries:
        writer.writerow([int(x) for x in row])
    return buf.getvalue()


def matrix_to_json(M: FidelityMatrix) -> str:
    return json.dumps(M.to_json_dict())
