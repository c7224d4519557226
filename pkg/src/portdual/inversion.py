"""Dual certification of the unitary-inversion fidelity bound: build the
performance operator and the explicit dual witness, verify the semidefinite
feasibility conditions at small sizes, and check the underlying combinatorial
coefficient identity.

Register layout is fixed everywhere as P, I_1..I_n, O_1..O_n, F (the global
past, the call inputs, the call outputs, the global future); constructions
that arise in a different factor order are permuted into this layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._tensor import embed_operator, partial_trace, reorder_factors
from .repsym import DenseOperator, Permutation, _matrix_unit_block, irrep_matrix
from .young import add_box, dim_u, enumerate_diagrams, mult, remove_box, standard_tableaux

OPERATOR_CAP = 3 ** 6   # largest matrix side this module will densely build


class DimensionCapError(ValueError):
    """The requested witness exceeds the dense-operator cap."""


def _canonical_from_xy(mat: np.ndarray, n: int, d: int, has_future: bool) -> np.ndarray:
    """Permute factors from the build order (I_1..I_n [,F], O_1..O_n, P) into
    the canonical layout (P, I_1..I_n, O_1..O_n [,F])."""
    x = n + (1 if has_future else 0)
    total = x + n + 1
    dims = (d,) * total
    order = [total - 1] + list(range(n)) + list(range(x, x + n))
    if has_future:
        order.append(n)
    out, _ = reorder_factors(mat, dims, order)
    return out


def performance_operator(n: int, d: int) -> DenseOperator:
    """The Haar-averaged inversion performance operator on P, I^n, O^n, F.

    Built from the commutant matrix units on n+1 factors: the (I^n F) and
    (O^n P) copies of each unit are paired and weighted by the inverse
    unitary-irrep dimension.
    """
    if n < 0 or d < 2:
        raise ValueError("need n >= 0 and d >= 2")
    side = d ** (2 * n + 2)
    if side > OPERATOR_CAP:
        raise DimensionCapError(f"operator side {side} exceeds cap {OPERATOR_CAP}")
    acc = np.zeros((side, side))
    for mu in enumerate_diagrams(n + 1, d):
        block = _matrix_unit_block(mu, d)
        m = block.shape[0]
        coeff = 1.0 / dim_u(mu, d)
        for i in range(m):
            for j in range(m):
                acc += coeff * np.kron(block[i, j], block[i, j])
    acc /= d ** 2
    return DenseOperator(_canonical_from_xy(acc, n, d, has_future=True),
                         (d,) * (2 * n + 2))


def dual_W(n: int, d: int) -> DenseOperator:
    """The dual witness operator on P, I^n, O^n; defined for n <= d-1, where
    every one-box extension stays within depth d."""
    if not 0 <= n <= d - 1:
        raise ValueError(f"the witness requires 0 <= n <= d-1, got n={n}, d={d}")
    side = d ** (2 * n + 1)
    if side > OPERATOR_CAP:
        raise DimensionCapError(f"operator side {side} exceeds cap {OPERATOR_CAP}")
    acc = np.zeros((side, side))
    for alpha in enumerate_diagrams(n, d):
        m_a = mult(alpha)
        block_a = _matrix_unit_block(alpha, d)
        amap = standard_tableaux(alpha).addbox_map
        for mu in add_box(alpha):
            block_m = _matrix_unit_block(mu, d)
            idx = amap[mu]
            coeff = mult(mu) / (m_a * dim_u(mu, d))
            for a in range(m_a):
                for b in range(m_a):
                    acc += coeff * np.kron(block_a[a, b],
                                           block_m[idx[a] - 1, idx[b] - 1])
    acc /= n + 1
    return DenseOperator(_canonical_from_xy(acc, n, d, has_future=False),
                         (d,) * (2 * n + 1))


@dataclass(frozen=True)
class DualWitness:
    n: int
    d: int
    lam: float
    W: DenseOperator
    omega: DenseOperator


def dual_witness(n: int, d: int) -> DualWitness:
    return DualWitness(n, d, (n + 1) / d ** 2, dual_W(n, d), performance_operator(n, d))


@dataclass(frozen=True)
class FeasibilityReport:
    """Margins of the dual feasibility conditions; the verdict is true iff the
    witness is feasible at the requested tolerance."""

    n: int
    d: int
    bound: float
    tol: float
    psd_margin: float
    trace_gap: float
    ptrace_residuals: tuple[float, ...]
    verdict: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "bound": self.bound,
            "tol": self.tol,
            "psd_margin": self.psd_margin,
            "trace_gap": self.trace_gap,
            "ptrace_residuals": list(self.ptrace_residuals),
            "verdict": self.verdict,
        }


def check_dual_feasibility(n: int, d: int, tol: float = 1e-9) -> FeasibilityReport:
    """Verify the witness against all dual constraints: the semidefinite
    ordering against the performance operator, the per-slot partial-trace
    marginals (all slots, not just the symmetry-reduced one), and the trace
    normalization."""
    wit = dual_witness(n, d)
    w = wit.W.entries
    omega = wit.omega.entries

    diff = wit.lam * np.kron(w, np.eye(d)) - omega
    diff = (diff + diff.conj().T) / 2
    psd_margin = float(np.linalg.eigvalsh(diff)[0])

    trace_gap = abs(float(np.trace(w).real) - d ** n)

    dims = (d,) * (2 * n + 1)
    residuals = []
    for slot in range(1, n + 1):
        i_pos = slot
        o_pos = n + slot
        lhs = partial_trace(w, dims, [o_pos])
        small = partial_trace(w, dims, [i_pos, o_pos]) / d
        kept = [p for p in range(2 * n + 1) if p != o_pos]
        kept_dims = [d] * len(kept)
        rhs = embed_operator(small, [q for q, p in enumerate(kept) if p != i_pos],
                             kept_dims)
        residuals.append(float(np.linalg.norm(lhs - rhs)))

    verdict = (psd_margin >= -tol and trace_gap <= tol
               and all(r <= tol for r in residuals))
    return FeasibilityReport(n, d, wit.lam, tol, psd_margin, trace_gap,
                             tuple(residuals), verdict)


def coefficient_A(alpha, beta, a: int, b: int, c: int, e: int,
                  n: int, d: int) -> tuple[float, float]:
    """Both sides of the transposition-coefficient identity.

    The left side contracts the swap (n, n+1) irrep matrices over the shared
    one-box extensions; the right side counts shared one-box restrictions
    with multiplicity ratios.  They agree for n <= d-1.
    """
    if alpha.boxes != n or beta.boxes != n:
        raise ValueError("alpha and beta must have n boxes")
    if not 1 <= n <= d - 1:
        raise ValueError(f"identity requires 1 <= n <= d-1, got n={n}, d={d}")
    m_a, m_b = mult(alpha), mult(beta)
    if not (1 <= a <= m_a and 1 <= b <= m_a and 1 <= c <= m_b and 1 <= e <= m_b):
        raise IndexError("tableau index out of range")
    amap = standard_tableaux(alpha).addbox_map
    bmap = standard_tableaux(beta).addbox_map
    tau = Permutation.transposition(n + 1, n, n + 1)

    lhs = 0.0
    for mu in add_box(alpha) & add_box(beta):
        t = irrep_matrix(tau, mu)
        am, bm = amap[mu][a - 1], amap[mu][b - 1]
        cm, em = bmap[mu][c - 1], bmap[mu][e - 1]
        lhs += (mult(mu) / m_a) * t[cm - 1, am - 1] * t[bm - 1, em - 1]
    lhs /= n + 1

    rhs = 0.0
    for lam in remove_box(alpha) & remove_box(beta):
        lmap = standard_tableaux(lam).addbox_map
        to_a, to_b = lmap[alpha], lmap[beta]
        p = to_a.index(a) if a in to_a else None
        q = to_a.index(b) if b in to_a else None
        pc = to_b.index(c) if c in to_b else None
        qe = to_b.index(e) if e in to_b else None
        if p is not None and q is not None and p == pc and q == qe:
            rhs += m_b / mult(lam)
    rhs /= n
    return lhs, rhs


@dataclass(frozen=True)
class InversionBound:
    value: float
    report: FeasibilityReport | None


def inversion_bound(n: int, d: int) -> InversionBound:
    """The certified inversion fidelity bound (n+1)/d^2, with the feasibility
    report attached whenever the witness fits under the dimension cap."""
    if not 0 <= n <= d - 1:
        raise ValueError(f"bound is claimed only for 0 <= n <= d-1, got n={n}, d={d}")
    value = (n + 1) / d ** 2
    if d ** (2 * n + 2) <= OPERATOR_CAP:
        return InversionBound(value, check_dual_feasibility(n, d))
    return InversionBound(value, None)
