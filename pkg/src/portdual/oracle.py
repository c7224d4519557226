"""Independent verification oracles: an end-to-end simulation of the
covariant teleportation channel (resource state, square-root measurement,
Choi matrix, channel fidelity) and a Monte-Carlo character integral for the
estimation fidelity.

These paths share no linear algebra with the spectral reduction; agreement
between the two is the package's main correctness evidence.  Dimensions are
hard-capped: this is an oracle, not a production simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import repsym
from ._tensor import embed_operator, psd_inv_sqrt, psd_sqrt
from .correspondence import CoefficientVector, unit_vector
from .repsym import DegenerateSpectrumError, DenseOperator, _haar_from_rng, _schur_batch
from .young import enumerate_diagrams, dim_u, mult

STATE_CAP = 3 ** 6      # on d**N, the one-sided resource register
POVM_CAP = 3 ** 7       # on d**(N+1), the measurement register


class DimensionCapError(ValueError):
    """The requested instance exceeds the oracle's dimension caps."""


def _check_caps(N: int, d: int):
    if d ** N > STATE_CAP:
        raise DimensionCapError(f"d**N = {d**N} exceeds the resource cap {STATE_CAP}")
    if d ** (N + 1) > POVM_CAP:
        raise DimensionCapError(f"d**(N+1) = {d**(N+1)} exceeds the POVM cap {POVM_CAP}")


def _distortion_operator(w: CoefficientVector, N: int, d: int) -> np.ndarray:
    """The block-rescaling operator that turns N maximally entangled pairs
    into the covariant resource state."""
    dn = d ** N
    out = np.zeros((dn, dn))
    for pos, mu in enumerate(w.index):
        c = w.values[pos]
        if c == 0.0:
            continue
        proj = repsym.young_projector(mu, d).entries.real
        out += (c / math.sqrt(dim_u(mu, d) * mult(mu))) * proj
    return math.sqrt(dn) * out


def resource_vector(w: CoefficientVector, N: int, d: int) -> np.ndarray:
    """State vector of the covariant resource on factors A_1..A_N B_1..B_N."""
    if w.index.n != N or w.index.d != d:
        raise ValueError(f"w indexed by (n={w.index.n}, d={w.index.d}), expected ({N}, {d})")
    _check_caps(N, d)
    dn = d ** N
    op = _distortion_operator(w, N, d)
    return op.reshape(-1) / math.sqrt(dn)


def resource_state(w: CoefficientVector, N: int, d: int) -> DenseOperator:
    """The covariant resource as a pure density matrix on A^N tensor B^N."""
    psi = resource_vector(w, N, d)
    return DenseOperator(np.outer(psi, psi.conj()), (d,) * (2 * N))


def extract_w(phi, N: int, d: int) -> CoefficientVector:
    """Covariantized coefficients of an arbitrary resource state: block
    weights of the conjugated state on the A side, square-rooted and
    normalized."""
    mat = phi.entries if isinstance(phi, DenseOperator) else np.asarray(phi, dtype=complex)
    dn = d ** N
    if mat.shape != (dn * dn, dn * dn):
        raise ValueError(f"resource state must be {dn*dn} x {dn*dn}")
    t = mat.conj().reshape(dn, dn, dn, dn)
    reduced = np.einsum("abcb->ac", t)
    index = enumerate_diagrams(N, d)
    vals = np.empty(len(index))
    for pos, mu in enumerate(index):
        proj = repsym.young_projector(mu, d).entries.real
        vals[pos] = max(float(np.trace(reduced @ proj).real), 0.0)
    return unit_vector("w", index, np.sqrt(vals))


def _sigma_ensemble(N: int, d: int) -> list[np.ndarray]:
    """The fixed measurement ensemble on A_1..A_N A_0: port a carries a
    maximally entangled pair with the input register."""
    dims = (d,) * (N + 1)
    pair = np.zeros(d * d)
    pair[(np.arange(d)) * d + np.arange(d)] = 1.0 / math.sqrt(d)
    proj = np.outer(pair, pair)
    return [embed_operator(proj, [a, N], dims) / d ** (N - 1) for a in range(N)]


def srm_povm(N: int, d: int, deficit: str | int = "split") -> list[DenseOperator]:
    """Square-root measurement for the fixed port ensemble.

    The inverse root is taken on the numerically detected support; the
    off-support identity deficit is split equally over the N outcomes, or
    assigned to a single outcome when ``deficit`` is an index (the fidelity
    is invariant either way, which the verification suite asserts).
    """
    _check_caps(N, d)
    sigmas = _sigma_ensemble(N, d)
    total = sum(sigmas)
    root, support = psd_inv_sqrt(total)
    leftover = np.eye(total.shape[0]) - support
    povm = []
    for a, s in enumerate(sigmas):
        pi = root @ s @ root
        if deficit == "split":
            pi = pi + leftover / N
        elif deficit == a:
            pi = pi + leftover
        elif not isinstance(deficit, int):
            raise ValueError(f"deficit must be 'split' or an outcome index, got {deficit!r}")
        povm.append(DenseOperator(pi, (d,) * (N + 1)))
    return povm


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi matrix J = sum_ij |i><j| (x) Channel(|i><j|)."""

    d_in: int
    d_out: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        dim = self.d_in * self.d_out
        if entries.shape != (dim, dim):
            raise ValueError(f"Choi matrix must be {dim} x {dim}")

    def trace_out_output(self) -> np.ndarray:
        t = self.entries.reshape(self.d_in, self.d_out, self.d_in, self.d_out)
        return np.einsum("abcb->ac", t)

    def min_eigenvalue(self) -> float:
        h = (self.entries + self.entries.conj().T) / 2
        return float(np.linalg.eigvalsh(h)[0])


@dataclass(frozen=True)
class PbtInstance:
    """A fully materialized covariant teleportation instance."""

    N: int
    d: int
    w: CoefficientVector
    resource: DenseOperator
    srm: tuple[DenseOperator, ...]

    @classmethod
    def build(cls, w: CoefficientVector, N: int, d: int) -> "PbtInstance":
        return cls(N, d, w, resource_state(w, N, d), tuple(srm_povm(N, d)))


def _choi_from_pure_resource(psi: np.ndarray, N: int, d: int,
                             povm: list[np.ndarray]) -> np.ndarray:
    """Feed the d^2 matrix units through the protocol with a pure resource.

    Registers are ordered A_1..A_N, A_0, B_1..B_N; the kept output port is
    relabelled to B_0.  Measurement operators act trivially on every B
    factor, so their square roots can be moved across the partial trace.
    """
    dn = d ** N
    psi_ab = psi.reshape(dn, dn)
    roots = [psd_sqrt(pi) for pi in povm]
    j4 = np.zeros((d, d, d, d), dtype=complex)
    for a, root in enumerate(roots):
        branch = []
        for i in range(d):
            x = np.zeros((dn * d, dn), dtype=complex)
            x.reshape(dn, d, dn)[:, i, :] = psi_ab
            y = root @ x                                   # (A^N A_0) x (B^N)
            t = y.reshape(dn * d, *(d,) * N)
            t = np.moveaxis(t, 1 + a, 0)                   # bring B_a forward
            branch.append(t.reshape(d, -1))
        for i in range(d):
            for j in range(d):
                j4[i, :, j, :] += branch[i] @ branch[j].conj().T
    return j4.reshape(d * d, d * d)


def channel_choi_from_resource(phi, N: int, d: int,
                               povm: list[DenseOperator] | None = None) -> ChoiMatrix:
    """Choi matrix of the teleportation channel for an arbitrary resource
    density matrix on A^N tensor B^N, measured with the square-root POVM."""
    _check_caps(N, d)
    mat = phi.entries if isinstance(phi, DenseOperator) else np.asarray(phi, dtype=complex)
    ops = [p.entries for p in (povm if povm is not None else srm_povm(N, d))]
    vals, vecs = np.linalg.eigh((mat + mat.conj().T) / 2)
    total = np.zeros((d * d, d * d), dtype=complex)
    for q, vec in zip(vals, vecs.T):
        if q < 1e-14:
            continue
        total += q * _choi_from_pure_resource(vec, N, d, ops)
    return ChoiMatrix(d, d, total)


def pbt_channel_choi(w: CoefficientVector, N: int, d: int,
                     povm: list[DenseOperator] | None = None) -> ChoiMatrix:
    """Choi matrix of the covariant teleportation channel for coefficients w."""
    psi = resource_vector(w, N, d)
    ops = [p.entries for p in (povm if povm is not None else srm_povm(N, d))]
    return ChoiMatrix(d, d, _choi_from_pure_resource(psi, N, d, ops))


def channel_fidelity(J: ChoiMatrix) -> float:
    """Fidelity between the channel and the identity: the maximally entangled
    matrix element of the Choi matrix over d^2."""
    if J.d_in != J.d_out:
        raise ValueError("channel fidelity needs equal input and output dimensions")
    d = J.d_in
    t = J.entries.reshape(d, d, d, d)
    return float(np.einsum("aabb->", t).real) / d ** 2


MC_BATCH = 8192
_MC_MAX_RESAMPLE = 60


def _mc_stream(v: CoefficientVector, d: int, quota: int,
               rng: np.random.Generator) -> tuple[float, float]:
    """Sum and sum of squares of the character integrand over one stream."""
    from .repsym import _schur_exponents
    from .young import EMPTY

    exps = [_schur_exponents(alpha, d) for alpha in v.index]
    den_exp = _schur_exponents(EMPTY, d)
    s1 = 0.0
    s2 = 0.0
    left = quota
    while left > 0:
        b = min(left, MC_BATCH)
        us = _haar_from_rng(rng, d, b)
        eig = np.linalg.eigvals(us)
        for _ in range(_MC_MAX_RESAMPLE):
            gaps = np.abs(eig[:, :, None] - eig[:, None, :]) + np.eye(d)
            bad = gaps.min(axis=(1, 2)) < repsym.DEGENERACY_GAP
            if not bad.any():
                break
            eig[bad] = np.linalg.eigvals(_haar_from_rng(rng, d, int(bad.sum())))
        else:
            raise DegenerateSpectrumError("persistent eigenvalue degeneracy in MC sampling")
        den = _schur_batch(den_exp, eig)
        chi = eig.sum(axis=1)
        probe = np.zeros(b, dtype=complex)
        for coeff, e in zip(v.values, exps):
            probe += coeff * _schur_batch(e, eig) / den
        g = (np.abs(chi) ** 2) * (np.abs(probe) ** 2) / d ** 2
        s1 += float(g.sum())
        s2 += float((g * g).sum())
        left -= b
    return s1, s2


def mc_est_fidelity(v: CoefficientVector, n: int, d: int, samples: int,
                    seed: int, streams: int = 1) -> tuple[float, float]:
    """Monte-Carlo estimate of the estimation fidelity as a Haar character
    integral, with its standard error.

    Sampling is partitioned across seed-derived independent streams; results
    are reproducible for a fixed (seed, samples, streams) triple.
    """
    if v.index.n != n or v.index.d != d:
        raise ValueError(f"v indexed by (n={v.index.n}, d={v.index.d}), expected ({n}, {d})")
    if n > 6 or d > 4:
        raise DimensionCapError("character oracle is scoped to n <= 6, d <= 4")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    if streams < 1:
        raise ValueError("streams must be >= 1")
    children = np.random.SeedSequence(seed).spawn(streams)
    base, extra = divmod(samples, streams)
    s1 = 0.0
    s2 = 0.0
    for k, child in enumerate(children):
        quota = base + (1 if k < extra else 0)
        if quota == 0:
            continue
        a, b = _mc_stream(v, d, quota, np.random.default_rng(child))
        s1 += a
        s2 += b
    mean = s1 / samples
    var = max(s2 - samples * mean * mean, 0.0) / (samples - 1)
    return mean, math.sqrt(var / samples)
