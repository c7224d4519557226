"""Explicit representation theory on small tensor registers: permutation
operators, Young's orthogonal form of the symmetric group, Young projectors,
matrix units of the unitary-group commutant, Schur characters, and Haar
sampling.

This is the brute-force substrate used by the verification oracles; it is
meant for small box counts (n up to about 6) and small local dimensions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterator

import numpy as np

from . import young
from ._tensor import partial_trace, reorder_factors
from .young import YoungDiagram, standard_tableaux, tableau_cell


class DegenerateSpectrumError(RuntimeError):
    """Raised when a spectrum is too degenerate for bialternant evaluation;
    callers holding a random source should resample."""


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n}, stored as the tuple of images."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..n: {images}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.n != other.n:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.images[other.images[i] - 1] for i in range(self.n)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, img in enumerate(self.images, start=1):
            inv[img - 1] = i
        return Permutation(tuple(inv))

    def sign(self) -> int:
        seen = [False] * self.n
        sgn = 1
        for i in range(1, self.n + 1):
            if seen[i - 1]:
                continue
            length = 0
            j = i
            while not seen[j - 1]:
                seen[j - 1] = True
                j = self(j)
                length += 1
            if length % 2 == 0:
                sgn = -sgn
        return sgn

    def adjacent_word(self) -> tuple[int, ...]:
        """A word (k1,...,km) of adjacent transpositions with
        sigma = s_{k1} s_{k2} ... s_{km} (identity gives the empty word)."""
        arr = list(self.images)
        swaps = []
        changed = True
        while changed:
            changed = False
            for i in range(len(arr) - 1):
                if arr[i] > arr[i + 1]:
                    arr[i], arr[i + 1] = arr[i + 1], arr[i]
                    swaps.append(i + 1)
                    changed = True
        return tuple(reversed(swaps))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        images = list(range(1, n + 1))
        images[i - 1], images[j - 1] = j, i
        return cls(tuple(images))


def symmetric_group(n: int) -> Iterator[Permutation]:
    for images in itertools.permutations(range(1, n + 1)):
        yield Permutation(images)


@dataclass(frozen=True)
class DenseOperator:
    """A complex square matrix on a tensor-product register."""

    entries: np.ndarray
    factor_shape: tuple[int, ...]

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "factor_shape", tuple(int(d) for d in self.factor_shape))
        d = math.prod(self.factor_shape)
        if entries.shape != (d, d):
            raise ValueError(f"shape {entries.shape} does not match factors {self.factor_shape}")

    @property
    def dim(self) -> int:
        return math.prod(self.factor_shape)

    def tensor(self, other: "DenseOperator") -> "DenseOperator":
        return DenseOperator(np.kron(self.entries, other.entries),
                             self.factor_shape + other.factor_shape)

    def reorder(self, new_order) -> "DenseOperator":
        mat, dims = reorder_factors(self.entries, self.factor_shape, new_order)
        return DenseOperator(mat, tuple(dims))

    def ptrace(self, drop) -> "DenseOperator":
        mat = partial_trace(self.entries, self.factor_shape, drop)
        kept = tuple(d for p, d in enumerate(self.factor_shape) if p not in set(drop))
        return DenseOperator(mat, kept)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))


def _perm_matrix_array(sigma: Permutation, d: int) -> np.ndarray:
    n = sigma.n
    if n == 0:
        return np.ones((1, 1))
    dim = d ** n
    cols = np.arange(dim)
    digits = np.array(np.unravel_index(cols, (d,) * n))  # digits[k-1] = i_k
    inv = sigma.inverse()
    out_digits = digits[[inv(k) - 1 for k in range(1, n + 1)], :]
    rows = np.ravel_multi_index(tuple(out_digits), (d,) * n)
    mat = np.zeros((dim, dim))
    mat[rows, cols] = 1.0
    return mat


def perm_matrix(sigma: Permutation, d: int) -> DenseOperator:
    """The operator permuting n local factors of dimension d, acting as
    |i_1 ... i_n> -> |i_{sigma^-1(1)} ... i_{sigma^-1(n)}>."""
    return DenseOperator(_perm_matrix_array(sigma, d), (d,) * sigma.n)


@dataclass(frozen=True)
class OrthogonalIrrep:
    """Young's orthogonal (real, subgroup-adapted) form of a symmetric-group
    irrep, given by its generator matrices on adjacent transpositions."""

    frame: YoungDiagram
    generators: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return len(young.standard_tableaux(self.frame).tableaux)

    def matrix(self, sigma: Permutation) -> np.ndarray:
        if sigma.n != self.frame.boxes:
            raise ValueError(f"permutation on {sigma.n} letters vs {self.frame.boxes} boxes")
        out = np.eye(self.dim)
        for k in sigma.adjacent_word():
            out = out @ self.generators[k - 1]
        return out


@lru_cache(maxsize=None)
def orthogonal_irrep(frame: YoungDiagram) -> OrthogonalIrrep:
    """Build the orthogonal-form generators from axial distances on the
    standard tableaux of the frame."""
    fam = standard_tableaux(frame)
    n = frame.boxes
    m = len(fam)
    word_index = {t: i for i, t in enumerate(fam.tableaux)}
    gens = []
    for k in range(1, n):
        g = np.zeros((m, m))
        for t_idx, t in enumerate(fam.tableaux):
            r1, c1 = tableau_cell(t, k)
            r2, c2 = tableau_cell(t, k + 1)
            axial = (c2 - r2) - (c1 - r1)
            g[t_idx, t_idx] = 1.0 / axial
            if abs(axial) >= 2:
                swapped = tuple(
                    tuple(k + 1 if v == k else k if v == k + 1 else v for v in row)
                    for row in t
                )
                s_idx = word_index[swapped]
                g[s_idx, t_idx] = math.sqrt(1.0 - 1.0 / axial ** 2)
        gens.append(g)
    return OrthogonalIrrep(frame, tuple(gens))


def irrep_matrix(sigma: Permutation, frame: YoungDiagram) -> np.ndarray:
    """Real orthogonal irrep matrix of a permutation in the tableau basis."""
    return orthogonal_irrep(frame).matrix(sigma)


def young_projector(alpha: YoungDiagram, d: int) -> DenseOperator:
    """Orthogonal projector onto the isotypic component labelled by the
    diagram; the zero operator if the diagram is too deep for dimension d."""
    n = alpha.boxes
    dim = d ** n
    if alpha.depth > d:
        return DenseOperator(np.zeros((dim, dim)), (d,) * n)
    rep = orthogonal_irrep(alpha)
    acc = np.zeros((dim, dim))
    for sigma in symmetric_group(n):
        chi = np.trace(rep.matrix(sigma))
        acc += chi * _perm_matrix_array(sigma, d)
    acc *= young.mult(alpha) / factorial(n)
    return DenseOperator(acc, (d,) * n)


@lru_cache(maxsize=32)
def _matrix_unit_block(mu: YoungDiagram, d: int) -> np.ndarray:
    """All matrix units of a frame at once, shape (m, m, D, D) with
    D = d**boxes; entry [i-1, j-1] is the unit mapping basis slot j to i."""
    n = mu.boxes
    rep = orthogonal_irrep(mu)
    m = rep.dim
    dim = d ** n
    acc = np.zeros((m, m, dim, dim))
    for sigma in symmetric_group(n):
        dm = rep.matrix(sigma)
        acc += dm[:, :, None, None] * _perm_matrix_array(sigma, d)[None, None, :, :]
    acc *= m / factorial(n)
    return acc


def matrix_unit(mu: YoungDiagram, i: int, j: int, d: int) -> DenseOperator:
    """The commutant matrix unit E^mu_ij on n local factors of dimension d."""
    if mu.depth > d:
        raise ValueError(f"diagram depth {mu.depth} exceeds dimension {d}")
    m = young.mult(mu)
    if not (1 <= i <= m and 1 <= j <= m):
        raise IndexError(f"tableau indices ({i}, {j}) out of range 1..{m}")
    block = _matrix_unit_block(mu, d)
    return DenseOperator(block[i - 1, j - 1], (d,) * mu.boxes)


def embed_unit(alpha: YoungDiagram, a: int, b: int, d: int,
               tol: float = 1e-10) -> DenseOperator:
    """E^alpha_ab extended by one identity factor.

    Asserts the extension equals the sum of the covering frames' units under
    the add-box index map; raises ArithmeticError if the identity fails.
    """
    lhs = np.kron(matrix_unit(alpha, a, b, d).entries, np.eye(d))
    fam = standard_tableaux(alpha)
    rhs = np.zeros_like(lhs)
    for mu, amap in fam.addbox_map.items():
        if mu.depth > d:
            continue
        rhs = rhs + matrix_unit(mu, amap[a - 1], amap[b - 1], d).entries
    err = np.abs(lhs - rhs).max()
    if err > tol:
        raise ArithmeticError(f"one-box extension identity violated: max error {err:.3e}")
    return DenseOperator(lhs, (d,) * (alpha.boxes + 1))


DEGENERACY_GAP = 1e-8


def _schur_exponents(alpha: YoungDiagram, d: int) -> np.ndarray:
    padded = alpha.rows + (0,) * (d - alpha.depth)
    return np.array([padded[i] + d - 1 - i for i in range(d)])


def schur_char(alpha: YoungDiagram, eigenvalues) -> complex:
    """Schur polynomial of a unitary's spectrum via the bialternant ratio."""
    xs = np.asarray(eigenvalues, dtype=complex)
    d = xs.shape[0]
    if alpha.depth > d:
        raise ValueError(f"diagram depth {alpha.depth} exceeds {d} eigenvalues")
    diffs = np.abs(xs[:, None] - xs[None, :]) + np.eye(d)
    if diffs.min() < DEGENERACY_GAP:
        raise DegenerateSpectrumError("nearly degenerate eigenvalues; resample")
    num = np.linalg.det(xs[None, :] ** _schur_exponents(alpha, d)[:, None])
    den = np.linalg.det(xs[None, :] ** _schur_exponents(young.EMPTY, d)[:, None])
    return complex(num / den)


def _schur_batch(exponents: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Batched bialternant numerators/denominators: xs has shape (B, d)."""
    return np.linalg.det(xs[:, None, :] ** exponents[None, :, None])


def _haar_from_rng(rng: np.random.Generator, d: int, count: int | None = None) -> np.ndarray:
    shape = (d, d) if count is None else (count, d, d)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[..., None, :]


def haar_unitary(d: int, seed: int) -> DenseOperator:
    """A Haar-distributed d x d unitary; a fixed seed gives a bit-identical
    matrix across runs."""
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = np.random.default_rng(seed)
    return DenseOperator(_haar_from_rng(rng, d), (d,))
