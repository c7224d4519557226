import math

import numpy as np
import pytest

from portdual import repsym as rs
from portdual._tensor import partial_trace
from portdual.repsym import DegenerateSpectrumError, Permutation
from portdual.young import EMPTY, YoungDiagram, dim_u, enumerate_diagrams, mult, standard_tableaux


def test_permutation_basics():
    s = Permutation((2, 3, 1))
    assert s(1) == 2 and s(3) == 1
    assert (s * s.inverse()).images == (1, 2, 3)
    assert Permutation((2, 1)).sign() == -1
    assert Permutation((2, 3, 1)).sign() == 1
    with pytest.raises(ValueError):
        Permutation((1, 1, 3))


def test_adjacent_word_reconstructs():
    for sigma in rs.symmetric_group(4):
        out = Permutation.identity(4)
        for k in sigma.adjacent_word():
            out = out * Permutation.transposition(4, k, k + 1)
        assert out == sigma


def test_perm_matrix_examples():
    eye = rs.perm_matrix(Permutation.identity(3), 2).entries
    assert np.array_equal(eye, np.eye(8))
    swap = rs.perm_matrix(Permutation((2, 1)), 2).entries
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[3, 3] = expected[1, 2] = expected[2, 1] = 1
    assert np.array_equal(swap, expected)


def test_perm_matrix_homomorphism():
    rng = np.random.default_rng(3)
    for n, d in [(3, 2), (4, 2), (4, 3)]:
        perms = list(rs.symmetric_group(n))
        for _ in range(20):
            a = perms[rng.integers(len(perms))]
            b = perms[rng.integers(len(perms))]
            lhs = rs.perm_matrix(a, d).entries @ rs.perm_matrix(b, d).entries
            assert np.array_equal(lhs, rs.perm_matrix(a * b, d).entries)


def test_irrep_trivial_and_sign():
    for sigma in rs.symmetric_group(4):
        assert np.allclose(rs.irrep_matrix(sigma, YoungDiagram((4,))), [[1.0]])
        assert np.allclose(rs.irrep_matrix(sigma, YoungDiagram((1, 1, 1, 1))),
                           [[float(sigma.sign())]])


def test_irrep_generator_invariants():
    for rows in [(2, 1), (3, 1), (2, 2), (3, 2, 1)]:
        rep = rs.orthogonal_irrep(YoungDiagram(rows))
        eye = np.eye(rep.dim)
        for g in rep.generators:
            assert np.abs(g - g.T).max() < 1e-12
            assert np.abs(g @ g - eye).max() < 1e-12
        for k in range(len(rep.generators) - 1):
            a, b = rep.generators[k], rep.generators[k + 1]
            assert np.abs(a @ b @ a - b @ a @ b).max() < 1e-12
        for k1 in range(len(rep.generators)):
            for k2 in range(k1 + 2, len(rep.generators)):
                a, b = rep.generators[k1], rep.generators[k2]
                assert np.abs(a @ b - b @ a).max() < 1e-12


def test_irrep_well_defined_across_words():
    rng = np.random.default_rng(11)
    frame = YoungDiagram((3, 2, 1))
    for _ in range(50):
        sigma = Permutation(tuple(rng.permutation(6) + 1))
        direct = rs.irrep_matrix(sigma, frame)
        via_inverse = rs.irrep_matrix(sigma.inverse(), frame).T
        assert np.abs(direct - via_inverse).max() < 1e-12


def test_young_projector_examples():
    p = rs.young_projector(YoungDiagram((2,)), 2).entries
    assert np.trace(p).real == pytest.approx(3.0, abs=1e-12)

    total = sum(rs.young_projector(a, 2).entries for a in enumerate_diagrams(3, 3))
    assert np.abs(total - np.eye(8)).max() < 1e-12

    projs = [rs.young_projector(a, 3).entries for a in enumerate_diagrams(3, 3)]
    for i, p in enumerate(projs):
        for j, q in enumerate(projs):
            target = p if i == j else np.zeros_like(p)
            assert np.abs(p @ q - target).max() < 1e-10

    deep = rs.young_projector(YoungDiagram((1, 1, 1)), 2)
    assert np.abs(deep.entries).max() == 0.0


def test_matrix_unit_lemma_identities():
    for n, d in [(2, 2), (3, 2), (3, 3)]:
        units = {}
        for mu in enumerate_diagrams(n, d):
            for i in range(1, mult(mu) + 1):
                for j in range(1, mult(mu) + 1):
                    units[(mu, i, j)] = rs.matrix_unit(mu, i, j, d).entries
        for (mu, i, j), e in units.items():
            assert abs(np.trace(e) - (dim_u(mu, d) if i == j else 0.0)) < 1e-10
            assert np.abs(e.imag).max() < 1e-12
        for (mu, i, j), e1 in units.items():
            for (nu, k, l), e2 in units.items():
                target = units[(mu, i, l)] if (mu == nu and j == k) else 0.0
                assert np.abs(e1 @ e2 - target).max() < 1e-10
        total = sum(units[(mu, i, i)] for mu in enumerate_diagrams(n, d)
                    for i in range(1, mult(mu) + 1))
        assert np.abs(total - np.eye(d ** n)).max() < 1e-10


def test_matrix_unit_index_errors():
    with pytest.raises(IndexError):
        rs.matrix_unit(YoungDiagram((2, 1)), 3, 1, 3)
    with pytest.raises(ValueError):
        rs.matrix_unit(YoungDiagram((1, 1, 1)), 1, 1, 2)


def test_embed_unit_examples():
    out = rs.embed_unit(YoungDiagram((1,)), 1, 1, 2)
    assert np.abs(out.entries - np.eye(4)).max() < 1e-12

    for alpha in enumerate_diagrams(2, 3):
        for a in range(1, mult(alpha) + 1):
            rs.embed_unit(alpha, a, a, 3)

    # traced a=b case counts dimensions: d * d_alpha == sum over covers of d_mu
    for d in (2, 3):
        for alpha in enumerate_diagrams(3, d):
            covers = [mu for mu in standard_tableaux(alpha).addbox_map if mu.depth <= d]
            assert d * dim_u(alpha, d) == sum(dim_u(mu, d) for mu in covers)


def test_partial_trace_of_units():
    for d in (2, 3):
        for mu in enumerate_diagrams(3, d):
            fam = standard_tableaux(mu)
            for i in range(1, mult(mu) + 1):
                for j in range(1, mult(mu) + 1):
                    e = rs.matrix_unit(mu, i, j, d).entries
                    pt = partial_trace(e, (d,) * 3, [2])
                    al, a = fam.parents[i - 1]
                    be, b = fam.parents[j - 1]
                    if al == be:
                        target = dim_u(mu, d) / dim_u(al, d) * rs.matrix_unit(al, a, b, d).entries
                    else:
                        target = np.zeros_like(pt)
                    assert np.abs(pt - target).max() < 1e-10


def test_subgroup_adapted_restriction():
    for m in (2, 3, 4):
        for mu in enumerate_diagrams(m, m):
            fam = standard_tableaux(mu)
            for sigma in rs.symmetric_group(m - 1):
                lifted = Permutation(sigma.images + (m,))
                dm = rs.irrep_matrix(lifted, mu)
                for i, (al, a) in enumerate(fam.parents):
                    for j, (be, b) in enumerate(fam.parents):
                        want = rs.irrep_matrix(sigma, al)[a - 1, b - 1] if al == be else 0.0
                        assert abs(dm[i, j] - want) < 1e-10


def test_schur_char_examples():
    xs = np.exp(1j * np.array([0.3, 1.1, 2.2]))
    assert rs.schur_char(EMPTY, xs) == pytest.approx(1.0 + 0j)
    assert rs.schur_char(YoungDiagram((1,)), xs) == pytest.approx(complex(xs.sum()))
    assert rs.schur_char(YoungDiagram((2,)), np.array([1.0, -1.0])) == pytest.approx(1.0 + 0j)
    with pytest.raises(DegenerateSpectrumError):
        rs.schur_char(YoungDiagram((1,)), np.array([1.0, 1.0 + 1e-12]))
    with pytest.raises(ValueError):
        rs.schur_char(YoungDiagram((1, 1, 1)), np.array([1.0, -1.0]))


def test_schur_char_matches_power_sums():
    # s_(2) = (p1^2 + p2)/2 and s_(1,1) = (p1^2 - p2)/2
    rng = np.random.default_rng(8)
    xs = np.exp(1j * rng.uniform(0, 2 * math.pi, size=3))
    p1 = xs.sum()
    p2 = (xs ** 2).sum()
    assert rs.schur_char(YoungDiagram((2,)), xs) == pytest.approx((p1 ** 2 + p2) / 2)
    assert rs.schur_char(YoungDiagram((1, 1)), xs) == pytest.approx((p1 ** 2 - p2) / 2)


def test_haar_unitary_contracts():
    u = rs.haar_unitary(3, 42).entries
    assert np.abs(u.conj().T @ u - np.eye(3)).max() < 1e-12
    again = rs.haar_unitary(3, 42).entries
    assert np.array_equal(u, again)
    other = rs.haar_unitary(3, 43).entries
    assert not np.array_equal(u, other)


def test_haar_trace_moment():
    rng = np.random.default_rng(1234)
    us = rs._haar_from_rng(rng, 3, 10 ** 4)
    vals = np.abs(np.trace(us, axis1=-2, axis2=-1)) ** 2
    se = vals.std(ddof=1) / math.sqrt(len(vals))
    assert abs(vals.mean() - 1.0) < 5 * se


def test_schur_weyl_commutant():
    rng = np.random.default_rng(5)
    for n, d in [(2, 2), (3, 2), (3, 3)]:
        u = rs._haar_from_rng(rng, d)
        un = np.ones((1, 1))
        for _ in range(n):
            un = np.kron(un, u)
        for mu in enumerate_diagrams(n, d):
            e = rs.matrix_unit(mu, 1, mult(mu), d).entries
            assert np.abs(e @ un - un @ e).max() < 1e-10


def test_dense_operator_contract():
    op = rs.DenseOperator(np.eye(4), (2, 2))
    assert op.dim == 4
    with pytest.raises(ValueError):
        rs.DenseOperator(np.eye(3), (2, 2))
    swapped = op.reorder([1, 0])
    assert np.array_equal(swapped.entries, np.eye(4))
    reduced = op.ptrace([0])
    assert np.array_equal(reduced.entries, 2 * np.eye(2))
