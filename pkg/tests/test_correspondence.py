import math
from math import factorial

import numpy as np
import pytest

from portdual import correspondence as co
from portdual.correspondence import EigensolverError
from portdual.young import YoungDiagram, enumerate_diagrams, mult, remove_box


def uniform(role, n, d):
    idx = enumerate_diagrams(n, d)
    return co.unit_vector(role, idx, np.ones(len(idx)))


def basis(role, n, d, rows):
    idx = enumerate_diagrams(n, d)
    vals = np.zeros(len(idx))
    vals[idx.position(YoungDiagram(rows))] = 1.0
    return co.CoefficientVector(role, idx, vals)


def test_build_R_examples():
    r = co.build_R(1, 2)
    assert r.dense().tolist() == [[1, 1]]
    assert co.build_R(0, 5).dense().tolist() == [[1]]
    assert co.build_R(2, 2).dense().tolist() == [[1, 1], [0, 1]]


def test_R_no_empty_rows_or_columns():
    for d in range(2, 6):
        for n in range(0, 9):
            dense = co.build_R(n, d).dense()
            assert dense.sum(axis=0).min() >= 1
            assert dense.sum(axis=1).min() >= 1


def test_M_pbt_examples():
    assert co.build_M_pbt(2, 2).int_entries.tolist() == [[1, 1], [1, 1]]
    assert co.build_M_pbt(3, 2).int_entries.tolist() == [[1, 1], [1, 2]]
    for N, d in [(4, 2), (5, 3)]:
        m = co.build_M_pbt(N, d)
        for pos, mu in enumerate(m.index):
            assert m.int_entries[pos, pos] == len(remove_box(mu))


def test_M_est_examples():
    assert co.build_M_est(1, 2).int_entries.tolist() == [[2]]
    assert co.build_M_est(0, 4).int_entries.tolist() == [[1]]
    assert co.build_M_est(2, 3).int_entries.tolist() == [[2, 1], [1, 2]]


def test_exact_factorization_small():
    for d in (2, 3, 4):
        for n in range(0, 6):
            r = co.build_R(n, d).dense()
            assert np.array_equal(r.T @ r, co.build_M_pbt(n + 1, d).int_entries)
            assert np.array_equal(r @ r.T, co.build_M_est(n, d).int_entries)


def test_max_eig_hand_examples():
    res = co.max_eig(co.build_M_pbt(2, 2))
    assert res.eigenvalue == pytest.approx(0.5, abs=1e-12)
    assert res.vector.values == pytest.approx([1 / math.sqrt(2)] * 2, abs=1e-10)

    res = co.max_eig(co.build_M_pbt(3, 2))
    assert res.eigenvalue == pytest.approx((3 + math.sqrt(5)) / 8, abs=1e-12)
    assert res.residual <= 1e-12

    res = co.max_eig(co.build_M_est(2, 3))
    assert res.eigenvalue == pytest.approx(1 / 3, abs=1e-12)
    assert res.vector.values == pytest.approx([1 / math.sqrt(2)] * 2, abs=1e-10)


def test_max_eig_matches_dense_solver():
    for d in (2, 3, 4):
        for n in range(0, 8):
            m = co.build_M_pbt(n + 1, d)
            lam = co.max_eig(m).eigenvalue
            assert lam == pytest.approx(np.linalg.eigvalsh(m.values)[-1], abs=1e-11)


def test_max_eig_nonconvergence_error():
    m = co.build_M_pbt(150, 2)  # 76 diagrams, above the dense fallback size
    with pytest.raises(EigensolverError) as info:
        co.max_eig(m, tol=0.0, max_iter=3)
    assert info.value.residual > 0.0


def test_fidelity_examples():
    w = co.unit_vector("w", enumerate_diagrams(2, 2), np.ones(2))
    assert co.fidelity_pbt(w, 2, 2) == pytest.approx(0.5, abs=1e-14)

    for N, d, rows in [(3, 2, (2, 1)), (4, 3, (2, 1, 1))]:
        e = basis("w", N, d, rows)
        assert co.fidelity_pbt(e, N, d) == pytest.approx(
            len(remove_box(YoungDiagram(rows))) / d ** 2, abs=1e-14)

    idx = enumerate_diagrams(3, 3)
    w = co.unit_vector("w", idx, np.array([mult(m) for m in idx], float))
    assert co.fidelity_pbt(w, 3, 3) == pytest.approx(3 / 9, abs=1e-12)

    v0 = co.unit_vector("v", enumerate_diagrams(0, 5), np.ones(1))
    assert co.fidelity_est(v0, 0, 5) == pytest.approx(1 / 25, abs=1e-14)
    assert co.fidelity_est(uniform("v", 2, 3), 2, 3) == pytest.approx(1 / 3, abs=1e-12)
    assert co.fidelity_est(basis("v", 2, 2, (2,)), 2, 2) == pytest.approx(0.5, abs=1e-14)


def test_fidelity_index_mismatch():
    w = uniform("w", 2, 2)
    with pytest.raises(ValueError):
        co.fidelity_pbt(w, 3, 2)
    with pytest.raises(ValueError):
        co.fidelity_est(w, 2, 3)


def test_conversion_examples():
    w = uniform("w", 2, 2)
    v = co.w_to_v(w, 1, 2)
    assert v.values == pytest.approx([1.0])

    idx = enumerate_diagrams(3, 3)
    w = co.unit_vector("w", idx, np.array([mult(m) for m in idx], float))
    v = co.w_to_v(w, 2, 3)
    assert v.values == pytest.approx([1 / math.sqrt(2)] * 2, abs=1e-12)

    back = co.v_to_w(v, 2, 3)
    assert back.values == pytest.approx(np.array([1, 2, 1]) / math.sqrt(6), abs=1e-12)

    v0 = co.unit_vector("v", enumerate_diagrams(0, 3), np.ones(1))
    assert co.v_to_w(v0, 0, 3).values == pytest.approx([1.0])


def test_conversion_monotonicity_random():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        d = int(rng.integers(2, 5))
        idx_w = enumerate_diagrams(n + 1, d)
        idx_v = enumerate_diagrams(n, d)
        w = co.unit_vector("w", idx_w, rng.random(len(idx_w)))
        v = co.unit_vector("v", idx_v, rng.random(len(idx_v)))
        assert co.fidelity_est(co.w_to_v(w, n, d), n, d) >= co.fidelity_pbt(w, n + 1, d) - 1e-12
        assert co.fidelity_pbt(co.v_to_w(v, n, d), n + 1, d) >= co.fidelity_est(v, n, d) - 1e-12


def test_optimal_vectors_small_examples():
    w, v, f = co.optimal_vectors_small(1, 2)
    assert f == pytest.approx(0.5)
    assert v.values == pytest.approx([1.0])
    assert w.values == pytest.approx([1 / math.sqrt(2)] * 2)

    _, _, f = co.optimal_vectors_small(2, 3)
    assert f == pytest.approx(1 / 3)

    w, v, f = co.optimal_vectors_small(0, 4)
    assert f == pytest.approx(1 / 16)
    assert v.values == pytest.approx([1.0])

    with pytest.raises(ValueError):
        co.optimal_vectors_small(2, 2)
    with pytest.raises(ValueError):
        co.optimal_vectors_small(3, 3)


def test_optimal_vectors_are_exactly_unit():
    for d in range(2, 6):
        for n in range(0, d):
            w, v, _ = co.optimal_vectors_small(n, d)
            assert np.linalg.norm(w.values) == pytest.approx(1.0, abs=1e-14)
            assert np.linalg.norm(v.values) == pytest.approx(1.0, abs=1e-14)
            # exact integer identity behind the normalization
            assert sum(mult(m) ** 2 for m in enumerate_diagrams(n + 1, d)) == factorial(n + 1)


def test_scaling_table_examples():
    rows = co.scaling_table(2, [2, 3])
    assert rows[0].N == 2 and rows[0].fidelity == pytest.approx(0.5, abs=1e-12)
    assert rows[0].scaled_gap == pytest.approx(2.0, abs=1e-11)
    assert rows[1].fidelity == pytest.approx((3 + math.sqrt(5)) / 8, abs=1e-12)
    assert rows[1].scaled_gap == pytest.approx(9 * (1 - (3 + math.sqrt(5)) / 8), abs=1e-10)
    assert rows[1].scaled_gap == pytest.approx(3.109, abs=1e-3)
    with pytest.raises(ValueError):
        co.scaling_table(2, [1])


def test_qubit_closed_form_cross_check():
    # independent oracle for d=2: the known optimum cos^2(pi/(N+2))
    for N in range(2, 31):
        lam = co.max_eig(co.build_M_pbt(N, 2)).eigenvalue
        assert lam == pytest.approx(math.cos(math.pi / (N + 2)) ** 2, abs=1e-11)


def test_coefficient_vector_validation():
    idx = enumerate_diagrams(2, 2)
    with pytest.raises(ValueError):
        co.CoefficientVector("w", idx, np.array([1.0, 1.0]))  # not unit
    with pytest.raises(ValueError):
        co.CoefficientVector("w", idx, np.array([-0.6, 0.8]))  # negative
    with pytest.raises(ValueError):
        co.CoefficientVector("x", idx, np.array([1.0, 0.0]))  # bad role
    with pytest.raises(ValueError):
        co.unit_vector("w", idx, np.zeros(2))  # zero vector


def test_vector_json_round_trip():
    w = uniform("w", 2, 3)
    again = co.CoefficientVector.from_json_dict(w.to_json_dict())
    assert again.role == "w"
    assert np.array_equal(again.values, w.values)
