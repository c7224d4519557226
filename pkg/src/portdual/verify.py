"""Named invariant suites with per-check margins, driven by the CLI verify
command and by the acceptance tests.

Each check records the measured margin and its tolerance so failures are
diagnosable from the JSON report alone.  Exact integer identities use
tolerance 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import factorial

import numpy as np

from . import correspondence as co
from . import inversion as iv
from . import oracle as oc
from . import repsym as rs
from . import young
from ._tensor import embed_operator, partial_trace
from .young import YoungDiagram, add_box, enumerate_diagrams, mult, remove_box, standard_tableaux


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    margin: float
    tol: float
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "passed": self.passed,
            "margin": self.margin,
            "tol": self.tol,
            "detail": self.detail,
        }


class _Recorder:
    def __init__(self, suite: str):
        self.suite = suite
        self.checks: list[Check] = []

    def leq(self, name: str, value: float, tol: float, detail: str = ""):
        self.checks.append(Check(self.suite, name, value <= tol, float(value), tol, detail))

    def true(self, name: str, condition: bool, detail: str = ""):
        self.checks.append(Check(self.suite, name, bool(condition), 0.0 if condition else 1.0, 0.0, detail))


def _count_partitions(n: int, max_part: int, parts: int) -> int:
    """Independent recursive counter of partitions of n into at most `parts`
    parts, each at most `max_part`."""
    if n == 0:
        return 1
    if parts == 0 or max_part == 0:
        return 0
    total = 0
    for first in range(1, min(n, max_part) + 1):
        total += _count_partitions(n - first, first, parts - 1)
    return total


def young_suite(n_max: int = 8, d_max: int = 5) -> list[Check]:
    r = _Recorder("young")
    for n in range(n_max + 1):
        all_diagrams = list(enumerate_diagrams(n, max(n, 1)))
        r.true(f"regular-representation n={n}",
               sum(mult(a) ** 2 for a in all_diagrams) == factorial(n))
        ok = all(mult(a) == len(standard_tableaux(a)) for a in all_diagrams)
        r.true(f"mult-equals-tableau-count n={n}", ok)
        ok = all(young.check_branching(a) for a in all_diagrams)
        r.true(f"branching n={n}", ok)
        dual = all(
            (mu in add_box(a)) == (a in remove_box(mu))
            for a in all_diagrams for mu in enumerate_diagrams(n + 1, n + 1)
        )
        r.true(f"lattice-duality n={n}", dual)
    for n in range(n_max + 1):
        for d in range(1, d_max + 1):
            r.true(f"partition-count n={n} d={d}",
                   len(enumerate_diagrams(n, d)) == _count_partitions(n, n, d))
    return r.checks


def correspondence_suite(n_max: int = 8, d_max: int = 5, seed: int = 12345) -> list[Check]:
    r = _Recorder("correspondence")
    for d in range(2, d_max + 1):
        for n in range(n_max + 1):
            rm = co.build_R(n, d).dense()
            pbt = co.build_M_pbt(n + 1, d).int_entries
            est = co.build_M_est(n, d).int_entries
            r.true(f"factorization-pbt n={n} d={d}", np.array_equal(rm.T @ rm, pbt))
            r.true(f"factorization-est n={n} d={d}", np.array_equal(rm @ rm.T, est))
            a = co.max_eig(co.build_M_pbt(n + 1, d))
            b = co.max_eig(co.build_M_est(n, d))
            r.leq(f"spectral-equivalence n={n} d={d}",
                  abs(a.eigenvalue - b.eigenvalue), 1e-10)
            low = float(min(a.vector.values.min(), b.vector.values.min()))
            r.true(f"perron-positivity n={n} d={d}", low > 0.0,
                   f"smallest Perron entry {low:.3e}")
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(200):
        n = int(rng.integers(1, 6))
        d = int(rng.integers(2, 5))
        idx_w = enumerate_diagrams(n + 1, d)
        idx_v = enumerate_diagrams(n, d)
        w = co.unit_vector("w", idx_w, rng.random(len(idx_w)))
        v = co.unit_vector("v", idx_v, rng.random(len(idx_v)))
        worst = min(worst,
                    co.fidelity_est(co.w_to_v(w, n, d), n, d) - co.fidelity_pbt(w, n + 1, d),
                    co.fidelity_pbt(co.v_to_w(v, n, d), n + 1, d) - co.fidelity_est(v, n, d))
    r.leq("round-trip-monotonicity (200 random vectors)", -worst, 1e-12,
          "fidelity never decreases under conversion")
    for d in range(2, min(d_max, 6) + 1):
        for n in range(0, d):
            res = co.max_eig(co.build_M_est(n, d))
            _, v_opt, f_opt = co.optimal_vectors_small(n, d)
            r.leq(f"closed-form-value n={n} d={d}", abs(res.eigenvalue - f_opt), 1e-10)
            r.leq(f"closed-form-vector n={n} d={d}",
                  float(np.abs(res.vector.values - v_opt.values).max()), 1e-8)
    for d in range(2, min(d_max, 4) + 1):
        fids = [co.max_eig(co.build_M_pbt(N, d)).eigenvalue for N in range(1, 21)]
        drop = max(fids[i] - fids[i + 1] for i in range(len(fids) - 1))
        r.leq(f"port-monotonicity d={d}", drop, 1e-12, "extra port never hurts")
    return r.checks


def repsym_suite(n_max: int = 4, d_max: int = 3, seed: int = 777,
                 mc_samples: int = 10 ** 4) -> list[Check]:
    r = _Recorder("repsym")
    rng = np.random.default_rng(seed)

    worst = 0.0
    for frame in enumerate_diagrams(5, 5):
        rep = rs.orthogonal_irrep(frame)
        eye = np.eye(rep.dim)
        for g in rep.generators:
            worst = max(worst, np.abs(g - g.T).max(), np.abs(g @ g - eye).max())
        for k in range(len(rep.generators) - 1):
            a, b = rep.generators[k], rep.generators[k + 1]
            worst = max(worst, np.abs(a @ b @ a - b @ a @ b).max())
        for k1 in range(len(rep.generators)):
            for k2 in range(k1 + 2, len(rep.generators)):
                a, b = rep.generators[k1], rep.generators[k2]
                worst = max(worst, np.abs(a @ b - b @ a).max())
    r.leq("orthogonal-form-generators (n=5 frames)", worst, 1e-12)

    perms6 = list(rs.symmetric_group(6))
    frame6 = YoungDiagram((3, 2, 1))
    worst = 0.0
    for _ in range(50):
        sigma = perms6[int(rng.integers(len(perms6)))]
        direct = rs.irrep_matrix(sigma, frame6)
        via_inverse = rs.irrep_matrix(sigma.inverse(), frame6).T
        worst = max(worst, np.abs(direct - via_inverse).max())
    r.leq("irrep-well-definedness (50 random words, n=6)", worst, 1e-12)

    worst = 0.0
    for n in range(2, n_max + 1):
        perms = list(rs.symmetric_group(n))
        for _ in range(50):
            a = perms[int(rng.integers(len(perms)))]
            b = perms[int(rng.integers(len(perms)))]
            for d in range(2, d_max + 1):
                lhs = rs.perm_matrix(a, d).entries @ rs.perm_matrix(b, d).entries
                rhs = rs.perm_matrix(a * b, d).entries
                worst = max(worst, np.abs(lhs - rhs).max())
    r.leq("permutation-operator-homomorphism", worst, 0.0)

    worst = 0.0
    for m in range(2, n_max + 2):
        for mu in enumerate_diagrams(m, m):
            fam = standard_tableaux(mu)
            for sigma in rs.symmetric_group(m - 1):
                lifted = rs.Permutation(sigma.images + (m,))
                dm = rs.irrep_matrix(lifted, mu)
                for i, (al, a) in enumerate(fam.parents):
                    for j, (be, b) in enumerate(fam.parents):
                        want = rs.irrep_matrix(sigma, al)[a - 1, b - 1] if al == be else 0.0
                        worst = max(worst, abs(dm[i, j] - want))
    r.leq("subgroup-adapted-basis", worst, 1e-10)

    for d in range(2, d_max + 1):
        for n in range(1, n_max + 1):
            units = {}
            for mu in enumerate_diagrams(n, d):
                m = mult(mu)
                for i in range(1, m + 1):
                    for j in range(1, m + 1):
                        units[(mu, i, j)] = rs.matrix_unit(mu, i, j, d).entries
            worst_tr = worst_real = 0.0
            for (mu, i, j), e in units.items():
                target = young.dim_u(mu, d) if i == j else 0.0
                worst_tr = max(worst_tr, abs(np.trace(e).real - target), abs(np.trace(e).imag))
                worst_real = max(worst_real, float(np.abs(e.imag).max()))
            r.leq(f"unit-trace n={n} d={d}", worst_tr, 1e-10)
            r.leq(f"unit-real n={n} d={d}", worst_real, 1e-12)
            worst_mul = 0.0
            keys = list(units)
            for k1 in keys:
                for k2 in keys:
                    mu, i, j = k1
                    nu, k, l = k2
                    prod = units[k1] @ units[k2]
                    target = units[(mu, i, l)] if (mu == nu and j == k) else 0.0
                    worst_mul = max(worst_mul, float(np.abs(prod - target).max()))
            r.leq(f"unit-multiplication n={n} d={d}", worst_mul, 1e-10)
            total = sum(units[(mu, i, i)] for mu in enumerate_diagrams(n, d)
                        for i in range(1, mult(mu) + 1))
            r.leq(f"unit-completeness n={n} d={d}",
                  float(np.abs(total - np.eye(d ** n)).max()), 1e-10)
            u = rs._haar_from_rng(rng, d)
            un = np.ones((1, 1))
            for _ in range(n):
                un = np.kron(un, u)
            worst_comm = max(
                float(np.abs(e @ un - un @ e).max()) for e in units.values())
            r.leq(f"schur-weyl-commutant n={n} d={d}", worst_comm, 1e-10)

    failures = []
    for d in range(2, d_max + 1):
        for n in range(1, n_max):
            for alpha in enumerate_diagrams(n, d):
                for a in range(1, mult(alpha) + 1):
                    for b in range(1, mult(alpha) + 1):
                        try:
                            rs.embed_unit(alpha, a, b, d)
                        except ArithmeticError as exc:
                            failures.append(f"{alpha.label()} ({a},{b}) d={d}: {exc}")
    r.true("one-box-extension (asserted in embed_unit)", not failures,
           "; ".join(failures))

    worst = 0.0
    for d in range(2, d_max + 1):
        for m in range(2, n_max + 1):
            for mu in enumerate_diagrams(m, d):
                fam = standard_tableaux(mu)
                mm = mult(mu)
                for i in range(1, mm + 1):
                    for j in range(1, mm + 1):
                        e = rs.matrix_unit(mu, i, j, d).entries
                        pt = partial_trace(e, (d,) * m, [m - 1])
                        al, a = fam.parents[i - 1]
                        be, b = fam.parents[j - 1]
                        if al == be:
                            target = (young.dim_u(mu, d) / young.dim_u(al, d)
                                      ) * rs.matrix_unit(al, a, b, d).entries
                        else:
                            target = np.zeros_like(pt)
                        worst = max(worst, float(np.abs(pt - target).max()))
    r.leq("unit-partial-trace", worst, 1e-10)

    worst = 0.0
    for d in range(2, d_max + 1):
        for n in range(1, n_max + 1):
            projs = [rs.young_projector(a, d).entries for a in enumerate_diagrams(n, n)]
            total = sum(projs)
            worst = max(worst, float(np.abs(total - np.eye(d ** n)).max()))
            for i, p in enumerate(projs):
                for j, q in enumerate(projs):
                    target = p if i == j else 0.0
                    worst = max(worst, float(np.abs(p @ q - target).max()))
    r.leq("young-projector-resolution", worst, 1e-10)

    for alpha in enumerate_diagrams(2, 3):
        exps = rs._schur_exponents(alpha, 3)
        den_exp = rs._schur_exponents(young.EMPTY, 3)
        eig = np.linalg.eigvals(rs._haar_from_rng(rng, 3, mc_samples))
        vals = np.abs(rs._schur_batch(exps, eig) / rs._schur_batch(den_exp, eig)) ** 2
        mean = float(vals.mean())
        se = float(vals.std(ddof=1)) / math.sqrt(mc_samples)
        r.leq(f"character-orthonormality {alpha.label()}", abs(mean - 1.0), 4 * se,
              f"MC mean {mean:.4f}, stderr {se:.4f}")

    tr = np.array([np.trace(u) for u in rs._haar_from_rng(rng, 3, mc_samples)])
    vals = np.abs(tr) ** 2
    se = float(vals.std(ddof=1) / math.sqrt(mc_samples))
    r.leq("haar-trace-moment", abs(float(vals.mean()) - 1.0), 5 * se)
    return r.checks


def oracle_suite(cases=((2, 2), (3, 2), (4, 2), (2, 3), (3, 3)),
                 tol: float = 1e-8,
                 mc_cases=((1, 2), (2, 2), (2, 3), (3, 3)),
                 mc_samples: int = 10 ** 5, seed: int = 7) -> list[Check]:
    r = _Recorder("oracle")
    for (N, d) in cases:
        idx = enumerate_diagrams(N, d)
        povm = oc.srm_povm(N, d)
        total = sum(p.entries for p in povm)
        r.leq(f"srm-completeness N={N} d={d}",
              float(np.abs(total - np.eye(d ** (N + 1))).max()), 1e-10)
        min_eig = min(float(np.linalg.eigvalsh((p.entries + p.entries.conj().T) / 2)[0])
                      for p in povm)
        r.leq(f"srm-positivity N={N} d={d}", -min_eig, 1e-10)
        for name, raw in (("uniform", np.ones(len(idx))),
                          ("mult", np.array([mult(mu) for mu in idx], dtype=float))):
            w = co.unit_vector("w", idx, raw)
            choi = oc.pbt_channel_choi(w, N, d, povm=povm)
            sim = oc.channel_fidelity(choi)
            spec = co.fidelity_pbt(w, N, d)
            r.leq(f"oracle-equivalence N={N} d={d} w={name}", abs(sim - spec), tol)
            r.leq(f"choi-trace-preserving N={N} d={d} w={name}",
                  float(np.abs(choi.trace_out_output() - np.eye(d)).max()), 1e-9)
            r.leq(f"choi-positive N={N} d={d} w={name}", -choi.min_eigenvalue(), 1e-10)

    for (N, d) in ((2, 2), (3, 2)):
        idx = enumerate_diagrams(N, d)
        w = co.unit_vector("w", idx, np.array([mult(mu) for mu in idx], dtype=float))
        f_split = oc.channel_fidelity(oc.pbt_channel_choi(w, N, d, povm=oc.srm_povm(N, d, "split")))
        f_single = oc.channel_fidelity(oc.pbt_channel_choi(w, N, d, povm=oc.srm_povm(N, d, 0)))
        r.leq(f"srm-deficit-invariance N={N} d={d}", abs(f_split - f_single), 1e-12)

    rng = np.random.default_rng(seed)
    N, d = 2, 2
    povm = oc.srm_povm(N, d)
    worst = -math.inf
    for _ in range(20):
        z = rng.standard_normal(d ** (2 * N)) + 1j * rng.standard_normal(d ** (2 * N))
        z /= np.linalg.norm(z)
        phi = np.outer(z, z.conj())
        f_raw = oc.channel_fidelity(oc.channel_choi_from_resource(phi, N, d, povm=povm))
        f_cov = co.fidelity_pbt(oc.extract_w(phi, N, d), N, d)
        worst = max(worst, f_raw - f_cov)
    r.leq("covariantization-never-hurts N=2 d=2 (20 random states)", worst, 1e-8)

    worst = 0.0
    for _ in range(10):
        N = int(rng.integers(1, 4))
        d = int(rng.integers(2, 4))
        idx = enumerate_diagrams(N, d)
        w = co.unit_vector("w", idx, rng.random(len(idx)))
        psi = oc.resource_vector(w, N, d)
        worst = max(worst, abs(float(np.linalg.norm(psi)) - 1.0))
        back = oc.extract_w(oc.resource_state(w, N, d), N, d)
        worst = max(worst, float(np.abs(back.values - w.values).max()))
    r.leq("resource-state-norm-and-roundtrip", worst, 1e-10)

    for (n, d) in mc_cases:
        idx = enumerate_diagrams(n, d)
        v = co.unit_vector("v", idx, np.ones(len(idx)))
        est, se = oc.mc_est_fidelity(v, n, d, mc_samples, seed=seed)
        truth = co.fidelity_est(v, n, d)
        r.leq(f"mc-character-oracle n={n} d={d}", abs(est - truth), 4 * se,
              f"MC {est:.6f} vs {truth:.6f}, stderr {se:.2e}")
    return r.checks


def inversion_suite(cases=((1, 2), (1, 3), (2, 3)), tol: float = 1e-9,
                    seed: int = 4242) -> list[Check]:
    r = _Recorder("inversion")
    for (n, d) in cases:
        rep = iv.check_dual_feasibility(n, d, tol=tol)
        r.true(f"dual-feasible n={n} d={d}", rep.verdict,
               f"psd_margin={rep.psd_margin:.2e}, trace_gap={rep.trace_gap:.2e}")
        r.leq(f"psd-margin n={n} d={d}", -rep.psd_margin, tol)
        r.leq(f"trace-gap n={n} d={d}", rep.trace_gap, 1e-10)
        for slot, res in enumerate(rep.ptrace_residuals, start=1):
            r.leq(f"slot-marginal n={n} d={d} slot={slot}", res, tol)
        primal = co.max_eig(co.build_M_est(n, d)).eigenvalue
        r.leq(f"primal-dual-saturation n={n} d={d}", abs(rep.bound - primal), 1e-10)

    n, d = 2, 3
    w = iv.dual_W(n, d).entries
    dims = (d,) * (2 * n + 1)
    worst = 0.0
    for sigma in rs.symmetric_group(n):
        v = rs._perm_matrix_array(sigma, d)
        op = embed_operator(np.kron(v, v), list(range(1, 2 * n + 1)), dims)
        worst = max(worst, float(np.abs(w @ op - op @ w).max()))
    r.leq("witness-permutation-symmetry n=2 d=3", worst, 1e-10)

    rng = np.random.default_rng(seed)
    for (n, d) in ((1, 2), (2, 2), (1, 3), (2, 3)):
        om = iv.performance_operator(n, d).entries
        dims = (d,) * (2 * n + 2)
        u = rs._haar_from_rng(rng, d)
        v = rs._haar_from_rng(rng, d)
        un = np.ones((1, 1))
        vn = np.ones((1, 1))
        for _ in range(n + 1):
            un = np.kron(un, u)
            vn = np.kron(vn, v)
        op_u = embed_operator(un, list(range(1, n + 1)) + [2 * n + 1], dims)
        op_v = embed_operator(vn, list(range(n + 1, 2 * n + 1)) + [0], dims)
        big = op_u @ op_v
        r.leq(f"performance-operator-symmetry n={n} d={d}",
              float(np.abs(om @ big - big @ om).max()), 1e-9)

    worst = 0.0
    for n in (1, 2, 3):
        d = n + 1
        for alpha in enumerate_diagrams(n, d):
            for beta in enumerate_diagrams(n, d):
                ma, mb = mult(alpha), mult(beta)
                for a, b, c, e in itertools.product(range(1, ma + 1), range(1, ma + 1),
                                                    range(1, mb + 1), range(1, mb + 1)):
                    lhs, rhs = iv.coefficient_A(alpha, beta, a, b, c, e, n, d)
                    worst = max(worst, abs(lhs - rhs))
    r.leq("coefficient-identity (exhaustive n<=3)", worst, 1e-10)
    return r.checks


SUITES = {
    "young": young_suite,
    "correspondence": correspondence_suite,
    "repsym": repsym_suite,
    "oracle": oracle_suite,
    "inversion": inversion_suite,
}


def run_suites(names, **overrides) -> list[Check]:
    checks: list[Check] = []
    for name in names:
        fn = SUITES[name]
        import inspect

        accepted = {k: v for k, v in overrides.items()
                    if k in inspect.signature(fn).parameters}
        checks.extend(fn(**accepted))
    return checks
