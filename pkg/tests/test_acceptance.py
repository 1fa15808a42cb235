"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Heavy runs are shared through session fixtures. Criterion A1 exercises
the documented synthetic-recovery protocol verbatim; see the analysis
notes shipped with the repo history for why its threshold is not
reachable on this landscape (the perturbed start leaves the global
basin for every seed at these sizes, and every monotone descent method
converges to a nearby local minimum).
"""

import itertools
import time

import numpy as np
import pytest

from conftest import sinusoid_mixture
from tlnmf import analysis, audio, linalg, nmf, objective, transform_opt as topt
from tlnmf.driver import (
    TlnmfConfig,
    run_tlnmf,
    run_transform_only,
    synthetic_transform_instance,
)

RECOVERY_ITERS = 200
RECOVERY_SEED = 0


def report(criterion, passed, detail):
    tag = "PASS" if passed else "FAIL"
    print(f"[{tag}] {criterion}: {detail}")


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile/load the jitted kernels before anything is timed
    y, _, vhat, phi0 = synthetic_transform_instance(4, 10, 1e-2, 0)
    run_transform_only(y, vhat, phi0, "quasi-newton", 2)
    run_transform_only(y, vhat, phi0, "projected-gradient", 2)


@pytest.fixture(scope="session")
def recovery_runs():
    """Quasi-Newton on the documented synthetic protocol, M in {10, 100}."""
    out = {}
    for m in (10, 100):
        y, _, vhat, phi0 = synthetic_transform_instance(
            m, 1000, 1e-3, RECOVERY_SEED
        )
        t0 = time.perf_counter()
        _, log = run_transform_only(y, vhat, phi0, "quasi-newton", RECOVERY_ITERS)
        elapsed = time.perf_counter() - t0
        out[m] = (np.array(log.objective), np.array(log.elapsed_s), elapsed)
    return out


@pytest.fixture(scope="session")
def audio_run():
    """Full TL-NMF on the synthetic three-sinusoid mixture (M=64, K=5)."""
    sig = sinusoid_mixture(duration_s=5.0, sample_rate=4000, seed=0)
    frames = audio.frame_signal(
        sig, frame_samples=64, overlap_fraction=0.5, window="sine"
    )
    config = TlnmfConfig(
        rank=5, penalty=1.0, n_outer=60, inner_tl_iters=5, seed=0,
        tolerance=0.0, transform_init="dct",
    )
    result = run_tlnmf(frames.data, config)
    return frames, result


class TestA1SyntheticRecovery:
    def test_recovery_thresholds(self, recovery_runs):
        time_bounds = {10: 10.0, 100: 120.0}
        lines = []
        ok = True
        for m, (obj, _, elapsed) in recovery_runs.items():
            threshold = 1e-8 * m * 1000
            reached = bool((obj <= threshold).any())
            within_time = elapsed < time_bounds[m]
            ok = ok and reached and within_time
            lines.append(
                f"M={m}: min L {obj.min():.3e} vs threshold {threshold:.1e} "
                f"(reached={reached}), {elapsed:.1f}s vs {time_bounds[m]:.0f}s"
            )
        report("A1 synthetic recovery", ok, "; ".join(lines))
        for m, (obj, _, elapsed) in recovery_runs.items():
            assert elapsed < time_bounds[m], f"M={m} exceeded its time budget"
        for m, (obj, _, _) in recovery_runs.items():
            assert obj.min() <= 1e-8 * m * 1000, (
                f"M={m}: quasi-Newton floor {obj.min():.3e} never reached "
                f"{1e-8 * m * 1000:.1e}; the 1e-3 perturbation leaves the "
                "global basin (local minimum, not an optimizer failure)"
            )


class TestA2BaselineDominance:
    def test_quasi_newton_beats_projected_gradient(self, recovery_runs):
        m = 100
        y, _, vhat, phi0 = synthetic_transform_instance(
            m, 1000, 1e-3, RECOVERY_SEED
        )
        t0 = time.perf_counter()
        _, log_pg = run_transform_only(
            y, vhat, phi0, "projected-gradient", RECOVERY_ITERS
        )
        pg_time = time.perf_counter() - t0
        pg_final = log_pg.objective[-1]

        qn_obj, qn_elapsed, _ = recovery_runs[m]
        crossed = qn_obj <= pg_final
        assert crossed.any(), "quasi-Newton never reached the PG final value"
        cross_iter = int(np.argmax(crossed))
        cross_time = float(qn_elapsed[cross_iter])
        iters_ok = cross_iter <= RECOVERY_ITERS / 5
        time_ok = cross_time <= pg_time / 5
        report(
            "A2 baseline dominance",
            iters_ok and time_ok,
            f"PG final {pg_final:.4e} after {RECOVERY_ITERS} iters/{pg_time:.2f}s; "
            f"QN matched it at iter {cross_iter} ({cross_time:.2f}s)",
        )
        assert iters_ok and time_ok


class TestA3GradientCorrectness:
    def test_finite_difference_agreement(self):
        rng = np.random.default_rng(1)
        m, n = 10, 14
        y = rng.uniform(0.5, 1.5, (m, n)) * rng.choice([-1.0, 1.0], (m, n))
        phi = np.eye(m)
        vhat = rng.uniform(0.5, 2.0, (m, n))
        g = topt.gradient(phi @ y, vhat)
        t = 1e-6
        worst = 0.0
        for _ in range(20):
            e = linalg.project_antisymmetric(rng.standard_normal((m, m)))
            lp = objective.transform_loss(
                y, linalg.expm_antisymmetric(t * e) @ phi, vhat
            )
            lm = objective.transform_loss(
                y, linalg.expm_antisymmetric(-t * e) @ phi, vhat
            )
            fd = (lp - lm) / (2 * t)
            an = float(np.sum(g * e))
            worst = max(worst, abs(fd - an) / max(1.0, abs(fd)))
        report("A3 gradient correctness", worst <= 1e-5,
               f"worst relative FD error {worst:.2e} over 20 directions")
        assert worst <= 1e-5


class TestA4HessianCorrectness:
    def test_oracle_and_approximation(self):
        rng = np.random.default_rng(2)
        m, n = 8, 12
        y = rng.uniform(0.5, 1.5, (m, n)) * rng.choice([-1.0, 1.0], (m, n))
        phi = np.eye(m)
        vhat = rng.uniform(0.5, 2.0, (m, n))
        x = phi @ y
        g = topt.gradient(x, vhat)
        hess = topt.full_hessian_oracle(x, vhat, g)
        l0 = objective.transform_loss(y, phi, vhat)
        t = 1e-4
        worst_fd = 0.0
        for _ in range(10):
            e = linalg.project_antisymmetric(rng.standard_normal((m, m)))
            lp = objective.transform_loss(
                y, linalg.expm_antisymmetric(t * e) @ phi, vhat
            )
            fd2 = (lp - l0 - t * float(np.sum(g * e))) * 2 / t ** 2
            qf = topt.hessian_quadratic_form(hess, e)
            worst_fd = max(worst_fd, abs(fd2 - qf) / max(1.0, abs(qf)))

        ht = topt.hessian_approx(x, vhat)
        worst_diag = 0.0
        for i in range(m):
            for j in range(m):
                first = hess[i, j, i, j] - (g[i, i] if j == i else 0.0)
                worst_diag = max(
                    worst_diag, abs(ht[i, j] - first) / max(1.0, abs(first))
                )
        ok = worst_fd <= 1e-3 and worst_diag <= 1e-12
        report("A4 Hessian correctness", ok,
               f"quadratic-form FD error {worst_fd:.2e}; "
               f"diagonal restriction error {worst_diag:.2e}")
        assert worst_fd <= 1e-3
        assert worst_diag <= 1e-12


class TestA5HessianPositivity:
    def test_hundred_random_instances(self):
        rng = np.random.default_rng(3)
        worst = np.inf
        for _ in range(100):
            m = int(rng.integers(2, 12))
            n = int(rng.integers(2, 30))
            x = rng.standard_normal((m, n)) * rng.uniform(1e-3, 10)
            vhat = rng.uniform(1e-8, 10.0, (m, n))
            worst = min(worst, topt.hessian_approx(x, vhat).min())
        report("A5 Hessian positivity", worst > 0.0,
               f"smallest entry over 100 instances {worst:.3e}")
        assert worst > 0.0


class TestA6WolfeCertification:
    def test_hundred_step_run(self):
        y, _, vhat, phi0 = synthetic_transform_instance(12, 150, 1e-2, 0)
        params = topt.LineSearchParams()
        phi = phi0
        accepted = 0
        violations = []
        for it in range(100):
            phi, s = topt.quasi_newton_transform_step(y, phi, vhat, params)
            if not s.accepted:
                continue
            accepted += 1
            sufficient = s.loss_after <= (
                s.loss_before + params.c1 * s.eta * s.slope_before
            )
            curvature = abs(s.slope_after) <= params.c2 * abs(s.slope_before)
            if not (s.wolfe_certified and sufficient and curvature):
                violations.append((it, s))
        ok = not violations and accepted > 0
        report("A6 Wolfe certification", ok,
               f"{accepted} accepted steps, {len(violations)} violations")
        assert accepted > 0
        assert not violations


class TestA7AlternatingMonotonicity:
    def test_objective_non_increasing(self, audio_run):
        _, result = audio_run
        obj = np.array(result.log.objective)
        assert len(obj) >= 50
        increases = (obj[1:] - obj[:-1]) / np.abs(obj[:-1])
        worst = float(increases.max())
        report("A7 alternating minimization monotonicity", worst <= 1e-10,
               f"worst relative increase {worst:.3e} over {len(obj)} iterations")
        assert worst <= 1e-10


class TestA8ConstraintSuite:
    def test_orthogonality_drift_after_1000_steps(self):
        rng = np.random.default_rng(4)
        m, n = 16, 120
        y = rng.standard_normal((m, n))
        vhat = rng.uniform(0.5, 2.0, (m, n))  # not realizable: keeps moving
        phi0 = linalg.random_orthogonal(m, 0)
        phi, _ = run_transform_only(y, vhat, phi0, "quasi-newton", 1000)
        drift = linalg.orthogonality_defect(phi)
        report("A8a orthogonality drift", drift <= 1e-10,
               f"max|PhiPhi^T - I| = {drift:.3e} after 1000 steps")
        assert drift <= 1e-10

    def test_dictionary_columns_throughout(self, audio_run):
        frames, result = audio_run
        # final state plus a fresh short run checked iteration by iteration
        assert np.max(np.abs(result.w.sum(axis=0) - 1.0)) <= 1e-10
        rng = np.random.default_rng(5)
        y = rng.standard_normal((12, 80))
        w, h = nmf.init_factors(12, 4, 80, 0)
        phi = linalg.random_orthogonal(12, 1)
        worst = 0.0
        for _ in range(30):
            v = np.maximum((phi @ y) ** 2, objective.EPS)
            w, h = nmf.nmf_step(v, w, h, 1.0)
            phi, _ = topt.transform_learning(np.maximum(w @ h, objective.EPS),
                                             y, phi, 2)
            worst = max(worst, float(np.max(np.abs(w.sum(axis=0) - 1.0))))
            assert np.min(h) >= 0.0
        report("A8b dictionary normalization", worst <= 1e-10,
               f"worst |column sum - 1| = {worst:.3e} across 30 iterations")
        assert worst <= 1e-10

    def test_energy_conservation(self, audio_run):
        frames, result = audio_run
        profile = analysis.energy_profile(result.phi, frames.data)
        total = (frames.data ** 2).sum()
        err = abs(profile.energies.sum() - total) / total
        report("A8c energy conservation", err <= 1e-8,
               f"relative energy error {err:.3e}")
        assert err <= 1e-8


class TestA9EnergyConcentration:
    def test_learned_transform_concentrates(self, audio_run):
        frames, result = audio_run
        y = frames.data
        m = y.shape[0]
        learned = analysis.energy_profile(result.phi, y).sorted_cumulative
        dct = analysis.energy_profile(linalg.dct_matrix(m), y).sorted_cumulative
        rnd = analysis.energy_profile(
            linalg.random_orthogonal(m, 123), y
        ).sorted_cumulative
        top = max(1, round(0.1 * m))
        dominates_random = bool(np.all(learned >= rnd - 1e-9))
        beats_dct_top = bool(np.all(learned[:top] >= dct[:top] - 1e-3))
        report(
            "A9 energy concentration",
            dominates_random and beats_dct_top,
            f"learned cum[:3]={np.round(learned[:3], 3).tolist()}, "
            f"dct cum[:3]={np.round(dct[:3], 3).tolist()}, "
            f"random cum[:3]={np.round(rnd[:3], 3).tolist()}",
        )
        assert dominates_random
        assert beats_dct_top


class TestA10AtomMatching:
    def test_hungarian_against_brute_force(self):
        rng = np.random.default_rng(6)
        worst = 0.0
        for k in range(2, 7):
            a = linalg.random_orthogonal(9, k)[:k]
            b = linalg.random_orthogonal(9, 50 + k)[:k]
            rep = analysis.match_atoms(a, b)
            best = max(
                sum(abs(rep.correlation[perm[i], i]) for i in range(k))
                for perm in itertools.permutations(range(k))
            )
            worst = max(worst, abs(float(np.trace(rep.permuted_abs)) - best))
        a = linalg.random_orthogonal(12, 7)[:6]
        rep = analysis.match_atoms(a, a[rng.permutation(6)])
        perm_err = abs(float(np.trace(rep.permuted_abs)) - 6.0)
        ok = worst <= 1e-10 and perm_err <= 1e-8
        report("A10 atom matching", ok,
               f"assignment vs brute force gap {worst:.2e}; "
               f"permutation recovery error {perm_err:.2e}")
        assert worst <= 1e-10
        assert perm_err <= 1e-8
