import itertools

import numpy as np
import pytest

from tlnmf import analysis, linalg
from tlnmf.errors import DimensionMismatch, InvalidCount, InvalidParameter


def brute_force_assignment(t):
    """Exhaustive max of sum |t[i, sigma(i)]| over permutations."""
    k = t.shape[0]
    best, best_perm = -np.inf, None
    for perm in itertools.permutations(range(k)):
        score = sum(abs(t[perm[i], i]) for i in range(k))
        if score > best:
            best, best_perm = score, perm
    return best, best_perm


class TestEnergyProfile:
    def test_total_energy_conserved(self):
        rng = np.random.default_rng(0)
        y = rng.standard_normal((20, 50))
        phi = linalg.random_orthogonal(20, 0)
        profile = analysis.energy_profile(phi, y)
        total = (y ** 2).sum()
        assert abs(profile.energies.sum() - total) <= 1e-8 * total
        assert abs(profile.sorted_cumulative[-1] - 1.0) <= 1e-12

    def test_single_active_row(self):
        y = np.zeros((5, 8))
        y[2] = np.arange(1.0, 9.0)
        profile = analysis.energy_profile(np.eye(5), y)
        assert profile.order[0] == 2
        assert abs(profile.energies[2] - (y ** 2).sum()) < 1e-12
        assert profile.energies[[0, 1, 3, 4]].max() == 0.0
        assert abs(profile.sorted_cumulative[0] - 1.0) < 1e-12

    def test_cumulative_monotone(self):
        rng = np.random.default_rng(1)
        y = rng.standard_normal((10, 30))
        profile = analysis.energy_profile(linalg.random_orthogonal(10, 1), y)
        assert np.all(np.diff(profile.sorted_cumulative) >= -1e-15)

    def test_random_near_diagonal_on_iid_data(self):
        # no transform concentrates iid Gaussian frames: the cumulative
        # curve of a Haar-random transform hugs the diagonal
        rng = np.random.default_rng(2)
        m = 100
        y = rng.standard_normal((m, 400))
        rnd_cum = analysis.energy_profile(
            linalg.random_orthogonal(m, 3), y
        ).sorted_cumulative
        diag = np.arange(1, m + 1) / m
        assert np.max(np.abs(rnd_cum - diag)) < 0.1

    def test_dct_beats_random_on_lowpass(self):
        # smooth (lowpass) frames: the DCT packs energy into few atoms
        # while a Haar-random transform spreads it
        rng = np.random.default_rng(2)
        m, n = 100, 200
        base = rng.standard_normal((m, n))
        y = np.cumsum(np.cumsum(base, axis=0), axis=0)
        y /= np.abs(y).max()
        dct_cum = analysis.energy_profile(linalg.dct_matrix(m), y).sorted_cumulative
        rnd_cum = analysis.energy_profile(
            linalg.random_orthogonal(m, 3), y
        ).sorted_cumulative
        top = m // 10
        assert np.all(dct_cum[:top] > rnd_cum[:top])

    def test_sign_flip_invariance(self):
        rng = np.random.default_rng(4)
        y = rng.standard_normal((8, 20))
        phi = linalg.random_orthogonal(8, 4)
        flipped = phi * rng.choice([-1.0, 1.0], 8)[:, None]
        a = analysis.energy_profile(phi, y)
        b = analysis.energy_profile(flipped, y)
        assert np.allclose(a.energies, b.energies, atol=1e-12)


class TestTopAtoms:
    def test_count_equals_m_reorders(self):
        rng = np.random.default_rng(5)
        y = rng.standard_normal((6, 15))
        phi = linalg.random_orthogonal(6, 5)
        atoms = analysis.top_atoms(phi, y, 6)
        profile = analysis.energy_profile(phi, y)
        assert np.array_equal(atoms, phi[profile.order])

    def test_count_one_is_argmax(self):
        rng = np.random.default_rng(6)
        y = rng.standard_normal((6, 15))
        phi = linalg.random_orthogonal(6, 6)
        atom = analysis.top_atoms(phi, y, 1)
        profile = analysis.energy_profile(phi, y)
        assert np.array_equal(atom[0], phi[np.argmax(profile.energies)])

    def test_tie_break_by_row_index(self):
        y = np.eye(4)  # every atom of the identity has equal energy
        atoms = analysis.top_atoms(np.eye(4), y, 3)
        assert np.array_equal(atoms, np.eye(4)[:3])

    def test_invalid_count(self):
        y = np.ones((3, 4))
        with pytest.raises(InvalidCount):
            analysis.top_atoms(np.eye(3), y, 4)
        with pytest.raises(InvalidCount):
            analysis.top_atoms(np.eye(3), y, 0)


class TestMatchAtoms:
    def test_self_match(self):
        a = linalg.random_orthogonal(8, 7)[:5]
        report = analysis.match_atoms(a, a)
        assert np.all(np.diag(report.permuted_abs) >= 1.0 - 1e-10)
        assert np.array_equal(np.sort(report.permutation), np.arange(5))

    def test_recovers_known_permutation(self):
        rng = np.random.default_rng(8)
        a = linalg.random_orthogonal(10, 8)[:6]
        perm = rng.permutation(6)
        b = a[perm]
        report = analysis.match_atoms(a, b)
        assert abs(np.trace(report.permuted_abs) - 6.0) <= 1e-8

    def test_hungarian_equals_brute_force(self):
        rng = np.random.default_rng(9)
        for k in (2, 3, 4, 5, 6):
            a = linalg.random_orthogonal(8, k)[:k]
            b = linalg.random_orthogonal(8, 100 + k)[:k]
            report = analysis.match_atoms(a, b)
            best, _ = brute_force_assignment(report.correlation)
            got = float(np.trace(report.permuted_abs))
            assert abs(got - best) <= 1e-10

    def test_rotated_pair_forms_block(self):
        # two atoms rotated inside their span: diagonal entries drop
        # below 1 but the 2x2 block keeps unit-squared Frobenius mass
        a = linalg.random_orthogonal(6, 10)[:4]
        theta = 0.4
        rot = np.array(
            [[np.cos(theta), np.sin(theta)], [-np.sin(theta), np.cos(theta)]]
        )
        b = a.copy()
        b[2:4] = rot @ a[2:4]
        report = analysis.match_atoms(a, b)
        blocks = analysis.block_span_score(report, 2)
        diag = np.diag(report.permuted_abs)
        assert (diag < 1.0 - 1e-6).sum() == 2
        # the rotated pair fills one 2x2 block with squared norm 2
        assert abs(np.max(blocks) ** 2 - 2.0) <= 1e-8

    def test_permutation_invariance(self):
        rng = np.random.default_rng(11)
        a = linalg.random_orthogonal(9, 12)[:5]
        b = linalg.random_orthogonal(9, 13)[:5]
        base = analysis.match_atoms(a, b)
        perm = rng.permutation(5)
        shuffled = analysis.match_atoms(a, b[perm])
        # same pairing up to relabeling of b's rows: compare diagonals
        assert np.allclose(
            np.sort(np.diag(base.permuted_abs)),
            np.sort(np.diag(shuffled.permuted_abs)),
            atol=1e-10,
        )

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            analysis.match_atoms(np.ones((3, 4)), np.ones((2, 4)))


class TestBlockSpanScore:
    def test_identical_atoms_unit_blocks(self):
        a = linalg.random_orthogonal(7, 14)[:4]
        report = analysis.match_atoms(a, a)
        blocks = analysis.block_span_score(report, 1)
        assert np.allclose(blocks, 1.0, atol=1e-10)

    def test_unrelated_atoms_near_zero(self):
        # orthogonal complements: a uses the first rows, b the last ones
        q = linalg.random_orthogonal(10, 15)
        report = analysis.match_atoms(q[:3], q[7:])
        blocks = analysis.block_span_score(report, 1)
        assert np.max(blocks) < 1e-10

    def test_invalid_block_size(self):
        a = linalg.random_orthogonal(5, 16)[:4]
        report = analysis.match_atoms(a, a)
        with pytest.raises(InvalidParameter):
            analysis.block_span_score(report, 3)
