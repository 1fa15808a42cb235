import os
import subprocess
import sys

import numpy as np
import pytest

import tlnmf.kernels as kernels
import tlnmf.kernels.numpy_backend as numpy_backend

numba_backend = pytest.importorskip("tlnmf.kernels.numba_backend")

EPS = 1e-12


def instances():
    rng = np.random.default_rng(0)
    shapes = [(1, 1), (4, 7), (23, 57)]
    for shape in shapes:
        x = rng.standard_normal(shape)
        # sprinkle near-zero and exactly-zero entries to exercise guards
        x.flat[:: max(1, x.size // 5)] *= 1e-9
        if x.size > 3:
            x.flat[3] = 0.0
        vhat = rng.uniform(1e-10, 3.0, shape)
        t = rng.standard_normal(shape)
        yield np.ascontiguousarray(x), np.ascontiguousarray(vhat), np.ascontiguousarray(t)


class TestBackendEquivalence:
    def test_is_div_sum(self):
        for _, vhat, _ in instances():
            b = vhat + 0.5
            a = numpy_backend.is_div_sum(vhat, b)
            assert abs(a - numba_backend.is_div_sum(vhat, b)) <= 1e-12 * max(1, abs(a))

    def test_fit_loss(self):
        for x, vhat, _ in instances():
            a = numpy_backend.fit_loss(x, vhat, EPS)
            b = numba_backend.fit_loss(x, vhat, EPS)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(a))

    def test_fit_loss_and_slope(self):
        for x, vhat, t in instances():
            la, sa = numpy_backend.fit_loss_and_slope(x, vhat, t, EPS)
            lb, sb = numba_backend.fit_loss_and_slope(x, vhat, t, EPS)
            assert abs(la - lb) <= 1e-12 * max(1.0, abs(la))
            assert abs(sa - sb) <= 1e-9 * max(1.0, abs(sa))

    def test_weights(self):
        for x, vhat, _ in instances():
            ga = numpy_backend.gradient_weights(x, vhat, EPS)
            gb = numba_backend.gradient_weights(x, vhat, EPS)
            assert np.array_equal(ga, gb)
            ha = numpy_backend.hessian_weights(x, vhat, EPS)
            hb = numba_backend.hessian_weights(x, vhat, EPS)
            assert np.array_equal(ha, hb)


class TestGuards:
    def test_loss_finite_at_exact_zeros(self):
        x = np.zeros((3, 3))
        vhat = np.full((3, 3), 0.5)
        for impl in (numpy_backend, numba_backend):
            assert np.isfinite(impl.fit_loss(x, vhat, EPS))
            g = impl.gradient_weights(x, vhat, EPS)
            assert np.all(np.isfinite(g))

    def test_slope_consistent_with_loss(self):
        # finite difference of fit_loss along t matches the fused slope
        rng = np.random.default_rng(1)
        x = rng.uniform(0.5, 1.5, (5, 9))
        vhat = rng.uniform(0.5, 2.0, (5, 9))
        t = rng.standard_normal((5, 9))
        h = 1e-7
        for impl in (numpy_backend, numba_backend):
            _, slope = impl.fit_loss_and_slope(x, vhat, t, EPS)
            fd = (
                impl.fit_loss(x + h * t, vhat, EPS)
                - impl.fit_loss(x - h * t, vhat, EPS)
            ) / (2 * h)
            assert abs(fd - slope) <= 1e-5 * max(1.0, abs(fd))


class TestDispatch:
    def test_active_backend_named(self):
        assert kernels.backend_name() in ("numpy", "numba")

    @pytest.mark.parametrize("backend", ["numpy", "numba"])
    def test_env_flag_selects_backend(self, backend):
        code = (
            "import tlnmf.kernels as k; print(k.backend_name())"
        )
        env = dict(os.environ, TLNMF_BACKEND=backend)
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.returncode == 0, out.stderr
        assert out.stdout.strip() == backend

    def test_bad_env_flag_rejected(self):
        code = "import tlnmf.kernels"
        env = dict(os.environ, TLNMF_BACKEND="cuda")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.returncode != 0
        assert "TLNMF_BACKEND" in out.stderr
