"""Pure-numpy implementations of the hot elementwise kernels.

These are the reference implementations; the numba backend mirrors them
loop-for-loop. Matrix products stay outside the kernels (BLAS handles
them); what lives here are the fused elementwise passes over M x N
arrays that would otherwise allocate several temporaries per call.

All kernels take the numerical floor ``eps`` explicitly. Reciprocals of
the transformed data x are guarded at sqrt(eps) in magnitude, and the
squared data and the factorization are floored at eps, so every kernel
returns finite values for finite inputs.
"""

import numpy as np

NAME = "numpy"


def is_div_sum(a, b):
    """Sum of elementwise Itakura-Saito divergences a/b - log(a/b) - 1."""
    r = a / b
    return float(np.sum(r - np.log(r) - 1.0))


def _guarded_abs(x, eps):
    return np.maximum(np.abs(x), np.sqrt(eps))


def fit_loss(x, vhat, eps):
    """Transform-domain IS loss: sum of d_IS(max(x^2, eps), max(vhat, eps))."""
    p = np.square(_guarded_abs(x, eps))
    v = np.maximum(vhat, eps)
    r = p / v
    return float(np.sum(r - np.log(r) - 1.0))


def fit_loss_and_slope(x, vhat, t, eps):
    """Loss as in fit_loss plus the directional term sum(f'(x) * t).

    ``t`` holds the derivative of each entry of x w.r.t. the line-search
    parameter, so the second return value is the slope of the loss along
    the search path.
    """
    xg = _guarded_abs(x, eps)
    sg = np.where(x < 0.0, -xg, xg)
    v = np.maximum(vhat, eps)
    r = (xg * xg) / v
    loss = float(np.sum(r - np.log(r) - 1.0))
    slope = float(np.sum((2.0 * (sg / v - 1.0 / sg)) * t))
    return loss, slope


def gradient_weights(x, vhat, eps):
    """Elementwise f'(x) = 2 (x / vhat - 1 / x), with guarded reciprocal."""
    xg = _guarded_abs(x, eps)
    sg = np.where(x < 0.0, -xg, xg)
    v = np.maximum(vhat, eps)
    return 2.0 * (sg / v - 1.0 / sg)


def hessian_weights(x, vhat, eps):
    """Elementwise f''(x) = 2 (1 / vhat + 1 / x^2), with guarded reciprocal."""
    p = np.square(_guarded_abs(x, eps))
    v = np.maximum(vhat, eps)
    return 2.0 * (1.0 / v + 1.0 / p)
