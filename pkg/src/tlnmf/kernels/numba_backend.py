"""Numba-jitted kernels, semantically identical to the numpy backend.

Single fused loop per kernel, no temporaries. fastmath stays off and the
loops are serial so results are reproducible; agreement with the numpy
backend is within reduction-order rounding (see tests).
"""

import math

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def is_div_sum(a, b):
    m, n = a.shape
    total = 0.0
    for i in range(m):
        for j in range(n):
            r = a[i, j] / b[i, j]
            total += r - math.log(r) - 1.0
    return total


@njit(cache=True)
def fit_loss(x, vhat, eps):
    sqrt_eps = math.sqrt(eps)
    m, n = x.shape
    total = 0.0
    for i in range(m):
        for j in range(n):
            xa = abs(x[i, j])
            if xa < sqrt_eps:
                xa = sqrt_eps
            v = vhat[i, j]
            if v < eps:
                v = eps
            r = (xa * xa) / v
            total += r - math.log(r) - 1.0
    return total


@njit(cache=True)
def fit_loss_and_slope(x, vhat, t, eps):
    sqrt_eps = math.sqrt(eps)
    m, n = x.shape
    loss = 0.0
    slope = 0.0
    for i in range(m):
        for j in range(n):
            xa = abs(x[i, j])
            if xa < sqrt_eps:
                xa = sqrt_eps
            sg = -xa if x[i, j] < 0.0 else xa
            v = vhat[i, j]
            if v < eps:
                v = eps
            r = (xa * xa) / v
            loss += r - math.log(r) - 1.0
            slope += 2.0 * (sg / v - 1.0 / sg) * t[i, j]
    return loss, slope


@njit(cache=True)
def gradient_weights(x, vhat, eps):
    sqrt_eps = math.sqrt(eps)
    m, n = x.shape
    out = np.empty((m, n))
    for i in range(m):
        for j in range(n):
            xa = abs(x[i, j])
            if xa < sqrt_eps:
                xa = sqrt_eps
            sg = -xa if x[i, j] < 0.0 else xa
            v = vhat[i, j]
            if v < eps:
                v = eps
            out[i, j] = 2.0 * (sg / v - 1.0 / sg)
    return out


@njit(cache=True)
def hessian_weights(x, vhat, eps):
    sqrt_eps = math.sqrt(eps)
    m, n = x.shape
    out = np.empty((m, n))
    for i in range(m):
        for j in range(n):
            xa = abs(x[i, j])
            if xa < sqrt_eps:
                xa = sqrt_eps
            v = vhat[i, j]
            if v < eps:
                v = eps
            out[i, j] = 2.0 * (1.0 / v + 1.0 / (xa * xa))
    return out
