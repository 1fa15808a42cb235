"""Itakura-Saito divergence and the penalized transform-learning objective.

The objective splits into a fit term (IS divergence between the power
spectrogram of the transformed frames and the factorization W @ H) and a
sparsity penalty lam * (M / K) * ||H||_1. The M / K scaling keeps the two
terms comparable across problem sizes.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, InvalidParameter, NonFinite

# Numerical floor applied to squared transformed data and to the
# factorization before divisions and logs.
EPS = 1e-12


@dataclass(frozen=True)
class ObjectiveValue:
    """Decomposed objective: total = fit + penalty."""

    fit: float
    penalty: float

    @property
    def total(self):
        return self.fit + self.penalty


def is_divergence(a, b):
    """Summed Itakura-Saito divergence sum_ij a/b - log(a/b) - 1.

    Nonnegative, zero iff a == b elementwise, and scale invariant. The
    denominator must stay above the EPS floor; entries below it would
    make individual terms blow up, so they are rejected.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 2:
        raise DimensionMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
    if b.min(initial=np.inf) < EPS:
        raise NonFinite(f"denominator entries below the {EPS} floor")
    value = kernels.is_div_sum(np.ascontiguousarray(a), np.ascontiguousarray(b))
    if not math.isfinite(value):
        raise NonFinite("IS divergence overflowed")
    return value


def tlnmf_objective(y, phi, w, h, lam):
    """Full objective: IS fit of max((phi @ y)^2, EPS) against w @ h, plus penalty.

    Parameters
    ----------
    y : (M, N) frames matrix
    phi : (M, M) orthogonal transform
    w : (M, K) nonnegative dictionary
    h : (K, N) nonnegative activations
    lam : float, penalty weight, >= 0
    """
    y, phi, w, h = (np.asarray(x, dtype=np.float64) for x in (y, phi, w, h))
    m, n = y.shape
    if phi.shape != (m, m):
        raise DimensionMismatch(f"transform shape {phi.shape} does not match M={m}")
    if w.ndim != 2 or h.ndim != 2 or w.shape[0] != m or w.shape[1] != h.shape[0] \
            or h.shape[1] != n:
        raise DimensionMismatch(
            f"factor shapes {w.shape}, {h.shape} inconsistent with data {y.shape}"
        )
    if lam < 0:
        raise InvalidParameter(f"penalty weight must be >= 0, got {lam}")
    k = w.shape[1]
    x = phi @ y
    v = np.maximum(x * x, EPS)
    fit = is_divergence(v, w @ h)
    penalty = lam * (m / k) * float(np.sum(np.abs(h)))
    return ObjectiveValue(fit=fit, penalty=penalty)


def transform_loss(y, phi, vhat):
    """Fit term as a function of the transform alone, with w @ h frozen as vhat.

    Equals tlnmf_objective(...).fit whenever vhat = w @ h entrywise.
    """
    y = np.asarray(y, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    vhat = np.asarray(vhat, dtype=np.float64)
    m, n = y.shape
    if phi.shape != (m, m):
        raise DimensionMismatch(f"transform shape {phi.shape} does not match M={m}")
    if vhat.shape != (m, n):
        raise DimensionMismatch(f"vhat shape {vhat.shape} does not match {(m, n)}")
    return transform_loss_from_x(phi @ y, vhat)


def transform_loss_from_x(x, vhat):
    """Same loss, taking the precomputed transformed data X = phi @ y."""
    value = kernels.fit_loss(
        np.ascontiguousarray(x), np.ascontiguousarray(vhat), EPS
    )
    if not math.isfinite(value):
        raise NonFinite("transform loss overflowed")
    return value
