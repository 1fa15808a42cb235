"""Multiplicative majorization-minimization updates for the NMF factors.

Both updates are the classical IS-NMF multiplicative rules with the L1
penalty folded into the denominators, each followed (inside nmf_step) by
a joint renormalization that keeps every dictionary column at unit L1
mass without changing the product W @ H. Each update is guaranteed not
to increase the penalized objective at fixed transform.
"""

import numpy as np

from .errors import DegenerateColumn, DimensionMismatch, InvalidParameter

# Floor applied after each multiplicative update; exact zeros are
# absorbing states for multiplicative rules.
EPS_NMF = 1e-15


def _check_shapes(v, w, h):
    if w.ndim != 2 or h.ndim != 2 or v.ndim != 2:
        raise DimensionMismatch("V, W, H must all be 2-D")
    m, n = v.shape
    if w.shape[0] != m or h.shape[1] != n or w.shape[1] != h.shape[0]:
        raise DimensionMismatch(
            f"shapes V{v.shape}, W{w.shape}, H{h.shape} are inconsistent"
        )


def init_factors(m, k, n, seed):
    """Seeded uniform-(0, 1] factors, jointly normalized."""
    if k < 1 or m < 1 or n < 1:
        raise InvalidParameter("factor dimensions must be positive")
    rng = np.random.default_rng(seed)
    w = 1.0 - rng.random((m, k))
    h = 1.0 - rng.random((k, n))
    return normalize_joint(w, h)


def update_h(v, w, h, lam):
    """One multiplicative update of the activations at fixed W."""
    _check_shapes(v, w, h)
    m, k = w.shape
    wh = w @ h
    num = w.T @ (wh ** -2 * v)
    den = w.T @ (wh ** -1) + lam * (m / k)
    return np.maximum(h * np.sqrt(num / den), EPS_NMF)


def update_w(v, w, h, lam):
    """One multiplicative update of the dictionary at fixed H.

    The penalty enters through the row sums of H (the constant matrix
    times H.T), which is what the sum-to-one change of variable yields.
    Callers should renormalize afterwards; see normalize_joint.
    """
    _check_shapes(v, w, h)
    m, k = w.shape
    wh = w @ h
    num = (wh ** -2 * v) @ h.T
    den = (wh ** -1) @ h.T + lam * (m / k) * h.sum(axis=1)
    return np.maximum(w * np.sqrt(num / den), EPS_NMF)


def normalize_joint(w, h):
    """Rescale so each column of W has unit L1 norm, preserving W @ H."""
    sums = w.sum(axis=0)
    if np.min(sums) < EPS_NMF:
        raise DegenerateColumn("a dictionary column has vanishing mass")
    return w / sums, h * sums[:, None]


def nmf_step(v, w, h, lam, n_inner=1):
    """n_inner rounds of (update_h, update_w, normalize_joint).

    Leaves the penalized objective at fixed transform non-increasing.
    """
    if n_inner < 1:
        raise InvalidParameter(f"n_inner must be >= 1, got {n_inner}")
    for _ in range(n_inner):
        h = update_h(v, w, h, lam)
        w = update_w(v, w, h, lam)
        w, h = normalize_joint(w, h)
    return w, h
