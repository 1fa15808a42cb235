"""Dense linear-algebra primitives for optimization over orthogonal matrices.

All functions take and return plain float64 ndarrays. Orthogonality is
understood in the row sense: Q is orthogonal when Q @ Q.T = I within
ORTHOGONALITY_TOL in max norm.
"""

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NotAntisymmetric, SingularInput, InvalidParameter

# Largest tolerated value of max|Q Q^T - I| on any orthogonal output.
ORTHOGONALITY_TOL = 1e-8

# Antisymmetry precondition bound for the matrix exponential.
ANTISYMMETRY_TOL = 1e-10

# Relative smallest-singular-value cutoff below which the polar
# projection refuses its input.
SINGULARITY_CUTOFF = 1e-12


def _as_square(a, name="matrix"):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square 2-D, got shape {a.shape}")
    return a


def orthogonality_defect(q):
    """max|Q Q^T - I|, the measured deviation from row orthonormality."""
    q = _as_square(q, "Q")
    return float(np.max(np.abs(q @ q.T - np.eye(q.shape[0]))))


def expm_antisymmetric(e):
    """Matrix exponential of an antisymmetric matrix.

    exp(E) is orthogonal whenever E + E.T = 0, so this is the retraction
    used by every transform update. Computed with scipy's
    scaling-and-squaring Pade implementation.

    Raises
    ------
    NotAntisymmetric
        If max|E + E.T| exceeds ANTISYMMETRY_TOL.
    """
    e = _as_square(e, "E")
    if np.max(np.abs(e + e.T)) > ANTISYMMETRY_TOL:
        raise NotAntisymmetric("input must satisfy E + E.T = 0")
    return scipy.linalg.expm(e)


def project_antisymmetric(c):
    """Orthogonal projection (C - C.T) / 2 onto the antisymmetric matrices."""
    c = _as_square(c, "C")
    return (c - c.T) / 2.0


def project_orthogonal(c):
    """Polar-factor projection of a nonsingular matrix onto the orthogonal set.

    Returns (C C^T)^(-1/2) C, computed as U V^T from the SVD C = U S V^T.

    Raises
    ------
    SingularInput
        If the smallest singular value is below SINGULARITY_CUTOFF times
        the largest.
    """
    c = _as_square(c, "C")
    u, s, vt = np.linalg.svd(c)
    if s[-1] <= SINGULARITY_CUTOFF * s[0]:
        raise SingularInput("matrix is numerically singular; no polar factor")
    return u @ vt


def random_orthogonal(dim, seed):
    """Haar-distributed orthogonal matrix, deterministic in ``seed``.

    QR of a standard-normal matrix with the R diagonal forced positive,
    which both fixes the sign ambiguity and makes the law Haar.
    """
    if dim < 1:
        raise InvalidParameter(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    d = np.sign(np.diag(r))
    d[d == 0.0] = 1.0
    return q * d


def random_antisymmetric(dim, rng, scale=1.0):
    """scale * antisymmetric part of a standard-normal matrix."""
    if dim < 1:
        raise InvalidParameter(f"dim must be >= 1, got {dim}")
    return scale * project_antisymmetric(rng.standard_normal((dim, dim)))


def dct_matrix(dim):
    """Orthonormal DCT-II matrix: entry (k, n) is c_k cos(pi (n + 1/2) k / M)."""
    if dim < 1:
        raise InvalidParameter(f"dim must be >= 1, got {dim}")
    k = np.arange(dim)[:, None]
    n = np.arange(dim)[None, :]
    mat = np.cos(np.pi * (n + 0.5) * k / dim)
    mat[0] *= np.sqrt(1.0 / dim)
    mat[1:] *= np.sqrt(2.0 / dim)
    return mat
