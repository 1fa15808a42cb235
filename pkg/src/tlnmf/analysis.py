"""Post-hoc analysis of learned transforms.

Energy concentration: how much of the signal's energy each atom (row of
the transform) captures, summarized by the descending cumulative curve.
Cross-run similarity: correlations between the top atoms of two learned
transforms, permuted by maximum-weight assignment so that matched pairs
land on the diagonal.
"""

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .audio import FramesMatrix
from .errors import DimensionMismatch, InvalidCount, InvalidParameter


def _frames_array(y):
    if isinstance(y, FramesMatrix):
        y = y.data
    return np.asarray(y, dtype=np.float64)


@dataclass(frozen=True)
class EnergyProfile:
    """Per-atom energies e_i = sum_n (phi_i . y_n)^2 and their cumulative curve."""

    energies: np.ndarray  # (M,), original atom order
    order: np.ndarray  # atom indices sorted by descending energy
    sorted_cumulative: np.ndarray  # normalized cumulative sums along `order`


@dataclass(frozen=True)
class SimilarityReport:
    """Assignment-permuted correlations between two atom sets."""

    selected_count: int
    correlation: np.ndarray  # T = A @ B.T
    permutation: np.ndarray  # row i of the permuted matrix is T[permutation[i]]
    permuted_abs: np.ndarray  # |T[permutation]|


def energy_profile(phi, y):
    """Energy contributed by each atom of ``phi`` on the frames ``y``."""
    y = _frames_array(y)
    phi = np.asarray(phi, dtype=np.float64)
    if phi.ndim != 2 or phi.shape != (y.shape[0], y.shape[0]):
        raise DimensionMismatch(
            f"transform shape {phi.shape} does not match frame length {y.shape[0]}"
        )
    energies = np.sum((phi @ y) ** 2, axis=1)
    order = np.argsort(-energies, kind="stable")
    total = energies.sum()
    if total <= 0.0:
        raise InvalidParameter("frames matrix has zero energy")
    cumulative = np.cumsum(energies[order]) / total
    return EnergyProfile(energies=energies, order=order, sorted_cumulative=cumulative)


def top_atoms(phi, y, count):
    """The ``count`` most-contributing rows of ``phi``, by descending energy.

    Ties break toward the lower original row index.
    """
    phi = np.asarray(phi, dtype=np.float64)
    if not 1 <= count <= phi.shape[0]:
        raise InvalidCount(f"count must be in [1, {phi.shape[0]}], got {count}")
    profile = energy_profile(phi, y)
    return phi[profile.order[:count]]


def match_atoms(a, b):
    """Pair the atoms of two transforms by maximum-weight assignment.

    T = a @ b.T holds the correlations; the returned permutation reorders
    the rows of T so that the assignment maximizing sum |T[i, sigma(i)]|
    sits on the diagonal of the permuted matrix.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 2:
        raise DimensionMismatch(f"atom matrices must match, got {a.shape}, {b.shape}")
    t = a @ b.T
    k = t.shape[0]
    row_ind, col_ind = scipy.optimize.linear_sum_assignment(-np.abs(t))
    permutation = np.empty(k, dtype=np.intp)
    permutation[col_ind] = row_ind
    return SimilarityReport(
        selected_count=k,
        correlation=t,
        permutation=permutation,
        permuted_abs=np.abs(t[permutation]),
    )


def block_span_score(report, block_size):
    """Frobenius norm of each diagonal block of the permuted correlations.

    With unit-norm atoms, a b x b block whose two atom sets span the same
    subspace has squared norm b; unrelated atoms give norm near 0. A
    trailing smaller block covers the remainder when block_size does not
    divide the atom count.
    """
    if block_size not in (1, 2):
        raise InvalidParameter(f"block_size must be 1 or 2, got {block_size}")
    permuted = report.permuted_abs
    k = permuted.shape[0]
    norms = []
    for start in range(0, k, block_size):
        stop = min(start + block_size, k)
        norms.append(float(np.linalg.norm(permuted[start:stop, start:stop])))
    return np.array(norms)
