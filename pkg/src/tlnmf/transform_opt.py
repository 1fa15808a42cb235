"""Transform optimization on the orthogonal manifold.

Moves are parametrized multiplicatively: phi <- exp(eta * E) @ phi with E
antisymmetric, which keeps the iterate exactly orthogonal. The gradient
and the Hessian of the loss in this parametrization are taken at E = 0;
the quasi-Newton step replaces the full fourth-order Hessian tensor by a
positive elementwise approximation that acts as a diagonal operator, so
"solving" the Newton system is an elementwise division. A full Hessian
tensor is kept only as a small-scale oracle for tests.

The step size is certified by strong Wolfe conditions computed with the
classical bracket-and-zoom interpolation search.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    InvalidParameter,
    LineSearchWarning,
    NonFinite,
    NotADescentDirection,
    SizeGuard,
)
from .linalg import expm_antisymmetric, project_antisymmetric, project_orthogonal
from .objective import EPS, transform_loss_from_x

# Proportion of the zoom interval kept clear of each endpoint; cubic
# candidates landing inside the margins fall back to bisection.
_ZOOM_MARGIN = 0.1


def _check_pair(x, vhat):
    x = np.ascontiguousarray(x, dtype=np.float64)
    vhat = np.ascontiguousarray(vhat, dtype=np.float64)
    if x.ndim != 2 or x.shape != vhat.shape:
        raise DimensionMismatch(f"X {x.shape} and Vhat {vhat.shape} must match")
    return x, vhat


def gradient(x, vhat):
    """Gradient of the transform loss w.r.t. the multiplicative parameter.

    G[i, j] = 2 * sum_n (x_in / vhat_in - 1 / x_in) * x_jn, taking
    X = phi @ y precomputed.
    """
    x, vhat = _check_pair(x, vhat)
    g = kernels.gradient_weights(x, vhat, EPS) @ x.T
    if not np.all(np.isfinite(g)):
        raise NonFinite("gradient overflowed")
    return g


def hessian_approx(x, vhat):
    """Positive elementwise Hessian approximation.

    H[i, j] = 2 * sum_n (1 / vhat_in + 1 / x_in^2) * x_jn^2. Applied to a
    direction E the approximation acts elementwise as H * E, so its
    eigenvalues are exactly these entries.
    """
    x, vhat = _check_pair(x, vhat)
    ht = kernels.hessian_weights(x, vhat, EPS) @ (x * x).T
    if not np.all(np.isfinite(ht)):
        raise NonFinite("Hessian approximation overflowed")
    if ht.min() <= 0.0:
        raise NonFinite("Hessian approximation lost positivity")
    return ht


def full_hessian_oracle(x, vhat, g):
    """Exact fourth-order Hessian tensor, for small-scale verification only.

    T[i, j, k, l] = delta_ik * sum_n f''(x_in) x_jn x_ln + delta_jk * G[i, l].
    Quadratic in memory and cubic-in-M to build, hence the size guard.
    """
    x, vhat = _check_pair(x, vhat)
    m = x.shape[0]
    if m > 20:
        raise SizeGuard(f"full Hessian oracle limited to M <= 20, got {m}")
    if g.shape != (m, m):
        raise DimensionMismatch(f"gradient shape {g.shape} does not match M={m}")
    f2 = kernels.hessian_weights(x, vhat, EPS)
    t1 = np.einsum("in,jn,ln->ijl", f2, x, x)
    hess = np.zeros((m, m, m, m))
    for i in range(m):
        hess[i, :, i, :] = t1[i]
    for j in range(m):
        hess[:, j, j, :] += g
    return hess


def hessian_quadratic_form(hess, e):
    """<E | hess | E> = sum_ijkl hess[i,j,k,l] e[i,j] e[k,l]."""
    return float(np.einsum("ijkl,ij,kl->", hess, e, e))


def search_direction(g, ht):
    """Quasi-Newton direction: the approximated Newton system solved on
    the antisymmetric subspace.

    Moves are antisymmetric, so the system decouples over index pairs and
    the solve is elementwise: E_ij = -(G_ij - G_ji) / (H_ij + H_ji). With
    H positive this makes <G | E> = -sum_ij antisym(G)_ij^2 * 2 / (H_ij
    + H_ji) <= 0, i.e. E is always descent or stationary. (Projecting the
    unconstrained quotient G / H instead loses that guarantee whenever H
    is far from symmetric, which the 1/x^2 terms routinely make it.)
    """
    if g.shape != ht.shape:
        raise DimensionMismatch(f"G {g.shape} and H {ht.shape} must match")
    return -(g - g.T) / (ht + ht.T)


@dataclass(frozen=True)
class LineSearchParams:
    """Strong Wolfe constants and evaluation budget."""

    c1: float = 1e-4
    c2: float = 0.9
    eta_init: float = 1.0
    max_evals: int = 20

    def __post_init__(self):
        if not (0.0 < self.c1 < self.c2 < 1.0):
            raise InvalidParameter(f"need 0 < c1 < c2 < 1, got {self.c1}, {self.c2}")
        if self.eta_init <= 0.0:
            raise InvalidParameter(f"eta_init must be > 0, got {self.eta_init}")
        if self.max_evals < 1:
            raise InvalidParameter(f"max_evals must be >= 1, got {self.max_evals}")


@dataclass(frozen=True)
class LineSearchResult:
    eta: float
    evals: int
    loss: float
    slope: float
    converged: bool  # both strong Wolfe inequalities certified at eta


def _cubic_candidate(a, fa, dfa, b, fb, c, fc):
    # Minimizer of the cubic through (a, fa), (b, fb), (c, fc) with slope
    # dfa at a.
    with np.errstate(divide="raise", over="raise", invalid="raise"):
        try:
            db, dc = b - a, c - a
            denom = (db * dc) ** 2 * (db - dc)
            rb = fb - fa - dfa * db
            rc = fc - fa - dfa * dc
            aa = (dc ** 2 * rb - db ** 2 * rc) / denom
            bb = (-(dc ** 3) * rb + db ** 3 * rc) / denom
            radical = bb * bb - 3.0 * aa * dfa
            cand = a + (-bb + math.sqrt(radical)) / (3.0 * aa)
        except (ArithmeticError, ValueError):
            return None
    return cand if math.isfinite(cand) else None


def _quad_candidate(a, fa, dfa, b, fb):
    # Minimizer of the parabola through (a, fa), (b, fb) with slope dfa at a.
    with np.errstate(divide="raise", over="raise", invalid="raise"):
        try:
            db = b - a
            cand = a - dfa * db * db / (2.0 * (fb - fa - dfa * db))
        except (ArithmeticError, ValueError):
            return None
    return cand if math.isfinite(cand) else None


class _Budget:
    """Objective-evaluation counter; slope evaluations ride along free."""

    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spent(self):
        return self.used >= self.limit

    def tick(self):
        self.used += 1


def wolfe_line_search(phi, dphi, params=None, phi0=None, dphi0=None):
    """Scalar search for a step satisfying the strong Wolfe conditions.

    Classical two-phase method: extend a bracket, then shrink it with
    cubic (fallback quadratic, fallback bisection) interpolation. The
    slope callable is only invoked at points that already pass the
    sufficient-decrease test, so rejected trials stay cheap.

    Parameters
    ----------
    phi : callable eta -> float
        Restriction of the objective to the search ray.
    dphi : callable eta -> float
        Its derivative.
    params : LineSearchParams
    phi0, dphi0 : float, optional
        Value and slope at eta = 0; evaluated when not supplied.

    Returns
    -------
    LineSearchResult
        ``converged`` is True when both inequalities hold at ``eta``.
        ``evals`` counts objective evaluations. If the budget runs out,
        the best strictly-decreasing step seen is returned with a
        LineSearchWarning (eta = 0 if nothing decreased).

    Raises
    ------
    NotADescentDirection
        If the initial slope is nonnegative.
    """
    if params is None:
        params = LineSearchParams()
    budget = _Budget(params.max_evals)
    if phi0 is None:
        phi0 = phi(0.0)
        budget.tick()
    if dphi0 is None:
        dphi0 = dphi(0.0)
    if dphi0 >= 0.0:
        raise NotADescentDirection(f"initial slope {dphi0} is not negative")
    c1, c2 = params.c1, params.c2
    best = [0.0, phi0, dphi0]

    def sufficient(eta, f):
        return f <= phi0 + c1 * eta * dphi0

    def evaluate(eta):
        f = phi(eta)
        budget.tick()
        if f < best[1]:
            best[0], best[1], best[2] = eta, f, None
        return f

    def done(eta, f, df):
        return LineSearchResult(eta, budget.used, f, df, True)

    def zoom(lo, f_lo, df_lo, hi, f_hi, rec, f_rec):
        # Invariants: lo satisfies sufficient decrease, its slope points
        # toward hi, and a Wolfe point lies between lo and hi.
        while not budget.spent():
            width = abs(hi - lo)
            if width <= 1e-14 * max(1.0, abs(lo)):
                break
            cand = None
            if rec is not None:
                cand = _cubic_candidate(lo, f_lo, df_lo, hi, f_hi, rec, f_rec)
                margin = 0.2 * width
                if cand is None or not (
                    min(lo, hi) + margin <= cand <= max(lo, hi) - margin
                ):
                    cand = None
            if cand is None:
                cand = _quad_candidate(lo, f_lo, df_lo, hi, f_hi)
                margin = _ZOOM_MARGIN * width
                if cand is None or not (
                    min(lo, hi) + margin <= cand <= max(lo, hi) - margin
                ):
                    cand = 0.5 * (lo + hi)
            f = evaluate(cand)
            if not sufficient(cand, f) or f >= f_lo:
                rec, f_rec = hi, f_hi
                hi, f_hi = cand, f
                continue
            df = dphi(cand)
            if best[0] == cand:
                best[2] = df
            if abs(df) <= c2 * abs(dphi0):
                return done(cand, f, df)
            if df * (hi - lo) >= 0.0:
                rec, f_rec = hi, f_hi
                hi, f_hi = lo, f_lo
            else:
                rec, f_rec = lo, f_lo
            lo, f_lo, df_lo = cand, f, df
        return None

    result = None
    a_prev, f_prev, df_prev = 0.0, phi0, dphi0
    a = params.eta_init
    while not budget.spent():
        f = evaluate(a)
        if not sufficient(a, f) or (a_prev > 0.0 and f >= f_prev):
            result = zoom(a_prev, f_prev, df_prev, a, f, None, None)
            break
        df = dphi(a)
        if best[0] == a:
            best[2] = df
        if abs(df) <= c2 * abs(dphi0):
            return done(a, f, df)
        if df >= 0.0:
            result = zoom(a, f, df, a_prev, f_prev, None, None)
            break
        a_prev, f_prev, df_prev = a, f, df
        a = 2.0 * a

    if result is not None:
        return result
    eta, f, df = best
    if df is None:
        df = dphi(eta) if eta > 0.0 else dphi0
    warnings.warn(
        f"no Wolfe-certified step within {params.max_evals} evaluations; "
        f"returning best step {eta}",
        LineSearchWarning,
    )
    certified = sufficient(eta, f) and abs(df) <= c2 * abs(dphi0) and eta > 0.0
    return LineSearchResult(eta, budget.used, f, df, certified)


@dataclass(frozen=True)
class StepStats:
    """One transform step, with enough logged to re-check Wolfe afterwards."""

    eta: float
    evals: int
    loss_before: float
    loss_after: float
    slope_before: float
    slope_after: float
    grad_norm: float
    accepted: bool
    wolfe_certified: bool


def _rejected(loss, slope, grad_norm, evals=0):
    return StepStats(
        eta=0.0,
        evals=evals,
        loss_before=loss,
        loss_after=loss,
        slope_before=slope,
        slope_after=slope,
        grad_norm=grad_norm,
        accepted=False,
        wolfe_certified=False,
    )


def quasi_newton_transform_step(y, phi, vhat, params=None):
    """One quasi-Newton update phi <- exp(eta * E) @ phi.

    E is the projected, approximately-Hessian-scaled gradient direction
    and eta a strong-Wolfe step. Line-search trials reuse X = phi @ y,
    moving it as exp(eta * E) @ X; the accepted transform is rebuilt from
    phi itself so error does not accumulate across steps.

    Returns the new transform and a StepStats record. On a stationary
    point (or if no decreasing step exists) the transform is returned
    unchanged with ``accepted=False``.
    """
    if params is None:
        params = LineSearchParams()
    y = np.ascontiguousarray(y, dtype=np.float64)
    x = np.ascontiguousarray(phi @ y)
    vhat = np.ascontiguousarray(vhat, dtype=np.float64)

    g = gradient(x, vhat)
    ht = hessian_approx(x, vhat)
    e = search_direction(g, ht)
    grad_norm = float(np.linalg.norm(g))
    loss0 = transform_loss_from_x(x, vhat)
    slope0 = float(np.sum(g * e))

    # A slope this small cannot produce a float-measurable Wolfe decrease;
    # treat the point (including the exact stationary E = 0) as converged.
    if slope0 >= -1e-15 * max(abs(loss0), 1.0):
        return phi, _rejected(loss0, slope0, grad_norm)

    cache = {"eta": 0.0, "xt": x}

    def moved(eta):
        if cache["eta"] != eta:
            cache["eta"] = eta
            cache["xt"] = expm_antisymmetric(eta * e) @ x
        return cache["xt"]

    def phi_at(eta):
        if eta == 0.0:
            return loss0
        return kernels.fit_loss(moved(eta), vhat, EPS)

    def dphi_at(eta):
        if eta == 0.0:
            return slope0
        xt = moved(eta)
        return kernels.fit_loss_and_slope(xt, vhat, e @ xt, EPS)[1]

    res = wolfe_line_search(phi_at, dphi_at, params, phi0=loss0, dphi0=slope0)
    if res.eta <= 0.0 or res.loss >= loss0:
        return phi, _rejected(loss0, slope0, grad_norm, evals=res.evals)
    phi_new = expm_antisymmetric(res.eta * e) @ phi
    stats = StepStats(
        eta=res.eta,
        evals=res.evals,
        loss_before=loss0,
        loss_after=res.loss,
        slope_before=slope0,
        slope_after=res.slope,
        grad_norm=grad_norm,
        accepted=True,
        wolfe_certified=res.converged,
    )
    return phi_new, stats


def transform_learning(vhat, y, phi, n_iters=5, params=None):
    """n_iters quasi-Newton steps at fixed factorization vhat.

    Stops early once a step stagnates (the state would not change again).
    Returns the final transform and the per-step stats.
    """
    if n_iters < 1:
        raise InvalidParameter(f"n_iters must be >= 1, got {n_iters}")
    stats = []
    for _ in range(n_iters):
        phi, step = quasi_newton_transform_step(y, phi, vhat, params)
        stats.append(step)
        if not step.accepted:
            break
    return phi, stats


def projected_gradient_step(y, phi, vhat, eta):
    """Baseline first-order update: polar projection of (I - eta * G) @ phi."""
    if eta <= 0.0:
        raise InvalidParameter(f"eta must be > 0, got {eta}")
    y = np.ascontiguousarray(y, dtype=np.float64)
    x = np.ascontiguousarray(phi @ y)
    g = gradient(x, vhat)
    m = phi.shape[0]
    return project_orthogonal((np.eye(m) - eta * g) @ phi)


def projected_gradient_learning(
    vhat, y, phi, n_iters, eta_init=1.0, shrink=0.5, grow=2.0, max_backtracks=80
):
    """Projected gradient with backtracking step selection.

    The step size persists across iterations: it grows only after a
    first-try acceptance and keeps its halved value otherwise, so one
    deep backtrack is not paid again on every subsequent iteration.
    Returns the final transform and per-step StepStats (slope fields are
    zero; only losses are meaningful for this baseline).
    """
    if n_iters < 1:
        raise InvalidParameter(f"n_iters must be >= 1, got {n_iters}")
    y = np.ascontiguousarray(y, dtype=np.float64)
    vhat = np.ascontiguousarray(vhat, dtype=np.float64)
    m = phi.shape[0]
    eye = np.eye(m)
    eta = eta_init
    stats = []
    for _ in range(n_iters):
        x = np.ascontiguousarray(phi @ y)
        g = gradient(x, vhat)
        grad_norm = float(np.linalg.norm(g))
        loss0 = transform_loss_from_x(x, vhat)
        accepted = False
        evals = 0
        for _ in range(max_backtracks):
            trial = project_orthogonal((eye - eta * g) @ phi)
            loss = transform_loss_from_x(np.ascontiguousarray(trial @ y), vhat)
            evals += 1
            if loss < loss0:
                accepted = True
                break
            eta *= shrink
        if not accepted:
            stats.append(_rejected(loss0, 0.0, grad_norm, evals=evals))
            break
        phi = trial
        stats.append(
            StepStats(
                eta=eta,
                evals=evals,
                loss_before=loss0,
                loss_after=loss,
                slope_before=0.0,
                slope_after=0.0,
                grad_norm=grad_norm,
                accepted=True,
                wolfe_certified=False,
            )
        )
        if evals == 1:
            eta *= grow
    return phi, stats
