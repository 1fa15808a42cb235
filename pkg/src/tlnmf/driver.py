"""Alternating minimization driver: NMF step, then transform step, with logging.

Each outer iteration recomputes the power spectrogram under the current
transform, lowers the objective w.r.t. the factors with multiplicative
updates, freezes the factorization, and lowers it w.r.t. the transform.
Both sub-steps are individually non-increasing, so the logged objective
is monotone up to floating-point slack.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DimensionMismatch
from .linalg import (
    dct_matrix,
    expm_antisymmetric,
    project_orthogonal,
    random_antisymmetric,
    random_orthogonal,
)
from .nmf import init_factors, nmf_step
from .objective import EPS, tlnmf_objective, transform_loss_from_x
from .transform_opt import (
    LineSearchParams,
    projected_gradient_learning,
    quasi_newton_transform_step,
    transform_learning,
)

ALGORITHMS = ("quasi-newton", "projected-gradient")
TRANSFORM_INITS = ("random", "dct")

# Accepted transform updates between orthogonality re-projections; the
# exponential retraction preserves orthogonality only in exact arithmetic.
REPROJECT_EVERY = 100


@dataclass(frozen=True)
class TlnmfConfig:
    """Run parameters for the alternating minimization."""

    rank: int = 10
    penalty: float = 1.0
    n_outer: int = 100
    inner_tl_iters: int = 5
    inner_mm_iters: int = 1
    seed: int = 0
    algorithm: str = "quasi-newton"
    tolerance: float = 1e-8
    transform_init: str = "random"
    line_search: LineSearchParams = field(default_factory=LineSearchParams)

    def __post_init__(self):
        if self.rank < 1:
            raise ConfigError(f"rank must be >= 1, got {self.rank}")
        if self.penalty < 0:
            raise ConfigError(f"penalty must be >= 0, got {self.penalty}")
        if self.n_outer < 1:
            raise ConfigError(f"n_outer must be >= 1, got {self.n_outer}")
        if self.inner_tl_iters < 1:
            raise ConfigError(f"inner_tl_iters must be >= 1, got {self.inner_tl_iters}")
        if self.inner_mm_iters < 1:
            raise ConfigError(f"inner_mm_iters must be >= 1, got {self.inner_mm_iters}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(
                f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}"
            )
        if self.transform_init not in TRANSFORM_INITS:
            raise ConfigError(
                f"unknown transform_init {self.transform_init!r}; "
                f"choose from {TRANSFORM_INITS}"
            )
        if self.tolerance < 0:
            raise ConfigError(f"tolerance must be >= 0, got {self.tolerance}")

    def asdict(self):
        d = {
            "rank": self.rank,
            "penalty": self.penalty,
            "n_outer": self.n_outer,
            "inner_tl_iters": self.inner_tl_iters,
            "inner_mm_iters": self.inner_mm_iters,
            "seed": self.seed,
            "algorithm": self.algorithm,
            "tolerance": self.tolerance,
            "transform_init": self.transform_init,
            "line_search": {
                "c1": self.line_search.c1,
                "c2": self.line_search.c2,
                "eta_init": self.line_search.eta_init,
                "max_evals": self.line_search.max_evals,
            },
        }
        return d


@dataclass
class ExperimentLog:
    """Per-outer-iteration trace of a full run."""

    iterations: list = field(default_factory=list)
    objective: list = field(default_factory=list)
    fit: list = field(default_factory=list)
    penalty: list = field(default_factory=list)
    elapsed_s: list = field(default_factory=list)
    step_sizes: list = field(default_factory=list)  # list of per-outer lists
    grad_norm: list = field(default_factory=list)

    def append(self, iteration, value, elapsed, steps, grad_norm):
        self.iterations.append(iteration)
        self.objective.append(value.total)
        self.fit.append(value.fit)
        self.penalty.append(value.penalty)
        self.elapsed_s.append(elapsed)
        self.step_sizes.append(list(steps))
        self.grad_norm.append(grad_norm)

    def __len__(self):
        return len(self.iterations)


@dataclass
class ConvergenceLog:
    """Per-iteration trace of a transform-only optimization."""

    iterations: list = field(default_factory=list)
    objective: list = field(default_factory=list)
    elapsed_s: list = field(default_factory=list)

    def append(self, iteration, value, elapsed):
        self.iterations.append(iteration)
        self.objective.append(value)
        self.elapsed_s.append(elapsed)

    def __len__(self):
        return len(self.iterations)


@dataclass
class TlnmfResult:
    phi: np.ndarray
    w: np.ndarray
    h: np.ndarray
    log: ExperimentLog


class _Reprojector:
    """Counts accepted transform updates, re-projecting every REPROJECT_EVERY."""

    def __init__(self, every=REPROJECT_EVERY):
        self.every = every
        self.count = 0

    def absorb(self, phi, n_accepted):
        self.count += n_accepted
        if self.count >= self.every:
            self.count = 0
            return project_orthogonal(phi)
        return phi


def _init_transform(config, m):
    if config.transform_init == "dct":
        return dct_matrix(m)
    return random_orthogonal(m, config.seed)


def run_tlnmf(y, config):
    """Full alternating minimization on the frames matrix ``y``.

    Returns a TlnmfResult. Stops after ``n_outer`` iterations, or earlier
    once the relative objective change stays below ``tolerance`` for five
    consecutive iterations (tolerance = 0 disables early stopping).
    """
    y = np.ascontiguousarray(y, dtype=np.float64)
    if y.ndim != 2:
        raise DimensionMismatch(f"frames matrix must be 2-D, got shape {y.shape}")
    m, n = y.shape
    if m < config.rank:
        raise ConfigError(f"rank {config.rank} exceeds frame length {m}")

    phi = _init_transform(config, m)
    w, h = init_factors(m, config.rank, n, config.seed)
    log = ExperimentLog()
    reproj = _Reprojector()
    start = time.perf_counter()
    previous = None
    quiet_streak = 0

    for it in range(1, config.n_outer + 1):
        x = phi @ y
        v = np.maximum(x * x, EPS)
        w, h = nmf_step(v, w, h, config.penalty, config.inner_mm_iters)
        vhat = np.maximum(w @ h, EPS)
        if config.algorithm == "quasi-newton":
            phi, stats = transform_learning(
                vhat, y, phi, config.inner_tl_iters, config.line_search
            )
        else:
            phi, stats = projected_gradient_learning(
                vhat, y, phi, config.inner_tl_iters
            )
        n_accepted = sum(1 for s in stats if s.accepted)
        phi = reproj.absorb(phi, n_accepted)

        value = tlnmf_objective(y, phi, w, h, config.penalty)
        log.append(
            it,
            value,
            time.perf_counter() - start,
            [s.eta for s in stats],
            stats[0].grad_norm if stats else 0.0,
        )

        if previous is not None and config.tolerance > 0:
            rel = abs(previous - value.total) / max(abs(previous), 1e-300)
            quiet_streak = quiet_streak + 1 if rel < config.tolerance else 0
            if quiet_streak >= 5:
                break
        previous = value.total

    return TlnmfResult(phi=phi, w=w, h=h, log=log)


def synthetic_transform_instance(m, n, perturbation, seed):
    """Transform-recovery instance: Gaussian frames, planted transform.

    Builds y ~ N(0, 1)^(m x n), a Haar transform phi_star, the realizable
    target vhat = (phi_star @ y)^2 (so the optimal loss is 0), and the
    start phi0 = exp(E) @ phi_star with E an antisymmetric Gaussian of
    scale ``perturbation``. Independent substreams keep the three draws
    uncorrelated while staying deterministic in ``seed``.
    """
    seq = np.random.SeedSequence(seed)
    seed_y, seed_phi, seed_e = seq.spawn(3)
    y = np.random.default_rng(seed_y).standard_normal((m, n))
    phi_star = random_orthogonal(m, seed_phi)
    e = random_antisymmetric(m, np.random.default_rng(seed_e), scale=perturbation)
    vhat = np.maximum((phi_star @ y) ** 2, EPS)
    phi0 = expm_antisymmetric(e) @ phi_star
    return y, phi_star, vhat, phi0


def run_transform_only(y, vhat, phi0, algorithm, n_iters, params=None):
    """Optimize the transform loss alone, at fixed factorization ``vhat``.

    One logged iteration corresponds to one elementary step of the chosen
    algorithm. Iteration 0 records the starting loss.
    """
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    if n_iters < 1:
        raise ConfigError(f"n_iters must be >= 1, got {n_iters}")
    y = np.ascontiguousarray(y, dtype=np.float64)
    vhat = np.ascontiguousarray(np.maximum(vhat, EPS))
    phi = np.asarray(phi0, dtype=np.float64)
    if params is None:
        params = LineSearchParams()

    log = ConvergenceLog()
    reproj = _Reprojector()
    start = time.perf_counter()
    log.append(0, transform_loss_from_x(phi @ y, vhat), 0.0)

    eta_pg = 1.0
    for it in range(1, n_iters + 1):
        if algorithm == "quasi-newton":
            phi, step = quasi_newton_transform_step(y, phi, vhat, params)
        else:
            phi, stats = projected_gradient_learning(
                vhat, y, phi, 1, eta_init=eta_pg
            )
            step = stats[0]
            if step.accepted:
                # regrow only after clean first-try acceptances
                eta_pg = step.eta * (2.0 if step.evals == 1 else 1.0)
        phi = reproj.absorb(phi, 1 if step.accepted else 0)
        log.append(it, step.loss_after, time.perf_counter() - start)

    return phi, log
