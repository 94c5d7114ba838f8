"""Truncated quadratic variation, bias corrections, and rate diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DiagnosticError, ParameterError
from .kernels import Kernel, cancelling_kernel, kernel_moment
from .levy import ModelSpec, PathSample, simulate_path
from .stable import tail_constant

CORRECTIONS = ("none", "subtract_bias", "cancel_kernel", "richardson")

_WEIGHTS = {"unit": lambda x: np.ones_like(np.asarray(x, dtype=float))}


def register_weight(tag: str, func) -> None:
    """Register a polynomial-growth weight function by name."""
    _WEIGHTS[tag] = func


def get_weight(tag: str):
    try:
        return _WEIGHTS[tag]
    except KeyError:
        raise ParameterError(f"unknown weight tag {tag!r}") from None


@dataclass(frozen=True)
class EstimatorConfig:
    beta: float
    k: float = 1.0
    kernel: Kernel = Kernel("phi")
    weight: str = "unit"
    correction: str = "none"

    def __post_init__(self):
        if not 0.0 < self.beta < 0.5:
            raise ParameterError(f"beta must lie in (0, 1/2), got {self.beta}")
        if self.k <= 0.0:
            raise ParameterError(f"k must be positive, got {self.k}")
        if self.correction not in CORRECTIONS:
            raise ParameterError(f"unknown correction {self.correction!r}")
        get_weight(self.weight)

    def threshold(self, n: int) -> float:
        return self.k * n ** (-self.beta)


@dataclass(frozen=True)
class EstimateResult:
    q_n: float
    correction_applied: float
    final_estimate: float
    normalized_error: float | None = None


def _weights_at_left_endpoints(path: PathSample, tag: str) -> np.ndarray:
    return get_weight(tag)(path.observations[:-1])


def realized_volatility(path: PathSample, weight: str = "unit") -> float:
    """Plain weighted quadratic variation sum f(X_{t_i}) (Delta X_i)^2."""
    w = _weights_at_left_endpoints(path, weight)
    return float(np.sum(w * path.increments**2))


def tqv(path: PathSample, config: EstimatorConfig) -> float:
    """Truncated quadratic variation sum f(X_{t_i}) (Delta X_i)^2 K(Delta X_i / (k n^-beta))."""
    dx = path.increments
    w = _weights_at_left_endpoints(path, config.weight)
    kv = config.kernel(dx / config.threshold(path.n))
    # Where the kernel vanishes the term is zero even when dx*dx overflows.
    mask = kv != 0.0
    terms = np.zeros_like(dx)
    terms[mask] = w[mask] * dx[mask] * dx[mask] * kv[mask]
    return float(np.sum(terms))


def jump_bias(
    alpha: float,
    beta: float,
    gamma: float,
    k: float,
    n: int,
    kernel: Kernel = Kernel("phi"),
) -> float:
    """First-order jump bias of the truncated quadratic variation.

    n^(-beta(2-alpha)) * C * |gamma|^alpha * k^(2-alpha) * int K(u)|u|^(1-alpha) du,
    where C is the density tail coefficient of the simulated stable law
    (tail_constant, identically 1 in this normalization).
    """
    if gamma == 0.0:
        return 0.0
    if not 0.0 < alpha < 2.0:
        raise ParameterError(f"alpha must lie in (0, 2), got {alpha}")
    if n < 2:
        raise ParameterError(f"n must be at least 2, got {n}")
    return (
        n ** (-beta * (2.0 - alpha))
        * tail_constant(alpha)
        * abs(gamma) ** alpha
        * k ** (2.0 - alpha)
        * kernel_moment(kernel, alpha)
    )


def corrected_tqv(
    path: PathSample,
    config: EstimatorConfig,
    alpha: float,
    gamma: float,
    sigma_sq: float | None = None,
) -> EstimateResult:
    """Bias-subtracted estimator: tqv minus the first-order jump bias."""
    q = tqv(path, config)
    correction = jump_bias(alpha, config.beta, gamma, config.k, path.n, config.kernel)
    final = q - correction
    err = None if sigma_sq is None else (final - sigma_sq) * np.sqrt(path.n)
    return EstimateResult(q, correction, final, err)


def cancelled_kernel_tqv(
    path: PathSample,
    config: EstimatorConfig,
    alpha: float,
    M: float = 4.0,
    sigma_sq: float | None = None,
) -> EstimateResult:
    """Estimator with the composite kernel whose weighted moment vanishes."""
    comp = cancelling_kernel(alpha, M)
    q = tqv(
        path,
        EstimatorConfig(
            beta=config.beta, k=config.k, kernel=comp, weight=config.weight
        ),
    )
    err = None if sigma_sq is None else (q - sigma_sq) * np.sqrt(path.n)
    return EstimateResult(q, 0.0, q, err)


def richardson(q_n: float, q_2n: float, alpha: float, beta: float) -> float:
    """(Q_n - 2^(beta(2-alpha)) Q_2n) / (1 - 2^(beta(2-alpha)))."""
    factor = 2.0 ** (beta * (2.0 - alpha))
    if factor == 1.0:
        raise ParameterError("richardson undefined when beta*(2-alpha) = 0")
    return (q_n - factor * q_2n) / (1.0 - factor)


def richardson_paired(
    model: ModelSpec, config: EstimatorConfig, alpha: float, n: int, seed
) -> tuple[float, float, float]:
    """Richardson extrapolation on a shared path: simulate at 2n, subsample for n.

    Returns (q_n, q_2n, extrapolated).
    """
    fine = simulate_path(model, 2 * n, seed)
    coarse = PathSample(
        n=n, observations=fine.observations[0::2], delta=1.0 / n, seed=fine.seed
    )
    q_n = tqv(coarse, config)
    q_2n = tqv(fine, config)
    return q_n, q_2n, richardson(q_n, q_2n, alpha, config.beta)


def fit_power_law(n_values, biases) -> tuple[float, float]:
    """Least-squares slope of log(bias) against log(1/n), with its standard error.

    Nonpositive biases are dropped; fewer than 3 surviving points is an error.
    """
    n_values = np.asarray(n_values, dtype=float)
    biases = np.asarray(biases, dtype=float)
    keep = biases > 0.0
    if keep.sum() < 3:
        raise DiagnosticError(
            f"only {int(keep.sum())} positive bias points; need at least 3"
        )
    x = np.log(1.0 / n_values[keep])
    y = np.log(biases[keep])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    dof = max(keep.sum() - 2, 1)
    var = float(resid @ resid) / dof / float(((x - x.mean()) ** 2).sum())
    return float(slope), float(np.sqrt(var))


def rate_fit(
    model: ModelSpec,
    config: EstimatorConfig,
    n_grid,
    replicates: int,
    seed: int,
    sigma_sq: float | None = None,
) -> tuple[float, float]:
    """Empirical decay exponent of the mean bias of tqv over an n grid.

    Simulates `replicates` paths per n with streams keyed by (seed, n, r),
    averages Q_n - sigma^2, and fits log(mean bias) vs log(1/n).
    """
    n_grid = sorted(set(int(n) for n in n_grid))
    if len(n_grid) < 4 or n_grid[-1] < 8 * n_grid[0]:
        raise DiagnosticError("n grid must have >= 4 values spanning a factor of 8")
    truth = sigma_sq if sigma_sq is not None else model.sigma**2
    biases = []
    for n in n_grid:
        acc = np.empty(replicates)
        for r in range(replicates):
            path = simulate_path(model, n, np.random.SeedSequence((seed, n, r)))
            acc[r] = tqv(path, config)
        biases.append(float(acc.mean()) - truth)
    slope, stderr = fit_power_law(n_grid, biases)
    return slope, stderr
