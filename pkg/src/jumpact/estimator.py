"""Multi-scale jump-activity estimator with standardised errors and intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from . import _backend
from .kernel import make_constants


@dataclass(frozen=True)
class EstimatorConfig:
    """Tuning of the multi-scale estimator.

    The inverse threshold is ``tau_n = c * n**alpha``; ``alpha`` defaults to
    the rate ``m / (2(m+1))`` at which the bias cancellation is balanced.
    """

    m: int = 3
    rho: float = 2.0
    c: float = 0.05
    alpha: float | None = None
    beta_zero_tol: float = 1e-3
    gamma_levels: tuple = (0.95,)

    def __post_init__(self):
        if not (isinstance(self.m, (int, np.integer)) and self.m >= 1):
            raise ValueError(f"m must be an integer >= 1, got {self.m!r}")
        if self.alpha is None:
            object.__setattr__(self, "alpha", self.m / (2.0 * (self.m + 1)))
        if not 0.0 < self.alpha < 0.5:
            raise ValueError(f"alpha must lie in (0, 1/2), got {self.alpha!r}")
        if not self.rho > 1.0:
            raise ValueError(f"rho must exceed 1, got {self.rho!r}")
        if not self.c > 0.0:
            raise ValueError(f"c must be positive, got {self.c!r}")
        object.__setattr__(self, "gamma_levels", tuple(float(g) for g in self.gamma_levels))
        for g in self.gamma_levels:
            if not 0.0 < g < 1.0:
                raise ValueError(f"gamma levels must lie in (0, 1), got {g!r}")

    def tau(self, n: int) -> float:
        return self.c * n**self.alpha


@dataclass(frozen=True)
class Interval:
    """Closed interval within (0, 2); ``empty`` intervals contain nothing."""

    lo: float
    hi: float
    empty: bool = False

    def __contains__(self, beta) -> bool:
        return (not self.empty) and 0.0 < beta < 2.0 and self.lo <= beta <= self.hi

    @property
    def width(self) -> float:
        return 0.0 if self.empty else self.hi - self.lo

    @classmethod
    def empty_interval(cls) -> "Interval":
        return cls(math.nan, math.nan, True)


@dataclass(frozen=True)
class ActivityEstimate:
    beta_hat: float
    a_tau: float
    a_rho_tau: float
    a_tau_raw: float
    a_rho_tau_raw: float
    tau_n: float
    sigma_hat: float  # nan when undefined
    clipped_low: bool
    clipped_high: bool
    counts_clipped: bool
    n: int
    config: EstimatorConfig = field(repr=False)
    log_ratio: float = math.nan

    @property
    def sigma_defined(self) -> bool:
        return not math.isnan(self.sigma_hat)

    def intervals(self) -> dict:
        return {g: confidence_interval(self, g) for g in self.config.gamma_levels}


def as_log_prices(values) -> np.ndarray:
    """Validate and convert observations to a contiguous float64 array."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"log-price path must be one-dimensional, got shape {arr.shape}")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise ValueError(f"log-price path has non-finite values at indices {bad[:10].tolist()}")
    return arr


def sym_increments(path) -> np.ndarray:
    """Second differences ``(X[j+2] - X[j+1]) - (X[j+1] - X[j])``, length n-2."""
    x = as_log_prices(path)
    if x.size < 3:
        raise ValueError(f"need at least 3 observations, got {x.size}")
    d = np.diff(x)
    return d[1:] - d[:-1]


def multiscale_increment(sym, j: int, k: int) -> float:
    """Sum of ``sym[j], sym[j+2], ..., sym[j+2(k-1)]``: a symmetrised increment over 2k/n."""
    sym = np.asarray(sym, dtype=np.float64)
    n = sym.size + 2
    if k < 1 or j < 0 or j > n - 2 * k - 1:
        raise IndexError(f"(j={j}, k={k}) outside 0 <= j <= {n - 2 * k - 1}, k >= 1")
    acc = sym[j]
    for l in range(1, k):
        acc = acc + sym[j + 2 * l]
    return float(acc)


def weights(m: int) -> np.ndarray:
    """Bias-cancelling weights ``w_k = (-1)^(k+1) binom(m, k) / (2k)`` for k = 1..m."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m!r}")
    return np.array([(-1) ** (k + 1) * math.comb(m, k) / (2.0 * k) for k in range(1, m + 1)])


def jump_count(path, tau: float, m: int) -> tuple[float, float]:
    """Weighted smoothed jump count at inverse threshold ``tau``.

    Returns ``(raw, clipped)`` where ``clipped = max(0, raw)``.
    """
    if not tau > 0.0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    x = as_log_prices(path)
    raw = float(_backend.smoothed_counts(x, [tau], m)[0] @ weights(m))
    return raw, max(0.0, raw)


def estimate(path, config: EstimatorConfig | None = None) -> ActivityEstimate:
    """Estimate the jump activity index from a uniformly sampled path on [0, 1]."""
    config = config or EstimatorConfig()
    x = as_log_prices(path)
    n = x.size
    if n < 2 * config.m + 2:
        raise ValueError(f"need at least {2 * config.m + 2} observations for m={config.m}, got {n}")
    tau_n = config.tau(n)
    counts = _backend.smoothed_counts(x, [tau_n, config.rho * tau_n], config.m) @ weights(config.m)
    return estimate_from_counts(float(counts[0]), float(counts[1]), tau_n, n, config)


def estimate_from_counts(
    a_tau_raw: float, a_rho_tau_raw: float, tau_n: float, n: int, config: EstimatorConfig
) -> ActivityEstimate:
    """Turn raw jump counts at ``tau_n`` and ``rho * tau_n`` into an estimate.

    Conventions: 0/0 = 1; a zero count at ``tau_n`` alone gives +inf (clipped
    to 2, no sigma); estimates below ``config.beta_zero_tol`` are reported as 0.
    """
    a_tau = max(0.0, a_tau_raw)
    a_rho = max(0.0, a_rho_tau_raw)
    rho = config.rho
    if a_tau == 0.0 and a_rho == 0.0:
        log_ratio = 0.0
    elif a_tau == 0.0:
        log_ratio = math.inf
    elif a_rho == 0.0:
        log_ratio = -math.inf
    else:
        log_ratio = math.log(a_rho / a_tau) / math.log(rho)
    beta_hat = min(2.0, max(0.0, log_ratio))
    if beta_hat < config.beta_zero_tol:
        beta_hat = 0.0

    sigma_hat = math.nan
    if beta_hat > 0.0 and a_tau > 0.0:
        k = make_constants(beta_hat, rho)
        sigma_hat = math.sqrt(k.c_beta_rho * k.k_beta * tau_n**beta_hat / a_tau)

    return ActivityEstimate(
        beta_hat=beta_hat,
        a_tau=a_tau,
        a_rho_tau=a_rho,
        a_tau_raw=a_tau_raw,
        a_rho_tau_raw=a_rho_tau_raw,
        tau_n=tau_n,
        sigma_hat=sigma_hat,
        clipped_low=log_ratio < 0.0,
        clipped_high=log_ratio > 2.0,
        counts_clipped=a_tau_raw < 0.0 or a_rho_tau_raw < 0.0 or (a_tau == 0.0 and a_rho > 0.0),
        n=n,
        config=config,
        log_ratio=log_ratio,
    )


def standardized_error(est: ActivityEstimate, beta: float) -> float:
    """``tau^(beta_hat/2) (beta_hat - beta) / sigma_hat``; -inf when beta_hat = 0.

    nan when beta_hat > 0 but sigma_hat is undefined (zero count at tau_n).
    """
    if not 0.0 < beta <= 2.0:
        raise ValueError(f"beta must lie in (0, 2], got {beta!r}")
    if est.beta_hat == 0.0:
        return -math.inf
    if not est.sigma_defined:
        return math.nan
    return est.tau_n ** (est.beta_hat / 2.0) * (est.beta_hat - beta) / est.sigma_hat


def normal_quantile(gamma: float) -> float:
    """Two-sided critical value ``Phi^-1((1 + gamma)/2)``."""
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma!r}")
    return float(norm.ppf(0.5 * (1.0 + gamma)))


def confidence_interval(est: ActivityEstimate, gamma: float = 0.95) -> Interval:
    z = normal_quantile(gamma)
    if est.beta_hat == 0.0 or not est.sigma_defined:
        return Interval.empty_interval()
    half = z * est.sigma_hat * est.tau_n ** (-est.beta_hat / 2.0)
    return Interval(max(0.0, est.beta_hat - half), min(2.0, est.beta_hat + half))
