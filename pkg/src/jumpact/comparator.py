"""Single-scale threshold-count comparator (hard indicator, raw increments)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _backend
from .estimator import Interval, as_log_prices, normal_quantile

DEFAULT_ALPHA = 0.2


@dataclass(frozen=True)
class AjEstimate:
    beta_tilde: float
    count_tau: float
    count_rho_tau: float
    tau_n: float
    rho: float
    clipped: bool

    @property
    def variance_proxy(self) -> float:
        """``1/count_tau - 1/count_rho_tau`` under IEEE arithmetic.

        A zero count at ``tau_n`` alone gives +inf (the standardised error is
        then identically 0 and the interval is all of (0, 2)); a zero count at
        ``rho * tau_n`` gives -inf and both zero gives nan.
        """
        inv_tau = math.inf if self.count_tau == 0 else 1.0 / self.count_tau
        inv_rho = math.inf if self.count_rho_tau == 0 else 1.0 / self.count_rho_tau
        if math.isinf(inv_tau) and math.isinf(inv_rho):
            return math.nan
        return inv_tau - inv_rho

    @property
    def defined(self) -> bool:
        return self.variance_proxy > 0.0  # False for nan as well


def aj_count(path, tau: float) -> int:
    """Number of increments with ``tau * |X[j+1] - X[j]| >= 1``."""
    if not tau > 0.0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    x = as_log_prices(path)
    return int(_backend.threshold_counts(x, [tau])[0])


def aj_estimate_from_counts(count_tau, count_rho_tau, tau_n: float, rho: float) -> AjEstimate:
    if count_tau == 0 and count_rho_tau == 0:
        raw = 0.0
    elif count_tau == 0:
        raw = math.inf
    elif count_rho_tau == 0:
        raw = -math.inf
    else:
        raw = math.log(count_rho_tau / count_tau) / math.log(rho)
    beta = min(2.0, max(0.0, raw))
    return AjEstimate(beta, count_tau, count_rho_tau, tau_n, rho, clipped=beta != raw)


def aj_estimate(path, c: float = 0.05, rho: float = 2.0, alpha: float = DEFAULT_ALPHA) -> AjEstimate:
    if not rho > 1.0:
        raise ValueError(f"rho must exceed 1, got {rho!r}")
    if not c > 0.0:
        raise ValueError(f"c must be positive, got {c!r}")
    x = as_log_prices(path)
    if x.size < 2:
        raise ValueError(f"need at least 2 observations, got {x.size}")
    tau_n = c * x.size**alpha
    counts = _backend.threshold_counts(x, [tau_n, rho * tau_n])
    return aj_estimate_from_counts(int(counts[0]), int(counts[1]), tau_n, rho)


def aj_standardized_error(est: AjEstimate, beta: float) -> float:
    """``log(rho) * proxy^(-1/2) * (beta_tilde - beta)``; nan if the proxy is not positive."""
    if not est.defined:
        return math.nan
    return math.log(est.rho) * (est.beta_tilde - beta) / math.sqrt(est.variance_proxy)


def aj_confidence_interval(est: AjEstimate, gamma: float = 0.95) -> Interval:
    z = normal_quantile(gamma)
    if not est.defined:
        return Interval.empty_interval()
    half = z * math.sqrt(est.variance_proxy) / math.log(est.rho)
    if math.isinf(half):
        return Interval(0.0, 2.0)
    return Interval(max(0.0, est.beta_tilde - half), min(2.0, est.beta_tilde + half))
