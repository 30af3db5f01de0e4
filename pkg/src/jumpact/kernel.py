"""Smoothing kernel and the integral constants that normalise the estimator.

The kernel is the logistic bump

    K(x) = 1                                            |x| <= 1
         = 1 / (1 + exp(1/(2-|x|) - 1/(|x|-1)))         1 < |x| < 2
         = 0                                            |x| >= 2

and every constant below is an integral against ``|x|^-(1+beta)``. Wherever
the kernel is constant the integral is done in closed form, so the adaptive
quadrature only ever sees the compact transition band and no truncation
error enters, even for small ``beta``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

QUAD_REL_TOL = 1e-9
_QUAD_ABS_TOL = 1e-15
_QUAD_LIMIT = 200

# The transform of K is below 1e-12 in magnitude past this frequency.
FOURIER_CUTOFF = 400.0


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, what: str, value: float, abserr: float, message: str = ""):
        self.value = value
        self.abserr = abserr
        rel = abserr / abs(value) if value else math.inf
        super().__init__(
            f"{what}: quadrature did not converge (value={value!r}, "
            f"abserr={abserr:.3g}, achieved rel tol={rel:.3g}) {message}".rstrip()
        )


@dataclass(frozen=True)
class KernelConstants:
    beta: float
    rho: float
    k_beta: float
    k_beta_rho: float
    kbar_beta_rho: float
    kbar_beta_1: float
    c_beta_rho: float
    c_beta: float
    quad_rel_tol: float = QUAD_REL_TOL

    def as_dict(self) -> dict:
        return asdict(self)


def _kernel_scalar(x: float) -> float:
    a = abs(x)
    if a <= 1.0:
        return 1.0
    if a >= 2.0:
        return 0.0
    t = 1.0 / (2.0 - a) - 1.0 / (a - 1.0)
    if t > 700.0:
        return 0.0
    return 1.0 / (1.0 + math.exp(t))


def kernel_K(x):
    """Evaluate the smoothing kernel; accepts scalars or arrays."""
    if np.ndim(x) == 0:
        return _kernel_scalar(float(x))
    a = np.abs(np.asarray(x, dtype=float))
    out = np.where(a <= 1.0, 1.0, 0.0)
    band = (a > 1.0) & (a < 2.0)
    ab = a[band]
    out[band] = special.expit(1.0 / (ab - 1.0) - 1.0 / (2.0 - ab))
    return out


def _check_beta(beta: float, allow_two: bool = False) -> None:
    hi_ok = beta <= 2.0 if allow_two else beta < 2.0
    if not (beta > 0.0 and hi_ok):
        bound = "(0, 2]" if allow_two else "(0, 2)"
        raise ValueError(f"beta must lie in {bound}, got {beta!r}")


def _integrate(what: str, f, a: float, b: float, points=None) -> float:
    if points is not None:
        points = [p for p in points if a < p < b] or None
    res = integrate.quad(
        f, a, b, epsabs=_QUAD_ABS_TOL, epsrel=QUAD_REL_TOL,
        limit=_QUAD_LIMIT, points=points, full_output=1,
    )
    value, abserr = res[0], res[1]
    if len(res) > 3:
        raise QuadratureError(what, value, abserr, res[3])
    return value


def c_beta(beta: float) -> float:
    """Scale constant of the symmetric stable Levy exponent.

    ``int_0^inf (1 - cos(ux)) x^-(1+beta) dx = c_beta(beta) * |u|^beta / 2``.
    """
    _check_beta(beta)
    if beta == 1.0:
        return math.pi
    return float(-2.0 * special.gamma(-beta) * math.cos(beta * math.pi / 2.0))


def compute_k_beta(beta: float) -> float:
    """Integral of ``(1 - K(x)) |x|^-(1+beta)`` over the real line."""
    _check_beta(beta, allow_two=True)
    p = -(1.0 + beta)
    band = _integrate(
        "K_beta", lambda x: (1.0 - _kernel_scalar(x)) * x**p, 1.0, 2.0
    )
    return 2.0 * (band + 2.0**-beta / beta)


def compute_k_beta_rho(beta: float, rho: float) -> float:
    """Integral of ``(K(x) - K(rho x))^2 |x|^-(1+beta)`` over the real line."""
    _check_beta(beta, allow_two=True)
    if not rho > 1.0:
        raise ValueError(f"rho must exceed 1, got {rho!r}")
    p = -(1.0 + beta)

    def f(x):
        d = _kernel_scalar(x) - _kernel_scalar(rho * x)
        return d * d * x**p

    return 2.0 * _integrate("K_beta_rho", f, 1.0 / rho, 2.0, points=[2.0 / rho, 1.0])


def compute_kbar_beta_rho(beta: float, rho: float) -> float:
    """``rho^(-beta/2)`` times the integral of ``(1-K(x))(1-K(rho x))|x|^-(1+beta)``."""
    _check_beta(beta, allow_two=True)
    if not rho >= 1.0:
        raise ValueError(f"rho must be at least 1, got {rho!r}")
    p = -(1.0 + beta)

    def f(x):
        return (1.0 - _kernel_scalar(x)) * (1.0 - _kernel_scalar(rho * x)) * x**p

    band = _integrate("Kbar_beta_rho", f, 1.0, 2.0, points=[2.0 / rho])
    return rho ** (-beta / 2.0) * 2.0 * (band + 2.0**-beta / beta)


# Composite Gauss-Legendre rule on the transition band [1, 2]. 64 panels of
# 16 nodes resolve cos(u x) to machine precision out to FOURIER_CUTOFF.
def _band_rule(panels: int = 64, order: int = 16):
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(1.0, 2.0, panels + 1)
    half = 0.5 * np.diff(edges)[:, None]
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    nodes = (mid + half * xg).ravel()
    weights = (half * wg).ravel()
    return nodes, weights * kernel_K(nodes)


_BAND_NODES, _BAND_KWEIGHTS = _band_rule()


def fourier_K(u):
    """Fourier transform ``int K(x) exp(iux) dx`` of the (even) kernel.

    Split as ``2 sin(u)/u`` from the flat part plus a composite Gauss-Legendre
    rule over the transition band. Accepts scalars or arrays.
    """
    scalar = np.ndim(u) == 0
    u = np.abs(np.atleast_1d(np.asarray(u, dtype=float)))
    safe = np.where(u == 0.0, 1.0, u)
    flat = np.where(u == 0.0, 2.0, 2.0 * np.sin(u) / safe)
    band = np.empty_like(u)
    # chunked to bound the outer-product size
    for s in range(0, u.size, 512):
        uu = u[s:s + 512]
        band[s:s + 512] = 2.0 * (np.cos(np.outer(uu, _BAND_NODES)) @ _BAND_KWEIGHTS)
    out = flat + band
    return float(out[0]) if scalar else out


def fourier_moment(beta: float, cutoff: float = FOURIER_CUTOFF) -> float:
    """``c_beta(beta) * int F[K](u) |u|^beta du``, which should equal ``2 pi K_beta``.

    The outer integral runs over ``[0, cutoff]`` with a Gauss-Legendre rule on
    geometrically graded panels near zero (where ``u^beta`` is not smooth) and
    uniform panels beyond.
    """
    _check_beta(beta)
    xg, wg = np.polynomial.legendre.leggauss(16)
    graded = 2.0 ** np.arange(-30, 1)           # 2^-30 .. 1
    uniform = np.arange(2.0, cutoff + 0.5, 1.0)  # unit panels out to the cutoff
    edges = np.concatenate([[0.0], graded, uniform])
    half = 0.5 * np.diff(edges)[:, None]
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    nodes = (mid + half * xg).ravel()
    weights = (half * wg).ravel()
    moment = 2.0 * np.sum(weights * fourier_K(nodes) * nodes**beta)
    return c_beta(beta) * moment


@lru_cache(maxsize=4096)
def make_constants(beta: float, rho: float) -> KernelConstants:
    """All kernel constants at ``(beta, rho)``; memoised on the exact float pair."""
    beta = float(beta)
    rho = float(rho)
    _check_beta(beta, allow_two=True)
    if not rho > 1.0:
        raise ValueError(f"rho must exceed 1, got {rho!r}")
    k_beta = compute_k_beta(beta)
    k_beta_rho = compute_k_beta_rho(beta, rho)
    c_beta_rho = k_beta_rho / (rho**beta * math.log(rho) ** 2 * k_beta**2)
    # C_beta has a pole at beta = 2
    cb = c_beta(beta) if beta < 2.0 else math.inf
    return KernelConstants(
        beta=beta,
        rho=rho,
        k_beta=k_beta,
        k_beta_rho=k_beta_rho,
        kbar_beta_rho=compute_kbar_beta_rho(beta, rho),
        kbar_beta_1=compute_kbar_beta_rho(beta, 1.0),
        c_beta_rho=c_beta_rho,
        c_beta=cb,
    )
