"""Independent reference computations used to derive frozen expected values.

Nothing here imports the package's numerical code: the kernel is re-typed
from its definition and the integrals are plain midpoint sums.
"""

import math

import numpy as np
from scipy import integrate


def kernel(x):
    x = np.abs(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    out[x <= 1] = 1.0
    mid = (x > 1) & (x < 2)
    xm = x[mid]
    with np.errstate(over="ignore"):
        out[mid] = 1.0 / (1.0 + np.exp(1.0 / (2.0 - xm) - 1.0 / (xm - 1.0)))
    return out


def midpoint(f, a, b, panels=1_000_000):
    h = (b - a) / panels
    x = a + h * (np.arange(panels) + 0.5)
    return h * np.sum(f(x))


def k_beta(beta, panels=1_000_000):
    band = midpoint(lambda x: (1 - kernel(x)) * x ** -(1 + beta), 1.0, 2.0, panels)
    return 2 * (band + 2.0**-beta / beta)


def k_beta_rho(beta, rho, panels=1_000_000):
    f = lambda x: (kernel(x) - kernel(rho * x)) ** 2 * x ** -(1 + beta)
    return 2 * midpoint(f, 1.0 / rho, 2.0, panels)


def kbar_beta_rho(beta, rho, panels=1_000_000):
    f = lambda x: (1 - kernel(x)) * (1 - kernel(rho * x)) * x ** -(1 + beta)
    return rho ** (-beta / 2) * 2 * (midpoint(f, 1.0, 2.0, panels) + 2.0**-beta / beta)


def levy_exponent_integral(beta, u):
    """``int_0^inf (1 - cos(ux)) x^-(1+beta) dx`` by quadrature with analytic tails.

    Substituting y = |u| x gives ``|u|^beta * I`` with I the integral at u = 1.
    On [0, eps] the integrand is expanded in its Taylor series; on [Y, inf)
    the non-oscillatory part is exact and the cosine part uses QUADPACK's
    Fourier-integral rule.
    """
    eps, Y = 1e-2, 50.0
    # sum_k (-1)^(k+1) y^(2k) / (2k)!  integrated against y^-(1+beta)
    small = sum((-1) ** (k + 1) * eps ** (2 * k - beta) / (math.factorial(2 * k) * (2 * k - beta))
                for k in range(1, 8))
    body = integrate.quad(lambda y: (1 - math.cos(y)) * y ** -(1 + beta), eps, Y,
                          epsabs=0, epsrel=1e-12, limit=500)[0]
    tail_flat = Y**-beta / beta
    tail_cos = integrate.quad(lambda y: y ** -(1 + beta), Y, np.inf, weight="cos", wvar=1.0)[0]
    return abs(u) ** beta * (small + body + tail_flat - tail_cos)


def literal_jump_count(values, tau, m):
    """Transcription of the defining double sum, one scalar at a time."""
    n = len(values)
    w = [(-1) ** (k + 1) * math.comb(m, k) / (2 * k) for k in range(1, m + 1)]

    def sym(j):
        return (values[j + 2] - values[j + 1]) - (values[j + 1] - values[j])

    total = 0.0
    for j in range(n - 2 * m):
        a = 0.0
        for k in range(1, m + 1):
            dx = sum(sym(j + 2 * l) for l in range(k))
            a += w[k - 1] * (1 - float(kernel(tau * dx)))
        total += a
    return total


def raw_multiscale_increment(values, j, k):
    """Second-difference window sum written directly in prices."""
    return sum(values[j + 2 * l + 2] - 2 * values[j + 2 * l + 1] + values[j + 2 * l] for l in range(k))


def jump_explicit_increments(theta, beta, n, size, rng, cutoff):
    """Increments over 1/n of ``theta * S``, built jump by jump.

    Jumps above ``cutoff`` form a compound Poisson process with Pareto sizes
    drawn from the Levy density ``theta^beta |x|^-(1+beta) / C``, where
    ``C = pi / (Gamma(1+beta) sin(beta pi/2))``; the small jumps are replaced
    by a Gaussian with the same variance. Returns the increments and whether
    each contains a jump with absolute size above 0.2.
    """
    const = math.pi / (math.gamma(1 + beta) * math.sin(beta * math.pi / 2))
    rate = 2 * theta**beta * cutoff**-beta / (beta * const * n)
    counts = rng.poisson(rate, size)
    total = int(counts.sum())
    sizes = cutoff * rng.uniform(size=total) ** (-1 / beta) * rng.choice([-1.0, 1.0], total)
    owner = np.repeat(np.arange(size), counts)
    big = np.bincount(owner, weights=sizes, minlength=size)
    has_big = np.bincount(owner, weights=np.abs(sizes) > 0.2, minlength=size) > 0
    small_var = 2 * theta**beta * cutoff ** (2 - beta) / ((2 - beta) * const * n)
    return big + rng.normal(0.0, math.sqrt(small_var), size), has_big
