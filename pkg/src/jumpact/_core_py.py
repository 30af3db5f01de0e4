"""Pure numpy implementation of the counting kernels.

Mirrors ``jumpact._core`` exactly in what it computes; used when the
compiled extension is unavailable or ``JUMPACT_PURE_PYTHON`` is set.
"""

import numpy as np


def kernel_values(x):
    x = np.asarray(x, dtype=np.float64)
    a = np.abs(x)
    out = np.where(a <= 1.0, 1.0, 0.0)
    band = (a > 1.0) & (a < 2.0)
    ab = a[band]
    with np.errstate(over="ignore"):
        out[band] = 1.0 / (1.0 + np.exp(1.0 / (2.0 - ab) - 1.0 / (ab - 1.0)))
    return out


def smoothed_counts(values, taus, m):
    """Per-scale smoothed counts ``sum_j (1 - K(tau * dX_{j,k}))``.

    Returns an array of shape ``(len(taus), m)``; entry ``[t, k-1]`` sums
    over ``j = 0 .. n-2m-1``.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    taus = np.atleast_1d(np.asarray(taus, dtype=np.float64))
    n = values.shape[0]
    if n < 2 * m + 2:
        raise ValueError(f"need at least {2 * m + 2} observations for m={m}, got {n}")
    d = np.diff(values)
    sym = d[1:] - d[:-1]
    width = n - 2 * m
    out = np.empty((taus.size, m))
    acc = sym[:width].copy()
    for k in range(1, m + 1):
        if k > 1:
            acc += sym[2 * (k - 1):2 * (k - 1) + width]
        for t, tau in enumerate(taus):
            out[t, k - 1] = np.sum(1.0 - kernel_values(tau * acc))
    return out


def threshold_counts(values, taus):
    """Number of raw increments with ``tau * |dX| >= 1``, per tau."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    taus = np.atleast_1d(np.asarray(taus, dtype=np.float64))
    if values.shape[0] < 2:
        raise ValueError("need at least 2 observations")
    a = np.abs(np.diff(values))
    return np.array([np.count_nonzero(tau * a >= 1.0) for tau in taus], dtype=np.int64)
