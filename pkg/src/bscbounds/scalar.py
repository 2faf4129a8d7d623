"""Scalar information quantities on [0, 1/2]: binary entropy, its inverse,
the binary convolution of crossover probabilities, and a Taylor expansion of
entropy around the balanced point."""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, check_range

__all__ = [
    "binary_entropy",
    "inv_binary_entropy",
    "binary_convolve",
    "entropy_taylor",
]

_BISECT_TOL = 1e-12
_LOG2E = math.log2(math.e)


def binary_entropy(p: float) -> float:
    """Entropy of a Bernoulli(p) bit, in bits. Zero at both endpoints."""
    p = check_range("p", p, 0.0, 1.0)
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def _entropy_vec(p: np.ndarray) -> np.ndarray:
    # vectorized binary_entropy with the same endpoint convention
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    inner = (p > 0.0) & (p < 1.0)
    pi = p[inner]
    out[inner] = -(pi * np.log2(pi) + (1.0 - pi) * np.log2(1.0 - pi))
    return out


def inv_binary_entropy(u: float) -> float:
    """The p in [0, 1/2] with binary_entropy(p) = u, by bisection to 1e-12."""
    u = check_range("u", u, 0.0, 1.0)
    if u == 0.0:
        return 0.0
    if u == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < u:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def binary_convolve(a: float, b: float) -> float:
    """Crossover probability of two cascaded symmetric flips: a(1-b) + b(1-a)."""
    a = check_range("a", a, 0.0, 1.0)
    b = check_range("b", b, 0.0, 1.0)
    return a * (1.0 - b) + b * (1.0 - a)


def entropy_taylor(p: float, terms: int) -> float:
    """Partial sum of the expansion

        h(1/2 + p/2) = 1 - sum_{k>=1} log2(e) / (2k(2k-1)) * p^(2k)

    truncated after `terms` series terms. Converges for |p| <= 1; the series
    is alternating-free (every term is subtracted), so partial sums decrease
    monotonically toward the true value.
    """
    p = check_range("p", p, -1.0, 1.0)
    if not isinstance(terms, (int, np.integer)) or terms < 1:
        raise DomainError(f"terms must be a positive integer, got {terms!r}")
    p2 = p * p
    power = 1.0
    total = 1.0
    for k in range(1, int(terms) + 1):
        power *= p2
        total -= _LOG2E / (2 * k * (2 * k - 1)) * power
    return total
