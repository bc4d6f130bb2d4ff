"""Quadrature rules shared by the projection and normalization code."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def _gauss_legendre(order):
    return np.polynomial.legendre.leggauss(order)


def symmetric_panels(half_width, n_points=4096, order=16):
    """Composite Gauss-Legendre rule on [-half_width, half_width].

    The origin is a panel boundary, so integrands with a kink at y = 0 (even
    relative-motion modes) are integrated to full order on each side.
    Returns ``(nodes, weights)`` with roughly ``n_points`` nodes.
    """
    per_side = max(1, int(round(n_points / (2 * order))))
    edges = np.linspace(0.0, half_width, per_side + 1)
    x, w = _gauss_legendre(order)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    right = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wr = (half[:, None] * w[None, :]).ravel()
    nodes = np.concatenate([-right[::-1], right])
    weights = np.concatenate([wr[::-1], wr])
    return nodes, weights


def simpson_weights(n, h):
    """Composite Simpson weights for n (odd) equally spaced samples."""
    if n < 3 or n % 2 == 0:
        raise ValueError("Simpson's rule needs an odd number (>= 3) of samples")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)
