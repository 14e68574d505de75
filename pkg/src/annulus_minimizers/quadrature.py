"""Composite quadrature rules used by the energy evaluators."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

DEFAULT_ORDER = 8


@lru_cache(maxsize=32)
def _legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_nodes(breaks, order: int = DEFAULT_ORDER):
    """Return nodes and weights of a composite Gauss-Legendre rule.

    Parameters
    ----------
    breaks : array_like
        Increasing panel boundaries.
    order : int
        Number of Gauss points per panel.

    Returns
    -------
    nodes, weights : ndarray
        Flat arrays, panel-major.
    """
    breaks = np.asarray(breaks, dtype=float)
    x, w = _legendre(order)
    left = breaks[:-1, None]
    half = 0.5 * np.diff(breaks)[:, None]
    nodes = left + half * (x[None, :] + 1.0)
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def composite_gauss(f, a: float, b: float, panels: int = 64, order: int = DEFAULT_ORDER, breaks=None) -> float:
    """Integrate a vectorized callable over [a, b].

    ``breaks`` overrides the uniform panel layout, which lets callers align
    panels with the knots of a piecewise interpolant.
    """
    if breaks is None:
        breaks = np.linspace(a, b, panels + 1)
    nodes, weights = gauss_nodes(breaks, order)
    return fsum_dot(weights, f(nodes))


def fsum_dot(weights, values) -> float:
    """Compensated dot product; order independent and reproducible."""
    return math.fsum(np.asarray(weights * values, dtype=float).ravel())


def uniform_weights(n: int, h: float) -> np.ndarray:
    """Quadrature weights for ``n`` equispaced samples with step ``h``.

    Composite Simpson on an even number of intervals; for an odd number of
    intervals the last three are covered by Simpson's 3/8 rule. Both are
    fourth order, so the rule is exact for cubics.
    """
    if n < 2:
        raise ValueError("need at least two samples")
    w = np.zeros(n)
    if n == 2:
        w[:] = h / 2.0
        return w
    if n == 3:
        w[:] = np.array([1.0, 4.0, 1.0]) * h / 3.0
        return w
    intervals = n - 1
    m = intervals if intervals % 2 == 0 else intervals - 3
    if m > 0:
        w[0:m + 1:2] += 2.0 * h / 3.0
        w[1:m:2] += 4.0 * h / 3.0
        w[0] -= h / 3.0
        w[m] -= h / 3.0
    if m != intervals:
        w[m:m + 4] += np.array([1.0, 3.0, 3.0, 1.0]) * 3.0 * h / 8.0
    return w
