"""Quadrature helpers: composite Gauss-Legendre panels and exponential moments."""

import numpy as np
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss

__all__ = ["gauss_legendre_panels", "exponential_moment"]


def gauss_legendre_panels(f, a, b, panels=8, order=24):
    """Integral of f over [a, b] by Gauss-Legendre rules on equal panels."""
    nodes, weights = leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        x = lo + half * (nodes + 1.0)
        total += half * float(np.sum(weights * f(x)))
    return total


def exponential_moment(g, decay, power, nodes):
    """Integral of x^power e^{-decay x} g(x) over [0, inf) by Gauss-Laguerre.

    Exact (up to rounding) whenever x^power g(x) is a polynomial of degree
    below 2 * nodes.
    """
    if decay <= 0:
        raise ValueError(f"need a positive exponential decay rate, got {decay}")
    u, w = laggauss(nodes)
    x = u / decay
    return float(np.sum(w * u ** power * np.asarray(g(x), dtype=float))) / decay ** (power + 1)
