"""Reference-element quadrature rules.

Gauss-Legendre on [-1,1] and collapsed (Duffy) tensor rules on the unit
reference triangle {u >= 0, v >= 0, u + v <= 1}.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "triangle_rule",
    "graded_segments",
    "gauss_tables",
]


@dataclass(frozen=True)
class QuadratureRule:
    points: np.ndarray   # (m,) on [-1,1] or (m,2) on the reference triangle
    weights: np.ndarray  # (m,)
    order: int           # polynomial exactness degree


def gauss_legendre(m):
    """m-point Gauss-Legendre rule on [-1,1], exact to degree 2m-1."""
    if not 1 <= m <= 64:
        raise ValueError(f"point count must lie in [1, 64], got {m}")
    x, w = np.polynomial.legendre.leggauss(m)
    return QuadratureRule(points=x, weights=w, order=2 * m - 1)


def gauss_on(a, b, m):
    """Gauss points/weights mapped to the interval [a, b]."""
    rule = gauss_legendre(m)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * rule.points, half * rule.weights


def triangle_rule(m):
    """Collapsed m*m tensor Gauss rule on the reference triangle.

    Duffy map (a,b) -> (a, b(1-a)) of the unit square; exact for
    polynomials of total degree <= m-... conservatively 2m-3, plenty for
    the P1 integrands used here.
    """
    g = gauss_legendre(m)
    a = 0.5 * (g.points + 1.0)
    wa = 0.5 * g.weights
    u = np.repeat(a, m)
    b = np.tile(a, m)
    w = np.repeat(wa, m) * np.tile(wa, m) * (1.0 - u)
    v = b * (1.0 - u)
    pts = np.column_stack([u, v])
    return QuadratureRule(points=pts, weights=w, order=max(1, 2 * m - 3))


def gauss_tables(max_m=24):
    """Flat Gauss-Legendre tables for compiled kernels.

    Returns (gx, gw, goff): the m-point rule occupies gx[goff[m]:goff[m]+m].
    """
    goff = np.zeros(max_m + 2, dtype=np.int64)
    xs, ws = [], []
    off = 0
    for m in range(1, max_m + 1):
        goff[m] = off
        x, w = np.polynomial.legendre.leggauss(m)
        xs.append(x)
        ws.append(w)
        off += m
    goff[max_m + 1] = off
    return np.concatenate(xs), np.concatenate(ws), goff


def graded_segments(a, b, levels, ratio=0.5, toward_b=True):
    """Breakpoints of a geometric composite subdivision of [a, b].

    Segment widths shrink by `ratio` toward the singular endpoint; the
    last sliver keeps the endpoint itself. Returns an array of
    breakpoints of length levels + 2.
    """
    widths = (1.0 - ratio) * ratio ** np.arange(levels + 1)
    cuts = np.concatenate([[0.0], np.cumsum(widths)])
    cuts[-1] = 1.0  # widths shrink geometrically toward 1
    if toward_b:
        return a + (b - a) * cuts
    return a + (b - a) * (1.0 - cuts[::-1])
