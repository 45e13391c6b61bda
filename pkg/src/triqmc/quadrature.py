"""Reference integrators over triangles.

All integrals here are *normalised*: the mean value ``(1/|T|) * int_T f``.
Functions to be integrated take an array of points of shape (..., 2) and
return an array of shape (...).
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np

from .errors import ToleranceNotMet
from .partition import Triangle, cell_centres

__all__ = [
    "monomial_integral",
    "monomial_means",
    "collapsed_gauss_rule",
    "gauss_mean",
    "romberg_cell_means",
    "oracle_integrate",
    "MAX_DEPTH",
]

MAX_DEPTH = 14
_CHUNK = 1 << 21


def _power_expansion(coords, p):
    """(sum_i lam_i c_i)^p as {(a, b, c): coefficient array}."""
    out = {}
    for a in range(p + 1):
        for b in range(p - a + 1):
            c = p - a - b
            mult = math.factorial(p) // (math.factorial(a) * math.factorial(b) * math.factorial(c))
            out[(a, b, c)] = mult * coords[..., 0] ** a * coords[..., 1] ** b * coords[..., 2] ** c
    return out


def monomial_means(vertices, p: int, q: int) -> np.ndarray:
    """Mean of x^p y^q over each triangle in ``vertices`` (shape (..., 3, 2)).

    Writes x and y in barycentric coordinates, expands, and integrates each
    term with  mean(l1^a l2^b l3^c) = 2 a! b! c! / (a + b + c + 2)!.
    """
    if p < 0 or q < 0:
        raise ValueError("exponents must be nonnegative")
    v = np.asarray(vertices, dtype=float)
    xs = _power_expansion(v[..., 0], p)
    ys = _power_expansion(v[..., 1], q)
    deg = p + q
    scale = 2.0 / math.factorial(deg + 2)
    total = np.zeros(v.shape[:-2])
    for (e1, cx), (e2, cy) in product(xs.items(), ys.items()):
        a, b, c = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
        total = total + cx * cy * (math.factorial(a) * math.factorial(b) * math.factorial(c) * scale)
    return total


def monomial_integral(T: Triangle, p: int, q: int) -> float:
    """Normalised integral of x^p y^q over ``T``."""
    return float(monomial_means(T.vertices, p, q))


def collapsed_gauss_rule(order: int):
    """Barycentric nodes and weights (summing to 1) from a collapsed Gauss-Legendre product.

    Exact for polynomials of total degree up to ``2 * order - 2``.
    """
    s, ws = np.polynomial.legendre.leggauss(order)
    s = (s + 1) / 2
    ws = ws / 2
    u = s[:, None] * np.ones(order)[None, :]
    w = (1 - s)[:, None] * s[None, :]
    weights = (ws[:, None] * ws[None, :] * (1 - s)[:, None]) * 2
    lam1 = u.ravel()
    lam2 = w.ravel()
    lam = np.stack([1 - lam1 - lam2, lam1, lam2], axis=1)
    return lam, weights.ravel()


def gauss_mean(f, T: Triangle, order: int = 12) -> float:
    lam, w = collapsed_gauss_rule(order)
    pts = lam @ T.vertices
    return float(np.sum(w * np.broadcast_to(f(pts), w.shape)))


def _level_means(f, T: Triangle, n: int, k: int) -> np.ndarray:
    """Centroid-rule means of f over every level-n cell using its 4^k level-(n+k) children."""
    base = np.arange(4**n, dtype=np.int64)
    total = np.zeros(4**n)
    per = max(1, _CHUNK // 4**n)
    for start in range(0, 4**k, per):
        ys = np.arange(start, min(4**k, start + per), dtype=np.int64)
        codes = base[None, :] + (ys[:, None] << (2 * n))
        pts = cell_centres(codes, n + k, T)
        total += np.broadcast_to(f(pts), pts.shape[:-1]).sum(axis=0)
    return total / 4**k


def romberg_cell_means(f, T: Triangle, n: int = 0, tol: float = 1e-12, max_depth: int = MAX_DEPTH, strict=True):
    """Mean of ``f`` over each level-``n`` cell by subdivision and Richardson extrapolation.

    The centroid rule on the 4^k-fold refinement has an error expansion in
    powers of 4^-k, so column j of the tableau removes the 4^-j term.  Stops
    once successive diagonal entries agree to ``tol`` (relative, floor 1).

    Returns ``(values, depth)``.  At the depth cap raises
    :class:`ToleranceNotMet` carrying the best estimate, unless ``strict`` is
    false.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    prev_row = [_level_means(f, T, n, 0)]
    best = prev_row[0]
    for k in range(1, max_depth + 1):
        row = [_level_means(f, T, n, k)]
        for j in range(1, k + 1):
            row.append((4**j * row[j - 1] - prev_row[j - 1]) / (4**j - 1))
        diff = np.max(np.abs(row[-1] - best) / np.maximum(1.0, np.abs(row[-1])))
        best = row[-1]
        prev_row = row
        if diff < tol:
            return best, k
    if strict:
        raise ToleranceNotMet(f"subdivision did not reach tol={tol} by depth {max_depth}", best)
    return best, max_depth


def oracle_integrate(f, T: Triangle, tol: float = 1e-12, max_depth: int = MAX_DEPTH) -> float:
    """Normalised integral of ``f`` over ``T`` by extrapolated centroid subdivision."""
    values, _ = romberg_cell_means(f, T, 0, tol, max_depth)
    return float(values[0])
