"""QMC integration over a triangle, reference integrals and convergence studies."""

from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import expm

from .digital import GeneratorPair, triangle_points
from .errors import DomainError
from .partition import UNIT_TRIANGLE, Triangle
from .quadrature import monomial_integral, monomial_means, oracle_integrate

__all__ = [
    "TestFunction",
    "ConvergenceRow",
    "Polynomial",
    "BUILTINS",
    "builtin",
    "function_from_option",
    "exp_affine_mean",
    "qmc_integrate",
    "evaluate",
    "monomial_integral",
    "oracle_integrate",
    "convergence_study",
    "study_counts",
    "composite_counts",
    "fit_rate",
]


class Polynomial:
    """Bivariate polynomial stored as {(p, q): coefficient}."""

    def __init__(self, terms: dict):
        self.terms = {(int(p), int(q)): float(c) for (p, q), c in terms.items() if c != 0}

    @classmethod
    def parse(cls, text: str) -> Polynomial:
        """Read e.g. ``"x^2 + 0.5*x*y - 3*y^2 + 1"``."""
        src = text.replace(" ", "")
        if not src:
            raise ValueError("empty polynomial")
        # split before each sign that is not part of a float exponent
        pieces = [p for p in re.split(r"(?<![eE])(?=[+-])", src) if p]
        terms: dict = {}
        for piece in pieces:
            sign = -1.0 if piece.startswith("-") else 1.0
            piece = piece[1:] if piece[0] in "+-" else piece
            coef = 1.0
            p = q = 0
            for factor in piece.split("*"):
                if not factor:
                    raise ValueError(f"bad term in polynomial {text!r}")
                m = re.fullmatch(r"([xy])(?:\^(\d+))?", factor)
                if m:
                    e = int(m.group(2) or 1)
                    if m.group(1) == "x":
                        p += e
                    else:
                        q += e
                else:
                    try:
                        coef *= float(factor)
                    except ValueError:
                        raise ValueError(f"bad factor {factor!r} in polynomial {text!r}") from None
            terms[(p, q)] = terms.get((p, q), 0.0) + sign * coef
        return cls(terms)

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=float)
        x, y = pts[..., 0], pts[..., 1]
        out = np.zeros(pts.shape[:-1])
        for (p, q), c in self.terms.items():
            out = out + c * x**p * y**q
        return out

    def cell_means(self, vertices) -> np.ndarray:
        v = np.asarray(vertices, dtype=float)
        out = np.zeros(v.shape[:-2])
        for (p, q), c in self.terms.items():
            out = out + c * monomial_means(v, p, q)
        return out

    def c2_norm_bound(self, T: Triangle) -> float:
        """Upper bound on max |d^(a+b) f / dx^a dy^b| over T, a + b <= 2.

        Uses |x| <= max vertex |x| (same for y) on the convex hull.
        """
        rx = float(np.max(np.abs(T.vertices[:, 0])))
        ry = float(np.max(np.abs(T.vertices[:, 1])))
        best = 0.0
        for a, b in ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)):
            s = 0.0
            for (p, q), c in self.terms.items():
                if p < a or q < b:
                    continue
                s += abs(c) * math.perm(p, a) * math.perm(q, b) * rx ** (p - a) * ry ** (q - b)
            best = max(best, s)
        return best

    def __repr__(self):
        return "Polynomial(" + " + ".join(f"{c:g}*x^{p}*y^{q}" for (p, q), c in self.terms.items()) + ")"


def exp_affine_mean(T: Triangle, a: complex, b: complex, c: complex = 0.0) -> complex:
    """Mean of exp(a x + b y + c) over ``T``.

    Equals twice the second divided difference of exp at the three vertex
    values, read off the exponential of a bidiagonal matrix so coincident
    vertex values need no special casing.
    """
    lv = a * T.vertices[:, 0] + b * T.vertices[:, 1] + c
    J = np.diag(lv.astype(complex)) + np.diag(np.ones(2, dtype=complex), 1)
    return 2.0 * expm(J)[0, 2]


@dataclass(frozen=True)
class TestFunction:
    """Integrand with a documented bound on its C^2 norm.

    ``c2_norm_bound`` refers to the unit triangle (0,0),(1,0),(0,1); use
    :meth:`norm_bound` for other triangles.  ``exact`` maps a triangle to the
    normalised integral when a closed form exists.
    """

    __test__ = False  # keep pytest from collecting this class

    name: str
    func: Callable = field(repr=False)
    c2_norm_bound: float
    poly: Polynomial | None = field(default=None, repr=False)
    exact: Callable | None = field(default=None, repr=False)
    norm_on: Callable | None = field(default=None, repr=False)

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=float)
        return np.broadcast_to(self.func(pts), pts.shape[:-1])

    def cell_means(self, vertices):
        if self.poly is None:
            raise AttributeError("cell means are only exact for polynomials")
        return self.poly.cell_means(vertices)

    def exact_integral(self, T: Triangle = UNIT_TRIANGLE, tol: float = 1e-12) -> float:
        if self.poly is not None:
            return float(self.poly.cell_means(T.vertices))
        if self.exact is not None:
            return float(self.exact(T))
        return oracle_integrate(self, T, tol)

    def norm_bound(self, T: Triangle = UNIT_TRIANGLE) -> float:
        if T == UNIT_TRIANGLE:
            return self.c2_norm_bound
        if self.poly is not None:
            return self.poly.c2_norm_bound(T)
        if self.norm_on is not None:
            return self.norm_on(T)
        raise ValueError(f"no C^2 norm bound known for {self.name} on {T}")

    @classmethod
    def from_polynomial(cls, name, poly: Polynomial, norm: float | None = None) -> TestFunction:
        bound = poly.c2_norm_bound(UNIT_TRIANGLE) if norm is None else norm
        return cls(name, poly, bound, poly=poly)


def _poly_fn(name, terms, bound):
    P = Polynomial(terms)
    return TestFunction(name, P, bound, poly=P)


BUILTINS: dict[str, TestFunction] = {
    f.name: f
    for f in (
        _poly_fn("constant", {(0, 0): 1.0}, 1.0),
        # bounds below are the documented ones; the exact norms are 2 and 2
        _poly_fn("affine", {(1, 0): 1.0, (0, 1): 2.0}, 3.0),
        _poly_fn("quadratic", {(2, 0): 1.0, (1, 1): 1.0, (0, 2): 1.0}, 4.0),
        TestFunction(
            "exp-sum",
            lambda p: np.exp(p[..., 0] + p[..., 1]),
            2 * math.e,
            exact=lambda T: exp_affine_mean(T, 1.0, 1.0).real,
            norm_on=lambda T: float(np.exp(np.max(T.vertices.sum(axis=1)))),
        ),
        TestFunction(
            "cos-diff",
            lambda p: np.cos(np.pi * (p[..., 0] - p[..., 1])),
            math.pi**2,
            exact=lambda T: exp_affine_mean(T, 1j * math.pi, -1j * math.pi).real,
            norm_on=lambda T: math.pi**2,
        ),
    )
}


def builtin(name: str) -> TestFunction:
    try:
        return BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown function {name!r}; built-ins are {sorted(BUILTINS)}") from None


def function_from_option(text: str, norm: float | None = None) -> TestFunction:
    """``poly:SPEC`` or a built-in name."""
    if text.startswith("poly:"):
        return TestFunction.from_polynomial(text, Polynomial.parse(text[5:]), norm)
    f = builtin(text)
    if norm is not None:
        f = TestFunction(f.name, f.func, norm, f.poly, f.exact, f.norm_on)
    return f


def evaluate(f, pts, jobs: int = 1) -> np.ndarray:
    """Values of ``f`` at ``pts`` (shape (N, 2)), optionally split over threads.

    Each point is evaluated independently, so the result does not depend on
    ``jobs``.
    """
    pts = np.asarray(pts, dtype=float)
    N = pts.shape[0]
    if jobs <= 1 or N < 4096:
        return np.array(np.broadcast_to(f(pts), (N,)), dtype=float)
    bounds = np.linspace(0, N, jobs + 1).astype(int)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(lambda ab: np.broadcast_to(f(pts[ab[0] : ab[1]]), (ab[1] - ab[0],)), zip(bounds, bounds[1:]))
        return np.concatenate(list(parts)).astype(float)


def qmc_integrate(f, points, T: Triangle | None = None, jobs: int = 1) -> float:
    """Equal-weight average of ``f`` over ``points`` (pairwise summation)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise ValueError("need at least one point")
    if T is not None:
        inside = T.contains(pts)
        if not np.all(inside):
            bad = pts[~inside][0]
            raise DomainError(f"point {bad.tolist()} lies outside {T}")
    return float(np.sum(evaluate(f, pts, jobs)) / pts.shape[0])


@dataclass(frozen=True)
class ConvergenceRow:
    m: int
    N: int
    qmc_value: float
    exact_value: float
    abs_error: float

    @property
    def scaled_m2(self) -> float:
        """error * 2^m / m^2 (with m = log2 N)."""
        lg = math.log2(self.N)
        return self.abs_error * self.N / lg**2 if lg > 0 else math.nan

    @property
    def scaled_log3(self) -> float:
        """error * N / (log2 N)^3."""
        lg = math.log2(self.N)
        return self.abs_error * self.N / lg**3 if lg > 0 else math.nan


def composite_counts(max_n: int) -> list[int]:
    """3, 5, 11, 23, 47, 95, ... up to ``max_n`` (each next value is 2N + 1)."""
    out = [3, 5]
    while 2 * out[-1] + 1 <= max_n:
        out.append(2 * out[-1] + 1)
    return [n for n in out if n <= max_n]


def study_counts(
    f, gen: GeneratorPair, T: Triangle, counts, exact: float | None = None, jobs: int = 1
) -> list[ConvergenceRow]:
    """Error rows for arbitrary point counts, all drawn from one prefix of the sequence."""
    counts = sorted(set(int(c) for c in counts))
    if not counts or counts[0] < 1:
        raise ValueError("point counts must be positive")
    if exact is None:
        exact = f.exact_integral(T) if hasattr(f, "exact_integral") else oracle_integrate(f, T)
    pts = triangle_points(gen, T, counts[-1])
    vals = evaluate(f, pts, jobs)
    rows = []
    for N in counts:
        q = float(np.sum(vals[:N]) / N)
        rows.append(ConvergenceRow(N.bit_length() - 1, N, q, exact, abs(q - exact)))
    return rows


def convergence_study(
    f,
    gen: GeneratorPair,
    T: Triangle = UNIT_TRIANGLE,
    m_range=range(1, 11),
    include_non_powers=False,
    exact=None,
    jobs: int = 1,
) -> list[ConvergenceRow]:
    """Rows for N = 2^m over ``m_range``; optionally also N = 2^m + 2^(m-2) + 1."""
    ms = list(m_range)
    if not ms:
        raise ValueError("m_range is empty")
    counts = [2**m for m in ms]
    if include_non_powers:
        counts += [2**m + 2 ** (m - 2) + 1 for m in ms if m >= 2]
    return study_counts(f, gen, T, counts, exact, jobs)


def fit_rate(rows) -> float:
    """Least-squares alpha in error ~ N^-alpha; NaN when fewer than 3 nonzero errors."""
    pairs = [(math.log2(r.N), math.log2(r.abs_error)) for r in rows if r.abs_error > 0]
    if len(pairs) < 3:
        return math.nan
    x, y = np.array(pairs).T
    slope = np.polyfit(x, y, 1)[0]
    return float(-slope)
