import math

import numpy as np
import pytest

from triqmc.errors import ToleranceNotMet
from triqmc.partition import UNIT_TRIANGLE, Triangle
from triqmc.quadrature import (
    collapsed_gauss_rule,
    gauss_mean,
    monomial_integral,
    monomial_means,
    oracle_integrate,
    romberg_cell_means,
)

U = UNIT_TRIANGLE
SKEW = Triangle((1.0, -2.0), (4.5, 0.5), (-0.5, 3.0))


@pytest.mark.parametrize("p, q, value", [(0, 0, 1.0), (1, 0, 1 / 3), (0, 1, 1 / 3), (1, 1, 1 / 12), (2, 0, 1 / 6)])
def test_monomial_examples(p, q, value):
    assert monomial_integral(U, p, q) == pytest.approx(value, abs=1e-16)


def test_monomial_dirichlet_values():
    # 2 p! q! / (p + q + 2)! on the unit triangle
    for p in range(7):
        for q in range(7):
            want = 2 * math.factorial(p) * math.factorial(q) / math.factorial(p + q + 2)
            assert monomial_integral(U, p, q) == pytest.approx(want, rel=1e-13)


def test_monomial_rejects_negative():
    with pytest.raises(ValueError):
        monomial_integral(U, -1, 0)


@pytest.mark.parametrize("p, q", [(3, 2), (0, 5), (4, 4), (1, 0)])
def test_monomial_agrees_with_gauss_and_subdivision(p, q):
    f = lambda x: x[..., 0] ** p * x[..., 1] ** q  # noqa: E731
    exact = monomial_integral(SKEW, p, q)
    scale = max(1.0, abs(exact))
    assert gauss_mean(f, SKEW, order=8) == pytest.approx(exact, abs=1e-12 * scale)
    assert oracle_integrate(f, SKEW, 1e-13) == pytest.approx(exact, abs=1e-10 * scale)


def test_monomial_means_vectorised():
    verts = np.stack([U.vertices, SKEW.vertices])
    got = monomial_means(verts, 2, 1)
    assert got.shape == (2,)
    assert got[1] == pytest.approx(monomial_integral(SKEW, 2, 1))


def test_gauss_rule_weights_and_exactness():
    lam, w = collapsed_gauss_rule(5)
    assert w.sum() == pytest.approx(1.0, abs=1e-15)
    assert np.all(lam >= 0) and np.allclose(lam.sum(axis=1), 1)
    f = lambda x: x[..., 0] ** 5 * x[..., 1] ** 3  # noqa: E731
    assert gauss_mean(f, U, order=5) == pytest.approx(monomial_integral(U, 5, 3), rel=1e-13)


def test_oracle_exp_mean_is_two():
    # int_T exp(x + y) = 1 over the unit triangle, whose area is 1/2
    f = lambda x: np.exp(x[..., 0] + x[..., 1])  # noqa: E731
    assert oracle_integrate(f, U, 1e-12) == pytest.approx(2.0, abs=1e-10)


def test_oracle_constant_stops_immediately():
    values, depth = romberg_cell_means(lambda x: 3.5, U, 0)
    assert values[0] == 3.5 and depth == 1


def test_romberg_cell_means_sum_to_total():
    f = lambda x: np.sin(x[..., 0]) * np.exp(x[..., 1])  # noqa: E731
    cells, _ = romberg_cell_means(f, SKEW, 3)
    assert cells.shape == (64,)
    assert cells.mean() == pytest.approx(oracle_integrate(f, SKEW), rel=1e-11)


def test_tolerance_not_met_carries_estimate():
    f = lambda x: np.sqrt(np.abs(x[..., 0] - 0.3))  # noqa: E731
    with pytest.raises(ToleranceNotMet) as info:
        romberg_cell_means(f, U, 0, tol=1e-15, max_depth=3)
    assert info.value.estimate[0] == pytest.approx(gauss_mean(f, U, 30), abs=1e-2)
    values, depth = romberg_cell_means(f, U, 0, tol=1e-15, max_depth=3, strict=False)
    assert depth == 3 and np.allclose(values, info.value.estimate)
    with pytest.raises(ValueError):
        oracle_integrate(f, U, tol=0)
