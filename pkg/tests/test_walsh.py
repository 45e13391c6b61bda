import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import index_matrices
from triqmc.bitcore import IndexMatrix, iter_index_matrices
from triqmc.digital import NetSpec, basu_owen_pair, net_codes, pascal_pair
from triqmc.harness import BUILTINS, Polynomial, TestFunction, builtin
from triqmc.partition import UNIT_TRIANGLE, Triangle, subregion_vertices_codes
from triqmc.quadrature import oracle_integrate
from triqmc.quality import dual_net, span_codes
from triqmc.walsh import (
    DiscretizedTable,
    RwIndex,
    decay_constant,
    discretize,
    dyadic_difference,
    dyadic_hat_residuals,
    fwht,
    rw_coefficient,
    rw_mask,
    rw_membership,
    v_of_code,
    verify_decay_bound,
    walsh_coefficient,
    walsh_eval,
    walsh_signs,
    walsh_synthesis,
    walsh_transform,
)

U = UNIT_TRIANGLE
SKEW = Triangle((1.0, -2.0), (4.5, 0.5), (-0.5, 3.0))
X_FN = TestFunction.from_polynomial("x", Polynomial({(1, 0): 1.0}))


def _random_table(rng, n):
    return DiscretizedTable(n, rng.standard_normal(4**n))


def test_walsh_eval_examples():
    assert walsh_eval(IndexMatrix([(1, 0)]), IndexMatrix([(1, 1)])) == -1
    for X in iter_index_matrices(2):
        assert walsh_eval(IndexMatrix.zeros(2), X) == 1


@given(index_matrices(max_n=6), st.data())
def test_walsh_multiplicative(K, data):
    X = IndexMatrix.from_code(data.draw(st.integers(0, 4**K.n - 1)), K.n)
    Y = IndexMatrix.from_code(data.draw(st.integers(0, 4**K.n - 1)), K.n)
    assert walsh_eval(K, X ^ Y) == walsh_eval(K, X) * walsh_eval(K, Y)
    assert walsh_signs(K.code, [X.code])[0] == walsh_eval(K, X)


def test_discretize_x_level_one():
    F = discretize(X_FN, U, 1)
    assert np.allclose(F.values, [1 / 3, 1 / 6, 2 / 3, 1 / 6], atol=1e-15)
    assert F[IndexMatrix([(0, 1)])] == pytest.approx(2 / 3)
    assert walsh_coefficient(F, IndexMatrix.zeros(1)) == pytest.approx(1 / 3)
    assert walsh_coefficient(F, IndexMatrix([(1, 0)])) == pytest.approx(1 / 6)


def test_discretize_constant():
    F = discretize(builtin("constant"), SKEW, 3)
    assert np.all(F.values == 1.0)
    coeffs = walsh_transform(F)
    assert coeffs[0] == 1.0 and np.all(coeffs[1:] == 0)


def test_table_validation_and_immutability():
    with pytest.raises(ValueError):
        DiscretizedTable(2, np.zeros(15))
    F = DiscretizedTable(1, np.zeros(4))
    with pytest.raises(ValueError):
        F.values[0] = 1.0
    with pytest.raises(ValueError):
        F[IndexMatrix.zeros(2)]
    with pytest.raises(ValueError):
        discretize(X_FN, U, 14)


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_discretization_preserves_mean(name):
    f = builtin(name)
    exact = oracle_integrate(f, U, 1e-12)
    for n in range(0, 7):
        assert discretize(f, U, n).mean() == pytest.approx(exact, abs=1e-9)


def test_polynomial_and_subdivision_paths_agree():
    f = builtin("quadratic")
    plain = TestFunction("plain", f.func, f.c2_norm_bound)
    a = discretize(f, SKEW, 4).values
    b = discretize(plain, SKEW, 4).values
    assert np.allclose(a, b, rtol=1e-11)


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_pointwise_discretization_bound(name, rng):
    f = builtin(name)
    for n in range(1, 7):
        F = discretize(f, U, n)
        codes = rng.integers(0, 4**n, size=2000)
        y = np.einsum("sk,skd->sd", rng.dirichlet(np.ones(3), size=codes.size), subregion_vertices_codes(codes, n, U))
        gap = np.abs(f(y) - F.values[codes])
        assert np.all(gap <= math.sqrt(2) * U.diameter * f.c2_norm_bound / 2**n)


@pytest.mark.parametrize("n", range(1, 5))
def test_walsh_reconstruction(n, rng):
    for _ in range(5):
        F = _random_table(rng, n)
        assert np.allclose(walsh_synthesis(walsh_transform(F)), F.values, atol=1e-12)


def test_fast_transform_matches_direct_sums(rng):
    F = _random_table(rng, 3)
    coeffs = walsh_transform(F)
    for K in iter_index_matrices(3):
        assert coeffs[K.code] == pytest.approx(walsh_coefficient(F, K), abs=1e-14)
    with pytest.raises(ValueError):
        fwht(np.zeros(6))


@pytest.mark.parametrize("gen", [basu_owen_pair(), pascal_pair()])
def test_character_property(gen):
    for n in range(1, 7):
        K = np.arange(4**n, dtype=np.int64)
        for m in range(0, n + 1):
            P = net_codes(NetSpec(gen, m, n))
            sums = sum(walsh_signs(K, [x]) for x in P.tolist())
            want = np.zeros(4**n)
            want[span_codes(dual_net(gen, n, m))] = P.size
            assert np.array_equal(sums, want)


@pytest.mark.parametrize("gen", [basu_owen_pair(), pascal_pair()])
def test_qmc_error_identity(gen, rng):
    for _ in range(20):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(0, n + 1))
        F = _random_table(rng, n)
        sigma = int(rng.integers(0, 4**n))
        P = net_codes(NetSpec(gen, m, n))
        lhs = F.values[P ^ sigma].mean() - F.mean()
        dual = span_codes(dual_net(gen, n, m))[1:]
        coeffs = walsh_transform(F)
        rhs = float(np.sum(coeffs[dual] * walsh_signs(sigma, dual)))
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_rw_index_validation():
    with pytest.raises(ValueError):
        RwIndex(IndexMatrix.zeros(2), 0)
    with pytest.raises(ValueError):
        RwIndex(IndexMatrix([(1, 0), (0, 1)]), 2)
    RwIndex(IndexMatrix([(1, 0), (0, 1)]), 1)


@pytest.mark.parametrize("n", range(1, 6))
def test_rw_sets_partition_with_right_sizes(n):
    for k in range(1, 4**n):
        K = IndexMatrix.from_code(k, n)
        v = v_of_code(k)
        masks = [rw_mask(K, w) for w in range(v)]
        assert int(masks[0].sum()) == 4**n * 2 ** (1 - v)
        for w in range(1, v):
            assert int(masks[w].sum()) == 4**n * 2 ** (w - v)
        assert np.all(np.sum(masks, axis=0) == 1)


def test_rw_membership_matches_masks(rng):
    for _ in range(50):
        n = int(rng.integers(1, 5))
        K = IndexMatrix.from_code(int(rng.integers(1, 4**n)), n)
        w = int(rng.integers(0, v_of_code(K.code)))
        mask = rw_mask(K, w)
        for X in iter_index_matrices(n):
            assert rw_membership(X, K, w) == bool(mask[X.code])


def test_rw_pieces_sum_to_coefficient(rng):
    for _ in range(30):
        n = int(rng.integers(1, 6))
        F = _random_table(rng, n)
        K = IndexMatrix.from_code(int(rng.integers(1, 4**n)), n)
        total = sum(rw_coefficient(F, K, w) for w in range(v_of_code(K.code)))
        assert total == pytest.approx(walsh_coefficient(F, K), abs=1e-14)


def test_rw_single_piece_when_v_is_one(rng):
    F = _random_table(rng, 3)
    for k in (1, 2, 3):
        K = IndexMatrix.from_code(k, 3)
        assert rw_coefficient(F, K, 0) == pytest.approx(walsh_coefficient(F, K), abs=1e-15)


def test_rw_pieces_vanish_for_constant():
    F = DiscretizedTable(3, np.full(64, 2.5))
    for k in range(1, 64):
        K = IndexMatrix.from_code(k, 3)
        for w in range(v_of_code(k)):
            assert rw_coefficient(F, K, w) == pytest.approx(0.0, abs=1e-15)


def test_dyadic_difference_on_constants():
    F = DiscretizedTable(2, np.full(16, 3.0))
    K = IndexMatrix([(0, 0), (1, 1)])
    assert np.all(dyadic_difference(F, K, 1).values == 6.0)
    assert np.all(dyadic_difference(F, K, 2).values == 0.0)
    with pytest.raises(ValueError):
        dyadic_difference(F, K, 3)


def test_dyadic_hat_identities(rng):
    for _ in range(40):
        n = int(rng.integers(1, 6))
        F = _random_table(rng, n)
        for k in rng.integers(1, 4**n, size=5):
            res = dyadic_hat_residuals(F, IndexMatrix.from_code(int(k), n))
            assert max(res.values()) <= 1e-14 * max(1.0, np.abs(F.values).max())


def _second_difference_samples(rng, count):
    lam = rng.dirichlet(np.ones(3), size=(count, 3))
    y, a, b = (lam[:, j] @ U.vertices for j in range(3))
    # y, y + z1, y + z2, y + z1 + z2 inside the convex triangle via midpoint shrinking
    z1, z2 = (a - y) / 2, (b - y) / 2
    return y, z1, z2


@pytest.mark.parametrize("text", ["x^2 + x*y + y^2", "x^3 - 2*x*y^2", "3*x*y - y^2 + x"])
def test_second_difference_bound(text, rng):
    P = Polynomial.parse(text)
    norm = P.c2_norm_bound(U)
    y, z1, z2 = _second_difference_samples(rng, 2000)
    lhs = np.abs(P(y + z1 + z2) - P(y + z1) - P(y + z2) + P(y))
    rhs = 2 * norm * np.linalg.norm(z1, axis=1) * np.linalg.norm(z2, axis=1)
    assert np.all(U.contains(y + z1 + z2))
    assert np.all(lhs <= rhs + 1e-15)


def test_decay_constant_unit_triangle():
    assert decay_constant(U) == pytest.approx(8.0)


def test_decay_hand_value():
    rep = verify_decay_bound(X_FN, U, 1, f_norm=1.0)
    row = next(r for r in rep.rows if r.code == IndexMatrix([(1, 0)]).code)
    assert row.coeff == pytest.approx(1 / 6)
    assert row.bound == pytest.approx(2.0)
    assert rep.violations == 0


def test_decay_constant_function():
    rep = verify_decay_bound(builtin("constant"), U, 3)
    assert len(rep.rows) == 63 and rep.violations == 0
    assert all(abs(r.coeff) <= 1e-15 for r in rep.rows)


@pytest.mark.parametrize("n", range(1, 7))
def test_decay_exp_sum(n):
    rep = verify_decay_bound(builtin("exp-sum"), U, n, f_norm=2 * math.e)
    assert rep.violations == 0 and len(rep.rows) == 4**n - 1


def test_decay_skips_zero_and_needs_norm():
    rep = verify_decay_bound(X_FN, U, 2, ks=[0, 1, IndexMatrix([(0, 0), (1, 0)])], f_norm=1.0)
    assert [r.code for r in rep.rows] == [1, 4]
    with pytest.raises(ValueError):
        verify_decay_bound(lambda p: p[..., 0], U, 1)
