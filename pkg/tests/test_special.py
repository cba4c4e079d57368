import math

import numpy as np
import pytest

from trapfermions import (
    exact_prefactor,
    gauss_hermite,
    hermite_eval,
    limit_moments,
    limit_prefactor,
    make_params,
)
from trapfermions.special import (
    gauss_legendre_truncated,
    hermite_shift_identity_check,
)


def test_gauss_hermite_moments():
    rule = gauss_hermite(30)
    assert float(np.sum(rule.weights)) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert float(rule.weights @ rule.nodes ** 2) == pytest.approx(
        math.sqrt(math.pi) / 2.0, rel=1e-13
    )
    # degree 2*order - 1 exactness: <x^58> = 57!! / 2^29 * sqrt(pi)
    m = 29
    exact = math.sqrt(math.pi) * math.factorial(2 * m) / (math.factorial(m) * 4 ** m)
    assert float(rule.weights @ rule.nodes ** (2 * m)) == pytest.approx(exact, rel=1e-10)


def test_gauss_hermite_symmetry_exact():
    rule = gauss_hermite(41)
    assert np.array_equal(rule.nodes, -rule.nodes[::-1])
    assert np.array_equal(rule.weights, rule.weights[::-1])
    assert rule.nodes[rule.nodes.size // 2] == 0.0


def test_gauss_legendre_truncated_integral():
    rule = gauss_legendre_truncated(40, 2.0)
    assert float(rule.weights @ np.cos(rule.nodes)) == pytest.approx(
        2.0 * math.sin(2.0), rel=1e-14
    )


def test_hermite_recurrence_values():
    x = 0.7
    assert hermite_eval(0, x) == 1.0
    assert hermite_eval(1, x) == 2.0 * x
    assert hermite_eval(2, x) == pytest.approx(4.0 * x * x - 2.0, rel=1e-15)
    assert hermite_eval(3, x) == pytest.approx(8.0 * x ** 3 - 12.0 * x, rel=1e-14)


def test_hermite_shift_identity():
    rng = np.random.default_rng(5)
    for _ in range(30):
        k = int(rng.integers(0, 12))
        x, y = rng.uniform(-2, 2, size=2)
        lhs, rhs = hermite_shift_identity_check(k, float(x), float(y))
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


def test_hermite_guards():
    with pytest.raises(ValueError):
        hermite_eval(-1, 0.0)
    with pytest.raises(ValueError):
        hermite_eval(201, 0.0)
    with pytest.raises(ValueError):
        hermite_shift_identity_check(31, 0.0, 0.0)


def test_prefactor_symmetries():
    params = make_params(4, 0.4)
    rng = np.random.default_rng(2)
    x, y = rng.uniform(-1.5, 1.5, size=(2, 40))
    f = np.asarray(exact_prefactor(params, x, y))
    assert np.allclose(f, exact_prefactor(params, y, x), rtol=1e-13)
    assert np.allclose(f, exact_prefactor(params, -x, -y), rtol=1e-13)


def test_prefactor_quadrature_order_independent():
    params = make_params(5, 0.3)
    x = np.linspace(-1, 1, 11)
    low = np.asarray(exact_prefactor(params, x, -x))
    high = np.asarray(exact_prefactor(params, x, -x, order=80))
    assert np.max(np.abs(low - high)) <= 1e-12 * np.max(np.abs(high))


def test_prefactor_rejects_repulsive_side():
    with pytest.raises(ValueError):
        exact_prefactor(make_params(3, 2.0), 0.1, 0.2)


def test_limit_polynomial_anchor_and_signs():
    for n in range(2, 10):
        poly = limit_prefactor(n)
        assert poly(0.0) == math.sqrt(math.pi) * n
        assert poly.coeffs.size == n
        signs = np.sign(poly.coeffs)
        assert np.array_equal(signs, (-1.0) ** np.arange(n))


def test_limit_prefactor_matches_exact_at_small_t():
    # F(x, y) approaches the limit polynomial in z = (x - y)/t as t -> 0
    n, t = 3, 1e-3
    params = make_params(n, t)
    z = np.linspace(-3.0, 3.0, 13)
    x = 0.5 * t * z
    exact = np.asarray(exact_prefactor(params, x, -x))
    limit = limit_prefactor(n)(z)
    assert np.max(np.abs(exact - limit)) <= 1e-4 * np.max(np.abs(limit))


def test_limit_moments_against_quadrature():
    for n in (2, 5, 9):
        alpha = (n - 1.0) / (4.0 * n)
        rule = gauss_hermite(120)
        z = rule.nodes / math.sqrt(alpha)
        fz = limit_prefactor(n)(z)
        for j in range(5):
            quad = float(rule.weights @ (z ** (2 * j) * fz)) / math.sqrt(alpha)
            assert limit_moments(n, j) == pytest.approx(quad, rel=1e-11, abs=1e-11)


def test_limit_moment_guards():
    with pytest.raises(ValueError):
        limit_moments(1, 0)
    with pytest.raises(ValueError):
        limit_moments(3, 41)
