"""Hermite polynomials, Gaussian quadrature and the fermionic prefactor polynomial.

The prefactor F(x, y) multiplying the Gaussian part of the one-body kernel is
evaluated exactly by Gauss-Hermite quadrature (the integrand is exp(-u^2)
times a polynomial of degree <= 2(N-1)).  Its strong-coupling limit is an
even polynomial in the ridge variable z = (x - y)/t whose coefficients and
Gaussian moments have closed forms; both are computed with exact rational
arithmetic before the final conversion to float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .model import N_MAX, ModelParams

HERMITE_K_MAX = 200


class QuadratureKind(Enum):
    GAUSS_HERMITE = "gauss_hermite"
    GAUSS_LEGENDRE_TRUNCATED = "gauss_legendre_truncated"


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    kind: QuadratureKind
    order: int


@lru_cache(maxsize=None)
def gauss_hermite(order: int) -> QuadratureRule:
    """Gauss-Hermite rule for weight exp(-x^2) by Golub-Welsch.

    Nodes are the eigenvalues of the symmetric tridiagonal recurrence matrix
    (zero diagonal, off-diagonal sqrt(k/2)); weights follow from the first
    eigenvector components.  Exact for polynomials of degree <= 2*order - 1.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if order == 1:
        return QuadratureRule(
            nodes=np.zeros(1),
            weights=np.array([math.sqrt(math.pi)]),
            kind=QuadratureKind.GAUSS_HERMITE,
            order=1,
        )
    off = np.sqrt(np.arange(1, order) / 2.0)
    vals, vecs = eigh_tridiagonal(np.zeros(order), off)
    weights = math.sqrt(math.pi) * vecs[0, :] ** 2
    nodes, weights = _symmetrize_rule(vals, weights)
    return QuadratureRule(nodes, weights, QuadratureKind.GAUSS_HERMITE, order)


def _symmetrize_rule(nodes, weights):
    # enforce exact +/- symmetry of the computed nodes and weights
    order = nodes.size
    idx = np.argsort(nodes)
    nodes, weights = nodes[idx], weights[idx]
    sym_nodes = 0.5 * (nodes - nodes[::-1])
    sym_weights = 0.5 * (weights + weights[::-1])
    if order % 2 == 1:
        sym_nodes[order // 2] = 0.0
    sym_nodes.setflags(write=False)
    sym_weights.setflags(write=False)
    return sym_nodes, sym_weights


def gauss_legendre_truncated(order: int, half_width: float) -> QuadratureRule:
    """Gauss-Legendre rule on the truncated box [-half_width, half_width]."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if not half_width > 0:
        raise ValueError(f"half_width must be positive, got {half_width}")
    x, w = np.polynomial.legendre.leggauss(order)
    return QuadratureRule(
        nodes=x * half_width,
        weights=w * half_width,
        kind=QuadratureKind.GAUSS_LEGENDRE_TRUNCATED,
        order=order,
    )


def hermite_eval(k: int, x):
    """Physicists' Hermite polynomial H_k(x) by the three-term recurrence."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if k > HERMITE_K_MAX:
        raise ValueError(f"k capped at {HERMITE_K_MAX} (overflow guard), got {k}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if k == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for j in range(1, k):
        h, h_prev = 2.0 * x * h - 2.0 * j * h_prev, h
    return h if h.ndim else float(h)


def hermite_shift_identity_check(k: int, x: float, y: float) -> tuple[float, float]:
    """Both sides of the argument-shift identity for H_k(x + y).

    Returns (H_k(x+y), sum_m binom(k, m) H_m(x) (2y)^(k-m)); used as a test
    oracle, the two must agree.
    """
    if k > 30:
        raise ValueError(f"k capped at 30 for the identity check, got {k}")
    lhs = hermite_eval(k, x + y)
    rhs = 0.0
    for m in range(k + 1):
        rhs += math.comb(k, m) * hermite_eval(m, x) * (2.0 * y) ** (k - m)
    return float(lhs), float(rhs)


def _prefactor_pq(params: ModelParams):
    n = params.n_particles
    if params.B < 0:
        raise ValueError(
            "exact prefactor requires t <= 1 (B >= 0); for t > 1 use the "
            "duality route via the brute-force oracle"
        )
    p = math.sqrt(params.B / (params.A - (n - 1) * params.B))
    return p, math.sqrt(2.0 * params.A)


def exact_prefactor(params: ModelParams, x, y, order: int | None = None):
    """Fermionic prefactor F(x, y) of the one-body kernel, evaluated exactly.

    The u-integral of exp(-u^2) times a polynomial of degree <= 2(N-1) is
    done by Gauss-Hermite quadrature of order max(N+2, 20), hence exact up
    to rounding.  Symmetric under x <-> y and under (x, y) -> (-x, -y).
    Accepts scalars or broadcastable arrays.
    """
    n = params.n_particles
    p, s2a = _prefactor_pq(params)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    q1 = s2a * (x - 0.5 * p * p * (x + y))
    q2 = s2a * (y - 0.5 * p * p * (x + y))
    q1, q2 = np.broadcast_arrays(q1, q2)
    rule = gauss_hermite(order if order is not None else max(n + 2, 20))

    out = np.zeros(q1.shape)
    for u, w in zip(rule.nodes, rule.weights):
        a1 = p * u + q1
        a2 = p * u + q2
        # running sum of H_k(a1) H_k(a2) / (2^k k!) over k < N
        h1_prev = np.ones_like(a1)
        h2_prev = np.ones_like(a2)
        acc = h1_prev * h2_prev
        if n > 1:
            h1 = 2.0 * a1
            h2 = 2.0 * a2
            coeff = 0.5  # 1/(2^1 1!)
            acc = acc + coeff * h1 * h2
            for k in range(1, n - 1):
                h1, h1_prev = 2.0 * a1 * h1 - 2.0 * k * h1_prev, h1
                h2, h2_prev = 2.0 * a2 * h2 - 2.0 * k * h2_prev, h2
                coeff /= 2.0 * (k + 1)
                acc = acc + coeff * h1 * h2
        out += w * acc
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class LimitPolynomial:
    """Strong-coupling limit of the prefactor: an even polynomial in z=(x-y)/t.

    coeffs[m] is the coefficient of z^(2m); there are exactly N of them and
    the value at z = 0 is sqrt(pi) * N.
    """

    n_particles: int
    coeffs: np.ndarray

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        z2 = z * z
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z2 + c
        return out if out.ndim else float(out)


def limit_prefactor(n_particles: int) -> LimitPolynomial:
    """Coefficients sqrt(pi) (-1)^m / (2^m m!) binom(N, m+1) of z^(2m)."""
    if not 2 <= n_particles <= N_MAX:
        raise ValueError(f"n_particles must be in [2, {N_MAX}], got {n_particles}")
    coeffs = np.array(
        [
            math.sqrt(math.pi)
            * float(
                Fraction((-1) ** m * math.comb(n_particles, m + 1), 2 ** m * math.factorial(m))
            )
            for m in range(n_particles)
        ]
    )
    coeffs.setflags(write=False)
    return LimitPolynomial(n_particles=n_particles, coeffs=coeffs)


def _double_factorial_odd(j: int) -> int:
    # (2j - 1)!! with the empty-product convention (-1)!! = 1
    out = 1
    for i in range(1, j + 1):
        out *= 2 * i - 1
    return out


def limit_moments(n_particles: int, n: int) -> float:
    """Gaussian moment <z^(2n) F(z)> of the limit polynomial.

    Weight exp(-((N-1)/4N) z^2); evaluated from the closed-form alternating
    double-factorial sum with exact rationals, then scaled by the Gaussian
    normalization pi * sqrt(4N/(N-1)).
    """
    if n_particles < 2:
        raise ValueError(f"n_particles must be >= 2, got {n_particles}")
    if not 0 <= n <= 40:
        raise ValueError(f"moment index n must be in [0, 40], got {n}")
    N = n_particles
    ratio = Fraction(2 * N, N - 1)
    total = Fraction(0)
    for m in range(N):
        total += (
            Fraction((-1) ** m * _double_factorial_odd(n + m), 2 ** m * math.factorial(m))
            * math.comb(N, m + 1)
            * ratio ** (m + n)
        )
    return math.pi * math.sqrt(4.0 * N / (N - 1)) * float(total)
