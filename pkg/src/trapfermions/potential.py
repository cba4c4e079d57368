"""Strong-coupling effective potential, its extrema and the parity verdict.

The natural occupation spectrum at small t maps onto bound states of a
"particle" in a momentum-space potential V_N.  V_N is (-t) times a degree
N-1 polynomial in the scaled squared momentum times a Gaussian envelope; its
global minimum is unique at zero momentum for odd N and a symmetric
degenerate pair for even N, which is the number-parity effect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import NumericalInvariantError
from .model import ModelParams
from .special import _double_factorial_odd, gauss_hermite, limit_prefactor

# strong-coupling validity gate: t*N below this constant
GATE_TN = 0.2

# relative tolerance deciding degeneracy of the global minimum
DEGENERACY_RTOL = 1e-9


class ParityClass(Enum):
    ODD_LIKE_UNIQUE_ZERO_MIN = "odd_like_unique_zero_min"
    EVEN_LIKE_DEGENERATE_PAIR = "even_like_degenerate_pair"


@dataclass(frozen=True)
class EffectivePotential:
    n_particles: int
    t: float
    v_coeffs: np.ndarray  # v_{N,n}, n = 0..N-1
    gaussian_rate: float  # coefficient of p^2 in the Gaussian envelope


@dataclass(frozen=True)
class Extremum:
    location: float  # scaled momentum
    value: float
    second_derivative: float


@dataclass(frozen=True)
class ExtremaReport:
    minima: list[Extremum]
    maxima: list[Extremum]
    global_min_value: float
    global_min_multiplicity: int
    parity_class: ParityClass
    highest_max_value: float


def potential_coefficients(n_particles: int) -> np.ndarray:
    """Closed-form coefficients v_{N,n} of the potential polynomial.

    Evaluated with exact rational arithmetic (the alternating sums cancel
    heavily, e.g. v_{2,0} = 0 exactly) and scaled by 2N/sqrt(N-1) at the end.
    """
    N = n_particles
    if N < 2:
        raise ValueError(f"n_particles must be >= 2, got {N}")
    ratio = Fraction(2 * N, N - 1)
    coeffs = np.empty(N)
    for n in range(N):
        total = Fraction(0)
        for m in range(n, N):
            total += (
                Fraction((-1) ** m * _double_factorial_odd(m - n), 2 ** m * math.factorial(m))
                * math.comb(N, m + 1)
                * math.comb(2 * m, 2 * n)
                * ratio ** m
            )
        coeffs[n] = 2.0 * N / math.sqrt(N - 1.0) * float(total)
    coeffs.setflags(write=False)
    return coeffs


def build_potential(params: ModelParams) -> EffectivePotential:
    """Effective potential for the given parameters.

    Valid only deep in the strong-coupling regime; rejects t above the
    t*N <= 0.2 gate.
    """
    N = params.n_particles
    t = params.t
    if t * N > GATE_TN:
        raise ValueError(
            f"strong-coupling gate violated: need t*N <= {GATE_TN}, "
            f"got t*N = {t * N:.4g} (t = {t}, N = {N})"
        )
    return EffectivePotential(
        n_particles=N,
        t=t,
        v_coeffs=potential_coefficients(N),
        gaussian_rate=t * N / (N - 1.0),
    )


def _signed_poly(pot: EffectivePotential) -> np.polynomial.Polynomial:
    # P(s) = sum_n (-1)^n v_{N,n} s^n  with s = 2 * gaussian_rate * p^2
    signs = (-1.0) ** np.arange(pot.v_coeffs.size)
    return np.polynomial.Polynomial(signs * pot.v_coeffs)


def eval_potential(pot: EffectivePotential, p_tilde) -> float | np.ndarray:
    """V_N at scaled momentum p_tilde (even function, -> 0 in the tails)."""
    p = np.asarray(p_tilde, dtype=float)
    g = pot.gaussian_rate
    s = 2.0 * g * p * p
    out = -pot.t * _signed_poly(pot)(s) * np.exp(-g * p * p)
    return out if out.ndim else float(out)


def potential_from_quadrature(n_particles: int, t: float, p_tilde, order: int = 120):
    """Independent oracle for V_N: direct Gauss-Hermite quadrature.

    Integrates the limit prefactor against the cosine kernel and the ridge
    Gaussian, with the leading-order normalization sqrt(N)/pi.  Used to
    validate the closed-form coefficients.
    """
    N = n_particles
    alpha = (N - 1.0) / (4.0 * N)
    rule = gauss_hermite(order)
    z = rule.nodes / math.sqrt(alpha)
    fz = limit_prefactor(N)(z)
    p = np.atleast_1d(np.asarray(p_tilde, dtype=float))
    cosmat = np.cos(math.sqrt(t) * p[:, None] * z[None, :])
    integral = cosmat @ (rule.weights * fz) / math.sqrt(alpha)
    out = -t * (math.sqrt(N) / math.pi) * integral
    return out if np.ndim(p_tilde) else float(out[0])


def _w_derivatives(pot: EffectivePotential):
    """V and its first two derivatives in the scale-free coordinate w.

    w = sqrt(gaussian_rate) * p_tilde, so V(w) = -t * R(w) exp(-w^2) with R a
    polynomial; extremum structure in w is independent of t.
    """
    P = _signed_poly(pot)
    # R(w) = P(2 w^2)
    coeffs = np.zeros(2 * (pot.v_coeffs.size - 1) + 1)
    for n, c in enumerate(P.coef):
        coeffs[2 * n] = c * 2.0 ** n
    R = np.polynomial.Polynomial(coeffs)
    Rp = R.deriv()
    Rpp = Rp.deriv()
    w_poly = np.polynomial.Polynomial([0.0, 1.0])
    d1_poly = Rp - 2.0 * w_poly * R
    d2_poly = Rpp - 2.0 * R - 4.0 * w_poly * Rp + 4.0 * w_poly ** 2 * R
    t = pot.t

    def value(w):
        return -t * R(w) * np.exp(-np.asarray(w, float) ** 2)

    def deriv(w):
        return -t * d1_poly(w) * np.exp(-np.asarray(w, float) ** 2)

    def deriv2(w):
        return -t * d2_poly(w) * np.exp(-np.asarray(w, float) ** 2)

    return value, deriv, deriv2, d1_poly


def find_extrema(pot: EffectivePotential) -> ExtremaReport:
    """Locate and classify all extrema of V_N and render the parity verdict.

    Dense scan over w >= 0 (>= 40 samples per oscillation) with bisection
    refinement of the derivative sign changes, mirrored to w < 0.  Fails
    loudly if minima and maxima do not interleave.
    """
    N = pot.n_particles
    if N < 3:
        raise ValueError(
            "find_extrema requires N >= 3; N = 2 is the statistics-forced "
            "special case with a flat-at-zero potential (v_{2,0} = 0)"
        )
    value, deriv, deriv2, d1_poly = _w_derivatives(pot)
    g = pot.gaussian_rate

    # all nonzero extrema are roots of the polynomial factor of V'
    roots = d1_poly.roots()
    real = roots[np.abs(roots.imag) < 1e-8 * (1.0 + np.abs(roots.real))].real
    w_max = (np.max(real) if real.size else 1.0) * 1.05 + 0.5

    step = 1.0 / 40.0
    ws = np.arange(step / 2.0, w_max + step, step)
    dv = deriv(ws)
    v0 = eval_potential(pot, 0.0)
    tol = 1e-13 * abs(v0)

    crossings = []
    for i in range(ws.size - 1):
        if dv[i] == 0.0:
            crossings.append(ws[i])
        elif dv[i] * dv[i + 1] < 0.0:
            lo, hi = ws[i], ws[i + 1]
            flo = dv[i]
            for _ in range(100):
                mid = 0.5 * (lo + hi)
                fm = deriv(mid)
                if abs(fm) < tol and hi - lo < 1e-14 * (1.0 + mid):
                    break
                if flo * fm <= 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            crossings.append(0.5 * (lo + hi))

    extrema_w = [0.0] + crossings
    kinds = []  # +1 minimum, -1 maximum
    for w in extrema_w:
        d2 = deriv2(w)
        if d2 > 0:
            kinds.append(1)
        elif d2 < 0:
            kinds.append(-1)
        else:
            raise NumericalInvariantError(f"degenerate extremum at w = {w}")
    for i in range(len(kinds) - 1):
        if kinds[i] == kinds[i + 1]:
            raise NumericalInvariantError(
                "minima and maxima do not interleave along w >= 0; "
                "scan resolution too coarse"
            )

    sqrt_g = math.sqrt(g)
    minima: list[Extremum] = []
    maxima: list[Extremum] = []
    for w, kind in zip(extrema_w, kinds):
        ext = Extremum(location=w / sqrt_g, value=float(value(w)), second_derivative=float(g * deriv2(w)))
        (minima if kind == 1 else maxima).append(ext)
        if w > 0.0:  # mirror to negative momenta
            mirrored = Extremum(-ext.location, ext.value, ext.second_derivative)
            (minima if kind == 1 else maxima).append(mirrored)

    global_min_value = min(e.value for e in minima)
    at_zero = [e for e in minima if e.location == 0.0]
    zero_is_global = bool(at_zero) and (
        abs(at_zero[0].value - global_min_value) <= DEGENERACY_RTOL * abs(global_min_value)
    )
    if zero_is_global:
        multiplicity = 1
        parity = ParityClass.ODD_LIKE_UNIQUE_ZERO_MIN
        off_zero_ties = [
            e
            for e in minima
            if e.location != 0.0
            and abs(e.value - global_min_value) <= DEGENERACY_RTOL * abs(global_min_value)
        ]
        if off_zero_ties:
            raise NumericalInvariantError(
                "global minimum at zero ties with an off-zero pair within tolerance"
            )
    else:
        multiplicity = 2
        parity = ParityClass.EVEN_LIKE_DEGENERATE_PAIR

    return ExtremaReport(
        minima=sorted(minima, key=lambda e: e.location),
        maxima=sorted(maxima, key=lambda e: e.location),
        global_min_value=global_min_value,
        global_min_multiplicity=multiplicity,
        parity_class=parity,
        highest_max_value=max(e.value for e in maxima),
    )


def harmonic_params(pot: EffectivePotential, report: ExtremaReport) -> tuple[float, float, float]:
    """Harmonic-approximation coefficients (alpha, beta) and the mass m_tilde.

    alpha and beta are O(1) coefficients of the leading-eigenvalue formula;
    m_tilde is set by the potential depth at zero momentum and scales as
    1/t^2.
    """
    if pot.n_particles < 3:
        raise ValueError("harmonic parameters require N >= 3")
    t = pot.t
    vmin = report.global_min_value
    at_min = min(
        (e for e in report.minima if e.value == vmin),
        key=lambda e: abs(e.location),
    )
    d2 = at_min.second_derivative
    if vmin >= 0.0:
        raise ValueError(f"global minimum must be negative, got {vmin}")
    if d2 <= 0.0:
        raise ValueError(f"curvature at the global minimum must be positive, got {d2}")
    alpha = -vmin / t
    beta = math.sqrt(2.0 * pot.n_particles * d2 / (-t * vmin))
    v_at_zero = float(eval_potential(pot, 0.0))
    m_tilde = 1.0 / (-2.0 * t * pot.n_particles * v_at_zero)
    return alpha, beta, m_tilde


def tunneling_splitting_estimate(pot: EffectivePotential, report: ExtremaReport) -> float:
    """Order-of-magnitude estimate exp(-sqrt(m * dV) * dp) of the pair splitting.

    dV is the barrier between the two degenerate minima (central maximum
    minus global minimum) and dp their separation.  Only defined for the
    even-parity class.
    """
    if report.parity_class is not ParityClass.EVEN_LIKE_DEGENERATE_PAIR:
        raise ValueError("tunneling estimate requires a degenerate-pair (even-like) report")
    _, _, m_tilde = harmonic_params(pot, report)
    vmin = report.global_min_value
    wells = sorted(
        (e for e in report.minima if abs(e.value - vmin) <= DEGENERACY_RTOL * abs(vmin)),
        key=lambda e: e.location,
    )
    dp = wells[-1].location - wells[0].location
    central_max = max(
        (e.value for e in report.maxima if wells[0].location < e.location < wells[-1].location),
    )
    dv = central_max - vmin
    return math.exp(-math.sqrt(m_tilde * dv) * dp)
