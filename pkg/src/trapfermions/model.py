"""Model parameters for N fermions in a 1-D harmonic trap with harmonic pair coupling.

Natural units hbar = m = omega = 1 are used throughout, and all lengths are
measured in units of the center-of-mass scale, so the single knob is the
ratio t of the relative to the center-of-mass length scale.  t < 1 means
attractive pair coupling, t > 1 repulsive, t = 1 free fermions.
"""

from __future__ import annotations

from dataclasses import dataclass

N_MAX = 64


@dataclass(frozen=True)
class ModelParams:
    """Particle number, coupling ratio and all derived Gaussian exponents.

    A and B are the exponents of the N-body ground state, a and b those of
    the one-body reduced kernel.  Immutable; safe to share between threads.
    """

    n_particles: int
    t: float
    A: float
    B: float
    a: float
    b: float


def make_params(n_particles: int, t: float) -> ModelParams:
    """Build ModelParams from the particle number and length-scale ratio t.

    Raises ValueError for n_particles < 2, n_particles > N_MAX or t <= 0.
    """
    if not isinstance(n_particles, (int,)) or isinstance(n_particles, bool):
        raise ValueError(f"n_particles must be an integer, got {n_particles!r}")
    if n_particles < 2:
        raise ValueError(f"n_particles must be >= 2, got {n_particles}")
    if n_particles > N_MAX:
        raise ValueError(
            f"n_particles capped at {N_MAX}: quadrature orders needed for the "
            f"exact kernel grow quadratically with N (got {n_particles})"
        )
    t = float(t)
    if not t > 0.0:
        raise ValueError(f"t must be positive, got {t}")

    n = n_particles
    A = 1.0 / (2.0 * t * t)
    B = (1.0 / (2.0 * n)) * (1.0 / (t * t) - 1.0)
    denom = A - (n - 1) * B
    if not denom > 0.0:
        # cannot happen for t > 0; guards against rounding pathologies
        raise ValueError(f"A - (N-1)B = {denom} must be positive")
    b = (n - 1) * B * B / denom
    a = A - B - b / 2.0
    params = ModelParams(n_particles=n, t=t, A=A, B=B, a=a, b=b)
    if not 2.0 * a > abs(b):
        raise ValueError(f"kernel Gaussian not integrable: a={a}, b={b}")
    return params


def coupling_from_t(params: ModelParams) -> float:
    """Pair-interaction strength D in natural units.

    Inverts the definition of the relative length scale, D = (t^-4 - 1)/N.
    Strictly decreasing in t, zero at t = 1, and always above the stability
    bound -1/N.
    """
    t = params.t
    return (t ** -4 - 1.0) / params.n_particles


def t_from_coupling(n_particles: int, coupling: float) -> float:
    """Length-scale ratio t for a given interaction strength D.

    Requires D above the stability bound -1/N.
    """
    if n_particles < 2:
        raise ValueError(f"n_particles must be >= 2, got {n_particles}")
    arg = 1.0 + coupling * n_particles
    if not arg > 0.0:
        raise ValueError(
            f"coupling {coupling} at or below the stability bound {-1.0 / n_particles}"
        )
    return arg ** -0.25
