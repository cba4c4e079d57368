"""Exact natural occupation spectra of harmonically interacting trapped fermions.

Library layout:

- model: parameters and derived Gaussian exponents
- special: Hermite polynomials, quadrature, the fermionic prefactor and its limit
- potential: strong-coupling effective potential, extrema, parity verdict
- spectra: Nystrom and momentum-space solvers, asymptotics, duality
- densities: one/two-particle densities and the wavefunction oracle
- cli: figure-data emitter and acceptance runner
"""

from .model import ModelParams, coupling_from_t, make_params, t_from_coupling
from .potential import (
    EffectivePotential,
    ExtremaReport,
    ParityClass,
    build_potential,
    eval_potential,
    find_extrema,
    harmonic_params,
    tunneling_splitting_estimate,
)
from .spectra import (
    GridSpec,
    RdmKernel,
    SpectrumResult,
    auto_grid,
    build_kernel,
    duality_check,
    harmonic_spectrum,
    k_star,
    segment_regimes,
    solve_momentum_schrodinger,
    solve_nystrom,
    tail_spectrum,
)
from .special import (
    LimitPolynomial,
    QuadratureRule,
    exact_prefactor,
    gauss_hermite,
    hermite_eval,
    limit_moments,
    limit_prefactor,
)
from .densities import (
    DensityCurve,
    OracleRdm,
    PairDensitySurface,
    boson_fermion_ratio_check,
    correlation_function,
    count_local_maxima,
    count_surface_lobes,
    one_particle_density,
    oracle_rdm,
    two_particle_density,
    wavefunction,
)
from .densities import oracle_spectrum
from .errors import NumericalInvariantError
from .verify import CriterionResult, Tolerances, run_acceptance

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
