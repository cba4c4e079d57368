"""Acceptance suite: the package's headline claims as machine-checkable criteria.

Twelve numbered criteria cover the parity verdict, the exactly solvable
limits, cross-method and duality consistency, the asymptotic laws and the
density structure.  Each criterion returns a structured result with the
measured quantities, so failures name the number that went out of
tolerance.  Expensive intermediate solves are cached and shared between
criteria.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .densities import (
    count_local_maxima,
    count_surface_lobes,
    one_particle_density,
    oracle_rdm,
    oracle_spectrum,
    two_particle_density,
)
from .model import make_params
from .potential import (
    ParityClass,
    build_potential,
    eval_potential,
    find_extrema,
    harmonic_params,
    potential_coefficients,
    potential_from_quadrature,
    tunneling_splitting_estimate,
)
from .spectra import (
    QUASIDEGENERACY_RTOL,
    GridSpec,
    build_kernel,
    duality_check,
    harmonic_spectrum,
    solve_momentum_schrodinger,
    solve_nystrom,
)
from .special import gauss_hermite, limit_moments, limit_prefactor

DESK_T = 1e-2  # smallest coupling ratio resolvable in double precision here


@dataclass(frozen=True)
class Tolerances:
    """All acceptance tolerances in one place.

    tightened(factor) divides every tolerance by the factor; running the
    suite with a large factor must fail, which guards the suite itself
    against dead assertions.
    """

    min_location: float = 1e-9
    degeneracy_rtol: float = 1e-9
    free_eig: float = 1e-6
    free_trace: float = 1e-8
    strict_pair_rtol: float = 1e-10
    lambda1_rtol: float = 0.05
    spacing_rtol: float = 0.10
    inter_pair_rtol: float = 0.50
    cross_method_t_factor: float = 10.0
    duality_dev: float = 1e-6
    tail_slope_rtol: float = 0.05
    coeff_rtol: float = 1e-10
    kernel_rtol: float = 1e-8
    surface_sym_rtol: float = 1e-12
    splitting_slope_rtol: float = 0.20

    def tightened(self, factor: float) -> "Tolerances":
        if not factor > 0:
            raise ValueError(f"tighten factor must be positive, got {factor}")
        return replace(
            self, **{k: v / factor for k, v in self.__dict__.items()}
        )


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    runtime_seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} ({self.name}) {self.runtime_seconds:.1f}s"


@lru_cache(maxsize=None)
def _kernel(n: int, t: float):
    return build_kernel(make_params(n, t))


@lru_cache(maxsize=None)
def _nystrom(n: int, t: float, k_max: int):
    return solve_nystrom(_kernel(n, t), k_max=k_max)


@lru_cache(maxsize=None)
def _potential_report(n: int, t: float):
    pot = build_potential(make_params(n, t))
    return pot, find_extrema(pot)


def criterion_1_parity_verdict(tol: Tolerances) -> CriterionResult:
    """Odd N: unique global minimum at zero; even N: degenerate symmetric pair."""
    details = {}
    ok = True
    for n in range(3, 21):
        _, report = _potential_report(n, 0.1 / n)
        if n % 2 == 1:
            good = report.parity_class is ParityClass.ODD_LIKE_UNIQUE_ZERO_MIN
            zero_min = min(report.minima, key=lambda e: abs(e.location))
            good &= abs(zero_min.location) < tol.min_location
            good &= abs(zero_min.value - report.global_min_value) <= (
                tol.degeneracy_rtol * abs(report.global_min_value)
            )
        else:
            good = report.parity_class is ParityClass.EVEN_LIKE_DEGENERATE_PAIR
            wells = [
                e
                for e in report.minima
                if abs(e.value - report.global_min_value)
                <= tol.degeneracy_rtol * abs(report.global_min_value)
            ]
            good &= len(wells) == 2 and math.isclose(
                wells[0].location, -wells[1].location, rel_tol=1e-9
            )
        details[n] = report.parity_class.value
        ok &= good
    return CriterionResult(1, "parity verdict N=3..20", ok, details)


def criterion_2_minima_count(tol: Tolerances) -> CriterionResult:
    """The effective potential has exactly N minima for N in [3, 20]."""
    details = {}
    ok = True
    for n in range(3, 21):
        _, report = _potential_report(n, 0.1 / n)
        details[n] = len(report.minima)
        ok &= len(report.minima) == n
    return CriterionResult(2, "minima count equals N", ok, details)


def criterion_3_free_fermions(tol: Tolerances) -> CriterionResult:
    """At t = 1 the top N occupations are 1 and the remainder vanish."""
    details = {}
    ok = True
    for n in range(2, 7):
        spec = _nystrom(n, 1.0, 40)
        lam = spec.lambdas
        top_err = float(np.max(np.abs(lam[:n] - 1.0)))
        rest = float(np.max(np.abs(lam[n:]))) if lam.size > n else 0.0
        trace_err = abs(spec.trace_error)
        details[n] = {"top_error": top_err, "remainder": rest, "trace_error": trace_err}
        ok &= top_err < tol.free_eig and rest < tol.free_eig and trace_err < tol.free_trace
    return CriterionResult(3, "free fermions t=1", ok, details)


def criterion_4_n2_degeneracy(tol: Tolerances) -> CriterionResult:
    """N = 2: statistics forces exact pairwise degeneracy of the occupations."""
    details = {}
    ok = True
    for t in (0.3, 0.7):
        spec = _nystrom(2, t, 40)
        lam = spec.lambdas
        lam1 = lam[0]
        floor = 1e-12 * lam1
        upto = int(np.searchsorted(-lam, -floor))
        upto -= upto % 2
        gaps = lam[0:upto:2] - lam[1:upto:2]
        worst = float(np.max(gaps / lam1))
        details[t] = {"pairs_checked": upto // 2, "worst_gap_rel": worst}
        ok &= worst < tol.strict_pair_rtol
    return CriterionResult(4, "N=2 statistics-forced pairing", ok, details)


def _isolated_run_length(lam: np.ndarray) -> int:
    """Leading eigenvalues before the first quasidegenerate consecutive gap."""
    lam1 = lam[0]
    for i in range(lam.size - 1):
        if lam[i] - lam[i + 1] < QUASIDEGENERACY_RTOL * lam1:
            return i + 1
    return lam.size


def criterion_5_desk_scale_structure(tol: Tolerances) -> CriterionResult:
    """Spectrum structure at t = 1e-2: isolated ladder for N=3, pairs for N=4.

    The strict leading-ten-isolated reading for N = 3 is recorded separately
    in the details: at this coupling the side wells of the effective
    potential already inject quasidegenerate pairs from k = 4 on, so the
    isolated ladder is shorter than ten (resolving ten would need t below
    the double-precision splitting floor).
    """
    t = DESK_T
    details = {}
    # N = 3: isolated ladder against the harmonic prediction
    pot3, rep3 = _potential_report(3, t)
    alpha3, beta3, _ = harmonic_params(pot3, rep3)
    spec3 = _nystrom(3, t, 40)
    lam3 = spec3.lambdas
    lam1_pred = harmonic_spectrum(alpha3, beta3, t, 1, rep3.parity_class)
    lam1_err = abs(lam3[0] - lam1_pred) / lam1_pred
    gap_pred = t * t * alpha3 * beta3
    gap_err = abs((lam3[0] - lam3[1]) - gap_pred) / gap_pred
    iso = _isolated_run_length(lam3)
    iso_gaps = lam3[: min(iso, 10) - 1] - lam3[1 : min(iso, 10)]
    literal = iso >= 10 and bool(np.all(np.abs(iso_gaps - gap_pred) <= tol.spacing_rtol * gap_pred))
    details["n3"] = {
        "lambda1_rel_error": float(lam1_err),
        "first_gap_rel_error": float(gap_err),
        "isolated_run": iso,
        "leading10_isolated_literal": literal,
    }
    ok = lam1_err < tol.lambda1_rtol and gap_err < tol.spacing_rtol

    # N = 4: quasidegenerate pairs against the harmonic pair ladder
    pot4, rep4 = _potential_report(4, t)
    alpha4, beta4, _ = harmonic_params(pot4, rep4)
    spec4 = _nystrom(4, t, 40)
    lam4 = spec4.lambdas
    lam1 = lam4[0]
    strict_gaps = (lam4[0] - lam4[1], lam4[2] - lam4[3])
    strict_ok = all(g < tol.strict_pair_rtol * lam1 for g in strict_gaps)
    quasi_gaps = lam4[0:12:2] - lam4[1:12:2]
    quasi_ok = bool(np.all(quasi_gaps < QUASIDEGENERACY_RTOL * lam1))
    inter = 0.5 * (lam4[0] + lam4[1]) - 0.5 * (lam4[2] + lam4[3])
    inter_pred = t * t * alpha4 * beta4
    inter_err = abs(inter - inter_pred) / inter_pred
    details["n4"] = {
        "strict_pair_gaps_rel": [float(g / lam1) for g in strict_gaps],
        "worst_quasi_gap_rel": float(np.max(quasi_gaps) / lam1),
        "inter_pair_rel_error": float(inter_err),
    }
    ok &= strict_ok and quasi_ok and inter_err < tol.inter_pair_rtol
    return CriterionResult(5, "desk-scale spectrum structure", ok, details)


def criterion_6_cross_method(tol: Tolerances) -> CriterionResult:
    """Position-space and momentum-space solvers agree on the top ten."""
    t = DESK_T
    details = {}
    ok = True
    for n in (3, 4):
        pot, _ = _potential_report(n, t)
        direct = _nystrom(n, t, 40).lambdas[:10]
        mapped = solve_momentum_schrodinger(make_params(n, t), pot, 10).lambdas[:10]
        dev = float(np.max(np.abs(direct - mapped) / direct))
        details[n] = {"max_rel_deviation": dev}
        ok &= dev < tol.cross_method_t_factor * t
    return CriterionResult(6, "cross-method top-10 agreement", ok, details)


def criterion_7_duality(tol: Tolerances) -> CriterionResult:
    """Spectra at t and 1/t coincide (attractive/repulsive duality)."""
    cases = [
        (3, 0.5, 2.0, GridSpec(half_width=17.0, spacing=0.1)),
        (2, 0.8, 1.25, GridSpec(half_width=14.0, spacing=0.08)),
    ]
    details = {}
    ok = True
    for n, t, t_dual, gspec in cases:
        companion = oracle_spectrum(make_params(n, t_dual), gspec, k_max=10)
        dev = duality_check(n, t, companion.lambdas, k_max=10)
        details[(n, t)] = {"max_deviation": dev}
        ok &= dev < tol.duality_dev
    return CriterionResult(7, "duality t vs 1/t", ok, details)


def criterion_8_tail_law(tol: Tolerances) -> CriterionResult:
    """Deep-tail occupations decay with the predicted exponential slope."""
    t = 0.05
    details = {}
    ok = True
    for n in (3, 4):
        spec = _nystrom(n, t, 130)
        k_lo, k_hi = math.ceil(3.0 / t), math.floor(6.0 / t)
        ks = np.arange(k_lo, k_hi + 1)
        lam = spec.lambdas[ks - 1]
        y = np.log(lam / (ks * t) ** (n - 1))
        slope = float(np.polyfit(ks, y, 1)[0])
        target = -2.0 * n * t / math.sqrt(n - 1.0)
        err = abs(slope - target) / abs(target)
        details[n] = {"slope": slope, "target": target, "rel_error": err}
        ok &= err < tol.tail_slope_rtol
    return CriterionResult(8, "tail decay law", ok, details)


def criterion_9_coefficient_identities(tol: Tolerances) -> CriterionResult:
    """Closed-form coefficients and moments against direct quadrature."""
    details = {}
    ok = True
    # potential values vs quadrature of the limit-prefactor integral
    worst_v = 0.0
    for n in range(2, 13):
        t = 0.1 / n
        pot = build_potential(make_params(n, t))
        p = np.linspace(0.0, 5.0 / math.sqrt(t), 20)
        closed = np.asarray(eval_potential(pot, p))
        quad = np.asarray(potential_from_quadrature(n, t, p))
        worst_v = max(worst_v, float(np.max(np.abs(closed - quad)) / np.max(np.abs(closed))))
    details["potential_vs_quadrature"] = worst_v
    ok &= worst_v < tol.coeff_rtol

    # moments vs quadrature of the limit polynomial
    worst_m = 0.0
    for n in range(2, 13):
        alpha = (n - 1.0) / (4.0 * n)
        rule = gauss_hermite(120)
        z = rule.nodes / math.sqrt(alpha)
        fz = limit_prefactor(n)(z)
        closed = np.array([limit_moments(n, j) for j in range(6)])
        quad = np.array(
            [float(rule.weights @ (z ** (2 * j) * fz)) / math.sqrt(alpha) for j in range(6)]
        )
        worst_m = max(worst_m, float(np.max(np.abs(closed - quad)) / np.max(np.abs(closed))))
    details["moments_vs_quadrature"] = worst_m
    ok &= worst_m < tol.coeff_rtol

    # exact anchors
    f0_exact = all(
        limit_prefactor(n)(0.0) == math.sqrt(math.pi) * n for n in range(2, 13)
    )
    v20_zero = potential_coefficients(2)[0] == 0.0
    details["limit_at_zero_exact"] = f0_exact
    details["v20_exactly_zero"] = v20_zero
    ok &= f0_exact and v20_zero
    return CriterionResult(9, "coefficient identities", ok, details)


def criterion_10_kernel_equivalence(tol: Tolerances) -> CriterionResult:
    """Analytic kernel equals the brute-force integrated kernel pointwise."""
    grid = np.linspace(-2.0, 2.0, 20)
    xx, yy = np.meshgrid(grid, grid, indexing="ij")
    details = {}
    ok = True
    for n, ts in ((3, (0.3, 0.7, 1.0)), (4, (0.5, 1.0))):
        for t in ts:
            params = make_params(n, t)
            analytic = _kernel(n, t).matrix(grid)
            brute = np.asarray(oracle_rdm(params, xx.ravel(), yy.ravel())).reshape(20, 20)
            dev = float(np.max(np.abs(analytic - brute) / np.abs(analytic)))
            details[(n, t)] = {"max_rel_deviation": dev}
            ok &= dev < tol.kernel_rtol
    return CriterionResult(10, "kernel equivalence vs oracle", ok, details)


def criterion_11_density_structure(tol: Tolerances) -> CriterionResult:
    """Shell structure of n(x) and the parity-insensitive pair-density lobes."""
    details = {}
    ok = True
    xs = np.linspace(-7.0, 7.0, 701)
    for n in range(2, 9):
        curve = one_particle_density(_kernel(n, 1.0), xs)
        count = count_local_maxima(curve.values)
        details[f"maxima_t1_n{n}"] = count
        ok &= count == n
    for n in (3, 4):
        curve = one_particle_density(_kernel(n, 0.1), np.linspace(-3.0, 3.0, 601))
        count = count_local_maxima(curve.values)
        details[f"maxima_t0.1_n{n}"] = count
        ok &= count == 1

    pair_grid = np.linspace(-2.0, 2.0, 61)
    lobes = {}
    for n in (3, 4):
        surf = two_particle_density(make_params(n, 0.1), pair_grid)
        diag_max = float(np.max(np.abs(np.diagonal(surf.values))))
        asym = float(np.max(np.abs(surf.values - surf.values.T)))
        peak = float(np.max(surf.values))
        lobes[n] = count_surface_lobes(surf.values)
        details[f"pair_n{n}"] = {
            "diagonal_max": diag_max,
            "asymmetry_rel": asym / peak,
            "lobes": lobes[n],
        }
        ok &= diag_max == 0.0 and asym <= tol.surface_sym_rtol * peak
    details["lobe_counts_equal"] = lobes[3] == lobes[4]
    ok &= lobes[3] == lobes[4]
    return CriterionResult(11, "density shell and lobe structure", ok, details)


def criterion_12_splitting_scaling(tol: Tolerances) -> CriterionResult:
    """Tunneling-splitting estimate follows the exp(-O(1/t)) law."""
    ts = (0.02, 0.01, 0.005)
    logs = []
    for t in ts:
        pot, report = _potential_report(4, t)
        logs.append(math.log(tunneling_splitting_estimate(pot, report)))
    inv_t = [1.0 / t for t in ts]
    slope_a = (logs[1] - logs[0]) / (inv_t[1] - inv_t[0])
    slope_b = (logs[2] - logs[1]) / (inv_t[2] - inv_t[1])
    dev = abs(slope_a - slope_b) / abs(slope_b)
    ok = dev < tol.splitting_slope_rtol
    details = {"log_splittings": logs, "slopes": (slope_a, slope_b), "slope_rel_dev": dev}
    return CriterionResult(12, "splitting exp(-O(1/t)) scaling", ok, details)


CRITERIA = {
    1: criterion_1_parity_verdict,
    2: criterion_2_minima_count,
    3: criterion_3_free_fermions,
    4: criterion_4_n2_degeneracy,
    5: criterion_5_desk_scale_structure,
    6: criterion_6_cross_method,
    7: criterion_7_duality,
    8: criterion_8_tail_law,
    9: criterion_9_coefficient_identities,
    10: criterion_10_kernel_equivalence,
    11: criterion_11_density_structure,
    12: criterion_12_splitting_scaling,
}

QUICK_CRITERIA = (1, 2, 3, 4, 6, 9, 12)


def run_acceptance(
    criteria=None,
    tolerances: Tolerances | None = None,
    quick: bool = False,
) -> list[CriterionResult]:
    """Run the selected criteria (all by default) and return their results."""
    tol = tolerances if tolerances is not None else Tolerances()
    if criteria is None:
        criteria = QUICK_CRITERIA if quick else sorted(CRITERIA)
    results = []
    for num in criteria:
        if num not in CRITERIA:
            raise ValueError(f"unknown criterion {num}; valid: {sorted(CRITERIA)}")
        start = time.perf_counter()
        res = CRITERIA[num](tol)
        res.runtime_seconds = time.perf_counter() - start
        results.append(res)
    return results
