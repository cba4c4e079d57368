import numpy as np
import pytest

from trapfermions import (
    GridSpec,
    OracleRdm,
    boson_fermion_ratio_check,
    build_kernel,
    correlation_function,
    count_local_maxima,
    count_surface_lobes,
    make_params,
    one_particle_density,
    oracle_spectrum,
    two_particle_density,
    wavefunction,
)


def test_wavefunction_antisymmetric_and_nodal():
    params = make_params(3, 0.7)
    rng = np.random.default_rng(9)
    pts = rng.uniform(-1.5, 1.5, size=(20, 3))
    psi = wavefunction(params, pts)
    swapped = wavefunction(params, pts[:, [1, 0, 2]])
    assert np.allclose(swapped, -psi, rtol=1e-14)
    coincident = pts.copy()
    coincident[:, 1] = coincident[:, 0]
    assert np.all(wavefunction(params, coincident) == 0.0)


def test_oracle_matches_analytic_kernel():
    params = make_params(2, 0.5)
    xs = np.linspace(-1.5, 1.5, 9)
    xx, yy = np.meshgrid(xs, xs, indexing="ij")
    brute = np.asarray(OracleRdm(params).evaluate(xx.ravel(), yy.ravel())).reshape(9, 9)
    analytic = build_kernel(params).matrix(xs)
    assert np.max(np.abs(brute - analytic) / np.abs(analytic)) < 1e-9


def test_oracle_rejects_large_n():
    with pytest.raises(ValueError, match="N <= 4"):
        OracleRdm(make_params(5, 0.5))


def test_density_integrates_to_n():
    curve = one_particle_density(build_kernel(make_params(3, 0.5)), np.linspace(-8, 8, 3201))
    h = curve.xs[1] - curve.xs[0]
    assert h * float(np.sum(curve.values)) == pytest.approx(3.0, abs=1e-8)


def test_pair_density_invariants():
    surf = two_particle_density(make_params(2, 0.6), np.linspace(-2.5, 2.5, 41))
    assert np.all(np.diagonal(surf.values) == 0.0)
    assert np.max(np.abs(surf.values - surf.values.T)) <= 1e-13 * np.max(surf.values)
    assert surf.scale > 0.0


def test_pair_density_normalization():
    from trapfermions.special import gauss_legendre_truncated

    params = make_params(3, 0.8)
    rule = gauss_legendre_truncated(80, 8.0)
    surf = two_particle_density(params, rule.nodes)
    total = float(rule.weights @ surf.values @ rule.weights)
    assert total == pytest.approx(3.0, abs=1e-6)  # N(N-1)/2 pairs


def test_pair_density_rejects_large_n():
    with pytest.raises(ValueError, match="N <= 6"):
        two_particle_density(make_params(7, 0.5), np.linspace(-1, 1, 5))


def test_correlation_nodal_symmetric_and_guarded():
    params = make_params(3, 0.5)
    xs = np.linspace(-1.5, 1.5, 21)
    surf = two_particle_density(params, xs)
    curve = one_particle_density(build_kernel(params), xs)
    corr = correlation_function(surf, curve)
    finite = np.isfinite(corr)
    assert np.all(np.diagonal(corr)[np.isfinite(np.diagonal(corr))] == 0.0)
    assert np.allclose(corr[finite], corr.T[finite], rtol=1e-12)
    other = one_particle_density(build_kernel(params), np.linspace(-2, 2, 21))
    with pytest.raises(ValueError, match="grids"):
        correlation_function(surf, other)


def test_boson_fermion_kernel_relation():
    for n, t in ((2, 0.5), (3, 0.7), (3, 1.0)):
        params = make_params(n, t)
        rng = np.random.default_rng(4)
        pts = rng.uniform(-1.5, 1.5, size=(30, 2))
        residual = boson_fermion_ratio_check(params, pts)
        rho0 = float(build_kernel(params).evaluate(0.0, 0.0))
        assert residual < 1e-12 * abs(rho0)


def test_count_local_maxima_on_synthetic_curve():
    x = np.linspace(0, 4 * np.pi, 400)
    assert count_local_maxima(np.sin(x)) == 2
    assert count_local_maxima(np.exp(-((x - 6.0) ** 2))) == 1


def test_count_surface_lobes_on_synthetic_surface():
    x = np.linspace(-2, 2, 81)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    two = np.exp(-(((xx - yy - 1.2) / 0.4) ** 2)) + np.exp(-(((xx - yy + 1.2) / 0.4) ** 2))
    two *= np.exp(-0.2 * (xx + yy) ** 2)
    assert count_surface_lobes(two, level_fraction=0.3) == 2
    with pytest.raises(ValueError, match="square"):
        count_surface_lobes(two[:10, :])


def test_oracle_spectrum_free_point():
    spec = oracle_spectrum(make_params(2, 1.0), GridSpec(half_width=8.0, spacing=0.1), k_max=4)
    assert np.max(np.abs(spec.lambdas[:2] - 1.0)) < 1e-8
    assert abs(spec.trace_error) < 1e-8
