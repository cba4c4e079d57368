import math

import numpy as np
import pytest

from trapfermions import (
    GridSpec,
    build_kernel,
    build_potential,
    duality_check,
    find_extrema,
    harmonic_spectrum,
    k_star,
    make_params,
    segment_regimes,
    solve_momentum_schrodinger,
    solve_nystrom,
    tail_spectrum,
)
from trapfermions.potential import ParityClass
from trapfermions.spectra import auto_grid


def test_grid_nodes_symmetric_even_no_origin():
    spec = GridSpec(half_width=3.0, spacing=0.4)
    x = spec.nodes()
    assert x.size % 2 == 0
    assert np.array_equal(x, -x[::-1])
    assert np.all(x != 0.0)
    assert x[1] - x[0] == pytest.approx(0.4, rel=1e-15)


def test_kernel_trace_normalization():
    params = make_params(4, 0.6)
    kern = build_kernel(params)
    x = np.linspace(-12, 12, 4001)
    h = x[1] - x[0]
    assert h * float(np.sum(kern.diagonal(x))) == pytest.approx(4.0, abs=1e-8)


def test_kernel_matrix_symmetric():
    kern = build_kernel(make_params(3, 0.5))
    mat = kern.matrix(auto_grid(kern.params, 10).nodes())
    assert np.max(np.abs(mat - mat.T)) <= 1e-14 * np.max(np.abs(mat))


def test_free_fermions_occupations():
    spec = solve_nystrom(build_kernel(make_params(3, 1.0)))
    assert np.max(np.abs(spec.lambdas[:3] - 1.0)) < 1e-10
    assert np.max(np.abs(spec.lambdas[3:])) < 1e-10


def test_orbitals_orthonormal_with_definite_parity():
    spec = solve_nystrom(build_kernel(make_params(3, 0.4)), k_max=8)
    h = spec.grid_weights[0]
    overlap = h * spec.orbitals.T @ spec.orbitals
    assert np.max(np.abs(overlap - np.eye(8))) < 1e-10
    for j in range(8):
        chi = spec.orbitals[:, j]
        assert np.max(np.abs(chi - spec.parities[j] * chi[::-1])) < 1e-8 * np.max(
            np.abs(chi)
        )


def test_leading_parities_alternate_odd_class():
    spec = solve_nystrom(build_kernel(make_params(3, 0.4)), k_max=6)
    assert list(spec.parities[:4]) == [1.0, -1.0, 1.0, -1.0]


def test_momentum_solver_matches_position_solver():
    params = make_params(3, 0.02)
    pot = build_potential(params)
    direct = solve_nystrom(build_kernel(params), k_max=10).lambdas[:5]
    mapped = solve_momentum_schrodinger(params, pot, 5).lambdas[:5]
    assert np.max(np.abs(direct - mapped) / direct) < 10 * 0.02


def test_momentum_solver_requires_three_particles():
    params = make_params(2, 0.05)
    with pytest.raises(ValueError, match="N >= 3"):
        solve_momentum_schrodinger(params, build_potential(params), 4)


def test_harmonic_spectrum_classes_and_gate():
    val = harmonic_spectrum(6.0, 1.5, 0.01, 2, ParityClass.ODD_LIKE_UNIQUE_ZERO_MIN)
    assert val == pytest.approx(0.01 * 6.0 * (1.0 - 0.01 * 1.5 * 1.5), rel=1e-14)
    pair = harmonic_spectrum(6.0, 1.5, 0.01, 2, ParityClass.EVEN_LIKE_DEGENERATE_PAIR)
    assert pair == (val, val)
    with pytest.raises(ValueError, match="k <<"):
        harmonic_spectrum(6.0, 1.5, 0.01, 40, ParityClass.ODD_LIKE_UNIQUE_ZERO_MIN)


def test_tail_spectrum_shape_and_gate():
    params = make_params(3, 0.05)
    r = tail_spectrum(params, 80) / tail_spectrum(params, 70)
    expected = (80.0 / 70.0) ** 2 * math.exp(-2.0 * 3 / math.sqrt(2.0) * 0.05 * 10)
    assert r == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ValueError, match="3/t"):
        tail_spectrum(params, 10)


def test_segmentation_finds_leading_pairs_even_n():
    params = make_params(4, 0.01)
    report = find_extrema(build_potential(params))
    spec = solve_nystrom(build_kernel(params), k_max=20)
    seg = segment_regimes(report, spec)
    assert seg.segments[0][2] == "quasidegenerate_pairs"
    assert seg.segments[0][0] == 1
    assert seg.k_star >= 1
    assert seg.k_star == k_star(report, spec)


def test_duality_check_validates_input():
    with pytest.raises(ValueError, match="attractive"):
        duality_check(3, 1.5, np.ones(10))
    with pytest.raises(ValueError, match="provides"):
        duality_check(3, 0.5, np.ones(3), k_max=10)
