"""Walkthrough: shell structure of the densities across coupling strength.

The one-particle density shows N shells at the free point t = 1, collapses
to a single featureless peak at strong attraction, and recovers N shells on
the repulsive side (computed by direct wavefunction integration, the only
route for t > 1).  The two-particle density keeps the same two-lobe shape
for N = 3 and N = 4 -- the pair structure is parity-insensitive even though
the occupation spectrum is not.
"""

import numpy as np

from trapfermions import (
    OracleRdm,
    build_kernel,
    count_local_maxima,
    count_surface_lobes,
    make_params,
    one_particle_density,
    two_particle_density,
)

n = 3
xs = np.linspace(-4.0, 4.0, 401)

print(f"one-particle density maxima, N = {n}:")
for t in (0.1, 1.0):
    curve = one_particle_density(build_kernel(make_params(n, t)), xs)
    print(f"  t = {t:>4}: {count_local_maxima(curve.values)} maxima")

# repulsive side: brute-force oracle, on the wider scale set by t
t_rep = 10.0
xs_rep = np.linspace(-4.0 * t_rep, 4.0 * t_rep, 401)
curve = one_particle_density(OracleRdm(make_params(n, t_rep)), xs_rep)
print(f"  t = {t_rep:>4}: {count_local_maxima(curve.values)} maxima (oracle route)")

print()
print("pair-density lobes about the diagonal at t = 0.1:")
pair_grid = np.linspace(-2.0, 2.0, 61)
for n_pair in (3, 4):
    surf = two_particle_density(make_params(n_pair, 0.1), pair_grid)
    peak = surf.values.max()
    i, j = np.unravel_index(np.argmax(surf.values), surf.values.shape)
    print(
        f"  N = {n_pair}: {count_surface_lobes(surf.values)} lobes, "
        f"peak at (x, y) = ({surf.xs[i]:+.2f}, {surf.ys[j]:+.2f}), "
        f"diagonal exactly zero: {bool(np.all(np.diagonal(surf.values) == 0.0))}"
    )

print()
print("same lobe count for odd and even N: the pair distribution does not")
print("inherit the number-parity effect of the occupation spectrum.")
