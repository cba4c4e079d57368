"""Walkthrough: the three regimes of the occupation spectrum.

At strong attraction the spectrum splits into (i) a leading region shaped by
the wells of the effective potential, (ii) a crossover at the well-top index
k*, and (iii) an exponential tail.  This script computes all three for N = 4
at t = 0.01 and compares the leading region against the closed-form
harmonic approximation and the tail against its decay law.
"""

import math

import numpy as np

from trapfermions import (
    build_kernel,
    build_potential,
    find_extrema,
    harmonic_params,
    harmonic_spectrum,
    make_params,
    segment_regimes,
    solve_nystrom,
    tail_spectrum,
)

n, t = 4, 0.01
params = make_params(n, t)
pot = build_potential(params)
report = find_extrema(pot)
alpha, beta, m_tilde = harmonic_params(pot, report)

spec = solve_nystrom(build_kernel(params), k_max=40)
seg = segment_regimes(report, spec)

print(f"N = {n}, t = {t}: alpha = {alpha:.4f}, beta = {beta:.4f}, k* = {seg.k_star}")
print()
print("segments (pairs of eigenvalue indices):")
for k_first, k_last, label in seg.segments:
    print(f"  k = {k_first}..{k_last}: {label}")

print()
print("leading pairs vs the harmonic ladder:")
for pair_idx in (1, 2, 3):
    lam_pair = spec.lambdas[2 * pair_idx - 2 : 2 * pair_idx]
    pred = harmonic_spectrum(alpha, beta, t, pair_idx, report.parity_class)[0]
    print(
        f"  pair {pair_idx}: computed ({lam_pair[0]:.6f}, {lam_pair[1]:.6f})"
        f"   harmonic {pred:.6f}"
    )

# the tail law predicts the slope of log(lambda_k / (kt)^(N-1)); fit it at a
# coupling where many tail eigenvalues are resolvable
t_tail = 0.05
spec_tail = solve_nystrom(build_kernel(make_params(n, t_tail)), k_max=130)
ks = np.arange(math.ceil(3.0 / t_tail), math.floor(6.0 / t_tail) + 1)
y = np.log(spec_tail.lambdas[ks - 1] / (ks * t_tail) ** (n - 1))
slope = np.polyfit(ks, y, 1)[0]
target = -2.0 * n * t_tail / math.sqrt(n - 1.0)
shape = tail_spectrum(make_params(n, t_tail), int(ks[0]))
print()
print(f"tail at t = {t_tail}: fitted slope {slope:.5f} vs predicted {target:.5f}")
print(f"tail shape value at k = {ks[0]}: {shape:.3e} (up to one overall constant)")
