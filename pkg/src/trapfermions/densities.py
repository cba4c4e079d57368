"""One- and two-particle densities and the brute-force wavefunction oracle.

The oracle integrates the exact N-body ground state over N-1 coordinates on
a truncated tensor Gauss-Legendre box and is the independent validation of
the analytic kernel; it is also the only route for repulsive coupling
(t > 1), where it serves as the duality companion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams
from .spectra import RdmKernel
from .special import exact_prefactor, gauss_legendre_truncated

# default per-axis Gauss-Legendre orders for the (N-1)-dimensional oracle box
_ORACLE_POINTS = {2: 200, 3: 200, 4: 120}
# and for the (N-2)-dimensional pair-density box
_PAIR_POINTS = {3: 200, 4: 120, 5: 64, 6: 48}

_INNER_CHUNK = 100_000


@dataclass(frozen=True)
class DensityCurve:
    xs: np.ndarray
    values: np.ndarray
    n_particles: int
    t: float
    normalization_convention: str = "trace_N"


@dataclass(frozen=True)
class PairDensitySurface:
    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray  # shape (len(xs), len(ys)), integrates to N(N-1)/2
    n_particles: int
    t: float
    scale: float  # values = scale * raw |Psi|^2 integral


def wavefunction(params: ModelParams, xs) -> float | np.ndarray:
    """Unnormalized N-body ground state at coordinate tuples.

    xs has shape (..., N): Vandermonde product times the Gaussian with the
    center-of-mass cross term.  Vanishes whenever two coordinates coincide
    and is totally antisymmetric.
    """
    xs = np.asarray(xs, dtype=float)
    n = params.n_particles
    if xs.shape[-1] != n:
        raise ValueError(f"expected {n} coordinates, got {xs.shape[-1]}")
    vand = np.ones(xs.shape[:-1])
    for i in range(n):
        for j in range(i + 1, n):
            vand = vand * (xs[..., i] - xs[..., j])
    s = np.sum(xs, axis=-1)
    out = vand * np.exp(-params.A * np.sum(xs * xs, axis=-1) + params.B * s * s)
    return out if out.ndim else float(out)


class OracleRdm:
    """Brute-force one-body kernel from direct integration of the wavefunction.

    Valid for N <= 4 and any t > 0.  The remaining coordinates are
    integrated on a tensor Gauss-Legendre rule over a box of half-width
    8 * max(1, t); the result is rescaled so the numeric trace equals N.
    """

    def __init__(
        self,
        params: ModelParams,
        points_per_axis: int | None = None,
        half_width: float | None = None,
    ):
        n = params.n_particles
        if n > 4:
            raise ValueError(f"oracle integration supports N <= 4, got {n}")
        self.params = params
        ppa = points_per_axis if points_per_axis is not None else _ORACLE_POINTS[n]
        hw = half_width if half_width is not None else 8.0 * max(1.0, params.t)
        rule = gauss_legendre_truncated(ppa, hw)
        grids = np.meshgrid(*([rule.nodes] * (n - 1)), indexing="ij")
        self._inner = np.stack([g.ravel() for g in grids], axis=-1)  # (n_inner, N-1)
        wgrids = np.meshgrid(*([rule.weights] * (n - 1)), indexing="ij")
        self._inner_w = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
        self.half_width = hw

        # trace normalization on an outer Gauss-Legendre grid
        outer = gauss_legendre_truncated(200, hw)
        raw_diag = self._raw_diagonal(outer.nodes)
        trace = float(outer.weights @ raw_diag)
        self._scale = n / trace

    def _phi(self, xs: np.ndarray, inner_slice: slice) -> np.ndarray:
        """Psi(x, u...) for each x in xs against a chunk of inner nodes."""
        coords = np.empty((xs.size, self._inner[inner_slice].shape[0], self.params.n_particles))
        coords[..., 0] = xs[:, None]
        coords[..., 1:] = self._inner[inner_slice][None, :, :]
        return wavefunction(self.params, coords)

    def _raw_matrix(self, xs: np.ndarray) -> np.ndarray:
        n_inner = self._inner.shape[0]
        out = np.zeros((xs.size, xs.size))
        for start in range(0, n_inner, _INNER_CHUNK):
            sl = slice(start, min(start + _INNER_CHUNK, n_inner))
            phi = self._phi(xs, sl)
            out += (phi * self._inner_w[sl][None, :]) @ phi.T
        return self.params.n_particles * out

    def _raw_diagonal(self, xs: np.ndarray) -> np.ndarray:
        n_inner = self._inner.shape[0]
        out = np.zeros(xs.size)
        for start in range(0, n_inner, _INNER_CHUNK):
            sl = slice(start, min(start + _INNER_CHUNK, n_inner))
            phi = self._phi(xs, sl)
            out += (phi * phi) @ self._inner_w[sl]
        return self.params.n_particles * out

    def matrix(self, nodes: np.ndarray) -> np.ndarray:
        return self._scale * self._raw_matrix(np.asarray(nodes, dtype=float))

    def diagonal(self, xs) -> np.ndarray:
        return self._scale * self._raw_diagonal(np.atleast_1d(np.asarray(xs, dtype=float)))

    def evaluate(self, x, y):
        """Pointwise kernel value; scalars or equal-length 1-D arrays."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        xs, inv = np.unique(np.concatenate([x, y]), return_inverse=True)
        mat = self.matrix(xs)
        vals = mat[inv[: x.size], inv[x.size:]]
        return vals if np.ndim(vals) and vals.size > 1 else float(vals[0])


def oracle_rdm(params: ModelParams, x, y, **kwargs):
    """Convenience wrapper: one-shot oracle kernel evaluation."""
    return OracleRdm(params, **kwargs).evaluate(x, y)


def oracle_spectrum(
    params: ModelParams,
    grid_spec,
    k_max: int = 10,
    points_per_axis: int | None = None,
):
    """Occupation spectrum of the brute-force kernel on a uniform grid.

    Same discretization as the analytic-kernel solver but fed by direct
    wavefunction integration; the only spectral route for t > 1.
    """
    from .spectra import SpectrumResult, _parity_split_eigh

    x = grid_spec.nodes()
    h = grid_spec.spacing
    mat = OracleRdm(params, points_per_axis=points_per_axis).matrix(x)
    vals, vecs, pars = _parity_split_eigh(h * mat)
    keep = min(k_max, vals.size)
    return SpectrumResult(
        lambdas=vals,
        orbitals=vecs[:, :keep] / math.sqrt(h),
        grid=x,
        grid_weights=np.full(x.size, h),
        method="nystrom_oracle",
        trace_error=h * float(np.trace(mat)) - params.n_particles,
        n_particles=params.n_particles,
        t=params.t,
        parities=pars[:keep],
    )


def one_particle_density(source: RdmKernel | OracleRdm, xs: np.ndarray) -> DensityCurve:
    """Diagonal of the kernel on the given grid (trace-N convention)."""
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(source.diagonal(xs))
    params = source.params
    return DensityCurve(xs=xs, values=values, n_particles=params.n_particles, t=params.t)


def two_particle_density(
    params: ModelParams,
    xs: np.ndarray,
    points_per_axis: int | None = None,
    half_width: float | None = None,
) -> PairDensitySurface:
    """Pair density n(x, y) on the tensor grid xs x xs.

    Integrates |Psi|^2 over the remaining N-2 coordinates on a truncated
    Gauss-Legendre box and normalizes to the pair-counting convention
    N(N-1)/2.  Vanishes on the diagonal (fermionic node).
    """
    n = params.n_particles
    if not 2 <= n <= 6:
        raise ValueError(f"pair density supports 2 <= N <= 6, got {n}")
    xs = np.asarray(xs, dtype=float)
    hw = half_width if half_width is not None else 8.0 * max(1.0, params.t)

    if n == 2:
        inner = np.zeros((1, 0))
        inner_w = np.ones(1)
    else:
        ppa = points_per_axis if points_per_axis is not None else _PAIR_POINTS[n]
        rule = gauss_legendre_truncated(ppa, hw)
        grids = np.meshgrid(*([rule.nodes] * (n - 2)), indexing="ij")
        inner = np.stack([g.ravel() for g in grids], axis=-1)
        wgrids = np.meshgrid(*([rule.weights] * (n - 2)), indexing="ij")
        inner_w = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)

    pair_count = math.comb(n, 2)

    def raw(xg: np.ndarray, yg: np.ndarray) -> np.ndarray:
        flatx = np.repeat(xg, yg.size)
        flaty = np.tile(yg, xg.size)
        out = np.zeros(flatx.size)
        n_inner = inner.shape[0]
        chunk = max(1, 60_000_000 // (flatx.size * n))
        for start in range(0, n_inner, chunk):
            sl = slice(start, min(start + chunk, n_inner))
            coords = np.empty((flatx.size, inner[sl].shape[0], n))
            coords[..., 0] = flatx[:, None]
            coords[..., 1] = flaty[:, None]
            coords[..., 2:] = inner[sl][None, :, :]
            psi = wavefunction(params, coords)
            out += (psi * psi) @ inner_w[sl]
        return pair_count * out.reshape(xg.size, yg.size)

    outer = gauss_legendre_truncated(120, hw)
    norm_vals = raw(outer.nodes, outer.nodes)
    total = float(outer.weights @ norm_vals @ outer.weights)
    scale = pair_count / total

    values = scale * raw(xs, xs)
    return PairDensitySurface(
        xs=xs, ys=xs, values=values, n_particles=n, t=params.t, scale=scale
    )


def correlation_function(n2: PairDensitySurface, n1: DensityCurve) -> np.ndarray:
    """Pointwise ratio n(x, y) / (n(x) n(y)), NaN-masked where the product underflows."""
    if n1.n_particles != n2.n_particles or n1.t != n2.t:
        raise ValueError("pair density and density belong to different parameters")
    if n1.xs.shape != n2.xs.shape or not np.array_equal(n1.xs, n2.xs):
        raise ValueError("pair density and density grids do not match")
    denom = n1.values[:, None] * n1.values[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(denom > 1e-300, n2.values / denom, np.nan)


def boson_fermion_ratio_check(params: ModelParams, points) -> float:
    """Residual of the prefactor relation between fermionic and bosonic kernels.

    The bosonic kernel is the F == 1 kernel with its own trace-N
    normalization; the fermionic one must equal it times the prefactor and a
    normalization ratio.  Identity up to rounding by construction.
    """
    from .spectra import build_kernel

    kern = build_kernel(params)
    kappa = 2.0 * params.a - params.b
    norm_b = params.n_particles * math.sqrt(kappa / math.pi)
    norm_ratio = kern.normalization / norm_b

    pts = np.asarray(points, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    rho_f = np.asarray(kern.evaluate(x, y))
    expo = np.exp(-params.a * (x * x + y * y) + params.b * x * y)
    rho_b = norm_b * expo
    f = np.asarray(exact_prefactor(params, x, y))
    return float(np.max(np.abs(rho_f - norm_ratio * f * rho_b)))


def count_local_maxima(values: np.ndarray, window: int = 3) -> int:
    """Strict local maxima of a sampled curve after a short smoothing window."""
    v = np.asarray(values, dtype=float)
    if window > 1:
        kernel = np.ones(window) / window
        v = np.convolve(v, kernel, mode="valid")
    interior = (v[1:-1] > v[:-2]) & (v[1:-1] > v[2:])
    return int(np.count_nonzero(interior))


def count_surface_lobes(values: np.ndarray, level_fraction: float = 0.05) -> int:
    """Number of lobes of a pair-density surface about its diagonal node.

    Projects the superlevel set (at the given fraction of the global peak)
    onto the relative coordinate x - y and counts contiguous bands of
    occupied diagonal offsets.  A single undulating ridge parallel to the
    node counts once; additional layering at larger separation would add
    further bands.  Expects values sampled on a square tensor grid.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise ValueError(f"expected a square surface, got shape {v.shape}")
    mask = v > level_fraction * float(np.max(v))
    m = v.shape[0]
    occupied = np.array([mask.diagonal(k).any() for k in range(-(m - 1), m)])
    return int(np.count_nonzero(occupied[1:] & ~occupied[:-1]))
