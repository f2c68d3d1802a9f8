"""Principal solutions of the Beltrami equation by Neumann series.

The Beurling and Cauchy transforms are applied as Fourier multipliers on a
zero-padded periodic copy of the square grid.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, NumericalError
from .grid import DiscGrid, Field, SquareGrid, lp_norm, resample_square_to_disc

logger = logging.getLogger(__name__)

PAD = 2


def _frequencies(grid: SquareGrid, pad: int = PAD):
    m = grid.n * pad
    k = 2 * np.pi * np.fft.fftfreq(m, d=grid.spacing)
    xi1 = k[None, :]
    xi2 = k[:, None]
    return xi1 + 1j * xi2


def _check_support(values: np.ndarray, grid: SquareGrid, radius: float | None = None):
    if radius is None:
        mag = np.abs(values)
        nz = mag > 1e-9 * mag.max() if mag.size else mag
        if not nz.any():
            return
        radius = float(np.abs(grid.z[nz]).max())
    if radius > grid.half_width / 2 + grid.spacing:
        raise ConfigurationError("insufficient padding")


def _pad(values: np.ndarray, pad: int = PAD) -> np.ndarray:
    n = values.shape[0]
    out = np.zeros((n * pad, n * pad), complex)
    off = (n * pad - n) // 2
    out[off:off + n, off:off + n] = values
    return out


def _crop(values: np.ndarray, n: int) -> np.ndarray:
    off = (values.shape[0] - n) // 2
    return values[off:off + n, off:off + n]


def beurling_multiplier(grid: SquareGrid, pad: int = PAD) -> np.ndarray:
    xi = _frequencies(grid, pad)
    with np.errstate(invalid="ignore", divide="ignore"):
        mult = np.conj(xi) / xi
    mult[0, 0] = 0.0
    return mult


def _apply_padded(values: np.ndarray, mult: np.ndarray, n: int, keep_padded=False):
    padded = _pad(values, mult.shape[0] // n)
    out = np.fft.ifft2(np.fft.fft2(padded) * mult)
    return out if keep_padded else _crop(out, n)


def beurling_transform(f: Field, check_support: bool = True, keep_padded: bool = False):
    """Apply the Beurling transform ``T`` (symbol ``conj(xi)/xi``) to a square-grid field."""
    grid = f.grid
    if not isinstance(grid, SquareGrid):
        raise ConfigurationError("beurling_transform requires a SquareGrid field")
    if check_support:
        _check_support(f.values, grid)
    out = _apply_padded(f.values, beurling_multiplier(grid), grid.n, keep_padded)
    return out if keep_padded else Field(grid, out)


def _gaussian_cauchy(z: np.ndarray, sigma: float) -> np.ndarray:
    """Cauchy transform of ``exp(-|z|^2 / sigma^2)`` in closed form."""
    s = np.abs(z) ** 2 / sigma**2
    out = np.empty(z.shape, complex)
    small = s < 1e-8
    zz = z[~small]
    out[~small] = sigma**2 * (-np.expm1(-s[~small])) / zz
    # series near the origin: sigma^2 (s - s^2/2) / z = conj(z) (1 - s/2)
    out[small] = np.conj(z[small]) * (1 - s[small] / 2)
    return out


def cauchy_transform(f: Field, check_support: bool = True) -> Field:
    """Convolution with ``1/(pi z)``, normalized to vanish in the far field.

    The mean of ``f`` is carried by a Gaussian whose transform is known in
    closed form; the zero-mean remainder is handled by the multiplier
    ``-2i/xi`` on the padded torus.  The free constant of the periodic part is
    fixed by making its average over the outer frame of the grid zero.
    """
    grid = f.grid
    if not isinstance(grid, SquareGrid):
        raise ConfigurationError("cauchy_transform requires a SquareGrid field")
    if check_support:
        _check_support(f.values, grid)
    if not np.any(f.values):
        return Field(grid, np.zeros(grid.shape))
    z = grid.z
    sigma = grid.half_width / 8
    gauss = np.exp(-np.abs(z) ** 2 / sigma**2)
    mass = f.values.sum() / gauss.sum()
    rest = f.values - mass * gauss
    xi = _frequencies(grid)
    with np.errstate(invalid="ignore", divide="ignore"):
        mult = -2j / xi
    mult[0, 0] = 0.0
    periodic = _apply_padded(rest, mult, grid.n)
    frame = np.zeros(grid.shape, bool)
    frame[:2, :] = frame[-2:, :] = frame[:, :2] = frame[:, -2:] = True
    periodic = periodic - periodic[frame].mean()
    return Field(grid, periodic + mass * _gaussian_cauchy(z, sigma))


def spectral_dz(values: np.ndarray, grid: SquareGrid, conj: bool = False) -> np.ndarray:
    """Spectral ``d/dz`` (or ``d/dzbar``) of padded-compact data."""
    xi = _frequencies(grid)
    sym = 0.5j * (np.conj(xi) if not conj else xi)
    return _apply_padded(values, sym, grid.n)


@dataclass(frozen=True, eq=False)
class BeltramiProblem:
    """Compactly supported dilatation ``mu`` on a square grid."""

    mu: Field
    support_radius: float

    def __post_init__(self):
        if not isinstance(self.mu.grid, SquareGrid):
            raise ConfigurationError("dilatation must live on a SquareGrid")
        outside = np.abs(self.mu.grid.z) > self.support_radius + 1e-12
        if np.any(np.abs(self.mu.values[outside]) > 0):
            raise ConfigurationError("dilatation does not vanish outside the support radius")
        if self.k >= 1:
            raise ConfigurationError("sup|mu| must be < 1")

    @property
    def k(self) -> float:
        return float(np.abs(self.mu.values).max())

    @property
    def grid(self) -> SquareGrid:
        return self.mu.grid


@dataclass(frozen=True, eq=False)
class PrincipalSolution:
    w_z: Field
    w_zbar: Field
    w: Field
    series_residuals: list = field(default_factory=list)
    beltrami_residual: float = 0.0
    converged: bool = True

    def fitted_ratio(self) -> float:
        """Geometric decay rate of the Neumann-term norms (least squares in log)."""
        res = np.array([r for r in self.series_residuals if r > 0])
        if res.size < 3:
            return 0.0
        j = np.arange(res.size)
        slope = np.polyfit(j, np.log(res), 1)[0]
        return float(np.exp(slope))


def principal_solve(prob: BeltramiProblem, tol: float = 1e-8, max_terms: int = 64) -> PrincipalSolution:
    """Neumann series ``h_0 = mu``, ``h_{j+1} = mu T h_j`` for the principal solution.

    ``w_zbar = sum h_j``, ``w_z = 1 + T w_zbar`` and ``w = z + C[w_zbar]``.
    """
    grid = prob.grid
    _check_support(prob.mu.values, grid, prob.support_radius)
    mu = prob.mu.values
    h2 = grid.spacing**2
    n = grid.n
    mult = beurling_multiplier(grid)
    term = mu.copy()
    total = np.zeros_like(mu)
    norms = []
    converged = False
    for _ in range(max_terms):
        total += term
        norm = float(np.sqrt(np.sum(np.abs(term) ** 2) * h2))
        norms.append(norm)
        if norm < tol:
            converged = True
            break
        if len(norms) >= 3 and norms[-1] >= norms[-2] >= norms[-3] and norms[-1] > tol:
            raise NumericalError("series divergence: k too large for grid")
        term = mu * _apply_padded(term, mult, n)
    if not norms or norms[-1] == 0:
        converged = True
    w_zbar = total
    w_z = 1 + _apply_padded(w_zbar, mult, n)
    w = grid.z + cauchy_transform(Field(grid, w_zbar), check_support=False).values
    residual = float(np.sqrt(np.sum(np.abs(w_zbar - mu * w_z) ** 2) * h2))
    if not converged:
        logger.warning("Neumann series stopped at max_terms=%d with last term %.3e", max_terms, norms[-1])
    return PrincipalSolution(Field(grid, w_z), Field(grid, w_zbar), Field(grid, w), norms, residual, converged)


def dilatation(w_z: Field, w_zbar: Field):
    """Nodewise ``mu = w_zbar / w_z`` and ``K = (1 + |mu|)/(1 - |mu|)``.

    Nodes with ``w_z = 0`` (or ``|mu| >= 1``) are set to zero dilatation and
    counted in the returned ``invalid`` number.
    """
    a = w_z.values
    b = w_zbar.values
    bad = np.abs(a) == 0
    with np.errstate(invalid="ignore", divide="ignore"):
        mu = np.where(bad, 0.0, b / np.where(bad, 1.0, a))
    m = np.abs(mu)
    bad |= m >= 1
    mu = np.where(bad, 0.0, mu)
    m = np.abs(mu)
    K = (1 + m) / (1 - m)
    return Field(w_z.grid, mu), Field(w_z.grid, K), int(bad.sum())


def psi_deviation(w_z: Field, w_zbar: Field, disc: DiscGrid | None = None) -> float:
    """L^3 norm over the unit disc of ``|w_z|^2 + |w_zbar|^2 - 1``.

    Square-grid inputs are resampled onto ``disc`` (default 64 x 128) with
    cubic splines.
    """
    if isinstance(w_z.grid, SquareGrid):
        disc = disc or DiscGrid(64, 128)
        a = resample_square_to_disc(w_z.values, w_z.grid, disc)
        b = resample_square_to_disc(w_zbar.values, w_z.grid, disc)
        grid = disc
    else:
        a, b, grid = w_z.values, w_zbar.values, w_z.grid
    dev = np.abs(a) ** 2 + np.abs(b) ** 2 - 1
    return lp_norm(Field(grid, dev), 3)


def _lp(values: np.ndarray, p: float, h2: float) -> float:
    return float(np.sum(np.abs(values) ** p) * h2) ** (1 / p)


def beurling_norm_estimate(p: float, trials: int, seed: int = 0, n: int = 128) -> float:
    """Lower estimate of the L^p operator norm of the Beurling transform.

    Test fields are drawn sequentially from a seeded generator (so a larger
    ``trials`` includes all smaller test sets): zero-mean bump derivatives
    with random centres and widths, and truncated power singularities
    ``|z|^beta`` with ``-2/p < beta < 0``.
    """
    if not 1 < p < np.inf:
        raise ValueError("p must lie in (1, inf)")
    grid = SquareGrid(4.0, n)
    rng = np.random.default_rng(seed)
    h2 = grid.spacing**2
    mult = beurling_multiplier(grid)
    z = grid.z
    best = 0.0
    for _ in range(trials):
        kind = rng.integers(2)
        c = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        width = rng.uniform(0.15, 0.8)
        if kind == 0:
            # dbar of a Gaussian: zero mean, smooth, decays fast
            f = -(z - c) / width**2 * np.exp(-np.abs(z - c) ** 2 / width**2)
            f = f * np.exp(1j * rng.uniform(0, 2 * np.pi))
        else:
            beta = -2 / p * rng.uniform(0.2, 0.9)
            rr = np.abs(z - c)
            rr = np.maximum(rr, grid.spacing / 2)
            f = np.where(rr < 1.5 * width, rr**beta, 0.0).astype(complex)
            f *= ((z - c) / rr) ** rng.integers(-2, 3)
        tf = _apply_padded(f, mult, grid.n, keep_padded=True)
        ratio = _lp(tf, p, h2) / _lp(f, p, h2)
        best = max(best, ratio)
    return best


def radial_stretch_problem(alpha: float, grid: SquareGrid) -> BeltramiProblem:
    """Dilatation of ``z |z|^alpha`` inside the unit disc (identity outside)."""
    z = grid.z
    inside = np.abs(z) <= 1
    mu = np.where(inside, alpha / (alpha + 2) * z / np.conj(z), 0.0)
    return BeltramiProblem(Field(grid, mu), 1.0)


def bump(z: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Smooth compactly supported bump with maximum 1 at the origin."""
    s = np.abs(z) ** 2 / radius**2
    out = np.zeros(z.shape)
    inside = s < 1
    out[inside] = np.exp(1 - 1 / (1 - s[inside]))
    return out


def bump_problem(k: float, grid: SquareGrid, radius: float = 1.0) -> BeltramiProblem:
    """``mu = k * bump``: a smooth dilatation family with ``sup|mu| = k``."""
    return BeltramiProblem(Field(grid, k * bump(grid.z, radius).astype(complex)), radius)
