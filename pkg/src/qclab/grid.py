"""Polar and Cartesian discretizations with quadrature, norms and derivatives.

The disc grid uses Chebyshev-type radii clustered near the unit circle and
uniform angles.  Derivatives combine FFT differentiation in the angle with
fourth-order finite differences on the nonuniform radial nodes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigurationError


def fejer_first_rule(n: int):
    """Nodes and weights of Fejér's first rule on [-1, 1], ascending order."""
    k = np.arange(n)
    theta = (2 * k + 1) * np.pi / (2 * n)
    weights = np.ones(n)
    for j in range(1, n // 2 + 1):
        weights -= 2 * np.cos(2 * j * theta) / (4 * j * j - 1)
    weights *= 2.0 / n
    nodes = np.cos(theta)
    return nodes[::-1].copy(), weights[::-1].copy()


def fornberg_weights(x0: float, nodes: np.ndarray, order: int) -> np.ndarray:
    """Finite-difference weights for the ``order``-th derivative at ``x0``."""
    n = len(nodes)
    c = np.zeros((n, order + 1))
    c1, c4 = 1.0, nodes[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2, c5, c4 = 1.0, c4, nodes[i] - x0
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def _radial_stencils(radii: np.ndarray, order: int, width: int = 5):
    """Index windows and weights for a ``width``-point stencil at each radius."""
    n = len(radii)
    half = width // 2
    idx = np.empty((n, width), dtype=int)
    wts = np.empty((n, width))
    for i in range(n):
        start = min(max(i - half, 0), n - width)
        window = np.arange(start, start + width)
        idx[i] = window
        wts[i] = fornberg_weights(radii[i], radii[window], order)
    return idx, wts


@dataclass(frozen=True, eq=False)
class DiscGrid:
    """Polar quadrature grid on the unit disc.

    Radii are ``sqrt((1 + x_j) / 2)`` for Fejér/Chebyshev nodes ``x_j``, which
    makes the radial rule exact for polynomials in ``|z|^2`` and clusters nodes
    near the boundary.
    """

    n_r: int
    n_theta: int

    def __post_init__(self):
        if self.n_r < 5:
            raise ConfigurationError("n_r must be at least 5")
        if self.n_theta < 4 or self.n_theta % 2:
            raise ConfigurationError("n_theta must be even and at least 4")

    @cached_property
    def _radial_rule(self):
        nodes, weights = fejer_first_rule(self.n_r)
        s = (1.0 + nodes) / 2.0
        # int_0^1 f r dr = (1/2) int_0^1 f ds = (1/4) int_{-1}^{1} f dx
        return np.sqrt(s), weights / 4.0

    @property
    def radii(self) -> np.ndarray:
        return self._radial_rule[0]

    @property
    def radial_weights(self) -> np.ndarray:
        return self._radial_rule[1]

    @cached_property
    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_theta) / self.n_theta

    @cached_property
    def weights(self) -> np.ndarray:
        return np.outer(self.radial_weights, np.full(self.n_theta, 2 * np.pi / self.n_theta))

    @cached_property
    def z(self) -> np.ndarray:
        return self.radii[:, None] * np.exp(1j * self.angles[None, :])

    @property
    def shape(self):
        return (self.n_r, self.n_theta)

    @cached_property
    def _d1(self):
        return _radial_stencils(self.radii, 1)

    @cached_property
    def _d2(self):
        return _radial_stencils(self.radii, 2)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        n = np.fft.fftfreq(self.n_theta, 1.0 / self.n_theta)
        return n

    def radial_derivative(self, values: np.ndarray, order: int = 1) -> np.ndarray:
        idx, wts = self._d1 if order == 1 else self._d2
        return np.einsum("iw,iwt->it", wts, values[idx])

    def angular_derivative(self, values: np.ndarray, order: int = 1) -> np.ndarray:
        n = self.wavenumbers.astype(complex)
        if order % 2:
            # odd derivatives of the Nyquist mode are not representable
            n[self.n_theta // 2] = 0.0
        mult = (1j * n) ** order
        return np.fft.ifft(np.fft.fft(values, axis=1) * mult[None, :], axis=1)

    def mask_annulus(self, r_min: float, r_max: float) -> np.ndarray:
        sel = (self.radii >= r_min) & (self.radii <= r_max)
        return np.broadcast_to(sel[:, None], self.shape)


@dataclass(frozen=True, eq=False)
class SquareGrid:
    """Uniform cell-centred grid on the square ``[-R, R]^2``."""

    half_width: float
    n: int

    def __post_init__(self):
        if self.half_width <= 0:
            raise ConfigurationError("half_width must be positive")
        if self.n < 4 or self.n & (self.n - 1):
            raise ConfigurationError("n must be a power of two")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n

    @cached_property
    def coords(self) -> np.ndarray:
        return -self.half_width + (np.arange(self.n) + 0.5) * self.spacing

    @cached_property
    def z(self) -> np.ndarray:
        x = self.coords
        return x[None, :] + 1j * x[:, None]

    @property
    def shape(self):
        return (self.n, self.n)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.full(self.shape, self.spacing**2)


@dataclass(frozen=True, eq=False)
class Field:
    """Complex samples of a function on a grid."""

    grid: DiscGrid | SquareGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.shape:
            raise ConfigurationError(
                f"field shape {vals.shape} does not match grid shape {self.grid.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("non-finite field")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid, func) -> "Field":
        return cls(grid, func(grid.z))

    def __add__(self, other):
        return Field(self.grid, self.values + _vals(other))

    def __sub__(self, other):
        return Field(self.grid, self.values - _vals(other))

    def __mul__(self, other):
        return Field(self.grid, self.values * _vals(other))

    __rmul__ = __mul__

    def conj(self) -> "Field":
        return Field(self.grid, np.conj(self.values))


def _vals(x):
    return x.values if isinstance(x, Field) else x


def lp_norm(f: Field, p: float) -> float:
    """Quadrature approximation of the L^p norm of a field.

    Parameters
    ----------
    f : Field
        Samples on a DiscGrid or SquareGrid.
    p : float
        Exponent, ``p >= 1`` or ``np.inf``.
    """
    vals = np.asarray(f.values)
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite field")
    if p == np.inf:
        return float(np.abs(vals).max()) if vals.size else 0.0
    if p < 1:
        raise ValueError("p must be >= 1")
    return float(np.sum(np.abs(vals) ** p * f.grid.weights) ** (1.0 / p))


def _require_disc(f: Field) -> DiscGrid:
    if not isinstance(f.grid, DiscGrid):
        raise ConfigurationError("operation requires a DiscGrid field")
    if f.grid.n_theta % 2:
        raise ConfigurationError("n_theta must be even")
    return f.grid


def polar_to_wirtinger(grid: DiscGrid, f_r: np.ndarray, f_theta: np.ndarray):
    """Convert (d/dr, d/dtheta) samples into (d/dz, d/dzbar)."""
    r = grid.radii[:, None]
    e = np.exp(1j * grid.angles)[None, :]
    f_z = 0.5 * np.conj(e) * (f_r - 1j * f_theta / r)
    f_zbar = 0.5 * e * (f_r + 1j * f_theta / r)
    return f_z, f_zbar


def gradient(f: Field) -> tuple[Field, Field]:
    """Wirtinger derivatives ``(f_z, f_zbar)`` of a disc field."""
    grid = _require_disc(f)
    f_r = grid.radial_derivative(f.values, 1)
    f_t = grid.angular_derivative(f.values, 1)
    f_z, f_zbar = polar_to_wirtinger(grid, f_r, f_t)
    return Field(grid, f_z), Field(grid, f_zbar)


def gradient_modulus(f: Field) -> np.ndarray:
    f_z, f_zbar = gradient(f)
    return np.abs(f_z.values) + np.abs(f_zbar.values)


def laplacian_fd(f: Field) -> Field:
    """Laplacian ``f_rr + f_r / r + f_thth / r^2`` of a disc field."""
    grid = _require_disc(f)
    r = grid.radii[:, None]
    vals = f.values
    f_r = grid.radial_derivative(vals, 1)
    f_rr = grid.radial_derivative(vals, 2)
    f_tt = grid.angular_derivative(vals, 2)
    lap = f_rr + f_r / r + f_tt / r**2
    if np.all(np.isreal(vals)):
        lap = lap.real.astype(complex)
    return Field(grid, lap)


def resample_square_to_disc(values: np.ndarray, square: SquareGrid, disc: DiscGrid) -> np.ndarray:
    """Cubic-spline interpolation of square-grid samples at the disc nodes."""
    from scipy.ndimage import map_coordinates

    z = disc.z
    col = (z.real + square.half_width) / square.spacing - 0.5
    row = (z.imag + square.half_width) / square.spacing - 0.5
    coords = np.array([row.ravel(), col.ravel()])
    re = map_coordinates(np.real(values), coords, order=3, mode="nearest")
    im = map_coordinates(np.imag(values), coords, order=3, mode="nearest")
    return (re + 1j * im).reshape(disc.shape)
