"""Instruments for boundary behaviour of planar maps.

Arc-length profiles of harmonic maps, the split of a map into analytic,
anti-analytic and Green-potential parts, Lipschitz estimates, and a
mass-concentration test for absolute continuity of boundary traces.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericalError
from .grid import DiscGrid, Field, gradient, laplacian_fd
from .greenpoisson import CircleFn, _signed_modes, green_potential
from .halfplane import LineFn, concentration_fraction


@dataclass(frozen=True, eq=False)
class BoundaryDerivativeMeasure:
    """Samples of ``|d_theta u(r e^{it})|`` on a radius ladder and their totals."""

    radii: np.ndarray
    masses: np.ndarray
    densities: list = field(repr=False, default_factory=list)

    def __post_init__(self):
        r = np.asarray(self.radii, float)
        if np.any(np.diff(r) <= 0) or r.max() >= 1 or r.min() <= 0:
            raise DomainError("ladder must be strictly increasing inside (0, 1)")
        if not np.all(np.isfinite(self.masses)):
            raise NumericalError("non-finite arc length")

    def is_nondecreasing(self, slack: float = 1e-4) -> bool:
        m = np.asarray(self.masses)
        return bool(np.all(m[1:] >= m[:-1] * (1 - slack)))

    @property
    def worst_drop(self) -> float:
        """Largest relative decrease between consecutive radii (0 if none)."""
        m = np.asarray(self.masses)
        return float(max(0.0, np.max((m[:-1] - m[1:]) / m[:-1])))


def arc_length_profile(u, ladder, samples: int | None = None,
                       harmonic_tol: float | None = 1e-3) -> BoundaryDerivativeMeasure:
    """``|Gamma_r| = int |d_theta u(r e^{it})| dt`` along ``ladder``.

    ``u`` is either boundary data (:class:`CircleFn`), whose harmonic extension
    is evaluated exactly from its Fourier series, or a disc :class:`Field`, in
    which case each ladder radius is snapped to the nearest grid ring.  For
    fields, harmonicity is checked on the snapped rings when ``harmonic_tol``
    is set.
    """
    ladder = np.asarray(ladder, float)
    if isinstance(u, CircleFn):
        n = max(samples or u.n, u.n)
        modes = _signed_modes(u.n)
        coef = u.coefficients * 1j * modes
        if u.n % 2 == 0:
            coef[u.n // 2] = 0  # odd derivative drops the Nyquist mode
        # zero-pad to n samples and evaluate every ring by inverse FFT
        spec = np.zeros((ladder.size, n), complex)
        rpow = ladder[:, None] ** np.abs(modes)[None, :]
        idx = np.mod(modes, n)
        spec[:, idx] = coef[None, :] * rpow
        dens = np.abs(np.fft.ifft(spec, axis=1) * n)
        masses = dens.sum(axis=1) * 2 * np.pi / n
        return BoundaryDerivativeMeasure(ladder, masses, list(dens))
    if isinstance(u, Field) and isinstance(u.grid, DiscGrid):
        grid = u.grid
        rings = np.unique(np.abs(grid.radii[:, None] - ladder[None, :]).argmin(axis=0))
        if harmonic_tol is not None:
            lap = np.abs(laplacian_fd(u).values[rings])
            scale = max(1.0, float(np.abs(u.values).max()))
            if lap.max() > harmonic_tol * scale:
                raise NumericalError("field is not harmonic on the ladder")
        dth = grid.angular_derivative(u.values, 1)[rings]
        dens = np.abs(dth)
        masses = dens.sum(axis=1) * 2 * np.pi / grid.n_theta
        return BoundaryDerivativeMeasure(grid.radii[rings], masses, list(dens))
    raise TypeError("expected CircleFn boundary data or a disc Field")


def boundary_total_variation(b: CircleFn, samples: int = 2**16) -> float:
    """Length of the boundary curve from trigonometric interpolation."""
    fine = b.resampled(samples).samples
    return float(np.abs(np.diff(np.append(fine, fine[0]))).sum())


@dataclass(frozen=True, eq=False)
class Split:
    """``w = a + conj(b) + v`` with ``a, b`` analytic and ``v`` zero on the circle."""

    u: Field
    v: Field
    a: Field
    b: Field
    aprime: Field
    bprime: Field
    v_z: Field
    v_zbar: Field

    def reassembled(self) -> Field:
        return self.a + self.b.conj() + self.v


def _frequency_split(values: np.ndarray):
    """Split ring data into modes ``n >= 0`` and ``n < 0`` (Nyquist halved)."""
    spec = np.fft.fft(values, axis=1)
    m = values.shape[1]
    modes = _signed_modes(m)
    pos = spec * (modes >= 0)
    neg = spec * (modes < 0)
    if m % 2 == 0:
        half = spec[:, m // 2] / 2
        pos[:, m // 2] = half
        neg[:, m // 2] = half
    return np.fft.ifft(pos, axis=1), np.fft.ifft(neg, axis=1)


def split_f(w: Field, g: Field | None = None, boundary: CircleFn | None = None) -> Split:
    """Decompose ``w`` into its harmonic part ``u = a + conj(b)`` and ``v``.

    ``v`` is the zero-boundary Green potential of ``g`` (default: the finite
    difference Laplacian of ``w``).  Without explicit boundary data the
    harmonic part is ``w - v``, which has the same trace.
    """
    grid = w.grid
    if g is None:
        g = laplacian_fd(w)
    v, v_z, v_zb = green_potential(g, grid, with_gradient=True)
    if boundary is not None:
        from .greenpoisson import poisson_extend

        u = poisson_extend(boundary, grid)
    else:
        u = w - v
    a_vals, bbar_vals = _frequency_split(u.values)
    a = Field(grid, a_vals)
    bbar = Field(grid, bbar_vals)
    a_z, _ = gradient(a)
    _, bbar_zb = gradient(bbar)
    return Split(u, v, a, bbar.conj(), a_z, bbar_zb.conj(), v_z, v_zb)


def aprime_inequality_check(w: Field, g: Field | None = None, k: float | None = None,
                            r_max: float = 0.95, boundary: CircleFn | None = None,
                            w_derivatives: tuple | None = None) -> dict:
    """Nodewise test of the bound on ``|a'|`` for ``1/2 <= |z| <= r_max``.

    Checks ``|a'| <= (2|u_theta| + |v_zbar| + |v_z|) / (1 - k)`` and reports the
    residual of ``b' = (zbar/z) conj(a') - (i/z) conj(u_theta)``.  ``k`` defaults
    to the sup of ``|w_zbar / w_z|`` over the disc nodes.
    """
    grid = w.grid
    sp = split_f(w, g, boundary)
    if k is None:
        wz, wzb = w_derivatives if w_derivatives is not None else gradient(w)
        k = float(np.max(np.abs(_vals(wzb)) / np.abs(_vals(wz))))
    if not 0 <= k < 1:
        raise DomainError("dilatation bound k must lie in [0, 1)")
    mask = grid.mask_annulus(0.5, r_max)
    z = grid.z
    u_z, u_zb = gradient(sp.u)
    u_theta = 1j * (z * u_z.values - np.conj(z) * u_zb.values)
    lhs = np.abs(sp.aprime.values)
    rhs = (2 * np.abs(u_theta) + np.abs(sp.v_zbar.values) + np.abs(sp.v_z.values)) / (1 - k)
    excess = (lhs - rhs)[mask]
    scale = max(1.0, float(lhs[mask].max()))
    predicted = (np.conj(z) / z) * np.conj(sp.aprime.values) - (1j / z) * np.conj(u_theta)
    diff = (sp.bprime.values - predicted)[mask]
    # b' may vanish identically; measure against the size of a'
    ref = max(np.linalg.norm(sp.bprime.values[mask]), np.linalg.norm(sp.aprime.values[mask]), 1e-300)
    rel = float(np.linalg.norm(diff) / ref)
    return {
        "k": k,
        "max_violation": float(max(excess.max(), 0.0)) / scale,
        "min_margin": float((rhs - lhs)[mask].min()),
        "bprime_relation_residual": rel,
        "bprime_scale": float(np.abs(predicted[mask]).max()),
        "nodes": int(mask.sum()),
    }


def _vals(x):
    return x.values if isinstance(x, Field) else np.asarray(x)


def lipschitz_estimate(w: Field, derivatives: tuple | None = None) -> float:
    """``sup (|w_z| + |w_zbar|)`` over the nodes; derivatives computed if absent."""
    if derivatives is None:
        derivatives = gradient(w)
    w_z, w_zb = derivatives
    return float(np.max(np.abs(_vals(w_z)) + np.abs(_vals(w_zb))))


# ---------------------------------------------------------------------------
# absolute continuity of boundary traces

def _increments(boundary, m: int) -> np.ndarray:
    if isinstance(boundary, LineFn):
        edges = np.linspace(-1.0, 1.0, 2**m + 1)
        inc = np.diff(boundary(edges))
    elif isinstance(boundary, CircleFn):
        phase = np.unwrap(np.angle(boundary.samples))
        phase = np.append(phase, phase[0] + 2 * np.pi * np.sign(phase[-1] - phase[0] or 1))
        nodes = np.linspace(0, 2 * np.pi, boundary.n + 1)
        edges = np.linspace(0, 2 * np.pi, 2**m + 1)
        inc = np.diff(np.interp(edges, nodes, phase))
        if inc.sum() < 0:
            inc = -inc
    else:
        raise TypeError("expected LineFn or CircleFn")
    if np.any(inc <= 0):
        raise DomainError("not a homeomorphism trace")
    return inc


def absolute_continuity_detector(boundary, resolutions=(10, 12, 14, 16), level: float = 0.9,
                                 floor: float = 0.05, factor: float = 1.5,
                                 stability: float = 0.05) -> dict:
    """Classify a boundary trace by how its increments concentrate.

    For each ``m`` in ``resolutions`` the trace is cut into ``2^m`` equal
    cells.  Two statistics are recorded: the smallest fraction of cells
    carrying ``level`` of the total increment, and the peak cell density
    relative to the mean.  Over the three finest resolutions the verdict is

    * ``"singular-consistent"`` when the fraction falls monotonically by at
      least ``factor`` or the peak density rises monotonically by at least
      ``factor``;
    * ``"AC-consistent"`` when the fraction stays above ``floor`` and varies by
      at most ``stability`` (relative) while the peak grows by less than
      ``factor``;
    * ``"inconclusive"`` otherwise.

    The peak statistic is needed for traces ``x + g0``: the linear part alone
    keeps the fraction near ``0.9 * (1 - share of g0)`` whatever ``g0`` does.
    """
    res = sorted(int(m) for m in resolutions)
    if len(res) < 3:
        raise DomainError("need at least three resolutions")
    fractions, peaks = [], []
    for m in res:
        inc = _increments(boundary, m)
        fractions.append(concentration_fraction(inc, level))
        peaks.append(float(inc.max() / inc.mean()))
    f3 = np.array(fractions[-3:])
    p3 = np.array(peaks[-3:])
    frac_drop = bool(np.all(np.diff(f3) < 0) and f3[0] / f3[-1] >= factor)
    peak_rise = bool(np.all(np.diff(p3) > 0) and p3[-1] / p3[0] >= factor)
    stable = bool(f3.min() >= floor and (f3.max() - f3.min()) <= stability * f3.max())
    if frac_drop or peak_rise:
        verdict = "singular-consistent"
    elif stable and p3[-1] / p3[0] < factor:
        verdict = "AC-consistent"
    else:
        verdict = "inconclusive"
    return {
        "resolutions": res,
        "fractions": fractions,
        "peak_densities": peaks,
        "fraction_ratio": float(f3[0] / f3[-1]),
        "peak_growth": float(p3[-1] / p3[0]),
        "verdict": verdict,
    }
