"""Gaussian-mollifier extension of line homeomorphisms to the upper half-plane.

A boundary map is stored as ``g(x) = x + g0(x)`` with ``g0`` increasing-ish,
sampled on a uniform grid of ``[-1, 1]`` and constant outside.  All
convolutions are written against the measure ``mu = g0'``:

``(psi_t * g)(x)  = x + c_L + int Phi((x - s)/t) dmu(s)``
``(psi'_t * g)(x) = t + int psi((x - s)/t) dmu(s)``

where ``Phi`` is the Gaussian distribution function.  The extension is
``u(x + it) = (psi_t * g)(x) + i (psi'_t * g)(x)``, which sends the identity to
the identity.  Derivatives of ``u`` use closed-form Gaussian kernels in
``v = (x - s)/t``; on each sample cell the density of ``mu`` is constant, so
kernel integrals over a cell reduce to differences of antiderivatives.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.signal import fftconvolve
from scipy.special import ndtr

from .errors import DomainError

logger = logging.getLogger(__name__)

SQRT2PI = np.sqrt(2 * np.pi)
TAIL = 12.0


def _psi(v):
    return np.exp(-0.5 * v * v) / SQRT2PI


def gaussian_kernels(t: float):
    """``psi_t(x) = psi(x/t)/t`` and ``psi'_t(x) = psi'(x/t)/t``."""
    if t <= 0:
        raise DomainError("t must be positive")

    def psi_t(x):
        return _psi(np.asarray(x, float) / t) / t

    def dpsi_t(x):
        v = np.asarray(x, float) / t
        return -v * _psi(v) / t

    return psi_t, dpsi_t


@dataclass(frozen=True, eq=False)
class LineFn:
    """``g(x) = x + g0(x)`` with ``g0`` sampled at ``-1 + 2m/M``, ``m = 0..M``."""

    g0: np.ndarray = field(repr=False)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.g0, float)
        if vals.ndim != 1 or vals.size < 3:
            raise ValueError("g0 needs at least three samples")
        if not np.all(np.isfinite(vals)):
            raise ValueError("non-finite field")
        object.__setattr__(self, "g0", vals)
        if np.any(np.diff(vals) <= -self.h):
            raise DomainError("g = x + g0 is not strictly increasing")

    @classmethod
    def from_function(cls, func, cells: int = 2**16, **meta) -> "LineFn":
        nodes = np.linspace(-1.0, 1.0, cells + 1)
        return cls(func(nodes), dict(meta))

    @classmethod
    def identity(cls, cells: int = 2**10) -> "LineFn":
        return cls(np.zeros(cells + 1), {"name": "identity"})

    @property
    def cells(self) -> int:
        return self.g0.size - 1

    @property
    def h(self) -> float:
        return 2.0 / (self.g0.size - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.g0.size)

    @property
    def left(self) -> float:
        return float(self.g0[0])

    @property
    def right(self) -> float:
        return float(self.g0[-1])

    @property
    def masses(self) -> np.ndarray:
        """Increments of ``g0`` over the sample cells (the measure ``mu``)."""
        return np.diff(self.g0)

    def g0_at(self, x):
        return np.interp(x, self.nodes, self.g0)

    def __call__(self, x):
        x = np.asarray(x, float)
        return x + self.g0_at(x)

    def binned(self, factor: int) -> tuple[np.ndarray, float]:
        """Cell masses aggregated ``factor`` at a time, and the new cell width."""
        m = self.masses
        if factor <= 1:
            return m, self.h
        n = m.size // factor
        return m[: n * factor].reshape(n, factor).sum(axis=1), self.h * factor


# ---------------------------------------------------------------------------
# kernel integrals against the measure

def _edge_sum(g: LineFn, x: np.ndarray, t: float, antiderivative) -> np.ndarray:
    """``sum_cells rho_c t [A((x - a_c)/t) - A((x - b_c)/t)]`` for each ``x``.

    Rearranged over edges: ``t sum_e A((x - e)/t) (rho_e - rho_{e-1})`` with
    zero density outside ``[-1, 1]``.  Only edges within the Gaussian window
    contribute; far edges on one side enter through ``A(+-inf)``.
    """
    rho = g.masses / g.h
    jumps = np.diff(np.concatenate([[0.0], rho, [0.0]]))
    edges = g.nodes
    x = np.atleast_1d(np.asarray(x, float))
    out = np.empty(x.shape)
    a_inf = antiderivative(np.array([np.inf]))[0]
    a_minf = antiderivative(np.array([-np.inf]))[0]
    # edges left of the window have v -> +inf, right of the window v -> -inf
    cum = np.concatenate([[0.0], np.cumsum(jumps)])
    width = TAIL * t
    for i, xi in enumerate(x):
        lo = np.searchsorted(edges, xi - width)
        hi = np.searchsorted(edges, xi + width, side="right")
        v = (xi - edges[lo:hi]) / t
        s = np.dot(antiderivative(v), jumps[lo:hi])
        s += a_inf * cum[lo] + a_minf * (cum[-1] - cum[hi])
        out[i] = t * s
    return out


# antiderivatives (in v) of the kernels used below
def _A_Phi(v):
    with np.errstate(invalid="ignore"):
        out = v * ndtr(v) + _psi(v)
    return np.where(np.isposinf(v), np.inf, np.where(np.isneginf(v), 0.0, out))


def _A_psi(v):
    return ndtr(v)


def _A_vpsi(v):
    return -_psi(v)


def _A_v2psi(v):
    with np.errstate(invalid="ignore"):
        out = ndtr(v) - v * _psi(v)
    return np.where(np.isinf(v), ndtr(v), out)


def _A_lap_re(v):
    with np.errstate(invalid="ignore"):
        out = (1 + v * v) * _psi(v)
    return np.where(np.isinf(v), 0.0, out)


def _A_lap_im(v):
    with np.errstate(invalid="ignore"):
        out = -(v**3 + v) * _psi(v)
    return np.where(np.isinf(v), 0.0, out)


def _check_t(t):
    if t <= 0:
        raise DomainError("t must be positive")


def fkp_extend(g: LineFn, x, t: float):
    """``u(x + it) = (psi_t * g)(x) + i (psi'_t * g)(x)``."""
    _check_t(t)
    x = np.asarray(x, float)
    xs = np.atleast_1d(x)
    # Phi-kernel: the +inf end would diverge; integrate int Phi dmu directly as
    # g0 mass to the left of the window plus the windowed part.
    re = xs + g.left + _phi_integral(g, xs, t)
    im = t + _edge_sum(g, xs, t, _A_psi)
    out = re + 1j * im
    return out if x.ndim else complex(out[0])


def _phi_integral(g: LineFn, x: np.ndarray, t: float) -> np.ndarray:
    """``int Phi((x - s)/t) dmu(s)`` with exact cellwise integration."""
    rho = g.masses / g.h
    edges = g.nodes
    out = np.empty(x.shape)
    width = TAIL * t
    g0 = g.g0
    for i, xi in enumerate(x):
        lo = np.searchsorted(edges, xi - width)
        hi = np.searchsorted(edges, xi + width, side="right")
        # cells fully left of the window have Phi = 1: total mass g0(e_lo) - g0(-1)
        total = g0[max(lo - 1, 0)] - g0[0] if lo > 0 else 0.0
        c_lo = max(lo - 1, 0)
        c_hi = min(hi, rho.size)
        a = edges[c_lo:c_hi]
        b = edges[c_lo + 1:c_hi + 1]
        va = (xi - a) / t
        vb = (xi - b) / t
        total += t * np.dot(rho[c_lo:c_hi], _A_Phi(va) - _A_Phi(vb))
        out[i] = total
    return out


def fkp_derivatives(g: LineFn, x, t: float) -> dict:
    """``u_x``, ``u_t`` and ``Delta u`` at ``x + it``."""
    _check_t(t)
    xs = np.atleast_1d(np.asarray(x, float))
    a1 = _edge_sum(g, xs, t, _A_psi) / t
    a2 = _edge_sum(g, xs, t, _A_vpsi) / t
    a3 = _edge_sum(g, xs, t, _A_v2psi) / t
    u_x = 1 + a1 - 1j * a2
    u_t = -a2 + 1j * (1 + a3)
    lap = (_edge_sum(g, xs, t, _A_lap_re) + 1j * _edge_sum(g, xs, t, _A_lap_im)) / t**2
    return {"u_x": u_x, "u_t": u_t, "laplacian": lap}


def fkp_laplacian(g: LineFn, x, t: float):
    """``Delta u(x + it)`` from second derivatives of the Gaussian kernels."""
    _check_t(t)
    xs = np.atleast_1d(np.asarray(x, float))
    lap = (_edge_sum(g, xs, t, _A_lap_re) + 1j * _edge_sum(g, xs, t, _A_lap_im)) / t**2
    return lap if np.ndim(x) else complex(lap[0])


def fkp_gradient(g: LineFn, x, t: float):
    """``max(|u_x|, |u_t|)`` at ``x + it``."""
    d = fkp_derivatives(g, x, t)
    out = np.maximum(np.abs(d["u_x"]), np.abs(d["u_t"]))
    return out if np.ndim(x) else float(out[0])


# kernels in v used by the FFT profile route (mass at v contributes K(v)/t^p)
def _k_psi(v):
    return _psi(v)


def _k_vpsi(v):
    return v * _psi(v)


def _k_v2psi(v):
    return v * v * _psi(v)


def _k_lap_re(v):
    return v * _psi(v) * (1 - v * v)


def _k_lap_im(v):
    return _psi(v) * (v**4 - 2 * v * v - 1)


def fkp_profiles(g: LineFn, ts, points_per_scale: int = 64) -> dict:
    """Scale profiles ``t sup_x |Delta u|`` and ``sup_x |grad u| / log(e + 1/t)``.

    For each ``t`` the measure is binned to cells of width about
    ``t / points_per_scale`` and convolved with sampled kernels.  The sup runs
    over bin centres extended by the Gaussian window on both sides, together
    with the far field where ``|grad u| = 1``.
    """
    ts = np.asarray(ts, float)
    lap_prof, grad_prof, dil = [], [], []
    for t in ts:
        _check_t(t)
        factor = max(1, 2 ** int(np.floor(np.log2(t / (points_per_scale * g.h)))))
        m, hb = g.binned(factor)
        n = int(np.ceil(TAIL * t / hb))
        v = np.arange(-n, n + 1) * hb / t

        def conv(kernel):
            return fftconvolve(m, kernel(v), mode="full")

        lap = (conv(_k_lap_re) + 1j * conv(_k_lap_im)) / t**2
        a1, a2, a3 = conv(_k_psi) / t, conv(_k_vpsi) / t, conv(_k_v2psi) / t
        u_x = 1 + a1 - 1j * a2
        u_t = -a2 + 1j * (1 + a3)
        grad = np.maximum(np.abs(u_x), np.abs(u_t))
        u_z = 0.5 * (u_x - 1j * u_t)
        u_zb = 0.5 * (u_x + 1j * u_t)
        lap_prof.append(t * float(np.abs(lap).max()))
        grad_prof.append(max(1.0, float(grad.max())) / np.log(np.e + 1 / t))
        dil.append(float((np.abs(u_zb) / np.abs(u_z)).max()))
    lap_prof = np.array(lap_prof)
    grad_prof = np.array(grad_prof)
    return {
        "ts": ts,
        "laplacian_profile": lap_prof,
        "gradient_profile": grad_prof,
        "laplacian_spread": float(lap_prof.max() / lap_prof.min()),
        "gradient_spread": float(grad_prof.max() / grad_prof.min()),
        "sup_dilatation": np.array(dil),
    }


# ---------------------------------------------------------------------------
# Zygmund machinery

def zygmund_seminorm(g: LineFn, xs, ts) -> float:
    """``max |g(x+t) + g(x-t) - 2 g(x)| / t`` over the sample points and scales."""
    xs = np.asarray(xs, float)
    best = 0.0
    for t in np.atleast_1d(ts):
        d2 = g(xs + t) + g(xs - t) - 2 * g(xs)
        best = max(best, float(np.abs(d2).max() / t))
    return best


def zygmund_profile(g: LineFn, xs, ts) -> np.ndarray:
    return np.array([zygmund_seminorm(g, xs, [t]) for t in ts])


@dataclass(frozen=True)
class RieszProductParams:
    """Truncated lacunary product ``prod_{j=1..N} (1 + a_j cos(b^j pi x))``.

    With ``cap=None`` every coefficient equals ``a``.  A finite ``cap`` lets
    the coefficient shrink where the partial density is already large:
    ``a_j(x) = a cap / (cap + f_{j-1}(x))``, so that each new factor adds at
    most about ``a * cap`` to the density.
    """

    depth: int
    a: float = 0.5
    base: int = 3
    cap: float | None = None

    def __post_init__(self):
        if self.depth < 0:
            raise DomainError("depth must be non-negative")
        if not 0 < self.a < 1:
            raise DomainError("Riesz coefficient a must lie in (0, 1)")
        if self.base < 3:
            raise DomainError("frequency base must be at least 3")
        if self.cap is not None and self.cap <= 0:
            raise DomainError("cap must be positive")


def _riesz_coefficients(a: float, base: int, depth: int):
    """Frequencies ``k`` and coefficients of the expanded product in ``e^{i pi k x}``."""
    ks = np.zeros(1, dtype=np.int64)
    cs = np.ones(1)
    for j in range(1, depth + 1):
        step = base**j
        ks = np.concatenate([ks - step, ks, ks + step])
        cs = np.concatenate([cs * a / 2, cs, cs * a / 2])
    return ks, cs


def _exact_primitive(a: float, base: int, depth: int, cells: int) -> np.ndarray:
    """Primitive of the product from ``-1`` at ``x_m = -1 + 2m/cells``, unit mass."""
    ks, cs = _riesz_coefficients(a, base, depth)
    nz = ks != 0
    ks, cs = ks[nz], cs[nz]
    sign = np.where(ks % 2 == 0, 1.0, -1.0)
    amp = cs * sign / (1j * np.pi * ks)
    folded = np.zeros(cells, complex)
    np.add.at(folded, np.mod(ks, cells), amp)
    osc = np.fft.ifft(folded) * cells - amp.sum()
    m = np.arange(cells + 1)
    osc = np.append(osc, osc[0])
    prim = 2.0 * m / cells + osc.real
    return prim / prim[-1]


def _sampled_primitive(params: RieszProductParams, cells: int) -> np.ndarray:
    """Primitive by Simpson's rule on cells (used for density-capped products)."""
    x = np.linspace(-1.0, 1.0, 2 * cells + 1)
    f = np.ones_like(x)
    for j in range(1, params.depth + 1):
        coef = params.a if params.cap is None else params.a * params.cap / (params.cap + f)
        f = f * (1 + coef * np.cos(params.base**j * np.pi * x))
    h = 2.0 / cells
    cell = h / 6 * (f[0:-1:2] + 4 * f[1::2] + f[2::2])
    prim = np.concatenate([[0.0], np.cumsum(cell)])
    return prim / prim[-1]


def riesz_product_zygmund(params: RieszProductParams, cells: int = 2**21, max_exact_depth: int = 14) -> LineFn:
    """Normalized primitive of a truncated Riesz product as ``g0`` on ``[-1, 1]``.

    For constant coefficients the primitive is exact at the sample nodes (FFT
    folding of the expanded product).  Factors beyond ``max_exact_depth`` have
    periods below the sample spacing and are dropped; density-capped products
    are integrated numerically and need ``base^depth`` resolved by the samples.
    """
    if params.depth == 0:
        g0 = np.linspace(0.0, 1.0, cells + 1)
        return LineFn(g0, {"name": "riesz", "depth": 0, "effective_depth": 0})
    if params.cap is None:
        depth = min(params.depth, max_exact_depth)
        g0 = _exact_primitive(params.a, params.base, depth, cells)
    else:
        # keep at least ~8 samples (16 Simpson points) per period
        depth = params.depth
        while depth > 0 and 2 * cells / params.base**depth < 8:
            depth -= 1
        g0 = _sampled_primitive(RieszProductParams(depth, params.a, params.base, params.cap), cells)
    if depth < params.depth:
        logger.info("Riesz product truncated from %d to %d resolved factors", params.depth, depth)
    meta = {
        "name": "riesz", "a": params.a, "base": params.base, "depth": params.depth,
        "effective_depth": depth, "cap": params.cap,
    }
    return LineFn(g0, meta)


def increment_masses(g: LineFn, m: int, include_linear: bool = True) -> np.ndarray:
    """Increments of ``g`` (or of ``g0``) over ``2^m`` equal cells of ``[-1, 1]``."""
    edges = np.linspace(-1.0, 1.0, 2**m + 1)
    vals = g(edges) if include_linear else g.g0_at(edges)
    return np.diff(vals)


def concentration_fraction(masses: np.ndarray, level: float = 0.9) -> float:
    """Smallest fraction of cells carrying at least ``level`` of the total mass."""
    masses = np.asarray(masses, float)
    total = masses.sum()
    if total <= 0:
        raise DomainError("total increment must be positive")
    srt = np.sort(masses)[::-1]
    # tolerance absorbs rounding when the target is hit exactly
    count = int(np.searchsorted(np.cumsum(srt), level * total * (1 - 1e-12))) + 1
    return count / masses.size


# ---------------------------------------------------------------------------
# mollifiers and dyadic pieces

class Mollifier:
    """Even probability density with support in ``[-1, 1]`` and its derivatives.

    The density, derivative and distribution function are tabulated once on a
    fine grid and interpolated.
    """

    def __init__(self, kind: str = "bump", samples: int = 200001):
        self.kind = kind
        u = np.linspace(-1.0, 1.0, samples)
        if kind == "bump":
            inner = np.abs(u) < 1
            f = np.zeros_like(u)
            f[inner] = np.exp(-1.0 / (1.0 - u[inner] ** 2))
        else:
            raise DomainError(f"unknown mollifier {kind!r}")
        du = u[1] - u[0]
        mass = integrate.trapezoid(f, u)
        self.u = u
        self.pdf_table = f / mass
        self.d1_table = np.gradient(self.pdf_table, du)
        self.cdf_table = np.concatenate([[0.0], np.cumsum((self.pdf_table[1:] + self.pdf_table[:-1]) / 2 * du)])
        self.cdf_table /= self.cdf_table[-1]
        # exact first derivative for the bump: f' = f * (-2u / (1 - u^2)^2)
        d1 = np.zeros_like(u)
        d1[inner] = self.pdf_table[inner] * (-2 * u[inner] / (1 - u[inner] ** 2) ** 2)
        self.d1_table = d1

    def pdf(self, u):
        return np.interp(u, self.u, self.pdf_table, left=0.0, right=0.0)

    def d1(self, u):
        return np.interp(u, self.u, self.d1_table, left=0.0, right=0.0)

    def cdf(self, u):
        return np.interp(u, self.u, self.cdf_table, left=0.0, right=1.0)

    @property
    def peak(self) -> float:
        return float(self.pdf_table.max())


def _mollified(g: LineFn, phi: Mollifier, s: float, xs: np.ndarray, which: str, points: int = 64):
    """``phi_s * g0`` (``which='value'``) or its first/second derivative at ``xs``.

    Uses the measure form ``phi_s * g0 = c_L + int Phi((x - y)/s) dmu(y)`` with
    masses binned to width about ``s / points``.
    """
    factor = max(1, 2 ** int(np.floor(np.log2(max(s / (points * g.h), 1.0)))))
    m, hb = g.binned(factor)
    centres = -1.0 + (np.arange(m.size) + 0.5) * hb
    out = np.empty(xs.shape)
    cum = np.concatenate([[0.0], np.cumsum(m)])
    for i, x in enumerate(xs):
        lo = np.searchsorted(centres, x - s)
        hi = np.searchsorted(centres, x + s, side="right")
        u = (x - centres[lo:hi]) / s
        if which == "value":
            out[i] = g.left + cum[lo] + np.dot(phi.cdf(u), m[lo:hi])
        elif which == "d1":
            out[i] = np.dot(phi.pdf(u), m[lo:hi]) / s
        else:
            out[i] = np.dot(phi.d1(u), m[lo:hi]) / s**2
    return out


def _mollified_grid(g: LineFn, phi: Mollifier, s: float, lo: float, hi: float, which: str, points: int = 64):
    """Same as :func:`_mollified` on the full bin-centre grid covering ``[lo, hi]``."""
    factor = max(1, 2 ** int(np.floor(np.log2(max(s / (points * g.h), 1.0)))))
    m, hb = g.binned(factor)
    pad_l = int(np.ceil((-1.0 - lo) / hb)) + 1
    pad_r = int(np.ceil((hi - 1.0) / hb)) + 1
    mm = np.concatenate([np.zeros(max(pad_l, 0)), m, np.zeros(max(pad_r, 0))])
    x0 = -1.0 - max(pad_l, 0) * hb
    xs = x0 + (np.arange(mm.size) + 0.5) * hb
    n = int(np.ceil(s / hb))
    u = np.arange(-n, n + 1) * hb / s
    if which == "value":
        # cumulative form: value = c_L + sum_y Phi((x - y)/s) m_y
        kern = phi.cdf(u)
        conv = fftconvolve(mm, kern, mode="same")
        # Phi = 1 for y far left of x: add masses left of the window
        cum = np.concatenate([[0.0], np.cumsum(mm)])
        idx = np.clip(np.arange(mm.size) - n, 0, mm.size)
        vals = g.left + conv + cum[idx]
    elif which == "d1":
        vals = fftconvolve(mm, phi.pdf(u), mode="same") / s
    else:
        vals = fftconvolve(mm, phi.d1(u), mode="same") / s**2
    keep = (xs >= lo) & (xs <= hi)
    return xs[keep], vals[keep]


@dataclass(frozen=True, eq=False)
class DyadicDecomposition:
    J: int
    norms: np.ndarray  # rows j: (sup g_j, sup g_j', sup g_j'')
    reconstruction_error: float
    eval_points: np.ndarray = field(repr=False)
    pieces_at_points: np.ndarray = field(repr=False)

    def fitted_exponents(self, j_min: int = 1) -> tuple[float, float, float]:
        """Least-squares slopes of ``log2`` norms against ``j`` for ``j >= j_min``."""
        j = np.arange(self.J + 1)
        sel = j >= j_min
        out = []
        for col in range(3):
            y = np.log2(np.maximum(self.norms[sel, col], 1e-300))
            out.append(float(np.polyfit(j[sel], y, 1)[0]))
        return tuple(out)

    def fitted_constant(self) -> float:
        j = np.arange(self.J + 1)
        c0 = self.norms[:, 0] * 2.0**j
        c1 = self.norms[:, 1]
        c2 = self.norms[:, 2] * 2.0**-j
        return float(max(c0[1:].max(initial=0), c1.max(), c2.max()))


def dyadic_decompose(g: LineFn, J: int, phi: Mollifier | None = None, n_eval: int = 4097,
                     interval=(-2.0, 2.0)) -> DyadicDecomposition:
    """Littlewood–Paley-type pieces ``g_j = (phi_{2^-j} - phi_{2^-j+1}) * g``.

    ``g_0 = phi_1 * g``.  Norms are sup norms on ``interval`` over the bin
    grid of each scale; the reconstruction error compares ``sum_j g_j`` with
    ``g`` at ``n_eval`` equispaced points.
    """
    phi = phi or Mollifier()
    lo, hi = interval
    xs = np.linspace(lo, hi, n_eval)
    pieces = np.empty((J + 1, xs.size))
    norms = np.empty((J + 1, 3))
    prev = {}
    for j in range(J + 1):
        s = 2.0**-j
        cur = {w: _mollified_grid(g, phi, s, lo, hi, w) for w in ("value", "d1", "d2")}
        at_pts = _mollified(g, phi, s, xs, "value")
        if j == 0:
            pieces[0] = xs + at_pts
            x_grid = cur["value"][0]
            norms[0] = (
                np.abs(x_grid + cur["value"][1]).max(),
                np.abs(1 + cur["d1"][1]).max(),
                np.abs(cur["d2"][1]).max(),
            )
        else:
            pieces[j] = at_pts - prev["at"]
            row = []
            for w in ("value", "d1", "d2"):
                xf, vf = cur[w]
                xc, vc = prev[w]
                # coarse scale is smooth on the fine grid: interpolate it there
                row.append(np.abs(vf - np.interp(xf, xc, vc)).max())
            norms[j] = row
        prev = dict(cur)
        prev["at"] = at_pts
    recon = pieces.sum(axis=0)
    err = float(np.abs(recon - g(xs)).max())
    return DyadicDecomposition(J, norms, err, xs, pieces)


def zygmund_convolution_estimate_check(g: LineFn, phi: Mollifier | None, ts) -> dict:
    """Profile ``t * sup |(phi_t * g)''|`` over the scales ``ts``."""
    phi = phi or Mollifier()
    prof = []
    for t in ts:
        _, d2 = _mollified_grid(g, phi, t, -1.0 - t, 1.0 + t, "d2")
        prof.append(t * float(np.abs(d2).max()))
    prof = np.array(prof)
    spread = float(prof.max() / prof.min()) if prof.min() > 0 else (0.0 if prof.max() == 0 else np.inf)
    return {"ts": np.asarray(ts, float), "profile": prof, "max": float(prof.max()), "spread": spread}
