"""Closed-form maps: the radial counterexample and families near the identity.

The counterexample is ``w0(z) = z * L(z)^a`` with ``L(z) = log(e / |z|^2)``,
``0 < a < 1/2``.  It is a quasiconformal self-map of the unit disc whose
Laplacian lies in L^2 while the map fails to be Lipschitz at the origin.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericalError
from .grid import DiscGrid, Field, lp_norm
from .greenpoisson import CircleFn, solve_poisson


@dataclass(frozen=True)
class W0Params:
    a: float

    def __post_init__(self):
        if not 0 < self.a < 0.5:
            raise DomainError("w0 exponent a must lie in (0, 1/2)")


def _log_factor(z):
    return 1.0 - np.log(np.abs(z) ** 2)


def _check_nonzero(z):
    if np.any(np.asarray(z) == 0):
        raise DomainError("singular point")


def w0_eval(z, a: float):
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, complex)
    nz = z != 0
    out[nz] = z[nz] * _log_factor(z[nz]) ** a
    return out if out.ndim else complex(out)


def w0_dz(z, a: float):
    _check_nonzero(z)
    L = _log_factor(z)
    return L ** (a - 1) * (L - a)


def w0_dzbar(z, a: float):
    _check_nonzero(z)
    z = np.asarray(z, dtype=complex)
    return -a * (z / np.conj(z)) * _log_factor(z) ** (a - 1)


def w0_laplacian(z, a: float):
    """Signed Laplacian ``4 d/dzbar (w0)_z``."""
    _check_nonzero(z)
    z = np.asarray(z, dtype=complex)
    L = _log_factor(z)
    return -(4 * a / np.conj(z)) * L ** (a - 2) * (L + 1 - a)


def w0_dilatation_check(a: float, grid: DiscGrid) -> dict:
    """Sup of ``|mu_{w0}|`` over the grid nodes against ``a / (1 - a)``."""
    z = grid.z
    mu = np.abs(w0_dzbar(z, a) / w0_dz(z, a))
    bound = a / (1 - a)
    sup = float(mu.max())
    return {"a": a, "sup_mu": sup, "bound": bound, "margin": bound - sup, "holds": sup <= bound + 1e-9}


def w0_non_lipschitz_witness(a: float, radii) -> dict:
    """Ratios ``|w0(r)| / r = L(r)^a`` along decreasing radii."""
    radii = np.asarray(radii, float)
    ratios = (1.0 - 2.0 * np.log(radii)) ** a
    increasing = bool(np.all(np.diff(ratios) > 0))
    return {
        "radii": radii,
        "ratios": ratios,
        "increasing": increasing,
        "diverging": bool(ratios[-1] > 2 * ratios[0]),
    }


def _radial_lp_power(a: float, p: float, eps: float) -> float:
    """``int_{eps<|z|<1} |Delta w0|^p dA`` in the variable ``s = -log r``.

    With ``L = 1 + 2s`` the integrand is
    ``2 pi (4a)^p L^{(a-2)p} (L + 1 - a)^p e^{(p-2)s}``.
    """
    s_max = -np.log(eps)

    def f(s):
        L = 1 + 2 * s
        return 2 * np.pi * (4 * a) ** p * L ** ((a - 2) * p) * (L + 1 - a) ** p * np.exp((p - 2) * s)

    # split the range so quad sees the exponential growth in pieces
    edges = np.unique(np.concatenate([[0.0], np.geomspace(1e-3, s_max, 24)]))
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate.quad(f, lo, hi, limit=200)[0]
    return total


def w0_laplacian_integrability(a: float, p_list=(2.0, 2.5), refinement_levels=8) -> dict:
    """L^p norms of ``Delta w0`` over ``eps < |z| < 1`` as ``eps`` shrinks.

    The cutoffs are ``eps = 10^{-2k}``, ``k = 1..refinement_levels``.
    """
    cutoffs = 10.0 ** (-2.0 * np.arange(1, refinement_levels + 1))
    report = {"a": a, "cutoffs": cutoffs, "norms": {}, "verdict": {}}
    for p in p_list:
        norms = np.array([_radial_lp_power(a, p, e) ** (1 / p) for e in cutoffs])
        diffs = np.abs(np.diff(norms))
        rel_last = float(diffs[-1] / norms[-1])
        report["norms"][p] = norms
        report["verdict"][p] = {
            "last_relative_change": rel_last,
            "differences_decreasing": bool(np.all(np.diff(diffs) < 0)),
            "growth": float(norms[-1] / norms[0]),
        }
    return report


def w0_l2_limit(a: float) -> float:
    """Exact ``||Delta w0||_{L^2(D)}`` by one-dimensional quadrature to the origin."""

    def f(s):
        L = 1 + 2 * s
        return 2 * np.pi * 16 * a * a * L ** (2 * a - 4) * (L + 1 - a) ** 2

    return float(np.sqrt(integrate.quad(f, 0, np.inf, limit=400)[0]))


@dataclass(frozen=True)
class TestFamily:
    """Three scales driving a family of maps towards the identity.

    ``dilatation`` is the shear coefficient, ``laplacian`` the L^p size of the
    source term and ``boundary`` the amplitude of the boundary perturbation.
    """

    __test__ = False

    dilatation: float = 0.0
    laplacian: float = 0.0
    boundary: float = 0.0
    p: float = 3.0

    @classmethod
    def dyadic(cls, n: int, p: float = 3.0) -> "TestFamily":
        s = 2.0**-n
        return cls(s, s, s, p)


def _family_source(z):
    """Fixed smooth complex source, normalized to unit L^3 norm on the disc."""
    return np.exp(-4 * np.abs(z - 0.2) ** 2) * (1 + 0.5j * z)


def _family_bump(t):
    return 0.5 * (np.sin(t) + 0.5 * np.cos(2 * t) ** 3)


@dataclass(frozen=True, eq=False)
class FamilyMember:
    w: Field
    w_z: Field
    w_zbar: Field
    laplacian: Field
    boundary: CircleFn
    K: float
    laplacian_norm: float


def make_test_family(params: TestFamily, grid: DiscGrid) -> FamilyMember:
    """Shear of a perturbed harmonic extension plus a Green potential.

    ``w = S(v)`` with ``S(x) = x + k conj(x)`` and
    ``v = solve_poisson(e^{it} + eps * bump, g * source)``.
    Derivatives are carried exactly through the construction.
    """
    k, g, eps = params.dilatation, params.laplacian, params.boundary
    z = grid.z
    b = CircleFn.from_function(lambda t: np.exp(1j * t) + eps * _family_bump(t), grid.n_theta)
    src = _family_source(z)
    src = src / lp_norm(Field(grid, src), params.p)
    source = Field(grid, g * src)
    v, v_z, v_zb = solve_poisson(b, source, with_gradient=True)
    w = v.values + k * np.conj(v.values)
    w_z = v_z.values + k * np.conj(v_zb.values)
    w_zb = v_zb.values + k * np.conj(v_z.values)
    jac = np.abs(w_z) ** 2 - np.abs(w_zb) ** 2
    if np.any(jac <= 0):
        raise NumericalError("family parameters too large")
    lap = source.values + k * np.conj(source.values)
    mu = np.abs(w_zb / w_z)
    kmax = float(mu.max())
    image = CircleFn(b.samples + k * np.conj(b.samples))
    return FamilyMember(
        Field(grid, w), Field(grid, w_z), Field(grid, w_zb), Field(grid, lap), image,
        (1 + kmax) / (1 - kmax), lp_norm(Field(grid, lap), params.p),
    )
