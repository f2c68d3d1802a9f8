"""Laplacians of compositions, inverse maps, and exponent bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.ndimage import map_coordinates

from .errors import DomainError, NumericalError
from .grid import Field, SquareGrid


@dataclass(frozen=True, eq=False)
class DiffeoData:
    """A map with its first and second Wirtinger derivatives at sample points."""

    psi: np.ndarray
    psi_z: np.ndarray
    psi_zbar: np.ndarray
    psi_zz: np.ndarray
    psi_zzbar: np.ndarray
    psi_zbarzbar: np.ndarray

    @property
    def jacobian(self) -> np.ndarray:
        return np.abs(self.psi_z) ** 2 - np.abs(self.psi_zbar) ** 2

    @property
    def laplacian(self) -> np.ndarray:
        return 4 * self.psi_zzbar

    @classmethod
    def from_callables(cls, funcs: dict, z: np.ndarray) -> "DiffeoData":
        """Evaluate a dict of callables keyed like the field names (missing → 0)."""
        z = np.asarray(z, complex)
        vals = {}
        for key in ("psi", "psi_z", "psi_zbar", "psi_zz", "psi_zzbar", "psi_zbarzbar"):
            f = funcs.get(key)
            vals[key] = np.broadcast_to(f(z) if f is not None else 0j, z.shape).astype(complex)
        return cls(**vals)


class SampledFunction:
    """Bicubic interpolation of square-grid samples; points outside the box are invalid."""

    def __init__(self, values: np.ndarray, grid: SquareGrid):
        self.values = np.asarray(values, complex)
        self.grid = grid

    def _coords(self, w):
        col = (w.real + self.grid.half_width) / self.grid.spacing - 0.5
        row = (w.imag + self.grid.half_width) / self.grid.spacing - 0.5
        return row, col

    def valid(self, w) -> np.ndarray:
        row, col = self._coords(np.asarray(w))
        hi = self.grid.n - 1
        return (row >= 1) & (row <= hi - 1) & (col >= 1) & (col <= hi - 1)

    def __call__(self, w, order: int = 3):
        w = np.asarray(w, complex)
        row, col = self._coords(w)
        coords = np.array([row.ravel(), col.ravel()])
        re = map_coordinates(self.values.real, coords, order=order, mode="nearest")
        im = map_coordinates(self.values.imag, coords, order=order, mode="nearest")
        return (re + 1j * im).reshape(w.shape)


def _as_evaluator(h):
    if isinstance(h, SampledFunction):
        return h, h.valid
    if callable(h):
        return h, None
    raise TypeError("expected a callable or SampledFunction")


def laplacian_of_composition(H: dict, w: dict):
    """``Delta (H o w)`` for real-valued ``H`` from its derivatives.

    Parameters
    ----------
    H : dict
        Evaluators (callables or :class:`SampledFunction`) with keys
        ``lap`` (``Delta H``), ``zeta`` (``H_zeta``) and ``zetazeta``.
    w : dict
        Arrays ``value``, ``z``, ``zbar`` and ``lap`` of the inner map.

    Returns
    -------
    (ndarray, ndarray)
        The composed Laplacian and a boolean mask of valid nodes.
    """
    pts = w["value"]
    valid = np.ones(pts.shape, bool)
    vals = {}
    for key in ("lap", "zeta", "zetazeta"):
        f, check = _as_evaluator(H[key])
        if check is not None:
            valid &= check(pts)
        vals[key] = f(pts)
    wz, wzb, lw = w["z"], w["zbar"], w["lap"]
    out = vals["lap"] * (np.abs(wz) ** 2 + np.abs(wzb) ** 2) + 2 * np.real(
        4 * vals["zetazeta"] * wz * wzb + vals["zeta"] * lw
    )
    return np.where(valid, out, np.nan), valid


def composition_split(phi: dict, w: dict):
    """Three-term split of ``Delta (Phi o w)`` for complex ``Phi``.

    ``phi`` holds evaluators ``lap, zeta, zetabar, zetazeta, zetabarzetabar``.
    Returns ``(S1, S2, S3, valid)``.
    """
    pts = w["value"]
    valid = np.ones(pts.shape, bool)
    ev = {}
    for key in ("lap", "zeta", "zetabar", "zetazeta", "zetabarzetabar"):
        f, check = _as_evaluator(phi[key])
        if check is not None:
            valid &= check(pts)
        ev[key] = f(pts)
    wz, wzb, lw = w["z"], w["zbar"], w["lap"]
    s1 = ev["lap"] * (np.abs(wz) ** 2 + np.abs(wzb) ** 2)
    s2 = 4 * (ev["zetazeta"] * wz * wzb + ev["zetabarzetabar"] * np.conj(wz * wzb))
    s3 = ev["zeta"] * lw + ev["zetabar"] * np.conj(lw)
    nan = np.where(valid, 1.0, np.nan)
    return s1 * nan, s2 * nan, s3 * nan, valid


def inverse_laplacian_field(psi: DiffeoData) -> np.ndarray:
    """Field ``A`` with ``Delta Phi = A o Phi`` for ``Phi`` the inverse of ``Psi``.

    Derived from ``Phi_zeta = conj(Psi_z) / J`` and
    ``Phi_zetabar = -Psi_zbar / J`` by the chain rule.
    """
    J = psi.jacobian
    if np.any(J <= 0):
        raise NumericalError("not a diffeomorphism")
    pz, pzb = psi.psi_z, psi.psi_zbar
    pzz, pzzb, pzbzb = psi.psi_zz, psi.psi_zzbar, psi.psi_zbarzbar
    J_z = pzz * np.conj(pz) + pz * np.conj(pzzb) - pzzb * np.conj(pzb) - pzb * np.conj(pzbzb)
    J_zb = np.conj(J_z)
    bracket = -pzb * (np.conj(pzzb) * J - np.conj(pz) * J_z) + pz * (np.conj(pzz) * J - np.conj(pz) * J_zb)
    return 4 * bracket / J**3


def inverse_laplacian_bound_check(psi: DiffeoData, delta: float = 1e-12) -> dict:
    """Empirical constant in ``|A| <~ k |D^2 Psi| + |Delta Psi|``."""
    A = inverse_laplacian_field(psi)
    mu = np.abs(psi.psi_zbar / psi.psi_z)
    k = float(mu.max())
    d2 = np.abs(psi.psi_zz) + 2 * np.abs(psi.psi_zzbar) + np.abs(psi.psi_zbarzbar)
    ratio = np.abs(A) / (k * d2 + np.abs(psi.laplacian) + delta)
    return {"k": k, "max_abs_A": float(np.abs(A).max()), "max_ratio": float(ratio.max())}


def invert_map(forward, z_targets: np.ndarray, jac=None, iterations: int = 50, tol: float = 1e-14):
    """Newton inversion of a smooth map given as a callable.

    ``jac`` returns ``(Psi_z, Psi_zbar)``; the real 2x2 system is solved in
    Wirtinger form: ``dz = (conj(a) r - b conj(r)) / (|a|^2 - |b|^2)``.
    """
    z = np.array(z_targets, complex)
    for _ in range(iterations):
        r = z_targets - forward(z)
        a, b = jac(z)
        dz = (np.conj(a) * r - b * np.conj(r)) / (np.abs(a) ** 2 - np.abs(b) ** 2)
        z = z + dz
        if np.abs(dz).max() < tol:
            break
    return z


# --- exponent bookkeeping -------------------------------------------------

def excluded_exponents(n_max: int = 64) -> list[Fraction]:
    return [Fraction(2**n, 2 ** (n - 1) - 1) for n in range(3, n_max + 1)]


@dataclass(frozen=True)
class ExponentLedger:
    q0: Fraction
    sequence: tuple
    k0: int

    def as_floats(self) -> list[float]:
        return [float(q) for q in self.sequence]

    def doubling_residuals(self) -> list[float]:
        """``(1 - 2/q_{k+1}) - 2 (1 - 2/q_k)`` along the sequence (exactly zero)."""
        seq = self.sequence
        return [float((1 - 2 / seq[i + 1]) - 2 * (1 - 2 / seq[i])) for i in range(len(seq) - 1)]


def bootstrap_exponents(q0) -> ExponentLedger:
    """Iterate ``q_{k+1} = 2 q_k / (4 - q_k)`` until the exponent exceeds 4."""
    q = Fraction(q0).limit_denominator(10**15) if not isinstance(q0, Fraction) else q0
    if not 2 < q < 4:
        raise DomainError("q0 must lie in (2, 4)")
    for e in excluded_exponents():
        if abs(float(q) - float(e)) <= 1e-12:
            raise DomainError("degenerate exponent")
    seq = [q]
    while seq[-1] <= 4:
        cur = seq[-1]
        if cur == 4:
            raise DomainError("degenerate exponent")
        seq.append(2 * cur / (4 - cur))
        if len(seq) > 200:
            raise NumericalError("exponent recursion did not leave (2, 4]")
    return ExponentLedger(q, tuple(seq), len(seq) - 1)


def lipschitz_bound_formula(K: float, t: float, c_p: float, psi_of_K: float) -> float:
    """``K + (c_p K / 2) psi(K) + (c_p (K + 4) / 2) t``."""
    if K < 1 or t < 0 or c_p <= 0 or psi_of_K < 0:
        raise DomainError("require K >= 1, t >= 0, c_p > 0, psi >= 0")
    return K + 0.5 * c_p * K * psi_of_K + 0.5 * c_p * (K + 4) * t
