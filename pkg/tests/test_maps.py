import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from qclab.errors import DomainError, NumericalError
from qclab.grid import Field, gradient
from qclab.maps import (
    TestFamily,
    W0Params,
    make_test_family,
    w0_dilatation_check,
    w0_dz,
    w0_dzbar,
    w0_eval,
    w0_l2_limit,
    w0_laplacian,
    w0_laplacian_integrability,
    w0_non_lipschitz_witness,
)


def test_w0_values():
    assert w0_eval(0, 0.25) == 0
    z = np.exp(1j * np.linspace(0, 6, 7))
    assert np.allclose(w0_eval(z, 0.3), z, atol=1e-15)
    assert abs(w0_eval(0.1, 0.25)) / 0.1 == pytest.approx((1 + 2 * math.log(10)) ** 0.25, rel=1e-14)
    assert abs(w0_eval(0.1, 0.25)) / 0.1 == pytest.approx(1.5375, abs=2e-3)  # quoted value is rounded


def test_w0_singular_point_and_params():
    for fn in (w0_dz, w0_dzbar, w0_laplacian):
        with pytest.raises(DomainError, match="singular point"):
            fn(np.array([0.5, 0.0]), 0.25)
    for a in (0.0, 0.5, -0.1):
        with pytest.raises(DomainError):
            W0Params(a)


@settings(max_examples=40)
@given(st.floats(0.05, 0.95), st.floats(0, 2 * np.pi), st.floats(0.05, 0.45))
def test_w0_derivatives_match_finite_differences(r, t, a):
    z = r * np.exp(1j * t)
    h = 1e-6 * r
    dx = (w0_eval(z + h, a) - w0_eval(z - h, a)) / (2 * h)
    dy = (w0_eval(z + 1j * h, a) - w0_eval(z - 1j * h, a)) / (2 * h)
    assert abs(w0_dz(z, a) - 0.5 * (dx - 1j * dy)) < 1e-7
    assert abs(w0_dzbar(z, a) - 0.5 * (dx + 1j * dy)) < 1e-7


@settings(max_examples=20)
@given(st.floats(0.1, 0.9), st.floats(0, 2 * np.pi))
def test_w0_laplacian_matches_five_point_stencil(r, t):
    a, z, h = 0.25, r * np.exp(1j * t), 1e-3 * r
    lap = (w0_eval(z + h, a) + w0_eval(z - h, a) + w0_eval(z + 1j * h, a)
           + w0_eval(z - 1j * h, a) - 4 * w0_eval(z, a)) / h**2
    assert abs(w0_laplacian(z, a) - lap) <= 1e-4 * abs(lap)


def test_w0_derivatives_match_grid_gradient(disc):
    w = Field(disc, w0_eval(disc.z, 0.25))
    wz, wzb = gradient(w)
    mask = disc.mask_annulus(0.2, 0.8)
    z = disc.z[mask]
    assert np.linalg.norm(wz.values[mask] - w0_dz(z, 0.25)) / np.linalg.norm(w0_dz(z, 0.25)) <= 1e-3
    assert np.linalg.norm(wzb.values[mask] - w0_dzbar(z, 0.25)) / np.linalg.norm(w0_dzbar(z, 0.25)) <= 1e-3


def test_dilatation_check_examples(small_disc):
    rep = w0_dilatation_check(0.25, small_disc)
    assert rep["bound"] == pytest.approx(1 / 3) and rep["holds"]
    rep = w0_dilatation_check(0.4, small_disc)
    assert rep["bound"] == pytest.approx(2 / 3) and rep["sup_mu"] <= 2 / 3
    assert w0_dilatation_check(1e-6, small_disc)["sup_mu"] < 1e-5


def test_non_lipschitz_witness():
    radii = np.geomspace(1, 1e-16, 17)
    rep = w0_non_lipschitz_witness(0.25, radii)
    assert rep["ratios"][0] == 1
    assert rep["ratios"][8] == pytest.approx((1 + 16 * math.log(10)) ** 0.25, rel=1e-12)
    assert 2.4 < rep["ratios"][8] < 2.5
    assert rep["increasing"] and rep["diverging"]


def _brute_lp(a, p, eps):
    # radial quadrature in r with the closed-form modulus
    f = lambda r: 2 * np.pi * r * abs(w0_laplacian(r, a)) ** p
    pts = np.geomspace(eps, 1, 30)
    return sum(integrate.quad(f, lo, hi, limit=200)[0] for lo, hi in zip(pts[:-1], pts[1:])) ** (1 / p)


def test_integrability_sequences_match_brute_force():
    rep = w0_laplacian_integrability(0.25, (2.0, 2.5), refinement_levels=4)
    for p in (2.0, 2.5):
        for eps, val in zip(rep["cutoffs"], rep["norms"][p]):
            assert val == pytest.approx(_brute_lp(0.25, p, eps), rel=1e-6)


def test_integrability_verdicts():
    rep = w0_laplacian_integrability(0.25)
    v2, v25 = rep["verdict"][2.0], rep["verdict"][2.5]
    assert v2["differences_decreasing"] and v2["last_relative_change"] < 0.02
    assert np.all(np.diff(rep["norms"][2.5]) > 0) and v25["growth"] >= 5
    assert rep["norms"][2.0][-1] <= w0_l2_limit(0.25)
    rep = w0_laplacian_integrability(0.45, (2.0,))
    assert rep["norms"][2.0][-1] <= w0_l2_limit(0.45) < np.inf
    assert rep["verdict"][2.0]["differences_decreasing"]


def test_family_examples(small_disc):
    ident = make_test_family(TestFamily(), small_disc)
    assert np.abs(ident.w.values - small_disc.z).max() < 1e-12
    assert ident.K == pytest.approx(1.0, abs=1e-12) and ident.laplacian_norm == 0
    shear = make_test_family(TestFamily(dilatation=0.1), small_disc)
    assert shear.K == pytest.approx(1.1 / 0.9, rel=1e-10)
    z = small_disc.z
    assert np.abs(shear.w.values - (z + 0.1 * np.conj(z))).max() < 1e-12
    mid = make_test_family(TestFamily(0.05, 0.05, 0.05), small_disc)
    assert mid.K <= 1.2 and mid.laplacian_norm <= 0.2
    with pytest.raises(NumericalError, match="family parameters too large"):
        make_test_family(TestFamily(0.0, 0.0, 3.0), small_disc)


def test_family_dyadic_scales_decrease():
    scales = [TestFamily.dyadic(n) for n in range(1, 5)]
    for attr in ("dilatation", "laplacian", "boundary"):
        vals = [getattr(s, attr) for s in scales]
        assert all(x > y > 0 for x, y in zip(vals, vals[1:]))
