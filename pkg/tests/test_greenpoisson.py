import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qclab.errors import DomainError
from qclab.grid import DiscGrid, Field, gradient, laplacian_fd
from qclab.greenpoisson import (
    CircleFn,
    c1alpha_boundary_extend,
    c1alpha_bump,
    green_kernel,
    green_kernel_gradient,
    green_kernel_gradient_bound_check,
    green_potential,
    harmonic_derivatives,
    hilbert_transform_circle,
    poisson_extend,
    solve_poisson,
)
from qclab.maps import w0_eval, w0_laplacian


def _random_disc_points(rng, n):
    return np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def test_poisson_extend_examples(disc):
    z = disc.z
    one = poisson_extend(CircleFn.from_function(lambda t: np.ones_like(t), 64), disc)
    assert np.abs(one.values - 1).max() < 1e-13
    first = poisson_extend(CircleFn.from_function(lambda t: np.exp(1j * t), 256), disc)
    assert np.abs(first.values - z).max() < 1e-13
    cos3 = poisson_extend(CircleFn.from_function(lambda t: np.cos(3 * t), 97), disc)
    assert np.abs(cos3.values - (z**3).real).max() <= 1e-8


def test_poisson_extend_mean_value_property(disc):
    b = CircleFn.from_function(lambda t: np.exp(np.cos(t)) + 0.3j * np.sin(5 * t), 256)
    ext = poisson_extend(b, disc)
    for ring in (0, 40, 127):
        assert ext.values[ring].mean() == pytest.approx(b.samples.mean(), abs=1e-10)


def test_harmonic_derivatives_match_polynomial():
    b = CircleFn.from_function(lambda t: np.exp(2j * t) + 0.5 * np.exp(-3j * t), 32)
    z = np.array([0.3 + 0.2j, -0.5j])
    d = harmonic_derivatives(b, z)
    zb = np.conj(z)
    assert np.allclose(d["value"], z**2 + 0.5 * zb**3)
    assert np.allclose(d["z"], 2 * z)
    assert np.allclose(d["zbar"], 1.5 * zb**2)
    assert np.allclose(d["zz"], 2)
    assert np.allclose(d["zbarzbar"], 3 * zb)
    assert np.allclose(d["zzbar"], 0)


def test_circle_resampling_is_trigonometric_interpolation():
    b = CircleFn.from_function(lambda t: np.cos(3 * t) + 1j * np.sin(t), 16)
    fine = b.resampled(64)
    t = fine.angles
    assert np.abs(fine.samples - (np.cos(3 * t) + 1j * np.sin(t))).max() < 1e-13


def test_green_kernel_examples(rng):
    assert green_kernel(0, 0.5) == pytest.approx(np.log(2) / (2 * np.pi), abs=1e-12)
    assert 0 <= green_kernel(0.3 + 0.1j, (1 - 1e-6) * np.exp(0.7j)) < 1e-5
    z, w = _random_disc_points(rng, 100), _random_disc_points(rng, 100)
    for a, b in zip(z, w):
        assert green_kernel(a, b) == pytest.approx(green_kernel(b, a), abs=1e-12)
        assert green_kernel(a, b) >= 0
    with pytest.raises(DomainError, match="kernel singularity"):
        green_kernel(0.2, 0.2)


def test_gradient_bound_examples(rng):
    rep = green_kernel_gradient_bound_check([(0, 0.5)])
    assert rep["max_ratio"] <= 1
    pairs = np.column_stack([_random_disc_points(rng, 1000), _random_disc_points(rng, 1000)])
    rep = green_kernel_gradient_bound_check(pairs)
    assert rep["max_ratio"] <= 1 + 1e-12
    assert rep["holds"]


def test_gradient_ratio_matches_closed_form(rng):
    # ratio |grad G| pi |z - w| simplifies to (1 - |w|^2) / (2 |1 - z conj(w)|)
    z, w = _random_disc_points(rng, 200), _random_disc_points(rng, 200)
    rep = green_kernel_gradient_bound_check(np.column_stack([z, w]))
    oracle = (1 - np.abs(w) ** 2) / (2 * np.abs(1 - z * np.conj(w)))
    assert np.allclose(rep["ratios"], oracle, rtol=1e-10)


def test_gradient_ratio_limits():
    w = 0.4 + 0.3j
    near = [(w + s * np.exp(0.3j), w) for s in (1e-2, 1e-4, 1e-6)]
    ratios = green_kernel_gradient_bound_check(near)["ratios"]
    # at the diagonal the two log singularities of grad G share the factor 2
    assert abs(ratios[-1] - 0.5) < 1e-5
    # with z pushed to the rim ahead of w the ratio is (1 + |w|) / 2
    rim = [(1 - 1e-12, r) for r in (0.9, 0.99, 0.9999)]
    rim_ratios = green_kernel_gradient_bound_check(rim)["ratios"]
    assert np.allclose(rim_ratios, [0.95, 0.995, 0.99995], rtol=1e-6)


def test_green_kernel_gradient_against_finite_differences():
    z, w, h = 0.2 - 0.1j, -0.3 + 0.4j, 1e-6
    gx = (green_kernel(z + h, w) - green_kernel(z - h, w)) / (2 * h)
    gy = (green_kernel(z + 1j * h, w) - green_kernel(z - 1j * h, w)) / (2 * h)
    assert green_kernel_gradient(z, w) == pytest.approx(np.hypot(gx, gy), rel=1e-6)


def test_green_potential_constant_sources(disc):
    zero = green_potential(Field(disc, np.zeros(disc.shape)))
    assert np.all(zero.values == 0)
    exact = np.abs(disc.z) ** 2 - 1
    four = Field(disc, np.full(disc.shape, 4.0))
    assert np.abs(green_potential(four).values - exact).max() <= 1e-3
    # the plain quadrature, without the local correction, meets the same bound
    assert np.abs(green_potential(four, correction=-1).values - exact).max() <= 1e-3


def test_green_potential_laplacian_residual(disc):
    z = disc.z
    g = Field(disc, np.exp(-3 * np.abs(z - 0.3) ** 2) * (1 + 0.5j * z))
    v = green_potential(g)
    inner = disc.mask_annulus(0, 0.9)
    res = laplacian_fd(v).values - g.values
    interior = np.linalg.norm(res[inner]) / np.linalg.norm(g.values[inner])
    assert interior <= 1e-2
    # outermost ring sits at r_N < 1, so |v| there is at most (1 - r_N) sup |grad v|
    _, v_z, v_zb = green_potential(g, with_gradient=True)
    slope = (np.abs(v_z.values) + np.abs(v_zb.values)).max()
    assert np.abs(v.values[-1]).max() <= 1.1 * (1 - disc.radii[-1]) * slope


def test_green_potential_gradient_matches_fd(small_disc):
    z = small_disc.z
    g = Field(small_disc, np.cos(2 * z.real) * (1 + z.imag) + 0j)
    v, v_z, v_zb = green_potential(g, with_gradient=True)
    fd_z, fd_zb = gradient(v)
    mask = small_disc.mask_annulus(0.1, 0.9)
    assert np.abs((v_z.values - fd_z.values)[mask]).max() < 1e-4
    assert np.abs((v_zb.values - fd_zb.values)[mask]).max() < 1e-4


def test_green_potential_recovers_w0_decomposition(disc):
    z = disc.z
    a = 0.25
    g = Field(disc, w0_laplacian(z, a))
    v = green_potential(g)
    trace = CircleFn.from_function(lambda t: np.exp(1j * t), disc.n_theta)
    target = w0_eval(z, a) - poisson_extend(trace, disc).values
    assert np.linalg.norm(v.values - target) / np.linalg.norm(target) <= 1e-2


def test_solve_poisson_examples(small_disc):
    z = small_disc.z
    zero_b = CircleFn(np.zeros(small_disc.n_theta))
    four = Field(small_disc, np.full(small_disc.shape, 4.0))
    assert np.abs(solve_poisson(zero_b, four).values - (np.abs(z) ** 2 - 1)).max() <= 1e-3
    b = CircleFn.from_function(lambda t: np.exp(1j * t), small_disc.n_theta)
    w = solve_poisson(b, Field(small_disc, np.zeros(small_disc.shape)))
    assert np.abs(w.values - z).max() < 1e-12
    target = w0_eval(z, 0.25)
    w0_rec = solve_poisson(b, Field(small_disc, w0_laplacian(z, 0.25)))
    assert np.linalg.norm(w0_rec.values - target) / np.linalg.norm(target) <= 1e-2


def test_hilbert_transform_examples():
    n = 64
    cos = CircleFn.from_function(np.cos, n)
    assert np.abs(hilbert_transform_circle(cos).samples - np.sin(cos.angles)).max() < 1e-13
    const = CircleFn(np.full(n, 2.5))
    assert np.abs(hilbert_transform_circle(const).samples).max() < 1e-14
    b = CircleFn.from_function(lambda t: np.cos(5 * t) + np.sin(2 * t), n)
    expected = np.sin(5 * b.angles) - np.cos(2 * b.angles)
    assert np.abs(hilbert_transform_circle(b).samples - expected).max() <= 1e-12


@settings(max_examples=25)
@given(st.lists(st.floats(-1, 1), min_size=6, max_size=6))
def test_hilbert_squared_is_minus_identity_off_mean(coefs):
    n = 32
    t = 2 * np.pi * np.arange(n) / n
    vals = coefs[0] + sum(c * np.cos((k + 1) * t + k) for k, c in enumerate(coefs[1:]))
    b = CircleFn(vals)
    hh = hilbert_transform_circle(hilbert_transform_circle(b)).samples
    assert np.abs(hh + (vals - vals.mean())).max() <= 1e-12


def test_c1alpha_extension_examples():
    grid = DiscGrid(48, 128)
    ident = CircleFn.from_function(lambda t: np.exp(1j * t), 128)
    _, rep = c1alpha_boundary_extend(ident, grid, 0.5)
    assert rep["sup_dpsi_minus_id"] < 1e-12
    pert = CircleFn.from_function(lambda t: np.exp(1j * t) + 0.01 * np.exp(2j * t), 128)
    _, rep = c1alpha_boundary_extend(pert, grid, 0.5, p=1.5)
    # Psi = z + 0.01 z^2, so |Psi_z - 1| = 0.02 |z|
    assert rep["sup_dpsi_minus_id"] == pytest.approx(0.02, rel=0.2)
    assert rep["d2_lp"] > 0
    with pytest.raises(DomainError, match="exponent out of admissible range"):
        c1alpha_boundary_extend(pert, grid, 0.5, p=2.0)


def test_c1alpha_extension_is_linear_in_perturbation():
    grid = DiscGrid(48, 256)
    bump = c1alpha_bump(0.5)
    sups = []
    for eps in (0.1, 0.05, 0.025):
        b = CircleFn.from_function(lambda t: np.exp(1j * t) + eps * bump(t), 1024)
        sups.append(c1alpha_boundary_extend(b, grid, 0.5)[1]["sup_dpsi_minus_id"])
    ratios = np.array(sups[:-1]) / np.array(sups[1:])
    assert np.all(ratios / 2 <= 1.3) and np.all(2 / ratios <= 1.3)
