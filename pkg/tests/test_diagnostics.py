import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qclab.beltrami import bump_problem, principal_solve
from qclab.diagnostics import (
    BoundaryDerivativeMeasure,
    absolute_continuity_detector,
    aprime_inequality_check,
    arc_length_profile,
    boundary_total_variation,
    lipschitz_estimate,
    split_f,
)
from qclab.errors import DomainError, NumericalError
from qclab.grid import DiscGrid, Field, SquareGrid, resample_square_to_disc
from qclab.greenpoisson import CircleFn, solve_poisson
from qclab.halfplane import LineFn, RieszProductParams, riesz_product_zygmund
from qclab.maps import w0_dz, w0_dzbar

LADDER = np.linspace(0.05, 0.99, 20)


def _rel(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


def test_measure_validation():
    with pytest.raises(DomainError):
        BoundaryDerivativeMeasure(np.array([0.5, 0.4]), np.ones(2))
    with pytest.raises(DomainError):
        BoundaryDerivativeMeasure(np.array([0.5, 1.0]), np.ones(2))
    with pytest.raises(NumericalError):
        BoundaryDerivativeMeasure(np.array([0.2, 0.4]), np.array([1.0, np.inf]))
    m = BoundaryDerivativeMeasure(np.array([0.2, 0.4, 0.6]), np.array([1.0, 0.9, 1.2]))
    assert not m.is_nondecreasing() and m.worst_drop == pytest.approx(0.1)


def test_arc_length_of_identity_and_re_z2():
    ident = CircleFn.from_function(lambda t: np.exp(1j * t), 64)
    prof = arc_length_profile(ident, LADDER)
    assert np.allclose(prof.masses, 2 * np.pi * LADDER, rtol=1e-12)
    sq = CircleFn.from_function(lambda t: np.cos(2 * t), 64)
    # |d_theta Re z^2| = 2 r^2 |sin 2 theta|, whose integral is 8 r^2
    prof = arc_length_profile(sq, LADDER, samples=4096)
    assert np.allclose(prof.masses, 8 * LADDER**2, rtol=1e-5)
    assert prof.is_nondecreasing()


def test_arc_length_from_disc_field(disc):
    prof = arc_length_profile(Field(disc, disc.z), LADDER)
    assert np.allclose(prof.masses, 2 * np.pi * prof.radii, rtol=1e-10)
    with pytest.raises(NumericalError, match="not harmonic"):
        arc_length_profile(Field(disc, np.abs(disc.z) ** 2 + 0j), LADDER)
    with pytest.raises(TypeError):
        arc_length_profile(np.ones(4), LADDER)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.0, 0.45), st.floats(0.0, 0.2), st.integers(1, 4))
def test_arc_length_monotone_for_homeomorphisms(amp, amp2, k):
    # theta + amp sin(theta) + amp2 sin(k theta) / k has positive derivative
    phi = lambda t: t + amp * np.sin(t) + amp2 * np.sin(k * t) / k
    b = CircleFn.from_function(lambda t: np.exp(1j * phi(t)), 1024)
    prof = arc_length_profile(b, LADDER)
    assert prof.is_nondecreasing(1e-4)
    assert prof.masses[-1] <= boundary_total_variation(b) * (1 + 1e-6)


def test_boundary_total_variation_circle():
    b = CircleFn.from_function(lambda t: np.exp(1j * (t + 0.3 * np.sin(t))), 256)
    assert boundary_total_variation(b) == pytest.approx(2 * np.pi, rel=1e-8)


def test_split_of_analytic_and_antianalytic(disc):
    z = disc.z
    sp = split_f(Field(disc, z + z**3 / 3), Field(disc, np.zeros(disc.shape)))
    mask = disc.mask_annulus(0, 0.9)
    assert np.abs(sp.v.values).max() == 0
    assert _rel(sp.aprime.values[mask], (1 + z**2)[mask]) <= 1e-8
    assert np.abs(sp.bprime.values[mask]).max() <= 1e-8
    sp = split_f(Field(disc, np.conj(z)), Field(disc, np.zeros(disc.shape)))
    assert np.abs(sp.aprime.values[mask]).max() <= 1e-8
    assert np.allclose(sp.bprime.values[mask], 1, atol=1e-8)


def test_split_round_trip(disc):
    z = disc.z
    g = Field(disc, 4 * np.exp(-4 * np.abs(z) ** 2) + 0j)
    b = CircleFn.from_function(lambda t: np.exp(1j * t), disc.n_theta)
    w = solve_poisson(b, g)
    sp = split_f(w, g, boundary=b)
    assert _rel(sp.reassembled().values, w.values) <= 1e-2


def test_aprime_inequality_affine(disc):
    z = disc.z
    w = Field(disc, z + 0.1 * np.conj(z))
    rep = aprime_inequality_check(w, Field(disc, np.zeros(disc.shape)))
    assert rep["k"] == pytest.approx(0.1, abs=1e-8)
    assert rep["max_violation"] == 0 and rep["min_margin"] > 0
    assert rep["bprime_relation_residual"] <= 1e-2


def test_aprime_inequality_conformal(disc):
    z = disc.z
    rep = aprime_inequality_check(Field(disc, z + 0.2 * z**2), Field(disc, np.zeros(disc.shape)), k=0.0)
    assert rep["max_violation"] == 0
    assert rep["bprime_relation_residual"] <= 1e-2
    with pytest.raises(DomainError):
        aprime_inequality_check(Field(disc, z), Field(disc, np.zeros(disc.shape)), k=1.0)


def test_aprime_inequality_principal_solution():
    square = SquareGrid(2.0, 256)
    sol = principal_solve(bump_problem(0.2, square, radius=0.9), tol=1e-10)
    grid = DiscGrid(64, 128)
    w = Field(grid, resample_square_to_disc(sol.w.values, square, grid))
    rep = aprime_inequality_check(w, k=0.2)
    assert rep["max_violation"] <= 1e-2
    assert rep["bprime_relation_residual"] <= 1e-2


def test_lipschitz_estimate_examples(disc):
    z = disc.z
    assert lipschitz_estimate(Field(disc, z)) == pytest.approx(1, abs=1e-10)
    assert lipschitz_estimate(Field(disc, z + 0.1 * np.conj(z))) == pytest.approx(1.1, abs=1e-10)
    ests = []
    for r_min in (1e-2, 1e-3, 1e-4):
        pts = r_min * np.exp(1j * np.linspace(0, 2 * np.pi, 16))
        ests.append(lipschitz_estimate(None, (w0_dz(pts, 0.25), w0_dzbar(pts, 0.25))))
    assert ests[0] < ests[1] < ests[2]


def test_detector_on_identity_and_smooth_traces():
    ident = absolute_continuity_detector(LineFn.identity(2**16))
    # uniform mass: the 90% set is ceil(0.9 * 2^m) whole cells
    assert ident["fractions"] == [np.ceil(0.9 * 2**m) / 2**m for m in (10, 12, 14, 16)]
    assert ident["verdict"] == "AC-consistent"
    for f in (lambda x: 0.3 * np.sin(np.pi * x) / np.pi, lambda x: 0.25 * x**2):
        assert absolute_continuity_detector(LineFn.from_function(f, 2**17))["verdict"] == "AC-consistent"
    circ = CircleFn.from_function(lambda t: np.exp(1j * (t + 0.3 * np.sin(t))), 2**17)
    assert absolute_continuity_detector(circ)["verdict"] == "AC-consistent"


def test_detector_flags_riesz_trace():
    g = riesz_product_zygmund(RieszProductParams(20))
    rep = absolute_continuity_detector(g, (10, 12, 14, 16))
    assert rep["verdict"] == "singular-consistent"
    assert rep["peak_growth"] >= 1.5


def test_detector_rejects_bad_inputs():
    circ = CircleFn.from_function(lambda t: np.exp(2j * np.sin(t)), 256)
    with pytest.raises(DomainError, match="not a homeomorphism trace"):
        absolute_continuity_detector(circ, (6, 8, 10))
    with pytest.raises(DomainError):
        absolute_continuity_detector(LineFn.identity(), (8, 10))
    with pytest.raises(TypeError):
        absolute_continuity_detector(np.ones(5), (6, 8, 10))
