import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from schwingerlab.errors import ConfigurationError, NonLatticeWavenumber
from schwingerlab.modes import (
    ALPHA_Z,
    BandSpec,
    GaugeProfile,
    ModeParams,
    alpha_matrix_element,
    build_modes,
    chi_matrix_element,
    completeness_residual,
    current_pair_element,
    dirac_hamiltonian,
    first_quantized_commutator_check,
    gradient_matrix_element,
    make_mode,
    mode_table,
    spinor,
)

TWO_PI = 2 * math.pi

masses = st.floats(0.05, 20.0)
momenta = st.floats(-50.0, 50.0)
lengths = st.floats(0.5, 500.0)


def ring_integral(f, L):
    re, _ = integrate.quad(lambda z: f(z).real, 0, L, limit=200, epsabs=1e-13)
    im, _ = integrate.quad(lambda z: f(z).imag, 0, L, limit=200, epsabs=1e-13)
    return complex(re, im)


def test_minimal_truncation_has_twelve_modes():
    P = ModeParams(1.0, TWO_PI, 1)
    modes = build_modes(P)
    assert len(modes) == P.mode_count == 12
    assert len({m.key for m in modes}) == 12


def test_rest_frame_spinor():
    u = spinor(0.0, 1.0, TWO_PI, 1, 1)
    np.testing.assert_allclose(u, np.array([1, 0, 0, 0]) / math.sqrt(TWO_PI), atol=1e-16)


def test_negative_sign_spinor_continuous_at_zero_momentum():
    u0 = spinor(0.0, 1.3, 7.0, -1, 1)
    u_eps = spinor(1e-9, 1.3, 7.0, -1, 1)
    np.testing.assert_allclose(u0, u_eps, atol=1e-9)
    assert np.isfinite(u0).all()


@settings(max_examples=60, deadline=None)
@given(p=momenta, m=masses, L=lengths, sign=st.sampled_from([1, -1]), spin=st.sampled_from([1, 2]))
def test_spinor_is_normalized_eigenvector(p, m, L, sign, spin):
    u = spinor(p, m, L, sign, spin)
    E = math.hypot(p, m)
    assert abs(np.vdot(u, u).real * L - 1) < 1e-13
    np.testing.assert_allclose(dirac_hamiltonian(p, m) @ u, sign * E * u, atol=1e-12 * max(E, 1) / math.sqrt(L))


@settings(max_examples=60, deadline=None)
@given(m=masses, L=lengths, n=st.integers(-40, 40))
def test_completeness_and_orthogonality(m, L, n):
    P = ModeParams(m, L, max(1, abs(n)))
    assert completeness_residual(P, n) * L < 1e-14
    us = [spinor(P.momentum(n), m, L, s, sp) for s in (1, -1) for sp in (1, 2)]
    gram = np.array([[np.vdot(a, b) for b in us] for a in us]) * L
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-14)


def test_frozen_chi_element_against_quadrature():
    # p_n = 1, p_m = 0, m = 1, L = 2 pi, V0 = 1, positive energy, spin 1
    P = ModeParams(1.0, TWO_PI, 1)
    chi = GaugeProfile(1.0, 1.0)
    a, b = make_mode(P, 1, 1, 1), make_mode(P, 0, 1, 1)
    frozen = 0.4619397662556434
    assert chi_matrix_element(a, b, chi) == pytest.approx(frozen, abs=1e-15)
    assert frozen == pytest.approx(math.cos(math.pi / 8) / 2, abs=1e-16)
    f = lambda z: np.vdot(a.spinor, b.spinor) * math.cos(z) * np.exp(1j * (b.p - a.p) * z)
    assert abs(ring_integral(f, TWO_PI) - frozen) < 1e-12


def test_chi_and_gradient_elements_against_quadrature():
    P = ModeParams(0.7, 3 * math.pi, 2)
    chi = GaugeProfile(1.4, 2 * TWO_PI / P.ring_length)
    modes = build_modes(P)
    k, V0, L = chi.wavenumber, chi.amplitude, P.ring_length
    rng = np.random.default_rng(3)
    for _ in range(12):
        a, b = (modes[i] for i in rng.integers(0, len(modes), 2))
        if abs(a.n - b.n) != 2:
            b = make_mode(P, a.n + 2 if a.n <= 0 else a.n - 2, b.sign, a.spin)
        phase = lambda z: np.exp(1j * (b.p - a.p) * z)
        want_chi = ring_integral(lambda z: np.vdot(a.spinor, b.spinor) * V0 * math.cos(k * z) * phase(z), L)
        want_grad = ring_integral(
            lambda z: np.vdot(a.spinor, -1j * ALPHA_Z @ b.spinor) * (-V0 * k * math.sin(k * z)) * phase(z), L)
        assert abs(chi_matrix_element(a, b, chi) - want_chi) < 1e-11
        assert abs(gradient_matrix_element(a, b, chi) - want_grad) < 1e-11


def test_first_quantized_identity_all_pairs():
    P = ModeParams(1.3, 5.0, 3)
    chi = GaugeProfile.from_index(0.8, 2, P.ring_length)
    modes = build_modes(P)
    worst = max(abs(first_quantized_commutator_check(a, b, chi)) for a in modes for b in modes)
    assert worst < 1e-12


def test_current_pair_closed_form_matches_brute_force():
    P = ModeParams(0.9, 4.0, 3)
    modes = build_modes(P)
    for a in modes:
        for b in modes:
            brute = alpha_matrix_element(b, a) * np.vdot(a.spinor, b.spinor)
            assert abs(brute - current_pair_element(a, b)) * P.ring_length ** 2 < 1e-13


def test_chi_is_hermitian_and_spin_diagonal():
    P = ModeParams(1.0, TWO_PI, 2)
    chi = GaugeProfile(1.0, 1.0)
    for a in build_modes(P):
        for b in build_modes(P):
            x = chi_matrix_element(a, b, chi)
            assert abs(x - np.conj(chi_matrix_element(b, a, chi))) < 1e-15
            if a.spin != b.spin:
                assert x == 0


def test_non_lattice_wavenumber_names_neighbours():
    with pytest.raises(NonLatticeWavenumber) as err:
        GaugeProfile(1.0, 1.3).lattice_index(TWO_PI)
    assert err.value.nearest == pytest.approx([1.0, 2.0])
    assert "nearest lattice wavenumbers" in str(err.value)


@pytest.mark.parametrize("kw", [dict(mass=0.0), dict(ring_length=-1.0), dict(n_max=0), dict(spins=(3,))])
def test_invalid_params_rejected(kw):
    base = dict(mass=1.0, ring_length=TWO_PI, n_max=1)
    base.update(kw)
    with pytest.raises(ConfigurationError):
        ModeParams(**base)


def test_band_shell_and_margin():
    P = ModeParams(1.0, TWO_PI, 4)
    # E(n) = sqrt(n^2 + 1); depth sqrt(5) - 1 reaches |n| = 2 exactly
    band = BandSpec(math.sqrt(5) - 1)
    assert band.shell(P) == 2
    assert band.margin(P) == 2
    assert BandSpec(0.1).shell(P) == 0


def test_mode_table_rows():
    rows = mode_table(ModeParams(1.0, TWO_PI, 1))
    assert len(rows) == 12
    assert max(r["completeness_residual"] for r in rows) < 1e-14
