import math
from functools import reduce

import numpy as np
import pytest

from schwingerlab import fock
from schwingerlab.errors import ConfigurationError, PreconditionError
from schwingerlab.fock import FockBasis, VacuumSpec
from schwingerlab.modes import GaugeProfile, ModeParams, alpha_matrix_element, build_modes

TWO_PI = 2 * math.pi


def small_basis(n_max=1, spins=(1, 2), mass=1.0, L=TWO_PI, charge=1.0):
    P = ModeParams(mass, L, n_max, charge, spins)
    return P, FockBasis.from_params(P)


def kron_annihilators(M):
    """Jordan-Wigner ladder operators from explicit Kronecker products (mode 0 least significant)."""
    Z = np.diag([1.0, -1.0])
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])
    eye = np.eye(2)
    ops = []
    for i in range(M):
        factors = [Z] * i + [lower] + [eye] * (M - i - 1)
        ops.append(reduce(np.kron, factors[::-1]))
    return ops


def slater_occupations(vac, basis):
    return fock.occupied_mask(vac, basis).astype(float)


def test_ladder_operators_match_kronecker_construction():
    P, B = small_basis(n_max=1, spins=(1,))
    for i, a in enumerate(kron_annihilators(B.size)):
        np.testing.assert_array_equal(B.annihilator(i).toarray(), a)


def test_car_relations():
    _, B = small_basis()
    assert fock.car_residual(B) == 0.0


def test_hopping_equals_product_of_ladders():
    _, B = small_basis(n_max=1, spins=(1,))
    for n in range(B.size):
        for m in range(B.size):
            want = (B.creator(n) @ B.annihilator(m)).toarray()
            np.testing.assert_array_equal(B.hopping(n, m).toarray(), want)


@pytest.mark.parametrize("vac", [VacuumSpec.standard(), VacuumSpec.with_band(0.3)])
def test_vacuum_relations_and_zero_energy(vac):
    _, B = small_basis()
    state = fock.build_vacuum(vac, B)
    assert fock.vacuum_conditions_residual(vac, B, state) == 0.0
    H = fock.build_H0(B, vac)
    assert np.linalg.norm(H.matrix @ state) == 0.0


def test_standard_vacuum_is_ground_state_with_sea_energy():
    _, B = small_basis()
    H = fock.build_H0(B, VacuumSpec.standard())
    sea = sum(m.signed_energy for m in B.modes if m.sign == -1)
    assert H.shift == pytest.approx(sea, rel=1e-15)
    assert H.matrix.diagonal().real.min() == pytest.approx(0.0, abs=1e-14)


def test_band_vacuum_admits_lower_states():
    _, B = small_basis()
    H = fock.build_H0(B, VacuumSpec.with_band(0.3))
    assert H.matrix.diagonal().real.min() < 0


def test_empty_band_rejected():
    P, B = small_basis(mass=1.0, L=1.0)
    with pytest.raises(ConfigurationError):
        fock.build_vacuum(VacuumSpec.with_band(1e-3), FockBasis(B.modes[:2], P.mass))


def test_operators_are_hermitian():
    _, B = small_basis()
    chi = GaugeProfile(0.7, 1.0)
    rho = fock.build_rho_w(B, chi).matrix
    assert fock.opnorm(rho - rho.conj().T) < 1e-14
    J = fock.build_current(B, 0.4).matrix
    assert fock.opnorm(J - J.conj().T) < 1e-14


@pytest.mark.parametrize("vac", [VacuumSpec.standard(), VacuumSpec.with_band(0.3)])
def test_double_commutator_equals_rho_h_rho_and_slater_oracle(vac):
    _, B = small_basis()
    chi = GaugeProfile(1.3, 1.0)
    dc = fock.double_commutator_expectation(vac, chi, B)
    rhr = fock.rho_h_rho_expectation(vac, chi, B)
    X = fock.chi_matrix(B, chi)
    f = slater_occupations(vac, B)
    eps = np.array([m.signed_energy for m in B.modes])
    oracle = sum(abs(X[u, o]) ** 2 * (eps[u] - eps[o])
                 for o in range(B.size) if f[o] for u in range(B.size) if not f[u])
    assert dc == pytest.approx(rhr, rel=1e-12, abs=1e-14)
    assert rhr == pytest.approx(oracle, rel=1e-12, abs=1e-14)


def test_standard_double_commutator_positive():
    _, B = small_basis()
    dc = fock.double_commutator_expectation(VacuumSpec.standard(), GaugeProfile(1.0, 1.0), B)
    assert dc > 0


@pytest.mark.parametrize("vac", [VacuumSpec.standard(), VacuumSpec.with_band(0.3)])
def test_schwinger_harmonics_match_slater_oracle(vac):
    _, B = small_basis(charge=1.7)
    chi = GaugeProfile(0.9, 1.0)
    X = fock.chi_matrix(B, chi)
    f = slater_occupations(vac, B)
    harm = fock.schwinger_harmonics(vac, chi, B)
    M = B.size
    for q, value in harm.items():
        Jq = np.zeros((M, M), dtype=complex)
        for n, a in enumerate(B.modes):
            for m, b in enumerate(B.modes):
                if b.n - a.n == q:
                    Jq[n, m] = alpha_matrix_element(a, b)
        oracle = B.charge ** 2 * np.sum(f * np.diag(Jq @ X - X @ Jq))
        assert abs(value - oracle) < 1e-13
        if abs(q) != 1:
            assert abs(value) < 1e-14


def test_schwinger_is_antihermitian_pair():
    _, B = small_basis()
    harm = fock.schwinger_harmonics(VacuumSpec.standard(), GaugeProfile(1.0, 1.0), B)
    assert abs(harm[-1] + np.conj(harm[1])) < 1e-14


def test_c_number_shifts_do_not_change_commutators():
    _, B = small_basis()
    chi = GaugeProfile(1.0, 1.0)
    vac = VacuumSpec.standard()
    base = fock.double_commutator_expectation(vac, chi, B)
    assert fock.double_commutator_expectation(vac, chi, B, h_shift=5.0, rho_shift=-2.5) == pytest.approx(base, rel=1e-13)
    h0 = fock.schwinger_harmonics(vac, chi, B)
    h1 = fock.schwinger_harmonics(vac, chi, B, j_shift=3.0, rho_shift=1.1)
    for q in h0:
        assert abs(h0[q] - h1[q]) < 1e-13


def test_zero_amplitude_gives_zero_commutators():
    _, B = small_basis()
    chi = GaugeProfile(0.0, 1.0)
    vac = VacuumSpec.standard()
    assert fock.double_commutator_expectation(vac, chi, B) == 0.0
    assert all(v == 0 for v in fock.schwinger_harmonics(vac, chi, B).values())


def test_basis_size_cap():
    P = ModeParams(1.0, TWO_PI, 2)
    with pytest.raises(ConfigurationError):
        FockBasis(build_modes(P), P.mass)


def test_nested_commutator_exhaustive_on_four_modes():
    _, B = small_basis()
    sub = FockBasis(B.modes[:4], B.mass)
    assert fock.nested_commutator_exhaustive(sub) < 1e-12


def test_nested_commutator_on_field_combinations():
    _, B = small_basis(n_max=1, spins=(1,))
    rng = np.random.default_rng(7)
    a = [B.annihilator(i) for i in range(B.size)]

    def psi(coef):
        return sum(c * x for c, x in zip(coef, a))

    for _ in range(5):
        f, g, h, k = (rng.normal(size=B.size) + 1j * rng.normal(size=B.size) for _ in range(4))
        A, C = psi(f), psi(h)
        Bop, D = psi(g).conj().T, psi(k).conj().T
        assert fock.nested_commutator_identity_check(A, Bop, C, D) < 1e-11


def test_nested_commutator_rejects_non_c_number_anticommutators():
    _, B = small_basis(n_max=1, spins=(1,))
    bilinear = B.hopping(0, 1)
    with pytest.raises(PreconditionError):
        fock.nested_commutator_identity_check(bilinear, B.annihilator(2), B.creator(3), B.annihilator(0))


def test_exponential_identity_synthetic_triples():
    _, B = small_basis(n_max=1, spins=(1,))
    rng = np.random.default_rng(11)
    for _ in range(4):
        H, rho, K = fock.ladder_triple(B, rng)
        prem = fock.exponential_identity_premises(H, rho, K)
        assert max(prem.values()) < 1e-12
        assert fock.exponential_identity_check(H, rho, K) < 1e-10


def test_exponential_identity_rejects_physical_pair():
    _, B = small_basis(n_max=1, spins=(1,))
    chi = GaugeProfile(1.0, 1.0)
    H = fock.build_H0(B, VacuumSpec.standard())
    rho = fock.build_rho_w(B, chi)
    K = fock.build_gauge_flux(B, chi)
    prem = fock.exponential_identity_premises(H, rho, K)
    assert prem["[H,rho]+iK"] < 1e-12
    with pytest.raises(PreconditionError):
        fock.exponential_identity_check(H, rho, K)
