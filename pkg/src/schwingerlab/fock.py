"""Exact second-quantized algebra on a truncated set of Dirac modes.

Basis state ``s`` is an integer whose bit ``i`` is the occupation of mode ``i``
of the basis; creation/annihilation signs follow the Jordan-Wigner convention
(-1)^(number of occupied modes with a lower index).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg
from scipy import sparse

from .errors import ConfigurationError, PreconditionError
from .harmonic import HarmonicCoefficient
from .modes import BandSpec, GaugeProfile, Mode, alpha_matrix_element, chi_matrix_element, gradient_matrix_element

MAX_MODES = 14
MAX_EXPM_MODES = 10


@dataclass(frozen=True)
class VacuumSpec:
    kind: str
    band: BandSpec | None = None

    def __post_init__(self):
        if self.kind not in ("standard", "band"):
            raise ConfigurationError(f"unknown vacuum kind {self.kind!r}")
        if (self.kind == "band") != (self.band is not None):
            raise ConfigurationError("a band vacuum needs a BandSpec and a standard vacuum must not have one")

    @classmethod
    def standard(cls) -> VacuumSpec:
        return cls("standard")

    @classmethod
    def with_band(cls, depth: float) -> VacuumSpec:
        return cls("band", BandSpec(depth))

    def occupied(self, mode: Mode, mass: float) -> bool:
        if mode.sign == 1:
            return False
        return self.kind == "standard" or self.band.contains(mode, mass)

    def label(self) -> str:
        return "standard" if self.kind == "standard" else f"band(depth={self.band.depth!r})"


@dataclass(frozen=True, eq=False)
class FockOperator:
    matrix: sparse.csr_matrix = field(repr=False)
    label: str
    shift: float = 0.0  # c-number subtracted (xi_R for H0)

    @property
    def H(self) -> FockOperator:
        return FockOperator(self.matrix.conj().T.tocsr(), f"({self.label})^dagger", np.conj(self.shift))

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            return FockOperator((self.matrix @ other.matrix).tocsr(), f"{self.label} {other.label}")
        return self.matrix @ other


def _mat(x):
    return x.matrix if isinstance(x, FockOperator) else x


def comm(a, b):
    a, b = _mat(a), _mat(b)
    return a @ b - b @ a


def anticomm(a, b):
    a, b = _mat(a), _mat(b)
    return a @ b + b @ a


def opnorm(x) -> float:
    """Frobenius norm for dense or sparse matrices."""
    x = _mat(x)
    if sparse.issparse(x):
        x = x.tocoo()
        return float(np.sqrt(np.sum(np.abs(x.data) ** 2)))
    return float(np.linalg.norm(x))


class FockBasis:
    """All 2^M occupation states of an ordered mode list."""

    def __init__(self, modes, mass: float, charge: float = 1.0):
        modes = tuple(modes)
        if not modes:
            raise ConfigurationError("empty mode list")
        if len(modes) > MAX_MODES:
            raise ConfigurationError(f"{len(modes)} modes exceeds the Fock cap of {MAX_MODES}")
        if len({m.key for m in modes}) != len(modes):
            raise ConfigurationError("duplicate modes in basis")
        self.modes = modes
        self.mass = mass
        self.charge = charge
        self.size = len(modes)
        self.dim = 1 << self.size
        self._index = {m.key: i for i, m in enumerate(modes)}
        self._states = np.arange(self.dim, dtype=np.int64)

    @classmethod
    def from_params(cls, params, modes=None) -> FockBasis:
        from .modes import build_modes
        return cls(build_modes(params) if modes is None else modes, params.mass, params.charge)

    def index(self, key) -> int:
        if isinstance(key, Mode):
            key = key.key
        if isinstance(key, (int, np.integer)):
            if not 0 <= key < self.size:
                raise KeyError(f"mode index {key} outside basis of {self.size} modes")
            return int(key)
        try:
            return self._index[tuple(key)]
        except KeyError:
            raise KeyError(f"mode {key!r} not in basis") from None

    def _parity_below(self, i):
        below = self._states & ((1 << i) - 1)
        counts = np.zeros(self.dim, dtype=np.int64)
        for b in range(i):
            counts += (below >> b) & 1
        return 1 - 2 * (counts & 1)

    @cached_property
    def _annihilators(self):
        ops = []
        for i in range(self.size):
            src = np.nonzero((self._states >> i) & 1)[0]
            dst = src ^ (1 << i)
            sign = self._parity_below(i)[src]
            ops.append(sparse.csr_matrix((sign.astype(complex), (dst, src)), shape=(self.dim, self.dim)))
        return ops

    def annihilator(self, key) -> sparse.csr_matrix:
        return self._annihilators[self.index(key)]

    def creator(self, key) -> sparse.csr_matrix:
        return self._annihilators[self.index(key)].conj().T.tocsr()

    def hopping(self, n, m) -> sparse.csr_matrix:
        """a_n^dagger a_m built directly on bitstrings."""
        n, m = self.index(n), self.index(m)
        s = self._states
        if n == m:
            occ = ((s >> n) & 1).astype(complex)
            return sparse.diags(occ, format="csr")
        ok = (((s >> m) & 1) == 1) & (((s >> n) & 1) == 0)
        src = s[ok]
        mid = src ^ (1 << m)
        dst = mid | (1 << n)
        sign = self._parity_below(m)[src] * self._parity_below(n)[mid]
        return sparse.csr_matrix((sign.astype(complex), (dst, src)), shape=(self.dim, self.dim))

    def identity(self) -> sparse.csr_matrix:
        return sparse.identity(self.dim, dtype=complex, format="csr")

    def state_index(self, occupied_keys) -> int:
        s = 0
        for k in occupied_keys:
            s |= 1 << self.index(k)
        return s

    def basis_vector(self, state: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[state] = 1.0
        return v

    def occupations(self, state: int) -> tuple:
        return tuple((state >> i) & 1 for i in range(self.size))


def ladder(n, kind: str, basis: FockBasis) -> FockOperator:
    mode = basis.modes[basis.index(n)]
    if kind == "destroy":
        return FockOperator(basis.annihilator(n), f"a{mode.key}")
    if kind == "create":
        return FockOperator(basis.creator(n), f"a{mode.key}^dagger")
    raise ValueError(f"kind must be 'create' or 'destroy', got {kind!r}")


def car_residual(basis: FockBasis) -> float:
    """Largest Frobenius deviation from {a_n^dagger, a_m} = delta I and {a_n, a_m} = 0."""
    worst = 0.0
    eye = basis.identity()
    for n in range(basis.size):
        for m in range(basis.size):
            a_n, a_m = basis.annihilator(n), basis.annihilator(m)
            worst = max(worst,
                        opnorm(anticomm(basis.creator(n), a_m) - (n == m) * eye),
                        opnorm(anticomm(a_n, a_m)))
    return worst


def occupied_mask(vac: VacuumSpec, basis: FockBasis) -> np.ndarray:
    return np.array([vac.occupied(m, basis.mass) for m in basis.modes], dtype=bool)


def vacuum_state_index(vac: VacuumSpec, basis: FockBasis) -> int:
    occ = occupied_mask(vac, basis)
    if vac.kind == "band" and not occ.any():
        raise ConfigurationError("band contains no mode of this basis")
    return int(sum(1 << i for i in np.nonzero(occ)[0]))


def vacuum_conditions_residual(vac: VacuumSpec, basis: FockBasis, state: np.ndarray) -> float:
    """max norm over the defining annihilation conditions of the vacuum."""
    worst = 0.0
    for i, mode in enumerate(basis.modes):
        if vac.occupied(mode, basis.mass):
            op = basis.creator(i)
        else:
            op = basis.annihilator(i)
        worst = max(worst, float(np.linalg.norm(op @ state)))
    return worst


def build_vacuum(vac: VacuumSpec, basis: FockBasis) -> np.ndarray:
    state = basis.basis_vector(vacuum_state_index(vac, basis))
    residual = vacuum_conditions_residual(vac, basis, state)
    if residual != 0.0:
        raise AssertionError(f"vacuum violates its defining relations (residual {residual})")
    return state


def build_H0(basis: FockBasis, vac: VacuumSpec) -> FockOperator:
    """sum_n lambda_n E_n a_n^dagger a_n - xi_R, with xi_R zeroing the vacuum energy."""
    energies = np.array([m.signed_energy for m in basis.modes])
    s = np.arange(basis.dim, dtype=np.int64)
    diag = np.zeros(basis.dim)
    for i, e in enumerate(energies):
        diag += e * ((s >> i) & 1)
    xi = float(diag[vacuum_state_index(vac, basis)])
    return FockOperator(sparse.diags((diag - xi).astype(complex), format="csr"), "H0", shift=xi)


def one_body(basis: FockBasis, coeffs: np.ndarray, label: str) -> FockOperator:
    """e * sum_{n,m} c_nm (a_n^dagger a_m - delta_nm / 2)."""
    e = basis.charge
    out = sparse.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for n, m in zip(*np.nonzero(coeffs)):
        out = out + (e * coeffs[n, m]) * basis.hopping(n, m)
    const = -0.5 * e * np.trace(coeffs)
    if const != 0:
        out = out + const * basis.identity()
    return FockOperator(out.tocsr(), label, shift=-const)


def chi_matrix(basis: FockBasis, chi: GaugeProfile) -> np.ndarray:
    M = basis.size
    X = np.zeros((M, M), dtype=complex)
    for n, a in enumerate(basis.modes):
        for m, b in enumerate(basis.modes):
            X[n, m] = chi_matrix_element(a, b, chi)
    return X


def build_rho_w(basis: FockBasis, chi: GaugeProfile) -> FockOperator:
    return one_body(basis, chi_matrix(basis, chi), "rho_w")


def current_coefficients(basis: FockBasis):
    """Map q -> matrix c with J(z) = sum_q e^{iqz} e sum c_nm (a_n^dagger a_m - delta/2).

    q is the integer lattice index of p_m - p_n.
    """
    M = basis.size
    out = {}
    for n, a in enumerate(basis.modes):
        for m, b in enumerate(basis.modes):
            val = alpha_matrix_element(a, b)
            if val == 0:
                continue
            q = b.n - a.n
            out.setdefault(q, np.zeros((M, M), dtype=complex))[n, m] = val
    return out


def current_harmonics(basis: FockBasis) -> dict:
    return {q: one_body(basis, c, f"J_q[{q}]") for q, c in current_coefficients(basis).items()}


def build_current(basis: FockBasis, z: float) -> FockOperator:
    step = 2 * np.pi / basis.modes[0].ring_length
    M = basis.size
    total = np.zeros((M, M), dtype=complex)
    for q, c in current_coefficients(basis).items():
        total += np.exp(1j * q * step * z) * c
    return one_body(basis, total, f"J(z={z!r})")


def build_gauge_flux(basis: FockBasis, chi: GaugeProfile) -> FockOperator:
    """Integral of J(z) dchi/dz over the ring."""
    M = basis.size
    G = np.zeros((M, M), dtype=complex)
    for n, a in enumerate(basis.modes):
        for m, b in enumerate(basis.modes):
            # (-i alpha chi') element times i gives alpha chi'
            G[n, m] = 1j * gradient_matrix_element(a, b, chi)
    return one_body(basis, G, "int J dchi/dz")


def expectation(op, state: np.ndarray) -> complex:
    return complex(np.vdot(state, _mat(op) @ state))


def rho_h_rho_expectation(vac: VacuumSpec, chi: GaugeProfile, basis: FockBasis) -> float:
    state = build_vacuum(vac, basis)
    H = build_H0(basis, vac)
    rho = build_rho_w(basis, chi)
    w = rho.matrix @ state
    return float(np.vdot(w, H.matrix @ w).real)


def double_commutator_expectation(vac: VacuumSpec, chi: GaugeProfile, basis: FockBasis,
                                  h_shift: float = 0.0, rho_shift: float = 0.0) -> float:
    """(1/2) <vac|[rho_w, [H0, rho_w]]|vac> by explicit sparse matrix products.

    The optional shifts add c-numbers to H0 and rho_w; commutators must not see them.
    """
    state = build_vacuum(vac, basis)
    H = build_H0(basis, vac).matrix + h_shift * basis.identity()
    rho = build_rho_w(basis, chi).matrix + rho_shift * basis.identity()
    inner = comm(H, rho)
    outer = comm(rho, inner)
    return 0.5 * expectation(outer, state).real


def schwinger_harmonics(vac: VacuumSpec, chi: GaugeProfile, basis: FockBasis,
                        j_shift: float = 0.0, rho_shift: float = 0.0) -> dict:
    """<vac|[J_q, rho_w]|vac> for every lattice harmonic q present in J."""
    state = build_vacuum(vac, basis)
    rho = build_rho_w(basis, chi).matrix + rho_shift * basis.identity()
    out = {}
    for q, Jq in current_harmonics(basis).items():
        J = Jq.matrix + (j_shift * basis.identity() if q == 0 else 0)
        out[q] = expectation(comm(J, rho), state)
    return out


def schwinger_expectation(vac: VacuumSpec, chi: GaugeProfile, basis: FockBasis, **shifts) -> HarmonicCoefficient:
    """Coefficient of e^{ikz} in <vac|[J(z), rho_w]|vac>."""
    j = chi.lattice_index(basis.modes[0].ring_length)
    h = schwinger_harmonics(vac, chi, basis, **shifts)
    return HarmonicCoefficient(h.get(j, 0j), chi.wavenumber, antihermitian=True)


def nested_commutator_residual(A, B, C, D, tol: float = 1e-10) -> float:
    """Residual of [[A,B],[C,D]] = 2[A,D]{B,C} - 2[B,D]{A,C} - 2[A,C]{B,D} + 2[B,C]{A,D}.

    Requires the four cross anticommutators to be multiples of the identity.
    """
    A, B, C, D = (_mat(x) for x in (A, B, C, D))
    dim = A.shape[0]
    eye = sparse.identity(dim, dtype=complex, format="csr") if sparse.issparse(A) else np.eye(dim)
    scalars = {}
    deviations = {}
    for name, (x, y) in {"{A,C}": (A, C), "{A,D}": (A, D), "{B,C}": (B, C), "{B,D}": (B, D)}.items():
        ac = anticomm(x, y)
        c = ac.diagonal().sum() / dim
        dev = opnorm(ac - c * eye)
        scale = max(1.0, opnorm(ac))
        deviations[name] = dev
        if dev > tol * scale:
            raise PreconditionError(f"{name} is not a c-number (deviation {dev:.3e})", deviations)
        scalars[name] = c
    lhs = comm(comm(A, B), comm(C, D))
    rhs = (2 * scalars["{B,C}"] * comm(A, D) - 2 * scalars["{A,C}"] * comm(B, D)
           - 2 * scalars["{B,D}"] * comm(A, C) + 2 * scalars["{A,D}"] * comm(B, C))
    return opnorm(lhs - rhs)


def nested_commutator_identity_check(A, B, C, D, tol: float = 1e-10) -> float:
    return nested_commutator_residual(A, B, C, D, tol)


def nested_commutator_exhaustive(basis: FockBasis) -> float:
    """Largest identity residual over every ordered quadruple of ladder operators."""
    ops = [basis.annihilator(i).toarray() for i in range(basis.size)]
    ops += [a.conj().T for a in ops]
    dim = basis.dim
    n = len(ops)
    anti = np.empty((n, n), dtype=complex)
    com = [[None] * n for _ in range(n)]
    for i, x in enumerate(ops):
        for k, y in enumerate(ops):
            ac = x @ y + y @ x
            c = np.trace(ac) / dim
            if np.linalg.norm(ac - c * np.eye(dim)) > 1e-12:
                raise PreconditionError("ladder anticommutator is not a c-number", {})
            anti[i, k] = c
            com[i][k] = x @ y - y @ x
    worst = 0.0
    for a in range(n):
        for b in range(n):
            ab = com[a][b]
            for c in range(n):
                for d in range(n):
                    cd = com[c][d]
                    lhs = ab @ cd - cd @ ab
                    rhs = 2 * (anti[b, c] * com[a][d] - anti[a, c] * com[b][d]
                               - anti[b, d] * com[a][c] + anti[a, d] * com[b][c])
                    worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def exponential_identity_premises(H, rho, K) -> dict:
    H, rho, K = (_mat(x) for x in (H, rho, K))
    return {"[H,rho]+iK": opnorm(comm(H, rho) + 1j * K), "[rho,K]": opnorm(comm(rho, K))}


def exponential_identity_check(H, rho, K, premise_tol: float = 1e-12) -> float:
    """|| [H, exp(-i rho)] + exp(-i rho) K || via dense scaling-and-squaring expm."""
    premises = exponential_identity_premises(H, rho, K)
    if max(premises.values()) >= premise_tol:
        raise PreconditionError(
            "premises not met: " + ", ".join(f"{k}={v:.3e}" for k, v in premises.items()), premises)
    H, rho, K = (_mat(x) for x in (H, rho, K))
    dense = [x.toarray() if sparse.issparse(x) else np.asarray(x) for x in (H, rho, K)]
    if dense[0].shape[0] > 1 << MAX_EXPM_MODES:
        raise ConfigurationError(f"matrix exponential limited to dimension {1 << MAX_EXPM_MODES}")
    H, rho, K = dense
    U = scipy.linalg.expm(-1j * rho)
    return float(np.linalg.norm(H @ U - U @ H + U @ K))


def ladder_triple(basis: FockBasis, rng: np.random.Generator, n_terms: int = 3):
    """Synthetic (H, rho, K) satisfying [H, rho] = -iK and [rho, K] = 0.

    H is diagonal in occupations with integer-spaced single-mode energies;
    rho is a random combination of hops a_n^dagger a_m that all raise the energy
    by the same amount w, so [H, rho] = w rho and K = i w rho commutes with rho.
    """
    M = basis.size
    levels = rng.integers(0, 3, size=M)
    pairs = [(n, m) for n in range(M) for m in range(M) if levels[n] - levels[m] == 1]
    if not pairs:
        levels = np.arange(M) % 2
        pairs = [(n, m) for n in range(M) for m in range(M) if levels[n] - levels[m] == 1]
    w = float(rng.uniform(0.5, 2.0))
    s = np.arange(basis.dim, dtype=np.int64)
    diag = np.zeros(basis.dim)
    for i in range(M):
        diag += w * levels[i] * ((s >> i) & 1)
    # add a number-conserving c-number-free piece that commutes with rho: total number operator
    diag += float(rng.normal()) * np.array([bin(x).count("1") for x in s])
    H = sparse.diags(diag.astype(complex), format="csr")
    chosen = rng.choice(len(pairs), size=min(n_terms, len(pairs)), replace=False)
    rho = sparse.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for idx in chosen:
        n, m = pairs[idx]
        c = complex(rng.normal(), rng.normal())
        rho = rho + c * basis.hopping(n, m)
    K = 1j * w * rho
    return H.tocsr(), rho.tocsr(), K.tocsr()
