"""Plane-wave Dirac modes on a periodic ring in 1+1 dimensions.

Natural units (hbar = c = 1). Spinors use the representation where
``alpha_z`` couples components (0, 2) and (1, 3) and ``beta = diag(1, 1, -1, -1)``;
spin 1 lives in components (0, 2), spin 2 in (1, 3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, NonLatticeWavenumber

ALPHA_Z = np.array(
    [[0, 0, 1, 0],
     [0, 0, 0, -1],
     [1, 0, 0, 0],
     [0, -1, 0, 0]],
    dtype=complex,
)
BETA = np.diag([1, 1, -1, -1]).astype(complex)

# relative slack on the closed band boundary E <= m + dE
BAND_EDGE_RTOL = 1e-12


@dataclass(frozen=True)
class ModeParams:
    mass: float
    ring_length: float
    n_max: int
    charge: float = 1.0
    spins: tuple = (1, 2)

    def __post_init__(self):
        if not self.mass > 0:
            raise ConfigurationError(f"mass must be positive, got {self.mass!r}")
        if not self.ring_length > 0:
            raise ConfigurationError(f"ring_length must be positive, got {self.ring_length!r}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ConfigurationError(f"n_max must be an integer >= 1, got {self.n_max!r}")
        spins = tuple(sorted(set(self.spins)))
        if not spins or any(s not in (1, 2) for s in spins):
            raise ConfigurationError(f"spins must be a non-empty subset of (1, 2), got {self.spins!r}")
        object.__setattr__(self, "spins", spins)
        object.__setattr__(self, "n_max", int(self.n_max))

    @property
    def momentum_step(self) -> float:
        return 2 * math.pi / self.ring_length

    def momentum(self, n):
        return 2 * math.pi * n / self.ring_length

    @property
    def mode_count(self) -> int:
        return 2 * len(self.spins) * (2 * self.n_max + 1)


@dataclass(frozen=True, eq=False)
class Mode:
    n: int
    p: float
    energy: float
    sign: int
    spin: int
    spinor: np.ndarray = field(repr=False)
    ring_length: float = field(repr=False)

    @property
    def key(self):
        return (self.n, self.sign, self.spin)

    @property
    def signed_energy(self) -> float:
        return self.sign * self.energy


@dataclass(frozen=True)
class GaugeProfile:
    """chi(z) = amplitude * cos(wavenumber * z)."""

    amplitude: float
    wavenumber: float

    def __post_init__(self):
        if not self.wavenumber > 0:
            raise ConfigurationError(f"wavenumber must be positive, got {self.wavenumber!r}")

    def lattice_index(self, ring_length: float) -> int:
        j = self.wavenumber * ring_length / (2 * math.pi)
        jr = round(j)
        if jr < 1 or abs(j - jr) > 1e-9 * max(1.0, abs(j)):
            raise NonLatticeWavenumber(self.wavenumber, ring_length)
        return int(jr)

    @classmethod
    def from_index(cls, amplitude: float, index: int, ring_length: float) -> GaugeProfile:
        return cls(amplitude, 2 * math.pi * index / ring_length)


@dataclass(frozen=True)
class BandSpec:
    """Occupied negative-energy band from -m down to -(m + depth)."""

    depth: float

    def __post_init__(self):
        if not self.depth > 0:
            raise ConfigurationError(f"band depth must be positive, got {self.depth!r}")

    def radius(self, mass: float) -> float:
        """Momentum r with sqrt(r^2 + m^2) = m + depth."""
        return math.sqrt(self.depth * (2 * mass + self.depth))

    def contains_energy(self, energy, mass):
        return np.asarray(energy) <= (mass + self.depth) * (1 + BAND_EDGE_RTOL)

    def contains(self, mode: Mode, mass: float) -> bool:
        return mode.sign == -1 and bool(self.contains_energy(mode.energy, mass))

    def shell(self, params: ModeParams) -> int:
        """Largest |n| of an in-band momentum, capped at n_max; -1 if none."""
        n = np.arange(params.n_max + 1)
        e = np.sqrt(params.momentum(n) ** 2 + params.mass ** 2)
        inside = np.nonzero(self.contains_energy(e, params.mass))[0]
        return int(inside[-1]) if inside.size else -1

    def margin(self, params: ModeParams) -> int:
        """Lattice momenta between the band edge and the truncation boundary."""
        return params.n_max - self.shell(params)


def spinor(p: float, mass: float, ring_length: float, sign: int, spin: int) -> np.ndarray:
    """Normalized 4-spinor with u^dagger u = 1/L.

    For sign=-1 the printed form is rewritten with E - m = p^2/(E + m) so it
    stays finite at p = 0; there the p -> 0+ limit is used.
    """
    e = math.hypot(p, mass)
    norm = 2 * e * ring_length
    if sign == 1:
        upper = math.sqrt((e + mass) / norm)
        lower = p / math.sqrt(norm * (e + mass))
    elif sign == -1:
        upper = math.sqrt((p * p / (e + mass)) / norm)
        lower = -math.copysign(1.0, p) * math.sqrt((e + mass) / norm) if p != 0 else -math.sqrt((e + mass) / norm)
    else:
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    u = np.zeros(4, dtype=complex)
    if spin == 1:
        u[0], u[2] = upper, lower
    elif spin == 2:
        u[1], u[3] = upper, -lower
    else:
        raise ValueError(f"spin must be 1 or 2, got {spin!r}")
    return u


def make_mode(params: ModeParams, n: int, sign: int, spin: int) -> Mode:
    p = params.momentum(n)
    return Mode(
        n=int(n),
        p=p,
        energy=math.hypot(p, params.mass),
        sign=sign,
        spin=spin,
        spinor=spinor(p, params.mass, params.ring_length, sign, spin),
        ring_length=params.ring_length,
    )


def build_modes(params: ModeParams, n_range=None) -> list[Mode]:
    """All modes ordered by (n ascending, sign +1 then -1, spin ascending)."""
    if n_range is None:
        n_range = range(-params.n_max, params.n_max + 1)
    return [make_mode(params, n, sign, spin)
            for n in n_range for sign in (1, -1) for spin in params.spins]


def chi_matrix_element(a: Mode, b: Mode, chi: GaugeProfile) -> complex:
    """Ring integral of phi_a^dagger chi phi_b over one period."""
    j = chi.lattice_index(a.ring_length)
    if abs(a.n - b.n) != j:
        return 0j
    return 0.5 * chi.amplitude * a.ring_length * complex(np.vdot(a.spinor, b.spinor))


def current_pair_element(a: Mode, b: Mode) -> float:
    """(u_b^dagger alpha_z u_a)(u_a^dagger u_b), evaluated in closed form."""
    if a.spin != b.spin:
        return 0.0
    return (a.p / a.signed_energy + b.p / b.signed_energy) / (2 * a.ring_length ** 2)


def alpha_matrix_element(a: Mode, b: Mode) -> complex:
    return complex(np.vdot(a.spinor, ALPHA_Z @ b.spinor))


def gradient_matrix_element(a: Mode, b: Mode, chi: GaugeProfile) -> complex:
    """Ring integral of phi_a^dagger (-i alpha_z dchi/dz) phi_b."""
    j = chi.lattice_index(a.ring_length)
    dn = a.n - b.n
    if abs(dn) != j:
        return 0j
    # dchi/dz = -V0 k sin(kz); only e^{+-ikz} survive the ring integral
    sgn = 1 if dn > 0 else -1
    return sgn * 0.5 * chi.amplitude * chi.wavenumber * a.ring_length * alpha_matrix_element(a, b)


def first_quantized_commutator_check(a: Mode, b: Mode, chi: GaugeProfile) -> complex:
    """(lambda_a E_a - lambda_b E_b) <a|chi|b> - <a|[H0, chi]|b>; vanishes identically."""
    lhs = (a.signed_energy - b.signed_energy) * chi_matrix_element(a, b, chi)
    return lhs - gradient_matrix_element(a, b, chi)


def dirac_hamiltonian(p: float, mass: float) -> np.ndarray:
    return ALPHA_Z * p + BETA * mass


def completeness_residual(params: ModeParams, n: int) -> float:
    """max |sum_{sign, spin} u u^dagger - I/L| at momentum index n (both spins)."""
    total = np.zeros((4, 4), dtype=complex)
    for sign in (1, -1):
        for spin in (1, 2):
            u = spinor(params.momentum(n), params.mass, params.ring_length, sign, spin)
            total += np.outer(u, u.conj())
    return float(np.max(np.abs(total - np.eye(4) / params.ring_length)))


def mode_table(params: ModeParams) -> list[dict]:
    rows = []
    for mode in build_modes(params):
        row = {"n": mode.n, "p": mode.p, "E": mode.energy, "sign": mode.sign, "spin": mode.spin}
        for i, c in enumerate(mode.spinor):
            row[f"u{i}_re"] = c.real
            row[f"u{i}_im"] = c.imag
        row["completeness_residual"] = completeness_residual(params, mode.n)
        rows.append(row)
    return rows


MODE_TABLE_COLUMNS = (
    ["n", "p", "E", "sign", "spin"]
    + [f"u{i}_{part}" for i in range(4) for part in ("re", "im")]
    + ["completeness_residual"]
)
