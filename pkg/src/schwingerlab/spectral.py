"""Mode-sum evaluators that never build Fock matrices.

Each occupied mode couples only to the two momenta p +- k, so every sum here
costs O(number of modes). Overlaps come from closed forms: for equal spin,
|u_n^dagger u_m|^2 = (1 + l_n l_m (m^2 + p_n p_m) / (E_n E_m)) / (2 L^2), and the
current pair product is (p_n / l_n E_n + p_m / l_m E_m) / (2 L^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, MarginError
from .fock import MAX_MODES, FockBasis, VacuumSpec, rho_h_rho_expectation, schwinger_harmonics
from .harmonic import HarmonicCoefficient
from .modes import GaugeProfile, ModeParams

CLASSES = ("band_to_positive", "band_to_below", "within_band")


@dataclass(frozen=True)
class ModeSumConfig:
    params: ModeParams
    vac: VacuumSpec
    chi: GaugeProfile
    strict_margin: bool = True

    def __post_init__(self):
        j = self.lattice_index
        if self.vac.kind == "band":
            shell = self.vac.band.shell(self.params)
            if shell < 0:
                raise ConfigurationError("band contains no modes")
            margin = self.params.n_max - shell
            if self.strict_margin and margin < j:
                raise MarginError(margin, j)

    @property
    def lattice_index(self) -> int:
        return self.chi.lattice_index(self.params.ring_length)

    @property
    def margin(self) -> int | None:
        if self.vac.kind != "band":
            return None
        return self.params.n_max - self.vac.band.shell(self.params)


@dataclass
class SpectralReport:
    value: object
    term_count: int
    partials: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def partial_scale(self) -> float:
        return max((abs(v) for v in self.partials.values()), default=0.0)

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, HarmonicCoefficient):
                return v.to_dict()
            if isinstance(v, complex):
                return {"re": v.real, "im": v.imag}
            return v
        return {
            "value": enc(self.value),
            "term_count": self.term_count,
            "partials": {k: enc(v) for k, v in self.partials.items()},
            "counts": dict(self.counts),
            "extras": {k: enc(v) for k, v in self.extras.items()},
        }


def _occupied(cfg: ModeSumConfig, sign: np.ndarray, energy: np.ndarray) -> np.ndarray:
    neg = sign == -1
    if cfg.vac.kind == "standard":
        return neg
    return neg & cfg.vac.band.contains_energy(energy, cfg.params.mass)


def _pairs(cfg: ModeSumConfig):
    """Yield (shift, p_o, E_o, p_u, E_u, sign_u, class) arrays for occupied o, unoccupied-or-band u.

    Targets at n_o + shift, one entry per (occupied mode, target sign); the spin
    factor is applied by the callers (equal-spin pairs only, identical per spin).
    """
    P = cfg.params
    j = cfg.lattice_index
    n = np.arange(-P.n_max, P.n_max + 1)
    p = P.momentum(n)
    E = np.sqrt(p * p + P.mass ** 2)
    occ_neg = _occupied(cfg, -np.ones_like(n), E)
    for shift in (j, -j):
        src = np.nonzero(occ_neg & (np.abs(n + shift) <= P.n_max))[0]
        dst = src + shift
        for sign_u in (1, -1):
            if sign_u == 1:
                cls = np.full(src.size, 0)
            else:
                cls = np.where(occ_neg[dst], 2, 1)
            yield shift, p[src], E[src], p[dst], E[dst], sign_u, cls


def _fsum_by_class(values, cls, nspin):
    partials, counts = {}, {}
    for c, name in enumerate(CLASSES):
        sel = values[cls == c]
        partials[name] = nspin * math.fsum(sel)
        counts[name] = nspin * int(sel.size)
    return partials, counts


def spectral_sum_rhoHrho(cfg: ModeSumConfig) -> SpectralReport:
    """<vac| rho_w H0 rho_w |vac> as the all-n sum over occupied m.

    The within-band class is the antisymmetric F1 sum, identically zero; the
    other two classes reproduce the excitation spectrum.
    """
    P = cfg.params
    e, V0, L, mass = P.charge, cfg.chi.amplitude, P.ring_length, P.mass
    nspin = len(P.spins)
    vals, classes = [], []
    for _shift, p_o, E_o, p_u, E_u, s_u, cls in _pairs(cfg):
        overlap2 = (1 - s_u * (mass ** 2 + p_u * p_o) / (E_u * E_o)) / (2 * L ** 2)
        weight = s_u * E_u + E_o
        vals.append(e ** 2 * (0.5 * V0 * L) ** 2 * overlap2 * weight)
        classes.append(cls)
    vals = np.concatenate(vals) if vals else np.zeros(0)
    classes = np.concatenate(classes) if classes else np.zeros(0, dtype=int)
    if V0 == 0:
        keep = np.zeros(vals.size, dtype=bool)
        vals, classes = vals[keep], classes[keep]
    partials, counts = _fsum_by_class(vals, classes, nspin)
    total = math.fsum(partials.values())
    return SpectralReport(value=total, term_count=sum(counts.values()), partials=partials, counts=counts,
                          extras={"two_class_value": partials["band_to_positive"] + partials["band_to_below"]})


def f1_terms(cfg: ModeSumConfig) -> list:
    """Within-band terms e^2 |<n|chi|m>|^2 (E_m - E_n) as ((n_m, n_n), value), one spin."""
    P = cfg.params
    e, V0, L, mass = P.charge, cfg.chi.amplitude, P.ring_length, P.mass
    j = cfg.lattice_index
    out = []
    for nm in range(-P.n_max, P.n_max + 1):
        pm = P.momentum(nm)
        Em = math.hypot(pm, mass)
        if not _occupied(cfg, np.array([-1]), np.array([Em]))[0]:
            continue
        for nn in (nm + j, nm - j):
            if abs(nn) > P.n_max:
                continue
            pn = P.momentum(nn)
            En = math.hypot(pn, mass)
            if not _occupied(cfg, np.array([-1]), np.array([En]))[0]:
                continue
            overlap2 = (1 + (mass ** 2 + pn * pm) / (En * Em)) / (2 * L ** 2)
            out.append(((nm, nn), e ** 2 * (0.5 * V0 * L) ** 2 * overlap2 * (Em - En)))
    return out


def f1_antisymmetry_check(cfg: ModeSumConfig) -> float:
    """|F1| summed over both spins; zero by the n <-> m antisymmetry."""
    if cfg.vac.kind != "band":
        raise ConfigurationError("F1 is defined for the band vacuum")
    terms = [v for _, v in f1_terms(cfg)]
    return abs(len(cfg.params.spins) * math.fsum(terms))


def schwinger_mode_sum(cfg: ModeSumConfig) -> SpectralReport:
    """Coefficient of e^{ikz} in <vac|[J(z), rho_w]|vac> from the discrete mode sum.

    Partials split the amplitude into transitions to positive-energy states and
    to states below the band; ``extras['minus_k']`` is the independently summed
    e^{-ikz} amplitude.
    """
    P = cfg.params
    e, V0, L, mass = P.charge, cfg.chi.amplitude, P.ring_length, P.mass
    nspin = len(P.spins)
    plus, minus, classes = [], [], []
    for shift, p_o, E_o, p_u, E_u, s_u, cls in _pairs(cfg):
        keep = cls != 2  # both occupied: no contribution
        c = (p_u / (s_u * E_u) - p_o / E_o) / (2 * L ** 2)
        term = e ** 2 * 0.5 * V0 * L * c
        # term e^{iqz} - conj(term) e^{-iqz}, q = shift * step
        plus.append(np.where(keep, term if shift > 0 else -term, 0.0))
        minus.append(np.where(keep, -term if shift > 0 else term, 0.0))
        classes.append(np.where(keep, cls, 2))
    plus = np.concatenate(plus)
    minus = np.concatenate(minus)
    classes = np.concatenate(classes)
    if V0 == 0:
        classes = np.full(classes.size, -1)
    partials, counts = _fsum_by_class(plus, classes, nspin)
    counts["within_band"] = 0
    minus_partials, _ = _fsum_by_class(minus, classes, nspin)
    amp = math.fsum(partials.values())
    amp_minus = math.fsum(minus_partials.values())
    k = cfg.chi.wavenumber
    return SpectralReport(
        value=HarmonicCoefficient(complex(amp), k, antihermitian=True),
        term_count=sum(counts.values()),
        partials={name: complex(v) for name, v in partials.items()},
        counts=counts,
        extras={"minus_k": complex(amp_minus),
                "I_plus": HarmonicCoefficient(complex(partials["band_to_positive"]), k, True),
                "I_minus": HarmonicCoefficient(complex(partials["band_to_below"]), k, True)},
    )


def _reldev(a, b, scale):
    d = abs(a - b)
    if d == 0:
        return 0.0
    s = max(abs(a), abs(b), scale)
    return d / s if s > 0 else float("inf")


def oracle_crosscheck(cfg: ModeSumConfig, basis: FockBasis | None = None) -> dict:
    """Compare Fock-exact expectations with the mode sums on the same truncation."""
    from .modes import build_modes
    if basis is None:
        basis = FockBasis(build_modes(cfg.params), cfg.params.mass, cfg.params.charge)
    if basis.size > MAX_MODES:
        raise ConfigurationError(f"{basis.size} modes exceeds the Fock cap of {MAX_MODES}")
    j = cfg.lattice_index
    fock_rhr = rho_h_rho_expectation(cfg.vac, cfg.chi, basis)
    spec_rhr = spectral_sum_rhoHrho(cfg)
    harm = schwinger_harmonics(cfg.vac, cfg.chi, basis)
    spec_sw = schwinger_mode_sum(cfg)
    fock_plus, fock_minus = harm.get(j, 0j), harm.get(-j, 0j)
    stray = max((abs(v) for q, v in harm.items() if abs(q) != j), default=0.0)
    dev = {
        "rho_h_rho": _reldev(fock_rhr, spec_rhr.value, spec_rhr.partial_scale()),
        "schwinger_plus_k": _reldev(fock_plus, spec_sw.value.amplitude, spec_sw.partial_scale()),
        "schwinger_minus_k": _reldev(fock_minus, spec_sw.extras["minus_k"], spec_sw.partial_scale()),
    }
    return {
        "max_relative_deviation": max(dev.values()),
        "deviations": dev,
        "fock": {"rho_h_rho": fock_rhr, "schwinger_plus_k": fock_plus, "schwinger_minus_k": fock_minus,
                 "stray_harmonics": stray},
        "spectral": {"rho_h_rho": spec_rhr.value, "schwinger_plus_k": complex(spec_sw.value.amplitude),
                     "schwinger_minus_k": spec_sw.extras["minus_k"]},
    }
