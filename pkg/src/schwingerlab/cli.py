"""Command-line entry point: ``schwingerlab <command> --config run.yaml``.

Exit codes: 0 all checks pass (or skip), 1 at least one check failed,
2 configuration error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import yaml

from . import continuum as cont
from . import fock, spectral
from .errors import ConfigurationError, MarginError
from .fock import FockBasis, VacuumSpec
from .modes import (
    BandSpec,
    GaugeProfile,
    ModeParams,
    alpha_matrix_element,
    build_modes,
    chi_matrix_element,
    completeness_residual,
    current_pair_element,
    first_quantized_commutator_check,
    mode_table,
    MODE_TABLE_COLUMNS,
)
from .report import FAIL, INFO, PASS, Check, Report, bound, skipped, write_csv

EXACT_TOL = 1e-12
ORACLE_MAX_MODES = 12
SCAN_COLUMNS = (
    "index", "sweep", "ring_length", "n_max", "cutoff", "band_depth",
    "cutoff_integral", "cutoff_deviation", "band_relative_residual", "band_limit_residual",
    "discrete_sin_part", "lattice_sin_part", "reduced_sin_part", "discrete_over_lattice",
    "band_discrete_amplitude", "band_partial_scale",
)


# ---------------------------------------------------------------- config

def load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"invalid YAML in {path}: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError("config root must be a mapping")
    return data


def _num(x):
    try:
        return float(x)
    except (TypeError, ValueError):
        raise ConfigurationError(f"expected a number, got {x!r}") from None


def _int(x):
    v = _num(x)
    if v != int(v):
        raise ConfigurationError(f"expected an integer, got {x!r}")
    return int(v)


def _section(cfg, name):
    sec = cfg.get(name) or {}
    if not isinstance(sec, dict):
        raise ConfigurationError(f"config section {name!r} must be a mapping")
    return sec


def _ring_length(sec) -> float:
    if "ring_length" in sec:
        return _num(sec["ring_length"])
    if "ring_length_over_pi" in sec:
        return math.pi * _num(sec["ring_length_over_pi"])
    raise ConfigurationError("modes section needs ring_length or ring_length_over_pi")


def mode_params(cfg, required=True, **overrides) -> ModeParams | None:
    sec = _section(cfg, "modes")
    if not sec and not required:
        return None
    if not sec:
        raise ConfigurationError("a 'modes' section is required for this command")
    if "n_max" not in sec and "n_max" not in overrides:
        raise ConfigurationError("modes section needs n_max")
    kw = dict(
        mass=_num(sec.get("mass", 1.0)),
        ring_length=_ring_length(sec),
        n_max=sec.get("n_max"),
        charge=_num(sec.get("charge", 1.0)),
        spins=tuple(_int(v) for v in sec.get("spins", (1, 2))),
    )
    kw.update(overrides)
    return ModeParams(**kw)


def gauge_profile(cfg, ring_length) -> GaugeProfile:
    sec = _section(cfg, "gauge")
    amp = _num(sec.get("amplitude", 1.0))
    if "wavenumber_index" in sec:
        return GaugeProfile.from_index(amp, _int(sec["wavenumber_index"]), ring_length)
    g = GaugeProfile(amp, _num(sec.get("wavenumber", 2 * math.pi / ring_length)))
    g.lattice_index(ring_length)
    return g


def band_vacuum(cfg) -> VacuumSpec | None:
    sec = _section(cfg, "band")
    if "depth" not in sec:
        return None
    return VacuumSpec.with_band(_num(sec["depth"]))


def continuum_params(cfg) -> cont.ContinuumParams:
    sec = _section(cfg, "continuum")
    msec, gsec = _section(cfg, "modes"), _section(cfg, "gauge")
    k = sec.get("wavenumber", gsec.get("wavenumber", 1.0))
    cutoff = sec.get("cutoff")
    return cont.ContinuumParams(
        mass=_num(sec.get("mass", msec.get("mass", 1.0))),
        wavenumber=_num(k),
        amplitude=_num(sec.get("amplitude", gsec.get("amplitude", 1.0))),
        charge=_num(sec.get("charge", msec.get("charge", 1.0))),
        cutoff=None if cutoff is None else _num(cutoff),
    )


# ---------------------------------------------------------------- modes

def cmd_modes(cfg, args):
    P = mode_params(cfg)
    chi = gauge_profile(cfg, P.ring_length)
    rep = Report("modes", cfg)
    modes = build_modes(P)
    L = P.ring_length
    rep.add(Check("mode_count", PASS if len(modes) == P.mode_count else FAIL, len(modes)))
    norm = max(abs(np.vdot(m.spinor, m.spinor).real * L - 1) for m in modes)
    rep.add(bound("spinor_normalization", norm, 1e-14))
    compl = max(completeness_residual(P, n) for n in range(-P.n_max, P.n_max + 1)) * L
    rep.add(bound("spinor_completeness", compl, 1e-14))
    ortho = 0.0
    fq = 0.0
    herm = 0.0
    pair_dev = 0.0
    by_n = {}
    for m in modes:
        by_n.setdefault(m.n, []).append(m)
    j = chi.lattice_index(L)
    # chi and the current pair product vanish unless |n_a - n_b| is 0 or j
    for a in modes:
        for b in (b for dn in {0, j, -j} for b in by_n.get(a.n + dn, ())):
            if a.n == b.n and a.key != b.key:
                ortho = max(ortho, abs(np.vdot(a.spinor, b.spinor)) * L)
            fq = max(fq, abs(first_quantized_commutator_check(a, b, chi)))
            herm = max(herm, abs(chi_matrix_element(a, b, chi) - np.conj(chi_matrix_element(b, a, chi))))
            brute = alpha_matrix_element(b, a) * np.vdot(a.spinor, b.spinor)
            pair_dev = max(pair_dev, abs(brute - current_pair_element(a, b)) * L * L)
    rep.add(bound("orthonormality_equal_momentum", ortho, 1e-14))
    rep.add(bound("first_quantized_identity", fq, EXACT_TOL))
    rep.add(bound("chi_hermiticity", herm, EXACT_TOL))
    rep.add(bound("current_pair_closed_form", pair_dev, EXACT_TOL))
    rows = mode_table(P)
    return rep, {"modes.csv": (MODE_TABLE_COLUMNS, rows)}


# ---------------------------------------------------------------- fock

def _fock_checks(rep, P, chi, band, rng, identity_modes=3, n_triples=3):
    modes = build_modes(P)
    basis = FockBasis(modes, P.mass, P.charge)
    j = chi.lattice_index(P.ring_length)
    rep.add(bound("car_relations", fock.car_residual(basis), EXACT_TOL))

    std = VacuumSpec.standard()
    vacua = [("standard", std)]
    band_ok = False
    band_reason = "no band configured"
    if band is not None:
        shell = band.band.shell(P)
        margin = P.n_max - shell
        if shell < 0:
            band_reason = "band contains no mode"
        else:
            vacua.append(("band", band))
            band_ok = margin >= j
            if not band_ok:
                band_reason = f"band margin {margin} < k index {j}"
    else:
        rep.add(skipped("band_vacuum", band_reason))

    rho = fock.build_rho_w(basis, chi)
    rep.add(bound("rho_w_hermitian", fock.opnorm(rho.matrix - rho.matrix.conj().T), EXACT_TOL))
    jherm = max(fock.opnorm((Jz := fock.build_current(basis, z).matrix) - Jz.conj().T)
                for z in (0.0, 0.37, 1.9))
    rep.add(bound("current_hermitian", jherm, EXACT_TOL))

    for name, vac in vacua:
        state = fock.build_vacuum(vac, basis)
        rep.add(bound(f"vacuum_relations_{name}", fock.vacuum_conditions_residual(vac, basis, state), 0.0))
        H = fock.build_H0(basis, vac)
        rep.add(bound(f"H0_annihilates_{name}", float(np.linalg.norm(H.matrix @ state)), 0.0))
        rep.results[f"xi_R_{name}"] = H.shift
        rep.results[f"rho_w_vac_{name}"] = fock.expectation(rho, state).real
        rep.results[f"J_vac_{name}"] = fock.expectation(fock.build_current(basis, 0.0), state).real
        dc = fock.double_commutator_expectation(vac, chi, basis)
        rhr = fock.rho_h_rho_expectation(vac, chi, basis)
        scale = max(abs(rhr), spectral_scale(P, vac, chi))
        rep.add(bound(f"double_commutator_equals_rho_h_rho_{name}", abs(dc - rhr), EXACT_TOL * max(scale, 1.0),
                      value={"double_commutator": dc, "rho_h_rho": rhr}))
        shifted = fock.double_commutator_expectation(vac, chi, basis, h_shift=3.7, rho_shift=-1.3)
        rep.add(bound(f"c_number_shift_invariance_{name}", abs(shifted - dc), EXACT_TOL * max(scale, 1.0)))
        sw = fock.schwinger_expectation(vac, chi, basis)
        rep.results[f"schwinger_fock_{name}"] = sw
        if name == "standard":
            X = fock.chi_matrix(basis, chi)
            occ = fock.occupied_mask(vac, basis)
            connected = np.abs(X[np.ix_(~occ, occ)]).max(initial=0.0) > 0
            if connected:
                rep.add(Check("standard_double_commutator_positive", PASS if dc > 0 else FAIL, dc))
            else:
                rep.add(skipped("standard_double_commutator_positive",
                                "no occupied->unoccupied chi-connected pair"))
        else:
            if band_ok:
                rep.add(bound("band_double_commutator_zero", abs(dc), EXACT_TOL * max(scale, 1.0),
                              value=dc))
                sw_scale = spectral_schwinger_scale(P, vac, chi)
                rep.add(bound("band_schwinger_zero", abs(sw), EXACT_TOL * max(sw_scale, 1e-300),
                              value=sw))
            else:
                rep.add(skipped("band_double_commutator_zero", band_reason))
                rep.add(skipped("band_schwinger_zero", band_reason))

    # premises of the exponential identity on the physical pair: reported only
    flux = fock.build_gauge_flux(basis, chi)
    prem = fock.exponential_identity_premises(fock.build_H0(basis, std), rho, flux)
    rep.add(Check("physical_pair_premises", INFO, prem,
                  reason="truncated [rho_w, flux] need not vanish"))

    small = FockBasis(modes[:min(identity_modes, len(modes))], P.mass, P.charge)
    rep.add(bound("nested_commutator_exhaustive", fock.nested_commutator_exhaustive(small), EXACT_TOL))
    worst = 0.0
    for _ in range(n_triples):
        H, r, K = fock.ladder_triple(small, rng)
        worst = max(worst, fock.exponential_identity_check(H, r, K))
    rep.add(bound("exponential_identity_synthetic", worst, 1e-10))


def spectral_scale(P, vac, chi) -> float:
    try:
        r = spectral.spectral_sum_rhoHrho(spectral.ModeSumConfig(P, vac, chi, strict_margin=False))
    except ConfigurationError:
        return 0.0
    return r.partial_scale()


def spectral_schwinger_scale(P, vac, chi) -> float:
    r = spectral.schwinger_mode_sum(spectral.ModeSumConfig(P, vac, chi, strict_margin=False))
    return r.partial_scale()


def cmd_fock_check(cfg, args):
    P = mode_params(cfg)
    if P.mode_count > fock.MAX_MODES:
        raise ConfigurationError(f"{P.mode_count} modes exceeds the Fock cap of {fock.MAX_MODES}")
    chi = gauge_profile(cfg, P.ring_length)
    rep = Report("fock-check", cfg)
    fsec = _section(cfg, "fock")
    _fock_checks(rep, P, chi, band_vacuum(cfg), np.random.default_rng(args.seed),
                 identity_modes=_int(fsec.get("identity_modes", 3)), n_triples=_int(fsec.get("triples", 3)))
    return rep, {}


# ---------------------------------------------------------------- spectral

def cmd_spectral(cfg, args):
    P = mode_params(cfg)
    chi = gauge_profile(cfg, P.ring_length)
    band = band_vacuum(cfg)
    rep = Report("spectral", cfg)
    std = spectral.ModeSumConfig(P, VacuumSpec.standard(), chi)
    r = spectral.spectral_sum_rhoHrho(std)
    rep.results["rho_h_rho_standard"] = r
    rep.add(Check("standard_rho_h_rho_positive", PASS if r.value > 0 else FAIL, r.value))
    sw = spectral.schwinger_mode_sum(std)
    rep.results["schwinger_standard"] = sw
    rep.add(Check("standard_schwinger_nonzero", PASS if abs(sw.value) > 0 else FAIL, sw.value))
    if band is None:
        rep.add(skipped("band_checks", "no band configured"))
    else:
        try:
            bcfg = spectral.ModeSumConfig(P, band, chi)
        except MarginError as exc:
            rep.add(skipped("band_checks", str(exc)))
            bcfg = None
        if bcfg is not None:
            br = spectral.spectral_sum_rhoHrho(bcfg)
            rep.results["rho_h_rho_band"] = br
            rep.add(bound("band_rho_h_rho_zero", abs(br.value), EXACT_TOL * br.partial_scale()))
            rep.add(Check("band_below_class_nonpositive",
                          PASS if br.partials["band_to_below"] <= 0 else FAIL, br.partials["band_to_below"]))
            f1 = spectral.f1_antisymmetry_check(bcfg)
            scale = sum(abs(v) for _, v in spectral.f1_terms(bcfg)) * len(P.spins)
            rep.add(bound("f1_antisymmetry", f1, EXACT_TOL * max(scale, 1e-300)))
            bsw = spectral.schwinger_mode_sum(bcfg)
            rep.results["schwinger_band"] = bsw
            rep.add(bound("band_schwinger_zero", abs(bsw.value), EXACT_TOL * bsw.partial_scale()))
    if P.mode_count <= ORACLE_MAX_MODES:
        cfgs = [("standard", std)]
        if band is not None:
            try:
                cfgs.append(("band", spectral.ModeSumConfig(P, band, chi)))
            except MarginError:
                pass
        for name, c in cfgs:
            o = spectral.oracle_crosscheck(c)
            rep.results[f"oracle_{name}"] = o
            rep.add(bound(f"oracle_{name}", o["max_relative_deviation"], EXACT_TOL))
    else:
        rep.add(skipped("oracle", f"{P.mode_count} modes exceeds the oracle limit of {ORACLE_MAX_MODES}"))
    return rep, {}


# ---------------------------------------------------------------- schwinger

def cmd_schwinger(cfg, args):
    rep = Report("schwinger", cfg)
    cp = continuum_params(cfg)
    red = cont.schwinger_standard(cp, "reduced")
    lat = cont.schwinger_standard(cp, "lattice")
    rep.results["continuum_reduced"] = red
    rep.results["continuum_lattice"] = lat
    rep.results["delta_J_vac_reduced"] = cont.delta_J_vac(cp, "reduced")
    rep.results["lattice_over_reduced"] = cont.LATTICE_OVER_REDUCED
    P = mode_params(cfg, required=False)
    if P is None:
        rep.add(Check("continuum_only", INFO, red.sin_part))
        return rep, {}
    chi = gauge_profile(cfg, P.ring_length)
    tol = _num(_section(cfg, "schwinger").get("relative_tolerance", 0.02))
    std = spectral.schwinger_mode_sum(spectral.ModeSumConfig(P, VacuumSpec.standard(), chi))
    disc = std.value.sin_part
    rep.results["discrete_standard"] = std
    for name, ref in (("reduced", red), ("lattice", lat)):
        ratio = disc / ref.sin_part
        rep.results[f"discrete_over_continuum_{name}"] = ratio
        rep.add(bound(f"discrete_vs_continuum_{name}", abs(ratio - 1), tol, value=ratio))
    band = band_vacuum(cfg)
    if band is None:
        rep.add(skipped("band_schwinger_zero", "no band configured"))
    else:
        try:
            bsw = spectral.schwinger_mode_sum(spectral.ModeSumConfig(P, band, chi))
            rep.results["discrete_band"] = bsw
            rep.add(bound("band_schwinger_zero", abs(bsw.value), EXACT_TOL * bsw.partial_scale()))
        except MarginError as exc:
            rep.add(skipped("band_schwinger_zero", str(exc)))
    return rep, {}


# ---------------------------------------------------------------- continuum

def cmd_continuum(cfg, args):
    rep = Report("continuum", cfg)
    cp = continuum_params(cfg)
    if cp.cutoff is None:
        cp = cp.with_cutoff(max(50.0 * abs(cp.wavenumber), 2 * abs(cp.wavenumber)))
    closed = cont.cutoff_integral(cp)
    quad = cont.cutoff_integral_quad(cp)
    rep.add(bound("cutoff_integral_quadrature", abs(closed - quad), 1e-10,
                  value={"closed": closed, "quadrature": quad}))
    massless = cont.cutoff_integral(cont.ContinuumParams(0.0, cp.wavenumber, cutoff=cp.cutoff))
    rep.add(bound("cutoff_integral_massless", abs(massless - 2 * cp.wavenumber), 0.0, value=massless))
    rep.results["cutoff_deviation"] = cont.cutoff_integral_deviation(cp)
    for norm in cont.NORMALIZATIONS:
        rep.results[f"schwinger_standard_{norm}"] = cont.schwinger_standard(cp, norm)
        rep.results[f"schwinger_standard_limit_{norm}"] = cont.schwinger_standard(cp.with_cutoff(None), norm)
        rep.results[f"delta_J_vac_{norm}"] = cont.delta_J_vac(cp.with_cutoff(None), norm)
    canc = cont.band_cancellation(cp)
    rep.results["band"] = canc
    rep.add(bound("band_cancellation", canc["relative_residual"], 3 * abs(cp.wavenumber) / cp.cutoff))
    cases = cont.band_delta_cases(cp)
    empty = [v["value"] for v in cases.values() if v["support"] is None]
    rep.add(bound("band_empty_delta_supports", max(map(abs, empty), default=0.0), 0.0))
    from_cases = cont.band_minus_from_cases(cp)
    rep.add(bound("band_minus_quadrature", abs(from_cases + canc["I_plus"]) / abs(canc["I_plus"]), 1e-10))
    rep.results["band_delta_cases"] = {f"{a}{b}": v for (a, b), v in cases.items()}
    return rep, {}


# ---------------------------------------------------------------- scan

def _scan_point(point):
    kind = point["sweep"]
    row = {k: point.get(k) for k in ("index", "sweep", "ring_length", "n_max", "cutoff", "band_depth")}
    if kind == "cutoff":
        cp = cont.ContinuumParams(point["mass"], point["wavenumber"], point["amplitude"], point["charge"],
                                  point["cutoff"])
        canc = cont.band_cancellation(cp)
        row.update(cutoff_integral=cont.cutoff_integral(cp),
                   cutoff_deviation=cont.cutoff_integral_deviation(cp),
                   band_relative_residual=canc["relative_residual"],
                   band_limit_residual=canc["limit_residual"])
    elif kind == "ring_length":
        P = ModeParams(point["mass"], point["ring_length"], point["n_max"], point["charge"])
        chi = GaugeProfile(point["amplitude"], point["wavenumber"])
        sw = spectral.schwinger_mode_sum(spectral.ModeSumConfig(P, VacuumSpec.standard(), chi))
        cp = cont.ContinuumParams(point["mass"], point["wavenumber"], point["amplitude"], point["charge"])
        lat = cont.schwinger_standard(cp, "lattice").sin_part
        row.update(discrete_sin_part=sw.value.sin_part, lattice_sin_part=lat,
                   reduced_sin_part=cont.schwinger_standard(cp, "reduced").sin_part,
                   discrete_over_lattice=sw.value.sin_part / lat)
    elif kind == "band_depth":
        P = ModeParams(point["mass"], point["ring_length"], point["n_max"], point["charge"])
        chi = GaugeProfile(point["amplitude"], point["wavenumber"])
        sw = spectral.schwinger_mode_sum(spectral.ModeSumConfig(P, VacuumSpec.with_band(point["band_depth"]), chi))
        row.update(band_discrete_amplitude=abs(sw.value), band_partial_scale=sw.partial_scale())
    return row


def fit_slope(x, y):
    """Least-squares slope of log y against log x; None when degenerate."""
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    keep = (x > 0) & (y > 0) & np.isfinite(y)
    x, y = x[keep], y[keep]
    if x.size < 2 or np.ptp(np.log(x)) == 0:
        return None
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def scan_points(cfg) -> list:
    sec = _section(cfg, "scan")
    msec = _section(cfg, "modes")
    cp = continuum_params(cfg)
    base = dict(mass=cp.mass, wavenumber=cp.wavenumber, amplitude=cp.amplitude, charge=cp.charge)
    points = []
    for r in sec.get("cutoffs") or []:
        points.append(dict(base, sweep="cutoff", cutoff=_num(r)))
    lengths = list(sec.get("ring_lengths") or []) + [math.pi * v for v in sec.get("ring_lengths_over_pi") or []]
    if lengths:
        if "momentum_cutoff" not in sec:
            raise ConfigurationError("ring-length scans need scan.momentum_cutoff")
        for L in lengths:
            L = _num(L)
            GaugeProfile(cp.amplitude, cp.wavenumber).lattice_index(L)
            n_max = int(math.floor(_num(sec["momentum_cutoff"]) * L / (2 * math.pi) + 1e-9))
            points.append(dict(base, sweep="ring_length", ring_length=L, n_max=n_max))
    depths = sec.get("band_depths") or []
    if depths:
        L = _ring_length(msec)
        chi = GaugeProfile(cp.amplitude, cp.wavenumber)
        j = chi.lattice_index(L)
        margin = _int(sec.get("margin", j))
        for d in depths:
            shell = BandSpec(_num(d)).shell(ModeParams(cp.mass, L, int(L * (cp.mass + _num(d))) + 1))
            n_max = max(shell, 0) + margin
            points.append(dict(base, sweep="band_depth", ring_length=L, n_max=n_max, band_depth=_num(d)))
    if not points:
        raise ConfigurationError("scan needs at least one non-empty range (cutoffs, ring_lengths, band_depths)")
    for i, p in enumerate(points):
        p["index"] = i
    return points


def cmd_scan(cfg, args):
    points = scan_points(cfg)
    sec = _section(cfg, "scan")
    workers = max(1, int(args.workers))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_scan_point, points))
    else:
        rows = [_scan_point(p) for p in points]
    rows.sort(key=lambda r: r["index"])
    rep = Report("scan", cfg)
    cut = [r for r in rows if r["sweep"] == "cutoff"]
    slopes = {
        "cutoff_deviation": fit_slope([r["cutoff"] for r in cut], [r["cutoff_deviation"] for r in cut]),
        "band_relative_residual": fit_slope([r["cutoff"] for r in cut], [r["band_relative_residual"] for r in cut]),
        "band_limit_residual": fit_slope([r["cutoff"] for r in cut], [r["band_limit_residual"] for r in cut]),
    }
    rep.results["fitted_slopes"] = {k: ("N/A" if v is None else v) for k, v in slopes.items()}
    expected = _num(sec.get("expected_slope", -1.0))
    slope_tol = _num(sec.get("slope_tolerance", 0.05))
    if cut:
        s = slopes["cutoff_deviation"]
        if s is None:
            rep.add(Check("cutoff_deviation_slope", INFO, "N/A",
                          reason="fewer than two distinct cutoffs"))
        else:
            rep.add(bound("cutoff_deviation_slope", abs(s - expected), slope_tol,
                          value={"slope": s, "expected": expected}))
        worst = max(r["band_relative_residual"] - 3 * abs(cp_k(cfg)) / r["cutoff"] for r in cut)
        rep.add(bound("band_cancellation_bound", max(worst, 0.0), 0.0))
    band_rows = [r for r in rows if r["sweep"] == "band_depth"]
    if band_rows:
        worst = max(r["band_discrete_amplitude"] / r["band_partial_scale"] if r["band_partial_scale"] else 0.0
                    for r in band_rows)
        rep.add(bound("band_depth_flat_zero", worst, EXACT_TOL))
    len_rows = [r for r in rows if r["sweep"] == "ring_length"]
    if len_rows:
        rep.results["discrete_over_lattice"] = [r["discrete_over_lattice"] for r in len_rows]
    return rep, {"scan.csv": (SCAN_COLUMNS, rows)}


def cp_k(cfg):
    return continuum_params(cfg).wavenumber


# ---------------------------------------------------------------- main

COMMANDS = {
    "modes": cmd_modes,
    "fock-check": cmd_fock_check,
    "spectral": cmd_spectral,
    "schwinger": cmd_schwinger,
    "continuum": cmd_continuum,
    "scan": cmd_scan,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="schwingerlab", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="YAML run configuration")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--format", choices=("json", "csv", "both"), default="both")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    return ap


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        cfg = load_config(args.config)
        rep, tables = COMMANDS[args.command](cfg, args)
    except (ConfigurationError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    rep.timing = {"seconds": time.perf_counter() - t0}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = args.command.replace("-", "_")
    if args.format in ("json", "both"):
        (out / f"{stem}_report.json").write_text(rep.dumps())
    if args.format in ("csv", "both"):
        for name, (cols, rows) in tables.items():
            write_csv(out / name, cols, rows)
    for c in rep.checks:
        print(f"{c.status:4s}  {c.name}", file=stdout)
    print(f"{rep.summary()['status']}  {args.command}", file=stdout)
    return 1 if rep.failed else 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
