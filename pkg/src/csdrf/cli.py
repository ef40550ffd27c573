"""Command-line front end: scenario configs in, CSV curve data out.

Scenarios are flat INI files (sections [source], [rates], [methods],
[numerics], [output]) naming a built-in spectral family and its parameters.
Output is deterministic: fixed grids, fixed-order reductions, 17 significant
digits, newline-terminated rows, no timestamps.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import dataclass, field

import numpy as np

from . import drf as drf_mod
from . import oracle as oracle_mod
from .polyphase import psd_pc_matrix_continuous, psd_pc_matrix_discrete
from .quadrature import segmented_midpoint
from .spectra import (DiscreteCsProcess, PamCyclicSpectrum, PulseShape,
                      StationaryPsd, am_cpsd, flat_psd, ideal_interp_pulse,
                      modulated_ma, pam_cpsd, raised_cosine_psd,
                      raised_cosine_pulse, rect_pulse, stationary_cyclic,
                      triangle_pulse, triangular_psd, white_cs)
from .waterfilling import hermitian_eigenvalues, stationary_drf

CSV_HEADER = "rate_bits,distortion,theta,method,M,converged"

SOURCE_KINDS = ("stationary", "discrete-cs", "am", "pam", "sampled-coding")


class ConfigError(Exception):
    pass


@dataclass
class Scenario:
    kind: str
    family: str = "flat"
    bandwidth: float = 1.0
    power: float = 1.0
    f0: float = 4.0
    phase: float = 0.0
    pulse: str = "rect"
    pulse_beta: float = 0.25
    symbol_rates: tuple = (1.0,)
    normalize_power: bool = False
    include_baseband: bool = False
    sampling_rate: float = 1.0
    variances: tuple = (1.0, 4.0)
    mod_scales: tuple = ()
    ma_taps: tuple = (1.0,)
    methods: tuple = ("drf",)
    rates: np.ndarray = field(default_factory=lambda: np.array([1.0]))
    out_path: str = "out.csv"
    # numeric overrides
    phi_grid: int = 2048
    m_start: int = 4
    m_max: int = 64
    convergence_tol: float = 1e-4
    oracle_n: int = 256
    oracle_periods: int = 8
    t_grid: int = 64
    oracle_tol: float = 1e-3
    spectra_m: int = 8
    spectra_points: int = 512


def _get(cp, section, key, cast, default=None, required=False):
    if not cp.has_option(section, key):
        if required:
            raise ConfigError(f"missing required key '{key}' in section [{section}]")
        return default
    raw = cp.get(section, key)
    try:
        return cast(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for [{section}] {key}: {raw!r} ({exc})") from exc


def _floats(raw):
    return tuple(float(x) for x in raw.replace(",", " ").split())


def _bool(raw):
    low = raw.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def load_scenario(path: str) -> Scenario:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = cp.read(path)
    if not read:
        raise ConfigError(f"cannot read config file: {path}")
    if not cp.has_section("source"):
        raise ConfigError("missing required section [source]")
    kind = _get(cp, "source", "kind", str, required=True).strip()
    if kind not in SOURCE_KINDS:
        raise ConfigError(f"unknown source kind {kind!r} for key 'kind'; "
                          f"expected one of {SOURCE_KINDS}")
    sc = Scenario(kind=kind)
    sc.family = _get(cp, "source", "family", str, sc.family).strip()
    sc.bandwidth = _get(cp, "source", "bandwidth", float, sc.bandwidth)
    sc.power = _get(cp, "source", "power", float, sc.power)
    sc.f0 = _get(cp, "source", "f0", float, sc.f0)
    sc.phase = _get(cp, "source", "phase", float, sc.phase)
    sc.pulse = _get(cp, "source", "pulse", str, sc.pulse).strip()
    sc.pulse_beta = _get(cp, "source", "pulse_beta", float, sc.pulse_beta)
    rates_raw = _get(cp, "source", "symbol_rates", _floats, None)
    if rates_raw is None:
        single = _get(cp, "source", "symbol_rate", float, None)
        rates_raw = (single,) if single is not None else sc.symbol_rates
    sc.symbol_rates = rates_raw
    sc.normalize_power = _get(cp, "source", "normalize_power", _bool, sc.normalize_power)
    sc.include_baseband = _get(cp, "source", "include_baseband", _bool, sc.include_baseband)
    sc.sampling_rate = _get(cp, "source", "sampling_rate", float, sc.sampling_rate)
    sc.variances = _get(cp, "source", "variances", _floats, sc.variances)
    sc.mod_scales = _get(cp, "source", "mod_scales", _floats, sc.mod_scales)
    sc.ma_taps = _get(cp, "source", "ma_taps", _floats, sc.ma_taps)

    if cp.has_section("rates"):
        rmin = _get(cp, "rates", "min", float, 0.1)
        rmax = _get(cp, "rates", "max", float, 8.0)
        count = _get(cp, "rates", "count", int, 6)
        spacing = _get(cp, "rates", "spacing", str, "log").strip()
        if count < 1:
            raise ConfigError("[rates] count must be at least 1")
        if rmin < 0:
            raise ConfigError("[rates] min must be nonnegative")
        if spacing == "log":
            if rmin <= 0:
                raise ConfigError("[rates] spacing=log requires min > 0")
            sc.rates = np.geomspace(rmin, rmax, count)
        elif spacing == "linear":
            sc.rates = np.linspace(rmin, rmax, count)
        else:
            raise ConfigError(f"[rates] spacing must be 'log' or 'linear', got {spacing!r}")

    if cp.has_section("methods"):
        sc.methods = tuple(_get(cp, "methods", "methods", str, "drf").split())
    for key in ("phi_grid", "m_start", "m_max", "oracle_n", "oracle_periods",
                "t_grid", "spectra_m", "spectra_points"):
        setattr(sc, key, _get(cp, "numerics", key, int, getattr(sc, key)))
    for key in ("convergence_tol", "oracle_tol"):
        setattr(sc, key, _get(cp, "numerics", key, float, getattr(sc, key)))
    sc.out_path = _get(cp, "output", "path", str, sc.out_path)
    return sc


# ---------------------------------------------------------------------------
# model construction
# ---------------------------------------------------------------------------

def make_base(sc: Scenario) -> StationaryPsd:
    fam = sc.family
    if fam == "flat":
        return flat_psd(sc.bandwidth, sc.power)
    if fam == "triangular":
        return triangular_psd(sc.bandwidth, sc.power)
    if fam == "raised_cosine":
        return raised_cosine_psd(sc.bandwidth, sc.power)
    raise ConfigError(f"unknown spectral family {sc.family!r} for key 'family'")


def make_pulse(sc: Scenario, t_symbol: float) -> PulseShape:
    name = sc.pulse
    if name == "rect":
        return rect_pulse(t_symbol)
    if name == "triangle":
        return triangle_pulse(t_symbol)
    if name == "ideal":
        return ideal_interp_pulse(t_symbol)
    if name == "raised_cosine":
        return raised_cosine_pulse(t_symbol, sc.pulse_beta)
    raise ConfigError(f"unknown pulse {sc.pulse!r} for key 'pulse'")


def make_discrete(sc: Scenario) -> DiscreteCsProcess:
    if sc.mod_scales:
        return modulated_ma(sc.mod_scales, sc.ma_taps)
    return white_cs(sc.variances)


def _normalized_pam(sc: Scenario, base: StationaryPsd, fs: float) -> PamCyclicSpectrum:
    t0 = 1.0 / fs
    pulse = make_pulse(sc, t0)
    spec = pam_cpsd(base, pulse, t0)
    if sc.normalize_power and spec.avg_power > 0.0:
        gain = float(np.sqrt(base.total_power / spec.avg_power))
        spec = pam_cpsd(base, _scaled_pulse(pulse, gain), t0)
    return spec


def _scaled_pulse(pulse: PulseShape, gain: float) -> PulseShape:
    def fourier(f):
        return gain * pulse.fourier(f)

    time_fn = None
    if pulse.time_fn is not None:
        def time_fn(t):
            return gain * pulse.time_fn(t)

    return PulseShape(fourier, gain * gain * pulse.energy, pulse.support_radius,
                      time_fn, pulse.time_window, pulse.breakpoints,
                      f"{pulse.name}*{gain:.6g}")


# ---------------------------------------------------------------------------
# row generation
# ---------------------------------------------------------------------------

def _row(rate, distortion, theta, method, m, converged=True):
    flag = "true" if converged else "false"
    return f"{rate:.17g},{distortion:.17g},{theta:.17g},{method},{m},{flag}"


def drf_rows(sc: Scenario, allow_nonconverged: bool):
    """Rows for the requested methods; raises on non-convergence unless allowed."""
    rows = []
    if sc.kind == "stationary":
        base = make_base(sc)
        for rate in sc.rates:
            pt = stationary_drf(base, float(rate), sc.phi_grid)
            rows.append(_row(rate, pt.distortion, pt.theta, "drf", 0))
        return rows

    if sc.kind == "discrete-cs":
        proc = make_discrete(sc)
        for method in sc.methods:
            if method == "drf":
                for rate in sc.rates:
                    pt = drf_mod.drf_cs_discrete(proc, float(rate), sc.phi_grid)
                    rows.append(_row(rate, pt.distortion, pt.theta, "drf", proc.period))
            elif method == "lower_bound":
                for rate in sc.rates:
                    d = drf_mod.lower_bound_discrete(proc, float(rate), sc.phi_grid)
                    rows.append(_row(rate, d, 0.0, "lower_bound", proc.period))
            elif method == "oracle":
                block = oracle_mod.BlockCovariance.from_process(proc, sc.oracle_n)
                for rate in sc.rates:
                    pt = oracle_mod.kl_drf(block, float(rate))
                    rows.append(_row(rate, pt.distortion, pt.theta, "oracle", proc.period))
            else:
                raise ConfigError(f"method {method!r} is not available for discrete-cs")
        return rows

    if sc.kind == "am":
        base = make_base(sc)
        cfg = drf_mod.ContinuousDrfConfig(sc.m_start, sc.m_max, None,
                                          sc.convergence_tol, sc.phi_grid)
        solver = None
        if sc.f0 <= 2.0 * base.support_radius:
            solver = drf_mod.ContinuousDrfSolver(am_cpsd(base, sc.f0, sc.phase), cfg)
        for method in sc.methods:
            if method == "drf":
                for rate in sc.rates:
                    if solver is None:
                        pt = stationary_drf(base, float(rate), sc.phi_grid)
                        rows.append(_row(rate, pt.distortion, pt.theta, "drf", 0))
                    else:
                        res = solver.solve(float(rate))
                        if not res.converged and not allow_nonconverged:
                            raise drf_mod.NonConvergedError(
                                f"drf at rate {rate} did not converge by M={sc.m_max}")
                        rows.append(_row(rate, res.point.distortion, res.point.theta,
                                         "drf", res.iterates[-1][0], res.converged))
            elif method in ("baseband", "baseline"):
                for rate in sc.rates:
                    pt = stationary_drf(base, float(rate), sc.phi_grid)
                    rows.append(_row(rate, pt.distortion, pt.theta, "baseband", 0))
            elif method == "upper_bound_gaussian_psd":
                for rate in sc.rates:
                    pt = drf_mod.upper_bound_gaussian_psd(base, sc.f0, float(rate), sc.phi_grid)
                    rows.append(_row(rate, pt.distortion, pt.theta,
                                     "upper_bound_gaussian_psd", 0))
            elif method == "lower_bound":
                spec = am_cpsd(base, sc.f0, sc.phase)
                for rate in sc.rates:
                    d = drf_mod.lower_bound_continuous(spec, float(rate), sc.t_grid, sc.phi_grid)
                    rows.append(_row(rate, d, 0.0, "lower_bound", 0))
            elif method == "oracle":
                spec = am_cpsd(base, sc.f0, sc.phase)
                kern = oracle_mod.build_kernel(spec, sc.oracle_periods * spec.period, sc.oracle_n)
                for rate in sc.rates:
                    pt = oracle_mod.kl_drf(kern, float(rate))
                    rows.append(_row(rate, pt.distortion, pt.theta, "oracle", 0))
            else:
                raise ConfigError(f"method {method!r} is not available for am")
        return rows

    if sc.kind == "pam":
        base = make_base(sc)
        multi = len(sc.symbol_rates) > 1
        for fs in sc.symbol_rates:
            spec = _normalized_pam(sc, base, fs)
            label = f"drf:fs={fs:g}" if multi else "drf"
            wf = drf_mod.pam_waterfiller(spec, sc.phi_grid)
            for method in sc.methods:
                if method == "drf":
                    for rate in sc.rates:
                        pt = wf.solve(float(rate))
                        rows.append(_row(rate, pt.distortion, pt.theta, label, 0))
                elif method == "lower_bound":
                    for rate in sc.rates:
                        d = drf_mod.lower_bound_continuous(spec, float(rate),
                                                           sc.t_grid, sc.phi_grid)
                        rows.append(_row(rate, d, 0.0,
                                         f"lower_bound:fs={fs:g}" if multi else "lower_bound", 0))
                elif method == "oracle":
                    kern = oracle_mod.build_kernel(spec, sc.oracle_periods * spec.period,
                                                   sc.oracle_n)
                    for rate in sc.rates:
                        pt = oracle_mod.kl_drf(kern, float(rate))
                        rows.append(_row(rate, pt.distortion, pt.theta,
                                         f"oracle:fs={fs:g}" if multi else "oracle", 0))
                elif method in ("baseband", "baseline"):
                    continue
                else:
                    raise ConfigError(f"method {method!r} is not available for pam")
        if sc.include_baseband or "baseband" in sc.methods or "baseline" in sc.methods:
            for rate in sc.rates:
                pt = stationary_drf(base, float(rate), sc.phi_grid)
                rows.append(_row(rate, pt.distortion, pt.theta, "baseband", 0))
        return rows

    if sc.kind == "sampled-coding":
        base = make_base(sc)
        for method in sc.methods:
            if method == "drf":
                for rate in sc.rates:
                    total, pt = drf_mod.sampled_source_coding(base, sc.sampling_rate,
                                                              float(rate), sc.phi_grid)
                    rows.append(_row(rate, total, pt.theta, "drf", 0))
            elif method in ("baseband", "baseline"):
                for rate in sc.rates:
                    pt = stationary_drf(base, float(rate), sc.phi_grid)
                    rows.append(_row(rate, pt.distortion, pt.theta, "baseband", 0))
            else:
                raise ConfigError(f"method {method!r} is not available for sampled-coding")
        return rows

    raise ConfigError(f"unhandled source kind {sc.kind!r}")


def bound_rows(sc: Scenario):
    rows = []
    if sc.kind == "discrete-cs":
        proc = make_discrete(sc)
        for rate in sc.rates:
            d = drf_mod.lower_bound_discrete(proc, float(rate), sc.phi_grid)
            rows.append(_row(rate, d, 0.0, "lower_bound", proc.period))
        return rows
    if sc.kind == "am":
        spec = am_cpsd(make_base(sc), sc.f0, sc.phase)
    elif sc.kind == "pam":
        spec = _normalized_pam(sc, make_base(sc), sc.symbol_rates[0])
    else:
        raise ConfigError(f"bound is not available for source kind {sc.kind!r}")
    for rate in sc.rates:
        d = drf_mod.lower_bound_continuous(spec, float(rate), sc.t_grid, sc.phi_grid)
        rows.append(_row(rate, d, 0.0, "lower_bound", 0))
    return rows


def spectra_rows(sc: Scenario):
    """phi, f, ascending eigenvalues, trace, and the pulse profile when present."""
    if sc.kind == "discrete-cs":
        proc = make_discrete(sc)
        matrix = psd_pc_matrix_discrete(proc)
        period = float(proc.period)
        spec = None
    else:
        base = make_base(sc)
        if sc.kind == "am":
            spec = am_cpsd(base, sc.f0, sc.phase)
        elif sc.kind == "pam":
            spec = _normalized_pam(sc, base, sc.symbol_rates[0])
        elif sc.kind == "stationary":
            spec = stationary_cyclic(base, 0.5 / base.support_radius)
        else:
            raise ConfigError(f"spectra is not available for source kind {sc.kind!r}")
        m = 1 if sc.kind == "stationary" else sc.spectra_m
        matrix = psd_pc_matrix_continuous(spec, m)
        period = spec.period
    grid = segmented_midpoint(-0.5, 0.5, sc.spectra_points, matrix.phi_breakpoints)
    vals = matrix(grid.nodes)
    lam = hermitian_eigenvalues(vals)
    trace = np.einsum("pmm->p", vals).real
    is_pam = isinstance(spec, PamCyclicSpectrum)
    header = ["phi", "f"] + [f"lambda_{i + 1}" for i in range(matrix.dim)] + ["trace"]
    if is_pam:
        header.append("s_tilde")
        profile = spec.shaped_profile(grid.nodes / period)
    rows = [",".join(header)]
    for i, phi in enumerate(grid.nodes):
        cells = [f"{phi:.17g}", f"{phi / period:.17g}"]
        cells += [f"{x:.17g}" for x in lam[i]]
        cells.append(f"{trace[i]:.17g}")
        if is_pam:
            cells.append(f"{profile[i]:.17g}")
        rows.append(",".join(cells))
    return rows


def verify_lines(sc: Scenario):
    """Fast-path vs oracle comparison; returns (report lines, max relative gap)."""
    lines = []
    gaps = []
    if sc.kind == "discrete-cs":
        proc = make_discrete(sc)
        sigma2 = proc.avg_power
        block = oracle_mod.BlockCovariance.from_process(proc, sc.oracle_n)
        for rate in sc.rates:
            fast = drf_mod.drf_cs_discrete(proc, float(rate), sc.phi_grid).distortion
            ref = oracle_mod.kl_drf(block, float(rate)).distortion
            rel = abs(fast - ref) / max(ref, 1e-9 * sigma2)
            gaps.append(rel)
            lines.append(f"rate={rate:.6g} fast={fast:.12g} oracle={ref:.12g} rel_gap={rel:.3e}")
    elif sc.kind in ("am", "pam", "stationary"):
        base = make_base(sc)
        if sc.kind == "am":
            spec = am_cpsd(base, sc.f0, sc.phase)

            def fast_at(rate):
                return drf_mod.drf_am(base, sc.f0, rate,
                                      drf_mod.ContinuousDrfConfig(
                                          sc.m_start, sc.m_max, None,
                                          sc.convergence_tol, sc.phi_grid)).point.distortion
        elif sc.kind == "pam":
            spec = _normalized_pam(sc, base, sc.symbol_rates[0])
            wf = drf_mod.pam_waterfiller(spec, sc.phi_grid)

            def fast_at(rate):
                return wf.solve(rate).distortion
        else:
            spec = stationary_cyclic(base, 0.5 / base.support_radius)

            def fast_at(rate):
                return stationary_drf(base, rate, sc.phi_grid).distortion

        sigma2 = spec.avg_power
        kern = oracle_mod.build_kernel(spec, sc.oracle_periods * spec.period, sc.oracle_n)
        for rate in sc.rates:
            fast = fast_at(float(rate))
            ref = oracle_mod.kl_drf(kern, float(rate)).distortion
            rel = abs(fast - ref) / max(ref, 1e-9 * sigma2)
            gaps.append(rel)
            lines.append(f"rate={rate:.6g} fast={fast:.12g} oracle={ref:.12g} rel_gap={rel:.3e}")
    else:
        raise ConfigError(f"verify is not available for source kind {sc.kind!r}")
    return lines, max(gaps)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _write_csv(path: str, rows, header=CSV_HEADER):
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _write_plain(path: str, rows):
    with open(path, "w", newline="") as fh:
        for row in rows:
            fh.write(row + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csdrf",
        description="Distortion-rate curves of cyclostationary Gaussian sources.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("drf", "compute curve rows for the configured methods"),
        ("bound", "compute per-component lower-bound rows"),
        ("verify", "cross-check the fast path against the covariance oracle"),
        ("spectra", "dump eigenvalue profiles: columns phi, f, lambda_1..lambda_M "
                    "(ascending), trace, and s_tilde for pulse-amplitude sources"),
    ):
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--config", required=True, help="scenario INI file")
        p.add_argument("--out", default=None, help="output CSV path (overrides [output] path)")
        p.add_argument("--allow-nonconverged", action="store_true",
                       help="emit rows flagged converged=false instead of failing")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = args.out or sc.out_path
    try:
        if args.command == "drf":
            rows = drf_rows(sc, args.allow_nonconverged)
            _write_csv(out, rows)
        elif args.command == "bound":
            rows = bound_rows(sc)
            _write_csv(out, rows)
        elif args.command == "spectra":
            _write_plain(out, spectra_rows(sc))
        elif args.command == "verify":
            lines, worst = verify_lines(sc)
            for line in lines:
                print(line)
            print(f"max_rel_gap={worst:.6e} tol={sc.oracle_tol:.1e}")
            if worst > sc.oracle_tol:
                print("verify FAILED", file=sys.stderr)
                return 3
            print("verify OK")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except drf_mod.NonConvergedError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
