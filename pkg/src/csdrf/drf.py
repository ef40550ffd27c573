"""Distortion-rate curves of cyclostationary sources and related bounds.

This layer wires the spectral models into the waterfilling engine: exact
discrete-time curves, continuous-time curves by intra-period refinement,
closed forms for pulse-amplitude and amplitude-modulated structures, the
per-component lower bounds, and the combined sampling plus source coding
distortion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polyphase import (polyphase_component_psd, psd_pc_matrix_continuous,
                        psd_pc_matrix_discrete)
from .quadrature import phi_grid, segmented_midpoint
from .spectra import (CyclicSpectrum, DiscreteCsProcess, PamCyclicSpectrum,
                      PulseShape, StationaryPsd, am_cpsd, am_gaussian_psd)
from .waterfilling import (EigenField, RateDistortionPoint, ScalarWaterfiller,
                           solve_water_level, stationary_drf)


class NonConvergedError(RuntimeError):
    """The intra-period refinement hit its cap before the tolerance."""


# ---------------------------------------------------------------------------
# discrete time
# ---------------------------------------------------------------------------

def drf_cs_discrete(proc: DiscreteCsProcess, rate_bits_per_symbol: float,
                    n_grid: int = 2048) -> RateDistortionPoint:
    """Distortion-rate point of a discrete-time cyclostationary source.

    Builds the polyphase matrix, decomposes it over the frequency grid, and
    solves the common water level at the requested per-symbol rate.
    """
    matrix = psd_pc_matrix_discrete(proc)
    grid = phi_grid(n_grid, matrix.phi_breakpoints)
    eigs = EigenField.from_matrix(matrix, grid)
    return solve_water_level(eigs, rate_bits_per_symbol, 1.0 / (2.0 * proc.period))


def lower_bound_discrete(proc: DiscreteCsProcess, rate_bits_per_symbol: float,
                         n_grid: int = 2048) -> float:
    """Average of the per-component curves: a lower bound on the distortion.

    Each polyphase subsequence is waterfilled on its own spectrum. A code of
    R bits per source symbol spends M*R bits per vector step, so each
    coordinate sees the full M*R bits per its own symbol; coding the
    coordinates jointly can only do better, hence the bound. Tight at rate 0
    and asymptotically as the rate grows.
    """
    m = proc.period
    grid = phi_grid(n_grid, proc.phi_breakpoints)
    per_component_rate = m * rate_bits_per_symbol
    total = 0.0
    for comp in range(m):
        levels = polyphase_component_psd(proc, comp, grid.nodes)
        sw = ScalarWaterfiller(levels, grid.weights, d_scale=1.0, r_scale=0.5)
        total += sw.solve(per_component_rate).distortion
    return total / m


# ---------------------------------------------------------------------------
# continuous time
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuousDrfConfig:
    """Refinement schedule for continuous-time curves.

    The intra-period resolution doubles from ``m_start`` until successive
    distortions differ by at most ``convergence_tol`` times the average
    power, or ``m_max`` is reached. ``lipschitz_c`` feeds the reported
    (conservative) kernel-perturbation diagnostic 4 C T0 / M; when None it is
    estimated by finite differences of the covariance.
    """

    m_start: int = 4
    m_max: int = 64
    lipschitz_c: float | None = None
    convergence_tol: float = 1e-4
    n_grid: int = 2048

    def __post_init__(self):
        if self.m_start < 1 or self.m_max < self.m_start:
            raise ValueError("need 1 <= m_start <= m_max")
        if self.lipschitz_c is not None and self.lipschitz_c < 0:
            raise ValueError("lipschitz_c must be nonnegative")


@dataclass(frozen=True)
class ContinuousDrfResult:
    """Final refinement point plus the iterate sequence and diagnostics."""

    point: RateDistortionPoint
    iterates: tuple            # (dim, theta, distortion) per refinement level
    converged: bool
    cauchy_gaps: tuple         # |D_{2M} - D_M| sequence
    weyl_bounds: tuple         # heuristic 4 C T0 / M per level (may be empty)
    sigma2: float


def estimate_lipschitz(spec: CyclicSpectrum, n_tau: int = 256, n_t: int = 8) -> float:
    """Largest finite-difference slope of the covariance in its lag argument.

    Sampled over one period of phases and lags within one period width.
    Diagnostic quality only; the refinement stop rule never uses it.
    """
    t0 = spec.period
    taus = np.linspace(-t0, t0, n_tau + 1)
    worst = 0.0
    for i in range(n_t):
        t = (i + 0.5) * t0 / n_t
        vals = spec.covariance(t + taus, np.full_like(taus, t))
        worst = max(worst, float(np.max(np.abs(np.diff(vals)) / np.diff(taus))))
    return worst


class ContinuousDrfSolver:
    """Caches eigenvalue fields per resolution so rate sweeps reuse them."""

    def __init__(self, spec: CyclicSpectrum, cfg: ContinuousDrfConfig | None = None):
        self.spec = spec
        self.cfg = cfg or ContinuousDrfConfig()
        self.sigma2 = spec.avg_power
        self._grid = phi_grid(self.cfg.n_grid, spec.phi_breakpoints())
        self._fields: dict[int, EigenField] = {}
        self._lipschitz: float | None = self.cfg.lipschitz_c

    def eigen_field(self, dim: int) -> EigenField:
        if dim not in self._fields:
            matrix = psd_pc_matrix_continuous(self.spec, dim)
            self._fields[dim] = EigenField.from_matrix(matrix, self._grid)
        return self._fields[dim]

    def point_at(self, rate_bits_per_second: float, dim: int) -> RateDistortionPoint:
        normalizer = 1.0 / (2.0 * self.spec.period)
        return solve_water_level(self.eigen_field(dim), rate_bits_per_second, normalizer)

    def lipschitz(self) -> float:
        if self._lipschitz is None:
            self._lipschitz = estimate_lipschitz(self.spec)
        return self._lipschitz

    def solve(self, rate_bits_per_second: float,
              require_converged: bool = False) -> ContinuousDrfResult:
        cfg = self.cfg
        dims = []
        dim = cfg.m_start
        while dim <= cfg.m_max:
            dims.append(dim)
            dim *= 2
        iterates = []
        gaps = []
        converged = False
        prev_d = None
        for dim in dims:
            pt = self.point_at(rate_bits_per_second, dim)
            iterates.append((dim, pt.theta, pt.distortion))
            if prev_d is not None:
                gap = abs(pt.distortion - prev_d)
                gaps.append(gap)
                if gap <= cfg.convergence_tol * max(self.sigma2, 1e-300):
                    converged = True
                    break
            prev_d = pt.distortion
        c = self.lipschitz()
        weyl = tuple(4.0 * c * self.spec.period / d for d, _, _ in iterates)
        if require_converged and not converged:
            raise NonConvergedError(
                f"distortion gap {gaps[-1] if gaps else math.nan:.3e} above "
                f"{cfg.convergence_tol:.1e} * sigma2 at resolution {iterates[-1][0]}")
        last_dim, theta, dist = iterates[-1]
        point = RateDistortionPoint(theta, rate_bits_per_second, dist)
        return ContinuousDrfResult(point, tuple(iterates), converged,
                                   tuple(gaps), weyl, self.sigma2)


def drf_cs_continuous(spec: CyclicSpectrum, rate_bits_per_second: float,
                      cfg: ContinuousDrfConfig | None = None) -> ContinuousDrfResult:
    """Continuous-time curve point by doubling the intra-period resolution."""
    return ContinuousDrfSolver(spec, cfg).solve(rate_bits_per_second)


def drf_cs_at_resolution(spec: CyclicSpectrum, rate_bits_per_second: float,
                         dim: int, n_grid: int = 2048) -> RateDistortionPoint:
    """Single fixed-resolution evaluation of the continuous-time curve."""
    cfg = ContinuousDrfConfig(m_start=dim, m_max=dim, n_grid=n_grid, lipschitz_c=0.0)
    return ContinuousDrfSolver(spec, cfg).point_at(rate_bits_per_second, dim)


def lower_bound_continuous(spec: CyclicSpectrum, rate_bits_per_second: float,
                           n_t: int = 64, n_grid: int = 2048) -> float:
    """Phase-averaged per-component bound for a continuous-time source.

    For each phase t the component spectrum is the folded time-varying
    spectrum; it is waterfilled at the full code rate (1/(2 T0) normalizer),
    and the resulting distortions are averaged over one period by the
    midpoint rule. Equality holds exactly when a single component determines
    all others.
    """
    t0 = spec.period
    grid = phi_grid(n_grid, spec.phi_breakpoints())
    normalizer = 1.0 / (2.0 * t0)
    total = 0.0
    for i in range(n_t):
        t = (i + 0.5) * t0 / n_t
        levels = spec.pc_psd(t, grid.nodes)
        sw = ScalarWaterfiller(levels, grid.weights, d_scale=1.0, r_scale=normalizer)
        total += sw.solve(rate_bits_per_second).distortion
    return total / n_t


# ---------------------------------------------------------------------------
# pulse-amplitude structure
# ---------------------------------------------------------------------------

def pam_waterfiller(spec: PamCyclicSpectrum, n_grid: int = 2048) -> ScalarWaterfiller:
    """Closed-form waterfiller of a pulse-amplitude process on its Nyquist band.

    The profile is the folded base spectrum times the aliased pulse energy;
    distortion carries a 1/T0 in front of the band integral so it stays in
    power units per unit time.
    """
    grid = spec.band_grid(n_grid)
    levels = spec.shaped_profile(grid.nodes)
    return ScalarWaterfiller(levels, grid.weights,
                             d_scale=1.0 / spec.period, r_scale=0.5)


def drf_pam(base: StationaryPsd, pulse: PulseShape, t_symbol: float,
            rate_bits_per_second: float, n_grid: int = 2048) -> RateDistortionPoint:
    """Distortion-rate point of sum_n U(n T0) p(t - n T0).

    The polyphase matrix of this process is rank one at every frequency, so
    the curve reduces to scalar waterfilling over the shaped profile on
    (-1/(2 T0), 1/(2 T0)); no intra-period refinement is needed (the
    fixed-resolution curves coincide with this expression for every
    resolution).
    """
    spec = PamCyclicSpectrum(base, pulse, t_symbol)
    return pam_waterfiller(spec, n_grid).solve(rate_bits_per_second)


# ---------------------------------------------------------------------------
# amplitude modulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AmDrfResult:
    """Curve point of the modulated source, flagged exact when the carrier
    clears twice the baseband bandwidth (the curve then equals the baseband
    curve identically; this also covers the uniformly random carrier phase,
    whose curve coincides with the deterministic-phase one)."""

    point: RateDistortionPoint
    exact: bool
    refinement: ContinuousDrfResult | None = None


def drf_am(base: StationaryPsd, f0: float, rate_bits_per_second: float,
           cfg: ContinuousDrfConfig | None = None, phase: float = 0.0) -> AmDrfResult:
    """Distortion-rate point of sqrt(2) U(t) cos(2 pi f0 t + phase).

    For f0 > 2 f_B the modulated curve equals the baseband curve exactly and
    the stationary evaluation is returned. Otherwise the generic
    continuous-time refinement runs on the modulated cyclic spectrum.
    """
    if not math.isfinite(base.support_radius):
        raise ValueError("modulated-curve evaluation needs a band-limited base density")
    if f0 > 2.0 * base.support_radius:
        n_grid = cfg.n_grid if cfg is not None else 2048
        return AmDrfResult(stationary_drf(base, rate_bits_per_second, n_grid), True)
    spec = am_cpsd(base, f0, phase)
    result = drf_cs_continuous(spec, rate_bits_per_second, cfg)
    return AmDrfResult(result.point, False, result)


def drf_am_random_phase(base: StationaryPsd, f0: float, rate_bits_per_second: float,
                        cfg: ContinuousDrfConfig | None = None) -> AmDrfResult:
    """Curve of the modulated source with a uniformly random carrier phase.

    Identical to the deterministic-phase curve: fixing the phase by a short
    synchronization preamble costs no rate asymptotically, so this simply
    delegates to :func:`drf_am`.
    """
    return drf_am(base, f0, rate_bits_per_second, cfg)


# ---------------------------------------------------------------------------
# combined sampling and source coding
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MmseFilter:
    """Optimal interpolation of a stationary source from uniform samples.

    ``response`` is the dimensionless frequency response S(f)/fold(f) in
    [0, 1]; ``folded_j`` restricted to (-fs/2, fs/2) is the spectral mass of
    the estimate per aliasing cell, so the estimation error is the source
    power minus the band integral of ``folded_j``.
    """

    fs: float
    response: object           # callable f -> gain in [0, 1]
    folded_j: object           # callable f -> power density on the band
    mmse: float
    band_breakpoints: tuple

    def band_grid(self, n_grid: int = 2048):
        half = 0.5 * self.fs
        return segmented_midpoint(-half, half, n_grid, self.band_breakpoints)


def mmse_filter(base: StationaryPsd, fs: float, n_grid: int = 2048) -> MmseFilter:
    """Wiener interpolation filter and its error for sampling at rate fs.

    W(f) = S(f) / sum_k S(f - k fs) where the aliased denominator is
    positive, else 0. At or above twice the support radius the response is
    the support indicator and the error vanishes; frequency regions whose
    aliases all vanish contribute their source mass to the error.
    """
    if fs <= 0:
        raise ValueError("sampling rate must be positive")
    if not math.isfinite(base.support_radius):
        raise ValueError("mmse filter needs a band-limited density")
    f_b = base.support_radius

    def folded(f, power_of_s):
        f = np.asarray(f, dtype=float)
        out = np.zeros(f.shape, dtype=float)
        lo = math.floor((f.min() - f_b) / fs) - 1
        hi = math.ceil((f.max() + f_b) / fs) + 1
        for k in range(lo, hi + 1):
            out += base(f - k * fs) ** power_of_s
        return out

    def response(f):
        num = base(f)
        den = folded(f, 1)
        return np.divide(num, den, out=np.zeros_like(num), where=den > 0.0)

    def folded_j(f):
        num = folded(f, 2)
        den = folded(f, 1)
        return np.divide(num, den, out=np.zeros_like(num), where=den > 0.0)

    breaks = set()
    for b in base.breakpoints:
        k_lo = math.floor((-0.5 * fs - b) / fs) - 1
        k_hi = math.ceil((0.5 * fs - b) / fs) + 1
        for k in range(k_lo, k_hi + 1):
            x = b + k * fs
            if -0.5 * fs < x < 0.5 * fs:
                breaks.add(x)
    filt = MmseFilter(fs, response, folded_j, math.nan, tuple(sorted(breaks)))
    grid = filt.band_grid(n_grid)
    mmse = base.total_power - float(grid.weights @ folded_j(grid.nodes))
    return MmseFilter(fs, response, folded_j, max(mmse, 0.0), tuple(sorted(breaks)))


def sampled_source_coding(base: StationaryPsd, fs: float,
                          rate_bits_per_second: float,
                          n_grid: int = 2048) -> tuple[float, RateDistortionPoint]:
    """Minimal distortion of sampling at fs followed by rate-limited coding.

    The optimal scheme estimates the source from its samples and then codes
    the estimate, so the distortion splits into the estimation error plus the
    waterfilled distortion of the estimate's folded spectrum on
    (-fs/2, fs/2). Returns (total distortion, coding point).
    """
    filt = mmse_filter(base, fs, n_grid)
    grid = filt.band_grid(n_grid)
    sw = ScalarWaterfiller(filt.folded_j(grid.nodes), grid.weights,
                           d_scale=1.0, r_scale=0.5)
    pt = sw.solve(rate_bits_per_second)
    return filt.mmse + pt.distortion, pt


def upper_bound_gaussian_psd(base: StationaryPsd, f0: float,
                             rate_bits_per_second: float,
                             n_grid: int = 2048) -> RateDistortionPoint:
    """Curve of a Gaussian source with the modulated density 0.5 S(f-f0) + 0.5 S(f+f0).

    Upper-bounds the modulated source's curve at every rate.
    """
    return stationary_drf(am_gaussian_psd(base, f0), rate_bits_per_second, n_grid)
