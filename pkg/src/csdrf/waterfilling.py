"""Parametric reverse waterfilling over spectral levels.

A water level theta splits every spectral level lambda into a preserved part
min(lambda, theta) charged to distortion and a coded part log+(lambda/theta)
charged to rate. One bisection solver inverts the monotone rate map for all
of the curve evaluations in this package; integrals are computed in nats and
rates reported in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .polyphase import PsdPcMatrix
from .quadrature import Grid, segmented_midpoint
from .spectra import StationaryPsd, TruncationError

LOG2 = math.log(2.0)

# bisection bracket [lam_max * 2**-BRACKET_EXP, lam_max]; rates beyond the
# bracket's resolution are reported as errors rather than extrapolated
BRACKET_EXP = 120
MAX_BISECT = 200


class WaterLevelUnderflow(RuntimeError):
    """Requested rate exceeds what the bisection bracket can resolve."""


class NotPositiveSemidefinite(ValueError):
    """A spectral matrix had an eigenvalue below the tolerance floor."""


@dataclass(frozen=True)
class RateDistortionPoint:
    """One point (water level, rate, distortion) on a distortion-rate curve.

    ``rate`` is in bits, per symbol for discrete-time sources and per second
    for continuous-time sources; the two kinds must not be mixed without an
    explicit conversion by the symbol rate.
    """

    theta: float
    rate: float
    distortion: float


@dataclass(frozen=True)
class DrfCurve:
    """Distortion-rate points sorted by rate, plus solver metadata."""

    points: tuple
    meta: dict = field(default_factory=dict)

    def rates(self):
        return np.array([p.rate for p in self.points])

    def distortions(self):
        return np.array([p.distortion for p in self.points])

    def is_convex(self, tol: float = 1e-9) -> bool:
        """Distortion non-increasing and convex in rate, up to grid tolerance."""
        r = self.rates()
        d = self.distortions()
        scale = max(float(d.max(initial=0.0)), 1e-300)
        if np.any(np.diff(d) > tol * scale):
            return False
        for i in range(1, len(r) - 1):
            slope_l = (d[i] - d[i - 1]) / (r[i] - r[i - 1])
            slope_r = (d[i + 1] - d[i]) / (r[i + 1] - r[i])
            if slope_r < slope_l - tol * scale:
                return False
        return True


class ScalarWaterfiller:
    """Waterfilling over a weighted set of nonnegative spectral levels.

    distortion(theta) = d_scale * sum_i w_i * min(level_i, theta)
    rate(theta)       = r_scale * sum_i w_i * log2+(level_i / theta)
    """

    def __init__(self, levels, weights, d_scale: float, r_scale: float):
        levels = np.maximum(np.asarray(levels, dtype=float).ravel(), 0.0)
        weights = np.asarray(weights, dtype=float).ravel()
        if levels.shape != weights.shape:
            raise ValueError("levels and weights must have matching shapes")
        self.levels = levels
        self.weights = weights
        self.d_scale = float(d_scale)
        self.r_scale = float(r_scale)
        self.level_max = float(levels.max(initial=0.0))
        self.power = self.d_scale * float(weights @ levels)

    def distortion(self, theta: float) -> float:
        return self.d_scale * float(self.weights @ np.minimum(self.levels, theta))

    def rate(self, theta: float) -> float:
        if theta <= 0.0:
            return math.inf if self.level_max > 0.0 else 0.0
        ratio = np.maximum(self.levels / theta, 1.0)
        return self.r_scale * float(self.weights @ np.log2(ratio))

    def point(self, theta: float) -> RateDistortionPoint:
        return RateDistortionPoint(float(theta), self.rate(theta), self.distortion(theta))

    def solve(self, target_rate: float) -> RateDistortionPoint:
        """Water level whose rate matches the target, by geometric bisection.

        The rate map is continuous and non-increasing in theta, so bisection
        on log-theta converges; the bracket is run down to machine precision
        rather than stopping at a rate tolerance.
        """
        if not math.isfinite(target_rate) or target_rate < 0.0:
            raise ValueError("target rate must be finite and nonnegative")
        if self.level_max == 0.0:
            return RateDistortionPoint(0.0, 0.0, 0.0)
        if target_rate == 0.0:
            return self.point(self.level_max)
        lo = self.level_max * 2.0 ** -BRACKET_EXP
        hi = self.level_max
        rate_lo = self.rate(lo)
        if target_rate > rate_lo * (1.0 + 1e-12) + 1e-12:
            raise WaterLevelUnderflow(
                f"target rate {target_rate} exceeds resolvable maximum {rate_lo} "
                f"(water level underflow below {lo})")
        for _ in range(MAX_BISECT):
            mid = math.sqrt(lo * hi)
            if self.rate(mid) >= target_rate:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 4e-16 * hi:
                break
        return self.point(math.sqrt(lo * hi))


# ---------------------------------------------------------------------------
# eigenvalue fields
# ---------------------------------------------------------------------------

def hermitian_eigenvalues(mats: np.ndarray, clip_scale: float = 1e-9) -> np.ndarray:
    """Ascending real eigenvalues of a stack of (near-)Hermitian matrices.

    The input is symmetrized as (A + A^H)/2 before decomposition. Small
    negative eigenvalues (within clip_scale times the local trace scale) are
    clipped to zero; anything more negative raises, since it means the input
    was not a valid spectral matrix.
    """
    mats = np.asarray(mats, dtype=complex)
    herm = 0.5 * (mats + np.conj(np.swapaxes(mats, -1, -2)))
    try:
        lam = np.linalg.eigvalsh(herm)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"eigensolver failed on a batch of shape {herm.shape}; "
            f"max |entry| = {np.abs(herm).max():.3e}") from exc
    scale = np.maximum(np.abs(lam).max(axis=-1, keepdims=True), 1e-300)
    floor = -clip_scale * scale
    if np.any(lam < floor):
        worst = int(np.argmin(lam.min(axis=-1)))
        raise NotPositiveSemidefinite(
            f"eigenvalue {lam.min():.3e} below tolerance at batch index {worst} "
            f"(scale {scale.ravel()[worst]:.3e})")
    return np.maximum(lam, 0.0)


@dataclass(frozen=True, eq=False)
class EigenField:
    """Sorted nonnegative eigenvalues of a spectral matrix over a phi grid."""

    grid: Grid
    lam: np.ndarray          # (n_phi, dim), ascending in the last axis
    dim: int

    @classmethod
    def from_matrix(cls, matrix: PsdPcMatrix, grid: Grid) -> "EigenField":
        try:
            lam = hermitian_eigenvalues(matrix(grid.nodes))
        except (NotPositiveSemidefinite, np.linalg.LinAlgError) as exc:
            raise type(exc)(f"{exc} (phi grid on [{grid.lo}, {grid.hi}], "
                            f"{grid.size} nodes)") from exc
        return cls(grid, lam, matrix.dim)

    @property
    def lam_max(self) -> float:
        return float(self.lam.max(initial=0.0))

    def power(self) -> float:
        """Average power carried by the field: (1/dim) integral of the trace."""
        return float(self.grid.weights @ self.lam.sum(axis=1)) / self.dim

    def waterfiller(self, rate_normalizer: float) -> ScalarWaterfiller:
        weights = np.repeat(self.grid.weights, self.dim)
        return ScalarWaterfiller(self.lam.ravel(), weights,
                                 d_scale=1.0 / self.dim, r_scale=rate_normalizer)


def waterfill_eval(eigs: EigenField, theta: float, rate_normalizer: float) -> RateDistortionPoint:
    """Distortion and rate of an eigenvalue field at a fixed water level.

    ``rate_normalizer`` is 1/(2 M) for bits per symbol or 1/(2 T0) for bits
    per second. theta = 0 on a nonzero field yields an infinite-rate point.
    """
    if theta < 0.0:
        raise ValueError("water level must be nonnegative")
    return eigs.waterfiller(rate_normalizer).point(theta)


def solve_water_level(eigs: EigenField, target_rate: float,
                      rate_normalizer: float) -> RateDistortionPoint:
    """Invert the rate map of an eigenvalue field at the requested rate."""
    return eigs.waterfiller(rate_normalizer).solve(target_rate)


# ---------------------------------------------------------------------------
# scalar special cases
# ---------------------------------------------------------------------------

def stationary_waterfiller(psd: StationaryPsd, n_grid: int = 2048) -> ScalarWaterfiller:
    """Waterfiller over a stationary density on the physical frequency line."""
    if not math.isfinite(psd.support_radius):
        raise TruncationError("stationary waterfilling needs a finite support radius")
    r = psd.support_radius
    grid = segmented_midpoint(-r, r, n_grid, psd.breakpoints)
    return ScalarWaterfiller(psd(grid.nodes), grid.weights, d_scale=1.0, r_scale=0.5)


def stationary_drf(psd: StationaryPsd, target_rate: float,
                   n_grid: int = 2048) -> RateDistortionPoint:
    """Distortion-rate point of a stationary Gaussian source.

    Classical reverse waterfilling over the density: D = integral of
    min(S, theta), R = (1/2) integral of log2+(S/theta), rate in bits per
    second.
    """
    return stationary_waterfiller(psd, n_grid).solve(target_rate)


def discrete_stationary_drf(spectrum_fn, target_rate: float, n_grid: int = 2048,
                     breakpoints=()) -> RateDistortionPoint:
    """Scalar waterfilling of a discrete-time spectrum on [-1/2, 1/2].

    ``spectrum_fn`` maps normalized frequency to a nonnegative density; rate
    is in bits per symbol.
    """
    grid = segmented_midpoint(-0.5, 0.5, n_grid, breakpoints)
    levels = np.asarray(spectrum_fn(grid.nodes), dtype=float)
    return ScalarWaterfiller(levels, grid.weights, d_scale=1.0, r_scale=0.5).solve(target_rate)
