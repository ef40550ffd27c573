import numpy as np
import pytest

from csdrf.spectra import (DiscreteCsProcess, TruncationError, am_cpsd,
                           am_gaussian_psd, average_power, flat_psd,
                           ideal_interp_pulse, modulated_ma, pam_cpsd,
                           raised_cosine_psd, raised_cosine_pulse, rect_pulse,
                           stationary_cyclic, tabulated_psd, triangle_pulse,
                           triangular_psd, white_cs)


# ---------------------------------------------------------------------------
# stationary families
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("psd", [flat_psd(1.0, 1.0), triangular_psd(0.7, 2.0),
                                 raised_cosine_psd(1.3, 0.5)])
def test_family_power_matches_quadrature(psd):
    f = np.linspace(-psd.support_radius, psd.support_radius, 200001)
    quad = np.trapezoid(psd(f), f)
    assert quad == pytest.approx(psd.total_power, rel=1e-6)


@pytest.mark.parametrize("psd", [flat_psd(1.0, 1.0), triangular_psd(0.7, 2.0),
                                 raised_cosine_psd(1.3, 0.5)])
def test_family_even_and_nonnegative(psd):
    rng = np.random.default_rng(11)
    f = rng.uniform(-3, 3, 256)
    assert np.all(psd(f) >= 0)
    np.testing.assert_allclose(psd(f), psd(-f), atol=1e-15)
    assert np.all(psd(f[np.abs(f) > psd.support_radius]) == 0)


@pytest.mark.parametrize("psd", [flat_psd(0.8, 1.5), triangular_psd(1.1, 0.9),
                                 raised_cosine_psd(0.6, 2.0)])
def test_autocorr_matches_numeric_inverse_transform(psd):
    # oracle: plain Riemann sum of S(f) e^{2 pi i f tau}
    f = np.linspace(-psd.support_radius, psd.support_radius, 40001)
    taus = np.array([0.0, 0.31, 1.7, -2.4])
    for tau in taus:
        ref = np.trapezoid(psd(f) * np.cos(2 * np.pi * f * tau), f)
        assert psd.autocorr(tau) == pytest.approx(ref, abs=1e-8 * psd.total_power)
    assert psd.autocorr(0.0) == pytest.approx(psd.total_power, rel=1e-12)


def test_tabulated_symmetrizes_and_clamps():
    psd = tabulated_psd([-1.0, 0.0, 1.0], [0.2, -0.5, 1.0])
    assert psd(np.array([0.5]))[0] == psd(np.array([-0.5]))[0]
    vals = psd(np.linspace(-1, 1, 101))
    assert np.all(vals >= 0)
    assert psd.negative_clip_count > 0


# ---------------------------------------------------------------------------
# pulses
# ---------------------------------------------------------------------------

def test_rect_pulse_transform_closed_form():
    p = rect_pulse(0.8)
    f = np.array([0.0, 0.3, 1.1])
    expect = 0.8 * np.exp(-1j * np.pi * f * 0.8) * np.sinc(f * 0.8)
    np.testing.assert_allclose(p.fourier(f), expect, rtol=1e-14)


@pytest.mark.parametrize("pulse,span,tol", [
    (rect_pulse(1.0), 400.0, 2e-2),      # slow 1/f^2 tail in |P|^2
    (triangle_pulse(0.9), 40.0, 1e-4),
    (ideal_interp_pulse(0.7), 2.0, 1e-5),  # band-edge jump limits trapezoid
    (raised_cosine_pulse(1.2, 0.35), 2.0, 1e-6),
])
def test_parseval_energy(pulse, span, tol):
    f = np.linspace(-span, span, 800001)
    quad = np.trapezoid(np.abs(pulse.fourier(f)) ** 2, f)
    assert quad == pytest.approx(pulse.energy, rel=tol)


def test_pulse_conjugate_symmetry():
    rng = np.random.default_rng(3)
    f = rng.uniform(-2, 2, 64)
    for pulse in (rect_pulse(1.0), triangle_pulse(1.0), raised_cosine_pulse(1.0, 0.5)):
        np.testing.assert_allclose(pulse.fourier(-f), np.conj(pulse.fourier(f)), atol=1e-14)


# ---------------------------------------------------------------------------
# amplitude modulation
# ---------------------------------------------------------------------------

def test_am_spot_values_flat_base():
    spec = am_cpsd(flat_psd(1.0, 2.0), 4.0, 0.0)
    assert spec.period == pytest.approx(0.25)
    f4 = np.array([4.0])
    assert spec.cpsd(0, f4)[0] == pytest.approx(0.5, rel=1e-14)    # S_U flat = 1
    assert spec.cpsd(2, f4)[0] == pytest.approx(0.5, rel=1e-14)
    assert np.all(spec.cpsd(1, np.linspace(-6, 6, 64)) == 0)


def test_am_zero_source_vanishes():
    spec = am_cpsd(flat_psd(1.0, 0.0), 4.0)
    f = np.linspace(-6, 6, 33)
    for n in (-2, 0, 2):
        assert np.all(spec.cpsd(n, f) == 0)
    assert average_power(spec) == pytest.approx(0.0, abs=1e-15)


def test_am_tpsd_matches_direct_modulated_expression():
    # oracle: the modulated time-varying spectrum written out by hand at t
    base = flat_psd(1.0, 1.0)
    f0, phase = 4.0, 0.0
    spec = am_cpsd(base, f0, phase)
    f = np.linspace(-6, 6, 64)
    for t in (0.0, 0.08, 0.2):
        psi = 2 * np.pi * f0 * t + phase
        direct = 0.5 * base(f + f0) * (1 + np.exp(-2j * psi)) \
            + 0.5 * base(f - f0) * (1 + np.exp(2j * psi))
        np.testing.assert_allclose(spec.tpsd(t, f), direct, atol=1e-12)


def test_am_rejects_bad_carrier():
    with pytest.raises(ValueError):
        am_cpsd(flat_psd(1.0, 1.0), 0.0)
    with pytest.raises(ValueError):
        am_cpsd(flat_psd(1.0, 1.0), -1.0)


def test_am_power_is_preserved():
    spec = am_cpsd(flat_psd(1.0, 1.0), 4.0)
    assert spec.avg_power == pytest.approx(1.0, rel=1e-12)
    assert average_power(spec) == pytest.approx(1.0, rel=1e-9)


def test_am_gaussian_psd_carries_same_power():
    ub = am_gaussian_psd(triangular_psd(1.0, 1.0), 1.2)
    f = np.linspace(-ub.support_radius, ub.support_radius, 200001)
    assert np.trapezoid(ub(f), f) == pytest.approx(1.0, rel=1e-8)


def test_conjugate_symmetry_of_cyclic_spectra():
    rng = np.random.default_rng(5)
    f = rng.uniform(-6, 6, 128)
    am = am_cpsd(triangular_psd(1.0, 1.0), 1.2, 0.7)
    pam = pam_cpsd(triangular_psd(1.0, 1.0), raised_cosine_pulse(0.8, 0.3), 0.8)
    for spec in (am, pam):
        for n in spec.active_indices:
            np.testing.assert_allclose(spec.cpsd(-n, -f), np.conj(spec.cpsd(n, f)),
                                       atol=1e-13)


def test_tpsd_series_reconstruction_real_nonneg_on_grid():
    # folded component spectra must come out real and nonnegative
    spec = am_cpsd(triangular_psd(1.0, 1.0), 1.2, 0.3)
    phi = np.linspace(-0.5, 0.5, 65)
    for t in np.linspace(0.0, spec.period, 7):
        vals = spec.pc_psd(t, phi)
        assert np.all(vals >= 0)


# ---------------------------------------------------------------------------
# pulse-amplitude modulation
# ---------------------------------------------------------------------------

def test_pam_narrow_pulse_is_stationary():
    # pulse spectrum strictly inside the Nyquist band: only harmonic 0 remains
    spec = pam_cpsd(flat_psd(0.3, 1.0), ideal_interp_pulse(1.25), 1.0)
    assert spec.active_indices == (0,)
    f = np.linspace(-2, 2, 101)
    assert np.all(spec.cpsd(1, f) == 0)


def test_pam_zero_pulse_vanishes():
    from csdrf.spectra import PulseShape
    zero = PulseShape(lambda f: np.zeros_like(f, dtype=complex), 0.0, 0.1,
                      breakpoints=(), name="zero")
    spec = pam_cpsd(flat_psd(1.0, 1.0), zero, 1.0)
    assert spec.avg_power == pytest.approx(0.0, abs=1e-15)
    assert np.all(spec.shaped_profile(np.linspace(-0.5, 0.5, 33)) == 0)


def test_pam_rect_pulse_harmonic0_spot_values():
    # derived by hand: harmonic 0 is |P(f)|^2 / T0 times the sampled-sequence
    # spectrum (1/T0) sum_l S(f - l/T0)
    base = flat_psd(0.4, 0.8)   # super-Nyquist at T0 = 1
    spec = pam_cpsd(base, rect_pulse(1.0), 1.0)
    for f in (0.0, 0.2):
        expect = np.sinc(f) ** 2 * base(np.array([f]))[0]
        got = spec.cpsd(0, np.array([f]))[0]
        assert got == pytest.approx(expect, rel=1e-12)
    # an aliased point picks up both copies of the base density
    base2 = flat_psd(0.6, 1.2)
    spec2 = pam_cpsd(base2, rect_pulse(1.0), 1.0)
    f = 0.5
    fold = base2(np.array([0.5]))[0] + base2(np.array([-0.5]))[0]
    assert spec2.cpsd(0, np.array([f]))[0] == pytest.approx(np.sinc(0.5) ** 2 * fold, rel=1e-12)


def test_pam_staircase_power_equals_base_power():
    spec = pam_cpsd(flat_psd(1.0, 1.0), rect_pulse(1.0), 1.0)
    assert spec.avg_power == pytest.approx(1.0, rel=1e-12)
    assert average_power(spec) == pytest.approx(1.0, rel=1e-9)


def test_pam_staircase_component_spectra_all_equal_sample_spectrum():
    # staircase: every polyphase component literally repeats the samples
    base = flat_psd(1.0, 1.0)
    spec = pam_cpsd(base, rect_pulse(1.0), 1.0)
    phi = np.linspace(-0.49, 0.49, 50)
    ref = spec.sampled_base_psd(phi)
    for t in (0.1, 0.5, 0.9):
        np.testing.assert_allclose(spec.pc_psd(t, phi), ref, rtol=1e-12)


def test_pam_generic_vs_structured_component_spectra():
    # dual route: harmonic-series fold vs the synthesis-gain factorization
    base = triangular_psd(1.0, 1.0)
    pulse = raised_cosine_pulse(0.8, 0.3)
    spec = pam_cpsd(base, pulse, 0.8)
    from csdrf.spectra import CyclicSpectrum
    generic = CyclicSpectrum(spec.period, spec._cpsd_impl, spec.active_indices,
                             spec.freq_radius, spec.avg_power, spec.breakpoints)
    phi = np.linspace(-0.5, 0.5, 41)
    for t in (0.0, 0.13, 0.52):
        np.testing.assert_allclose(spec.pc_psd(t, phi), generic.pc_psd(t, phi),
                                   atol=1e-12)


def test_pam_rejects_bad_symbol_time():
    with pytest.raises(ValueError):
        pam_cpsd(flat_psd(1.0, 1.0), rect_pulse(1.0), 0.0)


def test_pam_unbounded_harmonics_raise_on_generic_paths():
    spec = pam_cpsd(flat_psd(1.0, 1.0), rect_pulse(1.0), 1.0)
    with pytest.raises(TruncationError):
        spec.tpsd(0.1, np.array([0.0]))


# ---------------------------------------------------------------------------
# discrete processes
# ---------------------------------------------------------------------------

def test_white_cs_covariance_and_power():
    proc = white_cs([1.0, 4.0])
    assert proc.period == 2
    assert proc.cov(0, 0) == 1.0
    assert proc.cov(1, 0) == 4.0
    assert proc.cov(0, 1) == 0.0
    assert proc.avg_power == pytest.approx(2.5)
    assert average_power(proc) == pytest.approx(2.5, rel=1e-12)


def test_modulated_ma_covariance_consistency():
    proc = modulated_ma([1.0, 0.5, 1.5], [1.0, 0.4])
    # R[n, -k] must equal R[n-k, k]; from_covariance validates, so this
    # simply has to construct without raising
    assert proc.period == 3
    # slot variance: c_n^2 (1 + a^2)
    assert proc.cov(1, 0) == pytest.approx(0.25 * 1.16)


def test_from_covariance_rejects_inconsistent_table():
    bad = np.array([[0.3, 1.0, 0.3], [0.1, 1.0, 0.2]])
    with pytest.raises(ValueError):
        DiscreteCsProcess.from_covariance(bad)


def test_average_power_unbounded_series_reported():
    from csdrf.spectra import CyclicSpectrum
    spec = CyclicSpectrum(1.0, lambda n, f: np.zeros_like(f, dtype=complex),
                          None, np.inf, 1.0)
    with pytest.raises(TruncationError):
        average_power(spec)


def test_stationary_cyclic_reduces_to_base():
    base = triangular_psd(1.0, 1.0)
    spec = stationary_cyclic(base, 0.5)
    f = np.linspace(-2, 2, 21)
    np.testing.assert_allclose(spec.cpsd(0, f).real, base(f), atol=1e-15)
    assert np.all(spec.cpsd(1, f) == 0)
    assert average_power(spec) == pytest.approx(1.0, rel=1e-9)
