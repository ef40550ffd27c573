import numpy as np
import pytest

from csdrf.polyphase import (polyphase_component_psd, psd_pc_matrix_continuous,
                             psd_pc_matrix_discrete)
from csdrf.quadrature import phi_grid
from csdrf.spectra import (CyclicSpectrum, TruncationError, am_cpsd, flat_psd,
                           modulated_ma, pam_cpsd, raised_cosine_pulse,
                           rect_pulse, stationary_cyclic, triangular_psd,
                           white_cs)
from csdrf.waterfilling import hermitian_eigenvalues


def test_single_slot_matrix_is_the_spectrum_itself():
    proc = modulated_ma([1.3], [1.0, 0.5])
    mat = psd_pc_matrix_discrete(proc)
    phi = np.linspace(-0.5, 0.5, 17)
    vals = mat(phi)
    assert vals.shape == (17, 1, 1)
    np.testing.assert_allclose(vals[:, 0, 0], proc.tpsd(0, phi), atol=1e-14)


def test_white_noise_diagonalizes_exactly():
    proc = white_cs([2.0, 2.0, 2.0])
    vals = psd_pc_matrix_discrete(proc)(np.linspace(-0.5, 0.5, 9))
    expect = 2.0 * np.eye(3)
    for v in vals:
        np.testing.assert_allclose(v, expect, atol=1e-14)


def test_alternating_variances_give_diagonal_matrix():
    proc = white_cs([1.0, 4.0])
    vals = psd_pc_matrix_discrete(proc)(np.array([0.11, -0.37]))
    for v in vals:
        np.testing.assert_allclose(v, np.diag([1.0, 4.0]), atol=1e-14)


def test_discrete_matrix_hermitian_psd_at_random_phis():
    proc = modulated_ma([1.0, 0.5, 1.4], [1.0, 0.4, -0.2])
    mat = psd_pc_matrix_discrete(proc)
    rng = np.random.default_rng(29)
    phi = rng.uniform(-0.5, 0.5, 128)
    vals = mat(phi)
    np.testing.assert_allclose(vals, np.conj(np.swapaxes(vals, 1, 2)), atol=1e-12)
    lam = hermitian_eigenvalues(vals)
    trace = np.einsum("pmm->p", vals).real
    assert np.all(lam.min(axis=1) >= -1e-9 * trace)


def test_discrete_trace_identity():
    # integral of the trace over the circle equals the summed slot variances
    proc = modulated_ma([1.0, 0.5, 1.4], [1.0, 0.4, -0.2])
    mat = psd_pc_matrix_discrete(proc)
    grid = phi_grid(1024)
    trace = np.einsum("pmm->p", mat(grid.nodes)).real
    total = grid.weights @ trace
    expect = sum(proc.cov(n, 0) for n in range(3))
    assert total == pytest.approx(expect, rel=1e-6)


def test_stationary_continuous_m1_is_folded_density():
    base = triangular_psd(1.0, 1.0)
    period = 0.4
    spec = stationary_cyclic(base, period)
    mat = psd_pc_matrix_continuous(spec, 1)
    phi = np.linspace(-0.5, 0.5, 33)
    vals = mat(phi)[:, 0, 0].real
    expect = np.zeros_like(phi)
    for k in range(-3, 4):
        expect += base((phi - k) / period)
    np.testing.assert_allclose(vals, expect / period, atol=1e-13)


def test_am_rank_one_identity_above_twice_bandwidth():
    base = flat_psd(1.0, 1.0)
    spec = am_cpsd(base, 4.0)
    for m in (4, 7, 8):
        mat = psd_pc_matrix_continuous(spec, m)
        phi = np.array([-0.31, 0.05, 0.2])
        lam = hermitian_eigenvalues(mat(phi))
        np.testing.assert_allclose(lam[:, -1], m * 4.0 * base(4.0 * phi), rtol=1e-12)
        assert np.all(lam[:, :-1] <= 1e-12 * lam[:, -1:])


def test_pam_rank_one_both_routes_agree():
    base = triangular_psd(1.0, 1.0)
    spec = pam_cpsd(base, raised_cosine_pulse(0.8, 0.3), 0.8)
    generic = CyclicSpectrum(spec.period, spec._cpsd_impl, spec.active_indices,
                             spec.freq_radius, spec.avg_power, spec.breakpoints)
    phi = np.linspace(-0.45, 0.45, 21)
    a = psd_pc_matrix_continuous(spec, 4)(phi)
    b = psd_pc_matrix_continuous(generic, 4)(phi)
    np.testing.assert_allclose(a, b, atol=1e-13 * np.abs(a).max())


def test_pam_matrix_is_rank_one_at_random_phis():
    spec = pam_cpsd(triangular_psd(1.0, 1.0), raised_cosine_pulse(0.8, 0.3), 0.8)
    rng = np.random.default_rng(17)
    phi = rng.uniform(-0.5, 0.5, 128)
    lam = hermitian_eigenvalues(psd_pc_matrix_continuous(spec, 6)(phi))
    top = lam[:, -1]
    mask = top > 1e-12 * top.max()
    assert np.all(lam[mask, -2] / top[mask] <= 1e-10)


def test_staircase_matrix_works_through_factor_route():
    # the rectangular pulse has unbounded harmonics; the factorized route
    # still produces the matrix, while a generic spectrum must refuse
    base = flat_psd(1.0, 1.0)
    spec = pam_cpsd(base, rect_pulse(1.0), 1.0)
    mat = psd_pc_matrix_continuous(spec, 4)
    phi = np.array([0.2])
    vals = mat(phi)[0]
    fold = spec.sampled_base_psd(np.array([0.2]))[0]
    np.testing.assert_allclose(vals, fold * np.ones((4, 4)), atol=1e-12)

    generic = CyclicSpectrum(1.0, lambda n, f: np.zeros_like(f, dtype=complex),
                             None, np.inf, 1.0)
    with pytest.raises(TruncationError):
        psd_pc_matrix_continuous(generic, 4)


def test_continuous_trace_tracks_average_power():
    spec = am_cpsd(triangular_psd(1.0, 1.0), 1.2, 0.4)
    grid = phi_grid(2048, spec.phi_breakpoints())
    for m in (4, 8):
        mat = psd_pc_matrix_continuous(spec, m)
        trace = np.einsum("pmm->p", mat(grid.nodes)).real
        # (1/M) integral of the trace approximates the average power; the
        # phase average converges as the intra-period resolution grows
        avg = grid.weights @ trace / m
        assert avg == pytest.approx(spec.avg_power, rel=2e-2)


def test_eigenvalue_sum_matches_trace():
    spec = am_cpsd(triangular_psd(1.0, 1.0), 1.2, 0.4)
    mat = psd_pc_matrix_continuous(spec, 6)
    rng = np.random.default_rng(8)
    phi = rng.uniform(-0.5, 0.5, 64)
    vals = mat(phi)
    lam = hermitian_eigenvalues(vals)
    trace = np.einsum("pmm->p", vals).real
    np.testing.assert_allclose(lam.sum(axis=1), trace, rtol=1e-9)
    assert np.all(np.diff(lam, axis=1) >= 0)       # ascending
    assert np.all(lam >= 0)


def test_component_psd_is_matrix_diagonal():
    proc = modulated_ma([1.0, 0.5, 1.4], [1.0, 0.4])
    mat = psd_pc_matrix_discrete(proc)
    phi = np.linspace(-0.5, 0.5, 11)
    vals = mat(phi)
    for m in range(3):
        np.testing.assert_allclose(polyphase_component_psd(proc, m, phi),
                                   vals[:, m, m].real, atol=1e-13)
