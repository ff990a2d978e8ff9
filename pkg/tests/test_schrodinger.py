"""Spectral operations: oracles from closed forms and perturbation theory."""

import math

import numpy as np
import pytest

from hillspec.fourier import (
    FourierFunction,
    cosine_coefficient,
    sample_ball,
    sine_coefficient,
    sobolev_norm,
)
from hillspec.rk import potential_table, propagate
from hillspec.schrodinger import (
    analytic_continuation_check,
    dirichlet_eigenvalue,
    dirichlet_spectrum,
    dirichlet_spectrum_complex,
    discriminant,
    floquet_exponent,
    floquet_exponents,
    fundamental_solution,
    kappa_residual_sequence,
    localization_threshold,
    midpoint_residual_sequence,
    periodic_spectrum,
    spectral_table,
    validity_threshold,
)

PI = math.pi
PI2 = math.pi**2
TOL = 1e-12


@pytest.fixture(scope="module")
def zero():
    return FourierFunction.zero()


# -- fundamental solution -----------------------------------------------------


def test_fundamental_q0_at_pi2(zero):
    m = fundamental_solution(zero, PI2, TOL)
    assert m.y1 == pytest.approx(-1.0, abs=1e-11)
    assert m.y2 == pytest.approx(0.0, abs=1e-11)
    assert m.dy2 == pytest.approx(-1.0, abs=1e-11)


def test_fundamental_q0_at_zero(zero):
    m = fundamental_solution(zero, 0.0, TOL)
    assert m.y1 == pytest.approx(1.0, abs=1e-12)
    assert m.y2 == pytest.approx(1.0, abs=1e-12)
    assert m.dy1 == pytest.approx(0.0, abs=1e-12)
    assert m.dy2 == pytest.approx(1.0, abs=1e-12)


def test_fundamental_wronskian_invariant():
    q = sample_ball(1.0, 2.0, 16, 0.2, 3)
    m = fundamental_solution(q, 137.0 + 4.0j, TOL)
    assert abs(m.wronskian() - 1.0) <= max(1e-10, 10.0 * m.est_error)


def test_q0_closed_forms_on_lambda_grid(zero):
    lams = np.linspace(0.5, 3000.0, 37)
    res = propagate(potential_table(zero), lams, TOL)
    nu = np.sqrt(lams)
    assert np.max(np.abs(res.y1 - np.cos(nu))) < 1e-10
    assert np.max(np.abs(res.y2 - np.sin(nu) / nu)) < 1e-10
    assert np.max(np.abs(res.dy2 - np.cos(nu))) < 1e-10


# -- Dirichlet spectrum --------------------------------------------------------


def test_dirichlet_q0_exact(zero):
    eigs = dirichlet_spectrum(zero, 8, TOL)
    for e in eigs:
        assert e.mu.real == pytest.approx(e.n**2 * PI2, rel=1e-11)
        assert e.localized
        assert e.nu**2 == pytest.approx(e.mu, rel=1e-12)
        assert e.nu.real >= 0


def test_dirichlet_empty_and_validation(zero):
    assert dirichlet_spectrum(zero, 0, TOL) == []
    with pytest.raises(ValueError):
        dirichlet_eigenvalue(zero, 0, TOL)


def test_dirichlet_first_order_shift():
    """mu_1 = pi^2 - c/2 + O(c^2) for q = c cos(2 pi x)."""
    c = 1e-3
    e1 = dirichlet_eigenvalue(FourierFunction.cosine(1, c), 1, TOL)
    assert abs(e1.mu - (PI2 - c / 2.0)) <= 1e-6


def test_dirichlet_strictly_increasing_random():
    for seed in (1, 5):
        q = sample_ball(0.5, 1.5, 24, 0.2, seed)
        mus = [e.mu.real for e in dirichlet_spectrum(q, 20, TOL)]
        assert all(b > a for a, b in zip(mus, mus[1:]))


def test_dirichlet_localization_window():
    """An empirical m_R exists for every sampled radius, including large
    potentials whose low modes leave the default bracket."""
    for radius in (1.0, 2.0, 5.0):
        q = sample_ball(0.0, radius, 32, 0.02, 11)
        eigs = dirichlet_spectrum(q, 32, 1e-11)
        m_r = localization_threshold(eigs)
        assert m_r <= 6
        for e in eigs:
            if e.n > m_r:
                assert abs(e.mu - e.n**2 * PI2) < PI / 4.0


def test_nu_expansion_bounds():
    q = sample_ball(1.0, 2.0, 24, 0.2, 17)
    for e in dirichlet_spectrum(q, 24, TOL):
        if e.localized:
            assert abs(e.nu - e.n * PI) <= 1.0 / (4.0 * e.n) + 1e-12
            assert abs(e.nu.imag) <= 1.0 / (4.0 * e.n)


def test_root_residual_scaled(zero):
    q = sample_ball(1.0, 1.0, 16, 0.25, 23)
    eigs = dirichlet_spectrum(q, 12, TOL)
    res = propagate(potential_table(q), [e.mu for e in eigs], TOL, dlam=True)
    scale = np.maximum(1.0, np.abs(res.v_y2) * PI)
    assert np.all(np.abs(res.y2) <= np.maximum(TOL * scale, 10.0 * res.est_error))


# -- Floquet exponents ----------------------------------------------------------


def test_kappa_zero_for_zero_potential(zero):
    eigs = dirichlet_spectrum(zero, 10, TOL)
    for k in floquet_exponents(zero, eigs, TOL):
        assert abs(k.kappa) <= 1e-10
        assert k.valid


def test_kappa_derivative_matches_sine_coefficient():
    """d kappa_n / d eps at eps=0 equals <q0, sin 2 pi n x>/(2 pi n)."""
    q0 = (
        FourierFunction.sine(1, 0.9)
        + FourierFunction.sine(2, 1.0)
        + FourierFunction.cosine(1, 0.7)
        + FourierFunction.sine(3, -0.4)
    )
    eps = 1e-5
    for n in (1, 2, 3):
        kp = floquet_exponents(q0.scaled(eps), dirichlet_spectrum(q0.scaled(eps), n, TOL), TOL)
        km = floquet_exponents(q0.scaled(-eps), dirichlet_spectrum(q0.scaled(-eps), n, TOL), TOL)
        deriv = (kp[n - 1].kappa.real - km[n - 1].kappa.real) / (2 * eps)
        assert deriv == pytest.approx(sine_coefficient(q0, n).real / (2 * PI * n), abs=1e-7)


def test_kappa_real_for_real_potential():
    q = sample_ball(1.5, 1.2, 16, 0.2, 29)
    eigs = dirichlet_spectrum(q, 16, TOL)
    for k in floquet_exponents(q, eigs, TOL):
        assert k.kappa.imag == 0.0


def test_floquet_matrix_triangular_and_wronskian():
    q = sample_ball(1.0, 1.5, 16, 0.2, 31)
    eigs = dirichlet_spectrum(q, 10, TOL)
    res = propagate(potential_table(q), [e.mu for e in eigs], TOL)
    assert np.max(np.abs(res.y2)) <= 1e-9
    assert np.max(np.abs(res.y1 * res.dy2 - 1.0)) <= 1e-9


# -- discriminant and periodic spectrum ------------------------------------------


def test_discriminant_q0_closed_form(zero):
    for lam in (0.3, PI2, 200.0):
        assert discriminant(zero, lam, TOL) == pytest.approx(2 * math.cos(math.sqrt(lam)), abs=1e-10)
    assert discriminant(zero, PI2, TOL) == pytest.approx(-2.0, abs=1e-10)


def test_periodic_q0_all_gaps_closed(zero):
    per = periodic_spectrum(zero, 10, TOL)
    assert abs(per.lam0) <= 1e-9
    for p in per.pairs:
        assert p.gap == 0.0
        assert p.lam_minus == pytest.approx(p.n**2 * PI2, rel=1e-10, abs=1e-9)


def test_first_gap_opens_linearly():
    """Gap width c + O(c^2) for q = c cos(2 pi x) (two-mode degenerate
    perturbation; cross-checked against a dense bisection oracle)."""
    c = 1e-3
    per = periodic_spectrum(FourierFunction.cosine(1, c), 2, TOL)
    assert per.pair(1).gap == pytest.approx(c, abs=1e-5)
    assert per.pair(2).gap <= 1e-6


def test_discriminant_exceeds_two_inside_gap():
    q = FourierFunction.cosine(1, 1.2)
    per = periodic_spectrum(q, 1, TOL)
    p = per.pair(1)
    assert p.gap > 0.1
    inside = 0.5 * (p.lam_minus + p.lam_plus)
    assert abs(discriminant(q, inside, TOL)) > 2.0
    band = p.lam_minus - 0.5
    assert abs(discriminant(q, band, TOL)) < 2.0


def test_periodic_ordering_chain():
    q = sample_ball(0.5, 1.8, 24, 0.2, 41)
    per = periodic_spectrum(q, 16, TOL)
    values = [per.lam0]
    for p in per.pairs:
        values.extend([p.lam_minus, p.lam_plus])
    assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
    assert per.lam0 < per.pairs[0].lam_minus


def test_dirichlet_interlaces_gaps():
    """lam_n^- <= mu_n <= lam_n^+ whenever the gap is resolved."""
    q = sample_ball(1.0, 1.6, 24, 0.2, 11)
    eigs = dirichlet_spectrum(q, 16, TOL)
    per = periodic_spectrum(q, 16, TOL)
    for p in per.pairs:
        mu = eigs[p.n - 1].mu.real
        if p.gap > 1e-6:
            assert p.lam_minus - 1e-7 <= mu <= p.lam_plus + 1e-7
        else:
            assert abs(mu - p.midpoint) <= 0.05


def test_periodic_requires_real():
    q = FourierFunction.from_coeffs({1: 1j})
    with pytest.raises(ValueError):
        periodic_spectrum(q, 2, TOL)


def test_symmetry_real_spectra():
    q = sample_ball(1.0, 1.0, 12, 0.2, 43)
    eigs = dirichlet_spectrum(q, 8, TOL)
    assert all(abs(e.mu.imag) <= 1e-10 for e in eigs)


# -- estimate shape invariant ------------------------------------------------------


def test_y1_estimate_shape():
    """|y1(1, nu^2) - cos nu| <= exp(|Im nu| + ||q||_0)/|nu| for |nu| >= 5."""
    rng = np.random.default_rng(3)
    for seed in (1, 2):
        q = sample_ball(0.5, 2.0, 16, 0.2, seed)
        norm0 = sobolev_norm(q, 0.0)
        nus = np.concatenate([rng.uniform(5.0, 60.0, 12), rng.uniform(5.0, 40.0, 6) + 1j * rng.uniform(-1.0, 1.0, 6)])
        res = propagate(potential_table(q), nus**2, TOL)
        for nu, y1 in zip(nus, res.y1):
            bound = math.exp(abs(nu.imag) + norm0) / abs(nu)
            assert abs(y1 - np.cos(nu)) <= bound


# -- residual sequences --------------------------------------------------------------


def test_residuals_zero_potential(zero):
    rk = kappa_residual_sequence(zero, range(1, 6), TOL)
    rm = midpoint_residual_sequence(zero, range(1, 6), TOL)
    assert all(abs(rk.value(n)) <= 1e-9 for n in range(1, 6))
    assert all(abs(rm.value(n)) <= 1e-9 for n in range(1, 6))


def test_kappa_residual_self_consistency():
    """q = sin 2 pi x: the n=1 entry equals 2 pi kappa_1 - 1/2 and agrees
    between two integrator settings."""
    q = FourierFunction.sine(1)
    r9 = kappa_residual_sequence(q, [1], 1e-9).value(1)
    r12 = kappa_residual_sequence(q, [1], 1e-12).value(1)
    k1 = floquet_exponents(q, dirichlet_spectrum(q, 1, TOL), TOL)[0]
    assert r12 == pytest.approx(2 * PI * k1.kappa.real - 0.5, abs=1e-12)
    assert abs(r9 - r12) <= 1e-9


def test_midpoint_residual_second_order_small():
    c = 1e-3
    r = midpoint_residual_sequence(FourierFunction.cosine(1, c), [1], TOL)
    assert abs(r.value(1)) <= 1e-5


def test_residual_weighted_sums_bounded_for_smooth_sample():
    q = sample_ball(2.0, 1.5, 48, 0.2, 19)
    table = spectral_table(q, 32, TOL)
    for N in (0, 1, 2):
        partial = [
            sum(float(n) ** (2 * N + 2) * abs(table.r_kappa.value(n)) ** 2 for n in range(1, top))
            for top in (25, 29, 33)
        ]
        assert partial[-1] < math.inf
        assert partial[-1] - partial[0] <= 0.25 * partial[-1] + 1e-12


def test_spectral_table_rows_consistent():
    q = sample_ball(1.0, 1.0, 16, 0.2, 53)
    table = spectral_table(q, 6, TOL)
    row = table.row(3)
    assert row["n"] == 3
    assert row["mu"] == pytest.approx(table.eigs[2].mu.real)
    assert row["r_mid"] == pytest.approx(
        (table.periodic.pair(3).midpoint - table.eigs[2].mu - cosine_coefficient(q, 3)).real
    )
    assert len(table.est_error) == 6


# -- complex spectra and continuation ----------------------------------------------


def test_complex_spectrum_roots_and_order():
    q = FourierFunction.from_coeffs({1: 0.3 + 0.2j, -1: 0.25 - 0.1j, 2: 0.1j})
    eigs = dirichlet_spectrum_complex(q, 8, 1e-11)
    res = propagate(potential_table(q), [e.mu for e in eigs], 1e-11)
    assert np.max(np.abs(res.y2)) < 1e-8
    reals = [e.mu.real for e in eigs]
    assert all(b > a for a, b in zip(reals, reals[1:]))


def test_continuation_zero_direction_trivial():
    q0 = sample_ball(1.0, 1.0, 8, 0.3, 3)
    rep = analytic_continuation_check(q0, FourierFunction.zero(), 0.5, range(1, 5), 1e-11)
    assert max(rep.mean_defect.values()) <= 1e-10
    assert all(rep.validity.values())


def test_continuation_circle_mean_value():
    rep = analytic_continuation_check(
        FourierFunction.zero(), FourierFunction.cosine(1, 2.0), 0.5, range(1, 9), 1e-11
    )
    assert all(rep.validity[n] for n in rep.n_values)
    assert max(rep.mean_defect.values()) <= 1e-8


def test_continuation_defect_shrinks_with_radius():
    base = sample_ball(1.0, 1.0, 6, 0.4, 5)
    direction = FourierFunction.cosine(1, 1.0)
    d_big = analytic_continuation_check(base, direction, 0.4, range(1, 5), 1e-11)
    d_small = analytic_continuation_check(base, direction, 0.2, range(1, 5), 1e-11)
    big = max(d_big.mean_defect.values())
    small = max(d_small.mean_defect.values())
    assert small <= big / 4.0 + 1e-11


def test_reference_integration_oracle():
    """Production eigenvalues match a from-scratch bisection on y2(1, .)
    run at 100x tighter tolerance."""
    q = sample_ball(1.0, 1.2, 12, 0.2, 61)
    n = 5
    e = dirichlet_eigenvalue(q, n, 1e-10)
    table = potential_table(q)

    def y2(lam):
        return propagate(table, [lam], 1e-12).y2[0].real

    lo, hi = n**2 * PI2 - 1.0, n**2 * PI2 + 1.0
    flo = y2(lo)
    assert flo * y2(hi) < 0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        fm = y2(mid)
        if math.copysign(1.0, fm) == math.copysign(1.0, flo):
            lo, flo = mid, fm
        else:
            hi = mid
    assert e.mu.real == pytest.approx(0.5 * (lo + hi), abs=1e-8)


def test_validity_threshold_helper():
    q = sample_ball(0.0, 2.0, 24, 0.2, 67)
    eigs = dirichlet_spectrum(q, 16, TOL)
    kappas = floquet_exponents(q, eigs, TOL)
    n_r = validity_threshold(kappas)
    assert all(k.valid for k in kappas if k.n > n_r)
