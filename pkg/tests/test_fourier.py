"""Fourier-side types: norms, deformation family, pairings, sampling."""

import math

import numpy as np
import pytest

from hillspec.fourier import (
    FourierFunction,
    bilinear_pair,
    cosine_coefficient,
    deform,
    evaluate,
    from_json,
    hermitian_pair,
    kweight,
    sample_ball,
    sine_coefficient,
    sobolev_norm,
    to_json,
)


def test_single_mode_norm():
    f = FourierFunction.mode(1)
    assert sobolev_norm(f, 1.0) == pytest.approx(2.0, abs=0)


def test_zero_norm_any_order():
    z = FourierFunction.zero()
    for s in (0.0, 0.5, 3.0):
        assert sobolev_norm(z, s) == 0.0


def test_sine_norm_l2():
    f = FourierFunction.sine(1)
    assert f.coeffs[1] == -0.5j and f.coeffs[-1] == 0.5j
    assert sobolev_norm(f, 0.0) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)


def test_mean_zero_enforced():
    with pytest.raises(ValueError):
        FourierFunction({0: 1.0}, 1, False)


def test_real_symmetry_checked_exactly():
    with pytest.raises(ValueError):
        FourierFunction({1: 1 + 1j, -1: 1 + 1j}, 1, True)
    FourierFunction({1: 1 + 1j, -1: 1 - 1j}, 1, True)


def test_band_limit_enforced():
    with pytest.raises(ValueError):
        FourierFunction({5: 1.0}, 4, False)


def test_deform_identity_at_s():
    f = FourierFunction.from_coeffs({2: 1.5 - 0.5j, -2: 0.25j})
    g = deform(f, 1.25, 1.25)
    assert g.coeffs == f.coeffs


def test_deform_single_mode_value():
    f = FourierFunction.mode(1)
    g = deform(f, 1.0, 0.0)
    assert g.coeffs[1] == pytest.approx(2.0)


@pytest.mark.parametrize("s,u,v", [(1.0, 0.5, 3.0), (0.0, 0.0, -7.0), (2.0, 2.0, 0.3), (1.5, 0.7, 11.0)])
def test_deform_isometry(s, u, v):
    rng = np.random.default_rng(5)
    f = FourierFunction.from_coeffs(
        {k: complex(rng.normal(), rng.normal()) for k in range(-6, 7) if k != 0}
    )
    g = deform(f, s, complex(u, v))
    assert sobolev_norm(g, u) == pytest.approx(sobolev_norm(f, s), rel=1e-13)


def test_deform_monotone_embedding():
    rng = np.random.default_rng(6)
    f = FourierFunction.from_coeffs(
        {k: complex(rng.normal(), rng.normal()) for k in range(-8, 9) if k != 0}
    )
    s = 1.0
    for u in (0.25, 0.6, 1.0):
        for a in (0.0, 0.1, 0.25):
            if a <= u:
                g = deform(f, s, complex(u, 2.0))
                assert sobolev_norm(g, a) <= sobolev_norm(f, s) + 1e-13


def test_norm_monotone_in_order():
    f = sample_ball(0.5, 1.0, 12, 0.3, 2)
    assert sobolev_norm(f, 0.3) <= sobolev_norm(f, 0.9)
    assert sobolev_norm(f, 0.9) <= sobolev_norm(f, 2.0)


def test_parseval_against_grid_quadrature():
    f = sample_ball(1.0, 1.3, 16, 0.25, 9)
    npts = 4 * 16
    x = np.arange(npts) / npts
    vals = evaluate(f, x)
    quad = math.sqrt(float(np.mean(np.abs(vals) ** 2)))
    assert quad == pytest.approx(sobolev_norm(f, 0.0), rel=1e-10)


def test_bilinear_pair_sines():
    for n in (1, 3):
        s = FourierFunction.sine(n)
        c = FourierFunction.cosine(n)
        assert bilinear_pair(s, s) == pytest.approx(0.5)
        assert abs(bilinear_pair(s, c)) < 1e-15
    assert bilinear_pair(FourierFunction.sine(2), FourierFunction.zero()) == 0


def test_pair_is_bilinear_not_sesquilinear():
    rng = np.random.default_rng(11)
    for _ in range(20):
        f = FourierFunction.from_coeffs({k: complex(rng.normal(), rng.normal()) for k in (-2, 1, 3)})
        g = FourierFunction.from_coeffs({k: complex(rng.normal(), rng.normal()) for k in (-3, -1, 2)})
        h = FourierFunction.from_coeffs({k: complex(rng.normal(), rng.normal()) for k in (-1, 2)})
        c = complex(rng.normal(), rng.normal())
        lhs = bilinear_pair(f.scaled(c) + h, g)
        rhs = c * bilinear_pair(f, g) + bilinear_pair(h, g)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
        lhs2 = bilinear_pair(g, f.scaled(c) + h)
        assert lhs2 == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_hermitian_pair_conjugates():
    f = FourierFunction.mode(2, 1 + 2j)
    g = FourierFunction.mode(2, 3 - 1j)
    assert hermitian_pair(f, g) == pytest.approx((1 + 2j) * (3 + 1j))


def test_trig_coefficients():
    q = FourierFunction.sine(1)
    assert sine_coefficient(q, 1) == pytest.approx(0.5)
    assert abs(sine_coefficient(FourierFunction.cosine(1), 1)) < 1e-15
    assert abs(sine_coefficient(FourierFunction.sine(2), 1)) < 1e-15
    assert cosine_coefficient(FourierFunction.cosine(3, 0.8), 3) == pytest.approx(0.4)
    q2 = sample_ball(1.0, 1.0, 8, 0.2, 4)
    for n in (1, 4):
        assert sine_coefficient(q2, n) == pytest.approx(-q2.coeffs[n].imag, rel=1e-14)
        assert cosine_coefficient(q2, n) == pytest.approx(q2.coeffs[n].real, rel=1e-14)


def test_sample_ball_norm_and_determinism():
    for seed in (0, 7, 12345):
        f = sample_ball(1.0, 2.0, 32, 0.2, seed)
        assert sobolev_norm(f, 1.0) == pytest.approx(0.8 * 2.0, rel=1e-12)
        g = sample_ball(1.0, 2.0, 32, 0.2, seed)
        assert f.coeffs == g.coeffs
        assert f.real_symmetric


def test_sample_ball_higher_order_norm_finite():
    f = sample_ball(0.5, 1.0, 24, 0.2, 3)
    assert sobolev_norm(f, 1.5) >= sobolev_norm(f, 0.5)
    assert math.isfinite(sobolev_norm(f, 1.5))


def test_sample_ball_rejects_empty_band():
    with pytest.raises(ValueError):
        sample_ball(1.0, 1.0, 0, 0.2, 1)


def test_evaluate_closed_forms():
    c = FourierFunction.cosine(1)
    assert evaluate(c, [0.0], real=True)[0] == pytest.approx(1.0, rel=1e-14)
    s = FourierFunction.sine(1)
    assert evaluate(s, [0.25], real=True)[0] == pytest.approx(1.0, rel=1e-14)
    assert np.all(evaluate(FourierFunction.zero(), np.linspace(0, 1, 5)) == 0)


def test_evaluate_real_imag_noise():
    f = sample_ball(0.0, 1.0, 32, 0.2, 8)
    vals = evaluate(f, np.linspace(0.0, 1.0, 257))
    assert float(np.max(np.abs(vals.imag))) <= 1e-13


def test_json_round_trip_bit_exact():
    rng = np.random.default_rng(42)
    f = FourierFunction.from_coeffs(
        {k: complex(rng.normal() * 10.0 ** rng.integers(-8, 9), rng.normal()) for k in range(-9, 10) if k != 0}
    )
    g = from_json(to_json(f))
    assert g.coeffs == f.coeffs
    assert g.max_freq == f.max_freq and g.real_symmetric == f.real_symmetric
    assert to_json(g) == to_json(f)


def test_json_rejects_unsorted_rows():
    with pytest.raises(ValueError):
        from_json('{"K": 2, "real": false, "coeffs": [[2, 1.0, 0.0], [1, 1.0, 0.0]]}')


def test_kweight():
    assert kweight(0) == 1.0 and kweight(3) == 4.0 and kweight(-3) == 4.0
