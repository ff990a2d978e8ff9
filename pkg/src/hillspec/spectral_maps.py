"""Spectral residual maps packaged as analytic-map verifier inputs.

The truncated kappa-residual map sends a potential q to the sequence

    n  ->  2 pi n kappa_n(q) - <q, sin 2 pi n x>,      n_lo < n <= n_hi,

embedded at index k = n.  On complex deformations of a real potential
the Dirichlet roots are Newton-continued sample to sample, so whole
strip lines can be evaluated at warm-start cost.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .fourier import FourierFunction, deform, sine_coefficient
from .interpolation import AnalyticMap
from .rk import potential_table, propagate
from .schrodinger import (
    PI,
    VALIDITY_RADIUS,
    SpectralError,
    _continue_dirichlet,
    dirichlet_spectrum,
    dirichlet_spectrum_complex,
)
from .sequences import WeightedSequence

__all__ = ["kappa_residual_map"]


def kappa_residual_map(n_lo: int, n_hi: int, tol: float) -> AnalyticMap:
    """Truncated kappa-residual map over the index window (n_lo, n_hi]."""
    if not (0 <= n_lo < n_hi):
        raise ValueError("need 0 <= n_lo < n_hi")
    ns = list(range(n_lo + 1, n_hi + 1))
    signs = np.array([(-1) ** n for n in ns], dtype=np.float64)

    def residuals_at(q: FourierFunction, mu: np.ndarray) -> WeightedSequence:
        res = propagate(potential_table(q), mu, tol)
        signed = signs * res.y1
        bad = np.abs(signed - 1.0) > VALIDITY_RADIUS
        if bad.any():
            worst = [ns[i] for i in np.nonzero(bad)[0]]
            raise SpectralError(
                f"kappa_n left the principal-log validity region at n={worst}"
            )
        entries = {}
        for i, n in enumerate(ns):
            kappa = -cmath.log(complex(signed[i]))
            entries[n] = 2.0 * PI * n * kappa - sine_coefficient(q, n)
        return WeightedSequence(entries)

    def window_mu(q: FourierFunction) -> np.ndarray:
        if q.real_symmetric:
            eigs = dirichlet_spectrum(q, n_hi, tol)
        else:
            eigs = dirichlet_spectrum_complex(q, n_hi, tol)
        return np.array([eigs[n - 1].mu for n in ns], dtype=np.complex128)

    def fn(q: FourierFunction) -> WeightedSequence:
        return residuals_at(q, window_mu(q))

    def strip_eval(phi: FourierFunction, s: float, zs: list[complex]):
        if not phi.real_symmetric:
            return [fn(deform(phi, s, z)) for z in zs]
        out: list[WeightedSequence | None] = [None] * len(zs)
        for u in sorted({complex(z).real for z in zs}):
            idx = [i for i, z in enumerate(zs) if complex(z).real == u]
            phi_u = deform(phi, s, u)
            mu_u = window_mu(phi_u)
            up = sorted((i for i in idx if complex(zs[i]).imag >= 0), key=lambda i: complex(zs[i]).imag)
            down = sorted((i for i in idx if complex(zs[i]).imag < 0), key=lambda i: -complex(zs[i]).imag)
            for chain in (up, down):
                mu = mu_u.copy()
                prev = phi_u
                for i in chain:
                    qz = deform(phi, s, zs[i])
                    mu = _continue_dirichlet(prev, qz, mu, tol, first_dt=1.0)
                    prev = qz
                    out[i] = residuals_at(qz, mu)
        return out

    # absolute noise scale of the residual entries: the kappa evaluation
    # error grows like 2 pi n times the integrator error indicator
    noise = 2.0 * PI * n_hi * tol * 50.0
    return AnalyticMap("kappa", fn, n_hi, value_noise=noise, strip_eval=strip_eval)
