"""Spectral quantities of 1-D periodic Schrodinger operators and a
constructive three-lines interpolation verifier.

Library layers:

  * fourier / sequences: band-limited mean-zero functions on the circle
    and weighted l^{p,t} sequences, with norms, pairings and the
    multiplier deformation families.
  * rk / schrodinger: batched high-order integration of the fundamental
    system, Dirichlet and periodic spectra, Floquet exponents kappa_n,
    and the residual sequences whose decay tracks potential smoothness.
  * interpolation / spectral_maps: strip construction, measured boundary
    bounds, the three-lines check, extremal-dual norm certification and
    the exact diagonal-multiplier baseline.
  * campaign / figures / cli: deterministic batch campaigns with CSV,
    JSON, text and PNG outputs.
"""

from .fourier import (
    FourierFunction,
    bilinear_pair,
    cosine_coefficient,
    deform,
    evaluate,
    kweight,
    sample_ball,
    sine_coefficient,
    sobolev_norm,
)
from .interpolation import (
    AnalyticMap,
    InterpolationSpec,
    StripReport,
    boundary_bounds,
    convolution_square_map,
    diagonal_multiplier_map,
    identity_map,
    interpolated_norm_check,
    riesz_thorin_baseline,
    strip_function,
    three_lines_check,
    three_lines_check_many,
)
from .rk import IntegrationError, propagate
from .schrodinger import (
    DirichletEigenvalue,
    FloquetExponent,
    FundamentalMatrix,
    PeriodicPair,
    PeriodicSpectrum,
    SpectralError,
    analytic_continuation_check,
    dirichlet_eigenvalue,
    dirichlet_spectrum,
    discriminant,
    floquet_exponent,
    floquet_exponents,
    fundamental_solution,
    kappa_residual_sequence,
    midpoint_residual_sequence,
    periodic_spectrum,
    spectral_table,
)
from .sequences import (
    NormSpec,
    WeightedSequence,
    dual_deform,
    extremal_dual,
    pair,
    weighted_norm,
)
from .spectral_maps import kappa_residual_map

__version__ = "0.1.0"
