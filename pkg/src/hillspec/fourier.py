"""Band-limited mean-zero functions on the unit circle.

A function is stored by its nonzero Fourier coefficients c(k), so that

    f(x) = sum_k c(k) exp(2 pi i k x),        c(0) = 0.

All norms, pairings and multiplier deformations below are finite sums
over the stored support; there is no truncation error beyond floating
point.  The frequency weight used throughout is <k> = 1 + |k|.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FourierFunction",
    "kweight",
    "sobolev_norm",
    "hermitian_norm_sq",
    "deform",
    "bilinear_pair",
    "hermitian_pair",
    "sine_coefficient",
    "cosine_coefficient",
    "sample_ball",
    "evaluate",
    "to_json",
    "from_json",
]

# Spectral decay margin of the ball sampler: magnitudes decay like
# (1+k)^(-s - 1/2 - SAMPLER_EPS), which lies in H^s but in no H^t with
# t >= s + 1/2 + 2*SAMPLER_EPS, keeping decay-rate tests sharp.
SAMPLER_EPS = 0.01


def kweight(k: int) -> float:
    """Frequency weight <k> = 1 + |k|."""
    return 1.0 + abs(k)


@dataclass(frozen=True)
class FourierFunction:
    """Finitely supported Fourier representation of a mean-zero function.

    coeffs maps integer frequency k to the complex amplitude c(k).
    Exact zeros are dropped at construction, c(0) must vanish, and the
    support must stay within |k| <= max_freq.  When real_symmetric is
    set, c(-k) == conj(c(k)) holds exactly and the represented function
    is real valued.
    """

    coeffs: dict[int, complex]
    max_freq: int
    real_symmetric: bool

    def __post_init__(self):
        cleaned = {}
        for k, c in sorted(self.coeffs.items()):
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError(f"non-finite coefficient at k={k}")
            if c == 0:
                continue
            if k == 0:
                raise ValueError("mean-zero violated: c(0) != 0")
            if abs(k) > self.max_freq:
                raise ValueError(f"coefficient at k={k} outside band |k| <= {self.max_freq}")
            cleaned[int(k)] = c
        if self.max_freq < 0:
            raise ValueError("max_freq must be >= 0")
        if self.real_symmetric:
            for k, c in cleaned.items():
                if cleaned.get(-k, 0j) != c.conjugate():
                    raise ValueError(f"real symmetry violated at k={k}")
        object.__setattr__(self, "coeffs", cleaned)

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs: dict[int, complex], max_freq: int | None = None) -> "FourierFunction":
        """Build from a coefficient map, inferring the band and symmetry."""
        nonzero = {k: complex(c) for k, c in coeffs.items() if complex(c) != 0}
        kmax = max((abs(k) for k in nonzero), default=0)
        if max_freq is None:
            max_freq = kmax
        sym = all(nonzero.get(-k, 0j) == c.conjugate() for k, c in nonzero.items())
        return cls(nonzero, max_freq, sym)

    @classmethod
    def zero(cls) -> "FourierFunction":
        return cls({}, 0, True)

    @classmethod
    def mode(cls, k: int, amplitude: complex = 1.0) -> "FourierFunction":
        """Single exponential amplitude * e^{2 pi i k x}."""
        return cls.from_coeffs({k: amplitude})

    @classmethod
    def sine(cls, n: int, amplitude: float = 1.0) -> "FourierFunction":
        """amplitude * sin(2 pi n x)."""
        a = amplitude / 2.0
        return cls.from_coeffs({n: -1j * a, -n: 1j * a})

    @classmethod
    def cosine(cls, n: int, amplitude: float = 1.0) -> "FourierFunction":
        """amplitude * cos(2 pi n x)."""
        a = amplitude / 2.0
        return cls.from_coeffs({n: a, -n: a})

    # -- basic algebra ----------------------------------------------------

    def __add__(self, other: "FourierFunction") -> "FourierFunction":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0j) + c
        return FourierFunction.from_coeffs(out, max(self.max_freq, other.max_freq))

    def scaled(self, factor: complex) -> "FourierFunction":
        return FourierFunction.from_coeffs(
            {k: factor * c for k, c in self.coeffs.items()}, self.max_freq
        )

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Support and coefficients as aligned numpy arrays (k ascending)."""
        ks = np.array(sorted(self.coeffs), dtype=np.int64)
        cs = np.array([self.coeffs[int(k)] for k in ks], dtype=np.complex128)
        return ks, cs

    def coefficient(self, k: int) -> complex:
        return self.coeffs.get(k, 0j)

    def sup_bound(self) -> float:
        """l1 coefficient bound on sup |f|."""
        return float(sum(abs(c) for c in self.coeffs.values()))


def sobolev_norm(f: FourierFunction, s: float) -> float:
    """Norm (sum_k <k>^{2s} |c(k)|^2)^{1/2}; order s must be >= 0."""
    if s < 0:
        raise ValueError("Sobolev order must be >= 0")
    total = math.fsum(kweight(k) ** (2.0 * s) * abs(c) ** 2 for k, c in f.coeffs.items())
    return math.sqrt(total)


def hermitian_norm_sq(f: FourierFunction) -> float:
    """Plain L2 norm squared, sum |c(k)|^2 (helper for norm checks)."""
    return math.fsum(abs(c) ** 2 for c in f.coeffs.values())


def deform(f: FourierFunction, s: float, z: complex) -> FourierFunction:
    """Multiplier image with coefficients <k>^{s-z} c(k).

    The family is the identity at z = s, and on the vertical line
    Re z = u it is an isometry from order s to order u.
    """
    z = complex(z)
    out = {}
    for k, c in f.coeffs.items():
        out[k] = cmath.exp((s - z) * math.log(kweight(k))) * c
    sym = f.real_symmetric and z.imag == 0.0
    return FourierFunction(out, f.max_freq, sym)


def bilinear_pair(f: FourierFunction, g: FourierFunction) -> complex:
    """Bilinear pairing int_0^1 f(x) g(x) dx = sum_k c_f(k) c_g(-k).

    Bilinear (not conjugate-linear) in both slots, so residual formulas
    built from it extend analytically in the potential.
    """
    if len(g.coeffs) < len(f.coeffs):
        f, g = g, f
    return complex(sum(c * g.coeffs.get(-k, 0j) for k, c in f.coeffs.items()))


def hermitian_pair(f: FourierFunction, g: FourierFunction) -> complex:
    """Hermitian product int f conj(g) = sum_k c_f(k) conj(c_g(k))."""
    if len(g.coeffs) < len(f.coeffs):
        return complex(sum(f.coeffs.get(k, 0j) * c.conjugate() for k, c in g.coeffs.items()))
    return complex(sum(c * g.coeffs.get(k, 0j).conjugate() for k, c in f.coeffs.items()))


def sine_coefficient(q: FourierFunction, n: int) -> complex:
    """<q, sin 2 pi n x> under the bilinear pairing; -Im c(n) for real q."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (q.coefficient(-n) - q.coefficient(n)) / 2j


def cosine_coefficient(q: FourierFunction, n: int) -> complex:
    """<q, cos 2 pi n x> under the bilinear pairing; Re c(n) for real q."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (q.coefficient(n) + q.coefficient(-n)) / 2.0


def sample_ball(s: float, radius: float, kmax: int, margin: float, seed: int) -> FourierFunction:
    """Deterministic random real potential of exact norm (1-margin)*radius.

    Coefficient magnitudes decay like (1+k)^(-s-1/2-eps) with random
    phases, then the whole function is rescaled so its order-s norm hits
    (1-margin)*radius exactly (up to one floating multiply).  The decay
    exponent makes the sample sharply of order s: it belongs to H^s but
    its tail is too fat for H^{s+1/2+2 eps}.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1: no nonzero mean-zero sample exists")
    if not (0.0 < margin < 1.0):
        raise ValueError("margin must lie in (0, 1)")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if s < 0:
        raise ValueError("Sobolev order must be >= 0")
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=kmax)
    coeffs: dict[int, complex] = {}
    for k in range(1, kmax + 1):
        mag = (1.0 + k) ** (-s - 0.5 - SAMPLER_EPS)
        c = mag * cmath.exp(1j * phases[k - 1])
        coeffs[k] = c
        coeffs[-k] = c.conjugate()
    raw = FourierFunction(coeffs, kmax, True)
    target = (1.0 - margin) * radius
    return raw.scaled(target / sobolev_norm(raw, s))


def evaluate(f: FourierFunction, x_grid, real: bool = False) -> np.ndarray:
    """Pointwise synthesis sum_k c(k) e^{2 pi i k x} on a grid.

    With real=True (valid for real_symmetric input) the imaginary part,
    which is pure rounding noise, is discarded.
    """
    x = np.atleast_1d(np.asarray(x_grid, dtype=np.float64))
    ks, cs = f.arrays()
    if ks.size == 0:
        vals = np.zeros(x.shape, dtype=np.complex128)
    else:
        vals = np.exp(2j * math.pi * np.outer(x, ks)) @ cs
    if real:
        if not f.real_symmetric:
            raise ValueError("real evaluation requested for a non-real function")
        return vals.real
    return vals


# -- serialization --------------------------------------------------------


def to_json(f: FourierFunction) -> str:
    """JSON form {"K", "real", "coeffs": [[k, re, im], ...]}, k ascending.

    Floats go through repr, so finite doubles round-trip bit exactly.
    """
    rows = [[int(k), f.coeffs[k].real, f.coeffs[k].imag] for k in sorted(f.coeffs)]
    return json.dumps({"K": f.max_freq, "real": f.real_symmetric, "coeffs": rows})


def from_json(text: str) -> FourierFunction:
    data = json.loads(text)
    ks = [int(row[0]) for row in data["coeffs"]]
    if ks != sorted(set(ks)):
        raise ValueError("coefficient rows must have strictly increasing k")
    coeffs = {int(k): complex(re, im) for k, re, im in data["coeffs"]}
    return FourierFunction(coeffs, int(data["K"]), bool(data["real"]))
