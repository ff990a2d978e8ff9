"""Weighted l^{p,t} sequence spaces over the integers.

Sequences are finitely supported maps k -> xi_k with norm

    ||xi||_{p,t} = (sum_k (<k>^t |xi_k|)^p)^{1/p},       <k> = 1 + |k|,

together with the bilinear l2 pairing, the dual multiplier deformation
xi_z, and the Hoelder-extremal dual element that realizes the norm as a
pairing against a unit-dual-norm vector.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

from .fourier import kweight

__all__ = [
    "WeightedSequence",
    "NormSpec",
    "weighted_norm",
    "dual_deform",
    "pair",
    "extremal_dual",
    "seq_to_json",
    "seq_from_json",
]


@dataclass(frozen=True)
class WeightedSequence:
    """Finitely supported complex sequence indexed by the integers.

    Entries that are exactly zero are dropped at construction.
    """

    entries: dict[int, complex]

    def __post_init__(self):
        cleaned = {}
        for k, v in sorted(self.entries.items()):
            v = complex(v)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"non-finite entry at k={k}")
            if v != 0:
                cleaned[int(k)] = v
        object.__setattr__(self, "entries", cleaned)

    @classmethod
    def delta(cls, k: int, value: complex = 1.0) -> "WeightedSequence":
        return cls({k: value})

    @classmethod
    def zero(cls) -> "WeightedSequence":
        return cls({})

    def value(self, k: int) -> complex:
        return self.entries.get(k, 0j)

    def support(self) -> list[int]:
        return sorted(self.entries)

    def scaled(self, factor: complex) -> "WeightedSequence":
        return WeightedSequence({k: factor * v for k, v in self.entries.items()})

    def __add__(self, other: "WeightedSequence") -> "WeightedSequence":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0j) + v
        return WeightedSequence(out)


@dataclass(frozen=True)
class NormSpec:
    """Exponent pair (p, t) of an l^{p,t} norm.

    p = math.inf is accepted for sup-type dual norms; the conjugate
    exponent q_conj satisfies 1/p + 1/q = 1.
    """

    p: float
    t: float

    def __post_init__(self):
        if not self.p >= 1.0:
            raise ValueError("p must satisfy p >= 1")

    @property
    def q_conj(self) -> float:
        if self.p == 1.0:
            return math.inf
        if math.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1.0)

    def dual(self) -> "NormSpec":
        return NormSpec(self.q_conj, -self.t)


def weighted_norm(xi: WeightedSequence, spec: NormSpec) -> float:
    """||xi||_{p,t} as an exact finite sum; sup norm when p = inf."""
    if math.isinf(spec.p):
        return max((kweight(k) ** spec.t * abs(v) for k, v in xi.entries.items()), default=0.0)
    total = math.fsum(
        (kweight(k) ** spec.t * abs(v)) ** spec.p for k, v in xi.entries.items()
    )
    return total ** (1.0 / spec.p)


def dual_deform(xi: WeightedSequence, s: float, beta: float, z: complex) -> WeightedSequence:
    """Entrywise multiplication by <k>^{-beta (s - z)}; identity at z = s."""
    z = complex(z)
    return WeightedSequence(
        {k: cmath.exp(-beta * (s - z) * math.log(kweight(k))) * v for k, v in xi.entries.items()}
    )


def pair(eta: WeightedSequence, xi: WeightedSequence) -> complex:
    """Bilinear l2 pairing sum_k eta_k xi_k over the common support."""
    a, b = eta.entries, xi.entries
    if len(b) < len(a):
        a, b = b, a
    return complex(sum(v * b.get(k, 0j) for k, v in a.items()))


def extremal_dual(eta: WeightedSequence, spec: NormSpec) -> WeightedSequence:
    """Hoelder-extremal dual of a nonzero sequence for p > 1.

    Returns xi with pair(eta, xi) = ||eta||_{p,t} and ||xi||_{q,-t} = 1:
    xi_k = conj(eta_k)/|eta_k| * <k>^{t p} |eta_k|^{p-1} / ||eta||^{p-1}.
    """
    if math.isinf(spec.p) or spec.p <= 1.0:
        raise ValueError("extremal dual requires 1 < p < inf")
    if not eta.entries:
        raise ValueError("extremal dual of the zero sequence is undefined")
    norm = weighted_norm(eta, spec)
    out = {}
    for k, v in eta.entries.items():
        mag = abs(v)
        out[k] = (
            (v.conjugate() / mag)
            * kweight(k) ** (spec.t * spec.p)
            * mag ** (spec.p - 1.0)
            / norm ** (spec.p - 1.0)
        )
    return WeightedSequence(out)


def seq_to_json(xi: WeightedSequence) -> str:
    """JSON form {"entries": [[k, re, im], ...]}, k strictly increasing."""
    rows = [[int(k), xi.entries[k].real, xi.entries[k].imag] for k in sorted(xi.entries)]
    return json.dumps({"entries": rows})


def seq_from_json(text: str) -> WeightedSequence:
    data = json.loads(text)
    ks = [int(row[0]) for row in data["entries"]]
    if ks != sorted(set(ks)):
        raise ValueError("entry rows must have strictly increasing k")
    return WeightedSequence({int(k): complex(re, im) for k, re, im in data["entries"]})
