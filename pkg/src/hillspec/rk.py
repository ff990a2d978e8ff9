"""Adaptive high-order propagation of the fundamental Schrodinger system.

Integrates Y' = [[0, 1], [q(x) - lam, 0]] Y on [0, 1] from the identity,
for a whole batch of spectral parameters lam at once (and optionally a
batch of potentials, one per column).  A classical Fehlberg 7(8)
embedded pair advances the batch with shared adaptive steps; the
controller is driven by the worst column, so every column meets the
tolerance.  Optionally the variational columns dY/dlam are carried
along, which gives exact derivatives for Newton root polishing.

Batching matters: a sweep over m spectral parameters costs almost the
same as a single integration, because each stage is a handful of
length-m vector operations.  When numba is available the stepping loop
is JIT compiled, which removes the per-step dispatch overhead; the pure
numpy loop remains as the reference path and produces the same results
to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


from .fourier import FourierFunction

__all__ = [
    "IntegrationError",
    "TOL_MIN",
    "TOL_MAX",
    "PotentialTable",
    "potential_table",
    "batch_potential_table",
    "propagate",
    "PropagationResult",
]

TOL_MIN = 1e-13
TOL_MAX = 1e-6

_TWO_PI = 2.0 * math.pi

# Fehlberg 7(8) pair, 13 stages.  The 8th-order solution is propagated;
# the difference to the embedded 7th-order one is the local error
# estimate err = h * 41/840 * (k0 + k10 - k11 - k12).
_C = np.array(
    [0.0, 2 / 27, 1 / 9, 1 / 6, 5 / 12, 1 / 2, 5 / 6, 1 / 6, 2 / 3, 1 / 3, 1.0, 0.0, 1.0]
)

_A_ROWS: list[list[tuple[int, float]]] = [
    [],
    [(0, 2 / 27)],
    [(0, 1 / 36), (1, 1 / 12)],
    [(0, 1 / 24), (2, 1 / 8)],
    [(0, 5 / 12), (2, -25 / 16), (3, 25 / 16)],
    [(0, 1 / 20), (3, 1 / 4), (4, 1 / 5)],
    [(0, -25 / 108), (3, 125 / 108), (4, -65 / 27), (5, 125 / 54)],
    [(0, 31 / 300), (4, 61 / 225), (5, -2 / 9), (6, 13 / 900)],
    [(0, 2.0), (3, -53 / 6), (4, 704 / 45), (5, -107 / 9), (6, 67 / 90), (7, 3.0)],
    [
        (0, -91 / 108),
        (3, 23 / 108),
        (4, -976 / 135),
        (5, 311 / 54),
        (6, -19 / 60),
        (7, 17 / 6),
        (8, -1 / 12),
    ],
    [
        (0, 2383 / 4100),
        (3, -341 / 164),
        (4, 4496 / 1025),
        (5, -301 / 82),
        (6, 2133 / 4100),
        (7, 45 / 82),
        (8, 45 / 164),
        (9, 18 / 41),
    ],
    [
        (0, 3 / 205),
        (5, -6 / 41),
        (6, -3 / 205),
        (7, -3 / 41),
        (8, 3 / 41),
        (9, 6 / 41),
    ],
    [
        (0, -1777 / 4100),
        (3, -341 / 164),
        (4, 4496 / 1025),
        (5, -289 / 82),
        (6, 2193 / 4100),
        (7, 51 / 82),
        (8, 33 / 164),
        (9, 12 / 41),
        (11, 1.0),
    ],
]

_B8 = [
    (5, 34 / 105),
    (6, 9 / 35),
    (7, 9 / 35),
    (8, 9 / 280),
    (9, 9 / 280),
    (11, 41 / 840),
    (12, 41 / 840),
]

_ERR_COEFF = 41 / 840

# flattened tableau for the jitted kernel
_NSTAGE = 13
_A_PTR = np.zeros(_NSTAGE + 1, dtype=np.int64)
for _i, _row in enumerate(_A_ROWS):
    _A_PTR[_i + 1] = _A_PTR[_i] + len(_row)
_A_IDX = np.array([j for row in _A_ROWS for (j, _) in row], dtype=np.int64)
_A_VAL = np.array([a for row in _A_ROWS for (_, a) in row], dtype=np.float64)
_B_IDX = np.array([j for (j, _) in _B8], dtype=np.int64)
_B_VAL = np.array([b for (_, b) in _B8], dtype=np.float64)


class IntegrationError(RuntimeError):
    """Raised when the adaptive stepper exceeds its step ceiling."""


@dataclass(frozen=True)
class PotentialTable:
    """Synthesis table for one potential (shared) or one per column."""

    ks: np.ndarray
    cmat: np.ndarray
    shared: bool

    def __call__(self, x: float):
        if self.ks.size == 0:
            return 0.0 if self.shared else np.zeros(self.cmat.shape[0])
        e = np.exp((2j * math.pi * x) * self.ks)
        q = self.cmat @ e
        return q[0] if self.shared else q


def potential_table(q: FourierFunction) -> PotentialTable:
    """Synthesis table for a single potential shared by all columns."""
    ks, cs = q.arrays()
    return PotentialTable(ks.astype(np.float64), cs.reshape(1, -1), True)


def batch_potential_table(qs: list[FourierFunction]) -> PotentialTable:
    """Synthesis table with one potential per batch column."""
    support = sorted({k for q in qs for k in q.coeffs})
    ks = np.array(support, dtype=np.float64)
    cmat = np.zeros((len(qs), len(support)), dtype=np.complex128)
    index = {k: i for i, k in enumerate(support)}
    for row, q in enumerate(qs):
        for k, c in q.coeffs.items():
            cmat[row, index[k]] = c
    return PotentialTable(ks, cmat, False)


@dataclass
class PropagationResult:
    """Fundamental matrix columns at x = x_end for each lam in the batch.

    Rows y1, dy1, y2, dy2 are the entries of M(x_end, lam); when the
    variational system was requested, v-rows hold d/dlam of each entry.
    est_error accumulates the per-step embedded-pair error estimates
    (scaled by 1 + |Y|), a cheap indicator of the global error.
    """

    y1: np.ndarray
    dy1: np.ndarray
    y2: np.ndarray
    dy2: np.ndarray
    v_y1: np.ndarray | None
    v_dy1: np.ndarray | None
    v_y2: np.ndarray | None
    v_dy2: np.ndarray | None
    est_error: np.ndarray
    steps: int

    def wronskian(self) -> np.ndarray:
        return self.y1 * self.dy2 - self.y2 * self.dy1


@njit(cache=True)
def _kernel(ks, cmat, lam, nstate, x_end, rtol, atol, h0, max_steps, a_ptr, a_idx, a_val, b_idx, b_val, c_nodes):  # pragma: no cover - exercised via propagate
    m = lam.shape[0]
    mq = cmat.shape[0]
    nk = ks.shape[0]
    Y = np.zeros((nstate, m), dtype=np.complex128)
    Y[0, :] = 1.0
    Y[3, :] = 1.0
    K = np.zeros((13, nstate, m), dtype=np.complex128)
    stage = np.zeros((nstate, m), dtype=np.complex128)
    ynew = np.zeros((nstate, m), dtype=np.complex128)
    qx = np.zeros(m, dtype=np.complex128)
    est = np.zeros(m, dtype=np.float64)
    err_coeff = 41.0 / 840.0

    x = 0.0
    h = h0
    steps = 0
    naccept = 0
    while x < x_end:
        if steps >= max_steps:
            return Y, est, naccept, 1
        if h > x_end - x:
            h = x_end - x
        for i in range(13):
            if i == 0:
                for s in range(nstate):
                    for col in range(m):
                        stage[s, col] = Y[s, col]
            else:
                for s in range(nstate):
                    for col in range(m):
                        stage[s, col] = Y[s, col]
                for p in range(a_ptr[i], a_ptr[i + 1]):
                    j = a_idx[p]
                    ha = h * a_val[p]
                    for s in range(nstate):
                        for col in range(m):
                            stage[s, col] += ha * K[j, s, col]
            # potential at the stage abscissa
            xi = x + c_nodes[i] * h
            if nk == 0:
                for col in range(m):
                    qx[col] = 0.0
            else:
                phase = 2.0 * math.pi * xi
                if mq == 1:
                    acc = 0.0 + 0.0j
                    for t in range(nk):
                        acc += cmat[0, t] * np.exp(1j * phase * ks[t])
                    for col in range(m):
                        qx[col] = acc
                else:
                    for col in range(m):
                        acc = 0.0 + 0.0j
                        for t in range(nk):
                            acc += cmat[col, t] * np.exp(1j * phase * ks[t])
                        qx[col] = acc
            # rhs
            for col in range(m):
                w = qx[col] - lam[col]
                K[i, 0, col] = stage[1, col]
                K[i, 1, col] = w * stage[0, col]
                K[i, 2, col] = stage[3, col]
                K[i, 3, col] = w * stage[2, col]
                if nstate == 8:
                    K[i, 4, col] = stage[5, col]
                    K[i, 5, col] = w * stage[4, col] - stage[0, col]
                    K[i, 6, col] = stage[7, col]
                    K[i, 7, col] = w * stage[6, col] - stage[2, col]
        for s in range(nstate):
            for col in range(m):
                ynew[s, col] = Y[s, col]
        for p in range(b_idx.shape[0]):
            j = b_idx[p]
            hb = h * b_val[p]
            for s in range(nstate):
                for col in range(m):
                    ynew[s, col] += hb * K[j, s, col]
        ratio = 0.0
        for s in range(nstate):
            for col in range(m):
                e = abs(h * err_coeff * (K[0, s, col] + K[10, s, col] - K[11, s, col] - K[12, s, col]))
                ay = abs(Y[s, col])
                an = abs(ynew[s, col])
                big = ay if ay > an else an
                r = e / (atol + rtol * big)
                if r > ratio:
                    ratio = r
        steps += 1
        if ratio <= 1.0 or h <= 1e-12:
            x += h
            for col in range(m):
                emax = 0.0
                for s in range(nstate):
                    e = abs(h * err_coeff * (K[0, s, col] + K[10, s, col] - K[11, s, col] - K[12, s, col]))
                    e = e / (1.0 + abs(ynew[s, col]))
                    if e > emax:
                        emax = e
                est[col] += emax
            for s in range(nstate):
                for col in range(m):
                    Y[s, col] = ynew[s, col]
            naccept += 1
        if ratio > 0.0:
            factor = 0.9 * ratio ** (-0.125)
        else:
            factor = 4.0
        if factor > 4.0:
            factor = 4.0
        if factor < 0.25:
            factor = 0.25
        h *= factor
    return Y, est, naccept, 0


def _propagate_numpy(qfun, lam, tol, nstate, x_end, max_steps):
    m = lam.size
    Y = np.zeros((nstate, m), dtype=np.complex128)
    Y[0] = 1.0
    Y[3] = 1.0
    rtol = tol
    atol = tol * 1e-3
    est = np.zeros(m, dtype=np.float64)
    K = np.empty((13, nstate, m), dtype=np.complex128)
    scratch = np.empty((nstate, m), dtype=np.complex128)

    def rhs(x, Yv, out):
        w = qfun(x) - lam
        out[0] = Yv[1]
        out[1] = w * Yv[0]
        out[2] = Yv[3]
        out[3] = w * Yv[2]
        if nstate == 8:
            out[4] = Yv[5]
            out[5] = w * Yv[4] - Yv[0]
            out[6] = Yv[7]
            out[7] = w * Yv[6] - Yv[2]
        return out

    nu_max = math.sqrt(float(np.max(np.abs(lam)))) if m else 0.0
    x = 0.0
    h = min(0.05, 1.0 / (2.0 + nu_max), x_end if x_end > 0 else 0.05)
    steps = 0
    naccept = 0
    while x < x_end:
        if steps >= max_steps:
            raise IntegrationError(
                f"step ceiling {max_steps} exceeded at x={x:.6g} "
                f"(|lam|max={np.max(np.abs(lam)):.3g})"
            )
        h = min(h, x_end - x)
        rhs(x, Y, K[0])
        for i in range(1, 13):
            scratch[:] = Y
            for j, a in _A_ROWS[i]:
                scratch += (h * a) * K[j]
            rhs(x + _C[i] * h, scratch, K[i])
        ynew = Y.copy()
        for j, b in _B8:
            ynew += (h * b) * K[j]
        err = (h * _ERR_COEFF) * (K[0] + K[10] - K[11] - K[12])
        scale = atol + rtol * np.maximum(np.abs(Y), np.abs(ynew))
        ratio = float(np.max(np.abs(err) / scale))
        steps += 1
        if ratio <= 1.0 or h <= 1e-12:
            x += h
            Y = ynew
            naccept += 1
            est += np.max(np.abs(err) / (1.0 + np.abs(ynew)), axis=0)
        factor = 0.9 * ratio ** (-0.125) if ratio > 0 else 4.0
        h *= min(4.0, max(0.25, factor))
    return Y, est, naccept


def propagate(
    qfun,
    lambdas,
    tol: float,
    dlam: bool = False,
    x_end: float = 1.0,
    max_steps: int = 100_000,
) -> PropagationResult:
    """Propagate the batch from x=0 to x=x_end with error target tol.

    qfun is a PotentialTable (fast path) or any callable returning the
    potential value at x, scalar or aligned with the lam batch.  Raises
    IntegrationError when the step ceiling is hit (stiffness / huge
    |lam| guard).
    """
    if not (TOL_MIN <= tol <= TOL_MAX):
        raise ValueError(f"tol must lie in [{TOL_MIN}, {TOL_MAX}]")
    lam = np.atleast_1d(np.asarray(lambdas, dtype=np.complex128))
    m = lam.size
    nstate = 8 if dlam else 4
    if HAVE_NUMBA and isinstance(qfun, PotentialTable):
        nu_max = math.sqrt(float(np.max(np.abs(lam)))) if m else 0.0
        h0 = min(0.05, 1.0 / (2.0 + nu_max), x_end if x_end > 0 else 0.05)
        Y, est, naccept, status = _kernel(
            qfun.ks,
            np.ascontiguousarray(qfun.cmat),
            lam,
            nstate,
            float(x_end),
            tol,
            tol * 1e-3,
            h0,
            max_steps,
            _A_PTR,
            _A_IDX,
            _A_VAL,
            _B_IDX,
            _B_VAL,
            _C,
        )
        if status != 0:
            raise IntegrationError(
                f"step ceiling {max_steps} exceeded (|lam|max={np.max(np.abs(lam)):.3g})"
            )
    else:
        Y, est, naccept = _propagate_numpy(qfun, lam, tol, nstate, x_end, max_steps)
    return PropagationResult(
        y1=Y[0].copy(),
        dy1=Y[1].copy(),
        y2=Y[2].copy(),
        dy2=Y[3].copy(),
        v_y1=Y[4].copy() if dlam else None,
        v_dy1=Y[5].copy() if dlam else None,
        v_y2=Y[6].copy() if dlam else None,
        v_dy2=Y[7].copy() if dlam else None,
        est_error=est,
        steps=naccept,
    )
