"""Dirichlet spectrum, discriminant, Floquet exponents and residuals.

For the operator L(q) = -d^2/dx^2 + q with 1-periodic mean-zero q, this
module locates

  * Dirichlet eigenvalues mu_n on [0, 1]: the zeros of y2(1, lam),
  * periodic/antiperiodic eigenvalues lam_n^-, lam_n^+ on [0, 2]: the
    solutions of Delta(lam) = +-2 with Delta = y1(1,.) + y2'(1,.),
  * Floquet exponents kappa_n = -Log((-1)^n y1(1, mu_n)),

together with the residual sequences

  r^kappa_n = 2 pi n kappa_n - <q, sin 2 pi n x>,
  r^mid_n   = (lam_n^+ + lam_n^-)/2 - mu_n - <q, cos 2 pi n x>,

whose decay rate reflects the smoothness of q.  Roots are found by a
bracketed scan near n^2 pi^2 followed by Newton polishing that uses the
exact lam-derivative from the variational system; everything is batched
over n so a full spectrum costs a handful of integration sweeps.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .fourier import FourierFunction, cosine_coefficient, sine_coefficient
from .rk import potential_table, propagate
from .sequences import WeightedSequence

__all__ = [
    "SpectralError",
    "FundamentalMatrix",
    "DirichletEigenvalue",
    "FloquetExponent",
    "PeriodicPair",
    "PeriodicSpectrum",
    "ContinuationReport",
    "fundamental_solution",
    "discriminant",
    "dirichlet_spectrum",
    "dirichlet_eigenvalue",
    "dirichlet_spectrum_complex",
    "floquet_exponent",
    "floquet_exponents",
    "periodic_spectrum",
    "kappa_residual_sequence",
    "midpoint_residual_sequence",
    "analytic_continuation_check",
    "localization_threshold",
    "validity_threshold",
]

PI = math.pi
PI2 = math.pi**2

# Lemma-style well-definedness criterion for the principal logarithm:
# kappa_n is taken only when |(-1)^n y1(1, mu_n) - 1| <= 1/2.
VALIDITY_RADIUS = 0.5

# Declared localization window |mu_n - n^2 pi^2| < pi/4 for large n.
LOCALIZATION_WINDOW = PI / 4.0

# A gap is declared closed when (-1)^n Delta - 2 stays below this at its
# interior maximum.
CLOSED_GAP_TOL = 1e-9


class SpectralError(RuntimeError):
    """Root bracketing, counting or consistency failure with diagnostics."""


# -- result records -------------------------------------------------------


@dataclass(frozen=True)
class FundamentalMatrix:
    """Entries of M(1, lam) = [[y1, y2], [y1', y2']] plus error estimate."""

    lam: complex
    y1: complex
    y2: complex
    dy1: complex
    dy2: complex
    est_error: float

    def wronskian(self) -> complex:
        return self.y1 * self.dy2 - self.y2 * self.dy1

    def trace(self) -> complex:
        return self.y1 + self.dy2


@dataclass(frozen=True)
class DirichletEigenvalue:
    n: int
    mu: complex
    nu: complex
    localized: bool

    @classmethod
    def from_mu(cls, n: int, mu: complex) -> "DirichletEigenvalue":
        nu = cmath.sqrt(mu)
        if nu.real < 0:
            nu = -nu
        return cls(n, mu, nu, bool(abs(mu - n * n * PI2) < LOCALIZATION_WINDOW))


@dataclass(frozen=True)
class FloquetExponent:
    n: int
    kappa: complex
    valid: bool


@dataclass(frozen=True)
class PeriodicPair:
    n: int
    lam_minus: float
    lam_plus: float

    @property
    def gap(self) -> float:
        return self.lam_plus - self.lam_minus

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lam_plus + self.lam_minus)


@dataclass(frozen=True)
class PeriodicSpectrum:
    lam0: float
    pairs: list[PeriodicPair]

    def pair(self, n: int) -> PeriodicPair:
        p = self.pairs[n - 1]
        if p.n != n:
            raise IndexError(f"pair index mismatch: {p.n} != {n}")
        return p


# -- single-shot operations ------------------------------------------------


def fundamental_solution(q: FourierFunction, lam: complex, tol: float) -> FundamentalMatrix:
    """Fundamental matrix M(1, lam) for the potential q."""
    res = propagate(potential_table(q), [lam], tol)
    return FundamentalMatrix(
        lam=complex(lam),
        y1=complex(res.y1[0]),
        y2=complex(res.y2[0]),
        dy1=complex(res.dy1[0]),
        dy2=complex(res.dy2[0]),
        est_error=float(res.est_error[0]),
    )


def discriminant(q: FourierFunction, lam: complex, tol: float) -> complex:
    """Discriminant Delta(lam) = y1(1, lam) + y2'(1, lam)."""
    m = fundamental_solution(q, lam, tol)
    return m.trace()


# -- Dirichlet spectrum ----------------------------------------------------


def _scan_tol(tol: float) -> float:
    """Looser tolerance for scan/bracketing sweeps; polish runs at tol."""
    return min(1e-7, max(tol * 1e4, 1e-10))


def _newton_polish_mu(qfun, lam0: np.ndarray, tol: float, brackets=None, max_iter: int = 10):
    """Batched Newton iteration on lam -> y2(1, lam).

    brackets, when given as (lo, hi) float arrays, confine real
    iterates: a Newton step leaving its bracket is replaced by a
    bisection step and the bracket shrinks with every sign evaluation.
    Returns (lam, residual, dy2dlam, est_error).
    """
    lam = lam0.astype(np.complex128).copy()
    lo = hi = flo = None
    if brackets is not None:
        lo, hi, flo = brackets
    last = None
    for _ in range(max_iter):
        res = propagate(qfun, lam, tol, dlam=True)
        f = res.y2
        df = res.v_y2
        step = np.where(df != 0, f / np.where(df != 0, df, 1.0), 0.0)
        if lo is not None:
            new = lam.real - step.real
            sign_change = np.sign(f.real) != np.sign(flo)
            hi = np.where(sign_change, lam.real, hi)
            lo = np.where(sign_change, lo, lam.real)
            flo = np.where(sign_change, flo, f.real)
            bad = (new <= lo) | (new >= hi) | ~np.isfinite(new)
            new = np.where(bad, 0.5 * (lo + hi), new)
            step = lam - new
            lam = new.astype(np.complex128)
        else:
            lam = lam - step
        worst = float(np.max(np.abs(step) / np.maximum(1.0, np.abs(lam))))
        if worst < 1e-13 or (last is not None and worst >= 0.7 * last and worst < 1e-9):
            break
        last = worst
    res = propagate(qfun, lam, tol, dlam=True)
    # final first-order correction from the fresh evaluation
    lam = lam - np.where(res.v_y2 != 0, res.y2 / np.where(res.v_y2 != 0, res.v_y2, 1.0), 0.0)
    return lam, res.y2, res.v_y2, res.est_error


def _dirichlet_real(q: FourierFunction, n_max: int, tol: float) -> np.ndarray:
    """Real Dirichlet eigenvalues mu_1..mu_n_max by bracketed scan."""
    qfun = potential_table(q)
    ns = np.arange(1, n_max + 1)
    centers = (ns * PI) ** 2
    half = np.full(n_max, PI / 2.0)
    stol = _scan_tol(tol)

    lo = centers - half
    hi = centers + half
    for attempt in range(3):
        ends = np.concatenate([lo, hi])
        r = propagate(qfun, ends, stol)
        fl = r.y2[:n_max].real
        fh = r.y2[n_max:].real
        ok = np.sign(fl) != np.sign(fh)
        if ok.all():
            break
        widen = ~ok
        max_half = np.minimum((2 * ns - 1) * PI2 / 2.0, (2 * ns + 1) * PI2 / 2.0) * 0.9
        half = np.where(widen, np.minimum(half * 2.0, max_half), half)
        lo = centers - half
        hi = centers + half
    else:
        return _dirichlet_global_scan(q, n_max, tol)

    guess = centers - np.array([cosine_coefficient(q, int(n)).real for n in ns])
    guess = np.clip(guess, lo + 1e-9, hi - 1e-9)
    mu, resid, dy2, est = _newton_polish_mu(qfun, guess, tol, brackets=(lo, hi, fl))
    mu = mu.real
    scale = np.maximum(1.0, np.abs(dy2) * 2.0 * half)
    bad = np.abs(resid) > np.maximum(tol * scale, 10.0 * est)
    if bad.any() or not (np.diff(mu) > 0).all():
        return _dirichlet_global_scan(q, n_max, tol)
    return mu


def _dirichlet_global_scan(q: FourierFunction, n_max: int, tol: float) -> np.ndarray:
    """Fallback: scan y2(1, .) over the whole range and collect all roots.

    The grid is uniform in nu = sqrt(lam) above zero (roots sit near
    n pi, about pi apart) plus a linear tail below zero down to the
    potential bound, so no sign change can straddle unseen.
    """
    qfun = potential_table(q)
    stol = _scan_tol(tol)
    lam_min = -q.sup_bound() - 1.0
    nu_max = (n_max + 0.75) * PI
    nu_grid = np.arange(0.05, nu_max, PI / 8.0)
    grid = np.concatenate([np.linspace(lam_min, 0.0, 8, endpoint=False), nu_grid**2])
    r = propagate(qfun, grid, stol)
    vals = r.y2.real
    sign_flip = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if len(sign_flip) < n_max:
        raise SpectralError(
            f"global scan found {len(sign_flip)} Dirichlet roots below "
            f"lam={grid[-1]:.4g}, expected at least {n_max}"
        )
    idx = sign_flip[:n_max]
    lo = grid[idx]
    hi = grid[idx + 1]
    flo = vals[idx]
    mu, resid, dy2, est = _newton_polish_mu(qfun, 0.5 * (lo + hi), tol, brackets=(lo, hi, flo))
    mu = mu.real
    if not (np.diff(mu) > 0).all():
        raise SpectralError("global scan produced a non-increasing eigenvalue list")
    return mu


def dirichlet_spectrum(q: FourierFunction, n_max: int, tol: float) -> list[DirichletEigenvalue]:
    """Dirichlet eigenvalues mu_1 <= ... <= mu_{n_max} of L(q) on [0, 1]."""
    if n_max == 0:
        return []
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if q.real_symmetric:
        mu = _dirichlet_real(q, n_max, tol)
        return [DirichletEigenvalue.from_mu(int(n + 1), float(m)) for n, m in enumerate(mu)]
    return dirichlet_spectrum_complex(q, n_max, tol)


def dirichlet_eigenvalue(q: FourierFunction, n: int, tol: float) -> DirichletEigenvalue:
    """n-th Dirichlet eigenvalue (index certified by counting from below)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return dirichlet_spectrum(q, n, tol)[n - 1]


def dirichlet_spectrum_complex(
    q: FourierFunction,
    n_max: int,
    tol: float,
    homotopy_steps: int = 8,
) -> list[DirichletEigenvalue]:
    """Dirichlet spectrum of a complex potential by homotopy from q = 0.

    Follows the straight line t*q, t in [0,1], Newton-continuing every
    eigenvalue from mu_n(0) = n^2 pi^2; a diverging step is halved.
    """
    mu = ((np.arange(1, n_max + 1) * PI) ** 2).astype(np.complex128)
    mu = _continue_dirichlet(q0=None, q1=q, mu_start=mu, tol=tol, steps=homotopy_steps)
    out = [DirichletEigenvalue.from_mu(int(i + 1), complex(m)) for i, m in enumerate(mu)]
    key = [(m.mu.real, m.mu.imag) for m in out]
    if key != sorted(key):
        # continuation order is kept (it identifies each branch); the
        # lexicographic check only guards against gross misordering
        for i in range(len(out) - 1):
            if out[i + 1].mu.real - out[i].mu.real < -LOCALIZATION_WINDOW:
                raise SpectralError("homotopy produced a badly ordered complex spectrum")
    return out


def _interpolate_potential(q0: FourierFunction | None, q1: FourierFunction, t: float) -> FourierFunction:
    if q0 is None:
        return q1.scaled(t)
    return q0.scaled(1.0 - t) + q1.scaled(t)


def _continue_dirichlet(
    q0,
    q1,
    mu_start: np.ndarray,
    tol: float,
    steps: int = 8,
    first_dt: float | None = None,
) -> np.ndarray:
    """Newton continuation of Dirichlet roots along q(t) = (1-t) q0 + t q1.

    first_dt = 1.0 attempts the direct jump and subdivides only on
    divergence; the default walks in `steps` homotopy increments.
    """
    mu = mu_start.astype(np.complex128).copy()
    t = 0.0
    dt = first_dt if first_dt is not None else 1.0 / steps
    dt_cap = dt
    guard = 0
    while t < 1.0 - 1e-15:
        guard += 1
        if guard > 64 * steps:
            raise SpectralError("homotopy step halving failed to converge")
        t_next = min(1.0, t + dt)
        qfun = potential_table(_interpolate_potential(q0, q1, t_next))
        new, resid, dy2, est = _newton_polish_mu(qfun, mu, tol, max_iter=8)
        moved = np.abs(new - mu)
        if (~np.isfinite(new)).any() or float(np.max(moved)) > PI / 2.0:
            dt *= 0.5
            if dt < 1.0 / (64 * steps):
                raise SpectralError(f"homotopy divergence at t={t_next:.4g}")
            continue
        mu = new
        t = t_next
        dt = min(2.0 * dt, dt_cap)
    return mu


# -- Floquet exponents ------------------------------------------------------


def _floquet_with_est(
    q: FourierFunction,
    eigs: list[DirichletEigenvalue],
    tol: float,
) -> tuple[list[FloquetExponent], np.ndarray]:
    if not eigs:
        return [], np.zeros(0)
    qfun = potential_table(q)
    lam = np.array([e.mu for e in eigs], dtype=np.complex128)
    res = propagate(qfun, lam, tol)
    out = []
    for i, e in enumerate(eigs):
        signed = (-1) ** e.n * res.y1[i]
        if q.real_symmetric and signed.real <= 0.0:
            raise SpectralError(
                f"(-1)^n y1(1, mu_n) = {signed.real:.3g} <= 0 at n={e.n} for a real "
                "potential; eigenvalue identification is inconsistent"
            )
        valid = bool(abs(signed - 1.0) <= VALIDITY_RADIUS)
        kappa = -cmath.log(complex(signed))
        if q.real_symmetric:
            kappa = complex(kappa.real, 0.0)
        out.append(FloquetExponent(e.n, kappa, valid))
    return out, res.est_error


def floquet_exponents(
    q: FourierFunction,
    eigs: list[DirichletEigenvalue],
    tol: float,
) -> list[FloquetExponent]:
    """Floquet exponents kappa_n = -Log((-1)^n y1(1, mu_n)), batched."""
    return _floquet_with_est(q, eigs, tol)[0]


def floquet_exponent(q: FourierFunction, eig: DirichletEigenvalue, tol: float) -> FloquetExponent:
    return floquet_exponents(q, [eig], tol)[0]


# -- periodic spectrum -------------------------------------------------------


def _delta_and_deriv(qfun, lam: np.ndarray, tol: float):
    res = propagate(qfun, lam, tol, dlam=True)
    return res.y1 + res.dy2, res.v_y1 + res.v_dy2, res.est_error


def _newton_polish_edge(qfun, lam0, sign, tol, lo, hi, flo, max_iter=12):
    """Batched bracketed Newton on g = sign*Delta - 2 (band edge roots).

    Keeps the iterate with the smallest |g| per column, so a stall at
    the integrator noise floor cannot inject a last-iterate artifact.
    """
    lam = lam0.astype(np.float64).copy()
    best = lam.copy()
    best_g = np.full(lam.shape, np.inf)
    last = None
    for _ in range(max_iter):
        d, dd, est = _delta_and_deriv(qfun, lam, tol)
        g = (sign * d - 2.0).real
        dg = (sign * dd).real
        improved = np.abs(g) < best_g
        best = np.where(improved, lam, best)
        best_g = np.where(improved, np.abs(g), best_g)
        step = np.where(dg != 0, g / np.where(dg != 0, dg, 1.0), 0.0)
        new = lam - step
        sign_change = np.sign(g) != np.sign(flo)
        hi = np.where(sign_change, lam, hi)
        lo = np.where(sign_change, lo, lam)
        flo = np.where(sign_change, flo, g)
        bad = (new <= lo) | (new >= hi) | ~np.isfinite(new)
        new = np.where(bad, 0.5 * (lo + hi), new)
        worst = float(np.max(np.abs(new - lam) / np.maximum(1.0, np.abs(new))))
        lam = new
        if worst < 1e-14 or (last is not None and worst >= 0.7 * last and worst < 1e-9):
            break
        last = worst
    d, _, _ = _delta_and_deriv(qfun, lam, tol)
    g = (sign * d - 2.0).real
    improved = np.abs(g) < best_g
    return np.where(improved, lam, best)


def _critical_point(qfun, x0, x1, sign, tol, lo, hi, max_iter=30):
    """Batched secant iteration on Delta'(lam): interior extremum of a gap.

    Iterates are clamped to [lo, hi]; the discriminant is monotone on
    the neighbouring bands, so the extremum inside the bracket is the
    one belonging to this gap.
    """
    a = x0.astype(np.float64).copy()
    b = x1.astype(np.float64).copy()
    _, da, _ = _delta_and_deriv(qfun, a, tol)
    fa = (sign * da).real
    best = b.copy()
    best_f = np.full(b.shape, np.inf)
    last = None
    for _ in range(max_iter):
        _, db, _ = _delta_and_deriv(qfun, b, tol)
        fb = (sign * db).real
        improved = np.abs(fb) < best_f
        best = np.where(improved, b, best)
        best_f = np.where(improved, np.abs(fb), best_f)
        denom = fb - fa
        step = np.where(np.abs(denom) > 0, fb * (b - a) / np.where(denom != 0, denom, 1.0), 0.0)
        new = np.clip(b - step, lo, hi)
        a, fa = b, fb
        moved = float(np.max(np.abs(new - b) / np.maximum(1.0, np.abs(new))))
        b = new
        if moved < 1e-14 or (last is not None and moved >= 0.7 * last and moved < 1e-9):
            b = best.copy()
            break
        last = moved
    else:
        b = best.copy()
    return b


def periodic_spectrum(q: FourierFunction, n_max: int, tol: float) -> PeriodicSpectrum:
    """Periodic spectrum of L(q) on [0, 2]: lam_0 plus pairs lam_n^-+.

    Band edges solve (-1)^n Delta(lam) = 2.  Each pair is located inside
    the bracket near n^2 pi^2 by a sign scan; when the gap is too narrow
    to resolve by sign changes, the interior maximum of
    (-1)^n Delta - 2 is located instead, and the pair is either split by
    local quadratic extraction or declared closed below CLOSED_GAP_TOL.
    """
    if not q.real_symmetric:
        raise ValueError("periodic spectrum requires a real potential")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    qfun = potential_table(q)
    stol = _scan_tol(tol)
    lam0 = _ground_periodic(q, qfun, tol)
    if n_max == 0:
        return PeriodicSpectrum(lam0, [])

    ns = np.arange(1, n_max + 1)
    centers = (ns * PI) ** 2
    signs = np.where(ns % 2 == 0, 1.0, -1.0)

    half = np.full(n_max, PI / 2.0)
    npts = 9
    for attempt in range(3):
        offs = np.linspace(-1.0, 1.0, npts)
        grid = centers[:, None] + half[:, None] * offs[None, :]
        r = propagate(qfun, grid.ravel(), stol)
        h = (signs[:, None] * (r.y1 + r.dy2).reshape(n_max, npts)).real - 2.0
        left_ok = h[:, 0] < 0
        right_ok = h[:, -1] < 0
        if (left_ok & right_ok).all():
            break
        widen = ~(left_ok & right_ok)
        max_half = np.minimum((2 * ns - 1), (2 * ns + 1)) * PI2 / 2.0 * 0.9
        half = np.where(widen, np.minimum(half * 2.0, max_half), half)
    else:
        raise SpectralError("periodic bracket could not isolate the band edges")

    lam_minus = np.empty(n_max)
    lam_plus = np.empty(n_max)

    # interior critical point of Delta in every gap (secant on Delta')
    best = np.clip(np.argmax(h, axis=1), 1, npts - 2)
    rows = np.arange(n_max)
    lo_b = grid[:, 0]
    hi_b = grid[:, -1]
    crit = _critical_point(
        qfun, grid[rows, best - 1], grid[rows, best + 1], signs, tol, lo_b, hi_b
    )
    d, _, _ = _delta_and_deriv(qfun, crit, tol)
    hstar = (signs * d).real - 2.0
    # curvature from a symmetric derivative difference
    dx = np.maximum(1e-4, 1e-7 * np.abs(crit))
    _, dplus, _ = _delta_and_deriv(qfun, crit + dx, stol)
    _, dminus, _ = _delta_and_deriv(qfun, crit - dx, stol)
    curv = (signs * (dplus - dminus)).real / (2.0 * dx)

    closed = (hstar <= CLOSED_GAP_TOL) | (curv >= 0)
    lam_minus[closed] = crit[closed]
    lam_plus[closed] = crit[closed]

    open_idx = np.nonzero(~closed)[0]
    if open_idx.size:
        w_half = np.sqrt(2.0 * hstar[open_idx] / -curv[open_idx])
        c0 = crit[open_idx]
        sgn = signs[open_idx]
        # left ends must sit outside the gap; expand until h < 0 there
        left = np.maximum(lo_b[open_idx], c0 - 2.5 * w_half)
        right = np.minimum(hi_b[open_idx], c0 + 2.5 * w_half)
        for _ in range(4):
            dL, _, _ = _delta_and_deriv(qfun, left, stol)
            dR, _, _ = _delta_and_deriv(qfun, right, stol)
            fL = (sgn * dL).real - 2.0
            fR = (sgn * dR).real - 2.0
            enclosing = (fL < 0) & (fR < 0)
            if enclosing.all():
                break
            grow = ~enclosing
            left = np.where(grow, np.maximum(lo_b[open_idx], c0 - 2.0 * (c0 - left)), left)
            right = np.where(grow, np.minimum(hi_b[open_idx], c0 + 2.0 * (right - c0)), right)
        else:
            raise SpectralError("could not enclose a spectral gap inside its bracket")
        lam_minus[open_idx] = _newton_polish_edge(
            qfun, np.maximum(left, c0 - w_half), sgn, tol, left, c0, fL
        )
        lam_plus[open_idx] = _newton_polish_edge(
            qfun, np.minimum(right, c0 + w_half), sgn, tol, c0, right, hstar[open_idx]
        )
        # For very narrow gaps the edge roots are noise limited
        # (|Delta'| ~ curvature * width at the edge) while the interior
        # critical point stays sharp, so the pair is recentered on it.
        # Wider gaps keep the polished edges: there the critical point
        # carries a cubic-asymmetry bias ~ width^2 that would pollute
        # the gap-midpoint residuals.
        width = lam_plus[open_idx] - lam_minus[open_idx]
        shallow = width < 2e-3
        if shallow.any():
            lam_minus[open_idx] = np.where(shallow, c0 - 0.5 * width, lam_minus[open_idx])
            lam_plus[open_idx] = np.where(shallow, c0 + 0.5 * width, lam_plus[open_idx])

    pairs = [
        PeriodicPair(int(n), float(lm), float(lp))
        for n, lm, lp in zip(ns, lam_minus, lam_plus)
    ]
    values = [lam0] + [v for p in pairs for v in (p.lam_minus, p.lam_plus)]
    for a, b in zip(values, values[1:]):
        if b < a - 1e-8:
            raise SpectralError("periodic eigenvalues are out of order")
    return PeriodicSpectrum(float(lam0), pairs)


def _ground_periodic(q: FourierFunction, qfun, tol: float) -> float:
    """Lowest periodic eigenvalue: first root of Delta - 2 from below."""
    stol = _scan_tol(tol)
    lam_lo = -q.sup_bound() - 0.5
    grid = np.linspace(lam_lo, 0.25 * PI2, 24)
    d, _, _ = _delta_and_deriv(qfun, grid, stol)
    g = d.real - 2.0
    flips = np.nonzero(np.sign(g[:-1]) != np.sign(g[1:]))[0]
    if flips.size == 0:
        raise SpectralError("no sign change for the lowest periodic eigenvalue")
    i = flips[0]
    lam = _newton_polish_edge(
        qfun,
        np.array([0.5 * (grid[i] + grid[i + 1])]),
        np.array([1.0]),
        tol,
        np.array([grid[i]]),
        np.array([grid[i + 1]]),
        np.array([g[i]]),
    )
    return float(lam[0])


# -- residual sequences ------------------------------------------------------


def kappa_residual_sequence(q: FourierFunction, n_range, tol: float) -> WeightedSequence:
    """Entries 2 pi n kappa_n - <q, sin 2 pi n x> at index k = n."""
    ns = sorted(int(n) for n in n_range)
    if not ns:
        return WeightedSequence.zero()
    if ns[0] < 1:
        raise ValueError("indices must be >= 1")
    eigs = dirichlet_spectrum(q, ns[-1], tol)
    kappas = floquet_exponents(q, [eigs[n - 1] for n in ns], tol)
    invalid = [k.n for k in kappas if not k.valid]
    if invalid:
        raise SpectralError(f"kappa_n outside the principal-log validity region at n={invalid}")
    entries = {}
    for k in kappas:
        entries[k.n] = 2.0 * PI * k.n * k.kappa - sine_coefficient(q, k.n)
    return WeightedSequence(entries)


def midpoint_residual_sequence(q: FourierFunction, n_range, tol: float) -> WeightedSequence:
    """Entries (lam_n^+ + lam_n^-)/2 - mu_n - <q, cos 2 pi n x> at k = n."""
    ns = sorted(int(n) for n in n_range)
    if not ns:
        return WeightedSequence.zero()
    if ns[0] < 1:
        raise ValueError("indices must be >= 1")
    eigs = dirichlet_spectrum(q, ns[-1], tol)
    per = periodic_spectrum(q, ns[-1], tol)
    entries = {}
    for n in ns:
        mid = per.pair(n).midpoint
        entries[n] = mid - eigs[n - 1].mu - cosine_coefficient(q, n)
    return WeightedSequence(entries)


# -- analytic continuation check ---------------------------------------------


@dataclass(frozen=True)
class ContinuationReport:
    """Circle continuation of kappa_n around a real base potential.

    validity[n] is True when the principal-log criterion held at every
    circle sample; mean_defect[n] is |circle average - center value|,
    which vanishes for an analytic function (mean value property, up to
    the order-8 quadrature term of the sample average).
    """

    rho: float
    samples: int
    n_values: list[int]
    validity: dict[int, bool]
    mean_defect: dict[int, float]
    kappa_center: dict[int, complex]


def analytic_continuation_check(
    q0: FourierFunction,
    direction: FourierFunction,
    rho: float,
    n_range,
    tol: float,
    samples: int = 8,
) -> ContinuationReport:
    """Continue mu_n, kappa_n around the circle q0 + rho e^{i theta} d.

    Eigenvalues are Newton-continued from the real-potential roots,
    sample to sample around the circle (with step halving on
    divergence), and kappa_n is evaluated by the same principal-log
    formula at each sample.
    """
    if not q0.real_symmetric:
        raise ValueError("base potential must be real")
    ns = sorted(int(n) for n in n_range)
    if not ns or ns[0] < 1:
        raise ValueError("n_range must contain indices >= 1")
    n_max = ns[-1]
    eigs0 = dirichlet_spectrum(q0, n_max, tol)
    kap0 = floquet_exponents(q0, eigs0, tol)
    mu = np.array([e.mu for e in eigs0], dtype=np.complex128)

    kappa_sum = np.zeros(n_max, dtype=np.complex128)
    valid_all = np.ones(n_max, dtype=bool)
    prev_q = q0
    prev_mu = mu
    for j in range(samples):
        w = rho * cmath.exp(2j * PI * j / samples)
        qj = q0 + direction.scaled(w)
        prev_mu = _continue_dirichlet(prev_q, qj, prev_mu, tol)
        prev_q = qj
        eigs = [DirichletEigenvalue.from_mu(i + 1, complex(m)) for i, m in enumerate(prev_mu)]
        qfun = potential_table(qj)
        res = propagate(qfun, prev_mu, tol)
        for i in range(n_max):
            signed = (-1) ** (i + 1) * res.y1[i]
            valid_all[i] &= bool(abs(signed - 1.0) <= VALIDITY_RADIUS)
            kappa_sum[i] += -cmath.log(complex(signed))
    defect = np.abs(kappa_sum / samples - np.array([k.kappa for k in kap0]))
    return ContinuationReport(
        rho=rho,
        samples=samples,
        n_values=ns,
        validity={n: bool(valid_all[n - 1]) for n in ns},
        mean_defect={n: float(defect[n - 1]) for n in ns},
        kappa_center={n: complex(kap0[n - 1].kappa) for n in ns},
    )


# -- combined table ------------------------------------------------------------


@dataclass(frozen=True)
class SpectralTable:
    """One-stop spectral record for a single real potential.

    Residual entries are present for every n with a valid kappa_n (the
    kappa residual) and for every n with a located gap midpoint (the
    midpoint residual).
    """

    n_max: int
    eigs: list[DirichletEigenvalue]
    kappas: list[FloquetExponent]
    periodic: PeriodicSpectrum | None
    r_kappa: WeightedSequence
    r_mid: WeightedSequence | None
    est_error: list[float]

    def row(self, n: int) -> dict:
        e = self.eigs[n - 1]
        k = self.kappas[n - 1]
        rec = {
            "n": n,
            "mu": e.mu.real,
            "kappa": k.kappa.real,
            "r_kappa": self.r_kappa.value(n).real,
        }
        if self.periodic is not None:
            p = self.periodic.pair(n)
            rec["lam_minus"] = p.lam_minus
            rec["lam_plus"] = p.lam_plus
            rec["r_mid"] = self.r_mid.value(n).real
        return rec


def spectral_table(
    q: FourierFunction,
    n_max: int,
    tol: float,
    with_periodic: bool = True,
) -> SpectralTable:
    """Dirichlet spectrum, Floquet exponents, gaps and both residuals."""
    eigs = dirichlet_spectrum(q, n_max, tol)
    kappas, est = _floquet_with_est(q, eigs, tol)
    rk_entries = {}
    for k in kappas:
        if k.valid:
            rk_entries[k.n] = 2.0 * PI * k.n * k.kappa - sine_coefficient(q, k.n)
    r_kappa = WeightedSequence(rk_entries)
    per = None
    r_mid = None
    if with_periodic:
        per = periodic_spectrum(q, n_max, tol)
        rm_entries = {}
        for p in per.pairs:
            rm_entries[p.n] = p.midpoint - eigs[p.n - 1].mu - cosine_coefficient(q, p.n)
        r_mid = WeightedSequence(rm_entries)
    return SpectralTable(n_max, eigs, kappas, per, r_kappa, r_mid, [float(e) for e in est])


# -- empirical thresholds -----------------------------------------------------


def localization_threshold(eigs: list[DirichletEigenvalue]) -> int:
    """Smallest m with |mu_n - n^2 pi^2| < pi/4 for every n > m."""
    m = 0
    for e in eigs:
        if not e.localized:
            m = e.n
    return m


def validity_threshold(kappas: list[FloquetExponent]) -> int:
    """Smallest m with the principal-log criterion holding for n > m."""
    m = 0
    for k in kappas:
        if not k.valid:
            m = k.n
    return m
