"""Campaign configuration, runners, decay fits and result persistence.

A campaign is described by a strict JSON config (unknown keys are
rejected).  Every runner is deterministic in (config, seed): identical
inputs produce byte-identical CSV/JSON outputs, files are written
atomically, and results land under an output directory derived from a
content hash of the canonicalized config unless overridden.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fourier import FourierFunction, from_json as ff_from_json, sample_ball, sine_coefficient, to_json as ff_to_json
from .interpolation import (
    InterpolationSpec,
    boundary_bounds,
    convolution_square_map,
    diagonal_multiplier_map,
    identity_map,
    interpolated_norm_check,
    riesz_thorin_baseline,
    strip_table,
    strip_v_grid,
    three_lines_check_many,
)
from .schrodinger import (
    SpectralError,
    analytic_continuation_check,
    dirichlet_spectrum,
    floquet_exponents,
    localization_threshold,
    spectral_table,
    validity_threshold,
)
from .sequences import WeightedSequence, extremal_dual, weighted_norm
from .spectral_maps import kappa_residual_map

__all__ = [
    "ConfigError",
    "CampaignConfig",
    "cache_key",
    "resolve_out_dir",
    "run_spectrum",
    "run_kappa",
    "run_residuals",
    "run_interp_campaign",
    "run_baseline",
    "decay_fit",
    "DecayFit",
    "ResidualReport",
]

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3

RESIDUAL_FLOOR = 1e-14


class ConfigError(ValueError):
    """Invalid or unknown campaign configuration."""


@dataclass(frozen=True)
class CampaignConfig:
    """Validated campaign parameters (one flat namespace for all commands)."""

    schema_version: int = SCHEMA_VERSION
    seed: int = 1
    s_list: tuple[float, ...] = (0.0, 0.5, 1.0, 1.5, 2.0)
    radius: float = 2.0
    kmax: int = 96
    n_max: int = 32
    tol: float = 1e-12
    seeds: int = 16
    margin: float = 0.2
    potential: str | dict = "sample"
    # strip sampling
    v_max: float = 20.0
    v_points: int = 401
    # interpolation levels
    a: float = 0.0
    b: float = 1.0
    alpha: float = 0.0
    beta: float = 1.0
    p: float = 2.0
    s_interp: float = 0.5
    maps: tuple[str, ...] = ("identity", "multiplier", "convsquare")
    phi_count: int = 8
    xi_count: int = 8
    n_lo: int = 2
    n_hi: int = 10
    # continuation circle
    rho: float = 0.5
    circle_samples: int = 8
    bases: int = 4
    # residual acceptance thresholds
    slope_slack: float = 0.25
    stability_rel: float = 0.05
    # baseline
    multiplier_count: int = 100
    # outputs
    figures: bool = True
    out: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        allowed = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - allowed
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged = {}
        for f in dataclasses.fields(cls):
            if f.name in data:
                value = data[f.name]
                if isinstance(value, list):
                    value = tuple(value)
                merged[f.name] = value
        cfg = cls(**merged)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {self.schema_version}")
        if self.radius <= 0:
            raise ConfigError("radius must be > 0")
        if not (1 <= self.n_max <= 256):
            raise ConfigError("n_max must lie in [1, 256]")
        if not (1e-13 <= self.tol <= 1e-6):
            raise ConfigError("tol must lie in [1e-13, 1e-6]")
        if not (0 < self.margin < 1):
            raise ConfigError("margin must lie in (0, 1)")
        if not (1 <= self.kmax <= 128):
            raise ConfigError("kmax must lie in [1, 128]")
        if not (1 <= self.seeds <= 64):
            raise ConfigError("seeds must lie in [1, 64]")
        if any(s < 0 for s in self.s_list):
            raise ConfigError("s_list entries must be >= 0")
        if self.v_points < 3 or self.v_points % 2 == 0:
            raise ConfigError("v_points must be odd and >= 3")
        if not (0 <= self.a < self.b):
            raise ConfigError("levels must satisfy 0 <= a < b")
        if not (self.a <= self.s_interp <= self.b):
            raise ConfigError("s_interp must lie in [a, b]")
        unknown_maps = set(self.maps) - {"identity", "multiplier", "convsquare", "kappa"}
        if unknown_maps:
            raise ConfigError(f"unknown maps: {sorted(unknown_maps)}")
        if not (0 <= self.n_lo < self.n_hi <= 256):
            raise ConfigError("need 0 <= n_lo < n_hi <= 256")

    def to_canonical_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            if f.name == "out":
                continue
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out


def cache_key(config: CampaignConfig | dict) -> str:
    """Stable content hash of the canonicalized config."""
    if isinstance(config, dict):
        config = CampaignConfig.from_dict(config)
    text = json.dumps(config.to_canonical_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def resolve_out_dir(config: CampaignConfig, command: str, out_flag: str | None) -> Path:
    if out_flag:
        return Path(out_flag)
    if config.out:
        return Path(config.out)
    base = os.environ.get("HILLSPEC_CACHE_DIR", "results")
    return Path(base) / f"{command}-{cache_key(config)}"


# -- atomic, deterministic writers --------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _sanitize(obj):
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, (float, np.floating)):
                cells.append(_fmt(cell))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    write_atomic(path, "\n".join(lines) + "\n")


def write_json(path: Path, payload) -> None:
    write_atomic(path, json.dumps(_sanitize(payload), sort_keys=True, indent=1) + "\n")


# -- potentials from config ----------------------------------------------------


def config_potential(config: CampaignConfig, s: float, sample_index: int) -> FourierFunction:
    if config.potential == "zero":
        return FourierFunction.zero()
    if config.potential == "sample":
        seed = config.seed * 100_000 + int(round(s * 100)) * 100 + sample_index
        return sample_ball(s, config.radius, config.kmax, config.margin, seed)
    if isinstance(config.potential, dict):
        try:
            return ff_from_json(json.dumps(config.potential))
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"invalid explicit potential: {exc}") from exc
    raise ConfigError(f"unsupported potential spec: {config.potential!r}")


# -- decay fit ------------------------------------------------------------------


@dataclass(frozen=True)
class DecayFit:
    slope: float | None
    half_width: float | None
    points: int
    below_floor: bool


def decay_fit(magnitudes: dict[int, float], n_min: int) -> DecayFit:
    """Least-squares slope of log|r_n| against log n for n > n_min.

    Entries at or below the floor are dropped; with every point on the
    floor the fit is reported as below_floor instead of a slope.
    """
    pts = [(n, r) for n, r in sorted(magnitudes.items()) if n > n_min and r > RESIDUAL_FLOOR]
    if not pts:
        return DecayFit(None, None, 0, True)
    if len(pts) < 8:
        raise ValueError(f"decay fit needs >= 8 usable points above n={n_min}, got {len(pts)}")
    x = np.log(np.array([n for n, _ in pts], dtype=np.float64))
    y = np.log(np.array([r for _, r in pts], dtype=np.float64))
    A = np.vstack([x, np.ones_like(x)]).T
    coef, res, _, _ = np.linalg.lstsq(A, y, rcond=None)
    slope = float(coef[0])
    dof = len(pts) - 2
    if dof > 0 and res.size:
        sigma2 = float(res[0]) / dof
        sx = float(np.sum((x - x.mean()) ** 2))
        half = 2.0 * math.sqrt(sigma2 / sx)
    else:
        half = 0.0
    return DecayFit(slope, half, len(pts), False)


def weighted_sum(magnitudes: dict[int, float], exponent: float, n_min: int) -> float:
    """sum over n > n_min of n^{2(exponent+1)} r_n^2."""
    return math.fsum(
        float(n) ** (2.0 * (exponent + 1.0)) * r * r
        for n, r in magnitudes.items()
        if n > n_min
    )


@dataclass(frozen=True)
class ResidualReport:
    """Ensemble summary for one smoothness level and one residual kind."""

    s: float
    kind: str
    n_r: int
    n_max: int
    seeds: int
    slopes: list[float | None]
    slope_half_widths: list[float | None]
    below_floor: list[bool]
    slope_threshold: float
    slopes_pass: bool
    sup_weighted_sum: float
    sup_weighted_sum_lo: float
    sup_weighted_sum_hi: float
    head_bound: float
    tail_bound: float
    total_sqrt_max: float
    split_ok: bool
    stability_change: float
    stability_pass: bool

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def build_residual_report(
    s: float,
    kind: str,
    per_seed: list[dict[int, float]],
    n_r: int,
    n_max: int,
    slope_threshold: float,
    stability_rel: float,
    per_seed_cut: list[dict[int, float]] | None = None,
) -> ResidualReport:
    """Aggregate per-seed residual magnitudes into the ensemble report.

    The head/tail split mirrors the two-bound structure: the head is
    controlled by the finite maximum over n <= n_r, the tail by the
    log-convex interpolation between the integer-order weighted sums.
    Stability compares the weighted sum over the common index range
    against a run truncated at 3/4 n_max: enlarging the truncation must
    leave already-measured quantities unchanged within stability_rel.
    """
    n_lo_int = math.floor(s)
    lam = s - n_lo_int
    # the fit window starts above n = 4 (pre-asymptotic head excluded)
    # and above the empirical validity split
    fits = [decay_fit(m, max(n_r, 4)) for m in per_seed]
    sup_s = max(weighted_sum(m, s, n_r) for m in per_seed)
    sup_lo = max(weighted_sum(m, n_lo_int, n_r) for m in per_seed)
    sup_hi = max(weighted_sum(m, n_lo_int + 1, n_r) for m in per_seed)
    tail_bound = sup_lo ** ((1.0 - lam) / 2.0) * sup_hi ** (lam / 2.0)

    m_r = max((r for m in per_seed for n, r in m.items() if n <= n_r), default=0.0)
    head_bound = n_r ** (s + 1.5) * m_r if n_r > 0 else 0.0
    total_sqrt = max(math.sqrt(weighted_sum(m, s, 0)) for m in per_seed)
    split_ok = total_sqrt <= head_bound + tail_bound + 1e-12

    stability_change = 0.0
    if per_seed_cut is not None:
        for full, cut in zip(per_seed, per_seed_cut):
            n_cut = max(cut, default=0)
            s_full = weighted_sum({n: r for n, r in full.items() if n <= n_cut}, s, n_r)
            s_cut = weighted_sum(cut, s, n_r)
            if s_full > 0:
                stability_change = max(stability_change, abs(s_full - s_cut) / s_full)
    slopes = [f.slope for f in fits]
    slopes_pass = all(
        (f.below_floor or (f.slope is not None and f.slope <= slope_threshold)) for f in fits
    )
    return ResidualReport(
        s=s,
        kind=kind,
        n_r=n_r,
        n_max=n_max,
        seeds=len(per_seed),
        slopes=slopes,
        slope_half_widths=[f.half_width for f in fits],
        below_floor=[f.below_floor for f in fits],
        slope_threshold=slope_threshold,
        slopes_pass=slopes_pass,
        sup_weighted_sum=sup_s,
        sup_weighted_sum_lo=sup_lo,
        sup_weighted_sum_hi=sup_hi,
        head_bound=head_bound,
        tail_bound=tail_bound,
        total_sqrt_max=total_sqrt,
        split_ok=bool(split_ok),
        stability_change=float(stability_change),
        stability_pass=bool(stability_change <= stability_rel),
    )


# -- spectrum command -----------------------------------------------------------


SPECTRUM_HEADER = ["n", "mu", "kappa", "lam_minus", "lam_plus", "r_kappa", "r_mid"]


def run_spectrum(config: CampaignConfig, out_dir: Path) -> int:
    """Dirichlet + periodic spectra and kappa for the configured potentials."""
    tags: list[str] = []
    summaries: list[str] = []
    status = EXIT_OK
    count = 1 if config.potential != "sample" else config.seeds
    for i in range(count):
        q = config_potential(config, config.s_list[0], i)
        tag = f"{i:03d}"
        tags.append(tag)
        table = spectral_table(q, config.n_max, config.tol)
        rows = []
        records = []
        for n in range(1, config.n_max + 1):
            row = table.row(n)
            rows.append([n, row["mu"], row["kappa"], row["lam_minus"], row["lam_plus"], row["r_kappa"], row["r_mid"]])
            records.append(
                {
                    "n": n,
                    "mu": row["mu"],
                    "kappa": row["kappa"],
                    "lam_minus": row["lam_minus"],
                    "lam_plus": row["lam_plus"],
                    "residuals": {"r_kappa": row["r_kappa"], "r_mid": row["r_mid"]},
                    "est_error": table.est_error[n - 1],
                }
            )
        write_csv(out_dir / f"spectrum_{tag}.csv", SPECTRUM_HEADER, rows)
        write_json(
            out_dir / f"spectrum_{tag}.json",
            {
                "potential": json.loads(ff_to_json(q)),
                "lam0": table.periodic.lam0,
                "records": records,
                "m_localization": localization_threshold(table.eigs),
                "n_validity": validity_threshold(table.kappas),
            },
        )
        summaries.append(
            f"potential {tag}: n_max={config.n_max} "
            f"m_loc={localization_threshold(table.eigs)} n_val={validity_threshold(table.kappas)}"
        )
        if config.figures:
            from .figures import spectrum_figure

            spectrum_figure(table, out_dir / f"spectrum_{tag}.png")
    write_atomic(out_dir / "summary.txt", "\n".join(summaries) + "\n")
    return status


# -- kappa command ---------------------------------------------------------------


def calibrate_kappa_sign(tol: float) -> int:
    """Empirical sign sigma in kappa_n ~ sigma <q, sin 2 pi n x> / (2 pi n).

    Probes the derivative along eps * q0 with a central difference for a
    fixed multi-mode direction and returns +1 or -1.
    """
    q0 = FourierFunction.sine(2, 1.0) + FourierFunction.sine(3, -0.5)
    eps = 1e-5
    votes = []
    for n in (2, 3):
        plus = floquet_exponents(q0.scaled(eps), dirichlet_spectrum(q0.scaled(eps), n, tol), tol)
        minus = floquet_exponents(q0.scaled(-eps), dirichlet_spectrum(q0.scaled(-eps), n, tol), tol)
        deriv = (plus[n - 1].kappa.real - minus[n - 1].kappa.real) / (2 * eps)
        predicted = sine_coefficient(q0, n).real / (2.0 * math.pi * n)
        votes.append(1 if deriv * predicted > 0 else -1)
    if len(set(votes)) != 1:
        raise SpectralError(f"kappa sign calibration is inconsistent: {votes}")
    return votes[0]


def run_kappa(config: CampaignConfig, out_dir: Path) -> int:
    """Sign calibration plus circle-continuation analyticity checks."""
    sigma = calibrate_kappa_sign(config.tol)
    rows = []
    reports = []
    worst_defect = 0.0
    for base in range(config.bases):
        q0 = config_potential(config, config.s_list[0], base)
        direction = sample_ball(config.s_list[0], config.radius, config.kmax, config.margin, config.seed * 777 + base)
        rep = analytic_continuation_check(
            q0, direction, config.rho, range(1, config.n_max + 1), config.tol, config.circle_samples
        )
        n_r = 0
        for n in rep.n_values:
            if not rep.validity[n]:
                n_r = n
        defect_tail = max(rep.mean_defect[n] for n in rep.n_values if n > n_r) if rep.n_values else 0.0
        worst_defect = max(worst_defect, defect_tail)
        reports.append(
            {
                "base": base,
                "rho": rep.rho,
                "samples": rep.samples,
                "empirical_n_r": n_r,
                "max_mean_defect_above_n_r": defect_tail,
            }
        )
        for n in rep.n_values:
            rows.append([base, n, int(rep.validity[n]), rep.mean_defect[n], rep.kappa_center[n].real])
    write_csv(out_dir / "kappa_circle.csv", ["base", "n", "valid", "mean_defect", "kappa_center"], rows)
    write_json(out_dir / "kappa_report.json", {"sigma": sigma, "bases": reports})
    lines = [f"kappa leading sign sigma = {sigma:+d}"]
    for rep in reports:
        lines.append(
            f"base {rep['base']}: n_R={rep['empirical_n_r']} "
            f"defect={rep['max_mean_defect_above_n_r']:.3e}"
        )
    write_atomic(out_dir / "summary.txt", "\n".join(lines) + "\n")
    return EXIT_OK if worst_defect <= 1e-8 else EXIT_VIOLATION


# -- residuals command ------------------------------------------------------------


def _residual_item(args: tuple) -> tuple:
    s, seed_index, cfg_dict = args
    config = CampaignConfig.from_dict(cfg_dict)
    q = config_potential(config, s, seed_index)
    table = spectral_table(q, config.n_max, config.tol)
    r_kappa = {n: abs(table.r_kappa.value(n)) for n in table.r_kappa.entries}
    r_mid = {n: abs(table.r_mid.value(n)) for n in table.r_mid.entries}
    n_loc = localization_threshold(table.eigs)
    n_val = validity_threshold(table.kappas)
    # truncated rerun: enlarging the truncation must not disturb the
    # quantities already measured (solver truncation-robustness)
    n_cut = (3 * config.n_max) // 4
    cut = spectral_table(q, n_cut, config.tol)
    r_kappa_cut = {n: abs(cut.r_kappa.value(n)) for n in cut.r_kappa.entries}
    r_mid_cut = {n: abs(cut.r_mid.value(n)) for n in cut.r_mid.entries}
    return (s, seed_index, r_kappa, r_mid, max(n_loc, n_val), r_kappa_cut, r_mid_cut)


def run_residuals(config: CampaignConfig, out_dir: Path, jobs: int = 1) -> int:
    """Residual-decay ensembles over the configured smoothness levels."""
    items = [
        (s, i, config.to_canonical_dict())
        for s in config.s_list
        for i in range(config.seeds)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_residual_item, items))
    else:
        results = [_residual_item(it) for it in items]
    results.sort(key=lambda r: (r[0], r[1]))

    rows = []
    for s, seed_index, r_kappa, r_mid, *_ in results:
        for n in range(1, config.n_max + 1):
            rows.append([_fmt(s), seed_index, n, r_kappa.get(n, 0.0), r_mid.get(n, 0.0)])
    write_csv(out_dir / "residuals.csv", ["s", "seed", "n", "r_kappa", "r_mid"], rows)

    status = EXIT_OK
    reports = []
    lines = ["sigma-convention: residual = 2 pi n kappa_n - <q, sin 2 pi n x>"]
    for s in config.s_list:
        group = [r for r in results if r[0] == s]
        n_r = max(r[4] for r in group)
        threshold = -(s + 1.0) + config.slope_slack
        for kind, index in (("kappa", 2), ("midpoint", 3)):
            per_seed = [r[index] for r in group]
            per_seed_cut = [r[index + 3] for r in group]
            rep = build_residual_report(
                s, kind, per_seed, n_r, config.n_max, threshold, config.stability_rel,
                per_seed_cut=per_seed_cut,
            )
            reports.append(rep.to_dict())
            ok = rep.slopes_pass and rep.stability_pass and rep.split_ok
            if not ok:
                status = EXIT_VIOLATION
            valid_slopes = [x for x in rep.slopes if x is not None]
            lines.append(
                f"s={s:g} {kind}: n_R={rep.n_r} "
                f"slope_max={max(valid_slopes):.3f} (thresh {threshold:.3f}) "
                f"sup_sum={rep.sup_weighted_sum:.4e} stability={rep.stability_change:.2%} "
                f"{'PASS' if ok else 'FAIL'}"
                if valid_slopes
                else f"s={s:g} {kind}: below floor"
            )
        if config.figures:
            from .figures import decay_figure

            decay_figure(
                s,
                {r[1]: r[2] for r in group},
                {r[1]: r[3] for r in group},
                n_r,
                out_dir / f"decay_s{s:g}.png",
            )
    write_json(out_dir / "report.json", {"reports": reports})
    write_atomic(out_dir / "summary.txt", "\n".join(lines) + "\n")
    return status


# -- interpolation command ----------------------------------------------------------


def build_map(name: str, config: CampaignConfig):
    if name == "identity":
        return identity_map(config.kmax)
    if name == "multiplier":
        rng = np.random.default_rng(config.seed * 31 + 7)
        ks = [k for k in range(-config.kmax, config.kmax + 1) if k != 0]
        symbol = WeightedSequence(
            {k: complex(rng.normal(), rng.normal()) / math.sqrt(2.0) for k in ks}
        )
        return diagonal_multiplier_map(symbol)
    if name == "convsquare":
        return convolution_square_map(2 * config.kmax)
    if name == "kappa":
        return kappa_residual_map(config.n_lo, config.n_hi, config.tol)
    raise ConfigError(f"unknown map {name}")


def interpolation_spec_for(config: CampaignConfig, map_name: str) -> InterpolationSpec:
    if map_name == "kappa":
        # residual weights follow the n^{N+1} law: alpha = 1, beta = 1
        return InterpolationSpec.make(
            config.a, config.b, 1.0, 1.0, 2.0, config.radius, config.s_interp
        )
    return InterpolationSpec.make(
        config.a, config.b, config.alpha, config.beta, config.p, config.radius, config.s_interp
    )


def _xi_candidates(value: WeightedSequence, spec: InterpolationSpec, rng, count: int):
    """One extremal dual plus unit-dual-norm random test vectors."""
    out = []
    dual = spec.dual_spec(spec.s)
    if value.entries and spec.p > 1:
        out.append(extremal_dual(value, spec.norm_spec(spec.s)))
    support = value.support() or [0]
    while len(out) < count:
        xi = WeightedSequence(
            {k: complex(rng.normal(), rng.normal()) for k in support}
        )
        norm = weighted_norm(xi, dual)
        if norm > 0:
            out.append(xi.scaled(1.0 / norm))
    return out[:count]


def run_interp_campaign(config: CampaignConfig, out_dir: Path) -> int:
    """Three-lines and norm-bound campaigns over the built-in catalogue."""
    rng = np.random.default_rng(config.seed * 17 + 3)
    v_grid = strip_v_grid(config.v_max, config.v_points)
    status = EXIT_OK
    per_map = []
    lines = []
    for name in config.maps:
        F = build_map(name, config)
        spec = interpolation_spec_for(config, name)
        vg = v_grid if name != "kappa" else strip_v_grid(min(config.v_max, 6.0), min(config.v_points, 25))
        phis = [
            sample_ball(spec.s, spec.radius, config.kmax if name != "kappa" else min(config.kmax, config.n_hi),
                        config.margin, config.seed * 1000 + i)
            for i in range(config.phi_count)
        ]
        checks = 0
        violations = []
        f_margin_min = math.inf
        norm_margin_min = math.inf
        norm_fail = 0
        for i, phi in enumerate(phis):
            value = F(phi)
            if not value.entries:
                continue
            # per-sample boundary constants: these dominate |f| on the
            # whole boundary lines, not just at the sampled ordinates
            nb_a, nb_b = boundary_bounds(F, spec, [phi], vg)
            norm_bound = spec.interpolated_bound(nb_a, nb_b)
            xis = _xi_candidates(value, spec, rng, config.xi_count)
            for rep in three_lines_check_many(F, spec, phi, xis, vg):
                checks += 1
                f_margin_min = min(f_margin_min, rep.margin + rep.tol_abs)
                allowed = norm_bound * (1.0 + 1e-9) + rep.tol_abs
                norm_margin_min = min(norm_margin_min, allowed - rep.interior_max)
                if rep.interior_max > allowed:
                    violations.append(
                        rep.to_dict() | {"phi_index": i, "norm_bound": norm_bound}
                    )
            nc = interpolated_norm_check(
                F, spec, phi, bounds=(nb_a, nb_b),
                tol_abs=10.0 * F.value_noise * (1 + spec.radius),
            )
            if not nc.passed:
                norm_fail += 1
        m_a, m_b = boundary_bounds(F, spec, phis, vg)
        per_map.append(
            {
                "map": name,
                "spec": dataclasses.asdict(spec),
                "phi_count": len(phis),
                "checks": checks,
                "violations": violations,
                "min_f_margin": None if math.isinf(f_margin_min) else f_margin_min,
                "min_norm_margin": None if math.isinf(norm_margin_min) else norm_margin_min,
                "norm_check_failures": norm_fail,
                "M_a_hat": m_a,
                "M_b_hat": m_b,
                "interpolated_bound": spec.interpolated_bound(m_a, m_b),
                "v_points": len(vg),
            }
        )
        if violations or norm_fail:
            status = EXIT_VIOLATION
        lines.append(
            f"{name}: checks={checks} violations={len(violations)} "
            f"norm_failures={norm_fail} M_a={m_a:.4g} M_b={m_b:.4g}"
        )
        # representative strip report and heat-map table
        phi0 = phis[0]
        value0 = F(phi0)
        if value0.entries:
            xi0 = _xi_candidates(value0, spec, rng, 1)[0]
            per_map[-1]["sample_strip_report"] = three_lines_check_many(
                F, spec, phi0, [xi0], vg
            )[0].to_dict()
            us = np.linspace(spec.a, spec.b, 9)
            vs = vg[:: max(1, len(vg) // 33)]
            table_rows = strip_table(F, spec, phi0, xi0, us, vs)
            write_csv(out_dir / f"strip_{name}.csv", ["u", "v", "abs_f"], [list(r) for r in table_rows])
            if config.figures:
                from .figures import strip_figure

                strip_figure(table_rows, out_dir / f"strip_{name}.png", title=name)
    write_json(out_dir / "interp_report.json", {"maps": per_map})
    write_atomic(out_dir / "summary.txt", "\n".join(lines) + "\n")
    return status


# -- baseline command ---------------------------------------------------------------


def run_baseline(config: CampaignConfig, out_dir: Path) -> int:
    """Exact diagonal-multiplier interpolation inequality ensemble."""
    rng = np.random.default_rng(config.seed * 19 + 5)
    spec = InterpolationSpec.make(
        config.a, config.b, config.alpha, config.beta, 2.0, config.radius, config.s_interp
    )
    rows = []
    worst = math.inf
    eq_gap = 0.0
    status = EXIT_OK
    for i in range(config.multiplier_count):
        if i % 5 == 0:
            k0 = int(rng.integers(1, config.kmax + 1))
            symbol = WeightedSequence({k0: complex(rng.normal(), rng.normal())})
        else:
            ks = rng.choice(
                [k for k in range(-config.kmax, config.kmax + 1) if k != 0],
                size=min(12, 2 * config.kmax),
                replace=False,
            )
            symbol = WeightedSequence({int(k): complex(rng.normal(), rng.normal()) for k in ks})
        rep = riesz_thorin_baseline(symbol, spec)
        worst = min(worst, rep.margin)
        if rep.equality_case:
            eq_gap = max(eq_gap, abs(rep.margin) / max(rep.n_s, 1e-300))
        if rep.margin < -1e-12 * max(1.0, rep.n_s) or rep.numeric_gap > 1e-12 * max(1.0, rep.n_s):
            status = EXIT_VIOLATION
        rows.append([i, int(rep.equality_case), rep.n_a, rep.n_s, rep.n_b, rep.bound, rep.margin, rep.numeric_gap])
    write_csv(
        out_dir / "baseline.csv",
        ["index", "single_mode", "N_a", "N_s", "N_b", "bound", "margin", "numeric_gap"],
        rows,
    )
    write_json(
        out_dir / "baseline_report.json",
        {"count": config.multiplier_count, "worst_margin": worst, "equality_rel_gap": eq_gap},
    )
    write_atomic(
        out_dir / "summary.txt",
        f"multipliers={config.multiplier_count} worst_margin={worst:.3e} "
        f"equality_rel_gap={eq_gap:.3e}\n",
    )
    return status
