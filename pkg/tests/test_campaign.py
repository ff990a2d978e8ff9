"""Config validation, cache keys, decay fits, persistence, CLI."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from hillspec.campaign import (
    CampaignConfig,
    ConfigError,
    build_residual_report,
    cache_key,
    decay_fit,
    resolve_out_dir,
    run_baseline,
    run_spectrum,
    weighted_sum,
)
from hillspec.cli import main

SMALL = {
    "seed": 3,
    "s_list": [1.0],
    "radius": 1.2,
    "kmax": 12,
    "n_max": 6,
    "tol": 1e-10,
    "seeds": 1,
    "figures": False,
}


# -- config ------------------------------------------------------------------


def test_config_defaults_valid():
    CampaignConfig.from_dict({})


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        CampaignConfig.from_dict({"n_maxx": 3})


@pytest.mark.parametrize(
    "bad",
    [
        {"n_max": 0},
        {"n_max": 300},
        {"tol": 1e-5},
        {"tol": 1e-14},
        {"radius": 0.0},
        {"margin": 1.5},
        {"seeds": 0},
        {"kmax": 0},
        {"schema_version": 99},
        {"maps": ["identity", "bogus"]},
        {"v_points": 10},
        {"s_list": [-1.0]},
    ],
)
def test_config_rejects_bad_ranges(bad):
    with pytest.raises(ConfigError):
        CampaignConfig.from_dict(bad)


def test_cache_key_canonicalization():
    a = {"n_max": 8, "tol": 1e-10, "seed": 2}
    b = {"seed": 2, "tol": 1e-10, "n_max": 8}
    assert cache_key(a) == cache_key(b)
    assert cache_key({**a, "tol": 1e-11}) != cache_key(a)


def test_cache_key_ignores_out_but_not_schema():
    a = CampaignConfig.from_dict({"out": "/tmp/x"})
    b = CampaignConfig.from_dict({})
    assert cache_key(a) == cache_key(b)


def test_resolve_out_dir(tmp_path, monkeypatch):
    cfg = CampaignConfig.from_dict({})
    assert resolve_out_dir(cfg, "spectrum", str(tmp_path / "o")) == tmp_path / "o"
    monkeypatch.setenv("HILLSPEC_CACHE_DIR", str(tmp_path / "cache"))
    path = resolve_out_dir(cfg, "spectrum", None)
    assert path.parent == tmp_path / "cache"
    assert cache_key(cfg) in path.name


# -- decay fit ------------------------------------------------------------------


def test_decay_fit_exact_power_law():
    mags = {n: float(n) ** -3.0 for n in range(2, 40)}
    fit = decay_fit(mags, 1)
    assert fit.slope == pytest.approx(-3.0, abs=1e-10)
    assert fit.half_width == pytest.approx(0.0, abs=1e-9)


def test_decay_fit_below_floor():
    fit = decay_fit({n: 0.0 for n in range(1, 20)}, 0)
    assert fit.below_floor and fit.slope is None


def test_decay_fit_insufficient_points():
    with pytest.raises(ValueError):
        decay_fit({n: 1.0 / n for n in range(1, 6)}, 0)


def test_weighted_sum_formula():
    mags = {1: 2.0, 3: 0.5}
    assert weighted_sum(mags, 1.0, 0) == pytest.approx(1.0 * 4.0 + 81.0 * 0.25)
    assert weighted_sum(mags, 1.0, 1) == pytest.approx(81.0 * 0.25)


def test_residual_report_split_inequality():
    rng = np.random.default_rng(1)
    per_seed = []
    per_cut = []
    for _ in range(4):
        mags = {n: float(n) ** -2.5 * (1 + 0.3 * rng.random()) for n in range(1, 33)}
        per_seed.append(mags)
        per_cut.append({n: v for n, v in mags.items() if n <= 24})
    rep = build_residual_report(1.0, "kappa", per_seed, 3, 32, -1.75, 0.05, per_cut)
    assert rep.split_ok
    assert rep.total_sqrt_max <= rep.head_bound + rep.tail_bound + 1e-12
    assert rep.stability_change == 0.0
    assert rep.sup_weighted_sum <= rep.tail_bound**2 * (1 + 1e-12)


# -- runners and CLI ----------------------------------------------------------------


def test_run_spectrum_outputs_and_roundtrip(tmp_path):
    cfg = CampaignConfig.from_dict(SMALL)
    status = run_spectrum(cfg, tmp_path)
    assert status == 0
    csv_path = tmp_path / "spectrum_000.csv"
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "n,mu,kappa,lam_minus,lam_plus,r_kappa,r_mid"
    assert len(lines) == 1 + cfg.n_max
    # every float cell parses back losslessly at 17 significant digits
    for line in lines[1:]:
        cells = line.split(",")
        for cell in cells[1:]:
            value = float(cell)
            assert format(value, ".17g") == cell
    payload = json.loads((tmp_path / "spectrum_000.json").read_text())
    assert len(payload["records"]) == cfg.n_max
    mu1 = payload["records"][0]["mu"]
    assert float(lines[1].split(",")[1]) == mu1


def test_determinism_byte_identical(tmp_path):
    cfg = CampaignConfig.from_dict(SMALL)
    run_spectrum(cfg, tmp_path / "a")
    run_spectrum(cfg, tmp_path / "b")
    for name in ("spectrum_000.csv", "spectrum_000.json", "summary.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_run_baseline_status(tmp_path):
    cfg = CampaignConfig.from_dict({**SMALL, "multiplier_count": 25})
    assert run_baseline(cfg, tmp_path) == 0
    assert (tmp_path / "baseline.csv").exists()


def test_cli_config_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n_max": -2}')
    assert main(["spectrum", "--config", str(bad), "--out", str(tmp_path / "o")]) == 2


def test_cli_invalid_explicit_potential_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    # c(0) != 0 violates the mean-zero invariant
    bad.write_text(json.dumps({**SMALL, "potential": {"K": 1, "real": True, "coeffs": [[0, 1.0, 0.0]]}}))
    assert main(["spectrum", "--config", str(bad), "--out", str(tmp_path / "o")]) == 2


def test_cli_solver_failure_exit_code(tmp_path, monkeypatch):
    from hillspec.schrodinger import SpectralError
    import hillspec.cli as cli_mod

    def boom(config, out_dir):
        raise SpectralError("forced")

    monkeypatch.setattr(cli_mod, "run_spectrum", boom)
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(SMALL))
    assert cli_mod.main(["spectrum", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 3


def test_cli_spectrum_end_to_end(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(SMALL))
    rc = main(["spectrum", "--config", str(cfg_path), "--out", str(tmp_path / "out")])
    assert rc == 0
    assert (tmp_path / "out" / "summary.txt").exists()


def test_cli_zero_potential_mu_column(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({**SMALL, "potential": "zero", "n_max": 8}))
    rc = main(["spectrum", "--config", str(cfg_path), "--out", str(tmp_path / "out")])
    assert rc == 0
    lines = (tmp_path / "out" / "spectrum_000.csv").read_text().strip().splitlines()
    for i, line in enumerate(lines[1:], start=1):
        mu = float(line.split(",")[1])
        assert mu == pytest.approx(i**2 * math.pi**2, rel=1e-9)


def test_cli_figures_rendered(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({**SMALL, "figures": True}))
    rc = main(["spectrum", "--config", str(cfg_path), "--out", str(tmp_path / "out")])
    assert rc == 0
    png = tmp_path / "out" / "spectrum_000.png"
    assert png.exists() and png.stat().st_size > 1000


def test_run_interp_campaign_small(tmp_path):
    from hillspec.campaign import run_interp_campaign

    cfg = CampaignConfig.from_dict(
        {
            "seed": 5,
            "radius": 2.0,
            "kmax": 10,
            "n_max": 8,
            "tol": 1e-11,
            "maps": ["identity", "kappa"],
            "phi_count": 2,
            "xi_count": 3,
            "v_max": 6.0,
            "v_points": 21,
            "n_lo": 2,
            "n_hi": 6,
            "figures": False,
        }
    )
    status = run_interp_campaign(cfg, tmp_path)
    assert status == 0
    report = json.loads((tmp_path / "interp_report.json").read_text())
    maps = {m["map"]: m for m in report["maps"]}
    assert set(maps) == {"identity", "kappa"}
    assert maps["identity"]["violations"] == []
    assert maps["identity"]["min_norm_margin"] >= 0
    assert (tmp_path / "strip_identity.csv").read_text().splitlines()[0] == "u,v,abs_f"
    # the kappa map campaign reproduces the weighted-residual norm bound
    assert maps["kappa"]["norm_check_failures"] == 0
    assert maps["kappa"]["spec"]["alpha"] == 1.0 and maps["kappa"]["spec"]["beta"] == 1.0


def test_run_kappa_small(tmp_path):
    from hillspec.campaign import run_kappa

    cfg = CampaignConfig.from_dict(
        {
            "seed": 7,
            "s_list": [0.5],
            "radius": 1.2,
            "kmax": 8,
            "n_max": 6,
            "tol": 1e-11,
            "bases": 1,
            "rho": 0.3,
            "figures": False,
        }
    )
    status = run_kappa(cfg, tmp_path)
    assert status == 0
    report = json.loads((tmp_path / "kappa_report.json").read_text())
    assert report["sigma"] == 1
    assert report["bases"][0]["max_mean_defect_above_n_r"] <= 1e-8
    rows = (tmp_path / "kappa_circle.csv").read_text().strip().splitlines()
    assert rows[0] == "base,n,valid,mean_defect,kappa_center"
    assert len(rows) == 1 + cfg.n_max


def test_cli_entrypoint_subprocess(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({**SMALL, "multiplier_count": 10}))
    proc = subprocess.run(
        [sys.executable, "-m", "hillspec.cli", "baseline", "--config", str(cfg_path), "--out", str(tmp_path / "out")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "worst_margin" in proc.stdout
