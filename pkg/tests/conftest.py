"""Shared session fixtures for the heavier spectral computations."""

import json

import pytest

from hillspec.campaign import CampaignConfig, run_residuals
from hillspec.fourier import FourierFunction
from hillspec.schrodinger import spectral_table

# ensemble parameters shared by the residual-decay acceptance checks
RESIDUAL_CONFIG = {
    "seed": 9,
    "s_list": [0.0, 0.5, 1.0, 1.5, 2.0],
    "radius": 2.0,
    "kmax": 96,
    "n_max": 64,
    "tol": 1e-12,
    "seeds": 16,
    "margin": 0.2,
    "slope_slack": 0.25,
    "stability_rel": 0.05,
    "figures": False,
}


@pytest.fixture(scope="session")
def zero_table():
    """Full spectral table of the zero potential up to n = 64."""
    import time

    t0 = time.monotonic()
    table = spectral_table(FourierFunction.zero(), 64, 1e-12)
    return table, time.monotonic() - t0


@pytest.fixture(scope="session")
def residual_reports(tmp_path_factory):
    """Residual-decay ensemble report (5 smoothness levels x 16 seeds)."""
    out = tmp_path_factory.mktemp("residual-ensemble")
    config = CampaignConfig.from_dict(RESIDUAL_CONFIG)
    status = run_residuals(config, out, jobs=2)
    payload = json.loads((out / "report.json").read_text())
    return status, payload["reports"], out
