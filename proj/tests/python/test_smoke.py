import math

import numpy as np
import pytest

import gascatter as gs


def test_presets_and_version():
    assert gs.__version__ == "0.1.0"
    assert "fig1a" in gs.preset_names()
    cfg = gs.preset("fig4a")
    assert cfg.is_physical
    assert cfg.regime == gs.Regime.Exact


def test_spectrum_columns_and_unitarity():
    cfg = gs.PhenomConfig(phi_j=0.7, phi_plus=0.3, phi_minus=2.1, tau_gamma=1.5)
    s = gs.spectrum(cfg, regime=gs.Regime.Exact, grid=list(np.linspace(-5, 5, 101)))
    assert s["T"].shape == (101,)
    np.testing.assert_allclose(s["T"] + s["R"] + s["Tc"], 1.0, atol=1e-12)
    np.testing.assert_allclose(s["I2"], s["Tc"] - s["Tc_b"], atol=1e-15)
    assert not s["flagged"].any()


def test_positive_channel_lock():
    cfg = gs.PhenomConfig(phi_j=math.pi, phi_minus=0.75 * math.pi)
    s = gs.spectrum(cfg)
    assert s["Tc"].max() < 1e-12
    a = gs.amplitudes(cfg, -0.5 * math.sin(0.75 * math.pi), regime=gs.Regime.Markovian)
    assert a["R"] == pytest.approx(1.0, abs=1e-9)
    assert any("positive-channel" in b for b in gs.bics(cfg))


def test_contrast_preset_peak():
    s = gs.spectrum(gs.preset("fig5b"))
    assert s["I2"].max() == pytest.approx(1.0, abs=1e-6)


def test_features_on_retarded_preset():
    f = gs.features(gs.preset("fig4a"), "Tc")
    assert len(f["dips"]) == 8
    with pytest.raises(ValueError):
        gs.features(gs.preset("fig4a"), "Q")


def test_optimize_reciprocal_bound():
    r = gs.optimize(base=gs.PhenomConfig(phi_j=0.0),
                    free={"phi-plus": (0, 2 * math.pi), "phi-minus": (0, 2 * math.pi), "delta": (-10, 10)},
                    resolution=24)
    assert r["value"] == pytest.approx(0.5, abs=1e-6)
    assert set(r["point"]) == {"phi-plus", "phi-minus", "phi-J", "delta", "tau-gamma", "theta"}
    with pytest.raises(ValueError):
        gs.optimize(free={"delta": (1, 1)})


def test_verify_small_campaign():
    r = gs.verify(points=50, seed=3)
    assert r["pass"]
    assert r["max_error"] < 1e-9
    assert r["report"].rstrip().endswith("result: PASS")


def test_config_parsing_errors():
    cfg = gs.parse_config("phi_J = 1\nregime = markov\npoints = 11\n")
    assert len(cfg.detuning_grid()) == 11
    with pytest.raises(gs.ConfigError, match=":2:"):
        gs.parse_config("phi_J = 1\nphi_J = 2\n")


def test_cli_round_trip():
    code, out, err = gs.run_cli(["spectrum", "--figure", "fig1g", "--points", "5"])
    assert code == 0 and err == ""
    assert "delta_over_gamma,T,R,Tc" in out
    code, _, _ = gs.run_cli(["spectrum", "--points", "0"])
    assert code == 2
