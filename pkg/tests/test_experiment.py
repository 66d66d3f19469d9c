import json

import numpy as np
import pytest

from optomech.cli import main as cli_main
from optomech.experiment import (ExperimentConfig, SweepAxis,
                                 compare_sources, config_from_dict,
                                 run_experiment)
from optomech.model import DriveSpec, SystemParams
from optomech.numerics import StepperConfig
from optomech.recipes import load_recipe, recipe_names

FIG2_DOC = {
    "params": {"delta_a": 1.0, "kappa": 2.0, "gamma_m": 1e-3, "g": 1e-5,
               "delta_c": -1.0, "gamma_a": 0.1, "G0": 1.0, "n_th": 0.0},
    "drive": {"Omega": 2.0,
              "components": [{"n": 0, "re": 150000.0},
                             {"n": 1, "re": 30000.0},
                             {"n": -1, "re": 30000.0}]},
    "horizon_periods": 10.0,
    "sample_periods": 1.0,
    "samples_per_period": 40,
    "outputs": ["first_moments", "cm", "EN"],
}


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_config_parsing_round_trip():
    cfg = config_from_dict(FIG2_DOC)
    assert cfg.params.g0_collective == 1.0
    assert cfg.params.kappa == 2.0
    assert cfg.drive.component(1) == 30000.0
    assert cfg.horizon_periods == 10.0
    assert cfg.validate() == []


def test_config_rejects_double_drive():
    doc = dict(FIG2_DOC)
    doc["engineered"] = {"G1": 1.2, "G2": 0.1, "Omega": 2.0}
    cfg = config_from_dict(doc)
    assert any("exactly one" in r for r in cfg.validate())


def test_config_rejects_unknown_output():
    doc = dict(FIG2_DOC)
    doc["outputs"] = ["EN", "nonsense"]
    cfg = config_from_dict(doc)
    assert any("unknown outputs" in r for r in cfg.validate())


def test_run_writes_manifest_and_csvs(tmp_path):
    cfg = config_from_dict(FIG2_DOC)
    written = run_experiment(cfg, tmp_path)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["config"]["params"]["G0"] == 1.0
    assert "version" in manifest

    header = (tmp_path / "first_moments.csv").read_text().splitlines()[0]
    assert header == "t,q,p,re_a,im_a,re_c,im_c"

    cm_lines = (tmp_path / "cm.csv").read_text().splitlines()
    assert cm_lines[0].split(",")[:3] == ["t", "v11", "v12"]
    assert len(cm_lines[0].split(",")) == 22  # t + upper triangle

    meas = (tmp_path / "measures.csv").read_text().splitlines()
    assert meas[0] == "t,EN,v11,v22,neff,r_db"
    assert len(meas) == 41
    assert set(written) >= {"manifest", "first_moments", "cm", "measures"}


def test_run_is_byte_reproducible(tmp_path):
    cfg = config_from_dict(FIG2_DOC)
    run_experiment(cfg, tmp_path / "a")
    run_experiment(cfg, tmp_path / "b")
    for name in ("first_moments.csv", "cm.csv", "measures.csv"):
        assert (tmp_path / "a" / name).read_bytes() == \
            (tmp_path / "b" / name).read_bytes()


def test_run_without_outputs_writes_manifest_only(tmp_path):
    doc = dict(FIG2_DOC)
    doc["outputs"] = []
    written = run_experiment(config_from_dict(doc), tmp_path)
    assert set(written) == {"manifest"}


def test_constant_drive_run_steady_state(tmp_path):
    doc = {
        "params": {"delta_a": 1.0, "kappa": 2.0, "gamma_m": 1e-3,
                   "g": 1e-5, "delta_c": -1.0, "gamma_a": 0.1, "G0": 1.0,
                   "delta_a_effective": 1.0},
        "drive": {"Omega": 0.0, "components": [{"n": 0, "re": 120000.0}]},
        "outputs": ["stability", "EN"],
    }
    run_experiment(config_from_dict(doc), tmp_path)
    stab = json.loads((tmp_path / "stability.json").read_text())
    assert stab["stable"] is True
    meas = (tmp_path / "measures.csv").read_text().splitlines()
    assert len(meas) == 2
    en = float(meas[1].split(",")[1])
    assert en > 0.0


def test_sweep_with_unstable_cells(tmp_path):
    doc = {
        "params": {"delta_a": 1.0, "kappa": 0.2, "gamma_m": 1e-3,
                   "g": 1e-5, "delta_c": -1.0, "gamma_a": 0.1, "G0": 1.0,
                   "delta_a_effective": 1.0},
        "drive": {"Omega": 0.0, "components": [{"n": 0, "re": 120000.0}]},
        "sweep": {"axes": [{"name": "E0", "min": 1e4, "max": 3e5,
                            "points": 3},
                           {"name": "G0", "min": 0.1, "max": 3.0,
                            "points": 3}]},
    }
    run_experiment(config_from_dict(doc), tmp_path)
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == "E0,G0,status,EN"
    assert len(lines) == 10
    statuses = {ln.split(",")[2] for ln in lines[1:]}
    assert "stable" in statuses and "unstable" in statuses


def test_compare_sources_fig2():
    doc = dict(FIG2_DOC)
    doc["horizon_periods"] = 50.0
    report = compare_sources(config_from_dict(doc))
    assert report["a"] <= 0.01
    assert report["c"] <= 0.01


def test_compare_sources_uncoupled_is_tiny():
    doc = dict(FIG2_DOC)
    doc["params"] = dict(doc["params"], g=0.0)
    doc["horizon_periods"] = 50.0
    report = compare_sources(config_from_dict(doc))
    assert report["a"] <= 1e-6
    assert report["c"] <= 1e-6


def test_compare_sources_degrades_without_backaction_orders():
    doc = dict(FIG2_DOC)
    doc["horizon_periods"] = 50.0
    doc["floquet"] = {"j_max": 0}
    report = compare_sources(config_from_dict(doc))
    assert report["q"] > 0.5  # zeroth order has no mechanical response


def test_recipes_ship_and_parse():
    names = recipe_names()
    for want in ("fig2", "fig6", "fig8a", "fig10"):
        assert want in names
    for name in names:
        cfg = config_from_dict(load_recipe(name))
        assert cfg.validate() == []


def test_cli_simulate_with_config(tmp_path, capsys):
    doc = dict(FIG2_DOC)
    doc["outputs"] = ["EN"]
    path = write_config(tmp_path, doc)
    rc = cli_main(["simulate", "--config", str(path),
                   "--out", str(tmp_path / "run")])
    assert rc == 0
    assert (tmp_path / "run" / "measures.csv").exists()


def test_cli_out_dir_env_var(tmp_path, monkeypatch):
    doc = dict(FIG2_DOC)
    doc["outputs"] = []
    path = write_config(tmp_path, doc)
    monkeypatch.setenv("OPTOMECH_OUT_DIR", str(tmp_path / "envout"))
    rc = cli_main(["simulate", "--config", str(path)])
    assert rc == 0
    assert (tmp_path / "envout" / "manifest.json").exists()


def test_cli_engineer_drive_schema(tmp_path, capsys):
    doc = {
        "params": {"delta_a": 1.0, "kappa": 10.0, "gamma_m": 1e-3,
                   "g": 1e-3, "delta_c": -1.0, "gamma_a": 1e-3, "G0": 1.0},
        "engineered": {"G1": 1.2, "G2": 0.1, "Omega": 2.0},
    }
    path = write_config(tmp_path, doc)
    rc = cli_main(["engineer-drive", "--config", str(path)])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["Omega"] == 2.0
    orders = [c["n"] for c in out["components"]]
    assert sorted(orders) == [-1, 0, 1, 2]


def test_cli_stability(tmp_path, capsys):
    path = write_config(tmp_path, FIG2_DOC)
    rc = cli_main(["stability", "--config", str(path)])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["stable"] is True
    assert out["margin"] < 0.0


def test_cli_wigner_times(tmp_path):
    doc = dict(FIG2_DOC)
    doc["outputs"] = ["EN"]
    path = write_config(tmp_path, doc)
    t1 = 9.25 * np.pi
    t2 = 9.5 * np.pi
    rc = cli_main(["wigner", "--config", str(path),
                   "--times", f"{t1},{t2}",
                   "--out", str(tmp_path / "wig")])
    assert rc == 0
    for k in (0, 1):
        lines = (tmp_path / "wig" / f"wigner_{k}.csv").read_text() \
            .splitlines()
        assert lines[0] == "x,y,w"
        assert len(lines) == 1 + 201 * 201


def test_cli_recipe_overlay(tmp_path):
    overlay = write_config(tmp_path, {"horizon_periods": 3.0,
                                      "sample_periods": 1.0,
                                      "samples_per_period": 20,
                                      "outputs": ["EN"]})
    rc = cli_main(["simulate", "--recipe", "fig2",
                   "--config", str(overlay),
                   "--out", str(tmp_path / "run")])
    assert rc == 0
    meas = (tmp_path / "run" / "measures.csv").read_text().splitlines()
    assert len(meas) == 21


def test_sweep_parallel_matches_serial(tmp_path):
    cfg = ExperimentConfig(
        params=SystemParams(delta_a=1.0, kappa=2.0, gamma_m=1e-3,
                            g=1e-5, delta_c=-1.0, gamma_a=0.1,
                            g0_collective=1.0),
        drive=DriveSpec(big_omega=0.0, components={0: 1.2e5}),
        delta_a_effective=1.0,
        sweep=(SweepAxis(name="G0", min=0.5, max=2.0, points=4),),
        numerics=StepperConfig())
    run_experiment(cfg, tmp_path / "serial", jobs=1)
    run_experiment(cfg, tmp_path / "par", jobs=2)
    assert (tmp_path / "serial" / "sweep.csv").read_bytes() == \
        (tmp_path / "par" / "sweep.csv").read_bytes()
