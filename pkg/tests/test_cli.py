import json

import pytest

from cogmac.cli import main
from cogmac.config import load_config, with_num_links
from cogmac.errors import ConfigError


def write_config(tmp_path, name="cfg.json", **overrides):
    doc = {
        "network": {
            "num_channels": 1,
            "cycle_T_s": 0.1,
            "w_min": 32,
            "max_stage": 3,
            "w_max": 1024,
            "mode": "basic",
        },
        "scenario": {"n_links": 5, "m_channels": 1, "seed": 3, "homogeneous": True},
        "timing_profile": "bianchi-r3-defaults",
        "experiment": {"tau_s": 0.001, "w": 32, "cycles": 500, "seed": 1, "replications": 2},
    }
    for key, value in overrides.items():
        if value is None:
            doc.pop(key, None)
        elif isinstance(value, dict) and key in doc:
            doc[key].update(value)
        else:
            doc[key] = value
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_analyze_happy_path(tmp_path, capsys):
    cfg = write_config(tmp_path)
    code, out = run(capsys, "analyze", "--config", str(cfg))
    assert code == 0
    payload = json.loads(out)
    assert 0.0 < payload["nt"] < 1.0
    assert abs(sum(payload["pr_n"]) - 1.0) < 1e-12


def test_analyze_infeasible_tau(tmp_path, capsys):
    cfg = write_config(tmp_path)
    code, _ = run(capsys, "analyze", "--config", str(cfg), "--tau", "0.1")
    assert code == 3


def test_config_errors_exit_2(tmp_path, capsys):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    assert run(capsys, "analyze", "--config", str(bad_json))[0] == 2
    assert run(capsys, "analyze", "--config", str(tmp_path / "missing.json"))[0] == 2
    both = write_config(
        tmp_path, "both.json", sensing={"links": [{"snr_db": -17.5, "target_pd": 0.8, "prob_h0": 0.75}]}
    )
    assert run(capsys, "analyze", "--config", str(both))[0] == 2
    profile = write_config(tmp_path, "prof.json", timing_profile="unknown-profile")
    assert run(capsys, "analyze", "--config", str(profile))[0] == 2


def test_explicit_sensing_section(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        scenario=None,
        sensing={
            "sampling_freq_hz": 6e6,
            "links": [
                {"snr_db": -17.5, "target_pd": 0.8, "prob_h0": 0.75},
                {"snr_db": -16.0, "target_pd": 0.85, "prob_h0": 0.7},
            ],
        },
    )
    code, out = run(capsys, "analyze", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["num_links"] == 2


def test_multi_m1_equals_single(tmp_path, capsys):
    cfg = write_config(tmp_path)
    _, single_out = run(capsys, "analyze", "--config", str(cfg), "--protocol", "single")
    _, multi_out = run(capsys, "analyze", "--config", str(cfg), "--protocol", "multi")
    assert json.loads(single_out)["nt"] == pytest.approx(json.loads(multi_out)["nt"], abs=1e-12)


def test_sweep_unknown_axis(tmp_path, capsys):
    cfg = write_config(tmp_path, experiment={"sweep": {"snr": [1, 2]}})
    assert run(capsys, "sweep", "--config", str(cfg))[0] == 2


def test_single_point_sweep_equals_analyze(tmp_path, capsys):
    cfg = write_config(tmp_path, experiment={"sweep": {"tau": [0.001], "w": [32]}})
    out_a, out_s = tmp_path / "a.csv", tmp_path / "s.csv"
    assert run(capsys, "analyze", "--config", str(cfg), "--out", str(out_a))[0] == 0
    assert run(capsys, "sweep", "--config", str(cfg), "--out", str(out_s))[0] == 0
    assert out_a.read_bytes() == out_s.read_bytes()
    assert (tmp_path / "s.csv.manifest.json").exists()


def test_sweep_deterministic_and_parallel_identical(tmp_path, capsys):
    cfg = write_config(
        tmp_path, experiment={"sweep": {"tau": [0.001, 0.0026], "w": [16, 182]}}
    )
    outs = [tmp_path / f"run{i}.csv" for i in range(3)]
    run(capsys, "sweep", "--config", str(cfg), "--out", str(outs[0]))
    run(capsys, "sweep", "--config", str(cfg), "--out", str(outs[1]))
    run(capsys, "sweep", "--config", str(cfg), "--out", str(outs[2]), "--jobs", "2")
    first = outs[0].read_bytes()
    assert first == outs[1].read_bytes() == outs[2].read_bytes()
    # header + 4 grid points, CRLF line endings
    lines = first.decode("utf-8").split("\r\n")
    assert lines[0].startswith("tau_s,w,n,nt")
    assert len([l for l in lines if l]) == 5


def test_sweep_over_network_size(tmp_path, capsys):
    cfg = write_config(tmp_path, experiment={"sweep": {"n": [2, 4, 5]}})
    code, out = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0
    rows = [l.split(",") for l in out.strip().split("\r\n")[1:]]
    assert [int(r[2]) for r in rows] == [2, 4, 5]


def test_simulate_deterministic(tmp_path, capsys):
    cfg = write_config(tmp_path)
    out1, out2 = tmp_path / "sim1.csv", tmp_path / "sim2.csv"
    assert run(capsys, "simulate", "--config", str(cfg), "--out", str(out1))[0] == 0
    assert run(capsys, "simulate", "--config", str(cfg), "--out", str(out2))[0] == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_bytes().decode("utf-8").strip().split("\r\n")
    assert lines[0] == "replication,seed,empirical_nt,ci95,successes,collisions"
    assert len(lines) == 3


def test_optimize_single_window_curve(tmp_path, capsys):
    cfg = write_config(tmp_path, network={"w_min": 1, "w_max": 1})
    out = tmp_path / "opt.csv"
    code, stdout = run(capsys, "optimize", "--config", str(cfg), "--out", str(out))
    assert code == 0
    payload = json.loads(stdout)
    assert payload["w_star"] == 1
    lines = out.read_bytes().decode("utf-8").strip().split("\r\n")
    assert lines[0] == "w,tau_opt_s,nt"
    assert len(lines) == 2


def test_with_num_links_explicit_sensing_cannot_grow(tmp_path):
    cfg = write_config(
        tmp_path,
        scenario=None,
        sensing={"links": [{"snr_db": -17.5, "target_pd": 0.8, "prob_h0": 0.75}]},
    )
    loaded = load_config(cfg)
    with pytest.raises(ConfigError):
        with_num_links(loaded, 2)
    assert with_num_links(loaded, 1).network.num_links == 1


def test_scenario_sweep_regenerates_network(tmp_path):
    loaded = load_config(write_config(tmp_path))
    grown = with_num_links(loaded, 9)
    assert grown.network.num_links == 9
