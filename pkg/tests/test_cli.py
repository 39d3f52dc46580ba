import json
import os

import pytest

from conjapprox.cli import RunConfig, build_parser, config_from_args, exact_fields, main
from conjapprox.errors import ConfigError

APPROX = ["approx", "--n", "8", "--t", "1", "--points", "const:ln2", "--X-grid", "10000:2:2"]


def run_json(capsys, argv):
    code = main(["--json"] + argv)
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines() if l.strip()]
    return code, lines


def test_form_subcommand(capsys):
    code, recs = run_json(capsys, ["form", "--case", "add", "--gamma", "1", "--n", "3"])
    assert code == 0 and recs[0]["a"] == ["1", "-4", "6", "-4", "1"]


def test_zero_gamma_exit_code(capsys):
    assert main(["form", "--case", "mult", "--gamma", "0", "--n", "3"]) == 2
    assert "gamma" in capsys.readouterr().err


def test_infeasible_exit_code(capsys):
    argv = ["approx", "--n", "8", "--t", "1", "--points", "const:ln2", "--X-grid", "1:2:1"]
    assert main(argv) == 3
    assert capsys.readouterr().err.startswith("error:")


def test_precision_exit_code(capsys, monkeypatch):
    from conjapprox import cli
    from conjapprox.errors import PrecisionExhausted

    def boom(o, cfg):
        raise PrecisionExhausted("forced")
    monkeypatch.setitem(cli.RUNNERS, "form", boom)
    assert main(["form", "--case", "add", "--gamma", "1", "--n", "2"]) == 4


def test_run_config_round_trip():
    ns = build_parser().parse_args(["--seed", "7", "--out", "d"] + APPROX)
    cfg = config_from_args(ns)
    assert RunConfig.from_json(json.loads(json.dumps(cfg.to_json()))) == cfg
    bad = cfg.to_json()
    bad["extra"] = 1
    with pytest.raises(ConfigError):
        RunConfig.from_json(bad)
    bad = cfg.to_json()
    bad["options"] = dict(bad["options"], nonsense=1)
    with pytest.raises(ConfigError):
        RunConfig.from_json(bad)


def test_run_directory_and_replay(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["--out", str(out)] + APPROX) == 0
    for name in ("config.json", "records.jsonl", "summary.json", "approx_series.csv",
                 "approx_series.png"):
        assert (out / name).exists()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["records"] == 2 and summary["constants"]
    capsys.readouterr()
    assert main(["replay", str(out)]) == 0
    assert json.loads(capsys.readouterr().out)["identical"]


def test_replay_detects_tampering(tmp_path, capsys):
    out = tmp_path / "run"
    main(["--out", str(out), "form", "--case", "add", "--gamma", "1", "--n", "2"])
    path = out / "records.jsonl"
    rec = json.loads(path.read_text())
    rec["a"][0] = "99"
    path.write_text(json.dumps(rec) + "\n")
    capsys.readouterr()
    assert main(["replay", str(out)]) == 1


def test_single_point_series_warns(tmp_path):
    out = tmp_path / "one"
    argv = ["--out", str(out), "approx", "--n", "8", "--t", "1", "--points", "const:ln2",
            "--X-grid", "10000:2:1"]
    with pytest.warns(UserWarning, match="single-point"):
        assert main(argv) == 0
    assert (out / "approx_series.csv").exists()
    assert not (out / "approx_series.png").exists()


def test_gelfond_and_diag(tmp_path, capsys):
    code, recs = run_json(capsys, ["gelfond", "--case", "add", "--gamma", "1", "--seed-point",
                                   "rat:1/2", "--n", "4", "--t", "1", "--exponent", "value:1",
                                   "--Y-grid", "1000:100:2"])
    assert code == 0 and [r["certainty"] for r in recs] == ["certified-absent", "certified-found"]
    witness = tmp_path / "w.json"
    witness.write_text(json.dumps({"y": ["1", "2", "4", "8", "16"], "points": ["rat:2"],
                                   "X": "4", "Y": "4"}))
    code, recs = run_json(capsys, ["diag", "--input", str(witness), "--k", "2"])
    assert code == 0 and recs[0]["rank_drop"]["h"] == 1


def test_exact_fields_drop_enclosures():
    rec = {"a": "1/2", "d": {"lo": "1", "hi": "2", "bits": 64}, "l": [{"lo": "0", "hi": "1", "bits": 8}]}
    assert exact_fields(rec) == {"a": "1/2", "d": None, "l": [None]}


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "conjapprox", "form", "--case", "add",
                          "--gamma", "1/2", "--n", "1"], capture_output=True, text=True,
                         cwd=os.path.dirname(__file__))
    assert res.returncode == 0 and res.stdout.startswith("a =")


def test_binomial_relation_from_cli(capsys):
    code, recs = run_json(capsys, ["form", "--case", "add", "--gamma", "1", "--n", "2"])
    assert recs[0]["a"] == ["-1", "3", "-3", "1"]


def test_minima_from_cli(capsys):
    code, recs = run_json(capsys, ["minima", "--n", "1", "--points", "rat:0", "--X", "2", "--Y",
                                   "1", "--method", "exhaustive"])
    assert code == 0
    lams = recs[0]["minima"]
    assert [m["hi"] for m in lams] == ["1/2", "1"] and all(m["witness"] for m in lams)
