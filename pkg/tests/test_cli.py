import json
import subprocess
import sys

import pytest

from minorkit.cli import main
from minorkit.generators import complete, path, petersen
from minorkit.graph import write_edge_list
from minorkit.oracle import model_from_dict, verify_model


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, G in [("k100", complete(100)), ("k5", complete(5)), ("k6", complete(6)), ("pet", petersen()),
                    ("tree", path(12)), ("k3", complete(3))]:
        p = tmp_path / f"{name}.txt"
        write_edge_list(complete(0) if G is None else G, str(p))
        out[name] = str(p)
    return out


def test_embed_success_and_failure(files, tmp_path):
    out = tmp_path / "m.json"
    assert main(["embed", "--host", files["k100"], "--target", files["k5"], "--out", str(out)]) == 0
    model = model_from_dict(json.loads(out.read_text()))
    assert verify_model(complete(100), model) == []
    assert main(["embed", "--host", files["tree"], "--target", files["k3"], "--out", str(out)]) == 1
    assert json.loads(out.read_text())["stage"].startswith("auto/")


def test_oracle_exit_codes(files, capsys):
    assert main(["oracle", "--host", files["pet"], "--target", files["k5"]]) == 0
    assert main(["oracle", "--host", files["pet"], "--target", files["k6"]]) == 1
    assert json.loads(capsys.readouterr().out.splitlines()[-1]) == {"minor": False}
    assert main(["oracle", "--host", files["pet"], "--target", files["k3"], "--roots", "0,1,2"]) == 0
    assert main(["oracle", "--host", files["pet"], "--target", files["k3"], "--roots", "0,x"]) == 2
    assert main(["oracle", "--host", files["pet"], "--target", files["k3"], "--roots", "0,1"]) == 2
    assert main(["oracle", "--host", files["pet"], "--target", files["k5"], "--budget", "2"]) == 1


def test_minimal(files, tmp_path, capsys):
    out = tmp_path / "g.txt"
    assert main(["minimal", "--host", files["k100"], "--m", "4", "--k", "1", "--out", str(out)]) == 0
    # K_n is in E(4, 1) from n = 9 (36 > 32); the minimal graph is K9 minus three edges
    assert out.read_text().startswith("9 33")
    assert main(["minimal", "--host", files["tree"], "--m", "4", "--k", "1"]) == 1
    assert main(["minimal", "--host", files["tree"], "--m", "0.5", "--k", "0"]) == 2


def test_alpha_and_gamma(files, capsys):
    assert main(["alpha"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["alpha"] - 0.319) < 1e-3
    assert main(["gamma", "--target", files["k5"], "--tol", "1e-6"]) == 0
    assert json.loads(capsys.readouterr().out)["feasible"] is True
    assert main(["gamma", "--target", files["k5"], "--tol", "0"]) == 2


def test_usage_errors(files, tmp_path):
    assert main(["gamma", "--target", str(tmp_path / "missing.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n2 1\n")
    assert main(["gamma", "--target", str(bad)]) == 2
    with pytest.raises(SystemExit) as info:
        main(["embed", "--host", files["k5"]])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2
    assert main(["embed", "--host", files["k100"], "--target", files["k5"], "--mode", "paper_faithful",
                 "--eps", "0.5"]) == 2


def test_experiment(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"host": {"family": "complete", "t": [10, 12]}, "target": {"family": "complete", "t": 4}}))
    assert main(["experiment", "--config", str(cfg), "--out-dir", str(tmp_path / "out")]) == 0
    assert "2 rows, 2 certified" in capsys.readouterr().out
    assert (tmp_path / "out" / "results.csv").exists()
    cfg.write_text("{not json")
    assert main(["experiment", "--config", str(cfg), "--out-dir", str(tmp_path / "out")]) == 2
    cfg.write_text(json.dumps({"host": {"family": "complete"}}))
    assert main(["experiment", "--config", str(cfg), "--out-dir", str(tmp_path / "out")]) == 2
    assert main(["experiment", "--config", str(tmp_path / "none.json"), "--out-dir", str(tmp_path)]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "minorkit", "alpha"], capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "p_star" in res.stdout
