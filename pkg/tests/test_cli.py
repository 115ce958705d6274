import json

import pytest

from camcover.cli import main, parse_seed_range
from camcover.results import read_csv


def test_solve_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["solve", "desk", "--seed", "7", "-T", "8", "--out", str(out)]) == 0
    for name in ("deployment.json", "convergence.csv", "coverage.csv", "summary.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    doc = json.loads((a / "deployment.json").read_text())
    assert doc["seed"] == 7 and len(doc["cameras"]) == 1


def test_solve_wpa_and_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv("CAMCOVER_OUT", str(tmp_path / "env"))
    assert main(["solve", "desk", "--algo", "wpa", "-T", "2"]) == 0
    assert (tmp_path / "env" / "deployment.json").exists()


def test_evaluate_prints_table(tmp_path, capsys):
    main(["solve", "desk", "-T", "5", "--out", str(tmp_path)])
    capsys.readouterr()
    assert main(["evaluate", "desk", str(tmp_path / "deployment.json")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("Contour ")
    rate_row = next(line for line in out.splitlines() if line.startswith("Coverage Rate"))
    assert len(rate_row.split()) - 2 == 12
    assert "full-trajectory coverage" in out


def test_features_csv(tmp_path, capsys):
    assert main(["features", "desk"]) == 0
    out = capsys.readouterr().out
    rows = [r for r in out.splitlines() if not r.startswith("#")]
    assert rows[0] == "j,k,vertex,x,y,rho"
    assert len(rows) - 1 == 16
    main(["features", "large", "--out", str(tmp_path / "f.csv")])
    assert len(read_csv(tmp_path / "f.csv")) == 720


def test_compare(tmp_path, capsys):
    assert main(["compare", "desk", "--seeds", "0..1", "-T", "4", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "compare.csv")
    assert [(r["seed"], r["algorithm"]) for r in rows] == [("0", "iwpa"), ("0", "wpa"), ("1", "iwpa"), ("1", "wpa")]
    assert "pairs where iwpa" in (tmp_path / "compare_summary.txt").read_text()
    first = (tmp_path / "compare.csv").read_bytes()
    main(["compare", "desk", "--seeds", "0..1", "-T", "4", "--out", str(tmp_path)])
    assert (tmp_path / "compare.csv").read_bytes() == first


def test_render(tmp_path, capsys):
    main(["solve", "desk", "-T", "2", "--out", str(tmp_path)])
    assert main(["render", "desk", str(tmp_path / "deployment.json"), "--t", "2",
                 "--out", str(tmp_path / "s.svg")]) == 0
    assert (tmp_path / "s.svg").read_text().count('class="fov"') == 1
    assert main(["render", "desk"]) == 0
    assert "<svg" in capsys.readouterr().out


def test_errors_exit_nonzero(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["solve", str(bad), "--out", str(tmp_path)]) == 2
    assert "schema_version" in capsys.readouterr().err
    assert main(["evaluate", "desk", str(tmp_path / "missing.json")]) == 2
    with pytest.raises(SystemExit):
        main(["compare", "desk", "--seeds", "5..1"])


def test_seed_range():
    assert parse_seed_range("0..3") == [0, 1, 2, 3]
    assert parse_seed_range("4") == [4]
