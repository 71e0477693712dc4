import json

import pytest

from repairmoea.cli import main


def test_end_to_end(tmp_path, capsys):
    out = tmp_path / "res"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"problem": ["CTP2"], "algorithm": "nsga2", "pop_size": 20, "budget": 200,
                               "runs": 2, "seed": 3}))
    assert main(["run", "--config", str(cfg), "--repair", "clip,reverse", "--out-dir", str(out)]) == 0
    rows = [line for line in (out / "results.csv").read_text().splitlines() if not line.startswith("#")]
    assert len(rows) == 5
    assert rows[1].startswith("CTP2,nsga2,clip,")

    assert main(["tables", "--out-dir", str(out)]) == 0
    assert (out / "tables" / "ttest_igd_nsga2.csv").exists()
    assert main(["plots", "--out-dir", str(out)]) == 0
    assert (out / "plots" / "boundary_CTP2.txt").exists()
    assert (out / "plots" / "front_nsga2_reverse_CTP2.txt").exists()


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"problem": "MCOP3", "pop_size": 12, "budget": 24, "runs": 1, "T": 5}))
    out = tmp_path / "o"
    assert main(["run", "--config", str(cfg), "--budget", "36", "--repair", "B", "--out-dir", str(out)]) == 0
    row = (out / "results.csv").read_text().splitlines()[-1].split(",")
    assert row[:3] == ["MCOP3", "moead", "reflect"]
    assert row[7] == "36"


def test_config_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"popsize": 10}))
    assert main(["run", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 2
    assert "unknown config keys" in capsys.readouterr().err
    assert main(["run", "--algorithm", "spea2", "--out-dir", str(tmp_path)]) == 2


def test_tables_report_missing_cells(tmp_path, capsys):
    out = tmp_path / "r"
    main(["run", "--problem", "CTP3,CTP4", "--repair", "clip", "--pop-size", "20", "--budget", "40",
          "--runs", "2", "--out-dir", str(out)])
    main(["run", "--problem", "CTP3", "--repair", "reverse", "--pop-size", "20", "--budget", "40",
          "--runs", "2", "--out-dir", str(out)])
    assert main(["tables", "--out-dir", str(out)]) == 2
    assert "moead / reverse / CTP4" in capsys.readouterr().err


def test_reference_fronts_and_manifest(tmp_path):
    assert main(["reference-fronts", "--problem", "CTP3", "--resolution", "2000", "--out-dir", str(tmp_path)]) == 0
    text = (tmp_path / "CTP3.txt").read_text()
    assert "# resolution: 2000" in text
    assert main(["manifest", "--out", str(tmp_path / "m.json")]) == 0
    assert len(json.loads((tmp_path / "m.json").read_text())) == 14


def test_requires_subcommand():
    with pytest.raises(SystemExit):
        main([])
