import subprocess
import sys

import pytest

from mtgen.cli import main
from test_engine import TINY


def write(path, text):
    path.write_text(text)
    return str(path)


def test_help_and_version(capsys):
    assert main(["--version"]) == 0
    assert main(["--help"]) == 0
    assert "usage" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [[], ["run"], ["bogus"], ["filter", "--in", "x", "--qed-min", "q"]])
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "mtgen:error:" in capsys.readouterr().err


def test_missing_config_exits_1_and_creates_nothing(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["run", "--config", str(tmp_path / "no.cfg"), "--out", str(out)]) == 1
    assert not out.exists()
    assert capsys.readouterr().err.startswith("mtgen:error:config:")


def test_missing_input_exits_2(tmp_path):
    assert main(["stats", "--generated", str(tmp_path / "none.smi")]) == 2
    assert main(["resume", "--run", str(tmp_path)]) == 2


def test_stats(tmp_path, capsys):
    gen = write(tmp_path / "g.smi", "CCO\nOCC\nC1CC\nc1ccccc1\nCCN\n")
    known = write(tmp_path / "k.smi", "NCC\n")
    assert main(["stats", "--generated", gen, "--known", known]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].split("\t")[:4] == ["5", "4", "3", "2"]


def test_filter_columns_and_keep(tmp_path, capsys):
    inp = write(tmp_path / "in.smi", "CCc1ccccc1\nC1CC\nO=[N+]([O-])c1ccccc1\n")
    assert main(["filter", "--in", inp, "--all", "--qed-min", "0", "--sa-max", "10"]) == 0
    rows = [l.split("\t") for l in capsys.readouterr().out.splitlines()]
    assert rows[0] == ["smiles", "canonical", "valid", "stage1", "qed", "sa", "descriptors", "ta", "stage2", "keep"]
    by = {r[0]: r for r in rows[1:]}
    assert by["C1CC"][2] == "0" and by["C1CC"][-1] == "0"
    assert by["CCc1ccccc1"][-1] == "1"
    nitro = by["O=[N+]([O-])c1ccccc1"]
    assert "brenk_nitro_aromatic" in nitro[8] and nitro[-1] == "0"


def test_score_to_stdout_and_file(tmp_path, capsys):
    inp = write(tmp_path / "in.smi", "CCO\nOCC\n")
    assert main(["score", "--in", inp, "--targets", "SARS2-7RNW"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2 and lines[1].startswith("CCO,SARS2-7RNW,")
    out = tmp_path / "s.csv"
    assert main(["score", "--in", inp, "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 4
    assert main(["score", "--in", inp, "--targets", "NOPE"]) == 2


def test_build_fixed_set(tmp_path, capsys):
    inp = write(tmp_path / "in.smi", "CCO\nc1ccccc1\n")
    out = tmp_path / "f.smi"
    assert main(["build-fixed-set", "--in", inp, "--out", str(out), "--threshold", "0"]) == 0
    assert out.read_text().split() == ["CCO", "c1ccccc1"]


def test_run_resume_report(tmp_path, capsys):
    cfg = write(tmp_path / "t.cfg", TINY)
    run = tmp_path / "run"
    assert main(["run", "--config", cfg, "--out", str(run), "--stop-after", "1"]) == 3
    assert main(["resume", "--run", str(run)]) == 0
    assert main(["report", "--run", str(run), "--out", str(tmp_path / "rep")]) == 0
    for name in ("thresholds.csv", "candidates.csv", "clusters.csv"):
        assert (tmp_path / "rep" / name).read_text() == (run / "reports" / name).read_text()


def test_train_general(tmp_path, capsys):
    out = tmp_path / "g.mtgw"
    assert main(["train-general", "--out", str(out), "--epochs", "1", "--hidden", "8", "--latent", "4",
                 "--fc", "8", "--seed", "1"]) == 0
    assert out.read_bytes()[:4] == b"MTGW"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "mtgen", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("mtgen ")
