import json

import pytest

from cfft.cli import main
from cfft.engine import read_vector, write_vector
from cfft.metrics import CSV_COLUMNS


def test_plan_writes_document(tmp_path, capsys):
    out = tmp_path / "plan.json"
    assert main(["plan", "--m", "4", "--out", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "n=15 k=5 blocks=1,4,4,2,4"
    doc = json.loads(out.read_text())
    assert doc["n"] == 15 and doc["block_form"] is True
    assert doc["field"] == {"m": 4, "poly": "13"}


def test_plan_with_poly_and_short_length(capsys):
    assert main(["plan", "--m", "4", "--poly", "19", "--n", "5"]) == 0
    assert capsys.readouterr().out.strip() == "n=5 k=2 blocks=1,4"


def test_verify(capsys):
    assert main(["verify", "--m", "6", "--trials", "100", "--seed", "7"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("100/100 pass")
    assert "seed=7" in out


def test_verify_from_plan_file(tmp_path, capsys):
    path = tmp_path / "p.json"
    main(["plan", "--m", "3", "--out", str(path)])
    capsys.readouterr()
    assert main(["verify", "--plan", str(path), "--trials", "5", "--no-addnet"]) == 0
    assert "addnet=no" in capsys.readouterr().out


def test_lemmas(capsys):
    assert main(["lemmas", "--m-max", "12"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1 + 11
    assert "FAIL" not in "\n".join(lines)


def test_lemmas_csv(capsys):
    assert main(["lemmas", "--m-min", "4", "--m-max", "4", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "m,n,k,km,lemma2,sizes,lemma1"
    assert lines[1] == "4,15,5,20,pass,1:1/1 2:1/1 4:3/3,pass"


def test_count_csv(capsys):
    assert main(["count", "--m", "5", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    row = dict(zip(CSV_COLUMNS, lines[1].split(",")))
    assert row["m"] == "5" and row["n"] == "31" and row["k"] == "7"
    assert int(row["adds_addnet"]) > 0


def test_count_short_length_has_no_bounds(capsys):
    assert main(["count", "--m", "4", "--n", "5", "--format", "csv"]) == 0
    row = dict(zip(CSV_COLUMNS, capsys.readouterr().out.strip().splitlines()[1].split(",")))
    assert row["adds_addnet"] == "" and row["ratio_mult"] == ""


def test_bounds(capsys):
    assert main(["bounds", "--m-min", "4", "--m-max", "6", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 4
    assert lines[1].endswith("1.0000,1.0000")


def test_transform(tmp_path, capsys):
    src, dst = tmp_path / "in.hex", tmp_path / "out.hex"
    write_vector(src, [0, 1, 0, 0, 0, 0, 0])
    assert main(["transform", "--m", "3", "--in", str(src), "--out", str(dst)]) == 0
    assert read_vector(dst) == [1, 2, 4, 3, 6, 7, 5]
    assert "mults=" in capsys.readouterr().err
    assert main(["transform", "--m", "3", "--in", str(src), "--no-addnet"]) == 0
    assert capsys.readouterr().out.split() == ["1", "2", "4", "3", "6", "7", "5"]


def test_transform_bad_input(tmp_path, capsys):
    src = tmp_path / "in.hex"
    write_vector(src, [9] * 7)
    assert main(["transform", "--m", "3", "--in", str(src)]) == 2
    assert "error" in capsys.readouterr().err


def test_netlist(tmp_path, capsys):
    out = tmp_path / "net.json"
    assert main(["netlist", "--m", "4", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["version"] == "cfft-netlist/1" and doc["r"] == 9
    assert f"total={doc['counts']['total']}" in capsys.readouterr().err


def test_netlist_short_length_needs_flag(capsys):
    assert main(["netlist", "--m", "4", "--n", "5"]) == 2
    assert "experimental" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["frobnicate"], [], ["verify", "--bogus"], ["plan"]])
def test_usage_errors(argv, capsys):
    assert main(argv) != 0
    assert "usage" in capsys.readouterr().err


def test_bad_field(capsys):
    assert main(["plan", "--m", "4", "--poly", "1f"]) == 2
    assert "primitive" in capsys.readouterr().err
