import json
import os
import subprocess
import sys

import pytest

from delref import io
from delref.cli import JobConfig, main, run
from delref.errors import ConfigError
from delref.fixtures import graded_square, random_periodic

SQUARE = "4 2 0 0\n0 0 0\n1 1 0\n2 1 1\n3 0 1\n4 0\n0 0 1\n1 1 2\n2 2 3\n3 3 0\n0\n"


@pytest.fixture
def square(tmp_path):
    p = tmp_path / "square.poly"
    p.write_text(SQUARE)
    return str(p)


@pytest.fixture
def graded(tmp_path):
    p = str(tmp_path / "graded.poly")
    io.write_poly(p, graded_square())
    return p


@pytest.mark.parametrize("algo", ["seq-ruppert", "seq-chew", "par-ruppert", "par-chew",
                                  "par-generic"])
def test_refine_square_all_algorithms(square, tmp_path, algo):
    out = str(tmp_path / algo)
    rc = main(["refine", "--algo", algo, "--beta", "1.4142135", square, "-o", out,
               "--trace", out + ".json", "--svg", out + ".svg", "--report", out + ".report.json",
               "--strict-checks"])
    assert rc == 0
    for ext in (".node", ".ele", ".poly", ".json", ".svg", ".report.json"):
        assert os.path.exists(out + ext)
    rep = json.loads(open(out + ".report.json").read())
    assert rep["quality"]["min_angle"] >= 20.7


def test_text_report(graded, tmp_path):
    out = str(tmp_path / "g")
    assert main(["refine", "--algo", "par-ruppert", graded, "-o", out, "--report",
                 out + ".txt"]) == 0
    text = open(out + ".txt").read()
    assert "min_angle=" in text and "within=True" in text


def test_beta_below_sqrt2_rejected(square, capsys):
    assert main(["refine", "--beta", "1.0", square]) == 2
    assert "ConfigError" in capsys.readouterr().err


def test_jobconfig_validation():
    with pytest.raises(ConfigError):
        JobConfig("x.poly", alpha=2.0).validate()
    with pytest.raises(ConfigError):
        JobConfig("x.poly", threads=0).validate()
    cfg = JobConfig("dir/x.poly").validate()
    assert cfg.domain_kind == "pslg" and cfg.out == os.path.join("dir", "x.mesh")


def _read_all(stem):
    return b"".join(open(stem + ext, "rb").read() for ext in (".node", ".ele", ".poly", ".json"))


@pytest.mark.parametrize("algo", ["par-ruppert", "par-chew", "par-generic"])
def test_threads_byte_identical(graded, tmp_path, algo):
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    assert main(["refine", "--algo", algo, graded, "-o", a, "--trace", a + ".json"]) == 0
    assert main(["refine", "--algo", algo, graded, "-o", b, "--trace", b + ".json",
                 "--threads", "8"]) == 0
    assert _read_all(a) == _read_all(b)


def test_periodic_input(tmp_path):
    p = tmp_path / "pts.txt"
    p.write_text("\n".join(f"{x!r} {y!r}" for x, y in random_periodic(20, 6).points) + "\n")
    out = str(tmp_path / "per")
    assert run(JobConfig(str(p), "par-chew", out=out, report=out + ".json")) == 0
    rep = json.loads(open(out + ".json").read())
    assert rep["bounds"]["ceiling"] is not None and rep["bounds"]["within"]
    assert io.read_mesh(out).periodic


def test_parse_error_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.poly"
    p.write_text(SQUARE.replace("2 2 3", "2 2 99"))
    assert main(["refine", str(p)]) == 2
    assert "line" in capsys.readouterr().err


def test_io_error_exit_code(square, tmp_path):
    assert main(["refine", square, "-o", str(tmp_path / "no" / "such" / "m")]) == 4


def test_validate(square, tmp_path, capsys):
    assert main(["validate", square]) == 0
    assert "ok vertices=4" in capsys.readouterr().out
    bad = tmp_path / "cross.poly"
    bad.write_text("4 2\n0 0 0\n1 1 1\n2 1 0\n3 0 1\n2 0\n0 0 1\n1 2 3\n0\n")
    assert main(["validate", str(bad)]) == 2


def test_report_subcommand(square, tmp_path, capsys):
    out = str(tmp_path / "sq")
    assert main(["refine", square, "-o", out]) == 0
    capsys.readouterr()
    assert main(["report", out, "--domain", square, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["triangle_count"] == 2 and doc["lfs_ratio_max"] is not None


def test_console_entry_point(square, tmp_path):
    out = str(tmp_path / "m")
    res = subprocess.run([sys.executable, "-m", "delref.cli", "refine", square, "-o", out],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
