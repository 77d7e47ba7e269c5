import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from torusskein.cli import fmt_complex, main, run

SCHEMA = json.loads(resources.files("torusskein").joinpath("schema/output.schema.json").read_text())

CASES = [
    ["gauss", "compute", "--order", "4"],
    ["gauss", "compute", "--a", "3", "--b", "2", "--order", "12", "--s", "5"],
    ["gauss", "verify", "--max-a", "3", "--max-two-b", "4", "--max-order", "20", "--max-s", "2"],
    ["gauss", "relations", "--k", "6", "--max-order", "30"],
    ["skein", "reduce", "--k", "3", "--p", "3", "--q", "1"],
    ["skein", "reduce", "--monodromy", "S", "--vector", "(A^2) * (2,0) + (0,1)"],
    ["skein", "product", "--left", "1,0", "--right", "0,1"],
    ["rt", "eval", "--k", "3", "--l", "1", "--order", "10"],
    ["rt", "eval", "--k", "2", "--p", "1", "--q", "2", "--order", "18", "--s", "5"],
    ["dim", "image", "--k", "3"],
    ["report", "main-theorem", "--k", "6"],
    ["monodromy", "rho", "--matrix", "0,-1,1,0", "--order", "14"],
    ["monodromy", "s-colinearity"],
]


@pytest.mark.parametrize("argv", CASES, ids=lambda a: "-".join(a[:2]))
def test_documents_validate(argv):
    code, doc, text = run(argv)
    assert code == 0, doc
    jsonschema.validate(doc, SCHEMA)
    assert json.loads(text) == doc
    if doc["cross_check"] is not None:
        assert doc["cross_check"]["status"] == "pass"


def test_gauss_compute_value():
    _, doc, _ = run(["gauss", "compute", "--order", "4"])
    assert doc["values"]["value"] == "2+2i"
    assert doc["cross_check"]["kind"] == "MultipleOfBase"


def test_frozen_rt_value():
    _, doc, _ = run(["rt", "eval", "--k", "3", "--l", "1", "--order", "10", "--method", "trace"])
    assert doc["values"]["trace"] == fmt_complex(-1.9270509831248428 + 0.9510565162951541j)
    assert doc["cross_check"] is None


@pytest.mark.parametrize("argv", [
    ["gauss", "compute", "--order", "4", "--s", "2"],     # s not a unit
    ["skein", "reduce", "--p", "1", "--q", "1"],           # no k
    ["rt", "eval", "--k", "2", "--p", "1", "--q", "3", "--order", "8"],   # r too small
    ["rt", "eval", "--k", "2", "--order", "7"],            # odd order
    ["monodromy", "rho", "--matrix", "1,1,1,1", "--order", "14"],
    ["monodromy", "rho", "--matrix", "1,0,0,1", "--order", "16"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_2(argv):
    code, doc, _ = run(argv)
    assert code == 2 and doc is None


def test_mismatch_exit_1():
    # the square-class relation fails at some orders when k = 16
    code, doc, _ = run(["gauss", "relations", "--k", "16", "--d", "2", "--max-order", "30"])
    assert code == 1
    assert doc["cross_check"]["status"] == "fail"
    jsonschema.validate(doc, SCHEMA)


def test_other_formats():
    code, _, text = run(["--format", "csv", "gauss", "compute", "--order", "5"])
    assert code == 0
    assert text.splitlines()[0] == "key,value" and "verdict,ok" in text
    assert text.count("verdict") == 1
    _, _, text = run(["--format", "csv", "report", "main-theorem", "--k", "3"])
    assert text.startswith("k,image_dim")
    _, _, text = run(["--format", "pretty", "skein", "reduce", "--k", "3", "--p", "3", "--q", "1"])
    assert "verdict: pass" in text


def test_cache_roundtrip(tmp_path):
    argv = ["--cache-dir", str(tmp_path), "rt", "eval", "--k", "3", "--l", "1", "--order", "10"]
    _, first, _ = run(argv)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    _, second, _ = run(argv)
    assert first == second
    _, _, _ = run(argv[:2] + ["--no-cache"] + argv[2:])
    assert len(list(tmp_path.iterdir())) == 1


def test_seeded_determinism():
    a = run(["--seed", "3", "dim", "image", "--k", "4"])[1]
    b = run(["--seed", "3", "dim", "image", "--k", "4"])[1]
    a.pop("seconds"), b.pop("seconds")
    assert a == b


def test_main_and_module_entry(capsys):
    assert main(["gauss", "compute", "--order", "3"]) == 0
    assert '"command": "gauss compute"' in capsys.readouterr().out
    out = subprocess.run([sys.executable, "-m", "torusskein", "skein", "product", "--left", "1,0",
                          "--right", "0,1"], capture_output=True, text=True)
    assert out.returncode == 0 and "product-to-sum" in out.stdout
