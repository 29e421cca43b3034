import io
import json

import pytest

from sl2jets.atlas import torus_example
from sl2jets.cli import main
from sl2jets.exactnum import format_scalar, parse_scalar


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_verify_thm1_grid():
    code, out = run("verify", "thm1", "--k", "0..3", "--n", "-2..4")
    assert code == 0
    assert len(out.splitlines()) == 28 and all(l.startswith("PASS") for l in out.splitlines())


def test_verify_thm2():
    code, out = run("verify", "thm2", "--k", "1", "--n", "1", "--l", "1", "--json")
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_verify_remark():
    code, out = run("verify", "remark", "--n", "0", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "feasible" and rep["witness"]["operator"] == "d/dz"
    code, out = run("verify", "remark", "--n", "-2..2", "--json")
    assert code == 0 and len(out.splitlines()) == 5


@pytest.mark.parametrize("argv", [
    ("verify", "props234", "--k", "1..3", "--n", "-1..3"),
    ("verify", "prop1", "--m", "0..3", "--n", "0..2"),
    ("verify", "lemma1", "--k", "4", "--n", "0..3"),
    ("verify", "lemma2", "--k", "0..2", "--n", "-1..2"),
    ("verify", "cor1", "--k", "0..2", "--n", "-1..2", "--atlas", "sphere"),
    ("verify", "symbol", "--k", "0..2", "--n", "-1..2", "--r", "1..2"),
])
def test_verify_suites(argv):
    code, out = run(*argv)
    assert code == 0 and out


def test_compute_cocycle():
    code, out = run("compute", "cocycle", "--k", "1", "--n", "0",
                    "--g", '{"a":"0","b":"1","c":"-1","d":"0"}', "--z0", "2")
    assert code == 0 and json.loads(out)["matrix"] == [["1", "0"], ["0", "1/4"]]


def test_compute_decompose():
    assert json.loads(run("compute", "decompose", "--m", "1", "--n", "1")[1])["degrees"] == [2, 0]
    rep = json.loads(run("compute", "decompose", "--k", "1", "--n", "3", "--l", "1")[1])
    assert sum(s["degree"] + 1 for s in rep["summands"]) == 4


def test_compute_atlas_check():
    code, out = run("compute", "atlas-check")
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_compute_lift_and_symbol(tmp_path):
    code, out = run("compute", "lift", "--k", "1", "--n", "1", "--l", "1", "--theta", '["1","2"]')
    assert code == 0
    path = tmp_path / "op.json"
    path.write_text(out)
    code, out = run("compute", "symbol", "--input", str(path))
    assert code == 0 and json.loads(out) == {"symbol": [["1 + 2*z"]], "weight": 1}


def test_compute_intertwiner():
    code, out = run("compute", "intertwiner", "--k", "2", "--n", "1")
    assert code == 0 and "matrix" in json.loads(out)


def test_usage_errors():
    assert run("verify", "thm2", "--k", "2", "--n", "0", "--l", "2")[0] == 2
    assert run("compute", "cocycle", "--g", '{"a":')[0] == 2
    assert run("verify", "nope")[0] == 2
    assert run("verify", "thm1", "--k", "3..1")[0] == 2
    assert run("verify", "lemma1", "--k", "1", "--n", "3")[0] == 2
    assert run("verify", "thm1", "--trials", "0")[0] == 2


def test_fail_exit_code(tmp_path):
    atlas = json.loads(run("compute", "atlas-check")[1])
    assert atlas["status"] == "pass"
    data = torus_example().to_json()
    # flip the sign of one lifted transition: fine projectively, not as an SL cocycle
    m = data["transitions"][0]["map"]
    data["transitions"][0]["map"] = {key: format_scalar(-parse_scalar(v)) for key, v in m.items()}
    path = tmp_path / "atlas.json"
    path.write_text(json.dumps(data))
    code, out = run("verify", "cor1", "--k", "1", "--n", "0..1", "--atlas", str(path))
    assert code == 1
    assert out.splitlines()[0].startswith("PASS") and out.splitlines()[1].startswith("FAIL")


def test_deterministic():
    argv = ("verify", "thm2", "--k", "0..2", "--n", "-1", "--l", "2", "--r", "1..2",
            "--trials", "2", "--json", "--seed", "7")
    assert run(*argv) == run(*argv)
