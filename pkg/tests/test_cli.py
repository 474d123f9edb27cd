import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from cdkernel import cli, serialize
from cdkernel.contract import ContractivityReport
from cdkernel.errors import DomainError, ParseError
from cdkernel.hermlin import PDVerdict
from cdkernel.kernelzoo import DomainSpec


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def matrix(obj):
    return serialize.from_jsonable(obj)


def test_parse_point():
    assert np.allclose(cli.parse_point("0", DomainSpec("disc")), [0])
    p = cli.parse_point("0.1+0.2i,0.3", DomainSpec("ball", n=2))
    assert np.allclose(p, [0.1 + 0.2j, 0.3])
    assert cli.parse_complex("-i") == -1j
    assert cli.parse_complex("2.5e-1-3i") == 0.25 - 3j
    assert cli.parse_complex(" .5i") == 0.5j
    with pytest.raises(DomainError, match=r"\|z2\| < 1 - \|z1\|\^2"):
        cli.parse_point("0.9,0.9", DomainSpec("omega2"))


def test_parse_errors_report_position():
    with pytest.raises(ParseError) as exc:
        cli.parse_complex_list("0.1,0.2+x")
    assert exc.value.position == 4
    with pytest.raises(ParseError):
        cli.parse_complex("1+2j")
    with pytest.raises(ParseError):
        cli.parse_range("1:0:0.1")


def test_parse_range():
    assert np.allclose(cli.parse_range("0.2:0.3:0.05"), [0.2, 0.25, 0.3])


def test_curvature_command(capsys):
    code, out, _ = run(["curvature", "--kernel", "matrix-ball:2x2", "--lambda", "1",
                        "--point", "0,0,0,0"], capsys)
    assert code == 0
    H = matrix(json.loads(out)["outputs"]["H"])
    assert np.allclose(H, 4 * np.eye(4))


def test_contract_command(capsys):
    code, out, _ = run(["contract", "--test", "omega3-contract", "--lambda", "0.3"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["verdict"] is True
    assert d["outputs"]["computed_threshold"] == pytest.approx(0.25, abs=1e-6)
    rep = ContractivityReport.from_dict(d["outputs"])
    assert rep.test_name == "omega3-contract"


def test_contract_csv_sweep(capsys):
    code, out, _ = run(["contract", "--test", "omega2-cc", "--lambda-range", "0.5:0.6:0.025",
                        "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["verdict"] for r in rows] == ["False", "False", "True", "True", "True"]


def test_other_contract_tests(capsys):
    code, out, _ = run(["contract", "--test", "ball-curvature", "--kernel", "ball:2",
                        "--lambda", "0.3"], capsys)
    assert code == 0 and json.loads(out)["verdict"] is False
    code, out, _ = run(["contract", "--test", "nu", "--kernel", "matrix-ball:2x3",
                        "--lambda", "0.5"], capsys)
    assert json.loads(out)["outputs"]["nu"] == 2.5
    code, out, _ = run(["contract", "--test", "a-norm", "--kernel", "matrix-ball:2x2",
                        "--lambda", "0.25", "--point", "0.1,0.2i,0,0.3"], capsys)
    assert json.loads(out)["outputs"]["value"] == pytest.approx(1.0)


def test_every_subcommand_runs(capsys):
    cmds = [
        ["jetgram", "--kernel", "omega3", "--order", "2"],
        ["local-tuple", "--kernel", "ball:2", "--point", "0.1,0.2i", "--poly", "1@1,1"],
        ["wallach", "--kernel", "matrix-ball:2x2", "--lambda", "0.125", "--max-order", "2"],
        ["pa-norm", "--r", "2", "--s", "3", "--values", "1,0,0,0,0.5i,0"],
        ["check-transform", "--a", "0.3-0.2i", "--z", "0.1i", "--w", "-0.4"],
        ["det-expansion", "--matrix", "0.1,0.2i,0.3,0.1", "--r", "2", "--s", "2"],
        ["bergman-eval", "--kernel", "omega2", "--z", "0.1,0.2", "--w", "0.3i,0"],
    ]
    for argv in cmds:
        code, out, err = run(argv, capsys)
        assert code == 0, (argv, err)
        assert json.loads(out)["test"] == argv[0]


def test_wallach_output(capsys):
    _, out, _ = run(["wallach", "--kernel", "matrix-ball:2x2", "--lambda", "0.125",
                     "--max-order", "2"], capsys)
    d = json.loads(out)["outputs"]
    assert d["index"] == "1" and d["pd_levels"] == 2
    assert PDVerdict.from_dict(d["verdicts"][1]).kind == "indefinite"


def test_tolerance_env(capsys, monkeypatch):
    monkeypatch.setenv("CDKERNEL_TOL", "0.5")
    _, out, _ = run(["jetgram", "--kernel", "disc", "--lambda", "0.01", "--order", "1"], capsys)
    d = json.loads(out)
    assert d["tolerance"] == 0.5 and d["outputs"]["pd"]["class"] == "marginal"


def test_errors_are_json_with_exit_2(capsys):
    code, _, err = run(["bergman-eval", "--kernel", "omega2", "--z", "0.9,0.9"], capsys)
    assert code == 2 and json.loads(err)["error"] == "DomainError"
    code, _, err = run(["bergman-eval", "--kernel", "ball:2", "--z", "0.1,0.3x"], capsys)
    d = json.loads(err)
    assert code == 2 and d["error"] == "parse" and d["position"] == 4
    code, _, err = run(["nonsense"], capsys)
    assert code == 2 and json.loads(err)["error"] == "usage"
    code, _, err = run(["contract", "--test", "omega2-cc"], capsys)
    assert code == 2
    code, _, err = run(["jetgram", "--order", "9"], capsys)
    assert code == 2 and json.loads(err)["error"] == "UnsupportedOrderError"


def test_deterministic_output(capsys):
    argv = ["local-tuple", "--kernel", "omega2", "--lambda", "0.7", "--point", "0.2-0.1i,0.05"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b


def test_json_round_trip():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    back = serialize.loads(serialize.dumps({"M": M, "x": 0.1 + 0.2j, "v": [1.5, 2.5]}))
    assert np.array_equal(back["M"], M)
    assert back["x"] == 0.1 + 0.2j
    v = PDVerdict("marginal", -1e-12, 3.0)
    assert PDVerdict.from_dict(json.loads(serialize.dumps(v))) == v


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cdkernel", "pa-norm", "--r", "2", "--s", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["outputs"]["formula"] == pytest.approx(0.5)


def test_verify_all(capsys):
    code, out, err = run(["verify-all", "--seed", "7"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["verdict"] is True and len(d["outputs"]) == 13
    assert err.count("criterion") == 13
