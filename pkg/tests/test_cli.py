import json

from click.testing import CliRunner

from contactpairs.cli import main


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_certify_builtin_text_output():
    res = run("certify", "--builtin", "bande-hadjar-6d", "--kappa", "1/2")
    assert res.exit_code == 0, res.output
    assert "result: PASS" in res.output
    assert "[ok]" in res.output
    assert "[FAIL]" not in res.output


def test_certify_json_output():
    res = run("certify", "--builtin", "bande-hadjar-6d", "--format", "json")
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["flags"]["associated"] is True
    assert report["pair"]["type"] == [1, 1]
    assert report["volume"]["det_g"] == "1/16"


def test_detect_and_validate_commands():
    res = run("detect", "--builtin", "heisenberg3x3", "--format", "json")
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["pair"]["reeb"]["Z1"]["pretty"] == "X3"
    res = run("validate", "--builtin", "heisenberg3")
    assert res.exit_code == 0
    assert "result: PASS" in res.output


def test_certify_failure_exit_code():
    res = run("certify", "--builtin", "bande-hadjar-6d", "--kappa", "2")
    assert res.exit_code == 1
    assert "result: FAIL" in res.output


def test_unknown_builtin_is_input_error():
    res = run("certify", "--builtin", "nope")
    assert res.exit_code == 2
    assert "input error" in res.stderr
    assert "available" in res.stderr


def test_missing_file_is_input_error(tmp_path):
    res = run("certify", "--file", str(tmp_path / "absent.cps"))
    assert res.exit_code == 2
    assert "no such file" in res.stderr


def test_parse_error_is_located_input_error(tmp_path):
    p = tmp_path / "broken.cps"
    p.write_text("algebra a {\n  dim 2\n  basis w1 w2;\n}\n", encoding="utf-8")
    res = run("certify", "--file", str(p))
    assert res.exit_code == 2
    assert "line 3" in res.stderr
    assert "expected ';'" in res.stderr


def test_file_input_certifies(tmp_path):
    p = tmp_path / "flat.cps"
    p.write_text(
        "algebra flat { dim 2; basis w1 w2; }\n"
        "pair { alpha1 = w1; alpha2 = w2; }\n"
        "metric { w1*w1 + w2*w2 }\n",
        encoding="utf-8",
    )
    res = run("certify", "--file", str(p), "--format", "json")
    assert res.exit_code == 0
    report = json.loads(res.output)
    assert report["pair"]["type"] == [0, 0]


def test_detect_without_pair_block_is_input_error():
    res = run("detect", "--builtin", "heisenberg3")
    assert res.exit_code == 2
    assert "no pair block" in res.stderr


def test_bad_kappa_flag():
    res = run("certify", "--builtin", "abelian2", "--kappa", "half")
    assert res.exit_code == 2
    assert "not a rational" in res.stderr


def test_associate_command(tmp_path):
    out = tmp_path / "built.cps"
    res = run("associate", "--builtin", "heisenberg3x3", "--seed", "random",
              "--rng-seed", "11", "--out", str(out), "--format", "json")
    assert res.exit_code == 0, res.output
    report = json.loads(res.output)
    assert report["max_residual"] <= 1e-9
    assert out.is_file()
    # random-seed output is irrational in general, so the snapped rationals
    # need not pass the exact certificate; the pair data must still detect
    follow = run("detect", "--file", str(out), "--format", "json")
    assert follow.exit_code == 0


def test_associate_identity_seed_output_certifies_exactly(tmp_path):
    # the builtin metric is dyadic, so snapping recovers it bit for bit
    out = tmp_path / "snapped.cps"
    res = run("associate", "--builtin", "bande-hadjar-6d", "--seed", "identity",
              "--out", str(out))
    assert res.exit_code == 0
    follow = run("certify", "--file", str(out), "--format", "json")
    assert follow.exit_code == 0, follow.output
    report = json.loads(follow.output)
    assert report["flags"] == {
        "compatible": True,
        "associated": True,
        "decomposable": True,
        "orthogonal_foliations": True,
    }


def test_version_flag():
    res = run("--version")
    assert res.exit_code == 0
    assert "0.1.0" in res.output
