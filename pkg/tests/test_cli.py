import json
from pathlib import Path

import pytest

from frobsplit.cli import main
from frobsplit.rootdata import load_corpus

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_CASES = {
    "theorem_sl2_p2_sampled.json": "verify theorem --datum sl2 --p 2 --deg 2 --mode sampled --trials 40 --seed 11",
    "roundtrip_sl2_p2.json": "module roundtrip --p 2 --n 4",
    "zext_pgl2_gl2.json": "rootdatum z-extend --datum pgl2.json --iso-against gl2.json",
}


def run(cmd, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(cmd.split() + ["--out", str(out), "--no-time"])
    return code, (out.read_text() if out.exists() else None)


@pytest.mark.parametrize("fname", sorted(GOLDEN_CASES))
def test_golden(fname, tmp_path):
    code, text = run(GOLDEN_CASES[fname], tmp_path)
    assert code == 0
    assert text == (GOLDEN / fname).read_text()


def test_deterministic_with_jobs(tmp_path):
    cmd = "verify torus-oracle --p 2 --rank 1,2 --trials 30 --seed 5"
    _, a = run(cmd, tmp_path, "a.json")
    _, b = run(cmd + " --jobs 2", tmp_path, "b.json")
    assert a == b


def test_theorem_example(tmp_path):
    code, text = run("verify theorem --datum pgl2.json --p 3 --deg 3", tmp_path)
    assert code == 0 and json.loads(text)["pass"] is True


def test_z_extend_iso_example(tmp_path):
    code, text = run("rootdatum z-extend --datum pgl2.json --iso-against gl2.json", tmp_path)
    assert code == 0
    assert json.loads(text)["details"]["iso"] == [[1, 0], [1, -1]]


def test_counterexample_exit(tmp_path):
    code, text = run("rootdatum iso --datum sl2 --iso-against pgl2", tmp_path)
    assert code == 1 and json.loads(text)["pass"] is False


def test_non_prime(capsys):
    assert main(["verify", "theorem", "--p", "4"]) == 2
    assert "p must be prime" in capsys.readouterr().err


def test_unknown_datum():
    assert main(["verify", "borel", "--datum", "nope.json"]) == 2


def test_malformed_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["rootdatum", "validate", "--datum", str(bad)]) == 2


def test_usage_errors():
    assert main(["verify"]) == 2
    assert main(["verify", "nonsense"]) == 2
    assert main(["module", "contract", "--p", "2"]) == 2


def test_corpus_env(tmp_path, monkeypatch):
    load_corpus("pgl2").dump(tmp_path / "custom.json")
    monkeypatch.setenv("FROBSPLIT_CORPUS", str(tmp_path))
    code, text = run("rootdatum validate --datum custom.json", tmp_path)
    assert code == 0


def test_module_contract_file(tmp_path):
    from frobsplit.modules import weyl_module
    from frobsplit.hyperalg import RankOne

    M = weyl_module(RankOne.from_datum(load_corpus("sl2")), (4,))
    path = tmp_path / "m.json"
    path.write_text(json.dumps(M.to_json()))
    code, text = run(f"module contract --datum sl2 --p 2 --module {path}", tmp_path)
    assert code == 0
    assert json.loads(text)["details"]["contraction"]["dim"] == 5


def test_stdout_default(capsys):
    assert main(["verify", "mu0", "--datum", "sl2", "--p", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["check"] == "verify.mu0"
