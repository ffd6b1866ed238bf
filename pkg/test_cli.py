"""
CLI（main.py）のテスト
"""

import json

import pytest

import main
from modules.config import Config


def run(*argv) -> int:
    return main.main([str(arg) for arg in argv])


def read(path):
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture
def catalan_file(tmp_path):
    path = tmp_path / "catalan.json"
    assert run("gen", "catalan", "--out", path) == 0
    return path


@pytest.fixture
def gaussian_file(tmp_path):
    path = tmp_path / "gaussian.json"
    assert run("gen", "gaussian-duplicated", "--out", path) == 0
    return path


def test_gen_catalan_table(catalan_file):
    data = read(catalan_file)
    assert data["d"] == 1 and data["max_degree"] == 8
    assert data["moments"]["1111"] == "2/1"
    assert data["moments"]["11111111"] == "14/1"
    assert data["moments"]["1"] == "0/1"


def test_check_catalan(catalan_file, tmp_path):
    out = tmp_path / "check.json"
    assert run("check", catalan_file, "-n", 3, "--out", out) == 0
    assert read(out) == {"has_mops": True, "degree": 3}


def test_check_duplicated_gaussian(gaussian_file, tmp_path):
    out = tmp_path / "check.json"
    assert run("check", gaussian_file, "--degree", 1, "--out", out) == 1
    report = read(out)
    assert report["has_mops"] is False
    assert report["witness"] == ["1", "2"]
    assert report["inner_product"] == "1/1"


def test_check_rejects_non_unital(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"d": 1, "max_degree": 2, "moments": {"": "2/1", "1": "0/1", "11": "1/1"}}))
    assert run("check", path, "-n", 1) == 2


def test_check_bound_and_format_errors(catalan_file, tmp_path):
    assert run("check", catalan_file, "-n", 5) == 3
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run("check", broken, "-n", 1) == 2
    assert run("check", tmp_path / "missing.json", "-n", 1) == 2
    missing_word = tmp_path / "missing_word.json"
    missing_word.write_text(json.dumps({"d": 1, "max_degree": 2, "moments": {"": "1/1", "1": "0/1"}}))
    assert run("check", missing_word, "-n", 1) == 2
    assert run("check", catalan_file) == 2


def test_reversed_word_may_be_omitted(tmp_path):
    path = tmp_path / "table.json"
    moments = {"": "1/1", "1": "0/1", "2": "0/1", "11": "1/1", "12": "0/1", "22": "1/1"}
    path.write_text(json.dumps({"d": 2, "max_degree": 2, "moments": moments}))
    assert run("check", path, "-n", 1) == 0


def test_orthogonalize_catalan(catalan_file, tmp_path):
    out = tmp_path / "family.json"
    assert run("orthogonalize", catalan_file, "-n", 3, "--verify", "--out", out) == 0
    result = read(out)
    assert result["has_mops"] is True
    assert result["verified"] is True
    assert result["family"]["polynomials"]["111"] == {"111": "1/1", "1": "-2/1"}
    coefficients = result["coefficients"]
    assert coefficients["C"] == {"1": "1/1", "11": "1/1", "111": "1/1"}
    assert coefficients["B"] == {"1||": "0/1", "1|1|1": "0/1", "1|11|11": "0/1"}


def test_orthogonalize_zero_degree(catalan_file, tmp_path):
    out = tmp_path / "family.json"
    assert run("orthogonalize", catalan_file, "-n", 0, "--out", out) == 0
    result = read(out)
    assert result["family"]["polynomials"] == {"": {"": "1/1"}}
    assert result["coefficients"] == {"C": {}, "B": {}}


def test_orthogonalize_non_mops_emits_family_only(gaussian_file, tmp_path):
    out = tmp_path / "family.json"
    assert run("orthogonalize", gaussian_file, "-n", 1, "--out", out) == 1
    result = read(out)
    assert result["has_mops"] is False
    assert "coefficients" not in result
    assert "note" in result
    assert set(result["family"]["polynomials"]) == {"", "1", "2"}


def test_hankel_catalan_with_dump(catalan_file, tmp_path):
    out = tmp_path / "hankel.json"
    dump = tmp_path / "matrices"
    assert run("hankel", catalan_file, "-n", 2, "--dump-matrices", dump, "--out", out) == 0
    result = read(out)
    assert result["frak_h"] == {"0": "1/1", "1": "1/1", "2": "1/1", "3": "1/1"}
    assert result["h"]["11"] == "1/1"
    assert result["polynomials"]["11"] == {"11": "1/1", "": "-1/1"}
    assert result["relation1"]["ok"] is True
    assert sorted(p.name for p in dump.iterdir()) == ["A_1.csv", "A_11.csv", "A_empty.csv"]
    rows = (dump / "A_11.csv").read_text(encoding="utf-8").splitlines()
    assert rows[0] == ",∅,1,11"
    assert rows[-1] == "11,1/1,0/1,2/1"


def test_hankel_duplicated_gaussian_not_faithful(gaussian_file):
    assert run("hankel", gaussian_file, "-n", 2) == 4
    assert run("hankel", gaussian_file, "-n", 1) == 4


def test_check_agrees_with_relation1(tmp_path):
    table = tmp_path / "semicircular.json"
    assert run("gen", "free-semicircular-d2", "--out", table) == 0
    out = tmp_path / "hankel.json"
    assert run("check", table, "-n", 2) == 0
    assert run("hankel", table, "-n", 2, "--out", out) == 0
    assert read(out)["relation1"]["ok"] is True


def test_fock_and_extract(tmp_path):
    fock = tmp_path / "catalan_fock.json"
    assert run("gen", "catalan", "--fock", "--depth", 2, "--out", fock) == 0
    table = tmp_path / "table.json"
    assert run("fock", fock, "-n", 4, "--out", table) == 0
    assert read(table)["moments"]["1111"] == "2/1"
    assert run("fock", fock, "-n", 6) == 3
    assert run("fock", fock, "-n", 3) == 2

    extracted = tmp_path / "extracted.json"
    source = tmp_path / "catalan6.json"
    assert run("gen", "catalan", "--degree", 6, "--out", source) == 0
    assert run("extract", source, "-K", 2, "--out", extracted) == 0
    data = read(extracted)
    assert data["C"] == {"1": "1/1", "11": "1/1"}
    assert data["T"]["1"] == {"0": [["0/1"]], "1": [["0/1"]], "2": [["0/1"]]}
    assert run("extract", source, "-K", 3) == 3


def test_extract_non_mops_exits_one(gaussian_file):
    assert run("extract", gaussian_file, "-K", 1) == 1


def test_roundtrip_free_semicircular(tmp_path):
    fock = tmp_path / "semicircular_fock.json"
    assert run("gen", "free-semicircular-d2", "--fock", "--depth", 2, "--out", fock) == 0
    out = tmp_path / "roundtrip.json"
    assert run("roundtrip", fock, "--verify", "--out", out) == 0
    result = read(out)
    assert result["agree"] is True
    assert result["degree"] == 5
    assert all(result["verify"].values())


def test_roundtrip_jacobi(tmp_path):
    fock = tmp_path / "jacobi_fock.json"
    assert run("gen", "jacobi", "--a", "0", "1", "1/2", "--b", "1", "2", "--fock", "--out", fock) == 0
    out = tmp_path / "roundtrip.json"
    assert run("roundtrip", fock, "--verify", "--out", out) == 0
    assert read(out)["verify"]["jacobi_agrees"] is True


def test_gen_jacobi_table_and_errors(tmp_path):
    out = tmp_path / "jacobi.json"
    assert run("gen", "jacobi", "--a", "1", "0", "--b", "2", "--out", out) == 0
    moments = read(out)["moments"]
    assert moments["1"] == "1/1" and moments["11"] == "3/1"
    assert run("gen", "jacobi", "--a", "1", "0") == 2
    assert run("gen", "jacobi", "--a", "1", "0", "--b", "-1") == 2
    assert run("gen", "gaussian-duplicated", "--fock") == 2


def test_invalid_fock_file(tmp_path):
    path = tmp_path / "bad_fock.json"
    path.write_text(json.dumps({"d": 1, "depth": 1, "C": {"1": "-1/1"}, "T": {"1": {"0": [["0/1"]], "1": [["0/1"]]}}}))
    assert run("roundtrip", path) == 2
    assert run("fock", path, "-n", 2) == 2


def test_dimension_ceiling(catalan_file, monkeypatch):
    assert run("check", catalan_file, "-n", 3, "--max-dim", 4) == 5
    monkeypatch.setenv(Config.MAX_DIM_ENV, "3")
    assert run("check", catalan_file, "-n", 3) == 5
    assert run("check", catalan_file, "-n", 3, "--max-dim", 4096) == 0
    monkeypatch.setenv(Config.MAX_DIM_ENV, "many")
    assert run("check", catalan_file, "-n", 3) == 2
    assert run("check", catalan_file, "-n", 3, "--max-dim", 1) == 2


def test_output_is_deterministic(catalan_file, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert run("orthogonalize", catalan_file, "-n", 3, "--out", first) == 0
    assert run("orthogonalize", catalan_file, "-n", 3, "--out", second) == 0
    assert first.read_bytes() == second.read_bytes()


def test_stdout_carries_json(catalan_file, capsys):
    assert run("check", catalan_file, "-n", 2) == 0
    assert json.loads(capsys.readouterr().out) == {"has_mops": True, "degree": 2}


def test_config_max_dim(monkeypatch):
    monkeypatch.delenv(Config.MAX_DIM_ENV, raising=False)
    assert Config.get_max_dim() == Config.DEFAULT_MAX_DIM
    monkeypatch.setenv(Config.MAX_DIM_ENV, "10")
    assert Config.get_max_dim() == 10
    assert Config.validate_config()
    monkeypatch.setenv(Config.MAX_DIM_ENV, "1")
    assert not Config.validate_config()


def test_json_indent_is_read_at_call_time(catalan_file, tmp_path, monkeypatch):
    monkeypatch.setenv(Config.JSON_INDENT_ENV, "abc")
    assert not Config.validate_config()
    assert run("check", catalan_file, "-n", 2) == 2
    assert run("check", catalan_file, "-n", 2, "--max-dim", 4096) == 2

    monkeypatch.setenv(Config.JSON_INDENT_ENV, "4")
    assert Config.get_json_indent() == 4
    out = tmp_path / "check.json"
    assert run("check", catalan_file, "-n", 2, "--out", out) == 0
    assert out.read_text(encoding="utf-8").splitlines()[1].startswith("    \"")
