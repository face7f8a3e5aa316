import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import pytest

from norma.cli import main
from norma.document import bundled_fixtures, parse_document

DOCS_SCHEMA = Path(__file__).resolve().parents[1] / "docs" / "input_document.schema.json"

NORM_DOC = {
    "domain": "Q",
    "algebras": {"K": {"kind": "quadratic", "modulus": "x^2 - 2"}},
    "modules": {"M": {"over": "K", "rank": 2}},
    "tasks": [{"name": "rank two", "op": "norm", "module": "M"}],
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, doc, name="doc.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


# run --------------------------------------------------------------------------------------------

def test_norm_document_reports_dimension_four(tmp_path, capsys):
    code, out, err = run(capsys, "run", write(tmp_path, NORM_DOC))
    assert code == 0
    report = json.loads(out)
    assert report["tasks"][0]["status"] == "pass"
    assert report["tasks"][0]["result"]["dimension"] == 4
    assert '"dimension": 4' in out
    assert "pass" in err


def test_non_associative_table_exits_3(tmp_path, capsys):
    # scalars are strings in documents
    e0, e1, e2, z = ["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"], ["0", "0", "0"]
    doc = {
        "domain": "Q",
        "algebras": {"A": {"kind": "custom", "constants": [[e0, e1, e2], [e1, e2, z], [e2, z, e0]], "unit": e0}},
        "tasks": [{"name": "etale?", "op": "etale", "algebra": "A"}],
    }
    code, out, err = run(capsys, "run", write(tmp_path, doc))
    assert code == 3
    assert "associative" in err


def test_unreadable_input_exits_2(tmp_path, capsys):
    assert run(capsys, "run", write(tmp_path, "{not json"))[0] == 2
    assert run(capsys, "run", str(tmp_path / "missing.json"))[0] == 2


def test_schema_violation_exits_3(tmp_path, capsys):
    doc = dict(NORM_DOC, tasks=[{"name": "x", "op": "no-such-op"}])
    assert run(capsys, "run", write(tmp_path, doc))[0] == 3


def test_unknown_reference_exits_3(tmp_path, capsys):
    doc = dict(NORM_DOC, tasks=[{"name": "x", "op": "norm", "module": "missing"}])
    assert run(capsys, "run", write(tmp_path, doc))[0] == 3


def test_failed_expectation_exits_1(tmp_path, capsys):
    doc = dict(NORM_DOC, tasks=[{"name": "wrong", "op": "norm", "module": "M", "expect": {"dimension": 5}}])
    code, out, _ = run(capsys, "run", write(tmp_path, doc))
    assert code == 1
    assert json.loads(out)["tasks"][0]["status"] == "fail"


def test_precondition_failure_in_a_task_exits_4(tmp_path, capsys):
    doc = {
        "domain": "Q",
        "algebras": {"K": {"kind": "quadratic", "modulus": "x^2 - 2"}},
        "modules": {"M": {"over": "K", "rank": 1}},
        "tasks": [{"name": "not split", "op": "split-oracle", "module": "M"}],
    }
    code, out, _ = run(capsys, "run", write(tmp_path, doc))
    assert code == 4
    assert json.loads(out)["tasks"][0]["status"] == "error"


def test_report_is_deterministic(tmp_path, capsys):
    path = write(tmp_path, NORM_DOC)
    first = run(capsys, "run", path, "--seed", "3")[1]
    second = run(capsys, "run", path, "--seed", "3")[1]
    assert first == second


@pytest.mark.parametrize("name,text", bundled_fixtures(), ids=[name for name, _ in bundled_fixtures()])
def test_bundled_fixtures_round_trip_and_pass(name, text, tmp_path, capsys):
    doc = parse_document(text)
    again = parse_document(doc.dumps())
    assert again.data == doc.data
    assert again.dumps() == doc.dumps()
    assert run(capsys, "run", write(tmp_path, text, name))[0] == 0


def test_docs_schema_matches_packaged_schema():
    packaged = resources.files("norma").joinpath("data/input_document.schema.json").read_text()
    assert json.loads(DOCS_SCHEMA.read_text()) == json.loads(packaged)


# subcommands -----------------------------------------------------------------------------------------

def test_a1d2_example(capsys):
    code, out, err = run(capsys, "a1d2", "--etale", "x^2-2", "--quaternion", "-1,-1")
    assert code == 0
    result = json.loads(out)["result"]
    assert result["dim_sym"] == 10
    assert result["involution"] == "orthogonal"
    assert "dim Sym = 10" in err


def test_a1d2_on_non_etale_extension_exits_4(capsys):
    assert run(capsys, "a1d2", "--etale", "x^2", "--quaternion", "-1,-1", "--no-azumaya")[0] == 4


def test_segre_example(capsys):
    code, out, err = run(capsys, "segre", "--perm", "(1 2)", "--r", "2", "--d", "2")
    assert code == 0
    assert json.loads(out)["result"]["det"] == "-1"
    assert "det = -1" in err


def test_gamma_basis_example(capsys):
    code, out, _ = run(capsys, "gamma-basis", "--n", "2", "--d", "3")
    assert code == 0
    result = json.loads(out)["result"]
    assert result["dimension"] == 4
    assert len(result["multisets"]) == 4


def test_norm_subcommand(capsys):
    code, out, _ = run(capsys, "norm", "--split", "2", "--dims", "2,3")
    assert code == 0
    assert json.loads(out)["result"]["dimension"] == 6


def test_quadpair_split_subcommand(capsys):
    code, out, _ = run(capsys, "quadpair-split", "--sizes", "1,1", "--primes", "2,3", "--samples", "10")
    assert code == 0
    assert json.loads(out)["result"]["dim_sym"] == 10


def test_invalid_field_exits_3(capsys):
    assert run(capsys, "gamma-basis", "--n", "2", "--d", "2", "--base", "GF(4)")[0] == 3


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_bad_criteria_exit_2(capsys):
    assert run(capsys, "verify-suite", "banana")[0] == 2
    assert run(capsys, "verify-suite", "99")[0] == 2


def test_verify_suite_all_with_fixtures(capsys):
    code, out, err = run(capsys, "verify-suite", "all")
    assert code == 0
    report = json.loads(out)
    assert len(report["criteria"]) == 13
    assert all(f["exit_code"] == 0 for f in report["fixtures"])
    assert err.count("[PASS]") == 13 + len(report["fixtures"])


def test_seed_comes_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("NORMA_SEED", "5")
    from_env = run(capsys, "verify-suite", "10", "--samples", "5")[1]
    monkeypatch.delenv("NORMA_SEED")
    explicit = run(capsys, "verify-suite", "10", "--samples", "5", "--seed", "5")[1]
    assert from_env == explicit
    assert json.loads(from_env)["seed"] == 5


def test_bad_seed_in_environment_exits_2(monkeypatch, capsys):
    monkeypatch.setenv("NORMA_SEED", "abc")
    assert run(capsys, "verify-suite", "9")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "norma", "segre", "--perm", "(1 2)", "--r", "4", "--d", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["det"] == "1"
