import json
from importlib import resources

import jsonschema
import pytest

from gshift import gallery
from gshift.analyzer import predicate_vector
from gshift.cli import RunConfig, main
from gshift.generate import random_finite_fibre, random_presentation
from gshift.serialize import dumps, load

SCHEMA = json.loads(resources.files("gshift").joinpath("report_schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def emitted(tmp_path):
    def _emit(name):
        path = tmp_path / f"{name}.json"
        assert main(["gallery", "emit", name, "-o", str(path)]) == 0
        return str(path)
    return _emit


@pytest.mark.parametrize("name", gallery.names())
def test_entry_matches_expected_fragment(name):
    report = predicate_vector(gallery.get(name).presentation).to_json()
    assert gallery.mismatches(name, report) == {}


@pytest.mark.parametrize("name", gallery.names())
def test_bundled_file_is_canonical_and_round_trips(name, tmp_path):
    P = gallery.get(name).presentation
    assert gallery.bundled_text(name) == dumps(P)
    path = tmp_path / "x.json"
    path.write_text(gallery.bundled_text(name))
    assert predicate_vector(load(path)) == predicate_vector(P)


def test_list_and_unknown_entry(capsys):
    code, out, _ = run(capsys, "gallery", "list")
    assert code == 0 and out.count("\n    ") >= 7
    code, _, err = run(capsys, "gallery", "emit", "no_such_entry")
    assert code == 2 and "unknown gallery entry" in err


def test_emit_to_stdout_is_byte_identical(capsys):
    code, out, _ = run(capsys, "gallery", "emit", "counterexample_3_4")
    assert code == 0 and out == gallery.bundled_text("counterexample_3_4")
    assert json.loads(out)["components"][0]["block"] == [0, 1]


def test_classify_counterexample(capsys, emitted):
    code, out, _ = run(capsys, "--format", "json", "classify", emitted("counterexample_3_4"))
    doc = json.loads(out)
    assert code == 0
    assert doc["finiteFibreWeighted"] is False and doc["finiteFibreUnweighted"] is True
    jsonschema.validate(doc, SCHEMA)


def test_classify_theta1_v_text_and_csv(capsys, emitted):
    path = emitted("theta1_v")
    code, out, _ = run(capsys, "classify", path)
    assert "entCsetWeighted: Zero" in out and "entCsetUnweighted: Infinite" in out
    code, out, _ = run(capsys, "classify", path, "--format", "csv")
    assert out.splitlines()[0] == "field,value" and "rho3,true" in out


def test_classify_finite_demo_all_zero(capsys, emitted):
    code, out, _ = run(capsys, "classify", emitted("finite_demo_mixed"), "--format", "json")
    doc = json.loads(out)
    assert {doc[k] for k in doc if k.startswith("ent")} == {"Zero"}


@pytest.mark.parametrize("seed", range(25))
def test_random_reports_satisfy_schema(seed):
    jsonschema.validate(predicate_vector(random_presentation(seed, 5)).to_json(), SCHEMA)


def test_invalid_file_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"field": {"p": 2}, "components": [{"id": "a", "kind": "finite", "map": [5], "weights": [1]}]}')
    code, _, err = run(capsys, "classify", str(bad))
    assert code == 2 and "MapOutOfRange" in err
    code, _, _ = run(capsys, "classify", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, _ = run(capsys, "--radius", "0", "classify", str(bad))
    assert code == 2


def test_verify_theta2_and_badr5000(capsys, emitted):
    code, out, _ = run(capsys, "verify", emitted("theta2"))
    assert code == 0
    assert "segment of length 50" in out and "constant lengths 1" in out
    code, out, _ = run(capsys, "verify", emitted("badr5000"), "--format", "json")
    doc = json.loads(out)
    by = {c["check"]: c for c in doc["checks"]}
    assert code == 0
    assert "NotFound above" in by["tau_weighted"]["detail"]
    assert by["fibre_weighted"]["detail"].endswith("5 hits")


def test_verify_full_shift_gap_empty(capsys, emitted):
    code, out, _ = run(capsys, "verify", emitted("full_shift"))
    assert code == 0 and "finite; gap []" in out


def test_brute_finite_demos(capsys, emitted):
    code, out, _ = run(capsys, "brute", emitted("finite_demo_collapse"))
    assert code == 0 and "FAIL" not in out and "quasi_period_pair: [1, 2]" in out
    code, out, _ = run(capsys, "brute", emitted("finite_demo_swap"), "--format", "json")
    assert code == 0 and json.loads(out)["quasi_period_pair"] == [1, 3]


def test_brute_rejects_infinite_and_caps(capsys, emitted, tmp_path):
    code, _, _ = run(capsys, "brute", emitted("theta3"))
    assert code == 2
    code, _, err = run(capsys, "brute", emitted("finite_demo_mixed"), "--max-states", "100")
    assert code == 4 and "state cap" in err


def test_table_a_default_run(capsys):
    code, out, _ = run(capsys, "table-a", "--samples", "40")
    assert code == 0
    assert "implications: 14/14 hold" in out
    assert "pi2=True with rho2=False: theta2 witnessed" in out
    assert "pi2=True with rho2=True: theta3 witnessed" in out
    assert "rho1=True with pi1=False: theta2 witnessed" in out


def test_table_a_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "table-a", "--samples", "10")
    doc = json.loads(out)
    assert code == 0 and doc["violations"] == 0 and len(doc["implications"]) == 14
    assert all(r["ok"] for r in doc["required"])


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(format="xml")
    with pytest.raises(ValueError):
        RunConfig(kmax=0)


def test_generator_determinism_and_rate():
    assert dumps(random_presentation(2, 3)) == dumps(random_presentation(2, 3))
    from gshift.analyzer import finite_fibre
    assert sum(finite_fibre(random_presentation(s, 3)) for s in range(100)) >= 30
    s, P = random_finite_fibre(4)
    assert finite_fibre(P) and s // 1000 == 4
