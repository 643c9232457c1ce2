import json

import pytest

from cli.app import EXIT_GUARD, EXIT_INVALID, EXIT_NEGATIVE, EXIT_OK, run
from core import catalog, codec
from core.cocycle import realize
from core.forms import enumerate_quadratic_forms


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def example_file(tmp_path, capsys):
    def write(name):
        path = tmp_path / f"{name}.json"
        code, doc = invoke(capsys, "model", "example", name)
        assert code == EXIT_OK
        path.write_text(json.dumps(doc))
        return str(path)
    return write


def test_example_documents_round_trip(capsys):
    for name in catalog.EXAMPLES:
        code, doc = invoke(capsys, "model", "example", name)
        assert code == EXIT_OK
        assert doc["guards"] == {"box": 3, "max_candidates": 1_000_000, "parallel": 1}
        assert codec.decode_cocycle(doc) == catalog.example(name)


def test_nonpolar_trace(capsys, example_file):
    code, doc = invoke(capsys, "cocycle", "trace", "--cocycle", example_file("nonpolar"))
    assert code == EXIT_OK
    assert doc["table"] == {"0": [0], "1": [1]}


@pytest.mark.parametrize("name", sorted(catalog.EXAMPLES))
def test_examples_validate(capsys, example_file, name):
    code, doc = invoke(capsys, "cocycle", "validate", "--cocycle", example_file(name))
    assert code == EXIT_OK and doc["valid"]


def test_strictify_outcomes(capsys, example_file):
    code, doc = invoke(capsys, "strictify", "--cocycle", example_file("nonpolar"))
    assert code == EXIT_NEGATIVE and doc["polar"] is False
    code, doc = invoke(capsys, "strictify", "--cocycle", example_file("picard"))
    assert code == EXIT_OK and doc["polar"] is True
    assert doc["strict_cocycle"]["h"] == "zero"


def test_enumerate(capsys):
    code, doc = invoke(capsys, "cocycle", "enumerate", "--group", '{"orders":[2]}', "--coeffs", '{"orders":[2]}')
    assert code == EXIT_OK
    assert len(doc["classes"]) == 2
    assert doc["guards"]["max_candidates"] == 10_000_000
    code, doc = invoke(capsys, "cocycle", "enumerate", "--group", '{"orders":[2]}', "--coeffs", '{"orders":[4]}')
    assert [c["polar"] for c in doc["classes"]].count(True) == 2
    code, doc = invoke(capsys, "cocycle", "enumerate", "--group", '{"orders":[2]}', "--coeffs", '{"orders":[2]}',
                       "--max-candidates", "5000")
    assert code == EXIT_OK and doc["guards"]["max_candidates"] == 5000


def test_enumerate_guard(capsys):
    code, _ = invoke(capsys, "cocycle", "enumerate", "--group", '{"orders":[4]}', "--coeffs", '{"orders":[4]}',
                     "--max-candidates", "10")
    assert code == EXIT_GUARD


def test_malformed_json_has_location(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"group": {"orders": [2]},\n "coeffs": ')
    assert run(["cocycle", "validate", "--cocycle", str(bad)]) == EXIT_INVALID
    assert f"{bad}:2:" in capsys.readouterr().err


def test_bad_document_field_has_path(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"group": {"orders": [2]}, "coeffs": {"orders": [4]}, "c": {"1": [1]}}))
    assert run(["cocycle", "validate", "--cocycle", str(bad)]) == EXIT_INVALID
    assert "$.c.1" in capsys.readouterr().err


def test_usage_error_is_invalid_input(capsys):
    assert run(["model", "example", "nope"]) == EXIT_INVALID


def test_forms_commands(capsys, tmp_path, z2, z4):
    q = next(q for q in enumerate_quadratic_forms(z2, z4) if q.diag[0].coeffs == (1,))
    path = tmp_path / "q.json"
    path.write_text(json.dumps(codec.encode_form(q)))
    code, doc = invoke(capsys, "forms", "is-polar", "--form", str(path), "--brute-force")
    assert code == EXIT_NEGATIVE
    assert doc["polar"] is False and doc["brute_force"]["polar"] is False
    code, doc = invoke(capsys, "forms", "polarize", "--form", str(path))
    assert doc["polarization"]["matrix"] == [[[2]]]
    code, doc = invoke(capsys, "forms", "validate", "--form", str(path))
    assert code == EXIT_OK and doc["defect"] is None
    code, doc = invoke(capsys, "forms", "realize", "--form", str(path), "--table")
    assert codec.decode_cocycle(doc) == catalog.nonpolar()
    code, doc = invoke(capsys, "forms", "realize", "--form", str(path))
    assert codec.decode_cocycle(doc) == realize(q)


def test_cohomologous(capsys, example_file, tmp_path, z2, z4):
    zero = tmp_path / "zero.json"
    zero.write_text(json.dumps({"group": {"orders": [2]}, "coeffs": {"orders": [4]}, "h": {}, "c": {}}))
    code, doc = invoke(capsys, "cocycle", "cohomologous", "--cocycle", example_file("nonpolar"),
                       "--other", str(zero), "--witness")
    assert code == EXIT_NEGATIVE
    assert doc["cohomologous"] is False and doc["witness"] is None


def test_polar_cover(capsys, example_file):
    code, doc = invoke(capsys, "polar-cover", "--cocycle", example_file("nonpolar"))
    assert code == EXIT_OK
    assert doc["P"] == {"orders": [0]}
    assert doc["witness_t"]["matrix"] == [[[1]]]
    assert doc["cells_status"] == "found"
    assert doc["full"] is None


def test_model_check_and_perturb(capsys, example_file):
    code, doc = invoke(capsys, "model", "check", "--cocycle", example_file("nonpolar"))
    assert code == EXIT_OK
    assert doc["pentagon"]["passed"] and doc["hexagon_A"]["passed"] and doc["hexagon_A_prime"]["passed"]
    assert doc["picard"] is False
    assert doc["pi0"] == {"orders": [2]} and doc["pi1"] == {"orders": [4]}
    assert doc["signature_table"] == {"0": [0], "1": [1]}
    code, doc = invoke(capsys, "model", "perturb", "--cocycle", example_file("nonpolar"))
    assert code == EXIT_OK
    assert doc["perturbations"] == 2 and doc["missed"] == []


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    assert run(["model", "example", "koszul", "--output", str(target)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert codec.decode_cocycle(json.loads(target.read_text())) == catalog.koszul()


def test_parallel_output_is_identical(capsys):
    argv = ["cocycle", "enumerate", "--group", '{"orders":[2]}', "--coeffs", '{"orders":[4]}', "--members"]
    _, serial = invoke(capsys, *argv)
    _, parallel = invoke(capsys, *argv, "--parallel", "2")
    serial.pop("guards"), parallel.pop("guards")
    assert serial == parallel
