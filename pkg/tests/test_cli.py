"""End-to-end command-line checks (exit codes and output shapes)."""

import json

import pytest

from slo.algebra import dump_algebra, fan_semilattice
from slo.cli import main
from slo.free import cdis_chain, dump_free_model, free_cdis


@pytest.fixture
def fan_file(tmp_path):
    path = tmp_path / "fan.json"
    path.write_text(json.dumps(dump_algebra(fan_semilattice())))
    return str(path)


@pytest.fixture
def chain_file(tmp_path):
    slo = cdis_chain(3)
    doc = dump_algebra(slo.alg, join="add",
                       zero=slo.alg.carrier[slo.zero], unit=slo.alg.carrier[slo.unit])
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_parse_signature_file(tmp_path, capsys):
    path = tmp_path / "sig.txt"
    path.write_text("signature SG\n  op mul:2\nend\n")
    assert main(["parse", "--sig", str(path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ops"] == {"mul": 2}


def test_parse_bad_file_exit_2(tmp_path):
    path = tmp_path / "sig.txt"
    path.write_text("signature SG op mul:two end")
    assert main(["parse", "--sig", str(path)]) == 2


def test_check_identity_exit_codes(fan_file, capsys):
    assert main(["check", "--alg", fan_file, "--id", "mul(x, y) = mul(y, x)"]) == 0
    assert main(["check", "--alg", fan_file, "--id", "mul(x, y) = x"]) == 1
    out = capsys.readouterr().out
    assert "witness" in out


def test_props_report(fan_file, capsys):
    assert main(["props", "--alg", fan_file]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["idempotent"] and out["entropic"]
    assert out["units"] == []


def test_power_and_subalgebras(fan_file, tmp_path, capsys):
    out_file = str(tmp_path / "power.json")
    assert main(["power", "--alg", fan_file, "--variant", "with_empty",
                 "--out", out_file]) == 0
    doc = json.loads(open(out_file).read())
    assert len(doc["carrier"]) == 8
    assert doc["zero"] == "{}"
    assert main(["subalgebras", "--alg", fan_file, "--include-empty"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["count"] == len(report["subalgebras"])


def test_power_unknown_variant_exit_2(fan_file):
    assert main(["power", "--alg", fan_file, "--variant", "bogus"]) == 2


def test_quotient_and_free_commands(fan_file, tmp_path, capsys):
    assert main(["quotient-rho", "--alg", fan_file, "--variant", "with_empty"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert "union" in doc["ops"]
    assert main(["free-sl", "--gens", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["carrier"]) == 3
    assert main(["free-cdis", "--gens", "2", "--count"]) == 0
    assert capsys.readouterr().out.strip() == "14"


def test_disj_command(tmp_path, capsys):
    model = free_cdis(["x"])
    alg = model.slo.alg
    doc = dump_algebra(alg, join="add",
                       zero=alg.carrier[model.slo.zero],
                       unit=alg.carrier[model.slo.unit])
    path = tmp_path / "free.json"
    path.write_text(json.dumps(doc))
    gens = alg.carrier[model.generators["x"]]
    target = alg.carrier[alg.apply("add", (model.generators["x"], model.slo.unit))]
    assert main(["disj", "--alg", str(path), "--gens", gens, "--elem", target]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["target"] == target and len(out["parts"]) >= 1


def test_extend_command(tmp_path, chain_file, capsys):
    model = free_cdis(["x"])
    free_path = tmp_path / "freemodel.json"
    free_path.write_text(json.dumps(dump_free_model(model)))
    assert main(["extend", "--free", str(free_path), "--target", chain_file,
                 "--map", "x=1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["homomorphism"] and out["unique"]


def test_suite_json_output(capsys):
    assert main(["suite", "counts", "--max-size", "2", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ok"] and out["suite"] == "counts"


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["not-a-command"])
    assert exc.value.code == 2
