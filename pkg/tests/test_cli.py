import json
from importlib.resources import as_file, files

import pytest
from typer.testing import CliRunner

from mixmult import cli
from mixmult.corpus import random_instance

from . import instances

runner = CliRunner()


@pytest.fixture()
def invoke():
    def _invoke(*args, resource=None, exit_code=0):
        if resource is None:
            result = runner.invoke(cli.app, [*args])
        else:
            with as_file(files(instances) / resource) as path:
                result = runner.invoke(cli.app, [*args, str(path)])
        assert result.exit_code == exit_code, f"Unexpected exit code. Output: \n{result.output}"
        return result

    return _invoke


def test_compute(invoke):
    data = json.loads(invoke("compute", resource="maximal.json").stdout)
    assert data["mixed"] == {"1,0": 1, "0,1": 1}
    assert data["tilde_e"] == 2
    assert data["q"] == 2
    assert data["system"] == "(J=(x, y), I=[(x, y)], N=R/(0))"


def test_compute_samuel(invoke):
    data = json.loads(invoke("compute", resource="samuel.json").stdout)
    assert data["samuel_multiplicity"] == 6


def test_compute_tsv(invoke):
    lines = invoke("compute", "--tsv", resource="torsion.json").stdout.splitlines()
    assert lines[:3] == ["q\t1", "offset\t3", "tilde_e\t1"]
    assert "0,0\t1" in lines


def test_compute_degenerate(invoke):
    result = invoke("compute", resource="degenerate.json", exit_code=cli.EXIT_INPUT)
    assert "I ⊄ √Ann N" in result.output


def test_compute_cap(invoke):
    invoke("compute", "--cap", "0", resource="maximal.json", exit_code=2)


@pytest.mark.parametrize(
    ("args", "resource"),
    [
        (["scaling"], "maximal.json"),
        (["scaling", "--u", "2"], "maximal.json"),
        (["additivity"], "torsion.json"),
        (["saturation"], "torsion.json"),
        (["degree"], "maximal.json"),
        (["recursion"], "maximal.json"),
        (["recursion", "--candidate", "y", "--v", "2"], "maximal.json"),
        (["telescoping", "--candidate", "x", "--candidate", "y"], "maximal.json"),
        (["chain"], "maximal.json"),
        (["exactseq"], "zero_divisor.json"),
        (["exactseq", "--l-prime", "y"], "torsion.json"),
    ],
)
def test_verify(invoke, args, resource):
    report = json.loads(invoke("verify", *args, resource=resource).stdout)
    assert report["verdict"] == "verified"
    assert report["lhs"] == report["rhs"]
    assert report["theorem"] == args[0]


def test_verify_not_weak_fc(invoke):
    report = json.loads(invoke("verify", "recursion", resource="zero_divisor.json", exit_code=3).stdout)
    assert report["verdict"] == "inconclusive"


def test_verify_missing_extras(invoke):
    invoke("verify", "scaling", resource="torsion.json", exit_code=cli.EXIT_INPUT)
    invoke("verify", "recursion", resource="torsion.json", exit_code=cli.EXIT_INPUT)
    invoke("verify", "exactseq", resource="maximal.json", exit_code=cli.EXIT_INPUT)


def test_verify_tsv(invoke):
    lines = invoke("verify", "scaling", "--tsv", resource="maximal.json").stdout.splitlines()
    assert lines[:2] == ["theorem\tscaling", "verdict\tverified"]
    assert "0,1\t3\t3" in lines


def test_primes(invoke):
    data = json.loads(invoke("primes", resource="torsion.json").stdout)
    assert data["minimal_primes"] == [
        {"prime": ["x"], "coheight": 1, "local_length": 1},
        {"prime": ["y"], "coheight": 1, "local_length": 1},
    ]
    assert data["dim_N"] == 1
    assert data["dim_saturation"] == 1
    assert data["components"] == [{"prime": ["y"], "local_length": 1}]


def test_primes_degenerate(invoke):
    data = json.loads(invoke("primes", resource="degenerate.json").stdout)
    assert data["components"] == []
    assert data["dim_saturation"] == -1


def test_hilbert(invoke):
    data = json.loads(invoke("hilbert", "--offset", "0", "--window", "2", resource="maximal.json").stdout)
    assert data["window"] == [0, 2]
    assert data["entries"] == {"0,0": 1, "0,1": 2, "1,0": 2, "1,1": 3}


def test_empty_corpus(invoke, tmp_path):
    result = invoke("corpus", "--size", "0", "--out", str(tmp_path))
    assert "Wrote 0 instances" in result.stdout
    assert (tmp_path / "summary.tsv").read_text() == "instance\ttheorem\tverdict\tlhs\trhs\n"


def test_corpus_is_deterministic(invoke, tmp_path):
    invoke("corpus", "--seed", "3", "--size", "1", "--out", str(tmp_path / "first"))
    invoke("corpus", "--seed", "3", "--size", "1", "--out", str(tmp_path / "second"))
    for name in ("instance-000.json", "summary.tsv"):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_verify_reports_seed(tmp_path):
    path = tmp_path / "instance.json"
    path.write_text(random_instance(5, 0).dump())
    result = runner.invoke(cli.app, ["verify", "degree", str(path)])
    assert json.loads(result.stdout)["seed"] == 5


def test_verify_without_seed(invoke):
    report = json.loads(invoke("verify", "degree", resource="maximal.json").stdout)
    assert report["seed"] is None
