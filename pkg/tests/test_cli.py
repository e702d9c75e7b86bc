import json

import pytest

from ladderwork import __version__, cli
from ladderwork.ladder import LadderInconsistency
from ladderwork.obstruction import SearchResult


def run(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


@pytest.mark.parametrize("p", [3, 5])
def test_verify_relation(capsys, p):
    code, rep = run(capsys, "verify-relation", "--p", str(p))
    assert code == 0 and rep["zero"] is True
    assert rep["config"]["p"] == p and rep["version"] == __version__


@pytest.mark.parametrize("args", [
    ["verify-relation", "--p", "4"],
    ["certify", "--p", "3", "--block", "1", "--i", "5"],
    ["run", "--p", "3", "--precision", "10"],
    ["run", "--p", "3", "--policy", "seeded"],
    ["run", "--p", "3", "--depth", "-1"],
    ["run"],
    ["frobnicate", "--p", "3"],
    ["run", "--p", "3", "--format", "xml"],
])
def test_usage_errors(capsys, args):
    with pytest.raises(SystemExit) as exc:
        code = cli.main(args)
        raise SystemExit(code)
    assert exc.value.code == 64


def test_run_depth_four(capsys):
    code, rep = run(capsys, "run", "--p", "3", "--depth", "4")
    assert code == 0
    assert len(rep["transcript"]["blocks"]) == 4
    assert rep["valuation"]["generators"]["downstairs"][-1] == "1/81"


def test_run_depth_zero(capsys):
    code, rep = run(capsys, "run", "--p", "3", "--depth", "0")
    assert code == 0 and rep["transcript"]["blocks"] == []


def test_seeded_runs_are_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        assert cli.main(["run", "--p", "3", "--depth", "4", "--seed", "7", "--out", str(path)]) == 0
    a, b = (p.read_bytes() for p in paths)
    assert a == b and a.endswith(b"\n")
    assert json.loads(a)["config"]["policy"] == "seeded"


def test_certify(capsys):
    code, rep = run(capsys, "certify", "--p", "3", "--block", "1", "--i", "0")
    assert code == 0
    assert rep["certificate"]["obstruction"]["monomial"] == [3, 1]


def test_search_exhausted(capsys):
    code, rep = run(capsys, "search", "--p", "3", "--block", "1", "--i", "0", "--degree", "9")
    assert code == 0 and rep["status"] == "exhausted"
    assert rep["search"]["candidates"] == 3 ** 9


def test_search_witness_escalates(capsys, monkeypatch):
    fake = SearchResult("witness", 1, {}, ((0,), (0,)), [], 1, 17)
    monkeypatch.setattr(cli, "search_monomial", lambda *a, **k: fake)
    code, rep = run(capsys, "search", "--p", "3", "--block", "1", "--i", "0", "--degree", "1")
    assert code == 3 and rep["search"]["witness"] == {"phi": [0], "psi": [0]}


def test_inconsistency_exit_code(capsys, monkeypatch):
    def broken(*a, **k):
        raise LadderInconsistency("closed and direct states differ", {"c": (1, 2)})
    monkeypatch.setattr(cli, "run_ladder", broken)
    code, rep = run(capsys, "run", "--p", "3", "--depth", "1")
    assert code == 2
    assert rep["status"] == "inconsistent" and rep["diff"] == {"c": [1, 2]}
