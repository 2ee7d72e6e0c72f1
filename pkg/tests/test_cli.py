import json
import subprocess
import sys

import pytest

from loopforge import cli
from loopforge import properties as P
from loopforge.catalog import enumerate_loops
from loopforge.errors import InternalError
from loopforge.loop import parse_table, serialize_table


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def non_moufang_file(tmp_path):
    Q = next(Q for Q in enumerate_loops(5) if Q.order == 5 and not P.is_moufang(Q))
    path = tmp_path / "five.tbl"
    path.write_text(serialize_table(Q), encoding="utf-8")
    return path


def test_analyze_non_moufang_file(capsys, non_moufang_file):
    code, out, _ = run(capsys, "analyze", str(non_moufang_file), "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["properties"]["moufang"] is False
    assert doc["witnesses"]["moufang"]
    assert doc["loop"]["order"] == 5


def test_text_and_json_verdicts_agree(capsys):
    code_t, text, _ = run(capsys, "verify", "o16")
    code_j, js, _ = run(capsys, "verify", "o16", "--format", "json")
    doc = json.loads(js)
    assert code_t == code_j == 0
    names = [c["name"] for c in doc["checks"]]
    assert names and all(n in text for n in names)
    assert all(c["verdict"] in ("pass", "info") for c in doc["checks"])


def test_series_command(capsys):
    code, out, _ = run(capsys, "series", "D4", "--format", "json", "--cross-validate")
    doc = json.loads(out)
    assert code == 0
    assert doc["class"] == 2 and doc["lower_orders"] == [8, 2, 1]


def test_series_of_non_nilpotent_loop(capsys):
    code, out, _ = run(capsys, "series", "m_s3_2", "--kind", "mu", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["class"] is None


def test_basis_class_one(capsys):
    code, out, _ = run(capsys, "basis", "--class", "1", "--macros")
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert code == 0
    assert lines == ["(bassoc x0 x1 x2) = 1", "(bcomm x0 x1) = 1"]


def test_basis_json_counts(capsys):
    code, out, _ = run(capsys, "basis", "--class", "2", "--kind", "alpha-beta", "--format", "json", "--seed", "11")
    doc = json.loads(out)
    assert len(doc["identities"]) == 9 and doc["seed"] == 11


def test_check_failure_reports_witness(capsys):
    code, out, _ = run(capsys, "check", "s3", "--term", "[x0,x1]")
    assert code == 1
    assert "witness: x0=" in out and "fails at" in out


def test_check_json_witness_is_genuine(capsys, catalog):
    code, out, _ = run(capsys, "check", "S3", "--term", "(* x0 x1) = (* x1 x0)", "--format", "json")
    doc = json.loads(out)
    S3 = catalog["S3"]
    index = {S3.label(i): i for i in S3}
    a, b = index[doc["witness"]["x0"]], index[doc["witness"]["x1"]]
    assert code == 1 and S3.mul(a, b) != S3.mul(b, a)


def test_check_sampled_is_not_a_failure(capsys):
    code, out, _ = run(capsys, "check", "o16", "--term", "[[x0,x1,x2],x3,x4]", "--budget", "500", "--seed", "42")
    assert code == 0
    assert "not refuted" in out and "seed: 42" in out


def test_seed_is_echoed(capsys):
    _, out, _ = run(capsys, "analyze", "z3", "--format", "json", "--seed", "99")
    assert json.loads(out)["seed"] == 99


def test_decompose_with_loops(capsys):
    code, out, _ = run(
        capsys, "decompose", "--term", "(* [x0,x1,x2] [x1,x0])", "--t", "2", "--loop", "o16", "--loop", "d4",
        "--format", "json",
    )
    doc = json.loads(out)
    assert code == 0 and len(doc["v"]) == 3
    assert all(c["reconstruction"] and c["u_killed"] for c in doc["checks"])


def test_catalog_emit_round_trip(capsys, tmp_path, catalog):
    code, out, _ = run(capsys, "catalog", "--emit", str(tmp_path))
    assert code == 0 and f"wrote {len(catalog)} tables" in out
    for name, Q in catalog.items():
        path = tmp_path / f"{cli.slug(name)}.tbl"
        assert parse_table(path.read_text()) == Q
        assert cli.load_loop(str(path)) == Q


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "no-such-loop"],
        ["check", "s3", "--term", "(* x0"],
        ["decompose", "--term", "(* x0 x3)", "--t", "1"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("loopforge: error:")


def test_malformed_table_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.tbl"
    bad.write_text("2\n0 1\n0 1\n")
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2 and "Latin" in err


@pytest.mark.parametrize("argv", [["basis", "--class", "0"], ["frobnicate"], ["series", "z3", "--kind", "nu"]])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == 2


def test_internal_error_exits_1(capsys, monkeypatch):
    def boom(Q):
        raise InternalError("forced disagreement")

    monkeypatch.setattr(cli.S, "series_report", lambda Q, kind: boom(Q))
    code, _, err = run(capsys, "series", "z3")
    assert code == 1 and "internal check failed" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "loopforge", "basis", "--class", "1"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and "= 1" in proc.stdout
