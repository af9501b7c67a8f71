# tests/test_main.py
import json

import pytest

from main import build_parser, main, overrides_from_args

from tests.conftest import REPO_ROOT


def json_line(out):
    return json.loads([line for line in out.splitlines() if line.startswith("{")][-1])


@pytest.fixture
def in_repo(monkeypatch, tmp_path):
    monkeypatch.chdir(REPO_ROOT)
    monkeypatch.setenv("RESULTS_DIR", str(tmp_path / "results"))
    return tmp_path


def test_overrides_from_args(tmp_path):
    args = build_parser().parse_args([
        "--root-of-unity-order", "5", "--witness-catalog-only", "--output-dir", str(tmp_path),
        "slambda", "--family", "A", "--rank", "3", "--weight", "om1",
    ])
    assert overrides_from_args(args) == {
        ("search", "max_prime_order"): 5,
        ("search", "witness_catalog_only"): True,
        ("output", "results_dir"): str(tmp_path),
    }


def test_command_is_required():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


@pytest.mark.asyncio
async def test_compute_json(in_repo, capsys):
    code = await main(["compute", "--family", "A", "--rank", "5", "--weight", "om1", "--json"])
    assert code == 0
    result = json_line(capsys.readouterr().out)
    assert result["nu"] == 1 and result["dim_v"] == 6


@pytest.mark.asyncio
async def test_compute_failure_exits_nonzero(in_repo):
    code = await main(["compute", "--family", "A", "--rank", "3", "--weight", "0"])
    assert code == 1


@pytest.mark.asyncio
async def test_slambda(in_repo, capsys):
    assert await main(["slambda", "--family", "A", "--rank", "4", "--weight", "3om1"]) == 0
    assert "s_lambda(A4, 3om1) = 11" in capsys.readouterr().out


@pytest.mark.asyncio
async def test_translate(in_repo, capsys):
    assert await main(["translate", "--rank", "3", "--weight", "om1+om3"]) == 0
    translation = json_line(capsys.readouterr().out)
    assert translation["c_weight"] == "2om1+om3"


@pytest.mark.asyncio
async def test_oracle_check(in_repo, capsys):
    assert await main(["oracle-check", "--case", "a2-nat-t3"]) == 0
    assert "a2-nat-t3: match" in capsys.readouterr().out


@pytest.mark.asyncio
async def test_verify_tables(in_repo):
    code = await main(["verify-tables", "--table", "1", "--max-rank", "3", "--chars", "0"])
    assert code == 0
