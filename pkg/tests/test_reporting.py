# tests/test_reporting.py
import json
import os

import pytest

from core.models import CellReport, ColumnCheck, NuResult, OracleCaseResult
from utils.file_utils import FileUtils
from utils.reporting import CELL_COLUMNS, Reporter


@pytest.fixture
def reporter(tmp_path):
    return Reporter({"results_dir": str(tmp_path / "results")})


def make_cell(cell_id, table, status):
    passed = status in ("pass", "erratum")
    checks = [ColumnCheck(column="nu", expected=2, computed=2 if passed else 3, status="pass" if passed else "fail",
                          printed=3 if status == "erratum" else None)]
    return CellReport(cell_id=cell_id, table=table, family="C", rank=3, p=0, weight="om1",
                      status=status, checks=checks if status != "unsupported" else [])


@pytest.fixture
def cells():
    return [
        make_cell("T2-C3-om1-p0", 2, "pass"),
        make_cell("T1-A3-om1-p0", 1, "fail"),
        make_cell("T2-C3-om2-p0", 2, "unsupported"),
        make_cell("T3-B5-2om5-p0", 3, "erratum"),
    ]


def test_save_results_writes_sorted_json_lines(reporter):
    results = [NuResult(family="A", rank=5, weight=[1, 0, 0, 0, 0], weight_label="om1", p=0,
                        dim_v=6, max_s=5, max_u=5, nu=1)]
    path = reporter.save_results(results, "run1")
    assert path.endswith(os.path.join("run1", "nu_results.jsonl"))
    with open(path) as f:
        lines = f.read().splitlines()
    assert len(lines) == 1
    record = json.loads(lines[0])
    assert record["nu"] == 1
    assert list(record) == sorted(record)


def test_cells_frame_sorted(cells):
    df = Reporter.cells_frame(cells)
    assert list(df.columns) == CELL_COLUMNS
    assert list(df["cell_id"]) == sorted(c.cell_id for c in cells)
    assert df.loc[df["cell_id"] == "T1-A3-om1-p0", "nu"].item() == "fail"


def test_save_cells_round_trip(reporter, cells):
    path = reporter.save_cells(cells, "run1")
    df = FileUtils.load_cells_csv(path)
    assert len(df) == 4
    assert set(df["status"]) == {"pass", "erratum", "fail", "unsupported"}


def test_save_oracle_results(reporter):
    result = OracleCaseResult(case_id="t", family="A", rank=2, construction="natural", p=0,
                              element="root:alpha_1", status="match",
                              expected={"fixed": 2}, observed={"fixed": 2})
    path = reporter.save_oracle_results([result], "run1")
    with open(path) as f:
        assert json.load(f)[0]["status"] == "match"


def test_generate_statistics(reporter, cells, mocker):
    savefig = mocker.patch("utils.reporting.plt.savefig")
    stats = reporter.generate_statistics(cells, "run1")
    savefig.assert_called_once()
    assert stats["total_cells"] == 4
    assert stats["pass_count"] == 1 and stats["fail_count"] == 1 and stats["unsupported_count"] == 1
    assert stats["erratum_count"] == 1
    assert stats["pass_rate"] == pytest.approx(200 / 3)
    assert stats["by_table"]["3"] == {"erratum": 1}
    assert stats["by_table"]["2"] == {"pass": 1, "unsupported": 1}
    assert os.path.exists(os.path.join(reporter.results_dir, "run1", "stats", "statistics.json"))


def test_generate_statistics_without_cells(reporter):
    assert reporter.generate_statistics([], "run1") == {}


def test_summary_report(reporter, cells, mocker):
    mocker.patch("utils.reporting.plt.savefig")
    reporter.generate_statistics(cells, "run1")
    reporter.save_results([], "run1")
    summary = reporter.generate_summary_report("run1")
    assert summary["cells"] == {"total": 4, "pass": 1, "erratum": 1, "fail": 1, "unsupported": 1}
    assert summary["results"] == 0


def test_summary_report_for_missing_run(reporter):
    assert reporter.generate_summary_report("nope") == {"error": "Run ID not found"}
