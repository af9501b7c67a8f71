# utils/reporting.py
import os
import json
from datetime import datetime
from typing import Dict, Any, List, Optional, Sequence

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

from core.models import CellReport, NuResult, OracleCaseResult
from utils.logger import get_logger

logger = get_logger(__name__)

RESULTS_FILE = "nu_results.jsonl"
CELLS_FILE = "cells.csv"
ORACLE_FILE = "oracle_results.json"
STATS_DIR = "stats"
STATS_FILE = "statistics.json"
CHART_FILE = "status_by_table.png"

CELL_COLUMNS = ["cell_id", "table", "family", "rank", "p", "weight", "status",
                "max_s", "max_u", "nu", "error"]
STATUS_COLORS = {"pass": "green", "erratum": "olive", "fail": "red", "unsupported": "grey", "error": "black"}


class Reporter:
    """Writes nu results, table verification cells and oracle outcomes under a run id."""

    def __init__(self, config: Dict[str, Any]):
        """
        Initialize reporter.

        Args:
            config: Reporter configuration ('results_dir')
        """
        self.config = config
        self.results_dir = config.get("results_dir", "data/results")

        os.makedirs(self.results_dir, exist_ok=True)

    def run_dir(self, run_id: str) -> str:
        path = os.path.join(self.results_dir, run_id)
        os.makedirs(path, exist_ok=True)
        return path

    def save_results(self, results: Sequence[NuResult], run_id: str,
                     output_path: Optional[str] = None) -> str:
        """
        Save nu results as JSON lines, one result per line with sorted keys.

        Args:
            results: Computed results
            run_id: Run identifier
            output_path: Optional specific path for output file

        Returns:
            Path to the saved file, or "" on failure
        """
        filename = output_path or os.path.join(self.run_dir(run_id), RESULTS_FILE)
        directory = os.path.dirname(filename)
        if directory:
            os.makedirs(directory, exist_ok=True)

        try:
            with open(filename, "w") as f:
                for result in results:
                    f.write(json.dumps(result.model_dump(), sort_keys=True) + "\n")

            logger.info(f"{len(results)} results saved to {filename}")
            return filename

        except Exception as e:
            logger.error(f"Error saving results: {str(e)}")
            return ""

    @staticmethod
    def cells_frame(cells: Sequence[CellReport]) -> pd.DataFrame:
        """Flatten cell reports into one row per cell, sorted by cell id."""
        rows = []
        for cell in cells:
            row = {
                "cell_id": cell.cell_id,
                "table": cell.table,
                "family": cell.family,
                "rank": cell.rank,
                "p": cell.p,
                "weight": cell.weight,
                "status": cell.status,
                "error": cell.error or "",
            }
            for check in cell.checks:
                row[check.column] = check.status
            rows.append(row)

        df = pd.DataFrame(rows, columns=CELL_COLUMNS)
        if not df.empty:
            df = df.sort_values("cell_id").reset_index(drop=True)
        return df

    def save_cells(self, cells: Sequence[CellReport], run_id: str) -> str:
        """
        Save table verification cells as CSV.

        Args:
            cells: Cell reports
            run_id: Run identifier

        Returns:
            Path to the CSV file, or "" on failure
        """
        filename = os.path.join(self.run_dir(run_id), CELLS_FILE)
        try:
            self.cells_frame(cells).to_csv(filename, index=False)
            logger.info(f"{len(cells)} cells saved to {filename}")
            return filename
        except Exception as e:
            logger.error(f"Error saving cells: {str(e)}")
            return ""

    def save_oracle_results(self, results: Sequence[OracleCaseResult], run_id: str) -> str:
        """Save oracle cross-check outcomes as a JSON list."""
        filename = os.path.join(self.run_dir(run_id), ORACLE_FILE)
        try:
            with open(filename, "w") as f:
                json.dump([r.model_dump() for r in results], f, indent=2, sort_keys=True)
            logger.info(f"Oracle results saved to {filename}")
            return filename
        except Exception as e:
            logger.error(f"Error saving oracle results: {str(e)}")
            return ""

    def generate_statistics(self, cells: Sequence[CellReport], run_id: str,
                            output_dir: Optional[str] = None) -> Dict[str, Any]:
        """
        Generate statistics and a status chart for a verification run.

        Args:
            cells: Cell reports
            run_id: Run identifier
            output_dir: Directory to save statistics and chart

        Returns:
            Dictionary with statistics
        """
        if not cells:
            logger.warning("No cells to generate statistics")
            return {}

        output_dir = output_dir or os.path.join(self.run_dir(run_id), STATS_DIR)
        os.makedirs(output_dir, exist_ok=True)

        try:
            df = self.cells_frame(cells)
            total = len(df)
            counts = df["status"].value_counts().to_dict()

            stats = {
                "run_id": run_id,
                "timestamp": datetime.now().isoformat(),
                "total_cells": total,
                "pass_count": int(counts.get("pass", 0)),
                "erratum_count": int(counts.get("erratum", 0)),
                "fail_count": int(counts.get("fail", 0)),
                "unsupported_count": int(counts.get("unsupported", 0)),
                "by_table": {
                    str(table): {str(k): int(v) for k, v in group["status"].value_counts().items()}
                    for table, group in df.groupby("table")
                },
            }
            # Cells matching a corrected entry count as passed
            passed = stats["pass_count"] + stats["erratum_count"]
            checked = passed + stats["fail_count"]
            stats["pass_rate"] = (passed / checked) * 100 if checked > 0 else 0

            by_table = df.groupby(["table", "status"]).size().unstack(fill_value=0)
            plt.figure(figsize=(10, 6))
            by_table.plot(kind="bar", stacked=True, ax=plt.gca(),
                          color=[STATUS_COLORS.get(s, "blue") for s in by_table.columns])
            plt.title("Table Verification Status")
            plt.xlabel("Table")
            plt.ylabel("Cells")
            plt.tight_layout()
            plt.savefig(os.path.join(output_dir, CHART_FILE))
            plt.close()

            with open(os.path.join(output_dir, STATS_FILE), "w") as f:
                json.dump(stats, f, indent=2)

            logger.info(f"Statistics saved to {output_dir}")
            return stats

        except Exception as e:
            logger.error(f"Error generating statistics: {str(e)}")
            return {}

    def generate_summary_report(self, run_id: str) -> Dict[str, Any]:
        """
        Summarize the files written for a run.

        Args:
            run_id: Run identifier

        Returns:
            Dictionary with summary information
        """
        run_dir = os.path.join(self.results_dir, run_id)
        if not os.path.exists(run_dir):
            logger.error(f"No data found for run ID: {run_id}")
            return {"error": "Run ID not found"}

        stats_file = os.path.join(run_dir, STATS_DIR, STATS_FILE)
        stats: Dict[str, Any] = {}
        if os.path.exists(stats_file):
            with open(stats_file, "r") as f:
                stats = json.load(f)

        results_file = os.path.join(run_dir, RESULTS_FILE)
        result_count = 0
        if os.path.exists(results_file):
            with open(results_file, "r") as f:
                result_count = sum(1 for line in f if line.strip())

        summary = {
            "run_id": run_id,
            "timestamp": datetime.now().isoformat(),
            "results": result_count,
            "cells": {
                "total": stats.get("total_cells", 0),
                "pass": stats.get("pass_count", 0),
                "erratum": stats.get("erratum_count", 0),
                "fail": stats.get("fail_count", 0),
                "unsupported": stats.get("unsupported_count", 0),
            },
            "file_paths": {
                "results_file": results_file,
                "cells_file": os.path.join(run_dir, CELLS_FILE),
                "oracle_file": os.path.join(run_dir, ORACLE_FILE),
                "statistics_directory": os.path.join(run_dir, STATS_DIR),
            },
        }

        with open(os.path.join(run_dir, "summary.json"), "w") as f:
            json.dump(summary, f, indent=2)

        logger.info(f"Summary report generated for run ID: {run_id}")
        return summary
