# utils/file_utils.py
import os
from typing import Any, List, Optional

import pandas as pd
import yaml

from utils.logger import get_logger

logger = get_logger(__name__)


class FileUtils:
    """Utilities for file operations."""

    @staticmethod
    def load_yaml(file_path: str) -> Optional[Any]:
        """
        Load YAML data from a file.

        Args:
            file_path: Path to YAML file

        Returns:
            Loaded data, or None if the file is missing or unreadable
        """
        try:
            if not os.path.exists(file_path):
                logger.error(f"YAML file not found: {file_path}")
                return None

            with open(file_path, "r") as f:
                return yaml.safe_load(f)

        except Exception as e:
            logger.error(f"Error loading YAML file {file_path}: {str(e)}")
            return None

    @staticmethod
    def load_case_lines(file_path: str) -> List[str]:
        """
        Load the non-empty, non-comment lines of a case list.

        Args:
            file_path: Path to the case file

        Returns:
            Lines with trailing comments stripped
        """
        if not os.path.exists(file_path):
            logger.error(f"Case file not found: {file_path}")
            return []

        lines = []
        with open(file_path, "r") as f:
            for raw in f:
                line = raw.split("#", 1)[0].strip()
                if line:
                    lines.append(line)

        logger.info(f"Loaded {len(lines)} cases from {file_path}")
        return lines

    @staticmethod
    def load_cells_csv(file_path: str) -> pd.DataFrame:
        """
        Load a cell report written by the reporter.

        Args:
            file_path: Path to CSV file

        Returns:
            DataFrame (empty if the file is missing)
        """
        if not os.path.exists(file_path):
            logger.error(f"CSV file not found: {file_path}")
            return pd.DataFrame()

        df = pd.read_csv(file_path, dtype={"cell_id": str, "weight": str})
        logger.info(f"Loaded {len(df)} cells from {file_path}")
        return df

