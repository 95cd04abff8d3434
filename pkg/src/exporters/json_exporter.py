"""
JSON summary exporter
"""

import json
from pathlib import Path
from typing import Any, Union

import numpy as np

from ..core.base_exporter import BaseExporter


def _to_builtin(value: Any) -> Any:
    """json ``default`` hook for numpy scalars, arrays and paths."""
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


class JSONExporter(BaseExporter):
    """
    Exporter for run summaries.

    Keys are sorted and indentation fixed, so equal data always produces
    byte-identical files.
    """

    extension = '.json'

    def __init__(self, output_dir: Union[str, Path] = "output", indent: int = 2):
        """
        Initialize JSON exporter.

        Args:
            output_dir: Output directory
            indent: JSON indentation level
        """
        super().__init__(output_dir)
        self.indent = indent

    def export(self, data: Any, filename: str, **kwargs) -> str:
        """
        Export data to a JSON file.

        Args:
            data: JSON-serializable data (numpy scalars and arrays allowed)
            filename: Output filename (.json is added if missing)

        Returns:
            Path to exported file
        """
        file_path = self._get_file_path(filename)
        try:
            with self._open_atomic(file_path) as f:
                json.dump(data, f, indent=self.indent, sort_keys=True, default=_to_builtin)
                f.write('\n')
        except (OSError, TypeError, ValueError) as e:
            self.logger.error(f"Failed to export JSON to {file_path}: {e}")
            raise

        self.logger.info(f"Exported {file_path}")
        return str(file_path)
