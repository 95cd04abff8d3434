"""
CSV exporter for trajectories and reports
"""

import csv
import math
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence, Union

import numpy as np

from ..core.base_exporter import BaseExporter


class CSVExporter(BaseExporter):
    """
    Exporter for CSV tables.

    Columns follow an explicit order, the header row is always written and
    quoting is left to the csv module (RFC 4180 style, CRLF rows).
    """

    extension = '.csv'

    def __init__(self, output_dir: Union[str, Path] = "output"):
        """
        Initialize CSV exporter.

        Args:
            output_dir: Output directory
        """
        super().__init__(output_dir)

    def export(
        self,
        data: Iterable[Dict[str, Any]],
        filename: str,
        fieldnames: Optional[Sequence[str]] = None,
        **kwargs
    ) -> str:
        """
        Export rows to a CSV file.

        Args:
            data: Rows as dicts (a single dict is one row)
            filename: Output filename (.csv is added if missing)
            fieldnames: Column order; defaults to the keys of the first row

        Returns:
            Path to exported file

        Raises:
            ValueError: If there are no rows and no fieldnames
        """
        file_path = self._get_file_path(filename)

        if isinstance(data, dict):
            data = [data]
        rows = list(data)

        if fieldnames is None:
            if not rows:
                raise ValueError(f"Cannot infer columns for {file_path.name} from zero rows")
            fieldnames = list(rows[0].keys())
        fieldnames = list(fieldnames)

        try:
            with self._open_atomic(file_path, newline='') as f:
                writer = csv.DictWriter(f, fieldnames=fieldnames, extrasaction='raise')
                writer.writeheader()
                for item in rows:
                    writer.writerow({key: self._format_value(item.get(key)) for key in fieldnames})
        except (OSError, ValueError) as e:
            self.logger.error(f"Failed to export CSV to {file_path}: {e}")
            raise

        self.logger.info(f"Exported {len(rows)} rows to {file_path}")
        return str(file_path)

    def _format_value(self, value: Any) -> str:
        """
        Format one cell.

        Floats use repr so they round-trip exactly; booleans are lowercase.
        """
        if value is None:
            return ''
        if isinstance(value, (bool, np.bool_)):
            return 'true' if value else 'false'
        if isinstance(value, np.integer):
            return str(int(value))
        if isinstance(value, (float, np.floating)):
            value = float(value)
            return repr(value) if math.isfinite(value) else str(value)
        return str(value)
