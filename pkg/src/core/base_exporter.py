"""
Base exporter class for run artifacts
"""

from abc import ABC, abstractmethod
from contextlib import contextmanager
import logging
import os
from pathlib import Path
import tempfile
from typing import Any, IO, Iterator, Union


class BaseExporter(ABC):
    """
    Abstract base class for artifact exporters.

    Files are written to a temporary sibling and renamed into place, so an
    interrupted run never leaves a truncated trajectory or report behind.
    """

    extension: str = ''

    def __init__(self, output_dir: Union[str, Path] = "output"):
        """
        Initialize the base exporter.

        Args:
            output_dir: Directory for output files
        """
        self.output_dir = Path(output_dir)
        self.logger = logging.getLogger(self.__class__.__name__)
        self._ensure_output_dir()

    def _ensure_output_dir(self) -> None:
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            self.logger.error(f"Failed to create output directory {self.output_dir}: {e}")
            raise

    @abstractmethod
    def export(self, data: Any, filename: str, **kwargs) -> str:
        """
        Export data to file. Must be implemented by subclasses.

        Args:
            data: Data to export
            filename: Output filename
            **kwargs: Exporter-specific parameters

        Returns:
            Path to exported file
        """
        pass

    def _get_file_path(self, filename: str) -> Path:
        """Output path for ``filename``, with the exporter's extension appended if missing."""
        if self.extension and not filename.endswith(self.extension):
            filename = f"{filename}{self.extension}"
        return self.output_dir / filename

    @contextmanager
    def _open_atomic(self, file_path: Path, newline: Union[str, None] = None) -> Iterator[IO[str]]:
        """Open a temporary file next to ``file_path`` and move it over on success."""
        fd, temp_name = tempfile.mkstemp(dir=file_path.parent, prefix=f".{file_path.name}.", suffix='.tmp')
        try:
            with os.fdopen(fd, 'w', encoding='utf-8', newline=newline) as f:
                yield f
            os.replace(temp_name, file_path)
        except BaseException:
            if os.path.exists(temp_name):
                os.unlink(temp_name)
            raise
