"""
Unit tests for exporters
"""

import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from src.exporters.csv_exporter import CSVExporter
from src.exporters.json_exporter import JSONExporter


class TestJSONExporter:
    """Test cases for JSONExporter."""

    def test_init(self, temp_output_dir):
        """Test exporter initialization."""
        exporter = JSONExporter(output_dir=temp_output_dir)
        assert exporter.output_dir == Path(temp_output_dir)
        assert exporter.indent == 2

    def test_export_single_dict(self, temp_output_dir):
        """Test exporting a single dictionary."""
        exporter = JSONExporter(output_dir=temp_output_dir)
        data = {"name": "test", "value": 123}

        file_path = exporter.export(data, "test.json")

        assert Path(file_path).exists()
        with open(file_path, 'r') as f:
            loaded = json.load(f)
            assert loaded == data

    def test_sorted_keys(self, temp_output_dir):
        """Test that key order does not depend on insertion order."""
        exporter = JSONExporter(output_dir=temp_output_dir)
        first = Path(exporter.export({"b": 1, "a": {"d": 2, "c": 3}}, "first")).read_bytes()
        second = Path(exporter.export({"a": {"c": 3, "d": 2}, "b": 1}, "second")).read_bytes()
        assert first == second
        assert first.endswith(b'\n')

    def test_export_auto_extension(self, temp_output_dir):
        """Test automatic .json extension addition."""
        exporter = JSONExporter(output_dir=temp_output_dir)
        data = {"test": "data"}

        file_path = exporter.export(data, "test")

        assert file_path.endswith('.json')
        assert Path(file_path).exists()

    def test_creates_output_dir(self, tmp_path):
        """Test that a missing output directory is created."""
        exporter = JSONExporter(output_dir=tmp_path / "nested" / "out")
        assert Path(exporter.export({"x": 1}, "x")).exists()


class TestCSVExporter:
    """Test cases for CSVExporter."""

    def test_init(self, temp_output_dir):
        """Test exporter initialization."""
        exporter = CSVExporter(output_dir=temp_output_dir)
        assert exporter.output_dir == Path(temp_output_dir)

    def test_export_list_of_dicts(self, temp_output_dir):
        """Test exporting list of dictionaries."""
        exporter = CSVExporter(output_dir=temp_output_dir)
        data = [
            {"name": "Item 1", "value": 10},
            {"name": "Item 2", "value": 20}
        ]

        file_path = exporter.export(data, "test.csv")

        assert Path(file_path).exists()
        with open(file_path, 'r', encoding='utf-8') as f:
            reader = csv.DictReader(f)
            rows = list(reader)
            assert len(rows) == 2
            assert rows[0]['name'] == 'Item 1'

    def test_column_order(self, temp_output_dir):
        """Test that explicit fieldnames fix the column order."""
        exporter = CSVExporter(output_dir=temp_output_dir)
        file_path = exporter.export([{"b": 1, "a": 2}], "ordered", fieldnames=["a", "b"])
        with open(file_path, 'r', encoding='utf-8', newline='') as f:
            assert f.readline() == 'a,b\r\n'

    def test_header_without_rows(self, temp_output_dir):
        """Test that an empty report still has its header."""
        exporter = CSVExporter(output_dir=temp_output_dir)
        file_path = exporter.export([], "empty", fieldnames=["suite", "check"])
        assert Path(file_path).read_text(encoding='utf-8').strip() == 'suite,check'

    def test_no_rows_no_columns(self, temp_output_dir):
        """Test that columns cannot be inferred from nothing."""
        exporter = CSVExporter(output_dir=temp_output_dir)
        with pytest.raises(ValueError):
            exporter.export([], "empty")

    def test_quoting(self, temp_output_dir):
        """Test that values with commas are quoted."""
        exporter = CSVExporter(output_dir=temp_output_dir)
        file_path = exporter.export([{"pair": "S->I1,S1->I1*"}], "quoted")
        with open(file_path, 'r', encoding='utf-8', newline='') as f:
            rows = list(csv.DictReader(f))
        assert rows[0]['pair'] == 'S->I1,S1->I1*'
        assert '"S->I1,S1->I1*"' in Path(file_path).read_text(encoding='utf-8')

    def test_export_auto_extension(self, temp_output_dir):
        """Test automatic .csv extension addition."""
        exporter = CSVExporter(output_dir=temp_output_dir)
        data = [{"test": "data"}]

        file_path = exporter.export(data, "test")

        assert file_path.endswith('.csv')
        assert Path(file_path).exists()

    def test_format_value(self, temp_output_dir):
        """Test value formatting."""
        exporter = CSVExporter(output_dir=temp_output_dir)

        assert exporter._format_value(None) == ''
        assert exporter._format_value(True) == 'true'
        assert exporter._format_value(False) == 'false'
        assert exporter._format_value(123) == '123'
        assert exporter._format_value(0.1) == '0.1'
        assert exporter._format_value(1 / 3) == repr(1 / 3)
        assert exporter._format_value(math.inf) == 'inf'


class TestExportValues:
    """Test cases for numpy values and atomic writes."""

    def test_json_numpy_values(self, temp_output_dir):
        """Test that numpy scalars and arrays are written as plain JSON."""
        exporter = JSONExporter(output_dir=temp_output_dir)
        data = {"count": np.int64(3), "rate": np.float64(0.25), "sizes": np.array([1, 2])}
        with open(exporter.export(data, "numpy"), 'r') as f:
            assert json.load(f) == {"count": 3, "rate": 0.25, "sizes": [1, 2]}

    def test_json_unserializable(self, temp_output_dir):
        """Test that unknown objects fail without leaving a file."""
        exporter = JSONExporter(output_dir=temp_output_dir)
        with pytest.raises(TypeError):
            exporter.export({"value": object()}, "broken")
        assert list(Path(temp_output_dir).iterdir()) == []

    def test_csv_numpy_values(self, temp_output_dir):
        """Test numpy cells in CSV rows."""
        exporter = CSVExporter(output_dir=temp_output_dir)
        assert exporter._format_value(np.int64(7)) == '7'
        assert exporter._format_value(np.bool_(True)) == 'true'
        assert exporter._format_value(np.float32(0.5)) == '0.5'

    def test_no_temporary_files(self, temp_output_dir):
        """Test that only the final file remains after export."""
        CSVExporter(output_dir=temp_output_dir).export([{"a": 1}], "rows")
        assert [p.name for p in Path(temp_output_dir).iterdir()] == ["rows.csv"]
