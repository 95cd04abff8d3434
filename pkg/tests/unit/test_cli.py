"""
Unit tests for the command-line entry point
"""

import csv
import json

import pytest

import main as cli
from main import (
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_RUNTIME_ERROR,
    EXIT_VERIFICATION_FAILED,
    REPORT_FIELDS,
    main,
    parse_pair,
)
from src.config import settings as settings_module
from src.core.base_suite import BaseSuite
from src.core.exceptions import ConfigurationError


def read_rows(path):
    with open(path, 'r', encoding='utf-8', newline='') as f:
        return list(csv.DictReader(f))


@pytest.fixture
def out_dir(tmp_path):
    return tmp_path / 'out'


class TestSimulateCommand:
    """Test cases for the simulate command."""

    def test_bivariate_outputs(self, bivariate_config_data, write_config, out_dir):
        """Test trajectory files and summary for the bivariate model."""
        config = write_config(bivariate_config_data)
        assert main(['simulate', '--config', config, '--out', str(out_dir)]) == EXIT_OK

        trajectories = sorted(out_dir.glob('bivariate_death_trajectory_*.csv'))
        assert [p.name for p in trajectories] == [
            'bivariate_death_trajectory_0000.csv',
            'bivariate_death_trajectory_0001.csv',
            'bivariate_death_trajectory_0002.csv',
        ]
        for path in trajectories:
            rows = read_rows(path)
            assert rows[0]['event_type'] == 'init'
            dead = 0
            for row in rows:
                dead += int(row['k1']) + int(row['k2'])
                assert int(row['Y1']) + int(row['Y2']) + dead == 10

        summary = json.loads((out_dir / 'bivariate_death_summary.json').read_text(encoding='utf-8'))
        assert summary['schema_version'] == 1
        assert summary['seed'] == 11
        assert len(summary['replicates']) == 3
        assert all(item['mass_conserved'] for item in summary['replicates'])
        for item in summary['replicates']:
            assert item['absorbed']
            assert sum(item['transition_counts'].values()) == 10

    def test_zero_horizon(self, bivariate_config_data, write_config, out_dir):
        """Test that t_end = 0 writes only the initial row."""
        config = write_config(bivariate_config_data)
        assert main(['simulate', '--config', config, '--out', str(out_dir), '--t-end', '0']) == EXIT_OK
        rows = read_rows(out_dir / 'bivariate_death_trajectory_0000.csv')
        assert len(rows) == 1
        assert rows[0]['Y1'] == '5' and rows[0]['Y2'] == '5'

    def test_byte_identical_reruns(self, bivariate_config_data, write_config, tmp_path):
        """Test that the same seed reproduces the files exactly."""
        config = write_config(bivariate_config_data)
        for name in ('a', 'b'):
            assert main(['simulate', '--config', config, '--out', str(tmp_path / name)]) == EXIT_OK
        for path in sorted((tmp_path / 'a').iterdir()):
            assert path.read_bytes() == (tmp_path / 'b' / path.name).read_bytes()

    def test_sir_population_conserved(self, sir_config_data, write_config, out_dir):
        """Test that every SIR row sums to P."""
        config = write_config(sir_config_data)
        assert main(['simulate', '--config', config, '--out', str(out_dir), '--replicates', '1']) == EXIT_OK
        rows = read_rows(out_dir / 'multistrain_sir_trajectory_0000.csv')
        compartments = ('S', 'I1', 'I2', 'S1', 'S2', 'I1*', 'I2*', 'R')
        assert all(sum(int(row[c]) for c in compartments) == 200 for row in rows)
        assert not (out_dir / 'multistrain_sir_trajectory_0001.csv').exists()

    def test_seed_override(self, bivariate_config_data, write_config, tmp_path):
        """Test that --seed supplies a missing seed."""
        del bivariate_config_data['model']['seed']
        config = write_config(bivariate_config_data)
        out = tmp_path / 'seeded'
        assert main(['simulate', '--config', config, '--out', str(out), '--seed', '4']) == EXIT_OK
        summary = json.loads((out / 'bivariate_death_summary.json').read_text(encoding='utf-8'))
        assert summary['seed'] == 4


class TestConfigurationErrors:
    """Test cases for exit status 2."""

    def test_missing_seed(self, bivariate_config_data, write_config, out_dir):
        """Test a config without seed."""
        del bivariate_config_data['model']['seed']
        config = write_config(bivariate_config_data)
        assert main(['simulate', '--config', config, '--out', str(out_dir)]) == EXIT_CONFIG_ERROR

    def test_unknown_model(self, bivariate_config_data, write_config, out_dir):
        """Test a config naming an unknown model."""
        bivariate_config_data['model']['name'] = 'trivariate'
        config = write_config(bivariate_config_data)
        assert main(['simulate', '--config', config, '--out', str(out_dir)]) == EXIT_CONFIG_ERROR

    def test_missing_file(self, tmp_path):
        """Test a config path that does not exist."""
        assert main(['simulate', '--config', str(tmp_path / 'none.yaml')]) == EXIT_CONFIG_ERROR

    @pytest.mark.parametrize('section,value', [
        ('model', 'bivariate_death'),
        ('params', [0.5]),
        ('noise', 0.2),
    ])
    def test_section_not_mapping(self, bivariate_config_data, write_config, out_dir, section, value):
        """Test that a scalar or list section exits with status 2."""
        bivariate_config_data[section] = value
        config = write_config(bivariate_config_data)
        assert main(['simulate', '--config', config, '--out', str(out_dir)]) == EXIT_CONFIG_ERROR
        assert not out_dir.exists()

    def test_no_command(self):
        """Test that no subcommand prints help."""
        assert main([]) == EXIT_CONFIG_ERROR

    def test_oracle_too_few_replicates(self, bivariate_config_data, write_config, out_dir):
        """Test the oracle replicate floor."""
        config = write_config(bivariate_config_data)
        code = main(['verify', '--config', config, '--suite', 'oracle', '--replicates', '10',
                     '--out', str(out_dir)])
        assert code == EXIT_CONFIG_ERROR

    def test_unknown_transition(self, bivariate_config_data, write_config, out_dir):
        """Test an estimate pair outside the model."""
        config = write_config(bivariate_config_data)
        code = main(['estimate', '--config', config, '--pair', 'S->I1,Y2->D', '--out', str(out_dir)])
        assert code == EXIT_CONFIG_ERROR

    def test_nonpositive_step(self, bivariate_config_data, write_config, out_dir):
        """Test that --h must be positive."""
        config = write_config(bivariate_config_data)
        code = main(['estimate', '--config', config, '--pair', 'Y1->D,Y2->D', '--h', '0',
                     '--out', str(out_dir)])
        assert code == EXIT_CONFIG_ERROR


class TestVerifyCommand:
    """Test cases for the verify command."""

    def test_bounds_report(self, bivariate_config_data, write_config, out_dir):
        """Test the bounds suite on the configured model."""
        config = write_config(bivariate_config_data)
        assert main(['verify', '--config', config, '--suite', 'bounds', '--out', str(out_dir)]) == EXIT_OK

        path = out_dir / 'verify_bounds.csv'
        with open(path, 'r', encoding='utf-8', newline='') as f:
            header = next(csv.reader(f))
        assert header == REPORT_FIELDS
        rows = read_rows(path)
        assert rows and all(row['passed'] == 'true' for row in rows)
        assert all(row['suite'] == 'bounds' for row in rows)

    def test_failed_check_exit_status(self, bivariate_config_data, write_config, out_dir,
                                      monkeypatch, caplog):
        """Test that one failing row gives status 1 and the full report is still written."""
        class OneFailureSuite(BaseSuite):
            name = 'bounds'

            def run(self):
                self.check_at_most('rate_bound_ratio', 'model=first', 0.5, 1.0)
                self.check_at_most('rate_bound', 'model=second', 2.0, 1.0)
                self.check_at_least('p3_finite', 'model=third', 1.0, 1.0)
                return self.results

        monkeypatch.setattr(cli, 'build_suite', lambda *args, **kwargs: OneFailureSuite())
        config = write_config(bivariate_config_data)
        code = main(['verify', '--config', config, '--suite', 'bounds', '--out', str(out_dir)])
        assert code == EXIT_VERIFICATION_FAILED

        rows = read_rows(out_dir / 'verify_bounds.csv')
        assert [row['check'] for row in rows] == ['rate_bound_ratio', 'rate_bound', 'p3_finite']
        assert [row['passed'] for row in rows] == ['true', 'false', 'true']
        assert rows[1]['observed'] == '2.0'
        assert rows[1]['expected'] == '1.0'
        assert 'rate_bound [model=second]' in caplog.text


class TestEstimateCommand:
    """Test cases for the estimate command."""

    def test_estimate_row(self, bivariate_config_data, write_config, out_dir, capsys):
        """Test that an estimate is written and printed."""
        config = write_config(bivariate_config_data)
        code = main(['estimate', '--config', config, '--pair', 'Y1->D,Y2->D', '--h', '0.01',
                     '--replicates', '1000', '--out', str(out_dir)])
        assert code == EXIT_OK

        rows = read_rows(out_dir / 'estimate_bivariate_death.csv')
        assert len(rows) == 1
        assert rows[0]['pair'] == 'Y1->D,Y2->D'
        assert rows[0]['replicates'] == '1000'
        assert float(rows[0]['closed_form']) > 0
        assert 'closed form' in capsys.readouterr().out


class TestParsePair:
    """Test cases for parse_pair."""

    def test_two_transitions(self):
        """Test a well-formed pair."""
        first, second = parse_pair('S->I1,S1->I1*')
        assert (first.source, first.target) == ('S', 'I1')
        assert (second.source, second.target) == ('S1', 'I1*')

    @pytest.mark.parametrize('text', ['S->I1', 'S->I1,S1->I1*,R->S', ''])
    def test_wrong_arity(self, text):
        """Test that anything but two transitions is rejected."""
        with pytest.raises(ConfigurationError):
            parse_pair(text)


class TestRuntimeErrors:
    """Test cases for exit status 3."""

    def test_event_budget(self, sir_config_data, write_config, out_dir, monkeypatch):
        """Test that exceeding the event budget is a runtime error."""
        monkeypatch.setenv('EVENT_BUDGET', '1')
        monkeypatch.setattr(settings_module, '_settings', None)
        config = write_config(sir_config_data)
        assert main(['simulate', '--config', config, '--out', str(out_dir)]) == EXIT_RUNTIME_ERROR
