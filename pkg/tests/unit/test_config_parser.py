"""
Unit tests for RunConfigParser
"""

from pathlib import Path

import pytest

from src.core.exceptions import ConfigurationError
from src.models.bivariate_death import BivariateDeathParams
from src.models.multistrain_sir import SirParams
from src.parsers.config_parser import RunConfigParser


class TestRunConfigParser:
    """Test cases for RunConfigParser."""

    def test_parse_sir(self, sir_config_data):
        """Test parsing the SIR document."""
        config = RunConfigParser().parse(sir_config_data)
        assert config.model == 'multistrain_sir'
        assert isinstance(config.params, SirParams)
        assert config.params.tau == 0.2
        assert config.init.as_dict()['S'] == 190
        assert config.seed == 7
        assert config.replicates == 2
        assert config.build_system().name == 'multistrain_sir'

    def test_parse_bivariate(self, bivariate_config_data):
        """Test parsing the bivariate death document."""
        config = RunConfigParser(output_dir='runs').parse(bivariate_config_data)
        assert config.params == BivariateDeathParams(5, 5, 0.5, 0.5)
        assert config.init.as_dict() == {'Y1': 5, 'Y2': 5}
        assert config.output_dir == Path('runs')

    def test_overrides(self, sir_config_data):
        """Test that command-line values win over the file."""
        config = RunConfigParser().parse(sir_config_data, seed=99, replicates=5, t_end=0.0, output_dir='x')
        assert (config.seed, config.replicates, config.t_end) == (99, 5, 0.0)
        assert config.output_dir == Path('x')

    def test_with_overrides(self, sir_config_data):
        """Test copying a parsed config with new values."""
        config = RunConfigParser().parse(sir_config_data).with_overrides(seed=3)
        assert config.seed == 3
        assert config.replicates == 2

    def test_seed_mandatory(self, sir_config_data):
        """Test that a run without seed is rejected."""
        del sir_config_data['model']['seed']
        with pytest.raises(ConfigurationError):
            RunConfigParser().parse(sir_config_data)
        assert RunConfigParser().parse(sir_config_data, seed=1).seed == 1

    def test_noiseless_sir(self, sir_config_data):
        """Test tau: null for the noiseless baseline."""
        sir_config_data['noise']['tau'] = None
        sir_config_data['params']['gamma'] = 0.5
        config = RunConfigParser().parse(sir_config_data)
        assert config.params.tau is None
        assert config.build_system().cojump_families == ()

    def test_sir_noise_required(self, sir_config_data):
        """Test that SIR must state its noise explicitly."""
        del sir_config_data['noise']
        with pytest.raises(ConfigurationError):
            RunConfigParser().parse(sir_config_data)

    def test_bivariate_needs_noise(self, bivariate_config_data):
        """Test that the bivariate model rejects tau: null."""
        bivariate_config_data['noise']['tau'] = None
        with pytest.raises(ConfigurationError):
            RunConfigParser().parse(bivariate_config_data)

    @pytest.mark.parametrize('section,key,value', [
        ('params', 'kappa', 1.0),
        ('model', 'colour', 'red'),
        ('init', 'X', 3),
    ])
    def test_unknown_keys(self, sir_config_data, section, key, value):
        """Test that unknown keys are errors."""
        sir_config_data[section][key] = value
        with pytest.raises(ConfigurationError):
            RunConfigParser().parse(sir_config_data)

    def test_unknown_section(self, sir_config_data):
        """Test that unknown sections are errors."""
        sir_config_data['plots'] = {}
        with pytest.raises(ConfigurationError):
            RunConfigParser().parse(sir_config_data)

    def test_unknown_model(self, sir_config_data):
        """Test rejecting models that do not exist."""
        sir_config_data['model']['name'] = 'seir'
        with pytest.raises(ConfigurationError):
            RunConfigParser().parse(sir_config_data)

    def test_population_mismatch(self, sir_config_data):
        """Test that init must sum to P."""
        sir_config_data['init']['S'] = 100
        with pytest.raises(ConfigurationError):
            RunConfigParser().parse(sir_config_data)

    @pytest.mark.parametrize('seed', [True, 1.5, -3, 'seven'])
    def test_invalid_seed(self, sir_config_data, seed):
        """Test that seeds must be nonnegative integers."""
        sir_config_data['model']['seed'] = seed
        with pytest.raises(ConfigurationError):
            RunConfigParser().parse(sir_config_data)

    def test_negative_horizon(self, bivariate_config_data):
        """Test rejecting negative t_end."""
        bivariate_config_data['model']['t_end'] = -1
        with pytest.raises(ConfigurationError):
            RunConfigParser().parse(bivariate_config_data)

    def test_load_yaml(self, sir_config_data, write_config):
        """Test loading a YAML file."""
        config = RunConfigParser().load(write_config(sir_config_data))
        assert config.init.as_dict()['I1'] == 5

    def test_load_invalid_yaml(self, tmp_path):
        """Test that malformed YAML is a configuration error."""
        path = tmp_path / 'broken.yaml'
        path.write_text('model: [unclosed\n', encoding='utf-8')
        with pytest.raises(ConfigurationError):
            RunConfigParser().load(path)

    def test_load_missing_file(self, tmp_path):
        """Test that a missing file is a configuration error."""
        with pytest.raises(ConfigurationError):
            RunConfigParser().load(tmp_path / 'absent.yaml')

    def test_document_must_be_mapping(self):
        """Test rejecting a non-mapping document."""
        with pytest.raises(ConfigurationError):
            RunConfigParser().parse(['model'])

    @pytest.mark.parametrize('section,value', [
        ('model', 'bivariate_death'),
        ('params', [0.5]),
        ('noise', 0.2),
        ('init', 'y1_0=5'),
    ])
    def test_section_must_be_mapping(self, bivariate_config_data, section, value):
        """Test that scalar or list sections are configuration errors."""
        bivariate_config_data[section] = value
        with pytest.raises(ConfigurationError, match=section):
            RunConfigParser().parse(bivariate_config_data)
