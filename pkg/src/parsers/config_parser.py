"""
YAML model run configuration
"""

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from ..core.base_parser import BaseParser
from ..core.exceptions import ConfigurationError
from ..core.system import StateVector, SystemSpec
from ..models import bivariate_death, multistrain_sir
from ..models.bivariate_death import BivariateDeathParams, bivariate_death_system
from ..models.multistrain_sir import SirParams, multistrain_sir_system

MODELS = (bivariate_death.NAME, multistrain_sir.NAME)

SECTIONS = ('model', 'params', 'init', 'noise')
MODEL_FIELDS = ('name', 'seed', 't_end', 'replicates')
SIR_PARAM_FIELDS = ('P', 'beta', 'omega', 'alpha', 'm', 'r', 'gamma')
SIR_REQUIRED = ('P', 'beta', 'omega', 'alpha', 'm', 'r')
BIVARIATE_PARAM_FIELDS = ('delta',)
BIVARIATE_INIT_FIELDS = ('y1_0', 'y2_0')

ModelParams = Union[SirParams, BivariateDeathParams]


@dataclass(frozen=True)
class RunConfig:
    """A fully validated, file-addressed simulation run."""

    model: str
    params: ModelParams
    init: StateVector
    seed: int
    t_end: float
    replicates: int
    output_dir: Path

    def build_system(self) -> SystemSpec:
        if isinstance(self.params, SirParams):
            return multistrain_sir_system(self.params)
        return bivariate_death_system(self.params)

    def with_overrides(
        self,
        seed: Optional[int] = None,
        replicates: Optional[int] = None,
        output_dir: Optional[Union[str, Path]] = None,
        t_end: Optional[float] = None
    ) -> 'RunConfig':
        """Copy with command-line overrides applied (None keeps the file value)."""
        changes: Dict[str, Any] = {}
        if seed is not None:
            changes['seed'] = _integer(seed, 'model.seed', minimum=0)
        if replicates is not None:
            changes['replicates'] = _integer(replicates, 'model.replicates', minimum=1)
        if output_dir is not None:
            changes['output_dir'] = Path(output_dir)
        if t_end is not None:
            changes['t_end'] = _horizon(t_end)
        return replace(self, **changes)


def _integer(value: Any, where: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{where} must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigurationError(f"{where} must be >= {minimum}, got {value}")
    return value


def _real(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{where} must be a number, got {value!r}")
    value = float(value)
    if math.isnan(value):
        raise ConfigurationError(f"{where} must not be NaN")
    return value


def _horizon(value: Any) -> float:
    t_end = _real(value, 'model.t_end')
    if t_end < 0:
        raise ConfigurationError(f"model.t_end must be nonnegative, got {t_end}")
    return t_end


class RunConfigParser(BaseParser):
    """
    Parser for run configuration documents.

    Document layout:

        model:  {name, seed, t_end, replicates}
        params: model parameters (SIR: P, beta, omega, alpha, m, r, gamma; bivariate: delta)
        init:   compartment counts (SIR) or y1_0, y2_0 (bivariate)
        noise:  {tau}  (SIR accepts tau: null for the noiseless model)
    """

    def __init__(self, output_dir: Union[str, Path] = 'output'):
        """
        Initialize the parser.

        Args:
            output_dir: Output directory when the command line gives none
        """
        super().__init__()
        self.output_dir = Path(output_dir)

    def load(self, path: Union[str, Path], **overrides) -> RunConfig:
        """
        Read and parse a YAML configuration file.

        Args:
            path: Config file path
            **overrides: seed, replicates, output_dir, t_end

        Returns:
            RunConfig
        """
        path = Path(path)
        try:
            with open(path, 'r', encoding='utf-8') as f:
                document = yaml.safe_load(f)
        except OSError as e:
            raise ConfigurationError(f"Cannot read config {path}: {e}") from e
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Config {path} is not valid YAML: {e}") from e
        self.logger.debug(f"Loaded config from {path}")
        return self.parse(document, **overrides)

    def parse(self, data: Any, **overrides) -> RunConfig:
        """
        Parse a configuration document.

        Args:
            data: Mapping with sections model, params, init, noise
            **overrides: seed, replicates, output_dir, t_end

        Returns:
            RunConfig

        Raises:
            ConfigurationError: On missing, unknown or invalid fields
        """
        if not isinstance(data, Mapping):
            raise ConfigurationError("Config document must be a mapping of sections")
        document = self.normalize(data)
        self.validate(document, 'document', required_fields=('model', 'params', 'init'),
                      allowed_fields=SECTIONS)

        model = self.normalize(document['model'] or {}, 'model')
        self.validate(model, 'model', required_fields=('name',), allowed_fields=MODEL_FIELDS)
        name = model['name']
        if name not in MODELS:
            raise ConfigurationError(f"Unknown model {name!r}; expected one of {list(MODELS)}")

        seed = overrides.get('seed')
        if seed is None:
            if 'seed' not in model:
                raise ConfigurationError("model.seed is mandatory (set it in the file or pass --seed)")
            seed = model['seed']
        t_end = overrides.get('t_end')
        if t_end is None:
            if 't_end' not in model:
                raise ConfigurationError("model.t_end is mandatory (set it in the file or pass --t-end)")
            t_end = model['t_end']
        replicates = overrides.get('replicates')
        if replicates is None:
            replicates = model.get('replicates', 1)

        noise = self.normalize(document.get('noise') or {}, 'noise')
        self.validate(noise, 'noise', allowed_fields=('tau',))

        if name == multistrain_sir.NAME:
            params, init = self._parse_sir(document, noise)
        else:
            params, init = self._parse_bivariate(document, noise)

        config = RunConfig(
            model=name,
            params=params,
            init=init,
            seed=_integer(seed, 'model.seed', minimum=0),
            t_end=_horizon(t_end),
            replicates=_integer(replicates, 'model.replicates', minimum=1),
            output_dir=Path(overrides.get('output_dir') or self.output_dir),
        )
        self.logger.debug(f"Parsed {config.model} config: seed={config.seed}, t_end={config.t_end}")
        return config

    def _parse_sir(self, document: Mapping, noise: Mapping):
        params = self.normalize(document['params'] or {}, 'params')
        self.validate(params, 'params', required_fields=SIR_REQUIRED, allowed_fields=SIR_PARAM_FIELDS)
        if 'tau' not in noise:
            raise ConfigurationError("noise.tau is mandatory for multistrain_sir (null disables noise)")
        tau = None if noise['tau'] is None else _real(noise['tau'], 'noise.tau')
        sir = SirParams(
            P=_integer(params['P'], 'params.P', minimum=1),
            beta=_real(params['beta'], 'params.beta'),
            omega=_real(params['omega'], 'params.omega'),
            alpha=_real(params['alpha'], 'params.alpha'),
            m=_real(params['m'], 'params.m'),
            r=_real(params['r'], 'params.r'),
            gamma=_real(params.get('gamma', 0.0), 'params.gamma'),
            tau=tau,
        )

        init = self.normalize(document['init'] or {}, 'init')
        self.validate(init, 'init', allowed_fields=multistrain_sir.COMPARTMENTS)
        counts = {label: _integer(value, f"init.{label}") for label, value in init.items()}
        return sir, multistrain_sir.initial_state(sir, counts)

    def _parse_bivariate(self, document: Mapping, noise: Mapping):
        params = self.normalize(document['params'] or {}, 'params')
        self.validate(params, 'params', required_fields=BIVARIATE_PARAM_FIELDS,
                      allowed_fields=BIVARIATE_PARAM_FIELDS)
        init = self.normalize(document['init'] or {}, 'init')
        self.validate(init, 'init', required_fields=BIVARIATE_INIT_FIELDS,
                      allowed_fields=BIVARIATE_INIT_FIELDS)
        self.validate(noise, 'noise', required_fields=('tau',))
        if noise['tau'] is None:
            raise ConfigurationError("noise.tau must be positive for bivariate_death")

        death = BivariateDeathParams(
            y1_0=_integer(init['y1_0'], 'init.y1_0'),
            y2_0=_integer(init['y2_0'], 'init.y2_0'),
            delta=_real(params['delta'], 'params.delta'),
            tau=_real(noise['tau'], 'noise.tau'),
        )
        return death, bivariate_death.initial_state(death)
