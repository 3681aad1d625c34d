"""
Run configuration of the command line, read from TOML. Powers are given in dB here and
converted to linear units before they reach the library. A link block either names one of
PRESETS or lists its parameters:

    scenario = "fig2"

    [primary]
    preset = "fig2_primary"

    [secondary]
    signal = {kappa = 2, mu = 2, m = 1}
    interferer = {kappa = 3, mu = 3, m = 1}

    [system]
    p_primary_db = 14
    r0 = 0.03

    [sweep]
    axis = "p0"
    values = [0.02, 0.05, 0.1, 0.15, 0.2]

    [montecarlo]
    seed = 7
    trials = 100000
"""
import logging
import tomllib
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import Field, field_validator, model_validator

from .exceptions import ConfigError, ValidationError
from .models import FrozenModel, KappaMuShadowedParams, SirModel, McConfig, PowerPolicyProblem, \
    RateProblem
from .utils import db_to_linear, rate_to_sir


__all__ = ['PRESETS', 'preset', 'SirSpec', 'LinkPairSpec', 'SystemSpec', 'SweepSpec',
           'MonteCarloSpec', 'RunConfig', 'load_config']

logger = logging.getLogger(__name__)


def _link(kappa: float, mu: float, m: float) -> KappaMuShadowedParams:
    return KappaMuShadowedParams(kappa=kappa, mu=mu, m=m)


def _pair(signal: tuple, interferer: tuple) -> SirModel:
    return SirModel(signal=_link(*signal), interferers=(_link(*interferer),))


# Unit mean powers throughout. (kappa, mu, m) of the desired link, then of the interferer(s).
PRESETS: dict[str, SirModel] = {
    'table2_case1': SirModel(signal=_link(2, 3, 1), interferers=[_link(2, 2, 1)] * 3),
    'table2_case2': SirModel(signal=_link(2, 3, 1), interferers=[_link(2, 2, 1), _link(2, 1, 1)]),
    'table2_case3': _pair((2, 2, 1), (2, 1, 1)),

    'table3_case1': _pair((3, 2, 1), (2, 1, 1)),
    'table3_case2': _pair((3, 1, 1), (2, 1, 1)),
    'table3_case3': _pair((3, 1, 1), (2, 20, 1)),
    'table3_case4': _pair((3, 1, 1), (2, 1, 10)),
    'table3_case5': _pair((3, 1, 0.1), (2, 1, 1)),

    'table4_case1': _pair((3, 2, 1), (2, 1, 1)),
    'table4_case2': _pair((10, 2, 1), (2, 1, 1)),
    'table4_case3': _pair((3, 1, 10), (2, 1, 2)),
    'table4_case4': _pair((3, 1, 10), (10, 1, 2)),
    'table4_case5': _pair((10, 1, 2), (2, 1, 1)),
    'table4_case6': _pair((3, 1, 2), (2, 1, 1)),
    'table4_case7': _pair((3, 1, 1), (30, 2, 1)),
    'table4_case8': _pair((3, 1, 1), (2, 2, 1)),

    'fig2_primary': _pair((3, 2, 1), (2, 2, 1)),
    'fig2_secondary': _pair((2, 2, 1), (3, 3, 1)),

    'table5_fig10_primary': _pair((2, 3, 1), (2, 2, 1)),
    'table5_fig10_secondary': _pair((2, 2, 1), (3, 3, 1)),
    'table5_fig12_primary': _pair((3, 2, 1), (2, 1, 10)),
    'table5_fig13_primary': _pair((3, 2, 1), (2, 1, 10)),

    'fig11_case1': _pair((3, 1, 10), (2, 1, 1)),
    'fig11_case2': _pair((3, 1, 1), (2, 1, 1)),
    'fig11_case3': _pair((3, 1, 1), (2, 2, 1)),
    'fig11_case4': _pair((3, 1, 1), (2, 1, 10)),
}


def preset(name: str) -> SirModel:
    """
    Looks up a named parameter set.
    :param name:    Key of PRESETS
    :return:        SirModel
    """
    try:
        return PRESETS[name]
    except KeyError:
        raise ValidationError(choices=sorted(PRESETS))


class SirSpec(FrozenModel):
    """Desired link and any number of interferers, or a preset."""
    preset: Optional[str] = None
    signal: Optional[KappaMuShadowedParams] = None
    interferers: Optional[list[KappaMuShadowedParams]] = None

    @model_validator(mode='after')
    def preset_or_links(self):
        if (self.preset is None) == (self.signal is None):
            raise ValueError('Give either `preset` or `signal` with `interferers`.')
        if self.signal is not None and not self.interferers:
            raise ValueError('`interferers` must list at least one link.')
        return self

    @property
    def model(self) -> SirModel:
        if self.preset is not None:
            return preset(self.preset)
        return SirModel(signal=self.signal, interferers=self.interferers)


class LinkPairSpec(SirSpec):
    """Desired link and exactly one interferer, or a preset."""
    interferer: Optional[KappaMuShadowedParams] = None

    @model_validator(mode='before')
    @classmethod
    def single_interferer(cls, data):
        if isinstance(data, dict) and 'interferer' in data:
            data = {**data, 'interferers': [data['interferer']]}
        return data

    @property
    def model(self) -> SirModel:
        model = super().model
        if model.n_interferers != 1:
            raise ConfigError(f'A link pair takes one interferer, got {model.n_interferers}.')
        return model


class SystemSpec(FrozenModel):
    """System constants. Powers in dB; gamma0 overrides r0 when given."""
    p_primary_db: float = 14.0
    ps_max_db: float = 20.0
    p_secondary_db: Optional[float] = None
    r0: float = Field(0.03, gt=0)
    gamma0: Optional[float] = Field(None, gt=0)
    p0: float = Field(0.1, gt=0, lt=1)
    m_users: int = Field(10, ge=1)
    l_users: int = Field(10, ge=1)
    k_users: int = Field(20, ge=1)
    secondary_threshold: Optional[float] = Field(None, gt=0)

    @property
    def p_primary(self) -> float:
        return db_to_linear(self.p_primary_db)

    @property
    def ps_max(self) -> float:
        return db_to_linear(self.ps_max_db)

    @property
    def p_secondary(self) -> Optional[float]:
        if self.p_secondary_db is None:
            return None
        return db_to_linear(self.p_secondary_db)

    @property
    def target_sir(self) -> float:
        return self.gamma0 if self.gamma0 is not None else rate_to_sir(self.r0)


Axis = Literal['z', 'p0', 'p_primary_db', 'p_secondary_db', 'm_users', 'l_users']
_AXES = {
    'min-cdf': ('z',),
    'power': ('p0', 'p_primary_db', 'm_users'),
    'rate': ('p0', 'p_primary_db', 'p_secondary_db', 'm_users', 'l_users'),
    'simulate': ('p0', 'p_primary_db', 'm_users', 'l_users'),
}


class SweepSpec(FrozenModel):
    axis: Axis
    values: list[float] = Field(min_length=1)

    @field_validator('values')
    @classmethod
    def sorted_grid(cls, val):
        if any(b < a for a, b in zip(val, val[1:])):
            raise ValueError('Sweep values must be sorted ascending.')
        return val


class MonteCarloSpec(FrozenModel):
    enabled: bool = True
    seed: int = Field(0, ge=0, lt=2 ** 64)
    trials: int = Field(100_000, ge=1)
    parallel_chunks: int = Field(1, ge=1)


class RunConfig(FrozenModel):
    scenario: str = 'run'
    sir: Optional[SirSpec] = None
    primary: Optional[LinkPairSpec] = None
    secondary: Optional[LinkPairSpec] = None
    system: SystemSpec = SystemSpec()
    sweep: SweepSpec
    montecarlo: MonteCarloSpec = MonteCarloSpec()
    output: Optional[str] = None

    def require(self, command: str):
        """
        Checks that the config holds what a subcommand needs.
        :param command: One of min-cdf, power, rate or simulate
        """
        if self.sweep.axis not in _AXES[command]:
            raise ConfigError(f'`{command}` sweeps over {", ".join(_AXES[command])}, '
                              f'not {self.sweep.axis}.')
        needed = {'min-cdf': ('sir',), 'power': ('primary',),
                  'rate': ('secondary',) if self._fixed_power(command) else ('primary', 'secondary'),
                  'simulate': ('primary', 'secondary')}[command]
        for block in needed:
            if getattr(self, block) is None:
                raise ConfigError(f'`{command}` needs a [{block}] block.')
        if command == 'min-cdf' and self.sweep.values[0] < 0:
            raise ConfigError('The z grid must be nonnegative.')

    def _fixed_power(self, command: str) -> bool:
        return command == 'rate' and (self.system.p_secondary_db is not None
                                      or self.sweep.axis == 'p_secondary_db')

    def system_at(self, value: float) -> SystemSpec:
        """System constants with the sweep axis set to one grid value."""
        if self.sweep.axis == 'z':
            return self.system
        if self.sweep.axis in ('m_users', 'l_users'):
            value = int(value)
        return SystemSpec(**{**self.system.model_dump(), self.sweep.axis: value})

    def policy_problem(self, system: SystemSpec) -> PowerPolicyProblem:
        return PowerPolicyProblem(p_primary=system.p_primary, gamma0=system.target_sir,
                                  p0=system.p0, ps_max=system.ps_max, m_users=system.m_users,
                                  primary_model=self.primary.model)

    def rate_problem(self, system: SystemSpec) -> RateProblem:
        if system.p_secondary is not None:
            return RateProblem(l_users=system.l_users, secondary_model=self.secondary.model,
                               p_primary=system.p_primary, p_secondary=system.p_secondary)
        return RateProblem(l_users=system.l_users, secondary_model=self.secondary.model,
                           policy=self.policy_problem(system))

    def mc_config(self, seed: Optional[int] = None, trials: Optional[int] = None) -> McConfig:
        return McConfig(seed=self.montecarlo.seed if seed is None else seed,
                        trials=self.montecarlo.trials if trials is None else trials,
                        parallel_chunks=self.montecarlo.parallel_chunks)


def load_config(path: Union[str, Path]) -> RunConfig:
    """
    Reads and validates a TOML run configuration.
    :param path:    Path to the file
    :return:        RunConfig
    """
    try:
        with open(path, 'rb') as f:
            data = tomllib.load(f)
    except OSError as e:
        raise ConfigError(f'Cannot read {path}: {e.strerror}.')
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f'{path} is not valid TOML: {e}.')
    cfg = RunConfig.model_validate(data)
    logger.debug('loaded %s: scenario %s', path, cfg.scenario)
    return cfg
