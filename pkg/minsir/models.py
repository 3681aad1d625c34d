from typing import Annotated, Optional, Any

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, field_validator, model_validator

from .utils import listify


__all__ = ['FrozenModel', 'TruncationControl', 'SeriesResult', 'KappaMuShadowedParams', 'SirModel',
           'GammaApprox', 'WeibullMinLaw', 'LinkPair', 'PowerPolicyProblem', 'RateProblem', 'McConfig',
           'PowerAllocation', 'OutageRateEstimate', 'ConvergenceReport']


class FrozenModel(BaseModel):
    """Shared config. Every domain record is immutable so it can be shared between threads."""
    model_config = ConfigDict(frozen=True, extra='forbid')


class TruncationControl(FrozenModel):
    """How far a hypergeometric series may be summed and when it counts as converged."""
    per_variable_cap: int = Field(60, ge=1)
    rel_tol: float = Field(1e-10, gt=0)
    abs_tol: float = Field(1e-14, gt=0)
    stagnation_layers: int = Field(3, ge=1)
    max_variables: int = Field(9, ge=1)

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


class SeriesResult(FrozenModel):
    value: float
    terms_used: int = Field(ge=0)
    tail_estimate: float = Field(ge=0)
    converged: bool


class KappaMuShadowedParams(FrozenModel):
    """
    One kappa-mu shadowed power link.
    kappa:      Dominant-to-scattered power ratio
    mu:         Number of multipath clusters
    m:          Shadowing severity of the dominant component
    mean_power: E[X] in linear units
    """
    kappa: float = Field(ge=0)
    mu: float = Field(gt=0)
    m: float = Field(gt=0)
    mean_power: float = Field(1.0, gt=0)

    @property
    def theta(self) -> float:
        return self.mean_power / (self.mu * (1 + self.kappa))

    @property
    def lam(self) -> float:
        return (self.mu * self.kappa + self.m) * self.mean_power \
               / (self.mu * (1 + self.kappa) * self.m)

    def with_(self, **kwargs) -> 'KappaMuShadowedParams':
        """Validated copy with some fields replaced."""
        return KappaMuShadowedParams(**{**self.model_dump(), **kwargs})


class SirModel(FrozenModel):
    """Desired link over the sum of N >= 1 independent interferer links."""
    signal: KappaMuShadowedParams
    interferers: tuple[KappaMuShadowedParams, ...] = Field(min_length=1)

    @field_validator('interferers', mode='before')
    @classmethod
    def single_to_tuple(cls, val):
        return tuple(listify(val))

    @property
    def n_interferers(self) -> int:
        return len(self.interferers)

    @property
    def interferer_mu_sum(self) -> float:
        return sum(i.mu for i in self.interferers)

    def with_(self, signal: Optional[KappaMuShadowedParams] = None,
              interferers: Optional[tuple] = None) -> 'SirModel':
        return SirModel(signal=signal or self.signal,
                        interferers=interferers if interferers is not None else self.interferers)


class GammaApprox(FrozenModel):
    shape: float = Field(gt=0)
    scale: float = Field(gt=0)

    @property
    def mean(self) -> float:
        return self.shape * self.scale


class WeibullMinLaw(FrozenModel):
    """Limit law of the minimum of K i.i.d. SIRs: 1 - exp(-(z/scale)**shape)."""
    shape: float = Field(gt=0)
    scale: float = Field(gt=0)
    k_users: int = Field(ge=1)


def _single_interferer(model: SirModel) -> SirModel:
    if model.n_interferers != 1:
        raise ValueError('The cognitive-radio links take exactly one interferer.')
    return model


LinkPair = Annotated[SirModel, AfterValidator(_single_interferer)]


class PowerPolicyProblem(FrozenModel):
    """
    Underlay power policy at the SU-Tx.
    primary_model:  PU-Tx -> PU-Rx over SU-Tx -> PU-Rx
    """
    p_primary: float = Field(gt=0)
    gamma0: float = Field(gt=0)
    p0: float = Field(gt=0, lt=1)
    ps_max: float = Field(gt=0)
    m_users: int = Field(ge=1)
    primary_model: LinkPair


class RateProblem(FrozenModel):
    """
    Multicast from the SU-Tx to L receivers. The SU-Tx power is either given or taken from
    a power policy problem, in which case P_p is the policy's as well.
    secondary_model:    SU-Tx -> SU-Rx over PU-Tx -> SU-Rx
    """
    l_users: int = Field(ge=1)
    secondary_model: LinkPair
    p_primary: float = Field(gt=0)
    p_secondary: Optional[float] = Field(None, ge=0)
    policy: Optional[PowerPolicyProblem] = None

    @model_validator(mode='before')
    @classmethod
    def primary_power_from_policy(cls, data: Any):
        if isinstance(data, dict) and data.get('policy') is not None and data.get('p_primary') is None:
            policy = data['policy']
            data = {**data, 'p_primary': policy['p_primary'] if isinstance(policy, dict)
                    else policy.p_primary}
        return data

    @model_validator(mode='after')
    def one_power_source(self):
        if (self.p_secondary is None) == (self.policy is None):
            raise ValueError('Give exactly one of `p_secondary` or `policy`.')
        if self.policy is not None and self.policy.p_primary != self.p_primary:
            raise ValueError('`p_primary` must match the policy it is taken from.')
        return self


class McConfig(FrozenModel):
    """
    Monte-Carlo settings. Trials are drawn in fixed-size blocks, each from its own stream
    keyed by (seed, block index), so results do not depend on parallel_chunks.
    """
    seed: int = Field(0, ge=0, lt=2 ** 64)
    trials: int = Field(100_000, ge=1)
    parallel_chunks: int = Field(1, ge=1)
    block_size: int = Field(1 << 14, ge=1)


class PowerAllocation(FrozenModel):
    a_m: float
    ps_plus: float
    ps_bar: float
    capped: bool
    asymptotic_outage: float


class OutageRateEstimate(FrozenModel):
    primary_outage: float
    secondary_outage: float
    rate_per_user: float
    trials: int


class ConvergenceReport(FrozenModel):
    k_values: tuple[int, ...]
    errors: tuple[float, ...]
    slope: float
