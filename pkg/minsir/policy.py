"""
Underlay power policy at the secondary transmitter and the ergodic multicast rate of the
secondary receivers, both driven by the Weibull law of the minimum SIR.
"""
import logging
import math
from enum import Enum
from typing import Optional, Union

from scipy import integrate

from .evt import asymptotic_min_law, weibull_min_cdf
from .exceptions import InvalidParam, QuadratureFailure, ValidationError
from .models import PowerPolicyProblem, RateProblem, PowerAllocation, WeibullMinLaw, \
    TruncationControl
from .sir import SIR_CONTROL, sir_ccdf


__all__ = ['asymptotic_outage', 'secondary_power_plus', 'optimal_secondary_power',
           'allocate_power', 'effective_secondary_power', 'expected_log_rate',
           'ergodic_multicast_rate', 'exact_ergodic_rate', 'Direction', 'SUMMARY_TABLE',
           'expected_direction', 'observation_monotonicity_check']

logger = logging.getLogger(__name__)

RATE_ABS_TOL = 1e-8


def asymptotic_outage(problem: PowerPolicyProblem, p_s: float, ctl: TruncationControl = SIR_CONTROL,
                      law: Optional[WeibullMinLaw] = None) -> float:
    """
    Outage of the weakest of the M primary receivers when the SU-Tx sends at p_s,
    1 - exp(-(gamma0 p_s / (P_p a_M))^mu_p).
    :param problem: Power policy problem
    :param p_s:     Secondary power, linear
    :param ctl:     Truncation control
    :param law:     Precomputed minimum law of the primary link, optional
    :return:        float in [0, 1]
    """
    if p_s < 0:
        raise InvalidParam(f'`p_s` must be nonnegative, got {p_s}.')
    law = law or asymptotic_min_law(problem.primary_model, problem.m_users, ctl)
    return weibull_min_cdf(law, problem.gamma0 * p_s / problem.p_primary)


def _power_plus(problem: PowerPolicyProblem, a_m: float) -> float:
    mu_p = problem.primary_model.signal.mu
    return problem.p_primary * a_m / problem.gamma0 * (-math.log1p(-problem.p0)) ** (1 / mu_p)


def secondary_power_plus(problem: PowerPolicyProblem, ctl: TruncationControl = SIR_CONTROL) -> float:
    """Largest SU-Tx power that keeps the asymptotic primary outage at p0, ignoring the cap."""
    law = asymptotic_min_law(problem.primary_model, problem.m_users, ctl)
    return _power_plus(problem, law.scale)


def optimal_secondary_power(problem: PowerPolicyProblem, ctl: TruncationControl = SIR_CONTROL) -> float:
    """
    min(P_s+, ps_max)
    :param problem: Power policy problem
    :param ctl:     Truncation control
    :return:        float
    """
    return min(secondary_power_plus(problem, ctl), problem.ps_max)


def allocate_power(problem: PowerPolicyProblem, ctl: TruncationControl = SIR_CONTROL) -> PowerAllocation:
    """
    Full record of the policy: a_M, the uncapped and capped powers, and the asymptotic
    primary outage at the power actually used.
    :param problem: Power policy problem
    :param ctl:     Truncation control
    :return:        PowerAllocation
    """
    law = asymptotic_min_law(problem.primary_model, problem.m_users, ctl)
    plus = _power_plus(problem, law.scale)
    bar = min(plus, problem.ps_max)
    alloc = PowerAllocation(a_m=law.scale, ps_plus=plus, ps_bar=bar, capped=plus > problem.ps_max,
                            asymptotic_outage=asymptotic_outage(problem, bar, ctl, law))
    logger.debug('power policy: %s', alloc)
    return alloc


def effective_secondary_power(problem: RateProblem, ctl: TruncationControl = SIR_CONTROL) -> float:
    """P_s of a rate problem, either given or the policy's optimal power."""
    if problem.p_secondary is not None:
        return problem.p_secondary
    return optimal_secondary_power(problem.policy, ctl)


def expected_log_rate(law: WeibullMinLaw, snr_scale: float) -> float:
    """
    E[log2(1 + c X)] for X under the Weibull law, with x = a (-ln u)^(1/shape) mapping the
    half line onto u in (0, 1).
    :param law:         Weibull minimum law
    :param snr_scale:   c = P_s / P_p
    :return:            float, bits/s/Hz
    """
    if snr_scale < 0:
        raise InvalidParam(f'`snr_scale` must be nonnegative, got {snr_scale}.')
    if snr_scale == 0:
        return 0.0
    ca, inv_shape = snr_scale * law.scale, 1 / law.shape

    def integrand(u: float) -> float:
        return math.log2(1 + ca * (-math.log(u)) ** inv_shape) if 0 < u < 1 else 0.0

    out = integrate.quad(integrand, 0, 1, epsabs=RATE_ABS_TOL, epsrel=0, limit=200, full_output=1)
    val, err = out[0], out[1]
    logger.debug('rate quadrature c a=%.6g: %.12g (err %.2g, %d evals)', ca, val, err,
                 out[2]['neval'])
    if err > RATE_ABS_TOL / 2:
        logger.warning('rate quadrature c a=%.6g has error estimate %.3g', ca, err)
    if len(out) > 3 or err > RATE_ABS_TOL:
        raise QuadratureFailure(f'Rate quadrature reached error {err:.3g} above {RATE_ABS_TOL}.')
    return max(val, 0.0)


def ergodic_multicast_rate(problem: RateProblem, ctl: TruncationControl = SIR_CONTROL) -> float:
    """
    Asymptotic ergodic multicast rate C_sec, the total over the L receivers, of the weakest
    secondary receiver's SIR P_s g / (P_p beta).
    :param problem: Rate problem, l_users >= 2
    :param ctl:     Truncation control
    :return:        float, bits/s/Hz
    """
    c = effective_secondary_power(problem, ctl) / problem.p_primary
    if c == 0:
        return 0.0
    law = asymptotic_min_law(problem.secondary_model, problem.l_users, ctl)
    return problem.l_users * expected_log_rate(law, c)


def exact_ergodic_rate(problem: RateProblem, ctl: TruncationControl = SIR_CONTROL) -> float:
    """
    C_sec under the exact law of the minimum. Integrating by parts,
    E[log2(1 + c Z)] = int c / ((1 + c z) ln 2) (1 - F(z))^L dz.
    :param problem: Rate problem, any l_users
    :param ctl:     Truncation control
    :return:        float, bits/s/Hz
    """
    c = effective_secondary_power(problem, ctl) / problem.p_primary
    if c == 0:
        return 0.0
    model, l_users = problem.secondary_model, problem.l_users

    def integrand(z: float) -> float:
        return c / ((1 + c * z) * math.log(2)) * sir_ccdf(model, z, ctl) ** l_users

    val, err = integrate.quad(integrand, 0, math.inf, epsabs=1e-7, epsrel=1e-7, limit=200)
    if err > 0.5e-6:
        logger.warning('exact rate quadrature has error estimate %.3g', err)
    if err > 1e-6:
        raise QuadratureFailure(f'Exact rate quadrature has error estimate {err:.3g}.')
    return l_users * val


class Direction(str, Enum):
    UP = 'up'
    DOWN = 'down'
    FLAT = 'flat'


# (P_bar_s, C_sec / L) after an increase of the parameter. Rows keyed by a 2-tuple depend on
# the sign of m - mu of the link the parameter belongs to.
SUMMARY_TABLE: dict = {
    'p_primary': (Direction.UP, Direction.FLAT),
    'p0': (Direction.UP, Direction.UP),
    'gamma0': (Direction.DOWN, Direction.DOWN),
    'm_users': (Direction.DOWN, Direction.DOWN),
    'l_users': (Direction.FLAT, Direction.DOWN),
    ('kappa_p', '+'): (Direction.UP, Direction.UP),
    ('kappa_p', '-'): (Direction.DOWN, Direction.DOWN),
    'mu_p': (Direction.UP, Direction.UP),
    'm_p': (Direction.UP, Direction.UP),
    ('kappa_ps', '+'): (Direction.DOWN, Direction.DOWN),
    ('kappa_ps', '-'): (Direction.UP, Direction.UP),
    'mu_ps': (Direction.DOWN, Direction.DOWN),
    'm_ps': (Direction.DOWN, Direction.DOWN),
    ('kappa_s', '+'): (Direction.FLAT, Direction.UP),
    ('kappa_s', '-'): (Direction.FLAT, Direction.DOWN),
    'mu_s': (Direction.FLAT, Direction.UP),
    'm_s': (Direction.FLAT, Direction.UP),
    ('kappa_sp', '+'): (Direction.FLAT, Direction.DOWN),
    ('kappa_sp', '-'): (Direction.FLAT, Direction.UP),
    'mu_sp': (Direction.FLAT, Direction.DOWN),
    'm_sp': (Direction.FLAT, Direction.DOWN),
}

# parameter name -> (problem field, 'signal' or 'interferer', link field)
_LINK_PARAMS = {
    'kappa_p': ('primary_model', 'signal', 'kappa'),
    'mu_p': ('primary_model', 'signal', 'mu'),
    'm_p': ('primary_model', 'signal', 'm'),
    'kappa_ps': ('primary_model', 'interferer', 'kappa'),
    'mu_ps': ('primary_model', 'interferer', 'mu'),
    'm_ps': ('primary_model', 'interferer', 'm'),
    'kappa_s': ('secondary_model', 'signal', 'kappa'),
    'mu_s': ('secondary_model', 'signal', 'mu'),
    'm_s': ('secondary_model', 'signal', 'm'),
    'kappa_sp': ('secondary_model', 'interferer', 'kappa'),
    'mu_sp': ('secondary_model', 'interferer', 'mu'),
    'm_sp': ('secondary_model', 'interferer', 'm'),
}
_POLICY_SCALARS = ('p_primary', 'p0', 'gamma0', 'm_users')
_INTEGER_PARAMS = ('m_users', 'l_users')
FLAT_RTOL = 1e-6

Problem = Union[PowerPolicyProblem, RateProblem]


def _policy_of(base: Problem) -> Optional[PowerPolicyProblem]:
    return base if isinstance(base, PowerPolicyProblem) else base.policy


def _link(base: Problem, name: str):
    field, side, attr = _LINK_PARAMS[name]
    holder = _policy_of(base) if field == 'primary_model' else base
    if holder is None or not hasattr(holder, field):
        raise ValidationError(f'`{name}` is not a parameter of this problem.')
    model = getattr(holder, field)
    return model.signal if side == 'signal' else model.interferers[0]


def expected_direction(base: Problem, parameter_name: str) -> Direction:
    """
    Looks up the direction of change for an increase of the parameter, branching kappa rows
    on the sign of m - mu. When m == mu the link law does not depend on kappa at all.
    :param base:            Problem the parameter is increased in
    :param parameter_name:  Row of SUMMARY_TABLE
    :return:                Direction
    """
    column = 0 if isinstance(base, PowerPolicyProblem) else 1
    if parameter_name in SUMMARY_TABLE:
        return SUMMARY_TABLE[parameter_name][column]
    if (parameter_name, '+') not in SUMMARY_TABLE:
        choices = sorted({k if isinstance(k, str) else k[0] for k in SUMMARY_TABLE})
        raise ValidationError(choices=choices)
    link = _link(base, parameter_name)
    if link.m == link.mu:
        return Direction.FLAT
    return SUMMARY_TABLE[(parameter_name, '+' if link.m > link.mu else '-')][column]


def _perturbed_value(current, parameter_name: str, new_value):
    if new_value is not None:
        return new_value
    if parameter_name in _INTEGER_PARAMS:
        return current + 1
    if parameter_name == 'p0':
        return current + (1 - current) / 2
    if current == 0:
        return 1.0
    return current * 1.5


def _perturb(base: Problem, parameter_name: str, new_value) -> Problem:
    if parameter_name in _LINK_PARAMS:
        field, side, attr = _LINK_PARAMS[parameter_name]
        link = _link(base, parameter_name)
        link = link.with_(**{attr: _perturbed_value(getattr(link, attr), parameter_name, new_value)})
        holder = _policy_of(base) if field == 'primary_model' else base
        model = getattr(holder, field)
        model = model.with_(signal=link) if side == 'signal' else model.with_(interferers=(link,))
        holder = holder.model_copy(update={field: model})
        if field == 'primary_model' and isinstance(base, RateProblem):
            return base.model_copy(update={'policy': holder})
        return holder

    if parameter_name in _POLICY_SCALARS:
        policy = _policy_of(base)
        if policy is None:
            raise ValidationError(f'`{parameter_name}` needs a power policy in the problem.')
        value = _perturbed_value(getattr(policy, parameter_name), parameter_name, new_value)
        policy = PowerPolicyProblem(**{**policy.model_dump(), parameter_name: value})
        if isinstance(base, PowerPolicyProblem):
            return policy
        update = {'policy': policy}
        if parameter_name == 'p_primary':
            update['p_primary'] = value
        return RateProblem(**{**base.model_dump(), **update})

    if parameter_name == 'l_users':
        if isinstance(base, PowerPolicyProblem):
            return base
        return base.model_copy(update={'l_users': _perturbed_value(base.l_users, 'l_users', new_value)})

    raise ValidationError(choices=sorted({k if isinstance(k, str) else k[0] for k in SUMMARY_TABLE}))


def _quantity(problem: Problem, ctl: TruncationControl) -> float:
    if isinstance(problem, PowerPolicyProblem):
        return secondary_power_plus(problem, ctl)
    return ergodic_multicast_rate(problem, ctl) / problem.l_users


def observation_monotonicity_check(base: Problem, parameter_name: str,
                                   direction: Optional[Direction] = None,
                                   ctl: TruncationControl = SIR_CONTROL,
                                   new_value: Optional[float] = None) -> bool:
    """
    Increases one system parameter and checks the direction in which P_s+ (for a power
    problem, uncapped so that ps_max never flattens it) or C_sec / L (for a rate problem) moves. Continuous parameters are scaled by 1.5
    (kappa = 0 goes to 1, p0 moves halfway to 1) and integer ones get +1 unless `new_value`
    is given.
    :param base:            PowerPolicyProblem or RateProblem
    :param parameter_name:  Row of SUMMARY_TABLE, e.g. 'mu_ps' or 'kappa_s'
    :param direction:       Expected direction, looked up in SUMMARY_TABLE if omitted
    :param ctl:             Truncation control
    :param new_value:       Explicit value after the increase
    :return:                bool
    """
    expected = direction or expected_direction(base, parameter_name)
    before = _quantity(base, ctl)
    after = _quantity(_perturb(base, parameter_name, new_value), ctl)
    if abs(after - before) <= FLAT_RTOL * max(abs(before), abs(after)):
        observed = Direction.FLAT
    else:
        observed = Direction.UP if after > before else Direction.DOWN
    logger.info('%s: %.10g -> %.10g, %s (expected %s)', parameter_name, before, after,
                observed.value, expected.value)
    return observed == expected
