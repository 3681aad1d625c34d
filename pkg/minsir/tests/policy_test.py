import math
import pytest
import pydantic
from scipy.special import exp1
from minsir import asymptotic_outage, secondary_power_plus, optimal_secondary_power, allocate_power, \
    effective_secondary_power, expected_log_rate, ergodic_multicast_rate, exact_ergodic_rate, \
    observation_monotonicity_check, expected_direction, Direction, SUMMARY_TABLE, WeibullMinLaw, \
    PowerPolicyProblem, RateProblem, PRESETS, InvalidParam, ValidationError
from .conftest import pair



@pytest.fixture
def rayleigh_policy(rayleigh):
    return PowerPolicyProblem(p_primary=1, gamma0=0.021, p0=0.1, ps_max=100, m_users=20,
                              primary_model=rayleigh)


def test_power_plus_rayleigh(rayleigh_policy):
    expected = (1 / 19) * -math.log(0.9) / 0.021
    assert secondary_power_plus(rayleigh_policy) == pytest.approx(expected, rel=1e-8)
    assert optimal_secondary_power(rayleigh_policy) == pytest.approx(expected, rel=1e-8)


def test_power_plus_exponential_primary(rayleigh_policy):
    problem = rayleigh_policy.model_copy(update={'p0': 1 - math.exp(-1), 'p_primary': 3.0})
    assert secondary_power_plus(problem) == pytest.approx(3.0 / 19 / 0.021, rel=1e-8)


def test_power_capped(rayleigh_policy):
    problem = rayleigh_policy.model_copy(update={'ps_max': 0.1})
    alloc = allocate_power(problem)
    assert alloc.capped
    assert alloc.ps_bar == 0.1
    assert alloc.ps_plus > 0.1
    assert alloc.asymptotic_outage < problem.p0
    assert optimal_secondary_power(problem) == 0.1


def test_outage_at_power_plus(policy):
    problem = policy(PRESETS['table3_case1'])
    alloc = allocate_power(problem)
    assert not alloc.capped
    assert alloc.ps_bar == alloc.ps_plus
    assert alloc.asymptotic_outage == pytest.approx(problem.p0, abs=1e-10)
    assert asymptotic_outage(problem, alloc.ps_plus) == pytest.approx(problem.p0, abs=1e-10)


def test_outage_rayleigh(rayleigh_policy):
    problem = rayleigh_policy.model_copy(update={'gamma0': 1.0})
    assert asymptotic_outage(problem, 1 / 19) == pytest.approx(1 - math.exp(-1), rel=1e-8)
    assert asymptotic_outage(problem, 0) == 0.0
    with pytest.raises(InvalidParam):
        asymptotic_outage(problem, -1)


def test_outage_increasing_in_power(policy):
    problem = policy(PRESETS['table3_case1'])
    values = [asymptotic_outage(problem, p) for p in (0.1, 1, 5, 20, 100)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_log_rate_exponential():
    # E[ln(1 + c X)] = e^(1/(c a)) E1(1/(c a)) for X exponential with mean a
    law = WeibullMinLaw(shape=1, scale=1 / 19, k_users=20)
    expected = math.exp(19) * exp1(19) / math.log(2)
    assert expected_log_rate(law, 1.0) == pytest.approx(expected, rel=1e-6)


def test_log_rate_zero_power():
    law = WeibullMinLaw(shape=2, scale=0.3, k_users=10)
    assert expected_log_rate(law, 0) == 0.0
    with pytest.raises(InvalidParam):
        expected_log_rate(law, -1)


def test_log_rate_scale_ordering():
    # same shape, larger scale, larger rate
    low = expected_log_rate(WeibullMinLaw(shape=2, scale=0.1, k_users=10), 4.0)
    high = expected_log_rate(WeibullMinLaw(shape=2, scale=0.2, k_users=10), 4.0)
    assert high > low > 0


def test_ergodic_rate_fixed_power():
    model = PRESETS['fig11_case2']
    problem = RateProblem(l_users=10, secondary_model=model, p_primary=2.0, p_secondary=2.0)
    total = ergodic_multicast_rate(problem)
    assert total > 0
    assert total / 10 == pytest.approx(exact_ergodic_rate(problem) / 10, abs=0.02)


def test_ergodic_rate_zero_power():
    problem = RateProblem(l_users=10, secondary_model=PRESETS['fig11_case2'], p_primary=2.0,
                          p_secondary=0)
    assert ergodic_multicast_rate(problem) == 0.0
    assert exact_ergodic_rate(problem) == 0.0


def test_rate_per_user_decreases_with_users():
    model = PRESETS['fig11_case2']
    rates = [ergodic_multicast_rate(RateProblem(l_users=l, secondary_model=model, p_primary=1.0,
                                                p_secondary=5.0)) / l for l in (2, 5, 10, 20)]
    assert all(b <= a for a, b in zip(rates, rates[1:]))


def test_rate_from_policy(policy):
    pol = policy(PRESETS['table3_case1'])
    problem = RateProblem(l_users=10, secondary_model=PRESETS['fig11_case2'], policy=pol)
    assert problem.p_primary == pol.p_primary
    assert effective_secondary_power(problem) == pytest.approx(optimal_secondary_power(pol),
                                                               rel=1e-12)


def test_rate_problem_validation(policy, table2):
    pol = policy(PRESETS['table3_case1'])
    model = PRESETS['fig11_case2']
    with pytest.raises(pydantic.ValidationError):
        RateProblem(l_users=10, secondary_model=model, policy=pol, p_secondary=1.0)
    with pytest.raises(pydantic.ValidationError):
        RateProblem(l_users=10, secondary_model=model, p_primary=1.0)
    with pytest.raises(pydantic.ValidationError):
        RateProblem(l_users=10, secondary_model=table2[2], p_primary=1.0, p_secondary=1.0)
    with pytest.raises(pydantic.ValidationError):
        policy(table2[1])


param = [('p_primary', Direction.UP), ('p0', Direction.UP), ('gamma0', Direction.DOWN),
         ('m_users', Direction.DOWN), ('l_users', Direction.FLAT), ('mu_s', Direction.FLAT)]
@pytest.mark.parametrize('name, direction', param)
def test_expected_direction_power(policy, name, direction):
    assert expected_direction(policy(PRESETS['table3_case2']), name) == direction


def test_expected_direction_kappa_branches(policy):
    assert expected_direction(policy(PRESETS['table4_case3']), 'kappa_p') == Direction.UP
    assert expected_direction(policy(PRESETS['table4_case1']), 'kappa_p') == Direction.DOWN
    assert expected_direction(policy(PRESETS['table3_case2']), 'kappa_p') == Direction.FLAT


def test_expected_direction_unknown(policy):
    with pytest.raises(ValidationError):
        expected_direction(policy(PRESETS['table3_case2']), 'nu_p')


def test_summary_table_rows():
    names = {k if isinstance(k, str) else k[0] for k in SUMMARY_TABLE}
    for link in ('p', 'ps', 's', 'sp'):
        assert {f'kappa_{link}', f'mu_{link}', f'm_{link}'} <= names
    assert {'p_primary', 'p0', 'gamma0', 'm_users', 'l_users'} <= names


param = [('p_primary', None), ('p0', None), ('gamma0', None), ('m_users', None),
         ('l_users', None), ('mu_p', 2), ('m_p', None), ('mu_ps', 2), ('m_ps', 10)]
@pytest.mark.parametrize('name, new_value', param)
def test_monotonicity_power(policy, name, new_value):
    base = policy(PRESETS['table3_case2'])
    if name == 'm_p':
        base = policy(PRESETS['table3_case5'])
        new_value = 1.0
    assert observation_monotonicity_check(base, name, new_value=new_value)


param = [('kappa_p', (3, 1, 10), (2, 1, 1)), ('kappa_p', (3, 2, 1), (2, 1, 1)),
         ('kappa_p', (3, 1, 1), (2, 1, 1)), ('kappa_ps', (3, 1, 1), (2, 1, 2)),
         ('kappa_ps', (3, 1, 1), (2, 2, 1))]
@pytest.mark.parametrize('name, signal, interferer', param)
def test_monotonicity_power_kappa(policy, name, signal, interferer):
    assert observation_monotonicity_check(policy(pair(signal, interferer)), name)


param = ['p_primary', 'p0', 'gamma0', 'm_users']
@pytest.mark.parametrize('name', param)
def test_monotonicity_power_capped_base(rayleigh_policy, name):
    # P_s+ = 0.264 sits above ps_max, the capped power would read flat
    base = rayleigh_policy.model_copy(update={'ps_max': 0.1})
    assert optimal_secondary_power(base) == 0.1
    assert observation_monotonicity_check(base, name)


@pytest.fixture
def rate_base(policy):
    def make(signal=(3, 1, 1), interferer=(2, 1, 1)):
        return RateProblem(l_users=10, secondary_model=pair(signal, interferer),
                           policy=policy(PRESETS['table3_case2']))
    return make


param = [('l_users', None), ('p0', None), ('gamma0', None), ('m_users', None),
         ('p_primary', None), ('m_s', 10), ('mu_sp', 2), ('m_sp', 10), ('mu_ps', 2)]
@pytest.mark.parametrize('name, new_value', param)
def test_monotonicity_rate(rate_base, name, new_value):
    assert observation_monotonicity_check(rate_base(), name, new_value=new_value)


param = [2, 3]
@pytest.mark.parametrize('mu', param)
def test_monotonicity_rate_signal_mu(rate_base, mu):
    # without a dominant component the signal is Gamma(mu, 1 / mu)
    assert observation_monotonicity_check(rate_base(signal=(0, 1, 1)), 'mu_s', new_value=mu)


param = [('kappa_s', (3, 1, 10), (2, 1, 1)), ('kappa_s', (3, 2, 1), (2, 1, 1)),
         ('kappa_s', (3, 1, 1), (2, 1, 1)), ('kappa_sp', (3, 1, 1), (2, 1, 2)),
         ('kappa_sp', (3, 1, 1), (2, 2, 1))]
@pytest.mark.parametrize('name, signal, interferer', param)
def test_monotonicity_rate_kappa(rate_base, name, signal, interferer):
    assert observation_monotonicity_check(rate_base(signal, interferer), name)


def test_monotonicity_secondary_flat_for_power(policy):
    assert observation_monotonicity_check(policy(PRESETS['table3_case2']), 'l_users')


def test_monotonicity_missing_parameter(policy):
    with pytest.raises(ValidationError):
        observation_monotonicity_check(policy(PRESETS['table3_case2']), 'mu_s')
    fixed = RateProblem(l_users=10, secondary_model=PRESETS['fig11_case2'], p_primary=1.0,
                        p_secondary=1.0)
    with pytest.raises(ValidationError):
        observation_monotonicity_check(fixed, 'p0')


def test_monotonicity_explicit_direction(policy):
    base = policy(PRESETS['table3_case2'])
    assert not observation_monotonicity_check(base, 'p0', direction=Direction.DOWN)


@pytest.mark.slow
def test_monotonicity_heavy_interferer(policy):
    # mu_ps from 1 to 20, the slowest series in the tables
    assert observation_monotonicity_check(policy(PRESETS['table3_case2']), 'mu_ps', new_value=20)
