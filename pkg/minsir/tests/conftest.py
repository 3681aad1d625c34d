import pytest
from minsir import KappaMuShadowedParams, SirModel, PRESETS, PowerPolicyProblem, TruncationControl, \
    db_to_linear, rate_to_sir



def link(kappa, mu, m, mean_power=1.0):
    return KappaMuShadowedParams(kappa=kappa, mu=mu, m=m, mean_power=mean_power)


def pair(signal, interferer):
    return SirModel(signal=link(*signal), interferers=[link(*interferer)])


@pytest.fixture(scope='session')
def rayleigh():
    return pair((0, 1, 1), (0, 1, 1))


@pytest.fixture(scope='session')
def control():
    return TruncationControl()


@pytest.fixture(scope='session')
def wide_control():
    return TruncationControl(per_variable_cap=500)


@pytest.fixture(scope='session')
def table2():
    return {i: PRESETS[f'table2_case{i}'] for i in (1, 2, 3)}


@pytest.fixture(scope='session')
def policy():
    """Primary-side problems at 14 dB and R0 = 0.03, never capped."""
    def make(primary_model, **kwargs):
        data = dict(p_primary=db_to_linear(14), gamma0=rate_to_sir(0.03), p0=0.1, ps_max=1e9,
                    m_users=20, primary_model=primary_model)
        return PowerPolicyProblem(**{**data, **kwargs})
    return make
